"""Command-line interface: output rows, exit codes, determinism."""

import csv
import io

import pytest

from switchlp import cli, lpcert


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


class TestBound:
    def test_clos_snb(self, capsys):
        code, out, _ = run(capsys, "bound", "clos-snb", "--n", "4")
        assert code == 0
        got = rows(out)
        assert got[0] == ["kind", "n", "m_sufficient"]
        assert got[1] == ["clos-snb", "4", "7"]

    def test_multilog(self, capsys):
        code, out, _ = run(capsys, "bound", "multilog", "--d", "2",
                           "--n", "4", "--t", "1", "--f", "16")
        assert code == 0
        got = rows(out)[1]
        assert got[6] == "6"
        assert got[7] == "C2"

    def test_multilog_crosstalk(self, capsys):
        code, out, _ = run(capsys, "bound", "multilog", "--d", "2",
                           "--n", "4", "--t", "1", "--f", "16",
                           "--mode", "crosstalk")
        assert code == 0
        assert rows(out)[1][6] == "12"

    def test_multirate_scheme(self, capsys):
        code, out, _ = run(capsys, "bound", "clos-multirate", "--n", "8")
        assert code == 0
        assert rows(out)[1][3] == "46"

    def test_t_out_of_range_is_usage_error(self, capsys):
        code, _, err = run(capsys, "bound", "multilog", "--d", "2",
                           "--n", "4", "--t", "5", "--f", "1")
        assert code == 2
        assert "error:" in err

    def test_missing_argument(self, capsys):
        code, _, err = run(capsys, "bound", "clos-snb")
        assert code == 2
        assert "--n" in err

    def test_config_file_fills_gaps(self, capsys, tmp_path):
        cfg = tmp_path / "net.cfg"
        cfg.write_text("# defaults\nn = 4\nt = 1\nf = 16\n")
        code, out, _ = run(capsys, "bound", "multilog", "--d", "2",
                           "--config", str(cfg))
        assert code == 0
        assert rows(out)[1][6] == "6"

    def test_bad_config_line(self, capsys, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("just words\n")
        code, _, err = run(capsys, "bound", "clos-snb", "--config", str(cfg))
        assert code == 2
        assert "key = value" in err


class TestSimulate:
    def test_multilog_sweep_nonblocking(self, capsys):
        code, out, _ = run(capsys, "simulate", "--network", "multilog",
                           "--d", "2", "--n", "3", "--t", "1", "--f", "2",
                           "--trials", "2", "--steps", "40", "--seed", "5",
                           "--expect-nonblocking")
        assert code == 0
        got = rows(out)[1]
        assert got[0] == "multilog"
        assert got[10] == "0"  # blocked events

    def test_sweep_deterministic(self, capsys):
        argv = ["simulate", "--network", "multilog", "--d", "2", "--n", "3",
                "--t", "1", "--f", "2", "--trials", "2", "--steps", "40",
                "--seed", "5"]
        _, first, _ = run(capsys, *argv)
        _, second, _ = run(capsys, *argv)
        assert first == second

    def test_undersized_sweep_fails(self, capsys):
        # one plane short of the sufficient count, greedy pressure
        code, out, _ = run(capsys, "simulate", "--network", "multilog",
                           "--d", "2", "--n", "3", "--t", "0", "--f", "1",
                           "--m", "1", "--adversary", "greedy",
                           "--trials", "2", "--steps", "60", "--seed", "1",
                           "--expect-nonblocking")
        assert code == 1
        assert int(rows(out)[1][10]) > 0

    def test_clos_saturation(self, capsys):
        code, out, _ = run(capsys, "simulate", "--network", "clos-snb",
                           "--n", "3", "--m", "4", "--expect-nonblocking")
        assert code == 1
        assert rows(out)[1][4] == "blocked"
        code, out, _ = run(capsys, "simulate", "--network", "clos-snb",
                           "--n", "3", "--m", "5", "--expect-nonblocking")
        assert code == 0
        assert rows(out)[1][4] == "admitted"

    def test_benes_search(self, capsys):
        code, out, _ = run(capsys, "simulate", "--network", "clos-benes",
                           "--n", "2", "--m", "3", "--expect-nonblocking")
        assert code == 0
        assert rows(out)[1][4] == "nonblocking"
        code, out, _ = run(capsys, "simulate", "--network", "clos-benes",
                           "--n", "2", "--m", "2", "--expect-nonblocking")
        assert code == 1

    def test_multilog_trace_replay(self, capsys, tmp_path):
        trace = tmp_path / "t.trace"
        trace.write_text("A r1 000 000\nA r2 100 001\nD r1\n")
        code, out, _ = run(capsys, "simulate", "--network", "multilog",
                           "--trace", str(trace), "--d", "2", "--n", "3",
                           "--m", "1", "--expect-nonblocking")
        assert code == 1
        assert [r[4] for r in rows(out)[1:]] == ["ok", "blocked", "ok"]

    def test_clos_trace_replay(self, capsys, tmp_path):
        trace = tmp_path / "c.trace"
        trace.write_text("A a 0:0 1:0\nA b 0:1 1:1\nD a\n")
        code, out, _ = run(capsys, "simulate", "--network", "clos-snb",
                           "--trace", str(trace), "--n", "2", "--m", "1",
                           "--r", "2")
        assert code == 0
        assert [r[3] for r in rows(out)[1:]] == ["ok", "blocked", "ok"]

    def test_multirate_trace_replay(self, capsys, tmp_path):
        trace = tmp_path / "m.trace"
        trace.write_text("A a 0:0 1:0 1/2\nA b 0:0 1:1 1/2\n")
        code, out, _ = run(capsys, "simulate", "--network", "clos-multirate",
                           "--trace", str(trace), "--n", "2", "--m", "40")
        assert code == 0
        assert [r[3] for r in rows(out)[1:]] == ["ok", "ok"]


class TestDwec:
    def test_derive_constants(self, capsys):
        code, out, _ = run(capsys, "dwec", "--derive-constants",
                           "1/2,2/5,1/3")
        assert code == 0
        got = rows(out)[1]
        assert got[2] == "227/40"
        assert float(got[3]) == pytest.approx(5.675)

    def test_derive_five_type(self, capsys):
        code, out, _ = run(capsys, "dwec", "--derive-constants",
                           "1/2,2/5,1/3,11/43")
        assert code == 0
        assert rows(out)[1][2] == "156051/27520"

    def test_bad_fraction(self, capsys):
        code, _, err = run(capsys, "dwec", "--derive-constants", "1/0")
        assert code == 2
        assert "error:" in err

    def test_trace_run(self, capsys, tmp_path):
        trace = tmp_path / "w.trace"
        trace.write_text("A e1 u v 3/5\nA e2 u v 1/2\nD e1\n")
        code, out, _ = run(capsys, "dwec", "--trace", str(trace))
        assert code == 0
        got = rows(out)
        assert got[0] == ["t", "colors_used", "opt_lower", "W_bar",
                          "Delta_bar"]
        assert got[1][1] == "6"

    def test_needs_trace_or_derive(self, capsys):
        code, _, err = run(capsys, "dwec")
        assert code == 2
        assert "trace" in err


class TestCertify:
    def test_small_grid_passes(self, capsys):
        code, out, _ = run(capsys, "certify", "--d", "2", "--n", "3",
                           "--f", "1", "--mode", "link")
        assert code == 0
        got = rows(out)
        assert got[0][:4] == ["d", "n", "t", "f"]
        assert len(got) > 1
        assert all(r[11] == "true" for r in got[1:])

    def test_fuzz_reports_violations(self, capsys):
        code, out, _ = run(capsys, "certify", "--d", "2", "--n", "3",
                           "--f", "1", "--mode", "link", "--fuzz")
        assert code == 1
        assert any(r[8] == "false" and "DC-" in r[9]
                   for r in rows(out)[1:])


class TestExportLp:
    def test_stdout_roundtrip(self, capsys):
        code, out, _ = run(capsys, "export-lp", "--d", "2", "--n", "3",
                           "--t", "1", "--f", "2", "--k", "1")
        assert code == 0
        parsed = lpcert.parse_lp(out)
        inst = lpcert.canonical_instance(2, 3, 1, 2, 1, lpcert.LINK)
        assert len(parsed["objective"]) == \
            len(inst.uw_pairs) + len(inst.uv_pairs)

    def test_out_file_matches_stdout(self, capsys, tmp_path):
        argv = ["export-lp", "--d", "2", "--n", "3", "--t", "1", "--f", "2",
                "--k", "1"]
        _, out, _ = run(capsys, *argv)
        path = tmp_path / "prob.lp"
        code, empty, _ = run(capsys, *argv, "--out", str(path))
        assert code == 0 and empty == ""
        assert path.read_text() == out

    def test_bad_k_is_usage_error(self, capsys):
        code, _, err = run(capsys, "export-lp", "--d", "2", "--n", "3",
                           "--t", "1", "--f", "1", "--k", "2")
        assert code == 2
        assert "error:" in err


class TestParser:
    def test_unknown_subcommand(self):
        with pytest.raises(SystemExit):
            cli.main(["frobnicate"])

    def test_unknown_network(self, capsys):
        with pytest.raises(SystemExit):
            cli.main(["simulate", "--network", "mystery"])
