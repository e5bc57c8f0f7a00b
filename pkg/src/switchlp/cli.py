"""Command-line front end.

One binary, five subcommands: closed-form bounds, simulation sweeps, the
edge-coloring runner, certificate grid audits, and LP export.  All output is
CSV on stdout; a fixed seed makes runs byte-identical.  Exit status is 0
when every check passed, 1 when a verification failed, and 2 for usage
errors.
"""

import argparse
import csv
from fractions import Fraction
import sys

from . import bounds
from . import clos
from . import dwec
from . import lpcert
from . import multilog
from . import adversary


class UsageError(Exception):
    pass


def _writer():
    return csv.writer(sys.stdout, lineterminator="\n")


def _load_config(path):
    values = {}
    with open(path) as fh:
        for ln, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            key, sep, val = text.partition("=")
            if not sep:
                raise UsageError("%s:%d: expected key = value" % (path, ln))
            values[key.strip().replace("-", "_")] = val.strip()
    return values


def _apply_config(args):
    """Fill argparse gaps (None values) from the config file, if any."""
    if not getattr(args, "config", None):
        return
    stored = _load_config(args.config)
    for key, val in stored.items():
        if getattr(args, key, None) is None:
            if val.lstrip("-").isdigit():
                val = int(val)
            setattr(args, key, val)


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise UsageError("missing --%s" % name.replace("_", "-"))


# -- bound --------------------------------------------------------------------


def cmd_bound(args):
    _apply_config(args)
    out = _writer()
    kind = args.kind
    try:
        if kind == "clos-snb":
            _require(args, "n")
            out.writerow(["kind", "n", "m_sufficient"])
            out.writerow([kind, args.n, bounds.clos_snb(args.n)])
        elif kind == "clos-wsnb-r2":
            _require(args, "n")
            out.writerow(["kind", "n", "m_sufficient"])
            out.writerow([kind, args.n, bounds.clos_wsnb_r2(args.n)])
        elif kind == "clos-multirate":
            _require(args, "n")
            val = bounds.clos_multirate(args.n, scheme=args.scheme)
            out.writerow(["kind", "n", "scheme", "m_sufficient"])
            out.writerow([kind, args.n, args.scheme, val])
        elif kind == "hwang":
            _require(args, "d", "n")
            out.writerow(["kind", "d", "n", "m_sufficient"])
            out.writerow([kind, args.d, args.n,
                          bounds.hwang_unicast(args.d, args.n)])
        elif kind == "multilog":
            _require(args, "d", "n", "t", "f")
            d, n, t, f = args.d, args.n, args.t, args.f
            if not (0 <= t <= n):
                raise UsageError("t=%d out of range for n=%d" % (t, n))
            if t == n:
                fn = (bounds.snb_fcast_t_eq_n if args.mode == "link"
                      else bounds.cf_snb_fcast_t_eq_n)
                m = fn(d, n, f)
                branch = "t=n"
            else:
                res = (bounds.C_bound if args.mode == "link"
                       else bounds.G_bound)(d, n, t, f)
                m, branch = res.m_sufficient, res.branch
            out.writerow(["kind", "d", "n", "t", "f", "mode", "m_sufficient",
                          "branch"])
            out.writerow([kind, d, n, t, f, args.mode, m, branch])
        else:
            raise UsageError("unknown bound kind %r" % kind)
    except ValueError as exc:
        raise UsageError(str(exc))
    return 0


# -- simulate -----------------------------------------------------------------


def _multilog_sweep(args, out):
    failures = 0
    out.writerow(["network", "d", "n", "t", "f", "mode", "m", "adversary",
                  "seed", "trials", "blocked", "max_blocking_planes"])
    d, n, t, f = args.d, args.n, args.t, args.f
    if args.m is not None:
        m = args.m
    else:
        res = (bounds.C_bound if args.mode == "link"
               else bounds.G_bound)(d, n, t, f)
        m = res.m_sufficient + (args.m_offset or 0)
    trial_fn = (adversary.greedy_trial if args.adversary == "greedy"
                else adversary.random_trial)
    blocked = 0
    max_bp = 0
    for trial in range(args.trials):
        cfg = multilog.MultilogConfig(
            d=d, n=n, m=m, t=t, f=f, mode=args.mode,
            plane_policy=multilog.RANDOM, seed=args.seed + 7919 * trial)
        stats = trial_fn(cfg, args.steps, args.seed + trial)
        blocked += stats["blocked"]
        max_bp = max(max_bp, stats["max_blocking_planes"])
    out.writerow(["multilog", d, n, t, f, args.mode, m, args.adversary,
                  args.seed, args.trials, blocked, max_bp])
    if args.expect_nonblocking and blocked:
        failures += 1
    return failures


def _clos_sweep(args, out):
    failures = 0
    n, m = args.n, args.m
    out.writerow(["network", "n", "m", "adversary", "outcome"])
    if args.network == "clos-snb":
        got = adversary.run_snb_saturation(n, m if m else bounds.clos_snb(n))
        outcome = "blocked" if got is clos.BLOCKED else "admitted"
    else:
        found = adversary.benes_search(
            n, m if m else bounds.clos_wsnb_r2(n),
            max_depth=args.depth)
        outcome = "blocked" if found else "nonblocking"
    out.writerow([args.network, n, m, "exhaustive", outcome])
    if args.expect_nonblocking and outcome == "blocked":
        failures += 1
    return failures


def cmd_simulate(args):
    _apply_config(args)
    out = _writer()
    if args.trace:
        with open(args.trace) as fh:
            lines = fh.readlines()
        if args.network == "multilog":
            _require(args, "d", "n", "m")
            cfg = multilog.MultilogConfig(
                d=args.d, n=args.n, m=args.m, t=args.t or 0, f=args.f or 1,
                mode=args.mode, seed=args.seed)
            out.writerow(["event", "id", "window", "plane", "status"])
            blocked = 0
            for row in multilog.run_trace(cfg, lines):
                out.writerow([row["event"], row["id"], row["window"],
                              row["plane"], row["status"]])
                blocked += row["status"] == "blocked"
        else:
            _require(args, "n", "m")
            traffic = (clos.MULTIRATE if args.network == "clos-multirate"
                       else clos.SPACE)
            cfg = clos.ClosConfig.symmetric(n=args.n, m=args.m,
                                            r=args.r or 2, traffic=traffic)
            out.writerow(["event", "id", "middle", "status"])
            blocked = 0
            for row in clos.run_trace(cfg, lines):
                out.writerow([row["event"], row["id"], row["middle"],
                              row["status"]])
                blocked += row["status"] == "blocked"
        return 1 if (args.expect_nonblocking and blocked) else 0

    if args.network == "multilog":
        _require(args, "d", "n", "t", "f")
        return 1 if _multilog_sweep(args, out) else 0
    if args.network in ("clos-snb", "clos-benes"):
        _require(args, "n")
        return 1 if _clos_sweep(args, out) else 0
    raise UsageError("unknown network %r" % args.network)


# -- dwec ---------------------------------------------------------------------


def _parse_breakpoints(text):
    try:
        return tuple(Fraction(part) for part in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError("bad breakpoint list %r: %s" % (text, exc))


def cmd_dwec(args):
    _apply_config(args)
    out = _writer()
    if args.derive_constants:
        derived = dwec.derive_constants(_parse_breakpoints(
            args.derive_constants))
        out.writerow(["breakpoints", "x", "objective", "objective_float"])
        out.writerow([",".join(str(b) for b in derived.breakpoints),
                      ",".join(str(v) for v in derived.x),
                      str(derived.objective), float(derived.objective)])
        return 0
    if not args.trace:
        raise UsageError("need --trace or --derive-constants")
    scheme = (dwec.DwecScheme.five_type() if args.scheme == "five"
              else dwec.FOUR_TYPE)
    with open(args.trace) as fh:
        try:
            events = dwec.parse_trace(fh.readlines())
        except ValueError as exc:
            raise UsageError(str(exc))
    out.writerow(["t", "colors_used", "opt_lower", "W_bar", "Delta_bar"])
    for row in dwec.run_trace(events, scheme=scheme, audit=True):
        out.writerow([row["t"], row["colors_used"], row["opt_lower"],
                      row["W_bar"], row["Delta_bar"]])
    return 0


# -- certify ------------------------------------------------------------------


def _int_list(text):
    return [int(part) for part in str(text).split(",")]


def cmd_certify(args):
    _apply_config(args)
    out = _writer()
    out.writerow(["d", "n", "t", "f", "k", "p", "q", "mode", "feasible",
                  "objective", "cost_formula", "match"])
    failures = 0
    modes = [args.mode] if args.mode else [lpcert.LINK, lpcert.CROSSTALK]
    for d in _int_list(args.d or "2"):
        for n in _int_list(args.n or "3,4"):
            for t in range(0, n):
                fs = _int_list(args.f) if args.f else sorted(
                    {1, 2, min(4, d ** n), d ** n})
                for f in fs:
                    for mode in modes:
                        ks = range(1, min(f, d ** t) + 1)
                        for k in ks:
                            inst = lpcert.canonical_instance(d, n, t, f, k,
                                                             mode)
                            for p in range(0, n - t):
                                for q in range(n - t, n + 1):
                                    failures += _certify_point(
                                        out, inst, p, q, args)
    return 1 if failures else 0


def _certify_point(out, inst, p, q, args):
    sol = lpcert.dual_family(inst, p, q)
    if args.fuzz:
        sol.eps = {i: 0 for i in sol.eps}
        sol.gamma = {i: 0 for i in sol.gamma}
        sol.beta = {}
        sol.alpha = {j: 0 for j in sol.alpha}
    try:
        sol.check_feasible()
        feasible = True
        note = ""
    except lpcert.Infeasible as exc:
        feasible = False
        note = str(exc)
    cost = lpcert.family_cost(inst, p, q)
    if q == inst.n - inst.t:
        obj = sol.objective() if feasible else ""
    else:
        obj = sol.objective_bounded_delta(q) if feasible else ""
    match = feasible and obj == cost
    out.writerow([inst.d, inst.n, inst.t, inst.f, inst.k, p, q, inst.mode,
                  str(feasible).lower(), obj if feasible else note, cost,
                  str(bool(match)).lower()])
    return 0 if match else 1


# -- export-lp ----------------------------------------------------------------


def cmd_export_lp(args):
    _apply_config(args)
    _require(args, "d", "n", "t", "f", "k")
    try:
        inst = lpcert.canonical_instance(args.d, args.n, args.t, args.f,
                                         args.k, args.mode)
    except ValueError as exc:
        raise UsageError(str(exc))
    text = lpcert.export_lp(inst)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# -- parser -------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="switchlp")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key = value defaults file")

    b = sub.add_parser("bound", help="closed-form plane/crossbar bounds")
    b.add_argument("kind", choices=["clos-snb", "clos-wsnb-r2",
                                    "clos-multirate", "hwang", "multilog"])
    for name in ("d", "n", "t", "f"):
        b.add_argument("--" + name, type=int)
    b.add_argument("--mode", choices=["link", "crosstalk"], default="link")
    b.add_argument("--scheme", choices=["four_type", "five_type_paper"],
                   default="four_type")
    common(b)
    b.set_defaults(fn=cmd_bound)

    s = sub.add_parser("simulate", help="simulation sweeps and trace replay")
    s.add_argument("--network", default="multilog",
                   choices=["multilog", "clos-snb", "clos-benes",
                            "clos-multirate"])
    for name in ("d", "n", "t", "f", "m", "m_offset", "r", "depth"):
        s.add_argument("--" + name.replace("_", "-"), dest=name, type=int)
    s.add_argument("--mode", choices=["link", "crosstalk"], default="link")
    s.add_argument("--adversary", choices=["random", "greedy", "exhaustive"],
                   default="random")
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--steps", type=int, default=60)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trace")
    s.add_argument("--expect-nonblocking", action="store_true")
    common(s)
    s.set_defaults(fn=cmd_simulate)

    w = sub.add_parser("dwec", help="edge-coloring runs and LP derivation")
    w.add_argument("--trace")
    w.add_argument("--scheme", choices=["four", "five"], default="four")
    w.add_argument("--derive-constants", dest="derive_constants")
    common(w)
    w.set_defaults(fn=cmd_dwec)

    c = sub.add_parser("certify", help="dual-certificate grid audit")
    for name in ("d", "n", "f"):
        c.add_argument("--" + name)
    c.add_argument("--mode", choices=["link", "crosstalk"])
    c.add_argument("--fuzz", action="store_true",
                   help="corrupt the duals to exercise violation reporting")
    common(c)
    c.set_defaults(fn=cmd_certify)

    e = sub.add_parser("export-lp", help="write the primal LP as text")
    for name in ("d", "n", "t", "f", "k"):
        e.add_argument("--" + name, type=int)
    e.add_argument("--mode", choices=["link", "crosstalk"], default="link")
    e.add_argument("--out")
    common(e)
    e.set_defaults(fn=cmd_export_lp)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
