"""Closed-form bound calculators: examples, identities, and dominance."""

from fractions import Fraction

import pytest

from switchlp import bounds
from switchlp.bounds import (
    LINK, CROSSTALK, CaseGap, ilog, ceil_div,
    clos_snb, clos_wsnb_r2, clos_multirate,
    hwang_unicast, wang07, snb_fcast_t_eq_n, cf_snb_fcast_t_eq_n,
    danilewicz, cf_wsnb_window, h, hbar,
    c_cost, g_cost, sufficient_m_enumerated, C_bound, G_bound,
)


class TestHelpers:
    def test_ilog(self):
        assert ilog(2, 1) == 0
        assert ilog(2, 7) == 2
        assert ilog(2, 8) == 3
        assert ilog(3, 81) == 4

    def test_ceil_div(self):
        assert ceil_div(7, 2) == 4
        assert ceil_div(8, 2) == 4


class TestClosForms:
    def test_snb(self):
        assert clos_snb(4) == 7
        assert clos_snb(1) == 1

    def test_wsnb_r2(self):
        assert clos_wsnb_r2(4) == 6
        assert clos_wsnb_r2(5) == 7
        assert clos_wsnb_r2(1) == 1

    def test_multirate(self):
        assert clos_multirate(8, "four_type") == 16 + 3 + 3 + 24
        assert clos_multirate(10, "five_type_paper") == 61
        with pytest.raises(ValueError):
            clos_multirate(0)
        with pytest.raises(ValueError):
            clos_multirate(4, scheme="bogus")


class TestSpecializations:
    def test_hwang(self):
        assert hwang_unicast(2, 4) == 5
        assert hwang_unicast(2, 2) == 2
        assert hwang_unicast(2, 4) == snb_fcast_t_eq_n(2, 4, 1)

    def test_wang07(self):
        assert wang07(2, 4, 2) == 6
        assert wang07(2, 4, 16) == 8  # c = 0: exact rational half-powers
        with pytest.raises(ValueError):
            wang07(2, 4, 17)

    def test_t_eq_n_fcast(self):
        assert snb_fcast_t_eq_n(2, 4, 1) == 5
        assert snb_fcast_t_eq_n(2, 4, 8) == 2 ** 3  # f above d^(n-2)
        assert cf_snb_fcast_t_eq_n(2, 4, 1) == 7
        assert cf_snb_fcast_t_eq_n(2, 4, 16) == 2 ** 4 - 2 ** 2

    def test_window_wsnb(self):
        assert danilewicz(2, 4, 1) == 6
        assert cf_wsnb_window(2, 4, 1) == 12
        # the branch switch at t = floor(n/2) yields a fractional value
        assert danilewicz(2, 4, 2) == Fraction(9, 2)
        # t = 0 degenerates to the full-fanout unicast-window bound
        assert danilewicz(2, 4, 0) == wang07(2, 4, 16)
        with pytest.raises(ValueError):
            danilewicz(2, 4, 4)

    def test_wang07_is_unicast_table(self):
        for d in (2, 3):
            for n in (3, 4, 5):
                for f in range(1, d ** n + 1):
                    assert wang07(d, n, f) == 1 + C_bound(d, n, 0, f).value

    def test_window_corollaries_match_tables(self):
        # the t > n/2 crosstalk row is the known printed-value discrepancy;
        # everywhere else the corollary equals 1 + the table value
        for d in (2, 3):
            for n in (3, 4, 5):
                for t in range(0, n):
                    assert danilewicz(d, n, t) == \
                        1 + C_bound(d, n, t, d ** n).value
                    if 2 * t <= n:
                        assert cf_wsnb_window(d, n, t) == \
                            1 + G_bound(d, n, t, d ** n).value

    def test_cf_window_discrepancy_is_one_sided(self):
        # where the printed corollary row disagrees with the table, the
        # table is the one matching the enumerated max-min
        for (d, n, t) in [(2, 3, 2), (2, 5, 3), (3, 3, 2)]:
            table = 1 + G_bound(d, n, t, d ** n).value
            corollary = cf_wsnb_window(d, n, t)
            enum = sufficient_m_enumerated(d, n, t, d ** n, CROSSTALK)
            assert corollary < table
            assert table == enum


class TestMonotoneLemmas:
    @pytest.mark.parametrize("d", [2, 3])
    def test_h_and_hbar_nondecreasing(self, d):
        for n in range(2, 9):
            cap = min(d ** n, 700)
            hs = [h(d, n, k) for k in range(1, cap + 1)]
            hbars = [hbar(d, n, k) for k in range(1, cap + 1)]
            assert all(a <= b for a, b in zip(hs, hs[1:]))
            assert all(a <= b for a, b in zip(hbars, hbars[1:]))

    def test_h_example(self):
        assert h(2, 4, 1) == 5


class TestCostFunctions:
    def test_hand_evaluated_branch(self):
        assert c_cost(2, 4, 1, 1, 1, 0, 3) == 5

    def test_full_window_tail_vanishes(self):
        # at q = n - t the cost ends in (d^t - k), so raising k to the full
        # window just subtracts one per output
        assert c_cost(2, 4, 2, 4, 4, 0, 2) == 1
        assert c_cost(2, 4, 2, 4, 3, 0, 2) == 2

    def test_range_checks(self):
        with pytest.raises(ValueError):
            c_cost(2, 4, 4, 1, 1, 0, 0)
        with pytest.raises(ValueError):
            c_cost(2, 4, 1, 1, 1, 3, 3)
        with pytest.raises(ValueError):
            g_cost(2, 4, 1, 1, 1, 0, 2)

    def test_exact_rationals(self):
        assert C_bound(2, 3, 1, 4).value == Fraction(7, 4)
        assert danilewicz(2, 4, 2) * 2 == 9


class TestBoundTables:
    def test_danilewicz_case(self):
        res = C_bound(2, 4, 1, 16)
        assert res.value == 5
        assert res.m_sufficient == 6
        assert res.branch == "C2"

    def test_cf_case(self):
        res = G_bound(2, 4, 1, 16)
        assert res.value == 11
        assert res.m_sufficient == 12

    def test_params_echo(self):
        res = C_bound(2, 4, 1, 4)
        assert res.params == {"d": 2, "n": 4, "t": 1, "f": 4, "r": 2}
        assert res.matched

    @pytest.mark.parametrize("mode,table",
                             [(LINK, C_bound), (CROSSTALK, G_bound)])
    def test_dominates_enumeration(self, mode, table):
        # plane-count dominance holds everywhere; value-level dominance can
        # fail by < 1 only on the fractional C3 row (negative-exponent term)
        for d in (2, 3):
            for n in (3, 4):
                for t in range(0, n):
                    for f in sorted({1, 2, 4, d ** n}):
                        enum = sufficient_m_enumerated(d, n, t, f, mode)
                        res = table(d, n, t, f)
                        assert enum <= res.m_sufficient, (d, n, t, f, mode)
                        if enum - 1 > res.value:
                            assert res.branch == "C3"
                            assert enum - 1 - res.value < 1

    def test_t0_f1_equals_hwang(self):
        for d in (2, 3):
            for n in (3, 4, 5):
                assert sufficient_m_enumerated(d, n, 0, 1, LINK) == \
                    hwang_unicast(d, n)
