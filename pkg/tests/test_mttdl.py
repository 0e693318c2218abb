import io
from fractions import Fraction as F
from math import factorial

import pytest

from hiercodes import mttdl as mt


def spec(n, k, lam=1, mu=10, model="chen", opp=False):
    return mt.MarkovSpec(n, k, F(lam), F(mu), model, opp)


def det_cofactor(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = F(0)
    for j in range(n):
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = rows[0][j] * det_cofactor(minor)
        total = total - term if j % 2 else total + term
    return total


class TestRepairRate:
    def test_chen_original_constant(self):
        s = spec(10, 6, model="chen", opp=False)
        assert all(mt.repair_rate(s, c) == F(10) for c in range(1, 5))

    def test_chen_opportunistic_surplus(self):
        s = spec(10, 6, model="chen", opp=True)
        assert mt.repair_rate(s, 1) == (10 - 6) * F(10)
        assert mt.repair_rate(s, 4) == F(10)

    def test_angus_parallel(self):
        s = spec(10, 6, model="angus", opp=False)
        assert mt.repair_rate(s, 3) == 3 * F(10)

    def test_angus_opportunistic(self):
        s = spec(10, 6, model="angus", opp=True)
        assert mt.repair_rate(s, 4) == 4 * 1 * F(10)
        assert mt.repair_rate(s, 2) == 2 * 3 * F(10)

    def test_range_check(self):
        with pytest.raises(ValueError):
            mt.repair_rate(spec(10, 6), 5)


class TestSmallChain:
    def test_n2_k1_all_variants(self):
        # hand first-passage solve of the 3-state chain: (3 lam + mu) / (2 lam^2)
        for lam, mu in [(F(1), F(10)), (F(2), F(5)), (F(1, 3), F(7, 2))]:
            want = (3 * lam + mu) / (2 * lam**2)
            for model in ("chen", "angus"):
                for opp in (False, True):
                    s = mt.MarkovSpec(2, 1, lam, mu, model, opp)
                    assert mt.mttdl_closed_form(s) == want
                    assert mt.mttdl_chain_oracle(s) == want

    def test_mu_zero_harmonic(self):
        for n, k in [(5, 2), (8, 3), (14, 13)]:
            s = mt.MarkovSpec(n, k, F(1), F(0), "chen", False)
            want = sum(F(1, m) for m in range(k, n + 1))
            assert mt.mttdl_chain_oracle(s) == want


class TestCrossValidation:
    def test_chen_matches_everywhere(self):
        for n in range(2, 11):
            for k in range(1, n):
                for opp in (False, True):
                    for mu in (F(1), F(10), F(100)):
                        s = mt.MarkovSpec(n, k, F(1), mu, "chen", opp)
                        assert mt.mttdl_closed_form(s) == mt.mttdl_chain_oracle(s)

    def test_angus_matches_only_single_repair_state(self):
        # the angus double sums as specified drop the level offset in the
        # repair-rate products; the chain oracle is authoritative and the
        # detector must flag every n - k >= 2 case
        for n in range(2, 9):
            for k in range(1, n):
                for opp in (False, True):
                    s = mt.MarkovSpec(n, k, F(1), F(10), "angus", opp)
                    match = mt.mttdl_closed_form(s) == mt.mttdl_chain_oracle(s)
                    assert match == (n - k == 1)

    def test_report_names_the_spec(self):
        checks = mt.cross_validate([spec(3, 1, model="angus", opp=False)])
        lines = mt.format_report(checks)
        assert len(lines) == 1
        assert "n=3 k=1" in lines[0] and "angus-orig" in lines[0]
        assert "closed=" in lines[0] and "oracle=" in lines[0]

    def test_csv_columns(self):
        checks = mt.cross_validate([spec(3, 1), spec(3, 1, model="angus")])
        buf = io.StringIO()
        mt.emit_csv(checks, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == (
            "n,k,lambda,mu,model,opportunistic,mttdl_closed,mttdl_oracle,match_flag"
        )
        assert lines[1].endswith(",1")
        assert lines[2].endswith(",0")


class TestMonotonicity:
    def test_increasing_in_mu(self):
        for model in ("chen", "angus"):
            vals = [
                mt.mttdl_chain_oracle(mt.MarkovSpec(8, 5, F(1), F(m), model, True))
                for m in (0, 1, 5, 25, 125)
            ]
            assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_decreasing_in_lambda(self):
        vals = [
            mt.mttdl_chain_oracle(mt.MarkovSpec(8, 5, F(lam), F(10), "chen", True))
            for lam in (1, 2, 4, 8)
        ]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_opportunistic_dominates(self):
        for model in ("chen", "angus"):
            for n in range(2, 10):
                for k in range(1, n):
                    orig = mt.mttdl_chain_oracle(mt.MarkovSpec(n, k, F(1), F(10), model, False))
                    opp = mt.mttdl_chain_oracle(mt.MarkovSpec(n, k, F(1), F(10), model, True))
                    if n - k == 1:
                        assert opp == orig
                    else:
                        assert opp > orig


class TestAsymptotics:
    def test_improvement_factor_values(self):
        assert mt.improvement_factor(14, 10) == 24
        assert mt.improvement_factor(51, 30) == factorial(21)
        assert factorial(21) == 51090942171709440000  # ~5.1e19

    def test_ratio_converges_to_factorial(self):
        # oracle ratio within 1% of (n-k)! at mu/lambda = 1e6
        mu = F(10**6)
        for model in ("chen", "angus"):
            for n in range(2, 15):
                for k in range(1, n):
                    opp = mt.mttdl_chain_oracle(mt.MarkovSpec(n, k, F(1), mu, model, True))
                    orig = mt.mttdl_chain_oracle(mt.MarkovSpec(n, k, F(1), mu, model, False))
                    ratio = opp / orig
                    want = mt.improvement_factor(n, k)
                    assert abs(ratio - want) <= F(want) / 100

    def test_leading_terms_match_oracle_at_large_mu(self):
        mu = F(10**9)
        for model in ("chen", "angus"):
            for opp in (False, True):
                s = mt.MarkovSpec(9, 5, F(1), mu, model, opp)
                approx = mt.mttdl_asymptotic(s)
                exact = mt.mttdl_chain_oracle(s)
                assert abs(exact - approx) <= exact / 10**4

    def test_model_ratios(self):
        n, k = 9, 5
        boost = factorial(n - k)
        a_opp = mt.mttdl_asymptotic(spec(n, k, model="angus", opp=True))
        a_orig = mt.mttdl_asymptotic(spec(n, k, model="angus", opp=False))
        c_opp = mt.mttdl_asymptotic(spec(n, k, model="chen", opp=True))
        c_orig = mt.mttdl_asymptotic(spec(n, k, model="chen", opp=False))
        assert a_opp / a_orig == boost
        assert a_opp / c_opp == boost
        assert c_opp / c_orig == boost


class TestTridiagDet:
    def test_l1(self):
        assert mt.tridiag_det([2], [3], F(5), F(7)) == 3 * 5 + 2 * 7

    def test_l3_against_cofactor_expansion(self):
        lam, mu = F(2), F(3)
        for b, c in [([1, 2, 3], [4, 5, 6]), ([0, 2, 5], [1, 1, 7]), ([3, 1, 4], [1, 5, 9])]:
            rows = [
                [c[0] * lam + b[0] * mu, -b[1] * mu, F(0)],
                [-c[0] * lam, c[1] * lam + b[1] * mu, -b[2] * mu],
                [F(0), -c[1] * lam, c[2] * lam + b[2] * mu],
            ]
            assert mt.tridiag_det(b, c, lam, mu) == det_cofactor(rows)

    def test_b_zero_prefix_collapse(self):
        lam, mu = F(3), F(11)
        c = [2, 5, 7]
        assert mt.tridiag_det([0, 0, 0], c, lam, mu) == 2 * 5 * 7 * lam**3

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            mt.tridiag_det([1], [1, 2], 1, 1)


class TestSpecValidation:
    def test_bad_params(self):
        with pytest.raises(ValueError):
            mt.MarkovSpec(2, 2, F(1), F(1), "chen", False)
        with pytest.raises(ValueError):
            mt.MarkovSpec(3, 1, F(0), F(1), "chen", False)
        with pytest.raises(ValueError):
            mt.MarkovSpec(3, 1, F(1), F(1), "weibull", False)
