import io
from fractions import Fraction as F
from math import comb

import numpy as np
import pytest

from hiercodes.params import HierParams
from hiercodes import tradeoff as tr

P_REF = HierParams(n_b=5, n_l=3, k=2, d_b=3, d_l=1)


def random_params(rng, require_margin=None):
    """Valid HierParams with n_b <= 12; margin controls n_l - d_l."""
    while True:
        n_b = int(rng.integers(2, 13))
        n_l = int(rng.integers(1, 6))
        d_l = int(rng.integers(0, n_l))
        if require_margin is not None and n_l - d_l != require_margin:
            continue
        d_b = int(rng.integers(1, n_b))
        k = int(rng.integers(1, d_b + 1))
        return HierParams(n_b=n_b, n_l=n_l, k=k, d_b=d_b, d_l=d_l)


class TestFgh:
    def test_hand_values(self):
        f, g, h = tr.fgh(P_REF, 1, 1)
        assert (f, g, h) == (F(3, 5), F(2, 3), F(1))

    def test_i_zero(self):
        f, g, h = tr.fgh(P_REF, 0, 1)
        assert f == F(1 * 3, 2 * (3 - 2 + 1))  # M d_b / (k (d_b - k + 1))
        assert g == 0
        assert h == F(3 - 2 + 1, 3)

    def test_i_k(self):
        _, g, _ = tr.fgh(P_REF, P_REF.k, 1)
        assert g == F((2 * 3 - 2 + 1) * 2, 2 * 3)

    def test_positivity(self):
        rng = np.random.default_rng(0)
        for _ in range(30):
            p = random_params(rng)
            for i in range(p.k + 1):
                f, g, h = tr.fgh(p, i, F(3, 2))
                assert f > 0 and h > 0
                assert g > 0 if i > 0 else g == 0

    def test_range_check(self):
        with pytest.raises(ValueError):
            tr.fgh(P_REF, 3, 1)


class TestAlphaStar:
    def test_first_breakpoint_is_msr_gamma(self):
        rng = np.random.default_rng(1)
        for _ in range(40):
            p = random_params(rng)
            M = F(int(rng.integers(1, 9)), int(rng.integers(1, 4)))
            g0 = tr.gamma_breakpoint(p, M, 0)
            assert g0 == M * p.d_b / (p.k * (p.d_b - p.k + 1) * p.local)
            assert tr.alpha_star(p, M, g0) == M / (p.k * p.local)

    def test_branch_zero_above_breakpoint(self):
        g0 = tr.gamma_breakpoint(P_REF, 1, 0)
        assert tr.alpha_star(P_REF, 1, 2 * g0) == F(1, 4)

    def test_breakpoints_decreasing(self):
        rng = np.random.default_rng(2)
        for _ in range(30):
            p = random_params(rng)
            bps = tr.gamma_breakpoints(p, 1)
            assert all(bps[i] > bps[i + 1] for i in range(len(bps) - 1))

    def test_continuity_at_every_breakpoint(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            p = random_params(rng)
            if p.local == 1 and p.k == 1:
                continue
            M = F(int(rng.integers(1, 7)))
            bps = tr.gamma_breakpoints(p, M)
            for i, bp in enumerate(bps):
                if p.local == 1 and i == p.k - 1:
                    continue  # nothing below the last breakpoint
                left, right = tr.alpha_star(p, M, bp), None
                eps = bp / 10**9
                right = tr.alpha_star(p, M, bp - eps)
                # continuity: values converge at the breakpoint
                assert abs(right - left) <= eps * 10  # slope is bounded
                val_at, idx_at = tr.alpha_star_regime(p, M, bp)
                val_below, idx_below = tr.alpha_star_regime(p, M, bp - eps)
                assert idx_below == idx_at + 1

    def test_infeasible_when_no_margin(self):
        p = HierParams(n_b=5, n_l=2, k=2, d_b=3, d_l=1)
        last = tr.gamma_breakpoints(p, 1)[-1]
        with pytest.raises(tr.InfeasibleGamma):
            tr.alpha_star(p, 1, last / 2)

    def test_nonincreasing_in_gamma(self):
        rng = np.random.default_rng(4)
        for _ in range(15):
            p = random_params(rng, require_margin=2)
            g0 = tr.gamma_breakpoint(p, 1, 0)
            grid = tr.gamma_grid(0, 2 * g0, 80)
            vals = [tr.alpha_star(p, 1, g) for g in grid]
            assert all(a >= b for a, b in zip(vals, vals[1:]))


class TestMincut:
    def test_beta_zero(self):
        assert tr.mincut(P_REF, F(3, 7), 0) == (P_REF.local - 1) * P_REF.k * F(3, 7)

    def test_msr_pair_meets_file_size(self):
        rng = np.random.default_rng(5)
        for _ in range(40):
            p = random_params(rng)
            M = F(int(rng.integers(1, 9)))
            alpha = M / (p.k * p.local)
            gamma = M * p.d_b / (p.k * (p.d_b - p.k + 1) * p.local)
            assert tr.mincut(p, alpha, gamma / p.d_b) == M

    def test_alpha_dominant(self):
        alpha = F(1000)
        beta = F(1, 3)
        want = (P_REF.local - 1) * P_REF.k * alpha + beta * sum(
            P_REF.d_b - i for i in range(P_REF.k)
        )
        assert tr.mincut(P_REF, alpha, beta) == want


class TestOracleAgreement:
    def test_reference_params_dense_grid(self):
        g0 = tr.gamma_breakpoint(P_REF, 1, 0)
        for g in tr.gamma_grid(0, 2 * g0, 120):
            assert tr.alpha_star(P_REF, 1, g) == tr.alpha_star_oracle(P_REF, 1, g)

    def test_random_params_grids(self):
        rng = np.random.default_rng(6)
        for _ in range(8):
            p = random_params(rng, require_margin=int(rng.integers(2, 4)))
            M = F(int(rng.integers(1, 6)), int(rng.integers(1, 3)))
            g0 = tr.gamma_breakpoint(p, M, 0)
            for g in tr.gamma_grid(0, g0 * F(3, 2), 60):
                assert tr.alpha_star(p, M, g) == tr.alpha_star_oracle(p, M, g)

    def test_flat_margin_feasible_region(self):
        rng = np.random.default_rng(7)
        for _ in range(8):
            p = random_params(rng, require_margin=1)
            M = F(int(rng.integers(1, 6)))
            bps = tr.gamma_breakpoints(p, M)
            for g in tr.gamma_grid(bps[-1], bps[0] * F(3, 2), 50):
                assert tr.alpha_star(p, M, g) == tr.alpha_star_oracle(p, M, g)
            with pytest.raises(tr.Infeasible):
                tr.alpha_star_oracle(p, M, bps[-1] / 2)

    def test_oracle_saturates_large_gamma(self):
        assert tr.alpha_star_oracle(P_REF, 1, 10**6) == F(1, (P_REF.k * P_REF.local))


class TestFlatReduction:
    def test_matches_flat_bandwidth_threshold(self):
        # margin 1: invert alpha*(gamma) back through the flat beta solver
        p = HierParams(n_b=6, n_l=2, k=3, d_b=4, d_l=1)
        M = F(2)
        bps = tr.gamma_breakpoints(p, M)
        for g in tr.gamma_grid(bps[-1], bps[0], 40):
            alpha = tr.alpha_star(p, M, g)
            beta = tr.dimakis_beta_star(p.n_b, p.k, p.d_b, M, alpha)
            assert beta == g / p.d_b


class TestDimakisBetaStar:
    def test_hand_value(self):
        assert tr.dimakis_beta_star(4, 2, 3, 1, F(1, 2)) == F(1, 4)

    def test_msr_alpha(self):
        for n, k, d in [(4, 2, 3), (10, 5, 9), (10, 5, 7), (6, 3, 3)]:
            assert tr.dimakis_beta_star(n, k, d, 1, F(1, k)) == F(1, k * (d - k + 1))

    def test_d_equals_k_breakpoint_solve(self):
        beta = tr.dimakis_beta_star(5, 2, 2, 1, F(2))
        total = sum(min(F(2), (2 - i) * beta) for i in range(2))
        assert total == 1
        smaller = beta - F(1, 10**9)
        assert sum(min(F(2), (2 - i) * smaller) for i in range(2)) < 1

    def test_tightness_and_minimality(self):
        rng = np.random.default_rng(8)
        for _ in range(60):
            n = int(rng.integers(3, 11))
            k = int(rng.integers(1, n))
            d = int(rng.integers(k, n))
            M = F(int(rng.integers(1, 5)))
            alpha = M / k + F(int(rng.integers(0, 4)), 7)
            beta = tr.dimakis_beta_star(n, k, d, M, alpha)
            total = sum(min(alpha, (d - i) * beta) for i in range(k))
            assert total >= M
            if beta > 0:
                eps = beta / 10**9
                assert sum(min(alpha, (d - i) * (beta - eps)) for i in range(k)) < M

    def test_nonincreasing_in_alpha(self):
        alphas = tr.gamma_grid(F(1, 2), F(3), 40)
        vals = [tr.dimakis_beta_star(10, 2, 7, 1, a) for a in alphas]
        assert all(a >= b for a, b in zip(vals, vals[1:]))

    def test_infeasible_alpha(self):
        with pytest.raises(tr.InfeasibleAlpha):
            tr.dimakis_beta_star(4, 2, 3, 1, F(1, 3))


class TestChao:
    P = HierParams(n_b=6, n_l=3, k=4, d_b=5, d_l=1)

    def test_reference_case_against_direct_summation(self):
        alpha, M = tr.chao_params(self.P, 2, 1)
        # independent evaluation with explicit loops
        n_b, k, d_b = 6, 4, 5
        t_c = 0
        for i in range(n_b - d_b + 1, min(2, n_b - k) + 1):
            t_c += (i + n_b - d_b) * comb(n_b - k, i) * comb(k, 2 - i)
        assert t_c == 3
        want_alpha = F(d_b * 1, 2 - n_b + d_b)
        want_M = (F(n_b * d_b, 2) - F(d_b * t_c, (2 + d_b - n_b) * comb(n_b - 1, 1))) * 2
        assert (alpha, M) == (want_alpha, want_M) == (F(5), F(24))

    def test_lower_edge_positive(self):
        lo, _ = tr.chao_r_bounds(self.P)
        alpha, M = tr.chao_params(self.P, lo, F(1, 2))
        assert alpha > 0

    def test_r_bounds_inclusive(self):
        lo, hi = tr.chao_r_bounds(self.P)
        assert (lo, hi) == (2, 1 + F(5, 2))  # n_b - d_b + d_b/(d_b-k+1)
        tr.chao_params(self.P, 3, 1)  # floor(7/2) admissible
        with pytest.raises(tr.ROutOfRange):
            tr.chao_params(self.P, 1, 1)
        with pytest.raises(tr.ROutOfRange):
            tr.chao_params(self.P, 4, 1)

    def test_binomial_convention(self):
        assert tr._binom(4, -1) == 0
        assert tr._binom(4, 5) == 0
        assert tr._binom(4, 2) == 6


class TestExtremalPoints:
    def test_reference_msr(self):
        pts = tr.extremal_points(HierParams(n_b=5, n_l=3, k=2, d_b=3, d_l=1), 1)
        assert (pts.msr.alpha, pts.msr.gamma) == (F(1, 4), F(3, 8))

    def test_mbr_gamma_zero(self):
        pts = tr.extremal_points(P_REF, 7)
        assert pts.mbr.gamma == 0
        assert pts.mbr.alpha == F(7, 2 * 1)

    def test_mbr_undefined_without_margin(self):
        pts = tr.extremal_points(HierParams(n_b=5, n_l=2, k=2, d_b=3, d_l=1), 1)
        assert pts.mbr is None

    def test_exact_beta_denominator_forms_agree(self):
        p = P_REF
        pts = tr.extremal_points(p, 1)
        assert pts.msr_exact_beta == F(1, p.k * (p.d_b - p.k + 1) * p.local)


class TestCsv:
    def test_curve_emission(self):
        buf = io.StringIO()
        tr.emit_curve_csv(P_REF, 1, tr.gamma_grid(0, F(3, 8), 3), buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "gamma,alpha_star,regime_index"
        assert lines[1] == "0,1/2,2"
        assert lines[-1] == "3/8,1/4,0"

    def test_grid_endpoints(self):
        grid = tr.gamma_grid(F(1, 3), F(2, 3), 5)
        assert grid[0] == F(1, 3) and grid[-1] == F(2, 3) and len(grid) == 5
