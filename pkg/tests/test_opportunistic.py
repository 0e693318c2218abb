import io
from fractions import Fraction as F
from itertools import combinations, product

import pytest

from hiercodes import opportunistic as opp
from hiercodes.tradeoff import InfeasibleAlpha, dimakis_beta_star


def msr_beta_map(n, k, M, D):
    return {d: F(M) / (k * (d - k + 1)) for d in D}


class TestSystem:
    def test_validation(self):
        with pytest.raises(ValueError):
            opp.OppSystem(n=4, k=2, M=1, D=())
        with pytest.raises(ValueError):
            opp.OppSystem(n=4, k=2, M=1, D=(2, 3))  # not decreasing
        with pytest.raises(ValueError):
            opp.OppSystem(n=4, k=2, M=1, D=(4,))  # d >= n
        with pytest.raises(ValueError):
            opp.OppSystem(n=4, k=2, M=1, D=(1,))  # d < k


class TestFeasible:
    def test_msr_points_simultaneously_achievable(self):
        sys_ = opp.OppSystem(n=6, k=3, M=1, D=(5, 4, 3))
        assert opp.feasible(sys_, F(1, 3), msr_beta_map(6, 3, 1, sys_.D))

    def test_zero_betas_infeasible(self):
        sys_ = opp.OppSystem(n=4, k=2, M=1, D=(3, 2))
        assert not opp.feasible(sys_, F(10), {3: 0, 2: 0})

    def test_four_node_example(self):
        # n=4, k=2, M=4 blocks: alpha=2 with beta_3=1, beta_2=2 works
        sys_ = opp.OppSystem(n=4, k=2, M=4, D=(3, 2))
        assert opp.feasible(sys_, 2, {3: 1, 2: 2})
        assert opp.theorem_bound(sys_, 2, {3: 1, 2: 2}) == 4

    def test_missing_beta(self):
        sys_ = opp.OppSystem(n=4, k=2, M=1, D=(3, 2))
        with pytest.raises(opp.MissingBeta):
            opp.feasible(sys_, 1, {3: F(1, 2)})

    def test_unbounded_marker(self):
        sys_ = opp.OppSystem(n=4, k=2, M=1, D=(3, 2))
        assert opp.theorem_bound(sys_, F(1, 2), {3: opp.UNBOUNDED, 2: opp.UNBOUNDED}) == 1

    def test_homogeneity(self):
        sys1 = opp.OppSystem(n=5, k=2, M=F(3, 2), D=(4, 2))
        sys2 = opp.OppSystem(n=5, k=2, M=F(3, 2) * 7, D=(4, 2))
        beta = {4: F(1, 5), 2: F(1, 3)}
        beta7 = {d: 7 * b for d, b in beta.items()}
        for alpha in (F(1, 2), F(3, 4), F(2)):
            assert opp.theorem_bound(sys1, alpha, beta) * 7 == opp.theorem_bound(
                sys2, alpha * 7, beta7
            )


class TestAlphaO:
    def test_hand_value(self):
        assert opp.alpha_o(2, 3, 1) == F(3, 5)

    def test_fig_configuration(self):
        assert opp.alpha_o(5, 9, 1) == F(6, 29)

    def test_k_one_unbounded(self):
        assert opp.alpha_o(1, 3, 1) is opp.UNBOUNDED

    def test_msr_alpha_always_below_threshold(self):
        for k in range(2, 8):
            for d1 in range(k, 12):
                assert F(1, k) <= opp.alpha_o(k, d1, 1)


class TestBetaTilde:
    def test_reference_pair(self):
        sys_ = opp.OppSystem(n=4, k=2, M=1, D=(3, 2))
        bt = opp.beta_tilde(sys_, F(1, 2))
        assert bt == {3: F(1, 4), 2: F(1, 2)}
        # below threshold both equal their individual optima
        assert bt[2] == dimakis_beta_star(4, 2, 2, 1, F(1, 2))

    def test_tight_at_file_size(self):
        # feasibility holds with exact equality at the beta_tilde point
        for n, k, D in [(4, 2, (3, 2)), (10, 5, (9, 7)), (8, 3, (7, 5, 3))]:
            sys_ = opp.OppSystem(n=n, k=k, M=1, D=D)
            for alpha in (F(1, k), F(1, k) + F(1, 19), F(2, k)):
                bt = opp.beta_tilde(sys_, alpha)
                assert opp.theorem_bound(sys_, alpha, bt) == 1

    def test_equals_individual_optima_iff_below_threshold(self):
        sys_ = opp.OppSystem(n=10, k=5, M=1, D=(9, 7))
        thr = opp.alpha_o(5, 9, 1)
        for alpha in [F(1, 5), F(21, 100), thr, thr + F(1, 1000), F(1, 4), F(3, 10)]:
            bt = opp.beta_tilde(sys_, alpha)
            star7 = dimakis_beta_star(10, 5, 7, 1, alpha)
            if alpha <= thr:
                assert bt[7] == star7
            else:
                assert bt[7] > star7

    def test_k_one_never_loses(self):
        sys_ = opp.OppSystem(n=5, k=1, M=1, D=(4, 2, 1))
        for alpha in (F(1), F(3, 2), F(5)):
            bt = opp.beta_tilde(sys_, alpha)
            for d in sys_.D:
                assert bt[d] == dimakis_beta_star(5, 1, d, 1, alpha)

    def test_infeasible_alpha(self):
        sys_ = opp.OppSystem(n=4, k=2, M=1, D=(3, 2))
        with pytest.raises(InfeasibleAlpha):
            opp.beta_tilde(sys_, F(1, 3))


class TestBetaTildeOracle:
    def test_matches_closed_form_across_sweep(self):
        for k in (1, 2, 3):
            for e1 in range(k, 8):
                for e2 in range(k, e1 + 1):
                    n = e1 + 2
                    D = (e1,) if e1 == e2 else (e1, e2)
                    sys_ = opp.OppSystem(n=n, k=k, M=1, D=D)
                    for alpha in (F(1, k), F(1, k) + F(1, 13), F(2, k)):
                        got = opp.beta_tilde_oracle(sys_, alpha, e2)
                        want = F(e1 - k + 1, e2 - k + 1) * dimakis_beta_star(n, k, e1, 1, alpha)
                        assert got == want

    def test_identity_case(self):
        sys_ = opp.OppSystem(n=6, k=2, M=1, D=(4,))
        alpha = F(2, 3)
        assert opp.beta_tilde_oracle(sys_, alpha, 4) == dimakis_beta_star(6, 2, 4, 1, alpha)


class TestFlowGraph:
    def test_single_d_single_k(self):
        sys_ = opp.OppSystem(n=2, k=1, M=1, D=(1,))
        cut = opp.flowgraph_mincut(sys_, F(2, 3), {1: F(1, 4)}, (1,))
        assert cut == F(1, 4)

    def test_storage_limited_with_unbounded_beta(self):
        sys_ = opp.OppSystem(n=4, k=2, M=1, D=(3, 2))
        beta = {3: opp.UNBOUNDED, 2: opp.UNBOUNDED}
        cut = opp.flowgraph_mincut(sys_, F(3, 5), beta, (3, 2))
        assert cut == 2 * F(3, 5)

    def test_worst_case_sequence_matches_bound(self):
        sys_ = opp.OppSystem(n=5, k=2, M=1, D=(3, 2))
        for b3, b2 in [(F(1, 4), F(1, 2)), (F(1, 3), F(1, 5)), (F(1, 2), F(1, 2))]:
            beta = {3: b3, 2: b2}
            for alpha in (F(1, 4), F(1, 2), F(1), F(3)):
                seq = opp.worst_case_sequence(sys_, alpha, beta)
                cut = opp.flowgraph_mincut(sys_, alpha, beta, seq)
                assert cut == opp.theorem_bound(sys_, alpha, beta)

    def test_no_sequence_beats_bound(self):
        sys_ = opp.OppSystem(n=5, k=2, M=1, D=(3, 2))
        beta = {3: F(1, 3), 2: F(2, 5)}
        for alpha in (F(1, 3), F(2, 3), F(3, 2)):
            bound = opp.theorem_bound(sys_, alpha, beta)
            cuts = [
                opp.flowgraph_mincut(sys_, alpha, beta, seq)
                for seq in product(sys_.D, repeat=sys_.k)
            ]
            assert min(cuts) == bound
            assert all(c >= bound for c in cuts)

    def test_instance_too_large(self):
        sys_ = opp.OppSystem(n=7, k=2, M=1, D=(3, 2))
        with pytest.raises(opp.InstanceTooLarge):
            opp.flowgraph_mincut(sys_, 1, {3: 1, 2: 1}, (3, 2))

    def test_sequence_validation(self):
        sys_ = opp.OppSystem(n=5, k=2, M=1, D=(3, 2))
        with pytest.raises(ValueError):
            opp.flowgraph_mincut(sys_, 1, {3: 1, 2: 1}, (3,))
        with pytest.raises(ValueError):
            opp.flowgraph_mincut(sys_, 1, {3: 1, 2: 1}, (3, 4))


class TestMsrCorollaryExhaustive:
    def test_all_menus_up_to_n10(self):
        # MSR points for every d are simultaneously achievable, for every
        # non-empty menu D in {k..n-1}
        for n in range(3, 11):
            for k in range(1, n):
                ds = list(range(k, n))
                for size in range(1, len(ds) + 1):
                    for D in combinations(sorted(ds, reverse=True), size):
                        sys_ = opp.OppSystem(n=n, k=k, M=1, D=D)
                        assert opp.feasible(sys_, F(1, k), msr_beta_map(n, k, 1, D))


class TestCsv:
    def test_loss_curve_header_and_rows(self):
        sys_ = opp.OppSystem(n=10, k=5, M=1, D=(9, 7))
        buf = io.StringIO()
        opp.emit_loss_csv(sys_, [F(1, 5), F(1, 4)], buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "alpha,beta_d1_star,beta_d2_star,beta_d2_tilde"
        assert lines[1].startswith("1/5,1/25,1/15,")
        assert len(lines) == 3
