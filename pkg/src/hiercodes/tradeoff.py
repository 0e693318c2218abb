"""Storage / repair-bandwidth tradeoff for clustered systems, in exact rationals.

Everything here is computed with ``fractions.Fraction``; no floating point
is used anywhere in this module. Conventions:

* gamma is the total cross-cluster traffic per repair event and beta the
  per-helper-cluster share, related by gamma = d_b * beta;
* the min-cut storage term is (n_l - d_l - 1) * k * alpha. The per-disk
  capacity factor alpha is required for the threshold function and the cut
  to be mutually consistent, which ``alpha_star_oracle`` verifies.

The threshold function ``alpha_star`` locates the regime from the gamma
breakpoints and evaluates the matching branch; ``alpha_star_oracle``
recomputes it independently by inverting the min-cut over the piecewise
linear segments in alpha, so the two must agree exactly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Optional, Sequence

from .params import HierParams

Rational = Fraction


class InfeasibleGamma(ValueError):
    """No storage level achieves the file size at this gamma."""


class InfeasibleAlpha(ValueError):
    """alpha below the storage minimum M/k."""


class Infeasible(ValueError):
    """The min-cut saturates below the file size."""


class ROutOfRange(ValueError):
    """Replication degree outside the admissible interval."""


@dataclass(frozen=True)
class TradeoffPoint:
    """A point on the tradeoff: per-disk storage alpha plus either total
    repair bandwidth gamma or a per-d bandwidth map for flat systems."""

    alpha: Fraction
    gamma: Optional[Fraction] = None
    beta_map: Optional[dict] = None

    def __post_init__(self):
        if (self.gamma is None) == (self.beta_map is None):
            raise ValueError("exactly one of gamma / beta_map must be set")
        if self.alpha < 0 or (self.gamma is not None and self.gamma < 0):
            raise ValueError("alpha and gamma must be nonnegative")


def fgh(params: HierParams, i: int, M) -> tuple[Fraction, Fraction, Fraction]:
    """The three regime coefficients at index i, 0 <= i <= k."""
    if not 0 <= i <= params.k:
        raise ValueError(f"need 0 <= i <= k={params.k}, got {i}")
    M = Fraction(M)
    k, d_b = params.k, params.d_b
    f = 2 * M * d_b / Fraction((2 * k - i - 1) * i + 2 * k * (d_b - k + 1))
    g = Fraction((2 * d_b - 2 * k + i + 1) * i, 2 * d_b)
    h = Fraction(d_b - k + 1 + i, d_b)
    return f, g, h


def gamma_breakpoint(params: HierParams, M, i: int) -> Fraction:
    """gamma_i = 1 / (1/f(i) + k (n_l - d_l - 1) h(i) / M)."""
    M = Fraction(M)
    f, _, h = fgh(params, i, M)
    return 1 / (1 / f + params.k * (params.local - 1) * h / M)


def gamma_breakpoints(params: HierParams, M) -> list[Fraction]:
    """[gamma_0, ..., gamma_{k-1}], strictly decreasing."""
    return [gamma_breakpoint(params, M, i) for i in range(params.k)]


def alpha_star_regime(params: HierParams, M, gamma) -> tuple[Fraction, int]:
    """Minimum feasible per-disk storage at total repair bandwidth gamma,
    together with the regime index (0..k) of the branch that applies."""
    M = Fraction(M)
    gamma = Fraction(gamma)
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    k = params.k
    bps = gamma_breakpoints(params, M)
    if gamma >= bps[0]:
        return M / (k * params.local), 0
    for i in range(1, k):
        if gamma >= bps[i]:
            _, g, _ = fgh(params, i, M)
            return (M - g * gamma) / (k * params.local - i), i
    if params.local <= 1:
        raise InfeasibleGamma(
            f"gamma={gamma} lies below the last breakpoint {bps[-1]} and "
            f"n_l - d_l = 1 leaves no storage-only regime"
        )
    _, g, _ = fgh(params, k, M)
    return (M - g * gamma) / (k * (params.local - 1)), k


def alpha_star(params: HierParams, M, gamma) -> Fraction:
    return alpha_star_regime(params, M, gamma)[0]


def mincut(params: HierParams, alpha, beta) -> Fraction:
    """(n_l - d_l - 1) k alpha + sum_{i=0}^{k-1} min((d_b - i) beta, alpha)."""
    alpha = Fraction(alpha)
    beta = Fraction(beta)
    if alpha < 0 or beta < 0:
        raise ValueError("alpha and beta must be nonnegative")
    cut = (params.local - 1) * params.k * alpha
    for i in range(params.k):
        cut += min((params.d_b - i) * beta, alpha)
    return cut


def alpha_star_oracle(params: HierParams, M, gamma) -> Fraction:
    """Minimal alpha with mincut(alpha, gamma/d_b) >= M, solved exactly.

    The cut is piecewise linear and nondecreasing in alpha with slope
    changes at alpha = (d_b - i) beta; each segment is solved in turn.
    Independent of alpha_star by construction.
    """
    M = Fraction(M)
    gamma = Fraction(gamma)
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    beta = gamma / params.d_b
    base = (params.local - 1) * params.k
    thresholds = [(params.d_b - i) * beta for i in range(params.k)]
    cuts = sorted(set(thresholds))
    lo = Fraction(0)
    for hi in cuts + [None]:
        growing = sum(1 for t in thresholds if t > lo)
        const = sum(t for t in thresholds if t <= lo)
        slope = base + growing
        if slope > 0:
            cand = (M - const) / slope
            if cand < lo:
                cand = lo
            if hi is None or cand <= hi:
                return cand
        elif const >= M:
            return lo
        if hi is not None:
            lo = hi
    raise Infeasible(f"min-cut saturates at {const} < M={M} for gamma={gamma}")


@dataclass(frozen=True)
class ExtremalPoints:
    msr: TradeoffPoint
    mbr: Optional[TradeoffPoint]  # undefined when n_l - d_l = 1
    ambr: TradeoffPoint
    msr_exact_beta: Fraction  # asymptotic per-cluster share, o(M) terms dropped


def ambr_point(params: HierParams, M) -> TradeoffPoint:
    """The achievable bandwidth-lean point of the product-matrix code."""
    M = Fraction(M)
    kp, dp = params.k_prime, params.d_prime
    denom = 2 * kp * dp - kp * kp + kp
    return TradeoffPoint(
        alpha=2 * M * dp / Fraction(denom),
        gamma=2 * M * params.d_b * params.local / Fraction(denom),
    )


def extremal_points(params: HierParams, M) -> ExtremalPoints:
    M = Fraction(M)
    k, d_b = params.k, params.d_b
    msr = TradeoffPoint(
        alpha=M / (k * params.local),
        gamma=M * d_b / (k * (d_b - k + 1) * params.local),
    )
    mbr = None
    if params.local > 1:
        mbr = TradeoffPoint(alpha=M / (k * (params.local - 1)), gamma=Fraction(0))
    exact_beta = M / (k * (d_b + 1 - k) * params.local)
    return ExtremalPoints(msr=msr, mbr=mbr, ambr=ambr_point(params, M), msr_exact_beta=exact_beta)


def dimakis_beta_star(n: int, k: int, d: int, M, alpha) -> Fraction:
    """Minimal per-helper bandwidth beta with
    sum_{i=0}^{k-1} min(alpha, (d - i) beta) >= M, for a flat (n, k) system."""
    if not (1 <= k <= d <= n - 1):
        raise ValueError(f"need 1 <= k <= d <= n-1, got n={n} k={k} d={d}")
    M = Fraction(M)
    alpha = Fraction(alpha)
    if alpha < M / k:
        raise InfeasibleAlpha(f"alpha={alpha} < M/k = {M / k}")
    # Term i saturates at beta = alpha / (d - i); walk the segments in beta.
    thresholds = [alpha / (d - i) for i in range(k)]
    cuts = sorted(set(thresholds))
    lo = Fraction(0)
    for hi in cuts + [None]:
        saturated = sum(1 for t in thresholds if t <= lo)
        slope = sum(d - i for i in range(k) if thresholds[i] > lo)
        const = saturated * alpha
        if const >= M:
            return lo
        if slope > 0:
            cand = (M - const) / slope
            if cand < lo:
                cand = lo
            if hi is None or cand <= hi:
                return cand
        if hi is not None:
            lo = hi
    raise Infeasible(f"total download saturates below M={M}")  # unreachable given alpha >= M/k


def _binom(a: int, b: int) -> int:
    if b < 0 or b > a or a < 0:
        return 0
    return comb(a, b)


def chao_r_bounds(params: HierParams) -> tuple[int, Fraction]:
    lo = params.n_b - params.d_b + 1
    hi = params.n_b - params.d_b + Fraction(params.d_b, params.d_b - params.k + 1)
    return lo, hi


def chao_params(params: HierParams, r: int, beta) -> tuple[Fraction, Fraction]:
    """(alpha, M) for the replication-based layered construction at degree r.

    alpha = d_b beta / (r - n_b + d_b) and M follows the displayed sum with
    T_c = sum_{i=n_b-d_b+1}^{min(r, n_b-k)} (i + n_b - d_b) C(n_b-k, i) C(k, r-i);
    an empty sum is 0 and out-of-range binomials are 0. The admissible r
    interval is inclusive at both ends.
    """
    beta = Fraction(beta)
    lo, hi = chao_r_bounds(params)
    if not (lo <= r <= hi):
        raise ROutOfRange(f"r={r} outside [{lo}, {hi}]")
    n_b, k, d_b = params.n_b, params.k, params.d_b
    alpha = d_b * beta / Fraction(r - n_b + d_b)
    t_c = sum(
        (i + n_b - d_b) * _binom(n_b - k, i) * _binom(k, r - i)
        for i in range(n_b - d_b + 1, min(r, n_b - k) + 1)
    )
    M = (
        Fraction(n_b * d_b, r)
        - Fraction(d_b * t_c, (r + d_b - n_b) * _binom(n_b - 1, r - 1))
    ) * params.local * beta
    return alpha, M


def gamma_grid(lo, hi, n: int) -> list[Fraction]:
    """n exact rationals evenly spaced on [lo, hi] (endpoints included)."""
    lo = Fraction(lo)
    hi = Fraction(hi)
    if n < 1:
        raise ValueError("need at least one grid point")
    if n == 1:
        return [lo]
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def emit_curve_csv(params: HierParams, M, gammas: Iterable, stream) -> None:
    """CSV with columns gamma, alpha_star, regime_index; rationals as p/q."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["gamma", "alpha_star", "regime_index"])
    for gamma in gammas:
        alpha, regime = alpha_star_regime(params, M, gamma)
        writer.writerow([str(Fraction(gamma)), str(alpha), regime])
