"""Opportunistic repair for flat (n, k) systems with a helper-count menu D.

A single code must support repair from any d in D (d helpers, beta_d per
helper). Feasibility of (alpha, {beta_d}) is governed by

    sum_{i=0}^{k-1} min(alpha, min_{d in D} (d - i) beta_d) >= M,

evaluated exactly in rationals. Below the storage threshold alpha_o the
menu costs nothing: every beta_d can sit on its individual optimum
beta*_d(alpha). Above it, fixing beta_{d_1} on its optimum forces the
smaller d values onto beta~_d = (d_1-k+1)/(d-k+1) beta*_{d_1}, which
``beta_tilde_oracle`` re-derives by direct minimization.

``flowgraph_mincut`` is an independent check on small instances: it builds
the layered information-flow graph for a given sequence of helper counts
and computes the exact min-cut by integer max-flow after clearing
denominators.
"""

from __future__ import annotations

import csv
from collections import defaultdict, deque
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Optional, Sequence

from .tradeoff import InfeasibleAlpha, dimakis_beta_star


class MissingBeta(KeyError):
    """beta_map does not cover every d in D."""


class InstanceTooLarge(ValueError):
    """Flow-graph oracle is restricted to n <= 6, k <= 3, |D| <= 2."""


class _Unbounded:
    """Explicit marker for an unconstrained repair bandwidth."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNBOUNDED"


UNBOUNDED = _Unbounded()


@dataclass(frozen=True)
class OppSystem:
    n: int
    k: int
    M: Fraction
    D: tuple  # strictly decreasing, all in [k, n-1]

    def __post_init__(self):
        object.__setattr__(self, "M", Fraction(self.M))
        object.__setattr__(self, "D", tuple(int(d) for d in self.D))
        if not self.D:
            raise ValueError("D must be non-empty")
        if any(self.D[i] <= self.D[i + 1] for i in range(len(self.D) - 1)):
            raise ValueError(f"D must be strictly decreasing, got {self.D}")
        if self.D[-1] < self.k or self.D[0] >= self.n:
            raise ValueError(f"every d must satisfy k <= d < n, got D={self.D}")
        if self.k < 1:
            raise ValueError("k must be >= 1")

    @property
    def d1(self) -> int:
        return self.D[0]


def _betas(sys: OppSystem, beta_map: Mapping) -> dict:
    out = {}
    for d in sys.D:
        if d not in beta_map:
            raise MissingBeta(f"beta_map lacks d={d}")
        v = beta_map[d]
        out[d] = v if v is UNBOUNDED else Fraction(v)
    return out


def _inner_term(sys: OppSystem, betas: dict, alpha: Fraction, i: int) -> Fraction:
    finite = [(d - i) * betas[d] for d in sys.D if betas[d] is not UNBOUNDED]
    if not finite:
        return alpha
    return min(alpha, min(finite))


def theorem_bound(sys: OppSystem, alpha, beta_map: Mapping) -> Fraction:
    """sum_{i=0}^{k-1} min(alpha, min_d (d - i) beta_d), exactly."""
    alpha = Fraction(alpha)
    betas = _betas(sys, beta_map)
    return sum(_inner_term(sys, betas, alpha, i) for i in range(sys.k))


def feasible(sys: OppSystem, alpha, beta_map: Mapping) -> bool:
    return theorem_bound(sys, alpha, beta_map) >= sys.M


def alpha_o(k: int, d1: int, M):
    """Storage threshold below which the menu incurs no bandwidth loss.

    Returns UNBOUNDED for k = 1 (never any loss).
    """
    if not 1 <= k <= d1:
        raise ValueError(f"need 1 <= k <= d1, got k={k} d1={d1}")
    if k == 1:
        return UNBOUNDED
    M = Fraction(M)
    return M * (d1 - k + 2) / Fraction(k * (d1 - k + 2) - 1)


def beta_tilde(sys: OppSystem, alpha) -> dict:
    """Smallest simultaneously-achievable betas given beta_{d_1} on its optimum:
    beta_{d_1} = beta*_{d_1}(alpha), beta_d = (d_1-k+1)/(d-k+1) beta_{d_1}."""
    alpha = Fraction(alpha)
    if alpha < sys.M / sys.k:
        raise InfeasibleAlpha(f"alpha={alpha} < M/k = {sys.M / sys.k}")
    lead = dimakis_beta_star(sys.n, sys.k, sys.d1, sys.M, alpha)
    out = {sys.d1: lead}
    for d in sys.D[1:]:
        out[d] = Fraction(sys.d1 - sys.k + 1, d - sys.k + 1) * lead
    return out


def beta_tilde_oracle(sys: OppSystem, alpha, d_secondary: int) -> Fraction:
    """Smallest beta_{d_secondary} compatible with beta_{d_1} = beta*_{d_1},
    derived directly from the per-i constraints of the feasibility sum.

    Every i imposes (d_secondary - i) beta >= min(alpha, (d_1 - i) beta*),
    so the minimum feasible beta is the largest of these lower bounds
    (both ratios grow with i, so i = k-1 binds). Must coincide with the
    closed form (d_1-k+1)/(d_secondary-k+1) beta*_{d_1}.
    """
    alpha = Fraction(alpha)
    e1, e2 = sys.d1, int(d_secondary)
    if not sys.k <= e2 <= e1:
        raise ValueError(f"need k <= d_secondary <= d_1, got {e2} vs d_1={e1}")
    lead = dimakis_beta_star(sys.n, sys.k, e1, sys.M, alpha)
    return max(
        min(alpha, (e1 - i) * lead) / Fraction(e2 - i)
        for i in range(sys.k)
    )


# --- information-flow-graph oracle ---------------------------------------------

def worst_case_sequence(sys: OppSystem, alpha, beta_map: Mapping) -> tuple:
    """Helper-count choice e_i = argmin_d (d - i) beta_d for each of the k
    newcomers (ties toward the smaller d; UNBOUNDED never wins)."""
    alpha = Fraction(alpha)
    betas = _betas(sys, beta_map)
    seq = []
    for i in range(sys.k):
        best = None
        for d in sorted(sys.D):
            if betas[d] is UNBOUNDED:
                continue
            val = (d - i) * betas[d]
            if best is None or val < best[0]:
                best = (val, d)
        seq.append(best[1] if best else min(sys.D))
    return tuple(seq)


def _max_flow_int(edges: Mapping, source: int, sink: int) -> int:
    cap = defaultdict(int)
    adj = defaultdict(set)
    for (u, v), c in edges.items():
        cap[(u, v)] += c
        adj[u].add(v)
        adj[v].add(u)
    flow = 0
    while True:
        parent = {source: None}
        queue = deque([source])
        while queue and sink not in parent:
            u = queue.popleft()
            for v in adj[u]:
                if v not in parent and cap[(u, v)] > 0:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            return flow
        path = []
        v = sink
        while parent[v] is not None:
            path.append((parent[v], v))
            v = parent[v]
        push = min(cap[e] for e in path)
        for u, v in path:
            cap[(u, v)] -= push
            cap[(v, u)] += push
        flow += push


def flowgraph_mincut(sys: OppSystem, alpha, beta_map: Mapping,
                     failure_sequence: Sequence[int]) -> Fraction:
    """Exact min-cut of the layered flow graph for one repair history.

    n initial nodes take alpha from the source; newcomer n+i replaces a
    node by connecting to the failure_sequence[i-1] immediately preceding
    nodes; the collector reads the last k newcomers. Capacities are scaled
    to integers by the lcm of their denominators, so max-flow is exact.
    """
    if sys.n > 6 or sys.k > 3 or len(sys.D) > 2:
        raise InstanceTooLarge(f"oracle limited to n<=6, k<=3, |D|<=2, got {sys}")
    seq = tuple(int(d) for d in failure_sequence)
    if len(seq) != sys.k:
        raise ValueError(f"failure_sequence must have k={sys.k} entries, got {len(seq)}")
    if any(d not in sys.D for d in seq):
        raise ValueError(f"failure_sequence entries must come from D={sys.D}")

    alpha = Fraction(alpha)
    betas = _betas(sys, beta_map)
    finite = [alpha] + [b for b in betas.values() if b is not UNBOUNDED]
    scale = lcm(*(f.denominator for f in finite)) if finite else 1

    def cap_of(x) -> Optional[int]:
        return None if x is UNBOUNDED else int(x * scale)

    n, k = sys.n, sys.k
    total_nodes = n + k

    def x_in(v):
        return 2 * v - 1

    def x_out(v):
        return 2 * v

    source = 0
    sink = 2 * total_nodes + 1

    edges: dict = {}
    alpha_cap = cap_of(alpha)
    beta_caps = {d: cap_of(b) for d, b in betas.items()}
    finite_total = alpha_cap * total_nodes + sum(
        (beta_caps[d] if beta_caps[d] is not None else 0) * d for d in seq
    )
    inf_cap = finite_total + 1

    for v in range(1, n + 1):
        edges[(source, x_in(v))] = inf_cap
    for v in range(1, total_nodes + 1):
        edges[(x_in(v), x_out(v))] = alpha_cap
    for j, d in enumerate(seq, start=1):
        newcomer = n + j
        b = beta_caps[d] if beta_caps[d] is not None else inf_cap
        for p in range(newcomer - d, newcomer):
            edges[(x_out(p), x_in(newcomer))] = b
    for j in range(1, k + 1):
        edges[(x_out(n + j), sink)] = inf_cap

    return Fraction(_max_flow_int(edges, source, sink), scale)


def emit_loss_csv(sys: OppSystem, alphas: Iterable, stream) -> None:
    """Loss-curve CSV: alpha, per-d individual optima beta_di_star, then the
    simultaneously-achievable beta_di_tilde for the secondary d values."""
    writer = csv.writer(stream, lineterminator="\n")
    header = ["alpha"]
    header += [f"beta_d{i + 1}_star" for i in range(len(sys.D))]
    header += [f"beta_d{i + 1}_tilde" for i in range(1, len(sys.D))]
    writer.writerow(header)
    for alpha in alphas:
        alpha = Fraction(alpha)
        stars = [dimakis_beta_star(sys.n, sys.k, d, sys.M, alpha) for d in sys.D]
        tilde = beta_tilde(sys, alpha)
        row = [str(alpha)] + [str(b) for b in stars]
        row += [str(tilde[d]) for d in sys.D[1:]]
        writer.writerow(row)
