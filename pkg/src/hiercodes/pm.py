"""Product-matrix exact-repair code for clustered storage.

Construction
------------
Data is packed into a d' x d' symmetric message matrix M = [[S, T], [T^t, 0]]
with S k' x k' symmetric and T k' x (d'-k'). An encoding matrix
psi = [Phi | Delta] has n_b(n_l-d_l) rows grouped into per-cluster blocks
psi_i of n_l-d_l rows each, and a combiner B (n_l x (n_l-d_l), identity on
top, any n_l-d_l rows independent) spreads each cluster block over its n_l
disks: disk j of cluster i stores the d'-symbol vector B_j psi_i M.

Validity needs two conditions on psi:

1. any k' rows of Phi are linearly independent;
2. for every cluster i, every d_b-subset of other clusters and every
   (n_l-d_l-1)-subset of local disk indices, the d' x d' matrix stacking
   the local rows B_m psi_i over the helper blocks psi_j is nonsingular.

Repair of d_l+1 failed disks in a cluster downloads one symbol from each
of the first n_l-d_l disks of every helper cluster (beta = n_l-d_l per
cluster, gamma = d_b(n_l-d_l) total), rebuilds one failed systematic disk
by a d' x d' solve, then restores the rest locally through B. Full
reconstruction contacts k clusters and peels T, then S.

Clusters and disks are 0-indexed throughout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb
from typing import Iterable, Optional, Sequence

import numpy as np

from .field import FieldMatrix, PrimeField, ShapeMismatch, Singular, vandermonde, vstack
from .mds import make_systematic_mds
from .params import HierParams
from .tradeoff import TradeoffPoint, ambr_point as _ambr_point

VALIDATION_BUDGET = 10**6
RANDOM_RETRIES = 32


class ConditionsUnsatisfiable(ValueError):
    """No valid encoding matrix was found within the retry budget."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class BudgetExceeded(ValueError):
    """Exhaustive validation would exceed the subset budget."""


class SingularRepairMatrix(ValueError):
    """Repair solve hit a singular matrix: condition 2 is violated."""


class SingularPhiLeft(ValueError):
    """Reconstruction solve hit a singular matrix: condition 1 is violated."""


# --- encoding matrix sources -------------------------------------------------

@dataclass(frozen=True)
class VandermondePsi:
    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))


@dataclass(frozen=True)
class ExplicitPsi:
    matrix: FieldMatrix


@dataclass(frozen=True)
class RandomPsi:
    seed: int
    retries: int = RANDOM_RETRIES


# --- validation modes ---------------------------------------------------------

@dataclass(frozen=True)
class Exhaustive:
    pass


@dataclass(frozen=True)
class Sampled:
    count: int
    seed: int = 0


@dataclass
class ValidationReport:
    mode: object
    cond1_checked: int = 0
    cond1_violations: list = dc_field(default_factory=list)
    cond2_checked: int = 0
    cond2_violations: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.cond1_violations and not self.cond2_violations

    def summary(self) -> str:
        state = "ok" if self.ok else "VIOLATED"
        return (
            f"condition 1: {len(self.cond1_violations)} violations / {self.cond1_checked} checks; "
            f"condition 2: {len(self.cond2_violations)} violations / {self.cond2_checked} checks ({state})"
        )


@dataclass(frozen=True)
class PmCode:
    params: HierParams
    field: PrimeField
    psi: FieldMatrix       # n_b(n_l-d_l) x d'
    b_matrix: FieldMatrix  # n_l x (n_l-d_l), identity on top

    def __post_init__(self):
        p = self.params
        if self.psi.rows != p.n_b * p.local or self.psi.cols != p.d_prime:
            raise ShapeMismatch(
                f"psi must be {p.n_b * p.local}x{p.d_prime}, got {self.psi.rows}x{self.psi.cols}"
            )
        b = self.b_matrix
        if b.rows != p.n_l or b.cols != p.local:
            raise ShapeMismatch(f"B must be {p.n_l}x{p.local}, got {b.rows}x{b.cols}")
        if not np.array_equal(b.array[: p.local], np.eye(p.local, dtype=np.int64)):
            raise ValueError("top block of B must be the identity")
        for rows in combinations(range(p.n_l), p.local):
            if b.take_rows(rows).rank() < p.local:
                raise ValueError(f"rows {rows} of B are dependent")

    @property
    def phi(self) -> FieldMatrix:
        return self.psi.slice_cols(0, self.params.k_prime)

    @property
    def delta(self) -> FieldMatrix:
        return self.psi.slice_cols(self.params.k_prime, self.params.d_prime)

    def psi_block(self, cluster: int) -> FieldMatrix:
        lo = cluster * self.params.local
        return self.psi.take_rows(range(lo, lo + self.params.local))

    def psi_row(self, cluster: int, disk: int) -> FieldMatrix:
        """Encoding row of systematic disk ``disk`` (< n_l - d_l) in ``cluster``."""
        return self.psi.row(cluster * self.params.local + disk)

    def local_row(self, cluster: int, disk: int) -> FieldMatrix:
        """B_disk psi_cluster, the 1 x d' encoding row of any disk."""
        return self.b_matrix.row(disk) @ self.psi_block(cluster)

    @property
    def message_size(self) -> int:
        return self.params.message_size


# --- message matrix -----------------------------------------------------------

def message_matrix(params: HierParams, field: PrimeField, symbols: Sequence[int]) -> FieldMatrix:
    """Pack symbols into the symmetric d' x d' message matrix.

    Canonical order: upper triangle of S row-major, then T row-major.
    """
    kp, dp = params.k_prime, params.d_prime
    if len(symbols) != params.message_size:
        raise ShapeMismatch(f"expected {params.message_size} symbols, got {len(symbols)}")
    m = np.zeros((dp, dp), dtype=np.int64)
    it = iter(symbols)
    for i in range(kp):
        for j in range(i, kp):
            v = field.element(next(it))
            m[i, j] = v
            m[j, i] = v
    for i in range(kp):
        for j in range(kp, dp):
            v = field.element(next(it))
            m[i, j] = v
            m[j, i] = v
    return FieldMatrix(field, m)


def message_symbols(params: HierParams, s: FieldMatrix, t: FieldMatrix) -> list[int]:
    """Inverse of message_matrix, from the recovered S and T blocks."""
    kp, dp = params.k_prime, params.d_prime
    if s.rows != kp or s.cols != kp or t.rows != kp or t.cols != dp - kp:
        raise ShapeMismatch("S/T blocks have wrong shapes")
    out = []
    for i in range(kp):
        for j in range(i, kp):
            out.append(int(s.array[i, j]))
    out.extend(int(x) for x in t.array.reshape(-1))
    return out


# --- cluster state ------------------------------------------------------------

@dataclass(frozen=True)
class ClusterState:
    """Per-disk contents; a failed disk holds None instead of its vector."""

    contents: tuple  # tuple[n_b] of tuple[n_l] of (tuple[int] | None)

    def disk(self, cluster: int, disk: int):
        return self.contents[cluster][disk]

    def is_live(self, cluster: int, disk: int) -> bool:
        return self.contents[cluster][disk] is not None

    def live_disks(self, cluster: int) -> list[int]:
        return [j for j, c in enumerate(self.contents[cluster]) if c is not None]

    def failed_disks(self, cluster: int) -> list[int]:
        return [j for j, c in enumerate(self.contents[cluster]) if c is None]

    def cluster_live(self, cluster: int) -> bool:
        return all(c is not None for c in self.contents[cluster])

    @property
    def n_clusters(self) -> int:
        return len(self.contents)


def fail_disks(state: ClusterState, cluster: int, disks: Iterable[int]) -> ClusterState:
    """Mark disks failed; their contents are discarded, not just hidden."""
    disks = set(disks)
    rows = []
    for i, row in enumerate(state.contents):
        if i == cluster:
            rows.append(tuple(None if j in disks else c for j, c in enumerate(row)))
        else:
            rows.append(row)
    return ClusterState(tuple(rows))


@dataclass(frozen=True)
class RepairAccounting:
    """Traffic of one repair event, in field symbols."""

    gamma: int                 # total cross-cluster symbols
    beta_per_helper: int       # symbols sent by each helper cluster
    helpers: tuple             # helper cluster indices
    alpha: int                 # symbols stored per repaired disk
    repaired: tuple            # repaired disk indices


# --- construction -------------------------------------------------------------

def _default_b_matrix(params: HierParams, field: PrimeField) -> FieldMatrix:
    return make_systematic_mds(field, params.n_l, params.local).generator


def _condition_counts(params: HierParams) -> tuple[int, int]:
    c1 = comb(params.n_b * params.local, params.k_prime)
    c2 = params.n_b * comb(params.n_b - 1, params.d_b) * comb(params.n_l, params.local - 1)
    return c1, c2


def validate_conditions(code: PmCode, mode=Exhaustive()) -> ValidationReport:
    """Check conditions 1 and 2, exhaustively or by sampling.

    Exhaustive mode iterates every k'-subset of Phi rows and every
    (cluster, helper-subset, local-subset) triple; it refuses to run when
    the total exceeds VALIDATION_BUDGET subsets.
    """
    p = code.params
    kp, dp = p.k_prime, p.d_prime
    report = ValidationReport(mode=mode)
    c1_total, c2_total = _condition_counts(p)

    if isinstance(mode, Exhaustive):
        if c1_total + c2_total > VALIDATION_BUDGET:
            raise BudgetExceeded(
                f"{c1_total + c2_total} subsets exceed the exhaustive budget {VALIDATION_BUDGET}"
            )
        cond1_iter = combinations(range(p.n_b * p.local), kp)
        cond2_iter = (
            (i, helpers, locals_)
            for i in range(p.n_b)
            for helpers in combinations([c for c in range(p.n_b) if c != i], p.d_b)
            for locals_ in combinations(range(p.n_l), p.local - 1)
        )
    elif isinstance(mode, Sampled):
        rng = np.random.default_rng(mode.seed)
        n_rows = p.n_b * p.local

        def _cond1_samples():
            for _ in range(mode.count):
                yield tuple(sorted(rng.choice(n_rows, size=kp, replace=False)))

        def _cond2_samples():
            for _ in range(mode.count):
                i = int(rng.integers(p.n_b))
                others = [c for c in range(p.n_b) if c != i]
                helpers = tuple(sorted(int(others[x]) for x in rng.choice(len(others), size=p.d_b, replace=False)))
                locals_ = tuple(sorted(int(x) for x in rng.choice(p.n_l, size=p.local - 1, replace=False)))
                yield i, helpers, locals_

        cond1_iter = _cond1_samples()
        cond2_iter = _cond2_samples()
    else:
        raise TypeError(f"unknown validation mode {mode!r}")

    phi = code.phi
    for rows in cond1_iter:
        report.cond1_checked += 1
        if phi.take_rows(rows).rank() < kp:
            report.cond1_violations.append(tuple(rows))

    for i, helpers, locals_ in cond2_iter:
        report.cond2_checked += 1
        stack = [code.local_row(i, m) for m in locals_]
        stack.extend(code.psi_block(j) for j in helpers)
        if vstack(stack).rank() < dp:
            report.cond2_violations.append((i, tuple(helpers), tuple(locals_)))

    return report


def build_pm_code(params: HierParams, field: PrimeField, psi_source,
                  b_matrix: Optional[FieldMatrix] = None) -> PmCode:
    """Build a validated code from a Vandermonde, explicit, or random psi.

    Random mode redraws up to ``retries`` times; validation is exhaustive
    when the subset counts fit the budget and sampled otherwise.
    """
    b = b_matrix if b_matrix is not None else _default_b_matrix(params, field)
    c1, c2 = _condition_counts(params)
    mode = Exhaustive() if c1 + c2 <= VALIDATION_BUDGET else Sampled(10**4)

    if isinstance(psi_source, (VandermondePsi, ExplicitPsi)):
        if isinstance(psi_source, VandermondePsi):
            psi = vandermonde(field, psi_source.points, params.d_prime)
        else:
            psi = psi_source.matrix
        code = PmCode(params, field, psi, b)
        report = validate_conditions(code, mode)
        if not report.ok:
            raise ConditionsUnsatisfiable(f"supplied psi fails validation: {report.summary()}", report)
        return code

    if isinstance(psi_source, RandomPsi):
        rng = np.random.default_rng(psi_source.seed)
        last = None
        for _ in range(psi_source.retries):
            psi = FieldMatrix(
                field,
                rng.integers(0, field.q, size=(params.n_b * params.local, params.d_prime)),
            )
            code = PmCode(params, field, psi, b)
            last = validate_conditions(code, mode)
            if last.ok:
                return code
        raise ConditionsUnsatisfiable(
            f"no valid psi over GF({field.q}) in {psi_source.retries} draws: {last.summary()}",
            last,
        )

    raise TypeError(f"unknown psi source {psi_source!r}")


# --- encode / repair / reconstruct --------------------------------------------

def encode_clusters(code: PmCode, message: Sequence[int]) -> ClusterState:
    """Fill all n_b * n_l disks; disk (i, j) holds B_j psi_i M."""
    p = code.params
    m = message_matrix(p, code.field, message)
    clusters = []
    for i in range(p.n_b):
        z = code.psi_block(i) @ m          # (n_l-d_l) x d'
        disks = code.b_matrix @ z          # n_l x d'
        clusters.append(tuple(tuple(int(x) for x in row) for row in disks.array))
    return ClusterState(tuple(clusters))


def _content_matrix(code: PmCode, state: ClusterState, cluster: int, disks: Sequence[int]) -> FieldMatrix:
    rows = [state.disk(cluster, j) for j in disks]
    if any(r is None for r in rows):
        raise ValueError(f"requested failed disk contents in cluster {cluster}")
    return FieldMatrix(code.field, np.array(rows, dtype=np.int64))


def _cluster_block_contents(code: PmCode, state: ClusterState, cluster: int) -> FieldMatrix:
    """Recover Z = psi_cluster M from any n_l-d_l live disks of the cluster."""
    p = code.params
    live = state.live_disks(cluster)
    if len(live) < p.local:
        raise ValueError(f"cluster {cluster} has only {len(live)} live disks, need {p.local}")
    syst = list(range(p.local))
    if all(state.is_live(cluster, j) for j in syst):
        return _content_matrix(code, state, cluster, syst)
    chosen = live[: p.local]
    b_rows = code.b_matrix.take_rows(chosen)
    return b_rows.solve(_content_matrix(code, state, cluster, chosen))


def repair_cluster(code: PmCode, state: ClusterState, failed_cluster: int,
                   failed_disks: Iterable[int], helper_clusters: Iterable[int]
                   ) -> tuple[ClusterState, RepairAccounting]:
    """Exactly restore d_l+1 failed disks of one cluster from d_b helpers.

    Each helper cluster contributes n_l-d_l symbols (one per systematic
    disk): the projection of that disk's vector onto the target row
    psi_{i,t}. Together with the projections of the surviving local disks
    this yields a d' x d' solve for M psi_{i,t}^t; symmetry of M turns the
    solution into the target disk's contents, and the remaining failed
    disks follow from the B rows now available (the MDS step).
    """
    p = code.params
    failed = sorted(set(int(x) for x in failed_disks))
    helpers = sorted(set(int(x) for x in helper_clusters))
    if len(failed) != p.d_l + 1:
        raise ValueError(f"repair covers exactly d_l+1={p.d_l + 1} disks, got {len(failed)}")
    if any(not 0 <= j < p.n_l for j in failed):
        raise ValueError(f"failed disk index out of range in {failed}")
    if set(failed) != set(state.failed_disks(failed_cluster)):
        raise ValueError("failed_disks must match the failed set recorded in the state")
    if len(helpers) != p.d_b:
        raise ValueError(f"need exactly d_b={p.d_b} helper clusters, got {len(helpers)}")
    if failed_cluster in helpers:
        raise ValueError("the failed cluster cannot help itself")
    if any(not 0 <= h < p.n_b for h in helpers):
        raise ValueError(f"helper index out of range in {helpers}")
    for h in helpers:
        if not state.cluster_live(h):
            raise ValueError(f"helper cluster {h} has failed disks")

    # Pigeonhole: only d_l non-systematic disks exist, so among d_l+1
    # failures at least one systematic position failed.
    failed_systematic = [j for j in failed if j < p.local]
    assert failed_systematic, "no systematic disk failed: impossible for d_l+1 failures"
    target = failed_systematic[0]
    target_row = code.psi_row(failed_cluster, target)  # 1 x d'
    target_col = target_row.T

    survivors = [j for j in range(p.n_l) if j not in failed]

    rows = []
    rhs = []
    for m in survivors:
        rows.append(code.local_row(failed_cluster, m))
        content = FieldMatrix(code.field, np.array(state.disk(failed_cluster, m), dtype=np.int64))
        rhs.append(int((content @ target_col).array[0, 0]))
    beta = p.local
    for h in helpers:
        rows.append(code.psi_block(h))
        for m in range(p.local):
            content = FieldMatrix(code.field, np.array(state.disk(h, m), dtype=np.int64))
            rhs.append(int((content @ target_col).array[0, 0]))

    repair_matrix = vstack(rows)  # d' x d'
    rhs_col = FieldMatrix(code.field, np.array(rhs, dtype=np.int64).reshape(-1, 1))
    try:
        solved = repair_matrix.solve(rhs_col)  # M psi_{i,t}^t
    except Singular as exc:
        raise SingularRepairMatrix(
            f"repair matrix singular for cluster {failed_cluster}, helpers {helpers}, "
            f"survivors {survivors}: condition 2 violated"
        ) from exc
    target_content = tuple(int(x) for x in solved.array.reshape(-1))  # psi_{i,t} M by symmetry

    # MDS step: survivors' B rows plus B_target are n_l-d_l independent rows.
    avail = survivors + [target]
    avail_rows = code.b_matrix.take_rows(avail)
    avail_contents = [state.disk(failed_cluster, m) for m in survivors] + [target_content]
    z = avail_rows.solve(FieldMatrix(code.field, np.array(avail_contents, dtype=np.int64)))
    full = code.b_matrix @ z  # n_l x d'

    row = list(state.contents[failed_cluster])
    for j in failed:
        row[j] = tuple(int(x) for x in full.array[j])
    new_contents = tuple(
        tuple(row) if i == failed_cluster else state.contents[i]
        for i in range(p.n_b)
    )
    accounting = RepairAccounting(
        gamma=p.d_b * beta,
        beta_per_helper=beta,
        helpers=tuple(helpers),
        alpha=p.d_prime,
        repaired=tuple(failed),
    )
    return ClusterState(new_contents), accounting


def reconstruct(code: PmCode, state: ClusterState, clusters: Iterable[int]) -> list[int]:
    """Recover the message from k clusters: T from the right block of
    psi_left M through Phi_left, then S after removing the Delta_left T^t term."""
    p = code.params
    chosen = sorted(set(int(c) for c in clusters))
    if len(chosen) != p.k:
        raise ValueError(f"need exactly k={p.k} distinct clusters, got {len(chosen)}")
    if any(not 0 <= c < p.n_b for c in chosen):
        raise ValueError(f"cluster index out of range in {chosen}")

    kp, dp = p.k_prime, p.d_prime
    stacked = vstack([_cluster_block_contents(code, state, c) for c in chosen])  # k' x d'
    psi_rows = [c * p.local + r for c in chosen for r in range(p.local)]
    phi_left = code.phi.take_rows(psi_rows)
    delta_left = code.delta.take_rows(psi_rows)
    try:
        t = phi_left.solve(stacked.slice_cols(kp, dp))
        s = phi_left.solve(stacked.slice_cols(0, kp) - delta_left @ t.T)
    except Singular as exc:
        raise SingularPhiLeft(
            f"Phi rows for clusters {chosen} are singular: condition 1 violated"
        ) from exc
    assert np.array_equal(s.array, s.array.T), "recovered S block lost symmetry"
    return message_symbols(p, s, t)


def ambr_point(params: HierParams, message_size) -> TradeoffPoint:
    """Storage/bandwidth pair achieved by this code at the given file size."""
    return _ambr_point(params, message_size)


# --- serialization ------------------------------------------------------------

def to_json_document(code: PmCode, state: Optional[ClusterState] = None) -> dict:
    """Canonical JSON form: cluster-major then disk-major disk vectors."""
    disks = []
    if state is not None:
        for i in range(code.params.n_b):
            for j in range(code.params.n_l):
                content = state.disk(i, j)
                disks.append(list(content) if content is not None else None)
    return {
        "field_q": code.field.q,
        "params": code.params.to_dict(),
        "psi": code.psi.flat(),
        "b": code.b_matrix.flat(),
        "disks": disks,
    }


def from_json_document(doc: dict) -> tuple[PmCode, Optional[ClusterState]]:
    """Inverse of to_json_document. Shape-checks only; run
    validate_conditions separately to re-verify the code."""
    field = PrimeField(int(doc["field_q"]))
    params = HierParams.from_dict(doc["params"])
    psi = FieldMatrix.from_flat(field, params.n_b * params.local, params.d_prime, doc["psi"])
    b = FieldMatrix.from_flat(field, params.n_l, params.local, doc["b"])
    code = PmCode(params, field, psi, b)
    disks = doc.get("disks") or []
    if not disks:
        return code, None
    if len(disks) != params.n_b * params.n_l:
        raise ShapeMismatch(f"expected {params.n_b * params.n_l} disk entries, got {len(disks)}")
    clusters = []
    for i in range(params.n_b):
        row = []
        for j in range(params.n_l):
            entry = disks[i * params.n_l + j]
            if entry is None:
                row.append(None)
            else:
                if len(entry) != params.d_prime:
                    raise ShapeMismatch(f"disk ({i},{j}) holds {len(entry)} symbols, expected {params.d_prime}")
                row.append(tuple(field.element(x) for x in entry))
        clusters.append(tuple(row))
    return code, ClusterState(tuple(clusters))


def dump_json(code: PmCode, state: Optional[ClusterState] = None) -> str:
    return json.dumps(to_json_document(code, state), sort_keys=True)


def load_json(text: str) -> tuple[PmCode, Optional[ClusterState]]:
    return from_json_document(json.loads(text))
