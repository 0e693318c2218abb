"""Exact-repair minimum-bandwidth construction (gamma = 0).

The message is split into k(n_l - d_l - 1) equal pieces laid out on the
first n_l - d_l - 1 disks of the first k clusters. A cross-cluster
(n_b, k) MDS code fills the matching positions of the remaining clusters
(applied independently per disk position), and inside every cluster an
(n_l, n_l - d_l - 1) systematic MDS code fills the last d_l + 1 disks.

Any d_l + 1 in-cluster failures are repaired from the n_l - d_l - 1 local
survivors alone, so the cross-cluster repair traffic is always zero, at
the price of alpha = M / (k (n_l - d_l - 1)) symbols per disk. Requires
n_l - d_l > 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .field import FieldMatrix, PrimeField, ShapeMismatch
from .mds import MdsCode, make_systematic_mds
from .params import HierParams
from .pm import ClusterState, RepairAccounting


class TooManyLocalFailures(ValueError):
    """More than d_l + 1 failures in the cluster; local repair impossible."""


class TooFewClusters(ValueError):
    """Reconstruction needs k distinct clusters."""


@dataclass(frozen=True)
class MbrCode:
    params: HierParams
    field: PrimeField
    cross_code: MdsCode   # (n_b, k), applied per disk position
    intra_code: MdsCode   # (n_l, n_l - d_l - 1), applied per cluster

    def __post_init__(self):
        p = self.params
        if p.local <= 1:
            raise ValueError("the zero-bandwidth point needs n_l - d_l > 1")
        if (self.cross_code.n, self.cross_code.k) != (p.n_b, p.k):
            raise ShapeMismatch("cross code must be (n_b, k)")
        if (self.intra_code.n, self.intra_code.k) != (p.n_l, p.local - 1):
            raise ShapeMismatch("intra code must be (n_l, n_l - d_l - 1)")

    @property
    def pieces(self) -> int:
        return self.params.k * (self.params.local - 1)


def make_mbr_code(params: HierParams, field: PrimeField) -> MbrCode:
    return MbrCode(
        params,
        field,
        cross_code=make_systematic_mds(field, params.n_b, params.k),
        intra_code=make_systematic_mds(field, params.n_l, params.local - 1),
    )


def _alpha(code: MbrCode, message_len: int) -> int:
    if message_len == 0 or message_len % code.pieces != 0:
        raise ShapeMismatch(
            f"message length {message_len} is not a positive multiple of "
            f"k(n_l-d_l-1) = {code.pieces}"
        )
    return message_len // code.pieces


def mbr_encode(code: MbrCode, message: Sequence[int]) -> ClusterState:
    """Cross-cluster MDS per position, then intra-cluster MDS per cluster."""
    p = code.params
    alpha = _alpha(code, len(message))
    positions = p.local - 1
    # systematic layout: piece (cluster c, position pos) occupies a
    # contiguous alpha-symbol run, cluster-major
    sys_block = FieldMatrix(
        code.field, np.array(message, dtype=np.int64).reshape(p.k, positions * alpha)
    )
    cross_full = code.cross_code.generator @ sys_block  # n_b x (positions * alpha)
    clusters = []
    for i in range(p.n_b):
        head = FieldMatrix(code.field, cross_full.array[i].reshape(positions, alpha))
        full = code.intra_code.generator @ head  # n_l x alpha
        clusters.append(tuple(tuple(int(x) for x in row) for row in full.array))
    return ClusterState(tuple(clusters))


def mbr_repair(code: MbrCode, state: ClusterState, cluster: int,
               failed: Iterable[int]) -> tuple[ClusterState, RepairAccounting]:
    """Restore up to d_l + 1 failed disks from the cluster's own survivors."""
    p = code.params
    failed = sorted(set(int(x) for x in failed))
    if len(failed) > p.d_l + 1:
        raise TooManyLocalFailures(
            f"{len(failed)} failures exceed the local repair capability d_l+1 = {p.d_l + 1}"
        )
    if any(not 0 <= j < p.n_l for j in failed):
        raise ValueError(f"disk index out of range in {failed}")
    if any(state.is_live(cluster, j) for j in failed):
        raise ValueError("failed list names a live disk")

    if not failed:
        accounting = RepairAccounting(gamma=0, beta_per_helper=0, helpers=(),
                                      alpha=0, repaired=())
        return state, accounting

    survivors = [j for j in range(p.n_l) if j not in failed]
    need = p.local - 1
    chosen = survivors[:need]
    contents = np.array([state.disk(cluster, j) for j in chosen], dtype=np.int64)
    alpha = contents.shape[1]
    head = code.intra_code.generator.take_rows(chosen).solve(
        FieldMatrix(code.field, contents)
    )
    full = code.intra_code.generator @ head

    row = list(state.contents[cluster])
    for j in failed:
        row[j] = tuple(int(x) for x in full.array[j])
    new_contents = tuple(
        tuple(row) if i == cluster else state.contents[i] for i in range(p.n_b)
    )
    accounting = RepairAccounting(gamma=0, beta_per_helper=0, helpers=(),
                                  alpha=alpha, repaired=tuple(failed))
    return ClusterState(new_contents), accounting


def _cluster_head(code: MbrCode, state: ClusterState, cluster: int) -> np.ndarray:
    """Systematic (first n_l-d_l-1) rows of a cluster, decoding if needed."""
    p = code.params
    need = p.local - 1
    syst = list(range(need))
    if all(state.is_live(cluster, j) for j in syst):
        return np.array([state.disk(cluster, j) for j in syst], dtype=np.int64)
    live = state.live_disks(cluster)
    if len(live) < need:
        raise ValueError(f"cluster {cluster} has {len(live)} live disks, need {need}")
    chosen = live[:need]
    contents = np.array([state.disk(cluster, j) for j in chosen], dtype=np.int64)
    head = code.intra_code.generator.take_rows(chosen).solve(
        FieldMatrix(code.field, contents)
    )
    return head.array


def mbr_reconstruct(code: MbrCode, state: ClusterState, clusters: Iterable[int]) -> list[int]:
    """Recover the message from the heads of any k clusters."""
    p = code.params
    chosen = sorted(set(int(c) for c in clusters))
    if len(chosen) < p.k:
        raise TooFewClusters(f"got {len(chosen)} clusters, need k={p.k}")
    if len(chosen) != p.k or any(not 0 <= c < p.n_b for c in chosen):
        raise ValueError(f"need exactly k={p.k} valid cluster indices, got {chosen}")
    heads = [_cluster_head(code, state, c) for c in chosen]
    flat = FieldMatrix(code.field, np.array([h.reshape(-1) for h in heads], dtype=np.int64))
    sys_block = code.cross_code.generator.take_rows(chosen).solve(flat)
    return [int(x) for x in sys_block.array.reshape(-1)]


def state_to_json(code: MbrCode, state: ClusterState) -> dict:
    disks = []
    for i in range(code.params.n_b):
        for j in range(code.params.n_l):
            content = state.disk(i, j)
            disks.append(list(content) if content is not None else None)
    return {"field_q": code.field.q, "params": code.params.to_dict(), "disks": disks}


def state_from_json(doc: dict) -> tuple[MbrCode, ClusterState]:
    field = PrimeField(int(doc["field_q"]))
    params = HierParams.from_dict(doc["params"])
    code = make_mbr_code(params, field)
    disks = doc["disks"]
    if len(disks) != params.n_b * params.n_l:
        raise ShapeMismatch(f"expected {params.n_b * params.n_l} disk entries, got {len(disks)}")
    clusters = []
    for i in range(params.n_b):
        row = []
        for j in range(params.n_l):
            entry = disks[i * params.n_l + j]
            row.append(None if entry is None else tuple(field.element(x) for x in entry))
        clusters.append(tuple(row))
    return code, ClusterState(tuple(clusters))


def dumps_state(code: MbrCode, state: ClusterState) -> str:
    return json.dumps(state_to_json(code, state), sort_keys=True)


def loads_state(text: str) -> tuple[MbrCode, ClusterState]:
    return state_from_json(json.loads(text))
