"""Systematic MDS erasure codes over GF(q).

The generator is built from a Vandermonde matrix on n distinct points,
right-multiplied by the inverse of its top k x k block, which makes the
top k rows the identity and keeps every k x k minor nonsingular for any
q >= n. These codes serve both as the intra-cluster and the cross-cluster
building block of the storage constructions.

Only erasures are handled; error correction is out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from .field import FieldMatrix, PrimeField, ShapeMismatch, vandermonde

# Verification budget: check every k x k minor when there are at most
# EXHAUSTIVE_MINORS of them, otherwise sample SAMPLED_MINORS at random.
EXHAUSTIVE_MINORS = 10**5
SAMPLED_MINORS = 10**4


class FieldTooSmall(ValueError):
    """The construction needs q >= n distinct evaluation points."""


class TooFewSymbols(ValueError):
    """Fewer than k known coordinates were supplied to the decoder."""


class InconsistentSymbols(ValueError):
    """Over-determined knowns contradict each other."""


class NotMds(ValueError):
    """A generator failed MDS verification."""


@dataclass(frozen=True)
class MdsCode:
    """A systematic (n, k) MDS code given by its n x k generator."""

    field: PrimeField
    n: int
    k: int
    generator: FieldMatrix

    def __post_init__(self):
        if not (1 <= self.k <= self.n):
            raise ValueError(f"need 1 <= k <= n, got n={self.n} k={self.k}")
        g = self.generator
        if g.rows != self.n or g.cols != self.k:
            raise ShapeMismatch(f"generator must be {self.n}x{self.k}, got {g.rows}x{g.cols}")
        if not np.array_equal(g.array[: self.k], np.eye(self.k, dtype=np.int64)):
            raise ValueError("generator is not systematic (top k x k block is not the identity)")
        verify_mds(self)


def verify_mds(code: MdsCode, seed: int = 0) -> int:
    """Check that every k x k submatrix of the generator is nonsingular.

    Exhaustive when C(n, k) <= EXHAUSTIVE_MINORS, otherwise SAMPLED_MINORS
    random minors. Returns the number of minors checked; raises NotMds on
    the first singular one.
    """
    n, k = code.n, code.k
    total = comb(n, k)
    if total <= EXHAUSTIVE_MINORS:
        subsets = combinations(range(n), k)
        checked = total
    else:
        rng = np.random.default_rng(seed)
        subsets = (tuple(sorted(rng.choice(n, size=k, replace=False))) for _ in range(SAMPLED_MINORS))
        checked = SAMPLED_MINORS
    for rows in subsets:
        if code.generator.take_rows(rows).rank() < k:
            raise NotMds(f"rows {tuple(rows)} of the generator are dependent")
    return checked


def make_systematic_mds(field: PrimeField, n: int, k: int) -> MdsCode:
    """Deterministic systematic MDS code from a Vandermonde on points 0..n-1."""
    if not (1 <= k <= n):
        raise ValueError(f"need 1 <= k <= n, got n={n} k={k}")
    if field.q < n:
        raise FieldTooSmall(f"GF({field.q}) has fewer than n={n} distinct points")
    v = vandermonde(field, list(range(n)), k)
    top = v.take_rows(range(k))
    return MdsCode(field, n, k, v @ top.invert())


def mds_from_generator(field: PrimeField, generator: FieldMatrix) -> MdsCode:
    """Wrap an explicit systematic generator, verifying the MDS property."""
    return MdsCode(field, generator.rows, generator.cols, generator)


def encode(code: MdsCode, message: Sequence[int]) -> list[int]:
    """Codeword generator @ message; the first k symbols equal the message."""
    if len(message) != code.k:
        raise ShapeMismatch(f"message length {len(message)} != k={code.k}")
    col = FieldMatrix(code.field, np.array(message, dtype=np.int64).reshape(-1, 1))
    return [int(x) for x in (code.generator @ col).array.reshape(-1)]


def decode_erasures(code: MdsCode, known: Sequence[tuple[int, int]]) -> list[int]:
    """Recover the message from >= k known (index, symbol) coordinates.

    The first k distinct indices (in index order) determine the message;
    every remaining known symbol is then checked against the re-encoding.
    """
    seen: dict[int, int] = {}
    for idx, sym in known:
        if not (0 <= idx < code.n):
            raise ValueError(f"coordinate index {idx} out of range [0, {code.n})")
        if idx in seen:
            raise ValueError(f"coordinate {idx} supplied twice")
        seen[idx] = code.field.element(sym)
    if len(seen) < code.k:
        raise TooFewSymbols(f"{len(seen)} known symbols, need at least k={code.k}")
    indices = sorted(seen)
    solve_rows = indices[: code.k]
    sub = code.generator.take_rows(solve_rows)
    rhs = FieldMatrix(code.field, np.array([seen[i] for i in solve_rows], dtype=np.int64).reshape(-1, 1))
    message = [int(x) for x in sub.solve(rhs).array.reshape(-1)]
    codeword = encode(code, message)
    bad = [i for i in indices if codeword[i] != seen[i]]
    if bad:
        raise InconsistentSymbols(f"known symbols at indices {bad} contradict the decoded message")
    return message
