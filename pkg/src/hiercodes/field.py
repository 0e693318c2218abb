"""Exact arithmetic in prime fields GF(q) and dense linear algebra over them.

No floating point appears anywhere: element operations are modular integer
arithmetic, and rank / inverse / solve go through exact Gauss-Jordan
elimination with deterministic first-nonzero pivoting, so results are
reproducible bit for bit. All values are immutable after construction and
safe to share read-only across threads.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import _kernels


class InverseOfZero(ZeroDivisionError):
    """Multiplicative inverse of 0 requested."""


class Singular(ValueError):
    """A nonsingular matrix was required but a singular one was supplied."""


class ShapeMismatch(ValueError):
    """Operand shapes are incompatible."""


class DuplicatePoints(ValueError):
    """Vandermonde evaluation points must be distinct."""


class PrimeField:
    """The prime field GF(q), q prime.

    Primality is checked by trial division at construction. The modulus is
    capped at 2**25 so the int64 matrix kernels cannot overflow; extension
    fields and larger moduli are out of scope.
    """

    MAX_MODULUS = 1 << 25

    __slots__ = ("q",)

    def __init__(self, q: int):
        if not isinstance(q, (int, np.integer)) or isinstance(q, bool):
            raise ValueError(f"modulus must be an integer, got {q!r}")
        q = int(q)
        if q < 2:
            raise ValueError(f"modulus must be >= 2, got {q}")
        if q >= self.MAX_MODULUS:
            raise ValueError(f"modulus {q} exceeds the supported limit {self.MAX_MODULUS}")
        d = 2
        while d * d <= q:
            if q % d == 0:
                raise ValueError(f"modulus {q} is not prime ({d} divides it)")
            d += 1
        self.q = q

    def element(self, x: int) -> int:
        return int(x) % self.q

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.q

    def neg(self, a: int) -> int:
        return (-a) % self.q

    def inv(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise InverseOfZero(f"0 has no inverse in GF({self.q})")
        return pow(a, self.q - 2, self.q)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(a), -e, self.q)
        return pow(a % self.q, e, self.q)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("PrimeField", self.q))

    def __repr__(self) -> str:
        return f"PrimeField({self.q})"


class FieldMatrix:
    """Dense matrix over a prime field.

    Entries are stored reduced modulo q in a read-only int64 array.
    """

    __slots__ = ("field", "_a")

    def __init__(self, field: PrimeField, data):
        a = np.array(data, dtype=np.int64)
        if a.ndim == 1:
            a = a.reshape(1, -1)
        if a.ndim != 2:
            raise ShapeMismatch(f"matrix data must be 2-D, got ndim={a.ndim}")
        a %= field.q
        a.setflags(write=False)
        self.field = field
        self._a = a

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> "FieldMatrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> "FieldMatrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def from_flat(cls, field: PrimeField, rows: int, cols: int, flat: Sequence[int]) -> "FieldMatrix":
        if len(flat) != rows * cols:
            raise ShapeMismatch(f"expected {rows * cols} entries, got {len(flat)}")
        return cls(field, np.array(flat, dtype=np.int64).reshape(rows, cols))

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def T(self) -> "FieldMatrix":
        return FieldMatrix(self.field, self._a.T.copy())

    def tolist(self) -> list:
        return self._a.tolist()

    def flat(self) -> list:
        return [int(x) for x in self._a.reshape(-1)]

    def row(self, i: int) -> "FieldMatrix":
        return FieldMatrix(self.field, self._a[i : i + 1])

    def take_rows(self, indices: Iterable[int]) -> "FieldMatrix":
        return FieldMatrix(self.field, self._a[list(indices)])

    def take_cols(self, indices: Iterable[int]) -> "FieldMatrix":
        return FieldMatrix(self.field, self._a[:, list(indices)])

    def slice_cols(self, start: int, stop: int) -> "FieldMatrix":
        return FieldMatrix(self.field, self._a[:, start:stop])

    def _check_field(self, other: "FieldMatrix"):
        if self.field != other.field:
            raise ValueError("operands live in different fields")

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check_field(other)
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        return FieldMatrix(self.field, _kernels.matmul_mod(self._a, other._a, self.field.q))

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check_field(other)
        if self._a.shape != other._a.shape:
            raise ShapeMismatch("addition needs equal shapes")
        return FieldMatrix(self.field, (self._a + other._a) % self.field.q)

    def __sub__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check_field(other)
        if self._a.shape != other._a.shape:
            raise ShapeMismatch("subtraction needs equal shapes")
        return FieldMatrix(self.field, (self._a - other._a) % self.field.q)

    def __neg__(self) -> "FieldMatrix":
        return FieldMatrix(self.field, (-self._a) % self.field.q)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldMatrix)
            and self.field == other.field
            and self._a.shape == other._a.shape
            and bool(np.array_equal(self._a, other._a))
        )

    def __hash__(self):
        return hash((self.field, self._a.shape, self._a.tobytes()))

    def __repr__(self) -> str:
        return f"FieldMatrix(GF({self.field.q}), {self._a.tolist()!r})"

    def rank(self) -> int:
        work = self._a.copy()
        return _kernels.gauss_jordan(work, self.field.q, work.shape[1])

    def invert(self) -> "FieldMatrix":
        if self.rows != self.cols:
            raise ShapeMismatch("only square matrices can be inverted")
        n = self.rows
        aug = np.hstack([self._a, np.eye(n, dtype=np.int64)])
        if _kernels.gauss_jordan(aug, self.field.q, n) < n:
            raise Singular(f"{n}x{n} matrix over GF({self.field.q}) is singular")
        return FieldMatrix(self.field, aug[:, n:])

    def solve(self, b: "FieldMatrix") -> "FieldMatrix":
        """Return x with self @ x == b (self square nonsingular)."""
        self._check_field(b)
        if self.rows != self.cols:
            raise ShapeMismatch("solve needs a square coefficient matrix")
        if b.rows != self.rows:
            raise ShapeMismatch(f"rhs has {b.rows} rows, expected {self.rows}")
        n = self.rows
        aug = np.hstack([self._a, b._a])
        if _kernels.gauss_jordan(aug, self.field.q, n) < n:
            raise Singular(f"{n}x{n} matrix over GF({self.field.q}) is singular")
        return FieldMatrix(self.field, aug[:, n:])


def vstack(mats: Sequence[FieldMatrix]) -> FieldMatrix:
    if not mats:
        raise ValueError("nothing to stack")
    field = mats[0].field
    for m in mats:
        if m.field != field:
            raise ValueError("cannot stack matrices from different fields")
    return FieldMatrix(field, np.vstack([m.array for m in mats]))


def hstack(mats: Sequence[FieldMatrix]) -> FieldMatrix:
    if not mats:
        raise ValueError("nothing to stack")
    field = mats[0].field
    for m in mats:
        if m.field != field:
            raise ValueError("cannot stack matrices from different fields")
    return FieldMatrix(field, np.hstack([m.array for m in mats]))


def vandermonde(field: PrimeField, points: Sequence[int], cols: int) -> FieldMatrix:
    """Vandermonde matrix: row r is [1, p_r, p_r**2, ..., p_r**(cols-1)] mod q."""
    if cols < 1:
        raise ValueError("cols must be >= 1")
    pts = [field.element(p) for p in points]
    if not pts:
        raise ValueError("at least one evaluation point is required")
    if len(set(pts)) != len(pts):
        raise DuplicatePoints(f"points {points!r} collide modulo {field.q}")
    rows = np.empty((len(pts), cols), dtype=np.int64)
    for r, p in enumerate(pts):
        v = 1
        for c in range(cols):
            rows[r, c] = v
            v = (v * p) % field.q
    return FieldMatrix(field, rows)
