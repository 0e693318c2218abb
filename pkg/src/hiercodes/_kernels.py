"""Matrix kernels for arithmetic modulo a prime.

Two interchangeable backends compute identical results bit for bit:

* a numba ``@njit`` backend with explicit loops, used by default whenever
  numba imports cleanly, and
* a pure-numpy backend, used as fallback or forced by setting the
  environment variable ``HIERCODES_PURE_NUMPY=1``.

Elimination uses first-nonzero pivoting in column order in both backends,
so every result (including pivot choices) is reproducible regardless of
backend. All arrays are int64; the modulus must stay below 2**25
(enforced by PrimeField) so intermediate products never overflow.

``benchmarks/bench_kernels.py`` times the two backends against each other.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = ["BACKEND", "IMPLEMENTATIONS", "matmul_mod", "gauss_jordan"]

# inner_dim * (q-1)**2 must stay < 2**63 for the numpy matmul path
_MAX_INNER_DIM = 4096


def _np_matmul_mod(a, b, q):
    return (a @ b) % q


def _np_gauss_jordan(m, q, pivot_cols):
    """Reduce ``m`` in place to reduced row-echelon form.

    Pivots are the first nonzero entries in each of the first
    ``pivot_cols`` columns, scanning top to bottom. Returns the number of
    pivots found (the rank of the pivoted block).
    """
    rows = m.shape[0]
    r = 0
    for c in range(pivot_cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        inv = pow(int(m[r, c]), q - 2, q)
        m[r] = (m[r] * inv) % q
        factors = m[:, c].copy()
        factors[r] = 0
        m -= np.outer(factors, m[r])
        m %= q
        r += 1
    return r


_NUMPY_IMPLS = {"matmul_mod": _np_matmul_mod, "gauss_jordan": _np_gauss_jordan}
IMPLEMENTATIONS = {"numpy": _NUMPY_IMPLS}

if os.environ.get("HIERCODES_PURE_NUMPY", "") not in ("", "0"):
    BACKEND = "numpy"
else:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        BACKEND = "numpy"
    else:
        BACKEND = "numba"

        @njit(cache=True)
        def _nb_modpow(base, exp, q):
            result = 1
            b = base % q
            e = exp
            while e > 0:
                if e & 1:
                    result = (result * b) % q
                b = (b * b) % q
                e >>= 1
            return result

        @njit(cache=True)
        def _nb_matmul_mod(a, b, q):
            rows, inner = a.shape
            cols = b.shape[1]
            out = np.zeros((rows, cols), dtype=np.int64)
            for i in range(rows):
                for j in range(cols):
                    acc = 0
                    for t in range(inner):
                        acc = (acc + a[i, t] * b[t, j]) % q
                    out[i, j] = acc
            return out

        @njit(cache=True)
        def _nb_gauss_jordan(m, q, pivot_cols):
            rows, cols = m.shape
            r = 0
            for c in range(pivot_cols):
                if r == rows:
                    break
                p = -1
                for i in range(r, rows):
                    if m[i, c] != 0:
                        p = i
                        break
                if p < 0:
                    continue
                if p != r:
                    for j in range(cols):
                        tmp = m[r, j]
                        m[r, j] = m[p, j]
                        m[p, j] = tmp
                inv = _nb_modpow(m[r, c], q - 2, q)
                for j in range(cols):
                    m[r, j] = (m[r, j] * inv) % q
                for i in range(rows):
                    if i == r or m[i, c] == 0:
                        continue
                    f = m[i, c]
                    for j in range(cols):
                        m[i, j] = (m[i, j] - f * m[r, j]) % q
                r += 1
            return r

        IMPLEMENTATIONS["numba"] = {
            "matmul_mod": _nb_matmul_mod,
            "gauss_jordan": _nb_gauss_jordan,
        }

_ACTIVE = IMPLEMENTATIONS[BACKEND]


def matmul_mod(a, b, q):
    """Return ``(a @ b) % q`` for int64 matrices with entries in [0, q)."""
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("matmul_mod expects 2-D arrays")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if a.shape[1] > _MAX_INNER_DIM:
        raise ValueError("inner dimension too large for overflow-safe matmul")
    return _ACTIVE["matmul_mod"](np.ascontiguousarray(a), np.ascontiguousarray(b), q)


def gauss_jordan(m, q, pivot_cols):
    """Row-reduce ``m`` in place (pivoting on the first ``pivot_cols``
    columns) and return the rank of the pivoted block."""
    if m.ndim != 2:
        raise ValueError("gauss_jordan expects a 2-D array")
    if not (0 <= pivot_cols <= m.shape[1]):
        raise ValueError("pivot_cols out of range")
    return _ACTIVE["gauss_jordan"](m, q, pivot_cols)
