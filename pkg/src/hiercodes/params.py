"""System parameters for clustered (hierarchical) storage.

A system has n_b clusters of n_l disks each. Any k clusters recover the
data; a repair event fixes d_l+1 failed disks inside one cluster with the
help of d_b other clusters. The derived quantities

    k' = k * (n_l - d_l)        d' = (d_b + 1) * (n_l - d_l) - 1

size the product-matrix construction (k' <= d' always holds under the
constraints below, since k <= d_b).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb


@dataclass(frozen=True)
class HierParams:
    n_b: int  # clusters
    n_l: int  # disks per cluster
    k: int    # clusters sufficient for reconstruction
    d_b: int  # helper clusters per repair
    d_l: int  # a repair event covers d_l + 1 in-cluster failures

    def __post_init__(self):
        if not 1 <= self.k <= self.d_b <= self.n_b - 1:
            raise ValueError(
                f"need 1 <= k <= d_b <= n_b-1, got k={self.k} d_b={self.d_b} n_b={self.n_b}"
            )
        if not 0 <= self.d_l <= self.n_l - 1:
            raise ValueError(f"need 0 <= d_l <= n_l-1, got d_l={self.d_l} n_l={self.n_l}")

    @property
    def local(self) -> int:
        """n_l - d_l: systematic disks per cluster (= per-cluster repair bandwidth beta)."""
        return self.n_l - self.d_l

    @property
    def k_prime(self) -> int:
        return self.k * self.local

    @property
    def d_prime(self) -> int:
        return (self.d_b + 1) * self.local - 1

    @property
    def message_size(self) -> int:
        """Symbols carried by the product-matrix code: C(k'+1, 2) + k'(d'-k')."""
        kp, dp = self.k_prime, self.d_prime
        return comb(kp + 1, 2) + kp * (dp - kp)

    def to_dict(self) -> dict:
        return {"n_b": self.n_b, "n_l": self.n_l, "k": self.k, "d_b": self.d_b, "d_l": self.d_l}

    @classmethod
    def from_dict(cls, d: dict) -> "HierParams":
        return cls(n_b=int(d["n_b"]), n_l=int(d["n_l"]), k=int(d["k"]),
                   d_b=int(d["d_b"]), d_l=int(d["d_l"]))
