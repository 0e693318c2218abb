"""Helper-count selection under realistic link bandwidths, plus Monte Carlo
profiles of the resulting repair times.

With d helpers the per-helper download shrinks by the surplus factor
d - k + 1, but the transfer is paced by the d-th best link, so the
effective repair rate is (d - k + 1) times the d-th largest incoming
bandwidth and d wants optimizing per failure. ``choose_d`` performs that
optimization exactly (deterministic scenarios stay in integer/rational
arithmetic); the Monte Carlo profiles draw link bandwidths as the maximum
of two Gaussians, floored at 1e-6 since rates cannot be negative.

Simulations draw all runs in one batch from a seeded generator, so results
are reproducible bit for bit from (seed, parameters). One disk is repaired
at a time; under multiple failures the disk with the best achievable rate
goes first.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

BANDWIDTH_FLOOR = 1e-6


class TooFewLiveNodes(ValueError):
    """Fewer than k live helpers are available."""


@dataclass(frozen=True)
class DatacenterGrid:
    """Equal-size groups with fast intra-group and slow inter-group links."""

    groups: int
    intra_rate: Union[int, Fraction]
    inter_rate: Union[int, Fraction]


@dataclass(frozen=True)
class RandomGaussian:
    """Each directed link draws max(N(mean, var_a), N(mean, var_b)) independently."""

    mean: float
    var_a: float
    var_b: float


@dataclass(frozen=True)
class NetworkScenario:
    n: int
    k: int
    generator: Optional[object] = None
    matrix: Optional[tuple] = None  # matrix[i][j] = bandwidth from i to j

    def __post_init__(self):
        if (self.generator is None) == (self.matrix is None):
            raise ValueError("exactly one of generator / matrix must be set")
        if not 1 <= self.k < self.n:
            raise ValueError(f"need 1 <= k < n, got k={self.k} n={self.n}")
        if self.matrix is not None:
            mat = tuple(tuple(row) for row in self.matrix)
            if len(mat) != self.n or any(len(row) != self.n for row in mat):
                raise ValueError("matrix must be n x n")
            if any(x < 0 for row in mat for x in row):
                raise ValueError("bandwidths must be nonnegative")
            object.__setattr__(self, "matrix", mat)
        if isinstance(self.generator, DatacenterGrid):
            if self.n % self.generator.groups != 0:
                raise ValueError("n must be divisible by the group count")

    @property
    def deterministic(self) -> bool:
        return not isinstance(self.generator, RandomGaussian)

    def bandwidth(self, src: int, dst: int):
        """Deterministic link rate src -> dst."""
        if self.matrix is not None:
            return self.matrix[src][dst]
        gen = self.generator
        if isinstance(gen, DatacenterGrid):
            per = self.n // gen.groups
            return gen.intra_rate if src // per == dst // per else gen.inter_rate
        raise ValueError("random scenarios have no fixed bandwidth; use the samplers")

    def incoming(self, target: int, live: Sequence[int]) -> list:
        return [self.bandwidth(j, target) for j in live]


@dataclass(frozen=True)
class RepairDecision:
    chosen_d: int
    helper_set: tuple
    rate: Union[int, float, Fraction]  # (d - k + 1) * d-th largest bandwidth
    k: int

    def repair_time(self, file_size):
        """Time to move the per-helper share over the bottleneck link:
        file_size / (k * rate)."""
        denom = self.k * self.rate
        if isinstance(self.rate, float) or isinstance(file_size, float):
            return file_size / denom
        return Fraction(file_size) / Fraction(denom)


def best_rate(bandwidths: Sequence, k: int) -> tuple:
    """(rate, d) maximizing (d - k + 1) * (d-th largest bandwidth); ties go
    to the smaller d. Exact when the bandwidths are exact numbers."""
    ordered = sorted(bandwidths, reverse=True)
    if len(ordered) < k:
        raise TooFewLiveNodes(f"{len(ordered)} live nodes, need at least k={k}")
    best = None
    for d in range(k, len(ordered) + 1):
        rate = (d - k + 1) * ordered[d - 1]
        if best is None or rate > best[0]:
            best = (rate, d)
    return best


def choose_d(scenario: NetworkScenario, target: int, live: Iterable[int],
             k: Optional[int] = None) -> RepairDecision:
    """Pick the helper count and helper set for repairing ``target``."""
    k = scenario.k if k is None else k
    live = [j for j in live if j != target]
    incoming = scenario.incoming(target, live)
    rate, d = best_rate(incoming, k)
    by_bandwidth = sorted(zip(live, incoming), key=lambda p: (-p[1], p[0]))
    helpers = tuple(node for node, _ in by_bandwidth[:d])
    return RepairDecision(chosen_d=d, helper_set=helpers, rate=rate, k=k)


# --- bandwidth sampling ---------------------------------------------------------

def gaussian_bandwidth(mean: float, var_a: float, var_b: float, rng) -> float:
    """One link draw: max of two independent normals, floored at 1e-6."""
    if var_a <= 0 or var_b <= 0:
        raise ValueError("variances must be positive")
    a = rng.normal(mean, math.sqrt(var_a))
    b = rng.normal(mean, math.sqrt(var_b))
    return max(a, b, BANDWIDTH_FLOOR)


def _gaussian_batch(gen: RandomGaussian, shape: tuple, rng) -> np.ndarray:
    a = rng.normal(gen.mean, math.sqrt(gen.var_a), size=shape)
    b = rng.normal(gen.mean, math.sqrt(gen.var_b), size=shape)
    return np.maximum(np.maximum(a, b), BANDWIDTH_FLOOR)


def _incoming_batch(scenario: NetworkScenario, target: int, live: Sequence[int],
                    runs: int, rng) -> np.ndarray:
    """(runs, len(live)) incoming-bandwidth draws for ``target``."""
    if isinstance(scenario.generator, RandomGaussian):
        return _gaussian_batch(scenario.generator, (runs, len(live)), rng)
    fixed = np.array([float(x) for x in scenario.incoming(target, live)])
    return np.tile(fixed, (runs, 1))


def _opp_rates(draws: np.ndarray, k: int) -> np.ndarray:
    """max_d (d - k + 1) * B_(d) along the last axis of ``draws``."""
    m = draws.shape[-1]
    ordered = -np.sort(-draws, axis=-1)
    factors = np.arange(1, m - k + 2, dtype=float)
    return (ordered[..., k - 1 :] * factors).max(axis=-1)


def one_failure_ratios(scenario: NetworkScenario, runs: int, seed) -> np.ndarray:
    """Per-run ratio (k-th largest bandwidth) / max_d (d - k + 1) B_(d),
    i.e. opportunistic repair time over plain k-helper repair time, for a
    single failure of node 0. Always <= 1 since d = k is in range."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    rng = np.random.default_rng(seed)
    live = list(range(1, scenario.n))
    draws = _incoming_batch(scenario, 0, live, runs, rng)
    ordered = -np.sort(-draws, axis=-1)
    baseline = ordered[:, scenario.k - 1]
    return baseline / _opp_rates(draws, scenario.k)


def one_failure_ratio(scenario: NetworkScenario, runs: int, seed) -> tuple[float, float]:
    """Mean and (population) stddev of one_failure_ratios."""
    ratios = one_failure_ratios(scenario, runs, seed)
    return float(ratios.mean()), float(ratios.std())


def multi_failure_profile(scenario: NetworkScenario, runs: int, seed: int
                          ) -> list[tuple[int, float, float]]:
    """Normalized repair-the-best-node time with t = 1 .. n-k failures.

    Nodes 0..t-1 are failed; each failed node's achievable rate over the
    n - t live nodes is max_d (d - k + 1) B_(d) with d <= n - t, and the
    best node is repaired. Times are averaged over runs and scaled so the
    t = n - k entry is 1; (t, mean, stddev) per t.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    n, k = scenario.n, scenario.k
    raw = []
    for t in range(1, n - k + 1):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(t,)))
        live = list(range(t, n))
        if isinstance(scenario.generator, RandomGaussian):
            draws = _gaussian_batch(scenario.generator, (runs, t, len(live)), rng)
        else:
            fixed = np.array([[float(x) for x in scenario.incoming(f, live)] for f in range(t)])
            draws = np.tile(fixed, (runs, 1, 1))
        rates = _opp_rates(draws, k)          # (runs, t)
        times = 1.0 / rates.max(axis=-1)      # repair the best node first
        raw.append((t, float(times.mean()), float(times.std())))
    unit = raw[-1][1]
    return [(t, m / unit, s / unit) for t, m, s in raw]


# --- serialization / CSV --------------------------------------------------------

def scenario_to_json(scenario: NetworkScenario) -> dict:
    doc: dict = {"n": scenario.n, "k": scenario.k}
    gen = scenario.generator
    if isinstance(gen, DatacenterGrid):
        doc["generator"] = {
            "type": "datacenter",
            "groups": gen.groups,
            "intra_rate": str(gen.intra_rate),
            "inter_rate": str(gen.inter_rate),
        }
    elif isinstance(gen, RandomGaussian):
        doc["generator"] = {
            "type": "gaussian",
            "mean": gen.mean,
            "var_a": gen.var_a,
            "var_b": gen.var_b,
        }
    else:
        doc["matrix"] = [[str(x) for x in row] for row in scenario.matrix]
    return doc


def _parse_rate(x):
    f = Fraction(str(x))
    return int(f) if f.denominator == 1 else f


def scenario_from_json(doc: dict) -> NetworkScenario:
    n, k = int(doc["n"]), int(doc["k"])
    if "matrix" in doc and doc["matrix"] is not None:
        rows = tuple(tuple(_parse_rate(x) for x in row) for row in doc["matrix"])
        return NetworkScenario(n=n, k=k, matrix=rows)
    gen = doc["generator"]
    if gen["type"] == "datacenter":
        return NetworkScenario(
            n=n, k=k,
            generator=DatacenterGrid(
                groups=int(gen["groups"]),
                intra_rate=_parse_rate(gen["intra_rate"]),
                inter_rate=_parse_rate(gen["inter_rate"]),
            ),
        )
    if gen["type"] == "gaussian":
        return NetworkScenario(
            n=n, k=k,
            generator=RandomGaussian(
                mean=float(gen["mean"]), var_a=float(gen["var_a"]), var_b=float(gen["var_b"]),
            ),
        )
    raise ValueError(f"unknown generator type {gen.get('type')!r}")


def loads_scenario(text: str) -> NetworkScenario:
    return scenario_from_json(json.loads(text))


def emit_one_failure_csv(entries: Iterable[tuple[int, float, float]], stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["n", "mean_ratio", "stddev"])
    for n, mean, std in entries:
        writer.writerow([n, repr(mean), repr(std)])


def emit_multi_failure_csv(entries: Iterable[tuple[int, float, float]], stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["t", "mean_norm_time", "stddev"])
    for t, mean, std in entries:
        writer.writerow([t, repr(mean), repr(std)])
