"""Explicit distributions over the hypercube and exact distance-to-junta certification."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping, Optional

import numpy as np

from .boolfn import BitString, BooleanFunction, N_MAX

WORK_CAP = 10**9
_NORM_TOL = 1e-9


class WorkCapExceededError(ValueError):
    """Raised when an exact enumeration would exceed the configured work cap."""


@dataclass(frozen=True)
class Distribution:
    """A probability distribution over {0,1}^n with explicit support.

    ``support`` holds point indices; ``probs`` the matching probabilities,
    normalized on construction. A dense distribution simply has full support.
    """

    n: int
    support: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= N_MAX:
            raise ValueError(f"dimension must be in 1..{N_MAX}, got {self.n}")
        support = np.ascontiguousarray(self.support, dtype=np.int64)
        probs = np.ascontiguousarray(self.probs, dtype=np.float64)
        if support.ndim != 1 or support.shape != probs.shape:
            raise ValueError("support and probabilities must be 1-d and aligned")
        if support.size == 0:
            raise ValueError("empty support")
        if np.any(support < 0) or np.any(support >= (1 << self.n)):
            raise ValueError("support point out of range")
        if np.unique(support).size != support.size:
            raise ValueError("duplicate support points")
        if np.any(probs < 0):
            raise ValueError("negative weight")
        total = probs.sum()
        if total <= 0:
            raise ValueError("weights must not all be zero")
        probs = probs / total
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "_cum", np.cumsum(probs))

    # -- constructors -------------------------------------------------

    @classmethod
    def dense(cls, n: int, weights) -> "Distribution":
        weights = np.asarray(weights, dtype=np.float64)
        if weights.shape != (1 << n,):
            raise ValueError(f"dense weights must have 2^{n} entries")
        return cls(n, np.arange(1 << n, dtype=np.int64), weights)

    @classmethod
    def sparse(cls, n: int, weights: Mapping) -> "Distribution":
        """Weights keyed by point index, BitString, or 0/1 string."""
        support, probs = [], []
        for key, w in weights.items():
            if isinstance(key, BitString):
                idx = key.value
            elif isinstance(key, str):
                idx = BitString.from_str(key).value
            else:
                idx = int(key)
            support.append(idx)
            probs.append(float(w))
        return cls(n, np.array(support, dtype=np.int64), np.array(probs))

    @classmethod
    def uniform(cls, n: int) -> "Distribution":
        return cls.dense(n, np.full(1 << n, 1.0))

    @classmethod
    def point_mass(cls, x: BitString) -> "Distribution":
        return cls(x.n, np.array([x.value], dtype=np.int64), np.array([1.0]))

    # -- queries --------------------------------------------------------

    def prob(self, x: BitString) -> float:
        if x.n != self.n:
            raise ValueError(f"point dimension {x.n} != {self.n}")
        hits = np.nonzero(self.support == x.value)[0]
        return float(self.probs[hits[0]]) if hits.size else 0.0

    def dense_weights(self) -> np.ndarray:
        w = np.zeros(1 << self.n, dtype=np.float64)
        w[self.support] = self.probs
        return w

    def sample_index(self, rng: np.random.Generator) -> int:
        pos = int(np.searchsorted(self._cum, rng.random(), side="right"))
        return int(self.support[min(pos, self.support.size - 1)])

    def sample_indices(self, rng: np.random.Generator, count: int) -> np.ndarray:
        pos = np.searchsorted(self._cum, rng.random(count), side="right")
        return self.support[np.minimum(pos, self.support.size - 1)]

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        if self.support.size == (1 << self.n):
            return {"n": self.n, "dense": [float(p) for p in self.dense_weights()]}
        return {
            "n": self.n,
            "support": [
                {"x": BitString(self.n, int(i)).to_str(), "w": float(p)}
                for i, p in zip(self.support, self.probs)
            ],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "Distribution":
        n = int(doc["n"])
        if "dense" in doc:
            return cls.dense(n, doc["dense"])
        if "support" in doc:
            weights = {entry["x"]: float(entry["w"]) for entry in doc["support"]}
            return cls.sparse(n, weights)
        raise ValueError("distribution document needs 'dense' or 'support'")


def make_distribution(n: int, weights) -> Distribution:
    """Normalized distribution from raw nonnegative weights (dense or sparse)."""
    if isinstance(weights, Mapping):
        return Distribution.sparse(n, weights)
    return Distribution.dense(n, weights)


@dataclass(frozen=True)
class DistanceCertificate:
    """An exact witness for the distance of f to the nearest k-junta under D."""

    distance: float
    best_subset: frozenset[int]
    best_junta: BooleanFunction

    def to_json(self) -> dict:
        return {
            "distance": self.distance,
            "best_subset": sorted(self.best_subset),
            "best_junta": self.best_junta.to_json(),
        }


def _class_indices(n: int, variables: tuple[int, ...]) -> np.ndarray:
    points = np.arange(1 << n, dtype=np.int64)
    proj = np.zeros(1 << n, dtype=np.int64)
    for j, v in enumerate(variables):
        proj |= (points >> (v - 1) & 1) << j
    return proj


def best_junta_on(
    f: BooleanFunction, dist: Distribution, variables: Iterable[int]
) -> tuple[BooleanFunction, float]:
    """The junta on `variables` closest to f under D (weighted majority per class).

    Ties within a projection class break toward output 0.
    """
    if dist.n != f.n:
        raise ValueError(f"distribution dimension {dist.n} != {f.n}")
    vars_ = tuple(sorted(set(variables)))
    proj = _class_indices(f.n, vars_)
    w = dist.dense_weights()
    classes = 1 << len(vars_)
    # cost of answering 0 (resp. 1) in each class
    cost0 = np.bincount(proj, weights=w * f.table, minlength=classes)
    cost1 = np.bincount(proj, weights=w * (1 - f.table), minlength=classes)
    inner = (cost1 < cost0).astype(np.uint8)
    error = float(np.minimum(cost0, cost1).sum())
    return BooleanFunction.from_junta(f.n, vars_, inner), error


def distance_to_k_junta(
    f: BooleanFunction, dist: Distribution, k: int, work_cap: int = WORK_CAP
) -> DistanceCertificate:
    """Exact distance of f to the nearest k-junta with respect to D.

    Brute force over all C(n,k) variable subsets; the certificate carries the
    lexicographically smallest minimizing subset and its majority junta.
    """
    n = f.n
    if dist.n != n:
        raise ValueError(f"distribution dimension {dist.n} != {n}")
    if k < 0:
        raise ValueError("k must be nonnegative")
    k = min(k, n)
    if comb(n, k) * (1 << n) > work_cap:
        raise WorkCapExceededError(
            f"C({n},{k})*2^{n} exceeds the work cap of {work_cap}"
        )
    best: Optional[tuple[float, tuple[int, ...], BooleanFunction]] = None
    for subset in itertools.combinations(range(1, n + 1), k):
        junta, error = best_junta_on(f, dist, subset)
        if best is None or error < best[0] - _NORM_TOL:
            best = (error, subset, junta)
        if best[0] <= 0.0:
            break
    assert best is not None
    error, subset, junta = best
    return DistanceCertificate(
        distance=max(error, 0.0), best_subset=frozenset(subset), best_junta=junta
    )
