"""Binomial branching trees and the tail bounds used against them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from prodperc.errors import InvalidParameterError
from prodperc.hashing import CoinStream

# Above this mean the inversion start value (1-p)^n gets too small to walk from.
_INVERSION_MAX_MEAN = 30.0


@dataclass(frozen=True)
class BgwConfig:
    offspring_n: int
    offspring_p: float
    node_cap: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.offspring_n < 1:
            raise InvalidParameterError("offspring_n must be positive")
        if not 0.0 <= self.offspring_p <= 1.0:
            raise InvalidParameterError("offspring_p must lie in [0, 1]")
        if self.node_cap < 1:
            raise InvalidParameterError("node_cap must be positive")

    @property
    def mean_offspring(self) -> float:
        return self.offspring_n * self.offspring_p

    @property
    def regime(self) -> str:
        # repr() recovers the shortest decimal, so 100 * 0.01 counts as exactly 1.
        m = Fraction(repr(float(self.offspring_p))) * self.offspring_n
        if m < 1:
            return "subcritical"
        if m > 1:
            return "supercritical"
        return "critical"


def phi(eps: float) -> float:
    """``sup_{theta>0} theta + 1 - eps - (1-eps) e^theta``.

    The maximiser is ``theta = -log(1 - eps)``, giving ``-log(1-eps) - eps``.
    """
    if not 0.0 < eps < 1.0:
        raise InvalidParameterError(f"eps={eps} outside (0, 1)")
    return -math.log1p(-eps) - eps


def tail_bound(k: int, eps: float) -> float:
    """``exp(-k phi(eps) / 2)``, the large-k tail of a ``Bin(n, (1-eps)/n)`` tree."""
    if k < 1:
        raise InvalidParameterError("k must be at least 1")
    return math.exp(-k * phi(eps) / 2)


def binomial_sample(n: int, p: float, rng: CoinStream) -> int:
    if p <= 0.0:
        return 0
    if p >= 1.0:
        return n
    if n * p > _INVERSION_MAX_MEAN:
        return sum(1 for _ in range(n) if rng.random() < p)
    u = rng.random()
    q = 1.0 - p
    ratio = p / q
    pmf = q**n
    cdf = pmf
    k = 0
    while u >= cdf and k < n:
        pmf *= ratio * (n - k) / (k + 1)
        k += 1
        cdf += pmf
    return k


def simulate_tree_size(cfg: BgwConfig) -> tuple[int, bool]:
    """Total progeny, stopped once ``node_cap`` nodes exist."""
    rng = CoinStream(cfg.seed)
    n, p, cap = cfg.offspring_n, cfg.offspring_p, cfg.node_cap
    size = 1
    pending = 1
    while pending:
        if size >= cap:
            return cap, True
        pending -= 1
        c = binomial_sample(n, p, rng)
        size += c
        pending += c
    return size, False


def tail_estimate(cfg: BgwConfig, k: int, trials: int) -> tuple[float, float]:
    """Monte-Carlo ``P(|T| >= k)``; tree ``t`` is seeded with ``cfg.seed + t``."""
    if cfg.node_cap < k:
        raise InvalidParameterError("node_cap must be at least k")
    if trials < 1:
        raise InvalidParameterError("trials must be positive")
    hits = 0
    for t in range(trials):
        tree = BgwConfig(cfg.offspring_n, cfg.offspring_p, k, cfg.seed + t)
        size, _ = simulate_tree_size(tree)
        hits += size >= k
    frac = hits / trials
    return frac, math.sqrt(frac * (1 - frac) / trials)


# -- concentration inequalities -------------------------------------------


def chernoff_upper(n: int, p: float, t: float) -> float:
    """Bound on ``P(X >= E[X] + t)`` for ``X ~ Bin(n, p)``."""
    _check_binomial(n, p, t)
    if t == 0:
        return 1.0
    mean = n * p
    return math.exp(-t * t / (2 * (mean + t / 3)))


def chernoff_lower(n: int, p: float, t: float) -> float:
    """Bound on ``P(X <= E[X] - t)`` for ``X ~ Bin(n, p)``."""
    _check_binomial(n, p, t)
    if t == 0:
        return 1.0
    mean = n * p
    if mean <= 0:
        raise InvalidParameterError("lower-tail bound needs n * p > 0")
    return math.exp(-t * t / (2 * mean))


def _check_binomial(n: int, p: float, t: float) -> None:
    if n < 0:
        raise InvalidParameterError("n must be non-negative")
    if not 0 <= p <= 1:
        raise InvalidParameterError("p must lie in [0, 1]")
    if t < 0:
        raise InvalidParameterError("t must be non-negative")


def binomial_tail_exact(n: int, p: Fraction, t, upper: bool = True) -> Fraction:
    """Exact ``P(X >= np + t)`` (or ``P(X <= np - t)``) in rational arithmetic."""
    p = Fraction(p)
    mean = n * p
    threshold = mean + t if upper else mean - t
    total = Fraction(0)
    for x in range(n + 1):
        if (x >= threshold) if upper else (x <= threshold):
            total += math.comb(n, x) * p**x * (1 - p) ** (n - x)
    return total


def bounded_difference(t: float, diffs: Sequence[float]) -> float:
    """``2 exp(-t^2 / (2 sum c_i^2))`` for a function with coordinate Lipschitz constants ``c_i``."""
    s = sum(c * c for c in diffs)
    if t < 0 or s <= 0:
        raise InvalidParameterError("need t >= 0 and at least one positive difference")
    return 2 * math.exp(-t * t / (2 * s))
