"""Threshold sweeps and the bound checks built on them."""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from prodperc import hashing
from prodperc.errors import InvalidParameterError
from prodperc.graph_core import build_named
from prodperc.percolation import ComponentStats, PercolationSample, component_stats, default_mode
from prodperc.product import ProductGraph

CSV_COLUMNS = ("p", "trial", "seed", "L1_frac", "L2_frac", "components")
PROOF_EPS_MAX = 0.1
MASK64 = (1 << 64) - 1


def _run_trials(
    pg: ProductGraph, jobs: Sequence[tuple[int, float]], mode: str | None, threads: int
) -> list[ComponentStats]:
    mode = mode or default_mode(pg)

    def one(job):
        seed, p = job
        return component_stats(pg, PercolationSample(seed, p, mode))

    if threads <= 1 or len(jobs) <= 1:
        return [one(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, jobs))


@dataclass(frozen=True)
class TrialRow:
    p: float
    trial: int
    seed: int
    L1: int
    L2: int
    components: int


@dataclass(frozen=True)
class PointSummary:
    p: float
    trials: int
    mean_L1_frac: float
    min_L1_frac: float
    max_L1_frac: float
    std_L1_frac: float
    mean_L2_frac: float
    min_L2_frac: float
    max_L2_frac: float
    std_L2_frac: float


@dataclass
class SweepResult:
    graph: str
    vertex_count: int
    p_grid: list[float]
    trials: int
    base_seed: int
    coupled: bool
    rows: list[TrialRow] = field(default_factory=list)

    def rows_at(self, p: float) -> list[TrialRow]:
        return [r for r in self.rows if r.p == p]

    def summary(self) -> list[PointSummary]:
        out = []
        V = self.vertex_count
        for p in self.p_grid:
            rows = self.rows_at(p)
            l1 = [r.L1 / V for r in rows]
            l2 = [r.L2 / V for r in rows]
            out.append(
                PointSummary(
                    p=p,
                    trials=len(rows),
                    # integer sums keep the mean exactly monotone under coupling
                    mean_L1_frac=sum(r.L1 for r in rows) / (len(rows) * V),
                    min_L1_frac=min(l1),
                    max_L1_frac=max(l1),
                    std_L1_frac=statistics.pstdev(l1),
                    mean_L2_frac=sum(r.L2 for r in rows) / (len(rows) * V),
                    min_L2_frac=min(l2),
                    max_L2_frac=max(l2),
                    std_L2_frac=statistics.pstdev(l2),
                )
            )
        return out

    def mean_L1_frac(self) -> list[float]:
        return [s.mean_L1_frac for s in self.summary()]

    def to_csv(self, header: dict | None = None) -> str:
        buf = io.StringIO()
        meta = {
            "graph": self.graph,
            "vertex_count": self.vertex_count,
            "p_grid": self.p_grid,
            "trials": self.trials,
            "base_seed": self.base_seed,
            "coupled": self.coupled,
        }
        if header:
            buf.write(f"# {json.dumps(header, sort_keys=True)}\n")
        buf.write(f"# sweep {json.dumps(meta, sort_keys=True)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        V = self.vertex_count
        for r in self.rows:
            w.writerow([repr(r.p), r.trial, r.seed, repr(r.L1 / V), repr(r.L2 / V), r.components])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> SweepResult:
        meta = None
        body = []
        for line in text.splitlines():
            if line.startswith("# sweep "):
                meta = json.loads(line[len("# sweep "):])
            elif not line.startswith("#"):
                body.append(line)
        if meta is None:
            raise InvalidParameterError("CSV lacks the '# sweep' metadata line")
        reader = csv.DictReader(body)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise InvalidParameterError(f"unexpected CSV columns {reader.fieldnames}")
        V = meta["vertex_count"]
        rows = [
            TrialRow(
                p=float(d["p"]),
                trial=int(d["trial"]),
                seed=int(d["seed"]),
                L1=round(float(d["L1_frac"]) * V),
                L2=round(float(d["L2_frac"]) * V),
                components=int(d["components"]),
            )
            for d in reader
        ]
        return cls(
            graph=meta["graph"],
            vertex_count=V,
            p_grid=[float(p) for p in meta["p_grid"]],
            trials=meta["trials"],
            base_seed=meta["base_seed"],
            coupled=meta["coupled"],
            rows=rows,
        )


def trial_seed(base_seed: int, trial: int, point: int = 0, trials: int = 0) -> int:
    return (base_seed + point * trials + trial) & MASK64


def sweep(
    pg: ProductGraph,
    p_grid: Iterable[float],
    trials: int,
    base_seed: int,
    coupled: bool = True,
    mode: str | None = None,
    threads: int = 1,
) -> SweepResult:
    """Census at every grid point over ``trials`` seeds.

    Coupled sweeps reuse seeds ``base_seed + t`` at every ``p``; otherwise
    point ``i`` uses ``base_seed + i * trials + t``.
    """
    grid = [float(p) for p in p_grid]
    if any(not 0.0 <= p <= 1.0 for p in grid):
        raise InvalidParameterError("grid values must lie in [0, 1]")
    if grid != sorted(grid) or len(set(grid)) != len(grid):
        raise InvalidParameterError("grid must be strictly increasing")
    if trials < 1:
        raise InvalidParameterError("trials must be positive")
    jobs = []
    for i, p in enumerate(grid):
        for t in range(trials):
            seed = trial_seed(base_seed, t) if coupled else trial_seed(base_seed, t, i, trials)
            jobs.append((seed, p, t))
    stats = _run_trials(pg, [(s, p) for s, p, _ in jobs], mode, threads)
    rows = [
        TrialRow(p, t, seed, st.L1, st.L2, st.component_count)
        for (seed, p, t), st in zip(jobs, stats)
    ]
    return SweepResult(pg.label, pg.vertex_count, grid, trials, base_seed, coupled, rows)


def linear_grid(lo: float, hi: float, num: int) -> list[float]:
    return [float(x) for x in np.linspace(lo, hi, num)]


# -- subcritical regime ---------------------------------------------------


def subcritical_bound(eps: float, n: int, C: int) -> float:
    return math.exp(-(eps * eps) * n / (9 * C * C))


@dataclass(frozen=True)
class BoundCheck:
    epsilon: float
    C: int
    n: int
    p: float
    bound_value: float
    observed_max_L1_frac: float
    trials: int
    seeds: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return self.observed_max_L1_frac <= self.bound_value

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "C": self.C,
            "n": self.n,
            "p": self.p,
            "bound_value": self.bound_value,
            "observed_max_L1_frac": self.observed_max_L1_frac,
            "trials": self.trials,
            "seeds": list(self.seeds),
            "pass": self.passed,
        }


def _p_from_eps(pg: ProductGraph, eps: float, sign: int) -> float:
    if not 0.0 < eps < 1.0:
        raise InvalidParameterError(f"eps={eps} outside (0, 1)")
    # (1 +- eps) / dbar with dbar = num/den exact
    d = pg.mean_degree
    return min(1.0, (1.0 + sign * eps) * d.denominator / d.numerator)


def subcritical_check(
    pg: ProductGraph, eps: float, trials: int, base_seed: int,
    mode: str | None = None, threads: int = 1,
) -> BoundCheck:
    p = _p_from_eps(pg, eps, -1)
    seeds = [trial_seed(base_seed, t) for t in range(trials)]
    stats = _run_trials(pg, [(s, p) for s in seeds], mode, threads)
    bound = subcritical_bound(eps, pg.n, pg.declared_C)
    # A trial passes iff L1 <= bound * |V|; comparing fractions is the same test.
    observed = max(st.L1 for st in stats) / pg.vertex_count
    return BoundCheck(eps, pg.declared_C, pg.n, p, bound, observed, trials, tuple(seeds))


# -- supercritical regime -------------------------------------------------


@dataclass(frozen=True)
class SupercriticalReport:
    epsilon: float
    p: float
    c_floor: float
    L1_fracs: tuple[float, ...]
    L2_over_L1: tuple[float, ...]
    seeds: tuple[int, ...]

    @property
    def min_L1_frac(self) -> float:
        return min(self.L1_fracs)

    @property
    def mean_L1_frac(self) -> float:
        return sum(self.L1_fracs) / len(self.L1_fracs)

    @property
    def mean_L2_over_L1(self) -> float:
        return sum(self.L2_over_L1) / len(self.L2_over_L1)

    @property
    def passed(self) -> bool:
        return self.min_L1_frac > self.c_floor

    @property
    def within_proof_range(self) -> bool:
        return self.epsilon <= PROOF_EPS_MAX

    def to_dict(self) -> dict:
        out = {
            "epsilon": self.epsilon,
            "p": self.p,
            "c_floor": self.c_floor,
            "min_L1_frac": self.min_L1_frac,
            "mean_L1_frac": self.mean_L1_frac,
            "mean_L2_over_L1": self.mean_L2_over_L1,
            "L1_fracs": list(self.L1_fracs),
            "seeds": list(self.seeds),
            "pass": self.passed,
        }
        if not self.within_proof_range:
            out["note"] = "beyond proof's working range (eps > 0.1)"
        return out


def supercritical_check(
    pg: ProductGraph, eps: float, trials: int, base_seed: int, c_floor: float,
    mode: str | None = None, threads: int = 1,
) -> SupercriticalReport:
    if not 0.0 < c_floor < 1.0:
        raise InvalidParameterError("c_floor must lie in (0, 1)")
    p = _p_from_eps(pg, eps, +1)
    seeds = [trial_seed(base_seed, t) for t in range(trials)]
    stats = _run_trials(pg, [(s, p) for s in seeds], mode, threads)
    return SupercriticalReport(
        epsilon=eps,
        p=p,
        c_floor=c_floor,
        L1_fracs=tuple(st.L1_frac for st in stats),
        L2_over_L1=tuple(st.L2 / st.L1 for st in stats),
        seeds=tuple(seeds),
    )


# -- cycle counterexample --------------------------------------------------


def counterexample_graph(n_factors: int, cycle_len: int) -> ProductGraph:
    """``K2^(n_factors - 1)`` times a cycle; the cycle is the last factor."""
    if n_factors < 2:
        raise InvalidParameterError("need at least two factors")
    if cycle_len < 3:
        raise InvalidParameterError("cycle length must be at least 3")
    k2 = build_named("edge", 2)
    return ProductGraph([k2] * (n_factors - 1) + [build_named("cycle", cycle_len)])


@dataclass(frozen=True)
class CounterexampleTrial:
    seed: int
    closed_rungs: int
    L1: int
    components: int


@dataclass(frozen=True)
class CounterexampleReport:
    n_factors: int
    cycle_len: int
    p: float
    vertex_count: int
    rung_size: int
    trials: tuple[CounterexampleTrial, ...]

    @property
    def closed_prob(self) -> float:
        return (1.0 - self.p) ** self.rung_size

    @property
    def expected_closed(self) -> float:
        return self.cycle_len * self.closed_prob

    @property
    def sd_closed(self) -> float:
        q = self.closed_prob
        return math.sqrt(self.cycle_len * q * (1 - q))

    @property
    def mean_closed(self) -> float:
        return sum(t.closed_rungs for t in self.trials) / len(self.trials)

    @property
    def counts_within_4sd(self) -> bool:
        tol = 4 * self.sd_closed
        return all(abs(t.closed_rungs - self.expected_closed) <= tol for t in self.trials)

    @property
    def mean_within_4se(self) -> bool:
        tol = 4 * self.sd_closed / math.sqrt(len(self.trials))
        return abs(self.mean_closed - self.expected_closed) <= tol

    @property
    def cut_implication_holds(self) -> bool:
        return all(t.L1 < self.vertex_count for t in self.trials if t.closed_rungs >= 2)

    @property
    def passed(self) -> bool:
        return self.counts_within_4sd and self.mean_within_4se and self.cut_implication_holds

    def to_dict(self) -> dict:
        return {
            "n_factors": self.n_factors,
            "cycle_len": self.cycle_len,
            "p": self.p,
            "vertex_count": self.vertex_count,
            "rung_size": self.rung_size,
            "expected_closed_rungs": self.expected_closed,
            "sd_closed_rungs": self.sd_closed,
            "mean_closed_rungs": self.mean_closed,
            "closed_rungs": [t.closed_rungs for t in self.trials],
            "L1_fracs": [t.L1 / self.vertex_count for t in self.trials],
            "seeds": [t.seed for t in self.trials],
            "counts_within_4sd": self.counts_within_4sd,
            "mean_within_4se": self.mean_within_4se,
            "cut_implication_holds": self.cut_implication_holds,
            "pass": self.passed,
        }


def closed_rung_count(pg: ProductGraph, seed: int, p: float) -> int:
    """Number of last-factor edges whose whole rung set is closed."""
    j = pg.n - 1
    m = pg.block_len[j]
    n_rungs = len(pg.factor_edges[j])
    ids = np.arange(pg.block_base[j], pg.block_base[j] + n_rungs * m, dtype=np.uint64)
    closed = (hashing.uniforms(seed, ids) >= p).reshape(n_rungs, m)
    return int(closed.all(axis=1).sum())


def counterexample_run(
    n_factors: int, cycle_len: int, trials: int, seed: int, mode: str | None = None
) -> CounterexampleReport:
    pg = counterexample_graph(n_factors, cycle_len)
    p = 2.0 / (n_factors + 1)
    out = []
    for t in range(trials):
        s = trial_seed(seed, t)
        st = component_stats(pg, PercolationSample(s, p, mode or default_mode(pg)))
        out.append(CounterexampleTrial(s, closed_rung_count(pg, s, p), st.L1, st.component_count))
    return CounterexampleReport(
        n_factors=n_factors,
        cycle_len=cycle_len,
        p=p,
        vertex_count=pg.vertex_count,
        rung_size=pg.block_len[-1],
        trials=tuple(out),
    )
