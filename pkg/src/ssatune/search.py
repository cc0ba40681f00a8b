"""Random and grid search over (n_rnd, I0min, I0max), the baseline the
closed-form parameters replace.

Each candidate is scored by the mean cut of ``eval_runs`` SSA anneals. The
sampled triple must satisfy ``I0max >= I0min > 0``; beta follows from the
bounds and the cycle count.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .annealers import derive_seed, make_rng, run_ssa
from .errors import ConfigurationError
from .hyperparams import AnnealParams
from .ising import cut_value

MAX_REJECTIONS = 10_000


@dataclass(frozen=True)
class SearchSpace:
    n_rnd: tuple = (0.0, 1000.0)
    I0min: tuple = (0.0, 1000.0)
    I0max: tuple = (0.0, 1000.0)
    trials: int = 1000

    def __post_init__(self):
        for name in ("n_rnd", "I0min", "I0max"):
            lo, hi = getattr(self, name)
            if not lo <= hi:
                raise ConfigurationError(f"{name} range is not ordered: ({lo}, {hi})")
            object.__setattr__(self, name, (float(lo), float(hi)))
        if self.n_rnd[0] < 0:
            raise ConfigurationError("n_rnd range must be non-negative")
        if self.trials < 1:
            raise ConfigurationError(f"trials must be >= 1, got {self.trials}")
        if self.I0min[1] <= 0:
            raise ConfigurationError("empty feasible region: I0min range has no positive values")
        if self.I0max[1] < max(self.I0min[0], np.nextafter(0.0, 1.0)):
            raise ConfigurationError("empty feasible region: no I0max >= I0min is possible")

    @classmethod
    def point(cls, params, trials=1):
        """Degenerate space containing only ``params``' bounds."""
        nr = float(np.mean(params.n_rnd))
        return cls((nr, nr), (params.I0min, params.I0min), (params.I0max, params.I0max), trials)


@dataclass
class SearchRecord:
    trial: int
    n_rnd: float
    I0min: float
    I0max: float
    beta: float
    mean_cut: float
    cuts: list


@dataclass
class SearchReport:
    records: list
    cycles: int
    eval_runs: int
    seed: object
    elapsed_s: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def best_index(self):
        # np.argmax returns the first maximum, which is the tie-break rule
        return int(np.argmax([r.mean_cut for r in self.records]))

    @property
    def best(self):
        return self.records[self.best_index]

    @property
    def best_mean_cut(self):
        return self.best.mean_cut

    @property
    def total_runs(self):
        return len(self.records) * self.eval_runs

    def best_params(self):
        b = self.best
        return AnnealParams(b.n_rnd, b.I0min, b.I0max, b.beta, self.cycles)

    def to_dict(self):
        return {
            "cycles": self.cycles,
            "eval_runs": self.eval_runs,
            "seed": self.seed,
            "elapsed_s": self.elapsed_s,
            "total_runs": self.total_runs,
            "best_index": self.best_index,
            "best_mean_cut": self.best_mean_cut,
            "records": [vars(r) for r in self.records],
            "meta": self.meta,
        }

    @classmethod
    def from_dict(cls, d):
        recs = [SearchRecord(**r) for r in d["records"]]
        seed = d["seed"]
        return cls(recs, d["cycles"], d["eval_runs"], seed, d.get("elapsed_s", 0.0), d.get("meta", {}))


def _uniform(rng, lo, hi):
    return lo + (hi - lo) * rng.random()


def sample_params(rng, space):
    """Draw one feasible ``(n_rnd, I0min, I0max)``; I0min is taken from ``(0, hi]``."""
    for _ in range(MAX_REJECTIONS):
        n_rnd = _uniform(rng, *space.n_rnd)
        lo, hi = space.I0min
        # 1 - u lies in (0, 1], so a range starting at 0 never yields exactly 0
        I0min = hi - (hi - lo) * (1.0 - rng.random()) if lo < hi else lo
        I0max = _uniform(rng, *space.I0max)
        if I0min > 0 and I0max >= I0min:
            return n_rnd, I0min, I0max
    raise ConfigurationError("could not sample a feasible point; the I0min/I0max ranges barely overlap")


def evaluate(model, graph, n_rnd, I0min, I0max, cycles, eval_runs, seed, backend=None):
    params = AnnealParams.from_bounds(n_rnd, I0min, I0max, cycles)
    cuts = []
    for k in range(eval_runs):
        res = run_ssa(model, params, derive_seed(seed, k), backend=backend)
        cuts.append(cut_value(graph, res.final_sigma))
    return params, cuts


def _search(model, graph, candidates, cycles, eval_runs, seed, backend, progress):
    t0 = time.perf_counter()
    records = []
    for trial, (n_rnd, I0min, I0max) in enumerate(candidates):
        params, cuts = evaluate(model, graph, n_rnd, I0min, I0max, cycles, eval_runs,
                                derive_seed(seed, trial), backend)
        records.append(SearchRecord(trial, n_rnd, I0min, I0max, params.beta,
                                    float(np.mean(cuts)), cuts))
        if progress:
            progress(trial, records[-1])
    return SearchReport(records, cycles, eval_runs, list(derive_seed(seed)),
                        time.perf_counter() - t0)


def random_search(model, graph, space=None, cycles=1000, eval_runs=1, seed=0,
                  backend=None, progress=None):
    """Random search; trial ``k`` anneals with seeds ``(seed, k, run)``.

    Candidates are drawn from a separate stream keyed ``(seed, "sample")`` so
    changing ``eval_runs`` does not change the sampled points.
    """
    space = space or SearchSpace()
    if cycles < 2:
        raise ConfigurationError(f"cycles must be >= 2, got {cycles}")
    if eval_runs < 1:
        raise ConfigurationError("eval_runs must be >= 1")
    rng = make_rng(derive_seed(seed, 0x5EA2C4))
    candidates = [sample_params(rng, space) for _ in range(space.trials)]
    return _search(model, graph, candidates, cycles, eval_runs, seed, backend, progress)


def grid_search(model, graph, space=None, points=5, cycles=1000, eval_runs=1, seed=0,
                backend=None, progress=None):
    """Cartesian grid of ``points`` values per axis; infeasible corners are skipped."""
    space = space or SearchSpace()
    axes = [np.linspace(*getattr(space, name), points) for name in ("n_rnd", "I0min", "I0max")]
    candidates = [(float(a), float(b), float(c)) for a, b, c in itertools.product(*axes)
                  if b > 0 and c >= b]
    if not candidates:
        raise ConfigurationError("grid contains no feasible point")
    return _search(model, graph, candidates, cycles, eval_runs, seed, backend, progress)
