"""Closed-form SSA/SSAU hyperparameters from local-energy statistics.

The local energy of spin i over random neighbour states is approximately
normal with mean mu_i and standard deviation s_i:

    mu_i = (n - 1) * mean(J_i:)                 mean over the full length-n row
    s_i  = sqrt((n - 1) * Var([J_i:; -J_i:]))   population variance, = sum_j J_ij^2 / n

The annealing parameters then follow without any search:

    n_rnd   = 0.6745 * mean(s_i)        (SSAU: n_rnd_i = 0.6745 * s_i)
    I0min   = 0.01 * max(s_i) + min|mu_i|
    I0max   = 2 * max(s_i) + min|mu_i|
    beta    = (I0min / I0max) ** (1 / (cycles - 1))

Biases h do not enter the statistics.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DegenerateInstanceError

C_NOISE = 0.6745
C_I0MIN = 0.01
C_I0MAX = 2.0

SSA = "ssa"
SSAU = "ssau"


@dataclass(frozen=True, eq=False)
class LocalEnergyStats:
    mu: np.ndarray
    s: np.ndarray
    mean_s: float = field(init=False)
    max_s: float = field(init=False)
    min_s: float = field(init=False)
    min_abs_mu: float = field(init=False)
    max_abs_mu: float = field(init=False)

    def __post_init__(self):
        abs_mu = np.abs(self.mu)
        # np.sum reduces pairwise, so mean_s is independent of any parallel split
        object.__setattr__(self, "mean_s", float(np.sum(self.s) / len(self.s)))
        object.__setattr__(self, "max_s", float(self.s.max()))
        object.__setattr__(self, "min_s", float(self.s.min()))
        object.__setattr__(self, "min_abs_mu", float(abs_mu.min()))
        object.__setattr__(self, "max_abs_mu", float(abs_mu.max()))

    @property
    def n(self):
        return len(self.s)


@dataclass(frozen=True)
class AnnealParams:
    """Inputs to one SSA/SSAU run.

    ``n_rnd`` is a float in SSA mode and a length-n array in SSAU mode.
    """

    n_rnd: float | np.ndarray
    I0min: float
    I0max: float
    beta: float
    cycles: int
    alpha: float = 0.0

    def __post_init__(self):
        if not self.I0min > 0:
            raise ConfigurationError(f"I0min must be > 0, got {self.I0min}")
        if not self.I0max >= self.I0min:
            raise ConfigurationError(f"I0max ({self.I0max}) must be >= I0min ({self.I0min})")
        if not 0 < self.beta <= 1:
            raise ConfigurationError(f"beta must lie in (0, 1], got {self.beta}")
        if int(self.cycles) != self.cycles or self.cycles < 2:
            raise ConfigurationError(f"cycles must be an integer >= 2, got {self.cycles}")
        if not 0 <= self.alpha < self.I0min:
            # a larger resolution would make the top clamp I0 - alpha non-positive
            raise ConfigurationError(f"alpha must lie in [0, I0min={self.I0min}), got {self.alpha}")
        if np.ndim(self.n_rnd) == 0:
            object.__setattr__(self, "n_rnd", float(self.n_rnd))
        else:
            arr = np.array(self.n_rnd, dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, "n_rnd", arr)

    @property
    def mode(self):
        return SSA if np.ndim(self.n_rnd) == 0 else SSAU

    def noise_vector(self, n):
        if self.mode == SSA:
            return np.full(n, self.n_rnd)
        if len(self.n_rnd) != n:
            raise ConfigurationError(f"per-spin noise has length {len(self.n_rnd)}, model has {n} spins")
        return np.array(self.n_rnd)

    @classmethod
    def from_bounds(cls, n_rnd, I0min, I0max, cycles, alpha=0.0):
        """Build params with beta chosen so the schedule ends exactly at ``I0max``."""
        return cls(n_rnd, I0min, I0max, schedule_beta(I0min, I0max, cycles), cycles, alpha)

    def as_dict(self):
        n_rnd = self.n_rnd if self.mode == SSA else self.n_rnd.tolist()
        return {
            "mode": self.mode,
            "n_rnd": n_rnd,
            "I0min": self.I0min,
            "I0max": self.I0max,
            "beta": self.beta,
            "cycles": self.cycles,
            "alpha": self.alpha,
        }


def schedule_beta(I0min, I0max, cycles):
    if cycles < 2:
        raise ConfigurationError(f"cycles must be >= 2, got {cycles}")
    if not I0min > 0:
        raise ConfigurationError(f"I0min must be > 0, got {I0min}")
    return (I0min / I0max) ** (1.0 / (cycles - 1))


def local_energy_stats(model):
    """Per-spin mean and standard deviation of the local energy, in O(nnz)."""
    n = model.n
    if n < 2:
        raise DegenerateInstanceError(f"need at least 2 spins, got {n}")
    J = model.J
    row_sum = np.asarray(J.sum(axis=1)).ravel()
    row_sq = np.asarray(J.multiply(J).sum(axis=1)).ravel()
    mu = (n - 1) * (row_sum / n)
    s = np.sqrt((n - 1) * (row_sq / n))
    return LocalEnergyStats(mu, s)


def determine_params(
    stats,
    cycles,
    mode=SSA,
    alpha=0.0,
    c_noise=C_NOISE,
    c_i0min=C_I0MIN,
    c_i0max=C_I0MAX,
):
    """Closed-form annealing parameters. No annealing runs are performed."""
    if cycles < 2:
        raise ConfigurationError(f"cycles must be >= 2, got {cycles}")
    mode = mode.lower()
    if mode == SSA:
        n_rnd = c_noise * stats.mean_s
    elif mode == SSAU:
        n_rnd = c_noise * np.asarray(stats.s)
    else:
        raise ConfigurationError(f"unknown mode {mode!r}; expected 'ssa' or 'ssau'")
    I0min = c_i0min * stats.max_s + stats.min_abs_mu
    I0max = c_i0max * stats.max_s + stats.min_abs_mu
    if not I0min > 0 or not math.isfinite(I0min):
        raise DegenerateInstanceError(
            "I0min evaluates to 0: all couplings are zero (or c_i0min is 0 with min|mu| = 0)"
        )
    if I0max < I0min:
        raise ConfigurationError("c_i0max must be >= c_i0min")
    return AnnealParams(n_rnd, I0min, I0max, schedule_beta(I0min, I0max, cycles), cycles, alpha)


def params_for_model(model, cycles, mode=SSA, alpha=0.0, **constants):
    return determine_params(local_energy_stats(model), cycles, mode, alpha, **constants)


def table_row(stats, params_ssa, params_ssau=None):
    """Summary values in the layout of a hyperparameter report row."""
    row = {
        "abs_mu_min": stats.min_abs_mu,
        "abs_mu_max": stats.max_abs_mu,
        "s_min": stats.min_s,
        "s_max": stats.max_s,
        "n_rnd": params_ssa.n_rnd,
        "I0min": params_ssa.I0min,
        "I0max": params_ssa.I0max,
        "beta": params_ssa.beta,
        "cycles": params_ssa.cycles,
    }
    if params_ssau is not None:
        row["n_rnd_i_min"] = float(np.min(params_ssau.n_rnd))
        row["n_rnd_i_max"] = float(np.max(params_ssau.n_rnd))
    return row
