"""SSA/SSAU synchronous annealing and the single-flip SA baseline.

Random streams
--------------
Every run draws from a Philox (counter-based) generator keyed by
``numpy.random.SeedSequence(seed)``, where ``seed`` is an int or a tuple of
ints. Trial ``k`` of a batch with master seed ``S`` uses the key ``(S, k)``.
Within an SSA run the stream is consumed in a fixed order:

1. ``n`` doubles for the initial accumulators,
2. ``ceil(n / 64)`` raw 64-bit words per cycle for the noise signs; bit
   ``i % 64`` of word ``i // 64`` set means ``r_i(t) = +1``.

So each (trial, cycle, spin) maps to one fixed bit of one fixed stream,
whichever backend or thread count executes it.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .errors import ConfigurationError
from .hyperparams import AnnealParams
from .ising import cut_value, energy, local_fields

SA = "sa"


def make_rng(seed):
    """Philox generator for an int or tuple-of-ints seed."""
    if isinstance(seed, np.random.Generator):
        return seed
    entropy = list(seed) if isinstance(seed, (tuple, list)) else seed
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def derive_seed(master, *path):
    """Child seed for ``path`` (e.g. trial index) under ``master``."""
    base = tuple(master) if isinstance(master, (tuple, list)) else (int(master),)
    return base + tuple(int(p) for p in path)


def noise_words(rng, cycles, n):
    wpc = (n + 63) // 64
    return np.ascontiguousarray(rng.bit_generator.random_raw(cycles * wpc).reshape(cycles, wpc))


@dataclass(frozen=True)
class SsaState:
    sigma: np.ndarray
    Is: np.ndarray
    I0: float
    t: int = 0


@dataclass(frozen=True)
class SaConfig:
    T_init: float = 1.0
    T_final: float = 1.0 / 1000
    cycles: int = 1000

    def __post_init__(self):
        if not 0 < self.T_final <= self.T_init:
            raise ConfigurationError(
                f"need 0 < T_final <= T_init, got T_final={self.T_final}, T_init={self.T_init}"
            )
        if int(self.cycles) != self.cycles or self.cycles < 1:
            raise ConfigurationError(f"cycles must be a positive integer, got {self.cycles}")

    @property
    def delta_inv_temp(self):
        if self.cycles == 1:
            return 0.0
        return (1.0 / self.T_final - 1.0 / self.T_init) / (self.cycles - 1)


@dataclass
class RunResult:
    final_sigma: np.ndarray
    final_energy: float
    cut: float | None
    seed: tuple
    cycles_run: int
    algo: str
    trace: dict | None = None
    accepted: int | None = None


def init_state(model, params, rng):
    """Accumulators uniform in ``[-I0min, I0min)``, spins from their signs."""
    rng = make_rng(rng)
    u = rng.random(model.n)
    Is = params.I0min * (2.0 * u - 1.0)
    sigma = np.where(Is >= 0.0, 1, -1).astype(np.int8)
    return SsaState(sigma, Is, float(params.I0min), 0)


def ssa_step(model, state, params, rng=None, r=None):
    """One synchronous SSA/SSAU cycle; returns a new state.

    ``r`` is the {-1, +1} noise vector for this cycle; if omitted it is drawn
    from ``rng`` using the same packing as :func:`run_ssa`.
    """
    n = model.n
    if r is None:
        if rng is None:
            raise ConfigurationError("ssa_step needs either rng or r")
        r = kernels.pure.unpack_noise(noise_words(rng, 1, n)[0], n)
    else:
        r = np.asarray(r, dtype=np.float64)
    nu = params.noise_vector(n)
    I0 = state.I0
    I = local_fields(model, state.sigma) + nu * r
    s = state.Is + I
    Is = np.where(s >= I0, I0 - params.alpha, np.where(s < -I0, -I0, s))
    sigma = np.where(Is >= 0.0, 1, -1).astype(np.int8)
    return SsaState(sigma, Is, I0 / params.beta, state.t + 1)


def _csr_args(model):
    J = model.J
    return J.indptr, J.indices, J.data, model.h


def run_ssa(model, params, seed=0, record_trace=False, graph=None, backend=None):
    """Anneal from ``I0min`` to ``I0max`` over ``params.cycles`` synchronous cycles.

    The first cycle runs at ``I0min`` and ``I0`` is divided by ``beta`` after
    each of the first ``cycles - 1`` cycles, so the last one runs at ``I0max``.
    """
    if not isinstance(params, AnnealParams):
        raise ConfigurationError("params must be an AnnealParams instance")
    kern = kernels.get_backend(backend)
    n, cycles = model.n, int(params.cycles)
    seed = derive_seed(seed)
    rng = make_rng(seed)
    state = init_state(model, params, rng)
    noise = noise_words(rng, cycles, n)
    Is = state.Is.copy()
    sigma = state.sigma.copy()
    e_tr = i0_tr = None
    if record_trace:
        e_tr = np.empty(cycles)
        i0_tr = np.empty(cycles)
    indptr, indices, data, h = _csr_args(model)
    kern.ssa_run(indptr, indices, data, h, params.noise_vector(n), Is, sigma, noise,
                 state.I0, params.beta, params.alpha, cycles, e_tr, i0_tr, model.integral)
    trace = None
    if record_trace:
        trace = {"t": np.arange(cycles), "I0": i0_tr, "energy": e_tr}
    return RunResult(
        final_sigma=sigma,
        final_energy=energy(model, sigma),
        cut=cut_value(graph, sigma) if graph is not None else None,
        seed=seed,
        cycles_run=cycles,
        algo=params.mode,
        trace=trace,
    )


def run_sa(model, config=None, seed=0, record_trace=False, graph=None, backend=None):
    """Metropolis SA with one random single-spin flip attempt per cycle.

    The inverse temperature rises linearly: ``T <- 1 / (1/T + delta)``.
    """
    config = config or SaConfig()
    kern = kernels.get_backend(backend)
    n, cycles = model.n, int(config.cycles)
    seed = derive_seed(seed)
    rng = make_rng(seed)
    sigma = (kernels.pure.unpack_noise(noise_words(rng, 1, n)[0], n)).astype(np.int8)
    spins = rng.integers(0, n, size=cycles).astype(np.int64)
    uniforms = rng.random(cycles)
    e_tr = t_tr = a_tr = None
    if record_trace:
        e_tr = np.empty(cycles)
        t_tr = np.empty(cycles)
        a_tr = np.zeros(cycles, dtype=np.int8)
    indptr, indices, data, h = _csr_args(model)
    _, accepted = kern.sa_run(indptr, indices, data, h, sigma, spins, uniforms,
                              float(config.T_init), config.delta_inv_temp,
                              energy(model, sigma), e_tr, t_tr, a_tr)
    trace = None
    if record_trace:
        trace = {"t": np.arange(cycles), "T": t_tr, "energy": e_tr, "spin": spins,
                 "accepted": a_tr.astype(bool)}
    return RunResult(
        final_sigma=sigma,
        final_energy=energy(model, sigma),
        cut=cut_value(graph, sigma) if graph is not None else None,
        seed=seed,
        cycles_run=cycles,
        algo=SA,
        trace=trace,
        accepted=int(accepted),
    )


def run_trials(model, algo, trials, seed=0, params=None, config=None, graph=None,
               threads=1, backend=None):
    """Run ``trials`` independent anneals with seeds ``(seed, k)``.

    Results come back in trial order and do not depend on ``threads``.
    """
    if trials < 1:
        raise ConfigurationError(f"trials must be >= 1, got {trials}")
    algo = algo.lower()
    if algo == SA:
        def one(k):
            return run_sa(model, config, derive_seed(seed, k), graph=graph, backend=backend)
    else:
        if params is None:
            raise ConfigurationError(f"{algo} needs AnnealParams")
        if params.mode != algo:
            raise ConfigurationError(f"params are in {params.mode} mode but algo is {algo}")

        def one(k):
            return run_ssa(model, params, derive_seed(seed, k), graph=graph, backend=backend)

    if threads <= 1:
        return [one(k) for k in range(trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, range(trials)))


def with_cycles(params, cycles):
    """Same bounds and noise, re-derived beta for a different cycle count."""
    beta = (params.I0min / params.I0max) ** (1.0 / (cycles - 1))
    return replace(params, beta=beta, cycles=cycles)


def i0_schedule(params):
    """The I0 value used at each cycle, by repeated division as in the kernels."""
    out = np.empty(params.cycles)
    I0 = params.I0min
    for t in range(params.cycles):
        out[t] = I0
        if t < params.cycles - 1:
            I0 = I0 / params.beta
    return out


__all__ = [
    "SsaState", "SaConfig", "RunResult", "make_rng", "derive_seed", "init_state",
    "ssa_step", "run_ssa", "run_sa", "run_trials", "i0_schedule", "with_cycles",
]
