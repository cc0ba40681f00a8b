import math
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import g1_degree_profile, random_model
from ssatune.benchio import gen_complete_pm1, gen_random_graph
from ssatune.errors import ConfigurationError, DegenerateInstanceError
from ssatune.hyperparams import (
    AnnealParams,
    LocalEnergyStats,
    determine_params,
    local_energy_stats,
    params_for_model,
)
from ssatune.ising import IsingModel, WeightedGraph, maxcut_to_ising


def test_two_node_closed_form():
    st_ = local_energy_stats(maxcut_to_ising(WeightedGraph.from_edges(2, [(0, 1, 1.0)])))
    # row (0, -1) after the J = -w mapping; |mu| and s are sign-blind
    assert st_.min_abs_mu == pytest.approx(0.5)
    assert st_.max_abs_mu == pytest.approx(0.5)
    assert st_.s.tolist() == pytest.approx([math.sqrt(0.5)] * 2)


def test_g1_degree_profile_matches_table_values():
    stats = local_energy_stats(maxcut_to_ising(g1_degree_profile()))
    deg = np.array([27, 67])
    exp_mu = 799 * deg / 800
    exp_s = np.sqrt(799 * 2 * deg / 1600)
    assert stats.min_abs_mu == pytest.approx(exp_mu[0], rel=1e-12)
    assert stats.max_abs_mu == pytest.approx(exp_mu[1], rel=1e-12)
    assert stats.min_s == pytest.approx(exp_s[0], rel=1e-12)
    assert stats.max_s == pytest.approx(exp_s[1], rel=1e-12)
    # printed row: [26.97, 66.92] and [5.19, 8.18]
    assert stats.min_abs_mu == pytest.approx(26.97, abs=0.01)
    assert stats.max_abs_mu == pytest.approx(66.92, abs=0.01)
    assert stats.min_s == pytest.approx(5.19, abs=0.01)
    assert stats.max_s == pytest.approx(8.18, abs=0.01)
    p = determine_params(stats, 1000)
    assert p.I0min == pytest.approx(27.05, abs=0.01)
    assert p.I0max == pytest.approx(43.33, abs=0.01)
    assert p.beta == pytest.approx(0.99952, abs=1e-5)


def test_params_from_printed_g1_stats():
    # s chosen so that 0.6745 * mean(s) = 4.66
    x = 2 * 4.66 / 0.6745 - 8.18
    stats = LocalEnergyStats(np.array([26.97, 66.92]), np.array([8.18, x]))
    p = determine_params(stats, 1000)
    assert p.n_rnd == pytest.approx(4.66, abs=1e-12)
    assert p.I0min == pytest.approx(27.0518, rel=1e-12)
    assert p.I0max == pytest.approx(43.33, rel=1e-12)
    assert p.beta == pytest.approx(0.99952, abs=1e-5)


def test_k2000_shape_statistics():
    g = gen_complete_pm1(2000, 0.5, seed=7)
    stats = local_energy_stats(maxcut_to_ising(g))
    assert np.allclose(stats.s, 1999 / math.sqrt(2000), rtol=1e-12)
    assert stats.max_s == pytest.approx(44.70, abs=0.02)
    p = determine_params(stats, 1000)
    assert p.n_rnd == pytest.approx(30.15, abs=0.01)


def test_printed_k2000_stats_to_params():
    stats = LocalEnergyStats(np.array([0.99, 168.92]), np.array([44.70, 44.70]))
    p = determine_params(stats, 1000)
    assert p.I0min == pytest.approx(1.45, abs=0.02)
    assert p.I0max == pytest.approx(90.40, abs=0.02)


def test_uniform_stats_formulas():
    c, m = 3.0, 5.0
    stats = LocalEnergyStats(np.array([m, -m, m]), np.full(3, c))
    p = determine_params(stats, 2)
    assert p.n_rnd == pytest.approx(0.6745 * c)
    assert p.I0min == pytest.approx(m + 0.01 * c)
    assert p.I0max == pytest.approx(m + 2 * c)
    assert p.beta == pytest.approx(p.I0min / p.I0max)


def test_ssau_mode_and_consistency():
    model = maxcut_to_ising(gen_random_graph(60, 0.2, (-1.0, 1.0), seed=2))
    stats = local_energy_stats(model)
    ssa = determine_params(stats, 500, "ssa")
    ssau = determine_params(stats, 500, "ssau")
    assert ssau.mode == "ssau" and ssa.mode == "ssa"
    assert np.allclose(ssau.n_rnd, 0.6745 * stats.s)
    assert abs(np.mean(ssau.n_rnd) - ssa.n_rnd) <= 1e-12 * ssa.n_rnd
    assert (ssau.I0min, ssau.I0max, ssau.beta) == (ssa.I0min, ssa.I0max, ssa.beta)


def test_constants_are_configurable():
    model = maxcut_to_ising(gen_complete_pm1(20, 0.5, 1))
    stats = local_energy_stats(model)
    p = determine_params(stats, 100, c_noise=1.0, c_i0min=1e-6, c_i0max=3.0)
    assert p.n_rnd == pytest.approx(stats.mean_s)
    assert p.I0min == pytest.approx(1e-6 * stats.max_s + stats.min_abs_mu)
    assert p.I0max == pytest.approx(3.0 * stats.max_s + stats.min_abs_mu)


def test_degenerate_instances():
    with pytest.raises(DegenerateInstanceError):
        local_energy_stats(IsingModel.from_dense(np.zeros((1, 1))))
    zero = local_energy_stats(IsingModel.from_dense(np.zeros((4, 4))))
    with pytest.raises(DegenerateInstanceError):
        determine_params(zero, 100)
    with pytest.raises(ConfigurationError):
        determine_params(zero, 1)


def test_zero_min_mu_still_positive_i0min():
    # a torus-like graph where some rows sum to zero: min|mu| = 0 but I0min = 0.01 max(s)
    g = WeightedGraph.from_edges(4, [(0, 1, 1.0), (0, 2, -1.0), (1, 3, 1.0), (2, 3, 1.0)])
    stats = local_energy_stats(maxcut_to_ising(g))
    assert stats.min_abs_mu == 0.0
    p = determine_params(stats, 10)
    assert p.I0min == pytest.approx(0.01 * stats.max_s)


def test_h_is_excluded():
    model, _, _ = random_model(8, 3, with_h=True)
    no_h = IsingModel(np.zeros(8), model.J)
    a, b = local_energy_stats(model), local_energy_stats(no_h)
    assert np.array_equal(a.mu, b.mu) and np.array_equal(a.s, b.s)


def test_annealparams_validation():
    with pytest.raises(ConfigurationError):
        AnnealParams(1.0, 0.0, 1.0, 0.5, 10)
    with pytest.raises(ConfigurationError):
        AnnealParams(1.0, 2.0, 1.0, 0.5, 10)
    with pytest.raises(ConfigurationError):
        AnnealParams(1.0, 1.0, 2.0, 1.5, 10)
    with pytest.raises(ConfigurationError):
        AnnealParams(1.0, 1.0, 2.0, 0.5, 1)
    with pytest.raises(ConfigurationError):
        AnnealParams(1.0, 1.0, 2.0, 0.5, 10, alpha=-0.1)
    with pytest.raises(ConfigurationError):
        AnnealParams(1.0, 1.0, 2.0, 0.5, 10, alpha=1.0)
    assert AnnealParams(1.0, 1.0, 2.0, 0.5, 10, alpha=0.99).alpha == 0.99


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 40), st.integers(0, 2**31), st.integers(2, 5000))
def test_schedule_endpoint_and_sign_invariance(n, seed, cycles):
    model, _, _ = random_model(n, seed, density=0.8)
    if not model.nnz:
        return
    p = params_for_model(model, cycles)
    assert p.I0min / p.beta ** (cycles - 1) == pytest.approx(p.I0max, rel=1e-9)
    q = params_for_model(model.negated(), cycles)
    assert (p.n_rnd, p.I0min, p.I0max, p.beta) == (q.n_rnd, q.I0min, q.I0max, q.beta)
    a, b = local_energy_stats(model), local_energy_stats(model.negated())
    assert np.array_equal(a.s, b.s) and np.array_equal(np.abs(a.mu), np.abs(b.mu))


@pytest.mark.parametrize("n", [5, 17, 64, 300])
def test_complete_pm1_closed_form(n):
    stats = local_energy_stats(maxcut_to_ising(gen_complete_pm1(n, 0.5, n)))
    assert np.allclose(stats.s, (n - 1) / math.sqrt(n), rtol=1e-12)


def test_stats_cost_is_linear_in_edges():
    """Doubling the edge count must not blow the runtime up cubically."""
    def timed(n):
        model = maxcut_to_ising(gen_random_graph(n, 0.05, (-1.0, 1.0), seed=n))
        best = float("inf")
        for _ in range(5):
            t0 = time.perf_counter()
            determine_params(local_energy_stats(model), 1000)
            best = min(best, time.perf_counter() - t0)
        return model.nnz, best

    e1, t1 = timed(1000)
    e2, t2 = timed(4000)
    # 16x edges; cubic-in-n growth would be 64x
    assert t2 / t1 < 4 * e2 / e1
