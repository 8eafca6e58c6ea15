import json
import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp
from scipy.stats import chisquare

from gqaa.anneal import (
    CLASSICAL_LIMIT,
    FORWARD,
    QUANTUM_EXACT,
    REVERSE,
    THERMAL,
    AnnealSchedule,
    BackendError,
    BackendParams,
    ScheduleError,
    calibrate_mutation,
    dumps_ising,
    evolve_quantum_exact,
    export_ising,
    forward_schedule,
    import_ising,
    loads_ising,
    pinned_schedule,
    reverse_schedule,
    sample,
    single_spin_flip_probability,
)
from gqaa.anneal.export import ExportError
from gqaa.ising import IsingProblem, classical_genotype, energies, index_to_spins


def hold_at(s, hold=200.0):
    """Reverse schedule that jumps to ``s``, holds, and jumps back."""
    eps = 1e-6
    return AnnealSchedule(((0, 1), (eps, s), (eps + hold, s), (2 * eps + hold, 1)), REVERSE)


def dense_reference(problem, schedule, init=None):
    """Independent adaptive-RK evolution of the full state vector."""
    n = problem.n_spins
    dim = 1 << n
    diag = energies(problem, index_to_spins(np.arange(dim), n))
    X = np.zeros((dim, dim))
    for q in range(n):
        bit = 1 << (n - 1 - q)
        for idx in range(dim):
            X[idx, idx ^ bit] += 1.0
    if schedule.mode == FORWARD:
        configs = index_to_spins(np.arange(dim), n)
        psi0 = np.prod(np.where(configs > 0, 1.0, -1.0), axis=1).astype(complex) / math.sqrt(dim)
    else:
        psi0 = np.zeros(dim, dtype=complex)
        bits = (np.asarray(init) > 0).astype(int)
        psi0[int("".join(map(str, bits)), 2)] = 1.0

    def rhs(t, psi):
        s = float(schedule.s_at(t))
        return -1j * ((1 - s) * (X @ psi) + s * diag * psi)

    sol = solve_ivp(rhs, (schedule.t_init, schedule.t_final), psi0, method="DOP853",
                    rtol=1e-10, atol=1e-12, t_eval=[schedule.t_final],
                    first_step=1e-3, max_step=0.05)
    return np.abs(sol.y[:, -1]) ** 2


# schedules


def test_schedule_validation():
    with pytest.raises(ScheduleError):
        AnnealSchedule(((0, 1), (0, 1)))
    with pytest.raises(ScheduleError):
        AnnealSchedule(((0, 1), (1, 0.5)))
    with pytest.raises(ScheduleError):
        AnnealSchedule(((0, 0.5), (1, 1)), REVERSE)
    with pytest.raises(ScheduleError):
        AnnealSchedule(((0, 1), (1, 1)), FORWARD)
    with pytest.raises(ScheduleError):
        AnnealSchedule(((0, 1), (1, 1.5), (2, 1)))


def test_reverse_schedule_shape():
    sch = reverse_schedule(0.74)
    assert sch.to_list() == [[0.0, 1.0], [10.0, 0.74], [110.0, 0.74], [120.0, 1.0]]
    assert sch.s_min == 0.74 and sch.duration == 120.0
    assert sch.s_at(5.0) == pytest.approx(0.87)


# temperature helpers


def test_calibration_inverts_flip_probability():
    for rate in (0.01, 0.05, 0.2):
        for h in (0.05, 0.15, 1.0):
            T = calibrate_mutation(rate, h)
            assert single_spin_flip_probability(h, T) == pytest.approx(rate, rel=1e-12)
    with pytest.raises(BackendError):
        calibrate_mutation(0.6, 0.1)


def test_effective_temperature_monotone():
    p = BackendParams(t0=2.0)
    s = np.linspace(0, 1, 101)
    T = p.temperature(s)
    assert np.all(np.diff(T) <= 0) and T[-1] == 0.0


def test_params_validation():
    with pytest.raises(BackendError):
        BackendParams(variant="dwave")
    with pytest.raises(BackendError):
        BackendParams(temperature_map=lambda s: 1.0)


# classical-limit backend


def test_classical_limit_flip_rates():
    rng = np.random.default_rng(0)
    init = rng.choice([-1, 1], size=8)
    p = IsingProblem(np.zeros(8), {(0, 1): -1.0})
    reads = 20_000
    out = sample(p, init, pinned_schedule(), reads, BackendParams(CLASSICAL_LIMIT, flip_rate=0.1), rng)
    rates = np.mean(out != init, axis=0)
    sigma = math.sqrt(0.1 * 0.9 / reads)
    assert np.all(np.abs(rates - 0.1) < 3 * sigma + 1e-12)


def test_classical_limit_independent_flips():
    rng = np.random.default_rng(1)
    init = np.ones(2, dtype=np.int8)
    out = sample(IsingProblem(np.zeros(2), {(0, 1): -5.0}), init, pinned_schedule(), 40_000,
                 BackendParams(CLASSICAL_LIMIT, flip_rate=0.3), rng)
    flips = out != init
    counts = [np.sum(~flips[:, 0] & ~flips[:, 1]), np.sum(flips[:, 0] & ~flips[:, 1]),
              np.sum(~flips[:, 0] & flips[:, 1]), np.sum(flips[:, 0] & flips[:, 1])]
    expected = 40_000 * np.array([0.49, 0.21, 0.21, 0.09])
    assert chisquare(counts, expected).pvalue > 0.001


def test_classical_limit_refuses_forward():
    with pytest.raises(BackendError):
        sample(IsingProblem([0.0]), [1], forward_schedule(1.0), 1, BackendParams(CLASSICAL_LIMIT))


def test_reverse_needs_init():
    with pytest.raises(BackendError):
        sample(IsingProblem([0.0]), None, pinned_schedule(), 1, BackendParams(THERMAL))


@pytest.mark.parametrize("variant", [CLASSICAL_LIMIT, THERMAL, QUANTUM_EXACT])
def test_backend_determinism(variant):
    rng = np.random.default_rng(5)
    p = IsingProblem(rng.normal(size=6) * 0.2, {(0, 1): 0.1, (2, 3): -0.1, (3, 4): 0.05})
    init = classical_genotype(p.h)
    params = BackendParams(variant, flip_rate=0.1, t0=1.0, seed=11)
    sch = reverse_schedule(0.6, ramp=2.0, hold=4.0)
    a = sample(p, init, sch, 50, params)
    b = sample(p, init, sch, 50, params)
    np.testing.assert_array_equal(a, b)
    assert a.dtype == np.int8 and a.shape == (50, 6)


# thermal surrogate


def test_thermal_zero_temperature_keeps_ground_state():
    rng = np.random.default_rng(2)
    h = rng.uniform(0.01, 1.0, size=10) * rng.choice([-1, 1], size=10)
    p = IsingProblem(h)
    init = classical_genotype(h)
    out = sample(p, init, pinned_schedule(50.0), 200, BackendParams(THERMAL, freeze_s=1.0, t0=5.0), rng)
    assert np.all(out == init)


def test_thermal_frozen_above_freeze_point():
    rng = np.random.default_rng(3)
    p = IsingProblem(np.full(5, 0.01))
    init = np.ones(5, dtype=np.int8)
    out = sample(p, init, reverse_schedule(0.9), 100, BackendParams(THERMAL, t0=10.0, freeze_s=0.8), rng)
    assert np.all(out == init)


@pytest.mark.parametrize("h,T", [(0.1, 0.5), (-0.3, 0.4), (0.05, 0.1)])
def test_thermal_single_spin_marginal(h, T):
    s = 0.5
    params = BackendParams(THERMAL, t0=T / (1 - s), freeze_s=s)
    reads = 10_000
    out = sample(IsingProblem([h]), classical_genotype([h]), hold_at(s), reads, params,
                 np.random.default_rng(7))
    flipped = np.mean(out[:, 0] != classical_genotype([h])[0])
    p = single_spin_flip_probability(h, T)
    assert abs(flipped - p) < 3 * math.sqrt(p * (1 - p) / reads)


def test_thermal_scale_invariance():
    h = np.array([0.05, -0.1, 0.15])
    init = classical_genotype(h)
    sch = hold_at(0.5, hold=30.0)
    a = sample(IsingProblem(h), init, sch, 500, BackendParams(THERMAL, t0=0.4, freeze_s=0.5, seed=4))
    b = sample(IsingProblem(3 * h), init, sch, 500, BackendParams(THERMAL, t0=1.2, freeze_s=0.5, seed=4))
    np.testing.assert_array_equal(a, b)


def test_thermal_forward_mode_reaches_ground_state():
    p = IsingProblem([-1.0, 0.5, 0.0], {(0, 1): -0.5, (1, 2): 1.0})
    gs_energy = energies(p, index_to_spins(np.arange(8), 3)).min()
    out = sample(p, None, forward_schedule(200.0), 100, BackendParams(THERMAL, t0=2.0, freeze_s=1.0),
                 np.random.default_rng(0))
    assert np.all(energies(p, out) == pytest.approx(gs_energy))


# quantum-exact backend


def test_quantum_norm_conservation():
    rng = np.random.default_rng(8)
    p = IsingProblem(rng.normal(size=6), {(i, i + 1): rng.normal() for i in range(5)})
    out = evolve_quantum_exact(p, classical_genotype(p.h), reverse_schedule(0.5, 3.0, 2.0))
    assert out.norm_error <= 1e-9
    assert abs(out.probabilities().sum() - 1.0) <= 1e-9


def test_quantum_adiabatic_single_spin():
    for h in (-1.0, 0.7):
        out = evolve_quantum_exact(IsingProblem([h]), None, forward_schedule(30.0))
        assert out.probability_of(classical_genotype([h])) > 0.99


def test_quantum_two_spin_ferromagnet():
    p = IsingProblem([0.0, 0.0], {(0, 1): -1.0})
    probs = evolve_quantum_exact(p, None, forward_schedule(40.0)).probabilities()
    # order: --, -+, +-, ++
    assert probs[0] + probs[3] > 0.99
    assert probs[0] == pytest.approx(probs[3], abs=1e-6)


def test_quantum_matches_dense_reference():
    p = IsingProblem([0.3, -0.2, 0.1], {(0, 1): 0.5, (1, 2): -0.4})
    sch = forward_schedule(3.0)
    ours = evolve_quantum_exact(p, None, sch, tol=1e-8).probabilities()
    np.testing.assert_allclose(ours, dense_reference(p, sch), atol=1e-6)
    sch = reverse_schedule(0.4, 1.0, 1.0)
    init = [1, -1, 1]
    ours = evolve_quantum_exact(p, init, sch, tol=1e-8).probabilities()
    np.testing.assert_allclose(ours, dense_reference(p, sch, init), atol=1e-6)


def test_quantum_block_structure():
    # two disjoint pairs: composed result must match a joint dense evolution
    p = IsingProblem([0.2, -0.1, 0.3, 0.05], {(0, 2): 0.6, (1, 3): -0.5})
    assert len(p.components()) == 2
    sch = reverse_schedule(0.3, 1.0, 1.5)
    init = [1, 1, -1, -1]
    ours = evolve_quantum_exact(p, init, sch, tol=1e-8).probabilities()
    np.testing.assert_allclose(ours, dense_reference(p, sch, init), atol=1e-6)


def test_quantum_sampling_matches_distribution():
    p = IsingProblem([0.2, -0.4], {(0, 1): 0.3})
    out = evolve_quantum_exact(p, [1, 1], reverse_schedule(0.3, 1.0, 2.0))
    reads = sample(p, [1, 1], reverse_schedule(0.3, 1.0, 2.0), 20_000,
                   BackendParams(QUANTUM_EXACT), np.random.default_rng(3))
    idx = ((reads[:, 0] > 0) * 2 + (reads[:, 1] > 0)).astype(int)
    counts = np.bincount(idx, minlength=4)
    probs = out.probabilities()
    keep = probs > 1e-4
    assert chisquare(counts[keep], 20_000 * probs[keep] / probs[keep].sum()).pvalue > 0.001


def test_quantum_refuses_large_components():
    p = IsingProblem(np.zeros(17), {(i, i + 1): 1.0 for i in range(16)})
    with pytest.raises(BackendError):
        evolve_quantum_exact(p, np.ones(17), pinned_schedule())


def test_flip_probability_monotone_in_field_both_backends():
    grid = [0.2, 0.5, 1.0, 2.0]
    init = [1]
    thermal, quantum = [], []
    for hm in grid:
        h = [-hm]  # +1 is preferred
        out = sample(IsingProblem(h), init, hold_at(0.5, 100.0), 20_000,
                     BackendParams(THERMAL, t0=2.0, freeze_s=0.5), np.random.default_rng(1))
        thermal.append(np.mean(out[:, 0] == -1))
        # coherent dynamics oscillates, so average over hold durations
        q = [evolve_quantum_exact(IsingProblem(h), init, hold_at(0.5, t)).probability_of([-1])
             for t in np.linspace(0.5, 40.0, 60)]
        quantum.append(np.mean(q))
    assert np.all(np.diff(thermal) < 0)
    assert np.all(np.diff(quantum) < 0)


# export


def test_export_roundtrip(tmp_path):
    p = IsingProblem([0.1, -0.2, 1 / 3], {(0, 1): 0.07, (1, 2): -0.123456789012345678})
    sch = reverse_schedule(0.74)
    init = np.array([1, -1, 1], dtype=np.int8)
    path = export_ising(p, init, sch, tmp_path / "m.json")
    p2, init2, sch2 = import_ising(path)
    np.testing.assert_array_equal(p2.h, p.h)
    assert p2.J == p.J
    np.testing.assert_array_equal(init2, init)
    assert sch2 == sch
    doc = json.loads(path.read_text())
    assert doc["autoscale"] is False
    assert dumps_ising(p, init, sch) == path.read_text()


def test_export_rejects_bad_files(tmp_path):
    with pytest.raises(ExportError):
        import_ising(tmp_path / "missing.json")
    with pytest.raises(Exception):
        loads_ising("{not json")
    with pytest.raises(ExportError):
        export_ising(IsingProblem([0.0]), [1], pinned_schedule(), tmp_path / "no" / "dir" / "m.json")
