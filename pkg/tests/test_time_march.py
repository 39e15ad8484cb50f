import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dgwave.dg_core import SchemeConfig, assemble_operator, energy, project_initial, with_time
from dgwave.mesh import perturbed_mesh, uniform_mesh
from dgwave.time_march import (
    InstabilityError,
    MarchConfig,
    Trajectory,
    advance,
    advance_stagewise,
    amplification_matrix,
    measure_error,
    rk4_step,
    rk_step,
    sine_wave,
)

SINE = lambda x: np.sin(2 * np.pi * x)


def sine_state(scheme, N, n, mesh=None):
    cfg = SchemeConfig.named(scheme, N)
    return cfg, project_initial(mesh or uniform_mesh(n), cfg, SINE)


def test_march_config_validation():
    with pytest.raises(ValueError):
        MarchConfig(-1.0)
    with pytest.raises(ValueError):
        MarchConfig(1.0, cfl=0.0)
    with pytest.raises(ValueError):
        MarchConfig(1.0, order=5)
    with pytest.raises(ValueError):
        MarchConfig(1.0, output_every=0)


@given(T=st.floats(1e-3, 50.0), cfl=st.floats(0.01, 0.5), N=st.integers(0, 4))
def test_time_step_lands_on_final_time(T, cfl, N):
    _, s = sine_state("U", N, 5)
    dt, n = MarchConfig(T, cfl).time_step(s)
    assert n * dt == pytest.approx(T, rel=1e-12)
    assert dt <= cfl * 0.2 / (2 * N + 1) * (1 + 1e-9)


def test_zero_time_returns_input():
    cfg, s = sine_state("A", 1, 6)
    out, traj = advance(s, cfg, MarchConfig(0.0))
    assert out is s
    assert traj.times == [0.0]


@pytest.mark.parametrize("order", [1, 2, 3, 4])
def test_rk_step_order_on_scalar_ode(order):
    f = lambda y: -1j * y
    errs = []
    for n in (40, 80):
        y = np.array([1.0 + 0j])
        for _ in range(n):
            y = rk_step(y, f, 1.0 / n, order)
        errs.append(abs(y[0] - np.exp(-1j)))
    assert math.log2(errs[0] / errs[1]) == pytest.approx(order, abs=0.15)


@pytest.mark.parametrize("order", [1, 2, 3, 4])
def test_amplification_matrix_matches_stages(order):
    cfg, s = sine_state("A", 2, 5)
    A = assemble_operator(s.mesh, cfg)
    y = np.random.default_rng(0).standard_normal(A.shape[0])
    P = amplification_matrix(A, 1e-3, order)
    np.testing.assert_allclose(P @ y, rk_step(y, lambda v: A @ v, 1e-3, order), atol=1e-13)


def test_sparse_amplification_matches_dense():
    cfg, s = sine_state("U", 1, 400)
    A = assemble_operator(s.mesh, cfg)
    y = np.random.default_rng(1).standard_normal(A.shape[0])
    P = amplification_matrix(A, 1e-4)
    np.testing.assert_allclose(P @ y, rk4_step(y, lambda v: A @ v, 1e-4), atol=1e-12)


@pytest.mark.parametrize("scheme", ["U", "C", "A", "Astar"])
def test_matrix_route_matches_stagewise_rhs(scheme):
    cfg, s = sine_state(scheme, 2, 4, perturbed_mesh(4, 0.2, 3))
    march = MarchConfig(0.3)
    a, _ = advance(s, cfg, march)
    b = advance_stagewise(s, cfg, march)
    np.testing.assert_allclose(a.u, b.u, atol=1e-12)
    assert a.t == b.t == pytest.approx(0.3)


def test_centered_conserves_energy():
    cfg, s = sine_state("C", 1, 10)
    _, traj = advance(s, cfg, MarchConfig(1.0, 0.05))
    assert abs(traj.e_u[-1] - traj.e_u[0]) / traj.e_u[0] < 1e-8


def test_upwind_amplitude_and_monotone_energy():
    cfg, s = sine_state("U", 0, 20)
    out, traj = advance(s, cfg, MarchConfig(1.0))
    m = measure_error(out, sine_wave())
    assert m.amplitude == pytest.approx(math.exp(-math.pi**2 / 10), abs=0.02)
    assert np.all(np.diff(traj.e_u) <= 1e-15)


@pytest.mark.parametrize("scheme,T", [("A", 20.0), ("Astar", 20.0)])
def test_aux_combined_energy_drift(scheme, T):
    cfg, s = sine_state(scheme, 0, 20)
    _, traj = advance(s, cfg, MarchConfig(T))
    assert traj.energy_drift() < 1e-7


def test_long_aux_run_energy_drift_and_lag():
    cfg, s = sine_state("Astar", 0, 20)
    out, traj = advance(s, cfg, MarchConfig(1500.0, cfl=0.04))
    assert traj.energy_drift() < 1e-7
    assert measure_error(out, sine_wave()).phase_lag == pytest.approx(0.08, abs=0.01)


@pytest.mark.parametrize("scheme,T", [("U", 1.0), ("C", 5.0), ("A", 20.0)])
def test_halving_dt_changes_error_by_under_one_percent(scheme, T):
    cfg, s = sine_state(scheme, 0, 20)
    e = [measure_error(advance(s, cfg, MarchConfig(T, c))[0], sine_wave()).l2 for c in (0.05, 0.025)]
    assert abs(e[0] - e[1]) / e[1] < 0.01


def test_instability_is_reported():
    cfg, s = sine_state("C", 3, 10)
    with pytest.raises(InstabilityError, match="CFL"):
        advance(s, cfg, MarchConfig(50.0, cfl=20.0, output_every=1))


def test_trajectory_records_and_csv(tmp_path):
    cfg, s = sine_state("A", 1, 6)
    _, traj = advance(s, cfg, MarchConfig(1.0, output_every=10, keep_snapshots=True))
    assert traj.times[0] == 0.0 and traj.times[-1] == pytest.approx(1.0)
    assert np.all(np.diff(traj.times) > 0)
    assert len(traj.snapshots) == len(traj.times)
    p = tmp_path / "traj.csv"
    traj.write_csv(p)
    lines = p.read_text().splitlines()
    assert lines[0] == "t,E_u,E_phi" and len(lines) == len(traj.times) + 1
    assert float(lines[-1].split(",")[1]) == traj.e_u[-1]


def test_trajectory_rejects_non_increasing_times():
    cfg, s = sine_state("U", 0, 4)
    tr = Trajectory()
    tr.record(s)
    with pytest.raises(ValueError):
        tr.record(s)


@settings(max_examples=15, deadline=None)
@given(t=st.floats(0.0, 3.0), N=st.integers(1, 4))
def test_exact_projection_has_no_lag(t, N):
    cfg = SchemeConfig.named("U", N)
    exact = sine_wave()
    s = with_time(project_initial(uniform_mesh(12), cfg, lambda x: exact(x, t)), t)
    m = measure_error(s, exact)
    assert abs(m.phase_lag) < 1e-4
    # orthogonality of the projection: ||u - Pu||^2 = ||u||^2 - ||Pu||^2
    assert m.l2**2 == pytest.approx(0.5 - energy(s)[0], abs=1e-13)


def test_measure_error_sign_convention():
    # a wave that trails by 0.05 reports a positive lag
    cfg = SchemeConfig.named("U", 4)
    s = with_time(project_initial(uniform_mesh(20), cfg, lambda x: np.sin(2 * np.pi * (x - 0.25))), 0.3)
    assert measure_error(s, sine_wave()).phase_lag == pytest.approx(0.05, abs=1e-6)


def test_measure_error_small_amplitude():
    cfg = SchemeConfig.named("U", 1)
    s = project_initial(uniform_mesh(5), cfg, lambda x: 1e-9 * np.sin(2 * np.pi * x))
    m = measure_error(s, sine_wave())
    assert m.phase_lag is None and m.amplitude < 1e-6
