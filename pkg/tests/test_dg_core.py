import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dgwave.dg_core import (
    DGState,
    FluxKind,
    SchemeConfig,
    alpha_star,
    assemble_operator,
    bloch_symbol,
    energy,
    energy_law_defect,
    energy_rate,
    from_vector,
    jump_dissipation,
    numerical_flux,
    project_initial,
    rhs_vector,
    sample,
    semi_discrete_rhs,
    to_vector,
    traces,
    write_snapshot_csv,
)
from dgwave.mesh import perturbed_mesh, uniform_mesh

SCHEMES = ("U", "C", "A", "Astar")


def random_state(rng, mesh, config):
    shape = (mesh.n_cells, config.degree + 1)
    phi = rng.standard_normal(shape) if config.has_aux else None
    return DGState(mesh, rng.standard_normal(shape), phi)


def test_alpha_star_values():
    assert alpha_star(0) == pytest.approx(math.sqrt(4 / 3))
    assert alpha_star(1) == pytest.approx(math.sqrt(5 / 6))
    assert alpha_star(2) == pytest.approx(math.sqrt(15 / 14))
    with pytest.raises(ValueError):
        alpha_star(-1)


def test_scheme_names():
    assert SchemeConfig.named("U", 1).flux is FluxKind.UPWIND
    assert SchemeConfig.named("c", 1).label == "C"
    assert SchemeConfig.named("A*", 2).label == "Astar"
    assert SchemeConfig.named("AUX", 1, 0.5).label == "AUX(0.5)"
    with pytest.raises(ValueError):
        SchemeConfig.named("AUX", 1)
    with pytest.raises(ValueError):
        SchemeConfig.named("Z", 1)
    with pytest.raises(ValueError):
        SchemeConfig(-1, FluxKind.UPWIND)


def test_upwind_flux_takes_left_trace():
    rng = np.random.default_rng(0)
    m = uniform_mesh(6)
    s = random_state(rng, m, SchemeConfig.named("U", 2))
    tr = traces(s)
    u_hat, _ = numerical_flux(tr, SchemeConfig.named("U", 2))
    np.testing.assert_allclose(u_hat, tr.u_minus)
    right_trace = s.u @ np.sqrt((2 * np.arange(3) + 1) / 2)
    np.testing.assert_allclose(tr.u_minus, np.roll(right_trace, 1))


def test_aux_flux_formula():
    rng = np.random.default_rng(1)
    m = uniform_mesh(5)
    cfg = SchemeConfig.named("AUX", 1, 0.7)
    tr = traces(random_state(rng, m, cfg))
    u_hat, phi_hat = numerical_flux(tr, cfg)
    np.testing.assert_allclose(u_hat, 0.5 * (tr.u_plus + tr.u_minus) + 0.35 * (tr.phi_plus - tr.phi_minus))
    np.testing.assert_allclose(phi_hat, 0.5 * (tr.phi_plus + tr.phi_minus) + 0.35 * (tr.u_plus - tr.u_minus))


@settings(max_examples=40, deadline=None)
@given(N=st.integers(0, 4), n=st.integers(2, 12), perturb=st.sampled_from([0.0, 0.1, 0.3]),
       seed=st.integers(0, 1000), scheme=st.sampled_from(SCHEMES))
def test_energy_identities(N, n, perturb, seed, scheme):
    cfg = SchemeConfig.named(scheme, N)
    mesh = perturbed_mesh(n, perturb, seed)
    s = random_state(np.random.default_rng(seed), mesh, cfg)
    defect, scale = energy_law_defect(s, cfg)
    assert defect <= 1e-12 * scale


@settings(max_examples=20, deadline=None)
@given(alpha=st.floats(-3, 3), seed=st.integers(0, 100))
def test_aux_energy_conserved_for_any_alpha(alpha, seed):
    cfg = SchemeConfig.named("AUX", 2, alpha)
    mesh = perturbed_mesh(7, 0.2, seed)
    s = random_state(np.random.default_rng(seed), mesh, cfg)
    du, dphi = semi_discrete_rhs(s, cfg)
    scale = np.abs(du).sum() * np.abs(s.u).sum() + np.abs(dphi).sum() * np.abs(s.phi).sum()
    assert abs(energy_rate(s, cfg)) <= 1e-13 * scale


def test_upwind_dissipates():
    rng = np.random.default_rng(3)
    cfg = SchemeConfig.named("U", 1)
    s = random_state(rng, uniform_mesh(8), cfg)
    assert energy_rate(s, cfg) == pytest.approx(-jump_dissipation(s), rel=1e-12)
    assert energy_rate(s, cfg) < 0


@pytest.mark.parametrize("scheme", SCHEMES)
def test_polynomial_exactness_of_derivative(scheme):
    # a continuous global linear function has zero jumps except at the wrap;
    # use a smooth periodic function: rhs approximates -u_x
    N = 4
    cfg = SchemeConfig.named(scheme, N)
    m = uniform_mesh(16)
    s = project_initial(m, cfg, lambda x: np.sin(2 * np.pi * x))
    du, _ = semi_discrete_rhs(s, cfg)
    exact = project_initial(m, SchemeConfig.named("U", N), lambda x: -2 * np.pi * np.cos(2 * np.pi * x))
    assert np.max(np.abs(du - exact.u)) < 1e-3


@pytest.mark.parametrize("scheme", SCHEMES)
def test_constants_are_steady(scheme):
    cfg = SchemeConfig.named(scheme, 2)
    s = project_initial(perturbed_mesh(9, 0.2, 1), cfg, lambda x: np.full_like(x, 3.0))
    du, dphi = semi_discrete_rhs(s, cfg)
    assert np.max(np.abs(du)) < 1e-12
    if dphi is not None:
        assert np.max(np.abs(dphi)) < 1e-12


def test_projection_is_exact_for_polynomials():
    cfg = SchemeConfig.named("C", 3)
    m = perturbed_mesh(5, 0.2, 0)
    s = project_initial(m, cfg, lambda x: 1 + x - 2 * x**3)
    x = np.linspace(0.01, 0.99, 40)
    u, _ = s.evaluate(x)
    np.testing.assert_allclose(u, 1 + x - 2 * x**3, atol=1e-12)


@pytest.mark.parametrize("scheme", SCHEMES)
def test_assembled_operator_matches_rhs(scheme):
    rng = np.random.default_rng(5)
    cfg = SchemeConfig.named(scheme, 2)
    m = perturbed_mesh(7, 0.25, 2)
    A = assemble_operator(m, cfg)
    y = rng.standard_normal(A.shape[0])
    np.testing.assert_allclose(A @ y, rhs_vector(y, m, cfg), atol=1e-11)


def test_vector_round_trip():
    rng = np.random.default_rng(2)
    cfg = SchemeConfig.named("A", 1)
    s = random_state(rng, uniform_mesh(4), cfg)
    back = from_vector(to_vector(s), s.mesh, cfg)
    np.testing.assert_array_equal(back.u, s.u)
    np.testing.assert_array_equal(back.phi, s.phi)


@pytest.mark.parametrize("scheme", SCHEMES)
def test_bloch_symbol_acts_on_bloch_waves(scheme):
    cfg = SchemeConfig.named(scheme, 1)
    n = 8
    m = uniform_mesh(n)
    theta = 2 * np.pi * 3 / n
    rng = np.random.default_rng(0)
    v = rng.standard_normal(cfg.block_size) + 1j * rng.standard_normal(cfg.block_size)
    y = np.concatenate([v * np.exp(1j * theta * j) for j in range(n)])
    A = assemble_operator(m, cfg).toarray()
    S = bloch_symbol(cfg, 1 / n, theta)
    np.testing.assert_allclose((A @ y)[: cfg.block_size], S @ v, atol=1e-12)


def test_state_validation():
    m = uniform_mesh(4)
    with pytest.raises(ValueError):
        DGState(m, np.zeros((3, 2)))
    with pytest.raises(ValueError):
        DGState(m, np.zeros((4, 2)), np.zeros((4, 3)))
    s = DGState(m, np.zeros((4, 2)))
    with pytest.raises(ValueError):
        s.check(SchemeConfig.named("A", 1))
    with pytest.raises(ValueError):
        s.check(SchemeConfig.named("U", 2))


def test_energy_of_projection():
    cfg = SchemeConfig.named("A", 3)
    s = project_initial(uniform_mesh(10), cfg, lambda x: np.sin(2 * np.pi * x))
    e_u, e_phi = energy(s)
    assert e_u == pytest.approx(0.5, rel=1e-6)
    assert e_phi == 0.0


def test_snapshot_csv(tmp_path):
    cfg = SchemeConfig.named("A", 1)
    s = project_initial(uniform_mesh(3), cfg, lambda x: x)
    p = tmp_path / "snap.csv"
    write_snapshot_csv(s, p, points_per_cell=4)
    lines = p.read_text().splitlines()
    assert lines[0] == "x,u_h,phi_h"
    assert len(lines) == 1 + 12
    x, u, phi = sample(s, 4)
    assert float(lines[1].split(",")[0]) == x[0]
    assert np.allclose(phi, 0)
