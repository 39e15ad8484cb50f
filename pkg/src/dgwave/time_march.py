"""Explicit Runge-Kutta marching of the semi-discrete DG system.

The semi-discrete system is linear and autonomous, dy/dt = A y, so an
s-stage explicit RK method of order s <= 4 advances y by the truncated
exponential sum_{k<=s} (dt A)^k / k!.  ``advance`` builds that matrix once
and applies it every step; ``rk_step`` is the ordinary stage-by-stage form
and is used to check the matrix route.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .dg_core import (
    DGState,
    SchemeConfig,
    assemble_operator,
    energy,
    from_vector,
    rhs_vector,
    to_vector,
)
from .polylib import gauss_legendre, legendre_table

# Butcher tableaux (a, b) of the classical explicit methods of order 1-4.
_TABLEAUX = {
    1: ([], [1.0]),
    2: ([[1.0]], [0.5, 0.5]),
    3: ([[0.5], [-1.0, 2.0]], [1 / 6, 2 / 3, 1 / 6]),
    4: ([[0.5], [0.0, 0.5], [0.0, 0.0, 1.0]], [1 / 6, 1 / 3, 1 / 3, 1 / 6]),
}

# Dense amplification matrices are faster than sparse ones for small systems.
_DENSE_LIMIT = 600


class InstabilityError(RuntimeError):
    """Raised when the marched state stops being finite."""


@dataclass(frozen=True)
class MarchConfig:
    """Time-marching parameters.

    dt = cfl * min_j h_j / (2N + 1), shortened so an integer number of steps
    lands on ``t_final``.  Energies are recorded every ``output_every`` steps
    (default: about ``n_records`` evenly spaced records) and at the end.
    """

    t_final: float
    cfl: float = 0.05
    order: int = 4
    output_every: int | None = None
    n_records: int = 200
    keep_snapshots: bool = False

    def __post_init__(self):
        if not (self.t_final >= 0 and math.isfinite(self.t_final)):
            raise ValueError(f"final time must be finite and non-negative, got {self.t_final}")
        if not self.cfl > 0:
            raise ValueError(f"CFL number must be positive, got {self.cfl}")
        if self.order not in _TABLEAUX:
            raise ValueError(f"RK order must be one of {sorted(_TABLEAUX)}, got {self.order}")
        if self.output_every is not None and self.output_every < 1:
            raise ValueError("output_every must be a positive step count")

    def time_step(self, state: DGState) -> tuple[float, int]:
        """(dt, n_steps) with n_steps * dt == t_final."""
        if self.t_final == 0:
            return 0.0, 0
        target = self.cfl * float(np.min(state.mesh.widths)) / (2 * state.degree + 1)
        n_steps = max(1, math.ceil(self.t_final / target - 1e-9))
        return self.t_final / n_steps, n_steps


@dataclass
class Trajectory:
    times: list = field(default_factory=list)
    e_u: list = field(default_factory=list)
    e_phi: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    dt: float = 0.0
    n_steps: int = 0

    def record(self, state: DGState, keep: bool = False) -> None:
        if self.times and not state.t > self.times[-1]:
            raise ValueError(f"trajectory times must increase: {state.t} after {self.times[-1]}")
        eu, ep = energy(state)
        self.times.append(float(state.t))
        self.e_u.append(eu)
        self.e_phi.append(ep)
        if keep:
            self.snapshots.append(state)

    def total_energy(self) -> np.ndarray:
        return np.asarray(self.e_u) + np.asarray(self.e_phi)

    def energy_drift(self) -> float:
        """max_t |E(t) - E(0)| / E_u(0) for the combined energy."""
        tot = self.total_energy()
        return float(np.max(np.abs(tot - tot[0])) / self.e_u[0])

    def leakage(self) -> float:
        """max_t E_phi(t) / E_u(0)."""
        return float(np.max(self.e_phi) / self.e_u[0])

    def write_csv(self, path) -> None:
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "E_u", "E_phi"])
            for row in zip(self.times, self.e_u, self.e_phi):
                w.writerow([f"{v:.17g}" for v in row])


def rk_step(y: np.ndarray, f, dt: float, order: int = 4) -> np.ndarray:
    """One explicit RK step of y' = f(y) with the classical method of the given order."""
    a, b = _TABLEAUX[order]
    k = [f(y)]
    for row in a:
        k.append(f(y + dt * sum(c * kj for c, kj in zip(row, k))))
    return y + dt * sum(bi * ki for bi, ki in zip(b, k))


def rk4_step(y: np.ndarray, f, dt: float) -> np.ndarray:
    return rk_step(y, f, dt, 4)


def amplification_matrix(A, dt: float, order: int = 4):
    """sum_{k<=order} (dt A)^k / k!, by nested Horner products."""
    n = A.shape[0]
    dense = n <= _DENSE_LIMIT
    A = A.toarray() if dense and sp.issparse(A) else A
    eye = np.eye(n) if dense else sp.identity(n, format="csr")
    P = eye
    for k in range(order, 0, -1):
        P = eye + (dt / k) * (A @ P)
    return P if dense else sp.csr_matrix(P)


def advance(state0: DGState, config: SchemeConfig, march: MarchConfig) -> tuple[DGState, Trajectory]:
    """March ``state0`` to ``state0.t + march.t_final``."""
    state0.check(config)
    dt, n_steps = march.time_step(state0)
    traj = Trajectory(dt=dt, n_steps=n_steps)
    traj.record(state0, march.keep_snapshots)
    if n_steps == 0:
        return state0, traj

    mesh = state0.mesh
    P = amplification_matrix(assemble_operator(mesh, config), dt, march.order)
    every = march.output_every or max(1, n_steps // march.n_records)
    y = to_vector(state0)
    t0 = state0.t
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(1, n_steps + 1):
            y = P @ y
            if step % every == 0 or step == n_steps:
                _check_finite(y, step, t0 + step * dt, dt, march.cfl)
                t = t0 + march.t_final if step == n_steps else t0 + step * dt
                traj.record(from_vector(y, mesh, config, t), march.keep_snapshots)
    return from_vector(y, mesh, config, t0 + march.t_final), traj


def _check_finite(y: np.ndarray, step: int, t: float, dt: float, cfl: float) -> None:
    # squares of the state enter the energies, so overflow there counts too
    if not (np.all(np.isfinite(y)) and np.max(np.abs(y), initial=0.0) < 1e150):
        raise InstabilityError(
            f"state blew up (non-finite or > 1e150) at step {step} (t={t:.6g}) with dt={dt:.3g}, "
            f"CFL={cfl}; reduce the CFL number"
        )


def advance_stagewise(state0: DGState, config: SchemeConfig, march: MarchConfig) -> DGState:
    """Same march as ``advance`` but evaluating the DG right-hand side at every stage."""
    state0.check(config)
    dt, n_steps = march.time_step(state0)
    mesh = state0.mesh
    y = to_vector(state0)
    for _ in range(n_steps):
        y = rk_step(y, lambda v: rhs_vector(v, mesh, config), dt, march.order)
    return from_vector(y, mesh, config, state0.t + march.t_final)


# ---------------------------------------------------------------------------
# error measurement

@dataclass(frozen=True)
class MeasuredError:
    """L2 error, peak amplitude and fitted phase lag of a travelling sinusoid.

    ``phase_lag`` is the distance the numerical wave trails the exact one,
    in spatial units; None when the solution is too small to fit.
    """

    l2: float
    amplitude: float
    phase_lag: float | None
    fitted_amplitude: float | None


def measure_error(state: DGState, exact, t: float | None = None, omega: float = 2 * math.pi,
                  points_per_cell: int = 32, n_quad: int | None = None) -> MeasuredError:
    """Compare ``state`` with ``exact(x, t)``.

    The lag comes from a linear least-squares fit of a sin(w(x-t)) + b cos(w(x-t))
    to dense samples of u_h; with a = A cos d, b = A sin d the numerical wave is
    A sin(w(x - t) + d), which trails the exact one by d / w.
    """
    t = state.t if t is None else t
    mesh, N = state.mesh, state.degree
    rule = gauss_legendre(n_quad or N + 12)
    cells = np.arange(mesh.n_cells)[:, None]
    xq = mesh.to_physical(cells, rule.nodes[None, :])
    uq = state.u @ legendre_table(N, rule.nodes)
    diff = uq - np.asarray(exact(xq, t), dtype=float).reshape(xq.shape)
    l2 = math.sqrt(float(np.sum(0.5 * mesh.widths[:, None] * rule.weights * diff**2)))

    s = np.linspace(-1.0, 1.0, points_per_cell)
    xs = mesh.to_physical(cells, s[None, :]).reshape(-1)
    us = (state.u @ legendre_table(N, s)).reshape(-1)
    amplitude = float(np.max(np.abs(us)))
    if amplitude < 1e-6:
        return MeasuredError(l2, amplitude, None, None)
    arg = omega * (xs - t)
    basis = np.column_stack([np.sin(arg), np.cos(arg)])
    (a, b), *_ = np.linalg.lstsq(basis, us, rcond=None)
    delta = math.atan2(b, a)
    return MeasuredError(l2, amplitude, delta / omega, math.hypot(a, b))


def sine_wave(omega: float = 2 * math.pi):
    """Exact solution sin(omega (x - t)) of u_t + u_x = 0."""
    def exact(x, t):
        return np.sin(omega * (np.asarray(x) - t))
    return exact
