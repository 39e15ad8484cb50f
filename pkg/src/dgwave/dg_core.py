"""Semi-discrete DG operator for u_t + u_x = 0 and the auxiliary pair
u_t + u_x = 0, phi_t - phi_x = 0.

Each cell carries orthonormal-Legendre coefficients, so the cell mass
matrix is (h_j/2) I.  Traces at node j-1/2: the minus side comes from
cell j-1, the plus side from cell j; jump = plus - minus.
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .mesh import PeriodicMesh1D, uniform_mesh
from .polylib import derivative_matrix, endpoint_values, gauss_legendre, legendre_table


class FluxKind(enum.Enum):
    UPWIND = "U"
    CENTERED = "C"
    AUX = "AUX"


def alpha_star(N: int) -> float:
    """Flux coupling constant of the A* scheme for degree N."""
    if N < 0:
        raise ValueError(f"degree must be non-negative, got {N}")
    if N == 0:
        return math.sqrt(4.0 / 3.0)
    if N % 2 == 1:
        return math.sqrt(N * (2 * N + 3) / ((N + 1) * (2 * N + 1)))
    return math.sqrt((N + 1) * (2 * N + 1) / (N * (2 * N + 3)))


SCHEME_NAMES = ("U", "C", "A", "Astar")


@dataclass(frozen=True)
class SchemeConfig:
    degree: int
    flux: FluxKind
    alpha: float = 1.0
    label: str = ""

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError(f"degree must be non-negative, got {self.degree}")
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        if not self.label:
            object.__setattr__(self, "label", self._default_label())

    def _default_label(self) -> str:
        if self.flux is FluxKind.UPWIND:
            return "U"
        if self.flux is FluxKind.CENTERED:
            return "C"
        if self.alpha == 1.0:
            return "A"
        if self.alpha == alpha_star(self.degree):
            return "Astar"
        return f"AUX({self.alpha:g})"

    @classmethod
    def named(cls, name: str, degree: int, alpha: float | None = None) -> "SchemeConfig":
        """Build one of U, C, A, Astar (also accepts 'A*' and 'AUX' with an explicit alpha)."""
        key = name.strip().upper().replace("*", "STAR")
        if key == "U":
            return cls(degree, FluxKind.UPWIND)
        if key == "C":
            return cls(degree, FluxKind.CENTERED)
        if key == "A":
            return cls(degree, FluxKind.AUX, 1.0 if alpha is None else alpha)
        if key == "ASTAR":
            return cls(degree, FluxKind.AUX, alpha_star(degree) if alpha is None else alpha)
        if key == "AUX":
            if alpha is None:
                raise ValueError("AUX scheme needs an explicit alpha")
            return cls(degree, FluxKind.AUX, alpha)
        raise ValueError(f"unknown scheme {name!r}; expected one of {SCHEME_NAMES}")

    @property
    def has_aux(self) -> bool:
        return self.flux is FluxKind.AUX

    @property
    def n_vars(self) -> int:
        return 2 if self.has_aux else 1

    @property
    def block_size(self) -> int:
        return self.n_vars * (self.degree + 1)


@dataclass(frozen=True)
class DGState:
    mesh: PeriodicMesh1D
    u: np.ndarray
    phi: np.ndarray | None = None
    t: float = 0.0

    def __post_init__(self):
        if self.u.ndim != 2 or self.u.shape[0] != self.mesh.n_cells:
            raise ValueError(f"u has shape {self.u.shape}, mesh has {self.mesh.n_cells} cells")
        if self.phi is not None and self.phi.shape != self.u.shape:
            raise ValueError(f"phi shape {self.phi.shape} does not match u shape {self.u.shape}")

    @property
    def degree(self) -> int:
        return self.u.shape[1] - 1

    def check(self, config: SchemeConfig) -> None:
        if self.degree != config.degree:
            raise ValueError(f"state has degree {self.degree}, scheme expects {config.degree}")
        if config.has_aux != (self.phi is not None):
            raise ValueError("phi must be present exactly for the auxiliary scheme")

    def evaluate(self, x) -> tuple[np.ndarray, np.ndarray | None]:
        """Point values of u_h (and phi_h); at nodes the right-cell value is used."""
        j, s = self.mesh.locate(x)
        V = legendre_table(self.degree, s)
        u = np.einsum("ik,ki->i", self.u[j], V)
        phi = None if self.phi is None else np.einsum("ik,ki->i", self.phi[j], V)
        return u, phi


@dataclass(frozen=True)
class TraceValues:
    """One-sided traces at every node; index i is node x_{i-1/2}, the left end of cell i."""

    u_minus: np.ndarray
    u_plus: np.ndarray
    phi_minus: np.ndarray | None = None
    phi_plus: np.ndarray | None = None

    @staticmethod
    def jump(minus, plus):
        return plus - minus

    @staticmethod
    def mean(minus, plus):
        return 0.5 * (plus + minus)

    @property
    def u_jump(self):
        return self.jump(self.u_minus, self.u_plus)

    @property
    def u_mean(self):
        return self.mean(self.u_minus, self.u_plus)

    @property
    def phi_jump(self):
        return self.jump(self.phi_minus, self.phi_plus)

    @property
    def phi_mean(self):
        return self.mean(self.phi_minus, self.phi_plus)


def traces(state: DGState) -> TraceValues:
    N = state.degree
    lo, hi = endpoint_values(N)
    u_right = state.u @ hi
    u_left = state.u @ lo
    if state.phi is None:
        return TraceValues(np.roll(u_right, 1), u_left)
    p_right = state.phi @ hi
    p_left = state.phi @ lo
    return TraceValues(np.roll(u_right, 1), u_left, np.roll(p_right, 1), p_left)


def numerical_flux(tr: TraceValues, config: SchemeConfig):
    """(u_hat, phi_hat) per node; phi_hat is None for single-equation schemes.

    Upwind takes the trace from the left cell, mean - jump/2 = u^-, which
    is the sign giving d/dt (1/2)||u||^2 = -(1/2) sum jump^2.
    """
    if config.flux is FluxKind.UPWIND:
        return tr.u_mean - 0.5 * tr.u_jump, None
    if config.flux is FluxKind.CENTERED:
        return tr.u_mean, None
    a = config.alpha
    u_hat = tr.u_mean + 0.5 * a * tr.phi_jump
    phi_hat = tr.phi_mean + 0.5 * a * tr.u_jump
    return u_hat, phi_hat


def semi_discrete_rhs(state: DGState, config: SchemeConfig):
    """Time derivatives (du, dphi) of the modal coefficients; dphi is None without phi."""
    state.check(config)
    N = config.degree
    G = derivative_matrix(N)
    lo, hi = endpoint_values(N)
    scale = (2.0 / state.mesh.widths)[:, None]
    tr = traces(state)
    u_hat, phi_hat = numerical_flux(tr, config)
    u_hat_right = np.roll(u_hat, -1)
    du = scale * (state.u @ G - np.outer(u_hat_right, hi) + np.outer(u_hat, lo))
    if phi_hat is None:
        return du, None
    phi_hat_right = np.roll(phi_hat, -1)
    dphi = scale * (-(state.phi @ G) + np.outer(phi_hat_right, hi) - np.outer(phi_hat, lo))
    return du, dphi


def energy(state: DGState) -> tuple[float, float]:
    """(int u_h^2 dx, int phi_h^2 dx)."""
    w = 0.5 * state.mesh.widths
    e_u = float(np.sum(w * np.sum(state.u**2, axis=1)))
    e_phi = 0.0 if state.phi is None else float(np.sum(w * np.sum(state.phi**2, axis=1)))
    return e_u, e_phi


def inner(mesh: PeriodicMesh1D, a: np.ndarray, b: np.ndarray) -> float:
    """L2 inner product of two piecewise polynomials given by modal coefficients."""
    return float(np.sum(0.5 * mesh.widths * np.sum(a * b, axis=1)))


def energy_rate(state: DGState, config: SchemeConfig) -> float:
    """(u, du/dt) + (phi, dphi/dt), i.e. d/dt of half the (modified) energy."""
    du, dphi = semi_discrete_rhs(state, config)
    rate = inner(state.mesh, state.u, du)
    if dphi is not None:
        rate += inner(state.mesh, state.phi, dphi)
    return rate


def jump_dissipation(state: DGState) -> float:
    """sum over nodes of (1/2) jump(u_h)^2."""
    return float(0.5 * np.sum(traces(state).u_jump ** 2))


def energy_law_defect(state: DGState, config: SchemeConfig) -> tuple[float, float]:
    """(defect, scale) for the semi-discrete energy identity of the scheme.

    The identity is rate = -sum (1/2) jump(u)^2 for upwind and rate = 0
    otherwise.  ``scale`` bounds the size of the terms that cancel,
    ||u|| ||du|| + ||phi|| ||dphi|| + the jump sum, so defect / scale is a
    relative rounding-level measure.
    """
    du, dphi = semi_discrete_rhs(state, config)
    m = state.mesh
    rate = inner(m, state.u, du)
    scale = math.sqrt(inner(m, state.u, state.u) * inner(m, du, du))
    if dphi is not None:
        rate += inner(m, state.phi, dphi)
        scale += math.sqrt(inner(m, state.phi, state.phi) * inner(m, dphi, dphi))
    expected = -jump_dissipation(state) if config.flux is FluxKind.UPWIND else 0.0
    return abs(rate - expected), scale + abs(expected)


def project_initial(mesh: PeriodicMesh1D, config: SchemeConfig, u0, phi0=None, n_quad: int | None = None) -> DGState:
    """Cellwise L2 projection of u0 (and phi0, default zero, for AUX) onto P_N."""
    N = config.degree
    rule = gauss_legendre(n_quad or N + 12)
    V = legendre_table(N, rule.nodes) * rule.weights
    x = mesh.to_physical(np.arange(mesh.n_cells)[:, None], rule.nodes[None, :])
    u = np.asarray(u0(x), dtype=float).reshape(x.shape) @ V.T
    phi = None
    if config.has_aux:
        if phi0 is None:
            phi = np.zeros_like(u)
        else:
            phi = np.asarray(phi0(x), dtype=float).reshape(x.shape) @ V.T
    return DGState(mesh, u, phi, 0.0)


def zero_state(mesh: PeriodicMesh1D, config: SchemeConfig) -> DGState:
    shape = (mesh.n_cells, config.degree + 1)
    return DGState(mesh, np.zeros(shape), np.zeros(shape) if config.has_aux else None)


# ---------------------------------------------------------------------------
# vector form and assembly

def to_vector(state: DGState) -> np.ndarray:
    """Cell-major packing: for each cell, u coefficients then phi coefficients."""
    if state.phi is None:
        return state.u.reshape(-1).copy()
    return np.concatenate([state.u, state.phi], axis=1).reshape(-1)


def from_vector(y: np.ndarray, mesh: PeriodicMesh1D, config: SchemeConfig, t: float = 0.0) -> DGState:
    n1 = config.degree + 1
    Y = np.asarray(y).reshape(mesh.n_cells, config.block_size)
    if config.has_aux:
        return DGState(mesh, Y[:, :n1].copy(), Y[:, n1:].copy(), t)
    return DGState(mesh, Y.copy(), None, t)


def rhs_vector(y: np.ndarray, mesh: PeriodicMesh1D, config: SchemeConfig) -> np.ndarray:
    du, dphi = semi_discrete_rhs(from_vector(y, mesh, config), config)
    if dphi is None:
        return du.reshape(-1)
    return np.concatenate([du, dphi], axis=1).reshape(-1)


@lru_cache(maxsize=128)
def _reference_blocks(flux: FluxKind, degree: int, alpha: float):
    config = SchemeConfig(degree, flux, alpha)
    mesh = uniform_mesh(3)
    m = config.block_size
    K = np.zeros((3, m, m))
    for col in range(m):
        y = np.zeros(3 * m)
        y[m + col] = 1.0  # probe cell 1
        r = rhs_vector(y, mesh, config).reshape(3, m) * (mesh.widths[0] / 2.0)
        # cell 0 sees cell 1 as its right neighbour, cell 2 sees it as its left one
        K[2, :, col] = r[0]
        K[1, :, col] = r[1]
        K[0, :, col] = r[2]
    K[np.abs(K) < 1e-14] = 0.0
    K.flags.writeable = False
    return K


def reference_blocks(config: SchemeConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(K_left, K_self, K_right) with dy_j/dt = (2/h_j)(K_left y_{j-1} + K_self y_j + K_right y_{j+1})."""
    K = _reference_blocks(config.flux, config.degree, float(config.alpha))
    return K[0], K[1], K[2]


def assemble_operator(mesh: PeriodicMesh1D, config: SchemeConfig) -> sp.csr_matrix:
    """Sparse matrix A with dy/dt = A y in the cell-major packing of ``to_vector``.

    On a uniform mesh this is block circulant.
    """
    KL, K0, KR = reference_blocks(config)
    n = mesh.n_cells
    idx = np.arange(n)
    scale = 2.0 / mesh.widths

    def band(K, shift):
        P = sp.csr_matrix((scale, (idx, (idx + shift) % n)), shape=(n, n))
        return sp.kron(P, K)

    return sp.csr_matrix(band(KL, -1) + band(K0, 0) + band(KR, 1))


def bloch_symbol(config: SchemeConfig, h: float, theta: float) -> np.ndarray:
    """Block symbol of the uniform-mesh operator for data with y_{j+1} = e^{i theta} y_j."""
    KL, K0, KR = reference_blocks(config)
    return (2.0 / h) * (KL * np.exp(-1j * theta) + K0 + KR * np.exp(1j * theta))


# ---------------------------------------------------------------------------
# snapshots

def sample(state: DGState, points_per_cell: int = 8):
    """x, u_h, phi_h at ``points_per_cell`` equispaced points per cell, endpoints included."""
    s = np.linspace(-1.0, 1.0, points_per_cell)
    V = legendre_table(state.degree, s)
    x = state.mesh.to_physical(np.arange(state.mesh.n_cells)[:, None], s[None, :])
    u = state.u @ V
    phi = None if state.phi is None else state.phi @ V
    return x.reshape(-1), u.reshape(-1), None if phi is None else phi.reshape(-1)


def write_snapshot_csv(state: DGState, path, points_per_cell: int = 8) -> None:
    x, u, phi = sample(state, points_per_cell)
    if phi is None:
        phi = np.zeros_like(u)
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "u_h", "phi_h"])
        for row in zip(x, u, phi):
            w.writerow([f"{v:.17g}" for v in row])


def with_time(state: DGState, t: float) -> DGState:
    return replace(state, t=t)
