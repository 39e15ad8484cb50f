"""Polynomial kernels on the reference interval [-1, 1].

Gauss-Legendre quadrature, Jacobi polynomials, the orthonormal Legendre
basis used throughout the package, terminating confluent hypergeometric
series and the Bloch eigenfunctions built from them.

Scalar routines that take ``omega`` are written with plain arithmetic so
they accept Python ``complex``/``float`` as well as ``mpmath`` numbers;
the dispersion module relies on this to run the same formulas in extended
precision.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule on [-1, 1].

    ``exact_degree`` is the highest polynomial degree integrated exactly.
    """

    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int

    def integrate(self, f):
        return np.dot(self.weights, f(self.nodes))

    def __len__(self) -> int:
        return len(self.nodes)


@lru_cache(maxsize=64)
def gauss_legendre(n_points: int) -> QuadratureRule:
    """``n_points``-point Gauss-Legendre rule, exact to degree ``2*n_points - 1``."""
    if n_points < 1:
        raise ValueError(f"need at least one quadrature point, got {n_points}")
    x, w = np.polynomial.legendre.leggauss(n_points)
    x.flags.writeable = False
    w.flags.writeable = False
    return QuadratureRule(x, w, 2 * n_points - 1)


def default_rule(N: int) -> QuadratureRule:
    """The N+2 point rule used for all bilinear forms on P_N."""
    return gauss_legendre(N + 2)


def jacobi_eval(m: int, p: float, q: float, s):
    """Jacobi polynomial P_m^{(p,q)}(s) by the three-term recurrence.

    ``s`` may be a scalar or an array.
    """
    if m < 0:
        raise ValueError(f"degree must be non-negative, got {m}")
    if p <= -1 or q <= -1:
        raise ValueError(f"Jacobi parameters must exceed -1, got ({p}, {q})")
    s = np.asarray(s, dtype=float)
    prev = np.ones_like(s)
    if m == 0:
        return prev if prev.ndim else float(prev)
    cur = 0.5 * ((p + q + 2) * s + (p - q))
    for n in range(2, m + 1):
        c = 2 * n + p + q
        a1 = 2 * n * (n + p + q) * (c - 2)
        a2 = (c - 1) * (p * p - q * q)
        a3 = (c - 1) * c * (c - 2)
        a4 = 2 * (n + p - 1) * (n + q - 1) * c
        prev, cur = cur, ((a2 + a3 * s) * cur - a4 * prev) / a1
    return cur if cur.ndim else float(cur)


def legendre_table(N: int, s) -> np.ndarray:
    """Orthonormal Legendre functions phi_0..phi_N at points ``s``.

    Returns an array of shape ``(N + 1, len(s))`` with
    phi_k = sqrt((2k+1)/2) P_k, so that (phi_k, phi_l) = delta_kl on [-1, 1].
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    P = np.empty((N + 1, s.size))
    P[0] = 1.0
    if N >= 1:
        P[1] = s
    for k in range(2, N + 1):
        P[k] = ((2 * k - 1) * s * P[k - 1] - (k - 1) * P[k - 2]) / k
    return P * np.sqrt((2 * np.arange(N + 1) + 1) / 2)[:, None]


def legendre_derivative_table(N: int, s) -> np.ndarray:
    """Derivatives of the orthonormal Legendre functions at ``s``."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    P = np.empty((N + 1, s.size))
    dP = np.zeros((N + 1, s.size))
    P[0] = 1.0
    if N >= 1:
        P[1] = s
        dP[1] = 1.0
    for k in range(2, N + 1):
        P[k] = ((2 * k - 1) * s * P[k - 1] - (k - 1) * P[k - 2]) / k
        # P_k' = P_{k-2}' + (2k-1) P_{k-1}
        dP[k] = dP[k - 2] + (2 * k - 1) * P[k - 1]
    return dP * np.sqrt((2 * np.arange(N + 1) + 1) / 2)[:, None]


def endpoint_values(N: int) -> tuple[np.ndarray, np.ndarray]:
    """(phi_k(-1), phi_k(1)) for k = 0..N."""
    k = np.arange(N + 1)
    norm = np.sqrt((2 * k + 1) / 2)
    return norm * (-1.0) ** k, norm


@lru_cache(maxsize=64)
def derivative_matrix(N: int) -> np.ndarray:
    """G[k, l] = (phi_k, phi_l') on [-1, 1]."""
    rule = default_rule(N)
    V = legendre_table(N, rule.nodes)
    dV = legendre_derivative_table(N, rule.nodes)
    G = (V * rule.weights) @ dV.T
    G[np.abs(G) < 1e-14] = 0.0
    G.flags.writeable = False
    return G


def project(N: int, f, rule: QuadratureRule | None = None) -> np.ndarray:
    """Orthonormal-Legendre coefficients of the L2 projection of f onto P_N."""
    rule = rule or default_rule(N)
    V = legendre_table(N, rule.nodes)
    return (V * rule.weights) @ f(rule.nodes)


# ---------------------------------------------------------------------------
# terminating confluent hypergeometric series

def hyp1f1_terminating(a_neg_int: int, b: int, z):
    """Finite sum of 1F1(a; b; z) for a non-positive integer ``a``.

    The series stops after |a| + 1 terms.  Raises ``ValueError`` if one of
    the Pochhammer factors b, b+1, ..., b+|a|-1 is zero.
    """
    a = int(a_neg_int)
    if a > 0:
        raise ValueError(f"numerator parameter must be a non-positive integer, got {a}")
    n_terms = -a
    if b <= 0 and -b < n_terms:
        raise ValueError(f"(b)_m vanishes for b={b} before the series terminates at m={n_terms}")
    term = 1
    total = 1
    for m in range(n_terms):
        # z first: integer ratios alone would round to double
        term = term * z * (a + m) / ((b + m) * (m + 1))
        total = total + term
    return total


def _is_mp(x) -> bool:
    return isinstance(x, (mpmath.mpf, mpmath.mpc))


def _conj(x):
    return x.conjugate()


def cexp(z):
    """exp for complex doubles or mpmath numbers."""
    return mpmath.exp(z) if _is_mp(z) else cmath.exp(z)


def csqrt(z):
    """Principal square root for complex doubles or mpmath numbers."""
    return mpmath.sqrt(z) if _is_mp(z) else cmath.sqrt(z)


@dataclass(frozen=True)
class HypergeometricQuartet:
    """F_N^-, F_N^+, F_{N+1}^-, F_{N+1}^+ at nondimensional frequency omega."""

    N: int
    omega: object
    fN_minus: object
    fN_plus: object
    fNp1_minus: object
    fNp1_plus: object

    def as_complex(self) -> tuple[complex, complex, complex, complex]:
        return tuple(complex(v) for v in (self.fN_minus, self.fN_plus, self.fNp1_minus, self.fNp1_plus))


def quartet(N: int, omega) -> HypergeometricQuartet:
    """The four terminating 1F1 values for degree N.

    F_N^{+-} = 1F1(-N, -2N-1, +-i omega) and
    F_{N+1}^{+-} = 1F1(-N-1, -2N-1, +-i omega).
    ``omega`` may be real or complex, double or mpmath.
    """
    if N < 0:
        raise ValueError(f"degree must be non-negative, got {N}")
    b = -2 * N - 1
    iz = 1j * omega
    return HypergeometricQuartet(
        N=N,
        omega=omega,
        fN_minus=hyp1f1_terminating(-N, b, -iz),
        fN_plus=hyp1f1_terminating(-N, b, iz),
        fNp1_minus=hyp1f1_terminating(-N - 1, b, -iz),
        fNp1_plus=hyp1f1_terminating(-N - 1, b, iz),
    )


def factorial_ratios(N: int) -> list[float]:
    """r_m = (2N+1-m)!/(2N+1)! for m = 0..N+1 as running products."""
    r = [1.0]
    for m in range(N + 1):
        r.append(r[-1] / (2 * N + 1 - m))
    return r


def moment_constant(N: int) -> float:
    """N!/(2N+1)!, accumulated without forming factorials."""
    c = 1.0
    for k in range(N + 1, 2 * N + 2):
        c /= k
    return c


# ---------------------------------------------------------------------------
# Bloch eigenfunctions

@dataclass(frozen=True)
class EigenfunctionFrame:
    """Orthonormal-Legendre coefficients of Psi_N^{1,+}, Psi_N^{2,+}, Psi_N^{1,-}, Psi_N^{2,-}.

    ``ends[name]`` holds (value at s=-1, value at s=+1).
    """

    N: int
    omega: float
    psi1p: np.ndarray
    psi2p: np.ndarray
    psi1m: np.ndarray
    psi2m: np.ndarray
    ends: dict = field(default_factory=dict)


def _psi_values(N: int, omega: float, sign: int, kind: int, s) -> np.ndarray:
    r = factorial_ratios(N)
    z = sign * 1j * omega
    out = np.zeros(np.shape(s), dtype=complex)
    for m in range(N + 1):
        if kind == 1:
            p, q = N - m, N - m + 1
        else:
            p, q = N - m + 1, N - m
        out = out + z**m * r[m] * jacobi_eval(m, p, q, s)
    return out


def eigenfunctions(N: int, omega: float) -> EigenfunctionFrame:
    """Build the four degree-N eigenfunctions and their endpoint values."""
    if N < 0:
        raise ValueError(f"degree must be non-negative, got {N}")
    rule = default_rule(N)
    V = legendre_table(N, rule.nodes) * rule.weights
    lo, hi = endpoint_values(N)
    coeffs = {}
    ends = {}
    for name, sign, kind in (("psi1p", 1, 1), ("psi2p", 1, 2), ("psi1m", -1, 1), ("psi2m", -1, 2)):
        c = V @ _psi_values(N, omega, sign, kind, rule.nodes)
        c.flags.writeable = False
        coeffs[name] = c
        ends[name] = (complex(lo @ c), complex(hi @ c))
    return EigenfunctionFrame(N=N, omega=omega, ends=ends, **coeffs)


def apply_op(sign: int, coeffs: np.ndarray, omega: float) -> np.ndarray:
    """Coefficients of L^{+-} v = -+ (i omega / 2) v + v' for v in P_N."""
    N = len(coeffs) - 1
    return -sign * 0.5j * omega * coeffs + derivative_matrix(N) @ coeffs


def jacobi_coefficients(N: int, p: int, q: int) -> np.ndarray:
    """Orthonormal-Legendre coefficients of P_N^{(p,q)}."""
    return project(N, lambda s: jacobi_eval(N, p, q, s))


def operator_rhs(N: int, omega: float, sign: int, kind: int) -> np.ndarray:
    """Coefficients of the closed-form right-hand side of L^{sign} Psi_N^{kind,sign}.

    -(sign*i*omega)^{N+1}/2 * (N+1)!/(2N+1)! * P_N^{(0,1)} (kind 1) or P_N^{(1,0)} (kind 2).
    """
    scale = -((sign * 1j * omega) ** (N + 1)) / 2 * (N + 1) * moment_constant(N)
    p, q = (0, 1) if kind == 1 else (1, 0)
    return scale * jacobi_coefficients(N, p, q)


def mean_value(coeffs: np.ndarray) -> complex:
    """(v, 1) on [-1, 1] from orthonormal coefficients."""
    return coeffs[0] * math.sqrt(2.0)
