"""Closed-form results for the walk driven by the global dissipator.

Everything here is a pure function of its arguments and is independent of the
superoperator machinery in :mod:`qswalk.evolution`, so the two can be used to
check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import QuadratureAccuracyError, SeriesDivergenceError

IMAG_TOL = 1e-10
EXACT_BINOM_MAX = 30


# ---------------------------------------------------------------------------
# spectrum of the segment operator


@dataclass(frozen=True)
class EigenSystem:
    """Spectrum of the tridiagonal Toeplitz operator with 1/2 off-diagonals.

    ``vectors[j, i]`` is the j-th component of the i-th eigenvector; the
    matrix is symmetric and orthogonal.
    """

    n: int
    values: np.ndarray
    vectors: np.ndarray


@lru_cache(maxsize=64)
def segment_eigensystem(n: int) -> EigenSystem:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    j = np.arange(1, n + 1)
    values = np.cos(j * np.pi / (n + 1))
    vectors = np.sqrt(2.0 / (n + 1)) * np.sin(np.outer(j, j) * np.pi / (n + 1))
    values.setflags(write=False)
    vectors.setflags(write=False)
    return EigenSystem(n, values, vectors)


def spectral_phases(values: np.ndarray, omega: float, t: float) -> np.ndarray:
    """exp(t * g_ij) for the generator eigenvalue attached to |v_i><v_j|.

    With ``H = 2 L_S`` both the coherent and dissipative parts are diagonal in
    the eigenbasis of ``L_S``.
    """
    d = values[:, None] - values[None, :]
    return np.exp(-0.5 * omega * t * d**2 - 2j * (1.0 - omega) * t * d)


def _real_or_raise(z: np.ndarray, what: str) -> np.ndarray:
    worst = float(np.max(np.abs(np.imag(z)))) if np.size(z) else 0.0
    if worst >= IMAG_TOL:
        raise ArithmeticError(f"{what}: imaginary residue {worst:.3e} exceeds {IMAG_TOL}")
    return np.real(z)


def _check_omega(omega: float) -> None:
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"omega must lie in [0, 1], got {omega}")


def segment_distribution(n: int, l: int, omega: float, t: float) -> np.ndarray:
    """Vertex populations at time t for a walk started at vertex ``l`` (1-based)."""
    if not 1 <= l <= n:
        raise ValueError(f"initial vertex {l} outside 1..{n}")
    _check_omega(omega)
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    es = segment_eigensystem(n)
    w = es.vectors * es.vectors[l - 1, :]
    phases = spectral_phases(es.values, omega, t)
    p = np.einsum("ki,ij,kj->k", w, phases, w)
    return _real_or_raise(p, "segment_distribution")


def asymptotic_distribution(n: int, l: int, exact: bool = False):
    """Long-time populations on a segment for any omega in (0, 1].

    With ``exact=True`` a list of :class:`~fractions.Fraction` is returned.
    """
    if not 1 <= l <= n:
        raise ValueError(f"initial vertex {l} outside 1..{n}")
    base = Fraction(1, n + 1)
    p = [base] * n
    if n % 2 == 1 and l == (n + 1) // 2:
        p[l - 1] = Fraction(2, n + 1)
    else:
        p[l - 1] = Fraction(3, 2 * (n + 1))
        p[n - l] = Fraction(3, 2 * (n + 1))
    if exact:
        return p
    return np.array([float(x) for x in p])


# ---------------------------------------------------------------------------
# infinite line: double integral


def default_quadrature_nodes(k: int, t: float) -> int:
    return max(64, math.ceil(8 * (1 + t)), 4 * abs(k) + 16)


def min_quadrature_nodes(k: int, t: float) -> int:
    """Smallest node count that still resolves the integrand's oscillations."""
    return math.ceil(abs(k) + 2 * t + 8)


@lru_cache(maxsize=32)
def _gauss_half_interval(nodes: int):
    x, w = np.polynomial.legendre.leggauss(nodes)
    x = 0.5 * np.pi * (x + 1.0)
    w = 0.5 * np.pi * w
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def line_distribution_profile(ks, omega: float, t: float, nodes: int | None = None) -> np.ndarray:
    """Populations at several integer positions for a walk started at 0.

    The integrand is even in both angles, so the square [-pi, pi]^2 folds onto
    [0, pi]^2, integrated with a tensor Gauss-Legendre rule.
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=int))
    _check_omega(omega)
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    kmax = int(np.max(np.abs(ks))) if ks.size else 0
    if nodes is None:
        nodes = default_quadrature_nodes(kmax, t)
    if nodes < 8:
        raise ValueError(f"need at least 8 quadrature nodes, got {nodes}")
    need = min_quadrature_nodes(kmax, t)
    if nodes < need:
        raise QuadratureAccuracyError(
            f"{nodes} nodes cannot resolve k={kmax}, t={t}; use at least {need}"
        )
    x, w = _gauss_half_interval(nodes)
    c = np.cos(x)
    d = c[:, None] - c[None, :]
    f = np.exp(-0.5 * omega * t * d**2 - 2j * (1.0 - omega) * t * d)
    basis = w[None, :] * np.cos(np.outer(ks, x))
    p = np.einsum("ka,ab,kb->k", basis, f, basis) / np.pi**2
    return _real_or_raise(p, "line_distribution")


def line_distribution(k: int, omega: float, t: float, quadrature_nodes: int | None = None) -> float:
    return float(line_distribution_profile([k], omega, t, quadrature_nodes)[0])


# ---------------------------------------------------------------------------
# Taylor series in t


def _log_comb(n: int, k: int) -> float:
    if n <= EXACT_BINOM_MAX:
        return math.log(math.comb(n, k))
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _check_log_comb_switch() -> None:
    n = EXACT_BINOM_MAX
    for k in range(n + 1):
        exact = math.log(math.comb(n, k))
        approx = math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
        assert abs(exact - approx) <= 1e-12 * max(1.0, exact), (n, k)


_check_log_comb_switch()


def series_coefficient_A(n: int, k: int, exact: bool = False):
    """Taylor coefficient of t^n/n! in the omega = 1 line population at k."""
    if n < 0:
        raise ValueError(f"order must be non-negative, got {n}")
    if abs(k) > n:
        return Fraction(0) if exact else 0.0
    val = Fraction((-1) ** ((n + k) % 2) * math.comb(2 * n, n) * math.comb(2 * n, n + k), 8**n)
    return val if exact else float(val)


def series_coefficient_B(n: int, k: int, omega, exact: bool = False):
    """Taylor coefficient of t^n/n! for general omega.

    Rational ``omega`` (int, Fraction) with ``exact=True`` gives an exact
    Fraction; floats are converted exactly before summation.
    """
    if n < 0:
        raise ValueError(f"order must be non-negative, got {n}")
    w = Fraction(omega)
    if not 0 <= w <= 1:
        raise ValueError(f"omega must lie in [0, 1], got {omega}")
    total = Fraction(0)
    for l in range(min(n // 2, n - abs(k)) + 1):
        m = n - l
        term = (
            math.comb(n, 2 * l)
            * 64**l
            * w ** (n - 2 * l)
            * (1 - w) ** (2 * l)
            * math.comb(2 * m, m)
            * math.comb(2 * m, m + k)
        )
        total += -term if l % 2 else term
    total = total * (-1) ** ((n + k) % 2) / 8**n
    return total if exact else float(total)


def _series_term(n: int, k: int, omega: float, log_t: float) -> float:
    """B_{n,k} t^n / n!, summed in log space so that large orders do not overflow."""
    ak = abs(k)
    log_fact = math.lgamma(n + 1)
    total = 0.0
    for l in range(min(n // 2, n - ak) + 1):
        if omega == 1.0 and l > 0:
            break
        if omega == 0.0 and n != 2 * l:
            continue
        m = n - l
        log_mag = (
            _log_comb(n, 2 * l)
            + (2 * l - n) * math.log(8.0)
            + _log_comb(2 * m, m)
            + _log_comb(2 * m, m + ak)
            + n * log_t
            - log_fact
        )
        if omega not in (0.0, 1.0):
            log_mag += (n - 2 * l) * math.log(omega) + 2 * l * math.log1p(-omega)
        mag = math.exp(log_mag)
        total += -mag if (n + ak + l) % 2 else mag
    return total


def line_distribution_series(
    k: int,
    omega: float,
    t: float,
    tol: float = 1e-13,
    t_max: float = 5.0,
    max_order: int = 300,
) -> float:
    """Line population at ``k`` from the truncated Taylor series in t.

    The series alternates with large intermediate terms, so double precision
    loses digits as t grows. Requests above ``t_max`` are refused; pass a
    larger ``t_max`` to override.
    """
    _check_omega(omega)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if t > t_max:
        raise SeriesDivergenceError(f"t={t} beyond series window t_max={t_max}; use quadrature")
    if t == 0:
        return 1.0 if k == 0 else 0.0
    log_t = math.log(t)
    partial = 0.0
    peak = 0.0
    small = 0
    n = abs(k)
    while True:
        if n > max_order:
            raise SeriesDivergenceError(f"series did not converge within {max_order} orders (k={k}, t={t})")
        term = _series_term(n, k, omega, log_t)
        partial += term
        peak = max(peak, abs(partial))
        # before the first non-zero term only structural zeros occur (omega = 0, n < 2|k|)
        settled = partial != 0.0 or n > 2 * abs(k) + 2
        if settled and abs(term) <= tol * abs(partial):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        n += 1
    if peak > 1e6 * max(abs(partial), np.finfo(float).tiny) or not -1e-6 <= partial <= 1 + 1e-6:
        raise SeriesDivergenceError(
            f"cancellation: partial sums reached {peak:.3e} for a result of {partial:.3e}"
        )
    return partial


# ---------------------------------------------------------------------------
# moments


def mu2_closed(omega: float, t: float) -> float:
    """Second central moment of the line walk started at the origin.

    At omega = 0 this reduces to the coherent 2 t^2 law.
    """
    _check_omega(omega)
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    return 2.0 * (omega - 1.0) ** 2 * t**2 + 0.5 * omega * t


def _alternating_power_sum(j: int, m: int) -> int:
    return sum((-1) ** k * (k - j) ** m * math.comb(2 * j, k) for k in range(2 * j + 1))


def moment_polynomial(m: int, omega) -> list:
    """Coefficients ``beta_0..beta_m`` with ``mu_m(t) = sum beta_n t^n``.

    Exact (Fraction) for rational ``omega``; floats are converted exactly.
    """
    if m < 0:
        raise ValueError("moment order must be non-negative")
    w = Fraction(omega)
    coeffs = []
    for n in range(m + 1):
        beta = Fraction(0)
        for l in range(n // 2 + 1):
            j = n - l
            if 2 * j > m:
                continue
            beta += (
                Fraction(64**l, 8**n * math.factorial(n))
                * math.comb(n, 2 * l)
                * math.comb(2 * j, j)
                * w ** (n - 2 * l)
                * (1 - w) ** (2 * l)
                * _alternating_power_sum(j, m)
            )
        coeffs.append(beta)
    return coeffs


def moment_leading_coefficient(m: int, omega: float) -> tuple[float, int]:
    """Return ``(coefficient, power)`` with ``mu_m(t) ~ coefficient * t**power``."""
    if m < 2 or m % 2:
        raise ValueError(f"m must be an even integer >= 2 (odd central moments vanish), got {m}")
    _check_omega(omega)
    half = m // 2
    if omega == 1.0:
        coeff = math.factorial(m) / (math.factorial(half) * 8**half) * math.comb(m, half)
        return coeff, half
    return math.comb(m, half) * (omega - 1.0) ** m, m
