"""Vectorised GKSL generator and time evolution of the walker state.

Row-major vectorisation is used throughout, ``vec(|i><j|) = |i>|j>``, so that
``(A kron B) vec(rho) = vec(A rho B^T)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg

from .analytic import segment_eigensystem, spectral_phases
from .errors import (
    DimensionMismatchError,
    InvalidStateError,
    NumericalError,
    TruncationError,
)
from .lattice import AdjacencySpec, DissipatorSpec

HERM_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
# looser bounds for propagated states: round-off accumulates through expm
OUTPUT_TOL = 1e-10
LIGHT_CONE_TOL = 1e-8


def vectorize(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1).copy()


def devectorize(vec: np.ndarray, n: int | None = None) -> np.ndarray:
    vec = np.asarray(vec)
    if n is None:
        n = math.isqrt(vec.size)
    if n * n != vec.size:
        raise DimensionMismatchError(f"vector of length {vec.size} is not a vectorised {n}x{n} matrix")
    return vec.reshape(n, n).copy()


def check_density_matrix(
    rho: np.ndarray,
    herm_tol: float = HERM_TOL,
    trace_tol: float = TRACE_TOL,
    psd_tol: float = PSD_TOL,
) -> np.ndarray:
    """Raise :class:`InvalidStateError` unless ``rho`` is a valid state; return it."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError(f"density matrix must be square, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise InvalidStateError("density matrix has non-finite entries")
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    if herm > herm_tol:
        raise InvalidStateError(f"not Hermitian: max |rho - rho^dag| = {herm:.3e}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise InvalidStateError(f"trace is {tr:.15g}, expected 1")
    lo = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
    if lo < -psd_tol:
        raise InvalidStateError(f"not positive semidefinite: min eigenvalue {lo:.3e}")
    return rho


def pure_state(n: int, index: int) -> np.ndarray:
    """``|index><index|`` with a 0-based position index."""
    rho = np.zeros((n, n), dtype=complex)
    rho[index, index] = 1.0
    return rho


@dataclass(frozen=True)
class GeneratorMatrix:
    """``G`` with ``d vec(rho)/dt = G vec(rho)``; dense ndarray or scipy sparse."""

    matrix: object
    n: int
    omega: float

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.matrix)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return devectorize(self.matrix @ vectorize(rho), self.n)


def build_generator(
    hamiltonian: AdjacencySpec | np.ndarray,
    diss: DissipatorSpec,
    omega: float,
    sparse: bool = False,
) -> GeneratorMatrix:
    """Assemble the interpolated generator for hopping Hamiltonian and Lindblad set."""
    h = hamiltonian.matrix if isinstance(hamiltonian, AdjacencySpec) else np.asarray(hamiltonian)
    n = h.shape[0]
    if h.shape != (n, n):
        raise DimensionMismatchError(f"Hamiltonian must be square, got {h.shape}")
    for op in diss.operators:
        if op.shape != (n, n):
            raise DimensionMismatchError(f"Lindblad operator of shape {op.shape} on a {n}-vertex graph")
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"omega must lie in [0, 1], got {omega}")

    if sparse:
        kron, eye, conv = sp.kron, sp.identity(n, format="csr"), sp.csr_matrix
    else:
        kron, eye, conv = np.kron, np.eye(n), np.asarray

    h = conv(h)
    g = -1j * (1.0 - omega) * (kron(h, eye) - kron(eye, h.conj()))
    if omega > 0.0:
        d = 0
        for op in diss.operators:
            op = conv(op)
            opd = op.conj().T
            ldl = opd @ op
            d = d + kron(op, op.conj()) - 0.5 * kron(ldl, eye) - 0.5 * kron(eye, (op.T @ op.conj()))
        g = g + omega * d
    if sparse:
        g = sp.csr_matrix(g, dtype=complex)
    else:
        g = np.asarray(g, dtype=complex)
    return GeneratorMatrix(g, n, omega)


def _propagator(gen: GeneratorMatrix, t: float) -> np.ndarray:
    a = t * gen.matrix
    prop = scipy.linalg.expm(a)
    if not np.all(np.isfinite(prop)):
        norm1 = float(np.max(np.sum(np.abs(a), axis=0)))
        raise NumericalError(f"expm returned non-finite entries (||tG||_1 = {norm1:.3e}, t = {t})")
    return prop


def _checked(rho: np.ndarray, what: str) -> np.ndarray:
    try:
        return check_density_matrix(rho, OUTPUT_TOL, OUTPUT_TOL, PSD_TOL)
    except InvalidStateError as exc:
        raise NumericalError(f"{what}: propagated state is invalid ({exc})") from exc


def evolve(gen: GeneratorMatrix, rho0: np.ndarray, t: float) -> np.ndarray:
    """State at time ``t`` from ``rho0`` under ``exp(t G)``."""
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    rho0 = check_density_matrix(rho0)
    if rho0.shape[0] != gen.n:
        raise DimensionMismatchError(f"state is {rho0.shape[0]}-dimensional, generator acts on {gen.n}")
    if t == 0:
        return np.array(rho0, dtype=complex)
    v0 = vectorize(rho0).astype(complex)
    if gen.is_sparse:
        v = scipy.sparse.linalg.expm_multiply(t * gen.matrix, v0)
        if not np.all(np.isfinite(v)):
            raise NumericalError(f"expm_multiply diverged at t = {t}")
    else:
        v = _propagator(gen, t) @ v0
    return _checked(devectorize(v, gen.n), f"evolve(t={t})")


def _is_uniform(times: np.ndarray) -> bool:
    if times.size < 3:
        return False
    steps = np.diff(times)
    return bool(np.allclose(steps, steps[0], rtol=1e-12, atol=0.0))


def evolve_grid(gen: GeneratorMatrix, rho0: np.ndarray, times) -> np.ndarray:
    """States on a time grid, shape ``(len(times), n, n)``.

    Uniform grids on a dense generator reuse one step propagator.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a non-empty 1-d sequence")
    if times[0] < 0 or np.any(np.diff(times) <= 0):
        raise ValueError("times must be non-negative and strictly increasing")
    rho0 = check_density_matrix(rho0)
    if rho0.shape[0] != gen.n:
        raise DimensionMismatchError(f"state is {rho0.shape[0]}-dimensional, generator acts on {gen.n}")

    out = np.empty((times.size, gen.n, gen.n), dtype=complex)
    v = vectorize(rho0).astype(complex)
    if gen.is_sparse:
        t_prev = 0.0
        for i, t in enumerate(times):
            if t > t_prev:
                v = scipy.sparse.linalg.expm_multiply((t - t_prev) * gen.matrix, v)
            out[i] = devectorize(v, gen.n)
            t_prev = t
    elif _is_uniform(times):
        if times[0] > 0:
            v = _propagator(gen, times[0]) @ v
        step = _propagator(gen, times[1] - times[0])
        out[0] = devectorize(v, gen.n)
        for i in range(1, times.size):
            v = step @ v
            out[i] = devectorize(v, gen.n)
    else:
        for i, t in enumerate(times):
            out[i] = devectorize(_propagator(gen, t) @ v, gen.n) if t > 0 else rho0
    if not np.all(np.isfinite(out)):
        raise NumericalError("non-finite state on the time grid")
    for i, t in enumerate(times):
        _checked(out[i], f"evolve_grid(t={t})")
    return out


def evolve_spectral(adj: AdjacencySpec, omega: float, rho0: np.ndarray, times) -> np.ndarray:
    """Exact propagation for the global dissipator (``H = A``, ``L_S = A/2``).

    Both pieces of the generator are diagonal in the sine basis, so each
    coherence picks up a scalar factor; cost is O(n^3) per time point.
    Returns shape ``(len(times), n, n)``.
    """
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"omega must lie in [0, 1], got {omega}")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times < 0):
        raise ValueError("times must be non-negative")
    rho0 = check_density_matrix(rho0)
    if rho0.shape[0] != adj.n:
        raise DimensionMismatchError(f"state is {rho0.shape[0]}-dimensional, graph has {adj.n} vertices")
    es = segment_eigensystem(adj.n)
    v = es.vectors
    rho_eig = v.T @ rho0 @ v
    out = np.empty((times.size, adj.n, adj.n), dtype=complex)
    for i, t in enumerate(times):
        if t == 0.0:
            out[i] = rho0
            continue
        out[i] = v @ (rho_eig * spectral_phases(es.values, omega, t)) @ v.T
        _checked(out[i], f"evolve_spectral(t={t})")
    return out


def populations(states: np.ndarray) -> np.ndarray:
    """Diagonal of one state or of a stack of states, as real probabilities."""
    diag = np.diagonal(states, axis1=-2, axis2=-1)
    return np.real(diag).copy()


def purity(rho: np.ndarray) -> float:
    rho = np.asarray(rho)
    return float(np.real(np.vdot(rho.conj().T, rho)))


def check_majorization(rho_out: np.ndarray, rho_in: np.ndarray, tol: float = 1e-10) -> bool:
    """True if the spectrum of ``rho_out`` is majorized by that of ``rho_in``."""
    if np.shape(rho_out) != np.shape(rho_in):
        raise DimensionMismatchError(f"shapes differ: {np.shape(rho_out)} vs {np.shape(rho_in)}")
    lo = np.linalg.eigvalsh(rho_out)[::-1]
    li = np.linalg.eigvalsh(rho_in)[::-1]
    co, ci = np.cumsum(lo), np.cumsum(li)
    if abs(co[-1] - ci[-1]) > tol:
        return False
    return bool(np.all(co <= ci + tol))


def light_cone_half_width(t_max: float) -> int:
    """Rule-of-thumb truncation for an infinite-line run up to ``t_max``.

    The adjacency spectral radius is 2, so amplitude travels at most ~2t.
    """
    return int(math.ceil(2 * t_max + 10))


def check_light_cone(probs: np.ndarray, tol: float = LIGHT_CONE_TOL) -> float:
    """Raise :class:`TruncationError` if the two outermost vertices carry ``tol`` or more.

    ``probs`` may be a single population vector or a stack over times.
    Returns the worst edge mass seen.
    """
    probs = np.atleast_2d(probs)
    edge = float(np.max(probs[:, 0] + probs[:, -1]))
    if edge >= tol:
        raise TruncationError(
            f"probability {edge:.3e} on the outermost vertices exceeds {tol:.0e}; enlarge the truncated line"
        )
    return edge
