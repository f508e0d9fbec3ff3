"""Moments of walker distributions and estimation of the scaling exponent."""

from __future__ import annotations

import warnings
from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from .analytic import mu2_closed
from .errors import FitError
from .evolution import (
    build_generator,
    check_light_cone,
    evolve_grid,
    evolve_spectral,
    light_cone_half_width,
    populations,
    pure_state,
)
from .lattice import build_dissipator, build_truncated_line

REGIMES = ("sub_diffusive", "normal", "super_diffusive", "ballistic")


def central_moment(dist, m: int, positions=None, atol: float = 1e-8) -> float:
    """m-th moment of a lattice distribution about its mean.

    ``dist`` is either a mapping ``position -> probability`` or an array of
    probabilities with matching ``positions``.
    """
    if isinstance(dist, Mapping):
        positions = np.fromiter(dist.keys(), dtype=float)
        probs = np.fromiter(dist.values(), dtype=float)
    else:
        probs = np.asarray(dist, dtype=float)
        if positions is None:
            raise ValueError("positions are required for array input")
        positions = np.asarray(positions, dtype=float)
        if positions.shape != probs.shape:
            raise ValueError(f"positions {positions.shape} and probabilities {probs.shape} differ")
    if m < 1:
        raise ValueError(f"moment order must be positive, got {m}")
    total = probs.sum()
    if abs(total - 1.0) > atol:
        raise ValueError(f"distribution is not normalised (sum = {total:.12g})")
    mean = float(np.dot(positions, probs))
    return float(np.dot((positions - mean) ** m, probs))


@dataclass(frozen=True)
class MomentSeries:
    times: np.ndarray
    values: np.ndarray
    m: int = 2
    source: str = "expm"

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.shape != v.shape or t.ndim != 1:
            raise ValueError(f"times {t.shape} and values {v.shape} must be equal-length 1-d arrays")
        if self.m % 2 == 0 and np.any(v < 0):
            raise ValueError("even moments cannot be negative")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class ScalingFit:
    alpha: float
    intercept: float
    window: tuple[float, float]
    r_squared: float
    n_points: int


def default_window(times) -> tuple[float, float]:
    """Latter half of the time span."""
    t = np.asarray(times, dtype=float)
    return (0.5 * (t[0] + t[-1]), float(t[-1]))


def fit_alpha(series: MomentSeries, window: tuple[float, float] | None = None) -> ScalingFit:
    """Least-squares slope of log(mu) against log(t) inside ``window``."""
    if window is None:
        window = default_window(series.times)
    lo, hi = window
    sel = (series.times >= lo) & (series.times <= hi)
    t, v = series.times[sel], series.values[sel]
    if t.size < 3:
        raise FitError(f"only {t.size} points inside window [{lo}, {hi}]; need at least 3")
    if np.any(v <= 0) or np.any(t <= 0):
        raise FitError(f"non-positive times or moments inside window [{lo}, {hi}]")
    x, y = np.log(t), np.log(v)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return ScalingFit(float(slope), float(intercept), (float(lo), float(hi)), min(max(r2, 0.0), 1.0), int(t.size))


def running_exponent(series: MomentSeries) -> np.ndarray:
    """Local slope d log(mu) / d log(t) on the series grid."""
    return np.gradient(np.log(series.values), np.log(series.times))


def classify_regime(alpha: float, tol: float = 0.05) -> str:
    if tol <= 0:
        raise ValueError("tol must be positive")
    if alpha < 0 or alpha > 2 + tol:
        warnings.warn(f"alpha = {alpha:.4g} lies outside the model range [0, 2]", RuntimeWarning, stacklevel=2)
    if abs(alpha - 2.0) <= tol or alpha > 2.0:
        return "ballistic"
    if abs(alpha - 1.0) <= tol:
        return "normal"
    if alpha < 1.0:
        return "sub_diffusive"
    return "super_diffusive"


def line_populations(
    omega: float,
    times,
    dissipator: str = "global",
    half_width: int | None = None,
    guard_tol: float = 1e-8,
    method: str = "auto",
) -> tuple[np.ndarray, np.ndarray]:
    """Populations of a truncated-line walk started at the origin.

    Returns ``(positions, probs)`` with ``probs`` of shape ``(len(times), 2w+1)``.
    The light-cone guard is checked on every time point. ``method`` is
    ``"spectral"`` (global dissipator only), ``"sparse"`` (action of the
    matrix exponential of the full generator) or ``"auto"``.
    """
    if method not in ("auto", "spectral", "sparse"):
        raise ValueError(f"unknown method {method!r}")
    is_global = dissipator in ("global", "global_sum")
    if method == "spectral" and not is_global:
        raise ValueError("spectral propagation needs the global dissipator")
    times = np.asarray(times, dtype=float)
    if half_width is None:
        half_width = light_cone_half_width(float(times[-1]))
    adj = build_truncated_line(half_width)
    rho0 = pure_state(adj.n, half_width)
    if is_global and method != "sparse":
        states = evolve_spectral(adj, omega, rho0, times)
    else:
        gen = build_generator(adj, build_dissipator(adj, dissipator), omega, sparse=True)
        states = evolve_grid(gen, rho0, times)
    probs = populations(states)
    check_light_cone(probs, guard_tol)
    return adj.labels, probs


def simulate_moment_series(
    omega: float,
    times,
    m: int = 2,
    dissipator: str = "global",
    half_width: int | None = None,
    method: str = "auto",
) -> MomentSeries:
    """Empirical central moment of the truncated-line walk on a time grid."""
    x, probs = line_populations(omega, times, dissipator, half_width, method=method)
    vals = np.array([central_moment(p, m, x) for p in probs])
    if m % 2 == 0:
        # round-off can leave tiny negatives near t = 0
        vals = np.where((vals < 0) & (vals > -1e-12), 0.0, vals)
    return MomentSeries(np.asarray(times, dtype=float), vals, m, "expm")


def closed_form_series(omega: float, times) -> MomentSeries:
    t = np.asarray(times, dtype=float)
    return MomentSeries(t, np.array([mu2_closed(omega, s) for s in t]), 2, "analytic_line")


def time_grid(t_min: float, t_max: float, steps: int, spacing: str = "linear") -> np.ndarray:
    if steps < 1:
        raise ValueError("steps must be positive")
    if spacing == "linear":
        return np.linspace(t_min, t_max, steps)
    if spacing == "log":
        if t_min <= 0:
            raise ValueError("log spacing needs t_min > 0")
        return np.geomspace(t_min, t_max, steps)
    raise ValueError(f"unknown spacing {spacing!r}")

