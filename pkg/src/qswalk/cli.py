"""``qswalk`` command-line interface.

Exit codes: 0 success, 2 config error, 3 truncation guard, 4 numerical accuracy.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

import numpy as np

from . import analytic
from .config import ConfigError, load_config
from .errors import (
    FitError,
    NumericalError,
    QuadratureAccuracyError,
    SeriesDivergenceError,
    TruncationError,
)
from .evolution import (
    build_generator,
    check_light_cone,
    evolve_grid,
    evolve_spectral,
    populations,
    pure_state,
    purity,
)
from .lattice import AdjacencySpec, build_dissipator
from .moments import (
    MomentSeries,
    classify_regime,
    closed_form_series,
    fit_alpha,
    simulate_moment_series,
    time_grid,
)

EXIT_OK, EXIT_CONFIG, EXIT_TRUNCATION, EXIT_NUMERICAL = 0, 2, 3, 4
DENSE_MAX_N = 24


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


@contextmanager
def _open_out(path: str):
    if path in ("", "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def write_csv(path: str, header, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    with _open_out(path) as fh:
        fh.write(buf.getvalue())


def _grid(cfg) -> np.ndarray:
    return time_grid(cfg.t_min, cfg.t_max, cfg.steps, cfg.spacing)


def _evolve_states(adj, dissipator, omega, rho0, times, method):
    if method == "auto":
        if dissipator == "global":
            method = "spectral"
        else:
            method = "dense" if adj.n <= DENSE_MAX_N else "sparse"
    if method == "spectral":
        return evolve_spectral(adj, omega, rho0, times)
    gen = build_generator(adj, build_dissipator(adj, dissipator), omega, sparse=(method == "sparse"))
    return evolve_grid(gen, rho0, times)


def cmd_evolve(cfg, out: str, threads: int) -> int:
    adj = AdjacencySpec(cfg.n, cfg.graph)
    times = _grid(cfg)
    rho0 = pure_state(adj.n, adj.index_of(cfg.l))
    states = _evolve_states(adj, cfg.dissipator, cfg.omega, rho0, times, cfg.method)
    probs = populations(states)
    if cfg.graph == "truncated_line":
        check_light_cone(probs, cfg.guard_tol)
    rows = []
    for t, p, rho in zip(times, probs, states):
        pur = purity(rho)
        rows.extend((t, v, pk, pur) for v, pk in zip(adj.labels, p))
    write_csv(out, ["t", "vertex", "probability", "purity"], rows)
    return EXIT_OK


def cmd_analytic(cfg, out: str, threads: int) -> int:
    rows = []
    if cfg.mode == "segment_asymptotic":
        p = analytic.asymptotic_distribution(cfg.n, cfg.l)
        rows = [("inf", k, pk, cfg.mode) for k, pk in zip(range(1, cfg.n + 1), p)]
    else:
        times = _grid(cfg)
        ks = list(range(-cfg.k_max, cfg.k_max + 1))
        nodes = cfg.nodes or None

        def one(t):
            if cfg.mode == "segment":
                return list(zip(range(1, cfg.n + 1), analytic.segment_distribution(cfg.n, cfg.l, cfg.omega, t)))
            if cfg.mode == "line_quadrature":
                return list(zip(ks, analytic.line_distribution_profile(ks, cfg.omega, t, nodes)))
            return [
                (k, analytic.line_distribution_series(k, cfg.omega, t, cfg.tol, cfg.series_t_max))
                for k in ks
            ]

        with ThreadPoolExecutor(max_workers=threads) as pool:
            for t, cells in zip(times, pool.map(one, times)):
                rows.extend((t, k, pk, cfg.mode) for k, pk in cells)
    write_csv(out, ["t", "k", "probability", "method"], rows)
    return EXIT_OK


def _read_series_csv(path: str) -> dict[float | None, MomentSeries]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or not {"t", "mu2"} <= set(reader.fieldnames):
                raise ConfigError("input", f"{path} must have columns t, mu2 (and optionally omega)")
            groups: dict[float | None, list] = {}
            for rec in reader:
                raw = rec.get("omega")
                w = float(raw) if raw else None
                groups.setdefault(w, []).append((float(rec["t"]), float(rec["mu2"])))
    except OSError as exc:
        raise ConfigError("input", f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError("input", f"non-numeric entry in {path}: {exc}") from exc
    series = {}
    for w, pts in groups.items():
        pts.sort()
        t, v = zip(*pts)
        series[w] = MomentSeries(np.array(t), np.array(v), 2, "csv")
    return series


def cmd_alpha(cfg, out: str, threads: int) -> int:
    if cfg.source == "csv":
        cells = _read_series_csv(cfg.input)
        omegas = sorted(cells, key=lambda w: (w is None, w or 0.0))
        producer = cells.__getitem__
    else:
        times = _grid(cfg)
        omegas = list(cfg.omegas)
        hw = cfg.half_width or None
        if cfg.source == "closed_form":
            producer = lambda w: closed_form_series(w, times)  # noqa: E731
        else:
            producer = lambda w: simulate_moment_series(w, times, 2, cfg.dissipator, hw)  # noqa: E731

    window = None
    if not (math.isnan(cfg.window_lo) or math.isnan(cfg.window_hi)):
        window = (cfg.window_lo, cfg.window_hi)

    def one(w):
        series = producer(w)
        try:
            fit = fit_alpha(series, window)
        except FitError as exc:
            return w, None, str(exc)
        return w, fit, None

    rows, failures, summary = [], 0, []
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(one, omegas))
    for w, fit, err in results:
        if fit is None:
            failures += 1
            print(f"warning: omega={fmt(w)}: {err}", file=sys.stderr)
            rows.append((w, math.nan, math.nan, math.nan, math.nan, "nan"))
            continue
        regime = classify_regime(fit.alpha, cfg.regime_tol)
        rows.append((w, fit.alpha, fit.r_squared, fit.window[0], fit.window[1], regime))
        summary.append(f"omega={fmt(w)} alpha={fit.alpha:.4f} {regime}")
    write_csv(out, ["omega", "alpha", "r_squared", "window_lo", "window_hi", "regime"], rows)
    stream = sys.stderr if out in ("", "-") else sys.stdout
    print(f"alpha: {len(rows)} cells, {failures} warnings; " + "; ".join(summary), file=stream)
    return EXIT_OK


def cmd_purity_sweep(cfg, out: str, threads: int) -> int:
    adj = AdjacencySpec(cfg.n, "segment")
    rho0 = pure_state(adj.n, cfg.l - 1)
    omegas = np.linspace(cfg.omega_min, cfg.omega_max, cfg.omega_steps)

    def one(w):
        states = _evolve_states(adj, cfg.dissipator, float(w), rho0, [cfg.t], cfg.method)
        return purity(states[-1])

    with ThreadPoolExecutor(max_workers=threads) as pool:
        values = list(pool.map(one, omegas))
    write_csv(out, ["omega", "purity"], zip(omegas, values))
    if cfg.svg:
        write_purity_svg(cfg.svg, omegas, values, f"n={cfg.n}, t={cfg.t:g}, l={cfg.l}, {cfg.dissipator}")
    return EXIT_OK


def write_purity_svg(path: str, omegas, values, title: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "qswalk"
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(omegas, values, marker="o", ms=3)
    ax.set_xlabel("omega")
    ax.set_ylabel("purity")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


HANDLERS = {
    "evolve": cmd_evolve,
    "analytic": cmd_analytic,
    "alpha": cmd_alpha,
    "purity-sweep": cmd_purity_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="flat TOML file with command keys")
    common.add_argument("--out", metavar="PATH", default="-", help="CSV destination ('-' for stdout)")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="worker threads for sweeps")
    common.add_argument("--seed", type=int, default=None, help="reserved; the dynamics are deterministic")
    common.add_argument(
        "-s", "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
        help="override a config key (repeatable)",
    )
    parser = argparse.ArgumentParser(prog="qswalk", description="Quantum stochastic walks on a line.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("evolve", parents=[common], help="populations and purity over a time grid")
    sub.add_parser("analytic", parents=[common], help="closed-form populations")
    sub.add_parser("alpha", parents=[common], help="fit the scaling exponent of the second moment")
    sub.add_parser("purity-sweep", parents=[common], help="final-state purity against omega")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.threads < 1:
            raise ConfigError("threads", "must be a positive integer")
        cfg = load_config(args.command, args.config, args.overrides)
        return HANDLERS[args.command](cfg, args.out, args.threads)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TruncationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except (NumericalError, SeriesDivergenceError, QuadratureAccuracyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
