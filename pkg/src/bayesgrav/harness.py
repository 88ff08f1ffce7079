"""Experiment orchestration: single runs, Monte Carlo sweeps, scaling fits,
and protocol comparisons, all reproducible from (seed, config).

Randomness is derived from the master seed through numpy SeedSequence spawn
keys indexed by (cell, repetition), so sweep cells are independent streams
with a stable assignment regardless of execution order.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .config import RunConfig, config_hash
from .physics import simulate_shot
from .posterior import (
    DEFAULT_GRID_SIZE,
    PosteriorCollapseError,
    bayes_update,
    estimate,
    init_uniform,
    regrid,
)
from .schedule import build_sequence, control_g_c

__all__ = [
    "EstimationTrace",
    "SweepRow",
    "CompareRow",
    "derive_rng",
    "grid_size_for",
    "run_bge",
    "run_repetitions",
    "run_sweep",
    "fit_scaling_exponent",
    "fit_trace_exponents",
    "compare_protocols",
    "write_trace_csv",
    "write_sweep_csv",
    "write_compare_csv",
    "write_summary",
]

TRACE_COLUMNS = ("step", "T_i", "T_tilde", "g_c", "P_e", "g_est", "dg_est")
SWEEP_COLUMNS = ("axis_value", "mean_error", "error_std", "mean_dg", "reliable_fraction")
COMPARE_COLUMNS = (
    "sigma_g",
    "bge_precision",
    "freq_precision",
    "improvement_ratio",
    "bge_reliable_fraction",
)

# Target grid points per posterior standard deviation; trapezoid moments of a
# Gaussian are exponentially accurate once the spacing is below ~2 sigma.
_POINTS_PER_SIGMA = 4.0
_MAX_GRID = 4_000_000


def derive_rng(seed: int, cell: int = 0, rep: int = 0) -> np.random.Generator:
    """Independent substream for one (sweep cell, repetition) pair."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(cell, rep)))
    )


def grid_size_for(config: RunConfig) -> int:
    """Grid resolution matched to the narrowest posterior the run can reach.

    The grid spans one fringe period while the likelihood width is a factor
    2 pi C sqrt(R) smaller, shrinking a further sqrt(#measurements) as shots
    accumulate at fixed T.  A fixed 2048-point grid cannot resolve that at
    R ~ 5e7, so the resolution scales with the run.
    """
    if config.n_grid is not None:
        return config.n_grid
    cfg = config.interferometer
    n_meas = config.schedule.n_measurements
    needed = (
        _POINTS_PER_SIGMA
        * 2.0
        * math.pi
        * cfg.contrast
        * math.sqrt(cfg.atom_number)
        * math.sqrt(n_meas)
    )
    return int(min(max(DEFAULT_GRID_SIZE, math.ceil(needed)), _MAX_GRID))


@dataclass
class EstimationTrace:
    """Per-measurement record of one adaptive estimation run."""

    step: np.ndarray
    t_i: np.ndarray
    t_tilde: np.ndarray
    g_c: np.ndarray
    p_e: np.ndarray
    g_est: np.ndarray
    dg_est: np.ndarray
    g_true: float
    reliable: bool = True
    config_hash: str = ""

    @property
    def final_error(self) -> float:
        return float(self.g_est[-1] - self.g_true)

    @property
    def final_dg(self) -> float:
        return float(self.dg_est[-1])

    def __len__(self) -> int:
        return len(self.step)


def run_bge(
    config: RunConfig, rng: np.random.Generator | None = None
) -> EstimationTrace:
    """Execute the adaptive Bayesian estimation loop for one run.

    Follows the measure / update / re-center cycle: pick the next
    interrogation time, rebuild the grid when it changed, place the control
    for mid-fringe operation, measure, and apply the Bayes update.  On
    posterior collapse the partial trace is returned flagged unreliable.
    """
    if rng is None:
        rng = derive_rng(config.seed)
    cfg = config.interferometer
    times = build_sequence(config.schedule)
    n_grid = grid_size_for(config)

    post = init_uniform(config.prior_center, float(times[0]), cfg, n_grid)
    g_est = config.prior_center
    est = None
    rows: list[tuple] = []
    reliable = True
    t_prev = float(times[0])
    t_cum = 0.0
    for i, t in enumerate(times, start=1):
        t = float(t)
        if i > 1 and t != t_prev:
            post = regrid(post, est, t, cfg, n_grid)
        g_c = control_g_c(g_est, t, cfg)
        shot = simulate_shot(cfg, config.g_true, g_c, t, config.noise, rng)
        t_cum += t
        try:
            post = bayes_update(post, shot.p_e, g_c, t, cfg)
        except PosteriorCollapseError:
            reliable = False
            break
        est = estimate(post)
        g_est = est.g_est
        rows.append((i, t, t_cum, g_c, shot.p_e, est.g_est, est.dg_est))
        t_prev = t
    if not rows:
        raise PosteriorCollapseError("posterior collapsed on the first measurement")
    cols = list(zip(*rows))
    return EstimationTrace(
        step=np.array(cols[0], dtype=int),
        t_i=np.array(cols[1]),
        t_tilde=np.array(cols[2]),
        g_c=np.array(cols[3]),
        p_e=np.array(cols[4]),
        g_est=np.array(cols[5]),
        dg_est=np.array(cols[6]),
        g_true=config.g_true,
        reliable=reliable,
        config_hash=config_hash(config),
    )


def run_repetitions(
    config: RunConfig, reps: int | None = None, cell: int = 0
) -> list[EstimationTrace]:
    """Independent repetitions of one config on per-repetition substreams."""
    if reps is None:
        reps = config.repetitions
    return [
        run_bge(config, derive_rng(config.seed, cell=cell, rep=r)) for r in range(reps)
    ]


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    mean_error: float
    error_std: float
    mean_dg: float
    reliable_fraction: float


def run_sweep(
    base: RunConfig, axis: str, values, reps: int | None = None
) -> list[SweepRow]:
    """Monte Carlo sweep of one config field.

    Each (value, repetition) cell owns its substream; per value the table
    reports the mean final error, the error fluctuation across repetitions,
    the mean reported precision, and the fraction of reliable runs.
    """
    if reps is None:
        reps = base.repetitions
    rows = []
    for cell, value in enumerate(values):
        config = base.with_param(axis, value)
        traces = run_repetitions(config, reps=reps, cell=cell)
        errors = np.array([tr.final_error for tr in traces])
        dgs = np.array([tr.final_dg for tr in traces])
        ok = np.array([tr.reliable for tr in traces])
        rows.append(
            SweepRow(
                axis_value=float(value),
                mean_error=float(np.mean(errors)),
                error_std=float(np.std(errors, ddof=1)) if reps > 1 else 0.0,
                mean_dg=float(np.mean(dgs)),
                reliable_fraction=float(np.mean(ok)),
            )
        )
    return rows


def fit_scaling_exponent(
    points, region: tuple[float, float]
) -> tuple[float, float, float]:
    """Ordinary least squares on (log T~, log dg) over a T~ region.

    Returns (slope, intercept, r^2).  Requires at least 6 points in region.
    """
    pts = [(t, dg) for t, dg in points if region[0] <= t <= region[1] and dg > 0]
    if len(pts) < 6:
        raise ValueError(
            f"need >= 6 points in region {region}, got {len(pts)}"
        )
    x = np.log(np.array([p[0] for p in pts]))
    y = np.log(np.array([p[1] for p in pts]))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), float(r2)


def fit_trace_exponents(
    trace: EstimationTrace, t_max: float
) -> dict[str, float | None]:
    """Fit the ramp and post-cap power laws of one precision trace.

    The ramp fit uses the second half of the pre-cap steps (skipping the
    ambiguity-resolution transient and early sub-asymptotic steps).  The flat
    region is fitted separately over the second half of the capped steps: the
    information accumulated during the ramp keeps steepening the local slope
    until the capped shots dominate the Fisher sum.
    """
    capped = trace.t_i >= t_max - 1e-15
    pre = np.flatnonzero(~capped)
    out: dict[str, float | None] = {
        "ramp_slope": None,
        "ramp_r2": None,
        "flat_slope": None,
        "flat_r2": None,
    }
    points = list(zip(trace.t_tilde, trace.dg_est))
    if pre.size >= 6:
        start = pre[max(3, pre.size // 2)] if pre.size > 6 else pre[0]
        region = (float(trace.t_tilde[start]), float(trace.t_tilde[pre[-1]]))
        slope, _, r2 = fit_scaling_exponent(points, region)
        out["ramp_slope"], out["ramp_r2"] = slope, r2
    post = np.flatnonzero(capped)
    if post.size >= 10:
        skip = min(max(8, post.size // 2), post.size - 6)
        region = (float(trace.t_tilde[post[skip]]), float(trace.t_tilde[post[-1]]))
        slope, _, r2 = fit_scaling_exponent(points, region)
        out["flat_slope"], out["flat_r2"] = slope, r2
    return out


@dataclass(frozen=True)
class CompareRow:
    sigma_g: float
    bge_precision: float
    freq_precision: float
    improvement_ratio: float
    bge_reliable_fraction: float


def compare_protocols(
    config: RunConfig,
    sigma_g_grid,
    reps: int | None = None,
    include_pre_estimation: bool = False,
) -> list[CompareRow]:
    """Adaptive vs conventional protocol at matched interrogation-time budget.

    The conventional side takes round(T~ / T_max) shots at T_max, where T~
    is the adaptive schedule's total interrogation time.  Per noise value
    the table reports Monte Carlo means of the adaptive posterior precision,
    the conventional sample precision, and their ratio.  With
    ``include_pre_estimation`` the conventional budget is reduced by the
    interrogation time spent scanning three fringes for pre-estimation.
    """
    from .frequentist import conventional_estimate, pre_estimate

    if reps is None:
        reps = config.repetitions
    cfg = config.interferometer
    times = build_sequence(config.schedule)
    budget = float(np.sum(times))
    rows = []
    for cell, sigma in enumerate(sigma_g_grid):
        cconf = config.with_param("noise.sigma_g", sigma)
        traces = run_repetitions(cconf, reps=reps, cell=cell)
        bge_prec = float(np.mean([tr.final_dg for tr in traces]))
        ok = float(np.mean([tr.reliable for tr in traces]))
        freq_vals = []
        for r in range(reps):
            rng = derive_rng(config.seed, cell=10_000 + cell, rep=r)
            g_ref = None
            shot_budget = budget
            if include_pre_estimation:
                pre = pre_estimate(cfg, cconf.g_true, cconf.noise, rng)
                g_ref = pre.g_pre
                shot_budget = max(cfg.t_max, budget - pre.total_time)
            m_shots = max(2, int(round(shot_budget / cfg.t_max)))
            res = conventional_estimate(
                cfg, cconf.g_true, cconf.noise, m_shots, rng, g_ref=g_ref
            )
            freq_vals.append(res.dg_est)
        freq_prec = float(np.mean(freq_vals))
        rows.append(
            CompareRow(
                sigma_g=float(sigma),
                bge_precision=bge_prec,
                freq_precision=freq_prec,
                improvement_ratio=freq_prec / bge_prec,
                bge_reliable_fraction=ok,
            )
        )
    return rows


def _trace_rows(trace: EstimationTrace) -> list[list]:
    return [
        [
            int(trace.step[i]),
            float(trace.t_i[i]),
            float(trace.t_tilde[i]),
            float(trace.g_c[i]),
            float(trace.p_e[i]),
            float(trace.g_est[i]),
            float(trace.dg_est[i]),
        ]
        for i in range(len(trace))
    ]


def _write_table(path: str | Path, columns, rows, fmt: str = "csv") -> None:
    """Write a table as CSV (full-precision scientific notation) or JSON."""
    if fmt == "json":
        payload = [dict(zip(columns, row)) for row in rows]
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        return
    if fmt != "csv":
        raise ValueError(f"unknown output format {fmt!r}")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow(
                [v if isinstance(v, int) else f"{v:.17e}" for v in row]
            )


def write_trace_csv(
    trace: EstimationTrace, path: str | Path, fmt: str = "csv"
) -> None:
    _write_table(path, TRACE_COLUMNS, _trace_rows(trace), fmt)


def write_sweep_csv(rows: list[SweepRow], path: str | Path, fmt: str = "csv") -> None:
    table = [
        [r.axis_value, r.mean_error, r.error_std, r.mean_dg, r.reliable_fraction]
        for r in rows
    ]
    _write_table(path, SWEEP_COLUMNS, table, fmt)


def write_compare_csv(
    rows: list[CompareRow], path: str | Path, fmt: str = "csv"
) -> None:
    table = [
        [
            r.sigma_g,
            r.bge_precision,
            r.freq_precision,
            r.improvement_ratio,
            r.bge_reliable_fraction,
        ]
        for r in rows
    ]
    _write_table(path, COMPARE_COLUMNS, table, fmt)


def write_summary(path: str | Path, config: RunConfig, **extra) -> None:
    payload = {"config_hash": config_hash(config)}
    payload.update(extra)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, default=float)
        fh.write("\n")
