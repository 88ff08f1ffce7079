"""Conventional frequentist protocol: fringe scans, cosine fits, and
repeated fixed-time operation.

The pre-estimation stage scans the fringe versus laser chirp rate at three
interrogation times and intersects the fitted fringe minima to resolve the
fringe-order ambiguity.  The measurement stage then operates at T_max with a
fixed mid-fringe control, inverting each shot through the arccos of the
fringe model and reporting sample statistics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .physics import InterferometerConfig, NoiseModel, simulate_shot
from .schedule import control_g_c

__all__ = [
    "FringeScan",
    "FringeFitError",
    "scan_fringe",
    "fit_fringe",
    "pre_estimate",
    "conventional_estimate",
    "ConventionalResult",
]

TWO_PI = 2.0 * math.pi


class FringeFitError(RuntimeError):
    """Raised when a fringe fit is degenerate; carries the residual report."""


@dataclass(frozen=True)
class FringeScan:
    """One fringe scan: observed fractions versus chirp rate at fixed T."""

    t: float
    alpha_values: np.ndarray
    p_e_values: np.ndarray

    def __post_init__(self):
        if len(self.alpha_values) != len(self.p_e_values):
            raise ValueError("alpha and P_e lists must have equal length")
        if len(self.alpha_values) < 8:
            raise ValueError("need at least 8 scan points per fringe")


def scan_fringe(
    cfg: InterferometerConfig,
    g_true: float,
    t: float,
    alpha_grid,
    noise: NoiseModel,
    rng: np.random.Generator,
) -> FringeScan:
    """Simulate one shot per chirp-rate value; g_c = 2 pi alpha / k_eff."""
    alpha = np.asarray(alpha_grid, dtype=float)
    if np.any(np.diff(alpha) <= 0):
        raise ValueError("alpha grid must be sorted ascending")
    p_e = np.array(
        [
            simulate_shot(cfg, g_true, TWO_PI * a / cfg.k_eff, t, noise, rng).p_e
            for a in alpha
        ]
    )
    return FringeScan(t=t, alpha_values=alpha, p_e_values=p_e)


def fit_fringe(
    scan: FringeScan, cfg: InterferometerConfig
) -> tuple[np.ndarray, float]:
    """Least-squares cosine fit of a fringe scan.

    The model P(alpha) = 1/2 [1 - C' cos(n_B (k_eff g' - 2 pi alpha) T^2)] is
    linear in (C' cos psi, C' sin psi) with psi = n_B k_eff g' T^2, so the
    fit is a plain linear solve.  Returns the chirp rates of all fringe
    minima inside the scan window plus the rms fit residual.
    """
    theta = TWO_PI * cfg.diffraction_order * scan.t**2 * scan.alpha_values
    span = theta[-1] - theta[0]
    if span < TWO_PI:
        raise ValueError("scan must span at least one full fringe period")
    design = np.column_stack([np.ones_like(theta), np.cos(theta), np.sin(theta)])
    coef, _, rank, _ = np.linalg.lstsq(design, scan.p_e_values, rcond=None)
    if rank < 3:
        raise FringeFitError(f"degenerate fringe fit (rank {rank})")
    # P = c0 - (A cos theta + B sin theta)/... model: 1/2 - C'/2 cos(psi - theta)
    # => cos-coef = -C'/2 cos psi, sin-coef = -C'/2 sin psi.
    amp = 2.0 * math.hypot(coef[1], coef[2])
    if amp < 1e-12:
        resid = float(np.sqrt(np.mean((design @ coef - scan.p_e_values) ** 2)))
        raise FringeFitError(f"vanishing fringe amplitude (rms residual {resid:.3e})")
    psi = math.atan2(-coef[2], -coef[1])
    residual = float(np.sqrt(np.mean((design @ coef - scan.p_e_values) ** 2)))
    # Minima of P_e sit where cos(psi - theta) = 1, i.e. theta = psi + 2 pi m.
    scale = TWO_PI * cfg.diffraction_order * scan.t**2
    m_lo = math.ceil((theta[0] - psi) / TWO_PI)
    m_hi = math.floor((theta[-1] - psi) / TWO_PI)
    minima = np.array([(psi + TWO_PI * m) / scale for m in range(m_lo, m_hi + 1)])
    return minima, residual


@dataclass(frozen=True)
class PreEstimate:
    """Common-minimum pre-estimation result."""

    alpha_0: float
    g_pre: float
    n_shots: int
    total_time: float
    scans: tuple[FringeScan, ...] = field(repr=False, default=())


def pre_estimate(
    cfg: InterferometerConfig,
    g_true: float,
    noise: NoiseModel,
    rng: np.random.Generator,
    t_values=None,
    points_per_fringe: int = 12,
    n_fringes: float = 3.0,
) -> PreEstimate:
    """Scan three interrogation times and intersect the fitted fringe minima.

    The scans use T in ratio 1:2:4 (ending at T_max by default) and accept a
    common minimum when candidates from every scan agree within 10% of the
    narrowest fringe period.
    """
    if t_values is None:
        t_values = [cfg.t_max / 4.0, cfg.t_max / 2.0, cfg.t_max]
    alpha_center = cfg.k_eff * g_true / TWO_PI
    scans = []
    for t in t_values:
        period = 1.0 / (cfg.diffraction_order * t**2)
        half = 0.5 * n_fringes * period
        n_pts = max(8, int(points_per_fringe * n_fringes))
        grid = np.linspace(alpha_center - half, alpha_center + half, n_pts)
        scans.append(scan_fringe(cfg, g_true, t, grid, noise, rng))
    candidate_sets = [fit_fringe(s, cfg)[0] for s in scans]
    tol = 0.1 / (cfg.diffraction_order * max(t_values) ** 2)
    best = None
    for a in candidate_sets[0]:
        ds = [np.min(np.abs(cands - a)) for cands in candidate_sets[1:]]
        if all(d <= tol for d in ds):
            score = max(ds)
            if best is None or score < best[1]:
                best = (a, score)
    if best is None:
        raise FringeFitError("no common fringe minimum across the three scans")
    # Refine: average the matched minima from all scans.
    matched = [best[0]] + [
        float(cands[np.argmin(np.abs(cands - best[0]))]) for cands in candidate_sets[1:]
    ]
    alpha_0 = float(np.mean(matched))
    n_shots = sum(len(s.alpha_values) for s in scans)
    total_time = sum(len(s.alpha_values) * s.t for s in scans)
    return PreEstimate(
        alpha_0=alpha_0,
        g_pre=TWO_PI * alpha_0 / cfg.k_eff,
        n_shots=n_shots,
        total_time=total_time,
        scans=tuple(scans),
    )


@dataclass(frozen=True)
class ConventionalResult:
    """Outcome of the repeated fixed-time conventional protocol."""

    g_est: float
    dg_est: float
    g_shots: np.ndarray
    clipped_shots: int
    t: float

    @property
    def total_time(self) -> float:
        return self.t * len(self.g_shots)


def conventional_estimate(
    cfg: InterferometerConfig,
    g_true: float,
    noise: NoiseModel,
    m_shots: int,
    rng: np.random.Generator,
    g_ref: float | None = None,
    t: float | None = None,
) -> ConventionalResult:
    """Repeated operation at fixed T with a fixed mid-fringe control.

    ``g_ref`` is the pre-estimate used to place the control (held fixed, not
    adapted); it defaults to the true value, i.e. an exact pre-estimation.
    Each shot is inverted through arccos of the fringe model; shots outside
    the fringe (|1 - 2 P_e| > C, strong-noise regime) are clipped to the
    fringe edge and counted.
    """
    if m_shots < 1:
        raise ValueError("need at least one shot")
    if t is None:
        t = cfg.t_max
    if g_ref is None:
        g_ref = g_true
    g_c = control_g_c(g_ref, t, cfg)
    scale = cfg.phase_scale(t)
    g_hat = np.empty(m_shots)
    clipped = 0
    for i in range(m_shots):
        shot = simulate_shot(cfg, g_true, g_c, t, noise, rng)
        x = (1.0 - 2.0 * shot.p_e) / cfg.contrast
        if abs(x) > 1.0:
            clipped += 1
            x = math.copysign(1.0, x)
        g_hat[i] = g_c + math.acos(x) / scale
    g_est = float(np.mean(g_hat))
    if m_shots > 1:
        dg_est = float(np.std(g_hat, ddof=1) / math.sqrt(m_shots))
    else:
        dg_est = float("nan")
    return ConventionalResult(
        g_est=g_est, dg_est=dg_est, g_shots=g_hat, clipped_shots=clipped, t=t
    )
