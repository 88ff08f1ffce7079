"""Closed-form precision predictions used as oracles and reference curves.

Under mid-fringe locking each shot contributes a Gaussian factor of width
1 / (sqrt(R) n_B k_eff T^2) to the posterior, so the accumulated standard
deviation and its scaling with total interrogation time follow in closed
form for every schedule family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .physics import InterferometerConfig
from .schedule import Schedule, _base_sequence

__all__ = [
    "ScalingPrediction",
    "posterior_sigma",
    "scaling_law",
    "frequentist_shot_precision",
    "atom_number_ratio",
]


@dataclass(frozen=True)
class ScalingPrediction:
    """One power-law regime: sigma = prefactor / (sqrt(R) n_B k_eff) * T~^exponent.

    ``valid_region`` is the (T~_lo, T~_hi) range of total interrogation time
    where the asymptotic form applies.
    """

    exponent: float
    prefactor: float
    valid_region: tuple[float, float]

    def evaluate(self, t_tilde, cfg: InterferometerConfig):
        scale = self.prefactor / (
            math.sqrt(cfg.atom_number) * cfg.diffraction_order * cfg.k_eff
        )
        return scale * np.asarray(t_tilde, dtype=float) ** self.exponent


def posterior_sigma(cfg: InterferometerConfig, times) -> float:
    """Accumulated posterior width after mid-fringe shots at the given times.

    sigma = 1 / (sqrt(R) n_B k_eff sqrt(sum_j T_j^4)).
    """
    t = np.asarray(times, dtype=float)
    if t.size == 0:
        raise ValueError("need at least one interrogation time")
    return 1.0 / (
        math.sqrt(cfg.atom_number)
        * cfg.diffraction_order
        * cfg.k_eff
        * math.sqrt(float(np.sum(t**4)))
    )


def _ramp_prefactor_fit(s: Schedule, exponent: float) -> float:
    """Prefactor matching the closed-form sigma sequence over the late ramp.

    Used for the var_ratio family, whose prefactor has no simple closed
    form: fit sigma * sqrt(R) n k = prefactor * T~^exponent over the last
    ramp steps in log space.
    """
    t = np.asarray(_base_sequence(s), dtype=float)
    ramp = t < s.t_max
    if ramp.sum() < 3:
        ramp = np.ones_like(t, dtype=bool)
    sig = 1.0 / np.sqrt(np.cumsum(t**4))
    t_tilde = np.cumsum(t)
    sel = np.flatnonzero(ramp)[-5:]
    logc = np.log(sig[sel]) - exponent * np.log(t_tilde[sel])
    return float(np.exp(np.mean(logc)))


def scaling_law(s: Schedule, cfg: InterferometerConfig) -> tuple[ScalingPrediction, ScalingPrediction]:
    """Pre-cap and post-cap precision power laws for a schedule.

    Returns ``(ramp, post_cap)``.  The post-cap regime is always the
    standard quantum limit: exponent -0.5 with prefactor T_max^-1.5.
    """
    base = np.asarray(_base_sequence(s), dtype=float)
    t_tilde = np.cumsum(base)
    ramp_mask = base < s.t_max
    if ramp_mask.any():
        ramp_region = (float(t_tilde[ramp_mask][0]), float(t_tilde[ramp_mask][-1]))
    else:
        ramp_region = (float(t_tilde[0]), float(t_tilde[0]))

    if s.kind == "fixed":
        ramp = ScalingPrediction(
            -0.5, s.t_max**-1.5, (float(t_tilde[0]), float(t_tilde[-1]))
        )
    elif s.kind == "linear":
        pref = math.sqrt(5.0) / (s.b**0.75 * 2.0**1.25)
        ramp = ScalingPrediction(-1.25, pref, ramp_region)
    elif s.kind == "exponential":
        a = s.a
        pref = math.sqrt(a**4 - 1.0) / (a - 1.0) ** 2
        ramp = ScalingPrediction(-2.0, pref, ramp_region)
    else:  # var_ratio
        ramp = ScalingPrediction(-2.25, _ramp_prefactor_fit(s, -2.25), ramp_region)

    post_cap = ScalingPrediction(
        -0.5, s.t_max**-1.5, (ramp_region[1], float(t_tilde[-1]))
    )
    return ramp, post_cap


def frequentist_shot_precision(cfg: InterferometerConfig, t: float, phi: float) -> float:
    """Single-shot error-propagation precision at fringe phase ``phi``.

    delta_Phi = sqrt((1 - C^2 cos^2 phi) / R) / (C |sin phi|), converted to
    acceleration units by 1 / (n_B k_eff T^2).  Diverges at the fringe
    extrema phi in {0, pi}.
    """
    c = cfg.contrast
    s = math.sin(phi)
    if abs(s) < 1e-12:
        raise ZeroDivisionError(
            f"fringe extremum phi={phi}: slope vanishes, precision diverges"
        )
    dphi = math.sqrt((1.0 - c * c * math.cos(phi) ** 2) / cfg.atom_number) / (c * abs(s))
    return dphi / cfg.phase_scale(t)


def atom_number_ratio(r_1: float, r_2: float) -> float:
    """Precision ratio between runs with atom numbers R_1 and R_2: sqrt(R_2/R_1)."""
    if r_1 < 1 or r_2 < 1:
        raise ValueError("atom numbers must be >= 1")
    return math.sqrt(r_2 / r_1)
