"""Interrogation-time schedules and the adaptive control acceleration.

Four schedule families are supported:

* ``fixed``: every measurement at T_max.
* ``linear``: T rises by a constant increment b until it caps at T_max.
* ``exponential``: T rises by a constant ratio a until it caps at T_max.
* ``var_ratio``: T rises by a ratio that itself grows linearly with the
  step index, then caps at T_max.

Fast-ramping schedules can prepend a point-identification step: the first
interrogation time is measured twice with different control accelerations so
the combined posterior keeps a single peak over the initial interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .physics import InterferometerConfig
from .posterior import Estimate

__all__ = [
    "Schedule",
    "build_sequence",
    "control_g_c",
    "chirp_rate",
    "point_identification_pair",
]

_KINDS = ("fixed", "linear", "exponential", "var_ratio")

# Point identification is worth its extra shot when the interrogation time
# ramps quickly; slow ramps disambiguate on their own.
_PI_DEFAULT = {"fixed": False, "linear": False, "exponential": True, "var_ratio": True}


@dataclass(frozen=True)
class Schedule:
    """Rule generating the interrogation-time sequence T_1..T_M.

    ``steps`` is the base sequence length M; point identification appends one
    extra measurement (a duplicate of T_1 as step 2), giving M + 1 in total.
    ``point_identification=None`` picks the family default (on for
    exponential and var_ratio, off for fixed and linear).
    """

    kind: str
    steps: int
    t_min: float
    t_max: float
    b: float | None = None      # linear increment, s
    a: float | None = None      # exponential ratio
    a0: float = 1.25            # var_ratio initial ratio
    d: float = 0.0              # var_ratio per-step ratio increment
    point_identification: bool | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if not 0.0 < self.t_min <= self.t_max:
            raise ValueError(
                f"need 0 < t_min <= t_max, got {self.t_min}, {self.t_max}"
            )
        if self.kind == "linear":
            if self.b is None or self.b <= 0:
                raise ValueError("linear schedule needs increment b > 0")
        if self.kind == "exponential":
            if self.a is None or self.a <= 1:
                raise ValueError("exponential schedule needs ratio a > 1")
        if self.kind == "var_ratio":
            if self.a0 <= 1:
                raise ValueError("var_ratio schedule needs a0 > 1")
            if self.d < 0:
                raise ValueError("var_ratio schedule needs d >= 0")

    @property
    def use_point_identification(self) -> bool:
        if self.point_identification is not None:
            return self.point_identification
        return _PI_DEFAULT[self.kind]

    @property
    def n_measurements(self) -> int:
        return self.steps + (1 if self.use_point_identification else 0)


def _ramp_steps_linear(s: Schedule) -> int:
    """Steps needed to rise from t_min to t_max by increments of b."""
    return math.ceil((s.t_max - s.t_min) / s.b - 1e-12) + 1


def _ramp_steps_exponential(s: Schedule) -> int:
    """Steps needed to rise from t_min to t_max by ratio a."""
    return math.ceil(math.log(s.t_max / s.t_min) / math.log(s.a) - 1e-12) + 1


def _base_sequence(s: Schedule) -> np.ndarray:
    m = s.steps
    if s.kind == "fixed":
        return np.full(m, s.t_max)
    if s.kind == "linear":
        m_b = _ramp_steps_linear(s)
        i = np.arange(1, m + 1)
        t = np.maximum(s.t_min, s.t_max - (m_b - i) * s.b)
        return np.minimum(t, s.t_max)
    if s.kind == "exponential":
        m_a = _ramp_steps_exponential(s)
        i = np.arange(1, m + 1)
        t = np.maximum(s.t_min, s.t_max / s.a ** np.maximum(m_a - i, 0))
        return np.minimum(t, s.t_max)
    # var_ratio: start at t_min, multiply by a ratio growing linearly with
    # the step, cap at t_max.  With point identification prepended this
    # reproduces the published piecewise form (two T_1 steps, then
    # T_i = T_{i-1} [a0 + (i - 3) d]).
    t = np.empty(m)
    t[0] = s.t_min
    for i in range(2, m + 1):
        ratio = s.a0 + (i - 2) * s.d
        t[i - 1] = min(s.t_max, t[i - 2] * ratio)
    return t


def build_sequence(s: Schedule) -> np.ndarray:
    """Generate the interrogation times actually measured, in order.

    The result is nondecreasing, bounded by [t_min, t_max], and has length
    ``steps`` (plus one when point identification duplicates T_1 as the
    second measurement).
    """
    base = _base_sequence(s)
    if s.use_point_identification:
        return np.insert(base, 1, base[0])
    return base


def control_g_c(prev_estimate: float, t_i: float, cfg: InterferometerConfig) -> float:
    """Adaptive control acceleration locking the next shot to mid-fringe.

    Chosen so the fringe phase at the current best estimate is pi/2, the
    steepest-slope operating point.
    """
    return prev_estimate - math.pi / (2.0 * cfg.phase_scale(t_i))


def chirp_rate(g_c: float, cfg: InterferometerConfig) -> float:
    """Laser chirp rate (Hz/s) realising a control acceleration g_c."""
    return g_c * cfg.k_eff / (2.0 * math.pi)


def point_identification_pair(
    s: Schedule, est_after_step1: Estimate, cfg: InterferometerConfig
) -> tuple[float, float]:
    """Second measurement of a point-identification pair: (T_2, g_c^(2)).

    Repeats T_1 with the control recomputed from the step-1 posterior; the
    two likelihoods then share exactly one peak on the initial interval.
    """
    if not s.use_point_identification:
        raise ValueError("schedule has point identification disabled")
    t_1 = float(build_sequence(s)[0])
    return t_1, control_g_c(est_after_step1.g_est, t_1, cfg)
