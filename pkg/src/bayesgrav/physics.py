"""Mach-Zehnder fringe model and finite-atom-number measurement sampling.

The instrument is reduced to its closed-form fringe signal: an atom ends up
in the excited state with probability

    P = 1/2 * [1 + (-1)^u * C * cos(n_B * (g - g_c) * k_eff * T^2)]

where ``u`` selects the output port, ``C`` is the interferometer contrast,
``n_B`` the Bragg diffraction order (1 for Raman transitions), ``g_c`` the
control acceleration realised through the laser chirp rate, and ``T`` half
the interrogation time.  Depolarization and phase noise enter as per-shot
random draws on top of this signal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MICROGAL",
    "BINOMIAL_CROSSOVER",
    "InterferometerConfig",
    "NoiseModel",
    "ShotOutcome",
    "ideal_probability",
    "noisy_probability",
    "simulate_shot",
]

# 1 microGal expressed in m/s^2; noise strengths are sometimes quoted in
# microGal and converted at the config layer.
MICROGAL = 1e-8

# Above this atom number the shot sampler switches from exact binomial
# sampling to its Gaussian approximation.
BINOMIAL_CROSSOVER = 10_000


@dataclass(frozen=True)
class InterferometerConfig:
    """Instrument constants for one gravimeter.

    Attributes:
        k_eff: effective two-photon wavevector, rad/m.
        atom_number: atoms detected per shot (R).
        contrast: fringe contrast C in (0, 1].
        diffraction_order: Bragg order n_B (1 for Raman).
        t_min: shortest usable interrogation time, s.
        t_max: longest usable interrogation time, s.
    """

    k_eff: float
    atom_number: int
    contrast: float = 1.0
    diffraction_order: int = 1
    t_min: float = 1e-3
    t_max: float = 0.3

    def __post_init__(self):
        if self.k_eff <= 0:
            raise ValueError(f"k_eff must be positive, got {self.k_eff}")
        if self.atom_number < 1:
            raise ValueError(f"atom_number must be >= 1, got {self.atom_number}")
        if not 0.0 < self.contrast <= 1.0:
            raise ValueError(f"contrast must be in (0, 1], got {self.contrast}")
        if self.diffraction_order < 1:
            raise ValueError(
                f"diffraction_order must be >= 1, got {self.diffraction_order}"
            )
        if not 0.0 < self.t_min <= self.t_max:
            raise ValueError(
                f"need 0 < t_min <= t_max, got t_min={self.t_min}, t_max={self.t_max}"
            )

    def phase_scale(self, t: float) -> float:
        """Phase accumulated per unit acceleration: n_B * k_eff * T^2 (rad per m/s^2)."""
        return self.diffraction_order * self.k_eff * t * t

    def fringe_period(self, t: float) -> float:
        """Fringe period in acceleration units: 2*pi / (n_B * k_eff * T^2)."""
        return 2.0 * math.pi / self.phase_scale(t)

    def check_time(self, t: float) -> None:
        if not self.t_min <= t <= self.t_max:
            raise ValueError(
                f"interrogation time {t} outside [{self.t_min}, {self.t_max}]"
            )


@dataclass(frozen=True)
class NoiseModel:
    """Per-shot noise strengths.

    ``p_d`` is the depolarization strength: each shot draws a contrast
    reduction ``|N(0, p_d^2)|``.  ``sigma_g`` is the phase-noise strength in
    m/s^2: each shot draws an acceleration offset ``N(0, sigma_g^2)``.
    A (0, 0) model reproduces the noise-free signal exactly.
    """

    p_d: float = 0.0
    sigma_g: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.p_d <= 1.0:
            raise ValueError(f"p_d must be in [0, 1], got {self.p_d}")
        if self.sigma_g < 0.0:
            raise ValueError(f"sigma_g must be >= 0, got {self.sigma_g}")

    @classmethod
    def zero(cls) -> "NoiseModel":
        return cls(0.0, 0.0)

    def sample(self, rng: np.random.Generator) -> tuple[float, float]:
        """Draw one (depolarization, acceleration offset) pair for a shot."""
        depol = min(abs(rng.normal(0.0, self.p_d)), 1.0)
        offset = rng.normal(0.0, self.sigma_g)
        return depol, offset


@dataclass(frozen=True)
class ShotOutcome:
    """One simulated measurement.

    ``p_true`` is the occupation probability used for sampling (including the
    shot's noise draws); ``p_e`` is the observed excited-state fraction.
    """

    p_true: float
    p_e: float


def ideal_probability(cfg: InterferometerConfig, u: int, g, g_c: float, t: float):
    """Noise-free excited/ground-state probability for branch ``u``.

    Accepts scalar or array ``g`` and broadcasts.  Raises for ``t`` outside
    the instrument's interrogation-time bounds.
    """
    if u not in (0, 1):
        raise ValueError(f"branch u must be 0 or 1, got {u}")
    cfg.check_time(t)
    phase = cfg.phase_scale(t) * (np.asarray(g, dtype=float) - g_c)
    sign = 1.0 if u == 0 else -1.0
    out = 0.5 * (1.0 + sign * cfg.contrast * np.cos(phase))
    if np.isscalar(g) or np.ndim(g) == 0:
        return float(out)
    return out


def noisy_probability(
    cfg: InterferometerConfig,
    u: int,
    g,
    g_c: float,
    t: float,
    noise: NoiseModel,
    rng: np.random.Generator,
):
    """Excited/ground-state probability with one pair of per-shot noise draws.

    With both strengths zero the result equals :func:`ideal_probability`
    exactly (the draws degenerate to 0.0 and drop out of the arithmetic).
    """
    if u not in (0, 1):
        raise ValueError(f"branch u must be 0 or 1, got {u}")
    cfg.check_time(t)
    depol, offset = noise.sample(rng)
    phase = cfg.phase_scale(t) * (np.asarray(g, dtype=float) - g_c + offset)
    sign = 1.0 if u == 0 else -1.0
    out = 0.5 * (1.0 + (1.0 - depol) * sign * cfg.contrast * np.cos(phase))
    if np.isscalar(g) or np.ndim(g) == 0:
        return float(out)
    return out


def simulate_shot(
    cfg: InterferometerConfig,
    g_true: float,
    g_c: float,
    t: float,
    noise: NoiseModel,
    rng: np.random.Generator,
) -> ShotOutcome:
    """Sample one finite-atom-number measurement of the excited-state fraction.

    Uses exact binomial sampling up to ``BINOMIAL_CROSSOVER`` atoms and a
    Gaussian approximation above it.  The observed fraction is clipped to
    [1/(2R), 1 - 1/(2R)] so the downstream likelihood never has zero
    variance.
    """
    p = noisy_probability(cfg, 1, g_true, g_c, t, noise, rng)
    p = min(max(p, 0.0), 1.0)
    r = cfg.atom_number
    if r <= BINOMIAL_CROSSOVER:
        p_e = rng.binomial(r, p) / r
    else:
        p_e = p + rng.normal(0.0, math.sqrt(p * (1.0 - p) / r))
    lo = 1.0 / (2.0 * r)
    p_e = min(max(p_e, lo), 1.0 - lo)
    return ShotOutcome(p_true=p, p_e=p_e)
