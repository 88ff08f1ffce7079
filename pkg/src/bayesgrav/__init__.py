"""Adaptive Bayesian atom-interferometer gravimetry simulator.

Simulates Mach-Zehnder fringe measurements with finite atom number,
depolarization, and phase noise, and estimates the local gravitational
acceleration with a grid-based Bayesian engine whose interrogation time and
control acceleration adapt between shots.  Closed-form precision laws and a
conventional frequentist baseline are included for validation and comparison.
"""

from .analytic import (
    ScalingPrediction,
    atom_number_ratio,
    frequentist_shot_precision,
    posterior_sigma,
    scaling_law,
)
from .config import RunConfig, config_hash, dump_config, list_presets, load_config
from .frequentist import (
    ConventionalResult,
    FringeFitError,
    FringeScan,
    conventional_estimate,
    fit_fringe,
    pre_estimate,
    scan_fringe,
)
from .harness import (
    CompareRow,
    EstimationTrace,
    SweepRow,
    compare_protocols,
    derive_rng,
    fit_scaling_exponent,
    fit_trace_exponents,
    grid_size_for,
    run_bge,
    run_repetitions,
    run_sweep,
)
from .physics import (
    MICROGAL,
    InterferometerConfig,
    NoiseModel,
    ShotOutcome,
    ideal_probability,
    noisy_probability,
    simulate_shot,
)
from .posterior import (
    Estimate,
    GridPosterior,
    PosteriorCollapseError,
    bayes_update,
    ensemble_likelihood,
    estimate,
    init_uniform,
    regrid,
)
from .schedule import Schedule, build_sequence, chirp_rate, control_g_c

__version__ = "0.1.0"
