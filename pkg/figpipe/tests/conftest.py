"""Shared fixtures: fresh harness outputs rendered by every figure test.

The tables are produced by the simulation package's public writers at a
deliberately cheap configuration — the pipeline only cares about schema, not
physics scale.
"""

import pytest
from bayesgrav.config import RunConfig
from bayesgrav.harness import (
    compare_protocols,
    run_bge,
    run_sweep,
    fit_trace_exponents,
    write_compare_csv,
    write_summary,
    write_sweep_csv,
    write_trace_csv,
)
from bayesgrav.physics import InterferometerConfig, NoiseModel
from bayesgrav.schedule import Schedule


def cheap_config(**overrides):
    cfg = InterferometerConfig(
        k_eff=1.61e7, atom_number=1_000_000, t_min=2e-3, t_max=0.1
    )
    base = dict(
        interferometer=cfg,
        noise=NoiseModel.zero(),
        schedule=Schedule(kind="exponential", steps=12, t_min=2e-3, t_max=0.1, a=1.4),
        g_true=9.8003,
        prior_center=9.8,
        seed=11,
    )
    base.update(overrides)
    return RunConfig(**base)


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory):
    """One directory holding a fresh trace, sweep, and compare table."""
    out = tmp_path_factory.mktemp("harness-out")
    config = cheap_config()
    trace = run_bge(config)
    write_trace_csv(trace, out / "trace.csv")
    write_summary(
        out / "summary.json",
        config,
        **fit_trace_exponents(trace, config.interferometer.t_max),
    )
    write_sweep_csv(
        run_sweep(config, "noise.p_d", [0.0, 0.2, 0.4], reps=2), out / "sweep.csv"
    )
    write_compare_csv(
        compare_protocols(config, [0.0, 2e-8], reps=2), out / "compare.csv"
    )
    return out
