"""Run configuration: dataclass, YAML loading, presets, and hashing.

Config files are YAML trees with explicit unit suffixes on every physical
quantity.  All internal values are SI (m/s^2, seconds); microGal inputs are
accepted for noise strengths via the ``*_ugal`` key variants.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, replace
from importlib import resources
from pathlib import Path

import yaml

from .physics import MICROGAL, InterferometerConfig, NoiseModel
from .schedule import Schedule

__all__ = [
    "RunConfig",
    "load_config",
    "dump_config",
    "config_hash",
    "preset_path",
    "list_presets",
]

_PROTOCOLS = ("bge", "frequentist", "both")


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce one experiment."""

    interferometer: InterferometerConfig
    noise: NoiseModel
    schedule: Schedule
    g_true: float
    prior_center: float
    repetitions: int = 1
    seed: int = 0
    protocol: str = "bge"
    # Grid size for the posterior; None picks a resolution matched to the
    # likelihood width (see harness.grid_size_for).
    n_grid: int | None = None
    # Optional experiment axes used by the sweep/compare subcommands.
    sweep_axis: str | None = None
    sweep_values: tuple[float, ...] | None = None
    compare_sigma_g: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.protocol not in _PROTOCOLS:
            raise ValueError(f"protocol must be one of {_PROTOCOLS}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def with_param(self, axis: str, value) -> "RunConfig":
        """Return a copy with one (possibly dotted) field replaced."""
        parts = axis.split(".")
        if len(parts) == 1:
            if not hasattr(self, parts[0]):
                raise KeyError(f"unknown config axis {axis!r}")
            return replace(self, **{parts[0]: value})
        if len(parts) == 2:
            section_name, leaf = parts
            if not hasattr(self, section_name):
                raise KeyError(f"unknown config axis {axis!r}")
            section = getattr(self, section_name)
            if not hasattr(section, leaf):
                raise KeyError(f"unknown config axis {axis!r}")
            if leaf == "atom_number":
                value = int(round(value))
            if leaf == "diffraction_order":
                value = int(round(value))
            return replace(self, **{section_name: replace(section, **{leaf: value})})
        raise KeyError(f"unknown config axis {axis!r}")


def _get_sigma_g(noise: dict) -> float:
    if "sigma_g_ugal" in noise:
        return float(noise["sigma_g_ugal"]) * MICROGAL
    return float(noise.get("sigma_g_m_per_s2", 0.0))


def _parse(tree: dict) -> RunConfig:
    instr = tree["interferometer"]
    cfg = InterferometerConfig(
        k_eff=float(instr["k_eff_rad_per_m"]),
        atom_number=int(instr["atom_number"]),
        contrast=float(instr.get("contrast", 1.0)),
        diffraction_order=int(instr.get("diffraction_order", 1)),
        t_min=float(instr["t_min_s"]),
        t_max=float(instr["t_max_s"]),
    )
    noise_tree = tree.get("noise", {})
    noise = NoiseModel(
        p_d=float(noise_tree.get("p_d", 0.0)), sigma_g=_get_sigma_g(noise_tree)
    )
    sched_tree = tree["schedule"]
    schedule = Schedule(
        kind=sched_tree["kind"],
        steps=int(sched_tree["steps"]),
        t_min=cfg.t_min,
        t_max=cfg.t_max,
        b=float(sched_tree["b_s"]) if "b_s" in sched_tree else None,
        a=float(sched_tree["a"]) if "a" in sched_tree else None,
        a0=float(sched_tree.get("a0", 1.25)),
        d=float(sched_tree.get("d", 0.0)),
        point_identification=sched_tree.get("point_identification"),
    )
    run = tree.get("run", {})
    sweep = tree.get("sweep", {})
    compare = tree.get("compare", {})
    compare_sigma = None
    if "sigma_g_grid_ugal" in compare:
        compare_sigma = tuple(
            float(v) * MICROGAL for v in compare["sigma_g_grid_ugal"]
        )
    elif "sigma_g_grid_m_per_s2" in compare:
        compare_sigma = tuple(float(v) for v in compare["sigma_g_grid_m_per_s2"])
    sweep_values = sweep.get("values")
    if sweep_values is not None:
        sweep_values = tuple(float(v) for v in sweep_values)
        if sweep.get("unit") == "ugal":
            sweep_values = tuple(v * MICROGAL for v in sweep_values)
    return RunConfig(
        interferometer=cfg,
        noise=noise,
        schedule=schedule,
        g_true=float(run.get("g_true_m_per_s2", 9.8)),
        prior_center=float(run.get("prior_center_m_per_s2", 9.8)),
        repetitions=int(run.get("repetitions", 1)),
        seed=int(run.get("seed", 0)),
        protocol=run.get("protocol", "bge"),
        n_grid=int(run["n_grid"]) if "n_grid" in run else None,
        sweep_axis=sweep.get("axis"),
        sweep_values=sweep_values,
        compare_sigma_g=compare_sigma,
    )


def load_config(source: str | Path) -> RunConfig:
    """Load a run config from a YAML file path or a shipped preset name."""
    path = Path(source)
    if not path.exists():
        path = preset_path(str(source))
    with open(path) as fh:
        tree = yaml.safe_load(fh)
    return _parse(tree)


def dump_config(config: RunConfig, path: str | Path) -> None:
    """Write a config back out as YAML (SI units)."""
    cfg, noise, sched = config.interferometer, config.noise, config.schedule
    tree = {
        "interferometer": {
            "k_eff_rad_per_m": cfg.k_eff,
            "atom_number": cfg.atom_number,
            "contrast": cfg.contrast,
            "diffraction_order": cfg.diffraction_order,
            "t_min_s": cfg.t_min,
            "t_max_s": cfg.t_max,
        },
        "noise": {"p_d": noise.p_d, "sigma_g_m_per_s2": noise.sigma_g},
        "schedule": {
            k: v
            for k, v in {
                "kind": sched.kind,
                "steps": sched.steps,
                "b_s": sched.b,
                "a": sched.a,
                "a0": sched.a0,
                "d": sched.d,
                "point_identification": sched.point_identification,
            }.items()
            if v is not None
        },
        "run": {
            "g_true_m_per_s2": config.g_true,
            "prior_center_m_per_s2": config.prior_center,
            "repetitions": config.repetitions,
            "seed": config.seed,
            "protocol": config.protocol,
        },
    }
    if config.n_grid is not None:
        tree["run"]["n_grid"] = config.n_grid
    if config.sweep_axis is not None:
        tree["sweep"] = {"axis": config.sweep_axis, "values": list(config.sweep_values)}
    if config.compare_sigma_g is not None:
        tree["compare"] = {"sigma_g_grid_m_per_s2": list(config.compare_sigma_g)}
    with open(path, "w") as fh:
        yaml.safe_dump(tree, fh, sort_keys=False)


def config_hash(config: RunConfig) -> str:
    """Stable hash of the full configuration, embedded in every output file."""
    blob = json.dumps(asdict(config), sort_keys=True, default=float)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def preset_path(name: str) -> Path:
    """Path of a shipped preset config (name with or without .yaml)."""
    if not name.endswith(".yaml"):
        name = name + ".yaml"
    root = resources.files("bayesgrav").joinpath("presets", name)
    path = Path(str(root))
    if not path.exists():
        raise FileNotFoundError(
            f"no preset {name!r}; available: {', '.join(list_presets())}"
        )
    return path


def list_presets() -> list[str]:
    root = Path(str(resources.files("bayesgrav").joinpath("presets")))
    return sorted(p.stem for p in root.glob("*.yaml"))
