"""CLI: render a named figure preset from a directory of harness outputs.

Each preset corresponds to one simulation preset of the same name and knows
which table family it consumes (trace, sweep, or compare), the axis scales,
and the labels.  Input tables are found inside ``--in`` under the harness's
standard filenames (trace.csv / sweep.csv / compare.csv, .json fallback).
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path

import click

from .figures import FigureSpec, render_comparison, render_robustness, render_scaling
from .schema import SchemaError


@dataclass(frozen=True)
class _Preset:
    family: str  # scaling | robustness | comparison
    xlabel: str
    xscale: str = "linear"
    title: str = ""


_PRECISION = r"precision $\Delta g_{est}$ (m/s$^2$)"
_TTILDE = r"cumulative interrogation time $\tilde{T}$ (s)"

PRESETS: dict[str, _Preset] = {
    "fig2a-linear": _Preset("scaling", _TTILDE, "log", "linear time ramp"),
    "fig2a-exp": _Preset("scaling", _TTILDE, "log", "exponential time ramp"),
    "fig2b": _Preset("scaling", _TTILDE, "log", "linear ramp, capped"),
    "fig2c": _Preset("scaling", _TTILDE, "log", "exponential ramp, capped"),
    "fig2-fixed": _Preset("scaling", _TTILDE, "log", "fixed interrogation time"),
    "figS2-varratio": _Preset("scaling", _TTILDE, "log", "variable-ratio ramp"),
    "fig3-depol": _Preset(
        "robustness", "depolarization strength $p_d$", "linear",
        "robustness to depolarization",
    ),
    "fig3-phase": _Preset(
        "robustness", r"phase noise $\sigma_g$ (m/s$^2$)", "linear",
        "robustness to phase noise",
    ),
    "figS4-atoms": _Preset(
        "robustness", "atom number $R$", "log", "atom-number scaling"
    ),
    "figS6-bragg": _Preset(
        "robustness", "diffraction order $n_B$", "log", "Bragg-order scaling"
    ),
    "fig4-transportable": _Preset(
        "comparison", r"phase noise $\sigma_g$ (m/s$^2$)", "linear",
        "transportable gravimeter",
    ),
    "figS5-fountain": _Preset(
        "comparison", r"phase noise $\sigma_g$ (m/s$^2$)", "linear",
        "fountain gravimeter",
    ),
}

_FAMILY_TABLE = {"scaling": "trace", "robustness": "sweep", "comparison": "compare"}
_RENDERERS = {
    "scaling": render_scaling,
    "robustness": render_robustness,
    "comparison": render_comparison,
}


def _find_table(indir: Path, stem: str) -> Path:
    for suffix in (".csv", ".json"):
        candidate = indir / f"{stem}{suffix}"
        if candidate.exists():
            return candidate
    raise SchemaError(f"{indir}: no {stem}.csv or {stem}.json found")


def build_spec(preset_name: str, indir: Path, out: Path) -> FigureSpec:
    preset = PRESETS[preset_name]
    stem = _FAMILY_TABLE[preset.family]
    table = _find_table(indir, stem)
    summary = indir / "summary.json"
    return FigureSpec(
        inputs={preset_name: table},
        output=out,
        summary=summary if preset.family == "scaling" and summary.exists() else None,
        xscale=preset.xscale,
        yscale="log" if preset.family != "comparison" else "log",
        xlabel=preset.xlabel,
        ylabel=_PRECISION,
        title=preset.title,
    )


@click.command()
@click.argument("figure_preset", type=click.Choice(sorted(PRESETS)))
@click.option(
    "--in", "indir", required=True,
    type=click.Path(exists=True, file_okay=False, path_type=Path),
    help="Directory holding the harness output tables.",
)
@click.option(
    "--out", required=True, type=click.Path(dir_okay=False, path_type=Path),
    help="Output image file (PNG).",
)
def main(figure_preset: str, indir: Path, out: Path):
    """Render FIGURE_PRESET from the tables in --in to the image --out."""
    preset = PRESETS[figure_preset]
    try:
        spec = build_spec(figure_preset, indir, out)
        path = _RENDERERS[preset.family](spec)
    except SchemaError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(f"wrote {path}")


if __name__ == "__main__":
    sys.exit(main())
