"""Figure renderers for the three harness output families.

Every renderer reads its input files completely before the output file is
opened, so a schema violation never leaves a partial image behind, and input
files are never written to.  Saved PNGs carry no timestamp metadata:
re-rendering the same inputs reproduces the same bytes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schema import read_compare, read_summary, read_sweep, read_trace

__all__ = [
    "FigureSpec",
    "render_scaling",
    "render_robustness",
    "render_comparison",
]

# Keys in summary.json that carry fitted power-law exponents; guide lines are
# drawn only for the keys actually present.
_GUIDE_KEYS = ("ramp_slope", "flat_slope")

_SAVEFIG_KWARGS = dict(dpi=150, metadata={"Software": None})


@dataclass(frozen=True)
class FigureSpec:
    """Declarative description of one figure.

    ``inputs`` maps series labels to table paths; ``summary`` optionally
    points at the run's summary.json (source of fitted guide-line
    exponents).  Scales are per-axis matplotlib scale names.
    """

    inputs: dict[str, Path]
    output: Path
    summary: Path | None = None
    xscale: str = "linear"
    yscale: str = "linear"
    xlabel: str = ""
    ylabel: str = ""
    title: str = ""
    guide_exponents: tuple[float, ...] = field(default_factory=tuple)


def _finish(fig, ax, spec: FigureSpec) -> Path:
    ax.set_xscale(spec.xscale)
    ax.set_yscale(spec.yscale)
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel)
    if spec.title:
        ax.set_title(spec.title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.output, **_SAVEFIG_KWARGS)
    plt.close(fig)
    return spec.output


def render_scaling(spec: FigureSpec) -> Path:
    """Log-log precision vs cumulative interrogation time, one line per trace.

    Fitted exponents found in summary.json are drawn as dashed guide lines
    anchored at each trace's midpoint and annotated with the slope.
    """
    traces = {label: read_trace(path) for label, path in spec.inputs.items()}
    summary = read_summary(spec.summary) if spec.summary else {}
    fig, ax = plt.subplots(figsize=(5, 4))
    for label, table in traces.items():
        ax.plot(table["T_tilde"], table["dg_est"], "o-", ms=3, lw=1, label=label)
    exponents = [
        (key, summary[key]) for key in _GUIDE_KEYS if summary.get(key) is not None
    ]
    for key, slope in exponents:
        for table in traces.values():
            t, dg = table["T_tilde"], table["dg_est"]
            mid = len(t) // 2
            anchor_t, anchor_dg = t[mid], dg[mid]
            span = np.array([t[0], t[-1]])
            ax.plot(
                span,
                anchor_dg * (span / anchor_t) ** slope,
                "--",
                lw=0.8,
                color="gray",
                label=f"{key.replace('_', ' ')}: {slope:+.2f}",
            )
            break  # one guide line per exponent, anchored on the first trace
    return _finish(fig, ax, spec)


def render_robustness(spec: FigureSpec) -> Path:
    """Sweep results with error bars; partially unreliable cells flagged.

    Error bars show the across-repetition error fluctuation (``error_std``);
    any sweep value where some runs collapsed is marked with an open red
    symbol and its reliable fraction.
    """
    fig, ax = plt.subplots(figsize=(5, 4))
    for label, path in spec.inputs.items():
        table = read_sweep(path)
        x = table["axis_value"]
        ax.errorbar(
            x,
            table["mean_dg"],
            yerr=table["error_std"],
            fmt="o-",
            ms=4,
            lw=1,
            capsize=3,
            label=label,
        )
        shaky = table["reliable_fraction"] < 1.0
        if np.any(shaky):
            ax.plot(
                x[shaky],
                table["mean_dg"][shaky],
                "o",
                ms=9,
                mfc="none",
                mec="red",
                label=f"{label}: runs collapsed",
            )
            for xv, yv, frac in zip(
                x[shaky], table["mean_dg"][shaky], table["reliable_fraction"][shaky]
            ):
                ax.annotate(
                    f"{frac:.0%} reliable",
                    (xv, yv),
                    textcoords="offset points",
                    xytext=(5, 5),
                    fontsize=7,
                    color="red",
                )
    return _finish(fig, ax, spec)


def render_comparison(spec: FigureSpec) -> Path:
    """Adaptive vs conventional precision with an improvement-ratio panel."""
    tables = {label: read_compare(path) for label, path in spec.inputs.items()}
    fig, (ax, ax_ratio) = plt.subplots(
        2, 1, figsize=(5, 5.5), sharex=True, height_ratios=[2, 1]
    )
    for label, table in tables.items():
        x = table["sigma_g"]
        prefix = f"{label}: " if len(tables) > 1 else ""
        ax.plot(x, table["bge_precision"], "o-", label=f"{prefix}adaptive")
        ax.plot(x, table["freq_precision"], "s-", label=f"{prefix}conventional")
        ax_ratio.plot(x, table["improvement_ratio"], "d-", color="k", label=prefix or None)
    ax_ratio.axhline(1.0, color="gray", lw=0.8, ls=":")
    ax_ratio.set_xlabel(spec.xlabel)
    ax_ratio.set_ylabel("ratio")
    spec_top = FigureSpec(
        inputs=spec.inputs,
        output=spec.output,
        xscale=spec.xscale,
        yscale=spec.yscale,
        xlabel="",
        ylabel=spec.ylabel,
        title=spec.title,
    )
    return _finish(fig, ax, spec_top)
