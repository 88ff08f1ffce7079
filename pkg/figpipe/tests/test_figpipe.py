"""Figure pipeline: schema enforcement, preset rendering, idempotency."""

import json
import shutil

import numpy as np
import pytest
from click.testing import CliRunner

from figpipe import (
    FigureSpec,
    SchemaError,
    read_summary,
    read_sweep,
    read_trace,
    render_robustness,
    render_scaling,
)
from figpipe.cli import PRESETS, main


class TestSchema:
    def test_trace_roundtrip(self, data_dir):
        table = read_trace(data_dir / "trace.csv")
        assert len(table["T_tilde"]) == len(table["dg_est"])
        assert np.all(np.diff(table["T_tilde"]) > 0)

    def test_missing_column_named(self, tmp_path):
        path = tmp_path / "sweep.csv"
        path.write_text("axis_value,mean_error\n0.0,1e-9\n")
        with pytest.raises(SchemaError) as err:
            read_sweep(path)
        assert "error_std" in str(err.value)
        assert "mean_dg" in str(err.value)
        assert "reliable_fraction" in str(err.value)

    def test_empty_table_rejected(self, tmp_path):
        path = tmp_path / "trace.csv"
        path.write_text("step,T_i,T_tilde,g_c,P_e,g_est,dg_est\n")
        with pytest.raises(SchemaError, match="no data rows"):
            read_trace(path)

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(SchemaError, match="does not exist"):
            read_trace(tmp_path / "nope.csv")

    def test_json_table(self, tmp_path):
        path = tmp_path / "trace.json"
        row = dict(step=1, T_i=0.1, T_tilde=0.1, g_c=9.8, P_e=0.5,
                   g_est=9.8, dg_est=1e-8)
        path.write_text(json.dumps([row]))
        table = read_trace(path)
        assert table["dg_est"][0] == 1e-8

    def test_absent_summary_is_empty(self, tmp_path):
        assert read_summary(tmp_path / "summary.json") == {}


class TestPresets:
    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_renders_from_fresh_outputs(self, name, data_dir, tmp_path):
        out = tmp_path / f"{name}.png"
        result = CliRunner().invoke(
            main, [name, "--in", str(data_dir), "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        assert out.exists() and out.stat().st_size > 0

    def test_rendering_is_idempotent(self, data_dir, tmp_path):
        a, b = tmp_path / "a.png", tmp_path / "b.png"
        for out in (a, b):
            result = CliRunner().invoke(
                main, ["fig2c", "--in", str(data_dir), "--out", str(out)]
            )
            assert result.exit_code == 0, result.output
        assert a.read_bytes() == b.read_bytes()

    def test_rendering_is_read_only(self, data_dir, tmp_path):
        before = {
            p.name: p.read_bytes() for p in data_dir.iterdir() if p.is_file()
        }
        result = CliRunner().invoke(
            main,
            ["fig3-depol", "--in", str(data_dir), "--out", str(tmp_path / "f.png")],
        )
        assert result.exit_code == 0, result.output
        after = {p.name: p.read_bytes() for p in data_dir.iterdir() if p.is_file()}
        assert after == before

    def test_empty_trace_errors_without_output(self, tmp_path):
        indir = tmp_path / "in"
        indir.mkdir()
        (indir / "trace.csv").write_text("step,T_i,T_tilde,g_c,P_e,g_est,dg_est\n")
        out = tmp_path / "fig.png"
        result = CliRunner().invoke(
            main, ["fig2b", "--in", str(indir), "--out", str(out)]
        )
        assert result.exit_code != 0
        assert "no data rows" in result.output
        assert not out.exists()

    def test_schema_error_reported_by_cli(self, tmp_path):
        indir = tmp_path / "in"
        indir.mkdir()
        (indir / "sweep.csv").write_text("axis_value,mean_error\n0.0,1e-9\n")
        result = CliRunner().invoke(
            main, ["fig3-phase", "--in", str(indir), "--out", str(tmp_path / "f.png")]
        )
        assert result.exit_code != 0
        assert "mean_dg" in result.output

    def test_missing_table_reported(self, tmp_path):
        indir = tmp_path / "empty"
        indir.mkdir()
        result = CliRunner().invoke(
            main, ["fig2c", "--in", str(indir), "--out", str(tmp_path / "f.png")]
        )
        assert result.exit_code != 0
        assert "trace" in result.output


class TestRenderers:
    def test_two_traces_render_differently(self, data_dir, tmp_path):
        # A second labeled series must change the figure relative to one.
        second = tmp_path / "trace2.csv"
        shutil.copy(data_dir / "trace.csv", second)
        one = FigureSpec(
            inputs={"run A": data_dir / "trace.csv"},
            output=tmp_path / "one.png",
            xscale="log", yscale="log",
        )
        two = FigureSpec(
            inputs={"run A": data_dir / "trace.csv", "run B": second},
            output=tmp_path / "two.png",
            xscale="log", yscale="log",
        )
        render_scaling(one)
        render_scaling(two)
        assert (tmp_path / "two.png").read_bytes() != (tmp_path / "one.png").read_bytes()

    def test_guide_line_requires_summary_exponent(self, data_dir, tmp_path):
        # Same trace with and without summary.json exponents: the guide
        # lines (and their legend entries) must only appear with them.
        with_summary = FigureSpec(
            inputs={"run": data_dir / "trace.csv"},
            output=tmp_path / "with.png",
            summary=data_dir / "summary.json",
            xscale="log", yscale="log",
        )
        without = FigureSpec(
            inputs={"run": data_dir / "trace.csv"},
            output=tmp_path / "without.png",
            xscale="log", yscale="log",
        )
        render_scaling(with_summary)
        render_scaling(without)
        assert (tmp_path / "with.png").read_bytes() != (
            tmp_path / "without.png"
        ).read_bytes()

    def test_unreliable_rows_marked(self, tmp_path):
        header = "axis_value,mean_error,error_std,mean_dg,reliable_fraction\n"
        rows_ok = "0.0,1e-9,1e-10,2e-9,1.0\n1.0,2e-9,1e-10,3e-9,1.0\n"
        rows_bad = "0.0,1e-9,1e-10,2e-9,1.0\n1.0,2e-9,1e-10,3e-9,0.5\n"
        ok, bad = tmp_path / "ok.csv", tmp_path / "bad.csv"
        ok.write_text(header + rows_ok)
        bad.write_text(header + rows_bad)
        out_ok = render_robustness(
            FigureSpec(inputs={"s": ok}, output=tmp_path / "ok.png", yscale="log")
        )
        out_bad = render_robustness(
            FigureSpec(inputs={"s": bad}, output=tmp_path / "bad.png", yscale="log")
        )
        assert out_ok.read_bytes() != out_bad.read_bytes()
