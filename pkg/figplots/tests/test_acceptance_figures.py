"""Figure-pipeline acceptance: presets through the simulator CLI feed every
panel without error, and the detector-grid heatmaps carry a visible
zero-cooling boundary."""

import subprocess
import sys

import pytest

from plot import PlotSpec, render


@pytest.fixture(scope="module")
def preset_csvs(tmp_path_factory):
    outdir = tmp_path_factory.mktemp("csv")
    for args in (["fig2", "--out", str(outdir)],
                 ["fig3", "--out", str(outdir)]):
        proc = subprocess.run(
            [sys.executable, "-m", "fridge_qpc.cli", *args, "--threads", "2"],
            capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
    return {"fig2a": outdir / "fig2a.csv",
            "fig2bc": outdir / "fig2bc.csv",
            "fig3": outdir / "fig3.csv"}


PANEL_SOURCE = {"fig2a": "fig2a", "fig2b": "fig2bc", "fig2c": "fig2bc",
                "fig3b": "fig3", "fig3c": "fig3", "fig3d": "fig3",
                "fig3e": "fig3"}


def test_criterion_12_all_panels(preset_csvs, tmp_path):
    contour_paths = {}
    for panel, source in PANEL_SOURCE.items():
        out = tmp_path / f"{panel}.png"
        info = render(PlotSpec(str(preset_csvs[source]), panel, str(out)))
        assert out.stat().st_size > 0, panel
        if info["zero_contour_paths"] is not None:
            contour_paths[panel] = info["zero_contour_paths"]
    # the cooling boundary exists on every detector-grid heatmap
    assert set(contour_paths) == {"fig3b", "fig3c", "fig3d"}
    assert all(n >= 1 for n in contour_paths.values()), contour_paths
    print("PASS criterion 12: seven panels rendered; zero-cooling contour "
          f"paths {contour_paths}")
