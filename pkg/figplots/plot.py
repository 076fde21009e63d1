#!/usr/bin/env python3
"""Render publication-style panels from fridge-qpc sweep CSV files.

Usage:
    plot.py --panel fig2a --in fig2a.csv --out fig2a.png [--format png|svg]

Panels:
    fig2a   cooling power, hot-lead heat flow and monitor energy flow vs
            measurement strength (line plot, units of gamma*g)
    fig2b   cooling power heatmap over (measurement strength, T_R/T_L)
    fig2c   apparent efficiency heatmap over the same grid
    fig3b   cooling power heatmap over (detector bias, detector temperature),
            with the dashed zero-cooling contour
    fig3c   hybrid coefficient of performance heatmap, zero-cooling contour
    fig3d   charge signal-to-noise ratio heatmap, zero-cooling contour
    fig3e   detector heat/work fuel ratio vs bias, one line per detector
            temperature

The CSV metadata header supplies the lead coupling, tunnel coupling and cold
temperature used for axis normalization.
"""

from __future__ import annotations

import argparse
import csv
import json
import pathlib
import sys
from dataclasses import dataclass

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

FIGSIZE = (5.2, 3.9)
DPI = 150

PANEL_COLUMNS = {
    "fig2a": ["measurement.gamma_m", "j_l", "j_r", "e_dot_m"],
    "fig2b": ["measurement.gamma_m", "leads.t_r", "j_l"],
    "fig2c": ["measurement.gamma_m", "leads.t_r", "eta_app"],
    "fig3b": ["measurement.mu_m", "measurement.t_m", "j_l"],
    "fig3c": ["measurement.mu_m", "measurement.t_m", "eta_hybrid", "j_l"],
    "fig3d": ["measurement.mu_m", "measurement.t_m", "snr", "j_l"],
    "fig3e": ["measurement.mu_m", "measurement.t_m", "xi"],
}


class SchemaError(Exception):
    """The CSV does not carry what the requested panel needs."""


@dataclass(frozen=True)
class PlotSpec:
    input_csv: str
    panel: str
    out_path: str
    format: str = "png"

    def __post_init__(self):
        if self.panel not in PANEL_COLUMNS:
            raise SchemaError(f"unknown panel {self.panel!r}; "
                              f"choose from {sorted(PANEL_COLUMNS)}")
        if self.format not in ("png", "svg"):
            raise SchemaError(f"format must be png or svg, got {self.format!r}")


@dataclass(frozen=True)
class Table:
    meta: dict
    columns: list[str]
    data: dict[str, np.ndarray]

    @property
    def n_rows(self) -> int:
        return 0 if not self.data else len(next(iter(self.data.values())))


def read_table(path: str) -> Table:
    meta: dict = {}
    header: list[str] | None = None
    rows: list[list[str]] = []
    with open(path, newline="") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                if line.startswith("# config: "):
                    meta = json.loads(line[len("# config: "):])
                continue
            if header is None:
                header = next(csv.reader([line]))
            elif line:
                rows.append(next(csv.reader([line])))
    if header is None:
        raise SchemaError("no header row")
    data: dict[str, np.ndarray] = {}
    for j, name in enumerate(header):
        if name == "status":
            data[name] = np.array([r[j] for r in rows], dtype=object)
        else:
            data[name] = np.array([float(r[j]) if r[j] not in ("", None) else np.nan
                                   for r in rows])
    return Table(meta=meta, columns=header, data=data)


def _require(table: Table, panel: str) -> None:
    missing = [c for c in PANEL_COLUMNS[panel] if c not in table.columns]
    if missing:
        raise SchemaError(f"missing columns for {panel}: {', '.join(missing)}")
    if table.n_rows == 0:
        raise SchemaError("no data rows")


def _flow_unit(meta: dict) -> float:
    try:
        return meta["leads"]["gamma"] * meta["dot"]["g"]
    except (KeyError, TypeError):
        return 1.0


def _grid(table: Table, x_name: str, y_name: str, z_name: str):
    """Reassemble a long-format sweep into a (y, x) value grid."""
    x_all, y_all = table.data[x_name], table.data[y_name]
    x = np.unique(x_all)
    y = np.unique(y_all)
    z = np.full((y.size, x.size), np.nan)
    xi = np.searchsorted(x, x_all)
    yi = np.searchsorted(y, y_all)
    z[yi, xi] = table.data[z_name]
    return x, y, z


def _heatmap(ax, x, y, z, *, diverging: bool, logx: bool, logy: bool, label: str):
    if diverging:
        bound = np.nanmax(np.abs(z)) or 1.0
        mesh = ax.pcolormesh(x, y, z, cmap="RdBu_r", vmin=-bound, vmax=bound,
                             shading="nearest")
    else:
        mesh = ax.pcolormesh(x, y, z, cmap="viridis", shading="nearest")
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    plt.colorbar(mesh, ax=ax, label=label)
    return mesh


def _zero_contour(ax, x, y, z) -> int:
    """Draw the dashed zero contour; returns the number of contour paths."""
    cs = ax.contour(x, y, z, levels=[0.0], colors="black",
                    linestyles="dashed", linewidths=1.2)
    # degenerate levels yield a single zero-vertex segment
    return sum(1 for level in cs.allsegs for seg in level if len(seg) >= 2)


def render(spec: PlotSpec) -> dict:
    """Render one panel; returns diagnostics (row count, contour paths)."""
    table = read_table(spec.input_csv)
    _require(table, spec.panel)
    unit = _flow_unit(table.meta)
    info = {"panel": spec.panel, "out": spec.out_path, "n_rows": table.n_rows,
            "zero_contour_paths": None}
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI, layout="constrained")
    try:
        if spec.panel == "fig2a":
            x = table.data["measurement.gamma_m"]
            for column, label, color in (("j_l", r"$J_L$", "tab:blue"),
                                         ("j_r", r"$J_R$", "tab:orange"),
                                         ("e_dot_m", r"$\dot E_M$", "tab:green")):
                ax.plot(x, table.data[column] / unit, label=label, color=color)
            ax.axhline(0.0, color="gray", lw=0.8)
            ax.set_xscale("log")
            ax.set_xlabel(r"measurement strength $\gamma_M / g$")
            ax.set_ylabel(r"flow / $\gamma g$")
            ax.legend()
        elif spec.panel in ("fig2b", "fig2c"):
            t_l = table.meta.get("leads", {}).get("t_l", 1.0)
            z_name = "j_l" if spec.panel == "fig2b" else "eta_app"
            x, y, z = _grid(table, "measurement.gamma_m", "leads.t_r", z_name)
            if spec.panel == "fig2b":
                z = z / unit
                _heatmap(ax, x, y / t_l, z, diverging=True, logx=True,
                         logy=False, label=r"$J_L / \gamma g$")
            else:
                _heatmap(ax, x, y / t_l, z, diverging=False, logx=True,
                         logy=False, label=r"$\eta_\mathrm{app}$")
            ax.set_xlabel(r"$\gamma_M / g$")
            ax.set_ylabel(r"$T_R / T_L$")
        elif spec.panel in ("fig3b", "fig3c", "fig3d"):
            z_name = {"fig3b": "j_l", "fig3c": "eta_hybrid", "fig3d": "snr"}[spec.panel]
            x, y, z = _grid(table, "measurement.mu_m", "measurement.t_m", z_name)
            _, _, j_l = _grid(table, "measurement.mu_m", "measurement.t_m", "j_l")
            if spec.panel == "fig3b":
                z = z / unit
                _heatmap(ax, x, y, z, diverging=True, logx=True, logy=True,
                         label=r"$J_L / \gamma g$")
            else:
                label = r"$\eta$" if spec.panel == "fig3c" else r"SNR $r$"
                _heatmap(ax, x, y, z, diverging=False, logx=True, logy=True,
                         label=label)
            info["zero_contour_paths"] = _zero_contour(ax, x, y, j_l)
            ax.set_xlabel(r"detector bias $\mu_M / g$")
            ax.set_ylabel(r"detector temperature $T_M / g$")
        elif spec.panel == "fig3e":
            x, y, z = _grid(table, "measurement.mu_m", "measurement.t_m", "xi")
            cmap = plt.get_cmap("plasma")
            norm = matplotlib.colors.LogNorm(vmin=y.min(), vmax=y.max())
            for i, t_m in enumerate(y):
                ax.plot(x, z[i], color=cmap(norm(t_m)), lw=1.0)
            ax.axhline(-1.0, color="gray", lw=0.8, ls=":")
            ax.set_xscale("log")
            ax.set_yscale("symlog", linthresh=1.0)
            ax.set_xlabel(r"detector bias $\mu_M / g$")
            ax.set_ylabel(r"fuel ratio $\xi = J_M / P_M$")
            fig.colorbar(matplotlib.cm.ScalarMappable(norm=norm, cmap=cmap),
                         ax=ax, label=r"$T_M / g$")
        fig.savefig(spec.out_path, format=spec.format)
    finally:
        plt.close(fig)
    return info


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        description="Render figure panels from fridge-qpc CSV output")
    parser.add_argument("--panel", required=True, choices=sorted(PANEL_COLUMNS))
    parser.add_argument("--in", dest="input_csv", required=True,
                        help="sweep CSV produced by fridge-qpc")
    parser.add_argument("--out", required=True, help="image output path")
    parser.add_argument("--format", default=None, choices=("png", "svg"),
                        help="image format (default: from --out suffix)")
    args = parser.parse_args(argv)
    fmt = args.format or (pathlib.Path(args.out).suffix.lstrip(".") or "png")
    try:
        info = render(PlotSpec(input_csv=args.input_csv, panel=args.panel,
                               out_path=args.out, format=fmt))
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {info['out']} ({info['n_rows']} rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
