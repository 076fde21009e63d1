"""Point and grid execution with machine-readable CSV/JSON output.

Grid points are independent pure computations; they may be evaluated on a
thread pool and are merged back in deterministic order (axis2 outer, axis1
inner).  A failing point becomes a ``failed:<Reason>`` row instead of
aborting the run.
"""

from __future__ import annotations

import concurrent.futures
import datetime
import io
import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional

from . import __version__
from .config import RunConfig
from .errors import FridgeQpcError
from .flows import FlowReport, build_flow_report
from .liouvillian import (
    IdealMeasurement,
    assemble_liouvillian,
    lead_lindbladian_global,
    measurement_lindbladian_ideal,
    steady_state,
)
from .model import Basis, hamiltonian_matrix
from .noise import (
    NoiseReport,
    current_activity_coefficients,
    regression_generator,
    signal_to_noise,
)
from .qpc import DetectorChannels, RateTable, qpc_lindbladian, qpc_power_and_heat

FLOW_COLUMNS = ("j_l", "j_r", "e_dot_m", "p_m", "j_m", "xi", "eta_app",
                "eta_hybrid", "eta_carnot", "sigma", "first_law_residual")
NOISE_COLUMNS = ("i_qpc", "a_qpc", "s_ii0", "delta_i", "snr")


@dataclass(frozen=True)
class SweepRow:
    status: str
    axis_values: tuple[float, ...]
    values: dict[str, Optional[float]]


def columns_for(cfg: RunConfig) -> list[str]:
    cols = ["status"] + [ax.name for ax in cfg.sweep] + list(FLOW_COLUMNS)
    if cfg.is_qpc:
        cols += list(NOISE_COLUMNS)
    return cols


def _flow_values(report: FlowReport) -> dict[str, Optional[float]]:
    return {
        "j_l": report.j_l, "j_r": report.j_r, "e_dot_m": report.e_dot_m,
        "p_m": report.p_m, "j_m": report.j_m, "xi": report.xi,
        "eta_app": report.eta_app, "eta_hybrid": report.eta_hybrid,
        "eta_carnot": report.eta_carnot, "sigma": report.sigma,
        "first_law_residual": report.first_law_residual,
    }


def _noise_values(report: NoiseReport) -> dict[str, Optional[float]]:
    return {"i_qpc": report.i_ss, "a_qpc": report.a_ss, "s_ii0": report.s_ii_0,
            "delta_i": report.delta_i, "snr": report.snr}


def solve_point(cfg: RunConfig) -> tuple[FlowReport, Optional[NoiseReport]]:
    """Solve one parameter point: flows always, noise for the qpc model."""
    p = cfg.dot
    h = hamiltonian_matrix(p, Basis.EIGEN)
    l_left = lead_lindbladian_global(p, cfg.lead_l, "L")
    l_right = lead_lindbladian_global(p, cfg.lead_r, "R")
    if isinstance(cfg.measurement, IdealMeasurement):
        gamma_m = cfg.measurement.gamma_m
        l_meas = measurement_lindbladian_ideal(p, gamma_m)
        rates = RateTable({0.0: gamma_m, p.omega: gamma_m, -p.omega: gamma_m})
        liouv = assemble_liouvillian(h, [l_left, l_right, l_meas])
        rho = steady_state(liouv)
        report = build_flow_report(p=p, lead_l=cfg.lead_l, lead_r=cfg.lead_r, h=h,
                                   l_left=l_left, l_right=l_right, l_meas=l_meas,
                                   rho_ss=rho, rates=rates)
        return report, None
    q = cfg.measurement
    channels = DetectorChannels(p, q)
    l_meas = qpc_lindbladian(p, q, channels)
    liouv = assemble_liouvillian(h, [l_left, l_right, l_meas])
    rho = steady_state(liouv)
    report = build_flow_report(p=p, lead_l=cfg.lead_l, lead_r=cfg.lead_r, h=h,
                               l_left=l_left, l_right=l_right, l_meas=l_meas,
                               rho_ss=rho, rates=channels.rate_table,
                               detector_flows=qpc_power_and_heat(p, q, rho, channels),
                               t_m=q.t_m)
    coeffs = current_activity_coefficients(p, q, channels)
    pd = regression_generator(liouv)
    noise = signal_to_noise(p, q, pd, coeffs, channels)
    return report, noise


def run_point(cfg: RunConfig, axis_values: tuple[float, ...] = ()) -> SweepRow:
    """One grid point as a result row; failures become failed-status rows."""
    try:
        flow, noise = solve_point(cfg)
    except FridgeQpcError as exc:
        return SweepRow(status=f"failed:{type(exc).__name__}",
                        axis_values=axis_values, values={})
    values = _flow_values(flow)
    if noise is not None:
        values.update(_noise_values(noise))
    return SweepRow(status="ok", axis_values=axis_values, values=values)


def _grid(cfg: RunConfig) -> list[tuple[RunConfig, tuple[float, ...]]]:
    if not cfg.sweep:
        return [(cfg, ())]
    ax1 = cfg.sweep[0]
    if len(cfg.sweep) == 1:
        return [(cfg.with_value(ax1.name, float(v)), (float(v),))
                for v in ax1.values()]
    ax2 = cfg.sweep[1]
    points = []
    for v2 in ax2.values():          # outer axis
        outer = cfg.with_value(ax2.name, float(v2))
        for v1 in ax1.values():      # inner axis
            points.append((outer.with_value(ax1.name, float(v1)),
                           (float(v1), float(v2))))
    return points


def run_sweep(cfg: RunConfig, threads: int = 1) -> list[SweepRow]:
    """Evaluate the whole grid; row order is deterministic regardless of
    thread count."""
    points = _grid(cfg)
    if threads <= 1:
        return [run_point(c, values) for c, values in points]
    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda cv: run_point(cv[0], cv[1]), points))


def success_fraction(rows: Iterable[SweepRow]) -> float:
    rows = list(rows)
    if not rows:
        return 1.0
    return sum(1 for r in rows if r.status == "ok") / len(rows)


# ---------------------------------------------------------------------------
# serialization

def format_number(x: Optional[float]) -> str:
    """17 significant digits, scientific; empty field for absent values."""
    if x is None:
        return ""
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.16e}"


def write_csv(cfg: RunConfig, rows: list[SweepRow], stream: io.TextIOBase,
              timestamp: Optional[str] = None) -> None:
    cols = columns_for(cfg)
    stamp = timestamp or _utc_now()
    stream.write(f"# fridge-qpc {__version__}\n")
    stream.write(f"# timestamp: {stamp}\n")
    stream.write(f"# config: {json.dumps(cfg.describe(), sort_keys=True)}\n")
    stream.write(",".join(cols) + "\n")
    n_axes = len(cfg.sweep)
    for row in rows:
        cells = [row.status]
        cells += [format_number(v) for v in row.axis_values]
        cells += [format_number(row.values.get(c)) for c in cols[1 + n_axes:]]
        stream.write(",".join(cells) + "\n")


def write_json(cfg: RunConfig, rows: list[SweepRow], stream: io.TextIOBase,
               timestamp: Optional[str] = None) -> None:
    cols = columns_for(cfg)
    n_axes = len(cfg.sweep)

    def encode(v):
        if v is None:
            return None
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v

    doc = {
        "meta": {
            "generator": f"fridge-qpc {__version__}",
            "timestamp": timestamp or _utc_now(),
            "config": cfg.describe(),
        },
        "columns": cols,
        "rows": [
            {"status": row.status,
             **{cols[1 + i]: encode(v) for i, v in enumerate(row.axis_values)},
             **{c: encode(row.values.get(c)) for c in cols[1 + n_axes:]}}
            for row in rows
        ],
    }
    json.dump(doc, stream, indent=2, sort_keys=True)
    stream.write("\n")


def _utc_now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
