"""Steady-state energy and heat flows, efficiencies and entropy production.

Sign convention: every flow is counted positive when it enters the dots.
Cooling means j_l > 0 (heat drawn out of the cold left lead).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .liouvillian import LeadParams, Superoperator
from .model import DotParams, number_operator
from .qpc import RateTable, measurement_energy_flow_from_rates

# relative-tolerance floor so zero-flow points do not produce spurious failures
SCALE_FLOOR_FACTOR = 1e-6
ABSENT_TOL = 1e-14


@dataclass(frozen=True)
class FlowReport:
    """All steady-state flows plus derived efficiencies and bounds.

    Optional fields are None when the measurement model does not define
    them (no heat/work split without a microscopic detector) or when their
    defining ratio is degenerate; they serialize as empty CSV fields.
    """

    j_l: float
    j_r: float
    e_dot_m: float
    p_m: float
    j_m: Optional[float]
    j_s: Optional[float]
    j_d: Optional[float]
    eta_app: Optional[float]
    eta_hybrid: Optional[float]
    eta_carnot: float
    xi: Optional[float]
    sigma: Optional[float]
    first_law_residual: float
    scale: float


def flow_scale(j_l: float, j_r: float, e_dot_m: float, gamma: float, g: float) -> float:
    return max(abs(j_l), abs(j_r), abs(e_dot_m), gamma * g * SCALE_FLOOR_FACTOR)


def lead_heat_flow(h: np.ndarray, lead: LeadParams, l_alpha: Superoperator,
                   rho_ss: np.ndarray) -> float:
    """Heat drawn from one lead: Tr{(H - mu N) L_alpha rho}."""
    op = h - lead.mu * number_operator()
    return float(np.real(np.trace(op @ l_alpha.apply(rho_ss))))


def measurement_energy_flow(h: np.ndarray, l_m: Superoperator, rho_ss: np.ndarray,
                            p: DotParams | None = None,
                            rates: RateTable | None = None) -> float:
    """Energy flow from the measurement channel: Tr{H L_M rho}.

    When the dot parameters and the rate table are supplied, the equivalent
    transition-resolved evaluation sum_w w gamma(w) <n_w^dag n_w> is checked
    against the trace form.
    """
    value = float(np.real(np.trace(h @ l_m.apply(rho_ss))))
    if p is not None and rates is not None:
        resolved = measurement_energy_flow_from_rates(p, rates, rho_ss)
        tol = 1e-12 * max(abs(value), abs(resolved), 1.0)
        assert abs(value - resolved) <= tol, (
            f"energy-flow evaluations disagree: {value} vs {resolved}")
    return value


def apparent_efficiency(j_l: float, e_dot_m: float, scale: float) -> Optional[float]:
    """Cooling power over total measurement energy flow; None when the
    denominator is numerically zero."""
    if abs(e_dot_m) < ABSENT_TOL * scale:
        return None
    return j_l / e_dot_m


def carnot_cop(t_l: float, t_r: float) -> float:
    """Carnot coefficient of performance for cooling; +inf at zero bias."""
    if t_r <= t_l:
        return math.inf
    return t_l / (t_r - t_l)


def hybrid_cop(j_l: float, p_m: float, j_m: float, t_r: float,
               t_m: float) -> Optional[float]:
    """Coefficient of performance against the thermodynamically weighted
    work + heat resources; None when no positive resource is consumed."""
    denom = 0.0
    if p_m > 0:
        denom += p_m
    if j_m > 0:
        denom += j_m * (1.0 - t_r / t_m)
    if denom <= 0:
        return None
    return j_l / denom


def entropy_production(j_l: float, j_r: float, j_m: float,
                       t_l: float, t_r: float, t_m: float) -> float:
    """Total entropy production rate of the three-bath machine."""
    if min(t_l, t_r, t_m) <= 0:
        raise ValueError("temperatures must be > 0")
    return -j_l / t_l - j_r / t_r - j_m / t_m


def fuel_ratio(j_m: float, p_m: float, scale: float) -> Optional[float]:
    """Heat-to-work ratio of the detector's inputs; None at zero power."""
    if abs(p_m) < ABSENT_TOL * scale:
        return None
    return j_m / p_m


def build_flow_report(*, p: DotParams, lead_l: LeadParams, lead_r: LeadParams,
                      h: np.ndarray, l_left: Superoperator, l_right: Superoperator,
                      l_meas: Superoperator, rho_ss: np.ndarray,
                      rates: RateTable | None = None,
                      detector_flows: tuple[float, float, float, float] | None = None,
                      t_m: float | None = None) -> FlowReport:
    """Assemble the full flow report of one solved steady state.

    ``detector_flows`` is the (p_m, j_s, j_d, j_m) tuple of a microscopic
    detector; without it the heat/work decomposition is undefined and the
    dependent quantities are reported absent.
    """
    j_l = lead_heat_flow(h, lead_l, l_left, rho_ss)
    j_r = lead_heat_flow(h, lead_r, l_right, rho_ss)
    e_dot_m = measurement_energy_flow(h, l_meas, rho_ss, p=p, rates=rates)
    scale = flow_scale(j_l, j_r, e_dot_m, lead_l.gamma, p.g)
    eta_c = carnot_cop(lead_l.temperature, lead_r.temperature)
    report_kwargs = dict(
        j_l=j_l, j_r=j_r, e_dot_m=e_dot_m,
        eta_app=apparent_efficiency(j_l, e_dot_m, scale),
        eta_carnot=eta_c,
        first_law_residual=j_l + j_r + e_dot_m,
        scale=scale,
    )
    if detector_flows is None:
        return FlowReport(p_m=0.0, j_m=None, j_s=None, j_d=None, eta_hybrid=None,
                          xi=None, sigma=None, **report_kwargs)
    if t_m is None:
        raise ValueError("t_m is required alongside detector_flows")
    p_m, j_s, j_d, j_m = detector_flows
    return FlowReport(
        p_m=p_m, j_m=j_m, j_s=j_s, j_d=j_d,
        eta_hybrid=hybrid_cop(j_l, p_m, j_m, lead_r.temperature, t_m),
        xi=fuel_ratio(j_m, p_m, scale),
        sigma=entropy_production(j_l, j_r, j_m, lead_l.temperature,
                                 lead_r.temperature, t_m),
        **report_kwargs,
    )
