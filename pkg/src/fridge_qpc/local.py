"""Local-regime master equation: closed-form flows and diagnostics.

In the flat-spectral-density (weak inter-dot splitting) regime each lead
couples to its own dot with Fermi factors evaluated at ``epsilon`` and the
charge monitor damps the bare right-dot projector.  The steady state is
small enough to solve in closed form; the resulting flows all scale as g^2
and serve as an analytic oracle for the numeric solver, while the
first-order Fermi-factor spread ``delta f`` estimates the error the local
approximation itself makes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import SignConditionViolated
from .flows import build_flow_report
from .liouvillian import (
    LeadParams,
    assemble_liouvillian,
    fermi_occupancy,
    lead_lindbladian_local,
    measurement_lindbladian_local,
    steady_state,
)
from .model import Basis, DotParams, hamiltonian_matrix


@dataclass(frozen=True)
class LocalFlowReport:
    """Closed-form local flows plus threshold and error diagnostics."""

    j_l: float
    j_r: float
    e_dot_m: float
    a_const: float
    gamma_m_threshold: Optional[float]
    error_scale: float


def _lead_factors(p: DotParams, lead_l: LeadParams, lead_r: LeadParams):
    if lead_l.mu != lead_r.mu:
        raise ValueError("local closed forms assume equal lead potentials")
    f_l = fermi_occupancy(p.epsilon, lead_l.mu, lead_l.temperature)
    f_r = fermi_occupancy(p.epsilon, lead_r.mu, lead_r.temperature)
    down_l = lead_l.gamma * (1.0 - f_l)
    down_r = lead_r.gamma * (1.0 - f_r)
    up = lead_l.gamma * f_l + lead_r.gamma * f_r
    return f_l, f_r, down_l, down_r, down_l + down_r, up


def local_flows_analytic(p: DotParams, lead_l: LeadParams, lead_r: LeadParams,
                         gamma_m: float) -> LocalFlowReport:
    """Closed-form steady-state flows of the local master equation.

    The energy currents j_u, j_d attached to the two leads obey
    j_u + j_d + gamma_m * delta = 0, which makes the first law
    j_l + j_r + e_dot_m = 0 an identity.
    """
    f_l, f_r, down_l, down_r, down, up = _lead_factors(p, lead_l, lead_r)
    g2 = p.g * p.g
    a_const = (g2 * (gamma_m + down) * (down + 2.0 * up)
               / (lead_l.gamma * lead_r.gamma)
               + (1.0 - f_l * f_r) * ((gamma_m + down) ** 2 + 4.0 * p.delta ** 2))
    e_up = p.epsilon + p.delta / 2 - lead_l.mu   # left-dot level offset
    e_dn = p.epsilon - p.delta / 2 - lead_l.mu   # right-dot level offset
    shared = down_l * e_dn + down_r * e_up
    j_u = -(gamma_m * e_up + shared)
    j_d = gamma_m * e_dn + shared
    pref = (f_r - f_l) * g2 / a_const
    return LocalFlowReport(
        j_l=pref * j_u,
        j_r=pref * j_d,
        e_dot_m=pref * gamma_m * p.delta,
        a_const=a_const,
        gamma_m_threshold=_threshold_or_none(p, lead_l, lead_r),
        error_scale=local_error_diagnostic(p, lead_l, lead_r),
    )


def _threshold_or_none(p, lead_l, lead_r):
    try:
        return refrigeration_threshold_local(p, lead_l, lead_r)
    except SignConditionViolated:
        return None


def refrigeration_threshold_local(p: DotParams, lead_l: LeadParams,
                                  lead_r: LeadParams) -> float:
    """Measurement rate at which the cold-lead heat flow changes sign.

    Meaningful only when the detuning and the level-to-potential offset have
    opposite signs; otherwise raises SignConditionViolated.
    """
    offset = p.epsilon - lead_l.mu
    if p.delta * offset >= 0:
        raise SignConditionViolated(
            f"delta ({p.delta}) and epsilon - mu ({offset}) must have opposite signs")
    f_l, f_r, _, _, down, _ = _lead_factors(p, lead_l, lead_r)
    numer = p.delta * (lead_r.gamma * f_r - lead_l.gamma * f_l) - 2.0 * offset * down
    return numer / (p.delta + 2.0 * offset)


def local_error_diagnostic(p: DotParams, lead_l: LeadParams,
                           lead_r: LeadParams) -> float:
    """Leading Fermi-factor spread neglected by the flat-spectrum step.

    Returns max over leads of gamma * (omega / 2T) * f(eps) (1 - f(eps)),
    the first-order change of the occupation across the split levels.
    """
    worst = 0.0
    for lead in (lead_l, lead_r):
        f = fermi_occupancy(p.epsilon, lead.mu, lead.temperature)
        spread = lead.gamma * (p.omega / (2.0 * lead.temperature)) * f * (1.0 - f)
        worst = max(worst, abs(spread))
    return worst


def local_flows_numeric(p: DotParams, lead_l: LeadParams, lead_r: LeadParams,
                        gamma_m: float):
    """Solve the local master equation numerically; independent of the
    closed forms above.  Returns the full flow report."""
    h = hamiltonian_matrix(p, Basis.LOCAL)
    l_left = lead_lindbladian_local(p, lead_l, "L")
    l_right = lead_lindbladian_local(p, lead_r, "R")
    l_meas = measurement_lindbladian_local(gamma_m)
    liouv = assemble_liouvillian(h, [l_left, l_right, l_meas])
    rho = steady_state(liouv)
    return build_flow_report(p=p, lead_l=lead_l, lead_r=lead_r, h=h,
                             l_left=l_left, l_right=l_right, l_meas=l_meas,
                             rho_ss=rho)
