"""Microscopic tunnel-junction charge detector (quantum point contact).

The detector is a biased single-channel junction whose transmission switches
between ``t0`` (right dot empty) and ``t1`` (right dot occupied).  Source and
drain share the temperature ``t_m``; the drain chemical potential is the
energy reference and the source sits at ``mu_m >= 0``.  Transparencies are
energy independent, so every observable reduces to Fermi-window integrals
evaluated once per (mu_m, t_m) point:

    W+(w) = int dE f_S(E) (1 - f_D(E - w))          forward channel weight
    W-(w) = int dE (1 - f_S(E)) f_D(E + w)          backward channel weight
    E+(w), E-(w)                                     same with (E - mu_m) weight

for transition energies w in {0, +omega, -omega} of the double dot.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import integrate

from .errors import QuadratureFailure
from .liouvillian import Superoperator, dissipator, fermi_occupancy, hole_occupancy
from .model import DotParams, charge_components

QUAD_RELTOL = 1e-9
QUAD_ABSTOL = 1e-14
QUAD_LIMIT = 400
# integration window: this many thermal lengths beyond every Fermi edge
WINDOW_WIDTHS = 45.0


@dataclass(frozen=True)
class QpcParams:
    """Detector transparencies, bias and temperature.

    t0     : transmission with the right dot empty, in (0, 1]
    t1     : transmission with the right dot occupied, in [0, t0]
    mu_m   : source-drain bias (drain fixed at 0), >= 0
    t_m    : common source/drain temperature, > 0
    t_meas : derived coupling transparency (sqrt(t0) - sqrt(t1))^2
    """

    t0: float
    t1: float
    mu_m: float
    t_m: float

    def __post_init__(self):
        if not 0 < self.t0 <= 1:
            raise ValueError(f"t0 must be in (0, 1], got {self.t0}")
        if not 0 <= self.t1 <= self.t0:
            raise ValueError(f"t1 must be in [0, t0], got {self.t1}")
        if self.mu_m < 0:
            raise ValueError(f"mu_m must be >= 0, got {self.mu_m}")
        if not self.t_m > 0:
            raise ValueError(f"t_m must be > 0, got {self.t_m}")

    @property
    def t_meas(self) -> float:
        return (np.sqrt(self.t0) - np.sqrt(self.t1)) ** 2


@dataclass(frozen=True)
class RateTable:
    """Detector-induced damping rate for each dot transition energy."""

    gamma_at: dict[float, float]

    def __getitem__(self, omega: float) -> float:
        return self.gamma_at[omega]


def _quad(fn, lo: float, hi: float, breakpoints, limit: int,
          scale_hint: float) -> float:
    """Adaptive quadrature honoring the package tolerance contract.

    Convergence means the achieved error estimate is below the relative
    tolerance measured against max(|value|, scale_hint); fully cancelling
    integrands would otherwise chase an impossible absolute floor.
    """
    pts = sorted(p for p in set(breakpoints) if lo < p < hi)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        try:
            out = integrate.quad(fn, lo, hi, points=pts or None,
                                 epsabs=QUAD_ABSTOL, epsrel=QUAD_RELTOL,
                                 limit=limit, full_output=1)
        except ValueError as exc:
            raise QuadratureFailure(
                f"integral on [{lo:g}, {hi:g}]: {exc}") from exc
    value, abserr = out[0], out[1]
    if len(out) > 3:  # quadpack stopped short of its own target
        target = max(QUAD_ABSTOL, QUAD_RELTOL * max(abs(value), scale_hint))
        if abserr > target:
            raise QuadratureFailure(
                f"integral on [{lo:g}, {hi:g}] reached error {abserr:.2e} "
                f"(target {target:.2e}) within {limit} subdivisions")
    return value


@dataclass(frozen=True)
class ChannelIntegrals:
    """The four Fermi-window integrals of one transition channel."""

    w_fwd: float
    w_bwd: float
    e_fwd: float
    e_bwd: float

    @property
    def net(self) -> float:
        return self.w_fwd - self.w_bwd

    @property
    def total(self) -> float:
        return self.w_fwd + self.w_bwd


def channel_integrals(q: QpcParams, omega: float, limit: int = QUAD_LIMIT) -> ChannelIntegrals:
    """Adaptive quadrature of the four integrals for transition energy omega.

    Integrands decay exponentially past the Fermi edges; the window extends
    WINDOW_WIDTHS thermal lengths beyond every edge, with breakpoints at the
    edges so the subdivision never straddles a step unresolved.
    """
    mu, t = q.mu_m, q.t_m
    k = WINDOW_WIDTHS * t

    def f_s(e):
        return fermi_occupancy(e, mu, t)

    def h_s(e):
        return hole_occupancy(e, mu, t)

    def f_d(e):
        return fermi_occupancy(e, 0.0, t)

    def h_d(e):
        return hole_occupancy(e, 0.0, t)

    # natural magnitudes of the two integral families (Fermi windows are at
    # most ~(|mu| + |omega| + T) wide and of unit height)
    width = t + abs(mu) + abs(omega)
    w_hint, e_hint = width, width * width

    # forward: source edge at mu, drain-hole edge at omega
    lo, hi = min(mu, omega) - k, max(mu, omega) + k
    w_fwd = _quad(lambda e: f_s(e) * h_d(e - omega), lo, hi, (mu, omega),
                  limit, w_hint)
    e_fwd = _quad(lambda e: (e - mu) * f_s(e) * h_d(e - omega), lo, hi,
                  (mu, omega), limit, e_hint)
    # backward: source-hole edge at mu, drain edge at -omega
    lo, hi = min(mu, -omega) - k, max(mu, -omega) + k
    w_bwd = _quad(lambda e: h_s(e) * f_d(e + omega), lo, hi, (mu, -omega),
                  limit, w_hint)
    e_bwd = _quad(lambda e: (e - mu) * h_s(e) * f_d(e + omega), lo, hi,
                  (mu, -omega), limit, e_hint)
    return ChannelIntegrals(w_fwd=w_fwd, w_bwd=w_bwd, e_fwd=e_fwd, e_bwd=e_bwd)


@dataclass(frozen=True)
class DetectorChannels:
    """All channel integrals of a (dot, detector) pair, computed once.

    Every detector observable (rates, current, power, heat, noise
    coefficients) is an arithmetic combination of these twelve numbers.
    """

    p: DotParams
    q: QpcParams
    quad_limit: int = QUAD_LIMIT
    by_omega: dict[float, ChannelIntegrals] = field(init=False)

    def __post_init__(self):
        om = self.p.omega
        object.__setattr__(self, "by_omega", {
            w: channel_integrals(self.q, w, self.quad_limit) for w in (0.0, om, -om)
        })

    def rate(self, omega: float) -> float:
        return self.q.t_meas * self.by_omega[omega].total

    @cached_property
    def rate_table(self) -> RateTable:
        return RateTable({w: self.rate(w) for w in self.by_omega})

    def channel_weights(self, rho: np.ndarray) -> dict[float, float]:
        """State-dependent transmission weight of each channel.

        Elastic: expectation of (sqrt(t0) - sqrt(t_meas) n_0)^2; inelastic:
        t_meas times the occupation of the departing hybridized level.
        """
        p, q = self.p, self.q
        c2, s2 = p.cos_theta ** 2, p.sin_theta ** 2
        pops = np.real(np.diag(rho))
        n0_mean = s2 * pops[1] + c2 * pops[2]
        n0_sq_mean = s2 ** 2 * pops[1] + c2 ** 2 * pops[2]
        tm = q.t_meas
        a_el = q.t0 - 2.0 * np.sqrt(q.t0 * tm) * n0_mean + tm * n0_sq_mean
        cs2 = c2 * s2
        return {0.0: float(a_el),
                +p.omega: float(tm * cs2 * pops[2]),
                -p.omega: float(tm * cs2 * pops[1])}


def qpc_rate(p: DotParams, q: QpcParams, omega: float) -> float:
    """Detector-induced rate at transition energy omega (standalone)."""
    return q.t_meas * channel_integrals(q, omega).total


def qpc_rate_table(p: DotParams, q: QpcParams) -> RateTable:
    return DetectorChannels(p, q).rate_table


def qpc_lindbladian(p: DotParams, q: QpcParams,
                    channels: DetectorChannels | None = None) -> Superoperator:
    """Measurement dissipator with energy-resolved rates per charge component."""
    ch = channels if channels is not None else DetectorChannels(p, q)
    comps = charge_components(p)
    om = p.omega
    m = (ch.rate(0.0) * dissipator(comps.n_0).matrix
         + ch.rate(om) * dissipator(comps.n_plus).matrix
         + ch.rate(-om) * dissipator(comps.n_minus).matrix)
    return Superoperator(m)


def qpc_current(p: DotParams, q: QpcParams, rho: np.ndarray,
                channels: DetectorChannels | None = None) -> float:
    """Mean charge current through the detector for dot state rho."""
    ch = channels if channels is not None else DetectorChannels(p, q)
    weights = ch.channel_weights(rho)
    return sum(weights[w] * ch.by_omega[w].net for w in ch.by_omega)


def qpc_power_and_heat(p: DotParams, q: QpcParams, rho: np.ndarray,
                       channels: DetectorChannels | None = None
                       ) -> tuple[float, float, float, float]:
    """Electric power and heat flows of the detector: (p_m, j_s, j_d, j_m).

    p_m = mu_m * I is the power injected by the bias source; j_s and j_d are
    the heat flows drawn from source and drain; j_m = j_s + j_d.  Together
    they satisfy j_s + j_d + p_m = sum_w w gamma(w) <n_w^dag n_w>, the energy
    flow delivered to the dots.
    """
    ch = channels if channels is not None else DetectorChannels(p, q)
    weights = ch.channel_weights(rho)
    mu = q.mu_m
    current = sum(weights[w] * ch.by_omega[w].net for w in ch.by_omega)
    p_m = mu * current
    j_s = 0.0
    j_d = 0.0
    for w, ci in ch.by_omega.items():
        a = weights[w]
        j_s += a * (ci.e_fwd - ci.e_bwd)
        # drain-side energies are E - w (forward) and E + w (backward)
        j_d -= a * ((ci.e_fwd + (mu - w) * ci.w_fwd)
                    - (ci.e_bwd + (mu + w) * ci.w_bwd))
    return p_m, j_s, j_d, j_s + j_d


def measurement_energy_flow_from_rates(p: DotParams, rates: RateTable,
                                       rho: np.ndarray) -> float:
    """Energy flow into the dots, sum_w w gamma(w) <n_w^dag n_w>."""
    cs2 = (p.cos_theta * p.sin_theta) ** 2
    pops = np.real(np.diag(rho))
    om = p.omega
    return om * cs2 * (rates[om] * pops[2] - rates[-om] * pops[1])


def calibrate_t1(p: DotParams, t0: float, target_rate: float,
                 mu_m_ref: float, t_m_ref: float) -> float:
    """Root-find t1 in [0, t0] so the elastic rate gamma(0) matches target.

    gamma(0) decreases monotonically in t1 (weaker charge modulation), so a
    sign check brackets the root or reports the target as unreachable.
    """
    from scipy.optimize import brentq

    def excess(t1):
        q = QpcParams(t0=t0, t1=t1, mu_m=mu_m_ref, t_m=t_m_ref)
        return q.t_meas * channel_integrals(q, 0.0).total - target_rate

    hi = excess(0.0)
    if hi < 0:
        raise ValueError(
            f"target rate {target_rate} unreachable: even t1 = 0 gives only "
            f"{hi + target_rate:.4g} at the reference point")
    return float(brentq(excess, 0.0, t0, xtol=1e-15, rtol=1e-14))
