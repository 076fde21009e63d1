"""Independent reference implementations used only to generate expected
values.  Everything here is built from raw numpy/scipy, bypassing the
package's own operator pipeline."""

from __future__ import annotations

import math

import numpy as np
import scipy.linalg


def fermi(e, mu, t):
    x = (e - mu) / t
    if x >= 0:
        z = math.exp(-min(x, 745.0))
        return z / (1.0 + z)
    z = math.exp(max(x, -745.0))
    return 1.0 / (1.0 + z)


def two_level_eigen(epsilon, delta, g):
    """Brute-force eigen-decomposition of the single-electron 2x2 block.

    Returns (omega, theta) with theta the mixing angle of the upper state.
    """
    h = np.array([[epsilon + delta / 2, g / 2], [g / 2, epsilon - delta / 2]])
    w, v = np.linalg.eigh(h)
    omega = w[1] - w[0]
    upper = v[:, 1]
    if upper[0] < 0:
        upper = -upper
    return omega, math.atan2(upper[1], upper[0])


def pauli_rate_solve(epsilon, delta, g, mu, t_l, t_r, gamma, w_up, w_down):
    """Classical 3-state rate-equation steady state in the eigenbasis.

    States ordered (empty, upper, lower); w_up / w_down are the
    measurement-induced lower->upper / upper->lower swap rates.
    Returns (populations, per-channel net loading rates).
    """
    omega, theta = two_level_eigen(epsilon, delta, g)
    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    e_u, e_l = epsilon + omega / 2, epsilon - omega / 2
    f = {("L", "u"): fermi(e_u, mu, t_l), ("L", "l"): fermi(e_l, mu, t_l),
         ("R", "u"): fermi(e_u, mu, t_r), ("R", "l"): fermi(e_l, mu, t_r)}
    amp = {("L", "u"): c2, ("L", "l"): s2, ("R", "u"): s2, ("R", "l"): c2}
    up_u = gamma * sum(amp[(a, "u")] * f[(a, "u")] for a in "LR")
    dn_u = gamma * sum(amp[(a, "u")] * (1 - f[(a, "u")]) for a in "LR")
    up_l = gamma * sum(amp[(a, "l")] * f[(a, "l")] for a in "LR")
    dn_l = gamma * sum(amp[(a, "l")] * (1 - f[(a, "l")]) for a in "LR")
    # balance equations for (p_u, p_l) with p_0 eliminated
    a = np.array([[-dn_u - up_u - w_down, -up_u + w_up],
                  [-up_l + w_down, -dn_l - up_l - w_up]])
    b = np.array([-up_u, -up_l])
    p_u, p_l = np.linalg.solve(a, b)
    pops = np.array([1.0 - p_u - p_l, p_u, p_l])
    return pops, (omega, theta, f, amp)


def pauli_lead_heat_flow(epsilon, delta, g, mu, temp, gamma, pops, side):
    """Heat flow from one lead out of the rate-equation steady state."""
    omega, theta = two_level_eigen(epsilon, delta, g)
    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    amp = {"u": c2 if side == "L" else s2, "l": s2 if side == "L" else c2}
    flow = 0.0
    for branch, e in (("u", epsilon + omega / 2), ("l", epsilon - omega / 2)):
        f = fermi(e, mu, temp)
        idx = 1 if branch == "u" else 2
        net = gamma * amp[branch] * (f * pops[0] - (1 - f) * pops[idx])
        flow += (e - mu) * net
    return flow


def pauli_measurement_energy_flow(epsilon, delta, g, pops, rate_up, rate_down):
    omega, theta = two_level_eigen(epsilon, delta, g)
    cs2 = (math.cos(theta) * math.sin(theta)) ** 2
    return omega * cs2 * (rate_up * pops[2] - rate_down * pops[1])


def gibbs_state(epsilon, delta, g, mu, temperature):
    """Grand-canonical state over (empty, upper, lower)."""
    omega, _ = two_level_eigen(epsilon, delta, g)
    energies = np.array([0.0, epsilon + omega / 2, epsilon - omega / 2])
    numbers = np.array([0.0, 1.0, 1.0])
    w = np.exp(-(energies - mu * numbers) / temperature)
    return w / w.sum()


def fermi_window_closed_form(mu_m, t_m, omega):
    """Equal-temperature closed forms of the forward/backward weights."""

    def f(x):
        if x == 0.0:
            return t_m
        return x / (-math.expm1(-x / t_m))

    return f(mu_m - omega), f(-mu_m - omega)


def correlation_noise_integral(liouvillian, current_matrix, activity_matrix,
                               rho_ss, epsrel=1e-10):
    """Two-sided zero-frequency noise by matrix-exponential quadrature.

    Integrates the current autocorrelation C(tau) of the full 9x9 generator
    over tau and adds the instantaneous (self-correlation) activity term.
    """
    from scipy.integrate import quad

    vec = rho_ss.reshape(-1, order="F")
    trace_row = np.zeros(9, dtype=complex)
    trace_row[[0, 4, 8]] = 1.0
    jumped = current_matrix @ vec
    i_ss = float(np.real(trace_row @ jumped))
    a_ss = float(np.real(trace_row @ (activity_matrix @ vec)))
    evals = np.linalg.eigvals(liouvillian)
    decay = np.abs(evals.real[np.abs(evals.real) > 1e-12])
    t_max = 60.0 / decay.min()

    def c_ii(tau):
        prop = scipy.linalg.expm(liouvillian * tau)
        return float(np.real(trace_row @ (current_matrix @ (prop @ jumped)))) - i_ss ** 2

    integral, _ = quad(c_ii, 0.0, t_max, epsabs=1e-15, epsrel=epsrel, limit=600)
    return a_ss + 2.0 * integral, i_ss, a_ss


def trace_distance(rho, sigma):
    return 0.5 * np.abs(np.linalg.eigvalsh(rho - sigma)).sum()
