"""Zero-frequency shot noise of the detector current and the charge SNR.

The hybridized-level populations obey a closed 2-vector equation
``d<P>/dt = A <P> + B`` once the empty-state population is eliminated by
normalization.  Two-time current correlations then follow from the
regression rule, and the zero-frequency noise (two-sided convention,
``s_II(0) = int_-inf^inf dtau S_II(tau)``) has the closed form

    s_II(0) = A_ss - 2 i_vec . A^{-1} (C(0) - I_ss P_ss)

with C(0) the population components of one current superoperator applied to
the steady state.  C(0) is evaluated directly from the jump superoperators;
the conditional-expectation shortcut is ambiguous for a hybridized dot.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StructureError, UnstableDynamics
from .liouvillian import POPULATION_INDICES, Superoperator, vectorize
from .model import DIM, DotParams, charge_components
from .qpc import DetectorChannels, QpcParams, qpc_current

CLOSURE_TOL = 1e-12


@dataclass(frozen=True)
class PopulationDynamics:
    """Affine generator of the hybridized-level populations (p_u, p_l)."""

    a_matrix: np.ndarray
    b_vector: np.ndarray

    def __post_init__(self):
        eigs = np.linalg.eigvals(self.a_matrix)
        if np.any(eigs.real >= 0):
            raise UnstableDynamics(
                f"population generator not strictly relaxing, eigenvalues {eigs}")

    @property
    def steady_populations(self) -> np.ndarray:
        return -np.linalg.solve(self.a_matrix, self.b_vector)


@dataclass(frozen=True)
class NoiseCoefficients:
    """Per-level current and activity rates of the detector.

    ``i_x`` (``a_x``) is the mean current (total jump rate) when the dots sit
    in the empty state (x = 0) or one of the hybridized levels (x = u, l).
    """

    i_0: float
    i_u: float
    i_l: float
    a_0: float
    a_u: float
    a_l: float


@dataclass(frozen=True)
class NoiseReport:
    i_ss: float
    a_ss: float
    s_ii_0: float
    delta_i: float
    snr: float


def current_activity_coefficients(p: DotParams, q: QpcParams,
                                  channels: DetectorChannels | None = None
                                  ) -> NoiseCoefficients:
    """Energy-integrated current/activity rates per dot level.

    The elastic channel carries the level-dependent transmission amplitude;
    each hybridized level additionally feeds one inelastic channel.
    """
    ch = channels if channels is not None else DetectorChannels(p, q)
    om = p.omega
    c2, s2 = p.cos_theta ** 2, p.sin_theta ** 2
    cs2 = c2 * s2
    tm = q.t_meas
    el_u = (np.sqrt(q.t0) * c2 + np.sqrt(q.t1) * s2) ** 2
    el_l = (np.sqrt(q.t0) * s2 + np.sqrt(q.t1) * c2) ** 2
    net0, tot0 = ch.by_omega[0.0].net, ch.by_omega[0.0].total
    return NoiseCoefficients(
        i_0=q.t0 * net0,
        i_u=el_u * net0 + tm * cs2 * ch.by_omega[-om].net,
        i_l=el_l * net0 + tm * cs2 * ch.by_omega[om].net,
        a_0=q.t0 * tot0,
        a_u=el_u * tot0 + tm * cs2 * ch.by_omega[-om].total,
        a_l=el_l * tot0 + tm * cs2 * ch.by_omega[om].total,
    )


def jump_superoperators(p: DotParams, q: QpcParams,
                        channels: DetectorChannels | None = None
                        ) -> tuple[Superoperator, Superoperator]:
    """Current and activity superoperators built from the jump channels.

    Each electron transfer applies a Kraus operator to the dots; weighting
    forward minus (plus) backward transfer rates gives the current
    (activity) map.
    """
    ch = channels if channels is not None else DetectorChannels(p, q)
    comps = charge_components(p)
    tm = np.sqrt(q.t_meas)
    kraus = {
        0.0: np.sqrt(q.t0) * np.eye(DIM, dtype=complex) - tm * comps.n_0,
        +p.omega: tm * comps.n_plus,
        -p.omega: tm * comps.n_minus,
    }
    current = np.zeros((DIM * DIM, DIM * DIM), dtype=complex)
    activity = np.zeros_like(current)
    for w, k in kraus.items():
        sandwich = np.kron(k.conj(), k)
        current += ch.by_omega[w].net * sandwich
        activity += ch.by_omega[w].total * sandwich
    return Superoperator(current), Superoperator(activity)


def regression_generator(liouvillian: Superoperator) -> PopulationDynamics:
    """Extract the closed population dynamics from a full 9x9 generator.

    Valid only when every jump operator connects energy eigenstates, so the
    populations evolve independently of the coherences; otherwise raises
    StructureError.
    """
    m = liouvillian.matrix
    pop = list(POPULATION_INDICES)
    other = [i for i in range(DIM * DIM) if i not in pop]
    coupling = np.max(np.abs(m[np.ix_(pop, other)]))
    if coupling > CLOSURE_TOL * max(np.max(np.abs(m)), 1.0):
        raise StructureError(
            f"population rows couple to coherences (|{coupling:.2e}|); "
            "the regression reduction needs eigenbasis jump operators")
    block = m[np.ix_(pop, pop)].real
    # eliminate p_empty = 1 - p_u - p_l
    a = np.array([[block[1, 1] - block[1, 0], block[1, 2] - block[1, 0]],
                  [block[2, 1] - block[2, 0], block[2, 2] - block[2, 0]]])
    b = np.array([block[1, 0], block[2, 0]])
    return PopulationDynamics(a_matrix=a, b_vector=b)


def shot_noise_zero_frequency(pd: PopulationDynamics, coeffs: NoiseCoefficients,
                              rho_ss: np.ndarray, current_superop: Superoperator
                              ) -> tuple[float, float, float]:
    """Closed-form zero-frequency current noise: (s_ii_0, i_ss, a_ss)."""
    p_ss = pd.steady_populations
    i_vec = np.array([coeffs.i_u - coeffs.i_0, coeffs.i_l - coeffs.i_0])
    a_vec = np.array([coeffs.a_u - coeffs.a_0, coeffs.a_l - coeffs.a_0])
    i_ss = coeffs.i_0 + float(i_vec @ p_ss)
    a_ss = coeffs.a_0 + float(a_vec @ p_ss)
    # population components of I[rho_ss]: initial condition of the
    # regression correlator
    jumped = current_superop.apply(rho_ss)
    c_zero = np.real(np.diag(jumped))[1:]
    v = c_zero - i_ss * p_ss
    s = a_ss - 2.0 * float(i_vec @ np.linalg.solve(pd.a_matrix, v))
    return s, i_ss, a_ss


def conditional_states(p: DotParams) -> tuple[np.ndarray, np.ndarray]:
    """Pure right-dot-occupied / left-dot-occupied states in the eigenbasis."""
    c, s = p.cos_theta, p.sin_theta
    occupied = np.array([0.0, s, c])
    empty = np.array([0.0, c, -s])
    return (np.outer(occupied, occupied).astype(complex),
            np.outer(empty, empty).astype(complex))


def signal_separation(p: DotParams, q: QpcParams,
                      channels: DetectorChannels | None = None) -> float:
    """Current difference between the right dot occupied and empty (the
    worst-case readout contrast: no weight on the empty-dots state)."""
    ch = channels if channels is not None else DetectorChannels(p, q)
    rho_occ, rho_emp = conditional_states(p)
    return qpc_current(p, q, rho_occ, ch) - qpc_current(p, q, rho_emp, ch)


def signal_to_noise(p: DotParams, q: QpcParams, pd: PopulationDynamics,
                    coeffs: NoiseCoefficients,
                    channels: DetectorChannels | None = None) -> NoiseReport:
    """Full detector noise figure at one operating point."""
    ch = channels if channels is not None else DetectorChannels(p, q)
    current_superop, _ = jump_superoperators(p, q, ch)
    p_ss = pd.steady_populations
    rho_ss = np.diag([1.0 - p_ss.sum(), p_ss[0], p_ss[1]]).astype(complex)
    s_ii_0, i_ss, a_ss = shot_noise_zero_frequency(pd, coeffs, rho_ss, current_superop)
    delta_i = signal_separation(p, q, ch)
    snr = delta_i ** 2 / s_ii_0
    return NoiseReport(i_ss=i_ss, a_ss=a_ss, s_ii_0=s_ii_0, delta_i=delta_i, snr=snr)
