"""Double-quantum-dot model: Hilbert space, Hamiltonian and charge operators.

The dot pair is restricted to the single-electron subspace spanned by
``|00>`` (both dots empty), ``|10>`` (left dot occupied) and ``|01>``
(right dot occupied); strong inter-dot Coulomb repulsion freezes out double
occupancy.  All energies are expressed in units of the inter-dot tunnel
coupling ``g`` with hbar = k_B = e = 1.

Two bases are used throughout:

* local   -- (|00>, |10>, |01>)
* eigen   -- (|00>, |u>, |l>) where |u>, |l> are the hybridized
  single-electron eigenstates with energies ``epsilon +/- Omega/2`` and
  Omega = sqrt(delta^2 + g^2).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

DIM = 3

# index of each state in its basis
IDX_EMPTY, IDX_UPPER, IDX_LOWER = 0, 1, 2
IDX_LEFT, IDX_RIGHT = 1, 2


class Basis(enum.Enum):
    """Basis tag for 3x3 operator representations."""

    LOCAL = "local"
    EIGEN = "eigen"


@dataclass(frozen=True)
class DotParams:
    """Double-dot Hamiltonian parameters, with derived eigenstructure.

    epsilon : average charging energy
    delta   : detuning between the two dot levels
    g       : inter-dot tunnel coupling (> 0; the global energy unit)
    omega   : level splitting sqrt(delta^2 + g^2) of the hybridized pair
    theta   : mixing angle in [0, pi/2), tan(theta) = (omega - delta) / g
    """

    epsilon: float
    delta: float
    g: float = 1.0
    omega: float = field(init=False)
    theta: float = field(init=False)

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError(f"g must be > 0, got {self.g}")
        omega = math.hypot(self.delta, self.g)
        # delta = 0 is the degenerate symmetric dot; fix theta = pi/4 exactly
        theta = math.pi / 4 if self.delta == 0 else math.atan2(omega - self.delta, self.g)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "theta", theta)

    @property
    def cos_theta(self) -> float:
        return math.cos(self.theta)

    @property
    def sin_theta(self) -> float:
        return math.sin(self.theta)


@dataclass(frozen=True)
class ChargeComponents:
    """Frequency components of the right-dot charge in the eigenbasis.

    The monitored charge ``n_R = |01><01|`` decomposes into a static part
    ``n_0`` and two rotating parts ``n_plus`` / ``n_minus`` that raise/lower
    the dot energy by ``omega`` under commutation with the Hamiltonian:
    ``[H, n_plus] = omega * n_plus`` and ``n_minus = n_plus^dagger``.
    """

    n_0: np.ndarray
    n_plus: np.ndarray
    n_minus: np.ndarray


def eigen_decomposition(p: DotParams) -> tuple[float, float, np.ndarray]:
    """Return (omega, theta, U) with U the local -> eigen rotation.

    U is real orthogonal and block diagonal (|00> maps to itself); its rows
    are the eigenvectors, so ``O_eigen = U @ O_local @ U.T``.
    """
    c, s = p.cos_theta, p.sin_theta
    u = np.array([[1.0, 0.0, 0.0],
                  [0.0, c, s],
                  [0.0, -s, c]])
    return p.omega, p.theta, u


def hamiltonian_matrix(p: DotParams, basis: Basis = Basis.EIGEN) -> np.ndarray:
    """Dot Hamiltonian as a 3x3 complex Hermitian matrix in ``basis``."""
    if basis is Basis.EIGEN:
        return np.diag([0.0, p.epsilon + p.omega / 2, p.epsilon - p.omega / 2]).astype(complex)
    h = np.zeros((DIM, DIM), dtype=complex)
    h[IDX_LEFT, IDX_LEFT] = p.epsilon + p.delta / 2
    h[IDX_RIGHT, IDX_RIGHT] = p.epsilon - p.delta / 2
    h[IDX_LEFT, IDX_RIGHT] = h[IDX_RIGHT, IDX_LEFT] = p.g / 2
    return h


def number_operator() -> np.ndarray:
    """Total electron number, diag(0, 1, 1) in either basis."""
    return np.diag([0.0, 1.0, 1.0]).astype(complex)


def right_charge_local() -> np.ndarray:
    """Right-dot charge projector ``|01><01|`` in the local basis."""
    n = np.zeros((DIM, DIM), dtype=complex)
    n[IDX_RIGHT, IDX_RIGHT] = 1.0
    return n


def charge_components(p: DotParams) -> ChargeComponents:
    """Eigenbasis frequency components of the right-dot charge.

    Their sum reconstructs ``n_R`` rotated to the eigenbasis:
    ``n_0 = sin^2(theta) P_u + cos^2(theta) P_l`` on the diagonal and
    ``n_plus = cos(theta) sin(theta) |u><l|`` off the diagonal.
    """
    c, s = p.cos_theta, p.sin_theta
    n_0 = np.diag([0.0, s * s, c * c]).astype(complex)
    n_plus = np.zeros((DIM, DIM), dtype=complex)
    n_plus[IDX_UPPER, IDX_LOWER] = c * s
    return ChargeComponents(n_0=n_0, n_plus=n_plus, n_minus=n_plus.conj().T)
