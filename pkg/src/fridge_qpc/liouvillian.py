"""Dissipators, Liouvillian assembly and the steady-state solver.

Superoperators act on the column-major (Fortran order) vectorization of
3x3 density matrices, so ``vec(A @ rho @ B) = kron(B.T, A) @ vec(rho)`` and
the full Liouvillian is a 9x9 complex matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Union

import numpy as np

from .errors import NonUniqueSteadyState
from .model import (
    DIM,
    Basis,
    DotParams,
    charge_components,
    hamiltonian_matrix,
    right_charge_local,
)

_EYE = np.eye(DIM, dtype=complex)
# vec indices of the diagonal entries rho_00, rho_11, rho_22
POPULATION_INDICES = (0, 4, 8)
# relative gap below which the second singular value signals a degenerate null space
DEGENERACY_TOL = 1e-10


def vectorize(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvectorize(v: np.ndarray) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(DIM, DIM, order="F")


@dataclass(frozen=True)
class LeadParams:
    """Electron reservoir: chemical potential, temperature and bare rate."""

    mu: float
    temperature: float
    gamma: float

    def __post_init__(self):
        if not self.temperature > 0:
            raise ValueError(f"temperature must be > 0, got {self.temperature}")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")


@dataclass(frozen=True)
class IdealMeasurement:
    """Phenomenological charge monitor with a single strength parameter."""

    gamma_m: float

    def __post_init__(self):
        if self.gamma_m < 0:
            raise ValueError(f"gamma_m must be >= 0, got {self.gamma_m}")


@dataclass(frozen=True)
class Superoperator:
    """A linear map on density matrices, stored as a 9x9 complex matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (DIM * DIM, DIM * DIM):
            raise ValueError(f"expected {DIM*DIM}x{DIM*DIM} matrix, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvectorize(self.matrix @ vectorize(rho))

    def __add__(self, other: "Superoperator") -> "Superoperator":
        return Superoperator(self.matrix + other.matrix)


def fermi_occupancy(energy: float, mu: float, temperature: float) -> float:
    """Fermi-Dirac occupation 1 / (exp((E - mu)/T) + 1).

    Evaluated overflow-free for arbitrarily large |E - mu| / T; saturates
    cleanly to 0.0 / 1.0 once the exponential underflows.
    """
    if not temperature > 0:
        raise ValueError(f"temperature must be > 0, got {temperature}")
    x = (energy - mu) / temperature
    # exp always sees a non-positive argument: no overflow, clean underflow
    if x >= 0:
        e = math.exp(-x)
        return e / (1.0 + e)
    return 1.0 / (1.0 + math.exp(x))


def hole_occupancy(energy: float, mu: float, temperature: float) -> float:
    """``1 - fermi_occupancy`` computed without cancellation."""
    return fermi_occupancy(mu, energy, temperature)


def dissipator(x: np.ndarray) -> Superoperator:
    """Lindblad dissipator rho -> X rho X^dag - {X^dag X, rho} / 2."""
    x = np.asarray(x, dtype=complex)
    xdx = x.conj().T @ x
    m = (np.kron(x.conj(), x)
         - 0.5 * np.kron(_EYE, xdx)
         - 0.5 * np.kron(xdx.T, _EYE))
    return Superoperator(m)


def hamiltonian_superoperator(h: np.ndarray) -> Superoperator:
    """Coherent part -i[H, .] as a superoperator."""
    h = np.asarray(h, dtype=complex)
    return Superoperator(-1j * (np.kron(_EYE, h) - np.kron(h.T, _EYE)))


Side = Literal["L", "R"]

# jump amplitudes <00| c_side |hybrid>: each lead couples to both hybridized
# states, weighted by the mixing angle
def _global_amplitude(p: DotParams, side: Side, branch: int) -> float:
    if side == "L":
        return p.cos_theta if branch == +1 else -p.sin_theta
    if side == "R":
        return p.sin_theta if branch == +1 else p.cos_theta
    raise ValueError(f"side must be 'L' or 'R', got {side!r}")


def lead_lindbladian_global(p: DotParams, lead: LeadParams, side: Side) -> Superoperator:
    """Lead dissipator in the eigenbasis (strong inter-dot coupling regime).

    Each hybridized level exchanges electrons with the lead at the Fermi
    factor of its own transition energy ``epsilon +/- omega/2``.
    """
    total = np.zeros((DIM * DIM, DIM * DIM), dtype=complex)
    for branch, idx in ((+1, 1), (-1, 2)):
        a = np.zeros((DIM, DIM), dtype=complex)
        a[0, idx] = _global_amplitude(p, side, branch)
        f = fermi_occupancy(p.epsilon + branch * p.omega / 2, lead.mu, lead.temperature)
        total += lead.gamma * (1.0 - f) * dissipator(a).matrix
        total += lead.gamma * f * dissipator(a.conj().T).matrix
    return Superoperator(total)


def lead_lindbladian_local(p: DotParams, lead: LeadParams, side: Side) -> Superoperator:
    """Lead dissipator in the local basis (flat-spectral-density regime).

    Jump operators act on the adjacent dot only and the Fermi factor is
    evaluated at ``epsilon``, independent of the splitting ``omega``.
    """
    c = np.zeros((DIM, DIM), dtype=complex)
    if side == "L":
        c[0, 1] = 1.0
    elif side == "R":
        c[0, 2] = 1.0
    else:
        raise ValueError(f"side must be 'L' or 'R', got {side!r}")
    f = fermi_occupancy(p.epsilon, lead.mu, lead.temperature)
    m = (lead.gamma * (1.0 - f) * dissipator(c).matrix
         + lead.gamma * f * dissipator(c.conj().T).matrix)
    return Superoperator(m)


def measurement_lindbladian_ideal(p: DotParams, gamma_m: float) -> Superoperator:
    """Charge-monitor dissipator in the eigenbasis.

    The monitored charge enters through its three frequency components, each
    damped at the same rate ``gamma_m``.
    """
    if gamma_m < 0:
        raise ValueError(f"gamma_m must be >= 0, got {gamma_m}")
    comps = charge_components(p)
    m = gamma_m * (dissipator(comps.n_0).matrix
                   + dissipator(comps.n_plus).matrix
                   + dissipator(comps.n_minus).matrix)
    return Superoperator(m)


def measurement_lindbladian_local(gamma_m: float) -> Superoperator:
    """Charge-monitor dissipator in the local basis: gamma_m D[|01><01|]."""
    if gamma_m < 0:
        raise ValueError(f"gamma_m must be >= 0, got {gamma_m}")
    return Superoperator(gamma_m * dissipator(right_charge_local()).matrix)


def assemble_liouvillian(h: np.ndarray, parts: list[Superoperator]) -> Superoperator:
    """Total generator -i[H, .] + sum(parts); all pieces share H's basis."""
    total = hamiltonian_superoperator(h).matrix.copy()
    for part in parts:
        total += part.matrix
    return Superoperator(total)


def _trace_row() -> np.ndarray:
    row = np.zeros(DIM * DIM, dtype=complex)
    row[list(POPULATION_INDICES)] = 1.0
    return row


def steady_state(liouvillian: Superoperator) -> np.ndarray:
    """Solve L rho = 0 with Tr rho = 1; returns a Hermitian 3x3 matrix.

    The trace-normalization row replaces the most redundant population row
    of L; a full SVD provides both the degeneracy diagnostic and the
    fallback solve when the replaced system is ill-conditioned.

    Raises NonUniqueSteadyState when the numerical null space of L has
    dimension > 1.
    """
    m = liouvillian.matrix
    svals = np.linalg.svd(m, compute_uv=False)
    if svals[-2] < DEGENERACY_TOL * svals[0]:
        raise NonUniqueSteadyState(
            f"second singular value {svals[-2]:.3e} below "
            f"{DEGENERACY_TOL:.0e} * {svals[0]:.3e}")

    # the three population rows sum to zero (trace preservation); drop the
    # smallest-norm one
    pop_rows = list(POPULATION_INDICES)
    norms = [np.linalg.norm(m[i]) for i in pop_rows]
    drop = pop_rows[int(np.argmin(norms))]
    a = m.copy()
    a[drop] = _trace_row()
    b = np.zeros(DIM * DIM, dtype=complex)
    b[drop] = 1.0

    rho = None
    try:
        v = np.linalg.solve(a, b)
        rho = unvectorize(v)
    except np.linalg.LinAlgError:
        pass
    if rho is None or not _residual_ok(m, rho):
        # SVD fallback: null vector of L, renormalized
        _, _, vh = np.linalg.svd(m)
        rho = unvectorize(vh[-1].conj())
        rho = rho / np.trace(rho)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    return rho


def _residual_ok(m: np.ndarray, rho: np.ndarray) -> bool:
    resid = np.max(np.abs(m @ vectorize(rho)))
    scale = np.linalg.norm(m, ord=np.inf)
    return resid < 1e-12 * scale


MeasurementModel = Union[IdealMeasurement, "QpcParams"]  # noqa: F821  (qpc imports this module)
