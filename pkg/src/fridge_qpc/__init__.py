"""Steady-state simulator for a continuously monitored double-quantum-dot
refrigerator with a microscopic tunnel-junction charge detector."""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    FridgeQpcError,
    NonUniqueSteadyState,
    NumericalFailure,
    QuadratureFailure,
    SignConditionViolated,
    StructureError,
    UnstableDynamics,
)
from .model import Basis, ChargeComponents, DotParams, charge_components, eigen_decomposition, hamiltonian_matrix
from .liouvillian import (
    IdealMeasurement,
    LeadParams,
    Superoperator,
    assemble_liouvillian,
    dissipator,
    fermi_occupancy,
    lead_lindbladian_global,
    lead_lindbladian_local,
    measurement_lindbladian_ideal,
    measurement_lindbladian_local,
    steady_state,
)
from .flows import FlowReport, build_flow_report
from .qpc import DetectorChannels, QpcParams, RateTable, qpc_current, qpc_lindbladian, qpc_power_and_heat, qpc_rate
from .noise import NoiseReport, PopulationDynamics, current_activity_coefficients, regression_generator, shot_noise_zero_frequency, signal_to_noise
from .local import LocalFlowReport, local_flows_analytic, local_flows_numeric, refrigeration_threshold_local
from .config import RunConfig, parse_config
from .runner import run_point, run_sweep, solve_point

__all__ = [name for name in dir() if not name.startswith("_")]
