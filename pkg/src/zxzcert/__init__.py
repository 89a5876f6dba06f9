"""Certification of photonic cluster-state resources from ``<ZXZ>`` data."""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    direct_bound,
    fidelity_floor,
    le_floor_pair,
    le_floor_segment,
    max_certified_span,
    teleport_floor,
    threshold_z,
    threshold_z_exact,
    wc_lambda,
    wc_z,
)
from .densesim import Ensemble, PureState, TwoQubitState, cluster_state, expectation, wc_state
from .entanglement import concurrence, fully_entangled_fraction, teleport_fidelity
from .errormodel import SourceParams, compare_ranges, correlator_analytic, emit_state
from .errors import (
    DomainError,
    ImpossibleOutcomeError,
    InconsistentCorrelatorsError,
    InsufficientDataError,
    NoWCStateError,
    ResourceError,
    ZXZCertError,
)
from .estimation import ExperimentPlan, estimate_correlator, plan_samples, simulate_clicks
from .localize import AngleVector, OptimizerConfig, maximize_le
from .pauli import PauliString, cluster_generators, compose, decompose, surviving_triplet

__all__ = [
    "__version__",
    "BoundReport",
    "direct_bound",
    "fidelity_floor",
    "le_floor_pair",
    "le_floor_segment",
    "max_certified_span",
    "teleport_floor",
    "threshold_z",
    "threshold_z_exact",
    "wc_lambda",
    "wc_z",
    "Ensemble",
    "PureState",
    "TwoQubitState",
    "cluster_state",
    "expectation",
    "wc_state",
    "concurrence",
    "fully_entangled_fraction",
    "teleport_fidelity",
    "SourceParams",
    "compare_ranges",
    "correlator_analytic",
    "emit_state",
    "DomainError",
    "ImpossibleOutcomeError",
    "InconsistentCorrelatorsError",
    "InsufficientDataError",
    "NoWCStateError",
    "ResourceError",
    "ZXZCertError",
    "ExperimentPlan",
    "estimate_correlator",
    "plan_samples",
    "simulate_clicks",
    "AngleVector",
    "OptimizerConfig",
    "maximize_le",
    "PauliString",
    "cluster_generators",
    "compose",
    "decompose",
    "surviving_triplet",
]
