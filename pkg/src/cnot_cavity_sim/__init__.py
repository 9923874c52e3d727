"""Simulator of a compact cavity-mediated photonic CNOT gate.

The model couples two polarization-encoded photonic qubits through a single
quantum-dot spin in a double-sided optical microcavity, with a universal
cloner amplifying the control's L branch.  The package exposes the cavity
reflection/transmission coefficients, the staged circuit propagation and its
closed-form equivalent, gate-fidelity averaging under an enumerable family of
comparison conventions, and deterministic parameter sweeps with CSV/PGM/PNG
export.
"""

from __future__ import annotations

from .cavity import (
    CavityCoefficients,
    CavityParams,
    as_coefficients,
    coefficients,
    cold_coefficients,
    hot_coefficients,
)
from .circuit import (
    JointState,
    PipelineTrace,
    closed_form_output,
    pipeline_trace,
    propagate_pipeline,
    success_probability,
)
from .components import (
    ClonerModel,
    ControlState,
    PhaseGateParams,
    SpinState,
    TargetState,
    apply_cloner,
    apply_phase_gate,
    apply_sigma_x_spin,
    cpbs_merge,
    cpbs_route,
    split_bs5050,
)
from .fidelity import (
    DEFAULT_CONVENTION,
    AveragingMethod,
    AveragingSpec,
    ConventionResult,
    FidelityConvention,
    FidelityEstimate,
    IdealVariant,
    Measure,
    Normalization,
    RBranchSign,
    all_conventions,
    average_fidelity,
    convention_search,
    ideal_output,
    input_fidelity,
    state_overlap_fidelity,
)
from .report import render_heatmap
from .sweep import (
    MaxResult,
    Regime,
    SweepConfig,
    SweepGrid,
    axis_points,
    default_config,
    locate_max,
    read_csv,
    regime_classify,
    run_sweep,
    write_csv,
    write_heatmap,
)

__version__ = "0.1.0"

__all__ = [
    "AveragingMethod",
    "AveragingSpec",
    "CavityCoefficients",
    "CavityParams",
    "ClonerModel",
    "ControlState",
    "ConventionResult",
    "DEFAULT_CONVENTION",
    "FidelityConvention",
    "FidelityEstimate",
    "IdealVariant",
    "JointState",
    "MaxResult",
    "Measure",
    "Normalization",
    "PhaseGateParams",
    "PipelineTrace",
    "RBranchSign",
    "Regime",
    "SpinState",
    "SweepConfig",
    "SweepGrid",
    "TargetState",
    "all_conventions",
    "apply_cloner",
    "apply_phase_gate",
    "apply_sigma_x_spin",
    "as_coefficients",
    "average_fidelity",
    "axis_points",
    "closed_form_output",
    "coefficients",
    "cold_coefficients",
    "convention_search",
    "cpbs_merge",
    "cpbs_route",
    "default_config",
    "hot_coefficients",
    "ideal_output",
    "input_fidelity",
    "locate_max",
    "pipeline_trace",
    "propagate_pipeline",
    "read_csv",
    "regime_classify",
    "render_heatmap",
    "run_sweep",
    "split_bs5050",
    "state_overlap_fidelity",
    "success_probability",
    "write_csv",
    "write_heatmap",
    "__version__",
]
