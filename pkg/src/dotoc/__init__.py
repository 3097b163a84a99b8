"""Exact simulation of information scrambling in dissipative spin chains.

Dense Lindblad / adjoint-Lindblad evolution of a chaotic Ising chain
(N <= 12 spins), dissipative out-of-time-ordered correlators measured via a
control-qubit protocol, the leak-corrected OTOC, Pauli-weight diagnostics,
light-cone width extraction with power-law fits, and numerical checks of a
corrected Lieb-Robinson bound.
"""

__version__ = "0.1.0"

from .model import ChannelSpec, ModelSpec, build_hamiltonian, build_lindblad_ops
from .paulis import PauliString, pauli_matrix, embed_site_operator, pauli_decompose
from .linalg import NormReport, operator_norm, frobenius_norm_normalized, norm_report
from .evolution import (
    GeneratorSpec,
    IntegratorConfig,
    lindblad_rhs,
    adjoint_rhs,
    evolve,
    evolve_truncated,
)
from .otoc import OtocPoint, HeatmapSeries, otoc_closed_form, otoc_protocol, otoc_heatmap
from .analysis import (
    WeightProfile,
    LightconeCalibration,
    PowerLawFit,
    weight_profile,
    calibrate_lightcone,
    lightcone_width,
    powerlaw_fit,
    lr_commutator_series,
    propagator_difference_check,
    quasilocality_check,
    proposition_bound,
)
from .config import SimConfig, parse_config

__all__ = [
    "ChannelSpec",
    "ModelSpec",
    "build_hamiltonian",
    "build_lindblad_ops",
    "PauliString",
    "pauli_matrix",
    "embed_site_operator",
    "pauli_decompose",
    "NormReport",
    "operator_norm",
    "frobenius_norm_normalized",
    "norm_report",
    "GeneratorSpec",
    "IntegratorConfig",
    "lindblad_rhs",
    "adjoint_rhs",
    "evolve",
    "evolve_truncated",
    "OtocPoint",
    "HeatmapSeries",
    "otoc_closed_form",
    "otoc_protocol",
    "otoc_heatmap",
    "WeightProfile",
    "LightconeCalibration",
    "PowerLawFit",
    "weight_profile",
    "calibrate_lightcone",
    "lightcone_width",
    "powerlaw_fit",
    "lr_commutator_series",
    "propagator_difference_check",
    "quasilocality_check",
    "proposition_bound",
    "SimConfig",
    "parse_config",
]
