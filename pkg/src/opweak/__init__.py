"""Finite-matrix certificates for weak-L1 estimates on the absolute value map."""
from __future__ import annotations

__version__ = "0.1.0"

from .absdiff import (
    BoundCertificate,
    FourTermCertificate,
    SymmetricPairSpec,
    auxiliary_commuting_approximant,
    certified_abs_diff_bound,
    decompose_abs_difference,
    singular_value_lipschitz_check,
    synth_symmetric_pair,
)
from .constants import CONSTANTS, BoundConstants
from .errors import EigenConvergenceError, HypothesisViolation, InputError, OpweakError
from .matcore import SpectralDecomposition, abs_matrix, hermitian_eig, hermitian_eigvals, spectral_function
from .norms import m1inf_norm, schatten_norm, singular_values, trace_norm, weak_l1_norm
from .report import Check, Report

__all__ = [
    "BoundCertificate", "BoundConstants", "CONSTANTS", "Check", "EigenConvergenceError",
    "FourTermCertificate", "HypothesisViolation", "InputError", "OpweakError", "Report",
    "SpectralDecomposition", "SymmetricPairSpec", "abs_matrix", "auxiliary_commuting_approximant",
    "certified_abs_diff_bound", "decompose_abs_difference", "hermitian_eig", "hermitian_eigvals",
    "m1inf_norm", "schatten_norm", "singular_value_lipschitz_check", "singular_values",
    "spectral_function", "synth_symmetric_pair", "trace_norm", "weak_l1_norm",
]
