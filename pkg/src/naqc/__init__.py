"""Toolkit for the nonlocal advantage of quantum coherence in qubit systems.

Computes the standard (MUB-constrained) and generalized detection
functionals for two-qubit states, their closed-form lower bound, and
tripartite monogamy sums for three-qubit pure states, together with
experiment drivers (sweeps, threshold bisection, monogamy scans) and
property-verification suites.
"""

from .coherence import (BasisTriad, COMPLEMENTARITY_BOUND, CoherenceTriple,
                        MeasurementAxis, bloch_coherence, l1_coherence,
                        max_coherence_sum, triad_coherence_sum,
                        triad_coherences)
from .experiments import (ScanSpec, SweepSpec, VerifyReport, find_threshold,
                          run_monogamy_scan, run_sweep, run_verify)
from .functionals import (DIRECTION_AB, DIRECTION_BA, MODE_FIXED_COHERENCE,
                          MODE_FIXED_MEASUREMENT, MonogamyRecord, NaqcOptions,
                          NaqcResult, monogamy_sum, naqc_generalized,
                          naqc_lower_bound, naqc_standard, objective)
from .qlin import (CorrDecomp, apply_local_unitary, bloch_rotation,
                   bloch_vector, from_corr, haar_unitary, kron, partial_trace,
                   partial_transpose, pure_to_density, to_corr,
                   validate_density_matrix, validate_pure_state)
from .states import (CanonicalThreeQubitParams, FamilySpec, bell_mixture,
                     canonical_three_qubit, haar_pure, phi_plus, psi_plus,
                     random_density, sample, three_tangle, werner)
from .steering import Ensemble, condition, condition_bloch, swap_parties

__version__ = "0.1.0"

__all__ = [
    "BasisTriad", "COMPLEMENTARITY_BOUND", "CanonicalThreeQubitParams",
    "CoherenceTriple", "CorrDecomp", "DIRECTION_AB", "DIRECTION_BA",
    "Ensemble", "FamilySpec", "MODE_FIXED_COHERENCE",
    "MODE_FIXED_MEASUREMENT", "MeasurementAxis", "MonogamyRecord",
    "NaqcOptions", "NaqcResult", "ScanSpec", "SweepSpec", "VerifyReport",
    "apply_local_unitary", "bell_mixture", "bloch_coherence",
    "bloch_rotation", "bloch_vector", "canonical_three_qubit", "condition",
    "condition_bloch", "find_threshold", "from_corr", "haar_pure",
    "haar_unitary", "kron", "l1_coherence", "max_coherence_sum",
    "monogamy_sum", "naqc_generalized", "naqc_lower_bound", "naqc_standard",
    "objective", "partial_trace", "partial_transpose", "phi_plus",
    "psi_plus", "pure_to_density", "random_density", "run_monogamy_scan",
    "run_sweep", "run_verify", "sample", "swap_parties", "three_tangle",
    "to_corr", "triad_coherence_sum", "triad_coherences",
    "validate_density_matrix", "validate_pure_state", "werner",
]
