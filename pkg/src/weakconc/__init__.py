"""Weak-measurement entanglement concentration of the two-mode squeezed vacuum.

Truncated Fock-space simulation of a cross-Kerr coupled, post-selected ancilla
acting on Bob's half of a TMSV, with weak-value predictions, weakness-condition
diagnostics and majorization certificates.
"""
from .concentration import ProtocolConfig, apply_protocol_exact, predicted_tmsv, run
from .entanglement import compare, majorizes, schmidt_spectrum, von_neumann_entropy
from .hilbert import (Coherent, CustomFock, Cutoff, FockVector, QuadratureEigenstate, SchmidtDiagonalState,
                      SqueezedVacuum, coherent_fock, squeezed_vacuum_fock, tmsv)
from .weak_values import n_w_analytic, success_condition, weak_value_numeric

__all__ = [
    "ProtocolConfig", "apply_protocol_exact", "predicted_tmsv", "run",
    "compare", "majorizes", "schmidt_spectrum", "von_neumann_entropy",
    "Coherent", "CustomFock", "Cutoff", "FockVector", "QuadratureEigenstate", "SchmidtDiagonalState",
    "SqueezedVacuum", "coherent_fock", "squeezed_vacuum_fock", "tmsv",
    "n_w_analytic", "success_condition", "weak_value_numeric",
]
