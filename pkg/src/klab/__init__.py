"""Fourier-side data of the Kronecker limit formula for PSL2(Z) and Gamma_0(N)."""
from .arithlib import GroupSpec, divisors, harmonic, mobius, sigma
from .holproj import Decomposition, ProjectionCoeffs, decompose, dm_weight24, project, project_named
from .kronecker import (
    K2Coefficients,
    KroneckerLimit,
    a_func_eval,
    k1_closed_form,
    k1_eval,
    k1_full_modular,
    k1_gamma0_squarefree,
    k2_assemble,
    l_minus_partial,
    l_plusplus_partial,
)
from .numerics import Approx, DomainError, TruncationError, precision, set_precision
from .qseries import HalfPlanePoint, QExpansion, delta_qexp, g12_qexp, qexp_eval, qexp_mul, s24_basis

__all__ = [
    "Approx",
    "Decomposition",
    "DomainError",
    "GroupSpec",
    "HalfPlanePoint",
    "K2Coefficients",
    "KroneckerLimit",
    "ProjectionCoeffs",
    "QExpansion",
    "TruncationError",
    "a_func_eval",
    "decompose",
    "delta_qexp",
    "divisors",
    "dm_weight24",
    "g12_qexp",
    "harmonic",
    "k1_closed_form",
    "k1_eval",
    "k1_full_modular",
    "k1_gamma0_squarefree",
    "k2_assemble",
    "l_minus_partial",
    "l_plusplus_partial",
    "mobius",
    "precision",
    "project",
    "project_named",
    "qexp_eval",
    "qexp_mul",
    "s24_basis",
    "set_precision",
    "sigma",
]
