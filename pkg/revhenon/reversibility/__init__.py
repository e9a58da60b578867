from .involution import H, Involution, InvolutionKind, apply_involution, reversibility_residual, reversibility_residuals
from .symmetry import SymmetryClass, SymmetryKind, classify_symmetry, fix_line_count, same_point_set

__all__ = [
    "H",
    "Involution",
    "InvolutionKind",
    "apply_involution",
    "reversibility_residual",
    "reversibility_residuals",
    "SymmetryClass",
    "SymmetryKind",
    "classify_symmetry",
    "fix_line_count",
    "same_point_set",
]
