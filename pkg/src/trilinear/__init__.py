"""Invariant trilinear functionals on principal-series modules over sl_2 and U_q(sl_2)."""

from trilinear.qspecial import DeformationParameter, TruncationPolicy
from trilinear.representation import ModuleParams, TripleParams

__all__ = ["DeformationParameter", "TruncationPolicy", "ModuleParams", "TripleParams"]
