"""Biderivations of incidence algebras of finite posets over exact rings."""

from .algebra import AlgebraElement, basis, unit_delta, zero
from .bilinear import BilinearMap, CheckReport, extremal, inner, inner_per_region, is_biderivation
from .poset import FinitePoset, build_from_covers
from .rings import RingDescriptor
from .structure import Decomposition, extract_decomposition, reconstruct, verify_structure_theorem

__all__ = [
    "AlgebraElement",
    "BilinearMap",
    "CheckReport",
    "Decomposition",
    "FinitePoset",
    "RingDescriptor",
    "basis",
    "build_from_covers",
    "extract_decomposition",
    "extremal",
    "inner",
    "inner_per_region",
    "is_biderivation",
    "reconstruct",
    "unit_delta",
    "verify_structure_theorem",
    "zero",
]
