"""Exact computation with inverse and direct systems of finitely presented
abelian groups, simplicial (co)homology, and shape invariants of filtered
simplicial models."""

from .abgroup import ExactSequence, FpAbGroup, GroupHom
from .exactla import IntMatrix, smith_normal_form
from .posets import DirectedPoset, OrderMap
from .serialize import FormatError, dumps, load, loads
from .shapefunctors import (
    FilteredModel,
    build_filtered_model,
    excision_pipeline,
    naturality_audit,
    shape_cohomology,
    shape_homology,
    verify_system_equivalence,
)
from .simplicial import SimplicialComplex, SimplicialMap, SimplicialPair, cohomology, homology
from .systems import DIRECT, INVERSE, GroupSystem, SystemMorphism, colimit, limit, morphisms_equivalent

__all__ = [
    "DIRECT",
    "INVERSE",
    "DirectedPoset",
    "ExactSequence",
    "FilteredModel",
    "FormatError",
    "FpAbGroup",
    "GroupHom",
    "GroupSystem",
    "IntMatrix",
    "OrderMap",
    "SimplicialComplex",
    "SimplicialMap",
    "SimplicialPair",
    "SystemMorphism",
    "build_filtered_model",
    "cohomology",
    "colimit",
    "dumps",
    "excision_pipeline",
    "homology",
    "limit",
    "load",
    "loads",
    "morphisms_equivalent",
    "naturality_audit",
    "shape_cohomology",
    "shape_homology",
    "smith_normal_form",
    "verify_system_equivalence",
]
