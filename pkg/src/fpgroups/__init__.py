"""Finitely presented groups: coset enumeration, subgroup presentations,
Tietze simplification, abelian invariants and the derived-series workflow."""

from .abelian import (
    AbelianInvariants,
    ModularInvariants,
    RelationMatrix,
    SmithForm,
    abelian_invariants,
    invariants_mod,
    relation_matrix,
    smith_normal_form,
    torsion_order_bound,
)
from .coset_enum import (
    CosetTable,
    EnumerationParams,
    EnumResult,
    Strategy,
    enumerate_cosets,
    permutation_rep,
    standardize,
)
from .pipeline import (
    DerivedSeriesReport,
    Limits,
    ScanReport,
    Termination,
    derived_series,
    derived_subgroup_table,
    preimage_presentation,
    quotient_scan,
)
from .schreier import SubgroupPresentation, rewrite, schreier_generators, subgroup_presentation, transversal
from .tietze import SimplifyParams, SimplifyTrace, recognize_free_abelian, resolve, simplify
from .words import (
    ParseError,
    Presentation,
    Word,
    commutator,
    cyclic_reduce,
    format_presentation,
    free_reduce,
    invert,
    parse_presentation,
    parse_word,
)

__version__ = "0.1.0"
