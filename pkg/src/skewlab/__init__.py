"""Exact crossed products, twisted polynomial quotients and generalized
cyclic algebras over Q and F_p."""

from .errors import ContractError, InputError, SkewlabError, VerificationError
from .scalars import GF, QQ, Matrix
from .fgalg import AlgElement, AlgMorphism, StructureAlgebra
from .fieldext import FieldExtension, aut_group, catalog, fixed_field
from .groups import FiniteGroup, SolvableSeries, composition_series, is_solvable
from .skewpoly import (
    GeneralizedCyclicSpec,
    SearchSpec,
    SkewPolyRing,
    generalized_cyclic,
    norm_condition_witness,
    quotient_algebra,
)
from .crossed import (
    CrossedProduct,
    FactorSet,
    crossed_product,
    cyclic_factor_set,
    decompose_chain,
    trivial_factor_set,
    validate_cocycle,
)
from .abelianchain import AbelianChainParams, build_abelian_chain, division_probe

__all__ = [
    "AbelianChainParams", "AlgElement", "AlgMorphism", "ContractError", "CrossedProduct", "FactorSet",
    "FieldExtension", "FiniteGroup", "GF", "GeneralizedCyclicSpec", "InputError", "Matrix", "QQ",
    "SearchSpec", "SkewPolyRing", "SkewlabError", "SolvableSeries", "StructureAlgebra", "VerificationError",
    "aut_group", "build_abelian_chain", "catalog", "composition_series", "crossed_product",
    "cyclic_factor_set", "decompose_chain", "division_probe", "fixed_field", "generalized_cyclic",
    "is_solvable", "norm_condition_witness", "quotient_algebra", "trivial_factor_set", "validate_cocycle",
]
