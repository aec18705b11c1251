"""K-theory of pointed monoids: monomial matrices, A-sets, K-group calculators
and the central extensions M(Z/d)."""

from .abgroup import FgAbelianGroup, homology, iso_test, parse_group_spec, smith_normal_form
from .errors import InvalidStructureError, NotInvertibleError, SizeGuardError, StructuralError, UnsupportedError
from .monoid import (
    FiniteGroup,
    PointedMonoid,
    abelianization,
    commutator_subgroup,
    group_monoid,
    poly_units,
    units,
    validate_monoid,
)

__version__ = "0.1.0"

__all__ = [
    "FgAbelianGroup",
    "FiniteGroup",
    "InvalidStructureError",
    "NotInvertibleError",
    "PointedMonoid",
    "SizeGuardError",
    "StructuralError",
    "UnsupportedError",
    "abelianization",
    "commutator_subgroup",
    "group_monoid",
    "homology",
    "iso_test",
    "parse_group_spec",
    "poly_units",
    "smith_normal_form",
    "units",
    "validate_monoid",
]
