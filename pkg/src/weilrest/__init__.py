"""Exact Weil-restriction computations from finite Galois data.

Subpackages:

- groups: finite-group engine (tables, permutations, subgroups, cosets)
- orbits: the action on label functions G/H -> {1..n}, orbits, Burnside
- motives: Galois contexts, field labels, decomposition and class maps
- polymaps: deviation calculus, degree certificates, Mahler extension
- binomial: binomial rings Z, Q, Z[1/r], truncated Z_p, axiom suite
- csa: Brauer models, hom bookkeeping, categorified corestriction
- cli: the ``weilrest`` command-line front end
"""

__version__ = "0.1.0"

from .binomial import (
    Integers,
    LocalizedIntegers,
    Rationals,
    TruncatedPAdic,
    axiom_suite,
    is_binomial_sanity,
    ring_from_token,
)
from .csa import (
    BrauerModel,
    ClassMap,
    CsaHom,
    CsaObject,
    ExtensionLink,
    base_change_hom,
    br_complex,
    br_local,
    br_real,
    hom_from_value,
    hom_generator,
    link_real_complex,
    motive_iso_test,
    weil_restrict_hom,
    weil_restrict_obj,
)
from .groups import (
    CosetSpace,
    FiniteGroup,
    Subgroup,
    all_subgroups,
    are_conjugate,
    canonical_conjugate,
    coset_action,
    direct_product,
    full_subgroup,
    group_from_table,
    left_cosets,
    named_group,
    trivial_subgroup,
)
from .motives import (
    FieldLabel,
    GaloisContext,
    MotiveSum,
    dimension_identity_check,
    exceptional_collection_report,
    intermediate_fields,
    label_for,
    make_context,
    restrict_class,
    restrict_class_fn,
    stabilizer_coverage,
    weil_restrict_sum,
)
from .orbits import LabelFunction, Orbit, OrbitSet, act, burnside_count, orbits, stabilizer
from .polymaps import (
    DifferenceTable,
    PointedMap,
    PolynomialCertificate,
    certify_degree,
    check_polylinear,
    delta,
    extend_scalars,
    extend_to_groupification,
    factor_through_quotient,
    integer_binom,
    pointed,
)
from .polymaps import compose as compose_polymaps
from .csa import compose as compose_homs

__all__ = [name for name in dir() if not name.startswith("_")]
