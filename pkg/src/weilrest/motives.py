"""Motivic decompositions of Weil restrictions from finite Galois data.

A Galois context (G, H) stands for a tower k into l into L with l = L^H and
d = [G:H].  Restricting a split object with n summands decomposes into one
generator U(L^stab(alpha)) per orbit alpha of G on label functions
G/H -> {1..n}; stabilizers are identified up to conjugacy, so conjugate
stabilizers share a single field label.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ValidationError
from .groups import (
    CosetSpace,
    FiniteGroup,
    Subgroup,
    all_subgroups,
    canonical_conjugate,
    conjugate_members,
    left_cosets,
)
from .orbits import (
    DEFAULT_ENUMERATION_CAP,
    LabelFunction,
    Orbit,
    OrbitSet,
    orbits,
    stabilizer,
)


class NegativeMultiplicity(ValidationError):
    code = "negative_multiplicity"


class PreconditionViolated(ValidationError):
    code = "precondition_violated"


_DEFAULT_NAMES = {"k": "k", "l": "l", "L": "L"}


@dataclass(frozen=True)
class GaloisContext:
    group: FiniteGroup
    subgroup: Subgroup
    cs: CosetSpace
    d: int
    names: dict
    field_names: dict


def make_context(group: FiniteGroup, subgroup, names=None, field_names=None) -> GaloisContext:
    """Context for the tower encoded by (G, H); validates H <= G."""
    if not isinstance(subgroup, Subgroup):
        subgroup = Subgroup(group, subgroup)
    elif subgroup.parent != group:
        subgroup = Subgroup(group, subgroup.members)
    cs = left_cosets(group, subgroup)
    merged = dict(_DEFAULT_NAMES)
    explicit = dict(names or {})
    merged.update(explicit)
    # Degenerate towers identify name slots: H = {e} gives l = L, H = G gives l = k.
    if subgroup.order == 1:
        if "l" not in explicit and "L" in explicit:
            merged["l"] = explicit["L"]
        if "L" not in explicit and "l" in explicit:
            merged["L"] = explicit["l"]
    if subgroup.order == group.order and "l" not in explicit and "k" in explicit:
        merged["l"] = explicit["k"]
    return GaloisContext(
        group=group,
        subgroup=subgroup,
        cs=cs,
        d=len(cs),
        names=merged,
        field_names=dict(field_names or {}),
    )


@dataclass(frozen=True)
class FieldLabel:
    """Fixed field of a stabilizer class, keyed by its canonical conjugate."""

    subgroup_class: tuple[int, ...]
    degree_over_k: int
    display: str

    def sort_key(self):
        return (self.degree_over_k, self.subgroup_class)


def subgroup_key(members) -> str:
    return ",".join(str(m) for m in members)


def label_for(ctx: GaloisContext, sub: Subgroup) -> FieldLabel:
    canon = canonical_conjugate(ctx.group, sub).members
    degree = ctx.group.order // len(canon)
    display = ctx.field_names.get(subgroup_key(canon))
    if display is None:
        if len(canon) == ctx.group.order:
            display = ctx.names["k"]
        elif canon == canonical_conjugate(ctx.group, ctx.subgroup).members:
            display = ctx.names["l"]
        elif canon == (ctx.group.identity,):
            display = ctx.names["L"]
        else:
            display = "L^{%s}" % subgroup_key(canon)
    return FieldLabel(canon, degree, display)


class MotiveSum:
    """Formal non-negative combination of field-label generators."""

    def __init__(self, terms=None):
        self._terms: dict[FieldLabel, int] = {}
        for label, coeff in dict(terms or {}).items():
            self.add(label, coeff)

    def add(self, label: FieldLabel, coeff: int) -> None:
        if coeff < 0:
            raise NegativeMultiplicity(f"coefficient {coeff} for {label.display}")
        if coeff == 0:
            return
        self._terms[label] = self._terms.get(label, 0) + coeff

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def coefficient(self, label: FieldLabel) -> int:
        return self._terms.get(label, 0)

    def by_display(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for label, coeff in self.items():
            out[label.display] = out.get(label.display, 0) + coeff
        return out

    def total(self) -> int:
        return sum(self._terms.values())

    def __eq__(self, other):
        return isinstance(other, MotiveSum) and self._terms == other._terms

    def __len__(self):
        return len(self._terms)

    def __repr__(self):
        return f"MotiveSum({self.render()})"

    def render(self) -> str:
        if not self._terms:
            return "0"
        return " ⊕ ".join(
            "U(%s)^{⊕%d}" % (label.display, coeff) for label, coeff in self.items()
        )

    def as_rows(self):
        return [
            {
                "field": label.display,
                "subgroup": list(label.subgroup_class),
                "degree_over_k": label.degree_over_k,
                "coeff": coeff,
            }
            for label, coeff in self.items()
        ]


def _orbit_set(ctx: GaloisContext, n: int, cap: int) -> OrbitSet:
    return orbits(ctx.group, ctx.cs, n, cap=cap)


def weil_restrict_sum(ctx: GaloisContext, n: int, *, cap=DEFAULT_ENUMERATION_CAP) -> MotiveSum:
    """One generator U(L^stab(alpha)) per orbit, aggregated by field label."""
    out = MotiveSum()
    for orbit in _orbit_set(ctx, n, cap).orbits:
        out.add(label_for(ctx, orbit.stabilizer), 1)
    return out


def orbit_coefficient(orbit: Orbit, m) -> int:
    """Product of m over the labels of the representative (orbit-invariant)."""
    c = 1
    for v in orbit.canonical_rep.values:
        c *= m[v - 1]
        if c == 0:
            return 0
    return c


def restrict_class(ctx: GaloisContext, m, *, cap=DEFAULT_ENUMERATION_CAP) -> MotiveSum:
    """Image of a class with multiplicity vector m under the degree-d map.

    The coefficient of orbit alpha is prod_p m[alpha(p)]; m = (1,...,1)
    reproduces weil_restrict_sum.
    """
    m = tuple(m)
    if not m:
        raise ValidationError("multiplicity vector must be non-empty")
    if any(x < 0 for x in m):
        raise NegativeMultiplicity(f"multiplicities must be >= 0, got {m}")
    out = MotiveSum()
    for orbit in _orbit_set(ctx, len(m), cap).orbits:
        out.add(label_for(ctx, orbit.stabilizer), orbit_coefficient(orbit, m))
    return out


def restrict_class_fn(ctx: GaloisContext, n: int, *, cap=DEFAULT_ENUMERATION_CAP):
    """Coordinatewise form of restrict_class: fixed label order plus evaluator.

    Returns (labels, fn) where fn maps an integer vector of length n to the
    coefficient vector over the label coordinates.  fn is total on Z^n, which
    lets the polynomial-map calculus certify its degree.
    """
    oset = _orbit_set(ctx, n, cap)
    by_label: dict[FieldLabel, list[Orbit]] = {}
    for orbit in oset.orbits:
        by_label.setdefault(label_for(ctx, orbit.stabilizer), []).append(orbit)
    labels = sorted(by_label, key=lambda lab: lab.sort_key())

    def fn(m):
        return tuple(
            sum(orbit_coefficient(o, m) for o in by_label[lab]) for lab in labels
        )

    return labels, fn


@dataclass(frozen=True)
class DimensionCheck:
    holds: bool
    total: int
    expected: int
    rows: tuple


def dimension_identity_check(ctx: GaloisContext, n: int, *, cap=DEFAULT_ENUMERATION_CAP) -> DimensionCheck:
    """Verify sum over orbits of [G:stab(alpha)] = n^d, with per-orbit rows."""
    rows = []
    total = 0
    for orbit in _orbit_set(ctx, n, cap).orbits:
        idx = ctx.group.order // orbit.stabilizer.order
        rows.append((orbit.canonical_rep.values, idx))
        total += idx
    expected = n**ctx.d
    return DimensionCheck(total == expected, total, expected, tuple(rows))


def intermediate_fields(ctx: GaloisContext) -> list[FieldLabel]:
    """One label per conjugacy class of subgroups containing H, sorted by degree."""
    group = ctx.group
    seen = {}
    for sub in all_subgroups(group):
        if not _contains_conjugate(group, sub, ctx.subgroup):
            continue
        label = label_for(ctx, sub)
        seen[label.subgroup_class] = label
    return sorted(seen.values(), key=lambda lab: lab.sort_key())


def _contains_conjugate(group: FiniteGroup, big: Subgroup, small: Subgroup) -> bool:
    bigset = frozenset(big.members)
    return any(
        conjugate_members(group, small.members, g) <= bigset for g in group.elements()
    )


def _conjugate_containing(group: FiniteGroup, big: Subgroup, small: Subgroup):
    smallset = frozenset(small.members)
    for g in group.elements():
        cand = conjugate_members(group, big.members, g)
        if smallset <= cand:
            return Subgroup(group, cand, validate=False)
    return None


@dataclass(frozen=True)
class CoverageWitness:
    label: FieldLabel
    alpha_prime: LabelFunction
    stabilizer_exact: bool
    orbit_rep: tuple[int, ...]


@dataclass(frozen=True)
class CoverageResult:
    holds: bool
    witnesses: tuple[CoverageWitness, ...]


def stabilizer_coverage(ctx: GaloisContext, n: int, *, cap=DEFAULT_ENUMERATION_CAP) -> CoverageResult:
    """Check every intermediate subgroup class occurs as an orbit stabilizer.

    The witness per class is the two-valued function that is 1 on the cosets
    inside (a conjugate of) H' and n elsewhere; its stabilizer is exactly H'.
    """
    if n < 2:
        raise PreconditionViolated("stabilizer coverage needs an alphabet of size >= 2")
    oset = _orbit_set(ctx, n, cap)
    stab_classes = {
        canonical_conjugate(ctx.group, orbit.stabilizer).members: orbit
        for orbit in oset.orbits
    }
    witnesses = []
    holds = True
    for label in intermediate_fields(ctx):
        hprime = Subgroup(ctx.group, label.subgroup_class, validate=False)
        aligned = _conjugate_containing(ctx.group, hprime, ctx.subgroup)
        alpha = LabelFunction(
            tuple(1 if rep in aligned._memberset else n for rep in ctx.cs.reps), n
        )
        exact = stabilizer(ctx.group, ctx.cs, alpha).members == aligned.members
        orbit = stab_classes.get(label.subgroup_class)
        if orbit is None or not exact:
            holds = False
        witnesses.append(
            CoverageWitness(
                label=label,
                alpha_prime=alpha,
                stabilizer_exact=exact,
                orbit_rep=orbit.canonical_rep.values if orbit else (),
            )
        )
    return CoverageResult(holds, tuple(witnesses))


@dataclass(frozen=True)
class DecompositionReport:
    """Eq-style decomposition of a restricted split object, with optional
    Artin-Tate ambient (a direct-summand claim, never an equality)."""

    context_names: dict
    extension_degree: int
    scheme_name: str
    collection_length: int
    dim_x: int | None
    motive_sum: MotiveSum
    orbit_rows: tuple
    ambient: tuple | None

    def as_dict(self):
        out = {
            "context": dict(self.context_names),
            "extension_degree": self.extension_degree,
            "scheme": self.scheme_name,
            "collection_length": self.collection_length,
            "decomposition": self.motive_sum.as_rows(),
            "orbits": [
                {
                    "rep": list(rep),
                    "stab": list(stab),
                    "field": display,
                    "coeff": coeff,
                }
                for rep, stab, display, coeff in self.orbit_rows
            ],
        }
        if self.ambient is not None:
            out["ambient"] = {
                "relation": "direct summand of",
                "twist_bound": self.extension_degree * (self.dim_x or 0),
                "terms": [
                    {"field": display, "tate_twist": i, "coeff": coeff}
                    for display, i, coeff in self.ambient
                ],
            }
        return out


def exceptional_collection_report(
    ctx: GaloisContext,
    scheme_name: str,
    n: int,
    dim_x: int | None = None,
    *,
    cap=DEFAULT_ENUMERATION_CAP,
) -> DecompositionReport:
    """Decomposition for a split object with n generators over l."""
    oset = _orbit_set(ctx, n, cap)
    total = MotiveSum()
    rows = []
    for orbit in oset.orbits:
        label = label_for(ctx, orbit.stabilizer)
        total.add(label, 1)
        rows.append(
            (orbit.canonical_rep.values, orbit.stabilizer.members, label.display, 1)
        )
    ambient = None
    if dim_x is not None:
        if dim_x < 0:
            raise ValidationError("dim_x must be >= 0")
        bound = ctx.d * dim_x
        ambient = tuple(
            (label.display, i, coeff)
            for label, coeff in total.items()
            for i in range(bound + 1)
        )
    return DecompositionReport(
        context_names=dict(ctx.names),
        extension_degree=ctx.d,
        scheme_name=scheme_name,
        collection_length=n,
        dim_x=dim_x,
        motive_sum=total,
        orbit_rows=tuple(rows),
        ambient=ambient,
    )
