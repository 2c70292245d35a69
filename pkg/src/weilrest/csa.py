"""Hom-category of central simple algebras over a field, modeled on Brauer data.

A model is a Brauer-group presentation (trivial, cyclic, or Q/Z with
exact-fraction classes) together with an index function.  Hom-sets between
objects U(A) and U(A') are the subgroups ind([A'] - [A]) * Z, stored as
(generator, multiple) pairs so subgroup membership stays explicit;
composition multiplies values.  Weil restriction acts on hom values by
n -> n^d and on division objects by corestriction on the class and ind^d on
the degree; base change is the inclusion of hom-sets along restriction.

Restriction/corestriction maps are model data (tables, scalings, zero or
identity), cross-checked against cor(res(c)) = d*c rather than asserted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ValidationError


class ModelMismatch(ValidationError):
    code = "model_mismatch"


class NotComposable(ValidationError):
    code = "not_composable"


class DivisibilityViolation(ValidationError):
    code = "divisibility_violation"


class NoCorestrictionDeclared(ValidationError):
    code = "no_corestriction"


class NoRestrictionDeclared(ValidationError):
    code = "no_restriction"


class NotDivisionObject(ValidationError):
    code = "not_division_object"


class InvalidObject(ValidationError):
    code = "invalid_csa_object"


@dataclass(frozen=True)
class TrivialGroup:
    def normalize(self, c):
        _as_integer(c)
        return 0

    def add(self, a, b):
        return 0

    def neg(self, a):
        return 0

    zero = 0
    finite = True

    def elements(self):
        return (0,)

    def key(self):
        return ("trivial",)


@dataclass(frozen=True)
class CyclicOfOrder:
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValidationError("cyclic order must be >= 1")

    def normalize(self, c):
        return _as_integer(c) % self.m

    def add(self, a, b):
        return (a + b) % self.m

    def neg(self, a):
        return -a % self.m

    @property
    def zero(self):
        return 0

    finite = True

    def elements(self):
        return tuple(range(self.m))

    def key(self):
        return ("cyclic", self.m)


@dataclass(frozen=True)
class RationalsModOne:
    def normalize(self, c):
        return Fraction(c) % 1

    def add(self, a, b):
        return (a + b) % 1

    def neg(self, a):
        return (-a) % 1

    @property
    def zero(self):
        return Fraction(0)

    finite = False

    def elements(self):
        raise ValidationError("Q/Z has infinitely many classes")

    def key(self):
        return ("rationals_mod_one",)


def _as_integer(c):
    if isinstance(c, Fraction):
        if c.denominator != 1:
            raise ValidationError(f"class {c} is not integral")
        return c.numerator
    if isinstance(c, int):
        return c
    raise ValidationError(f"cannot read {c!r} as a class")


class BrauerModel:
    """Brauer-group presentation with an index function on classes."""

    def __init__(self, field: str, group, index=None):
        self.field = field
        self.group = group
        if group.finite:
            if index is None:
                raise ValidationError("finite models need an explicit index table")
            self.index_table = {group.normalize(c): int(v) for c, v in index.items()}
            for c in group.elements():
                if c not in self.index_table:
                    raise ValidationError(f"index table misses class {c}")
                if self.index_table[c] < 1:
                    raise ValidationError(f"index of {c} must be positive")
            if self.index_table[group.zero] != 1:
                raise ValidationError("index of the trivial class must be 1")
            for c in group.elements():
                if self.index_table[c] != self.index_table[group.neg(c)]:
                    raise ValidationError(
                        f"index({c}) != index(-{c}): opposite algebras share an index"
                    )
        else:
            if index is not None:
                raise ValidationError("Q/Z models use the order-of-class index rule")
            self.index_table = None

    def normalize(self, c):
        return self.group.normalize(c)

    def index_of(self, c) -> int:
        c = self.normalize(c)
        if self.index_table is not None:
            return self.index_table[c]
        return c.denominator  # additive order in Q/Z

    def _key(self):
        table = (
            tuple(sorted(self.index_table.items()))
            if self.index_table is not None
            else "order-rule"
        )
        return (self.field, self.group.key(), table)

    def __eq__(self, other):
        return isinstance(other, BrauerModel) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"BrauerModel(Br({self.field}))"


@dataclass(frozen=True)
class ClassMap:
    """Declared homomorphism between class groups: zero, identity, table, or scale."""

    kind: str
    data: object = None

    def apply(self, source_group, target_group, c):
        c = source_group.normalize(c)
        if self.kind == "zero":
            return target_group.zero
        if self.kind == "identity":
            return target_group.normalize(c)
        if self.kind == "scale":
            return target_group.normalize(Fraction(c) * Fraction(self.data))
        if self.kind == "table":
            try:
                return target_group.normalize(self.data[c])
            except KeyError:
                raise ValidationError(f"class map table misses {c}") from None
        raise ValidationError(f"unknown class map kind {self.kind!r}")


class ExtensionLink:
    """Declared extension data between Br(k) and Br(l) of degree d."""

    def __init__(self, k_model, l_model, degree, res=None, cor=None):
        if degree < 1:
            raise ValidationError("extension degree must be >= 1")
        self.k_model = k_model
        self.l_model = l_model
        self.degree = degree
        self.res = res
        self.cor = cor
        if res is not None and k_model.group.finite:
            _check_homomorphism(res, k_model.group, l_model.group)
        if cor is not None and l_model.group.finite:
            _check_homomorphism(cor, l_model.group, k_model.group)
        if res is not None and cor is not None and not self.verify_cor_res():
            raise ValidationError("cor after res is not multiplication by the degree")

    def res_class(self, c):
        if self.res is None:
            raise NoRestrictionDeclared(
                f"no restriction declared from Br({self.k_model.field})"
            )
        return self.res.apply(self.k_model.group, self.l_model.group, c)

    def cor_class(self, c):
        if self.cor is None:
            raise NoCorestrictionDeclared(
                f"no corestriction declared into Br({self.k_model.field})"
            )
        return self.cor.apply(self.l_model.group, self.k_model.group, c)

    def verify_cor_res(self) -> bool:
        """cor(res(c)) = d*c on Br(k), exhaustively for finite presentations."""
        group = self.k_model.group
        if group.finite:
            probes = group.elements()
        else:
            probes = [Fraction(a, b) for b in range(1, 13) for a in range(b)]
        for c in probes:
            image = self.cor_class(self.res_class(c))
            expected = group.normalize(Fraction(c) * self.degree)
            if image != expected:
                return False
        return True


def _check_homomorphism(cmap, source_group, target_group):
    if not source_group.finite:
        return
    for a in source_group.elements():
        for b in source_group.elements():
            lhs = cmap.apply(source_group, target_group, source_group.add(a, b))
            rhs = target_group.add(
                cmap.apply(source_group, target_group, a),
                cmap.apply(source_group, target_group, b),
            )
            if lhs != rhs:
                raise ValidationError(f"class map is not additive at ({a}, {b})")


class CsaObject:
    """U(A) for a central simple algebra with the given class and degree."""

    def __init__(self, model: BrauerModel, brauer_class, degree: int):
        self.model = model
        self.brauer_class = model.normalize(brauer_class)
        self.degree = int(degree)
        if self.degree < 1:
            raise InvalidObject("degree must be >= 1")
        if self.degree % model.index_of(self.brauer_class):
            raise InvalidObject(
                f"index {model.index_of(self.brauer_class)} must divide degree {self.degree}"
            )

    @property
    def index(self) -> int:
        return self.model.index_of(self.brauer_class)

    def _key(self):
        return (self.model, self.brauer_class, self.degree)

    def __eq__(self, other):
        return isinstance(other, CsaObject) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"U({self.model.field}: class {self.brauer_class}, deg {self.degree})"


def hom_generator(a: CsaObject, b: CsaObject) -> int:
    """ind([B] - [A]): the positive generator of Hom(U(A), U(B)) inside Z."""
    if a.model != b.model:
        raise ModelMismatch("objects live over different Brauer models")
    group = a.model.group
    diff = group.add(b.brauer_class, group.neg(a.brauer_class))
    return a.model.index_of(diff)


class CsaHom:
    """Element multiple * generator of Hom(U(source), U(target))."""

    def __init__(self, source: CsaObject, target: CsaObject, multiple: int):
        self.source = source
        self.target = target
        self.generator = hom_generator(source, target)
        self.multiple = int(multiple)

    @property
    def value(self) -> int:
        return self.multiple * self.generator

    def __add__(self, other):
        if not isinstance(other, CsaHom):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            raise NotComposable("hom addition needs matching source and target")
        return CsaHom(self.source, self.target, self.multiple + other.multiple)

    def __eq__(self, other):
        return (
            isinstance(other, CsaHom)
            and self.source == other.source
            and self.target == other.target
            and self.multiple == other.multiple
        )

    def __repr__(self):
        return f"CsaHom({self.value} = {self.multiple}*{self.generator})"


def hom_from_value(source: CsaObject, target: CsaObject, value: int) -> CsaHom:
    gen = hom_generator(source, target)
    multiple, rem = divmod(value, gen)
    if rem:
        raise DivisibilityViolation(f"{value} is not a multiple of the generator {gen}")
    return CsaHom(source, target, multiple)


def compose(f: CsaHom, g: CsaHom) -> CsaHom:
    """g after f; hom values multiply."""
    if f.target != g.source:
        raise NotComposable("f.target must equal g.source")
    value = f.value * g.value
    gen = hom_generator(f.source, g.target)
    multiple, rem = divmod(value, gen)
    if rem:
        raise DivisibilityViolation(
            f"composite value {value} escapes the hom subgroup {gen}*Z"
        )
    return CsaHom(f.source, g.target, multiple)


def weil_restrict_hom(n: int, d: int) -> int:
    """The categorified corestriction on hom values: n -> n^d."""
    if d < 1:
        raise ValidationError("extension degree must be >= 1")
    return n**d


def weil_restrict_obj(ctx, division: CsaObject, link: ExtensionLink) -> CsaObject:
    """Restrict a division object along the declared corestriction.

    The class maps by cor; the degree is ind(D)^d.  Non-division objects are
    refused: their degree bookkeeping is not determined by the model.
    """
    if division.model != link.l_model:
        raise ModelMismatch("object does not live over the link's upper model")
    if link.degree != ctx.d:
        raise ModelMismatch(
            f"link degree {link.degree} differs from context degree {ctx.d}"
        )
    if division.degree != division.index:
        raise NotDivisionObject(
            f"degree {division.degree} != index {division.index}; "
            "restrict only division objects"
        )
    new_class = link.cor_class(division.brauer_class)
    return CsaObject(link.k_model, new_class, division.index**link.degree)


def base_change_hom(f: CsaHom, link: ExtensionLink) -> CsaHom:
    """Include a hom along restriction; the integer value is unchanged."""
    if f.source.model != link.k_model:
        raise ModelMismatch("hom does not live over the link's base model")
    src = CsaObject(link.l_model, link.res_class(f.source.brauer_class), f.source.degree)
    tgt = CsaObject(link.l_model, link.res_class(f.target.brauer_class), f.target.degree)
    new_gen = hom_generator(src, tgt)
    if f.generator % new_gen:
        raise DivisibilityViolation(
            f"restricted generator {new_gen} does not divide {f.generator}"
        )
    multiple, rem = divmod(f.value, new_gen)
    assert rem == 0
    return CsaHom(src, tgt, multiple)


def motive_iso_test(a: CsaObject, b: CsaObject) -> bool:
    """U(A) and U(A') are isomorphic exactly when their classes agree."""
    if a.model != b.model:
        raise ModelMismatch("objects live over different Brauer models")
    return a.brauer_class == b.brauer_class


def br_real() -> BrauerModel:
    """Br(R) = Z/2 with indices {0: 1, 1: 2} (R and the quaternions)."""
    return BrauerModel("R", CyclicOfOrder(2), {0: 1, 1: 2})


def br_complex() -> BrauerModel:
    return BrauerModel("C", TrivialGroup(), {0: 1})


def link_real_complex() -> ExtensionLink:
    """The degree-2 link Br(R) <-> Br(C); both maps are forced to zero."""
    return ExtensionLink(
        br_real(),
        br_complex(),
        2,
        res=ClassMap("zero"),
        cor=ClassMap("zero"),
    )


def br_local(field: str = "Q_p") -> BrauerModel:
    """Abstract local-field model: Br = Q/Z, index = additive order."""
    return BrauerModel(field, RationalsModOne())


_GROUP_KINDS = {
    "trivial": lambda spec: TrivialGroup(),
    "cyclic": lambda spec: CyclicOfOrder(int(spec["cyclic"])),
    "rationals_mod_one": lambda spec: RationalsModOne(),
}


def _group_from_dict(spec) -> object:
    for kind, make in _GROUP_KINDS.items():
        if kind in spec:
            return make(spec)
    raise ValidationError(f"unknown class-group spec {spec!r}")


def _class_from_string(s):
    s = str(s)
    return Fraction(s) if "/" in s else int(s)


def _class_map_from_dict(spec) -> ClassMap:
    kind = spec.get("type")
    if kind in ("zero", "identity"):
        return ClassMap(kind)
    if kind == "scale":
        return ClassMap("scale", Fraction(str(spec["factor"])))
    if kind == "table":
        table = {
            _class_from_string(k): _class_from_string(v)
            for k, v in spec["table"].items()
        }
        return ClassMap("table", table)
    raise ValidationError(f"unknown class map {spec!r}")


def model_from_dict(spec) -> tuple[BrauerModel, dict[str, ExtensionLink]]:
    """Parse a model file: the model itself plus its links keyed by target field."""
    group = _group_from_dict(spec["group"])
    index = None
    if "index" in spec:
        index = {_class_from_string(k): int(v) for k, v in spec["index"].items()}
    model = BrauerModel(str(spec["field"]), group, index)
    links = {}
    for entry in spec.get("maps", ()):
        target_model, _ = model_from_dict(entry["target"])
        if "to" in entry and str(entry["to"]) != target_model.field:
            raise ValidationError("map 'to' does not match the target model's field")
        links[target_model.field] = ExtensionLink(
            model,
            target_model,
            int(entry["degree"]),
            res=_class_map_from_dict(entry["res"]) if "res" in entry else None,
            cor=_class_map_from_dict(entry["cor"]) if "cor" in entry else None,
        )
    return model, links
