import itertools
import random
from fractions import Fraction

import pytest

from weilrest.csa import (
    BrauerModel,
    ClassMap,
    CsaHom,
    CsaObject,
    CyclicOfOrder,
    DivisibilityViolation,
    ExtensionLink,
    InvalidObject,
    ModelMismatch,
    NoCorestrictionDeclared,
    NotComposable,
    NotDivisionObject,
    base_change_hom,
    br_complex,
    br_local,
    br_real,
    compose,
    hom_from_value,
    hom_generator,
    link_real_complex,
    model_from_dict,
    motive_iso_test,
    weil_restrict_hom,
    weil_restrict_obj,
)
from weilrest.errors import ValidationError
from weilrest.groups import named_group, trivial_subgroup
from weilrest.motives import make_context
from weilrest.polymaps import certify_degree, pointed


def real_objects():
    brr = br_real()
    return brr, CsaObject(brr, 0, 1), CsaObject(brr, 1, 2)


def quadratic_ctx():
    g = named_group("C", 2)
    return make_context(g, trivial_subgroup(g))


def test_br_real_hom_generator_table():
    brr, r, h = real_objects()
    m2r = CsaObject(brr, 0, 2)
    table = {
        (a.brauer_class, b.brauer_class): hom_generator(a, b)
        for a in (r, h, m2r)
        for b in (r, h, m2r)
    }
    assert table == {
        (0, 0): 1,
        (0, 1): 2,
        (1, 0): 2,
        (1, 1): 1,
    }


def test_hom_generator_rationals_mod_one():
    br = br_local()
    a = CsaObject(br, 0, 1)
    b = CsaObject(br, Fraction(1, 3), 3)
    assert hom_generator(a, b) == 3
    assert hom_generator(a, a) == 1
    assert hom_generator(b, b) == 1


def test_hom_generator_model_mismatch():
    _, r, _ = real_objects()
    c = CsaObject(br_complex(), 0, 1)
    with pytest.raises(ModelMismatch):
        hom_generator(r, c)


def test_object_index_divides_degree():
    brr = br_real()
    CsaObject(brr, 1, 4)  # M2(H)
    with pytest.raises(InvalidObject):
        CsaObject(brr, 1, 3)


def test_compose_identity_and_values():
    brr, r, h = real_objects()
    ident = CsaHom(r, r, 1)
    g = CsaHom(r, h, 3)
    assert compose(ident, g) == g
    f2 = CsaHom(r, r, 2)
    g3 = CsaHom(r, r, 3)
    assert compose(f2, g3).value == 6


def test_compose_real_quaternion_roundtrip():
    brr, r, h = real_objects()
    f = CsaHom(r, h, 1)  # value 2
    g = CsaHom(h, r, 1)  # value 2
    gf = compose(f, g)
    assert f.value == g.value == 2
    assert gf.source == gf.target == r
    assert gf.value == 4 and gf.generator == 1


def test_compose_requires_matching_objects():
    brr, r, h = real_objects()
    with pytest.raises(NotComposable):
        compose(CsaHom(r, h, 1), CsaHom(r, h, 1))


def test_compose_never_violates_divisibility_on_builtin_models():
    brr = br_real()
    objs = [CsaObject(brr, c, d) for c in (0, 1) for d in (1, 2, 4) if d % (c + 1) == 0]
    for a, b, c in itertools.product(objs, repeat=3):
        for m1 in range(-3, 4):
            for m2 in range(-3, 4):
                compose(CsaHom(a, b, m1), CsaHom(b, c, m2))


def test_compose_divisibility_on_local_model():
    br = br_local()
    classes = [Fraction(0), Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 6)]
    objs = [CsaObject(br, c, c.denominator) for c in classes]
    for a, b, c in itertools.product(objs, repeat=3):
        composed = compose(CsaHom(a, b, 2), CsaHom(b, c, 3))
        assert composed.value == 6 * hom_generator(a, b) * hom_generator(b, c)


def test_hom_from_value_checks_subgroup_membership():
    brr, r, h = real_objects()
    assert hom_from_value(r, h, 6).multiple == 3
    with pytest.raises(DivisibilityViolation):
        hom_from_value(r, h, 3)


def test_hom_addition():
    brr, r, h = real_objects()
    s = CsaHom(r, h, 2) + CsaHom(r, h, 5)
    assert s.multiple == 7 and s.value == 14


def test_weil_restrict_hom_values():
    assert weil_restrict_hom(1, 5) == 1
    assert weil_restrict_hom(3, 2) == 9
    assert weil_restrict_hom(-3, 3) == -27
    assert weil_restrict_hom(-3, 2) == 9
    with pytest.raises(ValidationError):
        weil_restrict_hom(2, 0)


def test_weil_restrict_hom_multiplicativity():
    for d in range(1, 6):
        for n in range(-10, 11):
            for m in range(-10, 11):
                assert weil_restrict_hom(n * m, d) == weil_restrict_hom(n, d) * weil_restrict_hom(m, d)
        assert weil_restrict_hom(1, d) == 1


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_weil_restrict_hom_certified_degree(d):
    f = pointed(1, 1, lambda x: (weil_restrict_hom(x[0], d),))
    assert certify_degree(f).degree == d


def test_weil_restrict_obj_complex_over_real():
    link = link_real_complex()
    ctx = quadratic_ctx()
    cc = CsaObject(br_complex(), 0, 1)
    out = weil_restrict_obj(ctx, cc, link)
    assert out.model == br_real()
    assert out.brauer_class == 0 and out.degree == 1


def test_weil_restrict_obj_local_model_degree_nine():
    k, l = br_local("k"), br_local("l")
    link = ExtensionLink(k, l, 2, res=ClassMap("scale", 2), cor=ClassMap("identity"))
    ctx = quadratic_ctx()
    d_obj = CsaObject(l, Fraction(1, 3), 3)
    out = weil_restrict_obj(ctx, d_obj, link)
    assert out.brauer_class == Fraction(1, 3)
    assert out.degree == 9


def test_weil_restrict_obj_guards():
    link = link_real_complex()
    ctx = quadratic_ctx()
    with pytest.raises(NotDivisionObject):
        weil_restrict_obj(ctx, CsaObject(br_complex(), 0, 2), link)
    bare = ExtensionLink(br_real(), br_complex(), 2, res=ClassMap("zero"))
    with pytest.raises(NoCorestrictionDeclared):
        weil_restrict_obj(ctx, CsaObject(br_complex(), 0, 1), bare)


def test_base_change_hom_preserves_values():
    link = link_real_complex()
    brr, r, h = real_objects()
    f = CsaHom(r, h, 1)
    out = base_change_hom(f, link)
    assert out.value == f.value == 2
    assert out.generator == 1 and out.multiple == 2
    assert out.source.model == br_complex()


def test_base_change_trivial_difference_keeps_generator_one():
    link = link_real_complex()
    brr, r, _ = real_objects()
    f = CsaHom(r, r, 5)
    out = base_change_hom(f, link)
    assert out.generator == 1 and out.value == 5


def test_base_change_hom_additive_on_seeded_pairs():
    link = link_real_complex()
    brr, r, h = real_objects()
    rng = random.Random(13)
    for _ in range(50):
        m1, m2 = rng.randint(-50, 50), rng.randint(-50, 50)
        f, g = CsaHom(r, h, m1), CsaHom(r, h, m2)
        lhs = base_change_hom(f + g, link)
        rhs = base_change_hom(f, link) + base_change_hom(g, link)
        assert lhs == rhs
        assert base_change_hom(f, link).value == f.value


def test_cor_res_is_multiplication_by_degree():
    assert link_real_complex().verify_cor_res()
    with pytest.raises(ValidationError):
        # cor(res(c)) = 4c != 2c on Q/Z, so the link must be refused.
        ExtensionLink(
            br_local("k"),
            br_local("l"),
            2,
            res=ClassMap("scale", 2),
            cor=ClassMap("scale", 2),
        )


def test_motive_iso_test():
    brr, r, h = real_objects()
    assert motive_iso_test(r, r)
    assert not motive_iso_test(r, h)
    assert motive_iso_test(h, CsaObject(brr, 1, 4))  # H vs M2(H)


def test_restriction_composed_with_weil_restrict_is_n_pow_d():
    # Section-style diagram: compose over Br(C), then corestrict into Br(R);
    # the image of a composite is the product of the images.
    link = link_real_complex()
    ctx = quadratic_ctx()
    cc = CsaObject(br_complex(), 0, 1)
    rest = weil_restrict_obj(ctx, cc, link)
    for n in range(-6, 7):
        for m in range(-6, 7):
            f, g = CsaHom(cc, cc, n), CsaHom(cc, cc, m)
            value = compose(f, g).value
            lhs = hom_from_value(rest, rest, weil_restrict_hom(value, ctx.d))
            rhs = compose(
                hom_from_value(rest, rest, weil_restrict_hom(f.value, ctx.d)),
                hom_from_value(rest, rest, weil_restrict_hom(g.value, ctx.d)),
            )
            assert lhs == rhs


def test_model_from_dict():
    spec = {
        "field": "R",
        "group": {"cyclic": 2},
        "index": {"0": 1, "1": 2},
        "maps": [
            {
                "to": "C",
                "degree": 2,
                "target": {"field": "C", "group": {"trivial": True}, "index": {"0": 1}},
                "res": {"type": "zero"},
                "cor": {"type": "zero"},
            }
        ],
    }
    model, links = model_from_dict(spec)
    assert model == br_real()
    assert links["C"].degree == 2
    assert links["C"].verify_cor_res()


def test_model_validation():
    with pytest.raises(ValidationError):
        BrauerModel("X", CyclicOfOrder(2), {0: 1, 1: 0})
    with pytest.raises(ValidationError):
        BrauerModel("X", CyclicOfOrder(3), {0: 1, 1: 2, 2: 3})  # index(c) != index(-c)
    with pytest.raises(ValidationError):
        BrauerModel("X", CyclicOfOrder(2), {0: 2, 1: 2})
