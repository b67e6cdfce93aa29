import pytest

from cyltqft.errors import InputError
from cyltqft.finset import FinMap, FinSet, constant_map, identity_map, product
from cyltqft.fsgrp import (FsgMorphism, compose_fsg_morphisms,
                           fsgrp_from_jsonable, fsgrp_to_jsonable,
                           identity_fsg_morphism, is_rigid, make_fsgrp,
                           opposite, product_fsgrp, swap_fsg_morphism,
                           unit_fsgrp, validate_fsg_morphism, validate_fsgrp)
from cyltqft.tokens import tuple_token
from cyltqft.universe import enumerate_fsgrps, structured_fsgrps

POINT = FinSet(["*"])


def over_point(n, rule):
    """Z/n-style carrier over a one-point base with the given pair rule."""
    total = FinSet([str(i) for i in range(n)])
    return make_fsgrp(total, POINT, constant_map(total, POINT, "*"),
                      lambda a, b: str(rule(int(a), int(b))))


def trivial_on(elems):
    """Every fiber a single point: base = total, proj = id, mul(v,v) = v."""
    s = FinSet(elems)
    return make_fsgrp(s, s, identity_map(s), lambda a, b: a)


def rigid_by_counts(f):
    """The finite rigidity criterion, computed without is_rigid's code:
    every fiber has at most one element and mul is a bijection by count."""
    sizes = {}
    for e in f.total:
        x = f.proj.table[e]
        sizes[x] = sizes.get(x, 0) + 1
    fibers_small = all(v <= 1 for v in sizes.values())
    values = list(f.mul.table.values())
    mul_bijective = (len(set(values)) == len(values)
                     and len(values) == len(f.total))
    return fibers_small and mul_bijective


def test_mod3_subtraction_fails_associativity():
    f = over_point(3, lambda a, b: (a - b) % 3)
    report = validate_fsgrp(f, "z3-sub")
    failed = {r.check for r in report.failed()}
    assert failed == {"associativity"}
    [rec] = [r for r in report.records if r.check == "associativity"]
    assert rec.witness is not None
    # (0,1,2) is a violating triple: (0-1)-2 = 0 but 0-(1-2) = 1
    mul = f.mul.table
    lhs = mul[tuple_token(mul[tuple_token("0", "1")], "2")]
    rhs = mul[tuple_token("0", mul[tuple_token("1", "2")])]
    assert (lhs, rhs) == ("0", "1")


def test_mod_addition_validates():
    for n in (1, 2, 3, 4):
        f = over_point(n, lambda a, b: (a + b) % n)
        assert validate_fsgrp(f).ok


def test_singleton_is_rigid():
    assert is_rigid(over_point(1, lambda a, b: 0))


def test_z2_is_valid_but_not_rigid():
    f = over_point(2, lambda a, b: (a + b) % 2)
    assert validate_fsgrp(f).ok
    assert len(f.mul.dom) == 4 and len(f.total) == 2
    assert not is_rigid(f)


def test_trivial_fsgrp_is_rigid():
    assert is_rigid(trivial_on(["0", "1"]))


def test_is_rigid_rejects_invalid_input():
    with pytest.raises(InputError):
        is_rigid(over_point(3, lambda a, b: (a - b) % 3))


def test_rigidity_matches_count_criterion_on_enumeration_slice():
    for name, f in enumerate_fsgrps(max_total=3, max_base=2):
        assert is_rigid(f) == rigid_by_counts(f), name
    for name, f in structured_fsgrps():
        assert is_rigid(f) == rigid_by_counts(f), name


def test_opposite_of_left_projection_is_right_projection():
    left = over_point(3, lambda a, b: a)
    right = over_point(3, lambda a, b: b)
    assert opposite(left) == right
    assert opposite(right) == left


def test_opposite_of_commutative_is_itself():
    f = over_point(2, lambda a, b: (a + b) % 2)
    assert opposite(f) == f


def test_opposite_preserves_validity_and_rigidity():
    for name, f in enumerate_fsgrps(max_total=3, max_base=2):
        op = opposite(f)
        assert validate_fsgrp(op).ok, name
        assert is_rigid(op) == is_rigid(f), name
        assert opposite(op) == f, name


def test_product_multiplies_carrier_sizes():
    f = over_point(2, lambda a, b: (a + b) % 2)
    g = trivial_on(["x", "y", "z"])
    fg = product_fsgrp(f, g)
    assert len(fg.total) == len(f.total) * len(g.total)
    assert validate_fsgrp(fg).ok


def test_product_of_trivials_is_trivial_and_rigid():
    fg = product_fsgrp(trivial_on(["0", "1"]), trivial_on(["0", "1"]))
    assert len(fg.total) == 4
    assert is_rigid(fg)
    # mul is forced on singleton fibers: (v,v) goes back to v
    for v in fg.total:
        assert fg.mul.table[tuple_token(v, v)] == v


def test_product_is_literally_associative():
    f = over_point(2, lambda a, b: (a + b) % 2)
    g = trivial_on(["x", "y"])
    h = over_point(2, lambda a, b: a)
    assert product_fsgrp(product_fsgrp(f, g), h) \
        == product_fsgrp(f, product_fsgrp(g, h))


def test_unit_fsgrp_is_a_strict_unit():
    e = unit_fsgrp()
    assert validate_fsgrp(e).ok and is_rigid(e)
    f = over_point(2, lambda a, b: (a + b) % 2)
    assert product_fsgrp(e, f) == f
    assert product_fsgrp(f, e) == f


def test_pair_carrier_over_point_base_is_the_full_square():
    f = over_point(3, lambda a, b: a)
    assert f.pair_carrier().carrier == product(f.total, f.total).carrier


def test_identity_morphism_validates():
    f = over_point(2, lambda a, b: (a + b) % 2)
    assert validate_fsg_morphism(identity_fsg_morphism(f)).ok


def test_swap_morphism_validates():
    f = over_point(2, lambda a, b: (a + b) % 2)
    g = trivial_on(["x", "y"])
    assert validate_fsg_morphism(swap_fsg_morphism(f, g)).ok
    # swapping a square is an automorphism up to the literal factor order
    sw = swap_fsg_morphism(f, f)
    assert sw.source == sw.target
    assert validate_fsg_morphism(sw).ok


def test_constant_total_map_fails_base_square():
    f = trivial_on(["0", "1"])
    bad = FsgMorphism(f, f, constant_map(f.total, f.total, "0"),
                      identity_map(f.base))
    report = validate_fsg_morphism(bad)
    assert {r.check for r in report.failed()} == {"base-square"}
    [rec] = [r for r in report.failed()]
    assert rec.witness == "1: 0 != 1"


def test_compose_identities_is_identity():
    f = over_point(2, lambda a, b: (a + b) % 2)
    i = identity_fsg_morphism(f)
    assert compose_fsg_morphisms(i, i) == i
    g = trivial_on(["x"])
    with pytest.raises(InputError):
        compose_fsg_morphisms(i, identity_fsg_morphism(g))


def test_json_round_trip():
    f = over_point(3, lambda a, b: (a + b) % 3)
    assert fsgrp_from_jsonable(fsgrp_to_jsonable(f)) == f


def test_json_rejects_missing_mul_pair():
    doc = fsgrp_to_jsonable(over_point(2, lambda a, b: (a + b) % 2))
    doc["mul"]["pairs"].pop()
    with pytest.raises(InputError):
        fsgrp_from_jsonable(doc)


def test_json_rejects_malformed_documents():
    with pytest.raises(InputError):
        fsgrp_from_jsonable(["not", "an", "object"])
    with pytest.raises(InputError):
        fsgrp_from_jsonable({"total": ["a"], "base": ["*"]})
    doc = fsgrp_to_jsonable(trivial_on(["0"]))
    doc["mul"]["pairs"].append(["0", "0", "0"])
    with pytest.raises(InputError):
        fsgrp_from_jsonable(doc)


def test_projection_compatibility_failure_is_reported():
    total = FinSet(["a", "b"])
    base = FinSet(["x", "y"])
    proj = FinMap(total, base, {"a": "x", "b": "y"})
    pairs_tok = tuple_token("a", "a")
    mul = FinMap(FinSet([pairs_tok, tuple_token("b", "b")]), total,
                 {pairs_tok: "b", tuple_token("b", "b"): "b"})
    from cyltqft.fsgrp import FiberedSemiGroup
    f = FiberedSemiGroup(total, base, proj, mul)
    report = validate_fsgrp(f)
    assert "projection-compatibility" in {r.check for r in report.failed()}
