"""Cylinder construction: semi-groups on identity bodies, bimodules on
general bodies, transported morphisms, the gluing comparison cell, and
the law sweep over finite universes."""

import pytest

from cyltqft.bimod import (compose_equivariant, identity_bimodule,
                           identity_morphism, is_rigid_bimodule)
from cyltqft.ccob import (EMPTY_OBJECT, CobDiffeo, Cobordism, ObjectDiffeo,
                          compose_cob_diffeos, compose_object_diffeos,
                          cylinder, cylinder_diffeo, glue,
                          identity_cob_diffeo, identity_object_diffeo,
                          oriented_object, positive_object,
                          reverse_orientation)
from cyltqft.cyl import (CylinderFunctor, FunctorUniverse, associator,
                         cylinder_bimodule, cylinder_bimodule_morphism,
                         cylinder_fsg_morphism, cylinder_semigroup,
                         verify_double_functor)
from cyltqft.errors import TheoryViolation
from cyltqft.finset import FinMap, FinSet, is_bijective
from cyltqft.fsgrp import (compose_fsg_morphisms, identity_fsg_morphism,
                           is_rigid, opposite, unit_fsgrp)
from cyltqft.theory import constant_sheaf_theory, free_boundary_theory
from cyltqft.tokens import tuple_token

S2 = ("0", "1")
TH = constant_sheaf_theory(S2)

ONE = positive_object(["c1"])
TWO = positive_object(["c1", "c2"])


def pants(extra_closed=0):
    """Two legs merging into one trunk through a single region."""
    source = positive_object(["p1", "p2"])
    target = positive_object(["q1"])
    regions = FinSet(["g0"] + [f"z{i}" for i in range(extra_closed)])
    return Cobordism(source, target, regions,
                     FinMap(source.components, regions,
                            {"p1": "g0", "p2": "g0"}),
                     FinMap(target.components, regions, {"q1": "g0"}))


# ----------------------------------------------------- semi-group level

def test_one_component_cylinder_semigroup():
    e = cylinder_semigroup(TH, ONE)
    assert e.total.elements == ("0", "1")
    assert e.base.elements == ("0", "1")
    assert is_bijective(e.proj)
    for v in S2:
        assert e.mul.table[tuple_token(v, v)] == v
    assert is_rigid(e)


def test_two_component_cylinder_semigroup_is_componentwise():
    e = cylinder_semigroup(TH, TWO)
    assert len(e.total) == len(e.base) == 4
    assert is_bijective(e.proj)
    # multiplication is defined on matching fibers only, and the fibers
    # are singletons, so the table is the diagonal
    for x in e.total.elements:
        assert e.mul.table[tuple_token(x, x)] == x
    assert is_rigid(e)


def test_empty_object_gives_the_unit_semigroup():
    assert cylinder_semigroup(TH, EMPTY_OBJECT) == unit_fsgrp()


def test_reversed_object_gives_the_opposite_semigroup():
    obj = oriented_object({"c1": "+", "c2": "-"})
    assert (cylinder_semigroup(TH, reverse_orientation(obj))
            == opposite(cylinder_semigroup(TH, obj)))


def test_identity_diffeo_transports_to_identity_morphism():
    mor = cylinder_fsg_morphism(TH, identity_object_diffeo(TWO))
    assert mor == identity_fsg_morphism(cylinder_semigroup(TH, TWO))


def test_swap_diffeo_transports_to_the_swap():
    swap = ObjectDiffeo(TWO, TWO,
                        FinMap(TWO.components, TWO.components,
                               {"c1": "c2", "c2": "c1"}))
    mor = cylinder_fsg_morphism(TH, swap)
    for a in S2:
        for b in S2:
            assert mor.total_map.table[tuple_token(a, b)] == tuple_token(b, a)
            assert mor.base_map.table[tuple_token(a, b)] == tuple_token(b, a)


def test_transport_respects_composition_of_diffeos():
    swap = ObjectDiffeo(TWO, TWO,
                        FinMap(TWO.components, TWO.components,
                               {"c1": "c2", "c2": "c1"}))
    both = compose_object_diffeos(swap, swap)
    lhs = cylinder_fsg_morphism(TH, both)
    rhs = compose_fsg_morphisms(cylinder_fsg_morphism(TH, swap),
                                cylinder_fsg_morphism(TH, swap))
    assert lhs == rhs
    assert lhs == identity_fsg_morphism(cylinder_semigroup(TH, TWO))


# ------------------------------------------------------- bimodule level

def test_cylinder_body_gives_the_identity_bimodule():
    e = cylinder_semigroup(TH, TWO)
    assert cylinder_bimodule(TH, cylinder(TWO)) == identity_bimodule(e)


def test_pants_bimodule_merges_both_legs():
    b = cylinder_bimodule(TH, pants())
    assert b.carrier.elements == ("0", "1")
    for v in S2:
        assert b.src.table[v] == tuple_token(v, v)
        assert b.tgt.table[v] == v
        key = tuple_token(tuple_token(v, v), v)
        assert b.lact.table[key] == v
        assert b.ract.table[tuple_token(v, v)] == v
    assert is_rigid_bimodule(b)


def test_closed_region_doubles_the_carrier():
    assert len(cylinder_bimodule(TH, pants(extra_closed=1)).carrier) == 4
    assert len(cylinder_bimodule(TH, pants(extra_closed=2)).carrier) == 8


def test_identity_cob_diffeo_transports_to_identity_cell():
    m = pants()
    cell = cylinder_bimodule_morphism(TH, identity_cob_diffeo(m))
    assert cell == identity_morphism(cylinder_bimodule(TH, m))


def test_leg_swap_is_an_equivariant_cell():
    m = pants()
    swap_src = FinMap(m.source.components, m.source.components,
                      {"p1": "p2", "p2": "p1"})
    d = CobDiffeo(m, m, FinMap(m.regions, m.regions, {"g0": "g0"}),
                  swap_src,
                  FinMap(m.target.components, m.target.components,
                         {"q1": "q1"}))
    cell = cylinder_bimodule_morphism(TH, d)
    # values live on the single region, untouched by the leg swap
    for v in S2:
        assert cell.mid_map.table[v] == v


def test_cell_transport_respects_composition():
    m = pants()
    swap_src = FinMap(m.source.components, m.source.components,
                      {"p1": "p2", "p2": "p1"})
    d = CobDiffeo(m, m, FinMap(m.regions, m.regions, {"g0": "g0"}),
                  swap_src,
                  FinMap(m.target.components, m.target.components,
                         {"q1": "q1"}))
    lhs = cylinder_bimodule_morphism(TH, compose_cob_diffeos(d, d))
    rhs = compose_equivariant(cylinder_bimodule_morphism(TH, d),
                              cylinder_bimodule_morphism(TH, d))
    assert lhs == rhs


# ----------------------------------------------------------- associator

def test_associator_of_two_cylinders_is_the_diagonal():
    c = cylinder(ONE)
    a = associator(TH, c, c)
    assert len(a.source.carrier) == len(a.target.carrier) == 2
    for v in S2:
        assert a.mid_map.table[v] == tuple_token(v, v)
    assert is_bijective(a.mid_map)


def test_associator_carrier_matches_fiber_product_count():
    th3 = constant_sheaf_theory(("0", "1", "2"))
    m = pants()
    n = cylinder(positive_object(["q1"]))
    a = associator(th3, m, n)
    bm = cylinder_bimodule(th3, m)
    bn = cylinder_bimodule(th3, n)
    # count matched pairs straight off the projection tables
    expected = sum(1 for x in bm.carrier.elements
                   for y in bn.carrier.elements
                   if bm.tgt.table[x] == bn.src.table[y])
    assert len(a.target.carrier) == expected
    assert len(a.source.carrier) == expected


def test_associator_rejects_non_composable_bodies():
    with pytest.raises(Exception):
        associator(TH, cylinder(ONE), cylinder(TWO))


# ------------------------------------------------------------ law sweep

def law_sweep_universe():
    o2 = positive_object(["p1", "p2"])
    o1 = positive_object(["q1"])
    m = pants()
    swap = ObjectDiffeo(o2, o2,
                        FinMap(o2.components, o2.components,
                               {"p1": "p2", "p2": "p1"}))
    pants_swap = CobDiffeo(m, m, FinMap(m.regions, m.regions, {"g0": "g0"}),
                           swap.comp_bij,
                           FinMap(m.target.components, m.target.components,
                                  {"q1": "q1"}))
    return FunctorUniverse(
        objects=(o1, o2),
        cobordisms=(cylinder(o1), m, cylinder(o2)),
        object_diffeos=(identity_object_diffeo(o1), swap),
        cob_diffeos=(cylinder_diffeo(swap), pants_swap))


def test_law_sweep_passes_on_a_mixed_universe():
    rep = verify_double_functor(TH, law_sweep_universe())
    assert rep.ok, rep.failed_checks()
    by_check = {}
    for r in rep.records:
        by_check.setdefault(r.check, []).append(r)
    assert len(by_check["hexagon"]) == 5
    assert len(by_check["associator-bijective"]) == 4
    assert "associator-naturality" in by_check
    assert "cell-functoriality" in by_check
    assert "identity-cell" in by_check
    assert "involution" in by_check


def test_law_sweep_on_the_empty_universe_is_vacuous():
    rep = verify_double_functor(TH, FunctorUniverse((), ()))
    assert rep.ok
    assert [r.check for r in rep.records] == ["monoidality"]


# ---------------------------------------------------------- refusal path

def test_free_boundary_theory_refuses_the_construction():
    free = free_boundary_theory(S2, "0")
    with pytest.raises(TheoryViolation) as err:
        cylinder_semigroup(free, ONE)
    assert err.value.guard == "cylinder-multiplication"


# ---------------------------------------------------------------- caching

def test_functor_cache_is_a_pure_speedup():
    fun = CylinderFunctor(TH)
    e1 = fun.semigroup(TWO)
    assert fun.semigroup(TWO) is e1
    assert e1 == cylinder_semigroup(TH, TWO)
    b1 = fun.bimodule(pants())
    assert fun.bimodule(pants()) is b1
    assert b1 == cylinder_bimodule(TH, pants())
