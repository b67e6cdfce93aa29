"""Local theories and the nine-axiom auditor.

The constant theory is the positive control (it satisfies everything by
construction) and the free-boundary theory with two or more values is the
negative control (it breaks the diagonal and gluing axioms and nothing
else).  The gluing map's image is cross-checked against an equalizer
computed by brute filtering, independent of the theory's own code.
"""

import itertools

import pytest

from cyltqft.ccob import (GluingTriple, cylinder, oriented_object,
                          positive_object)
from cyltqft.errors import InputError
from cyltqft.finset import FinSet, is_injective
from cyltqft.theory import (AXIOM_KEYS, AuditUniverse, assignments,
                            check_axioms, constant_sheaf_theory,
                            describe_cobordism, free_boundary_theory,
                            read_assignment)
from cyltqft.tokens import tuple_token
from cyltqft.universe import theory_universe

S2 = ("0", "1")


def one_region_triple():
    """A cylinder self-glued into a closed torus-like body."""
    c = cylinder(positive_object(["c1"]))
    return GluingTriple(c, (("c1:out", "c1:in"),))


# ------------------------------------------------------------ assignments

def test_assignments_are_positional_over_sorted_keys():
    space = assignments(["b", "a"], FinSet(S2))
    assert len(space) == 4
    vals = read_assignment(tuple_token("0", "1"), ["b", "a"])
    assert vals == {"a": "0", "b": "1"}


def test_assignments_over_no_keys_is_a_singleton():
    space = assignments([], FinSet(S2))
    assert space.elements == ("()",)


def test_reserved_characters_are_rejected():
    with pytest.raises(InputError):
        constant_sheaf_theory(["ok", "no,comma"])
    with pytest.raises(InputError):
        constant_sheaf_theory([])


# -------------------------------------------------------- constant theory

def test_constant_spaces_and_restriction():
    th = constant_sheaf_theory(S2)
    sigma = positive_object(["c1"])
    assert len(th.germ_space(sigma)) == 2
    c = cylinder(sigma)
    assert len(th.solution_space(c)) == 2
    r = th.restriction(c)
    # one region feeding both boundary circles: the image is the diagonal
    assert sorted(r.table.values()) == [tuple_token("0", "0"),
                                        tuple_token("1", "1")]


def test_constant_solutions_count_regions_not_boundary():
    th = constant_sheaf_theory(("0", "1", "2"))
    sigma3 = positive_object(["c1", "c2", "c3"])
    m = cylinder(sigma3)
    # collapse all three components into one region
    from cyltqft.ccob import Cobordism
    from cyltqft.finset import FinMap, constant_map
    one = FinSet(["g0"])
    m1 = Cobordism(sigma3, sigma3, one,
                   constant_map(sigma3.components, one, "g0"),
                   constant_map(sigma3.components, one, "g0"))
    assert len(th.solution_space(m1)) == 3
    assert is_injective(th.restriction(m1))
    assert len(th.solution_space(m)) == 27


def test_empty_object_has_singleton_germ_space():
    th = constant_sheaf_theory(S2)
    from cyltqft.ccob import EMPTY_OBJECT
    assert len(th.germ_space(EMPTY_OBJECT)) == 1


def test_gluing_map_lands_in_the_equalizer():
    """theory.gluing sends glued-body solutions into body solutions; its
    image must be exactly the solutions equal on paired boundaries, which
    is recomputed here by brute filtering."""
    th = constant_sheaf_theory(S2)
    t = one_region_triple()
    glu = th.gluing(t)
    assert is_injective(glu)
    body = t.body
    equalizer = []
    for x in th.solution_space(body):
        vals = read_assignment(x, body.regions)
        if all(vals[body.in_tgt.table["c1"]] == vals[body.in_src.table["c1"]]
               for _ in [0]):
            equalizer.append(x)
    assert sorted(glu.table.values()) == sorted(equalizer)


def test_constant_passes_all_axioms_small_universe():
    th = constant_sheaf_theory(S2)
    universe = theory_universe(max_components=2, max_regions=2,
                               max_boundary=2)
    report = check_axioms(th, universe)
    assert report.ok
    assert [r.check for r in report.records] == list(AXIOM_KEYS)


def test_axiom_report_covers_every_axiom_exactly_once():
    th = constant_sheaf_theory(("0",))
    universe = theory_universe(max_components=1, max_regions=1,
                               max_boundary=1)
    report = check_axioms(th, universe)
    counts = {}
    for r in report.records:
        counts[r.check] = counts.get(r.check, 0) + 1
    assert counts == {k: 1 for k in AXIOM_KEYS}


def test_empty_universe_is_a_vacuous_pass():
    th = constant_sheaf_theory(S2)
    universe = AuditUniverse(objects=(), cobordisms=(), triples=())
    assert check_axioms(th, universe).ok


def test_union_pairs_default_is_the_full_square():
    c = cylinder(positive_object(["c1"]))
    universe = AuditUniverse(objects=(), cobordisms=(c, c), triples=())
    assert len(universe.pairs()) == 4
    sliced = AuditUniverse(objects=(), cobordisms=(c, c), triples=(),
                           union_pairs=((c, c),))
    assert len(sliced.pairs()) == 1


# --------------------------------------------------- free-boundary theory

def test_free_boundary_with_one_value_is_indistinguishable():
    th = free_boundary_theory(("0",), "0")
    universe = theory_universe(max_components=2, max_regions=2,
                               max_boundary=2)
    assert check_axioms(th, universe).ok


def test_free_boundary_fill_must_be_in_base():
    with pytest.raises(InputError):
        free_boundary_theory(S2, "7")


def test_free_boundary_solution_space_is_boundary_functions():
    th = free_boundary_theory(S2, "0")
    c = cylinder(positive_object(["c1"]))
    # two boundary circles, no region dependence: 2^2 solutions
    assert len(th.solution_space(c)) == 4
    r = th.restriction(c)
    assert sorted(set(r.table.values())) == sorted(
        tuple_token(a, b) for a in S2 for b in S2)


def test_free_boundary_gluing_image_smaller_than_equalizer():
    th = free_boundary_theory(S2, "0")
    t = one_region_triple()
    glu = th.gluing(t)
    body_space = th.solution_space(t.body)
    # the equalizer has one solution per matching boundary pair
    matching = [x for x in body_space
                if read_assignment(x, ["c1:in", "c1:out"])["c1:in"]
                == read_assignment(x, ["c1:in", "c1:out"])["c1:out"]]
    assert len(set(glu.table.values())) == 1
    assert len(matching) == 2


def test_free_boundary_fails_exactly_diagonal_and_gluing():
    th = free_boundary_theory(S2, "0")
    universe = theory_universe(max_components=2, max_regions=2,
                               max_boundary=2)
    report = check_axioms(th, universe)
    assert not report.ok
    assert report.failed_checks() == ["diagonal", "gluing"]
    for rec in report.failed():
        assert rec.witness


def test_free_boundary_diagonal_witness_names_the_off_diagonal_pair():
    th = free_boundary_theory(S2, "0")
    universe = theory_universe(max_components=1, max_regions=1,
                               max_boundary=1)
    report = check_axioms(th, universe)
    [diag] = [r for r in report.records if r.check == "diagonal"]
    assert not diag.passed
    assert "(0,1)" in diag.witness


# ------------------------------------------------------------ descriptors

def test_describe_cobordism_is_stable():
    c = cylinder(oriented_object({"c1": "+", "c2": "-"}))
    assert describe_cobordism(c) == "[c1+,c2-]->[c1+,c2-]/2r"


def test_axiom_universe_quantifies_over_given_pairs():
    """The monoidal axioms run over pairs(); a sliced universe must audit
    exactly the slice."""
    th = constant_sheaf_theory(S2)
    c = cylinder(positive_object(["c1"]))
    full = AuditUniverse(objects=(), cobordisms=(c,), triples=())
    sliced = AuditUniverse(objects=(), cobordisms=(c,), triples=(),
                           union_pairs=())
    full_rep = check_axioms(th, full)
    sliced_rep = check_axioms(th, sliced)
    assert full_rep.ok and sliced_rep.ok
    def count(rep):
        rec = [r for r in rep.records if r.check == "region-decomposition"][0]
        return rec.instance
    assert count(full_rep) == "1 instances"
    assert count(sliced_rep) == "0 instances"
