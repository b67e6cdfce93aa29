"""Fibered semi-groups on finite sets.

A fibered semi-group is a total set E, a base set X, a projection
proj : E -> X, and a multiplication mul defined exactly on the canonical
fiber-product carrier {(a, b) : proj(a) = proj(b)}.  Multiplication must
stay inside the fiber and be associative fiberwise; validation checks both
pointwise and reports the first witness for each failure.

Rigidity means mul is a bijection from the pair carrier onto the total set.
For finite instances that forces every fiber to have at most one element,
which is what the independent counting oracle in the test-suite checks.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .finset import (FinMap, FinSet, PairSet, fiber_product, identity_map,
                     is_bijective, product)
from .reports import Report
from .tokens import tuple_token


@dataclass(frozen=True, eq=True)
class FiberedSemiGroup:
    total: FinSet
    base: FinSet
    proj: FinMap
    mul: FinMap

    __hash__ = None  # type: ignore[assignment]

    def pair_carrier(self) -> PairSet:
        return fiber_product(self.proj, self.proj)


@dataclass(frozen=True, eq=True)
class FsgMorphism:
    """Total-space map and base map between two fibered semi-groups."""

    source: FiberedSemiGroup
    target: FiberedSemiGroup
    total_map: FinMap
    base_map: FinMap

    __hash__ = None  # type: ignore[assignment]


def make_fsgrp(total: FinSet, base: FinSet, proj: FinMap,
               pair_rule) -> FiberedSemiGroup:
    """Build an instance from a Python function on carrier pairs."""
    pairs = fiber_product(proj, proj)
    table = {}
    for tok in pairs.carrier:
        table[tok] = pair_rule(pairs.left.table[tok], pairs.right.table[tok])
    return FiberedSemiGroup(total, base, proj,
                            FinMap(pairs.carrier, total, table))


def _check_shape(f: FiberedSemiGroup) -> PairSet:
    if f.proj.dom != f.total or f.proj.cod != f.base:
        raise InputError("projection must map the total set onto the base set")
    pairs = fiber_product(f.proj, f.proj)
    if f.mul.dom != pairs.carrier:
        missing = sorted(set(pairs.carrier.elements) - set(f.mul.dom.elements))
        extra = sorted(set(f.mul.dom.elements) - set(pairs.carrier.elements))
        raise InputError(
            "mul table must cover exactly the fiber-product carrier "
            f"(missing {missing[:3]}, extra {extra[:3]})")
    if f.mul.cod != f.total:
        raise InputError("mul must land in the total set")
    return pairs


def validate_fsgrp(f: FiberedSemiGroup, name: str = "fsgrp") -> Report:
    """Check fiber compatibility and fiberwise associativity pointwise."""
    pairs = _check_shape(f)
    report = Report(kind="fsgrp-validation")
    proj_t = f.proj.table
    mul_t = f.mul.table

    witness = None
    for tok in pairs.carrier:
        a = pairs.left.table[tok]
        if proj_t[f.mul.table[tok]] != proj_t[a]:
            witness = (f"{tok}: mul lands in fiber "
                       f"{proj_t[mul_t[tok]]} instead of {proj_t[a]}")
            break
    report.add("projection-compatibility", name, witness is None, witness)

    fibers: dict[str, list[str]] = {}
    for e in f.total:
        fibers.setdefault(proj_t[e], []).append(e)
    witness = None
    for fiber in fibers.values():
        if witness:
            break
        for a in fiber:
            if witness:
                break
            for b in fiber:
                if witness:
                    break
                ab = mul_t[tuple_token(a, b)]
                for c in fiber:
                    bc = mul_t[tuple_token(b, c)]
                    left_tok = tuple_token(ab, c)
                    right_tok = tuple_token(a, bc)
                    if left_tok not in mul_t or right_tok not in mul_t:
                        witness = (f"({a},{b},{c}): intermediate product "
                                   "left its fiber")
                        break
                    lhs, rhs = mul_t[left_tok], mul_t[right_tok]
                    if lhs != rhs:
                        witness = f"({a},{b},{c}): {lhs} != {rhs}"
                        break
    report.add("associativity", name, witness is None, witness)
    return report


def ensure_valid(f: FiberedSemiGroup, name: str = "fsgrp") -> None:
    report = validate_fsgrp(f, name)
    if not report.ok:
        first = report.failed()[0]
        raise InputError(f"invalid fibered semi-group ({first.check}: "
                         f"{first.witness})")


def is_rigid(f: FiberedSemiGroup) -> bool:
    """True when mul is a bijection from the pair carrier onto the total set."""
    ensure_valid(f)
    return is_bijective(f.mul)


def opposite(f: FiberedSemiGroup) -> FiberedSemiGroup:
    """Same projection, multiplication with the arguments swapped."""
    pairs = fiber_product(f.proj, f.proj)
    table = {tok: f.mul.table[tuple_token(pairs.right.table[tok],
                                          pairs.left.table[tok])]
             for tok in pairs.carrier}
    return FiberedSemiGroup(f.total, f.base, f.proj,
                            FinMap(pairs.carrier, f.total, table))


def unit_fsgrp() -> FiberedSemiGroup:
    """The one-point instance on the empty-tuple token; strict product unit."""
    one = FinSet(["()"])
    ident = identity_map(one)
    return make_fsgrp(one, one, ident, lambda a, b: "()")


def product_fsgrp(f: FiberedSemiGroup, g: FiberedSemiGroup) -> FiberedSemiGroup:
    """Componentwise product; carriers splice, so the product is associative
    and has unit_fsgrp() as a strict unit."""
    total = product(f.total, g.total)
    base = product(f.base, g.base)
    proj = FinMap(total.carrier, base.carrier,
                  {tok: tuple_token(f.proj.table[total.left.table[tok]],
                                    g.proj.table[total.right.table[tok]])
                   for tok in total.carrier})
    pairs = fiber_product(proj, proj)
    table = {}
    for tok in pairs.carrier:
        p, q = pairs.left.table[tok], pairs.right.table[tok]
        fa, ga = total.left.table[p], total.right.table[p]
        fb, gb = total.left.table[q], total.right.table[q]
        table[tok] = tuple_token(f.mul.table[tuple_token(fa, fb)],
                                 g.mul.table[tuple_token(ga, gb)])
    return FiberedSemiGroup(total.carrier, base.carrier, proj,
                            FinMap(pairs.carrier, total.carrier, table))


def identity_fsg_morphism(f: FiberedSemiGroup) -> FsgMorphism:
    return FsgMorphism(f, f, identity_map(f.total), identity_map(f.base))


def compose_fsg_morphisms(m1: FsgMorphism, m2: FsgMorphism) -> FsgMorphism:
    if m1.target != m2.source:
        raise InputError("morphisms not composable")
    return FsgMorphism(m1.source, m2.target,
                       m1.total_map.then(m2.total_map),
                       m1.base_map.then(m2.base_map))


def swap_fsg_morphism(f: FiberedSemiGroup, g: FiberedSemiGroup) -> FsgMorphism:
    """The symmetry product_fsgrp(f, g) -> product_fsgrp(g, f)."""
    fg, gf = product_fsgrp(f, g), product_fsgrp(g, f)
    ftotal = product(f.total, g.total)
    fbase = product(f.base, g.base)
    total_map = FinMap(fg.total, gf.total,
                       {tok: tuple_token(ftotal.right.table[tok],
                                         ftotal.left.table[tok])
                        for tok in fg.total})
    base_map = FinMap(fg.base, gf.base,
                      {tok: tuple_token(fbase.right.table[tok],
                                        fbase.left.table[tok])
                       for tok in fg.base})
    return FsgMorphism(fg, gf, total_map, base_map)


def validate_fsg_morphism(m: FsgMorphism, name: str = "morphism") -> Report:
    """Check the base square and the multiplication square pointwise."""
    src, tgt = m.source, m.target
    if m.total_map.dom != src.total or m.total_map.cod != tgt.total:
        raise InputError("total map endpoints do not match the instances")
    if m.base_map.dom != src.base or m.base_map.cod != tgt.base:
        raise InputError("base map endpoints do not match the instances")
    report = Report(kind="fsgrp-morphism-validation")

    witness = None
    for e in src.total:
        lhs = tgt.proj.table[m.total_map.table[e]]
        rhs = m.base_map.table[src.proj.table[e]]
        if lhs != rhs:
            witness = f"{e}: {lhs} != {rhs}"
            break
    report.add("base-square", name, witness is None, witness)

    pairs = fiber_product(src.proj, src.proj)
    witness = None
    for tok in pairs.carrier:
        a, b = pairs.left.table[tok], pairs.right.table[tok]
        fa, fb = m.total_map.table[a], m.total_map.table[b]
        image_tok = tuple_token(fa, fb)
        if image_tok not in tgt.mul.table:
            witness = (f"({a},{b}): image pair {image_tok} is not in the "
                       "target carrier")
            break
        lhs = m.total_map.table[src.mul.table[tok]]
        rhs = tgt.mul.table[image_tok]
        if lhs != rhs:
            witness = f"({a},{b}): {lhs} != {rhs}"
            break
    report.add("multiplication-square", name, witness is None, witness)
    return report


def fsgrp_to_jsonable(f: FiberedSemiGroup) -> dict:
    pairs = fiber_product(f.proj, f.proj)
    triples = sorted(
        [pairs.left.table[tok], pairs.right.table[tok], f.mul.table[tok]]
        for tok in pairs.carrier)
    return {
        "total": list(f.total.elements),
        "base": list(f.base.elements),
        "proj": dict(sorted(f.proj.table.items())),
        "mul": {"pairs": triples},
    }


def fsgrp_from_jsonable(data: object) -> FiberedSemiGroup:
    if not isinstance(data, dict):
        raise InputError("fsgrp document must be a JSON object")
    for key in ("total", "base", "proj", "mul"):
        if key not in data:
            raise InputError(f"fsgrp document missing {key!r}")
    if not isinstance(data["proj"], dict):
        raise InputError("proj must be an object")
    if (not isinstance(data["mul"], dict) or "pairs" not in data["mul"]
            or not isinstance(data["mul"]["pairs"], list)):
        raise InputError("mul must be an object with a pairs array")
    total = FinSet(_string_list(data["total"], "total"))
    base = FinSet(_string_list(data["base"], "base"))
    proj = FinMap(total, base, {str(k): str(v)
                                for k, v in data["proj"].items()})
    pairs = fiber_product(proj, proj)
    table: dict[str, str] = {}
    for entry in data["mul"]["pairs"]:
        if (not isinstance(entry, list) or len(entry) != 3
                or not all(isinstance(x, str) for x in entry)):
            raise InputError("each mul pair must be [left, right, result]")
        a, b, res = entry
        tok = tuple_token(a, b)
        if tok not in pairs.carrier:
            raise InputError(f"mul pair ({a},{b}) is not in the "
                             "fiber-product carrier")
        if tok in table:
            raise InputError(f"duplicate mul pair ({a},{b})")
        if res not in total:
            raise InputError(f"mul result {res!r} is not in the total set")
        table[tok] = res
    missing = [tok for tok in pairs.carrier if tok not in table]
    if missing:
        raise InputError(f"mul table is missing carrier pairs {missing[:3]}")
    return FiberedSemiGroup(total, base, proj,
                            FinMap(pairs.carrier, total, table))


def _string_list(value: object, label: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(x, str)
                                              for x in value):
        raise InputError(f"{label} must be an array of strings")
    return value
