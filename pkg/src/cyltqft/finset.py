"""Finite sets, total maps, and the small diagram toolbox.

A FinSet is an immutable sorted tuple of distinct string tokens.  A FinMap
is a total lookup table between two FinSets.  On top of those sit the
handful of constructions everything else in the package is assembled from:
binary products, fiber products, tagged disjoint unions, coequalizers, and
a pointwise commutation checker that reports the first failing element.

Composite carriers use the flat tuple tokens from :mod:`cyltqft.tokens`, so
iterated pairings agree on the nose no matter how they are parenthesized.
Quotients pick the least member of each class as its representative, so a
coequalizer computed in stages equals the coequalizer computed at once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InputError
from .tokens import tuple_token


@dataclass(frozen=True)
class FinSet:
    elements: tuple[str, ...]

    def __init__(self, elements):
        elems = tuple(sorted(elements))
        for e in elems:
            if not isinstance(e, str) or e == "":
                raise InputError("set elements must be non-empty strings")
        if len(set(elems)) != len(elems):
            dupes = sorted({e for e in elems if elems.count(e) > 1})
            raise InputError(f"duplicate element tokens: {dupes}")
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "_members", frozenset(elems))

    def __contains__(self, item: str) -> bool:
        return item in self._members

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)


EMPTY = FinSet(())


@dataclass(frozen=True, eq=True)
class FinMap:
    """Total map between FinSets, stored as an explicit table."""

    dom: FinSet
    cod: FinSet
    table: dict[str, str]

    def __post_init__(self):
        missing = [x for x in self.dom if x not in self.table]
        if missing:
            raise InputError(f"map not total, missing {missing[:3]}")
        extra = sorted(set(self.table) - set(self.dom.elements))
        if extra:
            raise InputError(f"table keys outside domain: {extra[:3]}")
        codset = set(self.cod.elements)
        bad = sorted(v for v in self.table.values() if v not in codset)
        if bad:
            raise InputError(f"table values outside codomain: {bad[:3]}")

    __hash__ = None  # type: ignore[assignment]  # tables are mutable dicts

    def __call__(self, x: str) -> str:
        try:
            return self.table[x]
        except KeyError:
            raise InputError(f"element {x!r} not in domain") from None

    def then(self, other: FinMap) -> FinMap:
        """Diagrammatic composition: apply self first, then other."""
        if self.cod != other.dom:
            raise InputError("composition mismatch: codomain != next domain")
        return FinMap(self.dom, other.cod,
                      {x: other.table[y] for x, y in self.table.items()})


def identity_map(a: FinSet) -> FinMap:
    return FinMap(a, a, {x: x for x in a})


def constant_map(a: FinSet, b: FinSet, value: str) -> FinMap:
    if value not in b:
        raise InputError(f"constant value {value!r} not in codomain")
    return FinMap(a, b, {x: value for x in a})


def compose(*maps: FinMap) -> FinMap:
    """Compose maps diagrammatically (left to right)."""
    if not maps:
        raise InputError("compose needs at least one map")
    out = maps[0]
    for m in maps[1:]:
        out = out.then(m)
    return out


def is_injective(f: FinMap) -> bool:
    return len(set(f.table.values())) == len(f.table)


def is_surjective(f: FinMap) -> bool:
    return set(f.table.values()) == set(f.cod.elements)


def is_bijective(f: FinMap) -> bool:
    return is_injective(f) and is_surjective(f)


def inverse(f: FinMap) -> FinMap:
    if not is_bijective(f):
        raise InputError("map is not bijective, cannot invert")
    return FinMap(f.cod, f.dom, {v: k for k, v in f.table.items()})


@dataclass(frozen=True)
class PairSet:
    """A carrier of flat pair tokens with its two projections."""

    carrier: FinSet
    left: FinMap
    right: FinMap


def _paired_carrier(pairs: list[tuple[str, str]], left_cod: FinSet,
                    right_cod: FinSet) -> PairSet:
    tokens: dict[str, tuple[str, str]] = {}
    for a, b in pairs:
        tok = tuple_token(a, b)
        if tok in tokens and tokens[tok] != (a, b):
            raise InputError(
                f"carrier token collision: {tokens[tok]} and {(a, b)} both "
                f"flatten to {tok!r}")
        tokens[tok] = (a, b)
    carrier = FinSet(tokens)
    left = FinMap(carrier, left_cod, {t: ab[0] for t, ab in tokens.items()})
    right = FinMap(carrier, right_cod, {t: ab[1] for t, ab in tokens.items()})
    return PairSet(carrier, left, right)


def product(a: FinSet, b: FinSet) -> PairSet:
    return _paired_carrier(list(itertools.product(a, b)), a, b)


def fiber_product(f: FinMap, g: FinMap) -> PairSet:
    """Pullback carrier {(a, b) : f(a) = g(b)} with its projections."""
    if f.cod != g.cod:
        raise InputError("fiber product needs a shared codomain")
    by_value: dict[str, list[str]] = {}
    for b in g.dom:
        by_value.setdefault(g.table[b], []).append(b)
    pairs = [(a, b)
             for a in f.dom
             for b in by_value.get(f.table[a], ())]
    return _paired_carrier(pairs, f.dom, g.dom)


@dataclass(frozen=True)
class TaggedUnion:
    """Disjoint union with 0./1. tags and the two injections."""

    carrier: FinSet
    inl: FinMap
    inr: FinMap


def tag_left(x: str) -> str:
    return "0." + x


def tag_right(x: str) -> str:
    return "1." + x


def disjoint_union(a: FinSet, b: FinSet) -> TaggedUnion:
    carrier = FinSet([tag_left(x) for x in a] + [tag_right(y) for y in b])
    inl = FinMap(a, carrier, {x: tag_left(x) for x in a})
    inr = FinMap(b, carrier, {y: tag_right(y) for y in b})
    return TaggedUnion(carrier, inl, inr)


def coequalizer(f: FinMap, g: FinMap) -> FinMap:
    """Quotient of the shared codomain by f(a) ~ g(a), least-member reps.

    Returns the quotient map; its codomain is the set of representatives.
    """
    if f.dom != g.dom or f.cod != g.cod:
        raise InputError("coequalizer needs parallel maps")
    parent: dict[str, str] = {b: b for b in f.cod}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in f.dom:
        ra, rb = find(f.table[a]), find(g.table[a])
        if ra != rb:
            # keep the least token as the root so reps are canonical
            lo, hi = (ra, rb) if ra < rb else (rb, ra)
            parent[hi] = lo
    table = {b: find(b) for b in f.cod}
    return FinMap(f.cod, FinSet(set(table.values())), table)


@dataclass(frozen=True)
class CommutationReport:
    ok: bool
    witness: tuple[str, str, str] | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _evaluate_path(path: list[FinMap]) -> FinMap:
    if not path:
        raise InputError("a path needs at least one map")
    return compose(*path)


def commutes(path1: list[FinMap], path2: list[FinMap]) -> CommutationReport:
    """Pointwise comparison of two composable paths with a shared boundary.

    The witness, when present, is (element, value along path1, value along
    path2) for the least element where the paths disagree.
    """
    p1 = _evaluate_path(path1)
    p2 = _evaluate_path(path2)
    if p1.dom != p2.dom or p1.cod != p2.cod:
        raise InputError("paths do not share domain and codomain")
    for x in p1.dom:
        y1, y2 = p1.table[x], p2.table[x]
        if y1 != y2:
            return CommutationReport(False, (x, y1, y2))
    return CommutationReport(True)
