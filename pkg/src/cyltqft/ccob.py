"""Component-level cobordisms: objects, bodies, gluing, and diffeomorphisms.

Everything here is the finite shadow of a cobordism: an object is a set of
oriented components, a cobordism is a set of regions with incidence maps
from the source and target components (closed regions are allowed), and a
diffeomorphism is a pair of boundary bijections plus a region bijection
commuting with incidence.

Gluing is a coequalizer on regions, computed by two independent code paths
that the test-suite cross-checks against each other.  Pairwise composition
(glue) renames the merged regions g0, g1, ... in factor-major order of
their least original member; this ordinal naming makes composing three
bodies in either order produce literally identical data, region
identifications included, which is what the associator coherence downstream
rests on.  Self-gluing along a paired-off part of the boundary
(glue_triple) instead keeps the least member of each merged class as its
name; that choice survives staging, so gluing a pairing one pair at a time
or all at once produces identical bodies, identical class maps, and hence
identical induced maps downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .finset import (FinMap, FinSet, coequalizer, disjoint_union,
                     identity_map, is_bijective, tag_left, tag_right)

ORIENTS = FinSet(["+", "-"])
_FLIP = {"+": "-", "-": "+"}


@dataclass(frozen=True, eq=True)
class CobObject:
    components: FinSet
    orientation: FinMap

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.orientation.dom != self.components:
            raise InputError("orientation must be defined on the components")
        if self.orientation.cod != ORIENTS:
            raise InputError("orientation values must be '+' or '-'")


EMPTY_OBJECT = CobObject(FinSet(()), FinMap(FinSet(()), ORIENTS, {}))


def positive_object(components) -> CobObject:
    comps = FinSet(components)
    return CobObject(comps, FinMap(comps, ORIENTS, {c: "+" for c in comps}))


def oriented_object(signs: dict[str, str]) -> CobObject:
    comps = FinSet(signs)
    return CobObject(comps, FinMap(comps, ORIENTS, dict(signs)))


def reverse_orientation(obj: CobObject) -> CobObject:
    table = {c: _FLIP[s] for c, s in obj.orientation.table.items()}
    return CobObject(obj.components, FinMap(obj.components, ORIENTS, table))


def disjoint_union_objects(a: CobObject, b: CobObject) -> CobObject:
    comps = disjoint_union(a.components, b.components).carrier
    table = {tag_left(c): a.orientation.table[c] for c in a.components}
    table.update({tag_right(c): b.orientation.table[c]
                  for c in b.components})
    return CobObject(comps, FinMap(comps, ORIENTS, table))


@dataclass(frozen=True, eq=True)
class Cobordism:
    source: CobObject
    target: CobObject
    regions: FinSet
    in_src: FinMap
    in_tgt: FinMap

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.in_src.dom != self.source.components:
            raise InputError("in_src must be defined on the source components")
        if self.in_tgt.dom != self.target.components:
            raise InputError("in_tgt must be defined on the target components")
        if self.in_src.cod != self.regions or self.in_tgt.cod != self.regions:
            raise InputError("incidence maps must land in the regions")


def cylinder(obj: CobObject) -> Cobordism:
    """The identity body: one region per component, identity incidence."""
    ident = identity_map(obj.components)
    return Cobordism(obj, obj, obj.components, ident, ident)


def disjoint_union_cob(m: Cobordism, n: Cobordism) -> Cobordism:
    src = disjoint_union_objects(m.source, n.source)
    tgt = disjoint_union_objects(m.target, n.target)
    regions = disjoint_union(m.regions, n.regions).carrier
    in_src = {tag_left(c): tag_left(m.in_src.table[c])
              for c in m.source.components}
    in_src.update({tag_right(c): tag_right(n.in_src.table[c])
                   for c in n.source.components})
    in_tgt = {tag_left(c): tag_left(m.in_tgt.table[c])
              for c in m.target.components}
    in_tgt.update({tag_right(c): tag_right(n.in_tgt.table[c])
                   for c in n.target.components})
    return Cobordism(src, tgt, regions,
                     FinMap(src.components, regions, in_src),
                     FinMap(tgt.components, regions, in_tgt))


IN_SUFFIX = ":in"
OUT_SUFFIX = ":out"


def boundary_object(m: Cobordism) -> CobObject:
    """All boundary components with their induced orientations.

    Source components appear with flipped sign (they face inward), target
    components keep theirs.  The side tag is a suffix so that sorted order
    stays copy-major under disjoint unions, keeping boundary constructions
    monoidal on the nose.
    """
    table = {c + IN_SUFFIX: _FLIP[m.source.orientation.table[c]]
             for c in m.source.components}
    table.update({c + OUT_SUFFIX: m.target.orientation.table[c]
                  for c in m.target.components})
    comps = FinSet(table)
    return CobObject(comps, FinMap(comps, ORIENTS, table))


def boundary_region(m: Cobordism, boundary_comp: str) -> str:
    """Region met by a boundary component named with its side suffix."""
    if boundary_comp.endswith(IN_SUFFIX):
        return m.in_src.table[boundary_comp[:-len(IN_SUFFIX)]]
    if boundary_comp.endswith(OUT_SUFFIX):
        return m.in_tgt.table[boundary_comp[:-len(OUT_SUFFIX)]]
    raise InputError(f"not a boundary component name: {boundary_comp!r}")


@dataclass(frozen=True, eq=True)
class GluingTriple:
    """A body with a paired-off, orientation-reversing part of its boundary.

    pairing entries name boundary components of the body (side-suffixed);
    firsts form the positive part, seconds the negative part, and the
    complement is the preserved boundary.  Optional corner data may be
    attached; it is validated separately and ignored by gluing itself.
    """

    body: Cobordism
    pairing: tuple[tuple[str, str], ...]
    corners: tuple[tuple[str, tuple[str, ...]], ...] = ()

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self):
        bnd = boundary_object(self.body)
        used: set[str] = set()
        for p, q in self.pairing:
            for comp in (p, q):
                if comp not in bnd.components:
                    raise InputError(f"pairing names unknown boundary "
                                     f"component {comp!r}")
                if comp in used:
                    raise InputError(f"boundary component {comp!r} paired "
                                     "twice")
                used.add(comp)
            if bnd.orientation.table[p] == bnd.orientation.table[q]:
                raise InputError(
                    f"pairing ({p},{q}) does not reverse orientation")
        for comp, _labels in self.corners:
            if comp not in bnd.components:
                raise InputError(f"corner data names unknown boundary "
                                 f"component {comp!r}")

    def positive_part(self) -> tuple[str, ...]:
        return tuple(p for p, _ in self.pairing)

    def negative_part(self) -> tuple[str, ...]:
        return tuple(q for _, q in self.pairing)

    def preserved_part(self) -> tuple[str, ...]:
        paired = {c for pq in self.pairing for c in pq}
        return tuple(c for c in boundary_object(self.body).components
                     if c not in paired)


def validate_cornered_triple(t: GluingTriple):
    """Corner bookkeeping: every corner of the preserved boundary must lie
    on the paired-off part.  Data-level check only; gluing never uses it."""
    from .reports import Report
    report = Report(kind="cornered-triple")
    corner_table = {comp: set(labels) for comp, labels in t.corners}
    paired = {c for pq in t.pairing for c in pq}
    glued_corners: set[str] = set()
    for comp in paired:
        glued_corners |= corner_table.get(comp, set())
    witness = None
    for comp in t.preserved_part():
        loose = corner_table.get(comp, set()) - glued_corners
        if loose:
            witness = f"{comp}: corners {sorted(loose)} not on the glued part"
            break
    report.add("corner-equation", "triple", witness is None, witness)
    return report


def _ordinal_region_names(reps: list[str]) -> dict[str, str]:
    # reps are least members of merged classes over the tagged union, so
    # plain lexicographic order is factor-major: first body's regions in
    # their own order, then the second's.  Naming classes g0, g1, ... in
    # that order is an ordinal sum, which makes composition associative
    # on the nose for the bodies AND for the region identifications;
    # order-based naming needs no tie-break for closed regions, where
    # incidence data cannot tell interchangeable regions apart
    ordered = sorted(reps)
    width = len(str(max(len(ordered) - 1, 1)))
    return {rep: f"g{i:0{width}d}" for i, rep in enumerate(ordered)}


@dataclass(frozen=True)
class GluingResult:
    cobordism: Cobordism
    region_classes: FinMap  # body regions -> glued regions


def glue_triple(t: GluingTriple) -> GluingResult:
    """Self-glue the body along its pairing.

    Merged regions keep the least member of their class as name.  Least
    members are stable under splitting the pairing into stages, so staged
    and one-shot gluings agree as literal data, class maps included.
    """
    body = t.body
    if not t.pairing:
        quot = identity_map(body.regions)
    else:
        idx = FinSet([f"p{i}" for i in range(len(t.pairing))])
        pos = {f"p{i}": boundary_region(body, p)
               for i, (p, _q) in enumerate(t.pairing)}
        neg = {f"p{i}": boundary_region(body, q)
               for i, (_p, q) in enumerate(t.pairing)}
        quot = coequalizer(FinMap(idx, body.regions, pos),
                           FinMap(idx, body.regions, neg))

    paired = {c for pq in t.pairing for c in pq}
    src_keep = [c for c in body.source.components
                if c + IN_SUFFIX not in paired]
    tgt_keep = [c for c in body.target.components
                if c + OUT_SUFFIX not in paired]
    new_src = CobObject(FinSet(src_keep),
                        FinMap(FinSet(src_keep), ORIENTS,
                               {c: body.source.orientation.table[c]
                                for c in src_keep}))
    new_tgt = CobObject(FinSet(tgt_keep),
                        FinMap(FinSet(tgt_keep), ORIENTS,
                               {c: body.target.orientation.table[c]
                                for c in tgt_keep}))

    regions = quot.cod
    in_src = FinMap(new_src.components, regions,
                    {c: quot.table[body.in_src.table[c]] for c in src_keep})
    in_tgt = FinMap(new_tgt.components, regions,
                    {c: quot.table[body.in_tgt.table[c]] for c in tgt_keep})
    return GluingResult(Cobordism(new_src, new_tgt, regions, in_src, in_tgt),
                        quot)


_GLUE_CACHE: dict[tuple, Cobordism] = {}
_CLASS_CACHE: dict[tuple, dict] = {}


def glue(m: Cobordism, n: Cobordism) -> Cobordism:
    """Compose two bodies along m.target = n.source.

    Independent of the self-gluing path on purpose: regions are the
    coequalizer of the two incidences into the tagged union of region sets,
    then canonically renamed.  Memoized: composites are recomputed
    constantly by the coherence checks.
    """
    if m.target != n.source:
        raise InputError("boundary mismatch: m.target must equal n.source")
    key = (cobordism_key(m), cobordism_key(n))
    hit = _GLUE_CACHE.get(key)
    if hit is not None:
        return hit
    union = disjoint_union(m.regions, n.regions)
    shared = m.target.components
    f = FinMap(shared, union.carrier,
               {c: tag_left(m.in_tgt.table[c]) for c in shared})
    g = FinMap(shared, union.carrier,
               {c: tag_right(n.in_src.table[c]) for c in shared})
    quot = coequalizer(f, g)
    rename = _ordinal_region_names(list(quot.cod))
    regions = FinSet(rename.values())
    in_src = FinMap(m.source.components, regions,
                    {c: rename[quot.table[tag_left(m.in_src.table[c])]]
                     for c in m.source.components})
    in_tgt = FinMap(n.target.components, regions,
                    {c: rename[quot.table[tag_right(n.in_tgt.table[c])]]
                     for c in n.target.components})
    _GLUE_CACHE[key] = Cobordism(m.source, n.target, regions, in_src,
                                 in_tgt)
    return _GLUE_CACHE[key]


def composition_triple(m: Cobordism, n: Cobordism) -> GluingTriple:
    """The self-gluing presentation of pairwise composition."""
    if m.target != n.source:
        raise InputError("boundary mismatch: m.target must equal n.source")
    body = disjoint_union_cob(m, n)
    pairing = tuple((tag_left(c) + OUT_SUFFIX, tag_right(c) + IN_SUFFIX)
                    for c in m.target.components)
    return GluingTriple(body, pairing)


@dataclass(frozen=True, eq=True)
class ObjectDiffeo:
    source: CobObject
    target: CobObject
    comp_bij: FinMap

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self):
        if (self.comp_bij.dom != self.source.components
                or self.comp_bij.cod != self.target.components):
            raise InputError("component map endpoints do not match")
        if not is_bijective(self.comp_bij):
            raise InputError("component map must be a bijection")
        for c in self.source.components:
            if (self.target.orientation.table[self.comp_bij.table[c]]
                    != self.source.orientation.table[c]):
                raise InputError(f"orientation not preserved at {c!r}")


def identity_object_diffeo(obj: CobObject) -> ObjectDiffeo:
    return ObjectDiffeo(obj, obj, identity_map(obj.components))


def compose_object_diffeos(d1: ObjectDiffeo, d2: ObjectDiffeo) -> ObjectDiffeo:
    if d1.target != d2.source:
        raise InputError("object diffeos not composable")
    return ObjectDiffeo(d1.source, d2.target, d1.comp_bij.then(d2.comp_bij))


@dataclass(frozen=True, eq=True)
class CobDiffeo:
    """An isotopy class of diffeomorphisms between bodies: a region
    bijection plus orientation-preserving boundary bijections, all
    commuting with incidence."""

    source: Cobordism
    target: Cobordism
    region_bij: FinMap
    src_bij: FinMap
    tgt_bij: FinMap

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self):
        if (self.region_bij.dom != self.source.regions
                or self.region_bij.cod != self.target.regions
                or not is_bijective(self.region_bij)):
            raise InputError("region map must biject the region sets")
        ObjectDiffeo(self.source.source, self.target.source, self.src_bij)
        ObjectDiffeo(self.source.target, self.target.target, self.tgt_bij)
        for c in self.source.source.components:
            lhs = self.target.in_src.table[self.src_bij.table[c]]
            rhs = self.region_bij.table[self.source.in_src.table[c]]
            if lhs != rhs:
                raise InputError(f"source incidence square fails at {c!r}")
        for c in self.source.target.components:
            lhs = self.target.in_tgt.table[self.tgt_bij.table[c]]
            rhs = self.region_bij.table[self.source.in_tgt.table[c]]
            if lhs != rhs:
                raise InputError(f"target incidence square fails at {c!r}")


def identity_cob_diffeo(m: Cobordism) -> CobDiffeo:
    return CobDiffeo(m, m, identity_map(m.regions),
                     identity_map(m.source.components),
                     identity_map(m.target.components))


def compose_cob_diffeos(d1: CobDiffeo, d2: CobDiffeo) -> CobDiffeo:
    if d1.target != d2.source:
        raise InputError("diffeos not composable")
    return CobDiffeo(d1.source, d2.target,
                     d1.region_bij.then(d2.region_bij),
                     d1.src_bij.then(d2.src_bij),
                     d1.tgt_bij.then(d2.tgt_bij))


def cylinder_diffeo(d: ObjectDiffeo) -> CobDiffeo:
    """The body diffeomorphism a boundary diffeo induces on cylinders."""
    return CobDiffeo(cylinder(d.source), cylinder(d.target),
                     d.comp_bij, d.comp_bij, d.comp_bij)


def swap_diffeo(m: Cobordism, n: Cobordism) -> CobDiffeo:
    """The canonical symmetry m ⊔ n -> n ⊔ m."""
    mn, nm = disjoint_union_cob(m, n), disjoint_union_cob(n, m)

    def swap_table(left: FinSet, right: FinSet) -> dict[str, str]:
        table = {tag_left(x): tag_right(x) for x in left}
        table.update({tag_right(y): tag_left(y) for y in right})
        return table

    return CobDiffeo(
        mn, nm,
        FinMap(mn.regions, nm.regions, swap_table(m.regions, n.regions)),
        FinMap(mn.source.components, nm.source.components,
               swap_table(m.source.components, n.source.components)),
        FinMap(mn.target.components, nm.target.components,
               swap_table(m.target.components, n.target.components)))


def glue_diffeos(d1: CobDiffeo, d2: CobDiffeo) -> CobDiffeo:
    """The diffeo glue(d1.source, d2.source) -> glue(d1.target, d2.target)
    induced on composites when the middle boundary maps agree."""
    if d1.tgt_bij != d2.src_bij:
        raise InputError("middle boundary maps do not agree")
    src = glue(d1.source, d2.source)
    tgt = glue(d1.target, d2.target)
    # transport each glued region through either constituent; incidence
    # compatibility of d1, d2 makes the choice irrelevant on overlaps
    table: dict[str, str] = {}
    srcq = _glue_class_tables(d1.source, d2.source)
    tgtq = _glue_class_tables(d1.target, d2.target)
    for r in d1.source.regions:
        table[srcq[tag_left(r)]] = tgtq[tag_left(d1.region_bij.table[r])]
    for r in d2.source.regions:
        table[srcq[tag_right(r)]] = tgtq[tag_right(d2.region_bij.table[r])]
    return CobDiffeo(src, tgt, FinMap(src.regions, tgt.regions, table),
                     d1.src_bij, d2.tgt_bij)


def composition_region_classes(m: Cobordism, n: Cobordism) -> FinMap:
    """Quotient map from the tagged union of regions onto glue(m, n)."""
    table = _glue_class_tables(m, n)
    return FinMap(disjoint_union(m.regions, n.regions).carrier,
                  glue(m, n).regions, table)


def _glue_class_tables(m: Cobordism, n: Cobordism) -> dict[str, str]:
    # tagged region -> canonical glued region name, recomputed exactly as
    # glue() computes it
    key = (cobordism_key(m), cobordism_key(n))
    hit = _CLASS_CACHE.get(key)
    if hit is not None:
        return hit
    union = disjoint_union(m.regions, n.regions)
    shared = m.target.components
    f = FinMap(shared, union.carrier,
               {c: tag_left(m.in_tgt.table[c]) for c in shared})
    g = FinMap(shared, union.carrier,
               {c: tag_right(n.in_src.table[c]) for c in shared})
    quot = coequalizer(f, g)
    rename = _ordinal_region_names(list(quot.cod))
    _CLASS_CACHE[key] = {t: rename[quot.table[t]] for t in union.carrier}
    return _CLASS_CACHE[key]


def boundary_comp_map(d: CobDiffeo) -> dict[str, str]:
    """Side-suffixed boundary bijection a body diffeo induces."""
    table = {c + IN_SUFFIX: d.src_bij.table[c] + IN_SUFFIX
             for c in d.source.source.components}
    table.update({c + OUT_SUFFIX: d.tgt_bij.table[c] + OUT_SUFFIX
                  for c in d.source.target.components})
    return table


def transport_triple(t: GluingTriple, d: CobDiffeo) -> GluingTriple:
    """Push a gluing triple on d.source forward through d."""
    if t.body != d.source:
        raise InputError("triple body does not match the diffeo source")
    bmap = boundary_comp_map(d)
    return GluingTriple(d.target,
                        tuple((bmap[p], bmap[q]) for p, q in t.pairing))


def glue_triple_diffeo(t: GluingTriple, d: CobDiffeo) -> CobDiffeo:
    """The diffeo induced between glue_triple(t) and glue_triple of the
    transported triple."""
    t_img = transport_triple(t, d)
    src = glue_triple(t).cobordism
    tgt_res = glue_triple(t_img)
    region_table = {r: tgt_res.region_classes.table[d.region_bij.table[r]]
                    for r in src.regions}
    src_table = {c: d.src_bij.table[c] for c in src.source.components}
    tgt_table = {c: d.tgt_bij.table[c] for c in src.target.components}
    return CobDiffeo(
        src, tgt_res.cobordism,
        FinMap(src.regions, tgt_res.cobordism.regions, region_table),
        FinMap(src.source.components, tgt_res.cobordism.source.components,
               src_table),
        FinMap(src.target.components, tgt_res.cobordism.target.components,
               tgt_table))


def object_key(obj: CobObject) -> tuple:
    """Hashable structural key, usable as a cache key."""
    return (obj.components.elements,
            tuple(sorted(obj.orientation.table.items())))


def cobordism_key(m: Cobordism) -> tuple:
    return (object_key(m.source), object_key(m.target), m.regions.elements,
            tuple(sorted(m.in_src.table.items())),
            tuple(sorted(m.in_tgt.table.items())))


def object_to_jsonable(obj: CobObject) -> dict:
    return {
        "components": list(obj.components.elements),
        "orientation": dict(sorted(obj.orientation.table.items())),
    }


def object_from_jsonable(data: object) -> CobObject:
    if not isinstance(data, dict) or "components" not in data \
            or "orientation" not in data:
        raise InputError("object document needs components and orientation")
    if not isinstance(data["components"], list) \
            or not isinstance(data["orientation"], dict):
        raise InputError("bad object document shape")
    comps = FinSet([str(c) for c in data["components"]])
    table = {str(k): str(v) for k, v in data["orientation"].items()}
    bad = sorted(v for v in table.values() if v not in ("+", "-"))
    if bad:
        raise InputError(f"orientation values must be '+' or '-', got {bad[:3]}")
    return CobObject(comps, FinMap(comps, ORIENTS, table))


def cobordism_to_jsonable(m: Cobordism) -> dict:
    return {
        "source": object_to_jsonable(m.source),
        "target": object_to_jsonable(m.target),
        "regions": list(m.regions.elements),
        "in_src": dict(sorted(m.in_src.table.items())),
        "in_tgt": dict(sorted(m.in_tgt.table.items())),
    }


def cobordism_from_jsonable(data: object) -> Cobordism:
    if not isinstance(data, dict):
        raise InputError("cobordism document must be a JSON object")
    for key in ("source", "target", "regions", "in_src", "in_tgt"):
        if key not in data:
            raise InputError(f"cobordism document missing {key!r}")
    if not isinstance(data["regions"], list) \
            or not isinstance(data["in_src"], dict) \
            or not isinstance(data["in_tgt"], dict):
        raise InputError("bad cobordism document shape")
    source = object_from_jsonable(data["source"])
    target = object_from_jsonable(data["target"])
    regions = FinSet([str(r) for r in data["regions"]])
    in_src = FinMap(source.components, regions,
                    {str(k): str(v) for k, v in data["in_src"].items()})
    in_tgt = FinMap(target.components, regions,
                    {str(k): str(v) for k, v in data["in_tgt"].items()})
    return Cobordism(source, target, regions, in_src, in_tgt)
