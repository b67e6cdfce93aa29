"""Deterministic finite universes for the law suites and audits.

Fibered semi-groups are enumerated exhaustively by fiber profile: every
non-increasing profile of fiber sizes within the bounds, every
associative multiplication on each fiber, combined.  The multiplication
tables come from a pruned backtracking search; a brute-force oracle over
all tables cross-checks the small sizes in the test-suite.

Cobordism universes are canonical slices: objects have sign-sorted
components with fixed names, and bodies are kept only in their
lexicographically least form under region renamings and same-sign
component renamings, so enumeration order (and hence every report built
from it) is reproducible byte for byte.
"""

from __future__ import annotations

import itertools

from .ccob import (CobDiffeo, CobObject, Cobordism, EMPTY_OBJECT,
                   GluingTriple, ObjectDiffeo, boundary_object,
                   composition_triple, cylinder, cylinder_diffeo,
                   identity_cob_diffeo, identity_object_diffeo,
                   oriented_object, swap_diffeo, disjoint_union_cob)
from .cyl import FunctorUniverse
from .finset import FinMap, FinSet, fiber_product
from .fsgrp import FiberedSemiGroup, unit_fsgrp
from .bimod import FiberedBimodule, hcompose, product_bimodule
from .theory import AuditUniverse
from .tokens import tuple_token

_ASSOC_CACHE: dict[int, tuple] = {}


def assoc_ops(n: int) -> tuple:
    """All associative multiplication tables on {0..n-1}, as row-major
    tuples of rows, in lexicographic order."""
    if n in _ASSOC_CACHE:
        return _ASSOC_CACHE[n]
    if n == 0:
        _ASSOC_CACHE[0] = ((),)
        return _ASSOC_CACHE[0]
    table = [[None] * n for _ in range(n)]
    cells = [(i, j) for i in range(n) for j in range(n)]
    out = []

    def consistent(i: int, j: int) -> bool:
        # check only triples whose evaluation uses the fresh cell; all
        # other triples were enforced when their own last cell was set
        v = table[i][j]
        row_i, row_j, row_v = table[i], table[j], table[v]
        for c in range(n):
            jc = row_j[c]
            if jc is not None:
                left, right = row_v[c], row_i[jc]
                if left is not None and right is not None and left != right:
                    return False
        for a in range(n):
            ai = table[a][i]
            if ai is not None:
                left, right = table[ai][j], table[a][v]
                if left is not None and right is not None and left != right:
                    return False
        for a in range(n):
            row_a = table[a]
            for b in range(n):
                if row_a[b] == i:
                    bj = table[b][j]
                    if bj is not None:
                        right = row_a[bj]
                        if right is not None and right != v:
                            return False
        for b in range(n):
            row_b = table[b]
            for c in range(n):
                if row_b[c] == j:
                    ib = row_i[b]
                    if ib is not None:
                        left = table[ib][c]
                        if left is not None and left != v:
                            return False
        return True

    def backtrack(idx: int) -> None:
        if idx == len(cells):
            out.append(tuple(tuple(row) for row in table))
            return
        i, j = cells[idx]
        for k in range(n):
            table[i][j] = k
            if consistent(i, j):
                backtrack(idx + 1)
        table[i][j] = None

    backtrack(0)
    _ASSOC_CACHE[n] = tuple(out)
    return _ASSOC_CACHE[n]


def brute_force_assoc_ops(n: int) -> tuple:
    """Oracle: filter every table.  Usable for n <= 3 only."""
    out = []
    rng = range(n)
    for flat in itertools.product(rng, repeat=n * n):
        t = [flat[i * n:(i + 1) * n] for i in rng]
        if all(t[t[a][b]][c] == t[a][t[b][c]]
               for a in rng for b in rng for c in rng):
            out.append(tuple(tuple(r) for r in t))
    return tuple(out)


def _profiles(max_total: int, max_base: int):
    found = []

    def rec(prefix, budget, cap):
        for size in range(min(budget, cap), 0, -1):
            prof = prefix + (size,)
            found.append(prof)
            if len(prof) < max_base:
                rec(prof, budget - size, size)

    rec((), max_total, max_total)
    return sorted(found)


PADDED_PROFILES = ((0,), (0, 0), (1, 0), (1, 1, 0), (2, 0))


def fsgrp_from_profile(profile, ops) -> FiberedSemiGroup:
    """Assemble one fibered semi-group from per-fiber tables."""
    base = FinSet([f"x{i}" for i in range(len(profile))])
    names: list[str] = []
    proj_table: dict[str, str] = {}
    mul_table: dict[str, str] = {}
    offset = 0
    for i, (size, op) in enumerate(zip(profile, ops)):
        elems = [f"e{offset + a}" for a in range(size)]
        offset += size
        names.extend(elems)
        for e in elems:
            proj_table[e] = f"x{i}"
        for a in range(size):
            for b in range(size):
                mul_table[tuple_token(elems[a], elems[b])] = elems[op[a][b]]
    total = FinSet(names)
    proj = FinMap(total, base, proj_table)
    pairs = fiber_product(proj, proj).carrier
    return FiberedSemiGroup(total, base, proj,
                            FinMap(pairs, total, mul_table))


def enumerate_fsgrps(max_total: int = 4, max_base: int = 3,
                     include_padded: bool = True):
    """Every fibered semi-group with the given bounds, canonically named.

    Profiles are non-increasing so each isomorphism class of fiber-size
    data appears once; a few explicitly padded profiles add empty fibers,
    which non-increasing profiles would otherwise never exercise.
    """
    profiles = _profiles(max_total, max_base)
    if include_padded:
        profiles = profiles + [p for p in PADDED_PROFILES
                               if len(p) <= max_base]
    out = []
    for profile in profiles:
        tag = "+".join(str(s) for s in profile)
        fiber_ops = [assoc_ops(size) for size in profile]
        for idx, combo in enumerate(itertools.product(*fiber_ops)):
            out.append((f"fsg[{tag}]#{idx}",
                        fsgrp_from_profile(profile, combo)))
    return out


_NAMED_OPS = (
    ("leftzero", lambda a, b, n: a),
    ("rightzero", lambda a, b, n: b),
    ("const", lambda a, b, n: 0),
    ("min", lambda a, b, n: min(a, b)),
    ("mod", lambda a, b, n: (a + b) % n),
)


def _op_table(kind: str, n: int):
    fn = dict((k, f) for k, f in _NAMED_OPS)[kind]
    return tuple(tuple(fn(a, b, n) for b in range(n)) for a in range(n))


def structured_fsgrps(sizes=(5, 6)):
    """A named family beyond the exhaustive range: classical associative
    operations on larger carriers, single- and two-fiber."""
    out = []
    for n in sizes:
        for kind, _ in _NAMED_OPS:
            out.append((f"{kind}{n}",
                        fsgrp_from_profile((n,), (_op_table(kind, n),))))
    for n in sizes:
        big, small = n - 2, 2
        out.append((f"mod{big}+min{small}",
                    fsgrp_from_profile((big, small),
                                       (_op_table("mod", big),
                                        _op_table("min", small)))))
        out.append((f"min{big}+mod{small}",
                    fsgrp_from_profile((big, small),
                                       (_op_table("min", big),
                                        _op_table("mod", small)))))
    return out


def translation_bimodule(n: int, twist: int) -> FiberedBimodule:
    """The cyclic group acting on itself, the right action twisted by the
    group automorphism x -> twist*x."""
    zn = fsgrp_from_profile((n,), (_op_table("mod", n),))
    carrier = zn.total
    elems = list(carrier.elements)
    src = zn.proj
    tgt = zn.proj
    lpairs = fiber_product(zn.proj, src).carrier
    lact = {tuple_token(elems[a], elems[w]): elems[(a + w) % n]
            for a in range(n) for w in range(n)}
    rpairs = fiber_product(tgt, zn.proj).carrier
    ract = {tuple_token(elems[w], elems[e]): elems[(w + twist * e) % n]
            for w in range(n) for e in range(n)}
    return FiberedBimodule(zn, zn, carrier, src, tgt,
                           FinMap(lpairs, carrier, lact),
                           FinMap(rpairs, carrier, ract))


def two_point_base_bimodule() -> FiberedBimodule:
    """Identity-like bimodule over a two-point base with singleton
    fibers."""
    e = fsgrp_from_profile((1, 1), (_op_table("mod", 1),
                                    _op_table("mod", 1)))
    return FiberedBimodule(e, e, e.total, e.proj, e.proj, e.mul, e.mul)


def unit_carrier_bimodule() -> FiberedBimodule:
    """A two-element bimodule over the one-point unit on both sides; the
    unit's empty-tuple token splices away, so action pair tokens collapse
    onto the carrier itself."""
    u = unit_fsgrp()
    carrier = FinSet(["w0", "w1"])
    const = FinMap(carrier, u.base, {w: "()" for w in carrier})
    lpairs = fiber_product(u.proj, const).carrier
    rpairs = fiber_product(const, u.proj).carrier
    ident = {w: w for w in carrier}
    return FiberedBimodule(u, u, carrier, const, const,
                           FinMap(lpairs, carrier, dict(ident)),
                           FinMap(rpairs, carrier, dict(ident)))


def hand_bimodules():
    """The hand-built bimodule collection for the law suite."""
    t3 = translation_bimodule(3, 2)
    t4 = translation_bimodule(4, 3)
    plain3 = translation_bimodule(3, 1)
    out = [
        ("translation3-twist2", t3),
        ("translation4-twist3", t4),
        ("translation3-plain", plain3),
        ("translation3-composite", hcompose(plain3, t3)),
        ("two-point-base", two_point_base_bimodule()),
        ("unit-carrier", unit_carrier_bimodule()),
        ("product-translation", product_bimodule(plain3, t3)),
    ]
    return out


def canonical_objects(max_components: int,
                      include_negative: bool = True):
    """Sign-sorted objects with fixed component names, one per sign
    profile."""
    out = [EMPTY_OBJECT]
    for n in range(1, max_components + 1):
        plus_range = range(n, -1, -1) if include_negative else [n]
        for plus in plus_range:
            signs = {}
            for i in range(n):
                signs[f"c{i + 1}"] = "+" if i < plus else "-"
            out.append(oriented_object(signs))
    return tuple(out)


def _sign_preserving_perms(obj: CobObject):
    comps = list(obj.components)
    blocks: dict[str, list[int]] = {}
    for i, c in enumerate(comps):
        blocks.setdefault(obj.orientation.table[c], []).append(i)
    perms_per_block = [list(itertools.permutations(idxs))
                       for idxs in blocks.values()]
    for combo in itertools.product(*perms_per_block):
        perm = list(range(len(comps)))
        for idxs, permuted in zip(blocks.values(), combo):
            for src, dst in zip(idxs, permuted):
                perm[src] = dst
        yield tuple(perm)


def canonical_cobordisms(objects, max_regions: int,
                         max_boundary: int | None = None):
    """One body per isomorphism class: lexicographically least incidence
    under region renaming and same-sign component renaming."""
    out = []
    for osrc, otgt in itertools.product(objects, repeat=2):
        nsrc, ntgt = len(osrc.components), len(otgt.components)
        if max_boundary is not None and nsrc + ntgt > max_boundary:
            continue
        src_perms = list(_sign_preserving_perms(osrc))
        tgt_perms = list(_sign_preserving_perms(otgt))
        for k in range(1, max_regions + 1):
            region_perms = list(itertools.permutations(range(k)))
            seen = set()
            for in_src in itertools.product(range(k), repeat=nsrc):
                for in_tgt in itertools.product(range(k), repeat=ntgt):
                    best = min(
                        (tuple(rho[in_src[a[i]]] for i in range(nsrc)),
                         tuple(rho[in_tgt[b[i]]] for i in range(ntgt)))
                        for rho in region_perms
                        for a in src_perms for b in tgt_perms)
                    if best != (in_src, in_tgt) or best in seen:
                        continue
                    seen.add(best)
                    regions = FinSet([f"g{r}" for r in range(k)])
                    out.append(Cobordism(
                        osrc, otgt, regions,
                        FinMap(osrc.components, regions,
                               {c: f"g{in_src[i]}" for i, c in
                                enumerate(osrc.components)}),
                        FinMap(otgt.components, regions,
                               {c: f"g{in_tgt[i]}" for i, c in
                                enumerate(otgt.components)})))
    return tuple(out)


def object_automorphisms(obj: CobObject, include_identity: bool = False):
    comps = list(obj.components)
    out = []
    for perm in _sign_preserving_perms(obj):
        if not include_identity and all(perm[i] == i
                                        for i in range(len(comps))):
            continue
        table = {comps[i]: comps[perm[i]] for i in range(len(comps))}
        out.append(ObjectDiffeo(obj, obj,
                                FinMap(obj.components, obj.components,
                                       table)))
    return tuple(out)


def cobordism_automorphisms(m: Cobordism, include_identity: bool = False):
    comps_s = list(m.source.components)
    comps_t = list(m.target.components)
    regions = list(m.regions)
    out = []
    for rho in itertools.permutations(range(len(regions))):
        rtab = {regions[i]: regions[rho[i]] for i in range(len(regions))}
        for a in _sign_preserving_perms(m.source):
            stab = {comps_s[i]: comps_s[a[i]] for i in range(len(comps_s))}
            if any(rtab[m.in_src.table[c]] != m.in_src.table[stab[c]]
                   for c in comps_s):
                continue
            for b in _sign_preserving_perms(m.target):
                ttab = {comps_t[i]: comps_t[b[i]]
                        for i in range(len(comps_t))}
                if any(rtab[m.in_tgt.table[c]] != m.in_tgt.table[ttab[c]]
                       for c in comps_t):
                    continue
                if not include_identity and rtab == {r: r for r in regions} \
                        and stab == {c: c for c in comps_s} \
                        and ttab == {c: c for c in comps_t}:
                    continue
                out.append(CobDiffeo(
                    m, m,
                    FinMap(m.regions, m.regions, rtab),
                    FinMap(m.source.components, m.source.components, stab),
                    FinMap(m.target.components, m.target.components,
                           ttab)))
    return tuple(out)


def self_gluing_triples(m: Cobordism):
    """All nonempty orientation-reversing partial matchings of the
    boundary, canonically ordered."""
    bnd = boundary_object(m)
    comps = list(bnd.components)
    signs = bnd.orientation.table
    results = []

    def rec(idx: int, used: frozenset, chosen: tuple):
        if idx == len(comps):
            if chosen:
                results.append(GluingTriple(m, chosen))
            return
        c = comps[idx]
        if c in used:
            rec(idx + 1, used, chosen)
            return
        rec(idx + 1, used, chosen)
        for j in range(idx + 1, len(comps)):
            d = comps[j]
            if d in used or signs[c] == signs[d]:
                continue
            rec(idx + 1, used | {c, d}, chosen + ((c, d),))

    rec(0, frozenset(), ())
    return tuple(results)


def theory_universe(max_components: int = 3, max_regions: int = 3,
                    max_boundary: int = 3,
                    max_swaps: int = 4) -> AuditUniverse:
    """The audit slice: all sign-profiles of objects, canonical bodies,
    every self-gluing matching, composition gluings, and a diffeomorphism
    pool of identities, automorphisms, cylinder transports, and a few
    disjoint-union swaps."""
    objects = canonical_objects(max_components, include_negative=True)
    cobordisms = canonical_cobordisms(objects, max_regions,
                                      max_boundary=max_boundary)

    triples: list[GluingTriple] = []
    for m in cobordisms:
        triples.extend(self_gluing_triples(m))
    for m, n in itertools.product(cobordisms, repeat=2):
        if m.target != n.source or len(m.target.components) == 0:
            continue
        if len(m.regions) + len(n.regions) > 4:
            continue
        triples.append(composition_triple(m, n))

    object_diffeos: list[ObjectDiffeo] = []
    for obj in objects:
        object_diffeos.append(identity_object_diffeo(obj))
        object_diffeos.extend(object_automorphisms(obj))

    cob_diffeos: list[CobDiffeo] = []
    for m in cobordisms:
        cob_diffeos.append(identity_cob_diffeo(m))
        cob_diffeos.extend(cobordism_automorphisms(m))
    for obj in objects:
        for d in object_automorphisms(obj):
            cob_diffeos.append(cylinder_diffeo(d))
    swaps = 0
    for m, n in itertools.combinations(cobordisms, 2):
        if len(m.regions) + len(n.regions) > 3:
            continue
        cob_diffeos.append(swap_diffeo(m, n))
        swaps += 1
        if swaps >= max_swaps:
            break

    # product-shaped axioms quantify over pairs of bodies; the full
    # square is quadratic in the universe, so take every pair within a
    # region budget plus a fixed block of large ones
    union_pairs = [(m, n) for m, n in itertools.product(cobordisms,
                                                        repeat=2)
                   if len(m.regions) + len(n.regions) <= 4]
    big = [(m, n) for m, n in zip(cobordisms, reversed(cobordisms))
           if len(m.regions) + len(n.regions) > 4]
    union_pairs.extend(big[:12])

    return AuditUniverse(tuple(objects), tuple(cobordisms), tuple(triples),
                         tuple(object_diffeos), tuple(cob_diffeos),
                         tuple(union_pairs))


def functor_universe(max_components: int = 2,
                     max_regions: int = 3) -> FunctorUniverse:
    """The double-functor slice: positively oriented objects and all
    canonical bodies between them."""
    objects = canonical_objects(max_components, include_negative=False)
    cobordisms = canonical_cobordisms(objects, max_regions)

    object_diffeos: list[ObjectDiffeo] = []
    for obj in objects:
        object_diffeos.append(identity_object_diffeo(obj))
        object_diffeos.extend(object_automorphisms(obj))

    cob_diffeos: list[CobDiffeo] = []
    for m in cobordisms:
        cob_diffeos.append(identity_cob_diffeo(m))
        cob_diffeos.extend(cobordism_automorphisms(m))
    for obj in objects:
        for d in object_automorphisms(obj):
            cob_diffeos.append(cylinder_diffeo(d))

    return FunctorUniverse(tuple(objects), tuple(cobordisms),
                           tuple(object_diffeos), tuple(cob_diffeos))
