"""Reduced multicurves: canonical forms, edge coordinates, enumeration.

A reduced multicurve is a crossingless diagram with no trivial pieces:
no component bounds an empty or once-punctured disk, no arc cuts an
empty disk off a marked point, each puncture carries at most one arc
end, and no isotopy move of the engine applies.  Every such diagram is
identified by its canonical serialization, and carries a doubled
coordinate vector indexed by the edges of the triangulation: twice the
minimal intersection numbers, corrected at the ends.

Coordinates are doubled minimal intersection counts of the diagram with
the ends slid off their marked points along the boundary in the positive
direction.  Per component:

* a loop counts two per crossing of an interior edge;
* an arc end at a puncture adds the puncture's peripheral vector;
* an arc end at a boundary marked point lands on the outgoing boundary
  edge, adding two units of it plus two units for every interior edge
  end swept on the way (those below the end's wedge in the vertex link);
* an arc running along an interior edge between two punctures counts
  both peripheral vectors minus two units of the edge;
* an arc running along an interior edge from a puncture to a marked
  point sweeps only the link positions strictly below the edge's own
  end at the marked point.

The coordinate order compares vectors lexicographically in the declared
edge order, so surface files should declare interior edges first.
"""

from __future__ import annotations

from itertools import product
from typing import NamedTuple

from skeincalc.coeffs import GENERIC, Scalar
from skeincalc.diagrams import (Diagram, EngineError, _chord_side,
                                _corner_wedge_index, freeze, simplify, strands)


class AdmissibilityError(ValueError):
    """A coordinate vector that does not name a reduced multicurve."""

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


class Component(NamedTuple):
    kind: str          # "loop" | "arc" | "edge" | "boundary"
    coords: tuple      # doubled coordinate vector
    ends: tuple        # sorted endpoint vertices, () for loops


def engine_memo(surf) -> dict:
    memo = surf.__dict__.get("_engine_memo")
    if memo is None:
        memo = surf._engine_memo = {}
    return memo


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _push(surf, v: str, upto: int) -> tuple:
    """Units for the interior edge ends at positions 0..upto of v's link."""
    counts = [0] * surf.n_edges
    ends = surf.vertex_link(v).ends
    for j in range(upto + 1):
        eid = ends[j][0]
        if not surf.edge(eid).boundary:
            counts[surf.edge_index[eid]] += 1
    return tuple(counts)


def _end_units(surf, corner) -> tuple:
    """Doubled units swept by an arc end at a boundary marked point.

    The end slides onto the outgoing boundary edge, crossing every
    interior edge end below its wedge on the way out.
    """
    vtx = surf.corner_vertex(*corner)
    _, widx = _corner_wedge_index(surf, corner)
    counts = list(_push(surf, vtx, widx))
    out_eid = surf.vertex_link(vtx).ends[0][0]
    counts[surf.edge_index[out_eid]] += 1
    return tuple(2 * x for x in counts)


def component_records(surf, d: Diagram) -> list[Component]:
    recs = []
    paths, cycles = strands(d)
    nE = surf.n_edges
    for seq in cycles:
        F = [0] * nE
        for node in seq:
            if node[0] == "p" and node[2] == 0:
                F[surf.edge_index[d.pt_edge[node[1]]]] += 2
        recs.append(Component("loop", tuple(F), ()))
    for seq in paths:
        pa, pb = seq[0][1], seq[-1][1]
        ca, cb = d.port_corner[pa], d.port_corner[pb]
        va, vb = surf.corner_vertex(*ca), surf.corner_vertex(*cb)
        ends = tuple(sorted((va, vb)))
        F = [0] * nE
        for node in seq:
            if node[0] == "p" and node[2] == 0:
                F[surf.edge_index[d.pt_edge[node[1]]]] += 2
        kind = "arc"
        correction = None
        if len(seq) == 2:
            tri, slot = _chord_side(surf, ca, cb)
            side = surf.side(tri, slot)
            kind = "boundary" if side.edge.boundary else "edge"
            if kind == "edge":
                punctured = [surf.vertex_kinds[v] == "puncture" for v in (va, vb)]
                if all(punctured):
                    F[side.edge.index] -= 2
                elif any(punctured):
                    # the marked end's germ must sit below the edge's own
                    # end, which the canonical drawing only does at the
                    # forward corner
                    marked = cb if punctured[0] else ca
                    if marked == (tri, (slot - 1) % 3):
                        correction = side.edge.index
        for corner in (ca, cb):
            vtx = surf.corner_vertex(*corner)
            if surf.vertex_kinds[vtx] == "puncture":
                F = list(_vadd(F, surf.peripheral_vector(vtx)))
            else:
                F = list(_vadd(F, _end_units(surf, corner)))
        if correction is not None:
            F[correction] -= 2
        recs.append(Component(kind, tuple(F), ends))
    return recs


class MultiCurve:
    """A reduced multicurve, interned per surface by canonical key."""

    __slots__ = ("surf", "key", "_coords", "_recs")

    def __init__(self, surf, key):
        self.surf = surf
        self.key = key
        self._coords = None
        self._recs = None

    @staticmethod
    def intern(surf, key) -> MultiCurve:
        cache = surf.__dict__.setdefault("_curve_cache", {})
        mc = cache.get(key)
        if mc is None:
            mc = cache[key] = MultiCurve(surf, key)
        return mc

    @staticmethod
    def from_diagram(d: Diagram) -> MultiCurve:
        """Canonicalize a diagram that must already be reduced."""
        d2 = d.copy()
        factor = simplify(d2)
        if factor is None or factor != Scalar.one(GENERIC):
            raise EngineError("diagram is not reduced")
        if d2.serialize() != d.serialize():
            raise EngineError("diagram is not tight")
        key = freeze(d2, engine_memo(d.surf))
        return MultiCurve.intern(d.surf, key)

    def diagram(self) -> Diagram:
        return engine_memo(self.surf)[("frozen", self.key)]

    @property
    def coordinates(self) -> tuple:
        if self._coords is None:
            total = (0,) * self.surf.n_edges
            for rec in self.records():
                total = _vadd(total, rec.coords)
            self._coords = total
        return self._coords

    def records(self) -> list[Component]:
        if self._recs is None:
            self._recs = component_records(self.surf, self.diagram())
        return self._recs

    def component_multiset(self) -> dict[Component, int]:
        out: dict[Component, int] = {}
        for rec in self.records():
            out[rec] = out.get(rec, 0) + 1
        return out

    def endpoints(self) -> tuple:
        out = []
        for rec in self.records():
            out.extend(rec.ends)
        return tuple(sorted(out))

    @property
    def is_empty(self) -> bool:
        return not self.records()

    def sort_key(self):
        return (self.coordinates, self.key)

    def __eq__(self, other):
        return (isinstance(other, MultiCurve) and other.surf is self.surf
                and other.key == self.key)

    def __hash__(self):
        return hash(self.key)

    def describe(self) -> str:
        recs = self.records()
        if not recs:
            return "empty"
        if len(recs) == 1:
            kind, F, ends = recs[0]
            if kind in ("edge", "boundary"):
                eid = _single_chord_edge(self.surf, self.diagram())
                if eid is not None:
                    return f"edge:{eid}"
            if kind == "loop":
                f = tuple(x // 2 for x in F)
                return "loop:(%s)" % ",".join(str(x) for x in f)
            if kind == "arc":
                halves = ",".join(str(x // 2) if x % 2 == 0 else f"{x}/2" for x in F)
                return f"arc:{ends[0]}-{ends[1]}:({halves})"
        eps = ",".join(self.endpoints())
        coords = ",".join(str(x) for x in self.coordinates)
        return f"curve:[{eps}]:({coords})"

    def __repr__(self):
        return f"<curve {self.describe()} on {self.surf.name}>"


def _single_chord_edge(surf, d: Diagram):
    paths, cycles = strands(d)
    if cycles or len(paths) != 1 or len(paths[0]) != 2:
        return None
    ca = d.port_corner[paths[0][0][1]]
    cb = d.port_corner[paths[0][1][1]]
    tri, slot = _chord_side(surf, ca, cb)
    return surf.side(tri, slot).edge.id


# --- constructors --------------------------------------------------------


def empty_curve(surf) -> MultiCurve:
    return MultiCurve.from_diagram(Diagram(surf))


def edge_arc(surf, eid: str) -> MultiCurve:
    """The arc running along an edge: for an interior edge the chord on
    its first placement, for a boundary edge the chord cutting it off."""
    tri, slot = surf.placements(eid)[0]
    d = Diagram(surf)
    na = d.new_port((tri, (slot - 1) % 3), None)
    nb = d.new_port((tri, slot), 0)
    d.connect(("v", na), ("v", nb))
    return MultiCurve.from_diagram(d)


# --- enumeration ----------------------------------------------------------


def _interleave(a, b, c, d):
    if a > b:
        a, b = b, a
    if c > d:
        c, d = d, c
    return a < c < b < d or c < a < d < b


def _edge_arc_coords(surf, eid: str) -> tuple:
    mc = edge_arc(surf, eid)
    return mc.coordinates


def _room_items(surf, tri: int, cnt: dict):
    items = []
    for slot in range(3):
        side = surf.side(tri, slot)
        e = side.edge
        if not e.boundary:
            bank = surf.placements(e.id).index((tri, slot))
            n = cnt[e.id]
            order = range(n) if not side.rev else range(n - 1, -1, -1)
            for epos in order:
                items.append(("pt", e.id, epos, bank, slot))
        items.append(("c", slot))
    return items


def _corner_sweep(surf, tri: int, k: int) -> tuple:
    """Exact coordinate contribution of one arc end at corner (tri, k)."""
    cache = surf.__dict__.setdefault("_sweep_cache", {})
    hit = cache.get((tri, k))
    if hit is None:
        vtx = surf.corner_vertex(tri, k)
        if surf.vertex_kinds[vtx] == "puncture":
            hit = surf.peripheral_vector(vtx)
        else:
            hit = _end_units(surf, (tri, k))
        cache[(tri, k)] = hit
    return hit


def _room_fillings(surf, tri: int, cnt: dict, zcaps: dict):
    """Non-crossing fillings of one room for fixed edge point counts.

    Returns (n_items, chords, puncture_ports, ends_F) tuples with chords
    as (posA, itemA, posB, itemB, tie).  ends_F is the total coordinate
    contribution of the filling's arc ends: every reduced multicurve
    built from the fillings has coordinates 2*cnt + sum of ends_F, up
    to an optimistic -2 allowance at edges hugged by mixed chords.
    """
    items = _room_items(surf, tri, cnt)
    corner_pos = {it[1]: i for i, it in enumerate(items) if it[0] == "c"}
    corner_vtx = {k: surf.corner_vertex(tri, k) for k in range(3)}
    punctures = set(surf.punctures)
    pt_positions = [i for i, it in enumerate(items) if it[0] == "pt"]

    matchings = []

    def backtrack(unmatched, chords, used):
        if not unmatched:
            matchings.append(list(chords))
            return
        i = unmatched[0]
        for j in unmatched[1:]:
            if items[i][4] == items[j][4]:
                continue
            if all(({i, j} & {a, b}) or not _interleave(i, j, a, b)
                   for a, b, *_ in chords):
                chords.append((i, j, None))
                backtrack([u for u in unmatched if u not in (i, j)], chords, used)
                chords.pop()
        for k in range(3):
            v = corner_vtx[k]
            if v in punctures and v in used:
                continue
            c = corner_pos[k]
            if all(({i, c} & {a, b}) or not _interleave(i, c, a, b)
                   for a, b, *_ in chords):
                chords.append((i, c, None))
                backtrack(unmatched[1:], chords,
                          used | {v} if v in punctures else used)
                chords.pop()

    backtrack(pt_positions, [], frozenset())

    zpairs = []
    for k in range(3):
        l = (k + 1) % 3
        side_slot = l  # corners k and k+1 flank side k+1
        cap = zcaps[(tri, side_slot)]
        va, vb = corner_vtx[k], corner_vtx[l]
        if va in punctures and va == vb:
            cap = 0
        elif va in punctures or vb in punctures:
            cap = min(cap, 1)
        zpairs.append((k, l, corner_pos[k], corner_pos[l], cap))

    out = []
    for m in matchings:
        for zs in product(*(range(cap + 1) for *_, cap in zpairs)):
            chords = list(m)
            ok = True
            for (k, l, ck, cl, _), count in zip(zpairs, zs):
                if count and not all(({ck, cl} & {a, b}) or not _interleave(ck, cl, a, b)
                                     for a, b, *_ in m):
                    ok = False
                    break
                for r in range(count):
                    chords.append((ck, cl, r))
            if not ok:
                continue
            ports: dict[str, int] = {}
            ends = [0] * surf.n_edges
            for a, b, _tie in chords:
                for pos in (a, b):
                    it = items[pos]
                    if it[0] == "c":
                        v = corner_vtx[it[1]]
                        if v in punctures:
                            ports[v] = ports.get(v, 0) + 1
                        ends = list(_vadd(ends, _corner_sweep(surf, tri, it[1])))
                ita, itb = items[a], items[b]
                if ita[0] == "c" and itb[0] == "c":
                    t2, slot = _chord_side(surf, (tri, ita[1]), (tri, itb[1]))
                    e2 = surf.side(t2, slot).edge
                    if not e2.boundary and (corner_vtx[ita[1]] in punctures
                                            or corner_vtx[itb[1]] in punctures):
                        ends[e2.index] -= 2
            if any(n > 1 for n in ports.values()):
                continue
            out.append((len(items), [(a, items[a], b, items[b], tie)
                                     for a, b, tie in chords], ports,
                        tuple(ends)))
    return out


def _z_flank_roles(surf, tri, ka, kb):
    """Tie-break signs for nested parallel corner chords: the innermost
    copy hugs the shared side, sitting last at the corner before that
    side and first at the corner after it."""
    tri_, slot = _chord_side(surf, (tri, ka), (tri, kb))
    before = (slot - 1) % 3
    return {before: -1, slot: 1}


def _assemble(surf, cnt: dict, fillings) -> Diagram:
    d = Diagram(surf)
    pids = {}
    for eid, c in cnt.items():
        for i in range(c):
            d.new_pt(eid, i)
        pids[eid] = list(d.pts[eid])

    corner_ends = {}
    pending = []
    token = 0
    for tri, (n_items, chords, _ports, _ends) in enumerate(fillings):
        for a, ita, b, itb, tie in chords:
            refs = []
            for pos, it in ((a, ita), (b, itb)):
                if it[0] == "pt":
                    _, eid, epos, bank, _slot = it
                    refs.append(("p", pids[eid][epos], bank))
                else:
                    k = it[1]
                    other = b if pos == a else a
                    dist = (other - pos) % n_items
                    if tie is None:
                        tkey = 0
                    else:
                        roles = _z_flank_roles(surf, tri, ita[1], itb[1])
                        tkey = roles[k] * tie
                    token += 1
                    ref = ("tok", token)
                    corner_ends.setdefault((tri, k), []).append(((-dist, tkey), token))
                    refs.append(ref)
            pending.append(tuple(refs))

    tok_node = {}
    for corner in sorted(corner_ends):
        for _, tok in sorted(corner_ends[corner]):
            pid = d.new_port(corner, None)
            tok_node[tok] = ("v", pid)

    for ra, rb in pending:
        na = tok_node[ra[1]] if ra[0] == "tok" else ra
        nb = tok_node[rb[1]] if rb[0] == "tok" else rb
        d.connect(na, nb)
    return d


def enumerate_basis(surf, bound: int) -> list[MultiCurve]:
    """All reduced multicurves with doubled coordinates at most 2*bound
    in every entry, sorted by (coordinates, key)."""
    cache = surf.__dict__.setdefault("_basis_cache", {})
    if bound in cache:
        return cache[bound]

    interior = [e for e in surf.edges if not e.boundary]
    zcaps = {}
    for tri in range(len(surf.triangles)):
        for slot in range(3):
            arc_F = _edge_arc_coords(surf, surf.side(tri, slot).edge.id)
            cap = 2 * bound
            for x in arc_F:
                if x > 0:
                    cap = min(cap, (2 * bound) // x)
            zcaps[(tri, slot)] = cap

    memo = engine_memo(surf)
    found = {}
    one = Scalar.one(GENERIC)
    fill_cache: dict[tuple, list] = {}
    for counts in product(range(bound + 1), repeat=len(interior)):
        cnt = {e.id: c for e, c in zip(interior, counts)}
        rooms = []
        for tri in range(len(surf.triangles)):
            local = (tri,) + tuple(sorted(
                (e.id, cnt[e.id]) for e in
                {surf.side(tri, s).edge for s in range(3)} if not e.boundary))
            if local not in fill_cache:
                fill_cache[local] = _room_fillings(surf, tri, cnt, zcaps)
            rooms.append(fill_cache[local])
        if any(not r for r in rooms):
            continue
        # branch and bound over rooms: prune as soon as the accumulated
        # end contributions cannot stay inside the coordinate box
        nE = surf.n_edges
        top = 2 * bound
        suffix = [(0,) * nE] * (len(rooms) + 1)
        for i in range(len(rooms) - 1, -1, -1):
            nxt = suffix[i + 1]
            mins = [min(f[3][e] for f in rooms[i]) for e in range(nE)]
            suffix[i] = tuple(m + x for m, x in zip(mins, nxt))
        base = [2 * cnt.get(e.id, 0) for e in surf.edges]
        combo = []

        def descend(i, lower, used):
            if i == len(rooms):
                d = _assemble(surf, cnt, combo)
                d2 = d.copy()
                factor = simplify(d2)
                if factor is None or factor != one:
                    return
                if d2.serialize() != d.serialize():
                    return
                key = freeze(d2, memo)
                if key in found:
                    return
                mc = MultiCurve.intern(surf, key)
                if all(x <= top for x in mc.coordinates):
                    found[key] = mc
                return
            tail = suffix[i + 1]
            for filling in rooms[i]:
                ports, ends_F = filling[2], filling[3]
                if any(v in used for v in ports):
                    continue
                nxt = [x + y for x, y in zip(lower, ends_F)]
                if any(x + t > top for x, t in zip(nxt, tail)):
                    continue
                combo.append(filling)
                descend(i + 1, nxt, used | set(ports))
                combo.pop()

        descend(0, base, frozenset())
    result = sorted(found.values(), key=MultiCurve.sort_key)
    cache[bound] = result
    return result


def curve_from_coordinates(surf, coords, endpoints=()) -> MultiCurve:
    """The unique reduced multicurve with the given doubled coordinates
    and endpoint multiset, if any."""
    if len(coords) != surf.n_edges:
        raise AdmissibilityError(
            "shape", f"expected {surf.n_edges} coordinates, got {len(coords)}")
    if any(not isinstance(x, int) for x in coords):
        raise AdmissibilityError("shape", "coordinates must be integers")
    if any(x < 0 for x in coords):
        raise AdmissibilityError("negative", "coordinates must be nonnegative")
    if not endpoints and any(x % 2 for x in coords):
        raise AdmissibilityError(
            "parity", "a multicurve without endpoints has even coordinates")
    if not endpoints:
        # loops only, so classical normal-curve conditions apply per room
        half = [x // 2 for x in coords]
        for tri in range(len(surf.triangles)):
            c = [half[surf.side(tri, s).edge.index] for s in range(3)]
            for i in range(3):
                j, k = (i + 1) % 3, (i + 2) % 3
                if (c[j] + c[k] - c[i]) % 2:
                    raise AdmissibilityError(
                        "parity",
                        f"side counts {tuple(c)} in triangle {tri} have no"
                        " integral chord solution")
                if c[i] > c[j] + c[k]:
                    raise AdmissibilityError(
                        "triangle",
                        f"side counts {tuple(c)} in triangle {tri} violate"
                        " the triangle inequality")
    coords = tuple(coords)
    want_ends = tuple(sorted(endpoints))
    bound = max((x + 1) // 2 for x in coords) if any(coords) else 0
    hits = [mc for mc in enumerate_basis(surf, bound)
            if mc.coordinates == coords and mc.endpoints() == want_ends]
    if not hits:
        raise AdmissibilityError(
            "unrealizable",
            f"no reduced multicurve has coordinates {coords} and ends {want_ends}")
    if len(hits) > 1:
        raise EngineError(f"coordinates {coords} are not injective")
    return hits[0]


def deg_V(mc: MultiCurve) -> tuple:
    """Arc-end count at each interior puncture, in declared order."""
    idx = {v: i for i, v in enumerate(mc.surf.punctures)}
    out = [0] * len(idx)
    for v in mc.endpoints():
        j = idx.get(v)
        if j is not None:
            out[j] += 1
    return tuple(out)


def compare(a: MultiCurve, b: MultiCurve) -> int:
    """Coordinate-lexicographic order; distinct curves never tie."""
    if a.surf is not b.surf:
        raise EngineError("curves live on different surfaces")
    if a.key == b.key:
        return 0
    fa, fb = a.coordinates, b.coordinates
    if fa == fb:
        raise EngineError(f"distinct curves share coordinates {fa}")
    return -1 if fa < fb else 1


def corner_coordinates(mc: MultiCurve) -> tuple:
    """Chord counts at each triangle corner, indexed by (triangle, corner),
    for a curve that avoids every vertex."""
    surf = mc.surf
    if mc.endpoints():
        raise AdmissibilityError(
            "shape", "corner coordinates need a curve avoiding the vertices")
    F = mc.coordinates
    out = []
    for tri in range(len(surf.triangles)):
        s = [F[surf.side(tri, k).edge.index] for k in range(3)]
        for k in range(3):
            out.append((s[k] + s[(k + 1) % 3] - s[(k + 2) % 3]) // 4)
    return tuple(out)


def square_trick_coordinates(mc: MultiCurve) -> tuple:
    """Coordinates recomputed from the squaring identity.

    Multiplies the curve by itself, scales by one vertex class per
    puncture end, and halves the coordinate vector of the leading term.
    Agreement with the direct formula is what makes the stored
    coordinates meaningful, so the test suite checks it on every
    enumerated basis curve.
    """
    from skeincalc.algebra import Skein
    from skeincalc.coeffs import Coefficient

    surf = mc.surf
    sq = Skein.of(mc) * Skein.of(mc)
    for v in mc.endpoints():
        if surf.vertex_kinds[v] == "puncture":
            sq = sq.scale(Coefficient.vertex(v, GENERIC))
    lead, _ = sq.leading_term()
    F = lead.coordinates
    if any(e % 2 for e in F):
        raise EngineError(f"squared leading term has odd coordinates {F}")
    return tuple(e // 2 for e in F)
