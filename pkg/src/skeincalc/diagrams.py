"""Strand diagrams and the skein relation engine.

A diagram is stored room by room over a triangulated surface.  Strands
cross interior edges at points (each point has one copy on each side of
its edge), end at vertices as corner ports, and pass through crossings
kept as explicit four-legged sites.  Segments join these attachment
nodes pairwise inside a room and never cross each other away from the
crossing sites, which are created only while two reduced diagrams are
being superposed.

Conventions.  Point lists run along the edge direction.  Port lists run
counterclockwise along the room boundary within their corner, so the
counterclockwise angular order around the vertex itself is the reversed
list.  Heights of ends at a boundary marked point are never stored:
every stored diagram is read with its ends in the preferred order
(angularly earlier means higher) and the only height bookkeeping is a
q power collected when two diagrams are stacked.  Crossing legs are
numbered counterclockwise with the over strand on legs 0 and 2, leg 0
pointing toward the over strand's endpoint of smaller abscissa.

The three pictorial sign conventions below (which smoothing carries q,
which reconnection at a puncture carries q^(1/2), the sign of an end
exchange) are fixed module constants; the test suite pins each of them
against worked identities and the products' independence from drawing
choices.
"""

from __future__ import annotations

from fractions import Fraction

from skeincalc.coeffs import GENERIC, Coefficient, Scalar

SMOOTH_Q_CW = True    # q goes with pairing each over germ to its clockwise under neighbour
D_CCW_IS_PLUS = False # q^(1/2) goes with the reconnection walking against the wedge order from the upper end
E_SIGN = 1            # q^E_SIGN per height inversion against the preferred bank order
E_UP_CCW = True       # preferred bank order: heights increase counterclockwise

# The four constants above are pinned jointly, not independently: the
# relations are stated by pictures, so each choice is a chirality that only
# product identities can see.  This assignment is the unique one out of all
# sixteen under which products are drawing-independent, the boundary-arc
# exchange comes out as b2*b1 = q*(b1*b2) on the triangle, and powers of a
# boundary-to-puncture arc satisfy g^2 = v^-1 q^(1/2) [g^2] and
# g^3 = v^-1 q^(3/2) [g^3].  Flip any one of them and at least one of those
# checks fails; see the calibration tests.

_PRIMES = [1, 5, 7, 11, 13, 17, 19, 23, 29, 31]


def loop_value(mode=GENERIC) -> Scalar:
    """A loop bounding an empty disk."""
    return Scalar.q_power(2, mode, -1) + Scalar.q_power(-2, mode, -1)


def puncture_loop_value(mode=GENERIC) -> Scalar:
    """A loop bounding a disk with a single puncture."""
    return Scalar.q_power(1, mode) + Scalar.q_power(-1, mode)


class EngineError(Exception):
    pass


class _Coincide(Exception):
    """Internal: three chords met in a point, retry with other abscissas."""


class Diagram:
    """Mutable strand diagram over a fixed surface."""

    __slots__ = ("surf", "pts", "ports", "port_corner", "port_rank",
                 "pt_edge", "seg", "xroom", "_ids")

    def __init__(self, surf):
        self.surf = surf
        self.pts = {e.id: [] for e in surf.edges if not e.boundary}
        self.ports = {(t, s): [] for t in range(len(surf.triangles)) for s in range(3)}
        self.port_corner = {}
        self.port_rank = {}
        self.pt_edge = {}
        self.seg = {}
        self.xroom = {}
        self._ids = 0

    def copy(self) -> Diagram:
        d = Diagram.__new__(Diagram)
        d.surf = self.surf
        d.pts = {e: list(v) for e, v in self.pts.items()}
        d.ports = {c: list(v) for c, v in self.ports.items()}
        d.port_corner = dict(self.port_corner)
        d.port_rank = dict(self.port_rank)
        d.pt_edge = dict(self.pt_edge)
        d.seg = dict(self.seg)
        d.xroom = dict(self.xroom)
        d._ids = self._ids
        return d

    def fresh_id(self) -> int:
        self._ids += 1
        return self._ids

    # mutation helpers -------------------------------------------------

    def new_pt(self, eid: str, index: int) -> int:
        pid = self.fresh_id()
        self.pts[eid].insert(index, pid)
        self.pt_edge[pid] = eid
        return pid

    def del_pt(self, pid: int) -> None:
        eid = self.pt_edge.pop(pid)
        self.pts[eid].remove(pid)

    def new_port(self, corner, index, rank=None) -> int:
        pid = self.fresh_id()
        lst = self.ports[corner]
        if index is None:
            index = len(lst)
        lst.insert(index, pid)
        self.port_corner[pid] = corner
        self.port_rank[pid] = rank
        return pid

    def del_port(self, pid: int) -> None:
        corner = self.port_corner.pop(pid)
        self.ports[corner].remove(pid)
        self.port_rank.pop(pid, None)

    def connect(self, n1, n2) -> None:
        self.seg[n1] = n2
        self.seg[n2] = n1

    def cut(self, n):
        """Remove the segment at node n, returning the far node."""
        m = self.seg.pop(n)
        del self.seg[m]
        return m

    # lookups ----------------------------------------------------------

    def pt_node(self, pid: int, bank: int):
        return ("p", pid, bank)

    def pt_bank_room(self, pid: int, bank: int) -> int:
        pls = self.surf.placements(self.pt_edge[pid])
        return pls[bank][0]

    def node_room(self, node) -> int:
        kind = node[0]
        if kind == "p":
            return self.pt_bank_room(node[1], node[2])
        if kind == "v":
            return self.port_corner[node[1]][0]
        return self.xroom[node[1]]

    def innermost_pt(self, eid: str, endidx: int):
        lst = self.pts[eid]
        if not lst:
            return None
        return lst[0] if endidx == 0 else lst[-1]

    def insert_innermost(self, eid: str, endidx: int) -> int:
        return self.new_pt(eid, 0 if endidx == 0 else len(self.pts[eid]))

    def vertex_ports(self, v: str) -> list[int]:
        """Ports at vertex v in angular order along the vertex link."""
        link = self.surf.vertex_link(v)
        out = []
        for corner in link.wedges:
            out.extend(reversed(self.ports[corner]))
        return out

    def has_crossings(self) -> bool:
        return bool(self.xroom)

    def busy_puncture(self):
        """A puncture holding two arc ends, if any."""
        for v in self.surf.punctures:
            ps = self.vertex_ports(v)
            if len(ps) >= 2:
                if len(ps) > 2:
                    raise EngineError(f"puncture {v} holds {len(ps)} ends")
                return v, ps
        return None

    # serialization ------------------------------------------------------

    def serialize(self):
        surf = self.surf
        ppos = {}
        for eid, lst in self.pts.items():
            ei = surf.edge_index[eid]
            for pos, pid in enumerate(lst):
                ppos[pid] = (ei, pos)
        vpos = {}
        corners = sorted(self.ports)
        for corner in corners:
            for pos, pid in enumerate(self.ports[corner]):
                vpos[pid] = (corner[0], corner[1], pos)

        def base_name(node):
            if node[0] == "p":
                ei, pos = ppos[node[1]]
                return ("p", ei, pos, node[2])
            if node[0] == "v":
                return ("v",) + vpos[node[1]]
            return ("x", node[1], node[2])

        xids = sorted(self.xroom)
        if xids:
            sig = {}
            for xid in xids:
                partners = []
                for leg in range(4):
                    n = self.seg.get(("x", xid, leg))
                    partners.append(base_name(n) if n is not None and n[0] != "x"
                                    else ("x",))
                sig[xid] = (self.xroom[xid], tuple(sorted(partners)))
            xids.sort(key=lambda x: (sig[x], x))
        xmap = {xid: i for i, xid in enumerate(xids)}

        def name(node):
            if node[0] == "x":
                return ("x", xmap[node[1]], node[2])
            return base_name(node)

        segs = set()
        for n1, n2 in self.seg.items():
            a, b = name(n1), name(n2)
            segs.add((a, b) if a <= b else (b, a))
        pts_part = tuple(len(self.pts[e.id]) for e in surf.edges if not e.boundary)
        ports_part = tuple(tuple(self.port_rank[p] for p in self.ports[c])
                           for c in corners)
        x_part = tuple(self.xroom[x] for x in xids)
        return (pts_part, ports_part, x_part, tuple(sorted(segs)))

    # sanity -------------------------------------------------------------

    def assert_ok(self) -> None:
        for n1, n2 in self.seg.items():
            assert self.seg[n2] == n1, "segment map is not an involution"
            assert self.node_room(n1) == self.node_room(n2), (n1, n2)
        nodes = set(self.seg)
        for eid, lst in self.pts.items():
            for pid in lst:
                for bank in range(len(self.surf.placements(eid))):
                    assert ("p", pid, bank) in nodes, ("loose point", eid, pid)
        for corner, lst in self.ports.items():
            for pid in lst:
                assert ("v", pid) in nodes, ("loose port", pid)
        for xid in self.xroom:
            for leg in range(4):
                assert ("x", xid, leg) in nodes, ("loose crossing", xid)


# --- simplification ----------------------------------------------------


def _try_null_arc(d: Diagram) -> bool:
    for corner, lst in d.ports.items():
        v = d.surf.corner_vertex(*corner)
        if d.surf.vertex_kinds[v] != "boundary":
            continue
        for i in range(len(lst) - 1):
            if d.seg.get(("v", lst[i])) == ("v", lst[i + 1]):
                return True
    return False


def _try_turnback(d: Diagram):
    """Pull one adjacent same-side return across its edge, if present.

    Returns None if no move applies, else the number of free trivial
    loops produced (0 or 1).
    """
    for eid, lst in d.pts.items():
        nbanks = len(d.surf.placements(eid))
        for i in range(len(lst) - 1):
            p, q = lst[i], lst[i + 1]
            for bank in range(nbanks):
                if d.seg.get(("p", p, bank)) != ("p", q, bank):
                    continue
                other = 1 - bank
                d.cut(("p", p, bank))
                a = d.cut(("p", p, other))
                if a == ("p", q, other):
                    d.del_pt(p)
                    d.del_pt(q)
                    return 1
                b = d.cut(("p", q, other))
                d.del_pt(p)
                d.del_pt(q)
                d.connect(a, b)
                return 0
    return None


def _corner_wedge_index(surf, corner):
    """Map a corner to (vertex, index of that wedge in the vertex link)."""
    cache = getattr(surf, "_wedge_index", None)
    if cache is None:
        cache = {}
        for v in surf.vertex_kinds:
            link = surf.vertex_link(v)
            for i, w in enumerate(link.wedges):
                cache[w] = (v, i)
        surf._wedge_index = cache
    return cache[corner]


def _try_corner_slide(d: Diagram) -> bool:
    """Slide one arc end across an edge end, erasing one point."""
    surf = d.surf
    for corner, lst in d.ports.items():
        if not lst:
            continue
        tri, slot = corner
        v, widx = _corner_wedge_index(surf, corner)
        link = surf.vertex_link(v)
        for which in (0, 1):
            if which == 0:
                port = lst[0]
                side = surf.side(tri, slot)
                eid, endidx = side.head_end()
                dest_w = widx + 1
            else:
                port = lst[-1]
                side = surf.side(tri, (slot + 1) % 3)
                eid, endidx = side.tail_end()
                dest_w = widx - 1
            if link.closed:
                dest_w %= len(link.wedges)
            elif not (0 <= dest_w < len(link.wedges)):
                continue
            pid = d.innermost_pt(eid, endidx)
            if pid is None:
                continue
            bank = surf.placements(eid).index((tri, slot) if which == 0
                                              else (tri, (slot + 1) % 3))
            if d.seg.get(("v", port)) != ("p", pid, bank):
                continue
            z = d.cut(("p", pid, 1 - bank))
            d.cut(("v", port))
            d.del_pt(pid)
            rank = d.port_rank[port]
            d.del_port(port)
            dest = link.wedges[dest_w]
            if which == 0:
                nid = d.new_port(dest, None, rank)
            else:
                nid = d.new_port(dest, 0, rank)
            d.connect(("v", nid), z)
            return True
    return False


_ADJ = ((0, 1), (1, 2), (2, 3), (3, 0))


def _try_rii(d: Diagram):
    """Remove one coherent parallel bigon between two crossings.

    Returns None if no bigon was found, else the number of trivial
    loops freed by the removal.  Cancelling the crossing pair pushes one
    strand across the other, so the two strands swap order on every edge
    the bigon runs through.
    """
    for xid in sorted(d.xroom):
        for i, j in _ADJ:
            n1 = d.seg.get(("x", xid, i))
            n2 = d.seg.get(("x", xid, j))
            corridor = []
            hops = 0
            while n1 is not None and n2 is not None and hops < 1000:
                hops += 1
                if n1[0] == "x" and n2[0] == "x":
                    if n1[1] != n2[1] or n1[1] == xid:
                        break
                    yid, k = n1[1], n1[2]
                    l = n2[2]
                    # arrival legs must be adjacent the mirrored way round
                    if (l + 1) % 4 != k:
                        break
                    if (i in (0, 2)) != (k in (0, 2)):
                        break
                    free = _splice_crossing(d, xid, ((0, 2), (1, 3)))
                    free += _splice_crossing(d, yid, ((0, 2), (1, 3)))
                    for eid, a in corridor:
                        lst = d.pts[eid]
                        lst[a], lst[a + 1] = lst[a + 1], lst[a]
                    return free
                if n1[0] == "p" and n2[0] == "p" and n1[2] == n2[2]:
                    eid1, eid2 = d.pt_edge[n1[1]], d.pt_edge[n2[1]]
                    if eid1 != eid2:
                        break
                    lst = d.pts[eid1]
                    a, b = lst.index(n1[1]), lst.index(n2[1])
                    if abs(a - b) != 1:
                        break
                    corridor.append((eid1, min(a, b)))
                    n1 = d.seg.get(("p", n1[1], 1 - n1[2]))
                    n2 = d.seg.get(("p", n2[1], 1 - n2[2]))
                    continue
                break
    return None


def _splice_crossing(d: Diagram, xid: int, pairing) -> int:
    """Replace a crossing by direct connections; returns freed loops."""
    free = 0
    for i, j in pairing:
        ni, nj = ("x", xid, i), ("x", xid, j)
        a = d.cut(ni)
        if a == nj:
            free += 1
            continue
        b = d.cut(nj)
        d.connect(a, b)
    del d.xroom[xid]
    return free


def _try_puncture_loop(d: Diagram):
    """Extract one innermost loop around a bare puncture, if present."""
    surf = d.surf
    for v in surf.punctures:
        link = surf.vertex_link(v)
        ends = link.ends
        n = len(ends)
        pids = []
        ok = True
        for eid, endidx in ends:
            pid = d.innermost_pt(eid, endidx)
            if pid is None:
                ok = False
                break
            pids.append(pid)
        if not ok or len(set(pids)) != n:
            continue
        # wedge j sits between ends[j] and ends[j+1]; the corner chord there
        # joins the innermost point of ends[j] (on the wedge's side slot+1)
        # to the innermost point of ends[j+1] (on side slot)
        good = True
        for j, (tri, slot) in enumerate(link.wedges):
            p_in = pids[j]
            p_out = pids[(j + 1) % n]
            e_in = ends[j][0]
            e_out = ends[(j + 1) % n][0]
            bank_in = surf.placements(e_in).index((tri, (slot + 1) % 3))
            bank_out = surf.placements(e_out).index((tri, slot))
            if d.seg.get(("p", p_in, bank_in)) != ("p", p_out, bank_out):
                good = False
                break
        if not good:
            continue
        for j, (tri, slot) in enumerate(link.wedges):
            e_in = ends[j][0]
            bank_in = surf.placements(e_in).index((tri, (slot + 1) % 3))
            d.cut(("p", pids[j], bank_in))
        for pid in pids:
            d.del_pt(pid)
        return True
    return False


def simplify(d: Diagram):
    """Run isotopy moves and local relations to a fixed point.

    Returns the scalar factor extracted along the way, or None when the
    diagram dies (a trivial arc at a marked point appeared).
    """
    factor = Scalar.one(GENERIC)
    fuel = 100000
    while True:
        fuel -= 1
        if fuel < 0:
            raise EngineError("simplification did not terminate")
        if _try_null_arc(d):
            return None
        res = _try_turnback(d)
        if res is not None:
            if res:
                factor = factor * loop_value()
            continue
        if _try_corner_slide(d):
            continue
        if _try_puncture_loop(d):
            factor = factor * puncture_loop_value()
            continue
        if d.xroom:
            free = _try_rii(d)
            if free is not None:
                factor = factor * loop_value() ** free
                continue
        return factor


# --- resolution --------------------------------------------------------


def _q_pairings():
    if SMOOTH_Q_CW:
        return ((0, 3), (1, 2)), ((0, 1), (2, 3))
    return ((0, 1), (2, 3)), ((0, 3), (1, 2))


def _reconnect(d: Diagram, v: str, src: int, dst: int) -> Scalar:
    """Join two arc ends at a puncture along the counterclockwise walk
    from port src to port dst, hugging the vertex.  Returns the trivial
    loop factor when the reconnection closes an empty loop."""
    surf = d.surf
    link = surf.vertex_link(v)
    n = len(link.wedges)
    cyc = []
    for j in range(n):
        cyc.append(("e", j))
        for pid in reversed(d.ports[link.wedges[j]]):
            cyc.append(("port", pid))
    i0 = cyc.index(("port", src))
    i1 = cyc.index(("port", dst))
    crossed = []
    k = (i0 + 1) % len(cyc)
    while k != i1:
        item = cyc[k]
        if item[0] == "e":
            crossed.append(item[1])
        else:
            raise EngineError("a third end blocks the reconnection")
        k = (k + 1) % len(cyc)

    za = d.seg.get(("v", src))
    direct = za == ("v", dst)
    if direct:
        d.cut(("v", src))
    else:
        za = d.cut(("v", src))
        zb = d.cut(("v", dst))
    d.del_port(src)
    d.del_port(dst)

    factor = Scalar.one(GENERIC)
    prev = None if direct else za
    first = None
    for j in crossed:
        eid, endidx = link.ends[j]
        tri, slot = link.wedges[j]
        # ends[j] is the head of the previous wedge's own side and the
        # tail of side slot+1 of wedge j
        bank_enter = surf.placements(eid).index(
            (link.wedges[j - 1][0], link.wedges[j - 1][1]))
        bank_exit = surf.placements(eid).index((tri, (slot + 1) % 3))
        pid = d.insert_innermost(eid, endidx)
        if prev is None:
            first = ("p", pid, bank_enter)
        else:
            d.connect(prev, ("p", pid, bank_enter))
        prev = ("p", pid, bank_exit)
    if direct:
        if prev is None:
            factor = factor * loop_value()
        else:
            d.connect(prev, first)
    else:
        d.connect(prev, zb)
    return factor


def resolve(d: Diagram, memo: dict) -> dict:
    """Fully reduce a diagram.

    Returns a map from canonical reduced-diagram keys to generic
    coefficients.  Reduced diagrams are interned in memo under
    ("frozen", key) so callers can recover them.
    """
    factor = simplify(d)
    if factor is None:
        return {}
    coeff = Coefficient.from_scalar(factor)

    if not d.xroom and d.busy_puncture() is None:
        key = freeze(d, memo)
        return {key: coeff}

    k = d.serialize()
    hit = memo.get(k)
    if hit is None:
        if d.xroom:
            xid = min(d.xroom)
            qp, bp = _q_pairings()
            d1 = d.copy()
            f1 = _splice_crossing(d1, xid, qp)
            d2 = d
            f2 = _splice_crossing(d2, xid, bp)
            r1 = resolve(d1, memo)
            r2 = resolve(d2, memo)
            c1 = Coefficient.from_scalar(Scalar.q_power(1, GENERIC) * loop_value() ** f1)
            c2 = Coefficient.from_scalar(Scalar.q_power(-1, GENERIC) * loop_value() ** f2)
            hit = _combine(r1, c1, r2, c2)
        else:
            v, ends = d.busy_puncture()
            upper, lower = _order_ends(d, ends)
            d1 = d.copy()
            f1 = _reconnect(d1, v, upper, lower)
            d2 = d
            f2 = _reconnect(d2, v, lower, upper)
            e = 1 if D_CCW_IS_PLUS else -1
            vinv = Coefficient.vertex(v, GENERIC, exp=-1)
            c1 = vinv * Scalar.s_power(e, GENERIC) * f1
            c2 = vinv * Scalar.s_power(-e, GENERIC) * f2
            hit = _combine(resolve(d1, memo), c1, resolve(d2, memo), c2)
        memo[k] = hit
    out = {}
    for key, c in hit.items():
        out[key] = c * coeff
    return out


def _order_ends(d: Diagram, ends):
    r0, r1 = d.port_rank[ends[0]], d.port_rank[ends[1]]
    if r0 is None and r1 is None:
        return ends[0], ends[1]
    if r0 is None or r1 is None or r0 == r1:
        raise EngineError("ambiguous stacking order at a puncture")
    return (ends[0], ends[1]) if r0 < r1 else (ends[1], ends[0])


def _combine(r1, c1, r2, c2):
    out = {}
    for r, c in ((r1, c1), (r2, c2)):
        for key, val in r.items():
            add = val * c
            if key in out:
                add = out[key] + add
            if add.is_zero():
                out.pop(key, None)
            else:
                out[key] = add
    return out


# --- freezing ----------------------------------------------------------


def _chord_side(surf, ca, cb):
    """The side of the room that a corner-to-corner chord runs along."""
    tri = ca[0]
    s1, s2 = ca[1], cb[1]
    if (s1 + 1) % 3 == s2:
        return tri, s2
    if (s2 + 1) % 3 == s1:
        return tri, s1
    raise EngineError("corner chord inside one corner")


def _normalize_banks(d: Diagram) -> bool:
    """Redraw side-parallel corner chords on the canonical side of their
    edge.  Only applies when the thin strip against the edge is empty."""
    surf = d.surf
    for corner in sorted(d.ports):
        lst = d.ports[corner]
        for pid in lst:
            n2 = d.seg.get(("v", pid))
            if n2 is None or n2[0] != "v":
                continue
            cb = d.port_corner[n2[1]]
            if cb == corner:
                continue
            tri, slot = _chord_side(surf, corner, cb)
            side = surf.side(tri, slot)
            if side.edge.boundary:
                continue
            pls = surf.placements(side.edge.id)
            if pls[0] == (tri, slot):
                continue
            if d.pts[side.edge.id]:
                continue
            # the chord hugs side slot: at the corner before it (slot-1) it
            # must sit last in ccw room order, at corner slot first
            pa, pb = (pid, n2[1]) if corner == (tri, (slot - 1) % 3) else (n2[1], pid)
            if d.ports[(tri, (slot - 1) % 3)][-1] != pa:
                continue
            if d.ports[(tri, slot)][0] != pb:
                continue
            t2, s2 = pls[1] if pls[0] == (tri, slot) else pls[0]
            d.cut(("v", pa))
            d.del_port(pa)
            d.del_port(pb)
            na = d.new_port((t2, (s2 - 1) % 3), None)
            nb = d.new_port((t2, s2), 0)
            d.connect(("v", na), ("v", nb))
            return True
    return False


def freeze(d: Diagram, memo: dict):
    """Canonicalize a fully reduced diagram and intern it."""
    if d.xroom:
        raise EngineError("cannot freeze a diagram with crossings")
    while _normalize_banks(d):
        pass
    for pid in d.port_rank:
        d.port_rank[pid] = None
    key = d.serialize()
    memo.setdefault(("frozen", key), d.copy())
    return key


# --- superposition -------------------------------------------------------


def _room_slots(d: Diagram, tri: int):
    """Attachment nodes along the room boundary in ccw order."""
    surf = d.surf
    slots = []
    for slot in range(3):
        side = surf.side(tri, slot)
        e = side.edge
        if not e.boundary:
            bank = surf.placements(e.id).index((tri, slot))
            seq = d.pts[e.id] if not side.rev else list(reversed(d.pts[e.id]))
            for pid in seq:
                slots.append(("p", pid, bank))
        for pid in d.ports[(tri, slot)]:
            slots.append(("v", pid))
    return slots


def _riffle(rng, a, b):
    """Merge two lists preserving the order within each."""
    if rng is None:
        return [(0, x) for x in a] + [(1, x) for x in b]
    out = []
    i = j = 0
    while i < len(a) or j < len(b):
        take_a = i < len(a) and (j >= len(b) or rng.random() < 0.5)
        if take_a:
            out.append((0, a[i]))
            i += 1
        else:
            out.append((1, b[j]))
            j += 1
    return out


def superpose(d1: Diagram, d2: Diagram, rng=None):
    """Stack d1 over d2.

    Returns (diagram, coefficient): the coefficient is the q power that
    converts the stacked height order into the preferred one.  A seeded
    rng interleaves the drawings instead of placing d2 innermost; any
    choice must (and, per the test suite, does) yield the same product.
    """
    surf = d1.surf
    if d1.xroom or d2.xroom:
        raise EngineError("superpose expects reduced diagrams")
    for attempt in range(len(_PRIMES)):
        try:
            return _superpose_once(surf, d1, d2, rng, attempt)
        except _Coincide:
            continue
    raise EngineError("could not find a generic drawing")


def _superpose_once(surf, d1, d2, rng, attempt):
    d = Diagram(surf)
    nodemap = [{}, {}]
    fac_of_port = {}
    for eid in d.pts:
        for fi, pid in _riffle(rng, d1.pts[eid], d2.pts[eid]):
            new = d.new_pt(eid, len(d.pts[eid]))
            nodemap[fi][("p", pid)] = new
    for corner in sorted(d.ports):
        v = surf.corner_vertex(*corner)
        punc = surf.vertex_kinds[v] == "puncture"
        for fi, pid in _riffle(rng, d1.ports[corner], d2.ports[corner]):
            new = d.new_port(corner, None, rank=fi if punc else None)
            nodemap[fi][("v", pid)] = new
            fac_of_port[new] = fi

    def translate(fi, node):
        if node[0] == "p":
            return ("p", nodemap[fi][("p", node[1])], node[2])
        return ("v", nodemap[fi][("v", node[1])])

    chords = {tri: [] for tri in range(len(surf.triangles))}
    for fi, src in ((0, d1), (1, d2)):
        seen = set()
        for n1, n2 in src.seg.items():
            if n1 in seen:
                continue
            seen.add(n1)
            seen.add(n2)
            a, b = translate(fi, n1), translate(fi, n2)
            chords[d.node_room(a)].append((a, b, fi))

    inv = 0
    misplaced = 0 if E_UP_CCW else 1
    for v in surf.boundary_vertices:
        seen = 0
        for pid in d.vertex_ports(v):
            if fac_of_port.get(pid) == misplaced:
                seen += 1
            else:
                inv += seen

    for tri, lst in chords.items():
        _cross_room(d, tri, lst, attempt)

    coeff = Coefficient.from_scalar(Scalar.q_power(E_SIGN * inv, GENERIC))
    return d, coeff


def _cross_room(d: Diagram, tri: int, chords, attempt: int) -> None:
    if not chords:
        return
    prime = _PRIMES[attempt]
    pos = {}
    for i, node in enumerate(_room_slots(d, tri)):
        pos[node] = Fraction(i) + Fraction((i * i) % prime, 3 * prime)
    events = [[] for _ in chords]
    for ia, ch1 in enumerate(chords):
        if ch1[2] != 0:
            continue
        a, b = sorted((pos[ch1[0]], pos[ch1[1]]))
        for ib, ch2 in enumerate(chords):
            if ch2[2] != 1:
                continue
            c, e = sorted((pos[ch2[0]], pos[ch2[1]]))
            if not (a < c < b < e or c < a < e < b):
                continue
            xid = d.fresh_id()
            d.xroom[xid] = tri
            den = a + b - c - e
            if den == 0:
                raise _Coincide
            x = (a * b - c * e) / den
            u = (b - a, b * b - a * a)
            w = (e - c, e * e - c * c)
            crossval = u[0] * w[1] - u[1] * w[0]
            if crossval == 0:
                raise _Coincide
            if crossval > 0:
                legs1, legs2 = (0, 2), (1, 3)
            else:
                legs1, legs2 = (0, 2), (3, 1)
            events[ia].append((x, xid, legs1))
            events[ib].append((x, xid, legs2))
    for ic, ch in enumerate(chords):
        evs = events[ic]
        if not evs:
            d.connect(ch[0], ch[1])
            continue
        evs.sort(key=lambda t: t[0])
        for i in range(len(evs) - 1):
            if evs[i][0] == evs[i + 1][0]:
                raise _Coincide
        start, endn = ch[0], ch[1]
        if pos[start] > pos[endn]:
            start, endn = endn, start
        prev = start
        for x, xid, (lo, hi) in evs:
            d.connect(prev, ("x", xid, lo))
            prev = ("x", xid, hi)
        d.connect(prev, endn)


# --- strand traversal (used by the curve layer) --------------------------


def strands(d: Diagram):
    """Split a reduced diagram into components.

    Returns (paths, cycles): a path is the node sequence from one port
    to another, a cycle the node sequence of a closed strand starting at
    its smallest point node.  Node sequences list each visited
    attachment, with both banks of every crossed point.
    """
    if d.xroom:
        raise EngineError("strands of an unreduced diagram")
    visited = set()
    paths = []
    for corner in sorted(d.ports):
        for pid in d.ports[corner]:
            node = ("v", pid)
            if node in visited:
                continue
            seq = [node]
            visited.add(node)
            cur = d.seg[node]
            while True:
                seq.append(cur)
                visited.add(cur)
                if cur[0] == "v":
                    break
                mate = ("p", cur[1], 1 - cur[2])
                seq.append(mate)
                visited.add(mate)
                cur = d.seg[mate]
            paths.append(seq)
    cycles = []
    for eid in sorted(d.pts):
        for pid in d.pts[eid]:
            node = ("p", pid, 0)
            if node in visited:
                continue
            seq = []
            cur = node
            while cur not in visited:
                seq.append(cur)
                visited.add(cur)
                mate = ("p", cur[1], 1 - cur[2])
                seq.append(mate)
                visited.add(mate)
                cur = d.seg[mate]
            cycles.append(seq)
    return paths, cycles
