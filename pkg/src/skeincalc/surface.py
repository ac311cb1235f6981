"""Triangulated marked surfaces.

A surface is described combinatorially: vertices are marked points
(boundary marked points or interior punctures), edges are directed arcs
between vertices, and triangles are cyclically ordered triples of sides
listed counterclockwise.  A side is an edge together with a traversal
flag, written ``e.0`` (along the edge) or ``e.1`` (against it).

Conventions enforced by validation:

* every interior edge occurs in exactly two sides, with opposite flags
  (counterclockwise triangles glue orientably),
* every boundary edge occurs in exactly one side, traversed forward,
  and boundary edges are declared positively oriented, i.e. with the
  surface lying on the left,
* the three sides of a triangle chain head to tail.

Vertex links are computed by walking corners counterclockwise.  For a
boundary vertex the walk starts at the outgoing boundary edge and ends
at the incoming one; the resulting order of edge ends around the vertex
is also the preferred height order used for arcs ending there (earlier
in the link means higher).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources


class SurfaceError(Exception):
    """Raised when a surface description fails validation."""


@dataclass(frozen=True)
class Edge:
    id: str
    index: int
    v1: str
    v2: str
    boundary: bool

    def end_vertex(self, endidx: int) -> str:
        return self.v1 if endidx == 0 else self.v2


class Side:
    """One occurrence of an edge in a triangle."""

    __slots__ = ("edge", "rev", "tri", "slot")

    def __init__(self, edge: Edge, rev: bool, tri: int, slot: int):
        self.edge = edge
        self.rev = rev
        self.tri = tri
        self.slot = slot

    @property
    def start(self) -> str:
        return self.edge.v2 if self.rev else self.edge.v1

    @property
    def end(self) -> str:
        return self.edge.v1 if self.rev else self.edge.v2

    def tail_end(self) -> tuple[str, int]:
        """The edge end sitting at the side's start vertex."""
        return (self.edge.id, 1 if self.rev else 0)

    def head_end(self) -> tuple[str, int]:
        return (self.edge.id, 0 if self.rev else 1)

    def __repr__(self) -> str:
        return f"{self.edge.id}.{1 if self.rev else 0}@T{self.tri}[{self.slot}]"


@dataclass(frozen=True)
class Link:
    """Edge ends around a vertex in counterclockwise order.

    ``wedges[i]`` is the (triangle, corner slot) between ``ends[i]`` and
    ``ends[i + 1]`` (indices mod length when the link is closed).
    Corner slot s of a triangle sits at the vertex where side s ends
    and side s + 1 starts.
    """

    vertex: str
    ends: tuple[tuple[str, int], ...]
    wedges: tuple[tuple[int, int], ...]
    closed: bool


class Surface:
    def __init__(self, name: str, vertices: dict[str, str],
                 edges: list[Edge], triangles: list[tuple], warnings: list[str]):
        self.name = name
        self.vertex_kinds = vertices
        self.edges = edges
        self.edge_index = {e.id: e.index for e in edges}
        self.triangles = triangles
        self.warnings = warnings
        self._placements: dict[str, tuple] = {}
        for tri, sides in enumerate(triangles):
            for slot, side in enumerate(sides):
                self._placements.setdefault(side.edge.id, ())
                self._placements[side.edge.id] += ((tri, slot),)
        self._links: dict[str, Link] = {}

    # construction -----------------------------------------------------

    @staticmethod
    def from_text(text: str, name: str = "surface") -> Surface:
        vertices: dict[str, str] = {}
        edge_records = []
        tri_records = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            kind, args = parts[0], parts[1:]
            if kind == "name" and len(args) == 1:
                name = args[0]
            elif kind == "vertex" and len(args) == 2 and args[1] in ("boundary", "puncture"):
                if args[0] in vertices:
                    raise SurfaceError(f"line {lineno}: duplicate vertex {args[0]}")
                vertices[args[0]] = args[1]
            elif kind == "edge" and len(args) == 4 and args[3] in ("interior", "boundary"):
                edge_records.append((lineno, args[0], args[1], args[2], args[3] == "boundary"))
            elif kind == "triangle" and len(args) == 3:
                tri_records.append((lineno, args))
            else:
                raise SurfaceError(f"line {lineno}: cannot parse {raw.strip()!r}")

        edges = []
        by_id = {}
        for lineno, eid, v1, v2, bd in edge_records:
            if eid in by_id:
                raise SurfaceError(f"line {lineno}: duplicate edge {eid}")
            for v in (v1, v2):
                if v not in vertices:
                    raise SurfaceError(f"line {lineno}: unknown vertex {v}")
            e = Edge(eid, len(edges), v1, v2, bd)
            edges.append(e)
            by_id[eid] = e

        triangles = []
        for lineno, tokens in tri_records:
            sides = []
            for token in tokens:
                eid, _, flag = token.partition(".")
                if eid not in by_id or flag not in ("0", "1"):
                    raise SurfaceError(f"line {lineno}: bad side {token!r}")
                sides.append(Side(by_id[eid], flag == "1", len(triangles), len(sides)))
            triangles.append(tuple(sides))

        surf = Surface(name, vertices, edges, triangles, warnings=[])
        errors = surf._validate()
        if errors:
            raise SurfaceError("; ".join(errors))
        return surf

    @staticmethod
    def from_file(path) -> Surface:
        with open(path) as fh:
            text = fh.read()
        name = str(path).rsplit("/", 1)[-1]
        if name.endswith(".surf"):
            name = name[:-5]
        return Surface.from_text(text, name)

    # validation --------------------------------------------------------

    def _validate(self) -> list[str]:
        errors = []
        if not self.vertex_kinds:
            errors.append("surface has no marked points")
        for tri, sides in enumerate(self.triangles):
            for slot, side in enumerate(sides):
                nxt = sides[(slot + 1) % 3]
                if side.end != nxt.start:
                    errors.append(f"triangle {tri}: side {slot} ends at {side.end}"
                                  f" but side {(slot + 1) % 3} starts at {nxt.start}")
            eids = [s.edge.id for s in sides]
            if len(set(eids)) < 3:
                self.warnings.append(f"triangle {tri} is self-folded ({' '.join(eids)})")
        for e in self.edges:
            pls = self._placements.get(e.id, ())
            if e.boundary:
                if len(pls) != 1:
                    errors.append(f"boundary edge {e.id} lies in {len(pls)} sides, wants 1")
                elif self.side(*pls[0]).rev:
                    errors.append(f"boundary edge {e.id} must be traversed forward")
            else:
                if len(pls) != 2:
                    errors.append(f"interior edge {e.id} lies in {len(pls)} sides, wants 2")
                elif self.side(*pls[0]).rev == self.side(*pls[1]).rev:
                    errors.append(f"interior edge {e.id} is traversed twice in the same"
                                  " direction (gluing not orientable)")
        if errors:
            return errors

        out_bd: dict[str, list[str]] = {}
        in_bd: dict[str, list[str]] = {}
        for e in self.edges:
            if e.boundary:
                out_bd.setdefault(e.v1, []).append(e.id)
                in_bd.setdefault(e.v2, []).append(e.id)
        for v, kind in self.vertex_kinds.items():
            n_out, n_in = len(out_bd.get(v, [])), len(in_bd.get(v, []))
            if kind == "puncture" and (n_out or n_in):
                errors.append(f"puncture {v} touches a boundary edge")
            if kind == "boundary" and (n_out != 1 or n_in != 1):
                errors.append(f"boundary vertex {v} has {n_out} outgoing and {n_in}"
                              " incoming boundary edges, wants 1 and 1")
        used = {e.id for e in self.edges if self._placements.get(e.id)}
        for e in self.edges:
            if e.id not in used:
                errors.append(f"edge {e.id} lies in no triangle")
        if errors:
            return errors

        try:
            total = 0
            for v in self.vertex_kinds:
                total += len(self.vertex_link(v).wedges)
            if total != 3 * len(self.triangles):
                errors.append("vertex links do not account for every corner")
        except SurfaceError as exc:
            errors.append(str(exc))
        return errors

    # lookups -----------------------------------------------------------

    def edge(self, eid: str) -> Edge:
        return self.edges[self.edge_index[eid]]

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def punctures(self) -> list[str]:
        return [v for v, k in self.vertex_kinds.items() if k == "puncture"]

    @property
    def boundary_vertices(self) -> list[str]:
        return [v for v, k in self.vertex_kinds.items() if k == "boundary"]

    def side(self, tri: int, slot: int) -> Side:
        return self.triangles[tri][slot]

    def placements(self, eid: str) -> tuple:
        return self._placements[eid]

    def other_placement(self, tri: int, slot: int):
        """The second occurrence of the same edge, or None on the boundary."""
        side = self.side(tri, slot)
        pls = self._placements[side.edge.id]
        if len(pls) == 1:
            return None
        return pls[1] if pls[0] == (tri, slot) else pls[0]

    def corner_vertex(self, tri: int, slot: int) -> str:
        return self.side(tri, slot).end

    # links ---------------------------------------------------------------

    def vertex_link(self, v: str) -> Link:
        if v in self._links:
            return self._links[v]
        link = self._walk_link(v)
        self._links[v] = link
        return link

    def _walk_link(self, v: str) -> Link:
        closed = self.vertex_kinds[v] == "puncture"
        if closed:
            start_end = None
            for e in self.edges:
                for endidx in (0, 1):
                    if e.end_vertex(endidx) == v:
                        start_end = (e.id, endidx)
                        break
                if start_end:
                    break
            if start_end is None:
                raise SurfaceError(f"vertex {v} has no incident edge")
        else:
            douts = [e for e in self.edges if e.boundary and e.v1 == v]
            start_end = (douts[0].id, 0)

        ends = [start_end]
        wedges = []
        state = self._tail_placement(start_end)
        limit = 6 * len(self.triangles) + 3
        while True:
            tri, slot = state
            corner = (tri, (slot - 1) % 3)
            wedges.append(corner)
            head_side = self.side(tri, (slot - 1) % 3)
            nxt = head_side.head_end()
            if closed and nxt == start_end:
                break
            if not closed and self.edge(nxt[0]).boundary:
                ends.append(nxt)
                break
            ends.append(nxt)
            other = self.other_placement(tri, (slot - 1) % 3)
            if other is None:
                raise SurfaceError(f"link walk around {v} fell off the surface")
            state = other
            if len(wedges) > limit:
                raise SurfaceError(f"link walk around {v} does not close")
        return Link(v, tuple(ends), tuple(wedges), closed)

    def _tail_placement(self, end: tuple[str, int]) -> tuple[int, int]:
        """The (triangle, slot) whose side starts with the given edge end."""
        eid, endidx = end
        for tri, slot in self._placements[eid]:
            if self.side(tri, slot).tail_end() == end:
                return (tri, slot)
        raise SurfaceError(f"edge end {end} is never a side tail")

    def peripheral_vector(self, v: str) -> tuple[int, ...]:
        """How often a small loop around the puncture v meets each edge."""
        counts = [0] * self.n_edges
        for eid, _ in self.vertex_link(v).ends:
            counts[self.edge_index[eid]] += 1
        return tuple(counts)

    # global invariants --------------------------------------------------

    def euler_characteristic(self) -> int:
        return len(self.vertex_kinds) - len(self.edges) + len(self.triangles)

    def boundary_components(self) -> list[list[str]]:
        nxt = {}
        for e in self.edges:
            if e.boundary:
                nxt[e.v1] = e
        seen = set()
        comps = []
        for e in self.edges:
            if not e.boundary or e.id in seen:
                continue
            comp = []
            cur = e
            while cur.id not in seen:
                seen.add(cur.id)
                comp.append(cur.id)
                cur = nxt[cur.v2]
            comps.append(comp)
        return comps

    def summary(self) -> str:
        lines = [
            f"surface {self.name}",
            f"  vertices: {len(self.vertex_kinds)}"
            f" ({len(self.boundary_vertices)} boundary, {len(self.punctures)} punctures)",
            f"  edges: {len(self.edges)}"
            f" ({sum(1 for e in self.edges if e.boundary)} boundary)",
            f"  triangles: {len(self.triangles)}",
            f"  euler characteristic: {self.euler_characteristic()}",
            f"  boundary components: {len(self.boundary_components())}",
        ]
        for w in self.warnings:
            lines.append(f"  warning: {w}")
        return "\n".join(lines)


@lru_cache(maxsize=None)
def builtin_surface(name: str) -> Surface:
    """Load one of the bundled example surfaces by name."""
    path = resources.files("skeincalc").joinpath(f"data/{name}.surf")
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise SurfaceError(f"no bundled surface named {name!r}") from None
    return Surface.from_text(text, name)
