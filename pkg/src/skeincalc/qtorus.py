"""Quantum tori over skew-symmetric integer matrices.

A skew matrix P of size k defines an algebra with invertible
generators x_1, ..., x_k and relations x_i x_j = q^(P_ij) x_j x_i.
Elements are finite sums of monomials q-power * x^a with a in Z^k,
stored in a fixed normal order.  At an odd root of unity of order n
the center is spanned by the monomials x^a with P a = 0 mod n; the
index of that lattice in Z^k is a perfect square whose square root
is the PI degree.

``build_PI`` derives such a matrix from a triangulated surface with
marked boundary: after removing one small loop around each puncture
(based at a common boundary vertex), the remaining edges q-commute
with exponents given by signed corner counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .coeffs import GENERIC, RingMode, Scalar
from .diagrams import EngineError
from .surface import Surface, SurfaceError


class SkewMatrix:
    """A square integer matrix P with P = -P^T."""

    __slots__ = ("k", "rows")

    def __init__(self, rows):
        rows = tuple(tuple(int(x) for x in row) for row in rows)
        k = len(rows)
        if any(len(row) != k for row in rows):
            raise ValueError("matrix is not square")
        for i in range(k):
            for j in range(k):
                if rows[i][j] != -rows[j][i]:
                    raise ValueError(
                        f"matrix is not skew-symmetric at ({i}, {j})")
        self.k = k
        self.rows = rows

    @staticmethod
    def zero(k: int) -> SkewMatrix:
        return SkewMatrix([[0] * k for _ in range(k)])

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.rows[ij[0]][ij[1]]

    def __eq__(self, other) -> bool:
        return isinstance(other, SkewMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __str__(self) -> str:
        width = max((len(str(x)) for row in self.rows for x in row), default=1)
        return "\n".join(" ".join(str(x).rjust(width) for x in row)
                         for row in self.rows)

    def __repr__(self) -> str:
        return f"SkewMatrix({self.k}x{self.k})"


def read_matrix(text: str) -> SkewMatrix:
    """Parse the matrix file format: a line with k, then k rows of k integers."""
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise ValueError("empty matrix file")
    try:
        k = int(lines[0])
    except ValueError:
        raise ValueError(f"matrix file: bad size line {lines[0]!r}") from None
    if k < 1:
        raise ValueError(f"matrix file: size must be positive, got {k}")
    if len(lines) != k + 1:
        raise ValueError(f"matrix file: expected {k} rows, got {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        try:
            row = [int(tok) for tok in ln.split()]
        except ValueError:
            raise ValueError(f"matrix file: bad row {ln!r}") from None
        if len(row) != k:
            raise ValueError(f"matrix file: row {ln!r} does not have {k} entries")
        rows.append(row)
    return SkewMatrix(rows)


# ---------------------------------------------------------------------------
# torus elements


def _sigma(P: SkewMatrix, a: tuple[int, ...], b: tuple[int, ...]) -> int:
    """Normal-ordering exponent: x^a x^b = q^sigma(a, b) x^(a+b).

    sigma(a, b) = sum over i < j of P_ij a_i b_j.  Any bilinear form
    whose antisymmetrization is P would do; this one makes the
    defining relation x_i x_j = q^(P_ij) x_j x_i hold on the nose.
    """
    total = 0
    for i in range(P.k):
        ai = a[i]
        if not ai:
            continue
        row = P.rows[i]
        for j in range(i + 1, P.k):
            if row[j] and b[j]:
                total += row[j] * ai * b[j]
    return total


class TorusElement:
    """A finite sum of monomials coeff * x^a, a in Z^k.

    Terms are kept sorted by exponent vector with zero coefficients
    dropped, so equality is structural.
    """

    __slots__ = ("k", "mode", "terms")

    def __init__(self, k: int, mode: RingMode,
                 terms: tuple[tuple[tuple[int, ...], Scalar], ...]):
        self.k = k
        self.mode = mode
        self.terms = terms

    @staticmethod
    def _make(k: int, mode: RingMode, acc: dict) -> TorusElement:
        terms = tuple((exps, sc) for exps, sc in sorted(acc.items())
                      if not sc.is_zero())
        return TorusElement(k, mode, terms)

    @staticmethod
    def zero(k: int, mode: RingMode = GENERIC) -> TorusElement:
        return TorusElement(k, mode, ())

    @staticmethod
    def monomial(exps, mode: RingMode = GENERIC,
                 coeff: Scalar | None = None) -> TorusElement:
        exps = tuple(int(e) for e in exps)
        sc = Scalar.one(mode) if coeff is None else coeff
        if sc.is_zero():
            return TorusElement.zero(len(exps), mode)
        return TorusElement(len(exps), mode, ((exps, sc),))

    @staticmethod
    def unit(k: int, mode: RingMode = GENERIC) -> TorusElement:
        return TorusElement.monomial((0,) * k, mode)

    @staticmethod
    def generator(i: int, k: int, mode: RingMode = GENERIC) -> TorusElement:
        """The generator x_(i+1), indices counted from 0."""
        if not 0 <= i < k:
            raise ValueError(f"generator index {i} out of range for k={k}")
        return TorusElement.monomial(tuple(int(j == i) for j in range(k)), mode)

    def _check(self, other: TorusElement) -> None:
        if self.k != other.k:
            raise ValueError(f"dimension mismatch: {self.k} vs {other.k}")
        if self.mode != other.mode:
            raise ValueError(f"mode mismatch: {self.mode} vs {other.mode}")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: TorusElement) -> TorusElement:
        self._check(other)
        acc = dict(self.terms)
        for exps, sc in other.terms:
            acc[exps] = acc[exps] + sc if exps in acc else sc
        return TorusElement._make(self.k, self.mode, acc)

    def __neg__(self) -> TorusElement:
        return TorusElement(self.k, self.mode,
                            tuple((exps, -sc) for exps, sc in self.terms))

    def __sub__(self, other: TorusElement) -> TorusElement:
        return self + (-other)

    def scale(self, sc: Scalar) -> TorusElement:
        acc = {exps: c * sc for exps, c in self.terms}
        return TorusElement._make(self.k, self.mode, acc)

    def __eq__(self, other) -> bool:
        return (isinstance(other, TorusElement) and self.k == other.k
                and self.mode == other.mode and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.k, self.mode, self.terms))

    @staticmethod
    def _mono_str(exps: tuple[int, ...]) -> str:
        parts = [f"x{i + 1}" + (f"^{e}" if e != 1 else "")
                 for i, e in enumerate(exps) if e]
        return "*".join(parts) if parts else "1"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({sc}) * {self._mono_str(exps)}"
                          for exps, sc in self.terms)

    def __repr__(self) -> str:
        return f"TorusElement({self})"


def torus_mul(u: TorusElement, v: TorusElement, P: SkewMatrix) -> TorusElement:
    """Product in the quantum torus defined by P."""
    u._check(v)
    if P.k != u.k:
        raise ValueError(f"dimension mismatch: matrix {P.k} vs element {u.k}")
    acc: dict = {}
    for a, ca in u.terms:
        for b, cb in v.terms:
            exps = tuple(x + y for x, y in zip(a, b))
            sc = ca * cb * Scalar.q_power(_sigma(P, a, b), u.mode)
            acc[exps] = acc[exps] + sc if exps in acc else sc
    return TorusElement._make(u.k, u.mode, acc)


# ---------------------------------------------------------------------------
# center at a root of unity


def _diagonalize(P: SkewMatrix) -> tuple[list[int], list[list[int]]]:
    """Integer-equivalence diagonalization D = U P V.

    Returns the diagonal of D and the unimodular column transform V;
    U is not needed by the callers.  Row operations act on the work
    matrix only, column operations are mirrored on V.
    """
    k = P.k
    a = [list(row) for row in P.rows]
    v = [[int(i == j) for j in range(k)] for i in range(k)]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_col(dst, src, mult):
        for row in a:
            row[dst] += mult * row[src]
        for row in v:
            row[dst] += mult * row[src]

    for t in range(k):
        while True:
            pivot = None
            for i in range(t, k):
                for j in range(t, k):
                    if a[i][j] and (pivot is None
                                    or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            if pivot[0] != t:
                a[t], a[pivot[0]] = a[pivot[0]], a[t]
            if pivot[1] != t:
                swap_cols(t, pivot[1])
            p = a[t][t]
            clean = True
            for i in range(t + 1, k):
                if a[i][t]:
                    q, r = divmod(a[i][t], p)
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if r:
                        clean = False
            for j in range(t + 1, k):
                if a[t][j]:
                    q, r = divmod(a[t][j], p)
                    add_col(j, t, -q)
                    if r:
                        clean = False
            if clean:
                break
        if a[t][t] < 0:
            add_col(t, t, -2)

    return [a[i][i] for i in range(k)], v


def center_lattice(P: SkewMatrix, n: int) -> tuple[tuple[int, ...], ...]:
    """A basis of the lattice K = { a in Z^k : P a = 0 mod n }.

    Monomials x^a with a in K are exactly the central ones at a root
    of unity of order n.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError(f"order must be odd and at least 3, got {n}")
    diag, v = _diagonalize(P)
    mults = [n // math.gcd(d, n) for d in diag]
    return tuple(tuple(v[r][i] * mults[i] for r in range(P.k))
                 for i in range(P.k))


@lru_cache(maxsize=16)
def _residue_vectors(n: int, k: int):
    grids = np.meshgrid(*([np.arange(n)] * k), indexing="ij")
    vecs = np.stack(grids, axis=-1).reshape(-1, k)
    vecs.setflags(write=False)
    return vecs


def kernel_size(P: SkewMatrix, n: int) -> int:
    """Count residue vectors a mod n with P a = 0 mod n by enumeration.

    Cost is n^k; intended as an independent oracle for small k and n.
    """
    vecs = _residue_vectors(n, P.k)
    mat = np.array(P.rows, dtype=np.int64)
    residues = (vecs @ mat.T) % n
    return int(np.count_nonzero((residues == 0).all(axis=1)))


def pi_degree(P: SkewMatrix, n: int) -> int:
    """The PI degree at an odd root of unity of order n.

    Computed as the square root of the index [Z^k : K] of the central
    lattice; skew-symmetry makes the index a perfect square.  For
    small sizes the result is cross-checked against the enumeration
    oracle, since pi^2 * |kernel mod n| must equal n^k.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError(f"order must be odd and at least 3, got {n}")
    diag, _ = _diagonalize(P)
    index = 1
    for d in diag:
        index *= n // math.gcd(d, n)
    root = math.isqrt(index)
    if root * root != index:
        raise EngineError(f"central lattice index {index} is not a perfect square")
    if P.k <= 4 and n <= 7:
        kern = kernel_size(P, n)
        if root * root * kern != n ** P.k:
            raise EngineError(
                f"PI degree {root} disagrees with kernel oracle {kern} at n={n}")
    return root


# ---------------------------------------------------------------------------
# the matrix of a triangulated surface with marked boundary


@dataclass(frozen=True)
class TorusPresentation:
    """Index data and skew matrix produced by build_PI.

    labels lists the retained edges (in surface order) followed by the
    punctures; removed lists the dropped encircling loop edges; paths
    maps each puncture to the edge joining it to the anchor.
    """

    anchor: str | None
    removed: tuple[str, ...]
    paths: dict[str, str]
    labels: tuple[str, ...]
    matrix: SkewMatrix


def _monogon_triangles(surf: Surface) -> dict[str, list[tuple[str, str, str]]]:
    """Map each puncture to its (base vertex, loop edge, path edge) triangles.

    A puncture x is encircled by a loop edge e based at a boundary
    vertex p when some triangle has side multiset {e, f, f} with f
    joining p to x.
    """
    found: dict[str, list[tuple[str, str, str]]] = {}
    for sides in surf.triangles:
        eids = [s.edge.id for s in sides]
        doubled = [e for e in set(eids) if eids.count(e) == 2]
        if len(doubled) != 1:
            continue
        path = surf.edge(doubled[0])
        loop = surf.edge(next(e for e in eids if e != doubled[0]))
        vs = {path.v1, path.v2}
        punc = [w for w in vs if surf.vertex_kinds[w] == "puncture"]
        base = [w for w in vs if surf.vertex_kinds[w] == "boundary"]
        if (len(punc) == 1 and len(base) == 1 and not loop.boundary
                and loop.v1 == loop.v2 == base[0]):
            found.setdefault(punc[0], []).append((base[0], loop.id, path.id))
    return found


def build_PI(surf: Surface, anchor: str | None = None,
             encircling: dict[str, str] | None = None) -> TorusPresentation:
    """Skew matrix of signed corner counts for a triangulated surface.

    Requires at least one boundary marked point.  Each puncture must
    be cut off by a loop edge based at a single common boundary vertex
    (the anchor); those loops are removed and the remaining edges,
    together with the punctures, index the matrix.  Entries between
    two edges count their germ pairs at each boundary vertex with
    sign +1 when the second germ follows the first counterclockwise;
    rows at punctures are identically zero.

    anchor and encircling (puncture -> loop edge id) are inferred when
    not given and validated when they are.
    """
    if not surf.boundary_vertices:
        raise SurfaceError(f"{surf.name}: no boundary marked point")

    candidates = _monogon_triangles(surf)
    chosen: dict[str, tuple[str, str, str]] = {}
    if surf.punctures:
        missing = [x for x in surf.punctures if x not in candidates]
        if missing:
            raise SurfaceError(
                f"{surf.name}: no encircling loop for puncture {missing[0]}")
        if anchor is None:
            shared = set.intersection(
                *({c[0] for c in candidates[x]} for x in surf.punctures))
            if not shared:
                raise SurfaceError(
                    f"{surf.name}: no single boundary vertex encircles every puncture")
            anchor = min(shared)
        elif surf.vertex_kinds.get(anchor) != "boundary":
            raise SurfaceError(f"{surf.name}: anchor {anchor} is not a boundary vertex")
        for x in surf.punctures:
            at_anchor = sorted(c for c in candidates[x] if c[0] == anchor)
            if encircling is not None and x in encircling:
                at_anchor = [c for c in at_anchor if c[1] == encircling[x]]
            if not at_anchor:
                raise SurfaceError(
                    f"{surf.name}: puncture {x} has no encircling loop at {anchor}")
            chosen[x] = at_anchor[0]
        loops = [c[1] for c in chosen.values()]
        if len(set(loops)) != len(loops):
            raise SurfaceError(f"{surf.name}: punctures share an encircling loop")
        for x, (_, _, path) in chosen.items():
            link = surf.vertex_link(x)
            inside = {eid for eid, _ in link.ends}
            if inside != {path}:
                raise SurfaceError(
                    f"{surf.name}: puncture {x} meets edges other than its path")

    removed = {c[1] for c in chosen.values()}
    kept = [e.id for e in surf.edges if e.id not in removed]
    labels = tuple(kept) + tuple(surf.punctures)
    pos = {eid: i for i, eid in enumerate(kept)}

    k = len(labels)
    rows = [[0] * k for _ in range(k)]
    for b in surf.boundary_vertices:
        link = surf.vertex_link(b)
        germs = [eid for eid, _ in link.ends if eid in pos]
        for i, e1 in enumerate(germs):
            for j, e2 in enumerate(germs):
                if i < j:
                    rows[pos[e1]][pos[e2]] += 1
                elif j < i:
                    rows[pos[e1]][pos[e2]] -= 1

    return TorusPresentation(anchor=anchor, removed=tuple(sorted(removed)),
                             paths={x: c[2] for x, c in chosen.items()},
                             labels=labels, matrix=SkewMatrix(rows))
