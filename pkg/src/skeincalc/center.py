"""Central elements at odd roots of unity.

Builds the central generators (Chebyshev threading of loops, the
homogenized Chebyshev threading of interior arcs, odd powers of
boundary-incident arcs, boundary component products, vertex classes),
certifies centrality against a bounded basis, and decomposes a central
element into generator products by leading term subtraction.

Centrality can only be refuted exactly: a nonzero commutator with any
basis curve is conclusive, while a clean sweep certifies centrality up
to the enumeration bound only.
"""

from __future__ import annotations

from dataclasses import dataclass

from skeincalc.algebra import Skein, commutator, threaded_power
from skeincalc.coeffs import GENERIC, Coefficient, RingMode
from skeincalc.curves import (AdmissibilityError, Component, MultiCurve,
                              curve_from_coordinates, deg_V, edge_arc,
                              enumerate_basis)
from skeincalc.diagrams import EngineError


class NotCentralError(Exception):
    """The structure of an element rules out centrality."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def chebyshev(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th first kind Chebyshev polynomial,
    trace-normalized so that the constant one is 2.

    Entry k is the coefficient of x^k.
    """
    if n < 0:
        raise ValueError("negative Chebyshev index")
    if n == 0:
        return (2,)
    prev, cur = (2,), (0, 1)
    for _ in range(n - 1):
        nxt = [0] * (len(cur) + 1)
        for k, c in enumerate(cur):
            nxt[k + 1] += c
        for k, c in enumerate(prev):
            nxt[k] -= c
        prev, cur = cur, tuple(nxt)
    return cur


def homogenized_chebyshev(n: int) -> tuple[tuple[int, int], ...]:
    """T_n with the variable scaled by the square root of vw and the
    whole polynomial divided by that root.

    Entry k is (coefficient, vw exponent) for x^k.  Odd n keeps every
    exponent a nonnegative integer because T_n then has odd degree
    terms only; even n would need half-integer exponents.
    """
    if n < 0 or n % 2 == 0:
        raise ValueError("threading order must be a nonnegative odd integer")
    out = []
    for k, c in enumerate(chebyshev(n)):
        out.append((c, (k - 1) // 2 if c else 0))
    return tuple(out)


def poly_str(poly) -> str:
    """Render a polynomial from chebyshev or homogenized_chebyshev."""
    bits = []
    for k in range(len(poly) - 1, -1, -1):
        ent = poly[k]
        c, e = ent if isinstance(ent, tuple) else (ent, 0)
        if not c:
            continue
        body = ""
        if e:
            body += "vw" if e == 1 else f"(vw)^{e}"
        if k:
            if body:
                body += "*"
            body += "x" if k == 1 else f"x^{k}"
        mag = abs(c)
        if mag != 1 or not body:
            body = f"{mag}" + ("*" + body if body else "")
        if not bits:
            bits.append(body if c > 0 else "-" + body)
        else:
            bits.append((" + " if c > 0 else " - ") + body)
    return "".join(bits) if bits else "0"


# generator kinds
LOOP = "loop"
INTERIOR_ARC = "interior-arc"
ARC_POWER = "arc-power"
BOUNDARY_PRODUCT = "boundary-product"
VERTEX = "vertex"


@dataclass(frozen=True)
class CentralGenerator:
    """One generator of the center together with its realized value."""

    kind: str
    n: int
    label: str
    value: Skein

    def __str__(self) -> str:
        return self.label

    def __repr__(self) -> str:
        return f"<central {self.label} on {self.value.surf.name}>"


def _single_record(mc: MultiCurve) -> Component:
    recs = mc.records()
    if len(recs) != 1:
        raise ValueError("generator data must be a one-component curve")
    return recs[0]


def make_central(surf, kind: str, data, n: int = 3,
                 mode: RingMode = GENERIC) -> CentralGenerator:
    """Realize a central generator of the given kind.

    data is the defining curve for the loop, interior-arc and arc-power
    kinds, a boundary edge id (or component index, or edge id tuple)
    for boundary-product, and a (vertex id, exponent) pair for vertex.
    n is the threading order and must be odd for the threaded kinds.
    """
    if kind != VERTEX and (n < 1 or n % 2 == 0):
        raise ValueError("threading order must be a positive odd integer")
    kinds = surf.vertex_kinds

    if kind == LOOP:
        mc = data
        rec = _single_record(mc)
        if mc.surf is not surf or rec.kind != "loop":
            raise ValueError("loop threading needs a single loop component")
        value = threaded_power(mc, chebyshev(n), mode)
        return CentralGenerator(kind, n, f"T{n}[{mc.describe()}]", value)

    if kind == INTERIOR_ARC:
        mc = data
        rec = _single_record(mc)
        ends = rec.ends
        if (mc.surf is not surf or rec.kind == "loop" or len(ends) != 2
                or any(kinds[v] != "puncture" for v in ends)
                or ends[0] == ends[1]):
            raise ValueError(
                "interior threading needs an arc joining two distinct punctures")
        va, vb = ends
        x = Skein.of(mc, mode)
        out = Skein.zero(surf, mode)
        acc = Skein.unit(surf, mode)
        poly = homogenized_chebyshev(n)
        for k, (c, e) in enumerate(poly):
            if c:
                w = Coefficient.vertex(va, mode, e) * Coefficient.vertex(vb, mode, e)
                out = out + acc.scale(w).scale(c)
            if k + 1 < len(poly):
                acc = acc * x
        return CentralGenerator(kind, n, f"H{n}[{mc.describe()}]", out)

    if kind == ARC_POWER:
        mc = data
        rec = _single_record(mc)
        if (mc.surf is not surf or rec.kind == "loop"
                or not any(kinds[v] == "boundary" for v in rec.ends)):
            raise ValueError("the power kind needs an arc with a boundary end")
        value = Skein.of(mc, mode) ** n
        return CentralGenerator(kind, n, f"P{n}[{mc.describe()}]", value)

    if kind == BOUNDARY_PRODUCT:
        comps = surf.boundary_components()
        if isinstance(data, int):
            comp = comps[data]
        elif isinstance(data, str):
            comp = next((c for c in comps if data in c), None)
            if comp is None:
                raise ValueError(f"no boundary component contains edge {data}")
        else:
            comp = next((c for c in comps if set(c) == set(data)), None)
            if comp is None:
                raise ValueError("edge set is not a boundary component")
        # one fixed cyclic order: the boundary orientation, started at the
        # lexicographically smallest edge so that the product is canonical
        i = comp.index(min(comp))
        comp = comp[i:] + comp[:i]
        value = Skein.unit(surf, mode)
        for eid in comp:
            value = value * Skein.of(edge_arc(surf, eid), mode)
        return CentralGenerator(kind, n, "B[%s]" % ".".join(comp), value)

    if kind == VERTEX:
        vid, exp = data if isinstance(data, tuple) else (data, 1)
        if kinds.get(vid) != "puncture":
            raise ValueError(f"{vid} is not an interior puncture")
        if exp not in (1, -1):
            raise ValueError("vertex class exponent must be +-1")
        value = Skein.unit(surf, mode).scale(Coefficient.vertex(vid, mode, exp))
        label = vid if exp == 1 else f"{vid}^-1"
        return CentralGenerator(kind, n, label, value)

    raise ValueError(f"unknown generator kind {kind!r}")


def in_boundary_lattice(m, n: int) -> bool:
    """Whether an exponent vector over the boundary arcs of one component
    lies in the lattice spanned by n*e_i and (1, ..., 1), i.e. whether
    all entries agree mod n."""
    m = tuple(m)
    if not m:
        return True
    r = m[0] % n
    return all(x % n == r for x in m)


@dataclass(frozen=True)
class CentralityReport:
    central: bool
    bound: int
    witness: MultiCurve | None = None
    commutator: Skein | None = None

    def __bool__(self) -> bool:
        return self.central

    def __str__(self) -> str:
        if self.central:
            return f"central up to bound {self.bound}"
        return (f"not central: witness {self.witness.describe()},"
                f" commutator {self.commutator}")


def is_central(z: Skein, bound: int) -> CentralityReport:
    """Commute z with every basis curve up to the bound.

    The first nonzero commutator refutes centrality conclusively; a
    clean sweep is a certificate up to the bound only.
    """
    if bound < 1:
        raise ValueError("the enumeration bound must be at least 1")
    for g in enumerate_basis(z.surf, bound):
        c = commutator(z, Skein.of(g, z.mode))
        if not c.is_zero:
            return CentralityReport(False, bound, g, c)
    return CentralityReport(True, bound)


def homogeneous_components(z: Skein) -> list[tuple[tuple, Skein]]:
    """Split by vertex degree; the pieces re-sum to z.

    Returns (degree vector, piece) pairs sorted by degree.  Terms whose
    coefficient mixes vertex monomials of different degrees are split.
    """
    surf = z.surf
    pidx = {v: i for i, v in enumerate(surf.punctures)}
    buckets: dict[tuple, dict] = {}
    for mc, coeff in z.terms.items():
        base = deg_V(mc)
        for vm, sc in coeff.split_by_vertex_monomial().items():
            d = list(base)
            for vid, k in vm:
                d[pidx[vid]] -= 2 * k
            piece = Coefficient(z.mode, ((vm, sc),))
            bucket = buckets.setdefault(tuple(d), {})
            bucket[mc] = bucket[mc] + piece if mc in bucket else piece
    return [(d, Skein(surf, z.mode, terms))
            for d, terms in sorted(buckets.items())]


def strip_vertices(z: Skein) -> tuple[Coefficient, Skein]:
    """Factor the vertex monomial shared by all terms out of a
    homogeneous element.

    Every homogeneous element carries one: a basis curve has at most one
    arc end per puncture, so its degree determines the compensating
    monomial.  Terms with different monomials certify that the input was
    not homogeneous, hence not a graded piece of a central element.
    """
    if z.is_zero:
        raise EngineError("cannot strip the zero element")
    common = None
    for coeff in z.terms.values():
        for vm in coeff.split_by_vertex_monomial():
            if common is None:
                common = vm
            elif vm != common:
                raise NotCentralError(
                    "terms carry different vertex monomials, so the element"
                    " is not a graded piece of a central element")
    mono = Coefficient.one(z.mode)
    for vid, e in common:
        mono = mono * Coefficient.vertex(vid, z.mode, e)
    return mono, z.scale(mono.unit_inverse())


def leading_term(z: Skein) -> tuple[Coefficient, MultiCurve]:
    """The coordinate-maximal term."""
    mc, c = z.leading_term()
    return c, mc


@dataclass(frozen=True)
class LTFactorization:
    """A basis multicurve split into the component classes that drive
    the decomposition.

    Interior arcs and boundary-incident puncture arcs come with the
    multiplicity of their surrounding loop or monogon arc; bare monogon
    arcs enclose a puncture with no arc on it; band arcs are the
    remaining boundary-to-boundary arcs after the boundary product
    powers are taken out.
    """

    loops: tuple[tuple[Component, int], ...]
    interior_arcs: tuple[tuple[Component, int], ...]
    incident_arcs: tuple[tuple[Component, int], ...]
    monogons: tuple[tuple[Component, str, int], ...]
    band_arcs: tuple[tuple[Component, int], ...]
    boundary_powers: tuple[tuple[tuple[str, ...], int, int], ...]


def _monogon_puncture(surf, rec: Component) -> str | None:
    """The puncture enclosed by an arc bounding a once-punctured
    monogon, or None.

    Such an arc has both ends at one marked point and doubled arc
    coordinates: halving them must realize an arc from the marked point
    to the puncture it encloses.
    """
    if len(rec.ends) != 2 or rec.ends[0] != rec.ends[1]:
        return None
    if any(x % 2 for x in rec.coords):
        return None
    half = tuple(x // 2 for x in rec.coords)
    w = rec.ends[0]
    for x in surf.punctures:
        try:
            curve_from_coordinates(surf, half, endpoints=tuple(sorted((x, w))))
        except AdmissibilityError:
            continue
        return x
    return None


def lt_factorization(m: MultiCurve, n: int) -> LTFactorization:
    """Split a basis multicurve into the classes the subtraction loop
    consumes: plain loops, interior arcs with their surrounding loop
    powers, boundary-incident arcs with their monogon arc powers, bare
    monogon arcs, band arcs, and per-component boundary product powers
    (maximal power and its mod n reduction)."""
    surf = m.surf
    kinds = surf.vertex_kinds
    loops: dict[Component, int] = {}
    arcs_pp: list[Component] = []
    arcs_pb: list[Component] = []
    arcs_bb: dict[Component, int] = {}
    for rec, mult in m.component_multiset().items():
        if rec.kind == "loop":
            loops[rec] = mult
            continue
        punctured = [kinds[v] == "puncture" for v in rec.ends]
        if all(punctured):
            arcs_pp.append(rec)
        elif any(punctured):
            arcs_pb.append(rec)
        else:
            arcs_bb[rec] = mult

    interior = []
    for rec in arcs_pp:
        target = tuple(2 * x for x in rec.coords)
        mj = 0
        for lc in list(loops):
            if lc.coords == target:
                mj = loops.pop(lc)
                break
        interior.append((rec, mj))

    incident = []
    for rec in arcs_pb:
        target = tuple(2 * x for x in rec.coords)
        mk = 0
        for bc in list(arcs_bb):
            if bc.coords == target:
                mk = arcs_bb.pop(bc)
                break
        incident.append((rec, mk))

    powers = []
    for comp in surf.boundary_components():
        i = comp.index(min(comp))
        comp = comp[i:] + comp[:i]
        edge_recs = [edge_arc(surf, eid).records()[0] for eid in comp]
        x_d = min(arcs_bb.get(rec, 0) for rec in edge_recs)
        y_d = x_d % n
        for rec in edge_recs:
            if y_d:
                arcs_bb[rec] -= y_d
        powers.append((tuple(comp), x_d, y_d))

    arc_ends = {v for rec in arcs_pp + arcs_pb for v in rec.ends
                if kinds[v] == "puncture"}
    monogons = []
    bands = []
    for rec, mult in arcs_bb.items():
        if not mult:
            continue
        x = _monogon_puncture(surf, rec)
        if x is None:
            bands.append((rec, mult))
        elif x in arc_ends:
            raise EngineError(
                f"monogon arc around {x} does not double the arc ending there")
        else:
            monogons.append((rec, x, mult))

    return LTFactorization(
        tuple(sorted(loops.items())), tuple(interior), tuple(incident),
        tuple(sorted(monogons)), tuple(sorted(bands)), tuple(powers))


@dataclass
class DecompositionCertificate:
    """A combination of generator products that re-multiplies to the
    input, plus whatever residual could not be decomposed.

    residual is zero exactly when ok; on failure it keeps the part the
    subtraction loop could not express, so value() always returns the
    original input.
    """

    ok: bool
    entries: list[tuple[tuple[tuple[CentralGenerator, int], ...], Coefficient]]
    residual: Skein
    bound: int
    reason: str | None = None
    witness: CentralityReport | None = None

    def value(self) -> Skein:
        total = self.residual
        for gens, coeff in self.entries:
            part = Skein.unit(total.surf, total.mode)
            for gen, exp in gens:
                part = part * gen.value ** exp
            total = total + part.scale(coeff)
        return total

    def render(self) -> str:
        lines = []
        verdict = "ok" if self.ok else f"failed: {self.reason}"
        lines.append(f"certificate {verdict} (bound {self.bound})")
        for i, (gens, coeff) in enumerate(self.entries, 1):
            prod = " * ".join(g.label if e == 1 else f"{g.label}^{e}"
                              for g, e in gens) or "1"
            lines.append(f"  term {i}: ({coeff}) * {prod}")
        lines.append(f"  residual: {self.residual}")
        if self.witness is not None and not self.witness.central:
            lines.append(f"  witness: {self.witness}")
        return "\n".join(lines)


def _as_curve(surf, rec: Component) -> MultiCurve:
    return curve_from_coordinates(surf, rec.coords, rec.ends)


def _ring_curve(surf, rec: Component) -> MultiCurve:
    """The curve doubling an arc: the surrounding loop for an interior
    arc, the monogon arc for a boundary-incident one."""
    target = tuple(2 * x for x in rec.coords)
    kinds = surf.vertex_kinds
    ends = tuple(w for v in rec.ends if kinds[v] == "boundary" for w in (v, v))
    return curve_from_coordinates(surf, target, endpoints=ends)


def _gens_for_lt(surf, fac: LTFactorization, n: int, mode: RingMode,
                 cache: dict) -> tuple[tuple[CentralGenerator, int], ...]:
    """Generators whose product has the factored curve as leading term.

    Raises NotCentralError when the multiplicities fail the divisibility
    constraints satisfied by every central element.
    """

    def gen(kind, data, key):
        if key not in cache:
            cache[key] = make_central(surf, kind, data, n, mode)
        return cache[key]

    out: list[tuple[CentralGenerator, int]] = []
    for rec, mj in fac.interior_arcs:
        if (2 * mj + 1) % n:
            raise NotCentralError(
                f"an interior arc carries {mj} surrounding loops,"
                f" but 2*{mj}+1 is not divisible by {n}")
        t = ((2 * mj + 1) // n - 1) // 2
        beta = _as_curve(surf, rec)
        out.append((gen(INTERIOR_ARC, beta, (INTERIOR_ARC, beta.key)), 1))
        if t:
            ring = _ring_curve(surf, rec)
            out.append((gen(LOOP, ring, (LOOP, ring.key)), t))
    for rec, mk in fac.incident_arcs:
        if (2 * mk + 1) % n:
            raise NotCentralError(
                f"a boundary-incident arc carries {mk} monogon arcs,"
                f" but 2*{mk}+1 is not divisible by {n}")
        t = ((2 * mk + 1) // n - 1) // 2
        gamma = _as_curve(surf, rec)
        out.append((gen(ARC_POWER, gamma, (ARC_POWER, gamma.key)), 1))
        if t:
            ring = _ring_curve(surf, rec)
            out.append((gen(ARC_POWER, ring, (ARC_POWER, ring.key)), t))

    # everything else must be a perfect n-th power: divide the summed
    # coordinates and endpoint multiset and realize the root curve
    coords = [0] * surf.n_edges
    end_count: dict[str, int] = {}
    for rec, mult in fac.loops + fac.band_arcs + tuple(
            (rec, mult) for rec, _, mult in fac.monogons):
        for i, x in enumerate(rec.coords):
            coords[i] += mult * x
        for v in rec.ends:
            end_count[v] = end_count.get(v, 0) + mult
    if any(x % n for x in coords) or any(c % n for c in end_count.values()):
        raise NotCentralError(
            "the loop and band part of the leading term is not an n-th power")
    ends = tuple(sorted(v for v, c in end_count.items()
                        for _ in range(c // n)))
    try:
        root = curve_from_coordinates(
            surf, tuple(x // n for x in coords), endpoints=ends)
    except AdmissibilityError as err:
        raise NotCentralError(
            f"the divided loop and band coordinates are unrealizable: {err}")
    for rec, mult in sorted(root.component_multiset().items()):
        mc = _as_curve(surf, rec)
        if rec.kind == "loop":
            out.append((gen(LOOP, mc, (LOOP, mc.key)), mult))
        else:
            out.append((gen(ARC_POWER, mc, (ARC_POWER, mc.key)), mult))

    for comp, _, y_d in fac.boundary_powers:
        if y_d:
            out.append((gen(BOUNDARY_PRODUCT, comp, (BOUNDARY_PRODUCT, comp)),
                        y_d))
    return tuple(out)


def decompose_central(z: Skein, n: int, bound: int) -> DecompositionCertificate:
    """Write a central element as a combination of generator products.

    Repeatedly factors the leading term of the maximal graded piece,
    assembles the generator product with the same leading term, and
    subtracts; the leading coordinates strictly decrease, so the loop
    terminates.  Divisibility failures refute centrality: the failure
    is cross-checked with a witness search up to the bound.
    """
    if z.mode.is_generic or z.mode.order != n:
        raise ValueError(f"decomposition needs coefficients at a root of"
                         f" unity of order {n}")
    if n < 3 or n % 2 == 0:
        raise ValueError("the order must be an odd integer at least 3")
    surf = z.surf
    entries: list = []
    cache: dict = {}
    current = z
    try:
        while not current.is_zero:
            pieces = homogeneous_components(current)
            piece = max(pieces, key=lambda p: p[1].leading_term()[0].sort_key())[1]
            mono, stripped = strip_vertices(piece)
            lt, c = stripped.leading_term()
            gens = _gens_for_lt(surf, lt_factorization(lt, n), n, z.mode, cache)
            zprime = Skein.unit(surf, z.mode)
            for g, e in gens:
                zprime = zprime * g.value ** e
            zp_lt, zp_c = zprime.leading_term()
            if zp_lt != lt:
                raise EngineError(
                    f"generator product led with {zp_lt.describe()}"
                    f" instead of {lt.describe()}")
            ratio = mono * c * zp_c.unit_inverse()
            entries.append((gens, ratio))
            current = current - zprime.scale(ratio)
    except NotCentralError as err:
        return DecompositionCertificate(
            False, entries, current, bound, reason=err.reason,
            witness=is_central(z, bound))
    return DecompositionCertificate(True, entries, current, bound)
