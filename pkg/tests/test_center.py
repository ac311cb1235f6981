"""Central element tests.

The Chebyshev table is checked against the trace identity
T_n(y + 1/y) = y^n + y^-n with y a generic quantum parameter, which
pins every coefficient.  Exchange exponents on the triangle follow the
two-sided rule: moving a product of boundary arcs past the arc along
e_i costs q to the power (multiplicity of the next edge around the
boundary) minus (multiplicity of the previous one).
"""

import random

import pytest

from skeincalc.algebra import Skein, commutator, threaded_power
from skeincalc.center import (
    ARC_POWER,
    BOUNDARY_PRODUCT,
    INTERIOR_ARC,
    LOOP,
    VERTEX,
    CentralityReport,
    NotCentralError,
    chebyshev,
    decompose_central,
    homogeneous_components,
    homogenized_chebyshev,
    in_boundary_lattice,
    is_central,
    lt_factorization,
    make_central,
    poly_str,
    strip_vertices,
)
from skeincalc.coeffs import GENERIC, Coefficient, Scalar, root_of_unity
from skeincalc.curves import curve_from_coordinates, edge_arc, enumerate_basis
from skeincalc.surface import builtin_surface

R3 = root_of_unity(3)
R5 = root_of_unity(5)


def _uw_arc(disk, mode=GENERIC):
    return curve_from_coordinates(disk, (1, 1, 2, 2, 0), endpoints=("u", "w"))


# --- polynomials -------------------------------------------------------------


def test_chebyshev_table():
    assert chebyshev(0) == (2,)
    assert chebyshev(1) == (0, 1)
    assert chebyshev(2) == (-2, 0, 1)
    assert chebyshev(3) == (0, -3, 0, 1)
    assert chebyshev(4) == (2, 0, -4, 0, 1)
    assert chebyshev(5) == (0, 5, 0, -5, 0, 1)


def test_chebyshev_trace_identity():
    # T_n(y + 1/y) = y^n + y^-n determines the coefficients uniquely
    y = Scalar.q_power(1, GENERIC)
    base = y + Scalar.q_power(-1, GENERIC)
    for n in range(9):
        total = Scalar.zero(GENERIC)
        acc = Scalar.one(GENERIC)
        for c in chebyshev(n):
            if c:
                total = total + acc * Scalar.integer(c, GENERIC)
            acc = acc * base
        assert total == Scalar.q_power(n, GENERIC) + Scalar.q_power(-n, GENERIC)


def test_chebyshev_rejects_negative_index():
    with pytest.raises(ValueError):
        chebyshev(-1)


def test_homogenized_chebyshev_values():
    assert homogenized_chebyshev(1) == ((0, 0), (1, 0))
    assert homogenized_chebyshev(3) == ((0, 0), (-3, 0), (0, 0), (1, 1))
    assert homogenized_chebyshev(5) == (
        (0, 0), (5, 0), (0, 0), (-5, 1), (0, 0), (1, 2))


def test_homogenized_chebyshev_rejects_even_order():
    for n in (0, 2, 4, -3):
        with pytest.raises(ValueError):
            homogenized_chebyshev(n)


def test_poly_str():
    assert poly_str(chebyshev(3)) == "x^3 - 3*x"
    assert poly_str(chebyshev(0)) == "2"
    assert poly_str(homogenized_chebyshev(3)) == "vw*x^3 - 3*x"
    assert poly_str(homogenized_chebyshev(5)) == "(vw)^2*x^5 - 5*vw*x^3 + 5*x"
    assert poly_str(()) == "0"


# --- generator construction ---------------------------------------------------


def test_loop_threading():
    torus = builtin_surface("once_punctured_torus")
    mc = curve_from_coordinates(torus, (0, 2, 2))
    gen = make_central(torus, LOOP, mc, 3, R3)
    assert gen.label == "T3[loop:(0,1,1)]"
    x = Skein.of(mc, R3)
    assert gen.value == x ** 3 - x.scale(3)
    assert is_central(gen.value, 2).central


def test_interior_arc_threading():
    disk = builtin_surface("twice_punctured_disk")
    mc = _uw_arc(disk)
    gen = make_central(disk, INTERIOR_ARC, mc, 3, R3)
    assert gen.label == "H3[arc:u-w:(1/2,1/2,1,1,0)]"
    x = Skein.of(mc, R3)
    uw = Coefficient.vertex("u", R3) * Coefficient.vertex("w", R3)
    assert gen.value == (x ** 3).scale(uw) - x.scale(3)
    assert is_central(gen.value, 2).central


def test_arc_power():
    disk = builtin_surface("twice_punctured_disk")
    mc = edge_arc(disk, "g1")
    gen = make_central(disk, ARC_POWER, mc, 3, R3)
    assert gen.label == "P3[edge:g1]"
    assert gen.value == Skein.of(mc, R3) ** 3
    assert is_central(gen.value, 2).central


def test_boundary_product_is_central_generically():
    tri = builtin_surface("triangle")
    gen = make_central(tri, BOUNDARY_PRODUCT, 0, 3, GENERIC)
    assert gen.label == "B[e1.e2.e3]"
    assert is_central(gen.value, 2).central


def test_boundary_product_canonical_order():
    # any spelling of the component yields the product in one fixed order
    tri = builtin_surface("triangle")
    a = make_central(tri, BOUNDARY_PRODUCT, 0, 3, GENERIC)
    b = make_central(tri, BOUNDARY_PRODUCT, "e2", 3, GENERIC)
    c = make_central(tri, BOUNDARY_PRODUCT, ("e3", "e1", "e2"), 3, GENERIC)
    assert a.value == b.value == c.value
    assert a.label == b.label == c.label


def test_vertex_class():
    disk = builtin_surface("twice_punctured_disk")
    gen = make_central(disk, VERTEX, ("u", -1), 3, R3)
    assert gen.label == "u^-1"
    assert gen.value == Skein.unit(disk, R3).scale(
        Coefficient.vertex("u", R3, exp=-1))
    assert is_central(gen.value, 2).central
    plain = make_central(disk, VERTEX, "w", 3, R3)
    assert plain.label == "w"


def test_torus_t5_is_central():
    torus = builtin_surface("once_punctured_torus")
    mc = curve_from_coordinates(torus, (0, 2, 2))
    gen = make_central(torus, LOOP, mc, 5, R5)
    assert gen.label == "T5[loop:(0,1,1)]"
    assert gen.value == threaded_power(mc, chebyshev(5), R5)
    assert is_central(gen.value, 2).central


def test_make_central_validation():
    tri = builtin_surface("triangle")
    disk = builtin_surface("twice_punctured_disk")
    torus = builtin_surface("once_punctured_torus")
    aloop = curve_from_coordinates(torus, (0, 2, 2))
    with pytest.raises(ValueError, match="odd"):
        make_central(torus, LOOP, aloop, 2, R3)
    with pytest.raises(ValueError, match="loop component"):
        make_central(disk, LOOP, edge_arc(disk, "g1"), 3, R3)
    with pytest.raises(ValueError, match="distinct punctures"):
        make_central(torus, INTERIOR_ARC, aloop, 3, R3)
    with pytest.raises(ValueError, match="distinct punctures"):
        make_central(disk, INTERIOR_ARC, edge_arc(disk, "g1"), 3, R3)
    with pytest.raises(ValueError, match="boundary end"):
        make_central(disk, ARC_POWER, _uw_arc(disk), 3, R3)
    with pytest.raises(ValueError, match="boundary end"):
        make_central(torus, ARC_POWER, aloop, 3, R3)
    with pytest.raises(ValueError, match="no boundary component"):
        make_central(tri, BOUNDARY_PRODUCT, "e9", 3, GENERIC)
    with pytest.raises(ValueError, match="not a boundary component"):
        make_central(tri, BOUNDARY_PRODUCT, ("e1", "e2"), 3, GENERIC)
    with pytest.raises(ValueError, match="not an interior puncture"):
        make_central(tri, VERTEX, "p1", 3, GENERIC)
    with pytest.raises(ValueError, match="exponent"):
        make_central(disk, VERTEX, ("u", 2), 3, R3)
    with pytest.raises(ValueError, match="unknown generator kind"):
        make_central(tri, "mystery", None, 3, GENERIC)
    with pytest.raises(ValueError, match="one-component"):
        make_central(torus, LOOP, curve_from_coordinates(torus, (0, 4, 4)),
                     3, R3)


# --- commutation and refutation ----------------------------------------------


def test_exchange_exponents_on_the_triangle():
    tri = builtin_surface("triangle")
    b1 = Skein.of(edge_arc(tri, "e1"))
    b2 = Skein.of(edge_arc(tri, "e2"))
    b3 = Skein.of(edge_arc(tri, "e3"))
    q = lambda k: Scalar.q_power(k, GENERIC)
    assert b2 * b1 == (b1 * b2).scale(q(1))
    assert (b2 * b2) * b1 == (b1 * (b2 * b2)).scale(q(2))
    assert b3 * b1 == (b1 * b3).scale(q(-1))
    assert b3 * b2 == (b2 * b3).scale(q(1))
    balanced = b2 * b3
    assert balanced * b1 == b1 * balanced
    assert balanced * b2 == (b2 * balanced).scale(q(1))


def test_in_boundary_lattice():
    assert in_boundary_lattice((3, 3, 3), 3)
    assert in_boundary_lattice((0, 0, 0), 3)
    assert in_boundary_lattice((1, 1, 1), 3)
    assert in_boundary_lattice((4, 1, 7), 3)
    assert not in_boundary_lattice((0, 1, 0), 3)
    assert not in_boundary_lattice((0, 1, 1), 3)
    assert not in_boundary_lattice((3, 3, 4), 3)
    assert in_boundary_lattice((5,), 3)
    assert in_boundary_lattice((), 3)


def test_boundary_arcs_central_iff_lattice():
    # degree vectors over the triangle boundary with entries below 3
    tri = builtin_surface("triangle")
    arcs = [Skein.of(edge_arc(tri, e), R3) for e in ("e1", "e2", "e3")]
    for m in ((0, 1, 0), (1, 1, 0), (2, 1, 1), (1, 1, 1), (2, 2, 2),
              (0, 0, 0), (2, 0, 1)):
        z = Skein.unit(tri, R3)
        for x, k in zip(arcs, m):
            z = z * x ** k
        assert is_central(z, 2).central == in_boundary_lattice(m, 3)


def test_refutation_reports_witness():
    tri = builtin_surface("triangle")
    rep = is_central(Skein.of(edge_arc(tri, "e2"), R3), 2)
    assert not rep and not rep.central
    assert rep.witness.describe() == "edge:e3"
    assert not rep.commutator.is_zero
    assert str(rep).startswith("not central: witness edge:e3")
    assert commutator(Skein.of(edge_arc(tri, "e2"), R3),
                      Skein.of(rep.witness, R3)) == rep.commutator


def test_is_central_rejects_bad_bound():
    tri = builtin_surface("triangle")
    with pytest.raises(ValueError):
        is_central(Skein.unit(tri), 0)


def test_loop_cube_is_not_central():
    torus = builtin_surface("once_punctured_torus")
    x = Skein.of(curve_from_coordinates(torus, (0, 2, 2)), R3)
    rep = is_central(x ** 3, 2)
    assert not rep.central


# --- grading helpers -----------------------------------------------------------


def test_homogeneous_components_resum():
    disk = builtin_surface("twice_punctured_disk")
    g = Skein.of(edge_arc(disk, "g1"))
    z = g + g * g + Skein.unit(disk).scale(2)
    pieces = homogeneous_components(z)
    assert [d for d, _ in pieces] == [(0, 0), (1, 0), (2, 0)]
    total = Skein.zero(disk)
    for _, piece in pieces:
        assert piece.is_homogeneous
        total = total + piece
    assert total == z


def test_strip_vertices():
    disk = builtin_surface("twice_punctured_disk")
    g = Skein.of(edge_arc(disk, "g1"))
    mono, stripped = strip_vertices(g * g)
    assert mono == Coefficient.vertex("u", GENERIC, exp=-1)
    assert stripped == Skein.of(edge_arc(disk, "c1")).scale(
        Scalar.s_power(1, GENERIC))
    assert stripped.scale(mono) == g * g


def test_strip_vertices_rejects_mixed_monomials():
    disk = builtin_surface("twice_punctured_disk")
    g = Skein.of(edge_arc(disk, "g1"))
    mixed = g * g + Skein.of(edge_arc(disk, "c1"))
    with pytest.raises(NotCentralError, match="different vertex monomials"):
        strip_vertices(mixed)


# --- leading term factorization --------------------------------------------------


def test_lt_factorization_boundary_powers():
    # four e1 chords with one e2 and one e3: one full boundary product
    # comes out (maximal power 1, reduced power 1), three e1 bands remain
    tri = builtin_surface("triangle")
    coords = tuple(4 * a + b + c for a, b, c in zip(
        edge_arc(tri, "e1").coordinates, edge_arc(tri, "e2").coordinates,
        edge_arc(tri, "e3").coordinates))
    ends = tuple(sorted(("p1", "p2") * 4 + ("p2", "p3") + ("p3", "p1")))
    lt = curve_from_coordinates(tri, coords, endpoints=ends)
    fac = lt_factorization(lt, 3)
    assert fac.boundary_powers == ((("e1", "e2", "e3"), 1, 1),)
    ((band, mult),) = fac.band_arcs
    assert band.coords == edge_arc(tri, "e1").coordinates and mult == 3
    assert not fac.loops and not fac.interior_arcs
    assert not fac.incident_arcs and not fac.monogons


def test_lt_factorization_interior_arc_with_loops():
    disk = builtin_surface("twice_punctured_disk")
    arc = _uw_arc(disk)
    ring = tuple(2 * x for x in arc.coordinates)
    combined = tuple(a + b for a, b in zip(arc.coordinates, ring))
    lt = curve_from_coordinates(disk, combined, endpoints=("u", "w"))
    fac = lt_factorization(lt, 3)
    ((rec, mj),) = fac.interior_arcs
    assert rec.coords == arc.coordinates and mj == 1
    assert not fac.loops


def test_lt_factorization_monogon():
    disk = builtin_surface("twice_punctured_disk")
    c1 = edge_arc(disk, "c1")
    fac = lt_factorization(c1, 3)
    ((rec, x, mult),) = fac.monogons
    assert rec.coords == c1.coordinates and x == "u" and mult == 1
    assert not fac.band_arcs


# --- decomposition ----------------------------------------------------------------


def test_decompose_boundary_times_power():
    tri = builtin_surface("triangle")
    z = (make_central(tri, BOUNDARY_PRODUCT, 0, 3, R3).value
         * make_central(tri, ARC_POWER, edge_arc(tri, "e1"), 3, R3).value)
    cert = decompose_central(z, 3, 2)
    assert cert.ok and cert.residual.is_zero
    assert cert.value() == z
    (entry,) = cert.entries
    labels = sorted(g.label for g, _ in entry[0])
    assert labels == ["B[e1.e2.e3]", "P3[edge:e1]"]
    assert "certificate ok" in cert.render()


def test_decompose_random_generator_products():
    rng = random.Random(17)
    cases = []
    torus = builtin_surface("once_punctured_torus")
    for coords in ((0, 2, 2), (2, 0, 2), (2, 2, 0)):
        mc = curve_from_coordinates(torus, coords)
        cases.append(make_central(torus, LOOP, mc, 3, R3))
    disk = builtin_surface("twice_punctured_disk")
    cases.append(make_central(disk, INTERIOR_ARC, _uw_arc(disk), 3, R3))
    cases.append(make_central(disk, ARC_POWER, edge_arc(disk, "g1"), 3, R3))
    cases.append(make_central(disk, VERTEX, ("u", 1), 3, R3))
    cases.append(make_central(disk, BOUNDARY_PRODUCT, "d", 3, R3))
    for _ in range(6):
        pool = [g for g in cases if rng.random() < 0.5]
        if not pool:
            continue
        surfs = {g.value.surf for g in pool}
        for surf in surfs:
            z = Skein.unit(surf, R3)
            for g in pool:
                if g.value.surf is surf:
                    z = z * g.value
            cert = decompose_central(z, 3, 2)
            assert cert.ok and cert.residual.is_zero
            assert cert.value() == z


def test_decompose_rejects_bare_cube():
    torus = builtin_surface("once_punctured_torus")
    z = Skein.of(curve_from_coordinates(torus, (0, 2, 2)), R3) ** 3
    cert = decompose_central(z, 3, 2)
    assert not cert.ok
    assert "n-th power" in cert.reason
    assert cert.witness is not None and not cert.witness.central
    assert cert.value() == z
    assert "witness" in cert.render()


def test_decompose_rejects_single_boundary_arc():
    tri = builtin_surface("triangle")
    cert = decompose_central(Skein.of(edge_arc(tri, "e2"), R3), 3, 2)
    assert not cert.ok and not cert.witness.central


def test_decompose_mode_validation():
    tri = builtin_surface("triangle")
    with pytest.raises(ValueError, match="root of unity"):
        decompose_central(Skein.unit(tri), 3, 2)
    with pytest.raises(ValueError, match="root of unity"):
        decompose_central(Skein.unit(tri, R5), 3, 2)
    with pytest.raises(ValueError, match="odd"):
        decompose_central(Skein.unit(tri, root_of_unity(4)), 4, 2)


def test_decompose_zero_is_empty_certificate():
    tri = builtin_surface("triangle")
    cert = decompose_central(Skein.zero(tri, R3), 3, 2)
    assert cert.ok and not cert.entries and cert.residual.is_zero
