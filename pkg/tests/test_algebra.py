"""Skein algebra tests.

The relation checks build raw diagrams and push them through normalize.
Fixed values were derived by hand:

* the two torus loops through coordinates (0,2,2) and (2,0,2) meet once,
  and the two smoothings of that crossing are the (2,2,0) loop and the
  curve with coordinates (2,2,4), so a*b = q*(2,2,0) + q^-1*(2,2,4);
* the triangle arcs along e1 and e2 stack into the single basis curve
  with coordinates (2,4,2), and swapping the factors slides one end past
  the other across the shared marked point, costing exactly q;
* an arc along g1 of the twice punctured disk squares to the loop c1:
  one reconnection at u closes up to c1, the other dies on the boundary,
  leaving u^-1 * q^(1/2) * c1.
"""

import random

import pytest

from skeincalc.algebra import Skein, commutator, mul, normalize, threaded_power
from skeincalc.coeffs import GENERIC, Coefficient, Scalar, root_of_unity
from skeincalc.curves import curve_from_coordinates, edge_arc, enumerate_basis
from skeincalc.diagrams import (
    Diagram,
    EngineError,
    loop_value,
    puncture_loop_value,
)
from skeincalc.surface import builtin_surface

SURFACES = ("triangle", "annulus", "twice_punctured_disk",
            "once_punctured_torus")


@pytest.fixture(params=SURFACES)
def surf(request):
    return builtin_surface(request.param)


def _coeff(scalar):
    return Coefficient.from_scalar(scalar)


# --- diagram-level relations ----------------------------------------------


def _contractible_loop(surf, eid):
    """A loop crossing one interior edge twice, bounding a bigon."""
    d = Diagram(surf)
    p1 = d.new_pt(eid, 0)
    p2 = d.new_pt(eid, 1)
    d.connect(d.pt_node(p1, 0), d.pt_node(p2, 0))
    d.connect(d.pt_node(p1, 1), d.pt_node(p2, 1))
    return d


def _peripheral_loop(surf, v):
    """The innermost loop hugging puncture v, one point per link end."""
    link = surf.vertex_link(v)
    d = Diagram(surf)
    pids = []
    for eid, endidx in link.ends:
        idx = 0 if endidx == 0 else len(d.pts[eid])
        pids.append(d.new_pt(eid, idx))
    n = len(link.ends)
    for j, (tri, slot) in enumerate(link.wedges):
        e_in = link.ends[j][0]
        e_out = link.ends[(j + 1) % n][0]
        bank_in = surf.placements(e_in).index((tri, (slot + 1) % 3))
        bank_out = surf.placements(e_out).index((tri, slot))
        d.connect(d.pt_node(pids[j], bank_in),
                  d.pt_node(pids[(j + 1) % n], bank_out))
    return d


def _edge_chord(surf, eid, rank_a=None, rank_b=None):
    """The chord along an edge, with optional stacking ranks at its ends."""
    tri, slot = surf.placements(eid)[0]
    d = Diagram(surf)
    na = d.new_port((tri, (slot - 1) % 3), None, rank=rank_a)
    nb = d.new_port((tri, slot), 0, rank=rank_b)
    d.connect(("v", na), ("v", nb))
    return d


def test_contractible_loop_is_loop_scalar():
    for name, eid in (("annulus", "s1"), ("twice_punctured_disk", "c2"),
                      ("once_punctured_torus", "b")):
        s = builtin_surface(name)
        out = normalize(_contractible_loop(s, eid))
        assert out == Skein.unit(s).scale(_coeff(loop_value()))


def test_contractible_loop_at_root_three_is_unit():
    ann = builtin_surface("annulus")
    mode = root_of_unity(3)
    out = normalize(_contractible_loop(ann, "s2"), mode)
    assert out == Skein.unit(ann, mode)


def test_peripheral_loop_is_puncture_scalar():
    for name, v in (("twice_punctured_disk", "u"),
                    ("twice_punctured_disk", "w"),
                    ("once_punctured_torus", "p")):
        s = builtin_surface(name)
        out = normalize(_peripheral_loop(s, v))
        assert out == Skein.unit(s).scale(_coeff(puncture_loop_value()))


def test_peripheral_loop_at_root_three_is_minus_unit():
    disk = builtin_surface("twice_punctured_disk")
    mode = root_of_unity(3)
    out = normalize(_peripheral_loop(disk, "u"), mode)
    assert out == Skein.unit(disk, mode).scale(-1)


def test_null_arc_dies():
    tri = builtin_surface("triangle")
    d = Diagram(tri)
    n1 = d.new_port((0, 0), None)
    n2 = d.new_port((0, 0), None)
    d.connect(("v", n1), ("v", n2))
    assert normalize(d).is_zero


def test_same_puncture_arc_resolves_both_routes():
    # both reconnections of the arc along edge a close up to the parallel
    # loop, so the element is u^-1 (q^(1/2) + q^(-1/2)) times that loop
    torus = builtin_surface("once_punctured_torus")
    loop = curve_from_coordinates(torus, (0, 2, 2))
    want = Skein.of(loop).scale(
        Coefficient.vertex("p", GENERIC, exp=-1)
        * (Scalar.s_power(1, GENERIC) + Scalar.s_power(-1, GENERIC)))
    assert normalize(_edge_chord(torus, "a", 0, 1)) == want
    assert normalize(_edge_chord(torus, "a", 1, 0)) == want


def test_same_puncture_arc_without_stacking_order():
    torus = builtin_surface("once_punctured_torus")
    with pytest.raises(EngineError, match="ambiguous stacking"):
        normalize(_edge_chord(torus, "a", 1, 1))


def test_puncture_reconnection_route_sign():
    disk = builtin_surface("twice_punctured_disk")
    g = Skein.of(edge_arc(disk, "g1"))
    want = Skein.of(edge_arc(disk, "c1")).scale(
        Coefficient.vertex("u", GENERIC, exp=-1) * Scalar.s_power(1, GENERIC))
    assert g * g == want


# --- fixed products --------------------------------------------------------


def test_torus_crossing_resolution():
    torus = builtin_surface("once_punctured_torus")
    a = Skein.of(curve_from_coordinates(torus, (0, 2, 2)))
    b = Skein.of(curve_from_coordinates(torus, (2, 0, 2)))
    smooth1 = Skein.of(curve_from_coordinates(torus, (2, 2, 0)))
    smooth2 = Skein.of(curve_from_coordinates(torus, (2, 2, 4)))
    q = Scalar.q_power(1, GENERIC)
    qi = Scalar.q_power(-1, GENERIC)
    assert a * b == smooth1.scale(q) + smooth2.scale(qi)
    assert b * a == smooth1.scale(qi) + smooth2.scale(q)
    assert commutator(a, b) == (smooth1 - smooth2).scale(q - qi)


def test_triangle_boundary_exchange():
    tri = builtin_surface("triangle")
    b1 = Skein.of(edge_arc(tri, "e1"))
    b2 = Skein.of(edge_arc(tri, "e2"))
    stacked = curve_from_coordinates(tri, (2, 4, 2),
                                     endpoints=("p1", "p2", "p2", "p3"))
    assert b1 * b2 == Skein.of(stacked)
    assert b2 * b1 == Skein.of(stacked).scale(Scalar.q_power(1, GENERIC))


def test_parallel_copies_multiply_freely():
    torus = builtin_surface("once_punctured_torus")
    x = Skein.of(curve_from_coordinates(torus, (0, 2, 2)))
    cube = x ** 3
    assert len(cube) == 1
    mc, c = cube.leading_term()
    assert mc.coordinates == (0, 6, 6)
    assert c == Coefficient.one(GENERIC)


def test_arc_power_collects_puncture_weights():
    disk = builtin_surface("twice_punctured_disk")
    g = Skein.of(edge_arc(disk, "g1"))
    cube = g ** 3
    assert len(cube) == 1
    mc, c = cube.leading_term()
    assert mc.coordinates == (3, 6, 6, 12, 6)
    assert c == (Coefficient.vertex("u", GENERIC, exp=-1)
                 * Scalar.s_power(3, GENERIC))


# --- ring structure --------------------------------------------------------


def test_unit_laws(surf):
    one = Skein.unit(surf)
    for mc in enumerate_basis(surf, 1):
        x = Skein.of(mc)
        assert one * x == x
        assert x * one == x


def test_zero_and_negation(surf):
    zero = Skein.zero(surf)
    for mc in enumerate_basis(surf, 1):
        x = Skein.of(mc)
        assert (x + zero) == x
        assert (x - x).is_zero
        assert zero * x == zero and x * zero == zero


def test_associativity_samples(surf):
    basis = list(enumerate_basis(surf, 1))
    rng = random.Random(7)
    for _ in range(12):
        x, y, z = (Skein.of(rng.choice(basis)) for _ in range(3))
        assert (x * y) * z == x * (y * z)


def test_product_independent_of_interleaving(surf):
    basis = [mc for mc in enumerate_basis(surf, 1) if not mc.is_empty]
    rng = random.Random(3)
    for _ in range(8):
        x = Skein.of(rng.choice(basis))
        y = Skein.of(rng.choice(basis))
        base = x * y
        for seed in range(3):
            assert mul(x, y, random.Random(seed)) == base


def test_distributivity(surf):
    basis = [Skein.of(mc) for mc in enumerate_basis(surf, 1)]
    rng = random.Random(11)
    for _ in range(6):
        x, y, z = (rng.choice(basis) for _ in range(3))
        assert x * (y + z) == x * y + x * z
        assert (x + y) * z == x * z + y * z


def test_scalar_factors_pass_through(surf):
    basis = [mc for mc in enumerate_basis(surf, 1) if not mc.is_empty]
    q = Scalar.q_power(1, GENERIC)
    for mc in basis[:3]:
        x = Skein.of(mc)
        assert x.scale(q) * x == (x * x).scale(q)
        assert 2 * x == x + x


def test_specialization_is_a_ring_map(surf):
    mode = root_of_unity(5)
    basis = [Skein.of(mc) for mc in enumerate_basis(surf, 1)]
    rng = random.Random(2)
    for _ in range(6):
        x, y = rng.choice(basis), rng.choice(basis)
        assert (x * y).specialize(mode) == x.specialize(mode) * y.specialize(mode)


def test_cross_surface_product_rejected():
    tri = builtin_surface("triangle")
    ann = builtin_surface("annulus")
    with pytest.raises(EngineError, match="different surfaces"):
        Skein.unit(tri) * Skein.unit(ann)


def test_mode_mismatch_rejected():
    tri = builtin_surface("triangle")
    with pytest.raises(EngineError, match="mode mismatch"):
        Skein.unit(tri) + Skein.unit(tri, root_of_unity(3))


def test_negative_power_rejected():
    tri = builtin_surface("triangle")
    with pytest.raises(EngineError):
        Skein.unit(tri) ** -1


# --- grading ----------------------------------------------------------------


def test_basis_curves_are_homogeneous(surf):
    for mc in enumerate_basis(surf, 2):
        assert Skein.of(mc).is_homogeneous


def test_product_degree_is_additive(surf):
    basis = [mc for mc in enumerate_basis(surf, 2) if not mc.is_empty]
    rng = random.Random(5)
    for _ in range(15):
        a, b = rng.choice(basis), rng.choice(basis)
        x, y = Skein.of(a), Skein.of(b)
        (dx,) = x.degree_vectors()
        (dy,) = y.degree_vectors()
        p = x * y
        if p.is_zero:
            continue
        assert p.is_homogeneous
        (dp,) = p.degree_vectors()
        assert dp == tuple(i + j for i, j in zip(dx, dy))


def test_vertex_coefficient_shifts_degree():
    disk = builtin_surface("twice_punctured_disk")
    g = Skein.of(edge_arc(disk, "g1"))
    assert g.degree_vectors() == {(1, 0)}
    assert (g * g).degree_vectors() == {(2, 0)}


# --- threading and normalize ------------------------------------------------


def test_threaded_power_matches_polynomial():
    torus = builtin_surface("once_punctured_torus")
    mc = curve_from_coordinates(torus, (0, 2, 2))
    x = Skein.of(mc)
    assert threaded_power(mc, [0, -3, 0, 1]) == x ** 3 - x.scale(3)
    assert threaded_power(mc, [2]) == Skein.unit(torus).scale(2)
    assert threaded_power(mc, []).is_zero


def test_normalize_fixes_basis_curves(surf):
    for mc in enumerate_basis(surf, 2):
        assert normalize(mc.diagram()) == Skein.of(mc)


def test_commutator_basics(surf):
    basis = [Skein.of(mc) for mc in enumerate_basis(surf, 1)]
    one = Skein.unit(surf)
    for x in basis:
        assert commutator(x, x).is_zero
        assert commutator(one, x).is_zero


# --- rendering ---------------------------------------------------------------


def test_skein_rendering():
    torus = builtin_surface("once_punctured_torus")
    a = Skein.of(curve_from_coordinates(torus, (0, 2, 2)))
    b = Skein.of(curve_from_coordinates(torus, (2, 0, 2)))
    assert str(Skein.zero(torus)) == "0"
    assert str(Skein.unit(torus)) == "(1) * empty"
    assert str(a * b) == "(q) * loop:(1,1,0) + (q^-1) * loop:(1,1,2)"
