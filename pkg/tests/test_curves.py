"""Basis curves, coordinates and enumeration.

Frozen counts and coordinate vectors below come from enumerating the
coordinate boxes by hand: on the triangle the arc along e_i has the
pushed-off count e_i + e_{i+1}, so the monomial beta_1^a beta_2^b
beta_3^c has coordinates (a+c, a+b, b+c) and the entrywise cap keeps
4, 11, 23 curves at bounds 1, 2, 3.
"""

import random

import pytest

from skeincalc.curves import (
    AdmissibilityError,
    compare,
    curve_from_coordinates,
    deg_V,
    edge_arc,
    empty_curve,
    enumerate_basis,
    square_trick_coordinates,
)
from skeincalc.surface import builtin_surface

SURFACES = ["triangle", "annulus", "once_punctured_torus", "twice_punctured_disk"]


@pytest.fixture(scope="module", params=SURFACES)
def surf(request):
    return builtin_surface(request.param)


def test_empty_curve_is_zero_vector():
    for name in SURFACES:
        s = builtin_surface(name)
        mc = empty_curve(s)
        assert mc.is_empty
        assert mc.coordinates == (0,) * s.n_edges
        assert mc.describe() == "empty"


def test_triangle_enumeration_counts():
    tri = builtin_surface("triangle")
    assert [len(enumerate_basis(tri, b)) for b in (0, 1, 2, 3)] == [1, 4, 11, 23]
    # every bound-2 curve is a boundary-arc monomial with the stated coords
    got = {mc.coordinates for mc in enumerate_basis(tri, 2)}
    expect = set()
    for a in range(3):
        for b in range(3):
            for c in range(3):
                coords = (2 * (a + c), 2 * (a + b), 2 * (b + c))
                if max(coords) <= 4:
                    expect.add(coords)
    assert got == expect


def test_torus_bound_one_is_loops():
    torus = builtin_surface("once_punctured_torus")
    curves = enumerate_basis(torus, 1)
    descs = {mc.describe() for mc in curves}
    assert descs == {"empty", "loop:(0,1,1)", "loop:(1,0,1)", "loop:(1,1,0)"}


def test_enumeration_sorted_and_unique(surf):
    curves = enumerate_basis(surf, 2)
    for a, b in zip(curves, curves[1:]):
        assert compare(a, b) < 0
    assert len({mc.key for mc in curves}) == len(curves)


def test_coordinates_injective_on_basis(surf):
    seen = {}
    for mc in enumerate_basis(surf, 3):
        vec = (mc.coordinates, mc.endpoints())
        assert vec not in seen, f"{mc.describe()} vs {seen[vec].describe()}"
        seen[vec] = mc


def test_round_trip_through_coordinates(surf):
    for mc in enumerate_basis(surf, 2):
        back = curve_from_coordinates(surf, mc.coordinates, mc.endpoints())
        assert back == mc


def test_square_trick_matches_coordinates(surf):
    for mc in enumerate_basis(surf, 2):
        assert square_trick_coordinates(mc) == mc.coordinates


def test_additivity_for_disjoint_union(surf):
    # components of a basis curve sum to the curve's vector
    for mc in enumerate_basis(surf, 2):
        total = [0] * surf.n_edges
        for rec, mult in mc.component_multiset().items():
            for i, x in enumerate(rec.coords):
                total[i] += mult * x
        assert tuple(total) == mc.coordinates


def test_deg_V_entries_and_puncture_rule(surf):
    punctures = surf.punctures
    for mc in enumerate_basis(surf, 2):
        d = deg_V(mc)
        assert all(x in (0, 1) for x in d)
        for i, v in enumerate(punctures):
            assert d[i] == sum(1 for w in mc.endpoints() if w == v)


def test_curve_from_coordinates_errors():
    tri = builtin_surface("triangle")
    with pytest.raises(AdmissibilityError) as exc:
        curve_from_coordinates(tri, (0, 0))
    assert exc.value.reason == "shape"
    with pytest.raises(AdmissibilityError):
        curve_from_coordinates(tri, (-2, 0, 0))
    with pytest.raises(AdmissibilityError) as exc:
        curve_from_coordinates(tri, (1, 1, 0))
    assert exc.value.reason == "parity"
    # an entrywise-admissible vector violating the triangle condition
    with pytest.raises(AdmissibilityError):
        curve_from_coordinates(tri, (2, 0, 0))


def test_zero_vector_round_trip(surf):
    assert curve_from_coordinates(surf, (0,) * surf.n_edges) == empty_curve(surf)


def test_edge_arc_description():
    disk = builtin_surface("twice_punctured_disk")
    for eid in disk.edge_index:
        assert edge_arc(disk, eid).describe() == f"edge:{eid}"


def test_compare_is_a_strict_order(surf):
    curves = enumerate_basis(surf, 2)
    rng = random.Random(5)
    for _ in range(200):
        a, b = rng.choice(curves), rng.choice(curves)
        ab, ba = compare(a, b), compare(b, a)
        assert ab == -ba
        assert (ab == 0) == (a == b)
