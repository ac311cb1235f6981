"""Surface loading, validation and vertex link tests.

The frozen link orders below were worked out by drawing each surface
and walking the corners counterclockwise by hand.
"""

import pytest

from skeincalc.surface import Surface, SurfaceError, builtin_surface

BUILTINS = ["triangle", "annulus", "once_punctured_torus", "twice_punctured_disk"]


@pytest.mark.parametrize("name", BUILTINS)
def test_builtins_load(name):
    surf = builtin_surface(name)
    assert surf.name == name
    assert len(surf.triangles) >= 1


def test_euler_characteristics_and_boundaries():
    expect = {
        "triangle": (1, 1),
        "annulus": (0, 2),
        "once_punctured_torus": (0, 0),
        "twice_punctured_disk": (1, 1),
    }
    for name, (chi, nbd) in expect.items():
        surf = builtin_surface(name)
        assert surf.euler_characteristic() == chi
        assert len(surf.boundary_components()) == nbd


def test_self_folded_warning():
    surf = builtin_surface("twice_punctured_disk")
    assert any("self-folded" in w for w in surf.warnings)
    assert all(not w for name in ("triangle", "annulus", "once_punctured_torus")
               for w in builtin_surface(name).warnings)


def test_disk_boundary_vertex_link_order():
    surf = builtin_surface("twice_punctured_disk")
    link = surf.vertex_link("m")
    assert not link.closed
    assert link.ends == (
        ("d", 0), ("c2", 0), ("g2", 0), ("c2", 1),
        ("c1", 0), ("g1", 0), ("c1", 1), ("d", 1),
    )
    assert len(link.wedges) == len(link.ends) - 1


def test_disk_puncture_links():
    surf = builtin_surface("twice_punctured_disk")
    for v, eid in (("u", "g1"), ("w", "g2")):
        link = surf.vertex_link(v)
        assert link.closed
        assert link.ends == ((eid, 1),)
        assert len(link.wedges) == 1


def test_torus_link_cycle():
    surf = builtin_surface("once_punctured_torus")
    link = surf.vertex_link("p")
    assert link.closed
    assert link.ends == (("a", 0), ("c", 0), ("b", 0), ("a", 1), ("c", 1), ("b", 1))
    assert len(link.wedges) == 6


def test_peripheral_vectors():
    torus = builtin_surface("once_punctured_torus")
    assert torus.peripheral_vector("p") == (2, 2, 2)
    disk = builtin_surface("twice_punctured_disk")
    assert disk.peripheral_vector("u") == (1, 0, 0, 0, 0)
    assert disk.peripheral_vector("w") == (0, 1, 0, 0, 0)


def test_validation_rejects_broken_chain():
    text = """
    vertex a boundary
    vertex b boundary
    vertex c boundary
    edge e1 a b boundary
    edge e2 b c boundary
    edge e3 c a boundary
    triangle e1.0 e3.0 e2.0
    """
    with pytest.raises(SurfaceError):
        Surface.from_text(text)


def test_validation_rejects_same_direction_gluing():
    text = """
    vertex p puncture
    edge a p p interior
    edge b p p interior
    edge c p p interior
    triangle a.0 b.0 c.1
    triangle c.0 a.0 b.1
    """
    with pytest.raises(SurfaceError, match="same"):
        Surface.from_text(text)


def test_validation_rejects_dangling_edge_and_bad_tokens():
    with pytest.raises(SurfaceError):
        Surface.from_text("vertex a boundary\nedge e a a boundary\n")
    with pytest.raises(SurfaceError):
        Surface.from_text("vertex a boundary\nnonsense line here\n")
    with pytest.raises(SurfaceError):
        Surface.from_text("vertex a boundary\nedge e a z boundary\n")


def test_summary_mentions_warning():
    disk = builtin_surface("twice_punctured_disk")
    assert "self-folded" in disk.summary()
    assert "triangles: 3" in disk.summary()
