import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfkit.report import InvalidDescription
from hopfkit.surface import (Site, boundary_word, build_standard_complex, connecting_path,
                             dual_complex, explicit, find_isomorphism, from_faces,
                             reverse_edge, shift_basepoint, sphere_tetrahedron, sphere_theta,
                             star_order, torus_grid, validate_complex)

COMPLEXES = {
    "theta": sphere_theta,
    "tetra": sphere_tetrahedron,
    "torus22": lambda: torus_grid(2, 2),
    "torus23": lambda: torus_grid(2, 3),
    "torus33": lambda: torus_grid(3, 3),
}


@pytest.fixture(params=sorted(COMPLEXES))
def complex_(request):
    return COMPLEXES[request.param]()


@pytest.mark.parametrize("name,counts,genus", [
    ("theta", (2, 3, 3), 0), ("tetra", (4, 6, 4), 0), ("torus22", (4, 8, 4), 1),
    ("torus23", (6, 12, 6), 1),
])
def test_counts_and_genus(name, counts, genus):
    c = COMPLEXES[name]()
    assert (c.n_vertices, c.n_edges, c.n_plaquettes) == counts
    assert c.euler_characteristic == 2 - 2 * genus
    assert c.genus == genus


def test_word_lengths():
    assert all(len(boundary_word(sphere_theta(), p)) == 2 for p in range(3))
    assert all(len(boundary_word(sphere_tetrahedron(), p)) == 3 for p in range(4))
    assert all(len(boundary_word(torus_grid(2, 2), p)) == 4 for p in range(4))


def test_every_dart_in_one_face(complex_):
    seen = [(e, s) for p in range(complex_.n_plaquettes) for e, s in boundary_word(complex_, p)]
    assert sorted(seen) == sorted((e, s) for e in range(complex_.n_edges) for s in (1, -1))


def test_no_loops(complex_):
    assert all(t != h for t, h in complex_.edges)


def test_star_order_valence_and_signs(complex_):
    for v in range(complex_.n_vertices):
        p = complex_.incident_plaquettes(v)[0]
        star = star_order(complex_, Site(v, p))
        expected = sorted([(e, 1) for e, (t, _) in enumerate(complex_.edges) if t == v]
                          + [(e, -1) for e, (_, h) in enumerate(complex_.edges) if h == v])
        assert sorted(star) == expected


def test_tetrahedron_valence():
    c = sphere_tetrahedron()
    for v in range(4):
        assert len(star_order(c, Site(v, c.incident_plaquettes(v)[0]))) == 3


def test_star_orders_at_one_vertex_are_rotations(complex_):
    for v in range(complex_.n_vertices):
        stars = [star_order(complex_, Site(v, p)) for p in complex_.incident_plaquettes(v)]
        ref = stars[0]
        for s in stars[1:]:
            assert any(s == ref[k:] + ref[:k] for k in range(len(ref)))


def test_shift_rotates_word(complex_):
    for p in range(complex_.n_plaquettes):
        w = boundary_word(complex_, p)
        assert boundary_word(shift_basepoint(complex_, p, 1), p) == w[1:] + w[:1]


def test_connecting_path_tetrahedron():
    c = sphere_tetrahedron()
    for e in range(c.n_edges):
        P = c.left_plaquette(e)
        if c.basepoint(P) == c.tail(e):
            assert connecting_path(c, e, "left") == []
        # move the base-point one step clockwise: the path picks up one edge
        w = boundary_word(c, P)
        k = w.index((e, 1))
        c2 = c
        for _ in range(k):
            c2 = shift_basepoint(c2, P, 1)
        assert connecting_path(c2, e, "left") == []
        c3 = shift_basepoint(c2, P, -1)
        path = connecting_path(c3, e, "left")
        assert len(path) == 1 and path[0] == boundary_word(c3, P)[0]


def test_connecting_paths_end_at_tail(complex_):
    c = complex_
    for e in range(c.n_edges):
        for side, P in (("left", c.left_plaquette(e)), ("right", c.right_plaquette(e))):
            v = c.basepoint(P)
            for f, s in connecting_path(c, e, side):
                assert f != e or P == c.left_plaquette(e) == c.right_plaquette(e)
                t, h = c.edges[f]
                assert v == (t if s > 0 else h)
                v = h if s > 0 else t
            assert v == c.tail(e)


def test_theta_paths():
    c = sphere_theta()
    for e in range(3):
        for side in ("left", "right"):
            assert len(connecting_path(c, e, side)) <= 1


def test_dual_counts(complex_):
    d = dual_complex(complex_)
    assert (d.n_vertices, d.n_edges, d.n_plaquettes) == (
        complex_.n_plaquettes, complex_.n_edges, complex_.n_vertices)
    assert d.euler_characteristic == complex_.euler_characteristic
    validate_complex(d)


def test_dual_edge_orientation(complex_):
    d = dual_complex(complex_)
    for e in range(complex_.n_edges):
        assert d.edges[e] == (complex_.right_plaquette(e), complex_.left_plaquette(e))


def test_double_dual_isomorphic(complex_):
    assert find_isomorphism(dual_complex(dual_complex(complex_)), complex_) is not None


def test_dual_torus_is_grid():
    assert find_isomorphism(dual_complex(torus_grid(2, 2)), torus_grid(2, 2)) is not None


def test_isomorphism_negative():
    assert find_isomorphism(sphere_theta(), sphere_tetrahedron()) is None
    assert find_isomorphism(torus_grid(2, 3), torus_grid(2, 2)) is None


def test_reverse_twice_identity(complex_):
    for e in range(complex_.n_edges):
        r = reverse_edge(complex_, e)
        validate_complex(r)
        assert r != complex_
        assert reverse_edge(r, e) == complex_


def test_shift_plus_minus_identity(complex_):
    for p in range(complex_.n_plaquettes):
        assert shift_basepoint(shift_basepoint(complex_, p, 1), p, -1) == complex_


def test_shift_triangle_three_times():
    c = sphere_tetrahedron()
    c3 = c
    for _ in range(3):
        c3 = shift_basepoint(c3, 0, 1)
    assert c3 == c


def test_description_round_trip(complex_):
    again = explicit(complex_.description())
    assert again == complex_


def test_build_standard_complex():
    assert build_standard_complex("torus_grid", m=2, n=3) == torus_grid(2, 3)
    assert build_standard_complex("explicit", **sphere_theta().description()) == sphere_theta()
    with pytest.raises(InvalidDescription):
        build_standard_complex("klein_bottle")
    with pytest.raises(InvalidDescription):
        torus_grid(1, 3)


@pytest.mark.parametrize("faces", [
    [[(0, 1), (1, -1)], [(1, 1), (2, -1)]],                 # missing darts
    [[(0, 1), (1, -1)], [(1, 1), (2, -1)], [(2, 1), (1, -1)]],  # dart used twice
])
def test_invalid_faces_rejected(faces):
    with pytest.raises(InvalidDescription):
        from_faces(2, [(0, 1)] * 3, faces)


def test_loop_rejected():
    with pytest.raises(InvalidDescription):
        from_faces(1, [(0, 0)], [[(0, 1)], [(0, -1)]])


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(sorted(COMPLEXES)), st.data())
def test_random_relabelings_preserve_invariants(name, data):
    c = COMPLEXES[name]()
    for _ in range(data.draw(st.integers(0, 4))):
        if data.draw(st.booleans()):
            c = reverse_edge(c, data.draw(st.integers(0, c.n_edges - 1)))
        else:
            c = shift_basepoint(c, data.draw(st.integers(0, c.n_plaquettes - 1)),
                                data.draw(st.sampled_from([1, -1])))
    validate_complex(c)
    assert find_isomorphism(c, COMPLEXES[name]()) is not None
    assert find_isomorphism(dual_complex(dual_complex(c)), c) is not None
