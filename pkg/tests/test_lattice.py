import itertools
import random

import numpy as np
import pytest

from hopfkit.fingroup import (cyclic, identity_hom, inversion_action, symmetric, trivial_action,
                              trivial_group)
from hopfkit.hopf import group_algebra
from hopfkit.lattice import (Conventions, ModelInstance, StateSpace, all_projectors,
                             edge_operator, edge_projector, fake_flat_projector, ground_dim,
                             hamiltonian, commutation_report, plaquette_operator,
                             plaquette_projector, total_dim, vertex_operator, vertex_projector)
from hopfkit.operators import SparseOperator
from hopfkit.oracle import (DualColouring, FlatColouring, goxo_flat_colourings, goxo_gauge,
                            holonomy, ooxy_gauge)
from hopfkit.report import TooLarge
from hopfkit.scalars import FLOAT
from hopfkit.surface import (Site, boundary_word, connecting_path, dual_complex, reverse_edge,
                             shift_basepoint, sphere_tetrahedron, sphere_theta, torus_grid)
from hopfkit.xmod import build_gexy, goxo, kitaev, make_gexy, ooxy, trivial_crossed_module

Z1, Z2, Z3 = trivial_group(), cyclic(2), cyclic(3)
S3 = symmetric(3)
INV = inversion_action(Z2, Z3)


def random_states(m, count, seed=0):
    rng = random.Random(seed)
    return [tuple(rng.randrange(d) for d in m.space.dims) for _ in range(count)]


def column(op, m, digits):
    return op.apply({m.space.encode(digits): m.mode.one}, m.space.dims)


# ---------------------------------------------------------------------------
# state space


def test_total_dim_of_mixed_tetrahedron():
    x = build_gexy(make_gexy(E=Z2, G=Z3, X=Z2, Y=Z2))
    assert total_dim(x, sphere_tetrahedron()) == 11943936


def test_state_space_layout():
    m = ModelInstance(goxo(Z2, Z3, INV), sphere_theta())
    sp = m.space
    assert sp.dims == (2, 2, 2, 3, 3, 3)
    assert sp.edge_factor(1) == 1 and sp.plaquette_factor(0) == 3
    for i in range(sp.total_dim):
        assert sp.encode(sp.decode(i)) == i
    assert isinstance(sp, StateSpace)


# ---------------------------------------------------------------------------
# operators on basis states: the group-theoretic specialisations


@pytest.mark.parametrize("c", [sphere_theta(), torus_grid(2, 2)], ids=["theta", "torus"])
def test_goxo_vertex_operator_is_gauge_move(c):
    m = ModelInstance(goxo(Z2, Z3, INV), c)
    for v in range(c.n_vertices):
        V = vertex_operator(m, m.default_site(v), {1: 1})
        for digits in random_states(m, 40, v):
            col = FlatColouring(digits[:c.n_edges], digits[c.n_edges:])
            g = goxo_gauge(c, Z2, INV, col, v, 1)
            assert column(V, m, digits) == {m.space.encode(g.edge_labels + g.plaquette_labels): 1}


def test_goxo_edge_operator_is_diagonal_holonomy_test():
    c = torus_grid(2, 2)
    m = ModelInstance(goxo(Z2, Z3, INV), c)
    for e in range(c.n_edges):
        P, Q = c.left_plaquette(e), c.right_plaquette(e)
        for x in range(3):
            E = edge_operator(m, e, {x: 1})
            assert E.is_diagonal()
            for digits in random_states(m, 30, e):
                edges, xs = digits[:c.n_edges], digits[c.n_edges:]
                hp = holonomy(Z2, edges, connecting_path(c, e, "left"))
                hq = holonomy(Z2, edges, connecting_path(c, e, "right"))
                value = Z3.mul(INV(Z2.inv(hp), xs[P]), Z3.inv(INV(Z2.inv(hq), xs[Q])))
                expected = {m.space.encode(digits): 1} if value == x else {}
                assert column(E, m, digits) == expected


@pytest.mark.parametrize("G", [Z3, S3])
def test_goxo_plaquette_operator_reads_holonomy(G):
    c = sphere_theta()
    m = ModelInstance(kitaev(G), c)
    for p in range(c.n_plaquettes):
        for g in range(G.order):
            F = plaquette_operator(m, p, {g: 1})
            for digits in random_states(m, 30, g):
                hol = holonomy(G, digits[:c.n_edges], boundary_word(c, p))
                assert column(F, m, digits) == ({m.space.encode(digits): 1} if hol == g else {})


@pytest.mark.parametrize("Y,c", [(S3, sphere_theta()), (Z3, torus_grid(2, 2))],
                         ids=["S3-theta", "Z3-torus"])
def test_ooxy_plaquette_operator_is_dual_gauge_move(Y, c):
    m = ModelInstance(ooxy(Y, Y, identity_hom(Y)), c)
    d = dual_complex(c)
    for p in range(c.n_plaquettes):
        for z in range(Y.order):
            F = plaquette_operator(m, p, {z: 1})
            for digits in random_states(m, 20, z):
                col = DualColouring(digits[c.n_edges:], digits[:c.n_edges])
                g = ooxy_gauge(d, identity_hom(Y), col, p, z)
                assert column(F, m, digits) == {
                    m.space.encode(g.dual_edge_labels + g.dual_vertex_labels): 1}


def test_ooxy_edge_projector_is_dual_edge_constraint():
    c = sphere_theta()
    f = identity_hom(S3)
    m = ModelInstance(ooxy(S3, S3, f), c)
    d = dual_complex(c)
    for e in range(c.n_edges):
        E = edge_projector(m, e)
        assert E.is_diagonal()
        s, t = d.edges[e]
        for digits in random_states(m, 60, e):
            xs = digits[c.n_edges:]
            ok = S3.mul(f(digits[e]), xs[t]) == xs[s]
            assert column(E, m, digits) == ({m.space.encode(digits): 1} if ok else {})


def test_unit_elements_act_as_identity():
    m = ModelInstance(goxo(Z2, Z3, INV), sphere_theta())
    I = SparseOperator.identity(mode=m.mode)
    for s in m.sites():
        assert vertex_operator(m, s, m.H.unit_vec).same_as(I)
    for e in range(3):
        assert edge_operator(m, e, m.A.unit_vec).same_as(I)
    for p in range(3):
        assert plaquette_operator(m, p, m.H.counit_vec).same_as(I)


# ---------------------------------------------------------------------------
# projectors


@pytest.mark.parametrize("xm", [goxo(Z2, Z3, INV), ooxy(Z2, Z2, identity_hom(Z2))],
                         ids=["goxo", "ooxy"])
def test_vertex_projector_site_independent(xm):
    c = torus_grid(2, 2)
    m = ModelInstance(xm, c)
    for v in range(c.n_vertices):
        ref = vertex_projector(m, v)
        for p in c.incident_plaquettes(v):
            assert vertex_projector(m, v, Site(v, p)).same_as(ref)


def test_vertex_plaquette_order_irrelevant_for_projector():
    c = shift_basepoint(shift_basepoint(torus_grid(2, 2), 1, 1), 2, -1)
    m = ModelInstance(goxo(Z2, Z3, INV), c)
    for v in range(c.n_vertices):
        based = sorted(c.plaquettes_based_at(v))
        if len(based) < 2:
            continue
        ref = vertex_projector(m, v)
        for order in itertools.permutations(based):
            assert vertex_operator(m, m.default_site(v), m.ell, order).same_as(ref)
    with pytest.raises(ValueError):
        vertex_operator(m, m.default_site(0), m.ell, [99])


def shared_edge_cases(c):
    """Edges one of whose path edges lies on both connecting paths."""
    out = []
    for e in range(c.n_edges):
        left = {f for f, _ in connecting_path(c, e, "left")}
        right = {f for f, _ in connecting_path(c, e, "right")}
        if left & right:
            out.append(e)
    return out


def test_shared_edge_leg_order_does_not_change_edge_projector():
    c = torus_grid(2, 2)
    # rotate base-points until some edge has an edge shared by both paths
    found = []
    for p, k in itertools.product(range(c.n_plaquettes), range(1, 4)):
        cand = c
        for _ in range(k):
            cand = shift_basepoint(cand, p, 1)
        if shared_edge_cases(cand):
            found.append(cand)
    assert found
    cand = found[0]
    for xm in (goxo(Z2, Z3, INV), ooxy(Z2, Z2, identity_hom(Z2))):
        m = ModelInstance(xm, cand)
        for e in shared_edge_cases(cand):
            ref = edge_projector(m, e)
            for legs in itertools.permutations(("P", "Q", "stay")):
                alt = ModelInstance(xm, cand, Conventions(shared_edge_legs=legs))
                assert edge_projector(alt, e).same_as(ref)


@pytest.mark.parametrize("xm", [kitaev(Z2), goxo(Z2, Z3, INV), ooxy(Z2, Z2, identity_hom(Z2))],
                         ids=["toric", "goxo", "ooxy"])
def test_projectors_idempotent(xm):
    m = ModelInstance(xm, sphere_theta())
    for P in all_projectors(m):
        assert (P @ P).same_as(P)


def test_hamiltonian_of_trivial_crossed_module_vanishes():
    m = ModelInstance(trivial_crossed_module(group_algebra(Z1)), sphere_theta())
    assert m.total_dim == 1
    assert hamiltonian(m).is_zero()


def test_toric_code_hamiltonian_kernel():
    m = ModelInstance(kitaev(Z2), torus_grid(2, 2))
    h = hamiltonian(m).to_matrix(m.space.dims).toarray()
    kernel = int(np.sum(np.abs(np.linalg.eigvalsh(h)) < 1e-9))
    assert kernel == 4
    with pytest.raises(TooLarge):
        hamiltonian(ModelInstance(ooxy(Z3, Z3, identity_hom(Z3)), torus_grid(2, 2)))


def test_fake_flat_rank_counts_flat_colourings():
    c = sphere_theta()
    m = ModelInstance(goxo(Z2, Z3, INV), c)
    op = fake_flat_projector(m)
    for e in range(c.n_edges):
        op = op @ edge_projector(m, e)
    rank = np.linalg.matrix_rank(op.to_matrix(m.space.dims).toarray())
    assert rank == len(goxo_flat_colourings(c, Z2, Z3, INV)) == 6


# ---------------------------------------------------------------------------
# ground states


@pytest.mark.parametrize("xm,c,expected", [
    (kitaev(Z2), sphere_theta(), 1),
    (kitaev(Z2), torus_grid(2, 2), 4),
    (goxo(Z2, Z3, INV), sphere_theta(), 2),
    (goxo(Z1, Z3), sphere_tetrahedron(), 3),
    (ooxy(Z2, Z2, identity_hom(Z2)), torus_grid(2, 2), 1),
    (ooxy(Z2, Z1), torus_grid(2, 2), 4),
], ids=["toric-theta", "toric-torus", "goxo-theta", "potts-tetra", "ooxy-id-torus",
        "ooxy-kitaev-torus"])
def test_ground_dim(xm, c, expected):
    assert ground_dim(ModelInstance(xm, c)) == expected


def test_ground_dim_refuses_large_space():
    x = build_gexy(make_gexy(E=Z2, G=Z3, X=Z2, Y=Z2))
    with pytest.raises(TooLarge):
        ground_dim(ModelInstance(x, sphere_tetrahedron()))


@pytest.mark.parametrize("xm", [kitaev(Z2), goxo(Z2, Z3, INV), ooxy(Z2, Z2, identity_hom(Z2))],
                         ids=["toric", "goxo", "ooxy"])
def test_ground_dim_invariant_under_relabeling(xm):
    c = torus_grid(2, 2)
    ref = ground_dim(ModelInstance(xm, c))
    c2 = shift_basepoint(reverse_edge(c, 3), 2, 1)
    assert ground_dim(ModelInstance(xm, c2)) == ref


def test_float_mode_ground_dim():
    assert ground_dim(ModelInstance(goxo(Z2, Z3, INV, mode=FLOAT), sphere_theta())) == 2


# ---------------------------------------------------------------------------
# the commutation harness


@pytest.mark.parametrize("xm", [kitaev(Z2), goxo(Z2, Z3, INV), ooxy(Z3, Z3, identity_hom(Z3))],
                         ids=["toric", "goxo", "ooxy"])
def test_commutation_report_passes_on_theta(xm):
    rep = commutation_report(ModelInstance(xm, sphere_theta()))
    assert rep.ok, str(rep)
    sections = {name.split(".")[0] for name in rep.checked}
    assert sections == {"representation", "projectors", "mixed", "intertwiners", "ground"}


def test_trivial_crossed_module_passes_vacuously():
    m = ModelInstance(trivial_crossed_module(group_algebra(Z1)), sphere_theta())
    assert commutation_report(m).ok


def test_dropping_the_antipode_is_detected_in_the_mixed_relations():
    m = ModelInstance(ooxy(Z3, Z3, identity_hom(Z3)), sphere_theta())
    sections = ("projectors", "mixed")
    assert commutation_report(m, sections=sections).ok
    bad = commutation_report(m.with_conventions(right_antipode=False), sections=sections)
    mixed = {a for a in bad.failed_axioms() if a.startswith("mixed.")}
    assert mixed and mixed <= {"mixed.EF", "mixed.EF_clockwise"}
    assert "projectors.commute" in bad.failed_axioms()


def test_report_sections_selectable():
    m = ModelInstance(kitaev(Z2), sphere_theta())
    rep = commutation_report(m, sections=("projectors",))
    assert rep.ok and all(n.startswith("projectors.") for n in rep.checked)
