import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfkit.fingroup import (GroupAction, GroupCrossedModule, build_group, conjugation_action,
                              cyclic, dihedral, direct_product, from_table, identity_hom,
                              inversion_action, make_action, make_hom, symmetric,
                              trivial_action, trivial_hom, validate_action,
                              validate_group_crossed_module)
from hopfkit.report import InvalidAction, NotAGroup, NotAHomomorphism

GROUPS = [("cyclic", 1), ("cyclic", 2), ("cyclic", 3), ("cyclic", 4), ("cyclic", 6),
          ("symmetric", 3), ("dihedral", 2), ("dihedral", 3)]


def is_group_table(t):
    n = len(t)
    return (all(sorted(row) == list(range(n)) for row in t)
            and all(sorted(t[:, j]) == list(range(n)) for j in range(n))
            and all(t[0, i] == i and t[i, 0] == i for i in range(n))
            and all(t[t[a, b], c] == t[a, t[b, c]]
                    for a, b, c in itertools.product(range(n), repeat=3)))


@pytest.mark.parametrize("kind,n", GROUPS)
def test_named_groups_are_groups(kind, n):
    G = build_group(kind, n)
    assert is_group_table(G.table)
    for g in G.elements():
        assert G.mul(g, G.inv(g)) == 0


@pytest.mark.parametrize("kind,n,order", [("cyclic", 5, 5), ("symmetric", 3, 6),
                                          ("symmetric", 4, 24), ("dihedral", 4, 8)])
def test_orders(kind, n, order):
    assert build_group(kind, n).order == order


def test_cyclic_one_is_trivial():
    G = build_group("cyclic", 1)
    assert G.order == 1 and G.table.tolist() == [[0]]


def test_cyclic_two_table():
    assert build_group("cyclic", 2).table.tolist() == [[0, 1], [1, 0]]


def test_symmetric_lexicographic_order():
    S3 = symmetric(3)
    assert S3.labels == ("012", "021", "102", "120", "201", "210")
    assert not S3.is_abelian()


def test_dihedral_rotations_then_reflections():
    D3 = dihedral(3)
    # rotations form a subgroup, reflections are involutions
    assert all(D3.mul(a, b) < 3 for a in range(3) for b in range(3))
    assert all(D3.mul(s, s) == 0 for s in range(3, 6))


def test_non_associative_latin_square_rejected():
    # a Latin square with identity 0 that is not associative: (1*1)*2 != 1*(1*2)
    table = [[0, 1, 2, 3, 4],
             [1, 0, 3, 4, 2],
             [2, 4, 0, 1, 3],
             [3, 2, 4, 0, 1],
             [4, 3, 1, 2, 0]]
    assert sorted(map(sorted, table)) == [list(range(5))] * 5
    with pytest.raises(NotAGroup):
        build_group("explicit", table=table)


@pytest.mark.parametrize("table", [[[0, 1], [1, 1]], [[0, 1], [0, 1]],
                                   [[0, 1, 2], [1, 2, 0], [2, 1, 0]]])
def test_bad_tables_rejected(table):
    with pytest.raises(NotAGroup):
        from_table(table)


def test_explicit_round_trip():
    G = build_group("explicit", table=dihedral(3).table.tolist())
    assert np.array_equal(G.table, dihedral(3).table)


def test_direct_product():
    K = direct_product(cyclic(2), cyclic(2))
    assert K.order == 4 and K.is_abelian()
    assert all(K.mul(g, g) == 0 for g in K.elements())


def test_inversion_action_valid():
    act = inversion_action(cyclic(2), cyclic(3))
    rep = validate_action(act)
    assert rep.ok and rep.flags["by_automorphisms"]
    assert [act(1, x) for x in range(3)] == [0, 2, 1]


@pytest.mark.parametrize("G,X", [(cyclic(3), cyclic(2)), (symmetric(3), cyclic(4)),
                                 (cyclic(1), dihedral(3))])
def test_trivial_action_valid(G, X):
    assert validate_action(trivial_action(G, X)).ok


def test_transposition_on_z4_is_not_automorphism():
    act = GroupAction(cyclic(2), [[0, 1, 2, 3], [0, 2, 1, 3]], cyclic(4))
    rep = validate_action(act)
    assert rep.failed_axioms() == {"automorphism"}
    with pytest.raises(InvalidAction):
        make_action(cyclic(2), [[0, 1, 2, 3], [0, 2, 1, 3]], cyclic(4))


def test_non_action_composition_fails():
    # Z3 with its generator acting by a transposition is not an action
    rep = validate_action(GroupAction(cyclic(3), [[0, 1], [1, 0], [1, 0]]))
    assert "composition" in rep.failed_axioms()


@pytest.mark.parametrize("G", [symmetric(3), dihedral(4), cyclic(5)])
def test_conjugation_is_action_by_automorphisms(G):
    assert validate_action(conjugation_action(G)).ok


def test_homomorphisms():
    assert make_hom(cyclic(4), cyclic(2), [0, 1, 0, 1]).validate().ok
    with pytest.raises(NotAHomomorphism):
        make_hom(cyclic(3), cyclic(2), [0, 1, 1])
    assert identity_hom(symmetric(3)).is_injective()
    assert not trivial_hom(cyclic(3), cyclic(2)).is_injective()


@pytest.mark.parametrize("boundary,action", [
    (identity_hom(cyclic(2)), conjugation_action(cyclic(2))),
    (trivial_hom(cyclic(2), cyclic(2)), trivial_action(cyclic(2), cyclic(2))),
    (trivial_hom(cyclic(3), cyclic(2)), inversion_action(cyclic(2), cyclic(3))),
    (identity_hom(symmetric(3)), conjugation_action(symmetric(3))),
])
def test_valid_group_crossed_modules(boundary, action):
    assert validate_group_crossed_module(GroupCrossedModule(boundary, action)).ok


def test_peiffer_failures_detected():
    # nonabelian E, identity boundary, trivial action: both identities fail
    S3 = symmetric(3)
    bad = GroupCrossedModule(identity_hom(S3), trivial_action(S3, S3))
    assert validate_group_crossed_module(bad).failed_axioms() == {"peiffer1", "peiffer2"}
    # Z4 -> Z2 (mod 2) with inversion: Peiffer 1 holds, ∂(1) ▷ f = -f breaks Peiffer 2
    Z2, Z4 = cyclic(2), cyclic(4)
    bad2 = GroupCrossedModule(make_hom(Z4, Z2, [0, 1, 0, 1]), inversion_action(Z2, Z4))
    assert validate_group_crossed_module(bad2).failed_axioms() == {"peiffer2"}


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(GROUPS), st.data())
def test_product_and_power_consistent(spec, data):
    G = build_group(*spec)
    elems = data.draw(st.lists(st.integers(0, G.order - 1), max_size=6))
    acc = 0
    for g in elems:
        acc = G.mul(acc, g)
    assert G.product(elems) == acc
    g = data.draw(st.integers(0, G.order - 1))
    k = data.draw(st.integers(-5, 5))
    expected = 0
    for _ in range(abs(k)):
        expected = G.mul(expected, g if k > 0 else G.inv(g))
    assert G.power(g, k) == expected


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(GROUPS), st.data())
def test_inverse_is_antihomomorphism(spec, data):
    G = build_group(*spec)
    a = data.draw(st.integers(0, G.order - 1))
    b = data.draw(st.integers(0, G.order - 1))
    assert G.inv(G.mul(a, b)) == G.mul(G.inv(b), G.inv(a))
