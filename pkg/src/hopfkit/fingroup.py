"""Finite groups, homomorphisms, actions and crossed modules as explicit tables.

Every group is stored as a full multiplication table whose identity is the
element with index 0.  Canonical element orders of the named families:

* ``cyclic(n)``: residues ``0, 1, ..., n-1``;
* ``symmetric(n)``: permutations of ``range(n)`` in lexicographic order,
  composed right-to-left, ``(s*t)(i) = s(t(i))``;
* ``dihedral(n)``: the rotations ``r^0 .. r^(n-1)`` followed by the
  reflections ``s r^0 .. s r^(n-1)``, so the group has order ``2n``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .report import InvalidAction, NotAGroup, NotAHomomorphism, ValidationReport


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its multiplication table, identity at index 0."""

    table: np.ndarray
    name: str = "G"
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        t = np.asarray(self.table, dtype=np.int64)
        t.setflags(write=False)
        object.__setattr__(self, "table", t)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(len(t))))

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    @property
    def identity(self) -> int:
        return 0

    @cached_property
    def inverse(self) -> np.ndarray:
        inv = np.argmin(self.table, axis=1)
        inv.setflags(write=False)
        return inv

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def product(self, elements: Sequence[int]) -> int:
        acc = 0
        for g in elements:
            acc = int(self.table[acc, g])
        return acc

    def power(self, a: int, k: int) -> int:
        base = a if k >= 0 else self.inv(a)
        acc = 0
        for _ in range(abs(k)):
            acc = int(self.table[acc, base])
        return acc

    def conj(self, g: int, x: int) -> int:
        """Return ``g x g^-1``."""
        return self.mul(self.mul(g, x), self.inv(g))

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def elements(self) -> range:
        return range(self.order)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteGroup) and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash(self.table.tobytes())

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


def _check_table(table: np.ndarray) -> None:
    n = table.shape[0]
    if table.ndim != 2 or table.shape != (n, n) or n == 0:
        raise NotAGroup("multiplication table must be a non-empty square array")
    if table.min() < 0 or table.max() >= n:
        raise NotAGroup("table entries out of range")
    full = np.arange(n)
    for i in range(n):
        if not np.array_equal(np.sort(table[i]), full):
            raise NotAGroup(f"row {i} is not a permutation (not a Latin square)")
        if not np.array_equal(np.sort(table[:, i]), full):
            raise NotAGroup(f"column {i} is not a permutation (not a Latin square)")
    if not (np.array_equal(table[0], full) and np.array_equal(table[:, 0], full)):
        raise NotAGroup("index 0 is not a two-sided identity")
    # (ab)c == a(bc) for all triples, vectorised over c
    left = table[table]  # left[a, b, c] = table[table[a, b], c]
    right = table[:, table]  # right[a, b, c] = table[a, table[b, c]]
    bad = np.argwhere(left != right)
    if len(bad):
        a, b, c = (int(x) for x in bad[0])
        raise NotAGroup(f"associativity fails at ({a}, {b}, {c})")


def from_table(table: Sequence[Sequence[int]], name: str = "G",
               labels: Sequence[str] | None = None) -> FiniteGroup:
    """Validate an explicit table and renumber it so the identity has index 0."""
    t = np.asarray(table, dtype=np.int64)
    n = t.shape[0] if t.ndim == 2 else 0
    if t.ndim != 2 or t.shape != (n, n) or n == 0:
        raise NotAGroup("multiplication table must be a non-empty square array")
    ident = [i for i in range(n) if np.array_equal(t[i], np.arange(n))]
    if not ident:
        raise NotAGroup("no left identity element")
    e = ident[0]
    order = [e] + [i for i in range(n) if i != e]
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    if t.min() < 0 or t.max() >= n:
        raise NotAGroup("table entries out of range")
    renumbered = pos[t[np.ix_(order, order)]]
    _check_table(renumbered)
    if labels is not None:
        labels = tuple(labels[i] for i in order)
    return FiniteGroup(renumbered, name=name, labels=tuple(labels or ()))


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise NotAGroup("cyclic group needs n >= 1")
    idx = np.arange(n)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n, name=f"Z{n}")


def trivial_group() -> FiniteGroup:
    return cyclic(1)


def symmetric(n: int) -> FiniteGroup:
    if n < 1:
        raise NotAGroup("symmetric group needs n >= 1")
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(s[t[i]] for i in range(n))] for t in perms] for s in perms]
    labels = tuple("".join(str(x) for x in p) for p in perms)
    return FiniteGroup(np.array(table), name=f"S{n}", labels=labels)


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order ``2n``: rotations first, then reflections."""
    if n < 1:
        raise NotAGroup("dihedral group needs n >= 1")

    def mul(a: int, b: int) -> int:
        ra, sa = a % n, a // n
        rb, sb = b % n, b // n
        # (s^sa r^ra)(s^sb r^rb) = s^(sa+sb) r^((-1)^sb ra + rb)
        r = ((-ra if sb else ra) + rb) % n
        return ((sa + sb) % 2) * n + r

    table = [[mul(a, b) for b in range(2 * n)] for a in range(2 * n)]
    labels = tuple(f"r{k}" for k in range(n)) + tuple(f"sr{k}" for k in range(n))
    return FiniteGroup(np.array(table), name=f"D{n}", labels=labels)


def direct_product(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    """Direct product with element ``(a, b)`` at index ``a * |g2| + b``."""
    n2 = g2.order
    t = g1.table[:, None, :, None] * n2 + g2.table[None, :, None, :]
    t = t.reshape(g1.order * n2, g1.order * n2)
    return FiniteGroup(t, name=f"{g1.name}x{g2.name}")


def build_group(kind: str, n: int | None = None,
                table: Sequence[Sequence[int]] | None = None) -> FiniteGroup:
    """Build a group by kind tag: ``cyclic``, ``symmetric``, ``dihedral`` or ``explicit``."""
    if kind == "explicit":
        if table is None:
            raise NotAGroup("explicit group needs a table")
        return from_table(table)
    if kind == "trivial":
        return trivial_group()
    if n is None:
        raise NotAGroup(f"{kind} group needs a parameter n")
    builders: dict[str, Callable[[int], FiniteGroup]] = {
        "cyclic": cyclic, "symmetric": symmetric, "dihedral": dihedral,
    }
    if kind not in builders:
        raise NotAGroup(f"unknown group kind {kind!r}")
    return builders[kind](n)


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True, eq=False)
class GroupHom:
    """A homomorphism given by the image of every source element."""

    source: FiniteGroup
    target: FiniteGroup
    map: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "map", tuple(int(x) for x in self.map))

    def __call__(self, g: int) -> int:
        return self.map[g]

    def validate(self) -> ValidationReport:
        rep = ValidationReport(f"hom {self.source.name}->{self.target.name}")
        rep.check("shape")
        if len(self.map) != self.source.order or any(
                not 0 <= x < self.target.order for x in self.map):
            rep.fail("shape", (), "map length or range mismatch")
            return rep
        rep.check("identity")
        if self.map[0] != 0:
            rep.fail("identity", (0,))
        rep.check("multiplicative")
        for i in self.source.elements():
            for j in self.source.elements():
                if self.map[self.source.mul(i, j)] != self.target.mul(self.map[i], self.map[j]):
                    rep.fail("multiplicative", (i, j))
                    return rep
        return rep

    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)


def make_hom(source: FiniteGroup, target: FiniteGroup, images: Sequence[int]) -> GroupHom:
    hom = GroupHom(source, target, tuple(images))
    rep = hom.validate()
    if not rep.ok:
        raise NotAHomomorphism(str(rep))
    return hom


def trivial_hom(source: FiniteGroup, target: FiniteGroup) -> GroupHom:
    return GroupHom(source, target, (0,) * source.order)


def identity_hom(group: FiniteGroup) -> GroupHom:
    return GroupHom(group, group, tuple(range(group.order)))


# ---------------------------------------------------------------------------
# actions


@dataclass(frozen=True, eq=False)
class GroupAction:
    """Left action of ``group`` on ``{0..degree-1}`` stored as a permutation table.

    ``perms[g, x]`` is ``g ▷ x``.  When ``acted`` is given the acted set is
    that group and the action is meant to be by automorphisms.
    """

    group: FiniteGroup
    perms: np.ndarray
    acted: FiniteGroup | None = None

    def __post_init__(self) -> None:
        p = np.asarray(self.perms, dtype=np.int64).reshape(self.group.order, -1)
        p.setflags(write=False)
        object.__setattr__(self, "perms", p)

    @property
    def degree(self) -> int:
        return int(self.perms.shape[1])

    @property
    def by_automorphisms(self) -> bool:
        return self.acted is not None

    def __call__(self, g: int, x: int) -> int:
        return int(self.perms[g, x])

    def is_trivial(self) -> bool:
        return bool(np.all(self.perms == np.arange(self.degree)[None, :]))

    def restricted_trivial_on(self, elements: Sequence[int]) -> int | None:
        """Return an element of ``elements`` acting nontrivially, or ``None``."""
        ident = np.arange(self.degree)
        for g in elements:
            if not np.array_equal(self.perms[g], ident):
                return int(g)
        return None


def validate_action(a: GroupAction) -> ValidationReport:
    """Check identity, composition and (if applicable) automorphism axioms."""
    G = a.group
    rep = ValidationReport(f"action of {G.name}")
    ident = np.arange(a.degree)
    rep.check("permutation")
    for g in G.elements():
        if not np.array_equal(np.sort(a.perms[g]), ident):
            rep.fail("permutation", (g,))
    if not rep.ok:
        return rep
    rep.check("identity")
    if not np.array_equal(a.perms[0], ident):
        bad = int(np.argmax(a.perms[0] != ident))
        rep.fail("identity", (0, bad))
    rep.check("composition")
    for g in G.elements():
        for h in G.elements():
            lhs = a.perms[G.mul(g, h)]
            rhs = a.perms[g][a.perms[h]]
            if not np.array_equal(lhs, rhs):
                x = int(np.argmax(lhs != rhs))
                rep.fail("composition", (g, h, x))
    if a.acted is not None:
        X = a.acted
        rep.check("automorphism")
        if X.order != a.degree:
            rep.fail("automorphism", (), "acted group order differs from degree")
            return rep
        for g in G.elements():
            p = a.perms[g]
            # p(x y) == p(x) p(y)
            lhs = p[X.table]
            rhs = X.table[np.ix_(p, p)]
            bad = np.argwhere(lhs != rhs)
            if len(bad):
                x, y = (int(v) for v in bad[0])
                rep.fail("automorphism", (g, x, y))
    rep.flags["by_automorphisms"] = a.acted is not None and rep.ok
    return rep


def make_action(group: FiniteGroup, perms, acted: FiniteGroup | None = None) -> GroupAction:
    act = GroupAction(group, perms, acted)
    rep = validate_action(act)
    if not rep.ok:
        raise InvalidAction(str(rep))
    return act


def trivial_action(group: FiniteGroup, acted: FiniteGroup) -> GroupAction:
    return GroupAction(group, np.tile(np.arange(acted.order), (group.order, 1)), acted)


def action_from_function(group: FiniteGroup, acted: FiniteGroup,
                         fn: Callable[[int, int], int]) -> GroupAction:
    perms = [[fn(g, x) for x in acted.elements()] for g in group.elements()]
    return make_action(group, perms, acted)


def inversion_action(group: FiniteGroup, acted: FiniteGroup,
                     sign: Sequence[int] | None = None) -> GroupAction:
    """Elements with ``sign[g] == 1`` act by inversion, the others trivially.

    ``sign`` must be a homomorphism to ``Z2``; by default ``group`` must have
    order 2 and its non-identity element inverts.  ``acted`` must be abelian.
    """
    if sign is None:
        if group.order != 2:
            raise InvalidAction("default inversion action needs a group of order 2")
        sign = (0, 1)
    perms = [[acted.inv(x) if sign[g] else x for x in acted.elements()]
             for g in group.elements()]
    return make_action(group, perms, acted)


def conjugation_action(group: FiniteGroup) -> GroupAction:
    """``g ▷ x = g x g^-1`` on the group itself."""
    perms = [[group.conj(g, x) for x in group.elements()] for g in group.elements()]
    return GroupAction(group, perms, group)


def pullback_action(action: GroupAction, hom: GroupHom) -> GroupAction:
    """Action of ``hom.source`` obtained by composing with ``hom``."""
    perms = [action.perms[hom(g)] for g in hom.source.elements()]
    return GroupAction(hom.source, perms, action.acted)


# ---------------------------------------------------------------------------
# crossed modules of groups


@dataclass(frozen=True, eq=False)
class GroupCrossedModule:
    """A boundary map ``E -> G`` with an action of ``G`` on ``E``."""

    boundary: GroupHom
    action: GroupAction

    @property
    def E(self) -> FiniteGroup:
        return self.boundary.source

    @property
    def G(self) -> FiniteGroup:
        return self.boundary.target


def validate_group_crossed_module(x: GroupCrossedModule) -> ValidationReport:
    """Report violations of both Peiffer identities (after basic sanity checks)."""
    E, G = x.E, x.G
    rep = ValidationReport("group crossed module")
    rep.check("shapes")
    if x.action.group != G or x.action.degree != E.order:
        rep.fail("shapes", (), "action does not act by G on E")
        return rep
    rep.merge(x.boundary.validate(), "boundary.")
    act_rep = validate_action(GroupAction(G, x.action.perms, E))
    rep.merge(act_rep, "action.")
    if not rep.ok:
        return rep
    d, act = x.boundary, x.action
    rep.check("peiffer1")
    for g in G.elements():
        for e in E.elements():
            if d(act(g, e)) != G.conj(g, d(e)):
                rep.fail("peiffer1", (g, e))
    rep.check("peiffer2")
    for e in E.elements():
        for f in E.elements():
            if act(d(e), f) != E.conj(e, f):
                rep.fail("peiffer2", (e, f))
    return rep
