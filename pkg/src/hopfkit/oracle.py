"""Brute-force ground-state counts for the GoXo and ooXY families.

These counts never touch the Hopf-algebraic operators.  They enumerate
group-valued colourings of the cell complex (or of its dual) satisfying the
flatness conditions, then count orbits of the vertex (resp. dual-vertex)
gauge action.  They anchor every spectral number computed by the lattice.

GoXo conventions (``G`` acting on ``X`` by automorphisms):

* holonomy along a word ``((e₁,s₁), …)`` is ``g_{e₁}^{s₁} ⋯ g_{eₙ}^{sₙ}``;
* plaquette flatness: the holonomy of the boundary word is ``1``;
* edge flatness: ``hol_{P,e}⁻¹ ▷ x_P = hol_{Q,e}⁻¹ ▷ x_Q`` with the holonomies
  taken along the two connecting paths of ``e``;
* gauge by ``g`` at ``v``: ``g_e ↦ g·g_e`` if ``v`` is the tail of ``e``,
  ``g_e ↦ g_e·g⁻¹`` if it is the head, ``x_P ↦ g ▷ x_P`` if ``v`` is the base-point of ``P``.

ooXY conventions (``f: Y → X``), on the dual complex:

* dual-edge compatibility ``f(y_e) · x_{target} = x_{source}``;
* dual-plaquette flatness: the holonomy around every dual plaquette is ``1``;
* gauge by ``z`` at dual vertex ``p``: ``y ↦ z·y`` on dual edges leaving ``p``,
  ``y ↦ y·z⁻¹`` on those entering ``p``, ``x_p ↦ f(z) · x_p``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .fingroup import FiniteGroup, GroupAction, GroupHom
from .report import TooLarge
from .surface import CellComplex, boundary_word, connecting_path, dual_complex

ENUMERATION_BOUND = 10**7


@dataclass(frozen=True)
class FlatColouring:
    """A fully flat GoXo colouring: a ``G`` label per edge and an ``X`` label per plaquette."""

    edge_labels: tuple[int, ...]
    plaquette_labels: tuple[int, ...]


@dataclass(frozen=True)
class DualColouring:
    """An ooXY colouring of the dual complex."""

    dual_vertex_labels: tuple[int, ...]
    dual_edge_labels: tuple[int, ...]


class _Budget:
    def __init__(self, bound: int) -> None:
        self.bound = bound
        self.used = 0

    def spend(self) -> None:
        self.used += 1
        if self.used > self.bound:
            raise TooLarge(f"enumeration exceeded {self.bound} partial assignments")


def holonomy(G: FiniteGroup, labels: Sequence[int], word: Iterable[tuple[int, int]]) -> int:
    """``∏ labels[e]^{s}`` along ``word``, left to right."""
    acc = 0
    for e, s in word:
        g = labels[e]
        acc = G.mul(acc, g if s > 0 else G.inv(g))
    return acc


def _flat_edge_labellings(c: CellComplex, G: FiniteGroup, words: Sequence[Sequence[tuple[int, int]]],
                          budget: _Budget) -> list[tuple[int, ...]]:
    """All edge labellings whose holonomy around each word is trivial."""
    # check a word as soon as its last edge (in enumeration order) is assigned
    last = {}
    for w_id, word in enumerate(words):
        last.setdefault(max(e for e, _ in word), []).append(w_id)
    labels = [0] * c.n_edges
    out = []

    def rec(e: int) -> None:
        if e == c.n_edges:
            out.append(tuple(labels))
            return
        for g in G.elements():
            budget.spend()
            labels[e] = g
            if all(holonomy(G, labels, words[w]) == 0 for w in last.get(e, ())):
                rec(e + 1)

    rec(0)
    return out


def goxo_flat_colourings(c: CellComplex, G: FiniteGroup, X: FiniteGroup, act: GroupAction,
                         bound: int = ENUMERATION_BOUND) -> list[FlatColouring]:
    """Every colouring flat on plaquettes and on edges."""
    budget = _Budget(bound)
    words = [boundary_word(c, p) for p in range(c.n_plaquettes)]
    paths = [(connecting_path(c, e, "left"), connecting_path(c, e, "right"))
             for e in range(c.n_edges)]
    # an edge constraint becomes checkable once both of its plaquettes carry labels
    ready: dict[int, list[int]] = {}
    for e in range(c.n_edges):
        ready.setdefault(max(c.left_plaquette(e), c.right_plaquette(e)), []).append(e)
    out = []
    for edges in _flat_edge_labellings(c, G, words, budget):
        hol = [(holonomy(G, edges, lp), holonomy(G, edges, rp)) for lp, rp in paths]
        xs = [0] * c.n_plaquettes

        def edge_ok(e: int) -> bool:
            hp, hq = hol[e]
            P, Q = c.left_plaquette(e), c.right_plaquette(e)
            return act(G.inv(hp), xs[P]) == act(G.inv(hq), xs[Q])

        def rec(p: int) -> None:
            if p == c.n_plaquettes:
                out.append(FlatColouring(edges, tuple(xs)))
                return
            for x in X.elements():
                budget.spend()
                xs[p] = x
                if all(edge_ok(e) for e in ready.get(p, ())):
                    rec(p + 1)

        rec(0)
    return out


def is_fully_flat(c: CellComplex, G: FiniteGroup, act: GroupAction, col: FlatColouring) -> bool:
    """Re-verify both flatness families for a colouring."""
    for p in range(c.n_plaquettes):
        if holonomy(G, col.edge_labels, boundary_word(c, p)) != 0:
            return False
    for e in range(c.n_edges):
        hp = holonomy(G, col.edge_labels, connecting_path(c, e, "left"))
        hq = holonomy(G, col.edge_labels, connecting_path(c, e, "right"))
        xp = col.plaquette_labels[c.left_plaquette(e)]
        xq = col.plaquette_labels[c.right_plaquette(e)]
        if act(G.inv(hp), xp) != act(G.inv(hq), xq):
            return False
    return True


def goxo_gauge(c: CellComplex, G: FiniteGroup, act: GroupAction, col: FlatColouring,
               v: int, g: int) -> FlatColouring:
    """The vertex gauge transformation by ``g`` at ``v``."""
    edges = list(col.edge_labels)
    for e, (t, h) in enumerate(c.edges):
        if t == v:
            edges[e] = G.mul(g, edges[e])
        if h == v:
            edges[e] = G.mul(edges[e], G.inv(g))
    xs = list(col.plaquette_labels)
    for p in c.plaquettes_based_at(v):
        xs[p] = act(g, xs[p])
    return FlatColouring(tuple(edges), tuple(xs))


def count_orbits_union_find(items: Sequence, moves: Callable[[object], Iterable]) -> int:
    """Number of classes of the equivalence generated by ``item ~ move(item)``."""
    index = {x: i for i, x in enumerate(items)}
    parent = list(range(len(items)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, x in enumerate(items):
        for y in moves(x):
            j = index.get(y)
            if j is None:
                raise ValueError("gauge move leaves the colouring set")
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
    return sum(1 for i in range(len(items)) if find(i) == i)


def count_orbits_bfs(items: Sequence, moves: Callable[[object], Iterable]) -> int:
    """The same count by expanding every orbit explicitly."""
    seen: set = set()
    count = 0
    for x in items:
        if x in seen:
            continue
        count += 1
        seen.add(x)
        queue = deque([x])
        while queue:
            y = queue.popleft()
            for z in moves(y):
                if z not in seen:
                    seen.add(z)
                    queue.append(z)
    return count


def _counter(method: str):
    if method == "union_find":
        return count_orbits_union_find
    if method == "bfs":
        return count_orbits_bfs
    raise ValueError(f"unknown orbit counting method {method!r}")


def goxo_ground_count(c: CellComplex, G: FiniteGroup, X: FiniteGroup, act: GroupAction,
                      method: str = "union_find", bound: int = ENUMERATION_BOUND) -> int:
    """Number of gauge orbits of fully flat GoXo colourings."""
    cols = goxo_flat_colourings(c, G, X, act, bound)

    def moves(col):
        return [goxo_gauge(c, G, act, col, v, g)
                for v in range(c.n_vertices) for g in G.elements() if g != 0]

    return _counter(method)(cols, moves)


# ---------------------------------------------------------------------------
# ooXY on the dual complex


def ooxy_dual_colourings(c: CellComplex, f: GroupHom,
                         bound: int = ENUMERATION_BOUND) -> list[DualColouring]:
    """Dual colourings of ``dual_complex(c)`` satisfying both constraint families."""
    budget = _Budget(bound)
    Y, X = f.source, f.target
    d = dual_complex(c)
    words = [boundary_word(d, q) for q in range(d.n_plaquettes)]
    out = []
    # dual edge e (same id as the original edge) runs from source to target
    ready: dict[int, list[int]] = {}
    for e, (s, t) in enumerate(d.edges):
        ready.setdefault(max(s, t), []).append(e)
    for ys in _flat_edge_labellings(d, Y, words, budget):
        xs = [0] * d.n_vertices

        def ok(e: int) -> bool:
            s, t = d.edges[e]
            return X.mul(f(ys[e]), xs[t]) == xs[s]

        def rec(p: int) -> None:
            if p == d.n_vertices:
                out.append(DualColouring(tuple(xs), ys))
                return
            for x in X.elements():
                budget.spend()
                xs[p] = x
                if all(ok(e) for e in ready.get(p, ())):
                    rec(p + 1)

        rec(0)
    return out


def ooxy_gauge(d: CellComplex, f: GroupHom, col: DualColouring, p: int, z: int) -> DualColouring:
    """Gauge transformation by ``z ∈ Y`` at dual vertex ``p``."""
    Y, X = f.source, f.target
    ys = list(col.dual_edge_labels)
    for e, (s, t) in enumerate(d.edges):
        if s == p:
            ys[e] = Y.mul(z, ys[e])
        if t == p:
            ys[e] = Y.mul(ys[e], Y.inv(z))
    xs = list(col.dual_vertex_labels)
    xs[p] = X.mul(f(z), xs[p])
    return DualColouring(tuple(xs), tuple(ys))


def is_dual_flat(d: CellComplex, f: GroupHom, col: DualColouring) -> bool:
    Y, X = f.source, f.target
    for q in range(d.n_plaquettes):
        if holonomy(Y, col.dual_edge_labels, boundary_word(d, q)) != 0:
            return False
    for e, (s, t) in enumerate(d.edges):
        if X.mul(f(col.dual_edge_labels[e]), col.dual_vertex_labels[t]) != col.dual_vertex_labels[s]:
            return False
    return True


def ooxy_ground_count(c: CellComplex, f: GroupHom, method: str = "union_find",
                      bound: int = ENUMERATION_BOUND) -> int:
    """Number of gauge orbits of dual colourings."""
    d = dual_complex(c)
    cols = ooxy_dual_colourings(c, f, bound)
    Y = f.source

    def moves(col):
        return [ooxy_gauge(d, f, col, p, z) for p in range(d.n_vertices) for z in Y.elements() if z != 0]

    return _counter(method)(cols, moves)
