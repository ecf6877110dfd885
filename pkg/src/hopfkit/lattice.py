"""The lattice model: state space, local operators, projectors and ground states.

The state space has one ``H`` factor per edge followed by one ``A`` factor per
plaquette; factor ``i < |edges|`` is edge ``i`` and factor ``|edges| + p`` is
plaquette ``p``.  Flat indices are mixed-radix with factor 0 most significant.

Every operator is assembled on its support only, by evaluating the defining
Sweedler formula on each basis tensor of the support.  Sign conventions: an
exponent ``⟨+1⟩`` is the identity and ``⟨-1⟩`` is the antipode; coproducts are
always taken before the antipode is applied.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .hopf import HopfAlgebra
from .operators import (SparseOperator, decode, encode, integer_trace,
                        projector_product_trace)
from .report import TooLarge, ValidationReport
from .scalars import ScalarMode, add_into, clean, outer
from .surface import (CellComplex, Site, boundary_word, connecting_path, reverse_edge,
                      shift_basepoint, star_order)
from .xmod import HopfCrossedModule

Vec = dict

DEFAULT_MAX_DIM = 1 << 22
HAMILTONIAN_MAX_DIM = 1 << 16


# ---------------------------------------------------------------------------
# state space and model instance


@dataclass(frozen=True, eq=False)
class StateSpace:
    """``H^{⊗edges} ⊗ A^{⊗plaquettes}`` with its index codec."""

    xmod: HopfCrossedModule
    complex: CellComplex

    @cached_property
    def dims(self) -> tuple[int, ...]:
        c = self.complex
        return (self.xmod.H.dim,) * c.n_edges + (self.xmod.A.dim,) * c.n_plaquettes

    @property
    def n_factors(self) -> int:
        return len(self.dims)

    @cached_property
    def total_dim(self) -> int:
        return self.xmod.H.dim ** self.complex.n_edges * self.xmod.A.dim ** self.complex.n_plaquettes

    def edge_factor(self, e: int) -> int:
        return e

    def plaquette_factor(self, p: int) -> int:
        return self.complex.n_edges + p

    def encode(self, digits: Sequence[int]) -> int:
        return encode(digits, self.dims)

    def decode(self, index: int) -> tuple[int, ...]:
        return decode(index, self.dims)

    def factor_name(self, f: int) -> str:
        E = self.complex.n_edges
        return f"e{f}" if f < E else f"P{f - E}"


@dataclass(frozen=True)
class Conventions:
    """Choices that the definitions leave open, plus switches for mutation testing.

    ``shared_edge_legs`` orders the three coproduct legs of an edge lying on
    both connecting paths of an edge operator.  ``right_antipode=False``
    deliberately drops the antipode on ``a₍₂₎`` in the edge operator, which
    yields a wrong model used to check that the test harness notices.
    """

    shared_edge_legs: tuple[str, str, str] = ("P", "Q", "stay")
    right_antipode: bool = True


@dataclass(frozen=True, eq=False)
class ModelInstance:
    """A crossed module on a cell complex, with verified Haar integrals."""

    xmod: HopfCrossedModule
    complex: CellComplex
    conventions: Conventions = field(default_factory=Conventions)

    @cached_property
    def space(self) -> StateSpace:
        return StateSpace(self.xmod, self.complex)

    @property
    def H(self) -> HopfAlgebra:
        return self.xmod.H

    @property
    def A(self) -> HopfAlgebra:
        return self.xmod.A

    @property
    def mode(self) -> ScalarMode:
        return self.xmod.mode

    @cached_property
    def ell(self) -> Vec:
        return self.xmod.haar_H

    @cached_property
    def Lam(self) -> Vec:
        return self.xmod.haar_A

    @cached_property
    def lam(self) -> Vec:
        return self.xmod.haar_Hdual

    @property
    def total_dim(self) -> int:
        return self.space.total_dim

    def with_complex(self, c: CellComplex) -> "ModelInstance":
        return ModelInstance(self.xmod, c, self.conventions)

    def with_conventions(self, **changes) -> "ModelInstance":
        return ModelInstance(self.xmod, self.complex, replace(self.conventions, **changes))

    def default_site(self, v: int) -> Site:
        return Site(v, min(self.complex.incident_plaquettes(v)))

    def sites(self) -> list[Site]:
        return [Site(v, p) for v in range(self.complex.n_vertices)
                for p in sorted(self.complex.incident_plaquettes(v))]

    # tables shared by all operators of the instance

    @cached_property
    def _S_H(self) -> list[Vec]:
        return [self.H.S(self.H.basis(i)) for i in range(self.H.dim)]

    @cached_property
    def _S_A(self) -> list[Vec]:
        return [self.A.S(self.A.basis(i)) for i in range(self.A.dim)]

    def signed(self, i: int, sign: int) -> Vec:
        """``e_i^⟨sign⟩`` in ``H``."""
        return {i: self.mode.one} if sign > 0 else self._S_H[i]

    def signed_vec(self, x: Mapping, sign: int) -> Vec:
        return dict(x) if sign > 0 else self.H.S(x)

    @cached_property
    def _tables(self) -> dict:
        return {}

    def cop_basis_n(self, i: int, n: int) -> dict:
        """``Δ^{(n-1)}(e_i)`` as ``{legs: coeff}``, memoised."""
        key = ("cop", i, n)
        t = self._tables
        if key not in t:
            t[key] = self.H.cop_n({i: 1}, n)
        return t[key]

    def h_mul(self, i: int, j: int) -> Vec:
        key = ("hmul", i, j)
        t = self._tables
        if key not in t:
            t[key] = dict(self.H.mul_basis(i, j))
        return t[key]

    def a_mul(self, i: int, j: int) -> Vec:
        key = ("amul", i, j)
        t = self._tables
        if key not in t:
            t[key] = dict(self.A.mul_basis(i, j))
        return t[key]

    def act_basis(self, h: int, x: int) -> Vec:
        key = ("act", h, x)
        t = self._tables
        if key not in t:
            t[key] = dict(self.xmod.action.act_basis(h, x))
        return t[key]

    def lin(self, fn, *vecs) -> Vec:
        """Extend a basis-level bilinear (or multilinear) table ``fn`` to sparse vectors."""
        out: dict = {}
        for combo in itertools.product(*(v.items() for v in vecs)):
            c = 1
            for _, x in combo:
                c *= x
            for k, y in fn(*(i for i, _ in combo)).items():
                out[k] = out.get(k, 0) + c * y
        return clean(out, self.mode)


def total_dim(xm: HopfCrossedModule, c: CellComplex) -> int:
    """``dim(H)^{|edges|} · dim(A)^{|plaquettes|}``."""
    return xm.H.dim ** c.n_edges * xm.A.dim ** c.n_plaquettes


# ---------------------------------------------------------------------------
# local operator assembly


def _assemble(m: ModelInstance, factors: Sequence[int],
              evaluate: Callable[[dict[int, int]], Mapping[tuple, object]],
              name: str) -> SparseOperator:
    """Evaluate ``evaluate`` on every basis tensor of ``factors`` and package it."""
    dims = [m.space.dims[f] for f in factors]
    columns = {}
    for digits in itertools.product(*(range(d) for d in dims)):
        columns[digits] = evaluate(dict(zip(factors, digits)))
    return SparseOperator.from_columns(factors, dims, columns, m.mode, name)


def _tensor(factors: Sequence[int], parts: Mapping[int, Mapping], coeff) -> dict:
    """``coeff · ⊗_f parts[f]`` keyed by output digit tuples in ``factors`` order."""
    out = outer([parts[f] for f in factors])
    return {k: coeff * v for k, v in out.items()}


def vertex_operator(m: ModelInstance, s: Site, h: Mapping,
                    plaquette_order: Sequence[int] | None = None) -> SparseOperator:
    """``V^h_{v,P}``: ``h`` enters through ``Δ^{(n+k-1)}`` on the star edges and the
    plaquettes based at ``v``.

    A star edge with θ=+1 becomes ``h_i v`` and one with θ=-1 becomes
    ``v S(h_i)``; a plaquette based at ``v`` becomes ``h_j ▷ X``.  Plaquettes are
    taken in ascending id unless ``plaquette_order`` is given.
    """
    c, H = m.complex, m.H
    star = star_order(c, s)
    based = list(plaquette_order) if plaquette_order is not None else sorted(c.plaquettes_based_at(s.vertex))
    if sorted(based) != sorted(c.plaquettes_based_at(s.vertex)):
        raise ValueError("plaquette_order must list exactly the plaquettes based at the vertex")
    slots = [(e, th) for e, th in star] + [(m.space.plaquette_factor(p), 0) for p in based]
    factors = sorted({f for f, _ in slots})
    pos = {f: i for i, f in enumerate(factors)}

    def update(leg: int, th: int, cur: int) -> Vec:
        if th > 0:
            return m.h_mul(leg, cur)
        if th < 0:
            return m.lin(m.h_mul, {cur: 1}, m._S_H[leg])
        return m.act_basis(leg, cur)

    def evaluate(val: dict[int, int]) -> dict:
        # fold the iterated coproduct slot by slot: a state is (current factor
        # values, basis index of the not yet split remainder of h)
        states = {(tuple(val[f] for f in factors), i): c for i, c in h.items()}
        for k, (f, th) in enumerate(slots):
            last = k == len(slots) - 1
            new: dict = {}
            for (cur, r), c in states.items():
                splits = [((r, None), 1)] if last else m.cop_basis_n(r, 2).items()
                for (leg, rest), cs in splits:
                    for o, co in update(leg, th, cur[pos[f]]).items():
                        nxt = cur[:pos[f]] + (o,) + cur[pos[f] + 1:]
                        key = (nxt, rest)
                        new[key] = new.get(key, 0) + c * cs * co
            states = {k: v for k, v in new.items() if not m.mode.negligible(v)}
        return clean({cur: c for (cur, _), c in states.items()}, m.mode)

    return _assemble(m, factors, evaluate, f"V[{s.vertex},{s.plaquette}]")


def _split(m: ModelInstance, terms: list, edge: int, roles: Sequence, signs: Mapping) -> list:
    """Split the current value of ``edge`` in every term into coproduct legs.

    ``terms`` holds ``(coeff, values, legs)`` where ``values`` maps edges to
    basis indices and ``legs`` maps role keys to extracted ``H`` vectors.  The
    role ``'stay'`` keeps its leg on the edge; other roles are stored in
    ``legs`` raised to ``signs[role]``.
    """
    out = []
    for coeff, values, legs in terms:
        for key, c in m.cop_basis_n(values[edge], len(roles)).items():
            nv = dict(values)
            nl = dict(legs)
            for role, idx in zip(roles, key):
                if role == "stay":
                    nv[edge] = idx
                else:
                    nl[role] = m.signed(idx, signs[role])
            out.append((coeff * c, nv, nl))
    return out


def _legs_product(m: ModelInstance, legs: Mapping, keys: Sequence) -> Vec:
    acc = dict(m.H.unit_vec)
    for k in keys:
        acc = m.lin(m.h_mul, acc, legs[k])
    return acc


def edge_operator(m: ModelInstance, e: int, a: Mapping) -> SparseOperator:
    """``E^a_e``: the edge factor becomes ``∂(a₍₃₎) v_e``; the left plaquette ``P``
    receives ``(path legs ▷ a₍₁₎) · X_P`` and the right plaquette ``Q`` receives
    ``X_Q · (path legs ▷ S a₍₂₎)``.

    Along the left path each edge ``f`` splits as ``f₍₁₎`` (stays) and
    ``f₍₂₎^⟨θ⟩`` (extracted); along the right path as ``f₍₂₎`` (stays) and
    ``f₍₁₎^⟨σ⟩`` (extracted).  An edge on both paths uses the triple coproduct
    in the order given by ``m.conventions.shared_edge_legs``.
    """
    c, H, A, X = m.complex, m.H, m.A, m.xmod
    P, Q = c.left_plaquette(e), c.right_plaquette(e)
    left = connecting_path(c, e, "left")
    right = connecting_path(c, e, "right")
    if any(f == e for f, _ in left + right):
        raise NotImplementedError(f"edge {e} lies on its own connecting path")
    if len({f for f, _ in left}) != len(left) or len({f for f, _ in right}) != len(right):
        raise NotImplementedError(f"connecting path of edge {e} repeats an edge")
    lidx = {f: i for i, (f, _) in enumerate(left)}
    ridx = {f: i for i, (f, _) in enumerate(right)}
    fP, fQ = m.space.plaquette_factor(P), m.space.plaquette_factor(Q)
    path_edges = sorted(set(lidx) | set(ridx))
    factors = sorted({e, fP, fQ} | set(path_edges))
    pos = {f: i for i, f in enumerate(factors)}
    a_terms = list(A.cop_n(a, 3).items())
    shared_roles = m.conventions.shared_edge_legs
    keysP = [("P", i) for i in range(len(left))]
    keysQ = [("Q", i) for i in range(len(right))]
    # per-edge split rules, fixed for the operator
    rules = []
    for f in path_edges:
        signs = {}
        if f in lidx:
            signs[("P", lidx[f])] = left[lidx[f]][1]
        if f in ridx:
            signs[("Q", ridx[f])] = right[ridx[f]][1]
        if f in lidx and f in ridx:
            roles = [("P", lidx[f]) if r == "P" else ("Q", ridx[f]) if r == "Q" else "stay"
                     for r in shared_roles]
        elif f in lidx:
            roles = ["stay", ("P", lidx[f])]
        else:
            roles = [("Q", ridx[f]), "stay"]
        rules.append((f, roles, signs))
    edge_cache: dict = {}
    plaq_cache: dict = {}

    def edge_part(a3: int, ve: int) -> Vec:
        if (a3, ve) not in edge_cache:
            edge_cache[(a3, ve)] = m.lin(m.h_mul, X.d({a3: 1}), {ve: 1})
        return edge_cache[(a3, ve)]

    def plaq_part(p: int, q: int, a1: int, a2: int, xP: int, xQ: int) -> dict:
        """``{(X_P', X_Q'): coeff}`` (a single key component when ``P == Q``)."""
        key = (p, q, a1, a2, xP, xQ)
        if key not in plaq_cache:
            a2v = m._S_A[a2] if m.conventions.right_antipode else {a2: 1}
            lmul = m.act_basis(p, a1)
            rmul = m.lin(lambda y: m.act_basis(q, y), a2v)
            if P == Q:
                res = m.lin(m.a_mul, m.lin(m.a_mul, lmul, {xP: 1}), rmul)
                plaq_cache[key] = {(x,): cx for x, cx in res.items()}
            else:
                newP = m.lin(m.a_mul, lmul, {xP: 1})
                newQ = m.lin(m.a_mul, {xQ: 1}, rmul)
                plaq_cache[key] = outer([newP, newQ])
        return plaq_cache[key]

    def evaluate(val: dict[int, int]) -> dict:
        terms = [(1, {f: val[f] for f in path_edges}, {})]
        for f, roles, signs in rules:
            terms = _split(m, terms, f, roles, signs)
        # joint distribution of (stays, left product, right product)
        dist: dict = {}
        for coeff, values, legs in terms:
            stay = tuple(values[f] for f in path_edges)
            prodP = _legs_product(m, legs, keysP)
            prodQ = _legs_product(m, legs, keysQ)
            for p, cp in prodP.items():
                for q, cq in prodQ.items():
                    k = (stay, p, q)
                    dist[k] = dist.get(k, 0) + coeff * cp * cq
        out: dict = {}
        plaq_slots = [fP] if P == Q else [fP, fQ]
        for (stay, p, q), c0 in dist.items():
            if m.mode.negligible(c0):
                continue
            row = [0] * len(factors)
            for f, v in zip(path_edges, stay):
                row[pos[f]] = v
            for (a1, a2, a3), ca in a_terms:
                ev = edge_part(a3, val[e])
                if not ev:
                    continue
                for xs, cx in plaq_part(p, q, a1, a2, val[fP], val[fQ]).items():
                    for f, x in zip(plaq_slots, xs):
                        row[pos[f]] = x
                    for y, cy in ev.items():
                        row[pos[e]] = y
                        k = tuple(row)
                        out[k] = out.get(k, 0) + c0 * ca * cx * cy
        return clean(out, m.mode)

    return _assemble(m, factors, evaluate, f"E[{e}]")


def plaquette_operator(m: ModelInstance, p: int, phi: Mapping) -> SparseOperator:
    """``F^φ_P``: each boundary edge keeps ``((v^⟨θ⟩)₍₁₎)^⟨θ⟩``, the legs
    ``(v^⟨θ⟩)₍₂₎`` are multiplied in boundary order, and the result is
    ``X₍₂₎ · φ(legs · S∂X₍₁₎)``.  Repeated boundary edges are split again on
    each occurrence.
    """
    c, H, A, X = m.complex, m.H, m.A, m.xmod
    word = boundary_word(c, p)
    edges = sorted({f for f, _ in word})
    fP = m.space.plaquette_factor(p)
    factors = sorted(set(edges) | {fP})
    pos = {f: i for i, f in enumerate(factors)}
    # φ(e_k · S∂e_x) for every basis pair
    sd = [H.S(X.d({x: 1})) for x in range(A.dim)]
    weight = {(k, x): H.pair(phi, m.lin(m.h_mul, {k: 1}, sd[x]))
              for k in range(H.dim) for x in range(A.dim)}
    # θ=+1: keep v₍₁₎, extract v₍₂₎;  θ=-1: keep v₍₂₎, extract S(v₍₁₎)
    rules = [(f, ["stay", i] if th > 0 else [i, "stay"], {i: th}) for i, (f, th) in enumerate(word)]
    keys = list(range(len(word)))

    def evaluate(val: dict[int, int]) -> dict:
        terms = [(1, {f: val[f] for f in edges}, {})]
        for f, roles, signs in rules:
            terms = _split(m, terms, f, roles, signs)
        dist: dict = {}
        for coeff, values, legs in terms:
            stay = tuple(values[f] for f in edges)
            for k, ck in _legs_product(m, legs, keys).items():
                dist[(stay, k)] = dist.get((stay, k), 0) + coeff * ck
        out: dict = {}
        x_terms = A.cop({val[fP]: 1})
        for (stay, k), c0 in dist.items():
            if m.mode.negligible(c0):
                continue
            row = [0] * len(factors)
            for f, v in zip(edges, stay):
                row[pos[f]] = v
            for (x1, x2), cx in x_terms.items():
                w = weight[(k, x1)]
                if m.mode.negligible(w):
                    continue
                row[pos[fP]] = x2
                t = tuple(row)
                out[t] = out.get(t, 0) + c0 * cx * w
        return clean(out, m.mode)

    return _assemble(m, factors, evaluate, f"F[{p}]")


def reversal_operator(m: ModelInstance, e: int) -> SparseOperator:
    """``R_e``: the antipode on the edge factor ``e``."""
    return _assemble(m, [e], lambda val: {(k,): v for k, v in m._S_H[val[e]].items()}, f"R[{e}]")


def basepoint_shift_operator(m: ModelInstance, p: int, direction: int = 1) -> SparseOperator:
    """``T^±_P`` on the first (``+1``) or last (``-1``) edge of the boundary word and ``X_P``.

    ``T^+``: ``v ⊗ X ↦ v₍₁₎ ⊗ v₍₂₎^⟨-θ⟩ ▷ X``;  ``T^-``: ``v ⊗ X ↦ v₍₁₎ ⊗ v₍₂₎^⟨σ⟩ ▷ X``
    with θ, σ the counter-clockwise signs of the respective edge.
    """
    word = boundary_word(m.complex, p)
    if direction == 1:
        e, th = word[0]
        sign = -th
    elif direction == -1:
        e, sign = word[-1]
    else:
        raise ValueError("direction must be +1 or -1")
    fP = m.space.plaquette_factor(p)
    factors = sorted({e, fP})

    def evaluate(val: dict[int, int]) -> dict:
        out: dict = {}
        for (v1, v2), cv in m.H.cop({val[e]: m.mode.one}).items():
            parts = {e: {v1: m.mode.one}, fP: m.xmod.act(m.signed(v2, sign), {val[fP]: m.mode.one})}
            add_into(out, _tensor(factors, parts, cv))
        return clean(out, m.mode)

    return _assemble(m, factors, evaluate, f"T{'+' if direction == 1 else '-'}[{p}]")


def full_loop_shift(m: ModelInstance, p: int) -> SparseOperator:
    """``T^⟲_P``: successive positive shifts once around ``P`` (each on the shifted complex)."""
    op = None
    cur = m
    for _ in range(len(boundary_word(m.complex, p))):
        t = basepoint_shift_operator(cur, p, 1)
        op = t if op is None else t @ op
        cur = cur.with_complex(shift_basepoint(cur.complex, p, 1))
    return op


# ---------------------------------------------------------------------------
# projectors and the Hamiltonian


def vertex_projector(m: ModelInstance, v: int, site: Site | None = None) -> SparseOperator:
    op = vertex_operator(m, site or m.default_site(v), m.ell)
    op.name = f"V{v}"
    return op


def edge_projector(m: ModelInstance, e: int) -> SparseOperator:
    op = edge_operator(m, e, m.Lam)
    op.name = f"E{e}"
    return op


def plaquette_projector(m: ModelInstance, p: int) -> SparseOperator:
    op = plaquette_operator(m, p, m.lam)
    op.name = f"F{p}"
    return op


def all_projectors(m: ModelInstance) -> list[SparseOperator]:
    c = m.complex
    return ([vertex_projector(m, v) for v in range(c.n_vertices)]
            + [edge_projector(m, e) for e in range(c.n_edges)]
            + [plaquette_projector(m, p) for p in range(c.n_plaquettes)])


def fake_flat_projector(m: ModelInstance) -> SparseOperator:
    """``Π_ff = ∏_P F_P``."""
    op = SparseOperator.identity(mode=m.mode)
    for p in range(m.complex.n_plaquettes):
        op = op @ plaquette_projector(m, p)
    return op


def _full_support(m: ModelInstance):
    return tuple(range(m.space.n_factors)), m.space.dims


def hamiltonian(m: ModelInstance, max_dim: int = HAMILTONIAN_MAX_DIM) -> SparseOperator:
    """``Σ_v (1 - V_v) + Σ_e (1 - E_e) + Σ_P (1 - F_P)`` on the full space.

    This materialises an operator on every factor, so it is refused (``TooLarge``)
    above ``max_dim`` states.
    """
    if m.total_dim > max_dim:
        raise TooLarge(f"Hamiltonian on {m.total_dim} states exceeds {max_dim}")
    support, dims = _full_support(m)
    one = SparseOperator.identity(support, dims, m.mode)
    h = SparseOperator(support, dims, one.num * 0, 1, m.mode, "h")
    for proj in all_projectors(m):
        h = h + (one - proj.embed(support, dims))
    h.name = "h"
    return h


def ground_dim(m: ModelInstance, force: bool = False, max_dim: int = DEFAULT_MAX_DIM,
               block: int = 1 << 16) -> int:
    """``Tr(∏V ∏E ∏F)``, streamed over columns; exact in rational mode.

    Raises :class:`TooLarge` when the state space exceeds ``max_dim`` and
    ``force`` is false, and :class:`NonIntegerTrace` if the trace is not an
    integer (a symptom of non-commuting factors or, in float mode, round-off).
    """
    N = m.total_dim
    if N > max_dim and not force:
        raise TooLarge(f"state space has {N} states (limit {max_dim}); use force to override")
    tr = projector_product_trace(all_projectors(m), m.space.dims, m.mode, block=block)
    return integer_trace(tr, m.mode, N)


def ground_projector_column(m: ModelInstance, index: int,
                            projectors: Sequence[SparseOperator] | None = None) -> dict:
    """``Π e_index`` as a sparse vector over flat indices."""
    vec = {index: m.mode.one}
    for op in projectors if projectors is not None else all_projectors(m):
        vec = op.apply(vec, m.space.dims)
        if not vec:
            break
    return vec


# ---------------------------------------------------------------------------
# the identity and commutation harness


def _basis_samples(ranges: Sequence[int], samples: int | None, rng: random.Random) -> list[tuple]:
    full = list(itertools.product(*(range(n) for n in ranges)))
    if samples is None or len(full) <= samples:
        return full
    return rng.sample(full, samples)


def default_sample_count(m: ModelInstance, requested: int | None = None) -> int | None:
    """Full basis when ``dim H · dim A ≤ 64``; otherwise ``requested`` (default 64) samples."""
    if requested is not None:
        return requested
    return None if m.H.dim * m.A.dim <= 64 else 64


def _combine(terms: Iterable[tuple[object, SparseOperator]], m: ModelInstance) -> SparseOperator:
    acc = None
    for c, op in terms:
        if m.mode.negligible(c):
            continue
        term = op.scaled(c)
        acc = term if acc is None else acc + term
    return acc if acc is not None else SparseOperator.scalar(0, m.mode)


def _compare(rep: ValidationReport, clause: str, lhs: SparseOperator, rhs: SparseOperator,
             witness: tuple) -> None:
    rep.check(clause)
    diff = lhs.first_difference(rhs)
    if diff is not None:
        rep.fail(clause, witness, f"differ at support {diff[0]} row {diff[1]} col {diff[2]}")


def _relation_sites(m: ModelInstance):
    """Plaquettes whose first boundary edge runs counter-clockwise out of the base-point
    (for the three mixed relations), and those whose last edge runs clockwise out of it
    (for the commuting clockwise case)."""
    ccw, cw = [], []
    for p in range(m.complex.n_plaquettes):
        word = boundary_word(m.complex, p)
        if word[0][1] == 1:
            ccw.append((p, word[0][0]))
        if word[-1][1] == -1:
            cw.append((p, word[-1][0]))
    return ccw, cw


class _OperatorCache:
    """Local operators of basis elements, built once; other elements by linearity."""

    def __init__(self, m: ModelInstance) -> None:
        self.m = m
        self._ops: dict = {}

    def _basis_op(self, key, build):
        op = self._ops.get(key)
        if op is None:
            op = self._ops[key] = build()
        return op

    def _linear(self, vec: Mapping, key, build) -> SparseOperator:
        return _combine(((c, self._basis_op(key + (i,), lambda i=i: build({i: self.m.mode.one})))
                         for i, c in sorted(vec.items())), self.m)

    def V(self, s: Site, h: Mapping) -> SparseOperator:
        return self._linear(h, ("V", s), lambda x: vertex_operator(self.m, s, x))

    def E(self, e: int, a: Mapping) -> SparseOperator:
        return self._linear(a, ("E", e), lambda x: edge_operator(self.m, e, x))

    def F(self, p: int, phi: Mapping) -> SparseOperator:
        return self._linear(phi, ("F", p), lambda x: plaquette_operator(self.m, p, x))


def check_representation(m: ModelInstance, rep: ValidationReport, samples, rng) -> None:
    H, A, c = m.H, m.A, m.complex
    ops = _OperatorCache(m)
    for s in m.sites():
        for i, j in _basis_samples([H.dim, H.dim], samples, rng):
            lhs = ops.V(s, H.basis(i)) @ ops.V(s, H.basis(j))
            rhs = ops.V(s, H.mul(H.basis(i), H.basis(j)))
            _compare(rep, "V_hom", lhs, rhs, (s.vertex, s.plaquette, i, j))
        _compare(rep, "V_unit", vertex_operator(m, s, H.unit_vec),
                 SparseOperator.identity(mode=m.mode), (s.vertex, s.plaquette))
    for e in range(c.n_edges):
        for i, j in _basis_samples([A.dim, A.dim], samples, rng):
            lhs = ops.E(e, A.basis(i)) @ ops.E(e, A.basis(j))
            rhs = ops.E(e, A.mul(A.basis(i), A.basis(j)))
            _compare(rep, "E_hom", lhs, rhs, (e, i, j))
        _compare(rep, "E_unit", edge_operator(m, e, A.unit_vec),
                 SparseOperator.identity(mode=m.mode), (e,))
    for p in range(c.n_plaquettes):
        for i, j in _basis_samples([H.dim, H.dim], samples, rng):
            phi, psi = {i: m.mode.one}, {j: m.mode.one}
            lhs = ops.F(p, phi) @ ops.F(p, psi)
            rhs = ops.F(p, H.functional_product(phi, psi))
            _compare(rep, "F_hom", lhs, rhs, (p, i, j))
        _compare(rep, "F_unit", plaquette_operator(m, p, H.counit_vec),
                 SparseOperator.identity(mode=m.mode), (p,))


def check_projectors(m: ModelInstance, rep: ValidationReport) -> None:
    projs = all_projectors(m)
    for P in projs:
        _compare(rep, "idempotent", P @ P, P, (P.name,))
    for v in range(m.complex.n_vertices):
        ref = vertex_projector(m, v)
        for p in m.complex.incident_plaquettes(v):
            _compare(rep, "vertex_site_independent", vertex_operator(m, Site(v, p), m.ell), ref, (v, p))
    for P, Q in itertools.combinations(projs, 2):
        rep.check("commute")
        if not set(P.support) & set(Q.support):
            continue
        _compare(rep, "commute", P @ Q, Q @ P, (P.name, Q.name))


def check_mixed_relations(m: ModelInstance, rep: ValidationReport, samples, rng) -> None:
    H, A, X = m.H, m.A, m.xmod
    ccw, cw = _relation_sites(m)
    ops = _OperatorCache(m)
    for p, e in ccw:
        v = m.complex.basepoint(p)
        s = Site(v, p)
        for h, a in _basis_samples([H.dim, A.dim], samples, rng):
            hv, av = H.basis(h), A.basis(a)
            lhs = _combine(((ch, ops.E(e, X.act({h1: 1}, av)) @ ops.V(s, {h2: 1}))
                            for (h1, h2), ch in H.cop(hv).items()), m)
            rhs = ops.V(s, hv) @ ops.E(e, av)
            _compare(rep, "EV", lhs, rhs, (p, e, h, a))
        for a, i in _basis_samples([A.dim, H.dim], samples, rng):
            av, phi = A.basis(a), {i: m.mode.one}
            terms = []
            for (a1, a2, a3), ca in A.cop_n(av, 3).items():
                psi = H.twisted_functional(phi, H.S(X.d({a3: 1})), X.d({a1: 1}))
                terms.append((ca, ops.F(p, psi) @ ops.E(e, {a2: 1})))
            lhs = _combine(terms, m)
            rhs = ops.E(e, av) @ ops.F(p, phi)
            _compare(rep, "EF", lhs, rhs, (p, e, a, i))
        for h, i in _basis_samples([H.dim, H.dim], samples, rng):
            hv, phi = H.basis(h), {i: m.mode.one}
            terms = []
            for (h1, h2, h3), ch in H.cop_n(hv, 3).items():
                psi = H.twisted_functional(phi, m._S_H[h3], {h1: 1})
                terms.append((ch, ops.F(p, psi) @ ops.V(s, {h2: 1})))
            lhs = _combine(terms, m)
            rhs = ops.V(s, hv) @ ops.F(p, phi)
            _compare(rep, "FV", lhs, rhs, (p, h, i))
    for p, e in cw:
        for a, i in _basis_samples([A.dim, H.dim], samples, rng):
            E = ops.E(e, A.basis(a))
            F = ops.F(p, {i: m.mode.one})
            _compare(rep, "EF_clockwise", E @ F, F @ E, (p, e, a, i))
    rep.flags["mixed_sites"] = bool(ccw)
    rep.flags["clockwise_sites"] = bool(cw)


def check_intertwiners(m: ModelInstance, rep: ValidationReport, samples, rng) -> None:
    H, A, c = m.H, m.A, m.complex
    cocomm = [m.lam, H.counit_vec]
    ops = _OperatorCache(m)
    for e in range(c.n_edges):
        R = reversal_operator(m, e)
        _compare(rep, "R_involution", R @ R, SparseOperator.identity(mode=m.mode), (e,))
        mt = m.with_complex(reverse_edge(c, e))
        opt = _OperatorCache(mt)
        for p in range(c.n_plaquettes):
            _compare(rep, "R_T", R @ basepoint_shift_operator(m, p, 1),
                     basepoint_shift_operator(mt, p, 1) @ R, (e, p))
            for (i,) in _basis_samples([H.dim], samples, rng):
                _compare(rep, "R_F", R @ ops.F(p, {i: m.mode.one}),
                         opt.F(p, {i: m.mode.one}) @ R, (e, p, i))
        for s in m.sites():
            for (i,) in _basis_samples([H.dim], samples, rng):
                _compare(rep, "R_V", R @ ops.V(s, H.basis(i)),
                         opt.V(s, H.basis(i)) @ R, (e, s.vertex, s.plaquette, i))
        for f in range(c.n_edges):
            if f == e:
                continue
            for (a,) in _basis_samples([A.dim], samples, rng):
                _compare(rep, "R_E", R @ ops.E(f, A.basis(a)),
                         opt.E(f, A.basis(a)) @ R, (e, f, a))
    for p in range(c.n_plaquettes):
        T = basepoint_shift_operator(m, p, 1)
        ms = m.with_complex(shift_basepoint(c, p, 1))
        opS = _OperatorCache(ms)
        _compare(rep, "T_inverse", basepoint_shift_operator(ms, p, -1) @ T,
                 SparseOperator.identity(mode=m.mode), (p,))
        for s in m.sites():
            for (i,) in _basis_samples([H.dim], samples, rng):
                _compare(rep, "T_V", opS.V(s, H.basis(i)) @ T,
                         T @ ops.V(s, H.basis(i)), (p, s.vertex, s.plaquette, i))
        bp = c.basepoint(p)
        for e in range(c.n_edges):
            if p not in (c.left_plaquette(e), c.right_plaquette(e)):
                continue
            if (p == c.left_plaquette(e) and c.tail(e) == bp) or (
                    p == c.right_plaquette(e) and c.head(e) == bp):
                continue  # excluded configuration
            for (a,) in _basis_samples([A.dim], samples, rng):
                _compare(rep, "T_E", T @ ops.E(e, A.basis(a)),
                         opS.E(e, A.basis(a)) @ T, (p, e, a))
        for q in range(c.n_plaquettes):
            for k, phi in enumerate(cocomm):
                _compare(rep, "T_F", plaquette_operator(ms, q, phi) @ T,
                         T @ plaquette_operator(m, q, phi), (p, q, k))
    ff = fake_flat_projector(m)
    for p in range(c.n_plaquettes):
        _compare(rep, "fake_flat_loop", full_loop_shift(m, p) @ ff, ff, (p,))
        _compare(rep, "fake_flat_shift_commute", basepoint_shift_operator(m, p, 1) @ ff,
                 fake_flat_projector(m.with_complex(shift_basepoint(c, p, 1)))
                 @ basepoint_shift_operator(m, p, 1), (p,))


def check_ground_states(m: ModelInstance, rep: ValidationReport, samples: int | None,
                        rng: random.Random, max_columns: int = 8) -> None:
    """Columns of ``Π`` are fixed by the local operators up to their counits."""
    H, A = m.H, m.A
    projs = all_projectors(m)
    N = m.total_dim
    tries = min(N, 4 * max_columns if samples is None else max(samples, max_columns))
    # the all-zero basis state (trivial labels) always has a nonzero image under Π
    # for the group-type algebras; random columns supplement it
    candidates = [0] + (rng.sample(range(1, N), tries - 1) if N > tries else list(range(1, N)))
    columns = []
    for j in candidates:
        vec = ground_projector_column(m, j, projs)
        if vec:
            columns.append((j, vec))
        if len(columns) >= max_columns:
            break
    rep.flags["ground_columns"] = bool(columns)
    dims = m.space.dims
    ops = _OperatorCache(m)

    def fixed(clause, op, scalar, j, vec, witness):
        rep.check(clause)
        got = op.apply(vec, dims)
        want = {k: scalar * v for k, v in vec.items()} if not m.mode.negligible(scalar) else {}
        want = clean(want, m.mode)
        if set(got) != set(want) or any(not m.mode.eq(got[k], want[k]) for k in got):
            rep.fail(clause, witness + (j,))

    for j, vec in columns:
        for s in m.sites():
            for i in range(H.dim):
                fixed("ground_V", ops.V(s, H.basis(i)), H.counit[i], j, vec,
                      (s.vertex, s.plaquette, i))
        for e in range(m.complex.n_edges):
            for a in range(A.dim):
                fixed("ground_E", ops.E(e, A.basis(a)), A.counit[a], j, vec, (e, a))
        for p in range(m.complex.n_plaquettes):
            for i in range(H.dim):
                # φ ↦ φ(1): the dual basis functional e^i evaluated at the unit
                fixed("ground_F", ops.F(p, {i: m.mode.one}),
                      H.unit_vec.get(i, m.mode.zero), j, vec, (p, i))


def commutation_report(m: ModelInstance, samples: int | None = None, seed: int = 0,
                       sections: Sequence[str] = ("representation", "projectors", "mixed",
                                                  "intertwiners", "ground")) -> ValidationReport:
    """Check the local operator algebra of ``m`` operator-entrywise.

    Sections: ``representation`` (V, E, F are algebra maps), ``projectors``
    (idempotence, pairwise commutation, site independence), ``mixed`` (the three
    exchange relations and the clockwise case), ``intertwiners`` (orientation
    reversal and base-point shifts, the full loop on the fake-flat subspace),
    ``ground`` (sampled columns of the ground projector are invariant).
    Basis elements are exhausted when ``samples`` is ``None``.
    """
    rng = random.Random(seed)
    rep = ValidationReport(f"commutation {m.xmod.name} on {m.complex.name}")
    runners = {
        "representation": lambda r: check_representation(m, r, samples, rng),
        "projectors": lambda r: check_projectors(m, r),
        "mixed": lambda r: check_mixed_relations(m, r, samples, rng),
        "intertwiners": lambda r: check_intertwiners(m, r, samples, rng),
        "ground": lambda r: check_ground_states(m, r, samples, rng),
    }
    for name in sections:
        sub = ValidationReport(name)
        runners[name](sub)
        rep.merge(sub, name + ".")
    return rep
