"""Finite-dimensional Hopf algebras given by structure constants.

A :class:`HopfAlgebra` stores

* ``mult``: coordinate entries ``(i, j, k, c)`` meaning ``e_i e_j ∋ c e_k``;
* ``comult``: entries ``(i, j, k, c)`` meaning ``Δ(e_i) ∋ c e_j ⊗ e_k``;
* ``unit`` (vector), ``counit`` (covector) and ``antipode`` entries
  ``(i, j, c)`` meaning ``S(e_j) ∋ c e_i``.

Elements and functionals are sparse ``dict`` vectors (see :mod:`.scalars`).
Composite algebras always use a left-factor-major basis: the basis element
``e_a ⊗ f_b`` of ``A ⊗ B`` has index ``a * dim(B) + b``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .fingroup import FiniteGroup, GroupAction
from .linsolve import nullspace_and_particular
from .report import NotModuleAlgebra, NotSemisimple, ValidationReport, YetterDrinfeldFails
from .scalars import RATIONAL, ScalarMode, Vec, add_into, clean, first_difference, scale, vec_equal


def _canon3(entries: Mapping[tuple[int, int, int], object], mode: ScalarMode):
    return tuple(sorted((i, j, k, mode(c)) for (i, j, k), c in entries.items()
                        if not mode.negligible(mode(c))))


@dataclass(frozen=True, eq=False)
class HopfAlgebra:
    """A Hopf algebra by structure constants in a fixed basis."""

    dim: int
    mult: tuple
    unit: tuple
    comult: tuple
    counit: tuple
    antipode: tuple
    labels: tuple[str, ...]
    mode: ScalarMode = RATIONAL
    name: str = "H"

    # -- construction -------------------------------------------------------

    @classmethod
    def from_maps(cls, dim: int, mult: Mapping, unit: Mapping | Sequence,
                  comult: Mapping, counit: Mapping | Sequence, antipode: Mapping,
                  labels: Sequence[str] | None = None, mode: ScalarMode = RATIONAL,
                  name: str = "H") -> "HopfAlgebra":
        """Build from dicts ``{(i,j,k): c}`` (mult, comult) and ``{(i,j): c}`` (antipode)."""
        def vec(v):
            items = v.items() if isinstance(v, Mapping) else enumerate(v)
            out = [mode.zero] * dim
            for i, c in items:
                out[i] = mode(c)
            return tuple(out)

        ant = tuple(sorted((i, j, mode(c)) for (i, j), c in antipode.items()
                           if not mode.negligible(mode(c))))
        return cls(dim, _canon3(mult, mode), vec(unit), _canon3(comult, mode), vec(counit),
                   ant, tuple(labels) if labels else tuple(f"e{i}" for i in range(dim)),
                   mode, name)

    # -- fast lookup tables -------------------------------------------------

    @cached_property
    def _mul(self) -> dict:
        out: dict = {}
        for i, j, k, c in self.mult:
            out.setdefault((i, j), []).append((k, c))
        return out

    @cached_property
    def _com(self) -> dict:
        out: dict = {}
        for i, j, k, c in self.comult:
            out.setdefault(i, []).append(((j, k), c))
        return out

    @cached_property
    def _ant(self) -> dict:
        out: dict = {}
        for i, j, c in self.antipode:
            out.setdefault(j, []).append((i, c))
        return out

    @cached_property
    def unit_vec(self) -> Vec:
        return {i: c for i, c in enumerate(self.unit) if not self.mode.negligible(c)}

    @cached_property
    def counit_vec(self) -> Vec:
        return {i: c for i, c in enumerate(self.counit) if not self.mode.negligible(c)}

    # -- basic operations on sparse vectors ---------------------------------

    def basis(self, i: int) -> Vec:
        return {i: self.mode.one}

    def vector(self, coeffs) -> Vec:
        """Sparse vector from a dense coefficient sequence or mapping."""
        items = coeffs.items() if isinstance(coeffs, Mapping) else enumerate(coeffs)
        return clean({int(i): self.mode(c) for i, c in items}, self.mode)

    def mul_basis(self, i: int, j: int) -> list:
        return self._mul.get((i, j), [])

    def mul(self, x: Mapping, y: Mapping) -> Vec:
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self._mul.get((i, j), ()):
                    out[k] = out.get(k, 0) + a * b * c
        return clean(out, self.mode)

    def mul_many(self, factors: Iterable[Mapping]) -> Vec:
        acc = self.unit_vec
        for f in factors:
            acc = self.mul(acc, f)
        return acc

    def cop_basis(self, i: int) -> list:
        return self._com.get(i, [])

    def cop(self, x: Mapping) -> dict:
        out: dict = {}
        for i, a in x.items():
            for jk, c in self._com.get(i, ()):
                out[jk] = out.get(jk, 0) + a * c
        return clean(out, self.mode)

    def cop_n(self, x: Mapping, n: int) -> dict:
        """Iterated coproduct into ``n`` legs, contracting left to right.

        ``cop_n(x, 1) = {(i,): c}``; ``cop_n(x, 3) = (Δ ⊗ id) Δ x``.
        """
        out = {(i,): c for i, c in x.items()}
        for _ in range(n - 1):
            nxt: dict = {}
            for key, a in out.items():
                for (j, k), c in self._com.get(key[0], ()):
                    nk = (j, k) + key[1:]
                    nxt[nk] = nxt.get(nk, 0) + a * c
            out = clean(nxt, self.mode)
        return out

    def S(self, x: Mapping) -> Vec:
        out: dict = {}
        for j, a in x.items():
            for i, c in self._ant.get(j, ()):
                out[i] = out.get(i, 0) + a * c
        return clean(out, self.mode)

    def S_basis(self, j: int) -> list:
        return self._ant.get(j, [])

    def eps(self, x: Mapping):
        return sum((a * self.counit[i] for i, a in x.items()), self.mode.zero)

    def pair(self, phi: Mapping, x: Mapping):
        """Evaluate the functional ``phi`` (coefficients on the dual basis) at ``x``."""
        return sum((phi.get(i, 0) * a for i, a in x.items()), self.mode.zero)

    def eq(self, x: Mapping, y: Mapping) -> bool:
        return vec_equal(x, y, self.mode)

    # -- functionals --------------------------------------------------------

    def functional_product(self, phi: Mapping, psi: Mapping) -> Vec:
        """Product in ``H*``: ``(φψ)(x) = φ(x₍₁₎) ψ(x₍₂₎)``."""
        out: dict = {}
        for i in range(self.dim):
            s = self.mode.zero
            for (j, k), c in self._com.get(i, ()):
                s += c * phi.get(j, 0) * psi.get(k, 0)
            if not self.mode.negligible(s):
                out[i] = s
        return out

    def twisted_functional(self, phi: Mapping, left: Mapping, right: Mapping) -> Vec:
        """The functional ``x ↦ φ(left · x · right)``."""
        out: dict = {}
        for i in range(self.dim):
            val = self.pair(phi, self.mul(self.mul(left, self.basis(i)), right))
            if not self.mode.negligible(val):
                out[i] = val
        return out

    def is_cocommutative_element(self, x: Mapping) -> bool:
        d = self.cop(x)
        return vec_equal(d, {(k, j): c for (j, k), c in d.items()}, self.mode)

    @cached_property
    def is_commutative(self) -> bool:
        return all(vec_equal(dict(self._mul.get((i, j), [])), dict(self._mul.get((j, i), [])),
                             self.mode)
                   for i in range(self.dim) for j in range(i + 1, self.dim))

    @cached_property
    def is_cocommutative(self) -> bool:
        return all(self.is_cocommutative_element(self.basis(i)) for i in range(self.dim))

    def with_mode(self, mode: ScalarMode) -> "HopfAlgebra":
        if mode == self.mode:
            return self
        return HopfAlgebra(
            self.dim,
            tuple((i, j, k, mode(c)) for i, j, k, c in self.mult),
            tuple(mode(c) for c in self.unit),
            tuple((i, j, k, mode(c)) for i, j, k, c in self.comult),
            tuple(mode(c) for c in self.counit),
            tuple((i, j, mode(c)) for i, j, c in self.antipode),
            self.labels, mode, self.name)

    def __repr__(self) -> str:
        return f"HopfAlgebra({self.name}, dim={self.dim}, {self.mode.name})"


def same_structure(a: HopfAlgebra, b: HopfAlgebra) -> bool:
    """Coefficientwise equality of all structure tensors (labels ignored)."""
    if a.dim != b.dim:
        return False
    mode = a.mode
    def d3(t):
        return {(i, j, k): c for i, j, k, c in t}
    def d2(t):
        return {(i, j): c for i, j, c in t}
    return (vec_equal(d3(a.mult), d3(b.mult), mode)
            and vec_equal(d3(a.comult), d3(b.comult), mode)
            and vec_equal(dict(enumerate(a.unit)), dict(enumerate(b.unit)), mode)
            and vec_equal(dict(enumerate(a.counit)), dict(enumerate(b.counit)), mode)
            and vec_equal(d2(a.antipode), d2(b.antipode), mode))


# ---------------------------------------------------------------------------
# constructors


def group_algebra(G: FiniteGroup, mode: ScalarMode = RATIONAL) -> HopfAlgebra:
    """``ℂG``: group-like basis, ``Δg = g⊗g``, ``ε(g) = 1``, ``S(g) = g⁻¹``."""
    n = G.order
    mult = {(g, h, G.mul(g, h)): 1 for g in range(n) for h in range(n)}
    comult = {(g, g, g): 1 for g in range(n)}
    antipode = {(G.inv(g), g): 1 for g in range(n)}
    labels = [str(lab) for lab in G.labels]
    return HopfAlgebra.from_maps(n, mult, {0: 1}, comult, [1] * n, antipode, labels,
                                 mode, f"C[{G.name}]")


def function_algebra(G: FiniteGroup, mode: ScalarMode = RATIONAL) -> HopfAlgebra:
    """``Fun(G)`` in the delta basis: pointwise product, ``Δδ_g = Σ_{xy=g} δ_x⊗δ_y``."""
    n = G.order
    mult = {(g, g, g): 1 for g in range(n)}
    comult = {(G.mul(x, y), x, y): 1 for x in range(n) for y in range(n)}
    antipode = {(G.inv(g), g): 1 for g in range(n)}
    labels = [f"d{lab}" for lab in G.labels]
    return HopfAlgebra.from_maps(n, mult, [1] * n, comult, {0: 1}, antipode, labels,
                                 mode, f"Fun({G.name})")


def trivial_hopf(mode: ScalarMode = RATIONAL) -> HopfAlgebra:
    """The ground field as a one-dimensional Hopf algebra."""
    return HopfAlgebra.from_maps(1, {(0, 0, 0): 1}, [1], {(0, 0, 0): 1}, [1], {(0, 0): 1},
                                 ["1"], mode, "C")


def dual_hopf(H: HopfAlgebra) -> HopfAlgebra:
    """``H*`` in the dual basis: every structure tensor transposed."""
    mult = {(j, k, i): c for i, j, k, c in H.comult}
    comult = {(k, i, j): c for i, j, k, c in H.mult}
    antipode = {(j, i): c for i, j, c in H.antipode}
    labels = [lab[1:] if lab.startswith("*") else "*" + lab for lab in H.labels]
    name = H.name[:-1] if H.name.endswith("*") else H.name + "*"
    return HopfAlgebra.from_maps(H.dim, mult, H.counit, comult, H.unit, antipode, labels,
                                 H.mode, name)


def tensor_hopf(A: HopfAlgebra, B: HopfAlgebra) -> HopfAlgebra:
    """``A ⊗ B`` with componentwise structure; basis index ``a * dim(B) + b``."""
    if A.mode != B.mode:
        raise ValueError("tensor factors must share a scalar mode")
    nb = B.dim
    mult: dict = {}
    for i1, j1, k1, c1 in A.mult:
        for i2, j2, k2, c2 in B.mult:
            key = (i1 * nb + i2, j1 * nb + j2, k1 * nb + k2)
            mult[key] = mult.get(key, 0) + c1 * c2
    comult: dict = {}
    for i1, j1, k1, c1 in A.comult:
        for i2, j2, k2, c2 in B.comult:
            key = (i1 * nb + i2, j1 * nb + j2, k1 * nb + k2)
            comult[key] = comult.get(key, 0) + c1 * c2
    antipode = {(i1 * nb + i2, j1 * nb + j2): c1 * c2
                for i1, j1, c1 in A.antipode for i2, j2, c2 in B.antipode}
    unit = [a * b for a in A.unit for b in B.unit]
    counit = [a * b for a in A.counit for b in B.counit]
    labels = [f"{x}({y})" if B.dim > 1 else x for x in A.labels for y in B.labels]
    if A.dim == 1:
        labels = list(B.labels)
    return HopfAlgebra.from_maps(A.dim * nb, mult, unit, comult, counit, antipode, labels,
                                 A.mode, f"{A.name}⊗{B.name}")


# ---------------------------------------------------------------------------
# actions of one Hopf algebra on another


@dataclass(frozen=True, eq=False)
class ActionTensor:
    """A bilinear map ``▷: H ⊗ A → A`` with entries ``(h, a, k, c)``: ``e_h ▷ e_a ∋ c e_k``."""

    H: HopfAlgebra
    A: HopfAlgebra
    entries: tuple

    @classmethod
    def from_map(cls, H: HopfAlgebra, A: HopfAlgebra, entries: Mapping) -> "ActionTensor":
        return cls(H, A, _canon3(entries, H.mode))

    @cached_property
    def _table(self) -> dict:
        out: dict = {}
        for h, a, k, c in self.entries:
            out.setdefault((h, a), []).append((k, c))
        return out

    def act_basis(self, h: int, a: int) -> list:
        return self._table.get((h, a), [])

    def __call__(self, h: Mapping, a: Mapping) -> Vec:
        out: dict = {}
        for i, x in h.items():
            for j, y in a.items():
                for k, c in self._table.get((i, j), ()):
                    out[k] = out.get(k, 0) + x * y * c
        return clean(out, self.A.mode)


def group_action_tensor(H: HopfAlgebra, A: HopfAlgebra, action: GroupAction,
                        kind: str) -> ActionTensor:
    """Action of ``ℂG`` induced by a permutation action of ``G``.

    ``kind='points'``: ``g ▷ e_x = e_{g▷x}`` (e.g. on ``ℂE``);
    ``kind='functions'``: ``(g ▷ ξ)(x) = ξ(g⁻¹ ▷ x)``, i.e. ``g ▷ δ_x = δ_{g▷x}``.
    Both give the same formula in the respective bases.
    """
    if kind not in ("points", "functions"):
        raise ValueError(kind)
    G = action.group
    entries = {(g, x, action(g, x)): 1 for g in range(G.order) for x in range(action.degree)}
    return ActionTensor.from_map(H, A, entries)


def check_module_algebra(act: ActionTensor) -> ValidationReport:
    """Module, module-algebra and module-coalgebra axioms, plus Yetter–Drinfeld."""
    H, A = act.H, act.A
    mode = H.mode
    rep = ValidationReport("module (co)algebra")
    for name in ("module_unit", "module_assoc", "module_algebra", "module_algebra_unit",
                 "module_coalgebra", "module_coalgebra_counit", "yetter_drinfeld"):
        rep.check(name)
    for a in range(A.dim):
        ea = A.basis(a)
        if not A.eq(act(H.unit_vec, ea), ea):
            rep.fail("module_unit", (a,))
    for h in range(H.dim):
        eh = H.basis(h)
        dh = H.cop(eh)
        if not A.eq(act(eh, A.unit_vec), scale(A.unit_vec, H.counit[h])):
            rep.fail("module_algebra_unit", (h,))
        for a in range(A.dim):
            ea = A.basis(a)
            hea = act(eh, ea)
            # coalgebra compatibility: Δ(h▷a) = (h1▷a1)⊗(h2▷a2)
            lhs = A.cop(hea)
            rhs: dict = {}
            for (h1, h2), c in dh.items():
                for (a1, a2), d in A.cop(ea).items():
                    x = act(H.basis(h1), A.basis(a1))
                    y = act(H.basis(h2), A.basis(a2))
                    for i, u in x.items():
                        for j, v in y.items():
                            rhs[(i, j)] = rhs.get((i, j), 0) + c * d * u * v
            if not vec_equal(lhs, rhs, mode):
                rep.fail("module_coalgebra", (h, a))
            if not mode.eq(A.eps(hea), H.counit[h] * A.counit[a]):
                rep.fail("module_coalgebra_counit", (h, a))
            # Yetter–Drinfeld: h1 ⊗ (h2▷a) = h2 ⊗ (h1▷a)
            l: dict = {}
            r: dict = {}
            for (h1, h2), c in dh.items():
                for k, u in act(H.basis(h2), ea).items():
                    l[(h1, k)] = l.get((h1, k), 0) + c * u
                for k, u in act(H.basis(h1), ea).items():
                    r[(h2, k)] = r.get((h2, k), 0) + c * u
            if not vec_equal(l, r, mode):
                rep.fail("yetter_drinfeld", (h, a))
            for b in range(A.dim):
                eb = A.basis(b)
                lhs = act(eh, A.mul(ea, eb))
                rhs = {}
                for (h1, h2), c in dh.items():
                    add_into(rhs, A.mul(act(H.basis(h1), ea), act(H.basis(h2), eb)), c)
                if not A.eq(lhs, clean(rhs, mode)):
                    rep.fail("module_algebra", (h, a, b))
            for k in range(H.dim):
                ek = H.basis(k)
                if not A.eq(act(eh, act(ek, ea)), act(H.mul(eh, ek), ea)):
                    rep.fail("module_assoc", (h, k, a))
    return rep


def smash_product(H: HopfAlgebra, A: HopfAlgebra, act: ActionTensor) -> HopfAlgebra:
    """``A ⋊ H`` on ``A ⊗ H`` (index ``a * dim(H) + h``).

    Multiplication ``(a⊗h)(b⊗k) = a(h₍₁₎▷b) ⊗ h₍₂₎k``, tensor-product coalgebra,
    antipode ``S(a⊗h) = (1⊗Sh)(Sa⊗1)``.
    """
    rep = check_module_algebra(act)
    module_axioms = {"module_unit", "module_assoc", "module_algebra", "module_algebra_unit",
                     "module_coalgebra", "module_coalgebra_counit"}
    bad = [f for f in rep.failures if f.axiom in module_axioms]
    if bad:
        raise NotModuleAlgebra(f"{bad[0].axiom} fails at basis indices {bad[0].witness}")
    if not H.is_cocommutative:
        yd = [f for f in rep.failures if f.axiom == "yetter_drinfeld"]
        if yd:
            raise YetterDrinfeldFails(f"at basis indices {yd[0].witness}")
    nh = H.dim
    mode = H.mode

    def idx(a: int, h: int) -> int:
        return a * nh + h

    mult: dict = {}
    for a in range(A.dim):
        for h in range(nh):
            dh = H.cop_basis(h)
            for b in range(A.dim):
                for k in range(nh):
                    for (h1, h2), c in dh:
                        left = A.mul(A.basis(a), act(H.basis(h1), A.basis(b)))
                        right = H.mul_basis(h2, k)
                        for i, u in left.items():
                            for j, v in right:
                                key = (idx(a, h), idx(b, k), idx(i, j))
                                mult[key] = mult.get(key, 0) + c * u * v
    comult: dict = {}
    for a in range(A.dim):
        for h in range(nh):
            for (a1, a2), c in A.cop_basis(a):
                for (h1, h2), d in H.cop_basis(h):
                    key = (idx(a, h), idx(a1, h1), idx(a2, h2))
                    comult[key] = comult.get(key, 0) + c * d
    antipode: dict = {}
    for a in range(A.dim):
        Sa = A.S(A.basis(a))
        for h in range(nh):
            Sh = H.S(H.basis(h))
            for (s1, s2), c in H.cop(Sh).items():
                for i, u in act(H.basis(s1), Sa).items():
                    key = (idx(i, s2), idx(a, h))
                    antipode[key] = antipode.get(key, 0) + c * u
    unit = {idx(a, h): u * v for a, u in A.unit_vec.items() for h, v in H.unit_vec.items()}
    counit = [A.counit[a] * H.counit[h] for a in range(A.dim) for h in range(nh)]
    labels = [f"{x}({y})" if nh > 1 else x for x in A.labels for y in H.labels]
    if A.dim == 1:
        labels = list(H.labels)
    return HopfAlgebra.from_maps(A.dim * nh, mult, unit, comult, counit, antipode, labels,
                                 mode, f"{A.name}⋊{H.name}")


# ---------------------------------------------------------------------------
# axioms


def verify_hopf_axioms(H: HopfAlgebra) -> ValidationReport:
    """Check every Hopf-algebra axiom on all basis elements (pairs, triples)."""
    rep = ValidationReport(f"Hopf axioms of {H.name}")
    mode = H.mode
    n = H.dim
    B = [H.basis(i) for i in range(n)]
    one = H.unit_vec
    for name in ("unit", "associativity", "counit", "coassociativity", "comult_multiplicative",
                 "comult_unital", "counit_multiplicative", "antipode", "antipode_involutive"):
        rep.check(name)

    for i in range(n):
        if not (H.eq(H.mul(one, B[i]), B[i]) and H.eq(H.mul(B[i], one), B[i])):
            rep.fail("unit", (i,))
    prods = {(i, j): H.mul(B[i], B[j]) for i in range(n) for j in range(n)}
    for i, j, k in itertools.product(range(n), repeat=3):
        lhs = H.mul(prods[i, j], B[k])
        rhs = H.mul(B[i], prods[j, k])
        if not H.eq(lhs, rhs):
            rep.fail("associativity", (i, j, k))
            break

    cops = [H.cop(B[i]) for i in range(n)]
    for i in range(n):
        left: dict = {}
        right: dict = {}
        for (j, k), c in cops[i].items():
            add_into(left, B[k], c * H.counit[j])
            add_into(right, B[j], c * H.counit[k])
        if not (H.eq(clean(left, mode), B[i]) and H.eq(clean(right, mode), B[i])):
            rep.fail("counit", (i,))
        # (Δ⊗id)Δ == (id⊗Δ)Δ
        l3: dict = {}
        r3: dict = {}
        for (j, k), c in cops[i].items():
            for (j1, j2), d in cops[j].items():
                l3[(j1, j2, k)] = l3.get((j1, j2, k), 0) + c * d
            for (k1, k2), d in cops[k].items():
                r3[(j, k1, k2)] = r3.get((j, k1, k2), 0) + c * d
        if not vec_equal(l3, r3, mode):
            rep.fail("coassociativity", (i,))

    def tensor_mul(x: dict, y: dict) -> dict:
        out: dict = {}
        for (a1, a2), c in x.items():
            for (b1, b2), d in y.items():
                for k1, u in H.mul_basis(a1, b1):
                    for k2, v in H.mul_basis(a2, b2):
                        out[(k1, k2)] = out.get((k1, k2), 0) + c * d * u * v
        return clean(out, mode)

    for i in range(n):
        for j in range(n):
            if not vec_equal(H.cop(prods[i, j]), tensor_mul(cops[i], cops[j]), mode):
                rep.fail("comult_multiplicative", (i, j))
            if not mode.eq(H.eps(prods[i, j]), H.counit[i] * H.counit[j]):
                rep.fail("counit_multiplicative", (i, j))
    one_one = {(a, b): u * v for a, u in one.items() for b, v in one.items()}
    if not vec_equal(H.cop(one), one_one, mode):
        rep.fail("comult_unital", ())
    if not mode.eq(H.eps(one), 1):
        rep.fail("counit_multiplicative", ())

    for i in range(n):
        left = {}
        right = {}
        for (j, k), c in cops[i].items():
            add_into(left, H.mul(H.S(B[j]), B[k]), c)
            add_into(right, H.mul(B[j], H.S(B[k])), c)
        target = scale(one, H.counit[i])
        if not (H.eq(clean(left, mode), target) and H.eq(clean(right, mode), target)):
            rep.fail("antipode", (i,))
        if not H.eq(H.S(H.S(B[i])), B[i]):
            rep.fail("antipode_involutive", (i,))

    rep.flags["commutative"] = H.is_commutative
    rep.flags["cocommutative"] = H.is_cocommutative
    return rep


# ---------------------------------------------------------------------------
# Haar integrals

_HAAR_CACHE_ATTR = "_haar_cache"


def _solve_integral(H: HopfAlgebra) -> Vec:
    """Solve ``x ℓ = ε(x) ℓ = ℓ x`` for all basis ``x`` together with ``ε(ℓ) = 1``."""
    n = H.dim
    rows: list[dict] = []
    rhs: list = []
    for i in range(n):
        for side in (0, 1):
            eqs: dict[int, dict] = {}
            for k in range(n):
                pairs = H.mul_basis(i, k) if side == 0 else H.mul_basis(k, i)
                for m, c in pairs:
                    eqs.setdefault(m, {})
                    eqs[m][k] = eqs[m].get(k, 0) + c
                if H.counit[i] != 0:
                    eqs.setdefault(k, {})
                    eqs[k][k] = eqs[k].get(k, 0) - H.counit[i]
            for m, row in eqs.items():
                row = {k: v for k, v in row.items() if not H.mode.negligible(v)}
                if row:
                    rows.append(row)
                    rhs.append(0)
    rows.append({k: H.counit[k] for k in range(n) if H.counit[k] != 0})
    rhs.append(1)
    x0, kernel = nullspace_and_particular(rows, rhs, n, H.mode)
    if x0 is None:
        raise NotSemisimple(f"{H.name}: every two-sided integral has counit zero")
    if kernel:
        raise NotSemisimple(f"{H.name}: space of normalised integrals is not a point")
    return H.vector(x0)


def regular_character_integral(H: HopfAlgebra) -> Vec:
    """``(1/dim H) · χ`` where ``χ`` is the character of the left regular module of ``H*``.

    Viewed as an element of ``H`` via ``H ≅ H**``: ``χ(e^j) = Tr(e^j · -)`` on ``H*``.
    """
    D = dual_hopf(H)
    out: dict = {}
    for j in range(H.dim):
        tr = H.mode.zero
        for i in range(H.dim):
            for k, c in D.mul_basis(j, i):
                if k == i:
                    tr += c
        if not H.mode.negligible(tr):
            out[j] = H.mode(Fraction(tr) / H.dim) if H.mode.exact else tr / H.dim
    return out


def haar_integral(H: HopfAlgebra) -> Vec:
    """The idempotent two-sided integral ``ℓ`` of a semisimple ``H``.

    Computed from the defining linear system and cross-checked against the
    normalised regular character of ``H*``; also asserts ``ℓ² = ℓ``,
    ``S(ℓ) = ℓ`` and cocommutativity of ``ℓ``.  Raises :class:`NotSemisimple`.
    """
    cache = H.__dict__.setdefault(_HAAR_CACHE_ATTR, {})
    if "haar" in cache:
        return dict(cache["haar"])
    ell = _solve_integral(H)
    if not H.eq(H.mul(ell, ell), ell):
        raise NotSemisimple(f"{H.name}: the normalised integral is not idempotent")
    chi = regular_character_integral(H)
    diff = first_difference(ell, chi, H.mode)
    if diff is not None:
        raise NotSemisimple(f"{H.name}: integral disagrees with the regular character at {diff}")
    if not H.eq(H.S(ell), ell):
        raise NotSemisimple(f"{H.name}: S(ℓ) ≠ ℓ")
    if not H.is_cocommutative_element(ell):
        raise NotSemisimple(f"{H.name}: ℓ is not cocommutative")
    cache["haar"] = ell
    return dict(ell)


def dual_haar_integral(H: HopfAlgebra) -> Vec:
    """``λ ∈ H*``: the Haar integral of the dual, as coefficients on the dual basis."""
    cache = H.__dict__.setdefault(_HAAR_CACHE_ATTR, {})
    if "dual" not in cache:
        cache["dual"] = haar_integral(dual_hopf(H))
    return dict(cache["dual"])
