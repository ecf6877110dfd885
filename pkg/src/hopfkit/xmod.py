"""Crossed modules of Hopf algebras and the four-group construction.

A crossed module ``(A --∂--> H, ▷)`` is stored by its two algebras, the
boundary (a linear map given on basis elements) and an :class:`ActionTensor`.
:func:`build_gexy` produces the crossed module

    Fun(X) ⊗ ℂE  --∂-->  Fun(Y) ⋊ ℂG

from finite groups ``E, G, X, Y``, a group crossed module ``E -> G``, actions
of ``G`` on ``X`` and ``Y`` by automorphisms and a ``G``-equivariant
homomorphism ``f: Y -> X``.  Bases are left-factor major: ``δ_x ⊗ e`` has
index ``x * |E| + e`` and ``δ_y ⊗ g`` has index ``y * |G| + g``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

from .fingroup import (FiniteGroup, GroupAction, GroupCrossedModule, GroupHom, identity_hom,
                       trivial_action, trivial_group, trivial_hom, validate_action,
                       validate_group_crossed_module)
from .hopf import (ActionTensor, HopfAlgebra, check_module_algebra, dual_haar_integral,
                   function_algebra, group_action_tensor, group_algebra, haar_integral,
                   smash_product, tensor_hopf, trivial_hopf)
from .report import (ImageActsNontrivially, InvalidAction, NotEquivariant, ValidationReport)
from .scalars import RATIONAL, ScalarMode, Vec, add_into, clean, scale, vec_equal


@dataclass(frozen=True, eq=False)
class HopfCrossedModule:
    """``(A --∂--> H, ▷)``; ``boundary`` entries ``(h, a, c)`` mean ``∂(e_a) ∋ c e_h``."""

    A: HopfAlgebra
    H: HopfAlgebra
    boundary: tuple
    action: ActionTensor
    name: str = "xmod"
    data: object = field(default=None, compare=False)

    @classmethod
    def from_maps(cls, A: HopfAlgebra, H: HopfAlgebra, boundary: Mapping[tuple[int, int], object],
                  action: ActionTensor, name: str = "xmod", data=None) -> "HopfCrossedModule":
        mode = H.mode
        b = tuple(sorted((h, a, mode(c)) for (h, a), c in boundary.items()
                         if not mode.negligible(mode(c))))
        return cls(A, H, b, action, name, data)

    @property
    def mode(self) -> ScalarMode:
        return self.H.mode

    @cached_property
    def _bd(self) -> dict:
        out: dict = {}
        for h, a, c in self.boundary:
            out.setdefault(a, []).append((h, c))
        return out

    def d(self, a: Mapping) -> Vec:
        """Apply the boundary map to an element of ``A``."""
        out: dict = {}
        for i, x in a.items():
            for h, c in self._bd.get(i, ()):
                out[h] = out.get(h, 0) + x * c
        return clean(out, self.mode)

    def d_basis(self, a: int) -> list:
        return self._bd.get(a, [])

    def act(self, h: Mapping, a: Mapping) -> Vec:
        return self.action(h, a)

    @cached_property
    def haar_A(self) -> Vec:
        return haar_integral(self.A)

    @cached_property
    def haar_H(self) -> Vec:
        return haar_integral(self.H)

    @cached_property
    def haar_Hdual(self) -> Vec:
        return dual_haar_integral(self.H)

    def with_action(self, action: ActionTensor) -> "HopfCrossedModule":
        return HopfCrossedModule(self.A, self.H, self.boundary, action, self.name, self.data)

    def __repr__(self) -> str:
        return f"HopfCrossedModule({self.name}: {self.A.name} -> {self.H.name})"


PRE_CROSSED_CLAUSES = (
    "boundary_algebra_map", "boundary_coalgebra_map", "boundary_antipode",
    "module_unit", "module_assoc", "module_algebra", "module_algebra_unit",
    "module_coalgebra", "module_coalgebra_counit", "yetter_drinfeld", "peiffer1",
)


def verify_hopf_crossed_module(x: HopfCrossedModule, haar: bool = True) -> ValidationReport:
    """Check every crossed-module axiom on all basis pairs / triples.

    The flag ``pre_crossed`` records whether every axiom except the second
    Peiffer identity holds.
    """
    A, H, mode = x.A, x.H, x.mode
    rep = ValidationReport(f"crossed module {x.name}")
    for name in ("boundary_algebra_map", "boundary_coalgebra_map", "boundary_antipode"):
        rep.check(name)
    dA = [x.d(A.basis(a)) for a in range(A.dim)]
    if not H.eq(x.d(A.unit_vec), H.unit_vec):
        rep.fail("boundary_algebra_map", ())
    for a in range(A.dim):
        for b in range(A.dim):
            if not H.eq(x.d(A.mul(A.basis(a), A.basis(b))), H.mul(dA[a], dA[b])):
                rep.fail("boundary_algebra_map", (a, b))
        lhs = H.cop(dA[a])
        rhs: dict = {}
        for (a1, a2), c in A.cop_basis(a):
            for i, u in dA[a1].items():
                for j, v in dA[a2].items():
                    rhs[(i, j)] = rhs.get((i, j), 0) + c * u * v
        if not vec_equal(lhs, rhs, mode) or not mode.eq(H.eps(dA[a]), A.counit[a]):
            rep.fail("boundary_coalgebra_map", (a,))
        if not H.eq(H.S(dA[a]), x.d(A.S(A.basis(a)))):
            rep.fail("boundary_antipode", (a,))

    rep.merge(check_module_algebra(x.action))

    rep.check("peiffer1")
    rep.check("antipode_linear")
    for h in range(H.dim):
        eh = H.basis(h)
        dh = H.cop(eh)
        for a in range(A.dim):
            ea = A.basis(a)
            lhs = x.d(x.act(eh, ea))
            rhs: dict = {}
            for (h1, h2), c in dh.items():
                add_into(rhs, H.mul(H.mul(H.basis(h1), dA[a]), H.S(H.basis(h2))), c)
            if not H.eq(lhs, clean(rhs, mode)):
                rep.fail("peiffer1", (h, a))
            if not A.eq(A.S(x.act(eh, ea)), x.act(eh, A.S(ea))):
                rep.fail("antipode_linear", (h, a))
    rep.check("peiffer2")
    for a in range(A.dim):
        da = A.cop(A.basis(a))
        for b in range(A.dim):
            eb = A.basis(b)
            lhs = x.act(dA[a], eb)
            rhs = {}
            for (a1, a2), c in da.items():
                add_into(rhs, A.mul(A.mul(A.basis(a1), eb), A.S(A.basis(a2))), c)
            if not A.eq(lhs, clean(rhs, mode)):
                rep.fail("peiffer2", (a, b))
    if haar:
        rep.check("haar_invariance")
        Lam = x.haar_A
        for h in range(H.dim):
            if not A.eq(x.act(H.basis(h), Lam), scale(Lam, H.counit[h])):
                rep.fail("haar_invariance", (h,))
    failed = rep.failed_axioms()
    rep.flags["pre_crossed"] = not (failed & set(PRE_CROSSED_CLAUSES))
    return rep


def smash_with_boundary_action(x: HopfCrossedModule) -> tuple[HopfAlgebra, ActionTensor]:
    """The smash product ``A ⋊ H`` formed from the crossed-module action."""
    return smash_product(x.H, x.A, x.action), x.action


def trivial_crossed_module(H: HopfAlgebra) -> HopfCrossedModule:
    """``ℂ -> H`` with ``h ▷ 1 = ε(h) 1``."""
    A = trivial_hopf(H.mode)
    act = ActionTensor.from_map(H, A, {(h, 0, 0): H.counit[h] for h in range(H.dim)})
    return HopfCrossedModule.from_maps(A, H, {(i, 0): c for i, c in H.unit_vec.items()}, act,
                                       name=f"C->{H.name}")


# ---------------------------------------------------------------------------
# the four-group construction


@dataclass(frozen=True, eq=False)
class GexyData:
    """Input of :func:`build_gexy`: ``E -> G`` with ``G`` acting on ``X``, ``Y`` and ``f: Y -> X``."""

    gcm: GroupCrossedModule
    act_x: GroupAction
    act_y: GroupAction
    f: GroupHom

    @property
    def E(self) -> FiniteGroup:
        return self.gcm.E

    @property
    def G(self) -> FiniteGroup:
        return self.gcm.G

    @property
    def X(self) -> FiniteGroup:
        return self.f.target

    @property
    def Y(self) -> FiniteGroup:
        return self.f.source

    @property
    def is_goxo(self) -> bool:
        """``E`` and ``Y`` trivial: the group-on-set (GoXo) family."""
        return self.E.order == 1 and self.Y.order == 1

    @property
    def is_ooxy(self) -> bool:
        """``E`` and ``G`` trivial: the (ooXY) family."""
        return self.E.order == 1 and self.G.order == 1


def make_gexy(E: FiniteGroup | None = None, G: FiniteGroup | None = None,
              X: FiniteGroup | None = None, Y: FiniteGroup | None = None, *,
              boundary: GroupHom | None = None, g_on_e: GroupAction | None = None,
              g_on_x: GroupAction | None = None, g_on_y: GroupAction | None = None,
              f: GroupHom | None = None) -> GexyData:
    """Assemble :class:`GexyData`, defaulting to trivial groups, actions and maps."""
    E = E or trivial_group()
    G = G or trivial_group()
    X = X or trivial_group()
    Y = Y or trivial_group()
    boundary = boundary or trivial_hom(E, G)
    g_on_e = g_on_e or trivial_action(G, E)
    g_on_x = g_on_x or trivial_action(G, X)
    g_on_y = g_on_y or trivial_action(G, Y)
    f = f or trivial_hom(Y, X)
    return GexyData(GroupCrossedModule(boundary, g_on_e), g_on_x, g_on_y, f)


def check_gexy(d: GexyData) -> ValidationReport:
    """Validate all hypotheses of the construction; violations are report entries."""
    rep = ValidationReport("GEXY data")
    rep.merge(validate_group_crossed_module(d.gcm), "gcm.")
    for label, act, target in (("act_x.", d.act_x, d.X), ("act_y.", d.act_y, d.Y)):
        if act.group != d.G or act.degree != target.order:
            rep.fail(label + "shapes", (), "action does not act by G on the right group")
            continue
        rep.merge(validate_action(GroupAction(d.G, act.perms, target)), label)
    rep.merge(d.f.validate(), "f.")
    if not rep.ok:
        return rep
    rep.check("equivariant")
    for g in d.G.elements():
        for y in d.Y.elements():
            if d.f(d.act_y(g, y)) != d.act_x(g, d.f(y)):
                rep.fail("equivariant", (g, y))
    rep.check("image_trivial")
    image = sorted(set(d.gcm.boundary.map))
    for label, act in (("X", d.act_x), ("Y", d.act_y)):
        bad = act.restricted_trivial_on(image)
        if bad is not None:
            rep.fail("image_trivial", (bad,), f"image of the boundary acts nontrivially on {label}")
    return rep


def build_gexy(d: GexyData, mode: ScalarMode = RATIONAL) -> HopfCrossedModule:
    """The crossed module ``Fun(X) ⊗ ℂE -> Fun(Y) ⋊ ℂG`` of the four-group data."""
    rep = check_gexy(d)
    if not rep.ok:
        first = rep.failures[0]
        if first.axiom == "equivariant":
            raise NotEquivariant(f"f(g▷y) ≠ g▷f(y) at (g, y) = {first.witness}")
        if first.axiom == "image_trivial":
            raise ImageActsNontrivially(f"element {first.witness[0]}: {first.detail}")
        raise InvalidAction(str(rep))
    E, G, X, Y = d.E, d.G, d.X, d.Y
    funX, CE = function_algebra(X, mode), group_algebra(E, mode)
    funY, CG = function_algebra(Y, mode), group_algebra(G, mode)
    A = tensor_hopf(funX, CE)
    H = smash_product(CG, funY, group_action_tensor(CG, funY, d.act_y, "functions"))
    nE, nG = E.order, G.order

    boundary: dict = {}
    for x in X.elements():
        for e in E.elements():
            for y in Y.elements():
                if d.f(y) == x:
                    boundary[(y * nG + d.gcm.boundary(e), x * nE + e)] = 1
    entries: dict = {}
    for g in G.elements():
        # δ_y ⊗ g acts through φ(1) = [y = 1]
        for x in X.elements():
            for e in E.elements():
                entries[(0 * nG + g, x * nE + e, d.act_x(g, x) * nE + d.gcm.action(g, e))] = 1
    action = ActionTensor.from_map(H, A, entries)
    name = f"GEXY({E.name},{G.name},{X.name},{Y.name})"
    return HopfCrossedModule.from_maps(A, H, boundary, action, name=name, data=d)


# convenience constructors for the named special cases


def goxo(G: FiniteGroup, X: FiniteGroup, act: GroupAction | None = None,
         mode: ScalarMode = RATIONAL) -> HopfCrossedModule:
    """``Fun(X) -> ℂG`` with trivial boundary (E = Y = 1)."""
    return build_gexy(make_gexy(G=G, X=X, g_on_x=act), mode)


def ooxy(Y: FiniteGroup, X: FiniteGroup, f: GroupHom | None = None,
         mode: ScalarMode = RATIONAL) -> HopfCrossedModule:
    """``Fun(X) --f*--> Fun(Y)`` with trivial action (E = G = 1)."""
    return build_gexy(make_gexy(X=X, Y=Y, f=f), mode)


def kitaev(G: FiniteGroup, mode: ScalarMode = RATIONAL) -> HopfCrossedModule:
    """The quantum-double case ``ℂ -> ℂG`` (X = E = Y = 1)."""
    return goxo(G, trivial_group(), None, mode)


def group_xmod(gcm: GroupCrossedModule, mode: ScalarMode = RATIONAL) -> HopfCrossedModule:
    """``ℂE -> ℂG`` from a crossed module of groups (X = Y = 1)."""
    d = GexyData(gcm, trivial_action(gcm.G, trivial_group()),
                 trivial_action(gcm.G, trivial_group()),
                 identity_hom(trivial_group()))
    return build_gexy(d, mode)
