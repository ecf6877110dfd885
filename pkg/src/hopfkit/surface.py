"""Closed oriented surfaces as combinatorial maps with base-pointed plaquettes.

Darts (half-edges) are numbered ``2e`` for the end of edge ``e`` at its tail
(pointing along ``e``) and ``2e + 1`` for the end at its head.  The rotation
system lists, for every vertex, its outgoing darts in counter-clockwise order.
A plaquette boundary is a cyclic word of ``(edge, sign)`` pairs traversed
counter-clockwise (the plaquette on the left); ``sign = +1`` when the edge is
traversed along its orientation.  The base-point of a plaquette is the start
vertex of the letter at ``basepoint_pos``.

The face to the left of dart ``h`` continues with ``σ⁻¹(twin(h))``, where ``σ``
is the counter-clockwise rotation; this is the face-tracing rule used to
derive rotations from faces and vice versa.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Mapping, Sequence

from .report import InvalidDescription


@dataclass(frozen=True)
class Plaquette:
    boundary: tuple[tuple[int, int], ...]
    basepoint_pos: int = 0

    def word(self) -> tuple[tuple[int, int], ...]:
        """The boundary read counter-clockwise from the base-point."""
        p = self.basepoint_pos
        return self.boundary[p:] + self.boundary[:p]


@dataclass(frozen=True)
class Site:
    vertex: int
    plaquette: int


def dart_of(edge: int, sign: int) -> int:
    return 2 * edge if sign > 0 else 2 * edge + 1


def twin(dart: int) -> int:
    return dart ^ 1


@dataclass(frozen=True, eq=False)
class CellComplex:
    """A cell decomposition of a closed oriented surface."""

    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    rotation: tuple[tuple[int, ...], ...]
    plaquettes: tuple[Plaquette, ...]
    name: str = "complex"

    # -- sizes ----------------------------------------------------------------

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_plaquettes(self) -> int:
        return len(self.plaquettes)

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_plaquettes

    @property
    def genus(self) -> int:
        return (2 - self.euler_characteristic) // 2

    # -- dart bookkeeping ---------------------------------------------------

    def origin(self, dart: int) -> int:
        e, end = divmod(dart, 2)
        return self.edges[e][end]

    def tail(self, e: int) -> int:
        return self.edges[e][0]

    def head(self, e: int) -> int:
        return self.edges[e][1]

    @cached_property
    def _sigma(self) -> dict[int, int]:
        out = {}
        for darts in self.rotation:
            for i, d in enumerate(darts):
                out[d] = darts[(i + 1) % len(darts)]
        return out

    @cached_property
    def _sigma_inv(self) -> dict[int, int]:
        return {v: k for k, v in self._sigma.items()}

    def sigma(self, dart: int) -> int:
        return self._sigma[dart]

    @cached_property
    def dart_face(self) -> dict[int, tuple[int, int]]:
        """Map dart -> (plaquette id, position in the stored boundary)."""
        out = {}
        for p, plaq in enumerate(self.plaquettes):
            for i, (e, s) in enumerate(plaq.boundary):
                out[dart_of(e, s)] = (p, i)
        return out

    def left_plaquette(self, e: int) -> int:
        return self.dart_face[2 * e][0]

    def right_plaquette(self, e: int) -> int:
        return self.dart_face[2 * e + 1][0]

    def basepoint(self, p: int) -> int:
        plaq = self.plaquettes[p]
        e, s = plaq.boundary[plaq.basepoint_pos]
        return self.origin(dart_of(e, s))

    def plaquettes_based_at(self, v: int) -> list[int]:
        return [p for p in range(self.n_plaquettes) if self.basepoint(p) == v]

    def incident_plaquettes(self, v: int) -> list[int]:
        return sorted({self.dart_face[twin(d)][0] for d in self.rotation[v]})

    def repeat_counts(self, p: int) -> Counter:
        """How often each edge occurs in the boundary of plaquette ``p``."""
        return Counter(e for e, _ in self.plaquettes[p].boundary)

    def vertex_sequence(self, p: int) -> list[int]:
        """Start vertices of the boundary word of ``p`` read from its base-point."""
        return [self.origin(dart_of(e, s)) for e, s in self.plaquettes[p].word()]

    def description(self) -> dict:
        """JSON-ready description accepted by :func:`explicit`."""
        return {
            "vertices": self.n_vertices,
            "edges": [list(e) for e in self.edges],
            "faces": [[list(x) for x in p.boundary] for p in self.plaquettes],
            "basepoints": [p.basepoint_pos for p in self.plaquettes],
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CellComplex):
            return NotImplemented
        return (self.n_vertices == other.n_vertices and self.edges == other.edges
                and self.plaquettes == other.plaquettes
                and {tuple(_canonical_cycle(r)) for r in self.rotation}
                == {tuple(_canonical_cycle(r)) for r in other.rotation})

    def __hash__(self) -> int:
        return hash((self.n_vertices, self.edges, self.plaquettes))

    def __repr__(self) -> str:
        return (f"CellComplex({self.name}: V={self.n_vertices}, E={self.n_edges}, "
                f"F={self.n_plaquettes}, genus={self.genus})")


def _canonical_cycle(seq: Sequence[int]) -> list[int]:
    if not seq:
        return []
    i = seq.index(min(seq))
    return list(seq[i:]) + list(seq[:i])


# ---------------------------------------------------------------------------
# construction and validation


def trace_faces(n_vertices: int, edges: Sequence[tuple[int, int]],
                rotation: Sequence[Sequence[int]]) -> list[list[int]]:
    """Face orbits of ``h ↦ σ⁻¹(twin(h))``, each starting at its smallest dart."""
    sigma_inv = {}
    for darts in rotation:
        for i, d in enumerate(darts):
            sigma_inv[darts[(i + 1) % len(darts)]] = d
    seen: set[int] = set()
    faces = []
    for start in range(2 * len(edges)):
        if start in seen:
            continue
        face = []
        h = start
        while h not in seen:
            seen.add(h)
            face.append(h)
            h = sigma_inv[twin(h)]
        if h != start:
            raise InvalidDescription("face tracing did not close up")
        faces.append(face)
    return faces


def validate_complex(c: CellComplex) -> None:
    """Raise :class:`InvalidDescription` unless every surface invariant holds."""
    V, E = c.n_vertices, c.n_edges
    for e, (t, h) in enumerate(c.edges):
        if not (0 <= t < V and 0 <= h < V):
            raise InvalidDescription(f"edge {e} has an endpoint out of range")
        if t == h:
            raise InvalidDescription(f"edge {e} is a loop")
    if len(c.rotation) != V:
        raise InvalidDescription("rotation must list every vertex")
    all_darts = sorted(d for r in c.rotation for d in r)
    if all_darts != list(range(2 * E)):
        raise InvalidDescription("rotation must contain every dart exactly once")
    for v, darts in enumerate(c.rotation):
        if len(darts) < 2:
            raise InvalidDescription(f"vertex {v} has valence {len(darts)} < 2")
        for d in darts:
            if c.origin(d) != v:
                raise InvalidDescription(f"dart {d} listed at vertex {v} starts elsewhere")
    used = Counter()
    for p, plaq in enumerate(c.plaquettes):
        if not plaq.boundary:
            raise InvalidDescription(f"plaquette {p} has empty boundary")
        if not 0 <= plaq.basepoint_pos < len(plaq.boundary):
            raise InvalidDescription(f"plaquette {p} has base-point position out of range")
        darts = [dart_of(e, s) for e, s in plaq.boundary]
        for a, b in zip(darts, darts[1:] + darts[:1]):
            if c.origin(twin(a)) != c.origin(b):
                raise InvalidDescription(f"boundary of plaquette {p} is not a closed walk")
        used.update(darts)
    if sorted(used) != list(range(2 * E)) or any(v != 1 for v in used.values()):
        raise InvalidDescription("every dart must occur in exactly one plaquette boundary")
    traced = {tuple(_canonical_cycle(f)) for f in trace_faces(V, c.edges, c.rotation)}
    stored = {tuple(_canonical_cycle([dart_of(e, s) for e, s in p.boundary]))
              for p in c.plaquettes}
    if traced != stored:
        raise InvalidDescription("face tracing of the rotation system disagrees with plaquettes")
    # connectivity
    adj: dict[int, set[int]] = {v: set() for v in range(V)}
    for t, h in c.edges:
        adj[t].add(h)
        adj[h].add(t)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v] - seen:
            seen.add(w)
            stack.append(w)
    if len(seen) != V:
        raise InvalidDescription("the surface is not connected")
    chi = c.euler_characteristic
    if chi > 2 or chi % 2:
        raise InvalidDescription(f"Euler characteristic {chi} is not that of a closed oriented surface")


def from_faces(n_vertices: int, edges: Sequence[Sequence[int]],
               faces: Sequence[Sequence[Sequence[int]]],
               basepoints: Sequence[int] | None = None, name: str = "explicit") -> CellComplex:
    """Build a complex from counter-clockwise boundary words; the rotation is derived."""
    edges_t = tuple((int(t), int(h)) for t, h in edges)
    words = [tuple((int(e), 1 if int(s) > 0 else -1) for e, s in f) for f in faces]
    E = len(edges_t)
    for w in words:
        for e, _ in w:
            if not 0 <= e < E:
                raise InvalidDescription(f"face refers to unknown edge {e}")
    sigma: dict[int, int] = {}
    for w in words:
        darts = [dart_of(e, s) for e, s in w]
        for a, b in zip(darts, darts[1:] + darts[:1]):
            # b follows a on this face, hence σ(b) = twin(a)
            if b in sigma:
                raise InvalidDescription(f"dart {b} occurs in two faces")
            sigma[b] = twin(a)
    if sorted(sigma) != list(range(2 * E)):
        raise InvalidDescription("faces do not use every dart exactly once")
    for t, h in edges_t:
        if t == h:
            raise InvalidDescription("loops are not allowed")
    rotation: list[tuple[int, ...]] = []
    for v in range(n_vertices):
        at_v = sorted(d for d in range(2 * E) if edges_t[d // 2][d % 2] == v)
        if not at_v:
            raise InvalidDescription(f"vertex {v} is isolated")
        cycle = [at_v[0]]
        while True:
            nxt = sigma[cycle[-1]]
            if nxt == cycle[0]:
                break
            if edges_t[nxt // 2][nxt % 2] != v:
                raise InvalidDescription(f"faces are not consistent around vertex {v}")
            cycle.append(nxt)
        if len(cycle) != len(at_v):
            raise InvalidDescription(f"link of vertex {v} is not a single circle")
        rotation.append(tuple(cycle))
    if basepoints is None:
        basepoints = [0] * len(words)
    plaqs = tuple(Plaquette(w, int(b)) for w, b in zip(words, basepoints))
    c = CellComplex(n_vertices, edges_t, tuple(rotation), plaqs, name)
    validate_complex(c)
    return c


def from_rotation(n_vertices: int, edges: Sequence[Sequence[int]],
                  rotation: Sequence[Sequence[int]], name: str = "explicit") -> CellComplex:
    """Build a complex from a rotation system; plaquettes are traced (base-point at position 0)."""
    edges_t = tuple((int(t), int(h)) for t, h in edges)
    rot = tuple(tuple(int(d) for d in r) for r in rotation)
    faces = trace_faces(n_vertices, edges_t, rot)
    plaqs = tuple(Plaquette(tuple((d // 2, 1 if d % 2 == 0 else -1) for d in f), 0) for f in faces)
    c = CellComplex(n_vertices, edges_t, rot, plaqs, name)
    validate_complex(c)
    return c


def sphere_theta() -> CellComplex:
    """Two vertices joined by three parallel edges ``0 -> 1``; three bigons."""
    faces = [[(0, 1), (1, -1)], [(1, 1), (2, -1)], [(2, 1), (0, -1)]]
    return from_faces(2, [(0, 1)] * 3, faces, name="sphere_theta")


def sphere_tetrahedron() -> CellComplex:
    """Boundary of a tetrahedron; edge ``i -> j`` for ``i < j``, ordered lexicographically."""
    pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    eid = {p: i for i, p in enumerate(pairs)}
    triangles = [(0, 2, 1), (0, 1, 3), (0, 3, 2), (1, 2, 3)]
    faces = []
    for tri in triangles:
        word = []
        for a, b in zip(tri, tri[1:] + tri[:1]):
            word.append((eid[(min(a, b), max(a, b))], 1 if a < b else -1))
        faces.append(word)
    return from_faces(4, pairs, faces, name="sphere_tetrahedron")


def torus_grid(m: int, n: int) -> CellComplex:
    """``m × n`` square grid on the torus.

    Vertex ``(i, j)`` has id ``i + m j``; horizontal edge ``(i, j)–(i+1, j)`` has id
    ``i + m j`` and vertical edge ``(i, j)–(i, j+1)`` has id ``m n + i + m j``;
    every edge points from its lower to its higher vertex id.  Plaquette
    ``i + m j`` is the square with lower-left corner ``(i, j)``, which is also
    its base-point.
    """
    if m < 2 or n < 2:
        raise InvalidDescription("torus_grid needs m, n >= 2")

    def vid(i: int, j: int) -> int:
        return (i % m) + m * (j % n)

    edges = []
    for j in range(n):
        for i in range(m):
            a, b = vid(i, j), vid(i + 1, j)
            edges.append((min(a, b), max(a, b)))
    for j in range(n):
        for i in range(m):
            a, b = vid(i, j), vid(i, j + 1)
            edges.append((min(a, b), max(a, b)))

    def step(e: int, start: int) -> tuple[int, int]:
        return (e, 1 if edges[e][0] == start else -1)

    faces = []
    for j in range(n):
        for i in range(m):
            h_bottom = vid(i, j)
            h_top = vid(i, j + 1)
            v_left = m * n + vid(i, j)
            v_right = m * n + vid(i + 1, j)
            faces.append([step(h_bottom, vid(i, j)), step(v_right, vid(i + 1, j)),
                          step(h_top, vid(i + 1, j + 1)), step(v_left, vid(i, j + 1))])
    return from_faces(m * n, edges, faces, name=f"torus_grid({m},{n})")


def explicit(description: Mapping) -> CellComplex:
    """Complex from a JSON-style description.

    Keys: ``vertices`` (count), ``edges`` (list of ``[tail, head]``) and either
    ``faces`` (list of counter-clockwise words of ``[edge, sign]``, optional
    ``basepoints``) or ``rotation`` (per vertex, counter-clockwise darts).
    """
    try:
        V = int(description["vertices"])
        edges = [tuple(e) for e in description["edges"]]
        if "faces" in description:
            return from_faces(V, edges, description["faces"], description.get("basepoints"),
                              name=description.get("name", "explicit"))
        if "rotation" in description:
            return from_rotation(V, edges, description["rotation"],
                                 name=description.get("name", "explicit"))
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InvalidDescription(f"malformed surface description: {exc}") from exc
    raise InvalidDescription("surface description needs 'faces' or 'rotation'")


def build_standard_complex(kind: str, **params) -> CellComplex:
    """Dispatch on ``sphere_theta``, ``sphere_tetrahedron``, ``torus_grid`` or ``explicit``."""
    if kind == "sphere_theta":
        return sphere_theta()
    if kind == "sphere_tetrahedron":
        return sphere_tetrahedron()
    if kind == "torus_grid":
        return torus_grid(int(params.get("m", 2)), int(params.get("n", 2)))
    if kind == "explicit":
        return explicit(params.get("description", params))
    raise InvalidDescription(f"unknown surface kind {kind!r}")


# ---------------------------------------------------------------------------
# queries


def boundary_word(c: CellComplex, p: int) -> list[tuple[int, int]]:
    """``(edge, θ)`` counter-clockwise from the base-point; θ=+1 iff the edge runs counter-clockwise."""
    return list(c.plaquettes[p].word())


def _corner_position(c: CellComplex, s: Site) -> int:
    """Position in the base-pointed word of ``s.plaquette`` whose start vertex is ``s.vertex``."""
    verts = c.vertex_sequence(s.plaquette)
    if s.vertex not in verts:
        raise ValueError(f"plaquette {s.plaquette} is not incident to vertex {s.vertex}")
    return verts.index(s.vertex)


def star_order(c: CellComplex, s: Site) -> list[tuple[int, int]]:
    """Edges at ``s.vertex`` counter-clockwise, starting right after ``s.plaquette``.

    θ=+1 iff the edge points away from the vertex.
    """
    pos = _corner_position(c, s)
    e, sign = c.plaquettes[s.plaquette].word()[pos]
    out_dart = dart_of(e, sign)  # leaves the vertex along the plaquette boundary
    darts = []
    d = c.sigma(out_dart)
    while True:
        darts.append(d)
        if d == out_dart:
            break
        d = c.sigma(d)
    return [(d // 2, 1 if d % 2 == 0 else -1) for d in darts]


def connecting_path(c: CellComplex, e: int, side: str) -> list[tuple[int, int]]:
    """Path from the base-point of a plaquette next to ``e`` to the tail of ``e``.

    ``side='left'``: counter-clockwise around the left plaquette, signs θ
    (+1 iff the edge runs counter-clockwise).  ``side='right'``: clockwise
    around the right plaquette, signs σ (+1 iff the edge runs clockwise).
    The path never contains ``e`` itself and is empty when the base-point is
    the tail of ``e``.
    """
    if side == "left":
        p = c.left_plaquette(e)
        word = c.plaquettes[p].word()
        k = word.index((e, 1))
        return list(word[:k])
    if side == "right":
        p = c.right_plaquette(e)
        word = c.plaquettes[p].word()
        k = word.index((e, -1))
        return [(f, -s) for f, s in reversed(word[k + 1:])]
    raise ValueError("side must be 'left' or 'right'")


def reverse_edge(c: CellComplex, e: int) -> CellComplex:
    """Flip the orientation of edge ``e``; base-point vertices are unchanged."""
    edges = list(c.edges)
    t, h = edges[e]
    edges[e] = (h, t)
    swap = {2 * e: 2 * e + 1, 2 * e + 1: 2 * e}
    rotation = tuple(tuple(swap.get(d, d) for d in r) for r in c.rotation)
    plaqs = tuple(Plaquette(tuple((f, -s if f == e else s) for f, s in p.boundary),
                            p.basepoint_pos) for p in c.plaquettes)
    return CellComplex(c.n_vertices, tuple(edges), rotation, plaqs, c.name)


def shift_basepoint(c: CellComplex, p: int, direction: int = 1) -> CellComplex:
    """Move the base-point of ``p`` one step counter-clockwise (+1) or clockwise (-1)."""
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    plaqs = list(c.plaquettes)
    old = plaqs[p]
    plaqs[p] = Plaquette(old.boundary, (old.basepoint_pos + direction) % len(old.boundary))
    return replace(c, plaquettes=tuple(plaqs))


def dual_complex(c: CellComplex) -> CellComplex:
    """The dual decomposition.

    Dual vertex ``p`` sits in plaquette ``p``; dual edge ``e`` crosses ``e`` and
    runs from its right plaquette to its left plaquette; dual plaquettes are
    traced from the rotation (one per original vertex, base-point at position 0).
    Applying the construction twice gives back ``c`` with every edge reversed.
    """
    edges = [(c.right_plaquette(e), c.left_plaquette(e)) for e in range(c.n_edges)]
    rotation = []
    for p in range(c.n_plaquettes):
        # the dual dart crossing boundary dart h points out of p and is the twin of h
        rotation.append(tuple(twin(dart_of(e, s)) for e, s in c.plaquettes[p].boundary))
    return from_rotation(c.n_plaquettes, edges, rotation, name=f"dual({c.name})")


def find_isomorphism(c1: CellComplex, c2: CellComplex) -> dict[int, int] | None:
    """An orientation-preserving map isomorphism as a dart bijection, or ``None``.

    Edge orientations and labels are ignored: the bijection commutes with the
    rotation and with the twin involution.
    """
    if (c1.n_vertices, c1.n_edges, c1.n_plaquettes) != (c2.n_vertices, c2.n_edges,
                                                         c2.n_plaquettes):
        return None
    D = 2 * c1.n_edges
    for target in range(D):
        phi = {0: target}
        stack = [0]
        ok = True
        while stack and ok:
            d = stack.pop()
            for nxt1, nxt2 in ((c1.sigma(d), c2.sigma(phi[d])), (twin(d), twin(phi[d]))):
                if nxt1 in phi:
                    if phi[nxt1] != nxt2:
                        ok = False
                        break
                else:
                    phi[nxt1] = nxt2
                    stack.append(nxt1)
        if ok and len(phi) == D and len(set(phi.values())) == D:
            return phi
    return None
