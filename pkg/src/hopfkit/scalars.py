"""Scalar modes and sparse-vector helpers.

Two scalar modes are supported.  ``rational`` stores every coefficient exactly:
integral values as plain ``int`` (much faster) and all others as reduced
:class:`fractions.Fraction`; ``float`` stores binary floats and
compares with an absolute tolerance of :data:`FLOAT_TOL` per entry.

Sparse vectors are plain ``dict`` objects mapping a basis index (or a tuple
of indices, for tensors) to a nonzero coefficient.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Union

FLOAT_TOL = 1e-9
_DROP = 1e-14

Scalar = Union[int, Fraction, float]
Vec = dict


class ScalarMode:
    """Arithmetic conventions for one scalar mode."""

    __slots__ = ("exact",)

    def __init__(self, exact: bool = True) -> None:
        self.exact = exact

    @property
    def name(self) -> str:
        return "rational" if self.exact else "float"

    def __call__(self, x) -> Scalar:
        if self.exact:
            if isinstance(x, int):
                return x
            f = Fraction(x).limit_denominator(10**12) if isinstance(x, float) else Fraction(x)
            return f.numerator if f.denominator == 1 else f
        return float(x)

    @property
    def zero(self) -> Scalar:
        return 0 if self.exact else 0.0

    @property
    def one(self) -> Scalar:
        return 1 if self.exact else 1.0

    def is_zero(self, x: Scalar) -> bool:
        return x == 0 if self.exact else abs(x) <= FLOAT_TOL

    def eq(self, a: Scalar, b: Scalar) -> bool:
        return a == b if self.exact else abs(a - b) <= FLOAT_TOL

    def negligible(self, x: Scalar) -> bool:
        return x == 0 if self.exact else abs(x) <= _DROP

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ScalarMode) and other.exact == self.exact

    def __hash__(self) -> int:
        return hash(self.exact)

    def __repr__(self) -> str:
        return f"ScalarMode({self.name})"


RATIONAL = ScalarMode(True)
FLOAT = ScalarMode(False)


def mode_from_name(name: str) -> ScalarMode:
    if name == "rational":
        return RATIONAL
    if name == "float":
        return FLOAT
    raise ValueError(f"unknown scalar mode {name!r}")


def add_into(acc: dict, vec: Mapping, coeff: Scalar = 1) -> dict:
    """``acc += coeff * vec`` in place (zero entries are kept until :func:`clean`)."""
    for k, v in vec.items():
        acc[k] = acc.get(k, 0) + coeff * v
    return acc


def clean(vec: dict, mode: ScalarMode) -> dict:
    return {k: v for k, v in vec.items() if not mode.negligible(v)}


def scale(vec: Mapping, c: Scalar) -> dict:
    return {k: c * v for k, v in vec.items()}


def vec_equal(a: Mapping, b: Mapping, mode: ScalarMode) -> bool:
    for k in set(a) | set(b):
        if not mode.eq(a.get(k, 0), b.get(k, 0)):
            return False
    return True


def first_difference(a: Mapping, b: Mapping, mode: ScalarMode) -> Hashable | None:
    for k in sorted(set(a) | set(b), key=repr):
        if not mode.eq(a.get(k, 0), b.get(k, 0)):
            return k
    return None


def outer(vectors: Iterable[Mapping]) -> dict:
    """Tensor product of sparse vectors keyed by tuples of indices."""
    out: dict = {(): 1}
    for v in vectors:
        nxt: dict = {}
        for key, c in out.items():
            for i, d in v.items():
                nk = key + (i,)
                nxt[nk] = nxt.get(nk, 0) + c * d
        out = nxt
    return out


def dense(vec: Mapping[int, Scalar], dim: int, mode: ScalarMode) -> list:
    return [vec.get(i, mode.zero) for i in range(dim)]


def sparse(values: Iterable, mode: ScalarMode) -> dict:
    """Convert a dense coefficient sequence (or a mapping) to a sparse vector."""
    if isinstance(values, Mapping):
        items = values.items()
    else:
        items = enumerate(values)
    return {int(i): mode(v) for i, v in items if not mode.negligible(mode(v))}
