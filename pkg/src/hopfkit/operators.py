"""Sparse local operators on a tensor-product state space, and streamed traces.

A :class:`SparseOperator` acts on a few tensor factors (its *support*) and as
the identity elsewhere.  Its matrix is stored on the support only, with local
basis index ``Σ_i t_i · stride_i`` over the support factors in ascending order
(first factor most significant).  In rational mode the matrix is an integer
``scipy.sparse`` matrix ``num`` together with a positive integer ``denom``;
the operator is ``num / denom`` exactly.  In float mode ``denom`` is 1.

:func:`projector_product_trace` computes ``Tr(O_1 ⋯ O_r)`` over the full space
column by column without materialising the product.  In rational mode the
integer ``Tr(num_1 ⋯ num_r)`` is computed modulo several primes and
reconstructed by the Chinese remainder theorem, with enough primes to cover
an a-priori bound on its absolute value, so the result is exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .report import NonIntegerTrace
from .scalars import FLOAT_TOL, RATIONAL, ScalarMode

_INT_LIMIT = 2**62
# primes just below 2**31: products of two residues fit in int64
_PRIMES = (2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549,
           2147483543, 2147483497, 2147483489, 2147483477, 2147483423, 2147483399,
           2147483353, 2147483323, 2147483269, 2147483249, 2147483237, 2147483179)


def mixed_radix_strides(dims: Sequence[int]) -> np.ndarray:
    """Strides for a mixed-radix code whose first digit is most significant."""
    strides = np.ones(len(dims), dtype=np.int64)
    for i in range(len(dims) - 2, -1, -1):
        strides[i] = strides[i + 1] * dims[i + 1]
    return strides


def encode(digits: Sequence[int], dims: Sequence[int]) -> int:
    idx = 0
    for d, n in zip(digits, dims):
        idx = idx * n + d
    return idx


def decode(index: int, dims: Sequence[int]) -> tuple[int, ...]:
    out = []
    for n in reversed(dims):
        index, r = divmod(index, n)
        out.append(r)
    return tuple(reversed(out))


def _digits(indices: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    """Digits of many local indices, shape ``(len(indices), len(dims))``."""
    strides = mixed_radix_strides(dims)
    return (indices[:, None] // strides[None, :]) % np.asarray(dims, dtype=np.int64)[None, :]


class SparseOperator:
    """A linear map acting on ``support`` factors (identity elsewhere)."""

    __slots__ = ("support", "dims", "num", "denom", "mode", "name")

    def __init__(self, support: Sequence[int], dims: Sequence[int], num, denom=1,
                 mode: ScalarMode = RATIONAL, name: str = "") -> None:
        self.support = tuple(int(s) for s in support)
        self.dims = tuple(int(d) for d in dims)
        if list(self.support) != sorted(set(self.support)):
            raise ValueError("support must be strictly ascending")
        self.num = sp.csr_matrix(num)
        self.num.eliminate_zeros()
        self.denom = denom
        self.mode = mode
        self.name = name
        if mode.exact:
            self._normalise()

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_columns(cls, factors: Sequence[int], dims: Sequence[int],
                     columns: Mapping[tuple, Mapping[tuple, object]],
                     mode: ScalarMode = RATIONAL, name: str = "") -> "SparseOperator":
        """Build from ``{input digits: {output digits: coefficient}}``.

        ``factors`` gives the factor id of each digit position and may be in
        any order; the result is re-indexed to ascending support.
        """
        order = sorted(range(len(factors)), key=lambda i: factors[i])
        support = [factors[i] for i in order]
        sdims = [dims[i] for i in order]
        if len(set(support)) != len(support):
            raise ValueError("repeated factor in support")
        rows, cols, vals = [], [], []
        for col_digits, out in columns.items():
            c = encode([col_digits[i] for i in order], sdims)
            for row_digits, v in out.items():
                if v == 0:
                    continue
                rows.append(encode([row_digits[i] for i in order], sdims))
                cols.append(c)
                vals.append(v)
        return cls._from_triples(support, sdims, rows, cols, vals, mode, name)

    @classmethod
    def _from_triples(cls, support, dims, rows, cols, vals, mode, name=""):
        n = int(np.prod(dims, dtype=np.int64)) if dims else 1
        if mode.exact:
            fr = [Fraction(v) for v in vals]
            denom = reduce(math.lcm, (f.denominator for f in fr), 1)
            nums = [f.numerator * (denom // f.denominator) for f in fr]
            if any(abs(x) >= _INT_LIMIT for x in nums):
                raise OverflowError("operator entries exceed the int64 range")
            data = np.array(nums, dtype=np.int64)
        else:
            denom = 1
            data = np.array([float(v) for v in vals], dtype=np.float64)
        mat = sp.csr_matrix((data, (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))),
                            shape=(n, n))
        mat.sum_duplicates()
        return cls(support, dims, mat, denom, mode, name)

    @classmethod
    def identity(cls, support: Sequence[int] = (), dims: Sequence[int] = (),
                 mode: ScalarMode = RATIONAL, name: str = "1") -> "SparseOperator":
        n = int(np.prod(dims, dtype=np.int64)) if dims else 1
        dtype = np.int64 if mode.exact else np.float64
        return cls(support, dims, sp.identity(n, dtype=dtype, format="csr"), 1, mode, name)

    @classmethod
    def scalar(cls, value, mode: ScalarMode = RATIONAL) -> "SparseOperator":
        return cls._from_triples((), (), [0], [0], [value], mode, str(value))

    def _normalise(self) -> None:
        if self.num.dtype != np.int64:
            self.num = self.num.astype(np.int64)
        if self.num.nnz == 0:
            self.denom = 1
            return
        g = int(np.gcd.reduce(np.abs(self.num.data)))
        g = math.gcd(g, int(self.denom))
        if g > 1:
            self.num = sp.csr_matrix((self.num.data // g, self.num.indices, self.num.indptr),
                                     shape=self.num.shape)
            self.denom = int(self.denom) // g

    # -- basic properties ------------------------------------------------------

    @property
    def local_dim(self) -> int:
        return self.num.shape[0]

    @property
    def nnz(self) -> int:
        return self.num.nnz

    def entries(self) -> list[tuple[tuple, tuple, object]]:
        """Sorted local coordinate triples ``(row digits, column digits, value)``."""
        coo = self.num.tocoo()
        out = []
        for r, c, v in zip(coo.row, coo.col, coo.data):
            val = Fraction(int(v), int(self.denom)) if self.mode.exact else float(v)
            out.append((decode(int(r), self.dims), decode(int(c), self.dims), val))
        return sorted(out, key=lambda t: (t[1], t[0]))

    def value(self, row: int, col: int):
        v = self.num[row, col]
        return Fraction(int(v), int(self.denom)) if self.mode.exact else float(v)

    def is_diagonal(self) -> bool:
        coo = self.num.tocoo()
        return bool(np.all(coo.row == coo.col))

    def is_zero(self) -> bool:
        if self.mode.exact:
            return self.num.nnz == 0
        return self.num.nnz == 0 or float(np.max(np.abs(self.num.data))) <= FLOAT_TOL

    def dims_of(self, factors: Iterable[int], all_dims: Mapping[int, int]) -> tuple[int, ...]:
        return tuple(all_dims[f] for f in factors)

    # -- embedding and algebra -------------------------------------------------

    def embed(self, support: Sequence[int], dims: Sequence[int]) -> "SparseOperator":
        """The same operator described on a larger support (identity on new factors)."""
        support = tuple(support)
        if support == self.support:
            return self
        pos = [support.index(f) for f in self.support]
        extra = [i for i, f in enumerate(support) if f not in self.support]
        for p, d in zip(pos, self.dims):
            if dims[p] != d:
                raise ValueError("dimension mismatch when embedding")
        new_strides = mixed_radix_strides(dims)
        old_idx = np.arange(self.local_dim, dtype=np.int64)
        off_old = (_digits(old_idx, self.dims) * new_strides[pos][None, :]).sum(axis=1) \
            if self.dims else np.zeros(1, dtype=np.int64)
        extra_dims = [dims[i] for i in extra]
        n_extra = int(np.prod(extra_dims, dtype=np.int64)) if extra_dims else 1
        ex_idx = np.arange(n_extra, dtype=np.int64)
        off_extra = (_digits(ex_idx, extra_dims) * new_strides[extra][None, :]).sum(axis=1) \
            if extra_dims else np.zeros(1, dtype=np.int64)
        coo = self.num.tocoo()
        rows = (off_old[coo.row][:, None] + off_extra[None, :]).ravel()
        cols = (off_old[coo.col][:, None] + off_extra[None, :]).ravel()
        data = np.repeat(coo.data, n_extra)
        n = int(np.prod(dims, dtype=np.int64)) if dims else 1
        mat = sp.csr_matrix((data, (rows, cols)), shape=(n, n))
        out = SparseOperator.__new__(SparseOperator)
        out.support, out.dims, out.num = support, tuple(dims), mat
        out.denom, out.mode, out.name = self.denom, self.mode, self.name
        return out

    def _common(self, other: "SparseOperator"):
        if self.mode != other.mode:
            raise ValueError("scalar modes differ")
        dims = dict(zip(self.support, self.dims))
        for f, d in zip(other.support, other.dims):
            if dims.setdefault(f, d) != d:
                raise ValueError(f"factor {f} has inconsistent dimensions")
        support = tuple(sorted(dims))
        sdims = tuple(dims[f] for f in support)
        return self.embed(support, sdims), other.embed(support, sdims)

    def __matmul__(self, other: "SparseOperator") -> "SparseOperator":
        a, b = self._common(other)
        if self.mode.exact:
            bound = (int(np.max(np.abs(a.num.data), initial=0)) * int(np.max(np.abs(b.num.data), initial=0))
                     * max(1, int(np.max(np.diff(a.num.indptr), initial=0))))
            if bound >= _INT_LIMIT:
                raise OverflowError("integer overflow risk in operator product")
        return SparseOperator(a.support, a.dims, a.num @ b.num, a.denom * b.denom, self.mode,
                              f"{self.name}∘{other.name}")

    def _linear(self, other: "SparseOperator", sign: int) -> "SparseOperator":
        a, b = self._common(other)
        if self.mode.exact:
            L = math.lcm(int(a.denom), int(b.denom))
            num = a.num * (L // int(a.denom)) + b.num * (sign * (L // int(b.denom)))
            return SparseOperator(a.support, a.dims, num, L, self.mode)
        return SparseOperator(a.support, a.dims, a.num + sign * b.num, 1, self.mode)

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        return self._linear(other, 1)

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        return self._linear(other, -1)

    def scaled(self, c) -> "SparseOperator":
        if self.mode.exact:
            c = Fraction(c)
            return SparseOperator(self.support, self.dims, self.num * c.numerator,
                                  int(self.denom) * c.denominator, self.mode, self.name)
        return SparseOperator(self.support, self.dims, self.num * float(c), 1, self.mode, self.name)

    def same_as(self, other: "SparseOperator") -> bool:
        return (self - other).is_zero()

    def commutator(self, other: "SparseOperator") -> "SparseOperator":
        return self @ other - other @ self

    def first_difference(self, other: "SparseOperator"):
        """``(row digits, column digits)`` of one entry where the operators differ, or ``None``."""
        d = self - other
        coo = d.num.tocoo()
        if self.mode.exact:
            mask = coo.data != 0
        else:
            mask = np.abs(coo.data) > FLOAT_TOL
        if not mask.any():
            return None
        i = int(np.argmax(mask))
        return (d.support, decode(int(coo.row[i]), d.dims), decode(int(coo.col[i]), d.dims))

    # -- action on global vectors --------------------------------------------------

    def apply(self, vec: Mapping[int, object], all_dims: Sequence[int]) -> dict[int, object]:
        """Apply to a sparse vector over the full space (``{flat index: coeff}``)."""
        gstr = mixed_radix_strides(all_dims)
        csc = self.num.tocsc()
        lstr = mixed_radix_strides(self.dims) if self.dims else np.zeros(0, dtype=np.int64)
        out: dict[int, object] = {}
        for idx, coeff in vec.items():
            digits = [(idx // int(gstr[f])) % d for f, d in zip(self.support, self.dims)]
            lc = sum(int(t) * int(s) for t, s in zip(digits, lstr))
            base = idx - sum(int(t) * int(gstr[f]) for t, f in zip(digits, self.support))
            for k in range(csc.indptr[lc], csc.indptr[lc + 1]):
                r = int(csc.indices[k])
                rd = decode(r, self.dims)
                j = base + sum(int(t) * int(gstr[f]) for t, f in zip(rd, self.support))
                val = (Fraction(int(csc.data[k]), int(self.denom)) if self.mode.exact
                       else float(csc.data[k]))
                out[j] = out.get(j, 0) + coeff * val
        if self.mode.exact:
            return {k: v for k, v in out.items() if v != 0}
        return {k: v for k, v in out.items() if abs(v) > 1e-15}

    def to_matrix(self, all_dims: Sequence[int]):
        """Embed into the full space as a ``scipy.sparse`` matrix (float or Fraction-free int/denom)."""
        full = self.embed(tuple(range(len(all_dims))), tuple(all_dims))
        if self.mode.exact:
            return full.num.astype(np.float64) / float(full.denom)
        return full.num

    def __repr__(self) -> str:
        return (f"SparseOperator({self.name or '?'}, support={self.support}, nnz={self.nnz}"
                f"{', denom=' + str(self.denom) if self.mode.exact else ''})")


# ---------------------------------------------------------------------------
# streamed trace of a product of local operators


class _Prepared:
    """Per-operator data for streaming: columns of the local matrix, offsets, residues."""

    def __init__(self, op: SparseOperator, all_dims: Sequence[int], primes: Sequence[int]):
        self.op = op
        gstr = mixed_radix_strides(all_dims)
        self.fstr = gstr[list(op.support)] if op.support else np.zeros(0, dtype=np.int64)
        self.fdims = np.asarray(op.dims, dtype=np.int64)
        self.lstr = mixed_radix_strides(op.dims) if op.dims else np.zeros(0, dtype=np.int64)
        n = op.local_dim
        digits = _digits(np.arange(n, dtype=np.int64), op.dims) if op.dims else np.zeros((1, 0), np.int64)
        self.goff = (digits * self.fstr[None, :]).sum(axis=1) if op.dims else np.zeros(1, np.int64)
        csc = op.num.tocsc()
        csc.sort_indices()
        self.indptr = csc.indptr.astype(np.int64)
        self.indices = csc.indices.astype(np.int64)
        self.diagonal = op.is_diagonal()
        if op.mode.exact:
            d = csc.data.astype(object)
            self.data = np.stack([np.array([int(x) % p for x in d], dtype=np.int64)
                                  for p in primes], axis=1) if primes else None
        else:
            self.data = csc.data.astype(np.float64)
        if self.diagonal:
            dense_idx = np.zeros(n, dtype=np.int64)
            has = np.diff(self.indptr) > 0
            dense_idx[has] = self.indptr[:-1][has]
            self.has_diag = has
            self.diag_pos = dense_idx

    def local_index(self, rows: np.ndarray) -> np.ndarray:
        if not len(self.fstr):
            return np.zeros(len(rows), dtype=np.int64)
        dig = (rows[:, None] // self.fstr[None, :]) % self.fdims[None, :]
        return (dig * self.lstr[None, :]).sum(axis=1)


def _one_norm(op: SparseOperator) -> int:
    """Maximal absolute column sum of the integer numerator."""
    col = np.asarray(abs(op.num).sum(axis=0)).ravel()
    return int(col.max(initial=0))


def projector_product_trace(ops: Sequence[SparseOperator], all_dims: Sequence[int],
                            mode: ScalarMode = RATIONAL, block: int = 1 << 16,
                            order: bool = True):
    """``Tr(ops[0] ∘ ops[1] ∘ ⋯)`` on the full space, streamed over column blocks.

    When ``order`` is true the factors are applied in a cost-saving order
    (diagonal operators first); this is only valid if the operators commute,
    which is the case for the projectors this function is meant for.  Returns a
    :class:`fractions.Fraction` in rational mode and a float otherwise.
    """
    N = int(np.prod(all_dims, dtype=object)) if len(all_dims) else 1
    seq = list(reversed(ops))  # rightmost factor acts first
    if mode.exact:
        D = 1
        bound = N
        for op in seq:
            D *= int(op.denom)
            bound *= max(1, _one_norm(op))
        k = 1
        while math.prod(_PRIMES[:k]) <= 2 * bound:
            k += 1
            if k > len(_PRIMES):
                raise OverflowError("trace bound exceeds the available moduli")
        primes = _PRIMES[:k]
    else:
        primes = ()
    prepared = [_Prepared(op, all_dims, primes) for op in seq]
    if order:
        prepared.sort(key=lambda p: (not p.diagonal, p.op.nnz / max(1, p.op.local_dim)))
    P = np.asarray(primes, dtype=np.int64)

    total = [0] * len(primes) if mode.exact else 0.0
    for start in range(0, N, block):
        stop = min(N, start + block)
        cols = np.arange(start, stop, dtype=np.int64)
        rows = cols.copy()
        if mode.exact:
            vals = np.ones((len(cols), len(primes)), dtype=np.int64)
        else:
            vals = np.ones(len(cols), dtype=np.float64)
        for prep in prepared:
            if not len(rows):
                break
            lc = prep.local_index(rows)
            if prep.diagonal:
                keep = prep.has_diag[lc]
                rows, cols, vals, lc = rows[keep], cols[keep], vals[keep], lc[keep]
                d = prep.data[prep.diag_pos[lc]]
                vals = (vals * d) % P if mode.exact else vals * d
            else:
                base = rows - prep.goff[lc]
                starts = prep.indptr[lc]
                counts = prep.indptr[lc + 1] - starts
                rep = np.repeat(np.arange(len(rows)), counts)
                offs = np.arange(len(rep)) - np.repeat(np.cumsum(counts) - counts, counts)
                pos = starts[rep] + offs
                rows = base[rep] + prep.goff[prep.indices[pos]]
                cols = cols[rep]
                vals = (vals[rep] * prep.data[pos]) % P if mode.exact else vals[rep] * prep.data[pos]
                # coalesce duplicates
                keyorder = np.lexsort((rows, cols))
                rows, cols, vals = rows[keyorder], cols[keyorder], vals[keyorder]
                if len(rows):
                    new = np.ones(len(rows), dtype=bool)
                    new[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
                    idx = np.flatnonzero(new)
                    vals = np.add.reduceat(vals, idx, axis=0)
                    if mode.exact:
                        vals %= P
                    rows, cols = rows[idx], cols[idx]
            if mode.exact:
                nz = np.any(vals != 0, axis=1)
            else:
                nz = np.abs(vals) > 1e-15
            rows, cols, vals = rows[nz], cols[nz], vals[nz]
        on_diag = rows == cols
        if mode.exact:
            sums = vals[on_diag].sum(axis=0) if on_diag.any() else np.zeros(len(primes), np.int64)
            # sums of residues < 2**31 over at most 2**32 entries stay within int64
            for i, p in enumerate(primes):
                total[i] = (total[i] + int(sums[i])) % p
        else:
            total += float(vals[on_diag].sum())
    if not mode.exact:
        return total
    # Chinese remainder reconstruction of Tr(∏ num) in the symmetric range
    M = 1
    x = 0
    for r, p in zip(total, primes):
        t = ((r - x) * pow(M, -1, p)) % p
        x += M * t
        M *= p
    if x > M // 2:
        x -= M
    return Fraction(x, D)


def integer_trace(value, mode: ScalarMode, n_max: int) -> int:
    """Check that a trace is an integer in ``[0, n_max]`` and return it."""
    if mode.exact:
        if value.denominator != 1 or not 0 <= value <= n_max:
            raise NonIntegerTrace(f"trace {value} is not an integer in [0, {n_max}]")
        return int(value)
    r = round(value)
    if abs(value - r) > 1e-6 or not 0 <= r <= n_max:
        raise NonIntegerTrace(f"trace {value!r} deviates from an integer by more than 1e-6")
    return int(r)
