"""Small exact linear solver over :class:`fractions.Fraction` (with a float path).

Used for the defining linear system of the Haar integral, where the systems
have at most a few dozen unknowns.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .scalars import FLOAT_TOL, ScalarMode


def nullspace_and_particular(rows: Sequence[dict[int, Fraction]], rhs: Sequence,
                             n: int, mode: ScalarMode):
    """Solve ``A x = b`` for sparse rows ``A``.

    Returns ``(x0, basis)`` where ``x0`` is one solution (or ``None`` if the
    system is inconsistent) and ``basis`` spans the homogeneous solutions.
    """
    if not mode.exact:
        return _float_solve(rows, rhs, n)
    pivots: dict[int, tuple[dict[int, Fraction], Fraction]] = {}
    for row, b in zip(rows, rhs):
        r = {k: Fraction(v) for k, v in row.items() if v != 0}
        b = Fraction(b)
        # pivot rows are kept fully reduced, so each reduction step removes one pivot column
        while True:
            hit = [c for c in r if c in pivots]
            if not hit:
                break
            col = hit[0]
            prow, pb = pivots[col]
            f = r[col]
            for k, v in prow.items():
                nv = r.get(k, 0) - f * v
                if nv == 0:
                    r.pop(k, None)
                else:
                    r[k] = nv
            b -= f * pb
        if not r:
            if b != 0:
                return None, []
            continue
        col = min(r)
        f = r[col]
        r = {k: v / f for k, v in r.items()}
        b = b / f
        # eliminate the new pivot from existing pivot rows
        for pcol, (prow, pb) in list(pivots.items()):
            if col in prow:
                g = prow[col]
                for k, v in r.items():
                    nv = prow.get(k, 0) - g * v
                    if nv == 0:
                        prow.pop(k, None)
                    else:
                        prow[k] = nv
                pivots[pcol] = (prow, pb - g * b)
        pivots[col] = (r, b)
    free = [c for c in range(n) if c not in pivots]
    x0 = [Fraction(0)] * n
    for col, (prow, pb) in pivots.items():
        x0[col] = pb
    basis = []
    for fcol in free:
        v = [Fraction(0)] * n
        v[fcol] = Fraction(1)
        for col, (prow, pb) in pivots.items():
            v[col] = -prow.get(fcol, 0)
        basis.append(v)
    return x0, basis


def _float_solve(rows, rhs, n):
    A = np.zeros((len(rows), n))
    for i, row in enumerate(rows):
        for k, v in row.items():
            A[i, k] = float(v)
    b = np.array([float(x) for x in rhs])
    x0, *_ = np.linalg.lstsq(A, b, rcond=None)
    if np.max(np.abs(A @ x0 - b), initial=0.0) > FLOAT_TOL:
        return None, []
    _, s, vt = np.linalg.svd(A)
    rank = int(np.sum(s > FLOAT_TOL))
    basis = [list(v) for v in vt[rank:]]
    return list(x0), basis
