"""Tiny exact-rational simplex: max c.x subject to A.x <= b, x >= 0.

All constraint systems used here have b >= 0, so the origin is feasible and
no phase-1 is needed.  Bland's rule guarantees termination.  The problems
are a handful of variables; speed is irrelevant, exactness is not.
"""

from __future__ import annotations

from fractions import Fraction


def simplex_max(c, A, b):
    """Return the exact optimum of max c.x st A.x <= b, x >= 0 (b >= 0).

    Raises ValueError on unbounded problems (callers always add box
    constraints, so this signals a bug).
    """
    m = len(A)
    n = len(c)
    if any(bi < 0 for bi in b):
        raise ValueError("simplex_max requires b >= 0")
    # Tableau with slack basis: rows 0..m-1 constraints, last row objective.
    T = [[Fraction(A[i][j]) for j in range(n)]
         + [Fraction(1) if k == i else Fraction(0) for k in range(m)]
         + [Fraction(b[i])] for i in range(m)]
    obj = [-Fraction(cj) for cj in c] + [Fraction(0)] * m + [Fraction(0)]
    basis = [n + i for i in range(m)]
    total = n + m
    while True:
        enter = next((j for j in range(total) if obj[j] < 0), None)
        if enter is None:
            return obj[-1]
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][-1] / T[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            raise ValueError("unbounded linear program")
        _, piv = best
        pv = T[piv][enter]
        T[piv] = [x / pv for x in T[piv]]
        for i in range(m):
            if i != piv and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[piv])]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [x - f * y for x, y in zip(obj, T[piv])]
        basis[piv] = enter
