"""Exact rational linear feasibility via phase-one simplex.

Decides whether a system of weak inequalities c . x >= r has a rational
solution, and returns one when it does.  Strict homogeneous inequalities are
handled by callers through scaling: c . x > 0 is feasible together with a
homogeneous system iff c . x >= 1 is.

Rows are cleared to integers and the tableau is pivoted fraction-free in the
style of integer Gaussian elimination: every stored entry is det times the
true rational entry, where det is the most recent pivot, and the two-term
update divides exactly by the previous pivot.  Bland's rule guarantees
termination.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm


def feasible(rows, rhs) -> tuple[Fraction, ...] | None:
    """A rational x with row . x >= r for every (row, r) pair, or None.

    rows: sequence of coefficient vectors, all of one length n (n may be 0).
    rhs: sequence of right-hand sides, one per row.
    """
    rows = [tuple(Fraction(x) for x in row) for row in rows]
    rhs = [Fraction(r) for r in rhs]
    if len(rows) != len(rhs):
        raise ValueError("one right-hand side per row required")
    m = len(rows)
    n = len(rows[0]) if m else 0
    if any(len(r) != n for r in rows):
        raise ValueError("ragged coefficient rows")
    if m == 0:
        return (Fraction(0),) * n
    if n == 0:
        return () if all(r <= 0 for r in rhs) else None

    # Standard form: split x = xp - xn, subtract slack, flip rows to b >= 0,
    # then start from the all-artificial basis.  Columns: xp (n), xn (n),
    # slack (m), right-hand side (1).  Each row is scaled to integers first;
    # row scaling changes neither the solution set nor feasibility.
    ncols = 2 * n + m
    tab = []
    for i in range(m):
        mult = lcm(*(x.denominator for x in rows[i]), rhs[i].denominator)
        irow = [int(x * mult) for x in rows[i]]
        row = irow + [-x for x in irow] + [0] * (m + 1)
        row[2 * n + i] = -1
        row[ncols] = int(rhs[i] * mult)
        if row[ncols] < 0:
            row = [-x for x in row]
        tab.append(row)
    basis = [ncols + i for i in range(m)]
    det = 1

    # Phase one minimizes the sum of the artificial variables.  The reduced
    # cost of column j is minus the sum of tableau column j over rows whose
    # basic variable is still artificial (artificials never re-enter, so
    # their own columns are never scanned), and the objective is the matching
    # sum of right-hand sides; both are recomputed per pivot.
    while True:
        art = [trow for b, trow in zip(basis, tab) if b >= ncols]
        enter = next((j for j in range(ncols)
                      if sum(trow[j] for trow in art) > 0), None)
        if enter is None:
            if sum(trow[ncols] for trow in art) != 0:
                return None
            break
        pivot_row = None
        for i in range(m):
            if tab[i][enter] <= 0:
                continue
            # b[i]/a[i] against the incumbent by cross-multiplication; both
            # stored denominators are positive, so the comparison is exact
            if pivot_row is not None:
                diff = (tab[i][ncols] * tab[pivot_row][enter]
                        - tab[pivot_row][ncols] * tab[i][enter])
                if diff > 0 or (diff == 0 and basis[i] > basis[pivot_row]):
                    continue
            pivot_row = i
        if pivot_row is None:
            # phase-one objective is bounded below by 0, so this cannot occur
            raise AssertionError("unbounded phase-one objective")
        pv = tab[pivot_row][enter]
        prow = tab[pivot_row]
        for i in range(m):
            if i == pivot_row:
                continue
            trow = tab[i]
            f = trow[enter]
            if f:
                tab[i] = [(pv * x - f * y) // det for x, y in zip(trow, prow)]
            elif pv != det:
                tab[i] = [pv * x // det for x in trow]
        basis[pivot_row] = enter
        det = pv

    x = [Fraction(0)] * (2 * n)
    for i, j in enumerate(basis):
        if j < 2 * n:
            x[j] = Fraction(tab[i][ncols], det)
    return tuple(p - q for p, q in zip(x[:n], x[n:]))
