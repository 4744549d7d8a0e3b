"""Independent oracles shared by the test modules.

These deliberately avoid the library's own code paths (dense exact Gaussian
elimination and brute-force vertex enumeration) so they can cross-check the
production implementations.
"""

import itertools
from fractions import Fraction


def dense_solve(aug, n):
    """Solve an n x n system given as rows of n+1 entries, or None."""
    rows = [r[:] for r in aug]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if rows[r][col] != 0:
                piv = r
                break
        if piv is None:
            return None
        rows[col], rows[piv] = rows[piv], rows[col]
        pv = rows[col][col]
        rows[col] = [v / pv for v in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [v - f * p for v, p in zip(rows[r], rows[col])]
    return tuple(rows[j][n] for j in range(n))


def vertex_enumeration_optimum(lp):
    """Brute-force LP oracle: minimum objective over feasible vertices
    (valid for programs whose feasible set is a polytope)."""
    n = lp.num_vars
    rows = lp.rows
    best = None
    feasible = False
    for subset in itertools.combinations(range(len(rows)), n):
        mat = [[Fraction(0)] * (n + 1) for _ in range(n)]
        for k, i in enumerate(subset):
            for j, c in rows[i].coeffs:
                mat[k][j] = c
            mat[k][n] = rows[i].rhs
        x = dense_solve(mat, n)
        if x is None:
            continue
        if all(r.satisfied_by(x) for r in rows):
            feasible = True
            val = lp.objective_value(x)
            if best is None or val < best:
                best = val
    return best if feasible else None
