"""Exact rational LP solving with verifiable certificates.

Small programs run through a two-phase exact simplex (dense tableau,
Bland's rule, so termination is guaranteed on degenerate cones).  Larger
programs are solved in floating point first (HiGHS via scipy); the float
solution is only ever used as a hint from which exact rational certificates
are reconstructed and then re-checked row by row.  Every outcome returned by
solve() has passed verify_certificate(), which is independent of the pivot
history:

  optimal    -> exact primal point, exact dual multipliers, equal objectives
  infeasible -> exact Farkas multipliers (nonnegative on inequality rows)
  unbounded  -> exact feasible point plus an exact improving ray
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import sparse as _sp
from scipy.optimize import linprog as _linprog

from .lpmodel import LinearProgram

DEFAULT_PIVOT_CAP = 10_000_000

# default size limits for choosing / allowing the dense exact path
_EXACT_DEFAULT_VARS = 32
_EXACT_DEFAULT_ROWS = 120
_EXACT_MAX_VARS = 64
_EXACT_MAX_ROWS = 320

_DENOM_LADDER = (1, 2, 6, 24, 360, 2520, 10 ** 5, 10 ** 7, 10 ** 9, 10 ** 12)
_TIGHT_TOL = 1e-7
_SUPPORT_TOL = 1e-9


class ResourceExhausted(RuntimeError):
    """Pivot/iteration budget exceeded; distinct from mathematical outcomes."""


class CertificationError(RuntimeError):
    """No exact certificate could be reconstructed (should not happen for
    well-posed inputs; indicates a solver or numerics problem, never a
    silently wrong bound)."""


@dataclass
class SolveOutcome:
    status: str                      # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None = None
    primal: tuple | None = None      # per-variable exact values
    dual: tuple | None = None        # per-row multipliers (optimal)
    farkas: tuple | None = None      # per-row multipliers (infeasible)
    ray: tuple | None = None         # improving direction (unbounded)
    pivots: int = 0
    method: str = ""


@dataclass
class PresolveHint:
    """Float warm-start data; never trusted without exact verification."""

    status_hint: str
    x: tuple = ()
    row_duals: tuple = ()
    tight_rows: tuple = ()
    support_rows: tuple = ()


# ---------------------------------------------------------------------------
# Compiled numeric forms of a LinearProgram.
# ---------------------------------------------------------------------------


class _Compiled:
    def __init__(self, lp: LinearProgram):
        self.lp = lp
        n = lp.num_vars
        m = len(lp.rows)
        self.n, self.m = n, m
        self.rel_ge = np.zeros(m, dtype=bool)
        indptr = [0]
        indices = []
        data_int = []
        b_int = []
        row_abs = []
        fdata = []
        for i, row in enumerate(lp.rows):
            self.rel_ge[i] = row.rel == ">="
            den = row.rhs.denominator
            for _, c in row.coeffs:
                if c.denominator != 1:
                    den = den * c.denominator // math.gcd(den, c.denominator)
            acc = 0
            if den == 1:
                for j, c in row.coeffs:
                    ci = c.numerator
                    indices.append(j)
                    data_int.append(ci)
                    acc += ci if ci >= 0 else -ci
                    fdata.append(float(ci))
                b_int.append(row.rhs.numerator)
            else:
                for j, c in row.coeffs:
                    ci = int(c * den)
                    indices.append(j)
                    data_int.append(ci)
                    acc += abs(ci)
                    fdata.append(float(c))
                b_int.append(int(row.rhs * den))
            row_abs.append(acc)
            indptr.append(len(indices))
        self.A_int = _sp.csr_matrix(
            (np.array(data_int, dtype=np.int64),
             np.array(indices, dtype=np.int32),
             np.array(indptr, dtype=np.int64)), shape=(m, n))
        self.b_int = np.array(b_int, dtype=np.int64)
        self.row_abs_max = max(row_abs) if row_abs else 0
        self.b_abs_max = int(np.abs(self.b_int).max()) if m else 0
        A_float = _sp.csr_matrix(
            (np.array(fdata, dtype=np.float64),
             np.array(indices, dtype=np.int32),
             np.array(indptr, dtype=np.int64)), shape=(m, n))
        self.ge_rows = np.nonzero(self.rel_ge)[0]
        self.eq_rows = np.nonzero(~self.rel_ge)[0]
        b_float = np.array([float(r.rhs) for r in lp.rows])
        self.A_ub = -A_float[self.ge_rows] if len(self.ge_rows) else None
        self.b_ub = -b_float[self.ge_rows] if len(self.ge_rows) else None
        self.A_eq = A_float[self.eq_rows] if len(self.eq_rows) else None
        self.b_eq = b_float[self.eq_rows] if len(self.eq_rows) else None
        self.A_float = A_float
        self.b_float = b_float
        self.c_float = np.zeros(n)
        for j, c in lp.objective:
            self.c_float[j] = float(c)

    # -- exact primal feasibility -------------------------------------------

    def feasible(self, x) -> bool:
        den = 1
        for v in x:
            den = den * v.denominator // math.gcd(den, v.denominator)
        num_max = max((abs(int(v * den)) for v in x), default=0)
        if (den <= 10 ** 13
                and self.row_abs_max * num_max < 2 ** 62
                and self.b_abs_max * den < 2 ** 62):
            xi = np.array([int(v * den) for v in x], dtype=np.int64)
            lhs = self.A_int.dot(xi)
            rhs = self.b_int * den
            ge_ok = np.all(lhs[self.ge_rows] >= rhs[self.ge_rows])
            eq_ok = np.all(lhs[self.eq_rows] == rhs[self.eq_rows])
            return bool(ge_ok and eq_ok)
        for row in self.lp.rows:  # huge denominators: exact slow path
            if not row.satisfied_by(x):
                return False
        return True

    def residuals_float(self, xf):
        return self.A_float.dot(xf) - self.b_float

    def tight_rows(self, xf, tol=_TIGHT_TOL):
        res = self.residuals_float(xf)
        scale = 1.0 + np.abs(self.b_float)
        out = []
        for i in range(self.m):
            if not self.rel_ge[i] or abs(res[i]) <= tol * scale[i]:
                out.append(i)
        return out


def _objective_map(lp):
    return {j: c for j, c in lp.objective}


def _dual_checks(lp, y, expect_value=None, homogeneous=False):
    """Exact dual/Farkas validity: signs, stationarity, objective match."""
    if y is None or len(y) != len(lp.rows):
        return False
    acc = {}
    dual_obj = Fraction(0)
    for i, row in enumerate(lp.rows):
        yi = y[i]
        if yi == 0:
            continue
        if row.rel == ">=" and yi < 0:
            return False
        dual_obj += yi * row.rhs
        for j, c in row.coeffs:
            acc[j] = acc.get(j, Fraction(0)) + yi * c
    target = {} if homogeneous else _objective_map(lp)
    keys = set(acc) | set(target)
    for j in keys:
        if acc.get(j, 0) != target.get(j, 0):
            return False
    if homogeneous:
        return dual_obj > 0
    return expect_value is None or dual_obj == expect_value


def verify_certificate(lp: LinearProgram, outcome: SolveOutcome,
                       _comp=None) -> bool:
    """Re-check an outcome in exact arithmetic, independent of how it was
    produced.  Returns False on any failure."""
    try:
        comp = _comp if _comp is not None else _Compiled(lp)
        if outcome.status == "optimal":
            x = outcome.primal
            if x is None or len(x) != lp.num_vars or not comp.feasible(x):
                return False
            val = lp.objective_value(x)
            if outcome.value != val:
                return False
            return _dual_checks(lp, outcome.dual, expect_value=val)
        if outcome.status == "infeasible":
            return _dual_checks(lp, outcome.farkas, homogeneous=True)
        if outcome.status == "unbounded":
            x, d = outcome.primal, outcome.ray
            if x is None or d is None or not comp.feasible(x):
                return False
            obj = _objective_map(lp)
            if sum(c * d[j] for j, c in obj.items()) >= 0:
                return False
            for row in lp.rows:
                g = sum(c * d[j] for j, c in row.coeffs)
                if row.rel == "=" and g != 0:
                    return False
                if row.rel == ">=" and g < 0:
                    return False
            return True
        return False
    except Exception:
        return False


# ---------------------------------------------------------------------------
# Exact sparse linear solving (for certificate repair).
# ---------------------------------------------------------------------------


def _solve_exact_system(equations, nvars):
    """Any exact solution of the sparse system, or None if inconsistent.

    equations: iterable of (dict var->Fraction, rhs).  Free variables are
    set to zero.  Gauss-Jordan on dict rows keyed by pivot variable.
    """
    pivots = {}  # pivot var -> (row dict, rhs)
    for eq, rhs in equations:
        row = {j: Fraction(c) for j, c in eq.items() if c != 0}
        rhs = Fraction(rhs)
        for pv in sorted(set(row) & set(pivots)):
            if pv not in row:
                continue
            f = row.pop(pv)
            prow, prhs = pivots[pv]
            for j, c in prow.items():
                if j == pv:
                    continue
                nv = row.get(j, Fraction(0)) - f * c
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
            rhs -= f * prhs
        row = {j: c for j, c in row.items() if c != 0}
        if not row:
            if rhs != 0:
                return None
            continue
        pv = min(row)
        pc = row.pop(pv)
        row = {j: c / pc for j, c in row.items()}
        rhs = rhs / pc
        # eliminate the new pivot from existing rows (pivot rows then only
        # ever reference free variables)
        for opv, (orow, orhs) in list(pivots.items()):
            if pv in orow:
                f = orow.pop(pv)
                for j, c in row.items():
                    nv = orow.get(j, Fraction(0)) - f * c
                    if nv:
                        orow[j] = nv
                    else:
                        orow.pop(j, None)
                pivots[opv] = (orow, orhs - f * rhs)
        pivots[pv] = (row, rhs)
    x = [Fraction(0)] * nvars
    for pv, (_row, rhs) in pivots.items():
        x[pv] = rhs  # remaining entries are free variables held at zero
    return x


# ---------------------------------------------------------------------------
# Float solving plus exact reconstruction.
# ---------------------------------------------------------------------------


def _run_float(comp, c=None, method="highs-ds"):
    res = _linprog(
        comp.c_float if c is None else c,
        A_ub=comp.A_ub, b_ub=comp.b_ub,
        A_eq=comp.A_eq, b_eq=comp.b_eq,
        bounds=(None, None), method=method)
    return res


def _row_duals_from_res(comp, res):
    y = np.zeros(comp.m)
    if len(comp.ge_rows) and res.ineqlin is not None:
        y[comp.ge_rows] = -np.asarray(res.ineqlin.marginals)
    if len(comp.eq_rows) and res.eqlin is not None:
        y[comp.eq_rows] = np.asarray(res.eqlin.marginals)
    return y


def _rationalize(vec, den):
    return tuple(Fraction(float(v)).limit_denominator(den) for v in vec)


def _certify_primal(comp, xf):
    for den in _DENOM_LADDER:
        x = _rationalize(xf, den)
        if comp.feasible(x):
            return x
    return None


def _dual_by_support(comp, support, value):
    """Exact dual supported on the given rows, via stationarity equations."""
    lp = comp.lp
    pos = {r: k for k, r in enumerate(support)}
    cols = {}
    for r in support:
        for j, c in lp.rows[r].coeffs:
            cols.setdefault(j, {})[pos[r]] = c
    obj = _objective_map(lp)
    equations = []
    for j in range(lp.num_vars):
        eq = cols.get(j)
        rhs = obj.get(j, Fraction(0))
        if eq:
            equations.append((eq, rhs))
        elif rhs != 0:
            return None
    ys = _solve_exact_system(equations, len(support))
    if ys is None:
        return None
    y = [Fraction(0)] * comp.m
    for r, k in pos.items():
        y[r] = ys[k]
    y = tuple(y)
    if _dual_checks(lp, y, expect_value=value):
        return y
    return None


def _primal_by_complementarity(comp, y, xf):
    """Exact optimal point: solve the rows forced tight by the dual support
    (plus equalities and float-tight rows), then check full feasibility."""
    lp = comp.lp
    must = [i for i, row in enumerate(lp.rows)
            if row.rel == "=" or (y is not None and y[i] != 0)]
    tight = set(comp.tight_rows(xf)) | set(must)
    for rows in (sorted(tight), must):
        eqs = [({j: c for j, c in lp.rows[i].coeffs}, lp.rows[i].rhs)
               for i in rows]
        x = _solve_exact_system(eqs, lp.num_vars)
        if x is not None and comp.feasible(x):
            return tuple(x)
    return None


def _certify_optimal(comp, xf, yf):
    lp = comp.lp
    x = _certify_primal(comp, xf)
    feasibility_only = not lp.objective
    if x is not None and feasibility_only:
        zero = tuple(Fraction(0) for _ in range(comp.m))
        return SolveOutcome("optimal", Fraction(0), x, dual=zero,
                            method="float+exact")
    y = None
    for den in _DENOM_LADDER:
        cand = _rationalize(yf, den)
        if x is not None and _dual_checks(lp, cand, lp.objective_value(x)):
            y = cand
            break
    if y is None:
        # reconstruct the dual exactly on its float support
        supports = []
        s0 = [i for i in range(comp.m) if abs(yf[i]) > _SUPPORT_TOL]
        supports.append(s0)
        supports.append(sorted(set(s0) | set(comp.tight_rows(xf))))
        for sup in supports:
            val = lp.objective_value(x) if x is not None else None
            y = _dual_by_support(comp, sup, val)
            if y is None and val is not None:
                # value may be off because the primal was off; retry free
                y = _dual_by_support(comp, sup, None)
            if y is not None and _dual_checks(lp, y):
                break
            y = None
    if y is None:
        return None
    dual_val = sum(y[i] * lp.rows[i].rhs for i in range(comp.m))
    if x is None or lp.objective_value(x) != dual_val:
        x = _primal_by_complementarity(comp, y, xf)
    if x is None or lp.objective_value(x) != dual_val:
        return None
    return SolveOutcome("optimal", dual_val, x, dual=tuple(y),
                        method="float+exact")


def _certify_infeasible(comp):
    """Farkas certificate via the elastic relaxation min sum(t)."""
    lp = comp.lp
    n = comp.n
    # elastic rows: every >= row gets one slack; every = row two (split)
    elastic = []  # (orig_row, sign)
    for i, row in enumerate(lp.rows):
        elastic.append((i, 1))
        if row.rel == "=":
            elastic.append((i, -1))
    me = len(elastic)
    rows_idx, cols_idx, vals = [], [], []
    b = np.zeros(me)
    for r, (i, sgn) in enumerate(elastic):
        for j, c in lp.rows[i].coeffs:
            rows_idx.append(r)
            cols_idx.append(j)
            vals.append(-sgn * float(c))
        rows_idx.append(r)
        cols_idx.append(n + r)
        vals.append(-1.0)
        b[r] = -sgn * float(lp.rows[i].rhs)
    A_ub = _sp.csr_matrix((vals, (rows_idx, cols_idx)), shape=(me, n + me))
    c = np.zeros(n + me)
    c[n:] = 1.0
    bounds = [(None, None)] * n + [(0, None)] * me
    res = _linprog(c, A_ub=A_ub, b_ub=b, bounds=bounds, method="highs-ds")
    if res.status != 0 or res.fun <= 1e-9:
        return None
    yel = -np.asarray(res.ineqlin.marginals)
    yf = np.zeros(comp.m)
    for r, (i, sgn) in enumerate(elastic):
        yf[i] += sgn * yel[r]
    for den in _DENOM_LADDER:
        y = _rationalize(yf, den)
        if _dual_checks(lp, y, homogeneous=True):
            return SolveOutcome("infeasible", farkas=y, method="float+exact")
    # exact nullspace repair on the float support
    sup = [i for i in range(comp.m) if abs(yf[i]) > _SUPPORT_TOL]
    pos = {r: k for k, r in enumerate(sup)}
    cols = {}
    for r in sup:
        for j, c in lp.rows[r].coeffs:
            cols.setdefault(j, {})[pos[r]] = c
    for anchor in range(min(len(sup), 8)):
        equations = [(eq, Fraction(0)) for eq in cols.values()]
        equations.append(({anchor: Fraction(1)}, Fraction(1)))
        ys = _solve_exact_system(equations, len(sup))
        if ys is None:
            continue
        y = [Fraction(0)] * comp.m
        for r, k in pos.items():
            y[r] = ys[k]
        if _dual_checks(lp, tuple(y), homogeneous=True):
            return SolveOutcome("infeasible", farkas=tuple(y),
                                method="float+exact")
        y_neg = tuple(-v for v in y)
        if _dual_checks(lp, y_neg, homogeneous=True):
            return SolveOutcome("infeasible", farkas=y_neg,
                                method="float+exact")
    return None


def float_presolve(lp: LinearProgram) -> PresolveHint:
    """Solve in floating point and report basis-style hints.  The hint is
    advisory; solve() re-derives everything exactly before trusting it."""
    comp = _Compiled(lp)
    res = _run_float(comp)
    if res.status == 2:
        return PresolveHint("infeasible")
    if res.status == 3:
        return PresolveHint("unbounded")
    if res.status != 0:
        return PresolveHint("unknown")
    xf = np.asarray(res.x)
    yf = _row_duals_from_res(comp, res)
    return PresolveHint(
        "optimal", tuple(map(float, xf)), tuple(map(float, yf)),
        tuple(comp.tight_rows(xf)),
        tuple(i for i in range(comp.m) if abs(yf[i]) > _SUPPORT_TOL))


def _solve_float_path(lp, comp):
    res = _run_float(comp)
    if res.status == 0:
        xf = np.asarray(res.x)
        yf = _row_duals_from_res(comp, res)
        out = _certify_optimal(comp, xf, yf)
        if out is not None:
            return out
        # force a vertex with a deterministic auxiliary objective and retry
        if not lp.objective:
            res2 = _run_float(comp, c=np.ones(comp.n))
            if res2.status == 0:
                x = _certify_primal(comp, np.asarray(res2.x))
                if x is not None:
                    zero = tuple(Fraction(0) for _ in range(comp.m))
                    return SolveOutcome("optimal", Fraction(0), x, dual=zero,
                                        method="float+exact")
        res3 = _run_float(comp, method="highs")
        if res3.status == 0:
            out = _certify_optimal(comp, np.asarray(res3.x),
                                   _row_duals_from_res(comp, res3))
            if out is not None:
                return out
        return None
    if res.status == 2:
        out = _certify_infeasible(comp)
        if out is not None:
            return out
        # presolve may misreport; try the optimal path once before giving up
        res2 = _run_float(comp, method="highs")
        if res2.status == 0:
            return _certify_optimal(comp, np.asarray(res2.x),
                                    _row_duals_from_res(comp, res2))
        return None
    if res.status == 3:
        return None  # unbounded has no float certificate; exact path decides
    raise ResourceExhausted(f"float solver stopped with status {res.status}")


# ---------------------------------------------------------------------------
# Exact two-phase simplex (dense tableau, Bland's rule).
# ---------------------------------------------------------------------------


class _Tableau:
    def __init__(self, lp: LinearProgram):
        self.lp = lp
        n = lp.num_vars
        rows = lp.rows
        m = len(rows)
        ge = [i for i, r in enumerate(rows) if r.rel == ">="]
        self.n_struct = 2 * n + len(ge)
        self.ncols = self.n_struct + m
        self.m = m
        surplus_col = {r: 2 * n + k for k, r in enumerate(ge)}
        self.flip = [1] * m
        T = []
        for i, row in enumerate(rows):
            arr = [Fraction(0)] * (self.ncols + 1)
            for j, c in row.coeffs:
                arr[j] += c
                arr[n + j] -= c
            if row.rel == ">=":
                arr[surplus_col[i]] = Fraction(-1)
            arr[-1] = row.rhs
            if arr[-1] < 0:
                self.flip[i] = -1
                arr = [-v for v in arr]
            arr[self.n_struct + i] = Fraction(1)  # artificial
            T.append(arr)
        self.T = T
        self.basis = [self.n_struct + i for i in range(m)]
        self.pivots = 0

    def _pivot(self, row, col, cap):
        self.pivots += 1
        if self.pivots > cap:
            raise ResourceExhausted(
                f"pivot cap {cap} exceeded after {self.pivots} pivots")
        T = self.T
        piv = T[row][col]
        T[row] = [v / piv for v in T[row]]
        prow = T[row]
        for r in range(self.m):
            if r != row and T[r][col] != 0:
                f = T[r][col]
                T[r] = [v - f * pv for v, pv in zip(T[r], prow)]
        self.basis[row] = col

    def _reduced_costs(self, cost):
        T = self.T
        cb = [cost[b] for b in self.basis]
        rc = list(cost[:self.ncols])
        for r in range(self.m):
            cr = cb[r]
            if cr == 0:
                continue
            Tr = T[r]
            for j in range(self.ncols):
                if Tr[j]:
                    rc[j] -= cr * Tr[j]
        return rc

    def run_phase(self, cost, allowed, cap):
        """Bland's rule: lowest eligible entering column, lowest basis index
        on ratio ties.  Returns 'optimal' or ('unbounded', column)."""
        rc = self._reduced_costs(cost)
        while True:
            enter = None
            for j in range(self.ncols):
                if allowed[j] and rc[j] < 0:
                    enter = j
                    break
            if enter is None:
                return "optimal", None
            leave, best, best_basis = None, None, None
            for r in range(self.m):
                a = self.T[r][enter]
                if a > 0:
                    ratio = self.T[r][-1] / a
                    key = self.basis[r]
                    if best is None or ratio < best or (ratio == best
                                                        and key < best_basis):
                        leave, best, best_basis = r, ratio, key
            if leave is None:
                return "unbounded", enter
            self._pivot(leave, enter, cap)
            f = rc[enter]
            prow = self.T[leave]
            rc = [v - f * prow[j] for j, v in enumerate(rc)]

    def duals(self, cost):
        """y = c_B * B^-1 read off the artificial (initial identity) block."""
        cb = [cost[b] for b in self.basis]
        out = []
        for i in range(self.m):
            col = self.n_struct + i
            out.append(sum(cb[r] * self.T[r][col] for r in range(self.m)))
        return out

    def primal(self):
        n = self.lp.num_vars
        xs = [Fraction(0)] * self.ncols
        for r, b in enumerate(self.basis):
            xs[b] = self.T[r][-1]
        return tuple(xs[j] - xs[n + j] for j in range(n))

    def ray(self, enter):
        n = self.lp.num_vars
        d = [Fraction(0)] * self.ncols
        d[enter] = Fraction(1)
        for r, b in enumerate(self.basis):
            d[b] = -self.T[r][enter]
        return tuple(d[j] - d[n + j] for j in range(n))


def exact_simplex(lp: LinearProgram, pivot_cap=DEFAULT_PIVOT_CAP) -> SolveOutcome:
    """Two-phase exact simplex.  Intended for small programs; the float
    pipeline delegates here only when certification fails on a small LP."""
    tab = _Tableau(lp)
    m, ncols = tab.m, tab.ncols
    cost1 = [Fraction(0)] * ncols
    for i in range(m):
        cost1[tab.n_struct + i] = Fraction(1)
    allowed1 = [True] * ncols
    status, _ = tab.run_phase(cost1, allowed1, pivot_cap)
    assert status == "optimal"
    w = sum(cost1[b] * tab.T[r][-1] for r, b in enumerate(tab.basis))
    if w > 0:
        y = tab.duals(cost1)
        farkas = tuple(tab.flip[i] * y[i] for i in range(m))
        out = SolveOutcome("infeasible", farkas=farkas, pivots=tab.pivots,
                           method="exact-simplex")
        return out
    # drive leftover artificials out of the basis with degenerate pivots;
    # rows with no structural entry are inert zero rows and may keep theirs
    for r in range(m):
        if tab.basis[r] >= tab.n_struct:
            assert tab.T[r][-1] == 0
            for j in range(tab.n_struct):
                if tab.T[r][j] != 0:
                    tab._pivot(r, j, pivot_cap)
                    break
    cost2 = [Fraction(0)] * ncols
    obj = _objective_map(lp)
    for j, c in obj.items():
        cost2[j] += c
        cost2[lp.num_vars + j] -= c
    allowed2 = [True] * tab.n_struct + [False] * m  # bar artificials
    status, enter = tab.run_phase(cost2, allowed2, pivot_cap)
    if status == "unbounded":
        return SolveOutcome("unbounded", primal=tab.primal(),
                            ray=tab.ray(enter), pivots=tab.pivots,
                            method="exact-simplex")
    x = tab.primal()
    y = tab.duals(cost2)
    dual = tuple(tab.flip[i] * y[i] for i in range(m))
    value = lp.objective_value(x)
    return SolveOutcome("optimal", value, x, dual=dual, pivots=tab.pivots,
                        method="exact-simplex")


# ---------------------------------------------------------------------------
# Driver.
# ---------------------------------------------------------------------------


def solve(lp: LinearProgram, pivot_cap=DEFAULT_PIVOT_CAP,
          prefer_exact=None) -> SolveOutcome:
    """Solve to a verified exact outcome.

    prefer_exact=True forces the pure simplex path; False forces the float
    pipeline; None picks by problem size.  Every returned outcome has passed
    verify_certificate.
    """
    small = (lp.num_vars <= _EXACT_DEFAULT_VARS
             and len(lp.rows) <= _EXACT_DEFAULT_ROWS)
    fallback_ok = (lp.num_vars <= _EXACT_MAX_VARS
                   and len(lp.rows) <= _EXACT_MAX_ROWS)
    comp = None
    if prefer_exact or (prefer_exact is None and small):
        out = exact_simplex(lp, pivot_cap)
    else:
        comp = _Compiled(lp)
        out = _solve_float_path(lp, comp)
        if out is None:
            if fallback_ok:
                out = exact_simplex(lp, pivot_cap)
            else:
                raise CertificationError(
                    f"could not certify LP ({lp.num_vars} vars, "
                    f"{len(lp.rows)} rows) exactly")
    if not verify_certificate(lp, out, _comp=comp):
        raise CertificationError(
            f"certificate verification failed for status {out.status}")
    return out


def export_certificate(lp: LinearProgram, outcome: SolveOutcome) -> str:
    """Text certificate that can be audited without re-running the solver."""
    lines = [f"status {outcome.status}"]
    if outcome.value is not None:
        lines.append(f"value {outcome.value}")
    if outcome.primal is not None:
        for j, v in enumerate(outcome.primal):
            if v != 0:
                lines.append(f"primal {lp.var_keys[j]} = {v}")
    for tag, vec in (("dual", outcome.dual), ("farkas", outcome.farkas)):
        if vec is not None:
            for i, v in enumerate(vec):
                if v != 0:
                    lines.append(f"{tag} row{i} = {v}")
    if outcome.ray is not None:
        for j, v in enumerate(outcome.ray):
            if v != 0:
                lines.append(f"ray {lp.var_keys[j]} = {v}")
    return "\n".join(lines) + "\n"
