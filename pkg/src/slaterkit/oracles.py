"""Exact rational reference implementations used by the self-test suite.

Everything here runs over ``fractions.Fraction``, so answers are exact for
integer or rational input data.  The implementations are deliberately
brute-force and independent of the LP engine: vertex enumeration for
optimization, variable elimination for feasibility, and direct stepping
for radial cone membership.  They exist to be slow and obviously correct.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

__all__ = [
    "lp_oracle_exact",
    "fm_feasible",
    "multiplier_feasibility_exact",
    "radial_member_exact",
]


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        return Fraction(v).limit_denominator(10 ** 12)
    return Fraction(v)


def _solve_square(rows, rhs):
    """Exact Gaussian elimination; None when the matrix is singular."""
    n = len(rows)
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col]
        a[col] = [v / inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def _null_direction(rows, nv):
    """One exact null direction when the rows have rank nv - 1, else None."""
    a = [list(r) for r in rows]
    pivots = []
    col_of_row = []
    r = 0
    for col in range(nv):
        piv = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][col]
        a[r] = [v / inv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        pivots.append(col)
        col_of_row.append(col)
        r += 1
    if r != nv - 1:
        return None
    free = next(c for c in range(nv) if c not in pivots)
    d = [Fraction(0)] * nv
    d[free] = Fraction(1)
    for i, col in enumerate(col_of_row):
        d[col] = -a[i][free]
    return d


def lp_oracle_exact(c, A, rel, b, lower, upper):
    """Exact status and value of a maximization LP by brute force.

    Every variable must have at least one finite bound (the feasible set is
    then pointed, so vertex enumeration is complete).  Bounds use ``None``
    for an absent side.  Returns ``(status, value)`` with status one of
    ``"optimal"``, ``"infeasible"``, ``"unbounded"`` and value a Fraction
    (None unless optimal).
    """
    nv = len(c)
    c = [_frac(v) for v in c]
    A = [[_frac(v) for v in row] for row in A]
    b = [_frac(v) for v in b]
    lower = [None if v is None else _frac(v) for v in lower]
    upper = [None if v is None else _frac(v) for v in upper]
    for j in range(nv):
        if lower[j] is None and upper[j] is None:
            raise ValueError(f"variable {j} has no finite bound; not pointed")

    tight_rows = [(A[i], b[i]) for i in range(len(A))]
    for j in range(nv):
        e = [Fraction(0)] * nv
        e[j] = Fraction(1)
        if lower[j] is not None:
            tight_rows.append((list(e), lower[j]))
        if upper[j] is not None:
            tight_rows.append((list(e), upper[j]))

    def feasible(x):
        for i, row in enumerate(A):
            v = sum(row[k] * x[k] for k in range(nv))
            if rel[i] == "<=" and v > b[i]:
                return False
            if rel[i] == ">=" and v < b[i]:
                return False
            if rel[i] == "==" and v != b[i]:
                return False
        for j in range(nv):
            if lower[j] is not None and x[j] < lower[j]:
                return False
            if upper[j] is not None and x[j] > upper[j]:
                return False
        return True

    best = None
    for idx in combinations(range(len(tight_rows)), nv):
        rows = [tight_rows[i][0] for i in idx]
        rhs = [tight_rows[i][1] for i in idx]
        x = _solve_square(rows, rhs)
        if x is None or not feasible(x):
            continue
        val = sum(c[k] * x[k] for k in range(nv))
        if best is None or val > best:
            best = val
    if best is None:
        return "infeasible", None

    def recession(d):
        for i, row in enumerate(A):
            v = sum(row[k] * d[k] for k in range(nv))
            if rel[i] == "<=" and v > 0:
                return False
            if rel[i] == ">=" and v < 0:
                return False
            if rel[i] == "==" and v != 0:
                return False
        for j in range(nv):
            if lower[j] is not None and d[j] < 0:
                return False
            if upper[j] is not None and d[j] > 0:
                return False
        return True

    if nv == 1:
        candidates = [[Fraction(1)], [Fraction(-1)]]
    else:
        candidates = []
        for idx in combinations(range(len(tight_rows)), nv - 1):
            d = _null_direction([tight_rows[i][0] for i in idx], nv)
            if d is not None:
                candidates.extend([d, [-v for v in d]])
    for d in candidates:
        if recession(d) and sum(c[k] * d[k] for k in range(nv)) > 0:
            return "unbounded", None
    return "optimal", best


def fm_feasible(le_rows, nv) -> bool:
    """Exact feasibility of a system of <= rows by variable elimination.

    ``le_rows`` is a list of ``(coeffs, rhs)`` with Fraction entries, each
    meaning ``sum(coeffs[k] * x[k]) <= rhs``.  Equalities must be passed as
    two opposite inequalities.
    """
    rows = [([_frac(v) for v in cs], _frac(r)) for cs, r in le_rows]
    for var in range(nv):
        ups, downs, rest = [], [], []
        for cs, r in rows:
            if cs[var] > 0:
                ups.append((cs, r))
            elif cs[var] < 0:
                downs.append((cs, r))
            else:
                rest.append((cs, r))
        new = rest
        for ucs, ur in ups:
            for dcs, dr in downs:
                a, cneg = ucs[var], -dcs[var]
                cs = [cneg * u + a * d for u, d in zip(ucs, dcs)]
                new.append((cs, cneg * ur + a * dr))
        rows = []
        for cs, r in new:
            if all(v == 0 for v in cs):
                if r < 0:
                    return False
            else:
                rows.append((cs, r))
    return True


def _pairing_exact(weights, g, x):
    return sum(_frac(gi) * _frac(xi) * _frac(wi)
               for gi, xi, wi in zip(g, x, weights))


def multiplier_feasibility_exact(weights, lower, upper, ineq, eq, x, grad) -> bool:
    """Exact answer to the multiplier feasibility question at ``x``.

    Decides whether nonnegative weights on the active inequalities and free
    weights on the equalities exist so that the leftover density obeys the
    active-bound sign pattern.  ``lower``/``upper`` entries use ``None``
    for an absent bound; all other data must be rational.
    """
    m = len(x)
    x = [_frac(v) for v in x]
    xi = [-_frac(v) for v in grad]
    at_lo = [lower[i] is not None and x[i] == _frac(lower[i]) for i in range(m)]
    at_hi = [upper[i] is not None and x[i] == _frac(upper[i]) for i in range(m)]
    active = [k for k, (g, a) in enumerate(ineq)
              if _pairing_exact(weights, g, x) == _frac(a)]
    gs = [[_frac(v) for v in ineq[k][0]] for k in active]
    hs = [[_frac(v) for v in h] for h, _ in eq]
    na, nb = len(gs), len(hs)
    nv = na + nb
    rows = []

    def combo_coeffs(i):
        # coefficients of the atom-i leftover: xi_i - sum a g - sum b h
        return [-g[i] for g in gs] + [-h[i] for h in hs]

    for i in range(m):
        cs = combo_coeffs(i)
        if at_lo[i] and at_hi[i]:
            continue
        if at_lo[i]:
            rows.append((cs, -xi[i]))                      # leftover <= 0
        elif at_hi[i]:
            rows.append(([-v for v in cs], xi[i]))         # leftover >= 0
        else:
            rows.append((cs, -xi[i]))
            rows.append(([-v for v in cs], xi[i]))
    for k in range(na):
        cs = [Fraction(0)] * nv
        cs[k] = Fraction(-1)
        rows.append((cs, Fraction(0)))                     # alpha_k >= 0
    if nv == 0:
        # no generators: the leftover is xi itself, rows are constants
        return all(rhs >= 0 for _, rhs in rows)
    return fm_feasible(rows, nv)


def radial_member_exact(weights, lower, upper, ineq, eq, x, d) -> bool:
    """Whether some positive step along ``d`` stays in the box-and-linear set.

    Exact: the step bound against each violated-side bound and each active
    inequality is computed rationally; equalities must be preserved to
    first order exactly.
    """
    m = len(x)
    x = [_frac(v) for v in x]
    d = [_frac(v) for v in d]
    for i in range(m):
        if d[i] < 0 and lower[i] is not None and x[i] == _frac(lower[i]):
            return False
        if d[i] > 0 and upper[i] is not None and x[i] == _frac(upper[i]):
            return False
    for g, a in ineq:
        if (_pairing_exact(weights, g, x) == _frac(a)
                and _pairing_exact(weights, g, d) > 0):
            return False
    for h, b in eq:
        if _pairing_exact(weights, h, d) != 0:
            return False
    return True
