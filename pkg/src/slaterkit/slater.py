"""Search for and construct interior feasible points.

The central routine maximizes a uniform margin variable: a point counts as
interior when it keeps a positive scaled distance to every finite bound
while satisfying the linear constraints.  Companion routines build interior
points directly (nudging a feasible point off its active bounds) and blend
an interior box point with a strictly slack polyhedron point into a single
point that is interior for both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import lp as lpmod
from .errors import (
    ConstructionFailedError,
    InfeasiblePointError,
    NumericalFailureError,
    PreconditionError,
)
from .model import DEFAULT_TOL, Problem, check_feasible, lp_norm, pairing, conjugate_exponent

__all__ = [
    "SlaterReport",
    "find_slater",
    "find_linearized_slater",
    "density_construction",
    "combine_slater",
]

FOUND = "found"
NOT_FOUND = "not_found"

#: Smallest blend weight tried by :func:`combine_slater`.
_MIN_BLEND = 2.0 ** -40


@dataclass(frozen=True)
class SlaterReport:
    """Outcome of an interior-point search.

    ``point`` is the interior point when ``status`` is ``"found"``;
    otherwise ``feasible_point`` still carries a (non-interior) feasible
    point whenever one exists.  ``optimal_t`` is the best margin the search
    achieved and ``margin`` the scaled bound distance of the returned point.
    """

    status: str
    point: np.ndarray | None = None
    margin: float | None = None
    optimal_t: float | None = None
    feasible_point: np.ndarray | None = None
    message: str = ""
    diagnostics: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.status == FOUND

    def __bool__(self) -> bool:
        return self.found


def _bound_scales(prob: Problem) -> np.ndarray:
    """Per-atom margin scale: half the gap when both bounds are finite."""
    lo, hi = prob.lower, prob.upper
    scale = np.ones(prob.size)
    both = np.isfinite(lo) & np.isfinite(hi)
    scale[both] = np.minimum(1.0, (hi[both] - lo[both]) / 2.0)
    return scale


def _report_scales(prob: Problem) -> np.ndarray:
    """Per-atom divisor for reported margins: half-gaps below 2 count raw."""
    lo, hi = prob.lower, prob.upper
    scale = np.ones(prob.size)
    both = np.isfinite(lo) & np.isfinite(hi)
    scale[both] = np.maximum(1.0, (hi[both] - lo[both]) / 2.0)
    return scale


def interior_margin(prob: Problem, x: np.ndarray) -> float:
    """Scaled distance of ``x`` to the nearest finite bound (inf if none)."""
    x = np.asarray(x, dtype=float)
    scale = _report_scales(prob)
    gaps = []
    fin_lo = np.isfinite(prob.lower)
    fin_hi = np.isfinite(prob.upper)
    if fin_lo.any():
        gaps.append(np.min((x[fin_lo] - prob.lower[fin_lo]) / scale[fin_lo]))
    if fin_hi.any():
        gaps.append(np.min((prob.upper[fin_hi] - x[fin_hi]) / scale[fin_hi]))
    return float(min(gaps)) if gaps else math.inf


def _margin_lp(prob: Problem, extra_rows):
    """LP over (x, t): maximize t subject to scaled interiority and the
    linear rows, plus caller-supplied rows of the form row.x + s t <= rhs."""
    m = prob.size
    nv = m + 1
    scale = _bound_scales(prob)
    rows, rel, rhs = [], [], []
    for i in range(m):
        if math.isfinite(prob.lower[i]):
            row = np.zeros(nv)
            row[i] = -1.0
            row[m] = scale[i]
            rows.append(row)
            rel.append("<=")
            rhs.append(-prob.lower[i])
        if math.isfinite(prob.upper[i]):
            row = np.zeros(nv)
            row[i] = 1.0
            row[m] = scale[i]
            rows.append(row)
            rel.append("<=")
            rhs.append(prob.upper[i])
    for g, a in prob.ineq:
        row = np.zeros(nv)
        row[:m] = np.asarray(g, dtype=float) * prob.space.weights
        rows.append(row)
        rel.append("<=")
        rhs.append(a)
    for h, b in prob.eq:
        row = np.zeros(nv)
        row[:m] = np.asarray(h, dtype=float) * prob.space.weights
        rows.append(row)
        rel.append("==")
        rhs.append(b)
    for coeff, s, r in extra_rows:
        row = np.zeros(nv)
        row[:m] = coeff
        row[m] = s
        rows.append(row)
        rel.append("<=")
        rhs.append(r)
    A = np.array(rows) if rows else np.zeros((0, nv))
    c = np.zeros(nv)
    c[m] = 1.0
    lo = np.full(nv, -math.inf)
    hi = np.full(nv, math.inf)
    lo[m], hi[m] = 0.0, 1.0
    return lpmod.LinearProgram(c, A, tuple(rel), np.array(rhs), lo, hi)


def _run_margin_search(prob: Problem, extra_rows, tol: float,
                       kind: str) -> SlaterReport:
    pinched = prob.upper - prob.lower <= tol
    if pinched.any():
        idx = int(np.argmax(pinched))
        return SlaterReport(
            status=NOT_FOUND, optimal_t=0.0,
            message=f"bounds pinch atom {idx}; no interior point can exist",
            diagnostics={"pinched_atoms": np.nonzero(pinched)[0].tolist()})
    out = lpmod.solve(_margin_lp(prob, extra_rows), tol=tol)
    if out.status is lpmod.LpStatus.INFEASIBLE:
        diag = {"lp_status": out.status.value}
        if out.farkas is not None:
            diag["infeasibility_certificate"] = {
                "row_mult": out.farkas.row_mult.tolist(),
                "lower_mult": out.farkas.lower_mult.tolist(),
                "upper_mult": out.farkas.upper_mult.tolist(),
            }
        return SlaterReport(
            status=NOT_FOUND, optimal_t=None,
            message=f"no feasible point exists for the {kind} system",
            diagnostics=diag)
    if out.status is not lpmod.LpStatus.OPTIMAL:
        raise NumericalFailureError(f"margin search failed: {out.message}")
    t = float(out.value)
    x = out.x[:prob.size]
    if t > tol:
        return SlaterReport(status=FOUND, point=x, margin=interior_margin(prob, x),
                            optimal_t=t, feasible_point=x,
                            diagnostics={"lp_iterations": out.iterations})
    # the dual weights witness which rows pin the margin variable at zero
    return SlaterReport(
        status=NOT_FOUND, optimal_t=t, feasible_point=x,
        message=f"best achievable margin {t:.3g} is within tolerance of zero",
        diagnostics={"lp_iterations": out.iterations,
                     "pinning_duals": None if out.y is None else out.y.tolist()})


def find_slater(prob: Problem, tol: float = DEFAULT_TOL) -> SlaterReport:
    """Search for a point strictly inside the box satisfying the linear rows.

    Interiority is scaled: at atoms where both bounds are finite the
    required clearance is proportional to half the gap, so narrow boxes are
    not penalized.  The search is exhaustive in the sense that a point with
    positive scaled margin exists if and only if the report says ``found``
    (up to the working tolerance).
    """
    return _run_margin_search(prob, [], tol, "box-and-linear")


def find_linearized_slater(prob: Problem, xbar: np.ndarray,
                           tol: float = DEFAULT_TOL) -> SlaterReport:
    """Interior-point search with active smooth constraints linearized.

    Each smooth inequality active at ``xbar`` contributes a row requiring
    its first-order model to decrease proportionally to the margin; the
    proportionality constant is the dual norm of the constraint slope, so
    steep and shallow constraints are treated alike.

    Raises
    ------
    InfeasiblePointError
        If ``xbar`` is not feasible for the full problem.
    """
    xbar = np.asarray(xbar, dtype=float)
    report = check_feasible(prob, xbar, tol)
    if not report:
        worst = report.violations[0]
        raise InfeasiblePointError(
            f"linearization point is infeasible: {worst.kind}[{worst.index}] "
            f"violated by {worst.residual:.3g}")
    q = conjugate_exponent(prob.p)
    extra = []
    for i, con in enumerate(prob.nonlinear):
        if abs(con.value(xbar)) > tol:
            continue  # inactive constraints impose no local restriction
        grad = np.asarray(con.grad(xbar), dtype=float)
        s = max(1.0, lp_norm(prob.space, grad, q))
        coeff = grad * prob.space.weights
        extra.append((coeff, s, pairing(prob.space, grad, xbar)))
    return _run_margin_search(prob, extra, tol, "linearized")


def density_construction(prob: Problem, xbar: np.ndarray,
                         w: np.ndarray | None = None,
                         tol: float = DEFAULT_TOL) -> np.ndarray:
    """Push a box point off its active bounds, atom by atom.

    At an atom resting on one bound the point moves toward the other bound:
    half-way when that bound is finite, by ``w`` when it is infinite.
    ``w`` must be positive everywhere (default: all ones).  Only the box is
    consulted; linear constraints are the business of
    :func:`combine_slater`.

    Raises
    ------
    PreconditionError
        If some atom has equal (or indistinguishable) bounds, or ``w`` is
        not strictly positive.
    InfeasiblePointError
        If ``xbar`` lies outside the box by more than ``tol``.
    """
    m = prob.size
    xbar = np.asarray(xbar, dtype=float)
    if xbar.shape != (m,):
        raise PreconditionError(f"point has {xbar.size} atoms, expected {m}")
    if w is None:
        w = np.ones(m)
    else:
        w = np.asarray(w, dtype=float)
        if w.shape != (m,):
            raise PreconditionError(f"step profile has {w.size} atoms, expected {m}")
        if not (w > 0).all():
            raise PreconditionError("step profile must be strictly positive")
    gap = prob.upper - prob.lower
    if (gap <= 2 * tol).any():
        idx = int(np.argmax(gap <= 2 * tol))
        raise PreconditionError(
            f"bounds pinch atom {idx}; no interior point can exist")
    below = xbar < prob.lower - tol
    above = xbar > prob.upper + tol
    if below.any() or above.any():
        idx = int(np.argmax(below | above))
        raise InfeasiblePointError(f"point leaves the box at atom {idx}")
    x = np.clip(xbar, prob.lower, prob.upper)

    at_lower = np.isfinite(prob.lower) & (x - prob.lower <= tol * np.maximum(1.0, np.abs(x)))
    at_upper = np.isfinite(prob.upper) & (prob.upper - x <= tol * np.maximum(1.0, np.abs(x)))
    step_up = np.where(np.isfinite(prob.upper), (prob.upper - x) / 2.0, w)
    step_dn = np.where(np.isfinite(prob.lower), (x - prob.lower) / 2.0, w)
    out = x + np.where(at_lower, step_up, 0.0) - np.where(at_upper, step_dn, 0.0)

    inside = (out > prob.lower) & (out < prob.upper)
    if not inside.all():
        idx = int(np.argmax(~inside))
        raise NumericalFailureError(
            f"constructed point failed to clear the bounds at atom {idx}")
    return out


def combine_slater(prob: Problem, ring: np.ndarray, tilde: np.ndarray,
                   strict_ineq, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, float]:
    """Blend a strictly-slack point with a box-interior point.

    ``ring`` must satisfy the inequalities in ``strict_ineq`` strictly and
    everything else within tolerance; ``tilde`` must be strictly inside the
    box and satisfy the remaining constraints.  Convexity then guarantees
    some blend ``(1-eps) * ring + eps * tilde`` is interior for the box and
    keeps every inequality; the first dyadic ``eps`` that verifies is
    returned along with the point.

    Raises
    ------
    PreconditionError
        If either input point fails its side of the contract.
    ConstructionFailedError
        If no dyadic blend down to 2**-40 verifies (a tolerance report, not
        a mathematical claim).
    """
    m = prob.size
    ring = np.asarray(ring, dtype=float)
    tilde = np.asarray(tilde, dtype=float)
    strict = set(int(i) for i in strict_ineq)
    bad = [i for i in strict if not 0 <= i < prob.n_ineq]
    if bad:
        raise PreconditionError(f"strict inequality index {bad[0]} out of range")
    scale = _bound_scales(prob)

    if (ring < prob.lower - tol).any() or (ring > prob.upper + tol).any():
        raise PreconditionError("slack point leaves the box")
    for j, (h, b) in enumerate(prob.eq):
        if abs(pairing(prob.space, h, ring) - b) > tol:
            raise PreconditionError(f"slack point misses equality {j}")
        if abs(pairing(prob.space, h, tilde) - b) > tol:
            raise PreconditionError(f"interior point misses equality {j}")
    for i, (g, a) in enumerate(prob.ineq):
        v_ring = pairing(prob.space, g, ring)
        if i in strict:
            if v_ring > a - tol:
                raise PreconditionError(
                    f"slack point is not strictly inside inequality {i}")
        elif v_ring > a + tol:
            raise PreconditionError(f"slack point violates inequality {i}")
        if i not in strict and pairing(prob.space, g, tilde) > a + tol:
            raise PreconditionError(f"interior point violates inequality {i}")
    fin_lo = np.isfinite(prob.lower)
    fin_hi = np.isfinite(prob.upper)
    lo_gap = (tilde[fin_lo] - prob.lower[fin_lo]) / scale[fin_lo]
    hi_gap = (prob.upper[fin_hi] - tilde[fin_hi]) / scale[fin_hi]
    if (fin_lo.any() and lo_gap.min() <= tol) or (fin_hi.any() and hi_gap.min() <= tol):
        raise PreconditionError("interior point is not strictly inside the box")

    eps = 0.5
    while eps >= _MIN_BLEND:
        x = (1.0 - eps) * ring + eps * tilde
        ok = interior_margin(prob, x) > tol
        if ok:
            for g, a in prob.ineq:
                if pairing(prob.space, g, x) > a + tol:
                    ok = False
                    break
        if ok:
            for h, b in prob.eq:
                if abs(pairing(prob.space, h, x) - b) > tol:
                    ok = False
                    break
        if ok:
            return x, eps
        eps /= 2.0
    raise ConstructionFailedError(
        "no blend weight down to 2**-40 produced a verifiable interior "
        "point at the working tolerance")
