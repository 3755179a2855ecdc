"""Rewrite a linear system so every kept inequality admits interior slack.

An inequality is *implicit* when it holds with equality on the whole
polyhedron; maximizing its slack over the polyhedron decides this with one
LP per inequality.  Converting implicit inequalities to equalities and then
thinning the equality list to a maximal linearly independent subset produces
an equivalent description that always admits a point satisfying the kept
inequalities strictly.  That witness point is computed and shipped with the
rewritten system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import lp as lpmod
from .errors import (
    EmptyPolyhedronError,
    InconsistentEqualitiesError,
    NumericalFailureError,
)
from .model import DEFAULT_TOL, MeasureSpace, Problem, pairing

__all__ = [
    "EqReduction",
    "MfcqSystem",
    "detect_implicit_equalities",
    "reduce_equalities",
    "build_mfcq_system",
]

#: Relative threshold under which a residual row counts as dependent.
RANK_TOL = 1e-10


@dataclass(frozen=True)
class EqReduction:
    """Outcome of thinning an equality list to independent rows.

    ``kept`` indexes the retained rows; ``dependencies`` expresses each
    dropped row as a combination of kept ones: ``(index, {kept_i: coeff})``.
    """

    kept: tuple[int, ...]
    dependencies: tuple[tuple[int, dict[int, float]], ...]


@dataclass(frozen=True)
class MfcqSystem:
    """Equivalent rewritten system with a strict-slack witness.

    ``ineq`` are the retained inequalities, ``eq`` the independent
    equalities (original ones first, then converted inequalities).
    ``provenance`` maps each original inequality index to ``"kept"``,
    ``"converted"`` or ``"dropped"`` (converted but linearly redundant).
    ``eq_sources`` tags every rewritten equality with its origin, either
    ``("eq", j)`` or ``("ineq", i)``.  The witness satisfies every kept
    inequality with slack at least ``witness_margin`` and every equality.
    """

    space: MeasureSpace
    ineq: tuple
    eq: tuple
    witness: np.ndarray
    witness_margin: float
    provenance: dict[int, str]
    eq_sources: tuple[tuple[str, int], ...]
    dependencies: tuple[tuple[int, dict[int, float]], ...]

    def is_member(self, x, tol: float = DEFAULT_TOL) -> bool:
        """Membership of ``x`` in the rewritten polyhedron within ``tol``."""
        for g, a in self.ineq:
            if pairing(self.space, g, x) > a + tol:
                return False
        for h, b in self.eq:
            if abs(pairing(self.space, h, x) - b) > tol:
                return False
        return True


def _poly_rows(space: MeasureSpace, ineq, eq):
    """LP rows over raw coordinates for the weighted linear system."""
    m = space.size
    rows, rel, rhs = [], [], []
    for g, a in ineq:
        rows.append(np.asarray(g, dtype=float) * space.weights)
        rel.append("<=")
        rhs.append(a)
    for h, b in eq:
        rows.append(np.asarray(h, dtype=float) * space.weights)
        rel.append("==")
        rhs.append(b)
    A = np.array(rows) if rows else np.zeros((0, m))
    return A, tuple(rel), np.array(rhs)


def detect_implicit_equalities(prob: Problem, tol: float = DEFAULT_TOL) -> set[int]:
    """Indices of inequalities that hold with equality on the whole polyhedron.

    Implicitness is relative to the linear system alone; the box plays no
    part.  Each inequality is tested by maximizing its slack over the
    polyhedron.

    Raises
    ------
    EmptyPolyhedronError
        If the linear system has no solution.
    """
    m = prob.size
    A, rel, rhs = _poly_rows(prob.space, prob.ineq, prob.eq)
    lo = np.full(m, -math.inf)
    hi = np.full(m, math.inf)
    implicit = set()
    for i, (g, a) in enumerate(prob.ineq):
        c = -(np.asarray(g, dtype=float) * prob.space.weights)
        out = lpmod.solve(lpmod.LinearProgram(c, A, rel, rhs, lo, hi), tol=tol)
        if out.status is lpmod.LpStatus.INFEASIBLE:
            raise EmptyPolyhedronError("the linear constraint system has no solution")
        if out.status is lpmod.LpStatus.UNBOUNDED:
            continue
        if out.status is not lpmod.LpStatus.OPTIMAL:
            raise NumericalFailureError(
                f"slack maximization for inequality {i} failed: {out.message}")
        max_slack = a + out.value
        if max_slack <= tol:
            implicit.add(i)
    if not prob.ineq and prob.eq:
        # no inequality probes ran; still detect an empty system
        out = lpmod.feasibility(A, rel, rhs, lo, hi, tol=tol)
        if out.status is lpmod.LpStatus.INFEASIBLE:
            raise EmptyPolyhedronError("the linear constraint system has no solution")
    return implicit


def reduce_equalities(space: MeasureSpace, eq, tol: float = DEFAULT_TOL,
                      rank_tol: float = RANK_TOL) -> EqReduction:
    """Thin an equality list to a maximal independent subset, front first.

    Rows are compared through the weighted pairing.  A row whose residual
    against the kept rows falls below ``rank_tol`` times the largest row
    norm is dependent; its right-hand side must match the induced
    combination or the system is unsolvable.

    Raises
    ------
    InconsistentEqualitiesError
        With a combination certificate when a dependent row's right-hand
        side contradicts the kept rows.
    """
    rows = [np.asarray(h, dtype=float) * space.weights for h, _ in eq]
    rhs = [b for _, b in eq]
    max_norm = max((float(np.linalg.norm(r)) for r in rows), default=0.0)
    threshold = rank_tol * max(max_norm, 1.0)
    kept: list[int] = []
    ortho: list[np.ndarray] = []  # orthonormal spans of kept rows
    deps: list[tuple[int, dict[int, float]]] = []
    for j, row in enumerate(rows):
        v = row.copy()
        for q in ortho:
            v -= (q @ v) * q
        # re-orthogonalize once; plain Gram-Schmidt loses accuracy otherwise
        for q in ortho:
            v -= (q @ v) * q
        nrm = float(np.linalg.norm(v))
        if nrm > threshold:
            kept.append(j)
            ortho.append(v / nrm)
            continue
        if kept:
            K = np.array([rows[k] for k in kept]).T
            coeff, *_ = np.linalg.lstsq(K, row, rcond=None)
        else:
            coeff = np.zeros(0)
        combo_rhs = float(coeff @ [rhs[k] for k in kept]) if kept else 0.0
        if abs(rhs[j] - combo_rhs) > tol * max(1.0, abs(rhs[j])):
            cert = np.zeros(len(eq))
            for t, k in enumerate(kept):
                cert[k] = coeff[t]
            cert[j] = -1.0
            cert /= float(np.max(np.abs(cert)))
            raise InconsistentEqualitiesError(
                f"equality {j} contradicts the rows before it "
                f"({rhs[j]:.6g} vs {combo_rhs:.6g})", certificate=cert)
        deps.append((j, {k: float(c) for k, c in zip(kept, coeff)}))
    return EqReduction(tuple(kept), tuple(deps))


def build_mfcq_system(prob: Problem, tol: float = DEFAULT_TOL) -> MfcqSystem:
    """Rewrite the linear system and produce a strict-slack witness.

    Implicit inequalities become equalities, the combined equality list is
    thinned to independent rows, and a witness point satisfying every kept
    inequality strictly is computed by maximizing a common slack.

    Raises
    ------
    EmptyPolyhedronError, InconsistentEqualitiesError, NumericalFailureError
    """
    implicit = set(detect_implicit_equalities(prob, tol))
    combined = list(prob.eq) + [(g, a) for i, (g, a) in enumerate(prob.ineq)
                                if i in implicit]
    sources: list[tuple[str, int]] = [("eq", j) for j in range(prob.n_eq)]
    sources += [("ineq", i) for i in sorted(implicit)]
    red = reduce_equalities(prob.space, combined, tol)
    eq_tilde = tuple(combined[k] for k in red.kept)
    src_tilde = tuple(sources[k] for k in red.kept)
    ineq_tilde = tuple((g, a) for i, (g, a) in enumerate(prob.ineq)
                       if i not in implicit)

    provenance: dict[int, str] = {}
    kept_sources = set(src_tilde)
    for i in range(prob.n_ineq):
        if i not in implicit:
            provenance[i] = "kept"
        elif ("ineq", i) in kept_sources:
            provenance[i] = "converted"
        else:
            provenance[i] = "dropped"

    witness, margin = _strict_witness(prob.space, ineq_tilde, eq_tilde, tol)
    return MfcqSystem(
        space=prob.space,
        ineq=ineq_tilde,
        eq=eq_tilde,
        witness=witness,
        witness_margin=margin,
        provenance=provenance,
        eq_sources=src_tilde,
        dependencies=red.dependencies,
    )


def _strict_witness(space: MeasureSpace, ineq, eq, tol: float):
    """Maximize a slack common to all inequalities, capped at one."""
    m = space.size
    nv = m + 1  # coordinates plus the slack variable
    rows, rel, rhs = [], [], []
    for g, a in ineq:
        row = np.zeros(nv)
        row[:m] = np.asarray(g, dtype=float) * space.weights
        row[m] = 1.0
        rows.append(row)
        rel.append("<=")
        rhs.append(a)
    for h, b in eq:
        row = np.zeros(nv)
        row[:m] = np.asarray(h, dtype=float) * space.weights
        rows.append(row)
        rel.append("==")
        rhs.append(b)
    A = np.array(rows) if rows else np.zeros((0, nv))
    c = np.zeros(nv)
    c[m] = 1.0
    lo = np.full(nv, -math.inf)
    hi = np.full(nv, math.inf)
    lo[m], hi[m] = 0.0, 1.0
    out = lpmod.solve(lpmod.LinearProgram(c, A, tuple(rel), np.array(rhs), lo, hi), tol=tol)
    if out.status is lpmod.LpStatus.INFEASIBLE:
        raise EmptyPolyhedronError("rewritten system has no solution")
    if out.status is not lpmod.LpStatus.OPTIMAL:
        raise NumericalFailureError(f"witness search failed: {out.message}")
    margin = float(out.value)
    if ineq and margin <= tol:
        raise NumericalFailureError(
            "no strictly slack point found after conversion; the working "
            f"tolerance {tol:g} cannot separate the kept inequalities")
    return out.x[:m], (margin if ineq else math.inf)
