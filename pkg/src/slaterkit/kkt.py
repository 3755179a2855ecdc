"""Recover and verify first-order multipliers at a feasible point.

Multipliers exist exactly when the negated objective slope decomposes into
a bound part (with the sign pattern dictated by which bounds are active)
plus a nonnegative combination of active inequality slopes plus an
unrestricted combination of equality slopes.  The decomposition is a linear
feasibility question; when it fails, the failure certificate converts into
a feasible descent direction, which is returned instead.

Smooth inequality constraints are admitted after two gates: their supplied
slopes must agree with finite differences, and the constraint system must
admit a linearized interior point at the base point.  Without the second
gate the multiplier question is undecidable at this level and the outcome
is reported as not applicable rather than as a negative.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import cones
from .errors import InfeasiblePointError, InvalidGradientError, PreconditionError
from .model import (
    DEFAULT_TOL,
    Problem,
    RegionPartition,
    check_feasible,
    conjugate_exponent,
    lp_norm,
    pairing,
    regions,
)
from .slater import SlaterReport, find_linearized_slater

__all__ = [
    "Multipliers",
    "KktOutcome",
    "StationarityReport",
    "split_zeta",
    "recover_multipliers_linear",
    "recover_multipliers_nonlinear",
    "validate_gradients",
    "verify_stationarity",
]

FOUND = "found"
NO_MULTIPLIERS = "no_multipliers"
NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class Multipliers:
    """A verified multiplier set for one feasible point.

    ``zeta`` is the bound multiplier density (nonpositive where only the
    lower bound is active, nonnegative where only the upper bound is
    active, zero where neither is).  ``zeta_lower``/``zeta_upper`` split it
    into the two one-sided nonnegative densities.  ``alpha`` maps active
    inequality indices to nonnegative weights, ``beta`` carries one
    unrestricted weight per equality, and ``gamma`` maps active smooth
    constraint indices to nonnegative weights.
    """

    zeta: np.ndarray
    zeta_lower: np.ndarray
    zeta_upper: np.ndarray
    alpha: dict[int, float]
    beta: np.ndarray
    gamma: dict[int, float] = field(default_factory=dict)


@dataclass(frozen=True)
class KktOutcome:
    """Result of a multiplier search: found, refuted, or not applicable.

    On refutation ``direction`` is a feasible direction along which the
    objective's first-order model strictly decreases.
    """

    status: str
    multipliers: Multipliers | None = None
    direction: np.ndarray | None = None
    slater_report: SlaterReport | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.status == FOUND


@dataclass(frozen=True)
class StationarityReport:
    """Residuals and sign checks for a candidate multiplier set."""

    residual: np.ndarray
    residual_max: float
    residual_dual_norm: float
    sign_violation: float
    complementarity_lower: float
    complementarity_upper: float
    complementarity_ineq: float
    ok: bool


def split_zeta(prob: Problem, x: np.ndarray, zeta: np.ndarray,
               tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Split a bound multiplier density into lower and upper parts.

    The lower part is the negative piece on lower-active atoms, the upper
    part the positive piece on upper-active atoms; where both bounds are
    active the sign decides the side.  The input must obey the active-set
    sign pattern.

    Raises
    ------
    PreconditionError
        If ``zeta`` has the wrong sign somewhere or lives on inactive atoms.
    """
    zeta = np.asarray(zeta, dtype=float)
    part = regions(prob, x, tol)
    if not cones.normal_K_contains(prob, x, zeta, tol * max(1.0, float(np.max(np.abs(zeta))))):
        raise PreconditionError(
            "density violates the active-bound sign pattern; cannot split")
    both, lower_only, upper_only, free = part.masks(prob.size)
    za = np.where(lower_only | both, np.maximum(-zeta, 0.0), 0.0)
    zb = np.where(upper_only | both, np.maximum(zeta, 0.0), 0.0)
    return za, zb


def _package(prob: Problem, x: np.ndarray, got, part: RegionPartition,
             nl_order=()) -> Multipliers:
    alpha, beta, gamma_pos, zeta = got
    both, lower_only, upper_only, _ = part.masks(prob.size)
    za = np.where(lower_only | both, np.maximum(-zeta, 0.0), 0.0)
    zb = np.where(upper_only | both, np.maximum(zeta, 0.0), 0.0)
    nl_order = list(nl_order)
    gamma = {nl_order[t]: v for t, v in gamma_pos.items()}
    return Multipliers(zeta=zeta, zeta_lower=za, zeta_upper=zb,
                       alpha=dict(alpha), beta=np.asarray(beta, dtype=float),
                       gamma=gamma)


def recover_multipliers_linear(prob: Problem, xbar: np.ndarray,
                               grad_f: np.ndarray,
                               tol: float = DEFAULT_TOL) -> KktOutcome:
    """Find multipliers at ``xbar`` for a problem with linear constraints.

    ``grad_f`` is the objective slope density at ``xbar``.  Returns
    ``found`` with a multiplier set, or ``no_multipliers`` with a feasible
    direction along which ``grad_f`` strictly decreases.

    Raises
    ------
    InfeasiblePointError
        If ``xbar`` is not feasible.
    PreconditionError
        If the problem carries smooth constraints (use the nonlinear entry
        point for those).
    """
    if prob.nonlinear:
        raise PreconditionError(
            "problem has smooth constraints; use recover_multipliers_nonlinear")
    xbar = np.asarray(xbar, dtype=float)
    grad_f = np.asarray(grad_f, dtype=float)
    rep = check_feasible(prob, xbar, tol)
    if not rep.feasible:
        worst = rep.violations[0]
        raise InfeasiblePointError(
            f"base point violates {worst.kind}[{worst.index}] "
            f"by {worst.residual:.3g}")
    part = regions(prob, xbar, tol)
    got, d = cones.decompose_into_normal_sum(prob, xbar, -grad_f,
                                             part.lin_active, None, tol)
    if got is not None:
        mult = _package(prob, xbar, got, part)
        return KktOutcome(status=FOUND, multipliers=mult,
                          diagnostics={"active_ineq": list(part.lin_active)})
    return KktOutcome(status=NO_MULTIPLIERS, direction=d,
                      diagnostics={
                          "active_ineq": list(part.lin_active),
                          "descent_rate": pairing(prob.space, grad_f, d),
                      })


def validate_gradients(prob: Problem, xbar: np.ndarray,
                       rel_tol: float = 1e-5) -> None:
    """Check every smooth constraint's slope against finite differences.

    Each coordinate of the supplied slope, weighted by the atom's measure,
    must match a central difference of the constraint value to relative
    accuracy ``rel_tol`` (scaled by the largest entry seen).

    Raises
    ------
    InvalidGradientError
        Naming the first constraint and atom that disagree.
    """
    xbar = np.asarray(xbar, dtype=float)
    for i, con in enumerate(prob.nonlinear):
        grad = np.asarray(con.grad(xbar), dtype=float)
        if grad.shape != (prob.size,):
            raise InvalidGradientError(
                f"smooth constraint {i} returned a slope of length {grad.size}, "
                f"expected {prob.size}")
        expected = grad * prob.space.weights
        scale = max(1.0, float(np.max(np.abs(expected))))
        for k in range(prob.size):
            h = 1e-6 * max(1.0, abs(xbar[k]))
            e = np.zeros(prob.size)
            e[k] = h
            fd = (con.value(xbar + e) - con.value(xbar - e)) / (2 * h)
            if abs(fd - expected[k]) > rel_tol * max(scale, abs(fd)):
                raise InvalidGradientError(
                    f"smooth constraint {i} slope disagrees with finite "
                    f"differences at atom {k}: reported {expected[k]:.6g}, "
                    f"measured {fd:.6g}")


def recover_multipliers_nonlinear(prob: Problem, xbar: np.ndarray,
                                  grad_f: np.ndarray,
                                  tol: float = DEFAULT_TOL,
                                  fd_rel_tol: float = 1e-5) -> KktOutcome:
    """Multiplier search admitting smooth inequality constraints.

    Supplied slopes are first validated against finite differences.  The
    search then requires a linearized interior point at ``xbar``; without
    one the question is out of scope and the outcome is ``not_applicable``
    (with the failed interior search attached), never a claimed negative.

    Raises
    ------
    InvalidGradientError, InfeasiblePointError
    """
    xbar = np.asarray(xbar, dtype=float)
    grad_f = np.asarray(grad_f, dtype=float)
    validate_gradients(prob, xbar, fd_rel_tol)
    part = regions(prob, xbar, tol)
    slater = find_linearized_slater(prob, xbar, tol)
    if not slater.found:
        return KktOutcome(status=NOT_APPLICABLE, slater_report=slater,
                          diagnostics={"reason": "no linearized interior point"})
    extra = [np.asarray(prob.nonlinear[i].grad(xbar), dtype=float)
             for i in part.nl_active]
    got, d = cones.decompose_into_normal_sum(prob, xbar, -grad_f,
                                             part.lin_active, extra, tol)
    if got is not None:
        mult = _package(prob, xbar, got, part, nl_order=part.nl_active)
        return KktOutcome(status=FOUND, multipliers=mult, slater_report=slater,
                          diagnostics={"active_ineq": list(part.lin_active),
                                       "active_smooth": list(part.nl_active)})
    return KktOutcome(status=NO_MULTIPLIERS, direction=d, slater_report=slater,
                      diagnostics={
                          "active_ineq": list(part.lin_active),
                          "active_smooth": list(part.nl_active),
                          "descent_rate": pairing(prob.space, grad_f, d),
                      })


def verify_stationarity(prob: Problem, xbar: np.ndarray, grad_f: np.ndarray,
                        mult: Multipliers,
                        tol: float = DEFAULT_TOL) -> StationarityReport:
    """Residuals of the first-order identity for a candidate multiplier set.

    The identity asks the objective slope plus the bound density plus the
    weighted constraint slopes to vanish atom by atom.  Also reported:
    the worst multiplier sign violation and the complementarity pairings
    between multipliers and their slacks.
    """
    xbar = np.asarray(xbar, dtype=float)
    grad_f = np.asarray(grad_f, dtype=float)
    r = grad_f + mult.zeta
    for i, w in mult.alpha.items():
        g, _ = prob.ineq[i]
        r = r + w * np.asarray(g, dtype=float)
    for j in range(prob.n_eq):
        h, _ = prob.eq[j]
        r = r + mult.beta[j] * np.asarray(h, dtype=float)
    for i, w in mult.gamma.items():
        r = r + w * np.asarray(prob.nonlinear[i].grad(xbar), dtype=float)
    q = conjugate_exponent(prob.p)
    residual_max = float(np.max(np.abs(r))) if r.size else 0.0
    residual_dual = lp_norm(prob.space, r, q)

    sign_viol = 0.0
    if mult.alpha:
        sign_viol = max(sign_viol, max(-w for w in mult.alpha.values()))
    if mult.gamma:
        sign_viol = max(sign_viol, max(-w for w in mult.gamma.values()))
    sign_viol = max(sign_viol, float(np.max(-mult.zeta_lower, initial=0.0)))
    sign_viol = max(sign_viol, float(np.max(-mult.zeta_upper, initial=0.0)))
    if not cones.normal_K_contains(prob, xbar, mult.zeta,
                                   tol * max(1.0, float(np.max(np.abs(mult.zeta), initial=0.0)))):
        part = regions(prob, xbar, tol)
        both, lower_only, upper_only, free = part.masks(prob.size)
        z = mult.zeta
        sign_viol = max(
            sign_viol,
            float(np.max(z[lower_only], initial=0.0)),
            float(np.max(-z[upper_only], initial=0.0)),
            float(np.max(np.abs(z[free]), initial=0.0)),
        )

    fin_lo = np.isfinite(prob.lower)
    fin_hi = np.isfinite(prob.upper)
    comp_lo = float(np.sum(mult.zeta_lower[fin_lo] * (xbar - prob.lower)[fin_lo]
                           * prob.space.weights[fin_lo]))
    comp_hi = float(np.sum(mult.zeta_upper[fin_hi] * (prob.upper - xbar)[fin_hi]
                           * prob.space.weights[fin_hi]))
    comp_ineq = 0.0
    for i, w in mult.alpha.items():
        g, a = prob.ineq[i]
        comp_ineq = max(comp_ineq, abs(w * (a - pairing(prob.space, g, xbar))))
    for i, w in mult.gamma.items():
        comp_ineq = max(comp_ineq, abs(w * prob.nonlinear[i].value(xbar)))

    scale = max(1.0, float(np.max(np.abs(grad_f), initial=0.0)))
    ok = (residual_max <= 100 * tol * scale and sign_viol <= tol
          and max(abs(comp_lo), abs(comp_hi), comp_ineq) <= 100 * tol * scale)
    return StationarityReport(
        residual=r, residual_max=residual_max, residual_dual_norm=residual_dual,
        sign_violation=sign_viol, complementarity_lower=comp_lo,
        complementarity_upper=comp_hi, complementarity_ineq=comp_ineq, ok=ok)
