"""Dual certificates explaining the absence of interior feasible points.

When the feasible set touches the box boundary everywhere, that fact has a
finite witness: a nonzero density built from the constraint slopes whose
sign pattern pins every feasible point to the active bounds.  This module
searches for such a witness, turns it into an objective slope for which
multipliers must degenerate, and measures how the minimal multiplier size
grows as the discretization is refined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import lp as lpmod
from .errors import (
    CertificateNotFoundError,
    InfeasiblePointError,
    NumericalFailureError,
    PreconditionError,
)
from .model import DEFAULT_TOL, MeasureSpace, Problem, check_feasible, pairing
from .preprocess import MfcqSystem, build_mfcq_system
from .slater import find_slater
from .kkt import recover_multipliers_linear, verify_stationarity

__all__ = [
    "NoSlaterCertificate",
    "RefinementReport",
    "build_no_slater_certificate",
    "build_bad_functional",
    "refinement_study",
    "MODELS",
    "log_counterexample_model",
    "constant_control_model",
]


@dataclass(frozen=True)
class NoSlaterCertificate:
    """A nonzero density certifying that no interior feasible point exists.

    ``zeta`` combines rewritten-system slopes, ``zeta = sum(lam[i] * g_i)
    + sum(mu[j] * h_j)``, with ``lam`` nonnegative and supported on
    inequalities active at ``base_point``.  Its sign pattern (nonnegative
    where the lower bound is active, nonpositive where the upper bound is,
    zero elsewhere) forces every feasible point to keep the same active
    bounds, so none can be interior.  Normalized so ``max |zeta| = 1``.
    """

    zeta: np.ndarray
    lam: dict[int, float]
    mu: np.ndarray
    system: MfcqSystem
    base_point: np.ndarray
    sign_residual: float
    combination_residual: float
    support_positive: tuple[int, ...]
    support_negative: tuple[int, ...]
    peak_atom: int

    @property
    def max_residual(self) -> float:
        return max(self.sign_residual, self.combination_residual)


def _active_tilde(system: MfcqSystem, xbar: np.ndarray, tol: float) -> list[int]:
    act = []
    for i, (g, a) in enumerate(system.ineq):
        if abs(pairing(system.space, g, xbar) - a) <= tol * max(1.0, abs(a)):
            act.append(i)
    return act


def _bound_masks(prob: Problem, x: np.ndarray, tol: float):
    scale = np.maximum(1.0, np.abs(x))
    at_lo = np.isfinite(prob.lower) & (x - prob.lower <= tol * scale)
    at_hi = np.isfinite(prob.upper) & (prob.upper - x <= tol * scale)
    return at_lo & ~at_hi, at_hi & ~at_lo, ~(at_lo | at_hi)


def _sign_rows(prob: Problem, xbar: np.ndarray, cols: np.ndarray, tol: float):
    """Per-atom sign constraints on ``zeta = cols @ v``.

    Atoms with the lower bound active require ``zeta >= 0``, upper bound
    active ``zeta <= 0``, interior atoms ``zeta == 0``.
    """
    lo_only, hi_only, interior = _bound_masks(prob, xbar, tol)
    rows, rel, rhs = [], [], []
    for i in range(prob.size):
        if lo_only[i]:
            rows.append(cols[i])
            rel.append(">=")
            rhs.append(0.0)
        elif hi_only[i]:
            rows.append(cols[i])
            rel.append("<=")
            rhs.append(0.0)
        elif interior[i]:
            rows.append(cols[i])
            rel.append("==")
            rhs.append(0.0)
        # atoms squeezed onto both bounds constrain nothing
    return rows, rel, rhs


def _certificate_columns(system: MfcqSystem, active: list[int]):
    """Column matrix whose combinations form candidate densities."""
    m = system.space.size
    gs = [np.asarray(system.ineq[i][0], dtype=float) for i in active]
    hs = [np.asarray(h, dtype=float) for h, _ in system.eq]
    cols = np.zeros((m, len(gs) + len(hs)))
    for k, g in enumerate(gs):
        cols[:, k] = g
    for k, h in enumerate(hs):
        cols[:, len(gs) + k] = h
    return cols


def build_no_slater_certificate(prob: Problem, xbar: np.ndarray | None = None,
                                tol: float = DEFAULT_TOL,
                                slater_report=None) -> NoSlaterCertificate:
    """Search for a density certifying that no interior point exists.

    The interior-point search must already have come up empty; this
    routine re-runs it and refuses to certify otherwise.  The certificate
    is sought first by a single LP maximizing the inequality content (which
    also proves the density nonzero), then by per-atom probes that handle
    purely equality-generated certificates.

    Parameters
    ----------
    xbar:
        Feasible base point whose active bounds anchor the sign pattern.
        Defaults to the feasible point produced by the interior search.
    slater_report:
        A report from :func:`slaterkit.slater.find_slater` on this very
        problem and tolerance, to avoid re-running the search.

    Raises
    ------
    PreconditionError
        If an interior point exists, bounds pinch, or no feasible point
        exists at all.
    InfeasiblePointError
        If the supplied base point is not feasible.
    CertificateNotFoundError
        If no candidate clears the tolerance.  This is a numerical report;
        it does not assert that an interior point exists.
    """
    if (prob.upper - prob.lower <= 2 * tol).any():
        raise PreconditionError(
            "bounds pinch some atom; certificates require a box with volume")
    report = slater_report if slater_report is not None else find_slater(prob, tol)
    if report.found:
        raise PreconditionError(
            "an interior feasible point exists; there is nothing to certify")
    if report.feasible_point is None:
        raise PreconditionError(
            "no feasible point exists; emptiness needs no density certificate")
    if xbar is None:
        xbar = report.feasible_point
    xbar = np.asarray(xbar, dtype=float)
    feas = check_feasible(
        Problem(prob.space, prob.p, prob.lower, prob.upper, prob.ineq, prob.eq),
        xbar, max(tol, 1e2 * tol))
    if not feas:
        worst = feas.violations[0]
        raise InfeasiblePointError(
            f"base point is infeasible: {worst.kind}[{worst.index}] off by "
            f"{worst.residual:.3g}")

    system = build_mfcq_system(prob, tol)
    active = _active_tilde(system, xbar, tol)
    cols = _certificate_columns(system, active)
    n_lam, n_mu = len(active), len(system.eq)

    cand = _phase_main(prob, system, xbar, cols, active, tol)
    if cand is None:
        cand = _phase_atomwise(prob, system, xbar, cols, active, tol)
    if cand is None:
        raise CertificateNotFoundError(
            "no certificate cleared the working tolerance; this reports a "
            "numerical limit, not the existence of an interior point")
    lam_vec, mu_vec = cand
    zeta = cols @ np.concatenate([lam_vec, mu_vec])
    norm = float(np.max(np.abs(zeta)))
    if norm <= tol:
        raise CertificateNotFoundError(
            "candidate density vanished under normalization")
    zeta /= norm
    lam_vec = lam_vec / norm
    mu_vec = mu_vec / norm

    lo_only, hi_only, interior = _bound_masks(prob, xbar, tol)
    sign_res = max(
        float(np.max(-zeta[lo_only], initial=0.0)),
        float(np.max(zeta[hi_only], initial=0.0)),
        float(np.max(np.abs(zeta[interior]), initial=0.0)),
        max((-v for v in lam_vec), default=0.0),
    )
    comb = zeta - cols @ np.concatenate([lam_vec, mu_vec])
    comb_res = float(np.max(np.abs(comb), initial=0.0))
    support_pos = tuple(int(i) for i in np.nonzero(zeta > tol)[0])
    support_neg = tuple(int(i) for i in np.nonzero(zeta < -tol)[0])
    cert = NoSlaterCertificate(
        zeta=zeta, lam={active[k]: float(v) for k, v in enumerate(lam_vec)},
        mu=mu_vec, system=system, base_point=xbar,
        sign_residual=sign_res, combination_residual=comb_res,
        support_positive=support_pos, support_negative=support_neg,
        peak_atom=int(np.argmax(np.abs(zeta))))
    if cert.max_residual > 100 * tol:
        raise CertificateNotFoundError(
            f"certificate residual {cert.max_residual:.3g} exceeds the "
            f"acceptable multiple of the tolerance {tol:g}")
    return cert


def _phase_main(prob: Problem, system: MfcqSystem, xbar, cols, active, tol):
    """One LP: maximize the pairing of the density against the gap between
    the base point and the rewrite witness, under the sign pattern.

    Variables are the inequality weights and split equality weights,
    normalized to total mass one.  A positive optimum forces the density
    nonzero: at an active inequality the gap pairing equals the witness
    slack, which is strictly positive.
    """
    n_lam, n_mu = len(active), len(system.eq)
    nv = n_lam + 2 * n_mu
    if nv == 0:
        return None
    ext = np.zeros((prob.size, nv))
    ext[:, :n_lam] = cols[:, :n_lam]
    ext[:, n_lam:n_lam + n_mu] = cols[:, n_lam:]
    ext[:, n_lam + n_mu:] = -cols[:, n_lam:]
    wrows, wrel, wrhs = _sign_rows(prob, xbar, ext * prob.space.weights[:, None], tol)
    wrows.append(np.ones(nv))
    wrel.append("==")
    wrhs.append(1.0)
    A = np.array(wrows)
    gap = xbar - system.witness
    c = np.array([pairing(system.space, ext[:, k], gap) for k in range(nv)])
    out = lpmod.solve(lpmod.LinearProgram(
        c, A, tuple(wrel), np.array(wrhs),
        np.zeros(nv), np.full(nv, math.inf)), tol=tol)
    if out.status is not lpmod.LpStatus.OPTIMAL or out.value <= tol:
        return None
    lam_vec = out.x[:n_lam]
    mu_vec = out.x[n_lam:n_lam + n_mu] - out.x[n_lam + n_mu:]
    zeta = cols @ np.concatenate([lam_vec, mu_vec])
    if float(np.max(np.abs(zeta), initial=0.0)) <= tol:
        return None
    return lam_vec, mu_vec


def _phase_atomwise(prob: Problem, system: MfcqSystem, xbar, cols, active, tol):
    """Per-atom probes: push the density away from zero one atom at a time.

    Handles certificates made purely of equality slopes, where split
    weights can cancel and the mass normalization says nothing about the
    density itself.  Variables are box-bounded, so each probe is a bounded
    LP; any true certificate scales into its box and shows up at some atom.
    """
    n_lam, n_mu = len(active), len(system.eq)
    nv = n_lam + n_mu
    if nv == 0:
        return None
    wcols = cols * prob.space.weights[:, None]
    wrows, wrel, wrhs = _sign_rows(prob, xbar, wcols, tol)
    A = np.array(wrows) if wrows else np.zeros((0, nv))
    lo = np.concatenate([np.zeros(n_lam), -np.ones(n_mu)])
    hi = np.ones(nv)
    lo_only, hi_only, _ = _bound_masks(prob, xbar, tol)
    probe_atoms = ([(i, 1.0) for i in np.nonzero(lo_only)[0]]
                   + [(i, -1.0) for i in np.nonzero(hi_only)[0]])
    for atom, sign in probe_atoms:
        c = sign * cols[atom]
        out = lpmod.solve(lpmod.LinearProgram(
            c, A, tuple(wrel), np.array(wrhs), lo, hi), tol=tol)
        if out.status is lpmod.LpStatus.OPTIMAL and out.value > tol:
            return out.x[:n_lam], out.x[n_lam:]
    return None


def build_bad_functional(prob: Problem, xbar: np.ndarray,
                         cert: NoSlaterCertificate,
                         profile="log") -> np.ndarray:
    """Objective slope designed to make multipliers degenerate.

    The slope lives on the certificate's support and follows ``profile``
    there, ordered by atom index: ``"log"`` places ``log((2r-1)/(2s))`` at
    the r-th of s support atoms, ``"constant"`` places -1, and a callable
    receives ``(r, s)`` and returns the value.  On a negative support the
    values flip sign.  Elsewhere the slope is zero, so any multiplier set
    must fight the certificate density head on.  ``xbar`` is the base
    point the certificate was anchored at; refining the discretization of
    the same family drives the minimal multiplier mass for this slope to
    infinity while ``xbar`` stays optimal.

    Raises
    ------
    PreconditionError
        If the certificate support is empty, the profile name is unknown,
        or ``xbar`` differs from the certificate's base point.
    """
    xbar = np.asarray(xbar, dtype=float)
    if xbar.shape != cert.base_point.shape or not np.allclose(
            xbar, cert.base_point, atol=1e-12, rtol=0.0):
        raise PreconditionError(
            "base point differs from the one the certificate was built at")
    if callable(profile):
        fn = profile
    elif profile == "log":
        fn = lambda r, s: math.log((2 * r - 1) / (2 * s))
    elif profile == "constant":
        fn = lambda r, s: -1.0
    else:
        raise PreconditionError(f"unknown profile {profile!r}")
    if cert.support_positive:
        atoms, sign = cert.support_positive, 1.0
    elif cert.support_negative:
        atoms, sign = cert.support_negative, -1.0
    else:
        raise PreconditionError("certificate has empty support")
    z = np.zeros(prob.size)
    s = len(atoms)
    for r, atom in enumerate(sorted(atoms), start=1):
        z[atom] = sign * fn(r, s)
    return z


# ---------------------------------------------------------------------------
# refinement studies

def log_counterexample_model(level: int):
    """Midpoint discretization of the unit interval with a log slope.

    Uniform weights 1/level, lower bound zero, no upper bound, and one
    inequality capping the total mass at zero, which pins the feasible set
    to the origin.  The slope samples ``log`` at the atom midpoints; the
    minimal multiplier mass for this family is exactly ``log(2 * level)``,
    so refining the discretization drives it to infinity.
    """
    m = int(level)
    space = MeasureSpace(np.full(m, 1.0 / m))
    prob = Problem(space, 2.0, np.zeros(m), np.full(m, math.inf),
                   ineq=((np.ones(m), 0.0),))
    xbar = np.zeros(m)
    grad = np.log((2 * np.arange(1, m + 1) - 1) / (2.0 * m))
    return prob, xbar, grad


def constant_control_model(level: int):
    """Same constraint family with a flat slope; multiplier mass stays 1."""
    m = int(level)
    space = MeasureSpace(np.full(m, 1.0 / m))
    prob = Problem(space, 2.0, np.zeros(m), np.full(m, math.inf),
                   ineq=((np.ones(m), 0.0),))
    xbar = np.zeros(m)
    grad = -np.ones(m)
    return prob, xbar, grad


MODELS = {
    "log-counterexample": log_counterexample_model,
    "constant-control": constant_control_model,
}


@dataclass(frozen=True)
class RefinementReport:
    """Minimal multiplier mass across refinement levels, with a fitted law.

    ``alpha`` holds the minimal total multiplier mass per level and
    ``residual`` the stationarity residual of the recovered multipliers.
    The fitted law regresses mass against the logarithm of the level.
    """

    model: str
    levels: tuple[int, ...]
    alpha: tuple[float, ...]
    residual: tuple[float, ...]
    slope: float
    intercept: float
    r_squared: float
    description: str


def _multiplier_mass(mult) -> float:
    return float(sum(mult.alpha.values()) + np.sum(np.abs(mult.beta))
                 + sum(mult.gamma.values()))


def refinement_study(model="log-counterexample", levels=(4, 16, 64, 256),
                     tol: float = DEFAULT_TOL) -> RefinementReport:
    """Recover multipliers across refinement levels and fit a growth law.

    ``model`` is a registry name or a callable mapping a level to
    ``(problem, point, slope)``.  Each level must admit multipliers; the
    minimal total mass is recorded and regressed against ``log(level)``.

    Raises
    ------
    NumericalFailureError
        If some level fails to produce multipliers.
    """
    if callable(model):
        factory, name = model, getattr(model, "__name__", "custom")
    else:
        try:
            factory = MODELS[model]
        except KeyError:
            raise PreconditionError(
                f"unknown model {model!r}; known: {sorted(MODELS)}") from None
        name = model
    levels = tuple(int(v) for v in levels)
    if not levels or any(v < 1 for v in levels):
        raise PreconditionError("levels must be positive integers")
    alphas, residuals = [], []
    for lv in levels:
        prob, xbar, grad = factory(lv)
        outcome = recover_multipliers_linear(prob, xbar, grad, tol)
        if not outcome.found:
            raise NumericalFailureError(
                f"level {lv}: no multipliers recovered ({outcome.status})")
        alphas.append(_multiplier_mass(outcome.multipliers))
        residuals.append(verify_stationarity(
            prob, xbar, grad, outcome.multipliers, tol).residual_max)
    logs = np.log(np.array(levels, dtype=float))
    if len(levels) >= 2 and float(np.ptp(logs)) > 0:
        slope, intercept = np.polyfit(logs, np.array(alphas), 1)
        fit = slope * logs + intercept
        ss_res = float(np.sum((np.array(alphas) - fit) ** 2))
        ss_tot = float(np.sum((np.array(alphas) - np.mean(alphas)) ** 2))
        r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    else:
        slope, intercept, r2 = 0.0, float(alphas[0]), 1.0
    if abs(slope) <= 1e-3 * max(1.0, abs(intercept)):
        desc = (f"minimal multiplier mass stays near {intercept:.6g} "
                f"across levels {levels}")
    else:
        desc = (f"minimal multiplier mass grows like {slope:.6g} * log(level) "
                f"+ {intercept:.6g} (r^2 = {r2:.6f}); unbounded under refinement")
    return RefinementReport(
        model=name, levels=levels, alpha=tuple(float(a) for a in alphas),
        residual=tuple(float(r) for r in residuals),
        slope=float(slope), intercept=float(intercept), r_squared=float(r2),
        description=desc)
