"""Dense LP kernel: solutions, duals, Farkas rays, and oracle agreement."""

import math

import numpy as np
import pytest

from slaterkit import LinearProgram, LpStatus, feasibility, solve
from slaterkit.lp import LE, GE, EQ
from slaterkit import oracles


def _lp(c, A, rel, b, lower, upper):
    return LinearProgram(np.asarray(c, dtype=float),
                         np.asarray(A, dtype=float).reshape(len(rel), len(c)),
                         tuple(rel), np.asarray(b, dtype=float),
                         np.asarray(lower, dtype=float),
                         np.asarray(upper, dtype=float))


class TestSolve:
    """The three contract examples plus certificate checks."""

    def test_box_corner_optimum(self):
        lp = _lp([1, 1], [[1, 0], [0, 1]], [LE, LE], [1, 1],
                 [0, 0], [math.inf, math.inf])
        out = solve(lp)
        assert out.status is LpStatus.OPTIMAL
        assert abs(out.value - 2.0) <= 1e-9
        np.testing.assert_allclose(out.x, [1.0, 1.0], atol=1e-9)

    def test_infeasible_with_farkas_ray(self):
        lp = _lp([0], [[1], [-1]], [LE, LE], [-1, 0],
                 [-math.inf], [math.inf])
        out = solve(lp)
        assert out.status is LpStatus.INFEASIBLE
        y = out.farkas.row_mult
        np.testing.assert_allclose(y, [1.0, 1.0], atol=1e-9)
        assert abs(y @ np.array([[1.0], [-1.0]])).max() <= 1e-9
        assert y @ np.array([-1.0, 0.0]) < -1e-9
        assert np.max(np.abs(out.farkas.combination_residual(lp))) <= 1e-9
        assert out.farkas.combined_rhs(lp) < -1e-9

    def test_unbounded_with_ray(self):
        lp = _lp([1], np.zeros((0, 1)), [], [], [0.0], [math.inf])
        out = solve(lp)
        assert out.status is LpStatus.UNBOUNDED
        np.testing.assert_allclose(out.ray, [1.0], atol=1e-12)
        assert out.x is not None

    def test_equality_rows(self):
        lp = _lp([0, 1], [[1, 1], [1, -1]], [EQ, EQ], [2, 0],
                 [0, 0], [5, 5])
        out = solve(lp)
        assert out.status is LpStatus.OPTIMAL
        np.testing.assert_allclose(out.x, [1.0, 1.0], atol=1e-9)

    def test_deterministic(self):
        lp = _lp([1, 2, 3], [[1, 1, 1], [2, 0, 1]], [LE, LE], [4, 5],
                 [0, 0, 0], [3, 3, 3])
        a, b = solve(lp), solve(lp)
        assert a.status is b.status
        np.testing.assert_array_equal(a.x, b.x)


class TestFeasibility:
    """Zero-objective wrapper."""

    def test_single_equality(self):
        out = feasibility(np.array([[1.0]]), (EQ,), np.array([1.0]),
                          np.array([-math.inf]), np.array([math.inf]))
        assert out.status is LpStatus.OPTIMAL
        np.testing.assert_allclose(out.x, [1.0], atol=1e-9)

    def test_contradiction_gives_ray(self):
        out = feasibility(np.array([[1.0], [1.0]]), (LE, GE),
                          np.array([0.0, 1.0]),
                          np.array([-math.inf]), np.array([math.inf]))
        assert out.status is LpStatus.INFEASIBLE
        assert out.farkas is not None

    def test_empty_system_free_variable(self):
        out = feasibility(np.zeros((0, 1)), (), np.zeros(0),
                          np.array([-math.inf]), np.array([math.inf]))
        assert out.status is LpStatus.OPTIMAL
        np.testing.assert_allclose(out.x, [0.0], atol=1e-12)


class TestOracleAgreement:
    """Status and value match exact rational enumeration on tiny LPs."""

    def test_random_lattice_instances(self):
        rng = np.random.default_rng(424242)
        rels = np.array([LE, LE, GE, EQ])
        for case in range(250):
            nv = int(rng.integers(1, 4))
            nr = int(rng.integers(0, 5))
            c = rng.integers(-3, 4, size=nv).astype(float)
            A = rng.integers(-3, 4, size=(nr, nv)).astype(float)
            rel = tuple(rels[rng.integers(0, 4 if nr else 1, size=nr)])
            b = rng.integers(-3, 4, size=nr).astype(float)
            lower = np.where(rng.random(nv) < 0.8,
                             rng.integers(-3, 1, size=nv), -math.inf)
            upper = np.where(rng.random(nv) < 0.8,
                             rng.integers(0, 4, size=nv), math.inf)
            bad = lower > upper
            lower[bad], upper[bad] = upper[bad], lower[bad]
            for j in range(nv):
                if not (math.isfinite(lower[j]) or math.isfinite(upper[j])):
                    lower[j] = float(rng.integers(-3, 1))
            lp = _lp(c, A, rel, b, lower, upper)
            out = solve(lp)
            status, value = oracles.lp_oracle_exact(
                [int(v) for v in c], [[int(v) for v in row] for row in A],
                list(rel), [int(v) for v in b],
                [None if not math.isfinite(v) else int(v) for v in lower],
                [None if not math.isfinite(v) else int(v) for v in upper])
            assert out.status.value == status, f"case {case}"
            if status == "optimal":
                ref = float(value)
                assert abs(out.value - ref) <= 1e-9 * max(1.0, abs(ref))
            if status == "infeasible":
                assert out.farkas is not None
                assert np.max(np.abs(out.farkas.combination_residual(lp))) <= 1e-7
                assert out.farkas.combined_rhs(lp) < 0.0
