"""Interior point search, density nudge, blending, linearized variant."""

import math

import numpy as np
import pytest

from slaterkit import (
    ConstructionFailedError,
    InfeasiblePointError,
    MeasureSpace,
    PreconditionError,
    Problem,
    QuadraticConstraint,
    check_feasible,
    combine_slater,
    density_construction,
    find_linearized_slater,
    find_slater,
    log_counterexample_model,
    pairing,
)
from conftest import anchored_problem


def _prob(weights, lower, upper, ineq=(), eq=(), nonlinear=()):
    return Problem(MeasureSpace(np.asarray(weights, float)), 2.0,
                   np.asarray(lower, float), np.asarray(upper, float),
                   tuple(ineq), tuple(eq), tuple(nonlinear))


class TestFindSlater:
    """Margin maximization over box and linear rows."""

    def test_symmetric_equality_instance(self):
        prob = _prob([0.5, 0.5], [0, 0], [1, 1],
                     eq=[(np.ones(2), 0.5)])
        rep = find_slater(prob)
        assert rep.found
        np.testing.assert_allclose(rep.point, [0.5, 0.5], atol=1e-9)
        assert abs(rep.margin - 0.5) <= 1e-9

    def test_pinned_instance_not_found(self):
        prob, _, _ = log_counterexample_model(4)
        rep = find_slater(prob)
        assert not rep.found
        assert rep.feasible_point is not None

    def test_degenerate_bounds_not_found(self):
        prob = _prob([1.0, 1.0], [0, 0], [0, 1])
        rep = find_slater(prob)
        assert not rep.found
        assert rep.diagnostics.get("pinched_atoms") == [0]

    def test_found_point_is_strict(self):
        rng = np.random.default_rng(91)
        found = 0
        for _ in range(200):
            prob, _ = anchored_problem(rng, int(rng.integers(1, 5)),
                                       int(rng.integers(0, 3)),
                                       int(rng.integers(0, 2)))
            rep = find_slater(prob)
            if not rep.found:
                continue
            found += 1
            x = rep.point
            assert np.all(x > prob.lower) and np.all(x < prob.upper)
            for g, a in prob.ineq:
                assert pairing(prob.space, g, x) <= a + 1e-9
            for h, b in prob.eq:
                assert abs(pairing(prob.space, h, x) - b) <= 1e-9
            assert rep.margin > 1e-9
        assert found > 50

    def test_equivalent_rescaling_keeps_outcome(self):
        # Scaling the weights and the right-hand sides together leaves the
        # feasible set unchanged, so status and point must not move.
        rng = np.random.default_rng(92)
        for _ in range(50):
            prob, _ = anchored_problem(rng, int(rng.integers(1, 4)),
                                       int(rng.integers(0, 3)),
                                       int(rng.integers(0, 2)))
            c = float(rng.choice([0.5, 2.0, 4.0]))
            scaled = Problem(
                MeasureSpace(prob.space.weights * c), prob.p,
                prob.lower, prob.upper,
                tuple((g, a * c) for g, a in prob.ineq),
                tuple((h, b * c) for h, b in prob.eq))
            rep = find_slater(prob)
            rep_c = find_slater(scaled)
            assert rep.found == rep_c.found
            if rep.found:
                np.testing.assert_allclose(rep.point, rep_c.point, atol=1e-9)


class TestDensityConstruction:
    """Nudging a feasible point off its active bounds."""

    def test_infinite_gap_uses_weight(self):
        prob = _prob([1.0], [0.0], [math.inf])
        out = density_construction(prob, np.zeros(1), np.ones(1))
        np.testing.assert_array_equal(out, [1.0])

    def test_upper_active_steps_back(self):
        prob = _prob([1.0], [0.0], [1.0])
        out = density_construction(prob, np.ones(1), np.array([0.1]))
        np.testing.assert_allclose(out, [0.5], atol=1e-12)

    def test_interior_unchanged(self):
        prob = _prob([1.0], [0.0], [1.0])
        out = density_construction(prob, np.array([0.3]), np.ones(1))
        np.testing.assert_array_equal(out, [0.3])

    def test_strictly_inside_on_random_instances(self):
        rng = np.random.default_rng(93)
        for _ in range(1000):
            m = int(rng.integers(1, 5))
            lower = rng.integers(-2, 1, size=m).astype(float)
            upper = lower + rng.integers(1, 3, size=m).astype(float)
            for i in range(m):
                r = rng.random()
                if r < 0.15:
                    lower[i] = -math.inf
                elif r < 0.3:
                    upper[i] = math.inf
            prob = _prob(rng.integers(1, 3, size=m).astype(float),
                         lower, upper)
            from conftest import lattice_point
            x = lattice_point(rng, lower, upper, stick=0.8)
            w = rng.integers(1, 4, size=m).astype(float) / 2.0
            out = density_construction(prob, x, w)
            assert np.all(out > prob.lower) and np.all(out < prob.upper)

    def test_nonpositive_weight_rejected(self):
        prob = _prob([1.0], [0.0], [1.0])
        with pytest.raises(PreconditionError):
            density_construction(prob, np.zeros(1), np.zeros(1))

    def test_degenerate_bounds_rejected(self):
        prob = _prob([1.0], [0.0], [0.0])
        with pytest.raises(PreconditionError):
            density_construction(prob, np.zeros(1), np.ones(1))


class TestCombineSlater:
    """Blend of a strictly-slack point with a box-interior point."""

    def test_two_interior_points(self):
        prob = _prob([1.0], [0.0], [1.0], ineq=[(np.ones(1), 1.0)])
        x, eps = combine_slater(prob, np.array([0.5]), np.array([0.5]), {0})
        assert eps == 0.5
        rep = find_slater(prob)
        assert rep.found

    def test_near_boundary_ring_point(self):
        prob = _prob([1.0], [0.0], [1.0], ineq=[(np.ones(1), 1.0)])
        x, eps = combine_slater(prob, np.array([0.999]), np.array([0.5]), {0})
        assert 0.0 < x[0] < 1.0
        assert pairing(prob.space, np.ones(1), x) < 1.0

    def test_equality_violation_rejected(self):
        prob = _prob([1.0], [0.0], [1.0], eq=[(np.ones(1), 0.5)])
        with pytest.raises(PreconditionError):
            combine_slater(prob, np.array([0.9]), np.array([0.5]), set())


class TestFindLinearizedSlater:
    """Active smooth rows enter as linear cuts at the base point."""

    def _circle(self, lower, upper):
        sp = MeasureSpace(np.ones(1))
        con = QuadraticConstraint(sp, np.array([[2.0]]), np.zeros(1), -1.0)
        return Problem(sp, 2.0, np.asarray(lower, float),
                       np.asarray(upper, float), (), (), (con,))

    def test_room_below_found(self):
        prob = self._circle([0.0], [2.0])
        rep = find_linearized_slater(prob, np.array([1.0]))
        assert rep.found
        grad = prob.nonlinear[0].grad(np.array([1.0]))
        assert pairing(prob.space, grad, rep.point - 1.0) < 0

    def test_no_room_not_found(self):
        prob = self._circle([1.0], [2.0])
        rep = find_linearized_slater(prob, np.array([1.0]))
        assert not rep.found

    def test_inactive_constraint_reduces_to_plain_search(self):
        prob = self._circle([0.0], [0.5])
        base = np.array([0.25])
        rep = find_linearized_slater(prob, base)
        plain = find_slater(Problem(prob.space, prob.p, prob.lower,
                                    prob.upper, (), ()))
        assert rep.found == plain.found
        np.testing.assert_allclose(rep.point, plain.point, atol=1e-9)

    def test_infeasible_base_rejected(self):
        prob = self._circle([0.0], [2.0])
        with pytest.raises(InfeasiblePointError):
            find_linearized_slater(prob, np.array([2.0]))
