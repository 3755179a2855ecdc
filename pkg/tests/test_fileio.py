"""Problem and point file parsing plus deterministic JSON output."""

import json
import math

import numpy as np
import pytest

from slaterkit import (
    FileFormatError,
    canonical_json,
    load_point,
    load_problem,
    problem_to_dict,
)


def _write(tmp_path, name, payload):
    path = tmp_path / name
    if isinstance(payload, str):
        path.write_text(payload)
    else:
        path.write_text(json.dumps(payload))
    return str(path)


FULL = {
    "p": 2,
    "weights": [1.0, 2.0],
    "lower": [0.0, "-inf"],
    "upper": ["inf", 1.0],
    "ineq": [{"g": [1.0, 0.0], "a": 3.0}],
    "eq": [{"h": [0.0, 1.0], "b": 0.5}],
    "objective_gradient": [1.0, -1.0],
}


class TestLoadProblem:
    """Parsing the problem-file schema."""

    def test_round_trip(self, tmp_path):
        prob, objective = load_problem(_write(tmp_path, "p.json", FULL))
        again, obj2 = load_problem(_write(
            tmp_path, "q.json",
            json.dumps(problem_to_dict(prob, objective))))
        assert again.p == prob.p == 2.0
        np.testing.assert_array_equal(again.space.weights, [1.0, 2.0])
        np.testing.assert_array_equal(again.lower, prob.lower)
        np.testing.assert_array_equal(again.upper, prob.upper)
        np.testing.assert_array_equal(again.ineq[0][0], [1.0, 0.0])
        assert again.eq[0][1] == 0.5
        assert obj2["kind"] == objective["kind"] == "gradient"
        np.testing.assert_array_equal(obj2["values"], objective["values"])

    def test_infinite_bounds(self, tmp_path):
        prob, _ = load_problem(_write(tmp_path, "p.json", FULL))
        assert prob.lower[1] == -math.inf
        assert prob.upper[0] == math.inf

    def test_p_accepts_inf_and_defaults_to_two(self, tmp_path):
        base = {"weights": [1.0], "lower": [0.0], "upper": [1.0]}
        prob, _ = load_problem(_write(tmp_path, "a.json",
                                      dict(base, p="inf")))
        assert prob.p == math.inf
        prob, _ = load_problem(_write(tmp_path, "b.json", base))
        assert prob.p == 2.0

    def test_quadratic_rows(self, tmp_path):
        payload = {"weights": [1.0], "lower": [0.0], "upper": [2.0],
                   "quad_ineq": [{"Q": [[2.0]], "q": [0.0], "c": -1.0}]}
        prob, _ = load_problem(_write(tmp_path, "q.json", payload))
        con = prob.nonlinear[0]
        assert con.value(np.array([1.0])) == pytest.approx(0.0)
        assert con.value(np.array([2.0])) == pytest.approx(3.0)
        np.testing.assert_allclose(con.grad(np.array([1.0])), [2.0])

    def test_both_objectives_rejected(self, tmp_path):
        payload = dict(FULL, objective_linear=[1.0, 1.0])
        with pytest.raises(FileFormatError, match="exclusive"):
            load_problem(_write(tmp_path, "p.json", payload))

    def test_unknown_field_rejected(self, tmp_path):
        payload = dict(FULL, extra=[1])
        with pytest.raises(FileFormatError, match="unknown field 'extra'"):
            load_problem(_write(tmp_path, "p.json", payload))

    def test_missing_field_rejected(self, tmp_path):
        payload = {k: v for k, v in FULL.items() if k != "upper"}
        with pytest.raises(FileFormatError, match="'upper'"):
            load_problem(_write(tmp_path, "p.json", payload))

    def test_malformed_json_reports_position(self, tmp_path):
        path = _write(tmp_path, "p.json", '{\n  "weights": [1.0,]\n}\n')
        with pytest.raises(FileFormatError, match="line 2 column"):
            load_problem(path)

    def test_length_mismatch_rejected(self, tmp_path):
        payload = dict(FULL, lower=[0.0])
        with pytest.raises(FileFormatError):
            load_problem(_write(tmp_path, "p.json", payload))
        payload = dict(FULL, ineq=[{"g": [1.0], "a": 0.0}])
        with pytest.raises(FileFormatError):
            load_problem(_write(tmp_path, "p.json", payload))

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileFormatError, match="cannot read"):
            load_problem(str(tmp_path / "absent.json"))

    def test_stray_keys_in_rows_rejected(self, tmp_path):
        payload = dict(FULL, ineq=[{"g": [1.0, 0.0], "a": 0.0, "note": 1}])
        with pytest.raises(FileFormatError, match=r"ineq\[0\]"):
            load_problem(_write(tmp_path, "p.json", payload))


class TestLoadPoint:
    """Point files are bare JSON arrays."""

    def test_bare_array(self, tmp_path):
        np.testing.assert_array_equal(
            load_point(_write(tmp_path, "x.json", [0.5, 1.0])), [0.5, 1.0])

    def test_object_rejected(self, tmp_path):
        with pytest.raises(FileFormatError, match="array"):
            load_point(_write(tmp_path, "x.json", {"x": [1.0]}))

    def test_non_numeric_entry_rejected(self, tmp_path):
        with pytest.raises(FileFormatError, match=r"point\[1\]"):
            load_point(_write(tmp_path, "x.json", [0.5, "a"]))


class TestCanonicalJson:
    """Stable text for report payloads."""

    def test_sorted_keys_and_compact(self):
        assert canonical_json({"b": 1, "a": 2}) == '{"a":2,"b":1}\n'

    def test_float_precision_round_trips(self):
        val = math.log(8)
        text = canonical_json({"v": val})
        assert json.loads(text)["v"] == val

    def test_special_values_quoted(self):
        assert canonical_json([math.inf, -math.inf, math.nan]) == \
            '["inf","-inf","nan"]\n'

    def test_numpy_scalars_and_arrays(self):
        text = canonical_json({"a": np.array([1.0, 2.0]),
                               "n": np.int64(3), "x": np.float64(0.5)})
        assert text == '{"a":[1,2],"n":3,"x":0.5}\n'

    def test_deterministic(self):
        payload = {"z": [1.0, {"k": math.pi}], "a": "text", "m": None}
        assert canonical_json(payload) == canonical_json(payload)

    def test_unserializable_rejected(self):
        with pytest.raises(FileFormatError):
            canonical_json({"f": object()})


class TestProblemToDict:
    """Serializing problems back to the schema."""

    def test_infinite_bounds_become_strings(self, tmp_path):
        prob, _ = load_problem(_write(tmp_path, "p.json", FULL))
        out = problem_to_dict(prob)
        assert out["lower"][1] == "-inf"
        assert out["upper"][0] == "inf"
        assert out["p"] == 2.0

    def test_non_quadratic_constraint_rejected(self):
        from slaterkit import MeasureSpace, Problem

        class Opaque:
            def value(self, x):
                return -1.0

            def grad(self, x):
                return np.zeros(1)

        prob = Problem(MeasureSpace(np.ones(1)), 2.0, np.zeros(1),
                       np.ones(1), (), (), (Opaque(),))
        with pytest.raises(FileFormatError):
            problem_to_dict(prob)
