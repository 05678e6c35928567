import random

import numpy as np
import pytest

from conftest import (
    contribution,
    dependency,
    full_prioritization,
    random_model,
    simple_model,
)
from goalvalue.analysis import (
    DEGENERATE_MATRIX_WARNING,
    DecisionMatrix,
    MissingPrioritiesError,
    analyze,
    build_matrices,
    cc_to_value,
    explain,
    ftopsis_closeness,
    rank,
    run_analysis,
)
from goalvalue.fuzzy import Level, fuzzify
from goalvalue.model import Prioritization
from goalvalue.pistar import import_pistar
from goalvalue.propagation import build_influence_graph, propagate


def matrix_of(cells: dict[str, list[tuple]]) -> DecisionMatrix:
    ids = tuple(sorted(cells))
    n_criteria = len(next(iter(cells.values())))
    return DecisionMatrix(
        alternatives=ids,
        criteria=tuple(f"C{j + 1}" for j in range(n_criteria)),
        cells=np.array([[list(c) for c in cells[a]] for a in ids], dtype=float),
    )


class TestCloseness:
    def test_two_alternatives_single_criterion(self):
        cc, warnings = ftopsis_closeness(
            matrix_of({"top": [(1, 1, 1)], "zero": [(0, 0, 0)]})
        )
        assert cc["top"] == pytest.approx(1.0)
        assert cc["zero"] == pytest.approx(0.5)
        assert warnings == []

    def test_all_zero_alternative_is_neutral(self):
        cc, _ = ftopsis_closeness(
            matrix_of(
                {"a": [(0.2, 0.5, 0.8), (1, 1, 1)], "z": [(0, 0, 0), (0, 0, 0)]}
            )
        )
        assert cc["z"] == pytest.approx(0.5)

    def test_scaling_invariance(self):
        base = {
            "a": [(0.1, 0.2, 0.3), (0.5, 0.6, 0.7)],
            "b": [(0.0, 0.4, 0.9), (0.2, 0.2, 0.2)],
        }
        scaled = {
            k: [cells[0], tuple(3 * c for c in cells[1])] for k, cells in base.items()
        }
        cc1, _ = ftopsis_closeness(matrix_of(base))
        cc2, _ = ftopsis_closeness(matrix_of(scaled))
        for k in cc1:
            assert cc1[k] == pytest.approx(cc2[k], abs=1e-12)

    def test_degenerate_matrix(self):
        cc, warnings = ftopsis_closeness(
            matrix_of({"a": [(0, 0, 0)], "b": [(0, 0, 0)]})
        )
        assert cc == {"a": 0.5, "b": 0.5}
        assert warnings == [DEGENERATE_MATRIX_WARNING]

    def test_empty_matrix_rejected(self):
        with pytest.raises(ValueError):
            ftopsis_closeness(
                DecisionMatrix(alternatives=(), criteria=("C1",), cells=np.zeros((0, 1, 3)))
            )

    def test_dominance(self):
        rng = random.Random(13)
        for _ in range(200):
            n_crit = rng.randint(1, 4)
            dominated = [
                tuple(sorted(rng.uniform(-1, 1) for _ in range(3)))
                for _ in range(n_crit)
            ]
            bump = [rng.uniform(0, 0.5) for _ in range(n_crit)]
            dominant = [
                tuple(c + bump[j] for c in dominated[j]) for j in range(n_crit)
            ]
            cc, _ = ftopsis_closeness(matrix_of({"hi": dominant, "lo": dominated}))
            assert cc["hi"] >= cc["lo"] - 1e-12


class TestValueScale:
    def test_affine_map(self):
        assert cc_to_value(0.5) == pytest.approx(0.0)
        assert cc_to_value(1.0) == pytest.approx(100.0)
        assert cc_to_value(0.25) == pytest.approx(-50.0)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            cc_to_value(1.5)


class TestBuildMatrices:
    def test_single_isolated_element(self):
        model = simple_model({"a1": ["e1"]})
        prioritization = Prioritization({"e1": (Level.MEDIUM, Level.VERY_HIGH)})
        graph = build_influence_graph(model)
        prop = propagate(graph, {"e1": fuzzify(Level.MEDIUM, Level.VERY_HIGH)})
        global_matrix, locals_ = build_matrices(model, prioritization, prop)
        assert global_matrix.alternatives == ("e1",)
        assert global_matrix.criteria == ("C1", "C2", "C3")
        np.testing.assert_allclose(
            global_matrix.cells[0], [[0.5, 0.5, 0.5], [0, 0, 0], [0, 0, 0]]
        )
        assert locals_["a1"].criteria == ("C1", "C2")

    def test_unassigned_weights_leave_c1_unchanged(self):
        model = simple_model({"a1": ["e1", "e2"]})
        prioritization = Prioritization(
            {
                "e1": (Level.HIGH, Level.MEDIUM),
                "e2": (Level.LOW, Level.VERY_LOW),
            }
        )
        base = {
            eid: fuzzify(imp, conf)
            for eid, (imp, conf) in prioritization.element_priorities.items()
        }
        prop = propagate(build_influence_graph(model), base)
        global_matrix, _ = build_matrices(model, prioritization, prop)
        for i, eid in enumerate(global_matrix.alternatives):
            np.testing.assert_allclose(
                global_matrix.cells[i, 0], list(base[eid].as_tuple())
            )

    def test_missing_priorities_listed(self):
        model = simple_model({"a1": ["e1", "e2", "e3"]})
        prioritization = Prioritization({"e2": (Level.HIGH, Level.HIGH)})
        prop = propagate(
            build_influence_graph(model), {"e2": fuzzify(Level.HIGH, Level.HIGH)}
        )
        with pytest.raises(MissingPrioritiesError) as excinfo:
            build_matrices(model, prioritization, prop)
        assert excinfo.value.missing == ["e1", "e3"]


class TestAnalyze:
    def test_single_isolated_element(self):
        model = simple_model({"a1": ["e1"]})
        result = analyze(
            model, Prioritization({"e1": (Level.HIGH, Level.MEDIUM)})
        )
        row = result.rows["e1"]
        assert row.local_value == pytest.approx(row.global_value)
        assert row.other_actor_value == pytest.approx(0.0)

    def test_degenerate_model_all_zero(self):
        model = simple_model({"a1": ["e1", "e2"]})
        prioritization = Prioritization(
            {
                "e1": (Level.VERY_LOW, Level.VERY_HIGH),
                "e2": (Level.VERY_LOW, Level.VERY_HIGH),
            }
        )
        result = analyze(model, prioritization)
        for row in result.rows.values():
            assert row.global_value == pytest.approx(0.0)
            assert row.local_value == pytest.approx(0.0)
        assert DEGENERATE_MATRIX_WARNING in result.warnings

    def test_scheduler_fixture_against_independent_oracle(self, pistar_scheduler):
        # expected values frozen from a scratchpad reimplementation of the
        # whole pipeline on top of a dense direct solve (see tests/oracle.py)
        model, _ = import_pistar(pistar_scheduler)
        prioritization = Prioritization(
            {
                "g-schedule": (Level.HIGH, Level.HIGH),
                "t-collect": (Level.MEDIUM, Level.LOW),
                "q-fast": (Level.LOW, Level.VERY_HIGH),
                "g-attend": (Level.VERY_HIGH, Level.MEDIUM),
                "t-timetable": (Level.MEDIUM, Level.HIGH),
            },
            {"actor-init": Level.HIGH},
        )
        result = analyze(model, prioritization)
        expected = {
            "g-attend": (31.2871719725, 46.8089568010, 46.8089568010, -15.5217848285),
            "g-schedule": (18.4462790566, 45.3544437881, 27.5497372247, -9.1034581682),
            "q-fast": (6.2387790092, 15.3846153846, 9.3560667043, -3.1172876950),
            "t-collect": (41.7261673790, 74.7542507913, 62.2492625566, -20.5230951776),
            "t-timetable": (77.7469732058, 71.5099356098, 71.5099356098, 6.2370375961),
        }
        for eid, (g, l, s, o) in expected.items():
            row = result.rows[eid]
            assert row.global_value == pytest.approx(g, abs=1e-6)
            assert row.local_value == pytest.approx(l, abs=1e-6)
            assert row.same_actor_value == pytest.approx(s, abs=1e-6)
            assert row.other_actor_value == pytest.approx(o, abs=1e-6)
        # dependee receives cross-actor value through the dependency
        assert result.rows["t-timetable"].other_actor_value != pytest.approx(0.0)

    def test_value_contract_on_random_models(self):
        rng = random.Random(31)
        for _ in range(15):
            model = random_model(rng, max_elements=15)
            prioritization = full_prioritization(model, rng)
            result = analyze(model, prioritization)
            for row in result.rows.values():
                for value in (
                    row.global_value,
                    row.local_value,
                    row.same_actor_value,
                    row.other_actor_value,
                ):
                    assert -100.0 <= value <= 100.0
                assert row.same_actor_value + row.other_actor_value == pytest.approx(
                    row.global_value, abs=1e-9
                )

    def test_determinism(self):
        model = simple_model(
            {"a1": ["e1", "e2"]}, links=[contribution("l1", "e1", "e2", "help")]
        )
        prioritization = Prioritization(
            {
                "e1": (Level.HIGH, Level.MEDIUM),
                "e2": (Level.MEDIUM, Level.HIGH),
            }
        )
        r1 = analyze(model, prioritization, created_at="t")
        r2 = analyze(model, prioritization, created_at="t")
        assert r1.to_json() == r2.to_json()


class TestRank:
    def _result(self):
        model = simple_model({"a1": ["alpha", "beta"], "a2": ["gamma"]})
        prioritization = Prioritization(
            {
                "alpha": (Level.HIGH, Level.VERY_HIGH),
                "beta": (Level.HIGH, Level.VERY_HIGH),
                "gamma": (Level.VERY_LOW, Level.VERY_HIGH),
            }
        )
        return analyze(model, prioritization)

    def test_descending(self):
        result = self._result()
        ordered = rank(result, by="global")
        values = [v for _, v in ordered]
        assert values == sorted(values, reverse=True)

    def test_tie_break_by_name(self):
        result = self._result()
        ordered = rank(result, by="global")
        # alpha and beta have identical inputs -> tie broken alphabetically
        ids = [eid for eid, _ in ordered]
        assert ids.index("alpha") < ids.index("beta")

    def test_actor_filter(self):
        result = self._result()
        ordered = rank(result, by="local", actor_filter="a1")
        assert {eid for eid, _ in ordered} == {"alpha", "beta"}

    def test_unknown_actor(self):
        result = self._result()
        with pytest.raises(KeyError):
            rank(result, by="local", actor_filter="nobody")

    def test_ranking_consistency(self):
        result = self._result()
        assert [eid for eid, _ in rank(result, by="global")] == list(
            result.global_ranking
        )


class TestExplain:
    def test_isolated_element_single_self_entry(self):
        model = simple_model({"a1": ["e1"]})
        prioritization = Prioritization({"e1": (Level.HIGH, Level.MEDIUM)})
        result, prop = run_analysis(model, prioritization)
        entries = explain(result, model, prop, "e1")
        assert len(entries) == 1
        assert entries[0].source_id == "e1"
        assert entries[0].same_actor is True
        assert entries[0].impact_tfn == fuzzify(Level.HIGH, Level.MEDIUM)

    def test_chain_entry_impact(self):
        model = simple_model(
            {"a1": ["e1", "e2"]}, links=[contribution("l1", "e1", "e2", "help")]
        )
        prioritization = Prioritization(
            {
                "e1": (Level.VERY_LOW, Level.VERY_HIGH),  # fuzzifies to (0,0,0)
                "e2": (Level.VERY_HIGH, Level.VERY_HIGH),  # fuzzifies to (1,1,1)
            }
        )
        result, prop = run_analysis(model, prioritization)
        entries = {e.source_id: e for e in explain(result, model, prop, "e1")}
        assert entries["e2"].impact == pytest.approx(0.45)
        assert entries["e2"].same_actor is True

    def test_hurt_source_negative(self):
        model = simple_model(
            {"a1": ["e1"], "a2": ["e2"]},
            links=[contribution("l1", "e1", "e2", "hurt")],
        )
        prioritization = Prioritization(
            {
                "e1": (Level.VERY_LOW, Level.VERY_HIGH),
                "e2": (Level.HIGH, Level.VERY_HIGH),
            }
        )
        result, prop = run_analysis(model, prioritization)
        entries = {e.source_id: e for e in explain(result, model, prop, "e1")}
        assert entries["e2"].impact < 0
        assert entries["e2"].same_actor is False

    def test_dependum_rejected(self):
        model = simple_model(
            {"a1": ["g1"], "a2": ["t1"]},
            links=[dependency("l1", "g1", "d", "t1")],
            dependums=["d"],
        )
        prioritization = Prioritization(
            {
                "g1": (Level.HIGH, Level.HIGH),
                "t1": (Level.HIGH, Level.HIGH),
            }
        )
        result, prop = run_analysis(model, prioritization)
        with pytest.raises(ValueError):
            explain(result, model, prop, "d")

    def test_sorted_by_magnitude(self):
        rng = random.Random(17)
        model = random_model(rng, max_elements=12)
        prioritization = full_prioritization(model, rng)
        result, prop = run_analysis(model, prioritization)
        some_element = next(iter(model.owned_elements()))
        entries = explain(result, model, prop, some_element)
        magnitudes = [abs(e.impact) for e in entries]
        assert magnitudes == sorted(magnitudes, reverse=True)
