import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pecco.baselines import exhaustive_optimum
from pecco.mfo import (
    MfoParams,
    flame_count,
    mfo_pair,
    random_position,
    run_mfo,
    select_flames,
    spiral_lower_bound,
    spiral_step,
)

from conftest import single_task_scenario


class StreamRng:
    """Replays a fixed sequence of uniform draws."""

    def __init__(self, values):
        self.values = list(values)

    def random(self, size=None):
        if size is None:
            return self.values.pop(0)
        out, self.values = self.values[:size], self.values[size:]
        return np.array(out)


def test_random_position_uses_stream_in_order():
    assert random_position(2, 1.0, StreamRng([0.2, 0.9])).tolist() == [0.2, 0.9]
    assert random_position(1, 2.0, StreamRng([0.5])).tolist() == [1.0]


@given(st.integers(1, 50), st.floats(0.1, 10), st.integers(0, 1000))
def test_random_position_in_range(K, ub, seed):
    pos = random_position(K, ub, np.random.default_rng(seed))
    assert pos.shape == (K,) and np.all((pos >= 0) & (pos <= ub))


@pytest.mark.parametrize("ci, expected", [(100, 1), (1, 30), (50, 16), (99, 1), (98, 2)])
def test_flame_count_examples(ci, expected):
    assert flame_count(30, ci, 100) == expected


@given(st.integers(2, 60), st.integers(1, 300))
def test_flame_count_schedule(n, mi):
    ks = [flame_count(n, ci, mi) for ci in range(1, mi + 1)]
    assert all(1 <= k <= n for k in ks)
    assert all(a >= b for a, b in zip(ks, ks[1:]))
    assert ks[-1] == 1


def test_spiral_examples():
    assert spiral_step([0.0], [1.0], 1.0, [0.0]).tolist() == [1.0]
    assert math.exp(-1) * math.cos(-2 * math.pi) + 1 == pytest.approx(1.3679, abs=1e-4)
    assert spiral_step([0.0], [1.0], 1.0, [-1.0]).tolist() == [1.0]
    out = spiral_step([0.0], [1.0], 1.0, [-0.5])[0]
    assert out == pytest.approx(1 - math.exp(-0.5), abs=1e-12)
    assert out == pytest.approx(0.3935, abs=1e-4)


def test_spiral_without_clamp_would_overshoot():
    assert spiral_step([0.0], [1.0], 1.0, [0.0], ub=3.0).tolist() == [2.0]


@given(st.lists(st.floats(0, 1), min_size=3, max_size=3), st.lists(st.floats(0, 1), min_size=3, max_size=3),
       st.lists(st.floats(-2, 1), min_size=3, max_size=3))
def test_spiral_stays_in_bounds(moth, target, t):
    out = spiral_step(moth, target, 1.0, t)
    assert np.all((out >= 0) & (out <= 1))


@pytest.mark.parametrize("i, k, expected", [(3, 10, 3), (17, 10, 10), (10, 10, 10), (1, 1, 1)])
def test_mfo_pair(i, k, expected):
    assert mfo_pair(i, k) == expected


def test_r_schedule():
    assert spiral_lower_bound(1, 100) == -1.0
    assert spiral_lower_bound(100, 100) == -2.0
    assert spiral_lower_bound(1, 1) == -1.0


def test_select_flames_elitism_keeps_older_best():
    prev = np.array([[0.1], [0.2]])
    moths = np.array([[0.5], [0.6], [0.7]])
    flames, fit = select_flames(prev, np.array([-5.0, -1.0]), moths, np.array([-3.0, 0.0, -5.0]), 2, True)
    assert fit.tolist() == [-5.0, -5.0]
    assert flames.tolist() == [[0.1], [0.7]]
    flames, fit = select_flames(prev, np.array([-5.0, -1.0]), moths, np.array([-3.0, 0.0, -5.0]), 2, False)
    assert fit.tolist() == [-5.0, -3.0]


def test_single_task_dominance():
    s = single_task_scenario()
    report = run_mfo(s, MfoParams(nsa=5, max_iter=10, seed=1))
    assert report.outcome.assignment == (2,)
    # edge cost 1, profit 9, no migration
    assert report.breakdown.objective == 1.0 - 8.0 * 9.0
    assert report.breakdown.objective == exhaustive_optimum(s)[0].objective


def test_same_seed_same_report(default_scenario):
    params = MfoParams(nsa=8, max_iter=12, seed=5)
    assert run_mfo(default_scenario, params) == run_mfo(default_scenario, params)


def test_history_non_increasing_with_elitism(default_scenario):
    report = run_mfo(default_scenario, MfoParams(nsa=8, max_iter=20, seed=2))
    assert len(report.history) == 20
    assert all(a >= b for a, b in zip(report.history, report.history[1:]))
    assert report.breakdown.objective == report.history[-1]
    assert report.evaluations == 8 * 20


def test_literal_mode_runs(default_scenario):
    report = run_mfo(default_scenario, MfoParams(nsa=6, max_iter=10, seed=2, elitism=False))
    assert len(report.history) == 10


def test_initial_positions_are_used_and_checked(default_scenario):
    K = default_scenario.n_tasks
    start = np.full((4, K), 0.25)
    report = run_mfo(default_scenario, MfoParams(nsa=4, max_iter=1, seed=0), initial_positions=start)
    # with one iteration the only flames are the identical initial moths
    assert report.best_position == tuple([0.25] * K)
    with pytest.raises(ValueError):
        run_mfo(default_scenario, MfoParams(nsa=4, max_iter=1), initial_positions=np.zeros((3, K)))


@pytest.mark.parametrize("kwargs", [{"nsa": 1}, {"max_iter": 0}, {"ub": 0.0}])
def test_invalid_params(kwargs):
    with pytest.raises(ValueError):
        MfoParams(**kwargs)


def test_parallel_evaluation_matches_serial(default_scenario):
    serial = run_mfo(default_scenario, MfoParams(nsa=6, max_iter=4, seed=3))
    parallel = run_mfo(default_scenario, MfoParams(nsa=6, max_iter=4, seed=3, workers=2))
    assert serial == parallel
