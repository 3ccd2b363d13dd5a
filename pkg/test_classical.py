#!/usr/bin/env python3
"""
经典启发式求解器测试
"""

from fractions import Fraction

import numpy as np
import pytest

from classical.solvers import (
    AnnealConfig,
    Proposal,
    anneal_protocol,
    anneal_walks,
    global_simulated_annealing,
    gsa_protocol,
    lazy_greedy,
    sa_protocol,
    simulated_annealing,
    very_greedy,
)
from utils.data_loader import GeneratorConfig, make_stream, sample_corpus
from utils.knapsack import KnapsackInstance, brute_force_opt, objective_value, ratios


def test_lazy_greedy_examples(glover_instance):
    result = lazy_greedy(glover_instance)
    np.testing.assert_array_equal(result.x, [1, 0])
    assert result.value == 2
    assert result.r_stop == Fraction(100, 51)

    result = lazy_greedy(KnapsackInstance(values=(10, 1), weights=(5, 5), capacity=5))
    np.testing.assert_array_equal(result.x, [1, 0])
    assert result.value == 10
    assert result.r_stop == Fraction(1, 5)


def test_greedy_trivial_instance():
    inst = KnapsackInstance(values=(1, 2, 3), weights=(1, 1, 1), capacity=3)
    for solver in (lazy_greedy, very_greedy):
        result = solver(inst)
        np.testing.assert_array_equal(result.x, [1, 1, 1])
        assert result.r_stop is None


def test_very_greedy_examples(glover_instance):
    result = very_greedy(glover_instance)
    np.testing.assert_array_equal(result.x, [1, 0])
    assert result.value == 2

    inst = KnapsackInstance(values=(10, 4, 1), weights=(5, 2, 1), capacity=6)
    assert lazy_greedy(inst).value == 10
    result = very_greedy(inst)
    np.testing.assert_array_equal(result.x, [1, 0, 1])
    assert result.value == 11


def test_very_greedy_matches_lazy_greedy_on_strong():
    for inst in sample_corpus(GeneratorConfig(kind="strong", n_items=10, seed=6), 50):
        assert very_greedy(inst).value == lazy_greedy(inst).value


def test_very_greedy_never_worse_than_lazy_greedy():
    for kind in ("inv-strong", "profit", "profit-spanner"):
        for inst in sample_corpus(GeneratorConfig(kind=kind, n_items=10, seed=6), 20):
            assert very_greedy(inst).value >= lazy_greedy(inst).value


def test_anneal_zero_steps_returns_start(small_instance):
    start = np.array([0, 1, 1, 0])
    cfg = AnnealConfig(steps=0)
    assert simulated_annealing(small_instance, cfg, start, make_stream(0, 0)) == objective_value(small_instance, start)
    assert global_simulated_annealing(small_instance, cfg, start, make_stream(0, 0)) == objective_value(small_instance, start)


def test_anneal_cold_start_stays():
    # 唯一可行的移动是拿掉物品0, 价值下降
    inst = KnapsackInstance(values=(5, 1), weights=(1, 1), capacity=1)
    cfg = AnnealConfig(steps=20, temperature=1e-9)
    assert simulated_annealing(inst, cfg, np.array([1, 0]), make_stream(1, 0)) == 5


def test_anneal_rejects_infeasible_start(glover_instance):
    with pytest.raises(ValueError):
        simulated_annealing(glover_instance, AnnealConfig(), np.array([1, 1]), make_stream(0, 0))


def test_anneal_never_below_start():
    corpus = sample_corpus(GeneratorConfig(kind="profit", n_items=10, seed=12), 10)
    for i, inst in enumerate(corpus):
        start = lazy_greedy(inst).x
        for proposal in (Proposal.LOCAL, Proposal.GLOBAL):
            best = anneal_walks(inst, np.tile(start, (16, 1)), np.full(16, 500.0), 10,
                                make_stream(i, 5), proposal)
            assert best.shape == (16,)
            assert np.all(best >= objective_value(inst, start))
            assert np.all(best <= brute_force_opt(inst)[1])


def test_protocol_returns_lg_value_when_lg_is_optimal():
    inst = KnapsackInstance(values=(10, 1), weights=(5, 5), capacity=5)
    assert sa_protocol(inst, make_stream(0, 1)) == 10
    assert gsa_protocol(inst, make_stream(0, 2)) == 10


def test_protocol_is_deterministic():
    inst = sample_corpus(GeneratorConfig(kind="inv-strong", n_items=10, seed=4), 1)[0]
    assert sa_protocol(inst, make_stream(4, 0, 1)) == sa_protocol(inst, make_stream(4, 0, 1))
    assert gsa_protocol(inst, make_stream(4, 0, 2)) == gsa_protocol(inst, make_stream(4, 0, 2))


def test_protocol_repetitions_at_least_warm_start():
    inst = sample_corpus(GeneratorConfig(kind="profit", n_items=10, seed=21), 1)[0]
    warm = lazy_greedy(inst).value
    values = anneal_protocol(inst, make_stream(21, 0), Proposal.GLOBAL, AnnealConfig(), repetitions=25)
    assert values.shape == (25,)
    assert np.all(values >= warm)


def test_anneal_config_validation():
    with pytest.raises(ValueError):
        AnnealConfig(steps=-1)
    with pytest.raises(ValueError):
        AnnealConfig(temperature=0.0)
    with pytest.raises(ValueError):
        AnnealConfig(temp_sweep=())


@pytest.mark.slow
def test_sa_approximation_ratio_on_strong():
    corpus = sample_corpus(GeneratorConfig(kind="strong", n_items=10, seed=0), 100)
    ratios = [sa_protocol(inst, make_stream(0, i, 1)) / brute_force_opt(inst)[1] for i, inst in enumerate(corpus)]
    assert abs(np.mean(ratios) - 0.945) <= 0.02


@pytest.mark.slow
def test_gsa_approximation_ratio_on_inv_strong():
    corpus = sample_corpus(GeneratorConfig(kind="inv-strong", n_items=10, seed=0), 100)
    ratios = [gsa_protocol(inst, make_stream(0, i, 2)) / brute_force_opt(inst)[1] for i, inst in enumerate(corpus)]
    assert abs(np.mean(ratios) - 0.948) <= 0.02


@pytest.mark.parametrize("kind", ["strong", "inv-strong", "profit", "strong-spanner", "profit-spanner"])
def test_lazy_greedy_takes_a_ratio_prefix(kind):
    for inst in sample_corpus(GeneratorConfig(kind=kind, n_items=10, seed=8), 40):
        x = lazy_greedy(inst).x
        taken = np.asarray(x)[list(ratios(inst).order)]
        # 按比率降序排列后形如 1…10…0
        assert np.all(np.diff(taken) <= 0)
