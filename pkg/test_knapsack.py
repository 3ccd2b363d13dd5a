#!/usr/bin/env python3
"""
背包核心测试
可行性 / 目标函数 / 比率排序 / 穷举与DP / 语料读写
"""

from fractions import Fraction

import numpy as np
import pytest

from utils.data_loader import ALL_DISTRIBUTIONS, GeneratorConfig, make_stream, sample_instance
from utils.knapsack import (
    CapacityExceededError,
    KnapsackInstance,
    basis_bits,
    basis_objective_values,
    batch_objective_values,
    brute_force_opt,
    dp_opt,
    is_feasible,
    load_instances,
    objective_value,
    ratios,
    save_instances,
)


def test_instance_validation():
    with pytest.raises(ValueError):
        KnapsackInstance(values=(1, 2), weights=(1,), capacity=3)
    with pytest.raises(ValueError):
        KnapsackInstance(values=(0, 2), weights=(1, 1), capacity=3)
    with pytest.raises(ValueError):
        KnapsackInstance(values=(1,), weights=(1,), capacity=0)
    with pytest.raises(ValueError):
        KnapsackInstance(values=(), weights=(), capacity=1)
    with pytest.raises(ValueError):
        KnapsackInstance.from_dict({'n': 3, 'values': [1, 2], 'weights': [1, 1], 'capacity': 2})


def test_feasibility(glover_instance):
    assert not is_feasible(glover_instance, (1, 1))
    assert is_feasible(glover_instance, (0, 0))
    # 重量恰好等于容量
    assert is_feasible(glover_instance, (0, 1))
    with pytest.raises(ValueError):
        is_feasible(glover_instance, (1, 0, 0))


def test_objective_value(glover_instance):
    assert objective_value(glover_instance, (0, 1)) == 100
    assert objective_value(glover_instance, (1, 1)) == 0
    assert objective_value(glover_instance, (0, 0)) == 0
    assert objective_value(glover_instance, (1, 0)) == 2


def test_batch_objective_matches_scalar(small_instance):
    bits = basis_bits(small_instance.n)
    batch = batch_objective_values(small_instance, bits)
    expected = [objective_value(small_instance, row) for row in bits]
    np.testing.assert_array_equal(batch, expected)
    np.testing.assert_array_equal(basis_objective_values(small_instance), expected)


def test_basis_bits_little_endian():
    bits = basis_bits(3)
    np.testing.assert_array_equal(bits[6], [0, 1, 1])
    np.testing.assert_array_equal(bits[1], [1, 0, 0])
    assert not bits.flags.writeable


def test_ratios(glover_instance):
    profile = ratios(glover_instance)
    assert profile.ratios == (Fraction(2), Fraction(100, 51))
    assert profile.order == (0, 1)

    tie = ratios(KnapsackInstance(values=(3, 3), weights=(1, 1), capacity=1))
    assert tie.ratios == (3, 3)
    assert tie.order == (0, 1)

    same = ratios(KnapsackInstance(values=(4, 7, 2), weights=(4, 7, 2), capacity=5))
    assert all(r == 1 for r in same.ratios)


def test_ratio_order_is_non_increasing():
    inst = KnapsackInstance(values=(5, 9, 2, 9, 4), weights=(2, 3, 1, 4, 4), capacity=7)
    profile = ratios(inst)
    ordered = [profile.ratios[i] for i in profile.order]
    assert all(a >= b for a, b in zip(ordered, ordered[1:]))


def test_brute_force_examples(glover_instance):
    x, value = brute_force_opt(glover_instance)
    np.testing.assert_array_equal(x, [0, 1])
    assert value == 100

    x, value = brute_force_opt(KnapsackInstance(values=(1, 2, 3), weights=(1, 2, 3), capacity=4))
    assert value == 4
    np.testing.assert_array_equal(x, [1, 0, 1])


def test_brute_force_trivial_instance():
    inst = KnapsackInstance(values=(3, 4, 5), weights=(1, 1, 1), capacity=10)
    x, value = brute_force_opt(inst)
    np.testing.assert_array_equal(x, [1, 1, 1])
    assert value == 12


def test_brute_force_lexicographic_tie_break():
    # (0,1) 与 (1,0) 同为最优, 取字典序较小者
    x, value = brute_force_opt(KnapsackInstance(values=(3, 3), weights=(1, 1), capacity=1))
    assert value == 3
    np.testing.assert_array_equal(x, [0, 1])


def test_brute_force_guard():
    inst = KnapsackInstance(values=[1] * 31, weights=[1] * 31, capacity=5)
    with pytest.raises(CapacityExceededError):
        brute_force_opt(inst)


def test_dp_examples(glover_instance):
    x, value = dp_opt(glover_instance)
    assert value == 100
    assert objective_value(glover_instance, x) == 100

    # 没有物品放得下
    x, value = dp_opt(KnapsackInstance(values=(5, 5), weights=(3, 4), capacity=2))
    assert value == 0
    np.testing.assert_array_equal(x, [0, 0])

    with pytest.raises(CapacityExceededError):
        dp_opt(glover_instance, max_cells=10)


def test_dp_matches_brute_force_on_all_distributions():
    checked = 0
    for d, kind in enumerate(ALL_DISTRIBUTIONS):
        for i in range(40):
            cfg = GeneratorConfig(kind=kind, n_items=1 + (i % 12), seed=1234)
            inst = sample_instance(cfg, make_stream(cfg.seed, d, i))
            x_dp, v_dp = dp_opt(inst)
            _, v_bf = brute_force_opt(inst)
            assert v_dp == v_bf
            assert objective_value(inst, x_dp) == v_dp
            checked += 1
    assert checked >= 200


def test_instance_file_formats(tmp_path, glover_instance, small_instance):
    ndjson = save_instances(tmp_path / "corpus.json", [glover_instance, small_instance])
    assert load_instances(ndjson) == [glover_instance, small_instance]

    single = tmp_path / "single.json"
    single.write_text('{"n": 2, "values": [2, 100], "weights": [1, 51], "capacity": 51}')
    assert load_instances(single) == [glover_instance]

    array = tmp_path / "array.json"
    array.write_text('[{"values": [2, 100], "weights": [1, 51], "capacity": 51}]')
    assert load_instances(array) == [glover_instance]

    with pytest.raises(FileNotFoundError):
        load_instances(tmp_path / "missing.json")


@pytest.mark.parametrize("scale", [2, 7])
def test_brute_force_scales_with_values(scale):
    for kind in ALL_DISTRIBUTIONS:
        for i in range(5):
            inst = sample_instance(GeneratorConfig(kind, n_items=8, seed=13), make_stream(13, i))
            scaled = KnapsackInstance(values=[scale * v for v in inst.values], weights=inst.weights,
                                      capacity=inst.capacity)
            x, value = brute_force_opt(inst)
            x_scaled, value_scaled = brute_force_opt(scaled)
            assert value_scaled == scale * value
            np.testing.assert_array_equal(x_scaled, x)
