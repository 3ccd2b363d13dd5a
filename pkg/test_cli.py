#!/usr/bin/env python3
"""
命令行脚本测试: gen / bias / solve / 混合器自检
"""

import sys

import numpy as np
import pandas as pd

import compute_bias
import generate_instances
import verify_mixer_consistency
from inference import solve_instances
from utils.knapsack import KnapsackInstance, load_instances, save_instances


def run(monkeypatch, module, *argv) -> int:
    monkeypatch.setattr(sys, "argv", [module.__name__, *argv])
    return module.main()


def test_gen_cli(tmp_path, monkeypatch):
    output = tmp_path / "strong.json"
    assert run(monkeypatch, generate_instances, "--dist", "strong", "--n", "8", "--count", "5",
               "--seed", "3", "--output", str(output)) == 0
    corpus = load_instances(output)
    assert len(corpus) == 5
    assert all(inst.n == 8 for inst in corpus)
    assert all(v - w == 1000 for inst in corpus for v, w in zip(inst.values, inst.weights))

    # 相同参数生成相同文件
    again = tmp_path / "again.json"
    run(monkeypatch, generate_instances, "--dist", "strong", "--n", "8", "--count", "5",
        "--seed", "3", "--output", str(again))
    assert again.read_text() == output.read_text()

    assert run(monkeypatch, generate_instances, "--dist", "strong", "--count", "0",
               "--output", str(tmp_path / "none.json")) == 1


def test_bias_cli(tmp_path, monkeypatch, glover_instance):
    corpus = save_instances(tmp_path / "corpus.json", [glover_instance])
    output = tmp_path / "bias.csv"
    assert run(monkeypatch, compute_bias, "--input", str(corpus), "--kind", "all",
               "--k", "5", "20", "--output", str(output)) == 0
    table = pd.read_csv(output)
    # constant + lazy-greedy + 两个 logistic, 每个两行
    assert len(table) == 8
    assert set(table['kind']) == {"constant", "lazy-greedy", "logistic"}
    lg = table[table['kind'] == "lazy-greedy"].sort_values('i')
    np.testing.assert_array_equal(lg['p_i'], [1.0, 0.0])
    assert ((table['p_i'] >= 0) & (table['p_i'] <= 1)).all()


def test_bias_skips_trivial_instances():
    trivial = KnapsackInstance(values=(1, 2), weights=(1, 1), capacity=3)
    table = compute_bias.compute_biases([trivial], "all", [10.0])
    assert table.empty


def test_solve_cli(tmp_path, monkeypatch, glover_instance, small_instance):
    corpus = save_instances(tmp_path / "corpus.json", [glover_instance, small_instance])
    expected = {"lg": [2, 10], "vg": [2, 11], "bf": [100, 11], "dp": [100, 11]}
    for algo, values in expected.items():
        output = tmp_path / f"{algo}.csv"
        assert run(monkeypatch, solve_instances, "--algo", algo, "--input", str(corpus),
                   "--output", str(output)) == 0
        assert list(pd.read_csv(output)['value']) == values

    output = tmp_path / "gsa.csv"
    assert run(monkeypatch, solve_instances, "--algo", "gsa", "--input", str(corpus),
               "--repetitions", "4", "--seed", "2", "--output", str(output)) == 0
    results = pd.read_csv(output)
    assert (results['value'] >= [2, 10]).all()
    assert (results['value'] <= [100, 11]).all()
    assert (results['repetitions'] == 4).all()

    assert run(monkeypatch, solve_instances, "--algo", "sa", "--input", str(corpus),
               "--repetitions", "0") == 1


def test_solve_one_is_reproducible(small_instance):
    a = solve_instances.solve_one(4, small_instance, "sa", seed=9, repetitions=3)
    b = solve_instances.solve_one(4, small_instance, "sa", seed=9, repetitions=3)
    assert a == b


def test_mixer_consistency_script(monkeypatch):
    assert run(monkeypatch, verify_mixer_consistency, "--seed", "1") == 0


def test_cli_hyphenated_aliases(tmp_path, monkeypatch):
    corpus = tmp_path / "corpus.json"
    assert run(monkeypatch, generate_instances, "--dist", "profit", "--n", "4", "--count", "2",
               "--out", str(corpus)) == 0
    output = tmp_path / "dp.csv"
    assert run(monkeypatch, solve_instances, "--algo", "dp", "--in", str(corpus), "--out", str(output)) == 0
    assert len(pd.read_csv(output)) == 2
