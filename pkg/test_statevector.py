#!/usr/bin/env python3
"""
态矢量模拟器测试
"""

import numpy as np
import pytest

from quantum.statevector import (
    H,
    X,
    Gate1Q,
    Gate2Q,
    StateVector,
    apply_1q,
    apply_2q,
    apply_cost_phase,
    exact_objective_stats,
    prepare_biased_state,
    probabilities,
    sample,
)
from utils.bias import BiasVector
from utils.data_loader import make_stream
from utils.knapsack import basis_bits, objective_value
from validation.statistical_validator import StatisticalValidator

CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


def basis_state(n: int, index: int) -> StateVector:
    amps = np.zeros(1 << n, dtype=complex)
    amps[index] = 1.0
    return StateVector(amps)


def test_prepare_biased_state_examples():
    state = prepare_biased_state([0.5, 0.5, 0.5])
    np.testing.assert_allclose(state.amplitudes, np.full(8, 2 ** -1.5), rtol=0, atol=1e-15)

    # x_0 = 1, x_1 = 0 → 下标 1
    state = prepare_biased_state([1.0, 0.0])
    np.testing.assert_allclose(state.amplitudes, [0, 1, 0, 0], atol=1e-15)

    state = prepare_biased_state(BiasVector(p=[0.3], provenance="constant"))
    np.testing.assert_allclose(state.amplitudes, [np.sqrt(0.7), np.sqrt(0.3)], atol=1e-15)


def test_biased_state_marginals():
    p = np.array([0.1, 0.35, 0.5, 0.8, 0.97])
    probs = probabilities(prepare_biased_state(p))
    marginals = probs @ basis_bits(p.shape[0])
    np.testing.assert_allclose(marginals, p, rtol=0, atol=1e-12)


def test_state_validation():
    with pytest.raises(ValueError):
        StateVector([1.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        StateVector([1.0, 1.0])
    with pytest.raises(ValueError):
        Gate1Q(np.array([[1, 1], [0, 1]]))
    with pytest.raises(ValueError):
        Gate2Q(np.eye(2))


def test_single_qubit_gates():
    flipped = apply_1q(basis_state(1, 0), 0, Gate1Q(X))
    np.testing.assert_allclose(flipped.amplitudes, [0, 1])

    state = prepare_biased_state([0.2, 0.7, 0.4])
    twice = apply_1q(apply_1q(state, 1, Gate1Q(H)), 1, Gate1Q(H))
    np.testing.assert_allclose(twice.amplitudes, state.amplitudes, rtol=0, atol=1e-12)

    with pytest.raises(IndexError):
        apply_1q(state, 3, Gate1Q(H))


def test_two_qubit_gate_index_convention():
    # |x_0 = 1, x_1 = 0⟩, 以 x_0 为控制位的 CNOT 翻转 x_1
    state = basis_state(2, 1)
    np.testing.assert_allclose(apply_2q(state, 0, 1, Gate2Q(CNOT)).amplitudes, [0, 0, 0, 1])
    # 以 x_1 为控制位时保持不变
    np.testing.assert_allclose(apply_2q(state, 1, 0, Gate2Q(CNOT)).amplitudes, [0, 1, 0, 0])

    with pytest.raises(ValueError):
        apply_2q(state, 1, 1, Gate2Q(CNOT))


def test_two_qubit_identity():
    state = prepare_biased_state([0.2, 0.6, 0.9])
    out = apply_2q(state, 2, 0, Gate2Q(np.eye(4)))
    np.testing.assert_allclose(out.amplitudes, state.amplitudes, atol=1e-15)


def test_cost_phase():
    state = prepare_biased_state([0.3, 0.6])
    v = (4, 7)
    np.testing.assert_allclose(apply_cost_phase(state, 0.0, v).amplitudes, state.amplitudes)
    np.testing.assert_allclose(apply_cost_phase(state, 2 * np.pi, v).amplitudes, state.amplitudes,
                               rtol=0, atol=1e-12)

    one = prepare_biased_state([0.5])
    out = apply_cost_phase(one, np.pi / 2, (3,))
    np.testing.assert_allclose(out.amplitudes[1], one.amplitudes[1] * np.exp(-3j * np.pi / 2), atol=1e-15)
    np.testing.assert_allclose(out.amplitudes[0], one.amplitudes[0])

    with pytest.raises(ValueError):
        apply_cost_phase(state, 0.1, (1, 2, 3))


def test_norm_preserved():
    state = prepare_biased_state([0.25, 0.5, 0.75])
    rng = np.random.default_rng(0)
    for _ in range(10):
        a, b = rng.choice(3, size=2, replace=False)
        q, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
        state = apply_2q(state, int(a), int(b), Gate2Q(q))
        state = apply_cost_phase(state, rng.uniform(0, 2 * np.pi), (3, 5, 7))
        assert abs(state.norm() - 1.0) < 1e-10


def test_sample_shapes():
    state = prepare_biased_state([0.5, 0.5])
    assert sample(state, 0, make_stream(0)).shape == (0, 2)
    draws = sample(basis_state(3, 5), 10, make_stream(0))
    np.testing.assert_array_equal(draws, np.tile([1, 0, 1], (10, 1)))


def test_sample_goodness_of_fit():
    rng = np.random.default_rng(7)
    amps = rng.normal(size=16) + 1j * rng.normal(size=16)
    state = StateVector(amps / np.linalg.norm(amps))
    result = StatisticalValidator(significance=1e-3).sampling_fit(state, 100_000, make_stream(7, 1))
    assert result['passed'], result


def test_exact_objective_stats(glover_instance):
    # 确定性态 |x⟩
    state = basis_state(2, 2)
    expected, distribution = exact_objective_stats(state, glover_instance)
    assert expected == pytest.approx(objective_value(glover_instance, (0, 1)))
    assert distribution[100] == pytest.approx(1.0)

    uniform = StateVector(np.full(4, 0.5))
    expected, distribution = exact_objective_stats(uniform, glover_instance)
    assert expected == pytest.approx(25.5)
    assert sum(distribution.values()) == pytest.approx(1.0, abs=1e-12)
    assert distribution == pytest.approx({0: 0.5, 2: 0.25, 100: 0.25})


def random_state(n: int, stream: np.random.Generator) -> StateVector:
    amps = stream.normal(size=1 << n) + 1j * stream.normal(size=1 << n)
    return StateVector(amps / np.linalg.norm(amps))


def test_cost_phase_commutes_with_diagonal_operations():
    stream = make_stream(21, 0)
    v = [10, 4, 1, 7, 3]
    for _ in range(20):
        state = random_state(5, stream)
        gamma = stream.uniform(0, 2 * np.pi)
        phases = np.exp(1j * stream.uniform(0, 2 * np.pi, size=32))

        first = StateVector(apply_cost_phase(state, gamma, v).amplitudes * phases)
        second = apply_cost_phase(StateVector(state.amplitudes * phases), gamma, v)
        np.testing.assert_allclose(first.amplitudes, second.amplitudes, atol=1e-12)

        # 两个不同价值向量的代价相位也可交换
        other = [2, 9, 5, 1, 6]
        a = apply_cost_phase(apply_cost_phase(state, gamma, v), 0.7, other)
        b = apply_cost_phase(apply_cost_phase(state, 0.7, other), gamma, v)
        np.testing.assert_allclose(a.amplitudes, b.amplitudes, atol=1e-12)
