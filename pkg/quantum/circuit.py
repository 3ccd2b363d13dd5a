#!/usr/bin/env python3
"""
深度为1的 xQAOA 背包电路 (QKP_ZX / QKP_Cop)
|β, γ, k, θ⟩ = U^B(β) · U^C(γ) · |p(k)⟩, 测量 n 次取最优
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np

from classical.solvers import lazy_greedy, very_greedy
from quantum.mixers import GateLayer, apply_layers, hourglass_layer, ring_copula_layers
from quantum.statevector import (
    StateVector,
    cost_phases,
    exact_objective_stats,
    product_amplitudes,
    sample,
)
from utils.bias import BiasVector, logistic_bias
from utils.knapsack import (
    KnapsackInstance,
    basis_objective_values,
    batch_objective_values,
    brute_force_opt,
    ratios,
)

BETA_PERIOD = math.pi
GAMMA_PERIOD = 2.0 * math.pi


class MixerKind(str, Enum):
    HOURGLASS = "hourglass"
    COPULA_RING = "copula"

    @classmethod
    def parse(cls, name) -> "MixerKind":
        if isinstance(name, cls):
            return name
        for kind in cls:
            if kind.value == str(name).strip().lower():
                return kind
        raise ValueError(f"未知混合器: {name} (可选: {[k.value for k in cls]})")


def wrap_angles(beta: float, gamma: float) -> Tuple[float, float]:
    """β 折回 [0, π), γ 折回 [0, 2π)"""
    beta = float(np.mod(beta, BETA_PERIOD))
    gamma = float(np.mod(gamma, GAMMA_PERIOD))
    # np.mod 可能因舍入返回周期本身
    if beta >= BETA_PERIOD:
        beta = 0.0
    if gamma >= GAMMA_PERIOD:
        gamma = 0.0
    return beta, gamma


@dataclass
class CircuitParams:
    """一个 xQAOA 电路的参数 (β, γ, k, θ), θ 仅用于 copula 混合器"""
    beta: float
    gamma: float
    k: float
    theta: Optional[float] = None
    mixer: MixerKind = MixerKind.HOURGLASS

    def __post_init__(self):
        self.mixer = MixerKind.parse(self.mixer)
        if not 0.0 <= self.beta < BETA_PERIOD:
            raise ValueError(f"β必须在 [0, π) 内, 得到 {self.beta}")
        if not 0.0 <= self.gamma < GAMMA_PERIOD:
            raise ValueError(f"γ必须在 [0, 2π) 内, 得到 {self.gamma}")
        if not self.k > 0:
            raise ValueError(f"k必须 > 0, 得到 {self.k}")
        if self.mixer == MixerKind.COPULA_RING:
            if self.theta is None or not -1.0 <= self.theta <= 1.0:
                raise ValueError(f"copula 混合器需要 θ ∈ [−1, 1], 得到 {self.theta}")
        elif self.theta is not None:
            raise ValueError("沙漏混合器不使用 θ")

    @classmethod
    def wrapped(cls, beta: float, gamma: float, k: float, theta: Optional[float] = None,
                mixer: MixerKind = MixerKind.HOURGLASS) -> "CircuitParams":
        """先把角度折回周期区间再构造"""
        beta, gamma = wrap_angles(beta, gamma)
        return cls(beta=beta, gamma=gamma, k=k, theta=theta, mixer=mixer)

    def to_dict(self) -> Dict:
        return {
            'beta': self.beta,
            'gamma': self.gamma,
            'k': self.k,
            'theta': self.theta,
            'mixer': self.mixer.value,
        }


def mixer_layers(inst: KnapsackInstance, bias: BiasVector, beta: float,
                 mixer: MixerKind, theta: Optional[float] = None) -> GateLayer:
    """混合器的门序列; 环形 copula 按比率降序把相邻物品配对"""
    if mixer == MixerKind.HOURGLASS:
        return hourglass_layer(bias.p, beta)
    return ring_copula_layers(bias.p, theta, beta, order=ratios(inst).order)


def qkp_state(inst: KnapsackInstance, params: CircuitParams) -> StateVector:
    """
    制备 QKP 输出态

    |p(k)⟩ → U^C(γ) → 混合器 (沙漏 / 环形 copula)

    Raises:
        TrivialInstanceError: Σw ≤ c
    """
    bias = logistic_bias(inst, params.k)
    amps = product_amplitudes(bias.p) * cost_phases(inst.values, params.gamma)
    layers = mixer_layers(inst, bias, params.beta, params.mixer, params.theta)
    return StateVector(apply_layers(amps, inst.n, layers))


def qkp_run(inst: KnapsackInstance, params: CircuitParams, stream: np.random.Generator,
            shots: Optional[int] = None) -> Tuple[np.ndarray, int]:
    """
    测量 shots 次 (默认 n 次), 返回 f_obj 最大的样本 (并列取最先出现的)
    """
    shots = inst.n if shots is None else int(shots)
    if shots < 1:
        raise ValueError(f"shots必须 >= 1, 得到 {shots}")
    samples = sample(qkp_state(inst, params), shots, stream)
    scores = batch_objective_values(inst, samples)
    best = int(np.argmax(scores))
    return samples[best].astype(np.int8), int(scores[best])


def best_of_n_expectation(distribution: Dict[int, float], shots: int) -> float:
    """
    shots 次独立测量取最大值的期望 Σ_v v·(F(v)^N − F(v⁻)^N)
    """
    levels = np.array(sorted(distribution), dtype=float)
    mass = np.array([distribution[int(v)] for v in levels])
    cdf = np.minimum(np.cumsum(mass), 1.0)
    prev = np.concatenate([[0.0], cdf[:-1]])
    return float(np.sum(levels * (cdf ** shots - prev ** shots)))


@dataclass
class ExactMetrics:
    """由精确测量分布得到的单实例指标"""
    p_opt_single: float
    p_opt_bestofN: float
    p_beat_lg: float
    p_beat_vg: float
    expected_bestofN_value: float
    expected_value: float
    shots: int


def qkp_exact_metrics(inst: KnapsackInstance, params: CircuitParams, shots: Optional[int] = None,
                      optimum: Optional[int] = None, lg_value: Optional[int] = None,
                      vg_value: Optional[int] = None) -> ExactMetrics:
    """
    精确计算 best-of-N 指标

    Args:
        inst: 背包实例
        params: 电路参数
        shots: 测量次数 N, 默认 n
        optimum / lg_value / vg_value: 可传入预先计算的参考值
    """
    shots = inst.n if shots is None else int(shots)
    if shots < 1:
        raise ValueError(f"shots必须 >= 1, 得到 {shots}")
    optimum = brute_force_opt(inst)[1] if optimum is None else int(optimum)
    lg_value = lazy_greedy(inst).value if lg_value is None else int(lg_value)
    vg_value = very_greedy(inst).value if vg_value is None else int(vg_value)

    expected, distribution = exact_objective_stats(qkp_state(inst, params), inst)

    def mass_above(threshold: int, strict: bool = True) -> float:
        return float(sum(m for v, m in distribution.items() if (v > threshold if strict else v >= threshold)))

    def best_of(q: float) -> float:
        return 1.0 - (1.0 - min(q, 1.0)) ** shots

    p_opt = mass_above(optimum, strict=False)
    return ExactMetrics(
        p_opt_single=p_opt,
        p_opt_bestofN=best_of(p_opt),
        p_beat_lg=best_of(mass_above(lg_value)),
        p_beat_vg=best_of(mass_above(vg_value)),
        expected_bestofN_value=best_of_n_expectation(distribution, shots),
        expected_value=expected,
        shots=shots,
    )


class CircuitLandscape:
    """
    固定 (k, θ, 混合器) 时在 (β, γ) 上批量评估目标

    代价相位只依赖 γ, 混合器只依赖 β, 因此一个 β 下的所有 γ 可一次性模拟
    """

    def __init__(self, inst: KnapsackInstance, k: float, theta: Optional[float] = None,
                 shots: Optional[int] = None):
        self.inst = inst
        self.k = float(k)
        self.theta = theta
        self.mixer = MixerKind.HOURGLASS if theta is None else MixerKind.COPULA_RING
        self.shots = inst.n if shots is None else int(shots)
        self.bias = logistic_bias(inst, self.k)
        self.initial = product_amplitudes(self.bias.p)

        table = basis_objective_values(inst)
        self.table = table.astype(float)
        self.levels, inverse = np.unique(table, return_inverse=True)
        # [2^n, L] 独热矩阵, 把基态概率聚合到各目标值
        self.level_onehot = np.zeros((table.shape[0], self.levels.shape[0]))
        self.level_onehot[np.arange(table.shape[0]), inverse] = 1.0

    def params(self, beta: float, gamma: float) -> CircuitParams:
        return CircuitParams.wrapped(beta, gamma, self.k, self.theta, self.mixer)

    def probabilities(self, beta: float, gammas) -> np.ndarray:
        """[len(gammas), 2^n] 测量分布"""
        amps = self.initial * cost_phases(self.inst.values, np.atleast_1d(gammas))
        layers = mixer_layers(self.inst, self.bias, beta, self.mixer, self.theta)
        amps = apply_layers(amps, self.inst.n, layers)
        return np.abs(amps) ** 2

    def expected_value(self, beta: float, gammas) -> np.ndarray:
        """单次测量的 E[f_obj]"""
        return self.probabilities(beta, gammas) @ self.table

    def expected_best_value(self, beta: float, gammas) -> np.ndarray:
        """N 次测量取最大值的期望"""
        mass = self.probabilities(beta, gammas) @ self.level_onehot
        cdf = np.minimum(np.cumsum(mass, axis=1), 1.0)
        prev = np.concatenate([np.zeros((cdf.shape[0], 1)), cdf[:, :-1]], axis=1)
        return (cdf ** self.shots - prev ** self.shots) @ self.levels.astype(float)
