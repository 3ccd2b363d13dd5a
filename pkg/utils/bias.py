#!/usr/bin/env python3
"""
初始态偏置 p = (p_1..p_n)
常数偏置 / Lazy Greedy 偏置 / Logistic 平滑偏置
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.special import expit

from classical.solvers import lazy_greedy
from utils.knapsack import KnapsackInstance, TrivialInstanceError, ratios


@dataclass(eq=False)
class BiasVector:
    """每个比特为1的边缘概率及其来源"""
    p: np.ndarray
    provenance: str  # constant / lazy-greedy / logistic
    k: Optional[float] = None
    r_star: Optional[Fraction] = None
    c_logistic: Optional[float] = None

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=float)
        if self.p.ndim != 1 or self.p.shape[0] == 0:
            raise ValueError(f"偏置必须是非空一维向量, 得到形状 {self.p.shape}")
        if np.any(self.p < 0) or np.any(self.p > 1):
            raise ValueError("偏置概率必须在 [0, 1] 内")

    @property
    def n(self) -> int:
        return self.p.shape[0]


def _require_nontrivial(inst: KnapsackInstance):
    if inst.is_trivial:
        raise TrivialInstanceError(f"Σw={inst.total_weight} ≤ c={inst.capacity}, 全选即最优")


def constant_bias(inst: KnapsackInstance) -> BiasVector:
    """p_i = c / Σw, 使 E[w·x] = c"""
    _require_nontrivial(inst)
    p = np.full(inst.n, inst.capacity / inst.total_weight)
    return BiasVector(p=p, provenance="constant")


def lazy_greedy_bias(inst: KnapsackInstance) -> BiasVector:
    """p_i = 1 当 r_i > r_stop, 否则 0"""
    result = lazy_greedy(inst)
    if result.r_stop is None:
        raise TrivialInstanceError("Lazy Greedy 没有拒绝任何物品")
    profile = ratios(inst)
    p = np.array([1.0 if r > result.r_stop else 0.0 for r in profile.ratios])
    return BiasVector(p=p, provenance="lazy-greedy", r_star=result.r_stop)


def logistic_constant(inst: KnapsackInstance) -> float:
    """C = Σw / c − 1"""
    return inst.total_weight / inst.capacity - 1.0


def logistic_curve(r, k: float, r_star: float, c_logistic: float) -> np.ndarray:
    """
    p(r) = 1 / (1 + C·exp(−k(r − r*)))

    写成 expit(k(r − r*) − ln C) 以避免指数溢出
    """
    r = np.asarray(r, dtype=float)
    return expit(k * (r - r_star) - math.log(c_logistic))


def logistic_bias(inst: KnapsackInstance, k: float) -> BiasVector:
    """
    Logistic 平滑的 Lazy Greedy 偏置

    Args:
        inst: 非平凡背包实例 (Σw > c)
        k: 陡峭程度, k → 0 回到常数偏置, k → ∞ 回到 Lazy Greedy 偏置
    """
    if not k > 0:
        raise ValueError(f"k必须 > 0, 得到 {k}")
    _require_nontrivial(inst)

    r_stop = lazy_greedy(inst).r_stop
    c_logistic = logistic_constant(inst)
    p = logistic_curve(ratios(inst).as_float(), k, float(r_stop), c_logistic)
    return BiasVector(p=p, provenance="logistic", k=float(k), r_star=r_stop, c_logistic=c_logistic)
