#!/usr/bin/env python3
"""
基于统计的验证器
采样分布的卡方拟合优度检验, 以及 best-of-N 期望 (顺序统计量) 与经验均值的比较
"""

from typing import Dict, Optional

import numpy as np
from scipy import stats

from quantum.circuit import CircuitParams, best_of_n_expectation, qkp_state
from quantum.statevector import StateVector, exact_objective_stats, probabilities, sample
from utils.knapsack import KnapsackInstance, batch_objective_values


def bits_to_index(bits: np.ndarray) -> np.ndarray:
    """[..., n] 比特 → 基态下标 (小端序)"""
    bits = np.asarray(bits, dtype=np.int64)
    return bits @ (1 << np.arange(bits.shape[-1], dtype=np.int64))


class StatisticalValidator:
    """统计验证器"""

    def __init__(self, significance: float = 1e-3, min_expected: float = 5.0, max_z: float = 3.0):
        if not 0 < significance < 1:
            raise ValueError(f"显著性水平必须在 (0, 1) 内, 得到 {significance}")
        self.significance = significance
        # 期望频数低于该值的格子合并成一个
        self.min_expected = min_expected
        self.max_z = max_z

    def chi_square_fit(self, indices: np.ndarray, probs: np.ndarray) -> Dict:
        """
        观测下标频数 vs 理论分布的卡方检验

        Args:
            indices: 采样得到的基态下标 [shots]
            probs: 理论分布 [2^n]
        """
        indices = np.asarray(indices, dtype=np.int64)
        probs = np.asarray(probs, dtype=float)
        probs = probs / probs.sum()
        shots = indices.shape[0]
        if shots == 0:
            raise ValueError("没有样本")

        observed = np.bincount(indices, minlength=probs.shape[0]).astype(float)
        expected = probs * shots

        large = expected >= self.min_expected
        obs_bins = list(observed[large])
        exp_bins = list(expected[large])
        if (~large).any():
            obs_bins.append(observed[~large].sum())
            exp_bins.append(expected[~large].sum())
        obs_bins, exp_bins = np.array(obs_bins), np.array(exp_bins)

        # 合并后只剩一个格子时检验没有自由度
        if obs_bins.shape[0] < 2:
            return {'statistic': 0.0, 'p_value': 1.0, 'bins': int(obs_bins.shape[0]),
                    'shots': shots, 'passed': True}

        keep = exp_bins > 0
        result = stats.chisquare(obs_bins[keep], exp_bins[keep] * obs_bins[keep].sum() / exp_bins[keep].sum())
        p_value = float(result.pvalue)
        return {
            'statistic': float(result.statistic),
            'p_value': p_value,
            'bins': int(keep.sum()),
            'shots': shots,
            'passed': p_value >= self.significance,
        }

    def sampling_fit(self, state: StateVector, shots: int, stream: np.random.Generator) -> Dict:
        """对态矢量采样 shots 次并做卡方检验"""
        indices = bits_to_index(sample(state, shots, stream))
        return self.chi_square_fit(indices, probabilities(state))

    def order_statistics_check(self, inst: KnapsackInstance, params: CircuitParams, runs: int,
                               stream: np.random.Generator, shots: Optional[int] = None) -> Dict:
        """
        best-of-N 期望的精确值 vs runs 次独立 best-of-N 实验的经验均值

        差值不超过 max_z 个标准误即通过
        """
        shots = inst.n if shots is None else int(shots)
        if runs < 2:
            raise ValueError(f"runs必须 >= 2, 得到 {runs}")
        state = qkp_state(inst, params)
        _, distribution = exact_objective_stats(state, inst)
        exact = best_of_n_expectation(distribution, shots)

        draws = sample(state, runs * shots, stream).reshape(runs, shots, inst.n)
        best = batch_objective_values(inst, draws).max(axis=1).astype(float)
        mean = float(best.mean())
        std_err = float(best.std(ddof=1) / np.sqrt(runs))

        if std_err > 0:
            z = abs(mean - exact) / std_err
            passed = z <= self.max_z
        else:
            z = 0.0 if abs(mean - exact) < 1e-9 else np.inf
            passed = z == 0.0
        return {
            'exact': exact,
            'empirical_mean': mean,
            'std_err': std_err,
            'z': float(z),
            'runs': runs,
            'shots': shots,
            'passed': bool(passed),
        }
