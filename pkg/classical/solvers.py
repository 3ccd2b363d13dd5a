#!/usr/bin/env python3
"""
经典启发式求解器
Lazy Greedy / Very Greedy / 模拟退火 (SA) / 全局模拟退火 (GSA) 及其实验流程
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from utils.knapsack import (
    KnapsackInstance,
    batch_objective_values,
    is_feasible,
    objective_value,
    ratios,
)

# 温度扫描 T ∈ 100ℤ ∩ (0, 2000]
DEFAULT_TEMP_SWEEP: Tuple[float, ...] = tuple(float(t) for t in range(100, 2001, 100))
# 每个实例的子随机流编号: (instance, code)
SOLVER_STREAM_CODES = {'sa': 1, 'gsa': 2}


class Proposal(str, Enum):
    """退火的邻域提议方式"""
    LOCAL = "local"    # 单比特翻转, 只走可行解
    GLOBAL = "global"  # 每位以 1/n 概率翻转, 允许不可行解 (记0分)


@dataclass
class GreedyResult:
    """贪心算法输出"""
    x: np.ndarray
    value: int
    r_stop: Optional[Fraction] = None


@dataclass
class AnnealConfig:
    """退火配置"""
    steps: int = 10
    temperature: float = 1000.0
    repetitions: int = 10
    temp_sweep: Sequence[float] = field(default_factory=lambda: DEFAULT_TEMP_SWEEP)

    def __post_init__(self):
        if self.steps < 0:
            raise ValueError(f"steps不能为负, 得到 {self.steps}")
        if self.temperature <= 0:
            raise ValueError(f"温度必须 > 0, 得到 {self.temperature}")
        if self.repetitions < 1:
            raise ValueError(f"repetitions必须 >= 1, 得到 {self.repetitions}")
        self.temp_sweep = tuple(float(t) for t in self.temp_sweep)
        if len(self.temp_sweep) == 0 or min(self.temp_sweep) <= 0:
            raise ValueError("温度扫描列表必须非空且全部 > 0")


def lazy_greedy(inst: KnapsackInstance) -> GreedyResult:
    """
    按比率降序装包, 遇到第一个放不下的物品即停止

    r_stop 为第一个被拒绝物品的比率 (全部放下时为 None)
    """
    profile = ratios(inst)
    x = np.zeros(inst.n, dtype=np.int8)
    load = 0
    r_stop = None
    for idx in profile.order:
        if load + inst.weights[idx] > inst.capacity:
            r_stop = profile.ratios[idx]
            break
        x[idx] = 1
        load += inst.weights[idx]
    return GreedyResult(x=x, value=objective_value(inst, x), r_stop=r_stop)


def very_greedy(inst: KnapsackInstance) -> GreedyResult:
    """按比率降序扫描全部物品, 能放下就放"""
    profile = ratios(inst)
    x = np.zeros(inst.n, dtype=np.int8)
    load = 0
    r_stop = None
    for idx in profile.order:
        if load + inst.weights[idx] > inst.capacity:
            if r_stop is None:
                r_stop = profile.ratios[idx]
            continue
        x[idx] = 1
        load += inst.weights[idx]
    return GreedyResult(x=x, value=objective_value(inst, x), r_stop=r_stop)


def anneal_walks(
    inst: KnapsackInstance,
    starts: np.ndarray,
    temperatures: np.ndarray,
    steps: int,
    stream: np.random.Generator,
    proposal: Proposal = Proposal.LOCAL,
) -> np.ndarray:
    """
    批量运行相互独立的退火随机游走

    Args:
        inst: 背包实例
        starts: 起点 [B, n]
        temperatures: 每条游走的温度 [B]
        steps: 步数
        stream: 随机数流
        proposal: 邻域提议方式

    Returns:
        每条游走上见过的最高目标值 [B]
    """
    x = np.array(starts, dtype=np.int64, copy=True)
    if x.ndim != 2 or x.shape[1] != inst.n:
        raise ValueError(f"starts形状应为 [B, {inst.n}], 得到 {x.shape}")
    temps = np.broadcast_to(np.asarray(temperatures, dtype=float), (x.shape[0],))
    if np.any(temps <= 0):
        raise ValueError("温度必须 > 0")

    n = inst.n
    current = batch_objective_values(inst, x)
    best = current.copy()

    for _ in range(steps):
        if proposal == Proposal.LOCAL:
            load = x @ inst.w
            # 移除总是可行; 加入需要不超重
            movable = (x == 1) | (load[:, None] + inst.w[None, :] <= inst.capacity)
            keys = stream.random(x.shape)
            keys[~movable] = -1.0
            flip = np.argmax(keys, axis=1)
            has_move = movable.any(axis=1)
            candidate = x.copy()
            rows = np.arange(x.shape[0])
            candidate[rows, flip] ^= 1
            candidate[~has_move] = x[~has_move]
        elif proposal == Proposal.GLOBAL:
            mask = stream.random(x.shape) < 1.0 / n
            candidate = x ^ mask.astype(np.int64)
        else:
            raise ValueError(f"未知提议方式: {proposal}")

        cand_value = batch_objective_values(inst, candidate)
        delta = (cand_value - current).astype(float)
        with np.errstate(over='ignore'):
            accept_prob = np.exp(np.minimum(delta, 0.0) / temps)
        accept = (delta >= 0) | (stream.random(x.shape[0]) < accept_prob)

        x[accept] = candidate[accept]
        current = np.where(accept, cand_value, current)
        best = np.maximum(best, current)

    return best


def _check_start(inst: KnapsackInstance, start: np.ndarray) -> np.ndarray:
    start = np.asarray(start, dtype=np.int64)
    if not is_feasible(inst, start):
        raise ValueError("退火起点必须是可行解")
    return start


def simulated_annealing(inst: KnapsackInstance, cfg: AnnealConfig, start: np.ndarray,
                        stream: np.random.Generator) -> int:
    """单比特翻转邻域上的模拟退火, 返回游走中见过的最高分"""
    start = _check_start(inst, start)
    best = anneal_walks(inst, start[None, :], np.array([cfg.temperature]), cfg.steps, stream, Proposal.LOCAL)
    return int(best[0])


def global_simulated_annealing(inst: KnapsackInstance, cfg: AnnealConfig, start: np.ndarray,
                               stream: np.random.Generator) -> int:
    """全局提议 (每位以 1/n 概率翻转) 的模拟退火"""
    start = _check_start(inst, start)
    best = anneal_walks(inst, start[None, :], np.array([cfg.temperature]), cfg.steps, stream, Proposal.GLOBAL)
    return int(best[0])


def anneal_protocol(
    inst: KnapsackInstance,
    stream: np.random.Generator,
    proposal: Proposal = Proposal.LOCAL,
    cfg: Optional[AnnealConfig] = None,
    repetitions: int = 1,
) -> np.ndarray:
    """
    完整退火实验 (可批量重复)

    1. Lazy Greedy 结果作为热启动
    2. 每个温度跑 cfg.repetitions 次, 取平均分最高的 T*
    3. 在 T* 下重新跑一次, 返回见过的最高分

    Returns:
        每次重复实验的输出值 [repetitions]
    """
    cfg = cfg or AnnealConfig()
    warm = lazy_greedy(inst).x.astype(np.int64)
    sweep = np.asarray(cfg.temp_sweep, dtype=float)
    n_temps = sweep.shape[0]

    # [repetitions, n_temps, cfg.repetitions] 个独立游走一起跑
    temps = np.broadcast_to(sweep[None, :, None], (repetitions, n_temps, cfg.repetitions)).ravel()
    starts = np.broadcast_to(warm, (temps.shape[0], inst.n))
    sweep_best = anneal_walks(inst, starts, temps, cfg.steps, stream, proposal)
    mean_scores = sweep_best.reshape(repetitions, n_temps, cfg.repetitions).mean(axis=2)
    # 平均分相同时取较低温度
    t_star = sweep[np.argmax(mean_scores, axis=1)]

    final_starts = np.broadcast_to(warm, (repetitions, inst.n))
    return anneal_walks(inst, final_starts, t_star, cfg.steps, stream, proposal)


def sa_protocol(inst: KnapsackInstance, stream: np.random.Generator,
                cfg: Optional[AnnealConfig] = None) -> int:
    """SA 实验流程"""
    return int(anneal_protocol(inst, stream, Proposal.LOCAL, cfg, repetitions=1)[0])


def gsa_protocol(inst: KnapsackInstance, stream: np.random.Generator,
                 cfg: Optional[AnnealConfig] = None) -> int:
    """GSA 实验流程, 与 SA 相同的热启动与温度扫描"""
    return int(anneal_protocol(inst, stream, Proposal.GLOBAL, cfg, repetitions=1)[0])
