#!/usr/bin/env python3
"""
求解器评估指标
最优概率、超过 LG / VG 的概率、期望近似比, 以及按分布汇总的结果表
"""

from dataclasses import asdict, dataclass
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

# 结果表中的行顺序
SOLVER_TAGS = ("LG", "VG", "SA", "GSA", "QKP_ZX", "QKP_Cop")
METRIC_NAMES = ("p_optimal", "p_beat_lg", "p_beat_vg", "approx_ratio")
METRIC_TITLES = {
    'p_optimal': "Probability of Optimality",
    'p_beat_lg': "Probability of Outperforming LG",
    'p_beat_vg': "Probability of Outperforming VG",
    'approx_ratio': "Expected Approximation Ratio",
}
# 浮点舍入容差
_PROB_TOL = 1e-9


def approximation_ratio(value: float, optimum: int) -> float:
    """value ÷ 最优值; 最优值为0 (没有物品放得下) 时记为1"""
    if optimum <= 0:
        return 1.0
    return float(value) / float(optimum)


@dataclass
class SolverReport:
    """单个实例上单个求解器的结果"""
    instance_id: int
    solver: str
    distribution: str
    value: float
    optimum: int
    p_optimal: float
    p_beat_lg: float
    p_beat_vg: float
    approx_ratio: float

    def __post_init__(self):
        for name in METRIC_NAMES:
            x = float(getattr(self, name))
            if not -_PROB_TOL <= x <= 1.0 + _PROB_TOL:
                raise ValueError(f"{self.solver} 实例 {self.instance_id}: {name}={x} 超出 [0, 1]")
            setattr(self, name, min(max(x, 0.0), 1.0))

    def to_dict(self) -> Dict:
        return asdict(self)


def deterministic_report(instance_id: int, solver: str, distribution: str, value: int,
                         optimum: int, lg_value: int, vg_value: int) -> SolverReport:
    """确定性求解器: 各项概率为0或1"""
    return SolverReport(
        instance_id=instance_id,
        solver=solver,
        distribution=distribution,
        value=float(value),
        optimum=int(optimum),
        p_optimal=float(value >= optimum),
        p_beat_lg=float(value > lg_value),
        p_beat_vg=float(value > vg_value),
        approx_ratio=approximation_ratio(value, optimum),
    )


def sampled_report(instance_id: int, solver: str, distribution: str, values: Sequence[int],
                   optimum: int, lg_value: int, vg_value: int) -> SolverReport:
    """
    随机求解器: 用 R 次独立重复的频率估计概率

    Args:
        values: 每次重复的输出值 [R]
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("至少需要一次重复")
    return SolverReport(
        instance_id=instance_id,
        solver=solver,
        distribution=distribution,
        value=float(values.mean()),
        optimum=int(optimum),
        p_optimal=float(np.mean(values >= optimum)),
        p_beat_lg=float(np.mean(values > lg_value)),
        p_beat_vg=float(np.mean(values > vg_value)),
        approx_ratio=approximation_ratio(values.mean(), optimum),
    )


def quantum_report(instance_id: int, solver: str, distribution: str, metrics,
                   optimum: int) -> SolverReport:
    """由 ExactMetrics (best-of-N 精确值) 构造报告"""
    return SolverReport(
        instance_id=instance_id,
        solver=solver,
        distribution=distribution,
        value=float(metrics.expected_bestofN_value),
        optimum=int(optimum),
        p_optimal=metrics.p_opt_bestofN,
        p_beat_lg=metrics.p_beat_lg,
        p_beat_vg=metrics.p_beat_vg,
        approx_ratio=approximation_ratio(metrics.expected_bestofN_value, optimum),
    )


def trivial_report(instance_id: int, solver: str, distribution: str, value: int) -> SolverReport:
    """Σw ≤ c: 全选即最优, 任何求解器都不可能严格超过 LG / VG"""
    return SolverReport(instance_id, solver, distribution, float(value), int(value), 1.0, 0.0, 0.0, 1.0)


class MetricsCalculator:
    """收集 SolverReport 并汇总成结果表"""

    def __init__(self, reports: Optional[Iterable[SolverReport]] = None):
        self.reports: List[SolverReport] = list(reports or [])

    def add(self, report: SolverReport):
        self.reports.append(report)

    def extend(self, reports: Iterable[SolverReport]):
        self.reports.extend(reports)

    def to_frame(self) -> pd.DataFrame:
        columns = list(SolverReport.__dataclass_fields__)
        return pd.DataFrame([r.to_dict() for r in self.reports], columns=columns)

    def summary_tables(self, distributions: Optional[Sequence[str]] = None) -> pd.DataFrame:
        """
        四张汇总表 (长表形式)

        Returns:
            列为 metric, solver 以及每个分布一列, 值为实例平均
        """
        frame = self.to_frame()
        if frame.empty:
            return pd.DataFrame(columns=["metric", "solver"])
        distributions = list(distributions) if distributions else list(dict.fromkeys(frame['distribution']))
        solvers = [s for s in SOLVER_TAGS if s in set(frame['solver'])]
        solvers += [s for s in dict.fromkeys(frame['solver']) if s not in solvers]

        means = frame.groupby(['solver', 'distribution'])[list(METRIC_NAMES)].mean()
        rows = []
        for metric in METRIC_NAMES:
            for solver in solvers:
                row = {'metric': metric, 'solver': solver}
                for dist in distributions:
                    row[dist] = float(means.loc[(solver, dist), metric]) if (solver, dist) in means.index else np.nan
                rows.append(row)
        return pd.DataFrame(rows)

    def check_invariants(self) -> List[str]:
        """
        检查结果的一致性, 返回违反项描述 (空列表表示通过)
        """
        problems = []
        frame = self.to_frame()
        if frame.empty:
            return problems

        for name in METRIC_NAMES:
            bad = frame[(frame[name] < 0) | (frame[name] > 1)]
            if len(bad) > 0:
                problems.append(f"{name} 超出 [0, 1]: {len(bad)} 行")

        # 非平凡实例上量子求解器的期望近似比 > 0
        quantum = frame[frame['solver'].str.startswith("QKP") & (frame['optimum'] > 0)]
        if (quantum['approx_ratio'] <= 0).any():
            problems.append("量子求解器出现期望近似比 ≤ 0")

        # VG 至少与 LG 一样好
        pivot = frame[frame['solver'].isin(["LG", "VG"])].pivot_table(
            index=['distribution', 'instance_id'], columns='solver', values='value')
        if {"LG", "VG"} <= set(pivot.columns) and (pivot["VG"] < pivot["LG"]).any():
            problems.append("存在 VG 值低于 LG 的实例")

        # 任何求解器的值都不超过最优值
        deterministic = frame[frame['solver'].isin(["LG", "VG"])]
        if (deterministic['value'] > deterministic['optimum']).any():
            problems.append("确定性求解器的值超过最优值")
        return problems


def print_summary(tables: pd.DataFrame):
    """按指标分块打印汇总表"""
    if tables.empty:
        print("⚠️  没有可汇总的结果")
        return
    for metric in METRIC_NAMES:
        block = tables[tables['metric'] == metric].drop(columns='metric').set_index('solver')
        if block.empty:
            continue
        print(f"\n📊 {METRIC_TITLES[metric]}")
        print(block.to_string(float_format=lambda x: f"{x:.3f}"))
