#!/usr/bin/env python3
"""
0/1 背包问题核心
实例表示、可行性/目标函数评估、精确求解 (穷举 / 动态规划)
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np

# 穷举上限 (2^30 个组合已经是分钟级别)
MAX_BRUTE_FORCE_ITEMS = 30
# DP 表格默认上限 (单元格数)
DEFAULT_DP_MAX_CELLS = 50_000_000
# 穷举时每块枚举的组合数
_ENUM_CHUNK = 1 << 18


class CapacityExceededError(ValueError):
    """问题规模超出求解器允许的范围"""


class TrivialInstanceError(ValueError):
    """Σw ≤ c, 全选即为最优解"""


class UnsupportedShapeError(ValueError):
    """电路结构不支持当前比特数 (例如奇数比特的环形混合器)"""


@dataclass(frozen=True)
class KnapsackInstance:
    """背包实例 (n, v, w, c)"""
    values: Tuple[int, ...]
    weights: Tuple[int, ...]
    capacity: int

    def __post_init__(self):
        values = tuple(int(x) for x in self.values)
        weights = tuple(int(x) for x in self.weights)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'weights', weights)
        object.__setattr__(self, 'capacity', int(self.capacity))

        if len(values) == 0:
            raise ValueError("实例至少需要1个物品")
        if len(values) != len(weights):
            raise ValueError(f"values与weights长度不一致: {len(values)} vs {len(weights)}")
        if min(values) < 1 or min(weights) < 1:
            raise ValueError("所有价值和重量必须是正整数")
        if self.capacity < 1:
            raise ValueError(f"容量必须是正整数, 得到 {self.capacity}")

    @property
    def n(self) -> int:
        return len(self.values)

    @cached_property
    def v(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.int64)

    @cached_property
    def w(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=np.int64)

    @property
    def total_weight(self) -> int:
        return int(sum(self.weights))

    @property
    def is_trivial(self) -> bool:
        """所有物品都能放下"""
        return self.total_weight <= self.capacity

    def to_dict(self) -> Dict:
        return {
            'n': self.n,
            'values': list(self.values),
            'weights': list(self.weights),
            'capacity': self.capacity,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "KnapsackInstance":
        inst = cls(values=data['values'], weights=data['weights'], capacity=data['capacity'])
        if 'n' in data and int(data['n']) != inst.n:
            raise ValueError(f"n字段 ({data['n']}) 与物品数量 ({inst.n}) 不一致")
        return inst


@dataclass(frozen=True)
class RatioProfile:
    """单位重量价值 r_i = v_i / w_i 及其降序排列"""
    ratios: Tuple[Fraction, ...]
    order: Tuple[int, ...]

    def as_float(self) -> np.ndarray:
        return np.array([float(r) for r in self.ratios])


def _as_bits(inst: KnapsackInstance, x: Sequence[int]) -> np.ndarray:
    bits = np.asarray(x, dtype=np.int64).ravel()
    if bits.shape[0] != inst.n:
        raise ValueError(f"比特串长度 {bits.shape[0]} 与物品数 {inst.n} 不一致")
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError("比特串只能包含0和1")
    return bits


def is_feasible(inst: KnapsackInstance, x: Sequence[int]) -> bool:
    """w·x ≤ c"""
    bits = _as_bits(inst, x)
    return int(bits @ inst.w) <= inst.capacity


def objective_value(inst: KnapsackInstance, x: Sequence[int]) -> int:
    """
    目标函数 f_obj: 可行解返回 v·x, 超重解记为0

    Args:
        inst: 背包实例
        x: 长度为n的0/1向量

    Returns:
        非负整数目标值
    """
    bits = _as_bits(inst, x)
    if int(bits @ inst.w) > inst.capacity:
        return 0
    return int(bits @ inst.v)


def batch_objective_values(inst: KnapsackInstance, bits: np.ndarray) -> np.ndarray:
    """对形状 [..., n] 的比特数组批量计算 f_obj"""
    bits = np.asarray(bits, dtype=np.int64)
    if bits.shape[-1] != inst.n:
        raise ValueError(f"比特数组最后一维 {bits.shape[-1]} 与物品数 {inst.n} 不一致")
    values = bits @ inst.v
    weights = bits @ inst.w
    return np.where(weights <= inst.capacity, values, 0)


def ratios(inst: KnapsackInstance) -> RatioProfile:
    """
    计算比率并按降序排序

    比较使用精确有理数, 相同比率按原始下标升序
    """
    profile = tuple(Fraction(v, w) for v, w in zip(inst.values, inst.weights))
    order = tuple(sorted(range(inst.n), key=lambda i: (-profile[i], i)))
    return RatioProfile(ratios=profile, order=order)


@lru_cache(maxsize=32)
def basis_bits(n_qubits: int) -> np.ndarray:
    """
    全部 2^n 个基态对应的比特表, 小端序: 第b行的第i列 = b 的第i位 (只读)
    """
    index = np.arange(1 << n_qubits, dtype=np.int64)
    bits = ((index[:, None] >> np.arange(n_qubits)) & 1).astype(np.int8)
    bits.setflags(write=False)
    return bits


def basis_objective_values(inst: KnapsackInstance) -> np.ndarray:
    """按基态下标 (小端序) 排列的 f_obj 表, 供态矢量模拟使用"""
    return batch_objective_values(inst, basis_bits(inst.n))


def _lex_bits(n: int, start: int, stop: int) -> np.ndarray:
    # 整数 m 的最高位对应 x_0, 因此 m 的升序即比特串的字典序
    m = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((m[:, None] >> shifts) & 1).astype(np.int64)


def brute_force_opt(inst: KnapsackInstance) -> Tuple[np.ndarray, int]:
    """
    穷举全部 2^n 个组合

    Returns:
        (最优比特串, 最优值), 多个最优解时返回字典序最小的
    """
    n = inst.n
    if n > MAX_BRUTE_FORCE_ITEMS:
        raise CapacityExceededError(f"穷举最多支持 {MAX_BRUTE_FORCE_ITEMS} 个物品, 得到 {n}")

    total = 1 << n
    best_value = -1
    best_index = 0
    for start in range(0, total, _ENUM_CHUNK):
        stop = min(start + _ENUM_CHUNK, total)
        scores = batch_objective_values(inst, _lex_bits(n, start, stop))
        local = int(np.argmax(scores))
        # 严格大于: 前面块中的相同值字典序更小
        if scores[local] > best_value:
            best_value = int(scores[local])
            best_index = start + local

    best_bits = _lex_bits(n, best_index, best_index + 1)[0].astype(np.int8)
    return best_bits, best_value


def dp_opt(inst: KnapsackInstance, max_cells: int = DEFAULT_DP_MAX_CELLS) -> Tuple[np.ndarray, int]:
    """
    n·c 动态规划表格求解, 回溯得到一个最优解

    Args:
        inst: 背包实例
        max_cells: 表格单元格上限
    """
    n, c = inst.n, inst.capacity
    cells = (n + 1) * (c + 1)
    if cells > max_cells:
        raise CapacityExceededError(f"DP表格需要 {cells} 个单元格, 超过上限 {max_cells}")

    table = np.zeros((n + 1, c + 1), dtype=np.int64)
    for i in range(1, n + 1):
        wi, vi = inst.weights[i - 1], inst.values[i - 1]
        table[i] = table[i - 1]
        if wi <= c:
            table[i, wi:] = np.maximum(table[i - 1, wi:], table[i - 1, :c + 1 - wi] + vi)

    x = np.zeros(n, dtype=np.int8)
    remaining = c
    for i in range(n, 0, -1):
        if table[i, remaining] != table[i - 1, remaining]:
            x[i - 1] = 1
            remaining -= inst.weights[i - 1]

    return x, int(table[n, c])


def load_instances(path: Union[str, Path]) -> List[KnapsackInstance]:
    """
    读取实例文件

    支持: 单个JSON对象 / JSON数组 / 每行一个JSON对象
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"实例文件不存在: {path}")

    text = path.read_text().strip()
    if not text:
        return []

    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = [json.loads(line) for line in text.splitlines() if line.strip()]

    if isinstance(data, dict):
        data = [data]
    return [KnapsackInstance.from_dict(item) for item in data]


def save_instances(path: Union[str, Path], instances: Iterable[KnapsackInstance]) -> Path:
    """按每行一个JSON对象写出语料"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w') as f:
        for inst in instances:
            f.write(json.dumps(inst.to_dict()) + "\n")
    return path
