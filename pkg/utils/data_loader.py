#!/usr/bin/env python3
"""
困难背包实例生成器
五种困难分布 (Strong / InvStrong / Profit / StrongSpanner / ProfitSpanner) 与语料读写
"""

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from utils.knapsack import KnapsackInstance, load_instances, save_instances

# 基础物品的取值范围 {1..1000}
ITEM_RANGE = 1000
# Strong 分布的固定附加值
STRONG_OFFSET = 1000
# InvStrong 分布的重量偏移区间 [v+98, v+102]
INV_STRONG_LOW, INV_STRONG_HIGH = 98, 102
# 容量比例 α ∈ {25..75}
ALPHA_LOW, ALPHA_HIGH = 25, 75
# Spanner 分布的基础集合大小与缩放倍数
SPAN_SIZE = 20
SPAN_MULTIPLIERS = (1, 2, 3)


class DistributionKind(str, Enum):
    """困难实例分布"""
    STRONG = "strong"
    INV_STRONG = "inv-strong"
    PROFIT = "profit"
    STRONG_SPANNER = "strong-spanner"
    PROFIT_SPANNER = "profit-spanner"

    @classmethod
    def parse(cls, name: Union[str, "DistributionKind"]) -> "DistributionKind":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", "-")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"未知分布: {name} (可选: {[k.value for k in cls]})")


ALL_DISTRIBUTIONS: Tuple[DistributionKind, ...] = tuple(DistributionKind)


@dataclass
class GeneratorConfig:
    """生成器配置"""
    kind: DistributionKind
    n_items: int = 10
    seed: int = 0
    # InvStrong 重量只取两个端点 {v+98, v+102} (敏感性检查用)
    inv_strong_endpoints: bool = False

    def __post_init__(self):
        self.kind = DistributionKind.parse(self.kind)
        if self.n_items < 1:
            raise ValueError(f"n_items必须 >= 1, 得到 {self.n_items}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError(f"seed必须是64位无符号整数, 得到 {self.seed}")


def make_stream(seed: int, *key: int) -> np.random.Generator:
    """
    由 (seed, key...) 派生独立子流

    子流 i = PCG64(SeedSequence(seed, spawn_key=(i, ...)))
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))))


def _sample_items(kind: DistributionKind, count: int, stream: np.random.Generator,
                  inv_strong_endpoints: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """采样 count 个 (v, w) 物品"""
    if kind == DistributionKind.STRONG:
        w = stream.integers(1, ITEM_RANGE + 1, size=count)
        v = w + STRONG_OFFSET
    elif kind == DistributionKind.INV_STRONG:
        v = stream.integers(1, ITEM_RANGE + 1, size=count)
        if inv_strong_endpoints:
            offset = stream.choice(np.array([INV_STRONG_LOW, INV_STRONG_HIGH]), size=count)
        else:
            offset = stream.integers(INV_STRONG_LOW, INV_STRONG_HIGH + 1, size=count)
        w = v + offset
    elif kind == DistributionKind.PROFIT:
        w = stream.integers(1, ITEM_RANGE + 1, size=count)
        v = 3 * ((w + 2) // 3)
    elif kind in (DistributionKind.STRONG_SPANNER, DistributionKind.PROFIT_SPANNER):
        base = DistributionKind.STRONG if kind == DistributionKind.STRONG_SPANNER else DistributionKind.PROFIT
        span_v, span_w = _sample_items(base, SPAN_SIZE, stream)
        # ⌈2x/3⌉ 缩放后构成 span
        span_v = (2 * span_v + 2) // 3
        span_w = (2 * span_w + 2) // 3
        pick = stream.integers(0, SPAN_SIZE, size=count)
        scale = stream.choice(np.array(SPAN_MULTIPLIERS), size=count)
        v = scale * span_v[pick]
        w = scale * span_w[pick]
    else:
        raise ValueError(f"未知分布: {kind}")
    return v.astype(np.int64), w.astype(np.int64)


def sample_capacity(weights: np.ndarray, stream: np.random.Generator) -> int:
    """c = ⌈α·Σw/100⌉, α 均匀取自 {25..75}"""
    alpha = int(stream.integers(ALPHA_LOW, ALPHA_HIGH + 1))
    total = int(np.sum(weights))
    return (alpha * total + 99) // 100


def sample_instance(cfg: GeneratorConfig, stream: np.random.Generator) -> KnapsackInstance:
    """
    按配置的分布采样一个实例

    Args:
        cfg: 生成器配置
        stream: 随机数流 (先采物品, 再采 α)

    Returns:
        KnapsackInstance
    """
    v, w = _sample_items(cfg.kind, cfg.n_items, stream, cfg.inv_strong_endpoints)
    capacity = sample_capacity(w, stream)
    return KnapsackInstance(values=v.tolist(), weights=w.tolist(), capacity=capacity)


def sample_corpus(cfg: GeneratorConfig, count: int) -> List[KnapsackInstance]:
    """生成 count 个实例, 第 i 个实例使用子流 (seed, i)"""
    if count < 1:
        raise ValueError(f"count必须 >= 1, 得到 {count}")
    return [sample_instance(cfg, make_stream(cfg.seed, i)) for i in range(count)]


class KnapsackCorpus:
    """背包实例语料 (按下标访问, 可从文件加载或按配置生成)"""

    def __init__(self, instances: Sequence[KnapsackInstance], name: Optional[str] = None):
        self.instances = list(instances)
        self.name = name or "corpus"

        if len(self.instances) == 0:
            raise ValueError("语料为空")

    @classmethod
    def generate(cls, cfg: GeneratorConfig, count: int) -> "KnapsackCorpus":
        return cls(sample_corpus(cfg, count), name=cfg.kind.value)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "KnapsackCorpus":
        path = Path(path)
        return cls(load_instances(path), name=path.stem)

    def save(self, path: Union[str, Path]) -> Path:
        return save_instances(path, self.instances)

    def __len__(self) -> int:
        return len(self.instances)

    def __getitem__(self, idx: int) -> KnapsackInstance:
        return self.instances[idx]

    def __iter__(self):
        return iter(self.instances)
