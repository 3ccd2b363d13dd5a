#!/usr/bin/env python3
"""
计算初始态偏置并导出曲线数据
输出长表 (kind, k, i, r_i, p_i), 用于画平滑 Lazy Greedy 分布图
"""

import argparse
from pathlib import Path
from typing import List

import pandas as pd

from utils.bias import BiasVector, constant_bias, lazy_greedy_bias, logistic_bias
from utils.knapsack import KnapsackInstance, TrivialInstanceError, load_instances, ratios

BIAS_KINDS = ("constant", "lg", "logistic", "all")


def bias_rows(instance_id: int, inst: KnapsackInstance, bias: BiasVector) -> List[dict]:
    """一个偏置向量 → 每个物品一行"""
    r = ratios(inst).as_float()
    return [
        {
            'instance_id': instance_id,
            'kind': bias.provenance,
            'k': bias.k,
            'i': i,
            'r_i': float(r[i]),
            'p_i': float(bias.p[i]),
            'r_star': None if bias.r_star is None else float(bias.r_star),
        }
        for i in range(inst.n)
    ]


def compute_biases(instances: List[KnapsackInstance], kind: str, ks: List[float]) -> pd.DataFrame:
    rows = []
    for idx, inst in enumerate(instances):
        if inst.is_trivial:
            print(f"⚠️  实例 {idx} 是平凡实例 (Σw ≤ c), 跳过")
            continue
        if kind in ("constant", "all"):
            rows += bias_rows(idx, inst, constant_bias(inst))
        if kind in ("lg", "all"):
            rows += bias_rows(idx, inst, lazy_greedy_bias(inst))
        if kind in ("logistic", "all"):
            for k in ks:
                rows += bias_rows(idx, inst, logistic_bias(inst, k))
    return pd.DataFrame(rows)


def main():
    parser = argparse.ArgumentParser(description="Compute initial-state bias vectors")

    parser.add_argument("--input", "--in", type=str, required=True, help="实例文件 (JSON / NDJSON)")
    parser.add_argument("--kind", type=str, default="logistic", choices=BIAS_KINDS, help="偏置类型")
    parser.add_argument("--k", type=float, nargs="+", default=[15.0], help="logistic 陡峭程度 (可多个)")
    parser.add_argument("--output", "--out", type=str, default="./outputs/bias.csv", help="输出CSV")

    args = parser.parse_args()

    try:
        instances = load_instances(args.input)
        table = compute_biases(instances, args.kind, args.k)
    except (ValueError, FileNotFoundError, TrivialInstanceError) as e:
        print(f"❌ {e}")
        return 1

    output_path = Path(args.output)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(output_path, index=False)
    print(f"✅ {len(instances)} 个实例, {len(table)} 行偏置数据")
    print(f"💾 已保存: {output_path}")
    return 0


if __name__ == "__main__":
    exit(main())
