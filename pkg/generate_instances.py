#!/usr/bin/env python3
"""
生成困难背包实例语料
用法: python generate_instances.py --dist strong --n 10 --count 100 --seed 0 --output corpus.json
"""

import argparse
from pathlib import Path

import numpy as np

from utils.data_loader import ALL_DISTRIBUTIONS, DistributionKind, GeneratorConfig, KnapsackCorpus


def main():
    parser = argparse.ArgumentParser(description="Generate hard knapsack instance corpora")

    parser.add_argument("--dist", type=str, required=True,
                        choices=[k.value for k in ALL_DISTRIBUTIONS], help="实例分布")
    parser.add_argument("--n", type=int, default=10, help="每个实例的物品数")
    parser.add_argument("--count", type=int, default=100, help="实例数量")
    parser.add_argument("--seed", type=int, default=0, help="随机种子")
    parser.add_argument("--inv_strong_endpoints", action="store_true",
                        help="InvStrong 重量只取端点 {v+98, v+102}")
    parser.add_argument("--output", "--out", type=str, default="./outputs/corpus.json", help="输出文件 (NDJSON)")

    args = parser.parse_args()

    try:
        cfg = GeneratorConfig(
            kind=DistributionKind.parse(args.dist),
            n_items=args.n,
            seed=args.seed,
            inv_strong_endpoints=args.inv_strong_endpoints,
        )
        corpus = KnapsackCorpus.generate(cfg, args.count)
    except ValueError as e:
        print(f"❌ {e}")
        return 1

    output_path = corpus.save(Path(args.output))

    trivial = sum(inst.is_trivial for inst in corpus)
    capacity_share = np.mean([inst.capacity / inst.total_weight for inst in corpus])
    print(f"✅ 生成 {len(corpus)} 个 {cfg.kind.value} 实例 (n={cfg.n_items}, seed={cfg.seed})")
    print(f"📊 平均 c/Σw: {capacity_share:.3f}")
    if trivial > 0:
        print(f"⚠️  其中 {trivial} 个实例 Σw ≤ c (平凡实例)")
    print(f"💾 语料已保存: {output_path}")
    return 0


if __name__ == "__main__":
    exit(main())
