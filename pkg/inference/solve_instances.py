#!/usr/bin/env python3
"""
经典求解器批量推理脚本
对语料中的每个实例运行 lg / vg / sa / gsa / bf / dp, 结果写入CSV
"""

import argparse
import sys
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
from tqdm import tqdm

# 添加项目根目录到Python路径
current_dir = Path(__file__).parent
project_root = current_dir.parent
sys.path.insert(0, str(project_root))

from classical.solvers import (
    SOLVER_STREAM_CODES,
    AnnealConfig,
    Proposal,
    anneal_protocol,
    lazy_greedy,
    very_greedy,
)
from utils.data_loader import make_stream
from utils.knapsack import (
    CapacityExceededError,
    KnapsackInstance,
    brute_force_opt,
    dp_opt,
    load_instances,
)

ALGORITHMS = ("lg", "vg", "sa", "gsa", "bf", "dp")


def _bits_text(x) -> str:
    return "".join(str(int(b)) for b in x)


def solve_one(index: int, inst: KnapsackInstance, algo: str, seed: int = 0,
              cfg: Optional[AnnealConfig] = None, repetitions: int = 1) -> Dict:
    """
    对单个实例运行一个求解器

    Args:
        index: 实例下标 (决定子随机流)
        algo: lg / vg / sa / gsa / bf / dp
        repetitions: sa / gsa 的独立重复次数

    Returns:
        一行结果 (value 为第一次运行的输出)
    """
    row = {'instance_id': index, 'algo': algo, 'n': inst.n}
    if algo == "lg":
        result = lazy_greedy(inst)
        row.update(value=result.value, bits=_bits_text(result.x),
                   r_stop=None if result.r_stop is None else float(result.r_stop))
    elif algo == "vg":
        result = very_greedy(inst)
        row.update(value=result.value, bits=_bits_text(result.x))
    elif algo in ("sa", "gsa"):
        proposal = Proposal.LOCAL if algo == "sa" else Proposal.GLOBAL
        stream = make_stream(seed, index, SOLVER_STREAM_CODES[algo])
        values = anneal_protocol(inst, stream, proposal, cfg, repetitions)
        row.update(value=int(values[0]), value_mean=float(np.mean(values)), repetitions=repetitions)
    elif algo == "bf":
        x, value = brute_force_opt(inst)
        row.update(value=value, bits=_bits_text(x))
    elif algo == "dp":
        x, value = dp_opt(inst)
        row.update(value=value, bits=_bits_text(x))
    else:
        raise ValueError(f"未知算法: {algo} (可选: {ALGORITHMS})")
    return row


def solve_corpus(instances: List[KnapsackInstance], algo: str, seed: int = 0,
                 cfg: Optional[AnnealConfig] = None, repetitions: int = 1) -> pd.DataFrame:
    rows = []
    for i, inst in enumerate(tqdm(instances, desc=f"solve {algo}", dynamic_ncols=True)):
        rows.append(solve_one(i, inst, algo, seed, cfg, repetitions))
    return pd.DataFrame(rows)


def main():
    parser = argparse.ArgumentParser(description="Run classical knapsack solvers on a corpus")

    parser.add_argument("--algo", type=str, required=True, choices=ALGORITHMS, help="求解算法")
    parser.add_argument("--input", "--in", type=str, required=True, help="实例文件 (JSON / NDJSON)")
    parser.add_argument("--seed", type=int, default=0, help="随机种子 (sa / gsa)")
    parser.add_argument("--repetitions", type=int, default=1, help="sa / gsa 重复次数")
    parser.add_argument("--steps", type=int, default=10, help="退火步数")
    parser.add_argument("--output", "--out", type=str, default="./outputs/solve_results.csv", help="输出CSV")

    args = parser.parse_args()

    try:
        instances = load_instances(args.input)
        cfg = AnnealConfig(steps=args.steps)
        if args.repetitions < 1:
            raise ValueError(f"repetitions必须 >= 1, 得到 {args.repetitions}")
    except (ValueError, FileNotFoundError) as e:
        print(f"❌ {e}")
        return 1

    print(f"🚀 求解 {len(instances)} 个实例, 算法: {args.algo}")
    try:
        results = solve_corpus(instances, args.algo, args.seed, cfg, args.repetitions)
    except CapacityExceededError as e:
        print(f"❌ {e}")
        return 1

    output_path = Path(args.output)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    results.to_csv(output_path, index=False)

    if len(results) > 0:
        print(f"📊 平均目标值: {results['value'].mean():.2f}")
    print(f"💾 结果已保存: {output_path}")
    return 0


if __name__ == "__main__":
    exit(main())
