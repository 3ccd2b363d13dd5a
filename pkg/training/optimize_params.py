#!/usr/bin/env python3
"""
xQAOA 参数优化 (QKP_ZX / QKP_Cop)
k / θ 外循环 → (β, γ) 网格搜索 → 局部精修 (BFGS / Nelder-Mead)
"""

import argparse
import json
import multiprocessing
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import minimize
from tqdm import tqdm

# 添加项目根目录到Python路径
current_dir = Path(__file__).parent
project_root = current_dir.parent
sys.path.insert(0, str(project_root))

from classical.solvers import lazy_greedy, very_greedy
from quantum.circuit import (
    BETA_PERIOD,
    GAMMA_PERIOD,
    CircuitLandscape,
    CircuitParams,
    MixerKind,
    qkp_exact_metrics,
    qkp_run,
    wrap_angles,
)
from utils.data_loader import make_stream
from utils.knapsack import KnapsackInstance, brute_force_opt, load_instances
from utils.metrics import approximation_ratio

OBJECTIVE_MODES = ("expect", "expect_best", "sampled")
DEFAULT_K_RANGE: Tuple[float, ...] = tuple(float(k) for k in range(10, 25))
DEFAULT_THETA_RANGE: Tuple[float, ...] = (0.0, -0.5, -1.0)
# 子随机流编号: 采样目标 / 最终测量
SAMPLED_OBJECTIVE_STREAM = 7
QKP_RUN_STREAM = 8


@dataclass
class OptimizerConfig:
    """参数优化配置"""
    n_beta: int = 50
    n_gamma: int = 50
    k_range: Sequence[float] = field(default_factory=lambda: DEFAULT_K_RANGE)
    theta_range: Sequence[float] = field(default_factory=lambda: DEFAULT_THETA_RANGE)
    objective: str = "expect"
    shots: Optional[int] = None
    seed: int = 0
    refine: bool = True

    def __post_init__(self):
        if self.n_beta < 1 or self.n_gamma < 1:
            raise ValueError(f"网格大小必须 >= 1, 得到 {self.n_beta}x{self.n_gamma}")
        if self.objective not in OBJECTIVE_MODES:
            raise ValueError(f"未知目标模式: {self.objective} (可选: {OBJECTIVE_MODES})")
        if self.shots is not None and self.shots < 1:
            raise ValueError(f"shots必须 >= 1, 得到 {self.shots}")
        self.k_range = tuple(sorted(float(k) for k in self.k_range))
        if len(self.k_range) == 0 or self.k_range[0] <= 0:
            raise ValueError("k_range必须非空且全部 > 0")
        # 按 |θ| 升序 (θ 越接近0越优先)
        self.theta_range = tuple(sorted((float(t) for t in self.theta_range), key=abs))
        if len(self.theta_range) == 0 or any(abs(t) > 1 for t in self.theta_range):
            raise ValueError("theta_range必须非空且全部在 [−1, 1] 内")


class ParamObjective:
    """
    固定 (k, θ) 时的 (β, γ) 目标函数

    expect: 单次测量 E[f_obj]
    expect_best: N 次测量取最大值的精确期望
    sampled: 实际采样 N 次取最大值 (公共随机数, 同一组均匀数复用于所有 (β, γ))
    """

    def __init__(self, inst: KnapsackInstance, k: float, theta: Optional[float] = None,
                 mode: str = "expect", shots: Optional[int] = None, seed: int = 0):
        if mode not in OBJECTIVE_MODES:
            raise ValueError(f"未知目标模式: {mode}")
        self.mode = mode
        self.landscape = CircuitLandscape(inst, k, theta, shots)
        self.uniforms = None
        if mode == "sampled":
            stream = make_stream(seed, SAMPLED_OBJECTIVE_STREAM)
            self.uniforms = stream.random(self.landscape.shots)

    def batch(self, beta: float, gammas) -> np.ndarray:
        """同一个 β 下批量评估多个 γ"""
        if self.mode == "expect":
            return self.landscape.expected_value(beta, gammas)
        if self.mode == "expect_best":
            return self.landscape.expected_best_value(beta, gammas)

        probs = self.landscape.probabilities(beta, gammas)
        cdf = np.cumsum(probs, axis=1)
        last = probs.shape[1] - 1
        scores = np.empty(probs.shape[0])
        for row in range(probs.shape[0]):
            idx = np.minimum(np.searchsorted(cdf[row], self.uniforms * cdf[row, -1], side='right'), last)
            scores[row] = self.landscape.table[idx].max()
        return scores

    def __call__(self, beta: float, gamma: float) -> float:
        beta, gamma = wrap_angles(beta, gamma)
        return float(self.batch(beta, [gamma])[0])


def make_objective(inst: KnapsackInstance, k: float, theta: Optional[float] = None,
                   objective_mode: str = "expect", shots: Optional[int] = None, seed: int = 0) -> ParamObjective:
    return ParamObjective(inst, k, theta, objective_mode, shots, seed)


def grid_points(n_beta: int, n_gamma: int) -> Tuple[np.ndarray, np.ndarray]:
    """β ∈ {0, π/N_β, ...}, γ ∈ {0, 2π/N_γ, ...}"""
    if n_beta < 1 or n_gamma < 1:
        raise ValueError(f"网格大小必须 >= 1, 得到 {n_beta}x{n_gamma}")
    return BETA_PERIOD * np.arange(n_beta) / n_beta, GAMMA_PERIOD * np.arange(n_gamma) / n_gamma


def scan_grid(objective: ParamObjective, n_beta: int, n_gamma: int) -> Tuple[float, float, float, np.ndarray]:
    """
    在网格上评估目标

    Returns:
        (β0, γ0, 最优值, [n_beta, n_gamma] 目标表), 并列时取 (β, γ) 字典序最小者
    """
    betas, gammas = grid_points(n_beta, n_gamma)
    table = np.stack([objective.batch(beta, gammas) for beta in betas])
    flat = int(np.argmax(table))
    i, j = divmod(flat, n_gamma)
    return float(betas[i]), float(gammas[j]), float(table[i, j]), table


def grid_search(inst: KnapsackInstance, k: float, theta: Optional[float] = None,
                n_beta: int = 50, n_gamma: int = 50, objective_mode: str = "expect",
                shots: Optional[int] = None, seed: int = 0) -> Tuple[float, float]:
    """
    (β, γ) 暴力网格搜索

    Args:
        theta: None 表示沙漏混合器, 否则为环形 copula 的 θ
    """
    objective = make_objective(inst, k, theta, objective_mode, shots, seed)
    beta0, gamma0, _, _ = scan_grid(objective, n_beta, n_gamma)
    return beta0, gamma0


def refine_objective(objective: ParamObjective, start: Tuple[float, float]) -> Tuple[float, float, float]:
    """
    从 start 出发做局部连续优化, 结果不优于起点时返回起点

    Returns:
        (β*, γ*, 目标值), 角度已折回周期区间
    """
    beta0, gamma0 = wrap_angles(*start)
    start_value = objective(beta0, gamma0)
    method = "Nelder-Mead" if objective.mode == "sampled" else "BFGS"

    try:
        result = minimize(lambda x: -objective(x[0], x[1]), np.array([beta0, gamma0]), method=method)
    except (ValueError, FloatingPointError, np.linalg.LinAlgError):
        return beta0, gamma0, start_value

    if not np.all(np.isfinite(result.x)):
        return beta0, gamma0, start_value
    beta, gamma = wrap_angles(*result.x)
    value = objective(beta, gamma)
    if value > start_value:
        return beta, gamma, value
    return beta0, gamma0, start_value


def refine(inst: KnapsackInstance, k: float, theta: Optional[float], start: Tuple[float, float],
           objective_mode: str = "expect", shots: Optional[int] = None, seed: int = 0) -> Tuple[float, float]:
    """局部精修 (β, γ)"""
    objective = make_objective(inst, k, theta, objective_mode, shots, seed)
    beta, gamma, _ = refine_objective(objective, start)
    return beta, gamma


def optimize_angles(inst: KnapsackInstance, k: float, theta: Optional[float],
                    cfg: OptimizerConfig) -> Tuple[float, float, float]:
    """
    固定 (k, θ): 网格搜索 + 精修, 返回 (β, γ, 目标值)

    θ=0 的环形 copula 在 β 处等于沙漏混合器在 2β 处, 因此直接在沙漏景观上优化再把 β 减半,
    两者的最优值一致
    """
    if theta is not None and theta == 0.0:
        beta_zx, gamma, _ = optimize_angles(inst, k, None, cfg)
        objective = make_objective(inst, k, 0.0, cfg.objective, cfg.shots, cfg.seed)
        beta, gamma = wrap_angles(beta_zx / 2, gamma)
        return beta, gamma, objective(beta, gamma)

    objective = make_objective(inst, k, theta, cfg.objective, cfg.shots, cfg.seed)
    beta, gamma, value, _ = scan_grid(objective, cfg.n_beta, cfg.n_gamma)
    if cfg.refine:
        beta, gamma, value = refine_objective(objective, (beta, gamma))
    return beta, gamma, value


def optimize_params(inst: KnapsackInstance, mixer: MixerKind = MixerKind.HOURGLASS,
                    cfg: Optional[OptimizerConfig] = None) -> Tuple[CircuitParams, float]:
    """
    完整参数优化: 对每个 k (升序) 与 θ (按 |θ| 升序) 做网格搜索 + 精修

    沙漏混合器不使用 θ。目标值相同时保留先出现的组合 (k 较小, θ 更接近0)

    Raises:
        TrivialInstanceError: Σw ≤ c
    """
    cfg = cfg or OptimizerConfig()
    mixer = MixerKind.parse(mixer)
    thetas: Sequence[Optional[float]] = cfg.theta_range if mixer == MixerKind.COPULA_RING else (None,)

    best_params = None
    best_value = -np.inf
    for k in cfg.k_range:
        for theta in thetas:
            beta, gamma, value = optimize_angles(inst, k, theta, cfg)
            if value > best_value:
                best_value = value
                best_params = CircuitParams(beta=beta, gamma=gamma, k=k, theta=theta, mixer=mixer)
    return best_params, float(best_value)


def parse_k_range(text: str) -> Tuple[float, ...]:
    """'10:24' → 10..24 (含端点); '10,14,18' → 列表"""
    text = text.strip()
    if ":" in text:
        lo, hi = (int(part) for part in text.split(":"))
        if hi < lo:
            raise ValueError(f"k范围上界小于下界: {text}")
        return tuple(float(k) for k in range(lo, hi + 1))
    return tuple(float(k) for k in text.split(",") if k.strip())


def parse_float_list(text: str) -> Tuple[float, ...]:
    return tuple(float(t) for t in text.split(",") if t.strip())


def parse_grid(text: str) -> Tuple[int, int]:
    """'50x50' → (50, 50)"""
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise ValueError(f"网格格式应为 N_betaxN_gamma, 得到 {text}")
    return int(parts[0]), int(parts[1])


def solve_instance(index: int, inst: KnapsackInstance, mixer: MixerKind, cfg: OptimizerConfig) -> Dict:
    """
    对单个实例跑完整 QKP 流程, 返回一行结果

    平凡实例 (Σw ≤ c) 直接记为全选
    """
    row = {'instance_id': index, 'mixer': MixerKind.parse(mixer).value, 'n': inst.n}
    if inst.is_trivial:
        value = int(inst.v.sum())
        row.update({
            'trivial': True, 'k': None, 'theta': None, 'beta': None, 'gamma': None,
            'objective': float(value), 'optimum': value, 'sampled_value': value,
            'bits': "1" * inst.n, 'p_opt_single': 1.0, 'p_opt_bestofN': 1.0,
            'p_beat_lg': 0.0, 'p_beat_vg': 0.0, 'expected_bestofN_value': float(value),
            'approx_ratio': 1.0,
        })
        return row

    params, objective = optimize_params(inst, mixer, cfg)
    optimum = brute_force_opt(inst)[1]
    metrics = qkp_exact_metrics(inst, params, cfg.shots, optimum=optimum,
                                lg_value=lazy_greedy(inst).value, vg_value=very_greedy(inst).value)
    bits, value = qkp_run(inst, params, make_stream(cfg.seed, index, QKP_RUN_STREAM), cfg.shots)

    row.update({'trivial': False, **params.to_dict(), 'objective': objective, 'optimum': optimum,
                'sampled_value': value, 'bits': "".join(str(int(b)) for b in bits)})
    row.update(asdict(metrics))
    row['mixer'] = params.mixer.value
    row['approx_ratio'] = approximation_ratio(metrics.expected_bestofN_value, optimum)
    return row


def _solve_task(task) -> Dict:
    return solve_instance(*task)


def run_qkp(instances: List[KnapsackInstance], mixer: MixerKind, cfg: OptimizerConfig,
            num_workers: int = 0, desc: str = "QKP") -> pd.DataFrame:
    """对语料批量求解, 结果按实例下标排序 (与进程数无关)"""
    tasks = [(i, inst, mixer, cfg) for i, inst in enumerate(instances)]
    if num_workers > 0 and len(tasks) > 1:
        with multiprocessing.Pool(processes=num_workers) as pool:
            rows = list(tqdm(pool.imap(_solve_task, tasks), total=len(tasks), desc=desc, dynamic_ncols=True))
    else:
        rows = [_solve_task(task) for task in tqdm(tasks, desc=desc, dynamic_ncols=True)]
    return pd.DataFrame(rows).sort_values('instance_id').reset_index(drop=True)


def main():
    parser = argparse.ArgumentParser(description="Optimize xQAOA parameters for knapsack instances")

    parser.add_argument("--mixer", type=str, default="copula", choices=[m.value for m in MixerKind],
                        help="混合器类型")
    parser.add_argument("--input", "--in", type=str, required=True, help="实例文件 (JSON / NDJSON)")
    parser.add_argument("--k_range", "--k-range", type=str, default="10:24", help="k范围, 如 10:24 或 10,14,18")
    parser.add_argument("--theta", type=str, default="0,-0.5,-1", help="θ候选 (逗号分隔)")
    parser.add_argument("--grid", type=str, default="50x50", help="(β, γ) 网格大小")
    parser.add_argument("--shots", type=int, default=None, help="测量次数 (默认 n)")
    parser.add_argument("--objective", type=str, default="expect", choices=OBJECTIVE_MODES,
                        help="优化目标")
    parser.add_argument("--no_refine", action="store_true", help="跳过局部精修")
    parser.add_argument("--seed", type=int, default=0, help="随机种子")
    parser.add_argument("--output", "--out", type=str, default="./outputs/qkp_results.csv", help="输出CSV")
    parser.add_argument("--num_workers", type=int, default=0, help="并行进程数 (0 为串行)")

    args = parser.parse_args()

    try:
        n_beta, n_gamma = parse_grid(args.grid)
        cfg = OptimizerConfig(
            n_beta=n_beta,
            n_gamma=n_gamma,
            k_range=parse_k_range(args.k_range),
            theta_range=parse_float_list(args.theta),
            objective=args.objective,
            shots=args.shots,
            seed=args.seed,
            refine=not args.no_refine,
        )
        instances = load_instances(args.input)
    except (ValueError, FileNotFoundError) as e:
        print(f"❌ {e}")
        return 1

    mixer = MixerKind.parse(args.mixer)
    print(f"🚀 QKP 参数优化: {len(instances)} 个实例, 混合器 {mixer.value}")
    print(f"   📐 网格: {cfg.n_beta}×{cfg.n_gamma}, 目标: {cfg.objective}")
    print(f"   📈 k: {list(cfg.k_range)}")
    if mixer == MixerKind.COPULA_RING:
        print(f"   🔗 θ: {list(cfg.theta_range)}")

    results = run_qkp(instances, mixer, cfg, args.num_workers)

    output_path = Path(args.output)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    results.to_csv(output_path, index=False)
    with open(output_path.with_suffix('.config.json'), 'w') as f:
        json.dump({**asdict(cfg), 'mixer': mixer.value, 'input': args.input}, f, indent=2)

    solved = results[~results['trivial']]
    if len(solved) > 0:
        print(f"📊 平均近似比: {solved['approx_ratio'].mean():.4f}")
        print(f"📊 平均最优概率 (best-of-N): {solved['p_opt_bestofN'].mean():.4f}")
    print(f"💾 结果已保存: {output_path}")
    return 0


if __name__ == "__main__":
    exit(main())
