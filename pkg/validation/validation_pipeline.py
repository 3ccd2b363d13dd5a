#!/usr/bin/env python3
"""
基准测试流程
生成语料 → 经典 / 量子求解 → 汇总四张结果表 → (k, θ) 扫描 → 一致性检查
"""

import argparse
import json
import multiprocessing
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

# 添加项目根目录到Python路径
current_dir = Path(__file__).parent
project_root = current_dir.parent
sys.path.insert(0, str(project_root))

from classical.solvers import SOLVER_STREAM_CODES, AnnealConfig, Proposal, anneal_protocol, lazy_greedy, very_greedy
from quantum.circuit import CircuitParams, MixerKind, qkp_exact_metrics
from training.optimize_params import (
    DEFAULT_K_RANGE,
    DEFAULT_THETA_RANGE,
    OBJECTIVE_MODES,
    OptimizerConfig,
    optimize_angles,
    optimize_params,
)
from utils.data_loader import ALL_DISTRIBUTIONS, DistributionKind, GeneratorConfig, KnapsackCorpus, make_stream
from utils.knapsack import (
    CapacityExceededError,
    KnapsackInstance,
    UnsupportedShapeError,
    brute_force_opt,
    dp_opt,
)
from utils.metrics import (
    SOLVER_TAGS,
    MetricsCalculator,
    SolverReport,
    deterministic_report,
    print_summary,
    quantum_report,
    sampled_report,
    trivial_report,
)

TOOL_VERSION = "1.0.0"
PRESETS = ("ci", "full")
# 外部文档中的预设名
PRESET_ALIASES = {"paper": "full"}


class ManifestError(ValueError):
    """运行清单格式或取值错误"""


@dataclass
class CampaignManifest:
    """
    一次基准测试的完整配置, 足以逐位复现全部输出
    """
    preset: str = "ci"
    seed: int = 0
    distributions: Sequence[str] = field(default_factory=lambda: [k.value for k in ALL_DISTRIBUTIONS])
    instances_per_distribution: int = 20
    n_items: int = 10
    solvers: Sequence[str] = field(default_factory=lambda: list(SOLVER_TAGS))
    # 量子参数优化
    n_beta: int = 20
    n_gamma: int = 20
    k_range: Sequence[float] = (10.0, 14.0, 18.0, 22.0)
    theta_range: Sequence[float] = (0.0, -1.0)
    objective: str = "expect"
    shots: Optional[int] = None
    refine: bool = True
    # SA / GSA
    anneal_steps: int = 10
    sa_repetitions: int = 100
    # (k, θ) 扫描
    run_sweep: bool = True
    sweep_tolerance: float = 1e-6
    tool_version: str = TOOL_VERSION

    def __post_init__(self):
        try:
            self.distributions = [DistributionKind.parse(d).value for d in self.distributions]
        except ValueError as e:
            raise ManifestError(str(e)) from e
        if len(self.distributions) == 0:
            raise ManifestError("至少需要一个分布")
        unknown = [s for s in self.solvers if s not in SOLVER_TAGS]
        if unknown:
            raise ManifestError(f"未知求解器: {unknown} (可选: {SOLVER_TAGS})")
        self.solvers = [s for s in SOLVER_TAGS if s in self.solvers]
        if self.instances_per_distribution < 1 or self.n_items < 1:
            raise ManifestError("instances_per_distribution 和 n_items 必须 >= 1")
        if self.sa_repetitions < 1 or self.anneal_steps < 0:
            raise ManifestError("sa_repetitions必须 >= 1, anneal_steps不能为负")
        if self.objective not in OBJECTIVE_MODES:
            raise ManifestError(f"未知目标模式: {self.objective}")
        self.k_range = [float(k) for k in self.k_range]
        self.theta_range = [float(t) for t in self.theta_range]
        # 复用 OptimizerConfig 的校验
        try:
            self.optimizer_config()
        except ValueError as e:
            raise ManifestError(str(e)) from e

    @classmethod
    def from_preset(cls, name: str, **overrides) -> "CampaignManifest":
        """
        ci: 20 个实例 / 分布, 20×20 网格, k ∈ {10, 14, 18, 22}, θ ∈ {0, −1}
        full: 100 个实例 / 分布, 50×50 网格, k ∈ {10..24}, θ ∈ {0, −½, −1}
        paper: full 的别名
        """
        name = PRESET_ALIASES.get(name, name)
        if name == "ci":
            base = dict(preset="ci")
        elif name == "full":
            base = dict(preset="full", instances_per_distribution=100, n_beta=50, n_gamma=50,
                        k_range=DEFAULT_K_RANGE, theta_range=DEFAULT_THETA_RANGE)
        else:
            raise ManifestError(f"未知预设: {name} (可选: {PRESETS})")
        base.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**base)

    @classmethod
    def from_dict(cls, data: Dict) -> "CampaignManifest":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ManifestError(f"清单中有未知字段: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "CampaignManifest":
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ManifestError(f"无法读取清单 {path}: {e}") from e
        if not isinstance(data, dict):
            raise ManifestError("清单必须是JSON对象")
        return cls.from_dict(data)

    def to_dict(self) -> Dict:
        data = asdict(self)
        for key in ('distributions', 'solvers', 'k_range', 'theta_range'):
            data[key] = list(data[key])
        return data

    def save(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w') as f:
            json.dump(self.to_dict(), f, indent=2)
        return path

    def optimizer_config(self) -> OptimizerConfig:
        return OptimizerConfig(n_beta=self.n_beta, n_gamma=self.n_gamma, k_range=self.k_range,
                               theta_range=self.theta_range, objective=self.objective,
                               shots=self.shots, seed=self.seed, refine=self.refine)

    def anneal_config(self) -> AnnealConfig:
        return AnnealConfig(steps=self.anneal_steps)

    def corpus(self, distribution: str) -> KnapsackCorpus:
        cfg = GeneratorConfig(kind=distribution, n_items=self.n_items, seed=self.seed)
        return KnapsackCorpus.generate(cfg, self.instances_per_distribution)


def evaluate_instance(task: Tuple[CampaignManifest, str, int, KnapsackInstance]) -> Tuple[List[Dict], List[str], List[str]]:
    """
    在一个实例上运行清单中的全部求解器

    Returns:
        (SolverReport 字典列表, 违反项, 警告)
    """
    manifest, dist, index, inst = task
    problems, warnings = [], []

    optimum = brute_force_opt(inst)[1]
    try:
        if dp_opt(inst)[1] != optimum:
            problems.append(f"{dist}#{index}: DP 与穷举最优值不一致")
    except CapacityExceededError:
        warnings.append(f"{dist}#{index}: DP 表格过大, 跳过交叉检查")

    lg_value = lazy_greedy(inst).value
    vg_value = very_greedy(inst).value

    if inst.is_trivial:
        return [trivial_report(index, s, dist, optimum).to_dict() for s in manifest.solvers], problems, warnings

    reports: List[SolverReport] = []
    for solver in manifest.solvers:
        if solver == "LG":
            reports.append(deterministic_report(index, solver, dist, lg_value, optimum, lg_value, vg_value))
        elif solver == "VG":
            reports.append(deterministic_report(index, solver, dist, vg_value, optimum, lg_value, vg_value))
        elif solver in ("SA", "GSA"):
            proposal = Proposal.LOCAL if solver == "SA" else Proposal.GLOBAL
            stream = make_stream(manifest.seed, index, SOLVER_STREAM_CODES[solver.lower()])
            values = anneal_protocol(inst, stream, proposal, manifest.anneal_config(), manifest.sa_repetitions)
            reports.append(sampled_report(index, solver, dist, values, optimum, lg_value, vg_value))
        else:
            mixer = MixerKind.HOURGLASS if solver == "QKP_ZX" else MixerKind.COPULA_RING
            try:
                params, _ = optimize_params(inst, mixer, manifest.optimizer_config())
            except UnsupportedShapeError as e:
                warnings.append(f"{dist}#{index} {solver}: {e}")
                continue
            metrics = qkp_exact_metrics(inst, params, manifest.shots, optimum=optimum,
                                        lg_value=lg_value, vg_value=vg_value)
            reports.append(quantum_report(index, solver, dist, metrics, optimum))
    return [r.to_dict() for r in reports], problems, warnings


def sweep_instance(task: Tuple[CampaignManifest, str, int, KnapsackInstance]) -> List[Dict]:
    """
    单个实例上固定 (k, θ) 的最优期望近似比, 包括沙漏混合器 (theta 为空)
    """
    manifest, dist, index, inst = task
    cfg = manifest.optimizer_config()
    thetas: List[Optional[float]] = [None] + list(cfg.theta_range)
    rows = []
    if inst.is_trivial:
        for k in cfg.k_range:
            for theta in thetas:
                rows.append({'distribution': dist, 'instance_id': index, 'k': k, 'theta': theta, 'approx_ratio': 1.0})
        return rows

    optimum = brute_force_opt(inst)[1]
    for k in cfg.k_range:
        for theta in thetas:
            if theta is not None and inst.n % 2 != 0:
                continue
            beta, gamma, _ = optimize_angles(inst, k, theta, cfg)
            mixer = MixerKind.HOURGLASS if theta is None else MixerKind.COPULA_RING
            params = CircuitParams(beta=beta, gamma=gamma, k=k, theta=theta, mixer=mixer)
            metrics = qkp_exact_metrics(inst, params, manifest.shots, optimum=optimum)
            ratio = metrics.expected_bestofN_value / optimum if optimum > 0 else 1.0
            rows.append({'distribution': dist, 'instance_id': index, 'k': k, 'theta': theta, 'approx_ratio': ratio})
    return rows


def _map_tasks(func, tasks: List, num_workers: int, desc: str) -> List:
    """按任务顺序返回结果 (与进程数无关)"""
    if num_workers > 0 and len(tasks) > 1:
        with multiprocessing.Pool(processes=num_workers) as pool:
            return list(tqdm(pool.imap(func, tasks), total=len(tasks), desc=desc, dynamic_ncols=True))
    return [func(task) for task in tqdm(tasks, desc=desc, dynamic_ncols=True)]


class BenchmarkCampaign:
    """一次完整的基准测试"""

    def __init__(self, manifest: CampaignManifest, output_dir: str = "./bench_results",
                 num_workers: int = 0, use_wandb: bool = False):
        self.manifest = manifest
        self.output_path = Path(output_dir)
        self.num_workers = num_workers
        self.use_wandb = use_wandb

        self.calculator = MetricsCalculator()
        self.problems: List[str] = []
        self.warnings: List[str] = []
        self._corpora: Dict[str, KnapsackCorpus] = {}

    def corpus(self, dist: str) -> KnapsackCorpus:
        if dist not in self._corpora:
            self._corpora[dist] = self.manifest.corpus(dist)
        return self._corpora[dist]

    def _tasks(self) -> List:
        return [(self.manifest, dist, i, inst)
                for dist in self.manifest.distributions
                for i, inst in enumerate(self.corpus(dist))]

    def run_campaign(self) -> pd.DataFrame:
        """
        全部分布 × 全部求解器

        Returns:
            汇总表 (metric, solver, 每个分布一列)
        """
        results = _map_tasks(evaluate_instance, self._tasks(), self.num_workers, "bench")
        for reports, problems, warnings in results:
            self.calculator.extend(SolverReport(**r) for r in reports)
            self.problems.extend(problems)
            self.warnings.extend(warnings)

        tables = self.calculator.summary_tables(self.manifest.distributions)
        self.problems.extend(self.calculator.check_invariants())

        # Strong 分布上比率顺序与重量顺序一致, VG 不可能严格超过 LG
        strong = DistributionKind.STRONG.value
        if strong in self.manifest.distributions and "VG" in self.manifest.solvers:
            beat = tables[(tables['metric'] == 'p_beat_lg') & (tables['solver'] == 'VG')][strong]
            if len(beat) > 0 and float(beat.iloc[0]) != 0.0:
                self.problems.append(f"Strong 分布上 VG 超过 LG 的概率为 {float(beat.iloc[0]):.3f}, 应为0")
        return tables

    def sweep_k_theta(self) -> pd.DataFrame:
        """
        (分布, k, θ) → 平均期望近似比; theta 为空的行是沙漏混合器
        """
        rows = []
        for instance_rows in _map_tasks(sweep_instance, self._tasks(), self.num_workers, "sweep"):
            rows.extend(instance_rows)
        frame = pd.DataFrame(rows, columns=['distribution', 'instance_id', 'k', 'theta', 'approx_ratio'])
        frame['mixer'] = np.where(frame['theta'].isna(), MixerKind.HOURGLASS.value, MixerKind.COPULA_RING.value)
        sweep = (frame.groupby(['distribution', 'mixer', 'k', 'theta'], dropna=False, sort=False)['approx_ratio']
                 .mean().reset_index().rename(columns={'approx_ratio': 'mean_approx_ratio'}))
        self._check_sweep(sweep)
        return sweep

    def _check_sweep(self, sweep: pd.DataFrame):
        """θ=0 的环形 copula 与沙漏混合器在优化后必须给出相同结果 (差异不超过 sweep_tolerance)"""
        if sweep.empty:
            return
        if (sweep["mean_approx_ratio"] > 1 + 1e-9).any():
            self.problems.append("扫描结果出现大于1的近似比")
        zero = sweep[sweep['theta'] == 0.0].set_index(['distribution', 'k'])['mean_approx_ratio']
        hourglass = sweep[sweep['theta'].isna()].set_index(['distribution', 'k'])['mean_approx_ratio']
        common = zero.index.intersection(hourglass.index)
        if len(common) == 0:
            return
        gap = float((zero.loc[common] - hourglass.loc[common]).abs().max())
        if gap > self.manifest.sweep_tolerance:
            self.problems.append(f"θ=0 与沙漏混合器的扫描结果最大相差 {gap:.2e}")

    def save(self, tables: pd.DataFrame, sweep: Optional[pd.DataFrame] = None) -> Dict[str, Path]:
        self.output_path.mkdir(parents=True, exist_ok=True)
        paths = {
            'tables': self.output_path / "tables.csv",
            'reports': self.output_path / "reports.csv",
            'manifest': self.output_path / "manifest.json",
            'summary': self.output_path / "summary.json",
        }
        tables.to_csv(paths['tables'], index=False, float_format="%.6f")
        self.calculator.to_frame().to_csv(paths['reports'], index=False, float_format="%.6f")
        if sweep is not None:
            paths['sweep'] = self.output_path / "sweep.csv"
            sweep.to_csv(paths['sweep'], index=False, float_format="%.6f")
        self.manifest.save(paths['manifest'])
        with open(paths['summary'], 'w') as f:
            json.dump({'problems': self.problems, 'warnings': self.warnings, 'success': not self.problems},
                      f, indent=2, ensure_ascii=False)
        return paths

    def _log_wandb(self, tables: pd.DataFrame, sweep: Optional[pd.DataFrame]):
        try:
            import wandb
        except ImportError:
            print("⚠️  wandb 未安装, 跳过实验记录")
            return
        run = wandb.init(project="xqaoa-knapsack", config=self.manifest.to_dict(),
                         name=f"bench-{self.manifest.preset}-seed{self.manifest.seed}")
        run.log({'tables': wandb.Table(dataframe=tables)})
        if sweep is not None:
            run.log({'sweep': wandb.Table(dataframe=sweep)})
        run.finish()

    def run_full_pipeline(self) -> Dict:
        """运行完整流程并保存结果"""
        print("🚀 开始基准测试")
        print(f"  预设: {self.manifest.preset}, 种子: {self.manifest.seed}")
        print(f"  分布: {self.manifest.distributions}")
        print(f"  每个分布 {self.manifest.instances_per_distribution} 个实例, n={self.manifest.n_items}")
        print(f"  输出目录: {self.output_path}")
        print("=" * 60)

        tables = self.run_campaign()
        print_summary(tables)

        sweep = self.sweep_k_theta() if self.manifest.run_sweep else None
        paths = self.save(tables, sweep)
        if self.use_wandb:
            self._log_wandb(tables, sweep)

        for message in self.warnings:
            print(f"⚠️  {message}")
        for message in self.problems:
            print(f"❌ {message}")
        if not self.problems:
            print("✅ 所有一致性检查通过")
        for name, path in paths.items():
            print(f"💾 {name}: {path}")

        return {'tables': tables, 'sweep': sweep, 'problems': list(self.problems),
                'warnings': list(self.warnings), 'success': not self.problems}


def main():
    parser = argparse.ArgumentParser(
        description="xQAOA knapsack benchmark campaign",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter
    )

    parser.add_argument("--preset", type=str, default="ci", choices=PRESETS + tuple(PRESET_ALIASES), help="预设规模")
    parser.add_argument("--manifest", type=str, default=None, help="从 manifest.json 复现 (忽略预设)")
    parser.add_argument("--dist", type=str, default="all", help="分布列表 (逗号分隔) 或 all")
    parser.add_argument("--seed", type=int, default=None, help="随机种子")
    parser.add_argument("--instances", type=int, default=None, help="每个分布的实例数")
    parser.add_argument("--n", type=int, default=None, help="每个实例的物品数")
    parser.add_argument("--objective", type=str, default=None, choices=OBJECTIVE_MODES, help="优化目标")
    parser.add_argument("--no_sweep", action="store_true", help="跳过 (k, θ) 扫描")
    parser.add_argument("--output_dir", "--out", type=str, default="./bench_results", help="输出目录")
    parser.add_argument("--num_workers", type=int, default=0, help="并行进程数 (0 为串行)")
    parser.add_argument("--use_wandb", action="store_true", help="使用wandb记录")

    args = parser.parse_args()

    try:
        if args.manifest:
            manifest = CampaignManifest.from_json(args.manifest)
        else:
            distributions = None if args.dist == "all" else [d for d in args.dist.split(",") if d.strip()]
            manifest = CampaignManifest.from_preset(
                args.preset,
                seed=args.seed,
                distributions=distributions,
                instances_per_distribution=args.instances,
                n_items=args.n,
                objective=args.objective,
                run_sweep=False if args.no_sweep else None,
            )
    except ManifestError as e:
        print(f"❌ {e}")
        return 2

    campaign = BenchmarkCampaign(manifest, args.output_dir, args.num_workers, args.use_wandb)
    results = campaign.run_full_pipeline()
    return 0 if results['success'] else 1


if __name__ == "__main__":
    exit(main())
