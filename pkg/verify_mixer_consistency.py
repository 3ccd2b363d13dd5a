#!/usr/bin/env python3
"""
验证混合器一致性
沙漏本征关系 → copula θ=0 退化 → 环形 θ=0 退化 → p=½ 回到标准 QAOA
"""

import argparse
from functools import reduce
from typing import Tuple

import numpy as np
from scipy.linalg import expm

from quantum.mixers import (
    apply_hourglass_mixer,
    apply_ring_copula,
    copula_unitary,
    hourglass_matrix,
    hourglass_unitary,
)
from quantum.statevector import StateVector, X, cost_phases, product_amplitudes, ry_matrix, bias_angle

TOLERANCE = 1e-10


def check_hourglass_eigenstates(rng: np.random.Generator, trials: int = 1000) -> Tuple[bool, float]:
    """ZX_p|p⟩ = −|p⟩, ZX_p|p^⊥⟩ = +|p^⊥⟩"""
    worst = 0.0
    for p in rng.random(trials):
        zx = hourglass_matrix(p).matrix
        state = np.array([np.sqrt(1 - p), np.sqrt(p)])
        perp = np.array([-np.sqrt(p), np.sqrt(1 - p)])
        worst = max(worst, np.linalg.norm(zx @ state + state), np.linalg.norm(zx @ perp - perp))
    endpoints = (np.allclose(hourglass_matrix(0.0).matrix, -np.diag([1, -1]), atol=0)
                 and np.allclose(hourglass_matrix(0.5).matrix, -X, atol=1e-15))
    return endpoints and worst < 1e-12, worst


def check_pair_reduction(rng: np.random.Generator, trials: int = 200) -> Tuple[bool, float]:
    """θ=0 时双比特 copula 混合器 = 沙漏 ⊗ 沙漏"""
    worst = 0.0
    for _ in range(trials):
        p1, p2 = rng.random(2)
        beta = rng.uniform(0, np.pi)
        pair = copula_unitary(p1, p2, 0.0, beta)
        # 门矩阵下标 2·x_1 + x_2, 第一个比特在 kron 的左侧
        product = np.kron(hourglass_unitary(p1, beta), hourglass_unitary(p2, beta))
        worst = max(worst, np.abs(pair - product).max())
    return worst < TOLERANCE, worst


def check_ring_reduction(rng: np.random.Generator, sizes=(4, 6, 10)) -> Tuple[bool, float]:
    """θ=0 时环形 copula 混合器 = 角度为 2β 的沙漏混合器"""
    worst = 0.0
    for n in sizes:
        p = rng.uniform(0.05, 0.95, size=n)
        beta = rng.uniform(0, np.pi)
        amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        state = StateVector(amps / np.linalg.norm(amps))
        ring = apply_ring_copula(state, p, 0.0, beta)
        hourglass = apply_hourglass_mixer(state, p, 2 * beta)
        worst = max(worst, np.linalg.norm(ring.amplitudes - hourglass.amplitudes))
    return worst < TOLERANCE, worst


def standard_qaoa_distribution(values, beta: float, gamma: float) -> np.ndarray:
    """独立实现的标准 QAOA: |+⟩^n → e^{−iγC} → e^{−iβΣX}"""
    n = len(values)
    dim = 1 << n
    energies = np.array([sum(values[i] for i in range(n) if (b >> i) & 1) for b in range(dim)], dtype=float)
    psi = np.full(dim, 1 / np.sqrt(dim), dtype=complex) * np.exp(-1j * gamma * energies)
    eye = np.eye(2)
    mixer = sum(reduce(np.kron, [X if q == i else eye for q in range(n)]) for i in range(n))
    psi = expm(-1j * beta * mixer) @ psi
    return np.abs(psi) ** 2


def check_standard_qaoa(rng: np.random.Generator, sizes=(2, 4, 6)) -> Tuple[bool, float]:
    """所有 p_i = ½ 时 ZX_p = −X, 对应标准 QAOA 中的 β → −β"""
    worst = 0.0
    for n in sizes:
        values = rng.integers(1, 20, size=n)
        beta, gamma = rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)
        p = np.full(n, 0.5)
        state = StateVector(product_amplitudes(p) * cost_phases(values, gamma))
        ours = np.abs(apply_hourglass_mixer(state, p, beta).amplitudes) ** 2
        reference = standard_qaoa_distribution(values, -beta, gamma)
        worst = max(worst, np.abs(ours - reference).max())
    return worst < TOLERANCE, worst


def check_periodicity(rng: np.random.Generator, n: int = 6) -> Tuple[bool, float]:
    """混合器在 β 与 β+π 下的测量分布相同"""
    p = rng.uniform(0.05, 0.95, size=n)
    beta = rng.uniform(0, np.pi)
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    state = StateVector(amps / np.linalg.norm(amps))
    worst = 0.0
    for mixer in (lambda b: apply_hourglass_mixer(state, p, b), lambda b: apply_ring_copula(state, p, -1.0, b)):
        a = np.abs(mixer(beta).amplitudes) ** 2
        b = np.abs(mixer(beta + np.pi).amplitudes) ** 2
        worst = max(worst, np.abs(a - b).max())
    return worst < TOLERANCE, worst


def check_rotation_preparation(rng: np.random.Generator, trials: int = 100) -> Tuple[bool, float]:
    """R_Y(φ_p)|0⟩ = |p⟩"""
    worst = 0.0
    for p in rng.random(trials):
        prepared = ry_matrix(bias_angle(p)) @ np.array([1.0, 0.0])
        worst = max(worst, np.abs(prepared - np.array([np.sqrt(1 - p), np.sqrt(p)])).max())
    return worst < 1e-12, worst


def main():
    parser = argparse.ArgumentParser(description="Verify xQAOA mixer reduction chain")
    parser.add_argument("--seed", type=int, default=0, help="随机种子")
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    print("🔍 混合器一致性验证工具")
    print("=" * 50)

    checks = [
        ("1️⃣ R_Y 制备偏置态", check_rotation_preparation),
        ("2️⃣ 沙漏本征关系", check_hourglass_eigenstates),
        ("3️⃣ copula θ=0 ≡ 沙漏⊗沙漏", check_pair_reduction),
        ("4️⃣ 环形 θ=0 ≡ 沙漏(2β)", check_ring_reduction),
        ("5️⃣ p=½ ≡ 标准 QAOA", check_standard_qaoa),
        ("6️⃣ β 的 π 周期性", check_periodicity),
    ]

    all_ok = True
    for title, check in checks:
        ok, err = check(rng)
        all_ok &= ok
        print(f"\n{title}:")
        print(f"   {'✅' if ok else '❌'} 最大误差 {err:.2e}")

    print("\n" + "=" * 50)
    print("📊 总结:")
    if all_ok:
        print("✅ 所有退化关系成立")
        return 0
    print("❌ 存在不一致的混合器实现")
    return 1


if __name__ == "__main__":
    exit(main())
