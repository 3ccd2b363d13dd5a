#!/usr/bin/env python3
"""
xQAOA 混合器
沙漏混合器 ZX_p、FGM copula 双比特混合器、分区环形 copula 混合器

符号约定: ZX_p = −(1−2p)Z − 2√(p(1−p))X 的显式矩阵为准, 因此
    e^{−iβ·ZX_p} = R_Y(φ_p) · e^{+iβZ} · R_Y(φ_p)†
同理 Cop(p1, p2, θ) = −R (Z⊗I + I⊗Z) R†, e^{−iβ·Cop} = R · e^{+iβ(Z₁+Z₂)} · R†
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from quantum.statevector import (
    X,
    Z,
    Gate1Q,
    Gate2Q,
    StateVector,
    apply_matrix,
    bias_angle,
    ry_matrix,
)
from utils.knapsack import UnsupportedShapeError

# (作用的量子比特, 矩阵) 列表, 按顺序作用
GateLayer = List[Tuple[Tuple[int, ...], np.ndarray]]


def hourglass_matrix(p_i: float) -> Gate1Q:
    """
    沙漏哈密顿量 ZX_p = −(1−2p)Z − 2√(p(1−p))X

    |p⟩ 为 −1 本征态, |p^⊥⟩ 为 +1 本征态; ZX_0 = −Z, ZX_{1/2} = −X
    """
    if not 0.0 <= p_i <= 1.0:
        raise ValueError(f"p必须在 [0, 1] 内, 得到 {p_i}")
    return Gate1Q(-(1.0 - 2.0 * p_i) * Z - 2.0 * np.sqrt(p_i * (1.0 - p_i)) * X)


def hourglass_unitary(p_i: float, beta: float) -> np.ndarray:
    """e^{−iβ·ZX_p}"""
    ry = ry_matrix(bias_angle(p_i))
    phase = np.diag([np.exp(1j * beta), np.exp(-1j * beta)])
    return ry @ phase @ ry.conj().T


def hourglass_layer(p, beta: float) -> GateLayer:
    p = np.asarray(getattr(p, 'p', p), dtype=float)
    return [((i,), hourglass_unitary(pi, beta)) for i, pi in enumerate(p)]


def apply_layers(amplitudes: np.ndarray, n_qubits: int, layers: GateLayer) -> np.ndarray:
    """按顺序作用一组门 (振幅可带批维度)"""
    for qubits, matrix in layers:
        amplitudes = apply_matrix(amplitudes, n_qubits, qubits, matrix)
    return amplitudes


def apply_hourglass_mixer(state: StateVector, p, beta: float) -> StateVector:
    """对每个比特 i 作用 e^{−iβ·ZX_{p_i}}"""
    layers = hourglass_layer(p, beta)
    if len(layers) != state.n_qubits:
        raise ValueError(f"偏置长度 {len(layers)} 与量子比特数 {state.n_qubits} 不一致")
    return StateVector(apply_layers(state.amplitudes, state.n_qubits, layers))


@dataclass(eq=False)
class CopulaJoint:
    """两个比特的 FGM copula 联合分布, probs[x1, x2] = c(x1, x2)"""
    p1: float
    p2: float
    theta: float
    delta: float
    probs: np.ndarray

    def conditionals(self) -> Tuple[float, float]:
        """(p_{2|1}, p_{2|¬1}); 不可达分支定义为0"""
        p_2_given_1 = self.probs[1, 1] / self.p1 if self.p1 > 0 else 0.0
        p_2_given_not_1 = self.probs[0, 1] / (1.0 - self.p1) if self.p1 < 1 else 0.0
        return float(np.clip(p_2_given_1, 0.0, 1.0)), float(np.clip(p_2_given_not_1, 0.0, 1.0))


def copula_joint(p1: float, p2: float, theta: float) -> CopulaJoint:
    """
    FGM 协方差 Δ = θ·p1·p2·(1−p1)·(1−p2) 下的联合分布

    各项写成因式形式, 对 θ ∈ [−1, 1] 逐项非负
    """
    if not (0.0 <= p1 <= 1.0 and 0.0 <= p2 <= 1.0):
        raise ValueError(f"边缘概率必须在 [0, 1] 内, 得到 ({p1}, {p2})")
    if not -1.0 <= theta <= 1.0:
        raise ValueError(f"θ必须在 [−1, 1] 内, 得到 {theta}")

    q1, q2 = 1.0 - p1, 1.0 - p2
    delta = theta * p1 * p2 * q1 * q2
    probs = np.array([
        [q1 * q2 * (1.0 + theta * p1 * p2), q1 * p2 * (1.0 - theta * p1 * q2)],
        [p1 * q2 * (1.0 - theta * q1 * p2), p1 * p2 * (1.0 + theta * q1 * q2)],
    ])
    return CopulaJoint(p1=float(p1), p2=float(p2), theta=float(theta), delta=float(delta), probs=probs)


def r_p12_gate(joint: CopulaJoint) -> Gate2Q:
    """
    R_{p12}: |00⟩ ↦ Σ √c(x1,x2) |x1 x2⟩

    第一个比特先做 R_Y(φ_{p1}), 再以它为控制对第二个比特做
    R_Y(φ_{p_{2|1}}) (控制为1) 与 R_Y(φ_{p_{2|¬1}}) (控制为0)
    """
    p_2_given_1, p_2_given_not_1 = joint.conditionals()
    first = np.kron(ry_matrix(bias_angle(joint.p1)), np.eye(2))
    controlled = np.zeros((4, 4), dtype=complex)
    controlled[:2, :2] = ry_matrix(bias_angle(p_2_given_not_1))
    controlled[2:, 2:] = ry_matrix(bias_angle(p_2_given_1))
    return Gate2Q(controlled @ first)


def copula_unitary(p1: float, p2: float, theta: float, beta: float) -> np.ndarray:
    """e^{−iβ·Cop(p1, p2, θ)} = R · e^{iβ(Z₁+Z₂)} · R†"""
    rotation = r_p12_gate(copula_joint(p1, p2, theta)).matrix
    # Z₁+Z₂ 的对角元 (2, 0, 0, −2)
    phase = np.diag(np.exp(1j * beta * np.array([2.0, 0.0, 0.0, -2.0])))
    return rotation @ phase @ rotation.conj().T


def apply_copula_pair(state: StateVector, i: int, j: int, p_i: float, p_j: float,
                      theta: float, beta: float) -> StateVector:
    """在量子比特 (i, j) 上作用双比特 copula 混合器"""
    if i == j:
        raise ValueError("copula 混合器的两个量子比特必须不同")
    amps = apply_matrix(state.amplitudes, state.n_qubits, [i, j], copula_unitary(p_i, p_j, theta, beta))
    return StateVector(amps)


def ring_pairs(n: int) -> Tuple[List[Tuple[int, int]], List[Tuple[int, int]]]:
    """
    环上位置的奇/偶分区 (0起始)

    奇层: (0,1), (2,3), ..., (n−2, n−1)
    偶层: (1,2), (3,4), ..., (n−1, 0)
    """
    if n < 2 or n % 2 != 0:
        raise UnsupportedShapeError(f"环形 copula 混合器需要偶数个量子比特, 得到 {n}")
    odd = [(m, m + 1) for m in range(0, n, 2)]
    even = [(m, (m + 1) % n) for m in range(1, n, 2)]
    return odd, even


def ring_copula_layers(p, theta: Union[float, Sequence[float]], beta: float,
                       order: Optional[Sequence[int]] = None) -> GateLayer:
    """
    分区环形 copula 混合器的门序列 (先奇层后偶层)

    Args:
        p: 偏置 (按量子比特下标)
        theta: 统一的 θ, 或长度为 n 的逐对 θ (θ_m 对应环上位置 m 与 m+1)
        beta: 混合角
        order: 环上位置到量子比特的映射, 默认恒等
    """
    p = np.asarray(getattr(p, 'p', p), dtype=float)
    n = p.shape[0]
    odd, even = ring_pairs(n)
    order = list(range(n)) if order is None else [int(q) for q in order]
    if sorted(order) != list(range(n)):
        raise ValueError(f"order必须是 0..{n - 1} 的排列")
    thetas = np.broadcast_to(np.asarray(theta, dtype=float), (n,))

    layers: GateLayer = []
    for a, b in odd + even:
        qa, qb = order[a], order[b]
        layers.append(((qa, qb), copula_unitary(p[qa], p[qb], thetas[a], beta)))
    return layers


def apply_ring_copula(state: StateVector, p, theta, beta: float,
                      order: Optional[Sequence[int]] = None) -> StateVector:
    """分区环形 copula 混合器 e^{−iβCop^e} e^{−iβCop^o}"""
    layers = ring_copula_layers(p, theta, beta, order)
    if state.n_qubits != len(np.asarray(getattr(p, 'p', p))):
        raise ValueError("偏置长度与量子比特数不一致")
    return StateVector(apply_layers(state.amplitudes, state.n_qubits, layers))
