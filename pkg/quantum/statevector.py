#!/usr/bin/env python3
"""
精确态矢量模拟器

比特约定 (全项目唯一出处): 小端序, 基态下标 b 的第 i 位 = 第 i 个量子比特 x_i。
多比特门的矩阵下标按门作用的量子比特顺序排列, 第一个量子比特为最高位,
即 Gate2Q 作用于 (i, j) 时矩阵下标为 2·x_i + x_j。
"""

from functools import reduce
from typing import Dict, Sequence, Tuple

import numpy as np

from utils.knapsack import KnapsackInstance, basis_bits, basis_objective_values

UNITARY_TOL = 1e-10
NORM_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def ry_matrix(phi: float) -> np.ndarray:
    """R_Y(φ) = exp(−iφY/2)"""
    c, s = np.cos(phi / 2), np.sin(phi / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_matrix(phi: float) -> np.ndarray:
    """R_Z(φ) = exp(−iφZ/2)"""
    return np.diag([np.exp(-0.5j * phi), np.exp(0.5j * phi)])


def bias_angle(p: float) -> float:
    """φ_p = 2·arcsin(√p), 使 R_Y(φ_p)|0⟩ = |p⟩"""
    return 2.0 * np.arcsin(np.sqrt(np.clip(p, 0.0, 1.0)))


class Gate:
    """酉门 (构造时检查酉性)"""
    n_qubits: int = 0

    def __init__(self, matrix):
        matrix = np.asarray(matrix, dtype=complex)
        dim = 1 << self.n_qubits
        if matrix.shape != (dim, dim):
            raise ValueError(f"{type(self).__name__} 需要 {dim}×{dim} 矩阵, 得到 {matrix.shape}")
        if not np.allclose(matrix @ matrix.conj().T, np.eye(dim), atol=UNITARY_TOL, rtol=0):
            raise ValueError(f"{type(self).__name__} 不是酉矩阵")
        self.matrix = matrix

    def dagger(self) -> "Gate":
        return type(self)(self.matrix.conj().T)


class Gate1Q(Gate):
    n_qubits = 1


class Gate2Q(Gate):
    n_qubits = 2


class StateVector:
    """n 个量子比特的纯态 (2^n 个复振幅)"""

    def __init__(self, amplitudes, check_norm: bool = True):
        amplitudes = np.array(amplitudes, dtype=complex).ravel()
        n_qubits = int(round(np.log2(amplitudes.shape[0]))) if amplitudes.shape[0] > 0 else 0
        if n_qubits < 1 or (1 << n_qubits) != amplitudes.shape[0]:
            raise ValueError(f"振幅数量必须是 2^n (n ≥ 1), 得到 {amplitudes.shape[0]}")
        self.n_qubits = n_qubits
        self.amplitudes = amplitudes

        if check_norm and abs(self.norm() - 1.0) > NORM_TOL:
            raise ValueError(f"态矢量未归一化: ‖ψ‖² = {self.norm():.12f}")

    def norm(self) -> float:
        """Σ|a|²"""
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def copy(self) -> "StateVector":
        return StateVector(self.amplitudes.copy(), check_norm=False)

    def __len__(self) -> int:
        return self.amplitudes.shape[0]


def apply_matrix(amplitudes: np.ndarray, n_qubits: int, qubits: Sequence[int], matrix: np.ndarray) -> np.ndarray:
    """
    把 k 比特矩阵作用到振幅数组上 (支持前置批维度)

    Args:
        amplitudes: [..., 2^n] 振幅
        n_qubits: 量子比特数
        qubits: 作用的量子比特, 第一个对应矩阵下标最高位
        matrix: [2^k, 2^k] 矩阵

    Returns:
        新的振幅数组, 形状不变
    """
    qubits = [int(q) for q in qubits]
    k = len(qubits)
    if len(set(qubits)) != k:
        raise ValueError(f"量子比特下标重复: {qubits}")
    for q in qubits:
        if not 0 <= q < n_qubits:
            raise IndexError(f"量子比特下标 {q} 超出范围 [0, {n_qubits})")

    amplitudes = np.asarray(amplitudes)
    batch_shape = amplitudes.shape[:-1]
    if amplitudes.shape[-1] != 1 << n_qubits:
        raise ValueError(f"振幅长度 {amplitudes.shape[-1]} 与 2^{n_qubits} 不一致")

    nb = len(batch_shape)
    psi = amplitudes.reshape(batch_shape + (2,) * n_qubits)
    # 最低位在最后一个轴
    axes = [nb + n_qubits - 1 - q for q in qubits]
    tensor = np.asarray(matrix).reshape((2,) * (2 * k))
    out = np.tensordot(tensor, psi, axes=(list(range(k, 2 * k)), axes))
    out = np.moveaxis(out, list(range(k)), axes)
    return out.reshape(amplitudes.shape)


def apply_1q(state: StateVector, qubit_index: int, g: Gate1Q) -> StateVector:
    """单比特门"""
    amps = apply_matrix(state.amplitudes, state.n_qubits, [qubit_index], g.matrix)
    return StateVector(amps)


def apply_2q(state: StateVector, i: int, j: int, g: Gate2Q) -> StateVector:
    """双比特门, 矩阵下标为 2·x_i + x_j"""
    if i == j:
        raise ValueError("双比特门的两个量子比特必须不同")
    amps = apply_matrix(state.amplitudes, state.n_qubits, [i, j], g.matrix)
    return StateVector(amps)


def product_amplitudes(p) -> np.ndarray:
    """⊗_i (√(1−p_i)|0⟩ + √p_i|1⟩) 的振幅"""
    p = np.clip(np.asarray(getattr(p, 'p', p), dtype=float), 0.0, 1.0)
    factors = [np.array([np.sqrt(1.0 - pi), np.sqrt(pi)]) for pi in p]
    # kron 的最后一个因子是最低位, 因此倒序
    return reduce(np.kron, factors[::-1]).astype(complex)


def prepare_biased_state(p) -> StateVector:
    """
    制备偏置乘积态 |p⟩ = |p_1⟩⊗⋯⊗|p_n⟩

    Args:
        p: BiasVector 或概率向量
    """
    return StateVector(product_amplitudes(p))


def cost_phases(values: Sequence[int], gammas) -> np.ndarray:
    """
    U^C(γ) 的对角元 e^{−iγ(v·x)}

    gammas 为标量时返回 [2^n], 为数组时返回 [len(gammas), 2^n]
    """
    values = np.asarray(values, dtype=float)
    energies = basis_bits(values.shape[0]) @ values
    gammas = np.asarray(gammas, dtype=float)
    return np.exp(-1j * np.multiply.outer(gammas, energies))


def apply_cost_phase(state: StateVector, gamma: float, v: Sequence[int]) -> StateVector:
    """振幅逐项乘以 e^{−iγ(v·x)}"""
    if len(v) != state.n_qubits:
        raise ValueError(f"价值向量长度 {len(v)} 与量子比特数 {state.n_qubits} 不一致")
    return StateVector(state.amplitudes * cost_phases(v, gamma))


def probabilities(state: StateVector) -> np.ndarray:
    """计算基测量分布 |a_x|²"""
    return np.abs(state.amplitudes) ** 2


def sample(state: StateVector, shots: int, stream: np.random.Generator) -> np.ndarray:
    """
    独立采样 shots 次计算基测量结果

    Returns:
        [shots, n] 的0/1数组, 每行一个比特串
    """
    if shots < 0:
        raise ValueError(f"shots不能为负, 得到 {shots}")
    probs = probabilities(state)
    idx = stream.choice(probs.shape[0], size=shots, p=probs / probs.sum())
    return basis_bits(state.n_qubits)[idx]


def exact_objective_stats(state: StateVector, inst: KnapsackInstance) -> Tuple[float, Dict[int, float]]:
    """
    测量分布下 f_obj 的精确期望与取值分布 (不可行解计入值0)
    """
    if inst.n != state.n_qubits:
        raise ValueError(f"实例物品数 {inst.n} 与量子比特数 {state.n_qubits} 不一致")
    probs = probabilities(state)
    table = basis_objective_values(inst)
    expected = float(probs @ table)
    levels, inverse = np.unique(table, return_inverse=True)
    mass = np.bincount(inverse, weights=probs, minlength=levels.shape[0])
    return expected, {int(value): float(m) for value, m in zip(levels, mass)}
