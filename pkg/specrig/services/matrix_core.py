#!/usr/bin/env python
# -*- coding: utf-8 -*-
# @Time : 2025/10/8 10:03
# @Author : Ray
# @File : matrix_core.py
# @Software: PyCharm
"""
数值核心：复方阵的基本运算、LU行列式、循环Jacobi特征分解与谱投影。

所有矩阵都是 complex128 的 numpy 方阵，构造后不再修改，函数均为纯函数。
"""
import math
import warnings
from enum import Enum
from typing import NamedTuple

import numpy as np
import numpy.typing as npt
from scipy.linalg import LinAlgWarning, lu_factor

from specrig.errors.exceptions import (
    ConvergenceError,
    DimensionMismatchError,
    NonFiniteValueError,
    NotAnEigenvalueError,
    NotHermitianError,
    NotNormalError,
)
from specrig.services.config_loader import load_numeric_config, resolve_tol
from specrig.utils.logger import logger

ComplexMatrix = npt.NDArray[np.complex128]

_EPS = np.finfo(np.float64).eps
# 把正规矩阵化为Hermite问题时 Im 部分的权重，取无理数避免偶然的特征值重合
_IMAG_WEIGHT = (math.sqrt(5.0) - 1.0) / 2.0


class MatOp(str, Enum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    COMMUTATOR = "commutator"


class EigenDecomposition(NamedTuple):
    """Hermite矩阵的特征分解，values 升序，vectors 的列为单位特征向量"""
    values: npt.NDArray[np.float64]
    vectors: ComplexMatrix


class NormalDecomposition(NamedTuple):
    values: npt.NDArray[np.complex128]
    vectors: ComplexMatrix


class MatrixClass(NamedTuple):
    normal: bool
    hermitian: bool
    unitary: bool
    diagonal: bool
    simple_spectrum: bool


def as_scalar(value) -> complex:
    """转换为有限的复数标量"""
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NonFiniteValueError(f"标量 {value!r} 不是有限值。")
    return z


def as_matrix(a) -> ComplexMatrix:
    """
    转换并校验为 n×n (n≥1) 的有限复矩阵。
    """
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionMismatchError(f"需要 n×n 方阵 (n≥1)，实际形状为 {m.shape}。")
    if not np.all(np.isfinite(m)):
        raise NonFiniteValueError("矩阵中包含NaN或Inf。")
    return m


def hs_norm(a: ComplexMatrix) -> float:
    """Hilbert–Schmidt (Frobenius) 范数"""
    return float(np.linalg.norm(a))


def scale_of(a: ComplexMatrix) -> float:
    """零判定的尺度 max(1, ‖A‖_HS)"""
    return max(1.0, hs_norm(a))


def mat_op(a: ComplexMatrix, b: ComplexMatrix, kind: MatOp | str) -> ComplexMatrix:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"矩阵维数不匹配: {a.shape[0]} 与 {b.shape[0]}。")
    kind = MatOp(kind)
    if kind is MatOp.ADD:
        return a + b
    if kind is MatOp.SUB:
        return a - b
    if kind is MatOp.MUL:
        return a @ b
    return a @ b - b @ a


def adjoint(a: ComplexMatrix) -> ComplexMatrix:
    """共轭转置"""
    return as_matrix(a).conj().T


def commutator(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    return mat_op(a, b, MatOp.COMMUTATOR)


def determinant(a: ComplexMatrix) -> complex:
    """
    部分选主元LU分解求行列式，奇异矩阵返回0。
    """
    a = as_matrix(a)
    with warnings.catch_warnings():
        # 精确奇异时 lu_factor 只给出警告，U 的对角线上会出现0
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(a, check_finite=False)
    swaps = np.count_nonzero(piv != np.arange(a.shape[0]))
    sign = -1.0 if swaps % 2 else 1.0
    return complex(sign * np.prod(np.diag(lu)))


def batched_determinant(stack: npt.NDArray[np.complex128]) -> npt.NDArray[np.complex128]:
    """对形如 (m, n, n) 的矩阵批量求行列式（LAPACK getrf）"""
    return np.linalg.det(stack)


def _rotate(a: ComplexMatrix, v: ComplexMatrix, p: int, q: int) -> None:
    """
    消去 a[p, q] 的复Jacobi旋转：先用对角相位把 (p,q) 元变成实数，再做实旋转。
    """
    apq = a[p, q]
    mag = abs(apq)
    phase = apq / mag
    theta = 0.5 * math.atan2(2.0 * mag, a[q, q].real - a[p, p].real)
    c, s = math.cos(theta), math.sin(theta)
    g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]], dtype=np.complex128)

    idx = [p, q]
    a[:, idx] = a[:, idx] @ g
    a[idx, :] = g.conj().T @ a[idx, :]
    a[p, q] = a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    v[:, idx] = v[:, idx] @ g


def _jacobi_hermitian(a: ComplexMatrix, max_sweeps: int) -> tuple[np.ndarray, ComplexMatrix, int]:
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n, dtype=np.complex128)
    scale = hs_norm(a)
    if n == 1 or scale == 0.0:
        return np.real(np.diag(a)).copy(), v, 0

    skip_below = _EPS * scale / n
    for sweep in range(1, max_sweeps + 1):
        rotations = 0
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > skip_below:
                    _rotate(a, v, p, q)
                    rotations += 1
        off = hs_norm(a - np.diag(np.diag(a)))
        logger.debug(f"Jacobi 第 {sweep} 轮: 旋转 {rotations} 次, 非对角范数 {off:.3e}")
        if rotations == 0 or off <= n * _EPS * scale:
            return np.real(np.diag(a)).copy(), v, sweep
    raise ConvergenceError(f"循环Jacobi在 {max_sweeps} 轮内未收敛 (n={n})。")


def hermitian_eig(a: ComplexMatrix, tol: float | None = None) -> EigenDecomposition:
    """
    循环Jacobi对角化Hermite矩阵，特征值升序。
    """
    a = as_matrix(a)
    tol = resolve_tol(tol)
    asym = hs_norm(a - a.conj().T)
    if asym > tol * hs_norm(a):
        raise NotHermitianError(f"‖A−A*‖ = {asym:.3e} 超过容差。")
    herm = 0.5 * (a + a.conj().T)
    values, vectors, sweeps = _jacobi_hermitian(herm, int(load_numeric_config()["jacobi_max_sweeps"]))
    order = np.argsort(values, kind="stable")
    logger.debug(f"Hermite特征分解完成: n={a.shape[0]}, 轮数={sweeps}")
    return EigenDecomposition(values[order], vectors[:, order])


def is_normal(a: ComplexMatrix, tol: float | None = None) -> bool:
    a = as_matrix(a)
    tol = resolve_tol(tol)
    ah = a.conj().T
    return hs_norm(a @ ah - ah @ a) <= tol * scale_of(a) ** 2


def normal_eig(a: ComplexMatrix, tol: float | None = None) -> NormalDecomposition:
    """
    正规矩阵的特征分解，化为 Re(A) + κ·Im(A) 的Hermite问题。
    """
    a = as_matrix(a)
    tol = resolve_tol(tol)
    if not is_normal(a, tol):
        raise NotNormalError()
    ah = a.conj().T
    re_part = 0.5 * (a + ah)
    im_part = -0.5j * (a - ah)
    vectors = hermitian_eig(re_part + _IMAG_WEIGHT * im_part, tol).vectors
    values = np.einsum("ij,ik,kj->j", vectors.conj(), a, vectors)
    order = np.lexsort((values.imag, values.real))
    return NormalDecomposition(values[order], vectors[:, order])


def cluster_values(values, tol: float, scale: float) -> list[list[int]]:
    """
    把彼此相距不超过 tol·max(1, scale) 的特征值归为同一个谱点。
    """
    threshold = tol * max(1.0, scale)
    groups: list[list[int]] = []
    for k, value in enumerate(values):
        for group in groups:
            if abs(values[group[0]] - value) <= threshold:
                group.append(k)
                break
        else:
            groups.append([k])
    return groups


def spectral_projection(a: ComplexMatrix, lam, tol: float | None = None) -> ComplexMatrix:
    """
    正规矩阵对应特征值 lam 的正交谱投影（由特征向量外积构造）。
    """
    a = as_matrix(a)
    tol = resolve_tol(tol)
    lam = as_scalar(lam)
    decomposition = normal_eig(a, tol)
    threshold = tol * scale_of(a)
    distances = np.abs(decomposition.values - lam)
    nearest = int(np.argmin(distances))
    if distances[nearest] > threshold:
        raise NotAnEigenvalueError(f"{lam} 不是特征值 (最近距离 {distances[nearest]:.3e})。")

    group = next(g for g in cluster_values(decomposition.values, tol, hs_norm(a)) if nearest in g)
    basis = decomposition.vectors[:, group]
    return basis @ basis.conj().T


def classify(a: ComplexMatrix, tol: float | None = None) -> MatrixClass:
    """
    按容差判定矩阵的正规、Hermite、酉、对角与单谱性质。
    非正规矩阵不做特征分解，simple_spectrum 记为 False。
    """
    a = as_matrix(a)
    tol = resolve_tol(tol)
    n = a.shape[0]
    scale = scale_of(a)
    ah = a.conj().T

    normal = hs_norm(a @ ah - ah @ a) <= tol * scale ** 2
    hermitian = hs_norm(a - ah) <= tol * scale
    unitary = hs_norm(a @ ah - np.eye(n)) <= tol * scale ** 2
    diagonal = hs_norm(a - np.diag(np.diag(a))) <= tol * scale
    simple = False
    if normal:
        values = normal_eig(a, tol).values
        simple = len(cluster_values(values, tol, hs_norm(a))) == n
    return MatrixClass(normal, hermitian, unitary, diagonal, simple)
