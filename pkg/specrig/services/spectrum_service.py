#!/usr/bin/env python
# -*- coding: utf-8 -*-
# @Time : 2025/10/10 10:05
# @Author : Ray
# @File : spectrum_service.py
# @Software: PyCharm
"""
矩阵束的行列式多项式与联合谱。

det_pencil 计算 p(x) = det(x_1 M_1 + … + x_k M_k − I)：在 (n+1)^k 张量网格上逐点求行列式，
再沿每个变量方向解插值。所有谱都在仿射坐标卡里计算（真联合谱），
齐次形式由 homogenize 得到。
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import NamedTuple, Sequence

import numpy as np
from joblib import Parallel, delayed
from numpy.polynomial import polynomial as npoly

from specrig.errors.exceptions import DimensionMismatchError, NotNormalError, UnsupportedPencilError
from specrig.services.config_loader import load_numeric_config, resolve_tol
from specrig.services.matrix_core import (
    ComplexMatrix,
    as_matrix,
    batched_determinant,
    cluster_values,
    hs_norm,
    is_normal,
    normal_eig,
    scale_of,
)
from specrig.services.pencil_parser import PencilExpr, evaluate_pencil, parse_pencil
from specrig.services.polynomial import LinearForm, MultiPoly, from_linear_forms, homogenize, poly_equal, var_degree
from specrig.utils.logger import logger

# 每批送进 LAPACK 的矩阵个数
_CHUNK = 2048
# 同时对角化交换矩阵组时的组合权重
_COMBINATION_WEIGHTS = (1.0, (math.sqrt(5.0) - 1.0) / 2.0, math.sqrt(2.0) - 1.0, (math.sqrt(3.0) - 1.0) / 2.0)


class GridNodes(str, Enum):
    FOURIER = "fourier"
    CHEBYSHEV = "chebyshev"


@dataclass(frozen=True)
class Line:
    """超平面 λ·x = 1 及其重数"""
    coeffs: tuple[complex, ...]
    mult: int = 1

    def form(self) -> LinearForm:
        return LinearForm.line(self.coeffs)


@dataclass
class LineArrangement:
    lines: list[Line] = field(default_factory=list)

    def total_multiplicity(self) -> int:
        return sum(line.mult for line in self.lines)

    def to_poly(self, variables: Sequence[str]) -> MultiPoly:
        return from_linear_forms([line.form() for line in self.lines],
                                 [line.mult for line in self.lines], variables)


class PencilComparison(NamedTuple):
    label: str
    equal: bool
    max_diff: float


class Reducibility(NamedTuple):
    pairwise_commute: bool
    certified: bool


def default_var_names(k: int) -> list[str]:
    return [f"x{i + 1}" for i in range(k)]


def _check_pencil(mats: Sequence, var_names: Sequence[str] | None) -> tuple[list[ComplexMatrix], list[str]]:
    mats = [as_matrix(m) for m in mats]
    if not mats:
        raise UnsupportedPencilError("矩阵束至少需要一个矩阵。")
    limit = int(load_numeric_config()["max_pencil_variables"])
    if len(mats) > limit:
        raise UnsupportedPencilError(f"矩阵束有 {len(mats)} 个变量，最多支持 {limit} 个。")
    n = mats[0].shape[0]
    if any(m.shape[0] != n for m in mats):
        raise DimensionMismatchError(f"矩阵束中的矩阵维数不一致: {[m.shape[0] for m in mats]}")
    var_names = list(var_names) if var_names else default_var_names(len(mats))
    if len(var_names) != len(mats):
        raise DimensionMismatchError(f"变量个数 {len(var_names)} 与矩阵个数 {len(mats)} 不符。")
    return mats, var_names


def _node_set(kind: GridNodes, size: int) -> np.ndarray:
    if kind is GridNodes.FOURIER:
        return np.exp(2j * np.pi * np.arange(size) / size)
    return np.cos((2 * np.arange(size) + 1) * np.pi / (2 * size)).astype(np.complex128)


def _evaluate_chunk(points: np.ndarray, scaled: np.ndarray, identity: np.ndarray) -> np.ndarray:
    stack = np.tensordot(points, scaled, axes=(1, 0)) - identity
    return batched_determinant(stack)


def _grid_values(scaled: np.ndarray, nodes: np.ndarray, threads: int) -> np.ndarray:
    k, n = scaled.shape[0], scaled.shape[1]
    size = nodes.size
    mesh = np.meshgrid(*([nodes] * k), indexing="ij")
    points = np.stack([axis.ravel() for axis in mesh], axis=1)
    identity = np.eye(n, dtype=np.complex128)
    chunks = [points[s:s + _CHUNK] for s in range(0, points.shape[0], _CHUNK)]
    if threads > 1 and len(chunks) > 1:
        parts = Parallel(n_jobs=threads, prefer="threads")(
            delayed(_evaluate_chunk)(chunk, scaled, identity) for chunk in chunks)
    else:
        parts = [_evaluate_chunk(chunk, scaled, identity) for chunk in chunks]
    return np.concatenate(parts).reshape((size,) * k)


def _interpolate(values: np.ndarray, nodes: np.ndarray, kind: GridNodes) -> np.ndarray:
    k = values.ndim
    if kind is GridNodes.FOURIER:
        # 单位圆上的等距节点：系数就是归一化的离散傅里叶变换
        return np.fft.fftn(values) / nodes.size ** k
    vander = npoly.polyvander(nodes, nodes.size - 1)
    coeffs = values
    for axis in range(k):
        moved = np.moveaxis(coeffs, axis, 0)
        solved = np.linalg.solve(vander, moved.reshape(nodes.size, -1)).reshape(moved.shape)
        coeffs = np.moveaxis(solved, 0, axis)
    return coeffs


def det_pencil(mats: Sequence, var_names: Sequence[str] | None = None, *,
               nodes: GridNodes | str = GridNodes.FOURIER, threads: int = 1) -> MultiPoly:
    """
    p(x) = det(x_1 M_1 + … + x_k M_k − I)，总次数 ≤ n，常数项为 (−1)^n。
    范数小于1的矩阵先放大到单位范数，插值后再把系数换回原变量；
    范数不小于1的矩阵不缩小，插值误差相对最大系数保持在机器精度量级。
    """
    mats, var_names = _check_pencil(mats, var_names)
    kind = GridNodes(nodes)
    n, k = mats[0].shape[0], len(mats)
    norms = np.array([hs_norm(m) for m in mats])
    scales = np.where((norms > 0) & (norms < 1), 1.0 / np.where(norms > 0, norms, 1.0), 1.0)
    scaled = np.stack([s * m for s, m in zip(scales, mats)])

    node_values = _node_set(kind, n + 1)
    logger.debug(f"行列式网格: n={n}, k={k}, 节点={kind.value}, 网格点数={(n + 1) ** k}")
    values = _grid_values(scaled, node_values, max(1, int(threads)))
    coeffs = _interpolate(values, node_values, kind)

    terms = {}
    for exp in np.ndindex(*coeffs.shape):
        if sum(exp) > n:
            continue
        terms[exp] = complex(coeffs[exp]) / float(np.prod(scales ** np.array(exp)))
    # 常数项恒为 det(−I)，不参与相对截断
    terms = dict(MultiPoly(var_names, terms).terms)
    terms[(0,) * k] = complex((-1) ** n)
    return MultiPoly(var_names, terms, prune=0.0)


def det_pencil_homogeneous(mats: Sequence, var_names: Sequence[str] | None = None, hom_var: str = "t",
                           **kwargs) -> MultiPoly:
    """det(x_1 M_1 + … + x_k M_k − t·I)"""
    mats, var_names = _check_pencil(mats, var_names)
    return homogenize(det_pencil(mats, var_names, **kwargs), hom_var, mats[0].shape[0])


def _group_lines(points: np.ndarray, tol: float, scale: float) -> list[Line]:
    """把在容差内重合的 (λ_j, μ_j, …) 点合并成一条带重数的直线"""
    threshold = tol * max(1.0, scale)
    lines: list[Line] = []
    representatives: list[np.ndarray] = []
    for point in points:
        for idx, rep in enumerate(representatives):
            if np.max(np.abs(rep - point)) <= threshold:
                lines[idx] = Line(lines[idx].coeffs, lines[idx].mult + 1)
                break
        else:
            representatives.append(point)
            lines.append(Line(tuple(complex(c) for c in point), 1))
    return lines


def _certify(arrangement: LineArrangement, mats: Sequence[ComplexMatrix], tol: float) -> bool:
    var_names = default_var_names(len(mats))
    return poly_equal(arrangement.to_poly(var_names), det_pencil(mats, var_names), tol)


def lines_of_pair(a, b, tol: float | None = None) -> tuple[LineArrangement, bool]:
    """
    a 正规时，候选直线 λ_j x_1 + b̂_jj x_2 = 1（b̂ 为 b 在 a 的特征基下的表示）；
    certified 表示这些直线的乘积就是 det(x_1 a + x_2 b − I)。
    """
    a, b = as_matrix(a), as_matrix(b)
    tol = resolve_tol(tol)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"矩阵维数不匹配: {a.shape[0]} 与 {b.shape[0]}。")
    decomposition = normal_eig(a, tol)
    v = decomposition.vectors
    b_hat = v.conj().T @ b @ v
    points = np.stack([decomposition.values, np.diag(b_hat)], axis=1)
    arrangement = LineArrangement(_group_lines(points, tol, max(hs_norm(a), hs_norm(b))))
    certified = _certify(arrangement, [a, b], tol)
    logger.info(f"直线分解: {len(arrangement.lines)} 条不同直线, certified={certified}")
    return arrangement, certified


def _joint_eigenbasis(mats: Sequence[ComplexMatrix], tol: float) -> ComplexMatrix:
    combination = sum(w * m for w, m in zip(_COMBINATION_WEIGHTS, mats))
    if is_normal(combination, tol):
        return normal_eig(combination, tol).vectors
    if not is_normal(mats[0], tol):
        raise NotNormalError("第一个矩阵不是正规矩阵，无法给出超平面候选。")
    return normal_eig(mats[0], tol).vectors


def hyperplanes_of_tuple(mats: Sequence, tol: float | None = None) -> tuple[LineArrangement, bool]:
    """
    正规矩阵组的超平面候选：取一般线性组合的特征基，读出各矩阵的对角元，
    再与 det_pencil 比较认证。矩阵两两可交换时必然认证成功。
    """
    tol = resolve_tol(tol)
    mats, _ = _check_pencil(mats, None)
    for m in mats:
        if not is_normal(m, tol):
            raise NotNormalError("超平面分解只对正规矩阵组定义。")
    v = _joint_eigenbasis(mats, tol)
    points = np.stack([np.diag(v.conj().T @ m @ v) for m in mats], axis=1)
    arrangement = LineArrangement(_group_lines(points, tol, max(hs_norm(m) for m in mats)))
    return arrangement, _certify(arrangement, mats, tol)


def complete_reducibility(mats: Sequence, tol: float | None = None) -> Reducibility:
    """分别计算“两两可交换”与“行列式分解为线性因子”两侧"""
    tol = resolve_tol(tol)
    mats, _ = _check_pencil(mats, None)
    commute = all(
        hs_norm(x @ y - y @ x) <= tol * scale_of(x) * scale_of(y)
        for x, y in combinations(mats, 2)
    )
    _, certified = hyperplanes_of_tuple(mats, tol)
    return Reducibility(commute, certified)


def parse_pencils(src: str) -> list[list[PencilExpr]]:
    """多个束用分号分隔，例如 "A1, A2 A2^H; A1, A2 A3" """
    return [parse_pencil(part) for part in src.split(";") if part.strip()]


def pencil_label(exprs: Sequence[PencilExpr]) -> str:
    return "(" + ", ".join(e.label() for e in exprs) + ")"


def _max_coeff_diff(p: MultiPoly, q: MultiPoly) -> float:
    keys = set(p.terms) | set(q.terms)
    return max((abs(p.coeff(e) - q.coeff(e)) for e in keys), default=0.0)


def spectra_equal(mats1: Sequence, mats2: Sequence, pencils: str | Sequence[Sequence[PencilExpr]],
                  tol: float | None = None) -> list[PencilComparison]:
    """
    对每个束分别比较两组矩阵的行列式多项式。
    """
    tol = resolve_tol(tol)
    if isinstance(pencils, str):
        pencils = parse_pencils(pencils)
    mats1 = [as_matrix(m) for m in mats1]
    mats2 = [as_matrix(m) for m in mats2]
    if mats1[0].shape != mats2[0].shape:
        raise DimensionMismatchError(f"两组矩阵维数不同: {mats1[0].shape[0]} 与 {mats2[0].shape[0]}。")

    results = []
    for exprs in pencils:
        p = det_pencil(evaluate_pencil(exprs, mats1))
        q = det_pencil(evaluate_pencil(exprs, mats2))
        results.append(PencilComparison(pencil_label(exprs), poly_equal(p, q, tol), _max_coeff_diff(p, q)))
    return results


def x2_dependence(a1, a2) -> bool:
    """det(x_1 a1 + x_2 a2 − I) 在 1e−10 相对剪枝后是否含有 x_2"""
    p = det_pencil([a1, a2], ["x1", "x2"])
    pruned = MultiPoly(p.vars, p.terms, prune=float(load_numeric_config()["x2_prune_relative"]))
    return var_degree(pruned, "x2") > 0
