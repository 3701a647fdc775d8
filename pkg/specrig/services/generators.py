#!/usr/bin/env python
# -*- coding: utf-8 -*-
# @Time : 2025/10/9 09:12
# @Author : Ray
# @File : generators.py
# @Software: PyCharm
"""
生成元构造：S_νU(2) 与 sl(2) 的 n 维表示、ν→1 极限、基本表示、一维表示、
反例三元组，以及对易关系残差的检查。

下标沿用 0..n−1 的标准正交基 e_0..e_{n−1}；H 对角、E 严格上三角、F 严格下三角。
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy.stats import unitary_group

from specrig.errors.exceptions import (
    ConstraintViolationError,
    DimensionMismatchError,
    IndexConstraintError,
    MissingParameterError,
    ParameterRangeError,
)
from specrig.services.matrix_core import ComplexMatrix, as_matrix, as_scalar, hs_norm
from specrig.utils.logger import logger

# 反例约束 αγ = βδ = 2 的判定容差
_CONSTRAINT_TOL = 1e-12


class Family(str, Enum):
    SNU2 = "snu2"
    SL2 = "sl2"
    LIMIT_NU1 = "limit_nu1"
    FUNDAMENTAL = "fundamental"
    ONE_DIM = "one_dim"
    COUNTEREXAMPLE = "counterexample"
    RANDOM_CONJUGATE = "random_conjugate"


# 命令行上使用的族名
CLI_FAMILY_NAMES = {
    "snu2": Family.SNU2,
    "sl2": Family.SL2,
    "limit": Family.LIMIT_NU1,
    "fundamental": Family.FUNDAMENTAL,
    "onedim": Family.ONE_DIM,
    "counterexample": Family.COUNTEREXAMPLE,
    "random-conjugate": Family.RANDOM_CONJUGATE,
}


class Orientation(str, Enum):
    STANDARD = "standard"
    SWAPPED = "swapped"


@dataclass(frozen=True)
class GeneratorTuple:
    """
    (H, E, F) 三元组；作为一般矩阵组使用时依次对应 A1, A2, A3。
    """
    H: ComplexMatrix
    E: ComplexMatrix
    F: ComplexMatrix
    family: Family
    nu: float | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("H", "E", "F"):
            m = as_matrix(getattr(self, name))
            m.setflags(write=False)
            object.__setattr__(self, name, m)
        if not (self.H.shape == self.E.shape == self.F.shape):
            raise DimensionMismatchError(
                f"H, E, F 维数不一致: {self.H.shape}, {self.E.shape}, {self.F.shape}")

    @property
    def n(self) -> int:
        return self.H.shape[0]

    def matrices(self) -> tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix]:
        return self.H, self.E, self.F


class RelationResidual(NamedTuple):
    r1: float
    r2: float
    r3: float
    orientation: Orientation

    def max(self) -> float:
        return max(self.r1, self.r2, self.r3)


def check_nu(nu, allow_unit: bool = True) -> float:
    """ν 必须是 [−1,1]\\{0} 中的实数；allow_unit=False 时还要求 |ν| < 1"""
    try:
        value = float(nu)
    except (TypeError, ValueError):
        raise ParameterRangeError(f"ν 必须是实数，实际为 {nu!r}。")
    if not math.isfinite(value) or value == 0.0 or abs(value) > 1.0:
        raise ParameterRangeError(f"ν = {nu} 不在 [−1,1]\\{{0}} 中。")
    if not allow_unit and abs(value) == 1.0:
        raise ParameterRangeError(f"ν = {nu} 处公式有极点，需要 |ν| < 1。")
    return value


def _check_dimension(n, minimum: int = 1) -> int:
    if int(n) != n or n < minimum:
        raise ParameterRangeError(f"维数 n = {n} 无效，需要 n ≥ {minimum}。")
    return int(n)


def c_coeff(n: int, k: int, nu: float) -> float:
    """
    c_k(ν) = ν/(1−ν²)·[(z^{−k}−1)(1−z^{n−k})]^{1/2}，z = ν²；|ν| = 1 时取极限 sign(ν)·√(k(n−k))。
    """
    n = _check_dimension(n)
    nu = check_nu(nu)
    if not 0 <= k <= n:
        raise IndexConstraintError(f"c_k 的下标 k = {k} 不在 0..{n} 中。")
    if k in (0, n):
        return 0.0
    if abs(nu) == 1.0:
        return math.copysign(math.sqrt(k * (n - k)), nu)
    z = nu * nu
    return nu / (1.0 - z) * math.sqrt((z ** (-k) - 1.0) * (1.0 - z ** (n - k)))


def h_coeff(n: int, k: int, nu: float) -> float:
    """H_{n,ν} 的第 k 个对角元 z/(1−z)·(z^{n−2k−1}−1)，|ν| = 1 时为 2k+1−n"""
    nu = check_nu(nu)
    if abs(nu) == 1.0:
        return float(2 * k + 1 - n)
    z = nu * nu
    return z / (1.0 - z) * (z ** (n - 2 * k - 1) - 1.0)


def max_weight(n: int, nu: float) -> float:
    """A1 的最大特征值 z/(1−z)·(z^{1−n}−1)，|ν| = 1 时为 n−1"""
    n = _check_dimension(n)
    return h_coeff(n, n - 1, nu)


def snu2_generators(n: int, nu: float) -> GeneratorTuple:
    n = _check_dimension(n)
    nu = check_nu(nu)
    h = np.diag([h_coeff(n, k, nu) for k in range(n)]).astype(np.complex128)
    e = np.zeros((n, n), dtype=np.complex128)
    f = np.zeros((n, n), dtype=np.complex128)
    for k in range(1, n):
        e[k - 1, k] = nu * c_coeff(n, k, nu)
    for k in range(n - 1):
        f[k + 1, k] = -c_coeff(n, k + 1, nu)
    logger.debug(f"构造 S_νU(2) 生成元: n={n}, ν={nu}")
    return GeneratorTuple(h, e, f, Family.SNU2, nu)


def limit_generators(n: int) -> GeneratorTuple:
    """ν→1 的极限矩阵 (H̃, Ẽ, F̃)"""
    n = _check_dimension(n)
    h = np.diag([2.0 * k + 1 - n for k in range(n)]).astype(np.complex128)
    e = np.zeros((n, n), dtype=np.complex128)
    f = np.zeros((n, n), dtype=np.complex128)
    for k in range(1, n):
        root = math.sqrt(k * (n - k))
        e[k - 1, k] = root
        f[k, k - 1] = -root
    return GeneratorTuple(h, e, f, Family.LIMIT_NU1, 1.0)


def sl2_generators(n: int) -> GeneratorTuple:
    n = _check_dimension(n, minimum=2)
    h = np.diag([float(n - 1 - 2 * j) for j in range(n)]).astype(np.complex128)
    e = np.zeros((n, n), dtype=np.complex128)
    f = np.zeros((n, n), dtype=np.complex128)
    for j in range(1, n):
        e[j - 1, j] = j * (n - j)
    for j in range(n - 1):
        f[j + 1, j] = 1.0
    return GeneratorTuple(h, e, f, Family.SL2)


def fundamental_generators(nu: float) -> GeneratorTuple:
    nu = check_nu(nu)
    h = np.diag([1.0, -nu * nu]).astype(np.complex128)
    e = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128)
    f = np.array([[0.0, 0.0], [-nu, 0.0]], dtype=np.complex128)
    return GeneratorTuple(h, e, f, Family.FUNDAMENTAL, nu)


def one_dim_rep(c, nu: float) -> GeneratorTuple:
    """
    一维表示: A0 = cν/(1−ν²), A1 = −ν²/(1−ν²), A2 = ν²/(c(1−ν²))；
    按 H = A1, E = A2, F = A0 存放。
    """
    nu = check_nu(nu, allow_unit=False)
    c = as_scalar(c)
    if c == 0:
        raise ParameterRangeError("一维表示的参数 c 不能为0。")
    z = nu * nu
    a0 = c * nu / (1.0 - z)
    a1 = -z / (1.0 - z)
    a2 = z / (c * (1.0 - z))
    return GeneratorTuple(np.array([[a1]]), np.array([[a2]]), np.array([[a0]]), Family.ONE_DIM, nu,
                          {"c": [c.real, c.imag]})


def counterexample_tuple(alpha, beta, gamma, delta) -> GeneratorTuple:
    """
    A1 = H_3，A2、A3 为含 α, β, γ, δ 的 3×3 矩阵，要求 αγ = βδ = 2。
    """
    alpha, beta, gamma, delta = (as_scalar(v) for v in (alpha, beta, gamma, delta))
    if abs(alpha * gamma - 2) > _CONSTRAINT_TOL or abs(beta * delta - 2) > _CONSTRAINT_TOL:
        raise ConstraintViolationError(
            f"需要 αγ = βδ = 2，实际 αγ = {alpha * gamma}, βδ = {beta * delta}。")
    a1 = sl2_generators(3).H
    a2 = np.array([[0, alpha, 0], [0, 0, 0], [0, beta, 0]], dtype=np.complex128)
    a3 = np.array([[0, 0, 0], [gamma, 0, delta], [0, 0, 0]], dtype=np.complex128)
    params = {k: [v.real, v.imag] for k, v in zip(("alpha", "beta", "gamma", "delta"),
                                                   (alpha, beta, gamma, delta))}
    return GeneratorTuple(a1, a2, a3, Family.COUNTEREXAMPLE, None, params)


def structural_matrices(n: int, i: int, j: int) -> tuple[ComplexMatrix, ComplexMatrix]:
    """
    循环置换矩阵 𝒫（𝒫[r, r+1] = 1, 𝒫[n−1, 0] = 1）与交换第 i、j 行的 Q_ij。
    """
    n = _check_dimension(n, minimum=2)
    if not 0 <= i < j < n:
        raise IndexConstraintError(f"需要 0 ≤ i < j < n，实际 i={i}, j={j}, n={n}。")
    perm = np.zeros((n, n), dtype=np.complex128)
    for r in range(n - 1):
        perm[r, r + 1] = 1.0
    perm[n - 1, 0] = 1.0
    q = np.eye(n, dtype=np.complex128)
    q[[i, j]] = q[[j, i]]
    return perm, q


def conjugate(t: GeneratorTuple, w: ComplexMatrix, family: Family | None = None) -> GeneratorTuple:
    """(W H W*, W E W*, W F W*)"""
    w = as_matrix(w)
    wh = w.conj().T
    return GeneratorTuple(w @ t.H @ wh, w @ t.E @ wh, w @ t.F @ wh, family or t.family, t.nu, dict(t.params))


def random_conjugate(t: GeneratorTuple, kind: str = "unitary", seed: int | None = None
                     ) -> tuple[GeneratorTuple, ComplexMatrix]:
    """
    测试夹具：用随机对角相位（首元为1）或Haar随机酉矩阵共轭三元组。
    """
    rng = np.random.default_rng(seed)
    if kind == "phase":
        phases = np.concatenate(([0.0], rng.uniform(-math.pi, math.pi, t.n - 1)))
        w = np.diag(np.exp(1j * phases))
    elif kind == "unitary":
        if t.n > 1:
            w = unitary_group.rvs(t.n, random_state=rng)
        else:
            w = np.exp(1j * rng.uniform(-math.pi, math.pi, (1, 1)))
    else:
        raise ParameterRangeError(f"未知的共轭方式: {kind}（可选 phase / unitary）")
    conjugated = conjugate(t, w, Family.RANDOM_CONJUGATE)
    conjugated.params.update(base_family=t.family.value, conjugation=kind, seed=seed)
    return conjugated, w


def relation_residuals(t: GeneratorTuple, orientation: Orientation | str = Orientation.STANDARD) -> RelationResidual:
    """
    对易关系残差（HS范数）:
      standard: νFE − ν⁻¹EF − H,  ν²HE − ν⁻²EH − (1+ν²)E,  ν²FH − ν⁻²HF − (1+ν²)F
      swapped: 每一对乘积交换次序
    """
    if t.nu is None:
        raise MissingParameterError(f"族 {t.family.value} 没有参数 ν，无法检查对易关系。")
    try:
        orientation = Orientation(orientation)
    except ValueError:
        raise ParameterRangeError(f"未知的方向: {orientation!r}（可选 standard / swapped）")
    nu = t.nu
    z = nu * nu
    h, e, f = t.matrices()

    def twisted(x, y, a, b):
        # a·xy − b·yx，swapped 时交换乘积次序
        if orientation is Orientation.STANDARD:
            return a * (x @ y) - b * (y @ x)
        return a * (y @ x) - b * (x @ y)

    r1 = hs_norm(twisted(f, e, nu, 1.0 / nu) - h)
    r2 = hs_norm(twisted(h, e, z, 1.0 / z) - (1.0 + z) * e)
    r3 = hs_norm(twisted(f, h, z, 1.0 / z) - (1.0 + z) * f)
    return RelationResidual(r1, r2, r3, orientation)


def sl2_relation_residuals(t: GeneratorTuple) -> tuple[float, float, float]:
    """‖[H,E] − 2E‖, ‖[H,F] + 2F‖, ‖[E,F] − H‖"""
    h, e, f = t.matrices()
    return (hs_norm(h @ e - e @ h - 2 * e),
            hs_norm(h @ f - f @ h + 2 * f),
            hs_norm(e @ f - f @ e - h))


def build_family(family: Family | str, n: int | None = None, nu: float | None = None, *,
                 c=1.0, alpha=1.0, beta=2.0, gamma=2.0, delta=1.0) -> GeneratorTuple:
    """按族名构造，命令行与HTTP接口共用"""
    family = CLI_FAMILY_NAMES.get(family, family) if isinstance(family, str) else family
    try:
        family = Family(family)
    except ValueError:
        raise ParameterRangeError(f"未知的族名: {family!r}（可选 {', '.join(CLI_FAMILY_NAMES)}）")
    if family in (Family.SNU2, Family.SL2, Family.LIMIT_NU1) and n is None:
        raise MissingParameterError(f"族 {family.value} 需要参数 n。")
    if family in (Family.SNU2, Family.FUNDAMENTAL, Family.ONE_DIM) and nu is None:
        raise MissingParameterError(f"族 {family.value} 需要参数 ν。")
    if family is Family.SNU2:
        return snu2_generators(n, nu)
    if family is Family.SL2:
        return sl2_generators(n)
    if family is Family.LIMIT_NU1:
        return limit_generators(n)
    if family is Family.FUNDAMENTAL:
        return fundamental_generators(nu)
    if family is Family.ONE_DIM:
        return one_dim_rep(c, nu)
    if family is Family.COUNTEREXAMPLE:
        return counterexample_tuple(alpha, beta, gamma, delta)
    raise ParameterRangeError("random-conjugate 需要基础族，请使用 random_conjugate()。")
