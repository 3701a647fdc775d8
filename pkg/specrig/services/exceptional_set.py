#!/usr/bin/env python
# -*- coding: utf-8 -*-
# @Time : 2025/10/10 16:22
# @Author : Ray
# @File : exceptional_set.py
# @Software: PyCharm
"""
例外参数集 S：E_{n,ν}E_{n,ν}* 出现重特征值的 ν。

对每对 0 ≤ i < j ≤ n−1、i + j > n，多项式
    1 + z + … + z^{n−j−1} − z^{n−i} − … − z^{n−1}
在 (0,1) 内恰有一个根 z_ij，对应 ±√z_ij；再加上 ±1。
"""
from itertools import combinations
from typing import NamedTuple

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import bisect

from specrig.errors.exceptions import ConvergenceError, IndexConstraintError, ParameterRangeError
from specrig.services.config_loader import load_numeric_config, resolve_tol
from specrig.services.generators import c_coeff, check_nu
from specrig.services.matrix_core import cluster_values
from specrig.utils.logger import logger


class ExceptionalRoot(NamedTuple):
    n: int
    i: int
    j: int
    z: float
    nu: float


class ExceptionalSet(NamedTuple):
    n: int
    roots: list[ExceptionalRoot]
    unit: tuple[float, float] = (-1.0, 1.0)

    def values(self) -> list[float]:
        """S 中全部 ν 值，升序"""
        tilde = [sign * r.nu for r in self.roots for sign in (-1.0, 1.0)]
        return sorted(set(tilde) | set(self.unit))


class CorollaryResult(NamedTuple):
    ok: bool
    coincidences: list[tuple[tuple[int, int], ...]]
    violations: list[str]


def _check_pair(n: int, i: int, j: int) -> None:
    if not (0 <= i < j <= n - 1 and i + j > n):
        raise IndexConstraintError(f"需要 0 ≤ i < j ≤ n−1 且 i + j > n，实际 n={n}, i={i}, j={j}。")


def root_polynomial(n: int, i: int, j: int) -> np.ndarray:
    """升幂系数: 0..n−j−1 次为 +1，n−i..n−1 次为 −1，中间为 0"""
    _check_pair(n, i, j)
    coeffs = np.zeros(n)
    coeffs[: n - j] = 1.0
    coeffs[n - i:] = -1.0
    return coeffs


def multiplicity_value(n: int, i: int, j: int, z: float) -> float:
    """1 + z^n − z^{n−j} − z^{n−i}，等于 (1−z) 乘以 root_polynomial 的值"""
    return 1.0 + z ** n - z ** (n - j) - z ** (n - i)


def descartes_sign_changes(coeffs) -> int:
    """系数序列（忽略0）的符号变化次数，是正根个数的上界"""
    signs = [np.sign(c) for c in coeffs if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def z_root(n: int, i: int, j: int) -> ExceptionalRoot:
    """
    在 (0,1) 上二分求唯一根：p(0) = 1 > 0，p(1) = n − j − i < 0。
    """
    coeffs = root_polynomial(n, i, j)
    iterations = int(load_numeric_config()["bisection_iterations"])
    try:
        z = bisect(lambda x: npoly.polyval(x, coeffs), 0.0, 1.0,
                   xtol=2.0 ** -iterations, maxiter=iterations)
    except RuntimeError as e:
        raise ConvergenceError(f"二分法在 {iterations} 次内未收敛 (n={n}, i={i}, j={j}): {e}")
    logger.debug(f"z_{i}{j} (n={n}) = {z!r}, 残差 {npoly.polyval(z, coeffs):.2e}")
    return ExceptionalRoot(n, i, j, float(z), float(np.sqrt(z)))


def exceptional_pairs(n: int) -> list[tuple[int, int]]:
    """字典序列出全部 (i, j)"""
    return [(i, j) for i in range(n) for j in range(i + 1, n) if i + j > n]


def exceptional_set(n: int) -> ExceptionalSet:
    if int(n) != n or n < 2:
        raise ParameterRangeError(f"例外集需要 n ≥ 2，实际 n = {n}。")
    n = int(n)
    roots = [z_root(n, i, j) for i, j in exceptional_pairs(n)]
    logger.info(f"n={n}: 例外集共有 {len(roots)} 对 (i, j)")
    return ExceptionalSet(n, roots)


def multiplicity_profile(n: int, nu: float, tol: float | None = None) -> list[tuple[float, int]]:
    """
    E_{n,ν}E_{n,ν}* 的特征值 ν²c_{k+1}(ν)²（k = 0..n−1）按容差聚类后的 (值, 重数)，按值升序。
    """
    nu = check_nu(nu)
    tol = resolve_tol(tol)
    values = np.array([nu * nu * c_coeff(n, k + 1, nu) ** 2 for k in range(n)])
    groups = cluster_values(values, tol, float(np.max(np.abs(values))))
    profile = [(float(np.mean(values[g])), len(g)) for g in groups]
    return sorted(profile)


def is_exceptional(n: int, nu: float, tol: float | None = None) -> bool:
    """ν ∈ S：|ν| = 1 或 |ν| 与某个 √z_ij 在容差内重合"""
    nu = check_nu(nu)
    tol = resolve_tol(tol)
    if abs(nu) == 1.0:
        return True
    if n < 2:
        return False
    return any(abs(abs(nu) - r.nu) <= tol for r in exceptional_set(n).roots)


def corollary_check(n: int) -> CorollaryResult:
    """
    对根重合的两对 (i1, j1)、(i2, j2)（i1 < i2）检查 j1 > j2 且 i2 − i1 > j1 − j2；
    同一个根被三对共享也记为违反。
    """
    tol = float(load_numeric_config()["root_coincidence"])
    roots = exceptional_set(n).roots
    groups = cluster_values([r.z for r in roots], tol, 0.0)
    coincidences, violations = [], []
    for group in groups:
        if len(group) < 2:
            continue
        members = sorted((roots[k].i, roots[k].j) for k in group)
        coincidences.append(tuple(members))
        if len(members) > 2:
            violations.append(f"根 z={roots[group[0]].z:.12f} 被 {len(members)} 对共享: {members}")
        for (i1, j1), (i2, j2) in combinations(members, 2):
            if not (i1 < i2 and j1 > j2 and i2 - i1 > j1 - j2):
                violations.append(f"({i1},{j1}) 与 ({i2},{j2}) 不满足顺序关系")
    if violations:
        logger.warning(f"n={n}: 推论检查失败 {violations}")
    return CorollaryResult(not violations, coincidences, violations)
