#!/usr/bin/env python
# -*- coding: utf-8 -*-
# @Time : 2025/10/13 14:02
# @Author : Ray
# @File : oracles.py
# @Software: PyCharm
"""
测试用的独立参照：余子式展开行列式、随机矩阵夹具
"""
from functools import lru_cache

import numpy as np

from specrig.services.polynomial import MultiPoly


def cofactor_det(entries):
    """
    沿第一行的Laplace展开（按列子集记忆化），元素可以是复数或 MultiPoly。
    """
    n = len(entries)

    @lru_cache(maxsize=None)
    def minor(row: int, cols: tuple[int, ...]):
        if row == n - 1:
            return entries[row][cols[0]]
        total = None
        for pos, col in enumerate(cols):
            rest = cols[:pos] + cols[pos + 1:]
            term = entries[row][col] * minor(row + 1, rest)
            if pos % 2:
                term = -term
            total = term if total is None else total + term
        return total

    return minor(0, tuple(range(n)))


def pencil_entries(mats, var_names) -> list[list[MultiPoly]]:
    """x_1 M_1 + … + x_k M_k − I 的多项式矩阵"""
    k, n = len(mats), mats[0].shape[0]
    zero = (0,) * k
    units = [tuple(1 if m == i else 0 for m in range(k)) for i in range(k)]
    rows = []
    for r in range(n):
        row = []
        for c in range(n):
            terms = {units[i]: mats[i][r, c] for i in range(k)}
            terms[zero] = -1.0 if r == c else 0.0
            row.append(MultiPoly(var_names, terms, prune=0.0))
        rows.append(row)
    return rows


def random_complex(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    a = random_complex(rng, n)
    return 0.5 * (a + a.conj().T)
