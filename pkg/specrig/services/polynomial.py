#!/usr/bin/env python
# -*- coding: utf-8 -*-
# @Time : 2025/10/8 14:20
# @Author : Ray
# @File : polynomial.py
# @Software: PyCharm
"""
复系数稀疏多元多项式：行列式多项式与联合谱的载体。

项以指数元组为键存放在字典里，系数为 complex；
构造时按最大系数的相对阈值剪枝，所以不会存下“噪声零”。
"""
from enum import Enum
from numbers import Number
from typing import Iterable, Mapping, Sequence

from specrig.errors.exceptions import (
    DimensionMismatchError,
    InvalidLinearFormError,
    VariableMismatchError,
)
from specrig.services.config_loader import load_numeric_config, resolve_tol
from specrig.services.matrix_core import as_scalar

Exponent = tuple[int, ...]


class PolyOp(str, Enum):
    ADD = "add"
    MUL = "mul"
    SCALE = "scale"


def _prune(terms: Mapping[Exponent, complex], relative: float) -> dict[Exponent, complex]:
    nonzero = {e: c for e, c in terms.items() if c != 0}
    if not nonzero:
        return {}
    threshold = relative * max(abs(c) for c in nonzero.values())
    return {e: c for e, c in nonzero.items() if abs(c) > threshold}


class MultiPoly:
    """
    稀疏多元多项式。vars 为有序变量名，terms: 指数元组 -> 复系数。
    """

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Sequence[int], complex] | None = None,
                 prune: float | None = None):
        self.vars: tuple[str, ...] = tuple(variables)
        if len(set(self.vars)) != len(self.vars):
            raise VariableMismatchError(f"变量名重复: {self.vars}")
        relative = load_numeric_config()["prune_relative"] if prune is None else prune
        collected: dict[Exponent, complex] = {}
        for exp, coeff in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != len(self.vars) or any(e < 0 for e in exp):
                raise DimensionMismatchError(f"指数向量 {exp} 与变量 {self.vars} 不匹配。")
            collected[exp] = collected.get(exp, 0j) + as_scalar(coeff)
        self.terms: dict[Exponent, complex] = _prune(collected, relative)

    @classmethod
    def constant(cls, variables: Sequence[str], value) -> "MultiPoly":
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "MultiPoly":
        idx = list(variables).index(name)
        exp = tuple(1 if k == idx else 0 for k in range(len(variables)))
        return cls(variables, {exp: 1.0})

    def is_zero(self) -> bool:
        return not self.terms

    def max_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def coeff(self, exp: Sequence[int]) -> complex:
        return self.terms.get(tuple(exp), 0j)

    def sorted_terms(self) -> list[tuple[Exponent, complex]]:
        return sorted(self.terms.items())

    def __add__(self, other):
        return poly_arith(self, _coerce(self, other), PolyOp.ADD)

    __radd__ = __add__

    def __sub__(self, other):
        return poly_arith(self, poly_arith(_coerce(self, other), -1.0, PolyOp.SCALE), PolyOp.ADD)

    def __rsub__(self, other):
        return _coerce(self, other) - self

    def __neg__(self):
        return poly_arith(self, -1.0, PolyOp.SCALE)

    def __mul__(self, other):
        if isinstance(other, Number):
            return poly_arith(self, other, PolyOp.SCALE)
        return poly_arith(self, other, PolyOp.MUL)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = MultiPoly.constant(self.vars, 1.0)
        for _ in range(k):
            result = result * self
        return result

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.sorted_terms():
            mono = "*".join(f"{v}^{e}" if e > 1 else v for v, e in zip(self.vars, exp) if e)
            parts.append(f"({c:.6g})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


class LinearForm:
    """线性型 coeffs·x + constant；谱直线 λ·x = 1 存为 coeffs=λ, constant=−1"""

    __slots__ = ("coeffs", "constant")

    def __init__(self, coeffs: Iterable, constant=0.0):
        self.coeffs: tuple[complex, ...] = tuple(as_scalar(c) for c in coeffs)
        self.constant: complex = as_scalar(constant)
        if self.constant == 0 and all(c == 0 for c in self.coeffs):
            raise InvalidLinearFormError("线性型恒为零。")

    @classmethod
    def line(cls, slopes: Iterable) -> "LinearForm":
        return cls(slopes, -1.0)

    def to_poly(self, variables: Sequence[str]) -> MultiPoly:
        if len(variables) != len(self.coeffs):
            raise VariableMismatchError(f"线性型有 {len(self.coeffs)} 个系数，变量表为 {tuple(variables)}。")
        nvar = len(variables)
        terms = {(0,) * nvar: self.constant}
        for k, c in enumerate(self.coeffs):
            terms[tuple(1 if m == k else 0 for m in range(nvar))] = c
        return MultiPoly(variables, terms)

    def __repr__(self):
        return f"LinearForm({list(self.coeffs)}, {self.constant})"


def _coerce(p: MultiPoly, other) -> MultiPoly:
    if isinstance(other, MultiPoly):
        return other
    return MultiPoly.constant(p.vars, other)


def _check_vars(p: MultiPoly, q: MultiPoly) -> None:
    if p.vars != q.vars:
        raise VariableMismatchError(f"变量表不一致: {p.vars} 与 {q.vars}")


def poly_arith(p: MultiPoly, q, kind: PolyOp | str) -> MultiPoly:
    """
    稀疏加法、乘法与数乘；scale 时 q 是标量。
    """
    kind = PolyOp(kind)
    if kind is PolyOp.SCALE:
        s = as_scalar(q)
        return MultiPoly(p.vars, {e: c * s for e, c in p.terms.items()})
    _check_vars(p, q)
    if kind is PolyOp.ADD:
        terms = dict(p.terms)
        for e, c in q.terms.items():
            terms[e] = terms.get(e, 0j) + c
        return MultiPoly(p.vars, terms)

    terms: dict[Exponent, complex] = {}
    for e1, c1 in p.terms.items():
        for e2, c2 in q.terms.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            terms[e] = terms.get(e, 0j) + c1 * c2
    return MultiPoly(p.vars, terms)


def _horner(terms: Mapping[Exponent, complex], point: Sequence[complex], depth: int) -> complex:
    if depth == len(point):
        return sum(terms.values(), 0j)
    by_power: dict[int, dict[Exponent, complex]] = {}
    for e, c in terms.items():
        by_power.setdefault(e[depth], {})[e] = c
    x = point[depth]
    acc = 0j
    for power in range(max(by_power), -1, -1):
        acc = acc * x
        if power in by_power:
            acc += _horner(by_power[power], point, depth + 1)
    return acc


def evaluate(p: MultiPoly, point: Sequence) -> complex:
    """逐变量Horner求值"""
    if len(point) != len(p.vars):
        raise DimensionMismatchError(f"求值点维数 {len(point)} 与变量个数 {len(p.vars)} 不符。")
    if not p.terms:
        return 0j
    return _horner(p.terms, [as_scalar(x) for x in point], 0)


def poly_equal(p: MultiPoly, q: MultiPoly, tol: float | None = None) -> bool:
    """
    max|p_e − q_e| ≤ tol·max(1, max|p|, max|q|)
    """
    _check_vars(p, q)
    tol = resolve_tol(tol)
    scale = max(1.0, p.max_coeff(), q.max_coeff())
    keys = set(p.terms) | set(q.terms)
    diff = max((abs(p.coeff(e) - q.coeff(e)) for e in keys), default=0.0)
    return diff <= tol * scale


def var_index(p: MultiPoly, var: int | str) -> int:
    if isinstance(var, str):
        if var not in p.vars:
            raise VariableMismatchError(f"变量 {var} 不在 {p.vars} 中。")
        return p.vars.index(var)
    if not 0 <= var < len(p.vars):
        raise DimensionMismatchError(f"变量下标 {var} 越界。")
    return var


def var_degree(p: MultiPoly, var: int | str) -> int:
    i = var_index(p, var)
    return max((e[i] for e in p.terms), default=0)


def _coefficient_in(p: MultiPoly, i: int, power: int) -> MultiPoly:
    """p 作为 x_i 的多项式时 x_i^power 的系数（仍在原变量表上，x_i 指数为0）"""
    terms = {}
    for e, c in p.terms.items():
        if e[i] == power:
            terms[e[:i] + (0,) + e[i + 1:]] = c
    return MultiPoly(p.vars, terms, prune=0.0)


def divide_linear(p: MultiPoly, f: LinearForm) -> tuple[MultiPoly, MultiPoly]:
    """
    以 f 的模最大变量系数为主元做综合除法，p = f·q + r，r 不含主元变量。
    """
    if not any(c != 0 for c in f.coeffs):
        raise InvalidLinearFormError()
    f_poly = f.to_poly(p.vars)
    pivot = max(range(len(f.coeffs)), key=lambda k: abs(f.coeffs[k]))
    a = f.coeffs[pivot]
    x_pivot = MultiPoly.variable(p.vars, p.vars[pivot])
    g = f_poly - a * x_pivot

    degree = var_degree(p, pivot)
    zero = MultiPoly(p.vars)
    if degree == 0:
        return zero, p

    quotient_parts: list[MultiPoly] = [zero] * degree
    quotient_parts[degree - 1] = _coefficient_in(p, pivot, degree) * (1.0 / a)
    for k in range(degree - 1, 0, -1):
        quotient_parts[k - 1] = (_coefficient_in(p, pivot, k) - g * quotient_parts[k]) * (1.0 / a)
    remainder = _coefficient_in(p, pivot, 0) - g * quotient_parts[0]

    quotient = zero
    power = MultiPoly.constant(p.vars, 1.0)
    for part in quotient_parts:
        quotient = quotient + part * power
        power = power * x_pivot
    return quotient, remainder


def homogenize(p: MultiPoly, var: str, degree: int | None = None) -> MultiPoly:
    """
    P_h(x, t) = t^d · p(x/t)，新变量追加在最后。
    """
    if var in p.vars:
        raise VariableMismatchError(f"齐次化变量 {var} 已在 {p.vars} 中。")
    d = p.total_degree() if degree is None else degree
    if d < p.total_degree():
        raise DimensionMismatchError(f"齐次化次数 {d} 小于多项式总次数 {p.total_degree()}。")
    terms = {e + (d - sum(e),): c for e, c in p.terms.items()}
    return MultiPoly(p.vars + (var,), terms, prune=0.0)


def from_linear_forms(forms: Sequence[LinearForm], multiplicities: Sequence[int],
                      variables: Sequence[str]) -> MultiPoly:
    """∏ f_k^{m_k}"""
    if len(forms) != len(multiplicities):
        raise DimensionMismatchError("线性型个数与重数个数不一致。")
    result = MultiPoly.constant(variables, 1.0)
    for form, mult in zip(forms, multiplicities):
        result = result * form.to_poly(variables) ** int(mult)
    return result
