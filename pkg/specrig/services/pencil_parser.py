#!/usr/bin/env python
# -*- coding: utf-8 -*-
# @Time : 2025/10/9 15:40
# @Author : Ray
# @File : pencil_parser.py
# @Software: PyCharm
"""
矩阵束表达式解析，例如 "A1, A2 A2^H, A2 A3"。

    list   := term ("," term)*
    term   := factor+
    factor := atom ("^H")*
    atom   := A1 | A2 | A3 | H | E | F

^H 只作用于紧邻的矩阵名，连续两次共轭互相抵消；H/E/F 与 A1/A2/A3 指向同一位置。
"""
import re
from dataclasses import dataclass
from typing import Sequence

from specrig.errors.exceptions import PencilSyntaxError, UnknownAtomError
from specrig.services.matrix_core import ComplexMatrix, as_matrix

ATOM_SLOTS = {"A1": 0, "A2": 1, "A3": 2, "H": 0, "E": 1, "F": 2}

_TOKEN = re.compile(r"\s*(?:(?P<adj>\^H)|(?P<comma>,)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<bad>\S))")


@dataclass(frozen=True)
class Factor:
    slot: int
    adjoint: bool = False

    def label(self) -> str:
        return f"A{self.slot + 1}" + ("^H" if self.adjoint else "")


@dataclass(frozen=True)
class PencilExpr:
    """一个束位置上的表达式：若干因子（可带共轭）的乘积"""
    factors: tuple[Factor, ...]

    def label(self) -> str:
        return " ".join(f.label() for f in self.factors)

    def evaluate(self, mats: Sequence[ComplexMatrix]) -> ComplexMatrix:
        result = None
        for factor in self.factors:
            if factor.slot >= len(mats):
                raise UnknownAtomError(f"矩阵组只有 {len(mats)} 个矩阵，无法解析 A{factor.slot + 1}。")
            m = as_matrix(mats[factor.slot])
            if factor.adjoint:
                m = m.conj().T
            result = m if result is None else result @ m
        return result


def _byte_offset(src: str, index: int) -> int:
    return len(src[:index].encode("utf-8"))


def parse_pencil(src: str) -> list[PencilExpr]:
    """
    解析逗号分隔的束表达式列表，错误信息带字节偏移量。
    """
    exprs: list[PencilExpr] = []
    factors: list[Factor] = []
    pos = 0
    while pos < len(src):
        if not src[pos:].strip():
            break
        match = _TOKEN.match(src, pos)
        start = match.start(match.lastgroup)
        if match.lastgroup == "bad":
            raise PencilSyntaxError(f"无法识别的字符 {match.group('bad')!r}", _byte_offset(src, start))
        if match.lastgroup == "name":
            name = match.group("name")
            if name not in ATOM_SLOTS:
                raise UnknownAtomError(f"未知的矩阵名 {name!r}", _byte_offset(src, start))
            factors.append(Factor(ATOM_SLOTS[name]))
        elif match.lastgroup == "adj":
            if not factors:
                raise PencilSyntaxError("^H 前面缺少矩阵名", _byte_offset(src, start))
            last = factors[-1]
            factors[-1] = Factor(last.slot, not last.adjoint)
        else:
            if not factors:
                raise PencilSyntaxError("逗号前缺少表达式", _byte_offset(src, start))
            exprs.append(PencilExpr(tuple(factors)))
            factors = []
        pos = match.end()

    if not factors:
        raise PencilSyntaxError("表达式为空或以逗号结尾", _byte_offset(src, len(src)))
    exprs.append(PencilExpr(tuple(factors)))
    return exprs


def evaluate_pencil(exprs: Sequence[PencilExpr], mats: Sequence[ComplexMatrix]) -> list[ComplexMatrix]:
    return [expr.evaluate(mats) for expr in exprs]
