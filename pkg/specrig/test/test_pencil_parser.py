#!/usr/bin/env python
# -*- coding: utf-8 -*-
# @Time : 2025/10/13 16:55
# @Author : Ray
# @File : test_pencil_parser.py
# @Software: PyCharm
"""
测试矩阵束表达式解析
"""
import unittest

import numpy as np

from specrig.errors.exceptions import PencilSyntaxError, UnknownAtomError
from specrig.services.pencil_parser import Factor, evaluate_pencil, parse_pencil
from specrig.services.generators import counterexample_tuple


class TestPencilParser(unittest.TestCase):

    def test_parse_list(self):
        exprs = parse_pencil("A1, A2 A2^H")
        self.assertEqual(len(exprs), 2)
        self.assertEqual(exprs[0].factors, (Factor(0),))
        self.assertEqual(exprs[1].factors, (Factor(1), Factor(1, True)))
        self.assertEqual(exprs[1].label(), "A2 A2^H")

    def test_aliases(self):
        self.assertEqual(parse_pencil("H, E F"), parse_pencil("A1, A2 A3"))

    def test_double_adjoint_cancels(self):
        self.assertEqual(parse_pencil("A2^H^H")[0].factors, (Factor(1),))

    def test_evaluate(self):
        t = counterexample_tuple(1, 2, 2, 1)
        mats = evaluate_pencil(parse_pencil("A1, A2^H A2, A2 A3"), t.matrices())
        np.testing.assert_allclose(mats[0], t.H)
        np.testing.assert_allclose(mats[1], t.E.conj().T @ t.E)
        np.testing.assert_allclose(mats[2], t.E @ t.F)

    def test_missing_slot(self):
        exprs = parse_pencil("A1, A3")
        with self.assertRaises(UnknownAtomError):
            evaluate_pencil(exprs, [np.eye(2), np.eye(2)])

    def test_unknown_atom_offset(self):
        with self.assertRaises(UnknownAtomError) as ctx:
            parse_pencil("A1, A2 ,B")
        self.assertEqual(ctx.exception.offset, 8)
        with self.assertRaises(UnknownAtomError) as ctx:
            parse_pencil("A1A2")
        self.assertEqual(ctx.exception.offset, 0)

    def test_syntax_errors(self):
        cases = {
            "A1,, A2": 3,
            "^H A1": 0,
            "A1 $": 3,
            "A1,": 3,
            "": 0,
            # 全角空格占3个字节
            "A1　$": 5,
        }
        for src, offset in cases.items():
            with self.assertRaises(PencilSyntaxError, msg=src) as ctx:
                parse_pencil(src)
            self.assertEqual(ctx.exception.offset, offset, src)


if __name__ == '__main__':
    unittest.main()
