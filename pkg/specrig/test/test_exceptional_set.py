#!/usr/bin/env python
# -*- coding: utf-8 -*-
# @Time : 2025/10/14 11:15
# @Author : Ray
# @File : test_exceptional_set.py
# @Software: PyCharm
"""
测试例外参数集
"""
import unittest

import numpy as np
from numpy.polynomial import polynomial as npoly

from specrig.errors.exceptions import IndexConstraintError, ParameterRangeError
from specrig.services.exceptional_set import (
    corollary_check,
    descartes_sign_changes,
    exceptional_pairs,
    exceptional_set,
    is_exceptional,
    multiplicity_profile,
    multiplicity_value,
    root_polynomial,
    z_root,
)


class TestExceptionalSet(unittest.TestCase):

    def test_n4_root(self):
        self.assertEqual(exceptional_pairs(4), [(2, 3)])
        root = z_root(4, 2, 3)
        self.assertTrue(0.754877 < root.z < 0.754878, root.z)
        self.assertLessEqual(abs(root.z ** 3 + root.z ** 2 - 1), 1e-12)
        self.assertAlmostEqual(root.nu, 0.8688369, places=6)

    def test_root_polynomial_layout(self):
        self.assertEqual(list(root_polynomial(4, 2, 3)), [1.0, 0.0, -1.0, -1.0])
        with self.assertRaises(IndexConstraintError):
            root_polynomial(4, 1, 2)

    def test_roots_up_to_12(self):
        for n in range(2, 13):
            s = exceptional_set(n)
            self.assertEqual(len(s.roots), len(exceptional_pairs(n)))
            for r in s.roots:
                coeffs = root_polynomial(n, r.i, r.j)
                self.assertEqual(descartes_sign_changes(coeffs), 1)
                self.assertTrue(0.0 < r.z < 1.0)
                self.assertLessEqual(abs(npoly.polyval(r.z, coeffs)), 1e-11)
                self.assertLessEqual(abs(multiplicity_value(n, r.i, r.j, r.z)), 1e-11)
            check = corollary_check(n)
            self.assertTrue(check.ok, check.violations)
            self.assertTrue(all(len(group) == 2 for group in check.coincidences))

    def test_no_root_when_indices_are_small(self):
        # i + j ≤ n 时 1 + z^n − z^{n−j} − z^{n−i} ≥ (1−z^{n−i})(1−z^{n−j}) > 0
        grid = np.linspace(0.01, 0.99, 99)
        for n in range(2, 13):
            for i in range(n):
                for j in range(i + 1, min(n - i, n - 1) + 1):
                    for z in grid:
                        bound = (1 - z ** (n - i)) * (1 - z ** (n - j))
                        self.assertGreater(bound, 0.0)
                        self.assertGreaterEqual(multiplicity_value(n, i, j, z), bound - 1e-15, f"n={n}, ({i},{j})")

    def test_values_are_symmetric(self):
        values = exceptional_set(5).values()
        self.assertIn(1.0, values)
        self.assertIn(-1.0, values)
        self.assertEqual(sorted(-v for v in values), values)
        self.assertEqual(exceptional_set(2).values(), [-1.0, 1.0])

    def test_small_n(self):
        with self.assertRaises(ParameterRangeError):
            exceptional_set(1)

    def assertProfile(self, profile, expected):
        self.assertEqual([m for _, m in profile], [m for _, m in expected])
        for (value, _), (want, _) in zip(profile, expected):
            self.assertAlmostEqual(value, want, places=12)

    def test_profile_at_unit(self):
        self.assertProfile(multiplicity_profile(4, 1.0), [(0.0, 1), (3.0, 2), (4.0, 1)])
        # i + j = n 配对
        self.assertProfile(multiplicity_profile(5, -1.0), [(0.0, 1), (4.0, 2), (6.0, 2)])

    def test_profile_at_roots(self):
        for n in range(3, 10):
            roots = exceptional_set(n).roots
            for r in roots:
                shared = sum(1 for q in roots if abs(q.z - r.z) <= 1e-10)
                mults = [m for _, m in multiplicity_profile(n, r.nu, 1e-8)]
                self.assertEqual(max(mults), 2, f"n={n}, (i,j)=({r.i},{r.j})")
                self.assertEqual(mults.count(2), shared, f"n={n}, (i,j)=({r.i},{r.j})")
                self.assertTrue(is_exceptional(n, -r.nu, 1e-8))

    def test_generic_parameter(self):
        for n in range(3, 9):
            self.assertFalse(is_exceptional(n, 0.37))
            self.assertTrue(all(m == 1 for _, m in multiplicity_profile(n, 0.37)))
            self.assertTrue(is_exceptional(n, 1.0))


if __name__ == '__main__':
    unittest.main()
