#!/usr/bin/env python
# -*- coding: utf-8 -*-
# @Time : 2025/10/14 15:30
# @Author : Ray
# @File : test_rigidity_service.py
# @Software: PyCharm
"""
测试谱刚性验证与见证重建。

往返测试的重复次数由环境变量 SPECRIG_TRIALS 控制（默认200）。
"""
import os
import unittest

import numpy as np

from specrig.errors.exceptions import (
    ConstraintViolationError,
    IndexConstraintError,
    LineNotInSpectrumError,
    MultiplicityError,
    NotUnitaryError,
)
from specrig.services.exceptional_set import exceptional_set
from specrig.services.generators import c_coeff, random_conjugate, sl2_generators, snu2_generators
from specrig.services.matrix_core import scale_of
from specrig.services.rigidity_service import (
    Verdict,
    certify_equivalence,
    compression_check,
    counterexample_demo,
    exchange_tuple,
    phases_of,
    reconstruct_sl2,
    reconstruct_snu2,
    verify_conditions_sl2,
    verify_conditions_snu2,
)
from specrig.services.spectrum_service import spectra_equal, x2_dependence

TRIALS = int(os.getenv("SPECRIG_TRIALS", "200"))
TOL = 1e-8

SNU2_GRID = [(n, nu) for nu in (0.3, -0.7) for n in range(2, 11)]


def _max_scale(mats):
    return max(scale_of(m) for m in mats)


class TestSnu2Rigidity(unittest.TestCase):

    def test_roundtrip(self):
        for n, nu in SNU2_GRID:
            ref = snu2_generators(n, nu)
            for kind in ("phase", "unitary"):
                for seed in range(TRIALS):
                    t, w = random_conjugate(ref, kind, seed)
                    report = reconstruct_snu2(t.matrices(), n, nu, TOL)
                    label = f"n={n}, nu={nu}, {kind}, seed={seed}"
                    self.assertIs(report.verdict, Verdict.EQUIVALENT, f"{label}: {report.diagnostics}")
                    self.assertEqual(report.exit_code, 0)
                    residual = certify_equivalence(t.matrices(), ref, report.global_witness, TOL)
                    self.assertLessEqual(residual, TOL * _max_scale(t.matrices()), label)
                    witness = np.diag(report.witness)
                    self.assertEqual(witness[0], 1)
                    np.testing.assert_allclose(np.abs(witness), np.ones(n), atol=1e-12)
                    if kind == "phase":
                        np.testing.assert_allclose(report.global_witness, w, atol=1e-8)

    def test_tampering_flips_verdict(self):
        rng = np.random.default_rng(99)
        for fixture in range(50):
            n = int(rng.integers(3, 6))
            ref = snu2_generators(n, -0.7)
            t, _ = random_conjugate(ref, "unitary", int(rng.integers(0, 10 ** 6)))
            mats = [m.copy() for m in t.matrices()]
            slot = int(rng.integers(1, 3))
            i, j = (int(v) for v in rng.integers(0, n, 2))
            mats[slot][i, j] += 1e-6 * np.exp(1j * rng.uniform(0, 2 * np.pi))
            report = reconstruct_snu2(mats, n, -0.7, TOL)
            self.assertIsNot(report.verdict, Verdict.EQUIVALENT, f"fixture {fixture}: slot={slot}, ({i},{j})")
            self.assertIn(report.exit_code, (2, 3))

    def test_superdiagonal_modulus_is_reported(self):
        for n, nu in ((4, 0.5), (6, -0.7)):
            ref = snu2_generators(n, nu)
            for k in range(1, n):
                a2 = ref.E.copy()
                entry = a2[k - 1, k]
                a2[k - 1, k] += 10 * TOL * scale_of(ref.E) * entry / abs(entry)
                mats = [ref.H, a2, ref.F]
                label = f"n={n}, nu={nu}, k={k}"
                self.assertIsNot(reconstruct_snu2(mats, n, nu, TOL).verdict, Verdict.EQUIVALENT, label)
                report = reconstruct_snu2(mats, n, nu, TOL, assume_hypotheses=True)
                self.assertIs(report.verdict, Verdict.RECONSTRUCTION_FAILED, label)
                self.assertIn("a2_support", report.failed_steps(), label)
                codes = {(d.step, d.code) for d in report.diagnostics}
                self.assertIn(("a2_support", "modulus_mismatch"), codes, label)

    def test_clustered_spectrum_roundtrip(self):
        for n in (8, 9, 10):
            ref = snu2_generators(n, 0.3)
            t, _ = random_conjugate(ref, "unitary", 0)
            report = reconstruct_snu2(t.matrices(), n, 0.3, TOL)
            self.assertIs(report.verdict, Verdict.EQUIVALENT, f"n={n}: {report.diagnostics}")

    def test_conditions(self):
        t, _ = random_conjugate(snu2_generators(4, 0.6), "unitary", 1)
        check = verify_conditions_snu2(t.matrices(), 4, 0.6, TOL)
        self.assertTrue(check.all_ok)
        self.assertEqual(len(check.results), 5)
        wrong = verify_conditions_snu2(sl2_generators(4).matrices(), 4, 0.6, TOL)
        self.assertFalse(wrong.all_ok)

    def test_non_normal_a1(self):
        ref = snu2_generators(3, 0.5)
        report = reconstruct_snu2([ref.E, ref.E, ref.F], 3, 0.5)
        self.assertIs(report.verdict, Verdict.HYPOTHESIS_FAILED)
        self.assertEqual(report.diagnostics[0].code, "a1_not_normal")
        self.assertIsNone(report.global_witness)

    def test_wrong_family_fails_hypotheses(self):
        report = reconstruct_snu2(sl2_generators(4).matrices(), 4, 0.5)
        self.assertIs(report.verdict, Verdict.HYPOTHESIS_FAILED)
        self.assertEqual(report.exit_code, 2)
        self.assertEqual(report.failed_steps(), ["hypotheses"])
        self.assertTrue(report.condition_residuals)


class TestExchangeTuple(unittest.TestCase):

    def test_unit_parameter(self):
        ref = snu2_generators(4, 1.0)
        a1, a2 = exchange_tuple(4, 1.0, [(1, 3)])
        mats = [a1, a2, ref.F]
        results = spectra_equal(mats, ref.matrices(), "A1, A2 A2^H; A1, A2^H A2", TOL)
        self.assertTrue(all(r.equal for r in results), results)
        self.assertTrue(x2_dependence(a1, a2))

        report = reconstruct_snu2(mats, 4, 1.0, TOL, assume_hypotheses=True)
        self.assertIs(report.verdict, Verdict.RECONSTRUCTION_FAILED)
        self.assertEqual(report.exit_code, 3)
        self.assertEqual(report.failed_steps(), ["a2_support"])
        codes = {d.code for d in report.diagnostics}
        self.assertIn("off_superdiagonal", codes)
        self.assertIn("x2_dependence", codes)

        full = reconstruct_snu2(mats, 4, 1.0, TOL)
        self.assertIsNot(full.verdict, Verdict.EQUIVALENT)

    def test_interior_exceptional_parameter(self):
        n = 4
        nu = exceptional_set(n).roots[0].nu
        squares = {k: c_coeff(n, k, nu) ** 2 for k in range(1, n)}
        pairs = [(i, j) for i in range(1, n) for j in range(i + 1, n)
                 if abs(squares[i] - squares[j]) <= 1e-10 * max(squares.values())]
        self.assertEqual(len(pairs), 1)
        a1, a2 = exchange_tuple(n, nu, pairs, phases=[0.0, 0.3, -1.2, 2.0], tol=TOL)
        ref = snu2_generators(n, nu)
        results = spectra_equal([a1, a2, ref.F], ref.matrices(), "A1, A2 A2^H; A1, A2^H A2", TOL)
        self.assertTrue(all(r.equal for r in results), results)
        self.assertTrue(x2_dependence(a1, a2))

    def test_errors(self):
        with self.assertRaises(IndexConstraintError):
            exchange_tuple(4, 1.0, [(0, 3)])
        with self.assertRaises(IndexConstraintError):
            exchange_tuple(5, 1.0, [(1, 4), (1, 4)])
        with self.assertRaises(ConstraintViolationError):
            exchange_tuple(4, 0.5, [(1, 3)])


class TestSl2Rigidity(unittest.TestCase):

    def test_roundtrip(self):
        for n in range(2, 11):
            ref = sl2_generators(n)
            for kind in ("phase", "unitary"):
                for seed in range(TRIALS):
                    t, _ = random_conjugate(ref, kind, seed)
                    report = reconstruct_sl2(t.matrices(), n, TOL)
                    label = f"n={n}, {kind}, seed={seed}"
                    self.assertIs(report.verdict, Verdict.EQUIVALENT, f"{label}: {report.diagnostics}")
                    residual = certify_equivalence(t.matrices(), ref, report.global_witness, TOL)
                    self.assertLessEqual(residual, TOL * _max_scale(t.matrices()), label)

    def test_compressions(self):
        for n in range(2, 11):
            t, _ = random_conjugate(sl2_generators(n), "unitary", n)
            a1, a2, a3 = t.matrices()
            for j in range(n - 1):
                lam, mu = n - 1 - 2 * j, (j + 1) * (n - 1 - j)
                self.assertTrue(compression_check(a1, a2 @ a3, lam, mu, TOL), f"n={n}, j={j}")

    def test_compression_errors(self):
        a1 = np.diag([1.0, 2.0])
        b = np.array([[3.0, 1.0], [1.0, 4.0]])
        self.assertTrue(compression_check(a1, b, 1.0, 3.0, check_line=False))
        self.assertFalse(compression_check(a1, b, 1.0, 4.0, check_line=False))
        with self.assertRaises(LineNotInSpectrumError):
            compression_check(a1, b, 1.0, 3.0)
        coupled = np.array([[5.0, 1.0], [1.0, 7.0]])
        self.assertTrue(compression_check(a1, coupled, 1.0, 5.0, check_line=False))
        with self.assertRaises(LineNotInSpectrumError):
            compression_check(a1, coupled, 1.0, 5.0)
        with self.assertRaises(MultiplicityError):
            compression_check(np.diag([1.0, 1.0, 2.0]), np.diag([3.0, 3.0, 5.0]), 1.0, 3.0)

    def test_conditions(self):
        self.assertTrue(verify_conditions_sl2(sl2_generators(5).matrices(), 5).all_ok)

    def test_off_subdiagonal_a3(self):
        ref = sl2_generators(4)
        a3 = ref.F.copy()
        a3[0, 3] = 0.5
        report = reconstruct_sl2([ref.H, ref.E, a3], 4, TOL, assume_hypotheses=True)
        self.assertIs(report.verdict, Verdict.RECONSTRUCTION_FAILED)
        self.assertIn("adjoint_products", report.failed_steps())


class TestCounterexample(unittest.TestCase):

    def test_demo(self):
        for params in ((1, 2, 2, 1), (2, 1, 1, 2)):
            demo = counterexample_demo(*params)
            self.assertTrue(demo.three_pencil_equal, params)
            self.assertLessEqual(demo.three_pencil_diff, 1e-10)
            self.assertGreaterEqual(demo.commutator_residual, 1.0)
            self.assertIsNot(demo.sl2_report.verdict, Verdict.EQUIVALENT)
        np.testing.assert_allclose(counterexample_demo().commutator, [[2, 0, 1], [0, -4, 0], [4, 0, 2]])


class TestCertify(unittest.TestCase):

    def test_not_unitary(self):
        ref = sl2_generators(3)
        with self.assertRaises(NotUnitaryError):
            certify_equivalence(ref.matrices(), ref, 2 * np.eye(3))
        self.assertEqual(certify_equivalence(ref.matrices(), ref, np.eye(3)), 0.0)

    def test_phases_of(self):
        phases = phases_of(np.diag(np.exp(1j * np.array([0.0, 0.5, -1.0]))))
        np.testing.assert_allclose(phases, [0.0, 0.5, -1.0], atol=1e-15)


if __name__ == '__main__':
    unittest.main()
