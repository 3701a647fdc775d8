#!/usr/bin/env python
# -*- coding: utf-8 -*-
# @Time : 2025/10/15 10:05
# @Author : Ray
# @File : test_cli.py
# @Software: PyCharm
"""
测试命令行入口：输出格式与退出码
"""
import tempfile
import unittest
from pathlib import Path

import orjson

from specrig.cli import main


class TestCli(unittest.TestCase):

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def run_cli(self, *args, out="out.json"):
        path = self.tmp / out
        code = main([*args, "-o", str(path)])
        payload = path.read_bytes() if path.exists() else b""
        return code, payload

    def gen(self, name, *args):
        code, _ = self.run_cli("gen", *args, out=name)
        self.assertEqual(code, 0)
        return str(self.tmp / name)

    def test_gen(self):
        code, payload = self.run_cli("gen", "--family", "snu2", "--n", "4", "--nu", "0.5")
        self.assertEqual(code, 0)
        doc = orjson.loads(payload)
        self.assertEqual(doc["family"], "snu2")
        self.assertEqual(doc["n"], 4)
        self.assertTrue(payload.endswith(b"}\n"))

    def test_gen_random_conjugate(self):
        code, payload = self.run_cli("gen", "--family", "random-conjugate", "--base-family", "sl2",
                                     "--n", "3", "--kind", "phase", "--seed", "5")
        self.assertEqual(code, 0)
        doc = orjson.loads(payload)
        self.assertEqual(doc["params"]["base_family"], "sl2")
        self.assertEqual(doc["params"]["seed"], 5)

    def test_det_showcase(self):
        tuple_path = self.gen("sl2.json", "--family", "sl2", "--n", "3")
        code, payload = self.run_cli("det", "--tuple", tuple_path, "--pencil", "A1, A2, A3",
                                     "--vars", "x,y,z", "--homogeneous", "t")
        self.assertEqual(code, 0)
        doc = orjson.loads(payload)
        self.assertEqual(doc["vars"], ["x", "y", "z", "t"])
        terms = {tuple(t["exp"]): complex(t["re"], t["im"]) for t in doc["terms"]}
        expected = {(2, 0, 0, 1): 4, (0, 1, 1, 1): 4, (0, 0, 0, 3): -1}
        self.assertEqual(set(terms), set(expected))
        for exp, value in expected.items():
            self.assertAlmostEqual(abs(terms[exp] - value), 0.0, delta=1e-10)

    def test_lines_csv(self):
        tuple_path = self.gen("snu2.json", "--family", "snu2", "--n", "3", "--nu", "0.5")
        code, payload = self.run_cli("lines", "--tuple", tuple_path, "--pencil", "A1, A2 A2^H",
                                     "--format", "csv", out="lines.csv")
        self.assertEqual(code, 0)
        rows = payload.decode("utf-8").splitlines()
        self.assertEqual(rows[0], "coeffs,mult")
        self.assertEqual(len(rows), 4)

    def test_compare(self):
        tuple_path = self.gen("conj.json", "--family", "random-conjugate", "--n", "3", "--nu", "0.5",
                              "--seed", "2")
        code, payload = self.run_cli("compare", "--tuple", tuple_path, "--family", "snu2", "--nu", "0.5",
                                     "--pencil", "A1, A2 A2^H; A1, A2 A3")
        self.assertEqual(code, 0)
        doc = orjson.loads(payload)
        self.assertTrue(doc["all_equal"])
        self.assertEqual(len(doc["pencils"]), 2)

    def test_rigidity_exit_codes(self):
        good = self.gen("good.json", "--family", "random-conjugate", "--n", "4", "--nu", "-0.7", "--seed", "1")
        code, payload = self.run_cli("rigidity", "--tuple", good, "--nu", "-0.7")
        self.assertEqual(code, 0)
        doc = orjson.loads(payload)
        self.assertEqual(doc["verdict"], "equivalent")
        self.assertIn("witness", doc)

        wrong = self.gen("wrong.json", "--family", "sl2", "--n", "4")
        code, payload = self.run_cli("rigidity", "--tuple", wrong, "--nu", "0.5")
        self.assertEqual(code, 2)
        self.assertEqual(orjson.loads(payload)["verdict"], "hypothesis_failed")

        code, _ = self.run_cli("rigidity", "--tuple", wrong, "--family", "sl2")
        self.assertEqual(code, 0)

    def test_exceptional_formats(self):
        code, payload = self.run_cli("exceptional", "--n", "4")
        self.assertEqual(code, 0)
        doc = orjson.loads(payload)
        self.assertEqual(sorted(doc), ["coincidences", "corollary_ok", "n", "roots", "set"])
        self.assertEqual(len(doc["roots"]), 1)
        self.assertAlmostEqual(doc["roots"][0]["z"], 0.7548776662, places=9)
        self.assertTrue(doc["corollary_ok"])

        code, payload = self.run_cli("exceptional", "--n", "4", "--format", "csv", out="s.csv")
        rows = payload.decode("utf-8").splitlines()
        self.assertEqual(rows[0], "i,j,z,nu")
        self.assertTrue(rows[1].startswith("2,3,0.754877666"))

        code, flagged = self.run_cli("exceptional", "--n", "4", "--csv", out="flag.csv")
        self.assertEqual(code, 0)
        self.assertEqual(flagged, payload)
        code, flagged = self.run_cli("exceptional", "--n", "4", "--json", out="flag.json")
        self.assertEqual(code, 0)
        self.assertEqual(orjson.loads(flagged), doc)
        self.assertEqual(self.run_cli("exceptional", "--n", "4", "--json", "--csv")[0], 1)

        code, payload = self.run_cli("exceptional", "--n", "4", "--format", "text", out="s.txt")
        self.assertEqual(code, 0)
        self.assertIn("exceptional set n=4", payload.decode("utf-8"))

    def test_relations(self):
        code, payload = self.run_cli("relations", "--family", "fundamental", "--nu", "0.4")
        self.assertEqual(code, 0)
        doc = orjson.loads(payload)
        self.assertEqual(doc["orientation"], "standard")
        self.assertLessEqual(max(doc["r1"], doc["r2"], doc["r3"]), 1e-10)

        code, payload = self.run_cli("relations", "--family", "snu2", "--n", "5", "--nu", "0.5",
                                     "--orientation", "swapped")
        self.assertEqual(code, 0)
        doc = orjson.loads(payload)
        self.assertLessEqual(max(doc["r1"], doc["r2"], doc["r3"]), 1e-10)

    def test_counterexample(self):
        code, payload = self.run_cli("counterexample")
        self.assertEqual(code, 0)
        doc = orjson.loads(payload)
        self.assertTrue(doc["three_pencil_equal"])
        self.assertGreaterEqual(doc["commutator_residual"], 1.0)
        self.assertNotEqual(doc["sl2_report"]["verdict"], "equivalent")
        self.assertEqual(doc["params"][1], [2.0, 0.0])

    def test_errors_exit_one(self):
        self.assertEqual(self.run_cli("gen", "--family", "snu2", "--n", "3")[0], 1)
        self.assertEqual(self.run_cli("gen", "--family", "snu2", "--n", "3", "--nu", "1.5")[0], 1)
        self.assertEqual(self.run_cli("gen", "--family", "nope", "--n", "3")[0], 1)
        self.assertEqual(self.run_cli("exceptional", "--n", "4", "--tol", "0")[0], 1)
        self.assertEqual(self.run_cli("exceptional", "--n", "4", "--format", "xml")[0], 1)
        self.assertEqual(self.run_cli("det", "--tuple", str(self.tmp / "none.json"), "--pencil", "A1")[0], 1)
        self.assertEqual(self.run_cli("frobnicate")[0], 1)

    def test_pencil_syntax_error(self):
        tuple_path = self.gen("sl2.json", "--family", "sl2", "--n", "3")
        code, payload = self.run_cli("det", "--tuple", tuple_path, "--pencil", "A1,, A2")
        self.assertEqual(code, 1)
        self.assertEqual(payload, b"")


if __name__ == '__main__':
    unittest.main()
