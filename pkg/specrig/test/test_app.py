#!/usr/bin/env python
# -*- coding: utf-8 -*-
# @Time : 2025/10/15 14:40
# @Author : Ray
# @File : test_app.py
# @Software: PyCharm
"""
测试HTTP接口（在仓库根目录运行）
"""
import unittest

from app import app
from specrig.services import serialization as ser
from specrig.services.generators import random_conjugate, sl2_generators, snu2_generators


class TestApi(unittest.TestCase):

    def setUp(self):
        app.config["TESTING"] = True
        self.client = app.test_client()

    def post(self, url, body):
        return self.client.post(url, json=body)

    def test_health(self):
        resp = self.client.get("/api/health")
        self.assertEqual(resp.status_code, 200)
        self.assertEqual(resp.get_json()["status"], "healthy")

    def test_generators(self):
        resp = self.post("/api/generators", {"family": "snu2", "n": 3, "nu": 0.5})
        self.assertEqual(resp.status_code, 200)
        self.assertEqual(resp.mimetype, "application/json")
        self.assertEqual(resp.get_json()["matrices"]["H"]["n"], 3)

        resp = self.post("/api/generators", {"family": "random-conjugate", "base_family": "sl2", "n": 2, "seed": 4})
        self.assertEqual(resp.get_json()["params"]["seed"], 4)

        resp = self.post("/api/generators", {"family": "onedim", "nu": 0.4, "c": [1.0, -2.0]})
        self.assertEqual(resp.get_json()["n"], 1)

    def test_det(self):
        body = {"tuple": ser.tuple_to_json(sl2_generators(3)), "pencil": "A1, A2, A3",
                "vars": ["x", "y", "z"], "homogeneous": "t"}
        resp = self.post("/api/det", body)
        self.assertEqual(resp.status_code, 200)
        doc = resp.get_json()
        self.assertEqual(doc["vars"], ["x", "y", "z", "t"])
        self.assertEqual(len(doc["terms"]), 3)

    def test_lines(self):
        body = {"tuple": ser.tuple_to_json(snu2_generators(4, 0.5)), "pencil": "A1, A2 A2^H"}
        doc = self.post("/api/lines", body).get_json()
        self.assertTrue(doc["certified"])
        self.assertEqual(sum(line["mult"] for line in doc["lines"]), 4)

        body["pencil"] = "A1"
        self.assertEqual(self.post("/api/lines", body).status_code, 422)

    def test_compare(self):
        t, _ = random_conjugate(snu2_generators(3, 0.5), "unitary", seed=6)
        body = {"tuple": ser.tuple_to_json(t), "family": "snu2", "nu": 0.5, "pencil": "A1, A2 A2^H; A1, A2 A3"}
        doc = self.post("/api/compare", body).get_json()
        self.assertTrue(doc["all_equal"])

        body = {"tuple": ser.tuple_to_json(t), "against": ser.tuple_to_json(sl2_generators(3)), "pencil": "A1"}
        self.assertFalse(self.post("/api/compare", body).get_json()["all_equal"])

    def test_rigidity(self):
        t, _ = random_conjugate(snu2_generators(4, -0.7), "unitary", seed=2)
        resp = self.post("/api/rigidity", {"tuple": ser.tuple_to_json(t), "nu": -0.7, "tol": 1e-8})
        self.assertEqual(resp.status_code, 200)
        doc = resp.get_json()
        self.assertEqual(doc["verdict"], "equivalent")
        self.assertEqual(doc["witness"]["n"], 4)

        resp = self.post("/api/rigidity", {"tuple": ser.tuple_to_json(sl2_generators(4)), "nu": 0.5})
        self.assertEqual(resp.status_code, 200)
        self.assertEqual(resp.get_json()["verdict"], "hypothesis_failed")

        resp = self.post("/api/rigidity", {"tuple": ser.tuple_to_json(t), "family": "su3"})
        self.assertEqual(resp.status_code, 422)

    def test_relations(self):
        doc = self.post("/api/relations", {"family": "snu2", "n": 4, "nu": 0.5, "orientation": "swapped"}).get_json()
        self.assertEqual(doc["orientation"], "swapped")
        self.assertLessEqual(max(doc["r1"], doc["r2"], doc["r3"]), 1e-10)

        resp = self.post("/api/relations", {"family": "snu2", "n": 4, "nu": 0.5, "orientation": "sideways"})
        self.assertEqual(resp.status_code, 422)

    def test_exceptional(self):
        doc = self.client.get("/api/exceptional/4").get_json()
        self.assertEqual(doc["n"], 4)
        self.assertEqual([(r["i"], r["j"]) for r in doc["roots"]], [(2, 3)])
        self.assertTrue(doc["corollary_ok"])
        self.assertEqual(self.client.get("/api/exceptional/1").status_code, 422)

    def test_errors(self):
        resp = self.client.post("/api/det", data="not json", content_type="text/plain")
        self.assertEqual(resp.status_code, 400)
        self.assertEqual(resp.get_json()["error"]["type"], "MalformedInputError")

        resp = self.post("/api/generators", {"n": 3})
        self.assertEqual(resp.status_code, 400)

        resp = self.post("/api/generators", {"family": "snu2", "n": 3, "nu": 2.0})
        self.assertEqual(resp.status_code, 422)

        resp = self.post("/api/det", {"tuple": ser.tuple_to_json(sl2_generators(2)), "pencil": "A1 ,B"})
        self.assertEqual(resp.status_code, 400)

        resp = self.post("/api/lines", {"tuple": ser.tuple_to_json(sl2_generators(2)), "pencil": "A1, A2",
                                        "tol": -1})
        self.assertEqual(resp.status_code, 422)

        self.assertEqual(self.client.get("/api/nothing").status_code, 404)
        self.assertEqual(self.client.get("/api/det").status_code, 405)


if __name__ == '__main__':
    unittest.main()
