#!/usr/bin/env python
# -*- coding: utf-8 -*-
# @Time : 2025/10/12 09:48
# @Author : Ray
# @File : serialization.py
# @Software: PyCharm
"""
输入输出格式：矩阵、生成元三元组、多项式、直线分解与刚性报告的JSON编码，
以及CSV与rich表格输出。

复数一律写成 [re, im]；浮点数使用最短可往返表示。
"""
import csv
import io
import sys
from pathlib import Path
from typing import Iterable, Sequence

import orjson
from jsonschema import Draft202012Validator
from jsonschema.exceptions import best_match
from rich.console import Console
from rich.table import Table

from specrig.errors.exceptions import MalformedInputError, SpecRigException
from specrig.services.generators import CLI_FAMILY_NAMES, Family, GeneratorTuple
from specrig.services.matrix_core import ComplexMatrix, as_matrix
from specrig.services.polynomial import MultiPoly
from specrig.services.spectrum_service import LineArrangement

_PAIR = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

MATRIX_SCHEMA = {
    "type": "object",
    "required": ["n", "entries"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "entries": {"type": "array", "minItems": 1, "items": {"type": "array", "items": _PAIR}},
    },
}

TUPLE_SCHEMA = {
    "type": "object",
    "required": ["matrices"],
    "properties": {
        "family": {"type": "string"},
        "n": {"type": "integer", "minimum": 1},
        "nu": {"type": ["number", "null"]},
        "params": {"type": "object"},
        "matrices": {
            "type": "object",
            "required": ["H", "E", "F"],
            "properties": {"H": MATRIX_SCHEMA, "E": MATRIX_SCHEMA, "F": MATRIX_SCHEMA},
        },
    },
}

POLY_SCHEMA = {
    "type": "object",
    "required": ["vars", "terms"],
    "properties": {
        "vars": {"type": "array", "items": {"type": "string"}},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["exp", "re", "im"],
                "properties": {
                    "exp": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "re": {"type": "number"},
                    "im": {"type": "number"},
                },
            },
        },
    },
}


def _validate(doc, schema: dict, path=None) -> None:
    error = best_match(Draft202012Validator(schema).iter_errors(doc))
    if error is not None:
        where = "/".join(str(p) for p in error.absolute_path) or "<root>"
        raise MalformedInputError(f"{where}: {error.message}", path)


def complex_pair(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def matrix_to_json(m: ComplexMatrix) -> dict:
    m = as_matrix(m)
    return {"n": m.shape[0], "entries": [[complex_pair(z) for z in row] for row in m]}


def matrix_from_json(doc, path=None) -> ComplexMatrix:
    _validate(doc, MATRIX_SCHEMA, path)
    n, rows = doc["n"], doc["entries"]
    if len(rows) != n or any(len(row) != n for row in rows):
        lengths = [len(row) for row in rows]
        raise MalformedInputError(f"矩阵行长度不一致或与 n={n} 不符: {lengths}", path)
    try:
        return as_matrix([[complex(re, im) for re, im in row] for row in rows])
    except SpecRigException as e:
        raise MalformedInputError(e.message, path)


def tuple_to_json(t: GeneratorTuple) -> dict:
    return {
        "family": t.family.value,
        "n": t.n,
        "nu": t.nu,
        "params": t.params,
        "matrices": {name: matrix_to_json(m) for name, m in zip(("H", "E", "F"), t.matrices())},
    }


def tuple_from_json(doc, path=None) -> GeneratorTuple:
    _validate(doc, TUPLE_SCHEMA, path)
    raw_family = doc.get("family", Family.RANDOM_CONJUGATE.value)
    try:
        family = CLI_FAMILY_NAMES.get(raw_family) or Family(raw_family)
    except ValueError:
        raise MalformedInputError(f"未知的族名: {raw_family!r}", path)
    mats = [matrix_from_json(doc["matrices"][name], path) for name in ("H", "E", "F")]
    try:
        return GeneratorTuple(*mats, family=family, nu=doc.get("nu"), params=dict(doc.get("params", {})))
    except SpecRigException as e:
        raise MalformedInputError(e.message, path)


def poly_to_json(p: MultiPoly) -> dict:
    return {
        "vars": list(p.vars),
        "terms": [{"exp": list(e), "re": c.real, "im": c.imag} for e, c in p.sorted_terms()],
    }


def poly_from_json(doc, path=None) -> MultiPoly:
    _validate(doc, POLY_SCHEMA, path)
    try:
        return MultiPoly(doc["vars"], {tuple(t["exp"]): complex(t["re"], t["im"]) for t in doc["terms"]}, prune=0.0)
    except SpecRigException as e:
        raise MalformedInputError(e.message, path)


def arrangement_to_json(arrangement: LineArrangement, certified: bool) -> dict:
    return {
        "certified": certified,
        "lines": [{"coeffs": [complex_pair(c) for c in line.coeffs], "mult": line.mult}
                  for line in arrangement.lines],
    }


def report_to_json(report) -> dict:
    """RigidityReport → dict；见证矩阵只在 verdict = equivalent 时出现"""
    doc = {
        "verdict": report.verdict.value,
        "family": report.family,
        "n": report.n,
        "nu": report.nu,
        "residual": report.residual,
        "condition_residuals": report.condition_residuals,
        "diagnostics": [
            {"step": d.step, "code": d.code, "message": d.message,
             "entries": [{"i": i, "j": j, "value": v} for i, j, v in d.entries]}
            for d in report.diagnostics
        ],
    }
    if report.witness is not None:
        doc["witness"] = matrix_to_json(report.witness)
        doc["global_witness"] = matrix_to_json(report.global_witness)
    return doc


def dumps(doc) -> bytes:
    """排序键、两格缩进、末尾换行"""
    return orjson.dumps(doc, option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY) + b"\n"


def load_json_file(path) -> object:
    path = Path(path)
    try:
        return orjson.loads(path.read_bytes())
    except FileNotFoundError:
        raise MalformedInputError("文件不存在", str(path))
    except orjson.JSONDecodeError as e:
        raise MalformedInputError(f"JSON解析失败: {e}", str(path))


def load_tuple(path) -> GeneratorTuple:
    return tuple_from_json(load_json_file(path), str(path))


def load_poly(path) -> MultiPoly:
    return poly_from_json(load_json_file(path), str(path))


def to_csv(columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    return buffer.getvalue()


def render_table(title: str, columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    table = Table(title=title)
    for column in columns:
        table.add_column(column)
    for row in rows:
        table.add_row(*(f"{v:.12g}" if isinstance(v, float) else str(v) for v in row))
    console = Console(file=io.StringIO(), width=120, color_system=None)
    console.print(table)
    return console.file.getvalue()


def write_output(payload: bytes | str, output=None) -> None:
    """写到文件（UTF-8）或标准输出"""
    data = payload.encode("utf-8") if isinstance(payload, str) else payload
    if output is None or str(output) == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(output).write_bytes(data)

