#!/usr/bin/env python
# -*- coding: utf-8 -*-
# @Time : 2025/10/13 10:20
# @Author : Ray
# @File : app.py
# @Software: PyCharm
"""
flask应用主文件：把命令行的各项计算以JSON接口提供
"""
import os

from dotenv import load_dotenv
from flask import Flask, Response, request

load_dotenv()

from specrig.utils.logger import logger
from specrig.errors.exceptions import MalformedInputError, MissingParameterError, ParameterRangeError
from specrig.errors.error_handlers import api_error_handler, register_error_handlers
from specrig.services import serialization as ser
from specrig.services.config_loader import resolve_tol
from specrig.services.exceptional_set import corollary_check, exceptional_set
from specrig.services.generators import CLI_FAMILY_NAMES, Family, build_family, random_conjugate, relation_residuals
from specrig.services.pencil_parser import evaluate_pencil, parse_pencil
from specrig.services.rigidity_service import reconstruct_sl2, reconstruct_snu2
from specrig.services.spectrum_service import det_pencil, det_pencil_homogeneous, lines_of_pair, spectra_equal

# 初始化Flask应用
app = Flask(__name__)

# 请求体大小限制（矩阵JSON不会很大）
app.config['MAX_CONTENT_LENGTH'] = 4 * 1024 * 1024

# 注册错误处理器
register_error_handlers(app)


def _json_response(doc, status=200):
    return Response(ser.dumps(doc), status=status, mimetype="application/json")


def _request_body() -> dict:
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise MalformedInputError("请求体必须是JSON对象。")
    return data


def _require(data: dict, name: str):
    if data.get(name) is None:
        raise MissingParameterError(f"请求缺少 '{name}' 字段。")
    return data[name]


def _tuple_from(data: dict, name: str = "tuple"):
    return ser.tuple_from_json(_require(data, name), name)


def _complex_kwargs(data: dict) -> dict:
    kwargs = {}
    for key in ("c", "alpha", "beta", "gamma", "delta"):
        if data.get(key) is not None:
            value = data[key]
            try:
                kwargs[key] = complex(*value) if isinstance(value, list) else complex(value)
            except (TypeError, ValueError):
                raise ParameterRangeError(f"字段 '{key}' 无法解析为复数: {value!r}")
    return kwargs


# --- API 路由 ---
@app.route('/api/generators', methods=['POST'])
@api_error_handler
def create_generators():
    """构造生成元三元组"""
    data = _request_body()
    family = _require(data, "family")
    logger.info(f"收到生成元构造请求 - 族: {family}")
    kwargs = _complex_kwargs(data)
    if CLI_FAMILY_NAMES.get(family) is Family.RANDOM_CONJUGATE:
        base = build_family(data.get("base_family", "snu2"), data.get("n"), data.get("nu"), **kwargs)
        t, _ = random_conjugate(base, data.get("kind", "unitary"), data.get("seed"))
    else:
        t = build_family(family, data.get("n"), data.get("nu"), **kwargs)
    return _json_response(ser.tuple_to_json(t))


@app.route('/api/det', methods=['POST'])
@api_error_handler
def compute_det():
    """计算矩阵束的行列式多项式"""
    data = _request_body()
    t = _tuple_from(data)
    exprs = parse_pencil(_require(data, "pencil"))
    mats = evaluate_pencil(exprs, t.matrices())
    var_names = data.get("vars")
    if data.get("homogeneous"):
        poly = det_pencil_homogeneous(mats, var_names, data["homogeneous"])
    else:
        poly = det_pencil(mats, var_names)
    logger.info(f"成功计算行列式多项式: {len(poly.terms)} 项")
    return _json_response(ser.poly_to_json(poly))


@app.route('/api/lines', methods=['POST'])
@api_error_handler
def compute_lines():
    """两矩阵束的直线分解"""
    data = _request_body()
    t = _tuple_from(data)
    mats = evaluate_pencil(parse_pencil(_require(data, "pencil")), t.matrices())
    if len(mats) != 2:
        raise ParameterRangeError("直线分解需要两个位置的束。")
    arrangement, certified = lines_of_pair(mats[0], mats[1], resolve_tol(data.get("tol")))
    return _json_response(ser.arrangement_to_json(arrangement, certified))


@app.route('/api/compare', methods=['POST'])
@api_error_handler
def compare_spectra():
    """逐束比较两组矩阵的联合谱"""
    data = _request_body()
    first = _tuple_from(data)
    if data.get("against") is not None:
        second = _tuple_from(data, "against")
    else:
        second = build_family(_require(data, "family"), data.get("n") or first.n, data.get("nu"))
    results = spectra_equal(first.matrices(), second.matrices(), _require(data, "pencil"),
                            resolve_tol(data.get("tol")))
    return _json_response({
        "pencils": [{"pencil": r.label, "equal": r.equal, "max_diff": r.max_diff} for r in results],
        "all_equal": all(r.equal for r in results),
    })


@app.route('/api/rigidity', methods=['POST'])
@api_error_handler
def verify_rigidity():
    """验证刚性假设并重建见证"""
    data = _request_body()
    t = _tuple_from(data)
    family = data.get("family", "snu2")
    n = data.get("n") or t.n
    tol = resolve_tol(data.get("tol"))
    assume = bool(data.get("assume_hypotheses", False))
    logger.info(f"收到刚性验证请求 - 族: {family}, n={n}")
    if family == "snu2":
        report = reconstruct_snu2(t.matrices(), n, _require(data, "nu"), tol, assume)
    elif family == "sl2":
        report = reconstruct_sl2(t.matrices(), n, tol, assume)
    else:
        raise ParameterRangeError(f"rigidity 只支持 snu2 / sl2，实际为 {family}。")
    return _json_response(ser.report_to_json(report))


@app.route('/api/relations', methods=['POST'])
@api_error_handler
def check_relations():
    """对易关系残差"""
    data = _request_body()
    t = build_family(_require(data, "family"), data.get("n"), data.get("nu"), **_complex_kwargs(data))
    residual = relation_residuals(t, data.get("orientation", "standard"))
    return _json_response({"family": t.family.value, "orientation": residual.orientation.value,
                           "r1": residual.r1, "r2": residual.r2, "r3": residual.r3})


@app.route('/api/exceptional/<int:n>', methods=['GET'])
@api_error_handler
def get_exceptional_set(n):
    """例外参数集"""
    s = exceptional_set(n)
    return _json_response({
        "n": n,
        "roots": [{"i": r.i, "j": r.j, "z": r.z, "nu": r.nu} for r in s.roots],
        "set": s.values(),
        "corollary_ok": corollary_check(n).ok,
    })


# --- 健康检查端点 ---
@app.route('/api/health', methods=['GET'])
def health_check():
    """健康检查端点，用于监控服务状态"""
    return _json_response({
        "status": "healthy",
        "service": "SpecRig API"
    })


# --- 启动应用 ---
if __name__ == '__main__':
    logger.info("SpecRig服务启动...")
    app.run(debug=False, port=int(os.getenv("SPECRIG_PORT", "5123")), host='0.0.0.0')
