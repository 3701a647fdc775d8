#!/usr/bin/env python
# -*- coding: utf-8 -*-
# @Time : 2025/10/8 09:41
# @Author : Ray
# @File : config_loader.py
# @Software: PyCharm
"""
配置加载
"""
import os
import json
import math
from functools import lru_cache

from dotenv import load_dotenv

from specrig.errors.exceptions import ParameterRangeError
from specrig.utils.logger import logger

load_dotenv()

# 构建到config目录的绝对路径
_SERVICE_DIR = os.path.dirname(__file__)
CONFIG_DIR = os.path.abspath(os.path.join(_SERVICE_DIR, '..', 'config'))

# 配置文件缺失或损坏时使用的内置默认值
BUILTIN_DEFAULTS = {
    "tolerance": 1e-9,
    "prune_relative": 1e-14,
    "x2_prune_relative": 1e-10,
    "root_coincidence": 1e-10,
    "bisection_iterations": 60,
    "jacobi_max_sweeps": 50,
    "max_pencil_variables": 4,
}


@lru_cache(maxsize=1)
def load_numeric_config() -> dict:
    """
    加载数值默认配置，并应用环境变量 SPECRIG_TOL 的覆盖。
    """
    filepath = os.path.join(CONFIG_DIR, "numeric_config.json")
    logger.info(f"正在从 {filepath} 加载数值配置...")

    config = dict(BUILTIN_DEFAULTS)
    try:
        with open(filepath, 'r', encoding='utf-8') as f:
            config.update(json.load(f).get("numeric_defaults", {}))
    except FileNotFoundError:
        logger.error(f"数值配置文件未找到: {filepath}，使用内置默认值")
    except json.JSONDecodeError:
        logger.error(f"数值配置文件格式错误: {filepath}，使用内置默认值")

    env_tol = os.getenv("SPECRIG_TOL")
    if env_tol:
        try:
            tol = float(env_tol)
            if not tol > 0:
                raise ValueError(env_tol)
            config["tolerance"] = tol
            logger.info(f"使用环境变量 SPECRIG_TOL 覆盖默认容差: {tol}")
        except ValueError:
            logger.warning(f"环境变量 SPECRIG_TOL 的值无效: {env_tol!r}，已忽略")
    return config


def default_tolerance() -> float:
    """未显式给出容差时使用的默认值"""
    return float(load_numeric_config()["tolerance"])


def resolve_tol(tol: float | None) -> float:
    """显式容差必须是正的有限数"""
    if tol is None:
        return default_tolerance()
    try:
        value = float(tol)
    except (TypeError, ValueError):
        raise ParameterRangeError(f"容差无法解析: {tol!r}")
    if not math.isfinite(value) or value <= 0:
        raise ParameterRangeError(f"容差必须为正的有限数，实际为 {tol!r}。")
    return value
