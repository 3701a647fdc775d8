#!/usr/bin/env python
# -*- coding: utf-8 -*-
# @Time : 2025/10/8 09:32
# @Author : Ray
# @File : error_handlers.py
# @Software: PyCharm
"""
HTTP接口与命令行的统一错误处理
"""
import sys
from functools import wraps

from flask import jsonify

from specrig.errors.exceptions import SpecRigException
from specrig.utils.logger import logger


def api_error_handler(f):
    """
    一个装饰器，用于捕获API路由中的SpecRigException并返回格式化的JSON错误响应。
    """
    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except SpecRigException as e:
            logger.error(f"API Error - {e.__class__.__name__}: {e.message}")
            return jsonify(e.to_dict()), e.status_code
        except Exception as e:
            logger.opt(exception=True).critical(f"Unhandled Exception: {str(e)}")
            error_response = {
                "error": {"type": "InternalError", "message": "服务器发生了一个意外的错误。"}
            }
            return jsonify(error_response), 500
    return decorated_function


def cli_error_handler(f):
    """
    命令行版本：把SpecRigException打印到stderr并返回对应的退出码。
    """
    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except SpecRigException as e:
            logger.error(f"CLI Error - {e.__class__.__name__}: {e.message}")
            print(f"error: {e.message}", file=sys.stderr)
            return e.exit_code
        except Exception as e:
            logger.opt(exception=True).critical(f"Unhandled Exception: {str(e)}")
            print(f"error: {e}", file=sys.stderr)
            return 1
    return decorated_function


def register_error_handlers(app):
    """
    一个函数，用于在Flask app上注册通用的错误处理器。
    """
    @app.errorhandler(404)
    def not_found_error(error):
        return jsonify({"error": {"type": "NotFound", "message": "请求的资源未找到。"}}), 404

    @app.errorhandler(405)
    def method_not_allowed_error(error):
        return jsonify({"error": {"type": "MethodNotAllowed", "message": "该请求方法不允许。"}}), 405

    @app.errorhandler(SpecRigException)
    def specrig_error(error):
        return jsonify(error.to_dict()), error.status_code
