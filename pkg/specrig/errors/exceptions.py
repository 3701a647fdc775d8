#!/usr/bin/env python
# -*- coding: utf-8 -*-
# @Time : 2025/10/8 09:20
# @Author : Ray
# @File : exceptions.py
# @Software: PyCharm
"""
异常管理
"""


class SpecRigException(Exception):
    """项目自定义异常的基类"""

    message = "计算过程中发生错误。"
    status_code = 400
    exit_code = 1

    def __init__(self, message=None, status_code=None, exit_code=None):
        super().__init__(message)
        if message is not None:
            self.message = message
        if status_code is not None:
            self.status_code = status_code
        if exit_code is not None:
            self.exit_code = exit_code

    def to_dict(self):
        return {"error": {"type": self.__class__.__name__, "message": self.message}}


class DimensionMismatchError(SpecRigException):
    """当矩阵维数不一致或不是方阵时引发"""

    def __init__(self, message="矩阵维数不匹配。"):
        super().__init__(message, status_code=422)


class NonFiniteValueError(SpecRigException):
    """当输入中出现NaN或Inf时引发"""

    def __init__(self, message="输入包含NaN或Inf。"):
        super().__init__(message, status_code=422)


class NotHermitianError(SpecRigException):
    """当矩阵在给定容差下不是Hermite矩阵时引发"""

    def __init__(self, message="矩阵不是Hermite矩阵。"):
        super().__init__(message, status_code=422)


class NotNormalError(SpecRigException):
    """当矩阵在给定容差下不是正规矩阵时引发"""

    def __init__(self, message="矩阵不是正规矩阵。"):
        super().__init__(message, status_code=422)


class NotUnitaryError(SpecRigException):
    """当见证矩阵不是酉矩阵时引发"""

    def __init__(self, message="矩阵不是酉矩阵。"):
        super().__init__(message, status_code=422)


class NotAnEigenvalueError(SpecRigException):
    """当给定的数不是矩阵的特征值时引发"""

    def __init__(self, message="给定的数不是该矩阵的特征值。"):
        super().__init__(message, status_code=422)


class ConvergenceError(SpecRigException):
    """当迭代算法在最大步数内未收敛时引发"""

    def __init__(self, message="迭代算法未收敛。"):
        super().__init__(message, status_code=500)


class VariableMismatchError(SpecRigException):
    """当两个多项式的变量表不一致时引发"""

    def __init__(self, message="多项式的变量列表不一致。"):
        super().__init__(message, status_code=422)


class InvalidLinearFormError(SpecRigException):
    """当线性型的变量系数全为零时引发"""

    def __init__(self, message="线性型的变量系数不能全为零。"):
        super().__init__(message, status_code=422)


class ParameterRangeError(SpecRigException):
    """当参数（ν、维数等）超出允许范围时引发"""

    def __init__(self, message="参数超出允许范围。"):
        super().__init__(message, status_code=422)


class IndexConstraintError(SpecRigException):
    """当下标不满足约束时引发"""

    def __init__(self, message="下标不满足约束条件。"):
        super().__init__(message, status_code=422)


class ConstraintViolationError(SpecRigException):
    """当构造参数违反代数约束（如 αγ=βδ=2）时引发"""

    def __init__(self, message="参数违反约束条件。"):
        super().__init__(message, status_code=422)


class MissingParameterError(SpecRigException):
    """当请求或调用缺少必要参数时引发"""

    def __init__(self, message="缺少必要的参数。"):
        super().__init__(message, status_code=400)


class PencilSyntaxError(SpecRigException):
    """当矩阵束表达式存在语法错误时引发"""

    def __init__(self, message="矩阵束表达式语法错误。", offset=None):
        if offset is not None:
            message = f"{message} (偏移量 {offset})"
        super().__init__(message, status_code=400)
        self.offset = offset


class UnknownAtomError(SpecRigException):
    """当矩阵束表达式中出现未知的矩阵名时引发"""

    def __init__(self, message="未知的矩阵名。", offset=None):
        if offset is not None:
            message = f"{message} (偏移量 {offset})"
        super().__init__(message, status_code=400)
        self.offset = offset


class UnsupportedPencilError(SpecRigException):
    """当矩阵束变量个数超过支持上限时引发"""

    def __init__(self, message="矩阵束最多支持4个变量。"):
        super().__init__(message, status_code=422)


class LineNotInSpectrumError(SpecRigException):
    """当给定直线不在联合谱中时引发"""

    def __init__(self, message="该直线不在联合谱中。"):
        super().__init__(message, status_code=422)


class MultiplicityError(SpecRigException):
    """当特征值重数不为1、谱压缩定理不适用时引发"""

    def __init__(self, message="特征值的重数必须为1。"):
        super().__init__(message, status_code=422)


class MalformedInputError(SpecRigException):
    """当输入文件无法解析或不符合模式时引发"""

    def __init__(self, message="输入文件格式错误。", path=None):
        if path is not None:
            message = f"{path}: {message}"
        super().__init__(message, status_code=400)
        self.path = path
