#!/usr/bin/env python
# -*- coding: utf-8 -*-
# @Time : 2025/10/8 09:12
# @Author : Ray
# @File : __init__.py
# @Software: PyCharm
"""
specrig: 联合谱的行列式多项式计算与谱刚性验证
"""
__version__ = "0.1.0"
