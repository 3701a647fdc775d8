#!/usr/bin/env python
# -*- coding: utf-8 -*-
# @Time : 2025/10/8 09:12
# @Author : Ray
# @File : __init__.py
# @Software: PyCharm
"""

"""
