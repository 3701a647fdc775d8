#!/usr/bin/env python
# -*- coding: utf-8 -*-
# @Time : 2025/10/12 17:40
# @Author : Ray
# @File : __main__.py
# @Software: PyCharm
import sys

from specrig.cli import main

sys.exit(main())
