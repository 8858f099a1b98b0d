#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from enum import Enum


class CustomCodeBase(Enum):
    """自定义状态码基类"""

    @property
    def code(self) -> int:
        """获取状态码"""
        return self.value[0]

    @property
    def category(self) -> str:
        """获取错误类别"""
        return self.value[1]


class ExitCode(CustomCodeBase):
    """命令行退出码"""

    SUCCESS = (0, 'success')
    INPUT = (2, 'input')
    INFEASIBLE = (3, 'infeasible')
    NUMERICAL = (4, 'numerical')
