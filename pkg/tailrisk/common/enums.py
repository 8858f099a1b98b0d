#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from enum import Enum


class StrEnum(str, Enum):
    """字符串枚举基类"""

    pass


class RebalanceFrequency(StrEnum):
    """调仓频率"""

    daily = 'daily'
    weekly = 'weekly'
    monthly = 'monthly'
    quarterly = 'quarterly'


class TailType(StrEnum):
    """收益分布尾部"""

    loss = 'loss'
    gain = 'gain'


class ProblemType(StrEnum):
    """优化问题类型"""

    shortfall = 'shortfall'
    variance = 'variance'
    combined = 'combined'


class DistributionType(StrEnum):
    """模拟收益分布"""

    normal = 'normal'
    t = 't'
    skewed = 'skewed'


class StrategyKind(StrEnum):
    """回测策略类型"""

    index = 'index'
    minvar = 'minvar'
    minsf = 'xsf'
    active = 'active'
    index_plus_active = 'index_plus_active'
