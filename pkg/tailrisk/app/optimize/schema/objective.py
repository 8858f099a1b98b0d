#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from typing import Literal

from pydantic import Field

from tailrisk.app.data.schema.config import AnalysisConfig
from tailrisk.common.enums import ProblemType
from tailrisk.common.schema import Probability, SchemaBase
from tailrisk.core.conf import settings


class ObjectiveSpec(SchemaBase):
    """组合目标：w'α - Λ·缺口 - λ·w'Σw"""

    alpha: list[float] | None = Field(default=None, description='预期收益向量，为空时取 0')
    shortfall_aversion: float = Field(default=1.0, ge=0, description='缺口厌恶系数 Λ')
    variance_aversion: float = Field(default=0.0, ge=0, description='方差厌恶系数 λ')
    confidence: Probability = Field(default=0.95, description='置信水平')


class LinearConstraintSpec(SchemaBase):
    """按列名给出的线性约束，未列出的列系数为 0"""

    coefficients: dict[str, float] = Field(min_length=1)
    rhs: float


class ConstraintSpec(SchemaBase):
    """约束配置"""

    preset: Literal['index_style'] | None = Field(default=None, description='预设约束集')
    index_column: str | None = Field(default=None, description='指数列，index_style 预设使用')
    style_bound: float = Field(default=settings.BACKTEST_STYLE_BOUND, gt=0, description='风格暴露上下限')
    full_investment: bool = False
    long_only: bool = False
    lower: dict[str, float] = Field(default_factory=dict, description='按列名的下界')
    upper: dict[str, float] = Field(default_factory=dict, description='按列名的上界')
    equalities: list[LinearConstraintSpec] = Field(default_factory=list)
    inequalities: list[LinearConstraintSpec] = Field(default_factory=list)


class OptimizeConfig(AnalysisConfig):
    """单日优化参数：分析参数 + 问题类型 + 目标"""

    problem: ProblemType = Field(default=ProblemType.shortfall, description='优化问题类型')
    objective: ObjectiveSpec = Field(default_factory=ObjectiveSpec, description='目标参数')
