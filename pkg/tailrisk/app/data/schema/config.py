#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from pydantic import Field

from tailrisk.common.enums import RebalanceFrequency
from tailrisk.common.schema import Probability, SchemaBase, Seed
from tailrisk.core.conf import settings


class AnalysisConfig(SchemaBase):
    """分析参数"""

    confidence_levels: list[Probability] = Field(
        default_factory=lambda: list(settings.RISK_CONFIDENCE_LEVELS), min_length=1, description='置信水平'
    )
    half_life_days: int = Field(default=settings.COVARIANCE_HALF_LIFE_DAYS, ge=1, description='EWMA 半衰期（观测数）')
    rebalance_frequency: RebalanceFrequency = Field(default=RebalanceFrequency.monthly, description='调仓频率')
    eigen_floor: float | None = Field(
        default=None, ge=0, description='特征值下限（绝对值），为空或 0 时取最大特征值的相对比例'
    )
    seed: Seed = Field(default=0, description='随机种子')
    warmup_observations: int = Field(
        default=settings.SCENARIO_WARMUP_OBSERVATIONS, ge=2, description='预热观测数，不产生情景'
    )

    @property
    def floor(self) -> float | None:
        """核函数使用的特征值下限"""
        return self.eigen_floor or None
