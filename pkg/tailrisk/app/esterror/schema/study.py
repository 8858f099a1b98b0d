#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from typing import Annotated

from pydantic import Field

from tailrisk.common.schema import Probability, SchemaBase, Seed
from tailrisk.core.conf import settings


class EstimationStudyConfig(SchemaBase):
    """估计误差模拟参数"""

    n_assets: int = Field(default=10, ge=2, description='资产数')
    sample_lengths: list[Annotated[int, Field(ge=1)]] = Field(
        default_factory=lambda: [1000, 3000, 5000, 7000], min_length=1, description='模拟样本长度'
    )
    confidence_levels: list[Probability] = Field(
        default_factory=lambda: list(settings.RISK_CONFIDENCE_LEVELS), min_length=1
    )
    replications: int = Field(default=100, ge=1, description='每个单元的重复次数')
    seed: Seed = 0
    baseline_samples: int = Field(default=settings.ESTERROR_BASELINE_SAMPLES, ge=1, description='随机权重基准的抽样数')
