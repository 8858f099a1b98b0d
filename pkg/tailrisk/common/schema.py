#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from typing import Annotated

from pydantic import BaseModel, ConfigDict, Field

# 概率型参数，开区间 (0, 1)
Probability = Annotated[float, Field(gt=0, lt=1)]

# 64 位无符号随机种子
Seed = Annotated[int, Field(ge=0, le=2**64 - 1)]


class SchemaBase(BaseModel):
    """基础模型配置"""

    model_config = ConfigDict(
        use_enum_values=True,
        extra='forbid',
        frozen=True,
    )
