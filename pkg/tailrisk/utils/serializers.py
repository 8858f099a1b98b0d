#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import math

from datetime import date
from typing import Any

import numpy as np

from msgspec import json

from tailrisk.core.conf import settings


def _enc_hook(obj: Any) -> Any:
    """msgspec 无法直接编码的类型"""
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, date):
        return obj.isoformat()
    raise NotImplementedError(f'无法序列化类型 {type(obj)}')


def finite_or_none(value: Any) -> Any:
    """
    将 NaN / inf 转换为 None，JSON 不允许非有限浮点数

    :param value: 任意值
    :return:
    """
    if isinstance(value, (float, np.floating)) and not math.isfinite(value):
        return None
    return value


def clean_floats(content: Any) -> Any:
    """
    递归清理嵌套结构中的非有限浮点数

    :param content: 字典、列表或标量
    :return:
    """
    if isinstance(content, np.ndarray):
        return clean_floats(content.tolist())
    if isinstance(content, dict):
        return {str(k): clean_floats(v) for k, v in content.items()}
    if isinstance(content, (list, tuple)):
        return [clean_floats(v) for v in content]
    return finite_or_none(content)


def json_dumps(content: dict[str, Any]) -> bytes:
    """
    使用 msgspec 将结果序列化为确定性的 JSON，键按字典序排列并附带 schema_version

    :param content: 结果字典
    :return:
    """
    payload = {'schema_version': settings.OUTPUT_SCHEMA_VERSION, **clean_floats(content)}
    return json.format(json.encode(payload, enc_hook=_enc_hook, order='sorted'), indent=2)


def json_line(content: dict[str, Any]) -> str:
    """
    单行紧凑 JSON，用于标准错误输出

    :param content: 字典
    :return:
    """
    return json.encode(clean_floats(content), enc_hook=_enc_hook, order='sorted').decode()
