#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import os

from typing import Any, TypeVar

import rtoml

from pydantic import BaseModel
from pydantic import ValidationError as PydanticValidationError

from tailrisk.common.exception import errors

M = TypeVar('M', bound=BaseModel)


def load_toml(path: str | os.PathLike) -> dict[str, Any]:
    """
    读取 TOML 配置文件

    :param path: 文件路径
    :return:
    """
    if not os.path.exists(path):
        raise errors.ParseError(msg=f'配置文件不存在：{path}')
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return rtoml.load(f)
    except rtoml.TomlParsingError as e:
        raise errors.ParseError(msg=f'配置文件 {path} 解析失败：{e}')


def validate_config(schema: type[M], values: dict[str, Any]) -> M:
    """
    校验配置，将 pydantic 校验错误转换为输入错误

    :param schema: 配置模型
    :param values: 配置值
    :return:
    """
    try:
        return schema.model_validate(values)
    except PydanticValidationError as e:
        details = '; '.join(f'{".".join(str(p) for p in err["loc"])}: {err["msg"]}' for err in e.errors())
        raise errors.ValidationError(msg=f'{schema.__name__} 配置非法：{details}')


def _merge(values: dict[str, Any], overrides: dict[str, Any]) -> dict[str, Any]:
    """覆盖项逐键合并，嵌套表递归合并，None 表示不覆盖"""
    merged = dict(values)
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, dict):
            current = merged.get(key)
            merged[key] = _merge(current if isinstance(current, dict) else {}, value)
        else:
            merged[key] = value
    return merged


def load_config(schema: type[M], path: str | os.PathLike | None, overrides: dict[str, Any] | None = None) -> M:
    """
    加载配置文件并应用命令行覆盖项（值为 None 的覆盖项被忽略，嵌套表逐键合并）

    :param schema: 配置模型
    :param path: 配置文件路径，为空时使用默认值
    :param overrides: 覆盖项
    :return:
    """
    values = _merge(load_toml(path) if path else {}, overrides or {})
    return validate_config(schema, values)
