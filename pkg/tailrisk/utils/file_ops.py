#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import os

from pathlib import Path
from typing import Any

import pandas as pd

from tailrisk.common.exception import errors
from tailrisk.common.log import log
from tailrisk.core.conf import settings
from tailrisk.utils.serializers import json_dumps


def prepare_output_dir(out_dir: str | os.PathLike) -> Path:
    """
    创建并校验输出目录

    :param out_dir: 输出目录
    :return:
    """
    path = Path(out_dir).resolve()
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise errors.ValidationError(msg=f'无法创建输出目录 {path}：{e}')
    if not os.access(path, os.W_OK):
        raise errors.ValidationError(msg=f'输出目录不可写：{path}')
    return path


def output_path(out_dir: Path, filename: str) -> Path:
    """
    构建输出文件路径，禁止写出输出目录之外

    :param out_dir: 输出目录
    :param filename: 文件名
    :return:
    """
    target = (out_dir / filename).resolve()
    if target.parent != out_dir.resolve():
        raise errors.ValidationError(msg=f'非法输出文件名：{filename}')
    return target


def write_json(out_dir: Path, filename: str, content: dict[str, Any]) -> Path:
    """
    写入 JSON 结果文件

    :param out_dir: 输出目录
    :param filename: 文件名
    :param content: 结果字典
    :return:
    """
    target = output_path(out_dir, filename)
    target.write_bytes(json_dumps(content))
    log.debug(f'写入 {target}')
    return target


def write_frame(out_dir: Path, filename: str, frame: pd.DataFrame, *, index_label: str | None = None) -> Path:
    """
    写入 CSV 结果文件

    :param out_dir: 输出目录
    :param filename: 文件名
    :param frame: 数据表
    :param index_label: 索引列名
    :return:
    """
    target = output_path(out_dir, filename)
    frame.to_csv(target, float_format=settings.PANEL_FLOAT_FORMAT, index_label=index_label, lineterminator='\n')
    log.debug(f'写入 {target}')
    return target
