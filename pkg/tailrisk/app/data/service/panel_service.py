#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import bisect
import os

from datetime import date
from typing import Sequence

import numpy as np
import pandas as pd

from tailrisk.app.data.model.panel import ReturnPanel
from tailrisk.app.data.schema.config import AnalysisConfig
from tailrisk.common.exception import errors
from tailrisk.common.log import log
from tailrisk.core.conf import settings
from tailrisk.utils.toml_config import load_config


def _parse_column(cells: Sequence[str], name: str) -> np.ndarray:
    """逐列解析数值，失败时定位到具体单元格"""
    try:
        return np.array(cells, dtype=np.float64)
    except ValueError:
        pass
    for i, cell in enumerate(cells):
        # 表头为第 1 行，数据从第 2 行开始
        line = i + 2
        if not cell:
            raise errors.ParseError(msg=f'第 {line} 行列 {name} 为空', data={'row': line, 'column': name})
        try:
            float(cell)
        except ValueError:
            raise errors.ParseError(
                msg=f'第 {line} 行列 {name} 无法解析为数值：{cell!r}', data={'row': line, 'column': name}
            )
    raise errors.ParseError(msg=f'列 {name} 解析失败', data={'column': name})


def _read_cells(path: str | os.PathLike) -> pd.DataFrame:
    """按字符串读取全部单元格，表头作为第一行保留，避免 pandas 改写重复列名"""
    try:
        return pd.read_csv(
            path,
            header=None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=True,
            encoding='utf-8',
        )
    except UnicodeDecodeError as e:
        raise errors.ParseError(msg=f'面板文件 {path} 不是有效的 UTF-8：第 {e.start} 字节', data={'offset': e.start})
    except pd.errors.EmptyDataError:
        raise errors.ParseError(msg=f'面板文件为空：{path}')
    except pd.errors.ParserError as e:
        raise errors.ParseError(msg=f'面板文件 {path} 格式错误：{e}')


class PanelService:
    """收益面板服务类"""

    @staticmethod
    def load_panel(*, path: str | os.PathLike) -> ReturnPanel:
        """
        加载 CSV 收益面板，表头为 date,<name1>,...,<nameN>

        :param path: 文件路径
        :return:
        """
        if not os.path.isfile(path):
            raise errors.ParseError(msg=f'面板文件不存在：{path}')
        cells = _read_cells(path)
        header = [str(name).strip() for name in cells.iloc[0]]
        if len(header) < 2:
            raise errors.ParseError(msg='表头至少需要日期列和一个收益列', data={'row': 1})
        names = header[1:]
        body = cells.iloc[1:]
        if body.empty:
            raise errors.ValidationError(msg='面板没有数据行')

        # 字段少于表头的行由 pandas 补为缺失值
        short = body.isna().to_numpy()
        if short.any():
            i, j = np.argwhere(short)[0]
            line = int(i) + 2
            raise errors.ParseError(
                msg=f'第 {line} 行缺少列 {header[j]} 的字段', data={'row': line, 'column': header[j]}
            )
        body = body.apply(lambda column: column.str.strip())

        dates: list[date] = []
        for i, cell in enumerate(body.iloc[:, 0]):
            line = i + 2
            try:
                dates.append(date.fromisoformat(cell))
            except ValueError:
                raise errors.ParseError(msg=f'第 {line} 行日期无法解析：{cell!r}', data={'row': line, 'column': header[0]})

        columns = [_parse_column(body.iloc[:, j + 1].tolist(), name) for j, name in enumerate(names)]
        panel = ReturnPanel(dates=tuple(dates), names=tuple(names), returns=np.column_stack(columns))
        log.info(f'加载收益面板 {path}：T={panel.length}, N={panel.width}')
        return panel

    @staticmethod
    def write_panel(*, panel: ReturnPanel, path: str | os.PathLike) -> None:
        """
        写出 CSV 收益面板

        :param panel: 收益面板
        :param path: 文件路径
        :return:
        """
        frame = panel.to_frame()
        frame.index = [d.isoformat() for d in panel.dates]
        frame.to_csv(
            path,
            float_format=settings.PANEL_FLOAT_FORMAT,
            index_label=settings.PANEL_DATE_COLUMN,
            lineterminator='\n',
        )

    @staticmethod
    def slice_window(*, panel: ReturnPanel, end_date: date, max_length: int | None = None) -> ReturnPanel:
        """
        截取分析日之前（严格早于）的扩展窗口

        :param panel: 收益面板
        :param end_date: 分析日
        :param max_length: 最多保留的最近观测数
        :return:
        """
        if max_length is not None and max_length < 1:
            raise errors.ValidationError(msg=f'max_length 必须为正整数，实际为 {max_length}')
        stop = bisect.bisect_left(panel.dates, end_date)
        if stop == 0:
            raise errors.EmptyWindowError(msg=f'{end_date} 之前没有可用观测')
        start = 0 if max_length is None else max(0, stop - max_length)
        return panel.rows(start, stop)

    @staticmethod
    def slice_period(*, panel: ReturnPanel, start: date, end: date) -> ReturnPanel:
        """
        截取闭区间 [start, end] 内的观测

        :param panel: 收益面板
        :param start: 起始日期
        :param end: 结束日期
        :return:
        """
        first = bisect.bisect_left(panel.dates, start)
        stop = bisect.bisect_right(panel.dates, end)
        if first >= stop:
            raise errors.EmptyWindowError(msg=f'[{start}, {end}] 内没有可用观测')
        return panel.rows(first, stop)

    @staticmethod
    def count_before(*, panel: ReturnPanel, end_date: date) -> int:
        """
        统计严格早于指定日期的观测数

        :param panel: 收益面板
        :param end_date: 日期
        :return:
        """
        return bisect.bisect_left(panel.dates, end_date)

    @staticmethod
    def load_analysis_config(*, path: str | os.PathLike | None, **overrides) -> AnalysisConfig:
        """
        加载分析参数

        :param path: TOML 配置文件路径
        :param overrides: 覆盖项
        :return:
        """
        return load_config(AnalysisConfig, path, overrides)

    @staticmethod
    def business_dates(*, start: date, length: int) -> tuple[date, ...]:
        """
        生成工作日日期序列，仅供模拟面板使用

        :param start: 起始日期
        :param length: 日期数
        :return:
        """
        return tuple(d.date() for d in pd.bdate_range(start=start, periods=length))


panel_service: PanelService = PanelService()
