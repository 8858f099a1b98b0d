#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import dataclasses

from datetime import date
from typing import Sequence

import numpy as np
import pandas as pd

from tailrisk.common.exception import errors


def _as_date(value) -> date:
    if type(value) is date:
        return value
    return pd.Timestamp(value).date()


def _frozen_array(values: np.ndarray) -> np.ndarray:
    array = np.array(values, dtype=np.float64, copy=True)
    array.setflags(write=False)
    return array


@dataclasses.dataclass(frozen=True)
class ReturnPanel:
    """
    带日期的 T×N 简单收益面板

    构造即校验：日期严格递增、列名唯一非空、不允许 NaN / inf
    """

    dates: tuple[date, ...]
    names: tuple[str, ...]
    returns: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, 'dates', tuple(_as_date(d) for d in self.dates))
        object.__setattr__(self, 'names', tuple(str(name) for name in self.names))
        returns = np.asarray(self.returns, dtype=np.float64)
        if returns.ndim == 1:
            returns = returns.reshape(-1, 1)
        if returns.ndim != 2:
            raise errors.ValidationError(msg='收益矩阵必须为二维')
        t, n = returns.shape
        if t < 1 or n < 1:
            raise errors.ValidationError(msg=f'收益面板至少需要 1 行 1 列，实际为 {t}×{n}')
        if len(self.dates) != t:
            raise errors.ValidationError(msg=f'日期数量 {len(self.dates)} 与收益行数 {t} 不一致')
        if len(self.names) != n:
            raise errors.ValidationError(msg=f'列名数量 {len(self.names)} 与收益列数 {n} 不一致')
        if any(not name for name in self.names):
            raise errors.ValidationError(msg='列名不能为空')
        if len(set(self.names)) != n:
            duplicated = sorted({name for name in self.names if self.names.count(name) > 1})
            raise errors.ValidationError(msg=f'列名重复：{", ".join(duplicated)}')
        for i in range(1, t):
            if not self.dates[i] > self.dates[i - 1]:
                raise errors.ValidationError(
                    msg=f'日期必须严格递增：第 {i + 1} 行 {self.dates[i]} 不晚于 {self.dates[i - 1]}'
                )
        if not np.isfinite(returns).all():
            row, col = np.argwhere(~np.isfinite(returns))[0]
            raise errors.ValidationError(msg=f'收益存在缺失或非有限值：日期 {self.dates[row]}，列 {self.names[col]}')
        object.__setattr__(self, 'returns', _frozen_array(returns))

    @property
    def length(self) -> int:
        """观测数 T"""
        return self.returns.shape[0]

    @property
    def width(self) -> int:
        """列数 N"""
        return self.returns.shape[1]

    def column_index(self, name: str) -> int:
        """
        获取列位置

        :param name: 列名
        :return:
        """
        try:
            return self.names.index(name)
        except ValueError:
            raise errors.ValidationError(msg=f'收益面板不包含列 {name}')

    def rows(self, start: int, stop: int) -> 'ReturnPanel':
        """
        截取连续行

        :param start: 起始行（含）
        :param stop: 结束行（不含）
        :return:
        """
        return ReturnPanel(dates=self.dates[start:stop], names=self.names, returns=self.returns[start:stop])

    def select(self, names: Sequence[str]) -> 'ReturnPanel':
        """
        按列名选取并重排列

        :param names: 列名
        :return:
        """
        idx = [self.column_index(name) for name in names]
        return ReturnPanel(dates=self.dates, names=tuple(names), returns=self.returns[:, idx])

    def scale(self, factor: float) -> 'ReturnPanel':
        """
        整体缩放收益

        :param factor: 缩放系数
        :return:
        """
        return ReturnPanel(dates=self.dates, names=self.names, returns=self.returns * factor)

    def to_frame(self) -> pd.DataFrame:
        """转换为以日期为索引的 DataFrame"""
        return pd.DataFrame(self.returns, index=pd.Index(self.dates, name='date'), columns=list(self.names))
