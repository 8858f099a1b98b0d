#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import math

import numpy as np

from scipy import stats

from tailrisk.app.risk.model.shortfall import ShortfallValue
from tailrisk.common.exception import errors


class ShortfallService:
    """缺口（期望损失）服务类"""

    @staticmethod
    def tail_count(*, length: int, p: float) -> int:
        """
        尾部样本数 K = floor(T(1-p))，先舍入到 9 位小数以消除浮点误差

        :param length: 样本数 T
        :param p: 置信水平
        :return:
        """
        if not 0 < p < 1:
            raise errors.ValidationError(msg=f'置信水平必须位于 (0, 1)，实际为 {p}')
        return math.floor(round(length * (1 - p), 9))

    def checked_tail_count(self, *, length: int, p: float) -> int:
        """
        尾部样本数，K = 0 时抛出异常

        :param length: 样本数 T
        :param p: 置信水平
        :return:
        """
        k = self.tail_count(length=length, p=p)
        if k < 1:
            raise errors.DegenerateTailError(msg=f'样本数 {length} 在置信水平 {p} 下尾部样本数为 0')
        return k

    def empirical_shortfall(self, *, returns: np.ndarray, p: float) -> ShortfallValue:
        """
        经验缺口：最小的 K 个收益的平均值取负

        :param returns: 收益样本
        :param p: 置信水平
        :return:
        """
        returns = np.asarray(returns, dtype=np.float64).ravel()
        k = self.checked_tail_count(length=returns.size, p=p)
        smallest = np.partition(returns, k - 1)[:k]
        return ShortfallValue(value=float(-np.sort(smallest).sum() / k), confidence=p, tail_count=k)

    def tail_indices(self, *, returns: np.ndarray, p: float) -> np.ndarray:
        """
        最小的 K 个收益所在位置（按收益升序，稳定排序）

        :param returns: 收益样本
        :param p: 置信水平
        :return:
        """
        returns = np.asarray(returns, dtype=np.float64).ravel()
        k = self.checked_tail_count(length=returns.size, p=p)
        return np.argsort(returns, kind='stable')[:k]

    def batch_shortfall(self, *, returns: np.ndarray, p: float) -> np.ndarray:
        """
        按行批量计算经验缺口

        :param returns: M×T 收益矩阵，每行一个样本
        :param p: 置信水平
        :return:
        """
        returns = np.atleast_2d(np.asarray(returns, dtype=np.float64))
        k = self.checked_tail_count(length=returns.shape[1], p=p)
        smallest = np.sort(np.partition(returns, k - 1, axis=1)[:, :k], axis=1)
        return -smallest.sum(axis=1) / k

    @staticmethod
    def normal_shortfall(*, sigma: float, p: float) -> float:
        """
        零均值正态分布的期望缺口 σ·φ(Φ⁻¹(p))/(1-p)

        :param sigma: 波动率
        :param p: 置信水平
        :return:
        """
        if not 0 < p < 1:
            raise errors.ValidationError(msg=f'置信水平必须位于 (0, 1)，实际为 {p}')
        if sigma < 0:
            raise errors.ValidationError(msg=f'波动率不能为负，实际为 {sigma}')
        return float(sigma * stats.norm.pdf(stats.norm.ppf(p)) / (1 - p))


shortfall_service: ShortfallService = ShortfallService()
