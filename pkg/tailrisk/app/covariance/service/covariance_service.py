#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from datetime import date
from typing import Iterator

import numpy as np

from tailrisk.app.covariance.model.estimate import CovarianceEstimate
from tailrisk.app.data.model.panel import ReturnPanel
from tailrisk.app.data.service.panel_service import panel_service
from tailrisk.common.exception import errors
from tailrisk.common.log import log
from tailrisk.core.conf import settings


def _eigh(matrices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    try:
        return np.linalg.eigh(matrices)
    except np.linalg.LinAlgError as e:
        raise errors.NumericalError(msg=f'特征分解不收敛：{e}')


def _floors(values: np.ndarray, eigen_floor: float | None) -> np.ndarray:
    """每个矩阵的特征值下限，未指定时取最大特征值的相对比例"""
    if eigen_floor is not None:
        return np.full(values.shape[:-1], float(eigen_floor))
    return settings.COVARIANCE_EIGEN_FLOOR_RATIO * np.maximum(values[..., -1], 0.0)


class CovarianceService:
    """协方差估计与矩阵核函数服务类"""

    @staticmethod
    def ewma_weights(*, length: int, half_life_days: int) -> np.ndarray:
        """
        EWMA 权重（最早在前），最新观测权重为 1

        :param length: 观测数
        :param half_life_days: 半衰期
        :return:
        """
        ages = np.arange(length - 1, -1, -1, dtype=np.float64)
        return np.exp2(-ages / half_life_days)

    def ewma_covariance(self, *, panel: ReturnPanel, half_life_days: int, as_of: date) -> CovarianceEstimate:
        """
        零均值 EWMA 协方差，仅使用严格早于 as_of 的观测，权重按总和归一

        :param panel: 收益面板
        :param half_life_days: 半衰期
        :param as_of: 估计日
        :return:
        """
        if half_life_days < 1:
            raise errors.ValidationError(msg=f'半衰期必须为正整数，实际为 {half_life_days}')
        window = panel_service.slice_window(panel=panel, end_date=as_of)
        if window.length < settings.COVARIANCE_MIN_OBSERVATIONS:
            raise errors.EmptyWindowError(
                msg=f'{as_of} 之前只有 {window.length} 个观测，至少需要 {settings.COVARIANCE_MIN_OBSERVATIONS} 个'
            )
        weights = self.ewma_weights(length=window.length, half_life_days=half_life_days)
        returns = window.returns
        matrix = (returns * weights[:, None]).T @ returns / weights.sum()
        matrix = 0.5 * (matrix + matrix.T)
        return CovarianceEstimate(
            matrix=matrix,
            as_of=as_of,
            half_life_days=half_life_days,
            observation_count=window.length,
            names=panel.names,
        )

    @staticmethod
    def ewma_covariance_path(*, returns: np.ndarray, half_life_days: int, start: int) -> Iterator[np.ndarray]:
        """
        递推生成位置 t（start <= t < T）之前观测的 EWMA 协方差，与 ewma_covariance 逐日计算等价

        :param returns: T×N 收益矩阵
        :param half_life_days: 半衰期
        :param start: 第一个输出位置，至少为 2
        :return:
        """
        decay = np.exp2(-1.0 / half_life_days)
        n = returns.shape[1]
        total = np.zeros((n, n))
        weight = 0.0
        for t in range(returns.shape[0]):
            if t >= start:
                yield total / weight
            row = returns[t]
            total = decay * total + np.outer(row, row)
            weight = decay * weight + 1.0

    @staticmethod
    def stacked_power(matrices: np.ndarray, power: float, eigen_floor: float | None = None) -> np.ndarray:
        """
        批量计算对称矩阵的幂，特征值低于下限时替换为下限

        :param matrices: (..., N, N) 对称矩阵
        :param power: 幂次，0.5 或 -0.5
        :param eigen_floor: 绝对下限，为空时取 1e-12 倍最大特征值
        :return:
        """
        matrices = 0.5 * (matrices + np.swapaxes(matrices, -1, -2))
        values, vectors = _eigh(matrices)
        floors = _floors(values, eigen_floor)
        if power < 0 and np.any(floors <= 0):
            raise errors.NumericalError(msg='协方差矩阵为零矩阵，无法求逆平方根')
        floored = values < floors[..., None]
        if floored.any():
            log.debug(f'{int(floored.sum())} 个特征值低于下限被替换')
        values = np.maximum(values, floors[..., None])
        scaled = vectors * np.power(values, power)[..., None, :]
        result = scaled @ np.swapaxes(vectors, -1, -2)
        return 0.5 * (result + np.swapaxes(result, -1, -2))

    def matrix_sqrt(self, *, cov: CovarianceEstimate, eigen_floor: float | None = None) -> np.ndarray:
        """
        对称平方根 S，满足 S·S = Σ_floored

        :param cov: 协方差估计
        :param eigen_floor: 特征值下限
        :return:
        """
        if eigen_floor is not None and eigen_floor < 0:
            raise errors.ValidationError(msg=f'特征值下限不能为负，实际为 {eigen_floor}')
        return self.stacked_power(cov.matrix, 0.5, eigen_floor)

    def matrix_inv_sqrt(self, *, cov: CovarianceEstimate, eigen_floor: float | None = None) -> np.ndarray:
        """
        对称逆平方根 Q，满足 Q·Σ_floored·Q = I

        :param cov: 协方差估计
        :param eigen_floor: 特征值下限，必须为正
        :return:
        """
        if eigen_floor is not None and eigen_floor <= 0:
            raise errors.ValidationError(msg=f'求逆平方根时特征值下限必须为正，实际为 {eigen_floor}')
        return self.stacked_power(cov.matrix, -0.5, eigen_floor)


covariance_service: CovarianceService = CovarianceService()
