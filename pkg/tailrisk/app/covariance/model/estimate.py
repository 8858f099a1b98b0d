#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import dataclasses

from datetime import date

import numpy as np

from tailrisk.common.exception import errors
from tailrisk.core.conf import settings


@dataclasses.dataclass(frozen=True)
class CovarianceEstimate:
    """
    对称半正定协方差矩阵及其估计元数据

    直接由矩阵构造时（如测试或外部输入）元数据可为空
    """

    matrix: np.ndarray
    as_of: date | None = None
    half_life_days: int | None = None
    observation_count: int | None = None
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=np.float64, copy=True)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
            raise errors.ValidationError(msg=f'协方差矩阵必须为非空方阵，实际形状 {matrix.shape}')
        if not np.isfinite(matrix).all():
            raise errors.ValidationError(msg='协方差矩阵存在非有限值')
        asymmetry = float(np.max(np.abs(matrix - matrix.T)))
        if asymmetry > settings.COVARIANCE_SYMMETRY_TOLERANCE:
            raise errors.ValidationError(msg=f'协方差矩阵不对称，最大偏差 {asymmetry:.3e}')
        try:
            smallest = float(np.linalg.eigvalsh(matrix)[0])
        except np.linalg.LinAlgError:
            raise errors.NumericalError(msg='协方差矩阵特征值计算不收敛')
        if smallest < -settings.COVARIANCE_PSD_TOLERANCE:
            raise errors.ValidationError(msg=f'协方差矩阵不是半正定矩阵，最小特征值 {smallest:.3e}')
        names = tuple(str(name) for name in self.names)
        if names and len(names) != matrix.shape[0]:
            raise errors.ValidationError(msg=f'列名数量 {len(names)} 与矩阵维度 {matrix.shape[0]} 不一致')
        matrix.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)
        object.__setattr__(self, 'names', names)

    @property
    def size(self) -> int:
        """维度 N"""
        return self.matrix.shape[0]

    def variance(self, weights: np.ndarray) -> float:
        """
        组合方差 w'Σw

        :param weights: 权重
        :return:
        """
        weights = np.asarray(weights, dtype=np.float64)
        return float(weights @ self.matrix @ weights)

    def volatility(self, weights: np.ndarray) -> float:
        """
        组合波动率

        :param weights: 权重
        :return:
        """
        return float(np.sqrt(max(self.variance(weights), 0.0)))
