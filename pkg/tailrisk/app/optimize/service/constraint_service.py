#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import os

from typing import Sequence

import numpy as np

from tailrisk.app.optimize.model.constraint_set import ConstraintSet
from tailrisk.app.optimize.schema.objective import ConstraintSpec, LinearConstraintSpec
from tailrisk.common.exception import errors
from tailrisk.core.conf import settings
from tailrisk.utils.toml_config import load_config


def _vector(names: Sequence[str], coefficients: dict[str, float]) -> np.ndarray:
    unknown = sorted(set(coefficients) - set(names))
    if unknown:
        raise errors.ValidationError(msg=f'约束引用了不存在的列：{", ".join(unknown)}')
    return np.array([coefficients.get(name, 0.0) for name in names])


def _linear(names: Sequence[str], specs: list[LinearConstraintSpec]) -> list[tuple[np.ndarray, float]]:
    return [(_vector(names, spec.coefficients), spec.rhs) for spec in specs]


class ConstraintService:
    """约束构建服务类"""

    @staticmethod
    def build_index_style_constraints(
        *, names: Sequence[str], index_column: str, style_bound: float | None = None
    ) -> ConstraintSet:
        """
        指数权重固定为 1（等式约束），其余风格暴露位于 [-bound, bound] 且总和为 0

        :param names: 列名
        :param index_column: 指数列
        :param style_bound: 风格暴露上下限
        :return:
        """
        names = list(names)
        bound = settings.BACKTEST_STYLE_BOUND if style_bound is None else style_bound
        if bound <= 0:
            raise errors.ValidationError(msg=f'风格暴露上下限必须为正，实际为 {bound}')
        if index_column not in names:
            raise errors.ValidationError(msg=f'收益面板不包含指数列 {index_column}')
        if len(names) < 2:
            raise errors.ValidationError(msg='除指数列外至少需要一个风格列')
        index = names.index(index_column)
        index_row = np.zeros(len(names))
        index_row[index] = 1.0
        style_row = np.ones(len(names))
        style_row[index] = 0.0
        bounds = [(None, None) if i == index else (-bound, bound) for i in range(len(names))]
        return ConstraintSet.create(
            len(names),
            equalities=[(index_row, 1.0), (style_row, 0.0)],
            bounds=bounds,
        )

    def build_constraints(self, *, names: Sequence[str], spec: ConstraintSpec) -> ConstraintSet:
        """
        由约束配置构建约束集

        :param names: 列名
        :param spec: 约束配置
        :return:
        """
        names = list(names)
        n = len(names)
        if spec.preset == 'index_style':
            if spec.index_column is None:
                raise errors.ValidationError(msg='index_style 预设需要指定 index_column')
            base = self.build_index_style_constraints(
                names=names, index_column=spec.index_column, style_bound=spec.style_bound
            )
        else:
            base = ConstraintSet.create(n)
        equalities = _linear(names, spec.equalities)
        if spec.full_investment:
            equalities.append((np.ones(n), 1.0))
        _vector(names, {**spec.lower, **spec.upper})
        bounds = []
        for name in names:
            lo = spec.lower.get(name)
            if spec.long_only:
                lo = 0.0 if lo is None else max(lo, 0.0)
            bounds.append((lo, spec.upper.get(name)))
        return base.tightened(equalities=equalities, inequalities=_linear(names, spec.inequalities), bounds=bounds)

    def load_constraints(self, *, names: Sequence[str], path: str | os.PathLike | None) -> ConstraintSet:
        """
        从 TOML 文件加载约束，未指定文件时为全额投资且只做多

        :param names: 列名
        :param path: 约束配置文件
        :return:
        """
        if path is None:
            spec = ConstraintSpec(full_investment=True, long_only=True)
        else:
            spec = load_config(ConstraintSpec, path)
        return self.build_constraints(names=names, spec=spec)


constraint_service: ConstraintService = ConstraintService()
