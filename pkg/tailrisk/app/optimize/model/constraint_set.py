#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import dataclasses

from typing import Sequence

import numpy as np

from tailrisk.common.exception import errors

LinearConstraint = tuple[Sequence[float], float]


def _frozen(values, shape: tuple[int, ...]) -> np.ndarray:
    array = np.array(values, dtype=np.float64, copy=True).reshape(shape)
    array.setflags(write=False)
    return array


@dataclasses.dataclass(frozen=True)
class ConstraintSet:
    """
    权重上的线性约束：A_eq·w = b_eq，A_ub·w <= b_ub，lower <= w <= upper

    无界的一侧用 ±inf 表示
    """

    size: int
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray
    ub_matrix: np.ndarray
    ub_rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        n = self.size
        if n < 1:
            raise errors.ValidationError(msg=f'约束维度必须为正，实际为 {n}')
        eq_rhs = np.asarray(self.eq_rhs, dtype=np.float64).ravel()
        ub_rhs = np.asarray(self.ub_rhs, dtype=np.float64).ravel()
        try:
            object.__setattr__(self, 'eq_matrix', _frozen(self.eq_matrix, (eq_rhs.size, n)))
            object.__setattr__(self, 'ub_matrix', _frozen(self.ub_matrix, (ub_rhs.size, n)))
            object.__setattr__(self, 'lower', _frozen(self.lower, (n,)))
            object.__setattr__(self, 'upper', _frozen(self.upper, (n,)))
        except ValueError:
            raise errors.ValidationError(msg=f'约束系数向量长度必须为 {n}')
        object.__setattr__(self, 'eq_rhs', _frozen(eq_rhs, (eq_rhs.size,)))
        object.__setattr__(self, 'ub_rhs', _frozen(ub_rhs, (ub_rhs.size,)))
        for array in (self.eq_matrix, self.eq_rhs, self.ub_matrix, self.ub_rhs):
            if not np.isfinite(array).all():
                raise errors.ValidationError(msg='线性约束系数必须为有限值')
        if np.isnan(self.lower).any() or np.isnan(self.upper).any():
            raise errors.ValidationError(msg='权重上下界不能为 NaN')
        if np.any(self.lower > self.upper):
            i = int(np.argmax(self.lower > self.upper))
            raise errors.ValidationError(msg=f'第 {i} 个变量下界 {self.lower[i]} 大于上界 {self.upper[i]}')

    @classmethod
    def create(
        cls,
        size: int,
        *,
        equalities: Sequence[LinearConstraint] = (),
        inequalities: Sequence[LinearConstraint] = (),
        bounds: Sequence[tuple[float | None, float | None]] | None = None,
    ) -> 'ConstraintSet':
        """
        由 (a, b) 列表构造约束集

        :param size: 变量数 N
        :param equalities: a'w = b
        :param inequalities: a'w <= b
        :param bounds: 每个变量的 (lower, upper)，None 表示无界
        :return:
        """
        bounds = bounds if bounds is not None else [(None, None)] * size
        if len(bounds) != size:
            raise errors.ValidationError(msg=f'上下界数量 {len(bounds)} 与变量数 {size} 不一致')
        for a, _ in (*equalities, *inequalities):
            if len(a) != size:
                raise errors.ValidationError(msg=f'约束系数向量长度 {len(a)} 与变量数 {size} 不一致')
        return cls(
            size=size,
            eq_matrix=[list(a) for a, _ in equalities] or np.zeros((0, size)),
            eq_rhs=[b for _, b in equalities],
            ub_matrix=[list(a) for a, _ in inequalities] or np.zeros((0, size)),
            ub_rhs=[b for _, b in inequalities],
            lower=[-np.inf if lo is None else lo for lo, _ in bounds],
            upper=[np.inf if up is None else up for _, up in bounds],
        )

    @classmethod
    def full_investment(cls, size: int, *, long_only: bool = False) -> 'ConstraintSet':
        """
        权重和为 1，可选非负

        :param size: 变量数 N
        :param long_only: 是否只做多
        :return:
        """
        bounds = [(0.0, None)] * size if long_only else None
        return cls.create(size, equalities=[(np.ones(size), 1.0)], bounds=bounds)

    @property
    def equalities(self) -> list[tuple[np.ndarray, float]]:
        return [(self.eq_matrix[i], float(self.eq_rhs[i])) for i in range(self.eq_rhs.size)]

    @property
    def inequalities(self) -> list[tuple[np.ndarray, float]]:
        return [(self.ub_matrix[i], float(self.ub_rhs[i])) for i in range(self.ub_rhs.size)]

    @property
    def bounds(self) -> list[tuple[float | None, float | None]]:
        """scipy 风格的上下界，无界一侧为 None"""
        return [
            (None if np.isinf(lo) else float(lo), None if np.isinf(up) else float(up))
            for lo, up in zip(self.lower, self.upper)
        ]

    def qp_form(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """
        二次规划标准形 A·w = b，G·w <= h：上下界相等的变量转为等式，其余有限上下界并入不等式

        :return:
        """
        eye = np.eye(self.size)
        fixed = np.isfinite(self.lower) & (self.lower == self.upper)
        has_upper = np.isfinite(self.upper) & ~fixed
        has_lower = np.isfinite(self.lower) & ~fixed
        a = np.vstack([self.eq_matrix, eye[fixed]])
        b = np.concatenate([self.eq_rhs, self.lower[fixed]])
        g = np.vstack([self.ub_matrix, eye[has_upper], -eye[has_lower]])
        h = np.concatenate([self.ub_rhs, self.upper[has_upper], -self.lower[has_lower]])
        return a, b, g, h

    def tightened(
        self,
        *,
        equalities: Sequence[LinearConstraint] = (),
        inequalities: Sequence[LinearConstraint] = (),
        bounds: Sequence[tuple[float | None, float | None]] | None = None,
    ) -> 'ConstraintSet':
        """
        追加约束，上下界取交集

        :param equalities: 追加的等式
        :param inequalities: 追加的不等式
        :param bounds: 追加的上下界
        :return:
        """
        extra = ConstraintSet.create(self.size, equalities=equalities, inequalities=inequalities, bounds=bounds)
        return ConstraintSet(
            size=self.size,
            eq_matrix=np.vstack([self.eq_matrix, extra.eq_matrix]),
            eq_rhs=np.concatenate([self.eq_rhs, extra.eq_rhs]),
            ub_matrix=np.vstack([self.ub_matrix, extra.ub_matrix]),
            ub_rhs=np.concatenate([self.ub_rhs, extra.ub_rhs]),
            lower=np.maximum(self.lower, extra.lower),
            upper=np.minimum(self.upper, extra.upper),
        )

    def residual(self, weights: np.ndarray) -> float:
        """
        最大约束违反量

        :param weights: 权重
        :return:
        """
        weights = np.asarray(weights, dtype=np.float64)
        violations = [0.0]
        if self.eq_rhs.size:
            violations.append(float(np.max(np.abs(self.eq_matrix @ weights - self.eq_rhs))))
        if self.ub_rhs.size:
            violations.append(float(np.max(self.ub_matrix @ weights - self.ub_rhs)))
        violations.append(float(np.max(self.lower - weights)))
        violations.append(float(np.max(weights - self.upper)))
        return max(violations)
