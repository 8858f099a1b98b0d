#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import dataclasses

from tailrisk.common.enums import TailType
from tailrisk.common.exception import errors


@dataclasses.dataclass(frozen=True)
class ShortfallValue:
    """经验缺口值，正值表示尾部平均损失"""

    value: float
    confidence: float
    tail_count: int

    def __post_init__(self) -> None:
        if self.tail_count < 1:
            raise errors.DegenerateTailError(msg=f'尾部样本数必须至少为 1，实际为 {self.tail_count}')


@dataclasses.dataclass(frozen=True)
class NNReport:
    """NN 统计量及其 bootstrap 置信区间"""

    nn: float
    ci_low: float
    ci_high: float
    tail: TailType
    confidence: float

    def __post_init__(self) -> None:
        if not self.ci_low <= self.nn <= self.ci_high:
            raise errors.ValidationError(msg=f'置信区间 [{self.ci_low}, {self.ci_high}] 不包含 NN={self.nn}')


@dataclasses.dataclass(frozen=True)
class NNComparison:
    """两个时期 NN 的比较，差值区间包含 0 时不拒绝持续性"""

    a: NNReport
    b: NNReport
    diff_low: float
    diff_high: float

    @property
    def difference(self) -> float:
        return self.a.nn - self.b.nn

    @property
    def persistent(self) -> bool:
        return self.diff_low <= 0.0 <= self.diff_high
