#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import dataclasses

from typing import Any

import numpy as np

from tailrisk.app.risk.model.shortfall import ShortfallValue


@dataclasses.dataclass(frozen=True)
class Diagnostics:
    """求解诊断信息"""

    feasibility_residual: float
    optimality_gap: float
    iterations: int
    solver: str
    certificate: str


@dataclasses.dataclass(frozen=True)
class OptimizationResult:
    """优化结果，含风险分解"""

    names: tuple[str, ...]
    weights: np.ndarray
    objective_value: float
    diagnostics: Diagnostics
    shortfall: ShortfallValue | None = None
    variance: float | None = None
    variance_contributions: np.ndarray | None = None
    shortfall_contributions: np.ndarray | None = None

    def weight_map(self) -> dict[str, float]:
        return {name: float(w) for name, w in zip(self.names, self.weights)}

    def to_record(self) -> dict[str, Any]:
        """扁平化结果记录"""
        record: dict[str, Any] = {
            'weights': self.weight_map(),
            'objective_value': self.objective_value,
            'diagnostics': dataclasses.asdict(self.diagnostics),
            'shortfall': None,
            'variance': self.variance,
        }
        if self.shortfall is not None:
            record['shortfall'] = dataclasses.asdict(self.shortfall)
        contributions = {}
        if self.variance_contributions is not None:
            contributions['variance'] = dict(zip(self.names, self.variance_contributions.tolist()))
        if self.shortfall_contributions is not None:
            contributions['shortfall'] = dict(zip(self.names, self.shortfall_contributions.tolist()))
        record['risk_contributions'] = contributions
        return record
