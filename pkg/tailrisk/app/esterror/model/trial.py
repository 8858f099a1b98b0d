#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import dataclasses


@dataclasses.dataclass(frozen=True)
class TrialReport:
    """某 (样本长度, 置信水平) 单元上的估计误差统计"""

    n_assets: int
    sample_length: int
    confidence: float
    replications: int
    mean_risk_error: float
    mean_weight_error_deg: float
    boundary_angle_deg: float
    std_risk_error: float
    std_weight_error_deg: float
