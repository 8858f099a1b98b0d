#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from functools import lru_cache
from typing import Any, Literal

from pydantic import model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from tailrisk.core.path_conf import ENV_FILE


class Settings(BaseSettings):
    """全局配置"""

    model_config = SettingsConfigDict(
        env_file=ENV_FILE,
        env_file_encoding='utf-8',
        env_prefix='TAILRISK_',
        extra='ignore',
        case_sensitive=True,
    )

    # .env 环境
    ENVIRONMENT: Literal['dev', 'pro'] = 'dev'

    # 收益面板
    PANEL_DATE_COLUMN: str = 'date'
    PANEL_FLOAT_FORMAT: str = '%.17g'  # 17 位有效数字保证 CSV 往返无损

    # 协方差
    COVARIANCE_HALF_LIFE_DAYS: int = 21
    COVARIANCE_MIN_OBSERVATIONS: int = 2
    COVARIANCE_EIGEN_FLOOR_RATIO: float = 1e-12  # 相对最大特征值
    COVARIANCE_SYMMETRY_TOLERANCE: float = 1e-12
    COVARIANCE_PSD_TOLERANCE: float = 1e-10

    # 情景
    SCENARIO_WARMUP_OBSERVATIONS: int = 252

    # 风险
    RISK_CONFIDENCE_LEVELS: list[float] = [0.60, 0.90, 0.95, 0.99]
    RISK_PERIODS_PER_YEAR: int = 252
    RISK_BOOTSTRAP_REPLICATIONS: int = 1000
    RISK_BOOTSTRAP_MIN_REPLICATIONS: int = 100
    RISK_BOOTSTRAP_CI_LEVEL: float = 0.95
    RISK_REALIZED_SHORTFALL_CONFIDENCE: float = 0.95
    RISK_ROLLING_BETA_WINDOW: int = 504  # 两年日频数据

    # 优化
    OPTIMIZE_LP_METHOD: Literal['highs', 'highs-ds', 'highs-ipm'] = 'highs-ds'
    OPTIMIZE_LP_SOLVER_TOLERANCE: float = 1e-10
    OPTIMIZE_QP_SOLVER: str = 'CLARABEL'
    OPTIMIZE_QP_SOLVER_TOLERANCE: float = 1e-10
    OPTIMIZE_FEASIBILITY_TOLERANCE: float = 1e-7
    OPTIMIZE_OPTIMALITY_TOLERANCE: float = 1e-7
    OPTIMIZE_BRUTE_FORCE_MAX_ASSETS: int = 4
    OPTIMIZE_BRUTE_FORCE_CHUNK: int = 20_000

    # 估计误差
    ESTERROR_BASELINE_SAMPLES: int = 100_000

    # 回测
    BACKTEST_STYLE_BOUND: float = 2.0

    # 输出
    OUTPUT_SCHEMA_VERSION: str = '1.0'

    # 并发
    THREADS_DEFAULT: int = 1

    # 日志（运行 ID）
    TRACE_ID_LOG_DEFAULT_VALUE: str = '-'
    TRACE_ID_LOG_UUID_LENGTH: int = 8  # UUID 长度，必须小于等于 32

    # 日志（控制台）
    LOG_STD_LEVEL: str = 'INFO'
    LOG_STD_FORMAT: str = (
        '<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</> | <lvl>{level: <8}</> | <cyan>{extra[run_id]}</> | <lvl>{message}</>'
    )

    # 日志（文件）
    LOG_FILE_LEVEL: str = 'DEBUG'
    LOG_FILENAME: str = 'tailrisk.log'
    LOG_FILE_FORMAT: str = '{time:YYYY-MM-DD HH:mm:ss.SSS} | <lvl>{level: <8}</> | {extra[run_id]} | <lvl>{message}</>'

    @model_validator(mode='before')
    @classmethod
    def check_env(cls, values: Any) -> Any:
        """检查环境变量"""
        if values.get('ENVIRONMENT') == 'pro':
            values['LOG_STD_LEVEL'] = 'WARNING'

        return values


@lru_cache
def get_settings() -> Settings:
    """获取全局配置单例"""
    return Settings()


# 创建全局配置实例
settings = get_settings()
