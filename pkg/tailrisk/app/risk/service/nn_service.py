#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import itertools

from typing import Sequence

import numpy as np

from tailrisk.app.data.model.panel import ReturnPanel
from tailrisk.app.risk.model.shortfall import NNComparison, NNReport
from tailrisk.app.risk.schema.nn import NNRow
from tailrisk.app.risk.service.shortfall_service import shortfall_service
from tailrisk.common.enums import TailType
from tailrisk.common.exception import errors
from tailrisk.common.log import log
from tailrisk.core.conf import settings
from tailrisk.utils.parallel import child_rng, ordered_map


def _oriented(sample: np.ndarray, tail: TailType) -> np.ndarray:
    sample = np.asarray(sample, dtype=np.float64).ravel()
    return -sample if TailType(tail) == TailType.gain else sample


def _percentile_ci(values: np.ndarray) -> tuple[float, float]:
    alpha = (1 - settings.RISK_BOOTSTRAP_CI_LEVEL) / 2 * 100
    low, high = np.percentile(values, [alpha, 100 - alpha])
    return float(low), float(high)


class NNService:
    """非正态性（NN）统计服务类"""

    @staticmethod
    def nn_statistic(*, sample: np.ndarray, p: float, tail: TailType, sigma_matched: float) -> float:
        """
        NN = 经验缺口 / 匹配波动率下的正态缺口 - 1，收益尾部先取负再计算

        :param sample: 样本
        :param p: 置信水平
        :param tail: 尾部
        :param sigma_matched: 匹配的 EWMA 波动率
        :return:
        """
        if sigma_matched <= 0:
            raise errors.ValidationError(msg=f'匹配波动率必须为正，实际为 {sigma_matched}')
        empirical = shortfall_service.empirical_shortfall(returns=_oriented(sample, tail), p=p)
        normal = shortfall_service.normal_shortfall(sigma=sigma_matched, p=p)
        return empirical.value / normal - 1

    def nn_report(self, *, sample: np.ndarray, p: float, tail: TailType, sigma_matched: float = 1.0) -> NNReport:
        """
        不做 bootstrap 的 NN 报告，置信区间退化为点值

        :param sample: 样本
        :param p: 置信水平
        :param tail: 尾部
        :param sigma_matched: 匹配波动率
        :return:
        """
        nn = self.nn_statistic(sample=sample, p=p, tail=tail, sigma_matched=sigma_matched)
        return NNReport(nn=nn, ci_low=nn, ci_high=nn, tail=TailType(tail), confidence=p)

    def bootstrap_nn_ci(
        self,
        *,
        sample_a: np.ndarray,
        sample_b: np.ndarray,
        p: float,
        tail: TailType,
        replications: int,
        seed: int,
        sigma_a: float = 1.0,
        sigma_b: float = 1.0,
        key: Sequence[int] = (),
        threads: int = 1,
    ) -> NNComparison:
        """
        对两个样本分别有放回重抽样，给出各自 NN 与差值的百分位置信区间

        :param sample_a: 样本 a
        :param sample_b: 样本 b
        :param p: 置信水平
        :param tail: 尾部
        :param replications: 重抽样次数
        :param seed: 主种子
        :param sigma_a: 样本 a 的匹配波动率
        :param sigma_b: 样本 b 的匹配波动率
        :param key: 附加的随机流编号，用于区分批量调用
        :param threads: 线程数
        :return:
        """
        if replications < settings.RISK_BOOTSTRAP_MIN_REPLICATIONS:
            raise errors.ValidationError(
                msg=f'重抽样次数至少为 {settings.RISK_BOOTSTRAP_MIN_REPLICATIONS}，实际为 {replications}'
            )
        a = _oriented(sample_a, tail)
        b = _oriented(sample_b, tail)
        shortfall_service.checked_tail_count(length=a.size, p=p)
        shortfall_service.checked_tail_count(length=b.size, p=p)
        normal_a = shortfall_service.normal_shortfall(sigma=sigma_a, p=p)
        normal_b = shortfall_service.normal_shortfall(sigma=sigma_b, p=p)

        def replicate(r: int) -> tuple[float, float]:
            idx_a = child_rng(seed, *key, 0, r).integers(0, a.size, a.size)
            idx_b = child_rng(seed, *key, 1, r).integers(0, b.size, b.size)
            sf_a = shortfall_service.empirical_shortfall(returns=a[idx_a], p=p).value
            sf_b = shortfall_service.empirical_shortfall(returns=b[idx_b], p=p).value
            return sf_a / normal_a - 1, sf_b / normal_b - 1

        draws = np.array(ordered_map(replicate, range(replications), threads=threads))
        reports = []
        for j, (sample, sigma) in enumerate(((sample_a, sigma_a), (sample_b, sigma_b))):
            nn = self.nn_statistic(sample=sample, p=p, tail=tail, sigma_matched=sigma)
            low, high = _percentile_ci(draws[:, j])
            reports.append(NNReport(nn=nn, ci_low=min(low, nn), ci_high=max(high, nn), tail=TailType(tail), confidence=p))
        diff_low, diff_high = _percentile_ci(draws[:, 0] - draws[:, 1])
        return NNComparison(a=reports[0], b=reports[1], diff_low=diff_low, diff_high=diff_high)

    def nn_table(
        self,
        *,
        history_a: ReturnPanel,
        history_b: ReturnPanel,
        confidences: Sequence[float],
        tails: Sequence[TailType],
        replications: int,
        seed: int,
        threads: int = 1,
    ) -> list[NNRow]:
        """
        两个时期逐列、逐尾部、逐置信水平的 NN 持续性表，输入为单位协方差残差 g_t（匹配波动率为 1）

        :param history_a: 时期 a 的残差
        :param history_b: 时期 b 的残差
        :param confidences: 置信水平
        :param tails: 尾部
        :param replications: 重抽样次数
        :param seed: 主种子
        :param threads: 线程数
        :return:
        """
        if history_a.names != history_b.names:
            raise errors.ValidationError(msg='两个时期的列名不一致')
        cells = list(itertools.product(range(history_a.width), tails, confidences))

        def evaluate(index: int) -> NNRow:
            j, tail, p = cells[index]
            name = history_a.names[j]
            result = self.bootstrap_nn_ci(
                sample_a=history_a.returns[:, j],
                sample_b=history_b.returns[:, j],
                p=p,
                tail=tail,
                replications=replications,
                seed=seed,
                key=(index,),
            )
            return NNRow(
                name=name,
                tail=tail,
                confidence=p,
                nn_a=result.a.nn,
                ci_low_a=result.a.ci_low,
                ci_high_a=result.a.ci_high,
                nn_b=result.b.nn,
                ci_low_b=result.b.ci_low,
                ci_high_b=result.b.ci_high,
                diff=result.difference,
                diff_low=result.diff_low,
                diff_high=result.diff_high,
                persistent=result.persistent,
            )

        rows = ordered_map(evaluate, range(len(cells)), threads=threads)
        log.info(f'NN 表完成：{len(rows)} 行，{sum(row.persistent for row in rows)} 行不拒绝持续性')
        return rows


nn_service: NNService = NNService()
