#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import dataclasses
import sys

from dataclasses import dataclass
from datetime import date, timedelta
from pathlib import Path
from typing import Annotated, Callable

import cappa
import pandas as pd

from tailrisk import get_version
from tailrisk.app.backtest.model.report import BacktestReport, confidence_tag
from tailrisk.app.backtest.schema.config import BacktestConfig
from tailrisk.app.backtest.service.backtest_service import backtest_service
from tailrisk.app.covariance.service.covariance_service import covariance_service
from tailrisk.app.data.service.panel_service import panel_service
from tailrisk.app.esterror.schema.study import EstimationStudyConfig
from tailrisk.app.esterror.service.esterror_service import esterror_service
from tailrisk.app.optimize.schema.objective import OptimizeConfig
from tailrisk.app.optimize.service.constraint_service import constraint_service
from tailrisk.app.optimize.service.optimize_service import optimize_service
from tailrisk.app.risk.schema.nn import NNStudyConfig
from tailrisk.app.risk.service.nn_service import nn_service
from tailrisk.app.scenario.service.scenario_service import scenario_service
from tailrisk.common.enums import ProblemType, RebalanceFrequency
from tailrisk.common.exception import errors
from tailrisk.common.log import log, set_custom_logfile, setup_logging
from tailrisk.core.conf import settings
from tailrisk.utils.console import print_outputs
from tailrisk.utils.file_ops import output_path, prepare_output_dir, write_frame, write_json
from tailrisk.utils.serializers import json_line
from tailrisk.utils.toml_config import M, load_config
from tailrisk.utils.trace_id import new_run_id


def _log_level(*, quiet: bool, verbose: bool) -> str:
    if quiet:
        return 'WARNING'
    if verbose:
        return 'DEBUG'
    return settings.LOG_STD_LEVEL


def _load_run_config(schema: type[M], path: str | None, **overrides) -> M:
    return load_config(schema, path, overrides)


def _load_panel(path: str | None):
    if not path:
        raise errors.ValidationError(msg='必须通过 --panel 指定收益面板')
    return panel_service.load_panel(path=path)


@dataclass
class CommonOptions:
    config: Annotated[
        str | None,
        cappa.Arg(short='-c', long=True, default=None, help='TOML 配置文件，命令行参数优先'),
    ]
    out: Annotated[
        str,
        cappa.Arg(short='-o', long=True, help='输出目录，所有结果文件只写入该目录'),
    ]
    seed: Annotated[
        int | None,
        cappa.Arg(long=True, default=None, help='随机种子，覆盖配置中的 seed'),
    ]
    threads: Annotated[
        int,
        cappa.Arg(long=True, default=settings.THREADS_DEFAULT, help='线程数，不影响结果'),
    ]
    quiet: Annotated[
        bool,
        cappa.Arg(short='-q', long=True, default=False, help='只输出警告及以上日志'),
    ]
    verbose: Annotated[
        bool,
        cappa.Arg(short='-v', long=True, default=False, help='输出调试日志'),
    ]
    log_file: Annotated[
        bool,
        cappa.Arg(long=True, default=False, help=f'在输出目录写入日志文件 {settings.LOG_FILENAME}'),
    ]

    def execute(self, action: Callable[[Path], None]) -> None:
        """
        统一执行入口：配置日志、准备输出目录，错误以单行 JSON 写入标准错误并映射为退出码

        :param action: 接收输出目录的子命令逻辑
        :return:
        """
        setup_logging(_log_level(quiet=self.quiet, verbose=self.verbose))
        run_id = new_run_id()
        try:
            if self.threads < 1:
                raise errors.ValidationError(msg=f'--threads 必须为正整数，实际为 {self.threads}')
            out_dir = prepare_output_dir(self.out)
            if self.log_file:
                set_custom_logfile(out_dir)
            log.info(f'运行 {run_id}，输出目录 {out_dir}')
            action(out_dir)
            if not self.quiet:
                print_outputs(out_dir)
        except errors.BaseExceptionMixin as e:
            log.error(f'{type(e).__name__}: {e.msg}')
            sys.stderr.write(json_line(e.to_record()) + '\n')
            raise cappa.Exit(code=e.code)


@cappa.command(help='单日组合优化：最小缺口、最小方差或均值-方差-缺口组合目标')
@dataclass
class Optimize(CommonOptions):
    panel: Annotated[str | None, cappa.Arg(long=True, default=None, help='收益面板 CSV')]
    constraints: Annotated[
        str | None,
        cappa.Arg(long=True, default=None, help='约束 TOML，缺省为全额投资且只做多'),
    ]
    analysis_date: Annotated[
        str | None,
        cappa.Arg(long=True, default=None, help='分析日 YYYY-MM-DD，缺省为面板最后一日的次日'),
    ]
    problem: Annotated[ProblemType | None, cappa.Arg(long=True, default=None, help='优化问题类型')]
    confidence: Annotated[float | None, cappa.Arg(long=True, default=None, help='置信水平')]
    shortfall_aversion: Annotated[float | None, cappa.Arg(long=True, default=None, help='缺口厌恶系数')]
    variance_aversion: Annotated[float | None, cappa.Arg(long=True, default=None, help='方差厌恶系数')]
    half_life: Annotated[int | None, cappa.Arg(long=True, default=None, help='EWMA 半衰期')]
    warmup: Annotated[int | None, cappa.Arg(long=True, default=None, help='预热观测数')]
    export_scenarios: Annotated[
        bool,
        cappa.Arg(long=True, default=False, help='同时导出情景 scenarios.csv'),
    ]

    def __call__(self):
        self.execute(self.run)

    def run(self, out_dir: Path) -> None:
        config = _load_run_config(
            OptimizeConfig,
            self.config,
            seed=self.seed,
            problem=self.problem,
            half_life_days=self.half_life,
            warmup_observations=self.warmup,
            objective={
                'confidence': self.confidence,
                'shortfall_aversion': self.shortfall_aversion,
                'variance_aversion': self.variance_aversion,
            },
        )
        panel = _load_panel(self.panel)
        if self.analysis_date is None:
            analysis_date = panel.dates[-1] + timedelta(days=1)
        else:
            analysis_date = _parse_date(self.analysis_date, '--analysis-date')
        constraints = constraint_service.load_constraints(names=panel.names, path=self.constraints)
        scenarios = scenario_service.forecast_scenarios(panel=panel, analysis_date=analysis_date, config=config)
        covariance = covariance_service.ewma_covariance(
            panel=panel, half_life_days=config.half_life_days, as_of=analysis_date
        )
        p = config.objective.confidence
        problem = ProblemType(config.problem)
        match problem:
            case ProblemType.shortfall:
                result = optimize_service.minimize_shortfall(
                    scenarios=scenarios, p=p, constraints=constraints, covariance=covariance
                )
            case ProblemType.variance:
                result = optimize_service.minimize_variance(
                    covariance=covariance, constraints=constraints, scenarios=scenarios, p=p
                )
            case ProblemType.combined:
                result = optimize_service.maximize_mean_variance_shortfall(
                    scenarios=scenarios, covariance=covariance, objective=config.objective, constraints=constraints
                )
        if self.export_scenarios:
            scenario_service.export_scenarios(scenarios=scenarios, path=output_path(out_dir, 'scenarios.csv'))
        write_json(
            out_dir,
            'optimize.json',
            {
                **result.to_record(),
                'problem': problem.value,
                'analysis_date': analysis_date,
                'confidence': p,
                'scenario_count': scenarios.count,
                'config': config.model_dump(mode='json'),
            },
        )
        log.info(f'{analysis_date} {problem.value} 优化完成，目标值 {result.objective_value:.6g}')


@cappa.command(help='滚动调仓回测：指数、最小方差、最小缺口与主动组合')
@dataclass
class Backtest(CommonOptions):
    panel: Annotated[str | None, cappa.Arg(long=True, default=None, help='收益面板 CSV')]
    start_date: Annotated[str | None, cappa.Arg(long=True, default=None, help='回测起始日')]
    end_date: Annotated[str | None, cappa.Arg(long=True, default=None, help='回测结束日')]
    index_column: Annotated[str | None, cappa.Arg(long=True, default=None, help='指数列名')]
    frequency: Annotated[RebalanceFrequency | None, cappa.Arg(long=True, default=None, help='调仓频率')]
    confidence: Annotated[
        list[float] | None,
        cappa.Arg(long=True, default=None, action=cappa.ArgAction.append, help='置信水平，可重复'),
    ]
    half_life: Annotated[int | None, cappa.Arg(long=True, default=None, help='EWMA 半衰期')]
    warmup: Annotated[int | None, cappa.Arg(long=True, default=None, help='预热观测数')]
    sweep_half_life: Annotated[
        list[int] | None,
        cappa.Arg(long=True, default=None, action=cappa.ArgAction.append, help='敏感性分析的半衰期，可重复'),
    ]
    sweep_frequency: Annotated[
        list[RebalanceFrequency] | None,
        cappa.Arg(long=True, default=None, action=cappa.ArgAction.append, help='敏感性分析的调仓频率，可重复'),
    ]

    def __call__(self):
        self.execute(self.run)

    def run(self, out_dir: Path) -> None:
        config = _load_run_config(
            BacktestConfig,
            self.config,
            seed=self.seed,
            start_date=self.start_date,
            end_date=self.end_date,
            index_column=self.index_column,
            rebalance_frequency=self.frequency,
            confidence_levels=self.confidence,
            half_life_days=self.half_life,
            warmup_observations=self.warmup,
        )
        panel = _load_panel(self.panel)
        report = backtest_service.run_backtest(panel=panel, config=config, threads=self.threads)
        write_backtest_report(out_dir, report)
        if self.sweep_half_life or self.sweep_frequency:
            sweep = backtest_service.run_parameter_sweep(
                panel=panel,
                config=config,
                half_lives=self.sweep_half_life or [config.half_life_days],
                frequencies=self.sweep_frequency or [config.rebalance_frequency],
                threads=self.threads,
            )
            write_frame(out_dir, 'sweep.csv', sweep.set_index(['half_life_days', 'rebalance_frequency', 'confidence']))


@cappa.command(help='估计误差模拟：风险误差与权重误差角随样本长度的变化')
@dataclass
class Esterror(CommonOptions):
    n_assets: Annotated[int | None, cappa.Arg(long=True, default=None, help='资产数')]
    sample_length: Annotated[
        list[int] | None,
        cappa.Arg(long=True, default=None, action=cappa.ArgAction.append, help='样本长度，可重复'),
    ]
    confidence: Annotated[
        list[float] | None,
        cappa.Arg(long=True, default=None, action=cappa.ArgAction.append, help='置信水平，可重复'),
    ]
    replications: Annotated[int | None, cappa.Arg(long=True, default=None, help='每个单元的重复次数')]

    def __call__(self):
        self.execute(self.run)

    def run(self, out_dir: Path) -> None:
        config = _load_run_config(
            EstimationStudyConfig,
            self.config,
            seed=self.seed,
            n_assets=self.n_assets,
            sample_lengths=self.sample_length,
            confidence_levels=self.confidence,
            replications=self.replications,
        )
        reports = esterror_service.run_estimation_study(
            n_assets=config.n_assets,
            sample_lengths=config.sample_lengths,
            confidences=config.confidence_levels,
            replications=config.replications,
            seed=config.seed,
            threads=self.threads,
        )
        write_frame(
            out_dir, 'risk_error.csv', esterror_service.study_grid(reports=reports, metric='mean_risk_error')
        )
        write_frame(
            out_dir, 'weight_error.csv', esterror_service.study_grid(reports=reports, metric='mean_weight_error_deg')
        )
        baseline = esterror_service.random_weight_baseline(
            n_assets=config.n_assets, samples=config.baseline_samples, seed=config.seed
        )
        write_json(
            out_dir,
            'esterror_summary.json',
            {
                'config': config.model_dump(mode='json'),
                'boundary_angle_deg': esterror_service.boundary_angle(n=config.n_assets - 1),
                'random_weight_baseline': baseline,
                'cells': [dataclasses.asdict(report) for report in reports],
            },
        )


@cappa.command(help='非正态性 NN 统计量在两个时期间的持续性检验')
@dataclass
class Nn(CommonOptions):
    panel: Annotated[str | None, cappa.Arg(long=True, default=None, help='收益面板 CSV')]
    period_a_start: Annotated[str | None, cappa.Arg(long=True, default=None, help='时期 a 起始日')]
    period_a_end: Annotated[str | None, cappa.Arg(long=True, default=None, help='时期 a 结束日')]
    period_b_start: Annotated[str | None, cappa.Arg(long=True, default=None, help='时期 b 起始日')]
    period_b_end: Annotated[str | None, cappa.Arg(long=True, default=None, help='时期 b 结束日')]
    confidence: Annotated[
        list[float] | None,
        cappa.Arg(long=True, default=None, action=cappa.ArgAction.append, help='置信水平，可重复'),
    ]
    replications: Annotated[int | None, cappa.Arg(long=True, default=None, help='自助法重抽样次数')]

    def __call__(self):
        self.execute(self.run)

    def run(self, out_dir: Path) -> None:
        config = _load_run_config(
            NNStudyConfig,
            self.config,
            seed=self.seed,
            period_a_start=self.period_a_start,
            period_a_end=self.period_a_end,
            period_b_start=self.period_b_start,
            period_b_end=self.period_b_end,
            confidence_levels=self.confidence,
            replications=self.replications,
        )
        panel = _load_panel(self.panel)
        history = scenario_service.normalize_history(
            panel=panel,
            half_life_days=config.half_life_days,
            warmup=config.warmup_observations,
            eigen_floor=config.floor,
        )
        history_a = panel_service.slice_period(panel=history, start=config.period_a_start, end=config.period_a_end)
        history_b = panel_service.slice_period(panel=history, start=config.period_b_start, end=config.period_b_end)
        rows = nn_service.nn_table(
            history_a=history_a,
            history_b=history_b,
            confidences=config.confidence_levels,
            tails=config.tails,
            replications=config.replications,
            seed=config.seed,
            threads=self.threads,
        )
        table = pd.DataFrame([row.model_dump(mode='json') for row in rows])
        write_frame(out_dir, 'nn_report.csv', table.set_index(['name', 'tail', 'confidence']))
        write_json(
            out_dir,
            'nn_summary.json',
            {
                'config': config.model_dump(mode='json'),
                'observations_a': history_a.length,
                'observations_b': history_b.length,
                'rows': len(rows),
                'persistent': sum(row.persistent for row in rows),
            },
        )


@cappa.command(help='尾部风险（期望缺口）组合优化工具')
@dataclass
class TailRiskCli:
    version: Annotated[
        bool,
        cappa.Arg(short='-V', long=True, default=False, show_default=False, help='打印当前版本号'),
    ]
    subcmd: cappa.Subcommands[Optimize | Backtest | Esterror | Nn | None] = None

    def __call__(self):
        if self.version:
            get_version()


def _parse_date(value: str, flag: str) -> date:
    try:
        return date.fromisoformat(value)
    except ValueError:
        raise errors.ValidationError(msg=f'{flag} 日期格式非法：{value}')


def write_backtest_report(out_dir: Path, report: BacktestReport) -> None:
    """
    写出回测结果文件集

    :param out_dir: 输出目录
    :param report: 回测结果
    :return:
    """
    simple = backtest_service.cumulative_table(report=report, compounded=False)
    compounded = backtest_service.cumulative_table(report=report, compounded=True)
    for key in report.returns.columns:
        series = pd.DataFrame(
            {'return': report.returns[key], 'cumulative': simple[key], 'cumulative_compounded': compounded[key]}
        )
        write_frame(out_dir, f'returns_{key}.csv', series, index_label='date')
    for key, weights in report.weights.items():
        write_frame(out_dir, f'weights_{key}.csv', weights, index_label='date')
    exposures = {}
    for p in report.confidences:
        tag = confidence_tag(p)
        attribution = backtest_service.return_attribution(report=report, confidence=p)
        write_frame(out_dir, f'attribution_{tag}.csv', attribution, index_label='date')
        exposures[tag] = backtest_service.average_excess_exposure(report=report, confidence=p).to_dict()
    write_frame(out_dir, 'betas.csv', report.betas, index_label='date')
    write_frame(out_dir, 'diagnostics.csv', report.diagnostics.set_index(['date', 'strategy']))
    stats = backtest_service.realized_stats_table(report=report, regimes=report.config.regimes)
    write_json(
        out_dir,
        'summary.json',
        {
            'config': report.config.model_dump(mode='json'),
            'rebalance_dates': list(report.rebalance_dates),
            'observations': len(report.dates),
            'average_excess_exposure': exposures,
            'realized_stats': stats.to_dict(orient='records'),
            'max_feasibility_residual': float(report.diagnostics['feasibility_residual'].max()),
            'max_optimality_gap': float(report.diagnostics['optimality_gap'].max()),
        },
    )


def main(argv: list[str] | None = None) -> None:
    output = cappa.Output(error_format='[red]Error[/]: {message}\n\n更多信息，尝试 "[cyan]--help[/]"')
    cappa.invoke(TailRiskCli, argv=argv, output=output)
