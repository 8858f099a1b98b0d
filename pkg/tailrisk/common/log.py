#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import inspect
import logging
import os
import sys

from pathlib import Path

from loguru import logger

from tailrisk.core.conf import settings
from tailrisk.utils.trace_id import get_run_id


class InterceptHandler(logging.Handler):
    """
    日志拦截处理器，用于将标准库的日志重定向到 loguru

    参考：https://loguru.readthedocs.io/en/stable/overview.html#entirely-compatible-with-standard-logging
    """

    def emit(self, record: logging.LogRecord):
        # 获取对应的 Loguru 级别（如果存在）
        try:
            level = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno

        # 查找记录日志消息的调用者
        frame, depth = inspect.currentframe(), 0
        while frame and (depth == 0 or frame.f_code.co_filename == logging.__file__):
            frame = frame.f_back
            depth += 1

        logger.opt(depth=depth, exception=record.exc_info).log(level, record.getMessage())


def _run_id_filter(record) -> bool:
    record['extra']['run_id'] = get_run_id()
    return True


def setup_logging(level: str | None = None) -> None:
    """
    设置日志处理器

    :param level: 控制台日志级别，默认使用 settings.LOG_STD_LEVEL
    :return:
    """
    level = level or settings.LOG_STD_LEVEL

    # 求解器（cvxpy、scipy）使用标准库日志
    logging.root.handlers = [InterceptHandler()]
    logging.root.setLevel(level)
    for name in logging.root.manager.loggerDict.keys():
        logging.getLogger(name).handlers = []
        logging.getLogger(name).propagate = True

    # 结果文件写入输出目录，日志只走标准错误
    logger.remove()
    logger.configure(
        handlers=[
            {
                'sink': sys.stderr,
                'level': level,
                'filter': _run_id_filter,
                'format': settings.LOG_STD_FORMAT,
            }
        ],
        extra={'run_id': settings.TRACE_ID_LOG_DEFAULT_VALUE},
    )


def set_custom_logfile(out_dir: str | os.PathLike) -> Path:
    """
    在输出目录内设置日志文件

    :param out_dir: 输出目录
    :return:
    """
    log_file = Path(out_dir) / settings.LOG_FILENAME
    logger.add(
        str(log_file),
        level=settings.LOG_FILE_LEVEL,
        filter=_run_id_filter,
        format=settings.LOG_FILE_FORMAT,
        backtrace=True,
        diagnose=False,
        enqueue=False,
    )
    return log_file


# 创建 logger 实例
log = logger
