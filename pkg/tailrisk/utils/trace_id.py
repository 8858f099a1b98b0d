#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import uuid

from contextvars import ContextVar

from tailrisk.core.conf import settings

run_id: ContextVar[str] = ContextVar('run_id', default=settings.TRACE_ID_LOG_DEFAULT_VALUE)


def new_run_id() -> str:
    """
    生成并绑定本次运行的追踪 ID

    :return:
    """
    rid = uuid.uuid4().hex[: settings.TRACE_ID_LOG_UUID_LENGTH]
    run_id.set(rid)
    return rid


def get_run_id() -> str:
    """获取当前运行的追踪 ID"""
    return run_id.get()
