#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

import numpy as np

T = TypeVar('T')
R = TypeVar('R')


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    """
    并发执行并按提交顺序返回结果，threads=1 时在当前线程顺序执行

    :param fn: 任务函数
    :param items: 任务参数
    :param threads: 线程数
    :return:
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(fn, items))


def child_rng(seed: int, *key: int) -> np.random.Generator:
    """
    由主种子和任务编号派生独立随机流，结果与执行顺序无关

    :param seed: 主种子
    :param key: 任务编号
    :return:
    """
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=tuple(key)))
