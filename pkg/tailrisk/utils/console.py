#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from pathlib import Path

from rich.console import Console
from rich.table import Table

console = Console()

# 标准输出不混入运行摘要
err_console = Console(stderr=True)


def print_outputs(out_dir: Path) -> None:
    """
    在标准错误打印输出目录中的结果文件

    :param out_dir: 输出目录
    :return:
    """
    table = Table(title=str(out_dir))
    table.add_column('文件', style='cyan')
    table.add_column('字节', justify='right')
    for path in sorted(p for p in out_dir.iterdir() if p.is_file()):
        table.add_row(path.name, f'{path.stat().st_size:,}')
    err_console.print(table)
