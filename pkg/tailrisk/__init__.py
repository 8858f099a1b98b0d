#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from tailrisk.utils.console import console

__version__ = '0.1.0'


def get_version() -> None:
    console.print(f'tailrisk [cyan]{__version__}[/]')
