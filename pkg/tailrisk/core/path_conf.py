#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from pathlib import Path

# 项目根目录
BASE_PATH = Path(__file__).resolve().parent.parent

# 环境变量文件
ENV_FILE = BASE_PATH / '.env'
