#!/usr/bin/env python3
"""
pytest 公共配置
慢速测试默认跳过, 加 --run-slow 运行
"""

import sys
from pathlib import Path

import pytest

# 添加项目根目录到Python路径
sys.path.insert(0, str(Path(__file__).parent))

from utils.knapsack import KnapsackInstance


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", default=False, help="运行慢速统计测试")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="需要 --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def glover_instance():
    """两个物品只能放一个: 比率更高的物品价值只有2, 最优值为100"""
    return KnapsackInstance(values=(2, 100), weights=(1, 51), capacity=51)


@pytest.fixture
def small_instance():
    return KnapsackInstance(values=(10, 4, 1, 7), weights=(5, 2, 1, 4), capacity=6)
