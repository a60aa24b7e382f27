import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from mdcs.model import from_config_matrix


def pytest_addoption(parser):
    parser.addoption("--long", action="store_true",
                     help="run the (2,4) and (3,4) cells")


def pytest_configure(config):
    config.addinivalue_line("markers", "long: hours-scale checks, need --long")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--long"):
        return
    skip = pytest.mark.skip(reason="long mode; pass --long")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def two_source():
    # level 1 reads E_1; level 2 reads any two encoders
    return from_config_matrix([[1, 0, 0], [3, 5, 6]])


@pytest.fixture
def three_source():
    return from_config_matrix([[1], [2], [3]])


@pytest.fixture
def two_encoder():
    return from_config_matrix([[3, 5, 6], [7, 0, 0]])
