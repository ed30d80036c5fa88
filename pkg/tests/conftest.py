"""
共享测试夹具：内置GCM的实现与Weyl群
"""

import os
import sys

import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.cartan import build_realization, load_gcm
from src.config import config
from src.weyl import weyl_group


def load_realization(name: str):
    return build_realization(load_gcm(config.gcm_dir / f"{name}.json"))


@pytest.fixture
def a1():
    return load_realization("a1")


@pytest.fixture
def a2():
    return load_realization("a2")


@pytest.fixture
def b2():
    return load_realization("b2")


@pytest.fixture
def g2():
    return load_realization("g2")


@pytest.fixture
def affine_a1():
    return load_realization("affine_a1")


@pytest.fixture
def W_a1(a1):
    return weyl_group(a1)


@pytest.fixture
def W_a2(a2):
    return weyl_group(a2)


@pytest.fixture
def W_affine(affine_a1):
    return weyl_group(affine_a1)
