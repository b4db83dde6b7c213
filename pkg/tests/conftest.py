import functools

import pytest

from hermarcs.gf import Field


@functools.lru_cache(maxsize=None)
def field(p, n, ell):
    return Field(p, n, ell)


@pytest.fixture
def F8():
    return field(2, 1, 3)


@pytest.fixture
def F9():
    return field(3, 1, 2)
