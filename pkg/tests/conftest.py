import numpy as np
import pytest
from hypothesis import settings

from uavsep import kernels

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def _variants(fn):
    # compiled kernel plus the same source run as plain Python
    out = [pytest.param(fn, id="active")]
    if getattr(fn, "py_func", fn) is not fn:
        out.append(pytest.param(fn.py_func, id="python"))
    return out


def kernel_variants(name):
    return _variants(getattr(kernels, name))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
