import itertools

import numpy as np
import pytest
from hypothesis import settings

from kgff import _kernels
from kgff.algebra import FieldSpec, Poly
from kgff.laurent import FracMatrix

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def F2():
    return FieldSpec(2)


@pytest.fixture(scope="session")
def F3():
    return FieldSpec(3)


@pytest.fixture(scope="session")
def F4():
    return FieldSpec(2, 2)


SMALL_FIELDS = [FieldSpec(2), FieldSpec(3), FieldSpec(2, 2), FieldSpec(5), FieldSpec(7),
                FieldSpec(2, 3), FieldSpec(3, 2)]


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    prev = _kernels.set_backend(request.param)
    yield request.param
    _kernels.set_backend(prev)


def P(F, *coeffs):
    """Polynomial from codes, low to high."""
    return Poly(F, tuple(coeffs))


def random_matrix(F, m, n, t, rng):
    return FracMatrix(F, rng.integers(0, F.k, size=(m, n, t)))


def all_polys(F, max_deg):
    for cs in itertools.product(range(F.k), repeat=max_deg + 1):
        yield Poly(F, cs)
