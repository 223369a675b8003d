import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from forward import make_cyclide, torus_spec  # noqa: E402
from poly import XYZ, XYZW, polynomial_ring  # noqa: E402


@pytest.fixture
def R3():
    return polynomial_ring(XYZ)


@pytest.fixture
def R4():
    return polynomial_ring(XYZW)


@pytest.fixture
def torus():
    """(A + 3w^2)^2 - 16w^2(x^2 + y^2)"""
    return make_cyclide(torus_spec())
