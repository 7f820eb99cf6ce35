from fractions import Fraction

import pytest

from cy3 import LatticeMap, LinearForm, TrilinearForm
from cy3.core_arith import QuadSurd


@pytest.fixture
def L_z():
    return LinearForm(0, 0, 1)


@pytest.fixture
def golden_cubic():
    """C = z(x^2 - xy - y^2)."""
    return TrilinearForm.from_cubic_coefficients({"x2z": 1, "xyz": -1, "y2z": -1})


@pytest.fixture
def golden_cubic_quadric():
    """C' = z(x^2 - xy - y^2 + z^2)."""
    return TrilinearForm.from_cubic_coefficients(
        {"x2z": 1, "xyz": -1, "y2z": -1, "z3": 1}
    )


@pytest.fixture
def golden_generator():
    return LatticeMap([[2, 1, 0], [1, 1, 0], [0, 0, 1]])


@pytest.fixture
def unipotent_cubic():
    """C = z^3 + 6xz^2 - 3y^2z + 3yz^2."""
    return TrilinearForm.from_cubic_coefficients(
        {"z3": 1, "xz2": 6, "y2z": -3, "yz2": 3}
    )


@pytest.fixture
def unipotent_generator():
    return LatticeMap([[1, 1, 0], [0, 1, 1], [0, 0, 1]])


@pytest.fixture
def split_cubic():
    """C = 6xyz, already in split coordinates."""
    return TrilinearForm.from_cubic_coefficients({"xyz": 6})


def surd(a, b=0, d=0):
    return QuadSurd(Fraction(a), Fraction(b), d)


GOLDEN_ALPHA = surd(Fraction(3, 2), Fraction(1, 2), 5)  # (3 + sqrt5)/2
