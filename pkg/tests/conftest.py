import numpy as np
import pytest

from apset import IndexBox, LatticeMatrix, perturbed_lattice, sine_example
from apset.ap_functions import ExpPolynomial


def zero_poly(dim: int = 1) -> ExpPolynomial:
    return ExpPolynomial(np.zeros((0, dim)), [], dim=dim)


def integer_line(half_width: int):
    """Integer lattice sample on [-L, L] (window padded by 0.1)."""
    return perturbed_lattice(LatticeMatrix.identity(1), [zero_poly()],
                             IndexBox.centered(half_width))


@pytest.fixture(scope="session")
def zline_200():
    return integer_line(200)


@pytest.fixture(scope="session")
def sine_10k():
    return sine_example(1, IndexBox.centered(10_000))


@pytest.fixture(scope="session")
def sine_2k():
    return sine_example(1, IndexBox.centered(2_000))
