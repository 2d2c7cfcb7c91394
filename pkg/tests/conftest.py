from pathlib import Path

import pytest
from mpmath import mp

from divisorlab import zeros

# Reference arithmetic in the tests themselves (pi^2/6, closed forms, ...)
# must not be the accuracy bottleneck.
mp.prec = 220

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
ZEROS_PATH = DATA_DIR / "zeros_first_100.txt"


@pytest.fixture(scope="session")
def zeros_path() -> Path:
    return ZEROS_PATH


@pytest.fixture(scope="session")
def zero_table(zeros_path):
    return zeros.import_zeros(zeros_path)


@pytest.fixture(scope="session")
def zero_coefficients(zero_table):
    return zeros.coefficients_for_table(zero_table)
