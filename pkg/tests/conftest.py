import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from core.dataset import Dataset
from core.params import validate_params
from sample.exact import exact_sample

# Truth vectors of the simulation study, in (m10, m01, m11, m02, m12) order.
STUDY_CASES = [
    (1.0, 1.0, 0.1, 1.0, 0.1),
    (1.0, 1.0, 1.0, 1.0, 1.0),
    (1.0, 5.0, 1.0, 5.0, 1.0),
    (5.0, 5.0, 5.0, 5.0, 5.0),
]

HOSPITAL = (2.1809, 0.1880, 0.0018, 2.4806, 0.0535)


@pytest.fixture
def case1():
    return validate_params(STUDY_CASES[0])


@pytest.fixture
def case2():
    return validate_params(STUDY_CASES[1])


@pytest.fixture
def independent():
    """Poisson(e) for x and Gamma(1, 1) for y."""
    return validate_params((1.0, 1.0, 0.0, 1.0, 0.0))


@pytest.fixture(params=STUDY_CASES, ids=['case1', 'case2', 'case3', 'case4'])
def study_params(request):
    return validate_params(request.param)


@pytest.fixture
def small_data():
    return exact_sample(validate_params(STUDY_CASES[0]), 200, seed=11).to_dataset()


@pytest.fixture
def tiny_data():
    return Dataset.from_arrays(np.array([0, 1, 2]), np.array([0.5, 1.5, 2.5]))


@pytest.fixture
def write_csv(tmp_path):
    """Write raw CSV text to a temporary file and return its path as a string."""
    def _write(text: str, name: str = 'data.csv') -> str:
        path = tmp_path / name
        path.write_bytes(text.encode('utf-8'))
        return str(path)
    return _write
