import numpy as np
import pytest
from hypothesis import strategies as st

from irpdf.perm import Perm


@st.composite
def perms(draw, max_point=12):
    """Random finitary permutation with support inside 1..max_point."""
    n = draw(st.integers(1, max_point))
    img = draw(st.permutations(list(range(1, n + 1))))
    return Perm(dict(zip(range(1, n + 1), img)))


def random_perm(rng: np.random.Generator, max_point: int) -> Perm:
    n = int(rng.integers(1, max_point + 1))
    img = rng.permutation(n) + 1
    return Perm({i + 1: int(img[i]) for i in range(n)})


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
