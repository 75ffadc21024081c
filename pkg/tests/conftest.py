import random
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from polyconvex.core import Mat2

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def rationals(bound=10, max_den=10):
    return st.builds(lambda d, n: Fraction(n, d), st.integers(1, max_den),
                     st.integers(-bound, bound)).map(lambda x: x)


def rational_in(bound=10, max_den=10):
    """Rationals p/q with |p/q| <= bound and 1 <= q <= max_den."""
    return st.integers(1, max_den).flatmap(
        lambda d: st.integers(-bound * d, bound * d).map(lambda n: Fraction(n, d)))


def matrices(bound=10, max_den=10):
    return st.tuples(*[rational_in(bound, max_den)] * 4).map(lambda e: Mat2(*e))


def invertible_matrices(bound=5, max_den=5):
    return matrices(bound, max_den).filter(lambda T: T.det() != 0)


def rand_frac(rng: random.Random, bound=10, max_den=10):
    d = rng.randint(1, max_den)
    return Fraction(rng.randint(-bound * d, bound * d), d)


def rand_mat(rng: random.Random, bound=10, max_den=10):
    return Mat2(*(rand_frac(rng, bound, max_den) for _ in range(4)))


def rand_invertible(rng: random.Random, bound=5, max_den=5):
    while True:
        T = rand_mat(rng, bound, max_den)
        if T.det() != 0:
            return T


@pytest.fixture
def rng():
    return random.Random(12345)
