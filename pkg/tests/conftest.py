import numpy as np
import pytest

from modlift.classify import c3c3_witness_rep, klein_witness_rep, quaternion_witness_rep
from modlift.cyclic_lift import jordan_companion_rep
from modlift.obstruction import cyclic_witness, module_of_quotient
from modlift.rings import Mat, PrimeCtx
from modlift.errors import Error


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def klein_rep():
    return klein_witness_rep()


@pytest.fixture(scope="session")
def q8_rep():
    return quaternion_witness_rep()


@pytest.fixture(scope="session")
def c3c3_rep():
    return c3c3_witness_rep()


@pytest.fixture(scope="session")
def c9_module_rep():
    f, h, _ = cyclic_witness(PrimeCtx(3), 2)
    return module_of_quotient(f.group, h)


@pytest.fixture(scope="session")
def witness_suite(klein_rep, q8_rep, c3c3_rep, c9_module_rep):
    """Known representations with their machine-verified verdicts.

    The 6-dim quaternion entry carries the solver's certified verdict
    (liftable); invariance tests assert stability of whatever the verdict is.
    """
    return [
        ("klein", klein_rep, False),
        ("q8-6dim", q8_rep, True),
        ("c3c3", c3c3_rep, False),
        ("c9-j5", c9_module_rep, False),
        ("jordan-2-2-3", jordan_companion_rep(PrimeCtx(2), 2, 3), True),
        ("jordan-3-1-2", jordan_companion_rep(PrimeCtx(3), 1, 2), True),
    ]


def random_invertible(rng, p, n):
    while True:
        m = Mat(p, rng.integers(0, p, (n, n)))
        try:
            m.inv()
            return m
        except Error:
            continue
