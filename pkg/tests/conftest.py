import random

import pytest

from vecmsm import curve as cv
from vecmsm import oracle
from vecmsm.params import bls12_377


@pytest.fixture(scope="session")
def params():
    return bls12_377()


@pytest.fixture(scope="session")
def ctx(params):
    return cv.make_context(params)


@pytest.fixture(scope="session")
def gen(params):
    return oracle.generator(params)


@pytest.fixture()
def rng():
    return random.Random(0xC0FFEE)


@pytest.fixture(scope="session")
def point_pool(params, gen):
    """64 distinct curve points: gen, 2*gen, ..., via the affine oracle."""
    pts = []
    acc = gen
    for _ in range(64):
        pts.append(acc)
        acc = oracle.padd_ref(acc, gen, params)
    return pts


def random_ext(rng, ctx, point):
    """Extended form of an affine point with a random projective scale."""
    return cv.ext_from_affine(point, ctx, z=rng.randrange(1, ctx.modulus))
