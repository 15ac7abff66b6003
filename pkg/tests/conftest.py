import numpy as np
import pytest

from finsler_domains.domains import DomainSpec


def cplx(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


@pytest.fixture
def rng():
    return np.random.default_rng(20261017)


SPECS = {
    "I23": DomainSpec("I", (2, 3), t=1.0, k=2),
    "I22": DomainSpec("I", (2, 2), t=0.5, k=3),
    "II3": DomainSpec("II", (3,), t=1.0, k=2),
    "III4": DomainSpec("III", (4,), t=2.0, k=3),
    "III5": DomainSpec("III", (5,), t=1.0, k=2),
    "IV5": DomainSpec("IV", (5,), profile="paper-example"),
}


@pytest.fixture(params=sorted(SPECS))
def spec(request):
    return SPECS[request.param]
