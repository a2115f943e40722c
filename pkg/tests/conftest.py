import pytest
from hypothesis import HealthCheck, settings

from spps.grid import Grid
from spps.powers import compute_X
from spps.problem import ProblemSpec
from spps.usol import build_u0_analytic

settings.register_profile(
    "pkg",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("pkg")


@pytest.fixture(scope="session")
def ex1():
    # Bessel test problem: l=1/4, q=0 on (0,1], Dirichlet edge.
    return ProblemSpec.from_strings(l=0.25, a=1.0, q="0", r0="1", r1="0",
                                    alpha=0.0, beta=1.0, gamma=0.0)


@pytest.fixture(scope="session")
def grid5k():
    return Grid(1.0, 5000)


@pytest.fixture(scope="session")
def ex1_u0(ex1, grid5k):
    return build_u0_analytic(ex1, "x^1.25", "1.25*x^0.25", grid5k)


@pytest.fixture(scope="session")
def ex1_x20(ex1, ex1_u0, grid5k):
    return compute_X(ex1, ex1_u0.u0, ex1_u0.du0, 20, grid5k)


@pytest.fixture(scope="session")
def ex6():
    # first-derivative spectral term, Neumann edge
    return ProblemSpec.from_strings(l=0.5, a=1.0, q="0", r0="0", r1="1",
                                    alpha=0.0, beta=0.0, gamma=1.0)
