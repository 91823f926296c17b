import pytest

from fracnambu import CantorSpec, Staircase, build_cantor

MIDDLE_THIRD_ALPHA = 0.6309297535714574


@pytest.fixture(scope="session")
def third_spec():
    return CantorSpec()


@pytest.fixture(scope="session")
def third_approx(third_spec):
    return build_cantor(third_spec, 20)


@pytest.fixture(scope="session")
def third_stair(third_spec, third_approx):
    return Staircase(third_spec, MIDDLE_THIRD_ALPHA, depth=20, approx=third_approx)
