import pytest
from hypothesis import settings

from singlejump.measure import Distribution, ExponentialPiece, UniformPiece

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def uniform():
    return Distribution.uniform()


@pytest.fixture
def expo():
    return Distribution.exponential()


@pytest.fixture
def two_atoms():
    return Distribution.atomic({1.0: 0.5, 2.0: 0.5})


@pytest.fixture
def mixed():
    """Atom at 0, density on [0, 1), atom at 1.5, exponential tail, mass at inf."""
    return Distribution(atoms={0.0: 0.1, 1.5: 0.2},
                        pieces=[UniformPiece(0.0, 1.0, 0.3),
                                ExponentialPiece(2.0, None, 0.3, rate=2.0)],
                        mass_inf=0.1)
