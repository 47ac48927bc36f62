import pytest
from hypothesis import settings

from geodete.extend import extend_thm1, extend_thm2, select_thm1, thm1_candidates
from geodete.permgroup import projective_group
from geodete.surface import TriangleSignature, search_epimorphisms

settings.register_profile("geodete", deadline=None, max_examples=50)
settings.load_profile("geodete")


@pytest.fixture(scope="session")
def pgl27():
    return projective_group(7, "PGL")


@pytest.fixture(scope="session")
def psl27():
    return projective_group(7, "PSL")


@pytest.fixture(scope="session")
def klein_action(pgl27):
    return search_epimorphisms(TriangleSignature(2, 3, 7), pgl27)[0]


@pytest.fixture(scope="session")
def klein_candidates(klein_action):
    return [extend_thm1(klein_action, c) for c in thm1_candidates(klein_action)]


@pytest.fixture(scope="session")
def klein_t1(klein_candidates):
    return select_thm1(klein_candidates)


@pytest.fixture(scope="session")
def klein_t2(klein_action):
    return extend_thm2(klein_action)


@pytest.fixture(scope="session")
def a5_action():
    """A nonorientable (2,5,5) action of A5 = PSL(2,5), crosscap number 5."""
    return search_epimorphisms(TriangleSignature(2, 5, 5), projective_group(5, "PSL"))[0]
