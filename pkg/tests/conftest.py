import pytest

from facthappy import enumerate_attractors

_ATLASES = {}


@pytest.fixture(scope="session")
def atlas():
    """Factory for attractor atlases, cached across the whole session."""
    def get(e):
        if e not in _ATLASES:
            _ATLASES[e] = enumerate_attractors(e)
        return _ATLASES[e]
    return get
