import numpy as np
import pytest

from su_einstein import (
    build_scheme1_basis,
    build_scheme2_basis,
    structure_constants,
)

_SC_CACHE = {}


def sc_for(scheme: int, n: int, p: int | None = None):
    """Cached structure constants (they are immutable and expensive to rebuild)."""
    key = (scheme, n, p)
    if key not in _SC_CACHE:
        basis = build_scheme1_basis(n) if scheme == 1 else build_scheme2_basis(n, p)
        _SC_CACHE[key] = structure_constants(basis)
    return _SC_CACHE[key]


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
