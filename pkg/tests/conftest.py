import numpy as np
import pytest

from entrospec import QuantumState, validate_state


def diag_state(*eigenvalues: float) -> QuantumState:
    """Build a diagonal state from eigenvalues (handy for exact fixtures)."""
    return validate_state(np.diag(np.asarray(eigenvalues, dtype=np.complex128)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
