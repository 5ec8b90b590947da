import pytest

import arithplane.finitefield as ff


@pytest.fixture(autouse=True)
def _verify_factorizations():
    """Make every factorization in the suite re-expand and self-check."""
    old = ff.VERIFY
    ff.VERIFY = True
    yield
    ff.VERIFY = old
