import mpmath as mp
import pytest
from hypothesis import settings

settings.register_profile("klab", deadline=None, max_examples=40)
settings.load_profile("klab")


@pytest.fixture(autouse=True)
def _reset_mpmath_precision():
    # library calls set their own precision; oracles run a little above "extended"
    mp.mp.dps = 40
    yield
    mp.mp.dps = 40
