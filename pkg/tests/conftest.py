import os
import random

import pytest


@pytest.fixture
def rng():
    """Seeded RNG for property tests; override with the FFEC_SEED env var."""
    return random.Random(int(os.environ.get("FFEC_SEED", "20260816")))
