from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from monoidk.monoid import (
    cyclic_group_monoid,
    f1,
    group_monoid,
    idempotent_monoid,
    left_zero_monoid,
    nilpotent_monoid,
    symmetric_group,
)

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA = Path(__file__).parent / "data"


def all_monoids():
    """The monoids every suite runs over, by name."""
    return {
        "f1": f1(),
        "z2": cyclic_group_monoid(2),
        "z3": cyclic_group_monoid(3),
        "sigma3": group_monoid(symmetric_group(3)),
        "idempotent": idempotent_monoid(),
        "nilpotent": nilpotent_monoid(),
        "left_zero": left_zero_monoid(),
    }


MONOIDS = all_monoids()
GROUP_MONOIDS = {k: MONOIDS[k] for k in ("f1", "z2", "z3", "sigma3")}


@pytest.fixture(params=sorted(MONOIDS))
def any_monoid(request):
    return MONOIDS[request.param]


@pytest.fixture
def data_dir():
    return DATA
