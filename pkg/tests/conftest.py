import pytest
from hypothesis import settings

settings.register_profile("tamelab", max_examples=50, deadline=None)
settings.load_profile("tamelab")

from tamelab.matgrp import sl_standard_generators
from tamelab.pcentral import closure, pcentral_series


@pytest.fixture(scope="session")
def sl2_mod81():
    """Image of the first congruence subgroup of SL_2(Z_3) mod 3^4."""
    return closure(sl_standard_generators(2, 3, 4))


@pytest.fixture(scope="session")
def sl2_mod81_chain(sl2_mod81):
    return pcentral_series(sl2_mod81)


@pytest.fixture(scope="session")
def sl2_mod27():
    return closure(sl_standard_generators(2, 3, 3))
