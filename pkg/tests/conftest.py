import pytest

from lchi.characters import character
from lchi.zeros import scan_zeros


@pytest.fixture(scope="session")
def zero_supply():
    """Session-wide zero cache: one scan per character, grown on demand.

    Returned lists may cover more than requested; sums only require
    ceiling >= T, so reuse is safe.
    """
    cache = {}

    def get(q: int, label: int, T: float):
        key = (q, label)
        current = cache.get(key)
        if current is None or current.ceiling < T:
            cache[key] = scan_zeros(character(q, label), T)
        return cache[key]

    return get
