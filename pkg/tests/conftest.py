import pytest

from cyclodist.arith import default_pack


@pytest.fixture(scope="session")
def pack():
    """Shared sieve tables (default limit 2*10^7, built once per session)."""
    return default_pack()
