import pytest

from segcat.resources import default_pack_path, load_pack


@pytest.fixture(scope="session")
def pack():
    return load_pack(default_pack_path(), cache=False)
