import os
import random

import pytest

from arcengine.errors import ArcError
from arcengine.fetch import fetch_dataset

PUBLIC_DATA_ENV = "ARC_DATA_URL"  # override the dataset source (url, zip, or tree)


@pytest.fixture(scope="session")
def rng():
    return random.Random(20240817)


@pytest.fixture(scope="session")
def public_dataset_result():
    """Fetch (or reuse) the public dataset once per session.

    Returns a FetchResult, or the exception that blocked the fetch; the
    acceptance criteria that need the public data fail with that reason.
    """
    url = os.environ.get(PUBLIC_DATA_ENV)
    cache = os.environ.get("ARC_CACHE_DIR", "~/.cache/arcengine/arc")
    try:
        if url:
            return fetch_dataset(url, cache)
        return fetch_dataset(cache_dir=cache)
    except ArcError as e:
        return e
