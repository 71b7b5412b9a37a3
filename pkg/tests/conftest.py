"""Shared fixtures: a per-session orbit cache and random matrix helpers."""

import os
import random

import pytest

from simclass import Mat, ring_ctx


@pytest.fixture(scope="session", autouse=True)
def orbit_cache_dir(tmp_path_factory):
    """Compute each orbit census once per session, on disk."""
    path = tmp_path_factory.mktemp("orbit-cache")
    old = os.environ.get("SIMCLASS_CACHE_DIR")
    os.environ["SIMCLASS_CACHE_DIR"] = str(path)
    yield str(path)
    if old is None:
        os.environ.pop("SIMCLASS_CACHE_DIR", None)
    else:
        os.environ["SIMCLASS_CACHE_DIR"] = old


def rand_mat(ctx, n, rng):
    return Mat(ctx, n, [rng.randrange(ctx.cardinality) for _ in range(n * n)])


def rand_invertible(ctx, n, rng):
    while True:
        m = rand_mat(ctx, n, rng)
        if m.is_invertible():
            return m


@pytest.fixture
def rng():
    return random.Random(20260814)


RINGS_LEN2 = [("z", 2, 2), ("z", 3, 2), ("t", 2, 2), ("t", 3, 2)]


@pytest.fixture(params=RINGS_LEN2, ids=lambda r: f"{r[0]}:{r[1]}:{r[2]}")
def ctx_len2(request):
    return ring_ctx(*request.param)
