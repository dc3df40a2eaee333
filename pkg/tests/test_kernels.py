"""Both kernel paths must agree exactly, and the env flag must pick the fallback."""

import importlib

import numpy as np
import pytest

from recallscan import kernels

needs_numba = pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not installed")


def random_instance(rng, n):
    pts = rng.random(n)
    dist = np.abs(pts[:, None] - pts[None, :])
    weights = rng.integers(1, 4, size=n).astype(np.int64)
    return dist, weights


@needs_numba
def test_dbscan_paths_agree_on_random_instances():
    rng = np.random.default_rng(42)
    for _ in range(60):
        n = int(rng.integers(0, 50))
        dist, weights = random_instance(rng, n)
        eps = float(rng.choice([0.01, 0.05, 0.1, 0.3]))
        min_pts = int(rng.integers(1, 7))
        out_py = kernels.dbscan_labels_py(dist, eps, min_pts, weights)
        out_jit = kernels.dbscan_labels_jit(dist, eps, min_pts, weights)
        assert np.array_equal(out_py, out_jit)


@needs_numba
def test_lcs_paths_agree_on_random_strings():
    rng = np.random.default_rng(43)
    for _ in range(300):
        la, lb = int(rng.integers(0, 20)), int(rng.integers(0, 20))
        a = rng.integers(97, 101, size=la).astype(np.int64)
        b = rng.integers(97, 101, size=lb).astype(np.int64)
        assert int(kernels.lcs_length_py(a, b)) == int(kernels.lcs_length_jit(a, b))


def test_dbscan_empty_and_singleton():
    empty = kernels.dbscan_labels_py(np.zeros((0, 0)), 0.1, 1, np.zeros(0, dtype=np.int64))
    assert empty.size == 0
    one = kernels.dbscan_labels_py(np.zeros((1, 1)), 0.1, 1, np.ones(1, dtype=np.int64))
    assert list(one) == [0]
    lonely = kernels.dbscan_labels_py(np.zeros((1, 1)), 0.1, 2, np.ones(1, dtype=np.int64))
    assert list(lonely) == [kernels.NOISE]


def test_lcs_zero_length_inputs():
    a = np.array([97, 98], dtype=np.int64)
    empty = np.zeros(0, dtype=np.int64)
    assert kernels.lcs_length_py(a, empty) == 0
    assert kernels.lcs_length_py(empty, a) == 0
    assert kernels.lcs_length_py(empty, empty) == 0


def test_env_flag_selects_fallback(monkeypatch):
    monkeypatch.setenv(kernels.NO_NUMBA_ENV, "1")
    reloaded = importlib.reload(kernels)
    try:
        assert reloaded.USING_NUMBA is False
        assert reloaded.dbscan_labels is reloaded.dbscan_labels_py
        assert reloaded.lcs_length is reloaded.lcs_length_py
    finally:
        monkeypatch.delenv(kernels.NO_NUMBA_ENV)
        importlib.reload(kernels)
