"""Shared wiring: oracle helpers importable, deterministic RNG fixture."""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))


@pytest.fixture
def rng():
    """Fresh generator per test, fixed seed so failures replay."""
    return np.random.default_rng(20260818)


def random_points(rng, n, count, scale=0.7):
    """Batch of complex points in a ball, away from huge magnitudes."""
    pts = rng.normal(size=(count, n)) + 1j * rng.normal(size=(count, n))
    return [tuple(scale * row) for row in pts]
