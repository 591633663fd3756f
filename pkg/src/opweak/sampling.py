"""Seeded random matrices.

Every generator is ``numpy`` Philox keyed by ``SeedSequence([seed, index])``,
so trial ``i`` of a run is reproducible on its own regardless of how many
trials precede it.
"""
from __future__ import annotations

import numpy as np

from .errors import InputError
from .matcore import hermitize


def make_rng(seed: int, index: int | None = None) -> np.random.Generator:
    key = [int(seed)] if index is None else [int(seed), int(index)]
    if any(k < 0 for k in key):
        raise InputError("seeds must be nonnegative")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def _rng(rng_or_seed) -> np.random.Generator:
    if isinstance(rng_or_seed, np.random.Generator):
        return rng_or_seed
    return make_rng(rng_or_seed)


def ginibre(n: int, rng_or_seed) -> np.ndarray:
    """Complex Gaussian matrix with unit-variance entries."""
    rng = _rng(rng_or_seed)
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)


def haar_unitary(n: int, rng_or_seed) -> np.ndarray:
    """Haar-distributed unitary: QR of a Ginibre matrix with phases fixed."""
    if n < 1:
        raise InputError("n must be positive")
    q, r = np.linalg.qr(ginibre(n, rng_or_seed))
    d = np.diagonal(r)
    ph = np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
    return q * ph


def sample_gue(n: int, rng_or_seed) -> np.ndarray:
    """GUE matrix scaled so the spectrum fills roughly ``[-1, 1]``."""
    x = ginibre(n, rng_or_seed)
    return hermitize(x) / np.sqrt(2.0 * n)
