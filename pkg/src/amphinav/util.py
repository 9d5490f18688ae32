"""Small shared helpers: angle wrapping, RNG streams, BLAS thread control."""

import hashlib
import math

import numpy as np

TWO_PI = 2.0 * math.pi

_BLAS_LIMITED = False


def limit_blas_threads(n: int = 1):
    """Pin BLAS pools to ``n`` threads.

    The batched updates here are many small matrix products; thread
    fan-out costs more than it buys and single-threaded reductions keep
    results reproducible across machines with different core counts.
    """
    global _BLAS_LIMITED
    if _BLAS_LIMITED:
        return
    try:
        from threadpoolctl import threadpool_limits
        threadpool_limits(limits=n)
        _BLAS_LIMITED = True
    except ImportError:
        pass


def wrap_angle(a: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    r = math.fmod(a + math.pi, TWO_PI)
    if r <= 0.0:
        r += TWO_PI
    return r - math.pi


def derive_rng_stream(master_seed: int, label: str) -> np.random.Generator:
    """Independent, reproducible RNG stream keyed by (master_seed, label).

    The key is hashed so distinct labels give statistically unrelated
    streams while the same pair always yields the same sequence.
    """
    digest = hashlib.sha256(f"{master_seed}:{label}".encode()).digest()
    entropy = int.from_bytes(digest[:16], "little")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
