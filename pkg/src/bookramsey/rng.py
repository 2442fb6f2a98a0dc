"""Counter-based pseudorandom edge values.

Randomized constructions decide each edge color from a pure function of
(seed, edge index) rather than from a stateful stream, so any subset of
edges can be generated in any order, split across threads, or revisited
later with bit-identical results.

The generator is splitmix64: value(seed, k) = mix64(seed + (k+1)*GAMMA)
over 64-bit wrapping arithmetic.  An event of probability ``p`` fires
iff the value is below floor(p * 2**64); with a rational ``p`` this is
exact to the full 64-bit resolution.

Two implementations are provided on purpose: a scalar pure-Python
reference and a vectorized numpy kernel.  Tests hold them equal.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .numbers import as_fraction

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
MIX_M1 = 0xBF58476D1CE4E5B9
MIX_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """Finalizing bijection on 64-bit integers (splitmix64 mixer)."""
    z &= MASK64
    z = (z ^ (z >> 30)) * MIX_M1 & MASK64
    z = (z ^ (z >> 27)) * MIX_M2 & MASK64
    return z ^ (z >> 31)


def edge_value(seed: int, index: int) -> int:
    """64-bit value for counter ``index`` under ``seed`` (scalar reference)."""
    return mix64((seed + (index + 1) * GAMMA) & MASK64)


def probability_threshold(p) -> int:
    """floor(p * 2**64) for rational p in [0, 1].

    edge_value(seed, k) < threshold happens with probability exactly
    threshold / 2**64, the best 64-bit approximation below p.
    """
    f = as_fraction(p)
    if not 0 <= f <= 1:
        raise ValueError(f"probability {p} outside [0, 1]")
    return (f.numerator << 64) // f.denominator


def edge_values_block(seed: int, start: int, count: int) -> np.ndarray:
    """Vectorized edge_value for counters start .. start+count-1."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(seed & MASK64) + idx * np.uint64(GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX_M2)
    return z ^ (z >> np.uint64(31))


def bernoulli_block(seed: int, start: int, count: int, threshold: int) -> np.ndarray:
    """Boolean array: value below threshold, for a contiguous counter range."""
    vals = edge_values_block(seed, start, count)
    if threshold >= 1 << 64:
        return np.ones(count, dtype=bool)
    return vals < np.uint64(threshold)


def subset_sampler(seed: int, stream: int = 0):
    """numpy Generator for auxiliary sampling (not edge colors).

    Distinct streams are decorrelated by running the seed through the
    same mixer with the stream index as counter.
    """
    return np.random.default_rng(edge_value(seed, stream))
