"""Tree channels W^sigma evaluated by density evolution.

Bit sigma_1 (the most significant bit of the index) selects the convolution
applied first, at the level adjacent to the leaves; bit 0 is a check level and
bit 1 a variable level.  With this convention W^011 = (W^[x]2)^(*)4 and index i
matches the i-th bit decoded by a natural-order SC decoder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bms import bhattacharyya, capacity
from .density import EXACT, conv_binned


def sigma_bits(i, n):
    return tuple((i >> (n - 1 - j)) & 1 for j in range(n))


def sigma_str(i, n):
    return format(i, f"0{n}b") if n else ""


def parse_sigma(text):
    if any(c not in "01" for c in text):
        raise ValueError(f"tree type must be a bit string, got {text!r}")
    return tuple(int(c) for c in text)


@dataclass(frozen=True, eq=False)
class TreeProfile:
    """Capacities and Bhattacharyya parameters of all 2^n tree channels, by index."""

    n: int
    capacity: np.ndarray
    bhattacharyya: np.ndarray
    mode: object = EXACT

    def __len__(self):
        return self.capacity.size

    @property
    def sigmas(self):
        return [sigma_str(i, self.n) for i in range(len(self))]

    def records(self):
        return [
            (i, sigma_str(i, self.n), float(c), float(z))
            for i, (c, z) in enumerate(zip(self.capacity, self.bhattacharyya))
        ]

    def restrict(self, first_bit):
        """Sub-profile of indices with sigma_1 == first_bit, as a height n-1 profile."""
        half = len(self) // 2
        sl = slice(first_bit * half, (first_bit + 1) * half)
        return TreeProfile(self.n - 1, self.capacity[sl], self.bhattacharyya[sl], self.mode)


def evaluate_tree_channel(w, sigma, mode=EXACT):
    """|D|-density of W^sigma; ``sigma`` is a bit string or tuple of bits."""
    if isinstance(sigma, str):
        sigma = parse_sigma(sigma)
    d = w
    for bit in sigma:
        d = conv_binned(bit, d, d, mode)
    return d


def evaluate_levels(w, n, mode=EXACT):
    """Profiles for every height 0..n from one depth-first pass.

    The node at depth k with prefix sigma_1..sigma_k carries W^(sigma_1..sigma_k),
    so the depth-k nodes form the height-k profile.
    """
    if n < 0:
        raise ValueError("height must be non-negative")
    caps = [np.empty(1 << k) for k in range(n + 1)]
    zs = [np.empty(1 << k) for k in range(n + 1)]

    def visit(d, depth, index):
        caps[depth][index] = capacity(d)
        zs[depth][index] = bhattacharyya(d)
        if depth == n:
            return
        for bit in (0, 1):
            visit(conv_binned(bit, d, d, mode), depth + 1, 2 * index + bit)

    visit(w, 0, 0)
    return [TreeProfile(k, caps[k], zs[k], mode) for k in range(n + 1)]


@lru_cache(maxsize=64)
def _cached_levels(w, n, mode):
    return evaluate_levels(w, n, mode)


def evaluate_all(w, n, mode=EXACT, cache=True):
    """Height-n profile of W in index order (2(2^n - 1) convolutions)."""
    if cache:
        return _cached_levels(w, n, mode)[n]
    return evaluate_levels(w, n, mode)[n]


def levels(w, n, mode=EXACT):
    """Cached version of :func:`evaluate_levels`."""
    return _cached_levels(w, n, mode)


def bec_tree_profile(eps, n):
    """Closed-form profile for BEC(eps): check eps -> 2eps - eps^2, variable eps -> eps^2."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"erasure probability {eps} outside [0, 1]")
    e = np.array([eps], dtype=float)
    for _ in range(n):
        e = np.stack((2.0 * e - e * e, e * e), axis=1).ravel()
    return TreeProfile(n, 1.0 - e, e.copy(), EXACT)


def polarization_fraction(profile, delta):
    """Fraction of tree channels whose capacity lies in [delta, 1 - delta]."""
    if not 0.0 < delta < 0.5:
        raise ValueError("delta must lie in (0, 1/2)")
    c = profile.capacity
    return float(np.count_nonzero((c >= delta) & (c <= 1.0 - delta))) / c.size


def mean_capacity(profile):
    return math.fsum(profile.capacity) / len(profile)


