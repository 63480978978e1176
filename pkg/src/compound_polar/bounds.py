"""Upper and lower bounds on the compound rate of polar codes under SC decoding.

For a finite set of channels and any height n::

    upper(n) = 2^-n sum_sigma min_W I(W^sigma)
    lower(n) = 1 - 2^-n sum_sigma max_W Z(W^sigma)

Capacities for the upper bound come from upgraded density evolution and
Bhattacharyya parameters for the lower bound from degraded density
evolution, so both numbers stay valid bounds after quantization.  The slack
fields give the spread between the two quantizers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from .bms import bhattacharyya, capacity, is_degraded_bsc_wrt_bec
from .density import DEFAULT_GRID, degrade, upgrade
from .trees import bec_tree_profile, levels

CONSTRUCTION_GRID = 1025


@dataclass(frozen=True)
class BoundRow:
    n: int
    upper: float
    lower: float
    upper_slack: float = 0.0
    lower_slack: float = 0.0

    def as_dict(self):
        return asdict(self)


def trivial_bounds(P, Q):
    return min(capacity(P), capacity(Q)), 1.0 - max(bhattacharyya(P), bhattacharyya(Q))


def _mean(values):
    return math.fsum(values) / len(values)


def _row(k, deg, upg):
    """Bound row at height k from per-channel degraded/upgraded level lists."""
    cap_up = np.min([lv[k].capacity for lv in upg], axis=0)
    cap_dn = np.min([lv[k].capacity for lv in deg], axis=0)
    z_dn = np.max([lv[k].bhattacharyya for lv in deg], axis=0)
    z_up = np.max([lv[k].bhattacharyya for lv in upg], axis=0)
    upper = _mean(cap_up)
    lower = 1.0 - _mean(z_dn)
    return BoundRow(
        k,
        upper,
        lower,
        max(0.0, upper - _mean(cap_dn)),
        max(0.0, (1.0 - _mean(z_up)) - lower),
    )


def set_table(channels, n_max, m=DEFAULT_GRID, grid="bhattacharyya"):
    """Bound rows for heights 0..n_max over a finite channel set."""
    channels = list(channels)
    if not channels:
        raise ValueError("channel set must be non-empty")
    if n_max < 0:
        raise ValueError("height must be non-negative")
    deg = [levels(w, n_max, degrade(m, grid)) for w in channels]
    upg = [levels(w, n_max, upgrade(m, grid)) for w in channels]
    return [_row(k, deg, upg) for k in range(n_max + 1)]


def set_bounds(channels, n, m=DEFAULT_GRID, grid="bhattacharyya"):
    return set_table(channels, n, m, grid)[n]


def pairwise_bounds(P, Q, n, m=DEFAULT_GRID, grid="bhattacharyya"):
    return set_bounds([P, Q], n, m, grid)


def bound_table(P, Q, n_max, m=DEFAULT_GRID, grid="bhattacharyya"):
    return set_table([P, Q], n_max, m, grid)


# ------------------------------------------------------------- degradation

def _degraded(a, b):
    """Is channel spec ``a`` degraded w.r.t. spec ``b``?  None when unknown."""
    if a.kind == "MIXTURE" or b.kind == "MIXTURE":
        return None
    pa, pb = a.parameter, b.parameter
    if a.kind == b.kind == "BEC":
        return pa >= pb
    if a.kind == b.kind == "BSC":
        return min(pa, 1 - pa) >= min(pb, 1 - pb)
    if a.kind == "BSC":
        return is_degraded_bsc_wrt_bec(pa, pb)
    # a BEC never arises from a noisy BSC unless it is useless or the BSC is clean
    return pa >= 1.0 or min(pb, 1 - pb) <= 0.0


def degradation_shortcut(specs):
    """Capacity of a member degraded w.r.t. all others, or None if none is known."""
    specs = list(specs)
    if not specs:
        raise ValueError("channel set must be non-empty")
    for cand in specs:
        if all(other is cand or _degraded(cand, other) for other in specs):
            return capacity(cand.density())
    return None


# ------------------------------------------------------- code construction

@dataclass(frozen=True)
class CompoundSelection:
    n: int
    indices: tuple
    union_bound: float
    proxy_indices: tuple
    proxy_union_bound: float

    @property
    def rate(self):
        return len(self.indices) / 2**self.n

    @property
    def proxy_rate(self):
        return len(self.proxy_indices) / 2**self.n


def _greedy(scores, budget):
    """Indices in increasing score (ties by index) while the running sum stays within budget."""
    order = np.argsort(scores, kind="stable")
    running = np.cumsum(scores[order])
    k = int(np.searchsorted(running, budget, side="right"))
    while k and math.fsum(scores[order[:k]]) > budget:
        k -= 1
    chosen = order[:k]
    return tuple(sorted(int(i) for i in chosen)), math.fsum(scores[chosen])


def select_compound_good_indices(channels, n, budget, m=CONSTRUCTION_GRID, grid="bhattacharyya"):
    """Greedy union-bound selection on max_W Z(W^sigma) (degraded evolution).

    Also reports the selection obtained from the BEC with the worst
    Bhattacharyya parameter of the set, which dominates every member at every
    tree channel.
    """
    channels = list(channels)
    if not channels:
        raise ValueError("channel set must be non-empty")
    if not budget > 0:
        raise ValueError("target block error probability must be positive")
    zmax = np.max([levels(w, n, degrade(m, grid))[n].bhattacharyya for w in channels], axis=0)
    idx, ub = _greedy(zmax, budget)
    proxy = bec_tree_profile(max(bhattacharyya(w) for w in channels), n).bhattacharyya
    pidx, pub = _greedy(proxy, budget)
    return CompoundSelection(n, idx, ub, pidx, pub)
