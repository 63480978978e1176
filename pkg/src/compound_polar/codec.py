"""Polar encoder, successive-cancellation decoder and Monte Carlo harness.

Everything is in natural index order (no bit reversal): ``x = u G^{(x)n}`` with
``G = [[1, 0], [1, 1]]``, and bit i of the SC decoding order sees the tree
channel whose type is the n-bit binary expansion of i.

Random streams: trial t of a run with seed s draws from
``PCG64(SeedSequence([s, t]))``, so reports do not depend on batching.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bms import ChannelSpec, format_channel_spec
from .bounds import CONSTRUCTION_GRID, select_compound_good_indices

LLR_CLIP = 60.0


@dataclass(frozen=True)
class PolarCode:
    n: int
    info: tuple
    union_bound: float | None = None

    def __post_init__(self):
        info = tuple(sorted(set(int(i) for i in self.info)))
        if info and not 0 <= info[0] <= info[-1] < self.N:
            raise ValueError("information indices out of range")
        object.__setattr__(self, "info", info)

    @property
    def N(self):
        return 1 << self.n

    @property
    def rate(self):
        return len(self.info) / self.N

    @property
    def frozen(self):
        mask = np.ones(self.N, dtype=bool)
        mask[list(self.info)] = False
        return mask


def _check_length(length):
    if length < 1 or length & (length - 1):
        raise ValueError(f"length {length} is not a power of two")
    return length.bit_length() - 1


def encode(u):
    """``u G^{(x)n}`` over GF(2); works on the last axis of a batch."""
    x = np.array(u, dtype=np.uint8) & 1
    N = x.shape[-1]
    _check_length(N)
    lead = x.shape[:-1]
    h = 1
    while h < N:
        v = x.reshape(lead + (N // (2 * h), 2, h))
        v[..., 0, :] ^= v[..., 1, :]
        h *= 2
    return x


def message(code, info_bits):
    """Full input vector u with the given information bits and zero frozen bits."""
    info_bits = np.asarray(info_bits, dtype=np.uint8)
    u = np.zeros(info_bits.shape[:-1] + (code.N,), dtype=np.uint8)
    u[..., list(code.info)] = info_bits
    return u


# --------------------------------------------------------------- channels

def transmit(spec, x, rng):
    """Channel outputs for codeword(s) ``x``.

    BEC: 0/1, or -1 for an erasure.  BSC: received bits.  Mixture: signed
    reliabilities ``(1 - 2 y) d`` with d drawn from the |D|-density.
    """
    x = np.asarray(x, dtype=np.int8)
    if spec.kind == "BEC":
        erased = rng.random(x.shape) < spec.parameter
        return np.where(erased, np.int8(-1), x)
    if spec.kind == "BSC":
        return x ^ (rng.random(x.shape) < spec.parameter).astype(np.int8)
    a = spec.density()
    d = a.support[rng.choice(len(a), size=x.shape, p=a.mass)]
    wrong = rng.random(x.shape) < (1.0 - d) / 2.0
    return (1.0 - 2.0 * (x ^ wrong)) * d


def channel_llrs(spec, y):
    """Leaf LLRs: int8 in {-1, 0, +1} for the BEC, float elsewhere."""
    y = np.asarray(y)
    if spec.kind == "BEC":
        return np.where(y < 0, 0, 1 - 2 * y).astype(np.int8)
    if spec.kind == "BSC":
        p = spec.parameter
        mag = LLR_CLIP if p in (0.0, 1.0) else min(abs(np.log((1 - p) / p)), LLR_CLIP)
        mag = mag if p <= 0.5 else -mag
        return (1.0 - 2.0 * y) * mag
    d = np.abs(y)
    with np.errstate(divide="ignore"):
        mag = np.minimum(np.log1p(d) - np.log1p(-d), LLR_CLIP)
    return np.sign(y) * mag


def _boxplus(a, b):
    s = np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
    return s + np.log1p(np.exp(-np.abs(a + b))) - np.log1p(np.exp(-np.abs(a - b)))


def _erasure_check(a, b):
    return a * b


def _erasure_var(a, b, va):
    return np.sign(b + np.where(va, -a, a)).astype(np.int8)


def _soft_var(a, b, va):
    return b + np.where(va, -a, a)


def _sc(llr, frozen, symbolic, genie):
    """SC recursion over a batch; returns (u_hat, leaf_llr) of shape (T, N)."""
    f = _erasure_check if symbolic else _boxplus
    g = _erasure_var if symbolic else _soft_var
    T, N = llr.shape
    u_hat = np.zeros((T, N), dtype=np.uint8)
    leaves = np.zeros((T, N), dtype=llr.dtype)

    def rec(L, lo):
        size = L.shape[1]
        if size == 1:
            leaves[:, lo] = L[:, 0]
            if not (frozen[lo] or genie):
                u_hat[:, lo] = L[:, 0] < 0
            return u_hat[:, lo : lo + 1]
        h = size // 2
        La, Lb = L[:, :h], L[:, h:]
        va = rec(f(La, Lb), lo)
        vb = rec(g(La, Lb, va), lo + h)
        return np.concatenate((va ^ vb, vb), axis=1)

    rec(llr, 0)
    return u_hat, leaves


def sc_decode(spec, observations, code, return_leaves=False):
    """Information-bit estimates; frozen bits are zero and LLR ties decode to 0."""
    obs = np.asarray(observations)
    single = obs.ndim == 1
    obs = np.atleast_2d(obs)
    if obs.shape[1] != code.N:
        raise ValueError(f"expected {code.N} observations, got {obs.shape[1]}")
    llr = channel_llrs(spec, obs)
    u_hat, leaves = _sc(llr, code.frozen, spec.kind == "BEC", genie=False)
    info = u_hat[:, list(code.info)]
    if single:
        info, leaves = info[0], leaves[0]
    return (info, leaves) if return_leaves else info


def genie_leaf_llrs(spec, observations, n):
    """Leaf LLRs when every earlier bit is known to be 0 (all-zero codeword)."""
    obs = np.atleast_2d(np.asarray(observations))
    llr = channel_llrs(spec, obs)
    frozen = np.ones(1 << n, dtype=bool)
    return _sc(llr, frozen, spec.kind == "BEC", genie=True)[1]


# ------------------------------------------------------------- simulation

def trial_rng(seed, trial):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, trial])))


def _zero_codeword_outputs(spec, N, trials, seed, first_trial=0):
    zeros = np.zeros(N, dtype=np.int8)
    return np.stack([transmit(spec, zeros, trial_rng(seed, t)) for t in range(first_trial, first_trial + trials)])


@dataclass
class SimReport:
    channel: str
    n: int
    rate: float
    trials: int
    block_errors: int
    seed: int
    bit_failures: np.ndarray = field(repr=False)

    @property
    def N(self):
        return 1 << self.n

    @property
    def block_error_rate(self):
        return self.block_errors / self.trials

    def as_row(self):
        return {
            "channel": self.channel,
            "N": self.N,
            "rate": self.rate,
            "trials": self.trials,
            "block_errors": self.block_errors,
            "seed": self.seed,
        }


def simulate(spec, code, trials, seed=0, batch=2000):
    """Transmit the all-zero codeword ``trials`` times and SC-decode.

    A block fails when some information bit is decoded wrongly or from a zero
    LLR; since ties decode to 0, the all-zero codeword would otherwise turn
    every erasure into a free success.  ``bit_failures[i]`` counts trials in
    which the genie-aided LLR of bit i is <= 0.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    info = list(code.info)
    block_errors = 0
    failures = np.zeros(code.N, dtype=np.int64)
    for start in range(0, trials, batch):
        count = min(batch, trials - start)
        y = _zero_codeword_outputs(spec, code.N, count, seed, start)
        llr = channel_llrs(spec, y)
        u_hat, leaves = _sc(llr, code.frozen, spec.kind == "BEC", genie=False)
        bad = (u_hat[:, info] != 0) | (leaves[:, info] == 0)
        block_errors += int(np.count_nonzero(bad.any(axis=1)))
        genie = genie_leaf_llrs(spec, y, code.n)
        failures += np.count_nonzero(genie <= 0, axis=0)
    return SimReport(format_channel_spec(spec), code.n, code.rate, trials, block_errors, seed, failures)


def genie_failure_rates(spec, n, trials, seed=0):
    """Per-index frequency of a non-positive genie-aided LLR (the BEC erasure rate)."""
    code = PolarCode(n, ())
    return simulate(spec, code, trials, seed).bit_failures / trials


def build_compound_code(P, Q, n, budget, m=CONSTRUCTION_GRID):
    """Polar code whose SC union bound is at most ``budget`` on both channels."""
    dens = [c.density() if isinstance(c, ChannelSpec) else c for c in (P, Q)]
    sel = select_compound_good_indices(dens, n, budget, m)
    return PolarCode(n, sel.indices, sel.union_bound)


def best_indices_code(scores, n, rate):
    """Code using the ``rate * 2^n`` indices with the smallest scores."""
    k = int(round(rate * (1 << n)))
    order = np.argsort(np.asarray(scores), kind="stable")[:k]
    return PolarCode(n, tuple(order))
