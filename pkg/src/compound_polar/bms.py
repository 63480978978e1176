"""Binary-input memoryless symmetric channels in the |D| domain.

A channel is stored as a finite mixture of point masses on [0, 1]: the
distribution of |W(Y|0) - W(Y|1)| when Y ~ W(.|0).  Mass at 0 is an erasure,
mass at 1 is a perfectly known bit, and a single atom at 1 - 2p is a BSC(p).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

MERGE_TOL = 1e-14
MASS_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DDensity:
    """Canonical point-mass |D|-density.

    Every atom carries its |D| value ``support`` and its Bhattacharyya value
    ``z = sqrt(1 - d^2)``.  Both are kept because each one loses precision at
    the opposite end of [0, 1]; pass ``z`` when it is known more accurately
    than ``d`` (nearly perfect atoms), otherwise it is derived from ``d``.

    Atoms are sorted by increasing ``d``, merged when closer than
    ``MERGE_TOL`` in d and relatively in z, zero-mass atoms are dropped and masses
    renormalised.
    """

    support: np.ndarray
    mass: np.ndarray
    z: np.ndarray | None = None

    def __post_init__(self):
        d = np.asarray(self.support, dtype=float).ravel()
        w = np.asarray(self.mass, dtype=float).ravel()
        if d.shape != w.shape or d.size == 0:
            raise ValueError("support and mass must be non-empty and of equal length")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(w))):
            raise ValueError("non-finite support or mass")
        if np.any(d < -MERGE_TOL) or np.any(d > 1 + MERGE_TOL):
            raise ValueError("supports must lie in [0, 1]")
        if np.any(w < 0):
            raise ValueError("masses must be non-negative")
        total = w.sum()
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"masses sum to {total!r}, expected 1")
        d = np.clip(d, 0.0, 1.0)
        if self.z is None:
            z = np.sqrt((1.0 - d) * (1.0 + d))
        else:
            z = np.clip(np.asarray(self.z, dtype=float).ravel(), 0.0, 1.0)
            if z.shape != d.shape:
                raise ValueError("z must match support in length")
        keep = w > 0
        d, z, w = d[keep], z[keep], w[keep]
        order = np.lexsort((-z, d))
        d, z, w = d[order], z[order], w[order]
        if d.size > 1:
            # merge runs of coincident atoms onto the first member
            zgap = np.abs(np.diff(z)) > MERGE_TOL * np.maximum(z[1:], z[:-1])
            starts = np.concatenate(([True], (np.diff(d) > MERGE_TOL) | zgap))
            group = np.cumsum(starts) - 1
            w = np.bincount(group, weights=w)
            d, z = d[starts], z[starts]
        w = w / w.sum()
        for arr in (d, z, w):
            arr.setflags(write=False)
        object.__setattr__(self, "support", d)
        object.__setattr__(self, "mass", w)
        object.__setattr__(self, "z", z)

    @classmethod
    def from_points(cls, points):
        """Build from an iterable of ``(support, mass)`` pairs."""
        pts = list(points)
        return cls(np.array([p[0] for p in pts], float), np.array([p[1] for p in pts], float))

    @property
    def points(self):
        return list(zip(self.support.tolist(), self.mass.tolist()))

    @property
    def defect(self):
        """``1 - d`` per atom, accurate for nearly perfect atoms."""
        d, z = self.support, self.z
        return np.where(d > 0.5, z * z / (1.0 + d), 1.0 - d)

    def __len__(self):
        return self.support.size

    def __eq__(self, other):
        if not isinstance(other, DDensity):
            return NotImplemented
        return (
            self.support.shape == other.support.shape
            and np.array_equal(self.support, other.support)
            and np.array_equal(self.z, other.z)
            and np.array_equal(self.mass, other.mass)
        )

    def __hash__(self):
        return hash((self.support.tobytes(), self.z.tobytes(), self.mass.tobytes()))

    def allclose(self, other, atol=1e-12):
        return (
            self.support.shape == other.support.shape
            and np.allclose(self.support, other.support, rtol=0, atol=atol)
            and np.allclose(self.mass, other.mass, rtol=0, atol=atol)
        )

    def mix(self, other, t):
        """Convex combination ``t * self + (1 - t) * other``."""
        return DDensity(
            np.concatenate((self.support, other.support)),
            np.concatenate((t * self.mass, (1 - t) * other.mass)),
            np.concatenate((self.z, other.z)),
        )


def make_bec(eps):
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"erasure probability {eps} outside [0, 1]")
    return DDensity(np.array([0.0, 1.0]), np.array([eps, 1.0 - eps]))


def make_bsc(p):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"crossover probability {p} outside [0, 1]")
    return DDensity(np.array([abs(1.0 - 2.0 * p)]), np.array([1.0]), np.array([2.0 * math.sqrt(p * (1.0 - p))]))


def binary_entropy(x):
    """h2 in bits with 0 log 0 = 0; accepts scalars or arrays."""
    x = np.asarray(x, dtype=float)
    y = np.zeros_like(x)
    inner = (x > 0) & (x < 1)
    xi = x[inner]
    y[inner] = -xi * np.log2(xi) - (1 - xi) * np.log2(1 - xi)
    return y if y.ndim else float(y)


def entropy(a):
    return math.fsum(a.mass * binary_entropy(a.defect / 2.0))


def capacity(a):
    return 1.0 - entropy(a)


def bhattacharyya(a):
    return math.fsum(a.mass * a.z)


@dataclass(frozen=True)
class Functionals:
    capacity: float
    entropy: float
    bhattacharyya: float


def functionals(a):
    h = entropy(a)
    return Functionals(1.0 - h, h, bhattacharyya(a))


def bsc_with_capacity(capacity_target):
    """Crossover p in [0, 1/2] of the BSC whose capacity is ``capacity_target``."""
    if not 0.0 <= capacity_target <= 1.0:
        raise ValueError(f"capacity {capacity_target} outside [0, 1]")
    if capacity_target >= 1.0:
        return 0.0
    if capacity_target <= 0.0:
        return 0.5
    return brentq(
        lambda p: 1.0 - binary_entropy(p) - capacity_target,
        0.0,
        0.5,
        xtol=1e-15,
        rtol=4 * np.finfo(float).eps,
    )


def is_degraded_bsc_wrt_bec(p, eps, tol=1e-12):
    """True when BSC(p) is a degraded version of BEC(eps).

    BEC(eps) followed by "replace an erasure by a fair coin" is BSC(eps/2),
    and BSC(q) is degraded w.r.t. BSC(q') for q >= q'.
    """
    p = min(p, 1.0 - p)
    return eps <= 2.0 * p + tol


# ---------------------------------------------------------------- specs

@dataclass(frozen=True)
class ChannelSpec:
    kind: str  # "BEC", "BSC" or "MIXTURE"
    parameter: float | None = None
    points: tuple = field(default=())

    def __post_init__(self):
        if self.kind in ("BEC", "BSC"):
            if self.parameter is None or not 0.0 <= self.parameter <= 1.0:
                raise ValueError(f"{self.kind} parameter must lie in [0, 1]")
        elif self.kind == "MIXTURE":
            self.density()  # validates
        else:
            raise ValueError(f"unknown channel kind {self.kind!r}")

    def density(self):
        if self.kind == "BEC":
            return make_bec(self.parameter)
        if self.kind == "BSC":
            return make_bsc(self.parameter)
        return DDensity.from_points(self.points)

    def __str__(self):
        return format_channel_spec(self)


_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_SCALAR_RE = re.compile(rf"^\s*(bec|bsc)\s*:\s*({_NUM})\s*$", re.IGNORECASE)
_PAIR_RE = re.compile(rf"^\s*({_NUM})\s*@\s*({_NUM})\s*$")


def parse_channel_spec(text):
    """Parse ``bec:<e>``, ``bsc:<p>`` or ``mix:<d>@<w>,...`` (case-insensitive)."""
    m = _SCALAR_RE.match(text)
    if m:
        return ChannelSpec(m.group(1).upper(), float(m.group(2)))
    head, sep, body = text.partition(":")
    if not sep or head.strip().lower() != "mix":
        raise ValueError(f"malformed channel spec {text!r}")
    points = []
    for item in body.split(","):
        pm = _PAIR_RE.match(item)
        if not pm:
            raise ValueError(f"malformed mixture atom {item!r} in {text!r}")
        d, w = float(pm.group(1)), float(pm.group(2))
        if not 0.0 <= d <= 1.0 or w < 0.0:
            raise ValueError(f"mixture atom {item!r} out of range")
        points.append((d, w))
    return ChannelSpec("MIXTURE", None, tuple(points))


def format_density(a):
    return "mix:" + ",".join(f"{d:.15g}@{w:.15g}" for d, w in a.points)


def format_channel_spec(spec):
    if spec.kind == "MIXTURE":
        return "mix:" + ",".join(f"{d:.15g}@{w:.15g}" for d, w in spec.points)
    return f"{spec.kind.lower()}:{spec.parameter:.15g}"
