"""Check/variable convolutions of |D|-densities and grid quantizers.

Point-mass rules::

    check:    D_x [x] D_y = D_{xy}
    variable: D_x (*) D_y = (1+xy)/2 D_{(x+y)/(1+xy)} + (1-xy)/2 D_{|x-y|/(1-xy)}

both extended bilinearly.  In the Bhattacharyya coordinate z = sqrt(1 - d^2)
the variable rule reads z1 = zx zy / (1 + xy), z2 = zx zy / (1 - xy), which is
how nearly perfect atoms are propagated without cancellation.

Quantizers move mass onto a finite grid.  Rounding an atom towards d = 0 gives
a degraded channel, rounding towards d = 1 an upgraded one; convolutions
preserve the degradation order, so binning after every convolution keeps a
whole density-evolution run on one side of the exact answer.

Two grids are provided:

``uniform``
    ``0 = p_1 < ... < p_m = 1`` equally spaced in d.
``bhattacharyya``
    equally spaced in z, plus a geometric tail of ``m // 8`` points between
    the first step and ``Z_FLOOR``.  Errors in Z per binning are then at most
    one z-step (or a relative step in the tail) instead of sqrt(2 / m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numba
import numpy as np

from .bms import DDensity, entropy

SNAP = 1e-9  # in grid steps
Z_FLOOR = 1e-15
DEFAULT_GRID = 4097
GRIDS = ("uniform", "bhattacharyya")


@dataclass(frozen=True)
class QuantizerMode:
    kind: str = "exact"  # "exact" | "degrade" | "upgrade"
    m: int | None = None
    grid: str = "bhattacharyya"

    def __post_init__(self):
        if self.kind not in ("exact", "degrade", "upgrade"):
            raise ValueError(f"unknown quantizer {self.kind!r}")
        if self.grid not in GRIDS:
            raise ValueError(f"unknown grid {self.grid!r}")
        if self.kind != "exact" and (self.m is None or self.m < 2):
            raise ValueError("grid size must be at least 2")

    @property
    def up(self):
        return self.kind == "upgrade"

    def __str__(self):
        return self.kind if self.kind == "exact" else f"{self.kind}({self.m},{self.grid})"


EXACT = QuantizerMode()


def degrade(m=DEFAULT_GRID, grid="bhattacharyya"):
    return QuantizerMode("degrade", m, grid)


def upgrade(m=DEFAULT_GRID, grid="bhattacharyya"):
    return QuantizerMode("upgrade", m, grid)


# -------------------------------------------------------------------- grids

def _tail_size(m):
    return m // 8 if m >= 64 else 0


@lru_cache(maxsize=16)
def _grid_params(m, kind):
    """(grid_code, linear steps L, tail size G, step h, log ratio) for the kernels."""
    if kind == "uniform":
        return 0, m - 1, 0, 1.0 / (m - 1), 0.0
    g = _tail_size(m)
    steps = m - 1 - g
    h = 1.0 / steps
    lnrho = math.log(h / Z_FLOOR) / g if g else 0.0
    return 1, steps, g, h, lnrho


@lru_cache(maxsize=16)
def grid_points(m, kind="uniform"):
    """Grid as ``(d, z)`` arrays in increasing d."""
    if m < 2:
        raise ValueError("grid size must be at least 2")
    code, steps, g, h, lnrho = _grid_params(m, kind)
    if code == 0:
        d = np.arange(m, dtype=float) / (m - 1)
        d[-1] = 1.0
        z = np.sqrt((1.0 - d) * (1.0 + d))
    else:
        # built in increasing z, then reversed
        tail = h * np.exp(-lnrho * np.arange(g, 0, -1)) if g else np.empty(0)
        lin = np.arange(1, steps + 1, dtype=float) / steps
        z = np.concatenate(([0.0], tail, lin))[::-1].copy()
        # rounding can break monotonicity where d is within an ulp of 1
        d = np.maximum.accumulate(np.sqrt((1.0 - z) * (1.0 + z)))
    d.setflags(write=False)
    z.setflags(write=False)
    return d, z


def grid(m):
    """Uniform grid points in d."""
    return grid_points(m, "uniform")[0]


@numba.njit(cache=True)
def _slot(d, z, m, code, steps, g, h, lnrho, up):
    """Grid index (increasing d) receiving an atom; ``up`` rounds towards d = 1."""
    if code == 0:
        t = d * (m - 1)
        k = int(np.ceil(t - SNAP)) if up else int(np.floor(t + SNAP))
        return min(max(k, 0), m - 1)
    if z <= 0.0:
        iz = 0
    elif z >= h * (1.0 - SNAP):
        t = z / h
        j = int(np.floor(t + SNAP)) if up else int(np.ceil(t - SNAP))
        iz = g + min(max(j, 1), steps)
    else:
        s = math.log(h / z) / lnrho if g > 0 else np.inf
        if up:
            k = int(np.ceil(s - SNAP)) if s < 1e18 else g + 1
            iz = 0 if k > g else g + 1 - max(k, 0)
        else:
            k = int(np.floor(s + SNAP)) if s < 1e18 else g + 1
            iz = g + 1 - min(max(k, 0), g) if g > 0 else g + 1
    return m - 1 - iz


@numba.njit(cache=True)
def _slots(d, z, m, code, steps, g, h, lnrho, up):
    out = np.empty(d.size, np.int64)
    for i in range(d.size):
        out[i] = _slot(d[i], z[i], m, code, steps, g, h, lnrho, up)
    return out


def _on_grid(w, m, kind):
    w = np.clip(w, 0.0, None)
    nz = w > 0
    gd, gz = grid_points(m, kind)
    return DDensity(gd[nz], w[nz], gz[nz])


def _quantize(a, m, up, kind="uniform"):
    if m < 2:
        raise ValueError("grid size must be at least 2")
    params = _grid_params(m, kind)
    k = _slots(a.support, a.z, m, *params, up)
    return _on_grid(np.bincount(k, weights=a.mass, minlength=m), m, kind)


def quantize_down(a, m, grid="uniform"):
    return _quantize(a, m, False, grid)


def quantize_up(a, m, grid="uniform"):
    return _quantize(a, m, True, grid)


def bin(a, mode):
    if mode.kind == "exact":
        return a
    return _quantize(a, mode.m, mode.up, mode.grid)


# ------------------------------------------------------------ exact algebra

def _pairs(a, b):
    x, y = np.meshgrid(a.support, b.support, indexing="ij")
    zx, zy = np.meshgrid(a.z, b.z, indexing="ij")
    ux, uy = np.meshgrid(a.defect, b.defect, indexing="ij")
    w = np.outer(a.mass, b.mass)
    return x.ravel(), y.ravel(), zx.ravel(), zy.ravel(), ux.ravel(), uy.ravel(), w.ravel()


def var_conv(a, b):
    x, y, zx, zy, ux, uy, w = _pairs(a, b)
    p = x * y
    q = ux + x * uy  # 1 - xy
    perfect = q <= 0.0
    qs = np.where(perfect, 1.0, q)
    d1 = np.minimum((x + y) / (1.0 + p), 1.0)
    z1 = np.where(perfect, 0.0, zx * zy / (1.0 + p))
    d2 = np.where(perfect, 0.0, np.minimum(np.abs(uy - ux) / qs, 1.0))
    z2 = np.where(perfect, 1.0, np.minimum(zx * zy / qs, 1.0))
    w1 = np.where(perfect, w, 0.5 * w * (1.0 + p))
    w2 = np.where(perfect, 0.0, 0.5 * w * q)
    return DDensity(
        np.concatenate((d1, d2)), np.concatenate((w1, w2)), np.concatenate((z1, z2))
    )


def chk_conv(a, b):
    x, y, zx, zy, ux, uy, w = _pairs(a, b)
    p = x * y
    q = ux + x * uy
    return DDensity(p, w, np.minimum(np.sqrt(np.maximum(q, 0.0) * (1.0 + p)), 1.0))


def conv(bit, a, b):
    """Variable convolution for ``bit == 1``, check convolution for ``bit == 0``."""
    return var_conv(a, b) if bit else chk_conv(a, b)


# ---------------------------------------------------- fused conv + binning

@numba.njit(cache=True)
def _conv_binned(bit, x, zx, ux, wx, y, zy, uy, wy, m, code, steps, g, h, lnrho, up, same):
    out = np.zeros(m)
    ny = y.size
    k1 = np.empty(ny, np.int64)
    k2 = np.empty(ny, np.int64)
    a1 = np.empty(ny)
    a2 = np.empty(ny)
    for i in range(x.size):
        xi = x[i]
        zi = zx[i]
        ui = ux[i]
        wi = wx[i]
        j0 = i if same else 0
        for j in range(j0, ny):
            yj = y[j]
            p = xi * yj
            q = ui + xi * uy[j]
            w = wi * wy[j]
            if same and j != i:
                w *= 2.0
            if bit == 0:
                zc = min(math.sqrt(max(q, 0.0) * (1.0 + p)), 1.0)
                k1[j] = _slot(p, zc, m, code, steps, g, h, lnrho, up)
                a1[j] = w
                k2[j] = 0
                a2[j] = 0.0
            elif q <= 0.0:
                k1[j] = m - 1
                a1[j] = w
                k2[j] = 0
                a2[j] = 0.0
            else:
                zp = zi * zy[j]
                d1 = min((xi + yj) / (1.0 + p), 1.0)
                d2 = min(abs(uy[j] - ui) / q, 1.0)
                k1[j] = _slot(d1, zp / (1.0 + p), m, code, steps, g, h, lnrho, up)
                k2[j] = _slot(d2, min(zp / q, 1.0), m, code, steps, g, h, lnrho, up)
                a1[j] = 0.5 * w * (1.0 + p)
                a2[j] = 0.5 * w * q
        for j in range(j0, ny):
            out[k1[j]] += a1[j]
            out[k2[j]] += a2[j]
    return out


def conv_binned(bit, a, b, mode):
    """``bin(conv(bit, a, b), mode)`` without materialising the raw product."""
    if mode.kind == "exact":
        return conv(bit, a, b)
    params = _grid_params(mode.m, mode.grid)
    w = _conv_binned(
        int(bit),
        a.support, a.z, a.defect, a.mass,
        b.support, b.z, b.defect, b.mass,
        mode.m, *params, mode.up, a is b,
    )
    return _on_grid(w, mode.m, mode.grid)


# ------------------------------------------------- grid entropy matching

def entropy_matching_mix(a, m):
    """Uniform-grid density with the entropy of ``a``, between its two quantizers."""
    qd = quantize_down(a, m)
    qu = quantize_up(a, m)
    hd, hu = entropy(qd), entropy(qu)
    if hd - hu <= 0.0:
        return qd
    t0 = min(1.0, max(0.0, (hd - entropy(a)) / (hd - hu)))
    return qu.mix(qd, t0)


def min_grid_size(delta):
    """Smallest m with m >= 1 + 1 / (1 - (1 - delta^2)^(1/4))."""
    if delta == 1.0:
        return 2
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta {delta} outside (0, 1]")
    gap = -math.expm1(0.25 * math.log1p(-delta * delta))
    return math.ceil(1.0 + 1.0 / gap)


def quantization_delta(m):
    """Worst-case |Z(a [x] a) - Z(b [x] b)| guaranteed on an m-point uniform grid."""
    if m < 2:
        raise ValueError("grid size must be at least 2")
    return math.sqrt(1.0 - (1.0 - 1.0 / (m - 1)) ** 4)
