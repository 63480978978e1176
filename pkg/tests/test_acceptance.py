"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import io
import itertools
import math
import time

import numpy as np

from compound_polar import (
    EXACT,
    ChannelSpec,
    DDensity,
    bhattacharyya,
    bound_table,
    build_compound_code,
    capacity,
    chk_conv,
    degradation_shortcut,
    degrade,
    encode,
    entropy,
    entropy_matching_mix,
    evaluate_all,
    improved_lower_bound,
    make_bec,
    make_bsc,
    min_grid_size,
    quantization_delta,
    simulate,
    solve_kkt,
    build_polytope,
    trivial_bounds,
    upgrade,
    var_conv,
    var_conv_max,
)
from compound_polar import cli, formats
from compound_polar.codec import genie_failure_rates
from compound_polar.trees import _cached_levels, bec_tree_profile

from strategies import random_mixture

# reference table for BSC(0.11002) and BEC(0.5), n = 0..6
TABLE_UPPER = [0.500, 0.482, 0.482, 0.482, 0.482, 0.482, 0.482]
TABLE_LOWER = [0.374, 0.407, 0.427, 0.440, 0.449, 0.456, 0.461]
TABLE_ROUNDING = 5e-4  # the reference cells carry three decimals


def test_criterion_01_trivial_bounds(acceptance):
    P, Q = make_bec(0.5), make_bsc(0.11002)
    bhattacharyya(Q), trivial_bounds(P, Q)  # warm up
    times = []
    for _ in range(5):
        t = time.perf_counter()
        z = bhattacharyya(make_bsc(0.11002))
        up, lo = trivial_bounds(make_bec(0.5), make_bsc(0.11002))
        times.append(time.perf_counter() - t)
    elapsed = float(np.median(times))
    ok = abs(z - 0.6258) <= 1e-4 and abs(up - 0.5) <= 1e-4 and abs(lo - 0.3742) <= 1e-4 and elapsed < 1e-3
    acceptance(1, ok, f"Z={z:.6f} upper={up:.6f} lower={lo:.6f} time={elapsed * 1e3:.3f}ms")
    assert ok


def test_criterion_02_example_table(acceptance):
    _cached_levels.cache_clear()
    out, err = io.StringIO(), io.StringIO()
    t = time.perf_counter()
    code = cli.run(["table", "--p", "bsc:0.11002", "--q", "bec:0.5", "--nmax", "6", "--grid", "4097"], out, err)
    elapsed = time.perf_counter() - t
    rows = formats.read_bounds(out.getvalue())
    assert code == 0 and len(rows) == 7
    worst_cell, worst_excess = 0.0, -1.0
    for r, pu, pl in zip(rows, TABLE_UPPER, TABLE_LOWER):
        du, dl = abs(r.upper - pu), abs(r.lower - pl)
        worst_cell = max(worst_cell, du, dl)
        worst_excess = max(worst_excess, du - r.upper_slack - TABLE_ROUNDING, dl - r.lower_slack - TABLE_ROUNDING)
    ok = worst_cell <= 0.002 and worst_excess <= 0.0 and elapsed < 30
    acceptance(
        2, ok,
        f"max|cell-ref|={worst_cell:.5f} max(dev-slack-rounding)={worst_excess:.5f} time={elapsed:.1f}s "
        f"upper={[round(r.upper, 4) for r in rows]} lower={[round(r.lower, 4) for r in rows]}",
    )
    assert ok


def test_criterion_03_degradation_shortcut(acceptance):
    P, Q = ChannelSpec("BEC", 0.22004), ChannelSpec("BSC", 0.11002)
    r = degradation_shortcut([P, Q])
    rows = bound_table(P.density(), Q.density(), 4)[1:]
    sandwich = all(row.lower <= 0.5 <= row.upper for row in rows)
    ok = r is not None and abs(r - 0.5) <= 1e-4 and sandwich
    acceptance(3, ok, f"shortcut={r:.6f} rows n=1..4 lower<=0.5<=upper: {sandwich}")
    assert ok


def test_criterion_04_universal_bound(acceptance):
    t = time.perf_counter()
    vmax = var_conv_max(0.5)
    sol = solve_kkt(build_polytope(0.5, 1024))
    bound = improved_lower_bound(0.5, 1024)
    refine = {m: solve_kkt(build_polytope(0.5, m)).objective for m in (128, 256, 512, 1024, 2048)}
    elapsed = time.perf_counter() - t
    stable = all(abs(v - 0.799) <= 0.01 for v in refine.values())
    ok = (
        abs(vmax - 0.3916) <= 5e-4
        and abs(sol.objective - 0.799) <= 0.01
        and abs(bound - 0.404) <= 0.01
        and stable
        and elapsed < 60
    )
    acceptance(
        4, ok,
        f"var_max={vmax:.5f} kkt={sol.objective:.5f} bound={bound:.5f} "
        f"refinement={[round(v, 6) for v in refine.values()]} time={elapsed:.1f}s",
    )
    assert ok


ROUNDOFF = 1e-12  # upper and lower coincide analytically when a BEC dominates


def test_criterion_05_monotone_bounds(acceptance):
    rng = np.random.default_rng(5)
    failures = []
    for k in range(20):
        pair = []
        for _ in range(2):
            if rng.random() < 0.5:
                pair.append(make_bec(float(rng.uniform(0.05, 0.95))))
            else:
                pair.append(make_bsc(float(rng.uniform(0.01, 0.49))))
        rows = bound_table(pair[0], pair[1], 5)
        for r in rows:
            if r.upper < r.lower - ROUNDOFF:
                failures.append((k, r.n, "upper<lower"))
        for a, b in zip(rows, rows[1:]):
            if b.upper > a.upper + a.upper_slack + b.upper_slack + ROUNDOFF:
                failures.append((k, b.n, "upper increased"))
            if b.lower < a.lower - a.lower_slack - b.lower_slack - ROUNDOFF:
                failures.append((k, b.n, "lower decreased"))
    ok = not failures
    acceptance(5, ok, f"20 pairs, n=0..5, violations={failures}")
    assert ok


def test_criterion_06_density_identities(acceptance):
    rng = np.random.default_rng(6)
    zmult = cons = 0.0
    for _ in range(100):
        a, b = random_mixture(rng), random_mixture(rng)
        zmult = max(zmult, abs(bhattacharyya(var_conv(a, b)) - bhattacharyya(a) * bhattacharyya(b)))
        cons = max(cons, abs(capacity(chk_conv(a, a)) + capacity(var_conv(a, a)) - 2 * capacity(a)))
    closure = True
    for eps in np.linspace(0, 1, 21):
        a = make_bec(float(eps))
        for c, e in ((var_conv(a, a), eps * eps), (chk_conv(a, a), 2 * eps - eps * eps)):
            closure &= bool(np.all(np.isin(c.support, [0.0, 1.0])))
            closure &= abs(bhattacharyya(c) - e) <= 1e-15
    ok = zmult <= 1e-10 and cons <= 1e-9 and closure
    acceptance(6, ok, f"max Z-mult err={zmult:.2e} max conservation err={cons:.2e} BEC closure={closure}")
    assert ok


def test_criterion_07_quantizers_bracket_exact(acceptance):
    rng = np.random.default_rng(7)
    inputs = [make_bsc(float(p)) for p in rng.uniform(0.01, 0.49, 4)]
    inputs += [random_mixture(rng, max_atoms=3) for _ in range(4)]
    modes = [(degrade(4097), upgrade(4097)), (degrade(65, "uniform"), upgrade(65, "uniform"))]
    worst = 0.0
    for w, n, (dn, up) in itertools.product(inputs, range(4), modes):
        ex = evaluate_all(w, n, EXACT, cache=False)
        lo, hi = evaluate_all(w, n, dn), evaluate_all(w, n, up)
        worst = max(
            worst,
            np.max(lo.capacity - ex.capacity),
            np.max(ex.capacity - hi.capacity),
            np.max(hi.bhattacharyya - ex.bhattacharyya),
            np.max(ex.bhattacharyya - lo.bhattacharyya),
        )
    ok = worst <= 1e-12
    acceptance(7, ok, f"{len(inputs)} inputs, n=0..3, worst bracket violation={worst:.2e}")
    assert ok


def _mixture_with_capacity_half(rng):
    a = random_mixture(rng)
    h = entropy(a)
    if abs(h - 0.5) < 1e-15:
        return a
    # pull the entropy to 1/2 with an erasure (H = 1) or a perfect atom (H = 0)
    anchor, h_anchor = (make_bec(1.0), 1.0) if h < 0.5 else (DDensity(np.array([1.0]), np.array([1.0])), 0.0)
    t = (0.5 - h_anchor) / (h - h_anchor)
    return a.mix(anchor, t)


def test_criterion_08_entropy_matching(acceptance):
    rng = np.random.default_rng(8)
    m = min_grid_size(0.05)
    delta = quantization_delta(m)
    herr = zerr = 0.0
    for _ in range(50):
        a = _mixture_with_capacity_half(rng)
        b = entropy_matching_mix(a, m)
        herr = max(herr, abs(entropy(b) - 0.5))
        zerr = max(zerr, abs(bhattacharyya(chk_conv(b, b)) - bhattacharyya(chk_conv(a, a))))
    ok = herr <= 1e-9 and zerr <= delta
    acceptance(8, ok, f"m={m} max|H(b)-0.5|={herr:.2e} max|dZ|={zerr:.2e} <= delta={delta:.4f}")
    assert ok


def test_criterion_09_codec(acceptance):
    words = np.array(list(itertools.product((0, 1), repeat=8)), dtype=np.uint8)
    exhaustive = bool(np.array_equal(encode(encode(words)), words))
    rng = np.random.default_rng(9)
    words = rng.integers(0, 2, (200, 1024), dtype=np.uint8)
    randomized = bool(np.array_equal(encode(encode(words)), words))
    trials = 10_000
    rates = genie_failure_rates(ChannelSpec("BEC", 0.5), 8, trials, seed=9)
    eps = bec_tree_profile(0.5, 8).bhattacharyya
    inside = int(np.count_nonzero(np.abs(rates - eps) <= 3 * np.sqrt(eps * (1 - eps) / trials)))
    ok = exhaustive and randomized and inside >= 250
    acceptance(9, ok, f"involution n=3 {exhaustive}, n=10 {randomized}; genie within 3 sigma: {inside}/256")
    assert ok


def test_criterion_10_end_to_end(acceptance):
    _cached_levels.cache_clear()
    t = time.perf_counter()
    P, Q = ChannelSpec("BEC", 0.5), ChannelSpec("BSC", 0.11002)
    code = build_compound_code(P, Q, 10, 0.05)
    reports = [simulate(s, code, 2000, seed=10) for s in (P, Q)]
    elapsed = time.perf_counter() - t
    limit = 0.05 + 3 * math.sqrt(0.05 / 2000)
    ok = code.rate >= 0.25 and all(r.block_error_rate <= limit for r in reports) and elapsed < 120
    acceptance(
        10, ok,
        f"rate={code.rate:.4f} union bound={code.union_bound:.4f} "
        + " ".join(f"{r.channel} BLER={r.block_error_rate:.4f}" for r in reports)
        + f" limit={limit:.4f} time={elapsed:.1f}s",
    )
    assert ok
