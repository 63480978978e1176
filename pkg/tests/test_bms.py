import math
from decimal import Decimal, localcontext

import numpy as np
import pytest
from hypothesis import given, strategies as st

from compound_polar import (
    ChannelSpec,
    DDensity,
    bhattacharyya,
    binary_entropy,
    bsc_with_capacity,
    capacity,
    entropy,
    functionals,
    is_degraded_bsc_wrt_bec,
    make_bec,
    make_bsc,
    parse_channel_spec,
)
from compound_polar.bms import format_channel_spec, format_density

from strategies import mixtures

# frozen with an independent mpmath evaluation of the closed forms
Z_BSC_011002 = 0.6258293684
I_BSC_011002 = 0.50002372
P_HALF_CAPACITY = 0.11002786


def test_bsc_functionals_match_closed_forms():
    a = make_bsc(0.11002)
    assert bhattacharyya(a) == pytest.approx(Z_BSC_011002, abs=1e-10)
    assert capacity(a) == pytest.approx(I_BSC_011002, abs=1e-8)


def test_bec_functionals_are_exact():
    for eps in (0.0, 0.22004, 0.5, 1.0):
        a = make_bec(eps)
        assert capacity(a) == pytest.approx(1.0 - eps, abs=1e-15)
        assert bhattacharyya(a) == pytest.approx(eps, abs=1e-15)


def test_bec_022004_has_capacity_one_minus_eps():
    assert capacity(make_bec(0.22004)) == pytest.approx(0.77996, abs=1e-12)


def test_endpoint_channels():
    assert functionals(make_bsc(0.5)) == functionals(make_bec(1.0))
    f = functionals(make_bsc(0.0))
    assert (f.capacity, f.bhattacharyya) == (1.0, 0.0)


def test_bsc_with_capacity_half():
    assert bsc_with_capacity(0.5) == pytest.approx(P_HALF_CAPACITY, abs=1e-8)


def test_binary_entropy_values():
    assert binary_entropy(0.0) == 0.0 and binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.25) == pytest.approx(0.8112781245, abs=1e-10)
    np.testing.assert_allclose(binary_entropy(np.array([0.25, 0.75])), 0.8112781245, atol=1e-10)


@given(mixtures())
def test_capacity_plus_entropy_is_one(a):
    assert abs(capacity(a) + entropy(a) - 1.0) <= 1e-12


@given(st.floats(0.0, 1.0))
def test_bsc_bhattacharyya_two_forms(p):
    z = bhattacharyya(make_bsc(p))
    assert abs(z - 2 * math.sqrt(p * (1 - p))) <= 1e-12
    with localcontext() as ctx:
        ctx.prec = 60
        ref = (1 - (1 - 2 * Decimal(p)) ** 2).sqrt()
    assert abs(z - float(ref)) <= 1e-12


@given(st.floats(0.0, 0.5))
def test_bsc_with_capacity_inverts_capacity(p):
    assert abs(bsc_with_capacity(capacity(make_bsc(p))) - p) <= 1e-9


@given(mixtures(), st.randoms(use_true_random=False))
def test_functionals_invariant_under_reordering_and_splitting(a, rnd):
    pts = a.points
    split = []
    for d, w in pts:
        split += [(d, w / 3), (d, 2 * w / 3)]
    rnd.shuffle(split)
    b = DDensity.from_points(split)
    assert b == a or b.allclose(a)
    assert abs(capacity(b) - capacity(a)) <= 1e-12
    assert abs(bhattacharyya(b) - bhattacharyya(a)) <= 1e-12


def test_merging_of_close_supports():
    a = DDensity(np.array([0.3, 0.3 + 1e-16, 0.7]), np.array([0.25, 0.25, 0.5]))
    assert len(a) == 2
    np.testing.assert_allclose(a.mass, [0.5, 0.5])


@pytest.mark.parametrize(
    "support, mass",
    [([0.5], [0.9]), ([1.2], [1.0]), ([-0.1], [1.0]), ([0.2, 0.4], [1.5, -0.5]), ([], []), ([np.nan], [1.0])],
)
def test_invalid_densities_rejected(support, mass):
    with pytest.raises(ValueError):
        DDensity(np.array(support, dtype=float), np.array(mass, dtype=float))


@pytest.mark.parametrize("bad", [-0.1, 1.5])
def test_constructors_reject_out_of_range(bad):
    with pytest.raises(ValueError):
        make_bec(bad)
    with pytest.raises(ValueError):
        make_bsc(bad)


def test_degradation_predicate():
    # BSC(p) is a degraded BEC(eps) iff eps <= 2p
    assert is_degraded_bsc_wrt_bec(0.11002, 0.22004)
    assert is_degraded_bsc_wrt_bec(0.11002, 0.2)
    assert not is_degraded_bsc_wrt_bec(0.11002, 0.3)
    assert is_degraded_bsc_wrt_bec(0.89, 0.22)


def test_parse_channel_spec():
    assert parse_channel_spec("bec:0.5") == ChannelSpec("BEC", 0.5)
    assert parse_channel_spec("BSC:0.11002") == ChannelSpec("BSC", 0.11002)
    mix = parse_channel_spec("mix:0@0.3,1@0.7")
    assert mix.density() == make_bec(0.3)


@pytest.mark.parametrize(
    "text", ["bec", "bec:", "bec:1.5", "bsc:-0.1", "foo:0.1", "mix:", "mix:0.5", "mix:0.5@0.5", "mix:2@1"]
)
def test_parse_channel_spec_rejects(text):
    with pytest.raises(ValueError):
        parse_channel_spec(text)


@given(mixtures())
def test_spec_formatting_round_trips(a):
    spec = parse_channel_spec(format_density(a))
    assert spec.density().allclose(a, atol=1e-14)
    assert parse_channel_spec(format_channel_spec(spec)) == spec
