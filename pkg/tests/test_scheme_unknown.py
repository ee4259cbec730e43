from fractions import Fraction
from itertools import permutations

import pytest

from dualcache.bounds import (
    man_rate,
    man_reference_transmissions,
    pue_rate,
    pue_reference_transmissions,
)
from dualcache.combin import KSubset, binom
from dualcache.model import (
    InfeasibleSchemeError,
    NetworkConfig,
    SubfileId,
    Tier,
    build_association,
)
from dualcache.scheme_unknown import (
    deliver_unknown,
    place_unknown,
    rate_unknown,
    rate_unknown_general,
    unknown_params,
)
from dualcache.simulator import run_end_to_end


def test_params_split_evenly(net_4users):
    config, _ = net_4users
    params = unknown_params(config)
    assert (params.t_s, params.t_p) == (1, 2)
    assert params.f1 == params.f2 == Fraction(1, 2)


def test_params_reject_fractional_levels():
    config = NetworkConfig(4, 4, 2, Fraction(1, 2), Fraction(1))
    with pytest.raises(InfeasibleSchemeError):
        unknown_params(config)


def test_placement_matches_known_listing(net_4users):
    config, _ = net_4users
    placement = place_unknown(config)
    for helper in (1, 2):
        expected = frozenset(
            SubfileId(n, Tier.HELPER, KSubset(2, (helper,))) for n in range(1, 5)
        )
        assert placement.helper_contents[helper - 1] == expected
    # user 1 keeps the user-subset pieces whose index contains 1
    rho_of_user1 = [(1, 2), (1, 3), (1, 4)]
    expected = frozenset(
        SubfileId(n, Tier.PRIVATE, KSubset(4, rho))
        for n in range(1, 5)
        for rho in rho_of_user1
    )
    assert placement.private_contents[0] == expected


def test_placement_fills_memory_exactly(net_4users):
    config, _ = net_4users
    placement = place_unknown(config)
    for helper in (1, 2):
        assert placement.helper_load(helper) == config.helper_mem
    for user in range(1, 5):
        assert placement.user_load(user) == config.private_mem


def test_delivery_counts_and_rate(net_4users):
    config, assoc = net_4users
    out = deliver_unknown(config, assoc, (1, 2, 3, 4))
    tier1 = [t for t in out if t.label[0] == "T"]
    tier2 = [t for t in out if t.label[0] == "S"]
    assert len(tier1) == 3 and len(tier2) == 4
    total = sum((t.size for t in out), Fraction(0))
    assert total == Fraction(13, 12)
    assert rate_unknown(config, assoc.profile) == Fraction(13, 12)


def test_rate_is_demand_permutation_invariant(net_4users):
    config, assoc = net_4users
    sizes = {
        sum((t.size for t in deliver_unknown(config, assoc, d)), Fraction(0))
        for d in permutations((1, 2, 3, 4))
    }
    assert sizes == {Fraction(13, 12)}


def test_zero_memory_sends_whole_files():
    config = NetworkConfig(4, 4, 2, Fraction(0), Fraction(0))
    assoc = build_association(config, [[1, 2, 3], [4]])
    assert rate_unknown(config, assoc.profile) == 4
    out = deliver_unknown(config, assoc, (2, 1, 4, 3))
    assert len(out) == 4
    assert all(t.size == 1 for t in out)


def test_private_only_reduces_to_dedicated_delivery():
    config = NetworkConfig(4, 4, 2, Fraction(0), Fraction(2))
    assoc = build_association(config, [[1, 2, 3], [4]])
    demand = (3, 1, 2, 4)
    out = deliver_unknown(config, assoc, demand)
    got = [
        frozenset((s.file, s.idx_a.elements) for s in t.summands) for t in out
    ]
    expected = man_reference_transmissions(4, 2, demand)
    assert sorted(got, key=sorted) == sorted(expected, key=sorted)
    assert rate_unknown(config, assoc.profile) == man_rate(4, 4, Fraction(2))


def test_helper_only_reduces_to_shared_delivery():
    config = NetworkConfig(4, 4, 2, Fraction(2), Fraction(0))
    assoc = build_association(config, [[1, 2, 3], [4]])
    demand = (4, 2, 1, 3)
    out = deliver_unknown(config, assoc, demand)
    got = [
        frozenset((s.file, s.idx_a.elements) for s in t.summands) for t in out
    ]
    expected = pue_reference_transmissions(assoc, 1, demand)
    assert sorted(got, key=sorted) == sorted(expected, key=sorted)
    assert rate_unknown(config, assoc.profile) == pue_rate(
        2, 4, Fraction(2), assoc.profile
    )


def test_uniform_association_tier1_closed_form():
    # with equal group sizes the helper-tier term collapses to
    # (K/Lam) * (Lam - t_s) / (t_s + 1)
    config = NetworkConfig(8, 8, 4, Fraction(2), Fraction(2))
    assoc = build_association(config, [[1, 2], [3, 4], [5, 6], [7, 8]])
    params = unknown_params(config)
    t_s, t_p = params.t_s, params.t_p
    expected = params.f1 * Fraction(2 * (4 - t_s), t_s + 1) + params.f2 * Fraction(
        8 - t_p, t_p + 1
    )
    assert rate_unknown(config, assoc.profile) == expected


def test_general_rate_mixes_the_two_curves():
    config = NetworkConfig(4, 4, 2, Fraction(3, 4), Fraction(5, 4))
    assoc = build_association(config, [[1, 2, 3], [4]])
    m = config.total_mem
    alpha = config.helper_mem / m
    expected = alpha * pue_rate(2, 4, m, assoc.profile) + (1 - alpha) * man_rate(4, 4, m)
    assert rate_unknown_general(config, assoc.profile) == expected


def test_general_rate_agrees_at_integer_levels(net_4users):
    config, assoc = net_4users
    assert rate_unknown_general(config, assoc.profile) == rate_unknown(
        config, assoc.profile
    )


@pytest.mark.parametrize("lam,k,partition", [
    (2, 4, [[1, 2, 3], [4]]),
    (2, 4, [[1, 2], [3, 4]]),
    (3, 6, [[1, 2, 3], [4, 5], [6]]),
    (4, 4, [[1], [2], [3], [4]]),
])
def test_simulated_rate_equals_formula(lam, k, partition):
    n = k
    for t in range(1, k + 1):
        m = Fraction(t * n, k)
        if (Fraction(lam) * m / n).denominator != 1 or m > n:
            continue
        for ms_share in (Fraction(0), Fraction(1, 2), Fraction(1)):
            config = NetworkConfig(n, k, lam, ms_share * m, (1 - ms_share) * m)
            assoc = build_association(config, partition)
            report = run_end_to_end(config, assoc, tuple(range(1, k + 1)), seed=t)
            assert report.ok, report.failure
            assert report.measured_rate == rate_unknown(config, assoc.profile)
