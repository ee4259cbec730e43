from fractions import Fraction
from itertools import permutations

import pytest

from dualcache.combin import KSubset, binom
from dualcache.converse import build_h, certify, user_positions, verify_acyclic
from dualcache.model import NetworkConfig, SubfileId, Tier, build_association


def _helper_sub(n, tau):
    return SubfileId(n, Tier.HELPER, KSubset(2, tau))


def _private_sub(n, rho):
    return SubfileId(n, Tier.PRIVATE, KSubset(4, rho))


def test_positions_follow_group_order(net_4users):
    _, assoc = net_4users
    assert user_positions(assoc) == {1: 1, 2: 2, 3: 3, 4: 4}


def test_certificate_set_listing(net_4users):
    config, assoc = net_4users
    h1, h2 = build_h(config, assoc, (1, 2, 3, 4))
    assert h1 == frozenset({
        _helper_sub(1, (2,)), _helper_sub(2, (2,)), _helper_sub(3, (2,)),
    })
    assert h2 == frozenset({
        _private_sub(1, (2, 3)), _private_sub(1, (2, 4)),
        _private_sub(1, (3, 4)), _private_sub(2, (3, 4)),
    })


def test_certificate_is_tight_and_acyclic(net_4users):
    config, assoc = net_4users
    cert = certify(config, assoc, (1, 2, 3, 4))
    assert cert.alpha_lower == cert.kappa_upper == Fraction(13, 12)
    assert cert.acyclic and cert.tight


def test_adding_a_known_subfile_creates_a_cycle(net_4users):
    config, assoc = net_4users
    h1, h2 = build_h(config, assoc, (1, 2, 3, 4))
    assert verify_acyclic(config, assoc, (1, 2, 3, 4), h1 | h2)
    # user 1 wants file 1 and caches W2's {1,3} piece; user 2 wants file 2
    # and caches W1's {2,3} piece, closing a 2-cycle
    poisoned = h1 | h2 | {_private_sub(2, (1, 3))}
    assert not verify_acyclic(config, assoc, (1, 2, 3, 4), poisoned)


def test_set_sizes_match_closed_forms(net_4users):
    config, assoc = net_4users
    # per ordered user: helper subsets avoiding helpers 1..c, and user
    # subsets drawn from the strictly later ordered users
    for demand in [(1, 2, 3, 4), (4, 3, 2, 1), (2, 4, 1, 3)]:
        h1, h2 = build_h(config, assoc, demand)
        expected_h1 = sum(
            binom(2 - assoc.helper_of(u), 1) for u in range(1, 5)
        )
        pos = user_positions(assoc)
        expected_h2 = sum(binom(4 - pos[u], 2) for u in range(1, 5))
        assert len(h1) == expected_h1
        assert len(h2) == expected_h2


def test_tight_for_every_demand_permutation(net_4users):
    config, assoc = net_4users
    for demand in permutations((1, 2, 3, 4)):
        cert = certify(config, assoc, demand)
        assert cert.tight and cert.acyclic


def test_lower_bound_never_exceeds_rate():
    for ms, mp in [(Fraction(2), Fraction(0)), (Fraction(0), Fraction(2)),
                   (Fraction(1), Fraction(1)), (Fraction(1, 2), Fraction(3, 2))]:
        config = NetworkConfig(4, 4, 2, ms, mp)
        assoc = build_association(config, [[1, 2], [3, 4]])
        cert = certify(config, assoc, (2, 1, 4, 3))
        assert cert.alpha_lower <= cert.kappa_upper


def test_zero_memory_rejected():
    config = NetworkConfig(4, 4, 2, Fraction(0), Fraction(0))
    assoc = build_association(config, [[1, 2, 3], [4]])
    with pytest.raises(ValueError):
        certify(config, assoc, (1, 2, 3, 4))
