from fractions import Fraction

import pytest

from dualcache.model import NetworkConfig, build_association


@pytest.fixture
def net_4users():
    """N=K=4 with two helpers of sizes 3 and 1, one unit of each memory."""
    config = NetworkConfig(4, 4, 2, Fraction(1), Fraction(1))
    assoc = build_association(config, [[1, 2, 3], [4]])
    return config, assoc


@pytest.fixture
def net_6users_deep():
    """N=K=6, three helpers (3,2,1), memory pair where the single-level
    scheme is feasible with t=4."""
    config = NetworkConfig(6, 6, 3, Fraction(6, 5), Fraction(14, 5))
    assoc = build_association(config, [[1, 2, 3], [4, 5], [6]])
    return config, assoc


@pytest.fixture
def net_6users_two_level():
    """Same topology at a memory pair with integer two-level parameters."""
    config = NetworkConfig(6, 6, 3, Fraction(2), Fraction(4, 3))
    assoc = build_association(config, [[1, 2, 3], [4, 5], [6]])
    return config, assoc
