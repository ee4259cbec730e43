import json
from fractions import Fraction

import pytest

from dualcache.model import (
    ConfigError,
    NetworkConfig,
    build_association,
    load_config,
    parse_fraction,
    validate_demand,
)


def test_parse_fraction_forms():
    assert parse_fraction(3) == Fraction(3)
    assert parse_fraction("6/5") == Fraction(6, 5)
    assert parse_fraction(0.1) == Fraction(1, 10)
    assert parse_fraction(Fraction(2, 7)) == Fraction(2, 7)
    with pytest.raises(ConfigError):
        parse_fraction("abc")
    with pytest.raises(ConfigError):
        parse_fraction("1/0")
    with pytest.raises(ConfigError):
        parse_fraction(True)


def test_config_validation():
    NetworkConfig(4, 4, 2, Fraction(1), Fraction(1))
    with pytest.raises(ConfigError):
        NetworkConfig(3, 4, 2, Fraction(0), Fraction(0))  # N < K
    with pytest.raises(ConfigError):
        NetworkConfig(4, 3, 4, Fraction(0), Fraction(0))  # Lambda > K
    with pytest.raises(ConfigError):
        NetworkConfig(4, 4, 2, Fraction(3), Fraction(2))  # memory over N
    with pytest.raises(ConfigError):
        NetworkConfig(4, 4, 2, Fraction(-1), Fraction(0))


def test_association_relabels_by_group_size():
    config = NetworkConfig(6, 6, 3, Fraction(1), Fraction(1))
    assoc = build_association(config, [[6], [1, 2, 3], [4, 5]])
    assert assoc.profile == (3, 2, 1)
    assert assoc.groups == ((1, 2, 3), (4, 5), (6,))
    assert assoc.original_label == (2, 3, 1)
    assert assoc.helper_of(6) == 3
    assert assoc.user_at(1, 2) == 2
    assert assoc.ordered_users() == (1, 2, 3, 4, 5, 6)
    assert assoc.original_partition() == [[6], [1, 2, 3], [4, 5]]


def test_association_tie_break_keeps_original_order():
    config = NetworkConfig(4, 4, 2, Fraction(1), Fraction(1))
    assoc = build_association(config, [[3, 4], [1, 2]])
    assert assoc.groups == ((3, 4), (1, 2))
    assert assoc.original_label == (1, 2)


def test_association_allows_empty_groups():
    config = NetworkConfig(4, 4, 3, Fraction(1), Fraction(1))
    assoc = build_association(config, [[1, 2], [], [3, 4]])
    assert assoc.profile == (2, 2, 0)


def test_association_rejects_bad_partitions():
    config = NetworkConfig(4, 4, 2, Fraction(1), Fraction(1))
    with pytest.raises(ConfigError):
        build_association(config, [[1, 2], [2, 3, 4]])  # duplicate user
    with pytest.raises(ConfigError):
        build_association(config, [[1, 2], [3]])  # user 4 missing
    with pytest.raises(ConfigError):
        build_association(config, [[1, 2, 3, 4]])  # wrong group count
    with pytest.raises(ConfigError):
        build_association(config, [[1, 2, 5], [3, 4]])  # out of range


def test_demand_validation():
    config = NetworkConfig(4, 4, 2, Fraction(1), Fraction(1))
    assert validate_demand(config, [2, 1, 4, 3]) == (2, 1, 4, 3)
    with pytest.raises(ConfigError):
        validate_demand(config, [1, 2, 3])
    with pytest.raises(ConfigError):
        validate_demand(config, [1, 1, 2, 3])
    with pytest.raises(ConfigError):
        validate_demand(config, [1, 2, 3, 5])


def test_load_config_from_json(tmp_path):
    payload = {
        "N": 6, "K": 6, "Lambda": 3, "Ms": "6/5", "Mp": "14/5",
        "association": [[1, 2, 3], [4, 5], [6]],
        "demand": [1, 2, 3, 4, 5, 6], "seed": 11,
    }
    path = tmp_path / "net.json"
    path.write_text(json.dumps(payload))
    loaded = load_config(path)
    assert loaded.config.helper_mem == Fraction(6, 5)
    assert loaded.config.private_mem == Fraction(14, 5)
    assert loaded.association.profile == (3, 2, 1)
    assert loaded.demand == (1, 2, 3, 4, 5, 6)
    assert loaded.seed == 11


def test_load_config_missing_key():
    with pytest.raises(ConfigError):
        load_config({"N": 4, "K": 4, "Lambda": 2, "Ms": 1})
