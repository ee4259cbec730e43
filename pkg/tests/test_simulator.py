from fractions import Fraction

import pytest

from dualcache.envelope import envelope_at, materialize_shared_placement, scheme2_corners
from dualcache.model import NetworkConfig, build_association
from dualcache.simulator import (
    adversarial_sweep,
    build_segment,
    choose_file_len,
    run_end_to_end,
)


def test_minimal_file_length(net_4users, net_6users_two_level):
    config, assoc = net_4users
    seg = build_segment("unknown", config, assoc, Fraction(1))
    assert choose_file_len([seg]) == 12
    assert choose_file_len([seg], min_len=13) == 24
    assert choose_file_len([seg], min_len=24) == 24
    c2, a2 = net_6users_two_level
    seg2 = build_segment("scheme2", c2, a2, Fraction(1))
    assert choose_file_len([seg2]) == 9


def test_file_length_for_mixtures(net_4users):
    config, assoc = net_4users
    sol = envelope_at(scheme2_corners(config, assoc), Fraction(1), Fraction(1))
    run = materialize_shared_placement(sol, config, assoc)
    assert 48 % choose_file_len(run.segments) == 0


def test_file_length_cap(net_4users):
    config, assoc = net_4users
    seg = build_segment("unknown", config, assoc, Fraction(1))
    with pytest.raises(ValueError):
        choose_file_len([seg], cap=11)


def test_weights_must_tile_the_file(net_4users):
    config, assoc = net_4users
    seg = build_segment("unknown", config, assoc, Fraction(1, 2))
    with pytest.raises(ValueError):
        choose_file_len([seg])


def test_end_to_end_byte_accounting(net_4users):
    config, assoc = net_4users
    report = run_end_to_end(config, assoc, (1, 2, 3, 4), seed=1)
    assert report.ok
    assert report.measured_rate == Fraction(13, 12)
    assert report.total_air_bytes == Fraction(13, 12) * report.file_len
    for user in range(4):
        assert report.private_bytes[user] == config.private_mem * report.file_len
        assert report.helper_bytes[user] == config.helper_mem * report.file_len
        # a user never pulls more off the air than was broadcast
        assert report.air_bytes[user] <= report.total_air_bytes


def test_decode_across_schemes(net_6users_deep, net_6users_two_level):
    c1, a1 = net_6users_deep
    r1 = run_end_to_end(c1, a1, (6, 5, 4, 3, 2, 1), scheme="scheme1", seed=2)
    assert r1.ok and r1.measured_rate == Fraction(2, 5)
    c2, a2 = net_6users_two_level
    r2 = run_end_to_end(c2, a2, (2, 3, 1, 6, 4, 5), scheme="scheme2", seed=3)
    assert r2.ok and r2.measured_rate == 1


def test_different_seeds_give_different_bytes(net_4users):
    config, assoc = net_4users
    a = run_end_to_end(config, assoc, (1, 2, 3, 4), seed=1)
    b = run_end_to_end(config, assoc, (1, 2, 3, 4), seed=2)
    assert a.ok and b.ok
    assert a.measured_rate == b.measured_rate


def test_adversarial_sweeps(net_4users, net_6users_two_level):
    config, assoc = net_4users
    sweep = adversarial_sweep(config, assoc, scheme="unknown", trials=8, seed=0)
    assert sweep.ok, sweep.first_failure
    assert sweep.worst_rate == Fraction(13, 12)
    c2, a2 = net_6users_two_level
    sweep2 = adversarial_sweep(c2, a2, scheme="scheme2", trials=8, seed=1)
    assert sweep2.ok, sweep2.first_failure
    assert sweep2.worst_rate == 1
    with pytest.raises(ValueError):
        adversarial_sweep(config, assoc, trials=0)


def test_single_user_network():
    config = NetworkConfig(1, 1, 1, Fraction(0), Fraction(0))
    assoc = build_association(config, [[1]])
    report = run_end_to_end(config, assoc, (1,), seed=4)
    assert report.ok
    assert report.measured_rate == 1


def test_zero_memory_broadcasts_everything(net_4users):
    _, assoc = net_4users
    config = NetworkConfig(4, 4, 2, Fraction(0), Fraction(0))
    report = run_end_to_end(config, assoc, (3, 4, 1, 2), seed=5)
    assert report.ok
    assert report.measured_rate == 4
    assert report.private_bytes == (0, 0, 0, 0)
