"""Association-known scheme 1: capacity-limited helper placement with
dedicated-cache-style delivery at rate (K-t)/(t+1).

Each file is split over t-subsets of users.  A helper may only store
subfiles covering the whole of its user group; the per-helper quota q is
what Ms buys, and whatever a user's helper could not hold lands in that
user's private cache.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .combin import binom, enumerate_ksubsets, rank_ksubset
from .model import (
    Association,
    InfeasibleSchemeError,
    NetworkConfig,
    Placement,
    SubfileId,
    Tier,
    Transmission,
    validate_demand,
)


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    t: Fraction
    quota: Fraction
    reasons: tuple[str, ...]


def corner_feasible(k: int, n: int, largest_group: int, t: int, helper_mem: Fraction) -> bool:
    """Envelope-corner gate: t covers the largest group and Ms fits the cap.

    Quota integrality is not required here; fractional quotas only block a
    direct single-run placement, not a memory-sharing corner.
    """
    if not largest_group <= t <= k:
        return False
    cap = Fraction(n * binom(k - largest_group, t - largest_group), binom(k, t))
    return helper_mem <= cap


def scheme1_feasible(config: NetworkConfig, assoc: Association) -> FeasibilityReport:
    """Direct-run gate: integer t, t >= L1, Ms under the cap, integer quota."""
    k, n = config.num_users, config.num_files
    l1 = assoc.largest_group
    t = Fraction(k) * config.total_mem / n
    reasons: list[str] = []
    if t.denominator != 1:
        reasons.append(f"t = {t} is not an integer")
        return FeasibilityReport(False, t, Fraction(0), tuple(reasons))
    t_int = int(t)
    if t_int < l1:
        reasons.append(f"t = {t_int} is below the largest group size {l1}")
    else:
        cap = Fraction(n * binom(k - l1, t_int - l1), binom(k, t_int))
        if config.helper_mem > cap:
            reasons.append(f"Ms = {config.helper_mem} exceeds the helper cap {cap}")
    quota = config.helper_mem * binom(k, t_int) / n
    if quota.denominator != 1:
        reasons.append(f"helper quota q = {quota} is not an integer")
    return FeasibilityReport(not reasons, t, quota, tuple(reasons))


def place_scheme1(config: NetworkConfig, assoc: Association) -> Placement:
    """Helpers take the q lexicographically smallest group-covering subsets;
    users absorb the rest of their own subsets."""
    report = scheme1_feasible(config, assoc)
    if not report.feasible:
        raise InfeasibleSchemeError("; ".join(report.reasons))
    k, n_files = config.num_users, config.num_files
    t = int(report.t)
    q = int(report.quota)
    size = Fraction(1, binom(k, t))
    all_tau = enumerate_ksubsets(k, t)

    helper_tau: list[list] = []
    for group in assoc.groups:
        members = set(group)
        qualifying = [tau for tau in all_tau if members <= set(tau.elements)]
        helper_tau.append(qualifying[:q])

    helpers = []
    for taus in helper_tau:
        helpers.append(
            frozenset(
                SubfileId(n, Tier.SINGLE, tau)
                for tau in taus
                for n in range(1, n_files + 1)
            )
        )
    users = []
    for user in range(1, k + 1):
        helper_set = {tau for tau in helper_tau[assoc.helper_of(user) - 1]}
        own = [tau for tau in all_tau if user in tau and tau not in helper_set]
        users.append(
            frozenset(
                SubfileId(n, Tier.SINGLE, tau)
                for tau in own
                for n in range(1, n_files + 1)
            )
        )
    return Placement(
        helper_contents=tuple(helpers),
        private_contents=tuple(users),
        subfile_size={Tier.SINGLE: size},
    )


def deliver_scheme1(config: NetworkConfig, demand: Sequence[int]) -> list[Transmission]:
    """One XOR per (t+1)-subset of users, exactly the dedicated-cache delivery."""
    d = validate_demand(config, demand)
    k = config.num_users
    t = Fraction(k) * config.total_mem / config.num_files
    if t.denominator != 1:
        raise InfeasibleSchemeError(f"t = {t} is not an integer")
    t_int = int(t)
    size = Fraction(1, binom(k, t_int))
    out = []
    for big_t in enumerate_ksubsets(k, t_int + 1):
        summands = frozenset(
            SubfileId(d[user - 1], Tier.SINGLE, big_t.without(user)) for user in big_t
        )
        out.append(Transmission(("T", big_t), summands, size))
    return out


def rate_scheme1(config: NetworkConfig) -> Fraction:
    t = Fraction(config.num_users) * config.total_mem / config.num_files
    if t.denominator != 1:
        raise InfeasibleSchemeError(f"t = {t} is not an integer")
    return Fraction(config.num_users - int(t), int(t) + 1)


def layout_scheme1(config: NetworkConfig) -> dict:
    """Byte layout of one unit file over its t-subset pieces."""
    k = config.num_users
    t = int(Fraction(k) * config.total_mem / config.num_files)
    size = Fraction(1, binom(k, t))
    return {
        (Tier.SINGLE, tau, None): (rank_ksubset(tau) * size, size)
        for tau in enumerate_ksubsets(k, t)
    }
