import dataclasses
import random
from collections import Counter

import pytest

from convsim.population import (
    COMMUNITY,
    FIXED,
    PairingSchedule,
    RunConfig,
    circle_method_rounds,
    pairs_for_epoch,
    run_simulation,
    run_simulation_detailed,
)
from convsim.world import ConfigurationError

SMALL = dict(epochs=60, window=20, round_length=10)


def small_config(**kw):
    base = dict(p_sm=0.0, theta=0.0, **SMALL)
    base.update(kw)
    return RunConfig(**base)


# -------------------------------------------------------------- schedules

def test_fixed_schedule_canonical_matching():
    sched = PairingSchedule.build(FIXED, 10)
    assert sched.rounds == (((0, 1), (2, 3), (4, 5), (6, 7), (8, 9)),)
    assert pairs_for_epoch(sched, 0) == pairs_for_epoch(sched, 999)


def test_circle_method_covers_every_pair_exactly_once():
    for n in (2, 4, 10, 12):
        rounds = circle_method_rounds(n)
        assert len(rounds) == n - 1
        seen = Counter()
        for matching in rounds:
            assert len(matching) == n // 2
            flat = [a for pair in matching for a in pair]
            assert sorted(flat) == list(range(n))
            for a, b in matching:
                seen[frozenset((a, b))] += 1
        assert len(seen) == n * (n - 1) // 2
        assert set(seen.values()) == {1}


def test_circle_method_rejects_odd_or_tiny():
    with pytest.raises(ConfigurationError):
        circle_method_rounds(3)
    with pytest.raises(ConfigurationError):
        circle_method_rounds(0)


def test_community_schedule_advances_every_round_length_epochs():
    sched = PairingSchedule.build(COMMUNITY, 10, round_length=100)
    assert pairs_for_epoch(sched, 0) == sched.rounds[0]
    assert pairs_for_epoch(sched, 99) == sched.rounds[0]
    assert pairs_for_epoch(sched, 100) == sched.rounds[1]
    assert pairs_for_epoch(sched, 899) == sched.rounds[8]
    # wraps around after n-1 rounds
    assert pairs_for_epoch(sched, 900) == sched.rounds[0]


def test_community_schedule_visits_all_rounds_over_horizon():
    sched = PairingSchedule.build(COMMUNITY, 10, round_length=100)
    visited = {pairs_for_epoch(sched, e) for e in range(0, 900, 100)}
    assert len(visited) == 9


def test_pairs_for_epoch_rejects_negative():
    sched = PairingSchedule.build(FIXED, 4)
    with pytest.raises(ValueError):
        pairs_for_epoch(sched, -1)


# ----------------------------------------------------------- RunConfig

def test_run_config_validation_errors():
    with pytest.raises(ConfigurationError):
        RunConfig(p_sm=1.5, theta=0.5).validate()
    with pytest.raises(ConfigurationError):
        RunConfig(p_sm=0.5, theta=0.0).validate()
    with pytest.raises(ConfigurationError):
        RunConfig(p_sm=0.0, theta=0.0, arrangement="ring").validate()
    with pytest.raises(ConfigurationError):
        RunConfig(p_sm=0.0, theta=0.0, n_agents=7, interactions_per_epoch=7).validate()
    with pytest.raises(ConfigurationError):
        RunConfig(p_sm=0.0, theta=0.0, interactions_per_epoch=5).validate()
    # theta sentinel is allowed when gating is off
    RunConfig(p_sm=0.0, theta=0.0).validate()


# ----------------------------------------------------------- simulation

def test_run_simulation_is_deterministic():
    cfg = small_config(p_sm=0.5, theta=0.5, seed=123)
    assert run_simulation(cfg) == run_simulation(cfg)


def test_run_simulation_seed_changes_outcome():
    a = run_simulation(small_config(seed=1))
    b = run_simulation(small_config(seed=2))
    assert a != b


def test_theta_inert_when_p_sm_zero():
    a = run_simulation(small_config(p_sm=0.0, theta=0.0, seed=9))
    b = run_simulation(small_config(p_sm=0.0, theta=1.0, seed=9))
    assert dataclasses.replace(a, theta=0.0) == dataclasses.replace(b, theta=0.0)


def test_zero_epoch_run_yields_empty_window_and_lexicons():
    result = run_simulation(small_config(epochs=0, seed=0))
    assert result.committed_ratio is None
    assert result.f1 is None
    assert result.lex_size == 0.0
    assert result.mapshare_avg is None
    assert result.share_exactly == (0.0,) * 10


def test_p_sm_zero_commits_everything():
    result = run_simulation(small_config(seed=4))
    assert result.committed_ratio == 1.0


def test_trace_covers_every_interaction_and_window():
    cfg = small_config(p_sm=1.0, theta=0.25, seed=5)
    seen = []
    run_simulation(cfg, trace_fn=lambda i, e, s, h, u, d, o: seen.append((i, e, s, h, o)))
    assert len(seen) == cfg.epochs * cfg.interactions_per_epoch
    assert [i for i, *_ in seen] == list(range(len(seen)))
    epochs = [e for _i, e, *_ in seen]
    assert epochs == sorted(epochs)
    assert all(s != h for _i, _e, s, h, _o in seen)


def test_fixed_arrangement_only_pairs_partners():
    cfg = small_config(seed=6, arrangement=FIXED)
    pairs = set()
    run_simulation(cfg, trace_fn=lambda i, e, s, h, u, d, o: pairs.add(frozenset((s, h))))
    assert pairs <= {frozenset((i, i + 1)) for i in range(0, 10, 2)}


def test_community_arrangement_respects_schedule():
    cfg = small_config(seed=7, arrangement=COMMUNITY, round_length=10)
    sched = PairingSchedule.build(COMMUNITY, 10, round_length=10)
    ok = []

    def check(i, epoch, s, h, u, d, o):
        allowed = {frozenset(p) for p in pairs_for_epoch(sched, epoch)}
        ok.append(frozenset((s, h)) in allowed)

    run_simulation(cfg, trace_fn=check)
    assert all(ok)


def test_participation_roughly_balanced():
    cfg = small_config(epochs=300, window=20, seed=8, arrangement=COMMUNITY)
    counts = Counter()

    def tally(i, e, s, h, u, d, o):
        counts[s] += 1
        counts[h] += 1

    run_simulation(cfg, trace_fn=tally)
    total = sum(counts.values())
    assert total == 2 * cfg.epochs * cfg.interactions_per_epoch
    for agent in range(10):
        assert abs(counts[agent] / total - 0.1) < 0.005 * 10  # within 5% relative


def test_detailed_returns_final_agents():
    cfg = small_config(seed=10)
    result, agents = run_simulation_detailed(cfg)
    assert [a.id for a in agents] == list(range(10))
    assert result.lex_size == sum(a.lexicon.size for a in agents) / 10


def test_full_gating_blocks_all_commits_at_theta_one_short_run():
    # from empty lexicons, exact-span full recall is extremely unlikely in
    # the first interaction; with p_sm=1 and theta=1 nothing bootstraps
    cfg = small_config(p_sm=1.0, theta=1.0, epochs=30, window=30, seed=11)
    result = run_simulation(cfg)
    assert result.committed_ratio < 0.2
