"""Agent population, pairing schedules and the per-run simulation loop."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import metrics
from .dialogue import decode, encode, gate_and_commit, score
from .lexicon import FormParams, Lexicon
from .world import ConceptInventory, ConfigurationError, individuate, sample_event

FIXED = "fixed"
COMMUNITY = "community"
ARRANGEMENTS = (FIXED, COMMUNITY)


@dataclass
class Agent:
    id: int
    lexicon: Lexicon = field(default_factory=Lexicon)


def circle_method_rounds(n: int) -> list[list[tuple[int, int]]]:
    """Round-robin schedule: n-1 perfect matchings covering every pair."""
    if n < 2 or n % 2:
        raise ConfigurationError("circle method needs an even n >= 2")
    others = list(range(1, n))
    rounds = []
    for _ in range(n - 1):
        arr = [0] + others
        rounds.append([(arr[i], arr[n - 1 - i]) for i in range(n // 2)])
        others = others[-1:] + others[:-1]
    return rounds


@dataclass(frozen=True)
class PairingSchedule:
    arrangement: str
    round_length: int
    rounds: tuple[tuple[tuple[int, int], ...], ...]

    @classmethod
    def build(cls, arrangement: str, n_agents: int, round_length: int = 100) -> "PairingSchedule":
        if arrangement not in ARRANGEMENTS:
            raise ConfigurationError(f"unknown arrangement: {arrangement!r}")
        if n_agents < 2 or n_agents % 2:
            raise ConfigurationError("population size must be even and >= 2")
        if round_length < 1:
            raise ConfigurationError("round_length must be >= 1")
        if arrangement == FIXED:
            rounds = (tuple((i, i + 1) for i in range(0, n_agents, 2)),)
        else:
            rounds = tuple(tuple(r) for r in circle_method_rounds(n_agents))
        return cls(arrangement, round_length, rounds)


def pairs_for_epoch(schedule: PairingSchedule, epoch: int) -> tuple[tuple[int, int], ...]:
    if epoch < 0:
        raise ValueError("epoch must be >= 0")
    if schedule.arrangement == FIXED:
        return schedule.rounds[0]
    idx = (epoch // schedule.round_length) % len(schedule.rounds)
    return schedule.rounds[idx]


@dataclass(frozen=True)
class RunConfig:
    p_sm: float
    theta: float
    arrangement: str = FIXED
    n_agents: int = 10
    epochs: int = 1000
    interactions_per_epoch: int = 10
    n_actions: int = 10
    n_entities: int = 20
    event_arity: int = 3
    alphabet: int = 20
    form_len_min: int = 2
    form_len_max: int = 5
    window: int = 100
    round_length: int = 100
    seed: int = 0
    combo_id: int = 0
    run_index: int = 0

    def validate(self) -> None:
        if not 0.0 <= self.p_sm <= 1.0:
            raise ConfigurationError("p_sm must lie in [0, 1]")
        if self.p_sm > 0.0 and not 0.0 < self.theta <= 1.0:
            raise ConfigurationError("theta must lie in (0, 1] when gating is possible")
        if self.arrangement not in ARRANGEMENTS:
            raise ConfigurationError(f"unknown arrangement: {self.arrangement!r}")
        if self.n_agents < 2 or self.n_agents % 2:
            raise ConfigurationError("n_agents must be even and >= 2")
        if self.interactions_per_epoch != self.n_agents:
            raise ConfigurationError(
                "interactions_per_epoch must equal n_agents "
                "(one epoch = two expected interactions per agent)"
            )
        if self.epochs < 0 or self.window < 1:
            raise ConfigurationError("epochs must be >= 0 and window >= 1")
        self.inventory()  # size checks
        self.form_params()  # range checks

    def inventory(self) -> ConceptInventory:
        inv = ConceptInventory.default(self.n_actions, self.n_entities)
        if len(inv.entities) < self.event_arity - 1:
            raise ConfigurationError("entity inventory too small for event arity")
        return inv

    def form_params(self) -> FormParams:
        return FormParams(self.form_len_min, self.form_len_max, self.alphabet)


def run_simulation(config: RunConfig, trace_fn=None) -> "metrics.RunResult":
    """Execute one full run; fully determined by ``config.seed``."""
    result, _agents = run_simulation_detailed(config, trace_fn)
    return result


def run_simulation_detailed(config: RunConfig, trace_fn=None):
    """Like :func:`run_simulation` but also returns the final agents.

    ``trace_fn`` is called once per interaction with
    (index, epoch, speaker_id, hearer_id, utterance, decoding, outcome).
    """
    config.validate()
    rng = random.Random(config.seed)
    inventory = config.inventory()
    params = config.form_params()
    agents = [Agent(i) for i in range(config.n_agents)]
    schedule = PairingSchedule.build(config.arrangement, config.n_agents, config.round_length)
    window_start = max(0, config.epochs - config.window)
    outcomes = []
    interaction_index = 0
    for epoch in range(config.epochs):
        matching = pairs_for_epoch(schedule, epoch)
        in_window = epoch >= window_start
        for _ in range(config.interactions_per_epoch):
            a, b = matching[rng.randrange(len(matching))]
            if rng.random() < 0.5:
                a, b = b, a
            speaker, hearer = agents[a], agents[b]
            event = sample_event(inventory, rng, config.event_arity)
            spk_view = individuate(event, rng)
            hear_view = individuate(event, rng)
            utterance, pending = encode(speaker.lexicon, spk_view, rng, params)
            decoding = decode(hearer.lexicon, utterance.text, hear_view)
            outcome = score(utterance, decoding)
            gate_and_commit(
                outcome,
                config.p_sm,
                config.theta,
                speaker.lexicon,
                hearer.lexicon,
                utterance,
                pending,
                decoding,
                epoch,
                rng,
            )
            if in_window:
                outcomes.append(outcome)
            if trace_fn is not None:
                trace_fn(interaction_index, epoch, a, b, utterance, decoding, outcome)
            interaction_index += 1
    return metrics.build_run_result(config, agents, outcomes), agents
