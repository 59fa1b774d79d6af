"""Concept inventory, event sampling and per-agent individuation.

Events are flat tuples of distinct atom identifiers (one action plus a
number of distinct entities).  Each interlocutor privately orders the
atoms of the jointly attended event; this ordering mismatch is the only
source of initial misalignment between speaker and hearer.
"""

from __future__ import annotations

import random
from dataclasses import dataclass


class ConfigurationError(ValueError):
    """Invalid model configuration, detected before any simulation work."""


@dataclass(frozen=True)
class ConceptInventory:
    """Fixed pool of action and entity atoms, identified by disjoint ints."""

    actions: tuple[int, ...]
    entities: tuple[int, ...]

    def __post_init__(self):
        if not self.actions or not self.entities:
            raise ConfigurationError("inventory partitions must be non-empty")
        all_atoms = self.actions + self.entities
        if len(set(all_atoms)) != len(all_atoms):
            raise ConfigurationError("inventory atoms must be distinct")

    @classmethod
    def default(cls, n_actions: int = 10, n_entities: int = 20) -> "ConceptInventory":
        if n_actions < 1 or n_entities < 1:
            raise ConfigurationError("inventory sizes must be >= 1")
        return cls(
            actions=tuple(range(n_actions)),
            entities=tuple(range(n_actions, n_actions + n_entities)),
        )


@dataclass(frozen=True)
class Event:
    """One sampled occurrence: a tuple of pairwise-distinct atoms."""

    atoms: tuple[int, ...]


@dataclass(frozen=True)
class Individuation:
    """An agent's private ordering of an event's atoms."""

    event: Event
    order: tuple[int, ...]


def sample_event(inventory: ConceptInventory, rng: random.Random, arity: int = 3) -> Event:
    """Draw one action and ``arity - 1`` distinct entities, all uniform."""
    if arity < 1:
        raise ConfigurationError("event arity must be >= 1")
    if len(inventory.entities) < arity - 1:
        raise ConfigurationError(
            f"need at least {arity - 1} entities for arity-{arity} events"
        )
    action = inventory.actions[rng.randrange(len(inventory.actions))]
    entities = rng.sample(inventory.entities, arity - 1)
    return Event(atoms=(action, *entities))


def individuate(event: Event, rng: random.Random) -> Individuation:
    """Return the event's atoms under a uniformly random permutation."""
    order = list(event.atoms)
    rng.shuffle(order)
    return Individuation(event=event, order=tuple(order))
