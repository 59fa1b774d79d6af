"""Agent lexicons: meaning-form mappings with reinforcement counts.

A form is a tuple of symbol ids over a small "phoneme" alphabet.  Forms
acquired by gap guessing may fall outside the invention length range;
the range constrains invention only.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .world import ConfigurationError

Form = tuple[int, ...]


@dataclass(frozen=True)
class FormParams:
    """Invention parameters: length range and alphabet size."""

    min_len: int = 2
    max_len: int = 5
    alphabet: int = 20

    def __post_init__(self):
        if not (1 <= self.min_len <= self.max_len):
            raise ConfigurationError("need 1 <= min_len <= max_len")
        if self.alphabet < 1:
            raise ConfigurationError("alphabet size must be >= 1")


@dataclass(frozen=True)
class LexiconStats:
    size: int
    unique_meanings: int
    unique_forms: int
    synonymy: float
    homonymy: float


def invent_form(rng: random.Random, params: FormParams) -> Form:
    """A fresh form: uniform length, i.i.d. uniform symbols.

    Collisions with existing forms are allowed; they are the only source
    of within-agent homonymy.
    """
    length = rng.randint(params.min_len, params.max_len)
    return tuple(rng.randrange(params.alphabet) for _ in range(length))


class Lexicon:
    """One agent's mapping store.

    Mappings only accumulate: a committed (meaning, form) pair is either
    inserted with count 1 or reinforced; nothing is ever removed.
    """

    __slots__ = ("by_meaning", "size")

    def __init__(self):
        # meaning -> {form: [count, created_at]}
        self.by_meaning: dict[int, dict[Form, list[int]]] = {}
        self.size = 0

    def commit(self, meaning: int, form: Form, epoch: int) -> None:
        forms = self.by_meaning.get(meaning)
        if forms is None:
            forms = {}
            self.by_meaning[meaning] = forms
        entry = forms.get(form)
        if entry is None:
            forms[form] = [1, epoch]
            self.size += 1
        else:
            entry[0] += 1

    def best_form(self, meaning: int) -> Form | None:
        """Highest-count form for a meaning.

        Ties break by most recent creation epoch, then by lexicographically
        smallest form, so selection is a pure function of the contents.
        """
        forms = self.by_meaning.get(meaning)
        if not forms:
            return None
        best = None
        best_key = None
        for form, (count, created) in forms.items():
            key = (-count, -created, form)
            if best_key is None or key < best_key:
                best_key = key
                best = form
        return best

    def mappings(self):
        """Iterate (meaning, form, count, created_at)."""
        for meaning, forms in self.by_meaning.items():
            for form, (count, created) in forms.items():
                yield meaning, form, count, created

    def pairs(self) -> set[tuple[int, Form]]:
        return {(m, f) for m, forms in self.by_meaning.items() for f in forms}

    def clone(self) -> "Lexicon":
        other = Lexicon()
        other.by_meaning = {
            m: {f: entry[:] for f, entry in forms.items()}
            for m, forms in self.by_meaning.items()
        }
        other.size = self.size
        return other

    def __eq__(self, other) -> bool:
        if not isinstance(other, Lexicon):
            return NotImplemented
        return self.by_meaning == other.by_meaning

    def __len__(self) -> int:
        return self.size


def lexicon_stats(lexicon: Lexicon) -> LexiconStats:
    size = lexicon.size
    if size == 0:
        return LexiconStats(0, 0, 0, 0.0, 0.0)
    meanings = set()
    forms = set()
    for meaning, form, _count, _created in lexicon.mappings():
        meanings.add(meaning)
        forms.add(form)
    return LexiconStats(
        size=size,
        unique_meanings=len(meanings),
        unique_forms=len(forms),
        synonymy=size / len(meanings),
        homonymy=size / len(forms),
    )
