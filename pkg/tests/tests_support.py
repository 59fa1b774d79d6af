"""Shared helpers for the test suite: random decoder instances and the
gate state-preservation probe."""

import random

from convsim.dialogue import decode, encode, gate_and_commit, score
from convsim.lexicon import FormParams, Lexicon
from convsim.world import Event, Individuation


def _individuation(order):
    return Individuation(event=Event(atoms=tuple(sorted(order))), order=tuple(order))


def random_decode_instance(rng: random.Random):
    """A random (lexicon, text, individuation) triple within oracle limits:
    text length <= 12, alphabet <= 4, lexicon <= 8 mappings."""
    alphabet = rng.randint(2, 4)
    text = tuple(rng.randrange(alphabet) for _ in range(rng.randint(1, 12)))
    meanings = rng.sample(range(1, 7), 3)
    lex = Lexicon()
    for _ in range(rng.randint(0, 8)):
        form = tuple(rng.randrange(alphabet) for _ in range(rng.randint(1, 4)))
        lex.commit(rng.choice(meanings + [8, 9]), form, epoch=0)
    order = list(meanings)
    rng.shuffle(order)
    return lex, text, _individuation(order)


def failed_gate_preserves_state(rng: random.Random, attempts: int = 200) -> bool:
    """True iff every gated-and-failed interaction leaves both lexicons
    equal to their pre-interaction clones."""
    checked = 0
    for _ in range(attempts):
        speaker, hearer = Lexicon(), Lexicon()
        order = [1, 2, 3]
        rng.shuffle(order)
        utt, pending = encode(speaker, _individuation(order), rng, FormParams())
        rng.shuffle(order)
        dec = decode(hearer, utt.text, _individuation(order))
        out = score(utt, dec)
        if out.recall >= 1.0:
            continue
        before = (speaker.clone(), hearer.clone())
        committed = gate_and_commit(
            out, 1.0, 1.0, speaker, hearer, utt, pending, dec, 0, rng
        )
        if committed or speaker != before[0] or hearer != before[1]:
            return False
        checked += 1
    return checked > 0
