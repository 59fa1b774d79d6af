"""One interaction: encoding, boundary-free decoding, scoring, gated commit.

The speaker concatenates forms with no delimiter.  The hearer never sees
the boundaries: it segments the symbol string by dynamic programming
against the candidate mappings whose meanings belong to the jointly
attended event, then assigns remaining event atoms to unmatched gaps in
its own individuation order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .lexicon import Form, FormParams, Lexicon, invent_form
from .world import Individuation


@dataclass(frozen=True)
class GoldToken:
    start: int
    end: int
    meaning: int
    form: Form
    invented: bool


@dataclass(frozen=True)
class Utterance:
    text: tuple[int, ...]
    gold_tokens: tuple[GoldToken, ...]


@dataclass(frozen=True)
class Match:
    start: int
    end: int
    meaning: int
    form: Form


@dataclass(frozen=True)
class Guess:
    start: int
    end: int
    meaning: int


@dataclass(frozen=True)
class Decoding:
    matches: tuple[Match, ...]
    guesses: tuple[Guess, ...]


@dataclass
class InteractionOutcome:
    precision: float
    recall: float
    f1: float
    lex_use: float
    lex_precision: float | None
    gated: bool = False
    committed: bool = False


def encode(
    speaker: Lexicon,
    individuation: Individuation,
    rng: random.Random,
    params: FormParams,
) -> tuple[Utterance, list[tuple[int, Form]]]:
    """Produce the utterance for the speaker's private atom order.

    Atoms without an established form get a freshly invented one; those
    inventions are returned separately and enter the lexicon only if the
    interaction commits.
    """
    text: list[int] = []
    tokens: list[GoldToken] = []
    pending: list[tuple[int, Form]] = []
    pos = 0
    for atom in individuation.order:
        form = speaker.best_form(atom)
        invented = form is None
        if invented:
            form = invent_form(rng, params)
            pending.append((atom, form))
        end = pos + len(form)
        tokens.append(GoldToken(pos, end, atom, form, invented))
        text.extend(form)
        pos = end
    return Utterance(tuple(text), tuple(tokens)), pending


def _candidates(hearer: Lexicon, atoms: tuple[int, ...]):
    """Forms usable for segmentation: hearer mappings onto event atoms.

    Returns (form -> sorted meanings, atom -> mask bit).
    """
    bits = {atom: 1 << i for i, atom in enumerate(sorted(set(atoms)))}
    form_meanings: dict[Form, list[int]] = {}
    for atom in bits:
        forms = hearer.by_meaning.get(atom)
        if forms:
            for form in forms:
                form_meanings.setdefault(form, []).append(atom)
    for meanings in form_meanings.values():
        meanings.sort()
    return form_meanings, bits


def _finish(
    matches: tuple[Match, ...],
    text_len: int,
    hearer_order: tuple[int, ...],
) -> Decoding:
    """Turn unmatched stretches into guessed units for the leftover atoms.

    The hearer hypothesizes boundaries: each unmatched stretch is split
    into near-equal sub-segments, one per atom allocated to it, and the
    leftover atoms are assigned in the hearer's individuation order,
    left to right.  Atoms beyond the available symbols stay unheard;
    stretches beyond the available atoms carry no meaning.  Deterministic
    given (matches, text, individuation).
    """
    stretches: list[tuple[int, int]] = []
    pos = 0
    for m in matches:
        if m.start > pos:
            stretches.append((pos, m.start))
        pos = m.end
    if pos < text_len:
        stretches.append((pos, text_len))
    matched = {m.meaning for m in matches}
    remaining = [a for a in hearer_order if a not in matched]
    # Allocate sub-segment counts: repeatedly grant the stretch with the
    # most symbols per part (integer cross-comparison; ties leftmost).
    caps = [e - s for s, e in stretches]
    counts = [0] * len(stretches)
    for _ in range(len(remaining)):
        best_i = -1
        for i, cap in enumerate(caps):
            if counts[i] >= cap:
                continue
            if best_i < 0 or cap * (counts[best_i] + 1) > caps[best_i] * (counts[i] + 1):
                best_i = i
        if best_i < 0:
            break
        counts[best_i] += 1
    guesses: list[Guess] = []
    used = 0
    for (s, _e), cap, c in zip(stretches, caps, counts):
        if c == 0:
            continue
        base, extra = divmod(cap, c)
        p = s
        for idx in range(c):
            length = base + (1 if idx < extra else 0)
            guesses.append(Guess(p, p + length, remaining[used]))
            used += 1
            p += length
    return Decoding(matches=matches, guesses=tuple(guesses))


def decode(hearer: Lexicon, text: tuple[int, ...], individuation: Individuation) -> Decoding:
    """Optimal boundary-free segmentation of ``text``.

    Objective, lexicographic: most matched segments with pairwise-distinct
    meanings, then most covered symbols, then earliest starts with longer
    segments preferred, then smallest meaning sequence.  Fully
    deterministic.
    """
    atoms = individuation.order
    form_meanings, bits = _candidates(hearer, atoms)
    n = len(text)
    lengths = sorted({len(f) for f in form_meanings})
    # Suffix DP over (position, used-meaning mask); value is a fully
    # comparable key (-count, -coverage, startseq, meaningseq, matches).
    n_masks = 1 << len(bits)
    empty = (0, 0, (), (), ())
    rows: list[list] = [[empty] * n_masks for _ in range(n + 1)]
    get = form_meanings.get
    for pos in range(n - 1, -1, -1):
        options = []
        for length in lengths:
            if pos + length > n:
                break
            sub = text[pos : pos + length]
            meanings = get(sub)
            if meanings:
                options.append((length, sub, meanings))
        row = rows[pos]
        skip_row = rows[pos + 1]
        for mask in range(n_masks):
            best = skip_row[mask]  # leave this symbol inside a gap
            for length, sub, meanings in options:
                child_row = rows[pos + length]
                for meaning in meanings:
                    bit = bits[meaning]
                    if mask & bit:
                        continue
                    child = child_row[mask | bit]
                    cand = (
                        child[0] - 1,
                        child[1] - length,
                        ((pos, -length),) + child[2],
                        (meaning,) + child[3],
                        ((pos, pos + length, meaning, sub),) + child[4],
                    )
                    if cand < best:
                        best = cand
            row[mask] = best
    matches = tuple(Match(*m) for m in rows[0][0][4])
    return _finish(matches, n, atoms)


def brute_force_decode(
    hearer: Lexicon, text: tuple[int, ...], individuation: Individuation
) -> Decoding:
    """Exhaustive oracle for :func:`decode`; refuses texts longer than 16."""
    n = len(text)
    if n > 16:
        raise ValueError("brute_force_decode guard: text longer than 16")
    atoms = individuation.order
    form_meanings, _bits = _candidates(hearer, atoms)
    best_key = None
    best_matches: tuple = ()
    for boundaries in range(1 << max(n - 1, 0)):
        cuts = [0]
        for i in range(n - 1):
            if boundaries >> i & 1:
                cuts.append(i + 1)
        cuts.append(n)
        segments = [(cuts[i], cuts[i + 1]) for i in range(len(cuts) - 1)]

        def assign(idx: int, used: frozenset, acc: tuple):
            nonlocal best_key, best_matches
            if idx == len(segments):
                count = len(acc)
                cov = sum(e - s for s, e, _m, _f in acc)
                key = (
                    -count,
                    -cov,
                    tuple((s, -(e - s)) for s, e, _m, _f in acc),
                    tuple(m for _s, _e, m, _f in acc),
                )
                if best_key is None or key < best_key:
                    best_key = key
                    best_matches = acc
                return
            s, e = segments[idx]
            assign(idx + 1, used, acc)  # leave unmatched
            sub = text[s:e]
            for meaning in form_meanings.get(sub, ()):
                if meaning not in used:
                    assign(idx + 1, used | {meaning}, acc + ((s, e, meaning, sub),))

        assign(0, frozenset(), ())
    matches = tuple(Match(s, e, m, f) for s, e, m, f in best_matches)
    return _finish(matches, n, atoms)


def objective_value(text: tuple[int, ...], decoding: Decoding) -> tuple[int, int]:
    """(match count, covered symbols) of a decoding: the primary objective."""
    return (
        len(decoding.matches),
        sum(m.end - m.start for m in decoding.matches),
    )


def score(utterance: Utterance, decoding: Decoding) -> InteractionOutcome:
    """Understanding precision/recall/F1 plus the two lexicon-audit rates.

    A decoded unit (match or guess) counts as correct when its span and
    meaning both equal a speaker token's; recall is correct units over
    intended tokens, precision correct units over decoded units.  Wrong
    guesses therefore lower both rates, which is what the success gate
    ultimately filters on.
    """
    gold_spans = {(t.start, t.end, t.meaning) for t in utterance.gold_tokens}
    units = [(m.start, m.end, m.meaning) for m in decoding.matches]
    units.extend((g.start, g.end, g.meaning) for g in decoding.guesses)
    correct = sum(u in gold_spans for u in units)
    n_intended = len(utterance.gold_tokens)
    recall = correct / n_intended if n_intended else 1.0
    if units:
        precision = correct / len(units)
    else:
        precision = 1.0 if not n_intended else 0.0
    denom = precision + recall
    f1 = 2.0 * precision * recall / denom if denom else 0.0
    lex_use = len(decoding.matches) / n_intended
    if decoding.matches:
        hits = sum(
            (m.start, m.end, m.meaning) in gold_spans for m in decoding.matches
        )
        lex_precision = hits / len(decoding.matches)
    else:
        lex_precision = None
    return InteractionOutcome(precision, recall, f1, lex_use, lex_precision)


def gate_and_commit(
    outcome: InteractionOutcome,
    p_sm: float,
    theta: float,
    speaker: Lexicon,
    hearer: Lexicon,
    utterance: Utterance,
    pending_inventions: list[tuple[int, Form]],
    decoding: Decoding,
    epoch: int,
    rng: random.Random,
) -> bool:
    """Success gate: with probability p_sm, discard when recall < theta.

    On commit the speaker stores its inventions and reinforces every used
    mapping; the hearer reinforces its matches and stores every guess.
    """
    gated = rng.random() < p_sm
    outcome.gated = gated
    if gated and outcome.recall < theta:
        outcome.committed = False
        return False
    for tok in utterance.gold_tokens:
        speaker.commit(tok.meaning, tok.form, epoch)
    for m in decoding.matches:
        hearer.commit(m.meaning, m.form, epoch)
    text = utterance.text
    for g in decoding.guesses:
        hearer.commit(g.meaning, text[g.start : g.end], epoch)
    outcome.committed = True
    return True
