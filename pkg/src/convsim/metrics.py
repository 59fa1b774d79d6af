"""Per-run measures: windowed understanding rates, lexicon statistics and
the population-level mapping-share distribution."""

from __future__ import annotations

from dataclasses import dataclass

from .lexicon import lexicon_stats


@dataclass(frozen=True)
class WindowMetrics:
    committed_ratio: float | None
    precision: float | None
    recall: float | None
    f1: float | None
    lex_use: float | None
    lex_precision: float | None


@dataclass(frozen=True)
class PopulationLexiconMetrics:
    lex_size: float
    unique_meanings: float
    unique_forms: float
    synonymy: float
    homonymy: float


@dataclass(frozen=True)
class RunResult:
    combo_id: int
    arrangement: str
    p_sm: float
    theta: float
    run_index: int
    seed: int
    committed_ratio: float | None
    precision: float | None
    recall: float | None
    f1: float | None
    lex_use: float | None
    lex_precision: float | None
    lex_size: float
    unique_meanings: float
    unique_forms: float
    synonymy: float
    homonymy: float
    mapshare_avg: float | None
    share_exactly: tuple[float, ...]  # index k-1 = ratio known by exactly k agents


def window_interaction_metrics(outcomes) -> WindowMetrics:
    """Means over committed interactions in the measurement window.

    Discarded interactions only contribute to the committed ratio;
    lexicon precision additionally skips interactions with no matches.
    An empty committed set yields missing understanding fields.
    """
    if not outcomes:
        return WindowMetrics(None, None, None, None, None, None)
    committed = [o for o in outcomes if o.committed]
    ratio = len(committed) / len(outcomes)
    if not committed:
        return WindowMetrics(ratio, None, None, None, None, None)
    n = len(committed)
    precision = sum(o.precision for o in committed) / n
    recall = sum(o.recall for o in committed) / n
    f1 = sum(o.f1 for o in committed) / n
    lex_use = sum(o.lex_use for o in committed) / n
    with_matches = [o.lex_precision for o in committed if o.lex_precision is not None]
    lex_precision = sum(with_matches) / len(with_matches) if with_matches else None
    return WindowMetrics(ratio, precision, recall, f1, lex_use, lex_precision)


def population_lexicon_metrics(agents) -> PopulationLexiconMetrics:
    """Arithmetic means over agents of the per-lexicon statistics."""
    if not agents:
        raise ValueError("need at least one agent")
    stats = [lexicon_stats(a.lexicon) for a in agents]
    n = len(stats)
    return PopulationLexiconMetrics(
        lex_size=sum(s.size for s in stats) / n,
        unique_meanings=sum(s.unique_meanings for s in stats) / n,
        unique_forms=sum(s.unique_forms for s in stats) / n,
        synonymy=sum(s.synonymy for s in stats) / n,
        homonymy=sum(s.homonymy for s in stats) / n,
    )


def mapping_share(agents) -> tuple[float | None, tuple[float, ...]]:
    """Average number of knowers per global mapping plus exactly-k ratios.

    The global pool is the set of distinct (meaning, form) pairs across
    all lexicons; reinforcement counts are ignored.
    """
    if not agents:
        raise ValueError("need at least one agent")
    n = len(agents)
    knowers: dict[tuple, int] = {}
    for agent in agents:
        for pair in agent.lexicon.pairs():
            knowers[pair] = knowers.get(pair, 0) + 1
    if not knowers:
        return None, (0.0,) * n
    pool = len(knowers)
    counts = [0] * n
    for k in knowers.values():
        counts[k - 1] += 1
    share = tuple(c / pool for c in counts)
    # summed term-wise so avg == sum(k * share[k-1]) holds bit-exactly
    avg = sum(k * s for k, s in enumerate(share, start=1))
    return avg, share


def build_run_result(config, agents, outcomes) -> RunResult:
    wm = window_interaction_metrics(outcomes)
    pm = population_lexicon_metrics(agents)
    mapshare_avg, share = mapping_share(agents)
    return RunResult(
        combo_id=config.combo_id,
        arrangement=config.arrangement,
        p_sm=config.p_sm,
        theta=config.theta,
        run_index=config.run_index,
        seed=config.seed,
        committed_ratio=wm.committed_ratio,
        precision=wm.precision,
        recall=wm.recall,
        f1=wm.f1,
        lex_use=wm.lex_use,
        lex_precision=wm.lex_precision,
        lex_size=pm.lex_size,
        unique_meanings=pm.unique_meanings,
        unique_forms=pm.unique_forms,
        synonymy=pm.synonymy,
        homonymy=pm.homonymy,
        mapshare_avg=mapshare_avg,
        share_exactly=share,
    )
