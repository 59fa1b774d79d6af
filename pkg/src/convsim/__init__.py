"""Agent-based simulator of emergent meaning-form conventions in
task-oriented dialogue, with a statistics and reporting pipeline."""

from .dialogue import (
    Decoding,
    InteractionOutcome,
    Utterance,
    brute_force_decode,
    decode,
    encode,
    gate_and_commit,
    score,
)
from .harness import ExperimentGrid, analyze, derive_seed, execute, expand_grid, report
from .lexicon import FormParams, Lexicon, LexiconStats, invent_form, lexicon_stats
from .metrics import RunResult, mapping_share, population_lexicon_metrics
from .population import Agent, PairingSchedule, RunConfig, pairs_for_epoch, run_simulation
from .stats import SampleStats, aggregate, fit_mapshare, student_t_sf, welch_t
from .world import ConceptInventory, Event, Individuation, individuate, sample_event

__version__ = "0.1.0"
