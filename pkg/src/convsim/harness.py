"""Experiment grid expansion, deterministic seeding, batch execution and
the CSV analysis/report pipeline."""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .population import (
    ARRANGEMENTS,
    COMMUNITY,
    FIXED,
    RunConfig,
    run_simulation,
    run_simulation_detailed,
)
from .stats import SampleStats, SingularFitError, aggregate, fit_mapshare, welch_t
from .world import ConfigurationError

_MASK64 = (1 << 64) - 1

# Interaction-window and lexicon metrics, in runs.csv column order.
METRICS = (
    "committed_ratio",
    "precision",
    "recall",
    "f1",
    "lex_use",
    "lex_precision",
    "lex_size",
    "unique_meanings",
    "unique_forms",
    "synonymy",
    "homonymy",
    "mapshare_avg",
)


@dataclass(frozen=True)
class ExperimentGrid:
    p_sm_levels: tuple[float, ...] = (0.0, 0.25, 0.5, 0.75, 1.0)
    theta_levels: tuple[float, ...] = (0.25, 0.5, 0.75, 1.0)
    arrangements: tuple[str, ...] = (FIXED, COMMUNITY)
    runs: int = 600
    master_seed: int = 0
    base: RunConfig = RunConfig(p_sm=0.0, theta=0.0)

    def validate(self) -> None:
        for name, levels, low_open in (
            ("p_sm_levels", self.p_sm_levels, False),
            ("theta_levels", self.theta_levels, True),
        ):
            if not levels:
                raise ConfigurationError(f"{name} must be non-empty")
            if list(levels) != sorted(levels):
                raise ConfigurationError(f"{name} must be sorted ascending")
            if len(set(levels)) != len(levels):
                raise ConfigurationError(f"{name} contains duplicate levels")
            for v in levels:
                if not 0.0 <= v <= 1.0 or (low_open and v == 0.0):
                    raise ConfigurationError(f"{name} value {v} out of range")
        if not self.arrangements:
            raise ConfigurationError("arrangements must be non-empty")
        if len(set(self.arrangements)) != len(self.arrangements):
            raise ConfigurationError("duplicate arrangements")
        for a in self.arrangements:
            if a not in ARRANGEMENTS:
                raise ConfigurationError(f"unknown arrangement: {a!r}")
        if self.runs < 1:
            raise ConfigurationError("runs must be >= 1")


@dataclass(frozen=True)
class ComboSpec:
    combo_id: int
    arrangement: str
    p_sm: float
    theta: float  # 0.0 sentinel when p_sm == 0 (gate never fires)


def expand_grid(grid: ExperimentGrid) -> list[ComboSpec]:
    """Canonical combo order: arrangement-major, then p_sm, then theta.

    At p_sm = 0 the threshold is inert, so that level is emitted exactly
    once per arrangement (theta recorded as 0).
    """
    grid.validate()
    combos = []
    cid = 0
    for arrangement in grid.arrangements:
        for p_sm in grid.p_sm_levels:
            if p_sm == 0.0:
                combos.append(ComboSpec(cid, arrangement, 0.0, 0.0))
                cid += 1
            else:
                for theta in grid.theta_levels:
                    combos.append(ComboSpec(cid, arrangement, p_sm, theta))
                    cid += 1
    return combos


_INT_KEYS = {
    "actions": "n_actions",
    "entities": "n_entities",
    "event_arity": "event_arity",
    "alphabet": "alphabet",
    "form_len_min": "form_len_min",
    "form_len_max": "form_len_max",
    "agents": "n_agents",
    "epochs": "epochs",
    "interactions_per_epoch": "interactions_per_epoch",
    "window": "window",
    "round_length": "round_length",
}
_GRID_KEYS = ("p_sm_levels", "theta_levels", "arrangements", "runs", "master_seed")


def parse_config_text(text: str) -> dict:
    """Parse the flat ``key = value`` experiment config format."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"config line {lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key in _INT_KEYS or key in ("runs", "master_seed"):
            values[key] = int(val)
        elif key in ("p_sm_levels", "theta_levels"):
            values[key] = tuple(float(v) for v in val.split(","))
        elif key == "arrangements":
            values[key] = tuple(v.strip() for v in val.split(","))
        else:
            raise ConfigurationError(f"config line {lineno}: unknown key {key!r}")
    return values


def grid_from_config(values: dict) -> ExperimentGrid:
    base_kwargs = {
        field: values[key] for key, field in _INT_KEYS.items() if key in values
    }
    base = replace(RunConfig(p_sm=0.0, theta=0.0), **base_kwargs)
    grid_kwargs = {key: values[key] for key in _GRID_KEYS if key in values}
    return ExperimentGrid(base=base, **grid_kwargs)


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config_text(fh.read())
    except OSError as exc:
        raise RuntimeError(f"cannot read config {path}: {exc}") from exc


def _splitmix64(z: int) -> int:
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, combo_id: int, run_index: int) -> int:
    """Pure 64-bit avalanche mix of (master, combo, run)."""
    z = (
        master_seed
        + 0x9E3779B97F4A7C15 * (combo_id + 1)
        + 0xC2B2AE3D27D4EB4F * (run_index + 1)
    ) & _MASK64
    return _splitmix64(z)


def run_config_for(grid: ExperimentGrid, combo: ComboSpec, run_index: int) -> RunConfig:
    return replace(
        grid.base,
        p_sm=combo.p_sm,
        theta=combo.theta,
        arrangement=combo.arrangement,
        combo_id=combo.combo_id,
        run_index=run_index,
        seed=derive_seed(grid.master_seed, combo.combo_id, run_index),
    )


def _cell(value) -> str:
    """Missing -> empty; floats via repr so output is byte-stable."""
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return repr(value)
    return str(value)


def runs_header(n_agents: int) -> list[str]:
    return (
        ["combo_id", "arrangement", "p_sm", "theta", "run_index", "seed"]
        + list(METRICS)
        + [f"share_{k}" for k in range(1, n_agents + 1)]
    )


def result_row(r) -> list[str]:
    cells = [
        str(r.combo_id),
        r.arrangement,
        _cell(float(r.p_sm)),
        _cell(float(r.theta)),
        str(r.run_index),
        str(r.seed),
    ]
    cells += [_cell(getattr(r, m)) for m in METRICS]
    cells += [_cell(s) for s in r.share_exactly]
    return cells


def _execute_one(config: RunConfig):
    try:
        return run_simulation(config)
    except Exception as exc:  # surface which run died
        raise RuntimeError(
            f"run failed: combo_id={config.combo_id} "
            f"run_index={config.run_index} seed={config.seed}: {exc}"
        ) from exc


def _form_str(form) -> str:
    return "-".join(map(str, form))


def _trace_line(index, epoch, speaker, hearer, utterance, decoding, outcome) -> str:
    gold = ";".join(
        f"[{t.start},{t.end}):{t.meaning}:{_form_str(t.form)}:{'inv' if t.invented else 'lex'}"
        for t in utterance.gold_tokens
    )
    matches = ";".join(
        f"[{m.start},{m.end}):{m.meaning}:{_form_str(m.form)}" for m in decoding.matches
    )
    guesses = ";".join(f"[{g.start},{g.end}):{g.meaning}" for g in decoding.guesses)
    lp = "" if outcome.lex_precision is None else repr(outcome.lex_precision)
    return (
        f"i={index} epoch={epoch} speaker={speaker} hearer={hearer} "
        f"text={_form_str(utterance.text)} gold={gold} matches={matches} "
        f"guesses={guesses} precision={outcome.precision!r} recall={outcome.recall!r} "
        f"f1={outcome.f1!r} lex_use={outcome.lex_use!r} lex_precision={lp} "
        f"gated={int(outcome.gated)} committed={int(outcome.committed)}"
    )


def execute(
    grid: ExperimentGrid,
    out_dir: str,
    threads: int = 1,
    trace: bool = False,
    dump_lexicons: bool = False,
) -> str:
    """Run every (combo, run) cell and write ``runs.csv``.

    Output is sorted by (combo_id, run_index) and byte-identical for a
    given grid regardless of ``threads``.  Trace and lexicon dumps force
    serial execution.
    """
    combos = expand_grid(grid)
    configs = [
        run_config_for(grid, combo, i)
        for combo in combos
        for i in range(grid.runs)
    ]
    for c in configs:
        c.validate()
    os.makedirs(out_dir, exist_ok=True)
    if trace or dump_lexicons:
        results = []
        lexicon_rows = []
        if trace:
            os.makedirs(os.path.join(out_dir, "trace"), exist_ok=True)
        for config in configs:
            trace_fh = None
            trace_fn = None
            if trace:
                trace_path = os.path.join(
                    out_dir, "trace", f"combo{config.combo_id}_run{config.run_index}.log"
                )
                trace_fh = open(trace_path, "w", encoding="utf-8")

                def trace_fn(*args, fh=trace_fh):
                    fh.write(_trace_line(*args) + "\n")

            try:
                result, agents = run_simulation_detailed(config, trace_fn)
            except Exception as exc:
                raise RuntimeError(
                    f"run failed: combo_id={config.combo_id} "
                    f"run_index={config.run_index} seed={config.seed}: {exc}"
                ) from exc
            finally:
                if trace_fh is not None:
                    trace_fh.close()
            results.append(result)
            if dump_lexicons:
                for agent in agents:
                    for meaning, form, count, created in sorted(agent.lexicon.mappings()):
                        lexicon_rows.append(
                            [
                                str(config.combo_id),
                                str(config.run_index),
                                str(agent.id),
                                str(meaning),
                                _form_str(form),
                                str(count),
                                str(created),
                            ]
                        )
        if dump_lexicons:
            _write_csv(
                os.path.join(out_dir, "lexicons.csv"),
                ["combo_id", "run_index", "agent_id", "meaning", "form", "count", "created_at"],
                lexicon_rows,
            )
    elif threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_execute_one, configs, chunksize=8))
    else:
        results = [_execute_one(c) for c in configs]
    results.sort(key=lambda r: (r.combo_id, r.run_index))
    path = os.path.join(out_dir, "runs.csv")
    _write_csv(path, runs_header(grid.base.n_agents), [result_row(r) for r in results])
    return path


def _write_csv(path: str, header: list[str], rows) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise RuntimeError(f"cannot write {path}: {exc}") from exc


def read_runs(path: str) -> list[dict]:
    """Load runs.csv into dicts with floats (empty cells -> None)."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            fields = reader.fieldnames or []
            required = runs_header(1)[:6] + list(METRICS)
            for col in required:
                if col not in fields and not col.startswith("share_"):
                    raise ConfigurationError(f"{path}: missing column {col!r}")
            rows = []
            for raw in reader:
                row: dict = {"arrangement": raw["arrangement"]}
                for key, val in raw.items():
                    if key == "arrangement":
                        continue
                    if key in ("combo_id", "run_index", "seed"):
                        row[key] = int(val)
                    else:
                        row[key] = float(val) if val != "" else None
                rows.append(row)
            return rows
    except OSError as exc:
        raise RuntimeError(f"cannot read {path}: {exc}") from exc


def _share_columns(rows: list[dict]) -> list[str]:
    cols = [c for c in rows[0] if c.startswith("share_")]
    return sorted(cols, key=lambda c: int(c.split("_")[1]))


def _fmt_level(x: float) -> str:
    return f"{x:g}"


def _stats_or_none(values) -> SampleStats | None:
    values = [v for v in values if v is not None]
    return aggregate(values) if values else None


def analyze(in_dir: str, out_dir: str) -> None:
    """Aggregate runs.csv into summary.csv, tests.csv and fit.csv."""
    rows = read_runs(os.path.join(in_dir, "runs.csv"))
    if not rows:
        raise ConfigurationError("runs.csv contains no data rows")
    os.makedirs(out_dir, exist_ok=True)
    share_cols = _share_columns(rows)
    metric_cols = list(METRICS) + share_cols

    # summary.csv: per-combo sample statistics for every metric column
    combos: dict[int, list[dict]] = {}
    for row in rows:
        combos.setdefault(row["combo_id"], []).append(row)
    summary_rows = []
    for cid in sorted(combos):
        group = combos[cid]
        first = group[0]
        for metric in metric_cols:
            st = _stats_or_none(r[metric] for r in group)
            summary_rows.append(
                [
                    str(cid),
                    first["arrangement"],
                    _cell(first["p_sm"]),
                    _cell(first["theta"]),
                    metric,
                    str(st.n if st else 0),
                    _cell(st.mean if st else None),
                    _cell(st.sd if st else None),
                    _cell(st.sem if st else None),
                ]
            )
    _write_csv(
        os.path.join(out_dir, "summary.csv"),
        ["combo_id", "arrangement", "p_sm", "theta", "metric", "n", "mean", "sd", "sem"],
        summary_rows,
    )

    # tests.csv: p_sm levels vs p_sm=0 per arrangement; community vs fixed
    arrangements = [a for a in (FIXED, COMMUNITY) if any(r["arrangement"] == a for r in rows)]
    p_levels = sorted({r["p_sm"] for r in rows})

    def sample(arrangement, p_sm, metric):
        return _stats_or_none(
            r[metric]
            for r in rows
            if r["arrangement"] == arrangement and r["p_sm"] == p_sm
        )

    test_rows = []
    for metric in METRICS:
        for arrangement in arrangements:
            base = sample(arrangement, 0.0, metric)
            for p_sm in p_levels:
                if p_sm == 0.0:
                    continue
                alt = sample(arrangement, p_sm, metric)
                if base is None or alt is None or base.n < 2 or alt.n < 2:
                    continue
                cmp = welch_t(alt, base)
                test_rows.append(
                    [
                        metric,
                        arrangement,
                        f"p_sm={_fmt_level(p_sm)}",
                        "p_sm=0",
                        _cell(cmp.t),
                        _cell(cmp.df),
                        _cell(cmp.p),
                    ]
                )
        if FIXED in arrangements and COMMUNITY in arrangements:
            for p_sm in p_levels:
                a = sample(COMMUNITY, p_sm, metric)
                b = sample(FIXED, p_sm, metric)
                if a is None or b is None or a.n < 2 or b.n < 2:
                    continue
                cmp = welch_t(a, b)
                test_rows.append(
                    [
                        metric,
                        f"p_sm={_fmt_level(p_sm)}",
                        "community",
                        "fixed",
                        _cell(cmp.t),
                        _cell(cmp.df),
                        _cell(cmp.p),
                    ]
                )
    _write_csv(
        os.path.join(out_dir, "tests.csv"),
        ["metric", "arrangement_scope", "condition_a", "condition_b", "t", "df", "p"],
        test_rows,
    )

    # fit.csv: mapping-share law per arrangement and pooled
    fit_rows = []
    for scope in arrangements + ["pooled"]:
        scoped = rows if scope == "pooled" else [r for r in rows if r["arrangement"] == scope]
        points = []
        for p_sm in sorted({r["p_sm"] for r in scoped}):
            level = [r for r in scoped if r["p_sm"] == p_sm]
            for col in share_cols:
                k = int(col.split("_")[1])
                if k < 2:
                    continue
                vals = [r[col] for r in level if r[col] is not None]
                if vals:
                    points.append((p_sm, k, sum(vals) / len(vals)))
        try:
            fit = fit_mapshare(points)
        except SingularFitError:
            continue
        fit_rows.append(
            [
                scope,
                _cell(fit.ln_a),
                _cell(fit.ln_b),
                _cell(math.exp(fit.ln_a)),
                _cell(math.exp(fit.ln_b)),
                _cell(fit.r2),
                str(fit.n_points),
            ]
        )
    _write_csv(
        os.path.join(out_dir, "fit.csv"),
        ["scope", "ln_a", "ln_b", "a", "b", "r2", "n_points"],
        fit_rows,
    )


# figure id -> metric; all plot mean vs p_sm with sem bars, one series per
# arrangement (fig5b instead uses one series per share count k).
FIGURE_METRICS = {
    "fig1a": "f1",
    "fig1b": "lex_size",
    "fig2a": "lex_use",
    "fig2b": "lex_precision",
    "fig3a": "unique_meanings",
    "fig3b": "unique_forms",
    "fig4a": "synonymy",
    "fig4b": "homonymy",
    "fig5a": "mapshare_avg",
}


def figure_tables(rows: list[dict]) -> dict[str, list[list[str]]]:
    """Per-figure data: header p_sm,series,mean,sem; theta pooled."""
    share_cols = _share_columns(rows)
    arrangements = [a for a in (FIXED, COMMUNITY) if any(r["arrangement"] == a for r in rows)]
    p_levels = sorted({r["p_sm"] for r in rows})
    tables: dict[str, list[list[str]]] = {}
    for fig, metric in FIGURE_METRICS.items():
        table = []
        for arrangement in arrangements:
            for p_sm in p_levels:
                st = _stats_or_none(
                    r[metric]
                    for r in rows
                    if r["arrangement"] == arrangement and r["p_sm"] == p_sm
                )
                if st is None:
                    continue
                table.append(
                    [_cell(p_sm), arrangement, _cell(st.mean), _cell(st.sem)]
                )
        tables[fig] = table
    table = []
    for col in share_cols:
        k = int(col.split("_")[1])
        if k < 2:
            continue
        for p_sm in p_levels:
            st = _stats_or_none(r[col] for r in rows if r["p_sm"] == p_sm)
            if st is None:
                continue
            table.append([_cell(p_sm), f"k={k}", _cell(st.mean), _cell(st.sem)])
    tables["fig5b"] = table
    return tables


def report(in_dir: str, out_dir: str) -> None:
    """Emit the figure-ready per-figure CSVs from runs.csv."""
    rows = read_runs(os.path.join(in_dir, "runs.csv"))
    if not rows:
        raise ConfigurationError("runs.csv contains no data rows")
    os.makedirs(out_dir, exist_ok=True)
    for fig, table in figure_tables(rows).items():
        _write_csv(
            os.path.join(out_dir, f"{fig}.csv"),
            ["p_sm", "series", "mean", "sem"],
            table,
        )
