"""Leave-one-case-out evaluation across verbosity levels with MAP reporting.

Each case is held out in turn; every engine is re-fitted on the remaining
cases; queries of growing verbosity are sampled from the held-out case's
KPIs; rankings are scored with average precision against the case's own
elements. Results aggregate to a verbosity x engine MAP table.
"""

from __future__ import annotations

import hashlib
import io
import json
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .base import BaseRecommender, Query, Ranking, UnsupportedQueryError
from .casebase import Case, CaseBase, case_base_to_dict, compute_stats

DEFAULT_VERBOSITY_LEVELS = (0, 5, 10, 15, 20, 30, 40, 100)

EngineFactory = Callable[[], BaseRecommender]


@dataclass(frozen=True)
class EvalConfig:
    verbosity_levels: tuple[int, ...] = DEFAULT_VERBOSITY_LEVELS
    seed: int = 42
    relevance_mode: str = "all"  # "all" or "exclude-query"

    def __post_init__(self) -> None:
        levels = tuple(self.verbosity_levels)
        object.__setattr__(self, "verbosity_levels", levels)
        if any(v < 0 for v in levels):
            raise ValueError("verbosity levels must be non-negative")
        if list(levels) != sorted(set(levels)):
            raise ValueError("verbosity levels must be strictly increasing")
        if self.relevance_mode not in ("all", "exclude-query"):
            raise ValueError(f"unknown relevance mode {self.relevance_mode!r}")


def make_query(case: Case, verbosity: int, rng: random.Random) -> Query:
    """Query with the case's demographics plus randomly sampled KPIs.

    Samples min(verbosity, #KPIs) KPI names without replacement; the KPI
    pool is sorted first so the draw depends only on the rng state.
    """
    if verbosity < 0:
        raise ValueError("verbosity must be >= 0")
    pool = [e.name for e in case.kpis()]
    count = min(verbosity, len(pool))
    chosen = frozenset(rng.sample(pool, count)) if count else frozenset()
    return Query.from_case(case, chosen_elements=chosen)


def average_precision(ranking: Ranking, relevant: Iterable[str]) -> float:
    """Mean of precision@k over the ranks holding relevant items.

    Unretrieved relevant items contribute zero. Raises on an empty
    relevant set (the caller records such cases as skipped).
    """
    relevant = set(relevant)
    if not relevant:
        raise ValueError("relevant set is empty")
    hits = 0
    total = 0.0
    for rank, (name, _) in enumerate(ranking, start=1):
        if name in relevant:
            hits += 1
            total += hits / rank
    return total / len(relevant)


def training_fingerprint(training: CaseBase) -> str:
    """Deterministic hash of the training data all engine structures derive from."""
    doc = json.dumps(case_base_to_dict(training), sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(doc.encode("utf-8")).hexdigest()


def _query_rng(seed: int, case_index: int, verbosity: int) -> random.Random:
    # keyed on case position, not id, so MAP is invariant under id relabeling
    return random.Random(f"{seed}|{case_index}|{verbosity}")


@dataclass
class EvalReport:
    """MAP per engine x verbosity level, plus per-case APs and run metadata."""

    engines: tuple[str, ...]
    verbosity_levels: tuple[int, ...]
    map_table: dict[str, dict[int, float | None]]
    per_case_ap: dict[str, dict[int, dict[str, float | None]]]
    metadata: dict

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("verbosity," + ",".join(self.engines) + "\n")
        for v in self.verbosity_levels:
            cells = []
            for eng in self.engines:
                m = self.map_table[eng][v]
                cells.append("-" if m is None else f"{m:.6f}")
            buf.write(f"{v}," + ",".join(cells) + "\n")
        return buf.getvalue()

    def to_pretty(self) -> str:
        header = ["verbosity"] + list(self.engines)
        rows = [header]
        for v in self.verbosity_levels:
            row = [str(v)]
            for eng in self.engines:
                m = self.map_table[eng][v]
                row.append("-" if m is None else f"{m:.3f}")
            rows.append(row)
        col_w = [max(len(r[i]) for r in rows) for i in range(len(header))]
        lines = []
        for r in rows:
            lines.append("  ".join(cell.rjust(col_w[i]) for i, cell in enumerate(r)))
        meta = json.dumps(self.metadata, sort_keys=True)
        return "\n".join(lines) + "\n\nmetadata: " + meta + "\n"

    def to_json(self) -> str:
        doc = {
            "engines": list(self.engines),
            "verbosity_levels": list(self.verbosity_levels),
            "map": {e: {str(v): m for v, m in row.items()} for e, row in self.map_table.items()},
            "per_case_ap": {
                e: {str(v): aps for v, aps in by_level.items()}
                for e, by_level in self.per_case_ap.items()
            },
            "metadata": self.metadata,
        }
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _evaluate_fold(
    cb: CaseBase,
    case: Case,
    case_index: int,
    engines: Mapping[str, EngineFactory],
    cfg: EvalConfig,
) -> tuple[str, dict[str, dict[int, float | None]], list[str]]:
    """Hold out one case: refit every engine and score all verbosity levels."""
    exclude_query = cfg.relevance_mode == "exclude-query"
    training = cb.without(case.id)
    fingerprint = training_fingerprint(training)
    fitted: dict[str, BaseRecommender] = {}
    for name, factory in engines.items():
        engine = factory()
        engine.set_params(include_query_elements=not exclude_query)
        fitted[name] = engine.fit(training)
    aps: dict[str, dict[int, float | None]] = {name: {} for name in engines}
    skipped: list[str] = []
    for v in cfg.verbosity_levels:
        query = make_query(case, v, _query_rng(cfg.seed, case_index, v))
        relevant = set(case.element_names)
        if exclude_query:
            relevant -= set(query.chosen_elements)
        if not relevant:
            skipped.append(f"{case.id}@{v}")
            continue
        for name, engine in fitted.items():
            try:
                ranking = engine.recommend(query)
            except UnsupportedQueryError:
                aps[name][v] = None
                continue
            aps[name][v] = average_precision(ranking, relevant)
    return fingerprint, aps, skipped


def leave_one_out(
    cb: CaseBase,
    engines: Mapping[str, EngineFactory],
    cfg: EvalConfig | None = None,
    workers: int = 1,
) -> EvalReport:
    """Run the leave-one-case-out sweep for every engine and verbosity level.

    Folds are independent; ``workers`` > 1 evaluates them in a thread pool.
    Aggregation order is fixed by case order, so the report is identical
    either way.
    """
    if len(cb) < 2:
        raise ValueError("leave-one-out needs at least 2 cases")
    cfg = cfg or EvalConfig()
    engine_names = tuple(engines)
    levels = cfg.verbosity_levels

    per_case_ap: dict[str, dict[int, dict[str, float | None]]] = {
        e: {v: {} for v in levels} for e in engine_names
    }
    skipped: list[str] = []
    fold_hashes: dict[str, str] = {}

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(
                    lambda ic: _evaluate_fold(cb, ic[1], ic[0], engines, cfg),
                    enumerate(cb.cases),
                )
            )
    else:
        results = [_evaluate_fold(cb, case, i, engines, cfg) for i, case in enumerate(cb)]

    for case, (fingerprint, aps, fold_skipped) in zip(cb.cases, results):
        fold_hashes[case.id] = fingerprint
        skipped.extend(fold_skipped)
        for name in engine_names:
            for v, ap in aps[name].items():
                per_case_ap[name][v][case.id] = ap

    map_table: dict[str, dict[int, float | None]] = {}
    for name in engine_names:
        map_table[name] = {}
        for v in levels:
            aps = [ap for ap in per_case_ap[name][v].values() if ap is not None]
            map_table[name][v] = sum(aps) / len(aps) if aps else None

    stats = compute_stats(cb)
    metadata = {
        "seed": cfg.seed,
        "relevance_mode": cfg.relevance_mode,
        "case_count": len(cb),
        "avg_case_size": stats.avg_case_size,
        "verbosity_threshold": stats.verbosity_threshold,
        "skipped": sorted(skipped),
        "training_fingerprints": dict(sorted(fold_hashes.items())),
    }
    return EvalReport(
        engines=engine_names,
        verbosity_levels=levels,
        map_table=map_table,
        per_case_ap=per_case_ap,
        metadata=metadata,
    )
