"""Weighted CBR + graph hybrid with a verbosity-scheduled mixing weight.

The CBR weight alpha starts at 1 for empty queries, decays linearly with
query verbosity and bottoms out at beta once the verbosity reaches the
threshold (half the average case size). Both engines' scores are min-max
normalised over the union of their candidates before mixing, so the graph
engine can surface elements the retrieved cases never contained.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .base import BaseRecommender, Query, Ranking
from .casebase import CaseBase, compute_stats
from .cbr import CBRRecommender
from .graph import GraphRecommender


def alpha(verbosity: int, c_bar: float, beta: float) -> float:
    """CBR mixing weight: 1 - (1-beta)*|q|/c_bar below the threshold, beta above."""
    if verbosity < 0:
        raise ValueError("verbosity must be >= 0")
    if c_bar <= 0.0:
        raise ValueError("verbosity threshold must be positive")
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must be in (0, 1)")
    if verbosity <= c_bar:
        return 1.0 - (1.0 - beta) * verbosity / c_bar
    return beta


def minmax_normalize(scores: Mapping[str, float]) -> dict[str, float]:
    """Affine rescale to [0, 1]; a constant score map collapses to all zeros."""
    if not scores:
        return {}
    lo = min(scores.values())
    hi = max(scores.values())
    if hi == lo:
        return {name: 0.0 for name in scores}
    span = hi - lo
    return {name: (s - lo) / span for name, s in scores.items()}


def hybrid_combine(
    query: Query, cbr_ranking: Ranking, graph_ranking: Ranking, beta: float, c_bar: float
) -> Ranking:
    """Mix normalised scores over the union candidate set per the alpha schedule."""
    cbr_scores = cbr_ranking.scores()
    graph_scores = graph_ranking.scores()
    universe = sorted(set(cbr_scores) | set(graph_scores))
    if not universe:
        return Ranking.empty()
    cbr_norm = minmax_normalize({n: cbr_scores.get(n, 0.0) for n in universe})
    graph_norm = minmax_normalize({n: graph_scores.get(n, 0.0) for n in universe})
    a = alpha(query.verbosity, c_bar, beta)
    return Ranking(
        {n: a * cbr_norm[n] + (1.0 - a) * graph_norm[n] for n in universe}
    )


@dataclass
class HybridConfig:
    beta: float = 0.3
    verbosity_threshold_override: float | None = None
    threshold_count_mode: str = "all"  # which element kinds enter the average case size


class HybridRecommender(BaseRecommender):
    """Weighted combination of the CBR and case-graph recommenders."""

    def __init__(
        self,
        beta: float = 0.3,
        top_n: int = 2,
        teleport: float = 0.3,
        verbosity_threshold: float | None = None,
        threshold_count_mode: str = "all",
        include_query_elements: bool = True,
    ) -> None:
        self.beta = beta
        self.top_n = top_n
        self.teleport = teleport
        self.verbosity_threshold = verbosity_threshold
        self.threshold_count_mode = threshold_count_mode
        self.include_query_elements = include_query_elements
        self.cbr_: CBRRecommender | None = None
        self.graph_: GraphRecommender | None = None
        self.c_bar_: float | None = None

    def fit(self, cb: CaseBase) -> "HybridRecommender":
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must be in (0, 1)")
        # component engines keep query elements; exclusion is applied once, after mixing
        self.cbr_ = CBRRecommender(top_n=self.top_n, include_query_elements=True).fit(cb)
        self.graph_ = GraphRecommender(
            teleport=self.teleport, include_query_elements=True
        ).fit(cb)
        if self.verbosity_threshold is not None:
            self.c_bar_ = self.verbosity_threshold
        else:
            self.c_bar_ = compute_stats(cb, count=self.threshold_count_mode).verbosity_threshold
        return self

    def alpha_for(self, query: Query) -> float:
        self._check_fitted("c_bar_")
        return alpha(query.verbosity, self.c_bar_, self.beta)

    def recommend(self, query: Query) -> Ranking:
        self._check_fitted("cbr_")
        combined = hybrid_combine(
            query,
            self.cbr_.recommend(query),
            self.graph_.recommend(query),
            beta=self.beta,
            c_bar=self.c_bar_,
        )
        return self._apply_query_filter(combined, query)
