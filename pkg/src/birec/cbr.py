"""Case-based recommender: top-n retrieval by global similarity, score by similarity sums.

An element's score is the sum of the similarities of the retrieved cases
containing it, so elements backed by several similar cases outrank
elements from a single case.
"""

from __future__ import annotations

from dataclasses import dataclass

from .base import BaseRecommender, Query, Ranking
from .casebase import Case, CaseBase
from .similarity import AttributeWeights, SimilarityModel


@dataclass(frozen=True)
class RetrievedCaseSet:
    """Cases retrieved for one query, ordered by similarity (tie: case id)."""

    entries: tuple[tuple[Case, float], ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def retrieve(query: Query, cb: CaseBase, n: int, model: SimilarityModel) -> RetrievedCaseSet:
    """Top-n cases sharing the query's business process, by global similarity."""
    if n < 1:
        raise ValueError("n must be >= 1")
    candidates = [c for c in cb if c.business_process == query.business_process]
    scored = [(c, model.global_similarity(query, c)) for c in candidates]
    scored.sort(key=lambda cs: (-cs[1], cs[0].id))
    return RetrievedCaseSet(entries=tuple(scored[:n]))


def score_elements(retrieved: RetrievedCaseSet, query: Query) -> Ranking:
    """score(e) = sum of similarities of retrieved cases containing e."""
    scores: dict[str, float] = {}
    for case, sim in retrieved:
        for name in case.element_names:
            scores[name] = scores.get(name, 0.0) + sim
    return Ranking({n: s for n, s in scores.items() if s > 0.0})


class CBRRecommender(BaseRecommender):
    """Retrieve-and-sum case-based recommender."""

    def __init__(
        self,
        top_n: int = 2,
        weights: AttributeWeights | None = None,
        include_query_elements: bool = True,
    ) -> None:
        self.top_n = top_n
        self.weights = weights
        self.include_query_elements = include_query_elements
        self.model_: SimilarityModel | None = None
        self.case_base_: CaseBase | None = None

    def fit(self, cb: CaseBase) -> "CBRRecommender":
        self.model_ = SimilarityModel.fit(cb, weights=self.weights)
        self.case_base_ = cb
        return self

    def retrieve(self, query: Query) -> RetrievedCaseSet:
        self._check_fitted("model_")
        return retrieve(query, self.case_base_, self.top_n, self.model_)

    def recommend(self, query: Query) -> Ranking:
        ranking = score_elements(self.retrieve(query), query)
        return self._apply_query_filter(ranking, query)
