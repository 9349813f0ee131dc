"""Implicit-feedback collaborative-filtering baselines (user-kNN and item-kNN).

Cases play the role of users, solution elements the role of items, and
the interaction matrix is binary (element chosen or not). Both engines
use only the matrix: industry, goal and target groups are ignored, which
is exactly the limitation the contextual engines address.

As in any implicit-feedback recommender, elements the query already
contains are never recommended again: an observed interaction is the
ground truth the engine conditions on, not a candidate.
"""

from __future__ import annotations

import numpy as np

from .base import BaseRecommender, Query, Ranking, UnsupportedQueryError
from .casebase import CaseBase


class InteractionMatrix:
    """Binary case x element matrix with stable, sorted row/column order."""

    def __init__(self, cb: CaseBase) -> None:
        self.case_ids: tuple[str, ...] = tuple(sorted(c.id for c in cb))
        self.elements: tuple[str, ...] = tuple(
            sorted({n for c in cb for n in c.element_names})
        )
        self._col = {e: j for j, e in enumerate(self.elements)}
        by_id = {c.id: c for c in cb}
        self.matrix = np.zeros((len(self.case_ids), len(self.elements)), dtype=np.float64)
        for i, cid in enumerate(self.case_ids):
            for name in by_id[cid].element_names:
                self.matrix[i, self._col[name]] = 1.0

    def query_vector(self, query: Query) -> np.ndarray:
        v = np.zeros(len(self.elements))
        for name in query.chosen_elements:
            j = self._col.get(name)
            if j is not None:
                v[j] = 1.0
        return v


def build_matrix(cb: CaseBase) -> InteractionMatrix:
    return InteractionMatrix(cb)


def _cosine_rows(matrix: np.ndarray, v: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1) * np.linalg.norm(v)
    dots = matrix @ v
    with np.errstate(invalid="ignore", divide="ignore"):
        sims = np.where(norms > 0.0, dots / np.where(norms > 0.0, norms, 1.0), 0.0)
    return sims


def _require_verbose(query: Query) -> None:
    if query.verbosity == 0:
        raise UnsupportedQueryError(
            "collaborative filtering cannot serve verbosity-0 queries"
        )


def userknn_recommend(query: Query, m: InteractionMatrix, k: int) -> Ranking:
    """Top-k most cosine-similar cases vote for their elements."""
    _require_verbose(query)
    if k < 1:
        raise ValueError("k must be >= 1")
    v = m.query_vector(query)
    sims = _cosine_rows(m.matrix, v)
    # tie order: similarity desc, case id asc; ids are pre-sorted so a
    # stable sort on -sim preserves id order within ties
    order = np.argsort(-sims, kind="stable")[:k]
    scores: dict[str, float] = {}
    for i in order:
        if sims[i] <= 0.0:
            continue
        for j in np.flatnonzero(m.matrix[i]):
            name = m.elements[j]
            scores[name] = scores.get(name, 0.0) + float(sims[i])
    return Ranking(scores)


def itemknn_recommend(query: Query, m: InteractionMatrix, k: int) -> Ranking:
    """Each query element's top-k most similar columns contribute their cosine."""
    _require_verbose(query)
    if k < 1:
        raise ValueError("k must be >= 1")
    scores: dict[str, float] = {}
    for name in sorted(query.chosen_elements):
        j = m._col.get(name)
        if j is None:
            continue
        sims = _cosine_rows(m.matrix.T, m.matrix[:, j])
        order = np.argsort(-sims, kind="stable")[:k]
        for jj in order:
            if sims[jj] <= 0.0:
                continue
            target = m.elements[jj]
            scores[target] = scores.get(target, 0.0) + float(sims[jj])
    return Ranking(scores)


class UserKNNRecommender(BaseRecommender):
    def __init__(self, k: int = 10, include_query_elements: bool = True) -> None:
        self.k = k
        self.include_query_elements = include_query_elements
        self.matrix_: InteractionMatrix | None = None

    def fit(self, cb: CaseBase) -> "UserKNNRecommender":
        self.matrix_ = build_matrix(cb)
        return self

    def recommend(self, query: Query) -> Ranking:
        self._check_fitted("matrix_")
        # chosen elements are observed interactions, never candidates
        return userknn_recommend(query, self.matrix_, self.k).without(query.chosen_elements)


class ItemKNNRecommender(BaseRecommender):
    def __init__(self, k: int = 10, include_query_elements: bool = True) -> None:
        self.k = k
        self.include_query_elements = include_query_elements
        self.matrix_: InteractionMatrix | None = None

    def fit(self, cb: CaseBase) -> "ItemKNNRecommender":
        self.matrix_ = build_matrix(cb)
        return self

    def recommend(self, query: Query) -> Ranking:
        self._check_fitted("matrix_")
        return itemknn_recommend(query, self.matrix_, self.k).without(query.chosen_elements)
