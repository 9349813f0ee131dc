"""Shared recommender abstractions: queries, rankings, the estimator contract."""

from __future__ import annotations

import inspect
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .casebase import Case, CaseBase, canonical_name


class NotFittedError(RuntimeError):
    """Recommender used before fit()."""


class UnsupportedQueryError(ValueError):
    """The engine cannot serve this query (e.g. CF at verbosity 0)."""


@dataclass(frozen=True)
class Query:
    """A (possibly partial) case acting as the probe.

    ``chosen_elements`` holds canonical element names; its size is the
    query's verbosity.
    """

    industry: str
    business_process: str
    goal: str = ""
    target_groups: frozenset[str] = frozenset()
    chosen_elements: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "target_groups", frozenset(self.target_groups))
        object.__setattr__(
            self,
            "chosen_elements",
            frozenset(canonical_name(e) for e in self.chosen_elements),
        )

    @property
    def verbosity(self) -> int:
        return len(self.chosen_elements)

    @classmethod
    def from_case(cls, case: Case, chosen_elements: frozenset[str] = frozenset()) -> "Query":
        return cls(
            industry=case.industry,
            business_process=case.business_process,
            goal=case.goal,
            target_groups=case.target_groups,
            chosen_elements=chosen_elements,
        )

    def with_elements(self, elements) -> "Query":
        return Query(
            industry=self.industry,
            business_process=self.business_process,
            goal=self.goal,
            target_groups=self.target_groups,
            chosen_elements=frozenset(elements),
        )


class Ranking:
    """Ordered (element name, score) pairs: score descending, name ascending on ties."""

    __slots__ = ("_entries",)

    def __init__(self, scores: Mapping[str, float]) -> None:
        for name, s in scores.items():
            if s != s or s in (float("inf"), float("-inf")):
                raise ValueError(f"non-finite score for {name!r}")
        self._entries: tuple[tuple[str, float], ...] = tuple(
            sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
        )

    @classmethod
    def empty(cls) -> "Ranking":
        return cls({})

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __iter__(self) -> Iterator[tuple[str, float]]:
        return iter(self._entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, Ranking) and self._entries == other._entries

    def __repr__(self) -> str:
        return f"Ranking({list(self._entries[:5])}{'...' if len(self) > 5 else ''})"

    @property
    def names(self) -> list[str]:
        return [name for name, _ in self._entries]

    def scores(self) -> dict[str, float]:
        return dict(self._entries)

    def top(self, n: int) -> "list[tuple[str, float]]":
        return list(self._entries[:n])

    def without(self, excluded) -> "Ranking":
        excluded = set(excluded)
        return Ranking({n: s for n, s in self._entries if n not in excluded})


class BaseRecommender:
    """fit/recommend estimator contract with sklearn-style parameter access.

    Constructor arguments are the hyper-parameters; ``fit`` learns the
    per-case-base structures; ``recommend`` is pure and safe for
    concurrent use once fitted.
    """

    def fit(self, cb: CaseBase) -> "BaseRecommender":
        raise NotImplementedError

    def recommend(self, query: Query) -> Ranking:
        raise NotImplementedError

    @classmethod
    def _param_names(cls) -> list[str]:
        sig = inspect.signature(cls.__init__)
        return [p for p in sig.parameters if p != "self"]

    def get_params(self) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params) -> "BaseRecommender":
        valid = set(self._param_names())
        for name, value in params.items():
            if name not in valid:
                raise ValueError(f"unknown parameter {name!r} for {type(self).__name__}")
            setattr(self, name, value)
        return self

    def _check_fitted(self, attr: str) -> None:
        if getattr(self, attr, None) is None:
            raise NotFittedError(f"{type(self).__name__} is not fitted")

    def _apply_query_filter(self, ranking: Ranking, query: Query) -> Ranking:
        """Drop query elements from the ranking when configured to exclude them."""
        if getattr(self, "include_query_elements", True):
            return ranking
        return ranking.without(query.chosen_elements)
