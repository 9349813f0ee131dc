"""Local similarity measures and the weighted global similarity used by the CBR engine.

Four attribute-local measures, each bounded in [0, 1] and symmetric:
taxonomy depth ratio for industries, TF-IDF cosine for goal text and for
element names, Jaccard for target groups. The global similarity is their
weighted average; the default weights come from consultant interviews
(industry 0.24, goal 0.06, target group 0.10, elements 0.60).
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .casebase import Case, CaseBase, CaseBaseError, IndustryTaxonomy

_TOKEN_SPLIT = re.compile(r"[^0-9a-z]+")


def tokenize(text: str) -> list[str]:
    """Case-fold, split on non-alphanumerics, drop tokens shorter than 2 chars."""
    return [t for t in _TOKEN_SPLIT.split(text.casefold()) if len(t) >= 2]


@dataclass(frozen=True)
class AttributeWeights:
    """Weights of the four local similarities; must sum to 1."""

    industry: float = 0.24
    goal: float = 0.06
    target_group: float = 0.10
    elements: float = 0.60

    def __post_init__(self) -> None:
        for name, w in self.as_dict().items():
            if not 0.0 <= w <= 1.0:
                raise ValueError(f"weight {name}={w} outside [0, 1]")
        total = sum(self.as_dict().values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1, got {total}")

    def as_dict(self) -> dict[str, float]:
        return {
            "industry": self.industry,
            "goal": self.goal,
            "target_group": self.target_group,
            "elements": self.elements,
        }


@dataclass(frozen=True)
class CorpusStats:
    """Document frequencies over one corpus (goals or element names)."""

    document_count: int
    document_frequency: Mapping[str, int]
    field: str
    tokenizer_version: str = "v1"

    def idf(self, term: str) -> float:
        df = self.document_frequency.get(term, 0)
        return math.log((1 + self.document_count) / (1 + df)) + 1.0


def build_corpus_stats(cb: CaseBase, field: str) -> CorpusStats:
    """One document per case: its goal text, or its concatenated element names."""
    if field not in ("goal", "elements"):
        raise ValueError(f"unknown corpus field {field!r}")
    df: Counter[str] = Counter()
    for case in cb:
        if field == "goal":
            tokens = set(tokenize(case.goal))
        else:
            tokens = set(tokenize(" ".join(sorted(case.element_names))))
        df.update(tokens)
    return CorpusStats(document_count=len(cb), document_frequency=dict(df), field=field)


def _tfidf_vector(tokens: Sequence[str], stats: CorpusStats) -> dict[str, float]:
    tf = Counter(tokens)
    return {t: c * stats.idf(t) for t, c in tf.items()}


def tfidf_similarity(
    tokens_a: Sequence[str], tokens_b: Sequence[str], stats: CorpusStats
) -> float:
    """Cosine of raw-tf x smoothed-idf vectors; 0 when either vector is empty."""
    va = _tfidf_vector(tokens_a, stats)
    vb = _tfidf_vector(tokens_b, stats)
    if not va or not vb:
        return 0.0
    dot = sum(w * vb[t] for t, w in va.items() if t in vb)
    na = math.sqrt(sum(w * w for w in va.values()))
    nb = math.sqrt(sum(w * w for w in vb.values()))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return min(1.0, dot / (na * nb))


def jaccard_similarity(set_a: Iterable, set_b: Iterable) -> float:
    """|a n b| / |a u b|; two empty sets count as fully agreeing (1.0)."""
    a, b = set(set_a), set(set_b)
    if not a and not b:
        return 1.0
    union = a | b
    return len(a & b) / len(union)


def taxonomy_similarity(a: str, b: str, taxonomy: IndustryTaxonomy) -> float:
    """depth(LCA) / max(depth(a), depth(b)); 1.0 for identical nodes."""
    if a not in taxonomy or b not in taxonomy:
        raise CaseBaseError(f"industry path not in taxonomy: {a!r} or {b!r}")
    if a == b:
        return 1.0
    denom = max(taxonomy.depth(a), taxonomy.depth(b))
    if denom == 0:
        return 1.0  # both are the root; a != b is impossible then
    return taxonomy.depth(taxonomy.lca(a, b)) / denom


@dataclass
class SimilarityModel:
    """Fitted context for global similarity: corpora plus the taxonomy."""

    taxonomy: IndustryTaxonomy
    goal_stats: CorpusStats
    element_stats: CorpusStats
    weights: AttributeWeights = field(default_factory=AttributeWeights)

    @classmethod
    def fit(cls, cb: CaseBase, weights: AttributeWeights | None = None) -> "SimilarityModel":
        return cls(
            taxonomy=cb.taxonomy,
            goal_stats=build_corpus_stats(cb, "goal"),
            element_stats=build_corpus_stats(cb, "elements"),
            weights=weights or AttributeWeights(),
        )

    def global_similarity(self, query, case: Case) -> float:
        """Weighted average of the four local similarities between query and case.

        The query carries industry / goal / target_groups / chosen element
        names; callers must have filtered on business process already.
        """
        if query.business_process != case.business_process:
            raise ValueError(
                "business process mismatch: "
                f"{query.business_process!r} vs {case.business_process!r}"
            )
        w = self.weights
        sim_ind = taxonomy_similarity(query.industry, case.industry, self.taxonomy)
        sim_goal = tfidf_similarity(
            tokenize(query.goal), tokenize(case.goal), self.goal_stats
        )
        sim_tg = jaccard_similarity(query.target_groups, case.target_groups)
        sim_el = tfidf_similarity(
            tokenize(" ".join(sorted(query.chosen_elements))),
            tokenize(" ".join(sorted(case.element_names))),
            self.element_stats,
        )
        return (
            w.industry * sim_ind
            + w.goal * sim_goal
            + w.target_group * sim_tg
            + w.elements * sim_el
        )
