"""Hybrid recommender engines for knowledge-based BI consultancy."""

from .base import BaseRecommender, NotFittedError, Query, Ranking, UnsupportedQueryError
from .casebase import (
    Case,
    CaseBase,
    CaseBaseError,
    CaseBaseStats,
    ElementKind,
    IndustryTaxonomy,
    SolutionElement,
    compute_stats,
    load_case_base,
    partition_by_process,
    save_case_base,
)
from .cbr import CBRRecommender
from .cf import ItemKNNRecommender, UserKNNRecommender
from .config import EngineConfig, parse_engine_spec, parse_engine_specs
from .evaluation import EvalConfig, EvalReport, average_precision, leave_one_out, make_query
from .graph import GraphRecommender, build_case_graph, pagerank_with_priors
from .hybrid import HybridRecommender, alpha, hybrid_combine, minmax_normalize
from .similarity import (
    AttributeWeights,
    SimilarityModel,
    build_corpus_stats,
    jaccard_similarity,
    taxonomy_similarity,
    tfidf_similarity,
    tokenize,
)
from .synth import GenConfig, generate

__version__ = "0.1.0"

__all__ = [
    "AttributeWeights",
    "BaseRecommender",
    "CBRRecommender",
    "Case",
    "CaseBase",
    "CaseBaseError",
    "CaseBaseStats",
    "ElementKind",
    "EngineConfig",
    "EvalConfig",
    "EvalReport",
    "GenConfig",
    "GraphRecommender",
    "HybridRecommender",
    "IndustryTaxonomy",
    "ItemKNNRecommender",
    "NotFittedError",
    "Query",
    "Ranking",
    "SimilarityModel",
    "SolutionElement",
    "UnsupportedQueryError",
    "UserKNNRecommender",
    "alpha",
    "average_precision",
    "build_case_graph",
    "build_corpus_stats",
    "compute_stats",
    "generate",
    "hybrid_combine",
    "jaccard_similarity",
    "leave_one_out",
    "load_case_base",
    "make_query",
    "minmax_normalize",
    "pagerank_with_priors",
    "parse_engine_spec",
    "parse_engine_specs",
    "partition_by_process",
    "save_case_base",
    "taxonomy_similarity",
    "tfidf_similarity",
    "tokenize",
]
