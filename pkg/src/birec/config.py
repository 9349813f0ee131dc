"""Engine configuration: JSON config files and the CLI engine-spec mini-grammar."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

from .base import BaseRecommender
from .cbr import CBRRecommender
from .cf import ItemKNNRecommender, UserKNNRecommender
from .graph import GraphRecommender
from .hybrid import HybridRecommender
from .similarity import AttributeWeights


@dataclass
class EngineConfig:
    """Settings shared by all engines plus per-engine sections."""

    include_query_elements: bool = True
    weights: AttributeWeights = field(default_factory=AttributeWeights)
    cbr_top_n: int = 2
    graph_teleport: float = 0.3
    graph_tolerance: float = 1e-8
    graph_max_iterations: int = 100
    graph_industry_in_prior: bool = True
    cf_k: int = 10
    cf_variant: str = "userknn"
    hybrid_beta: float = 0.3
    hybrid_verbosity_threshold: float | None = None
    hybrid_count_mode: str = "all"

    @classmethod
    def from_file(cls, path) -> "EngineConfig":
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        return cls.from_dict(doc)

    @classmethod
    def from_dict(cls, doc: dict) -> "EngineConfig":
        weights = AttributeWeights(**doc.get("weights", {}))
        cbr = doc.get("cbr", {})
        graph = doc.get("graph", {})
        cf = doc.get("cf", {})
        hybrid = doc.get("hybrid", {})
        return cls(
            include_query_elements=doc.get("include_query_elements", True),
            weights=weights,
            cbr_top_n=cbr.get("top_n", 2),
            graph_teleport=graph.get("teleport", 0.3),
            graph_tolerance=graph.get("tolerance", 1e-8),
            graph_max_iterations=graph.get("max_iterations", 100),
            graph_industry_in_prior=graph.get("industry_in_prior", True),
            cf_k=cf.get("k", 10),
            cf_variant=cf.get("variant", "userknn"),
            hybrid_beta=hybrid.get("beta", 0.3),
            hybrid_verbosity_threshold=hybrid.get("verbosity_threshold"),
            hybrid_count_mode=hybrid.get("count_mode", "all"),
        )

    def make_cbr(self) -> CBRRecommender:
        return CBRRecommender(
            top_n=self.cbr_top_n,
            weights=self.weights,
            include_query_elements=self.include_query_elements,
        )

    def make_graph(self) -> GraphRecommender:
        return GraphRecommender(
            teleport=self.graph_teleport,
            tolerance=self.graph_tolerance,
            max_iterations=self.graph_max_iterations,
            industry_in_prior=self.graph_industry_in_prior,
            include_query_elements=self.include_query_elements,
        )

    def make_cf(self) -> BaseRecommender:
        cls = UserKNNRecommender if self.cf_variant == "userknn" else ItemKNNRecommender
        return cls(k=self.cf_k, include_query_elements=self.include_query_elements)

    def make_hybrid(self) -> HybridRecommender:
        return HybridRecommender(
            beta=self.hybrid_beta,
            top_n=self.cbr_top_n,
            teleport=self.graph_teleport,
            verbosity_threshold=self.hybrid_verbosity_threshold,
            threshold_count_mode=self.hybrid_count_mode,
            include_query_elements=self.include_query_elements,
        )


def parse_engine_spec(
    spec: str, config: EngineConfig | None = None
) -> tuple[str, Callable[[], BaseRecommender]]:
    """Parse one engine spec like ``cbr:2``, ``graph``, ``hybrid:0.3``, ``cf:userknn:10``.

    Returns a display name and a factory producing fresh, unfitted engines.
    """
    config = config or EngineConfig()
    parts = spec.strip().split(":")
    kind = parts[0]
    if kind == "cbr":
        n = int(parts[1]) if len(parts) > 1 else config.cbr_top_n
        name = f"cbr:top{n}"
        return name, lambda: CBRRecommender(
            top_n=n,
            weights=config.weights,
            include_query_elements=config.include_query_elements,
        )
    if kind == "graph":
        if len(parts) > 1:
            raise ValueError(f"engine spec {spec!r}: graph takes no parameter")
        return "graph", config.make_graph
    if kind == "hybrid":
        beta = float(parts[1]) if len(parts) > 1 else config.hybrid_beta
        name = f"hybrid:b{beta:g}"
        return name, lambda: HybridRecommender(
            beta=beta,
            top_n=config.cbr_top_n,
            teleport=config.graph_teleport,
            verbosity_threshold=config.hybrid_verbosity_threshold,
            threshold_count_mode=config.hybrid_count_mode,
            include_query_elements=config.include_query_elements,
        )
    if kind == "cf":
        if len(parts) < 2 or parts[1] not in ("userknn", "itemknn"):
            raise ValueError(f"engine spec {spec!r}: expected cf:userknn[:k] or cf:itemknn[:k]")
        variant = parts[1]
        k = int(parts[2]) if len(parts) > 2 else config.cf_k
        cls = UserKNNRecommender if variant == "userknn" else ItemKNNRecommender
        name = f"cf:{variant}:k{k}"
        return name, lambda: cls(k=k, include_query_elements=config.include_query_elements)
    raise ValueError(f"unknown engine kind {kind!r} in spec {spec!r}")


def parse_engine_specs(specs: str, config: EngineConfig | None = None):
    """Comma-separated list of engine specs -> ordered name -> factory map."""
    engines = {}
    for part in specs.split(","):
        part = part.strip()
        if not part:
            continue
        name, factory = parse_engine_spec(part, config)
        if name in engines:
            raise ValueError(f"duplicate engine spec {name!r}")
        engines[name] = factory
    if not engines:
        raise ValueError("no engines specified")
    return engines
