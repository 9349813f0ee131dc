"""Case-graph recommender scored with PageRank with priors.

One undirected, unweighted graph per business process: a node per case,
connected to its industry node and to a node per solution element.
Target groups and goals are deliberately not represented (their nodes
would be near-universal hubs). Scores are the stationary probabilities
of a random walk teleporting back to a query-biased prior.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .base import BaseRecommender, Query, Ranking
from .casebase import CaseBase

logger = logging.getLogger(__name__)

Node = tuple[str, str]  # (kind, key), kind in {"case", "industry", "element"}


class CaseGraph:
    """Undirected graph over case, industry and element nodes."""

    def __init__(self, edges: set[tuple[Node, Node]], nodes: set[Node]) -> None:
        self.nodes: tuple[Node, ...] = tuple(sorted(nodes))
        self._index = {n: i for i, n in enumerate(self.nodes)}
        n = len(self.nodes)
        self.adjacency = np.zeros((n, n), dtype=np.float64)
        for a, b in edges:
            ia, ib = self._index[a], self._index[b]
            self.adjacency[ia, ib] = 1.0
            self.adjacency[ib, ia] = 1.0
        self.degrees = self.adjacency.sum(axis=1)

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, node: Node) -> bool:
        return node in self._index

    def index(self, node: Node) -> int:
        return self._index[node]

    def element_nodes(self) -> list[Node]:
        return [n for n in self.nodes if n[0] == "element"]


def build_case_graph(cb_for_process: CaseBase | None) -> CaseGraph:
    """Graph per the construction rule; all cases must share one process."""
    if cb_for_process is None or len(cb_for_process) == 0:
        return CaseGraph(edges=set(), nodes=set())
    processes = {c.business_process for c in cb_for_process}
    if len(processes) > 1:
        raise ValueError(f"cases span multiple business processes: {sorted(processes)}")
    nodes: set[Node] = set()
    edges: set[tuple[Node, Node]] = set()
    for case in cb_for_process:
        cnode: Node = ("case", case.id)
        inode: Node = ("industry", case.industry)
        nodes.add(cnode)
        nodes.add(inode)
        edges.add((cnode, inode))
        for name in case.element_names:
            enode: Node = ("element", name)
            nodes.add(enode)
            edges.add((cnode, enode))
    return CaseGraph(edges=edges, nodes=nodes)


@dataclass(frozen=True)
class PageRankResult:
    scores: dict[Node, float]
    converged: bool
    iterations: int


def pagerank_with_priors(
    graph: CaseGraph,
    prior: dict[Node, float],
    teleport: float = 0.3,
    tol: float = 1e-8,
    max_iter: int = 100,
) -> PageRankResult:
    """Fixed point of p <- teleport*prior + (1-teleport)*W^T p.

    W is row-stochastic over the adjacency (uniform over neighbours);
    dangling nodes redistribute their mass to the prior. Iteration stops
    when the L1 delta drops below ``tol``.
    """
    if not 0.0 < teleport <= 1.0:
        raise ValueError("teleport must be in (0, 1]")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    n = len(graph)
    if n == 0:
        return PageRankResult(scores={}, converged=True, iterations=0)
    pvec = np.zeros(n)
    for node, mass in prior.items():
        if mass < 0.0:
            raise ValueError(f"negative prior mass on {node}")
        if node not in graph:
            raise ValueError(f"prior node {node} not in graph")
        pvec[graph.index(node)] = mass
    if abs(pvec.sum() - 1.0) > 1e-12:
        raise ValueError(f"prior mass sums to {pvec.sum()}, not 1")

    deg = graph.degrees
    dangling = deg == 0.0
    safe_deg = np.where(dangling, 1.0, deg)
    # W^T p with uniform transition over neighbours: A^T (p / deg)
    trans = graph.adjacency.T / safe_deg  # column j scaled by 1/deg(j)

    p = pvec.copy()
    for it in range(1, max_iter + 1):
        walked = trans @ p + p[dangling].sum() * pvec
        new = teleport * pvec + (1.0 - teleport) * walked
        delta = np.abs(new - p).sum()
        p = new
        if delta < tol:
            return PageRankResult(
                scores={node: float(p[i]) for i, node in enumerate(graph.nodes)},
                converged=True,
                iterations=it,
            )
    logger.warning("pagerank did not converge within %d iterations", max_iter)
    return PageRankResult(
        scores={node: float(p[i]) for i, node in enumerate(graph.nodes)},
        converged=False,
        iterations=max_iter,
    )


def build_prior(query: Query, graph: CaseGraph, industry_in_prior: bool = True) -> dict[Node, float]:
    """Uniform prior over the query's in-graph element nodes plus the industry node.

    Verbosity-0 queries put all mass on the industry node. Out-of-graph
    query elements are dropped (logged).
    """
    support: list[Node] = []
    inode: Node = ("industry", query.industry)
    if query.verbosity == 0:
        if inode in graph:
            support = [inode]
    else:
        for name in sorted(query.chosen_elements):
            enode: Node = ("element", name)
            if enode in graph:
                support.append(enode)
            else:
                logger.debug("query element %r not in graph, dropped from prior", name)
        if industry_in_prior and inode in graph:
            support.append(inode)
    if not support:
        return {}
    share = 1.0 / len(support)
    return {node: share for node in support}


class GraphRecommender(BaseRecommender):
    """Per-process case-graph recommender."""

    def __init__(
        self,
        teleport: float = 0.3,
        tolerance: float = 1e-8,
        max_iterations: int = 100,
        industry_in_prior: bool = True,
        include_query_elements: bool = True,
    ) -> None:
        self.teleport = teleport
        self.tolerance = tolerance
        self.max_iterations = max_iterations
        self.industry_in_prior = industry_in_prior
        self.include_query_elements = include_query_elements
        self.graphs_: dict[str, CaseGraph] | None = None

    def fit(self, cb: CaseBase) -> "GraphRecommender":
        from .casebase import partition_by_process

        self.graphs_ = {
            proc: build_case_graph(sub) for proc, sub in partition_by_process(cb).items()
        }
        return self

    def recommend(self, query: Query) -> Ranking:
        self._check_fitted("graphs_")
        graph = self.graphs_.get(query.business_process)
        if graph is None or len(graph) == 0:
            return Ranking.empty()
        prior = build_prior(query, graph, industry_in_prior=self.industry_in_prior)
        if not prior:
            logger.info(
                "no prior support in graph for process %r; empty ranking",
                query.business_process,
            )
            return Ranking.empty()
        result = pagerank_with_priors(
            graph, prior, self.teleport, self.tolerance, self.max_iterations
        )
        scores = {
            node[1]: s for node, s in result.scores.items() if node[0] == "element" and s > 0.0
        }
        return self._apply_query_filter(Ranking(scores), query)
