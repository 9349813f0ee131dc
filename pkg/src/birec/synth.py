"""Seeded synthetic case-base generator.

Stands in for the proprietary consultancy data. Element pools live at the
sector level of the taxonomy: sibling industries of one sector draw from
the same pool (so taxonomy-aware retrieval generalises across them),
every (sector, process) pair has a shared core of standard elements, and
a configurable leakage ratio lets cases borrow elements from foreign
sectors. Leaf industries are numerous relative to the case count, so a
specific industry often appears in only a couple of cases, the way real
consultancy customers do.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .casebase import Case, CaseBase, ElementKind, IndustryTaxonomy, SolutionElement

_SECTOR_NAMES = (
    "manufacturing",
    "services",
    "retail",
    "energy",
    "logistics",
    "healthcare",
    "finance",
    "construction",
)

_GOAL_BANK = (
    "improve", "monitor", "reduce", "increase", "optimise", "track", "forecast",
    "align", "consolidate", "automate", "benchmark", "visualise", "report",
    "margin", "cost", "efficiency", "quality", "throughput", "utilisation",
    "growth", "retention", "pipeline", "inventory", "compliance",
)


class GenerationError(ValueError):
    """Configuration cannot produce a valid case base."""


@dataclass(frozen=True)
class GenConfig:
    cases: int = 82
    sectors: int = 4
    industries_per_sector: int = 6
    pool_size: int = 60  # elements per sector pool
    kpi_ratio: float = 0.7
    overlap_ratio: float = 0.1
    core_fraction: float = 0.45
    leaf_signature_size: int = 8
    processes: tuple[str, ...] = ("sales", "finance")
    case_size_mean: float = 28.0
    case_size_sd: float = 4.0
    min_case_size: int = 8
    goal_words: int = 6
    seed: int = 42

    def __post_init__(self) -> None:
        if self.cases < 1 or self.sectors < 1 or self.industries_per_sector < 1:
            raise GenerationError("counts must be positive")
        if self.sectors > len(_SECTOR_NAMES):
            raise GenerationError(f"at most {len(_SECTOR_NAMES)} sectors supported")
        if not 0.0 <= self.overlap_ratio <= 1.0:
            raise GenerationError("overlap_ratio must be in [0, 1]")
        if not 0.0 < self.kpi_ratio < 1.0:
            raise GenerationError("kpi_ratio must be in (0, 1)")
        if not 0.0 <= self.core_fraction < 1.0:
            raise GenerationError("core_fraction must be in [0, 1)")
        if self.leaf_signature_size < 0:
            raise GenerationError("leaf_signature_size must be >= 0")
        if not self.processes:
            raise GenerationError("at least one business process required")


def _build_taxonomy(cfg: GenConfig) -> tuple[IndustryTaxonomy, list[str]]:
    sectors = []
    leaves = []
    for s in range(cfg.sectors):
        sector = _SECTOR_NAMES[s]
        children = []
        for j in range(cfg.industries_per_sector):
            name = f"{sector}-{j + 1}"
            children.append({"name": name, "children": []})
            leaves.append(f"industry/{sector}/{name}")
        sectors.append({"name": sector, "children": children})
    return IndustryTaxonomy({"name": "industry", "children": sectors}), leaves


def _build_pools(cfg: GenConfig) -> dict[str, list[SolutionElement]]:
    """Per-sector element pools; kind is fixed per name at creation."""
    pools: dict[str, list[SolutionElement]] = {}
    kpi_count = round(cfg.pool_size * cfg.kpi_ratio)
    for s in range(cfg.sectors):
        sector = _SECTOR_NAMES[s]
        pool = []
        for i in range(cfg.pool_size):
            kind = ElementKind.KPI if i < kpi_count else ElementKind.DIMENSION
            pool.append(SolutionElement(name=f"{sector} {kind.value} {i:02d}", kind=kind))
        pools[sector] = pool
    return pools


def _split(pool):
    kpis = sorted((e for e in pool if e.kind is ElementKind.KPI), key=lambda e: e.name)
    dims = sorted((e for e in pool if e.kind is ElementKind.DIMENSION), key=lambda e: e.name)
    return kpis, dims


def _bucket_core(
    cfg: GenConfig,
    sector: str,
    process: str,
    pools: dict[str, list[SolutionElement]],
) -> list[SolutionElement]:
    """Elements every case of one (sector, process) pair shares.

    Real consultancy cases within an industry segment repeat the same
    standard KPIs; the core models that and gives retrieval a signal.
    """
    rng = random.Random(f"core|{cfg.seed}|{sector}|{process}")
    core_size = round(cfg.case_size_mean * cfg.core_fraction)
    kpi_n = max(1, round(core_size * cfg.kpi_ratio))
    dim_n = max(0, core_size - kpi_n)
    kpis, dims = _split(pools[sector])
    if kpi_n > len(kpis) or dim_n > len(dims):
        raise GenerationError(
            f"pool for sector {sector!r} too small for a core of {core_size} elements"
        )
    return rng.sample(kpis, kpi_n) + rng.sample(dims, dim_n)


def _leaf_signature(
    cfg: GenConfig,
    leaf: str,
    sector: str,
    pools: dict[str, list[SolutionElement]],
    reserved: set[SolutionElement],
) -> list[SolutionElement]:
    """Elements characteristic of one specific leaf industry.

    Shared only by the few cases of that leaf, so engines that pinpoint
    the most similar individual cases can recover them while engines that
    average over many sector mates dilute them.
    """
    if cfg.leaf_signature_size == 0:
        return []
    rng = random.Random(f"leafsig|{cfg.seed}|{leaf}")
    available = sorted((e for e in pools[sector] if e not in reserved), key=lambda e: e.name)
    if cfg.leaf_signature_size > len(available):
        raise GenerationError(
            f"sector pool {sector!r} too small for a leaf signature of "
            f"{cfg.leaf_signature_size} elements"
        )
    return rng.sample(available, cfg.leaf_signature_size)


def _sample_case_elements(
    cfg: GenConfig,
    sector: str,
    pools: dict[str, list[SolutionElement]],
    core: list[SolutionElement],
    signature: list[SolutionElement],
    size: int,
    rng: random.Random,
) -> frozenset[SolutionElement]:
    fixed = list(dict.fromkeys(core + signature))
    tail_target = max(0, size - len(fixed))
    foreign = [e for s, pool in sorted(pools.items()) if s != sector for e in pool]
    leak_n = min(round(tail_target * cfg.overlap_ratio), len(foreign))
    own_n = tail_target - leak_n
    fixed_set = set(fixed)
    own_rest = sorted((e for e in pools[sector] if e not in fixed_set), key=lambda e: e.name)
    if own_n > len(own_rest):
        raise GenerationError(
            f"sector pool {sector!r} too small for case size {size} "
            f"(need {own_n} free elements)"
        )
    chosen = fixed + rng.sample(own_rest, own_n)
    if leak_n:
        chosen += rng.sample(sorted(foreign, key=lambda e: e.name), leak_n)
    return frozenset(chosen)


def _sector_vocab(sector: str, rng_seed: int) -> list[str]:
    rng = random.Random(f"goalvocab|{rng_seed}|{sector}")
    return rng.sample(_GOAL_BANK, 10)


def generate(cfg: GenConfig) -> CaseBase:
    """Deterministically generate a validated case base from the config."""
    rng = random.Random(cfg.seed)
    taxonomy, leaves = _build_taxonomy(cfg)
    pools = _build_pools(cfg)
    groups = sorted({"employees", "middle management", "top management"})

    cores: dict[tuple[str, str], list[SolutionElement]] = {}
    signatures: dict[str, list[SolutionElement]] = {}
    core_reserved: dict[str, set[SolutionElement]] = {}
    for sector in sorted({l.rsplit("/", 2)[-2] for l in leaves}):
        reserved: set[SolutionElement] = set()
        for process in cfg.processes:
            core = _bucket_core(cfg, sector, process, pools)
            cores[(sector, process)] = core
            reserved.update(core)
        core_reserved[sector] = reserved

    cases = []
    for i in range(cfg.cases):
        leaf = leaves[i % len(leaves)]
        sector = leaf.rsplit("/", 2)[-2]
        process = cfg.processes[(i // len(leaves)) % len(cfg.processes)]
        core = cores[(sector, process)]
        signature = signatures.setdefault(
            leaf, _leaf_signature(cfg, leaf, sector, pools, core_reserved[sector])
        )
        size = max(cfg.min_case_size, round(rng.gauss(cfg.case_size_mean, cfg.case_size_sd)))
        size = min(max(size, len(core) + len(signature)), cfg.pool_size)
        elements = _sample_case_elements(cfg, sector, pools, core, signature, size, rng)
        vocab = _sector_vocab(sector, cfg.seed)
        goal = " ".join(rng.sample(vocab, min(cfg.goal_words, len(vocab))) + [process])
        tg_count = rng.randint(1, 3)
        target_groups = frozenset(rng.sample(groups, tg_count))
        cases.append(
            Case(
                id=f"case-{i:03d}",
                industry=leaf,
                business_process=process,
                goal=goal,
                target_groups=target_groups,
                elements=elements,
            )
        )
    return CaseBase(cases=tuple(cases), taxonomy=taxonomy)
