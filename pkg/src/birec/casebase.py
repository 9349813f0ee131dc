"""Domain model: solution elements, cases, the industry taxonomy and case-base I/O.

A case records one customer x business-process consultancy engagement:
company demographics plus the solution elements (KPIs and dimensions)
that ended up in the delivered solution. Case bases are loaded from a
JSON document (see :func:`load_case_base`) and are immutable afterwards.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Mapping

logger = logging.getLogger(__name__)

ALLOWED_TARGET_GROUPS = frozenset({"employees", "middle management", "top management"})

_WS = re.compile(r"\s+")


class CaseBaseError(ValueError):
    """Raised when a case-base document fails validation."""


class ElementKind(str, Enum):
    KPI = "kpi"
    DIMENSION = "dimension"


def canonical_name(name: str) -> str:
    """Canonical form of an element name: trim, case-fold, collapse whitespace."""
    return _WS.sub(" ", name.strip().casefold())


@dataclass(frozen=True)
class SolutionElement:
    """A recommendable solution element (KPI or dimension), identified by canonical name."""

    name: str
    kind: ElementKind

    def __post_init__(self) -> None:
        if not self.name:
            raise CaseBaseError("element name must be non-empty")
        object.__setattr__(self, "name", canonical_name(self.name))
        object.__setattr__(self, "kind", ElementKind(self.kind))


@dataclass(frozen=True)
class Case:
    """One customer x business-process record."""

    id: str
    industry: str
    business_process: str
    goal: str
    target_groups: frozenset[str]
    elements: frozenset[SolutionElement]

    def __post_init__(self) -> None:
        object.__setattr__(self, "target_groups", frozenset(self.target_groups))
        object.__setattr__(self, "elements", frozenset(self.elements))
        if not self.elements:
            raise CaseBaseError(f"case {self.id!r}: element set is empty")
        bad = self.target_groups - ALLOWED_TARGET_GROUPS
        if bad:
            raise CaseBaseError(
                f"case {self.id!r}: illegal target_groups {sorted(bad)!r}"
            )
        names = [e.name for e in self.elements]
        if len(names) != len(set(names)):
            raise CaseBaseError(f"case {self.id!r}: duplicate element name after canonicalization")

    @property
    def element_names(self) -> frozenset[str]:
        return frozenset(e.name for e in self.elements)

    def kpis(self) -> list[SolutionElement]:
        return sorted(
            (e for e in self.elements if e.kind is ElementKind.KPI), key=lambda e: e.name
        )


class IndustryTaxonomy:
    """Rooted tree of industry nodes; nodes are addressed by '/'-joined paths."""

    def __init__(self, root: Mapping) -> None:
        self._depth: dict[str, int] = {}
        self._parent: dict[str, str | None] = {}
        self._children: dict[str, list[str]] = {}
        self._root_tree = _copy_tree(root)
        self._walk(self._root_tree, prefix="", depth=0, parent=None)
        if not self._depth:
            raise CaseBaseError("taxonomy is empty")

    def _walk(self, node: Mapping, prefix: str, depth: int, parent: str | None) -> None:
        name = node.get("name")
        if not isinstance(name, str) or not name:
            raise CaseBaseError("taxonomy node missing a non-empty name")
        path = f"{prefix}/{name}" if prefix else name
        if path in self._depth:
            raise CaseBaseError(f"duplicate taxonomy path {path!r}")
        self._depth[path] = depth
        self._parent[path] = parent
        self._children[path] = []
        if parent is not None:
            self._children[parent].append(path)
        for child in node.get("children", []):
            self._walk(child, prefix=path, depth=depth + 1, parent=path)

    @property
    def root(self) -> str:
        return next(iter(self._depth))

    def __contains__(self, path: str) -> bool:
        return path in self._depth

    def paths(self) -> list[str]:
        return list(self._depth)

    def depth(self, path: str) -> int:
        try:
            return self._depth[path]
        except KeyError:
            raise CaseBaseError(f"unknown industry path {path!r}") from None

    def lca(self, a: str, b: str) -> str:
        """Least common ancestor of two node paths."""
        da, db = self.depth(a), self.depth(b)
        while da > db:
            a = self._parent[a]  # type: ignore[assignment]
            da -= 1
        while db > da:
            b = self._parent[b]  # type: ignore[assignment]
            db -= 1
        while a != b:
            a = self._parent[a]  # type: ignore[assignment]
            b = self._parent[b]  # type: ignore[assignment]
        return a

    def to_dict(self) -> dict:
        return _copy_tree(self._root_tree)


@dataclass(frozen=True)
class CaseBase:
    """Immutable collection of validated cases plus the industry taxonomy."""

    cases: tuple[Case, ...]
    taxonomy: IndustryTaxonomy

    def __post_init__(self) -> None:
        object.__setattr__(self, "cases", tuple(self.cases))
        if not self.cases:
            raise CaseBaseError("case base is empty")
        seen: set[str] = set()
        kinds: dict[str, ElementKind] = {}
        for case in self.cases:
            if case.id in seen:
                raise CaseBaseError(f"duplicate case id {case.id!r}")
            seen.add(case.id)
            if case.industry not in self.taxonomy:
                raise CaseBaseError(
                    f"case {case.id!r}: industry {case.industry!r} not in taxonomy"
                )
            if not case.business_process:
                logger.warning("case %r has an empty business_process label", case.id)
            for e in case.elements:
                prev = kinds.setdefault(e.name, e.kind)
                if prev is not e.kind:
                    raise CaseBaseError(
                        f"element {e.name!r} declared both {prev.value} and {e.kind.value}"
                    )

    def __len__(self) -> int:
        return len(self.cases)

    def __iter__(self) -> Iterator[Case]:
        return iter(self.cases)

    @property
    def processes(self) -> list[str]:
        return sorted({c.business_process for c in self.cases})

    def element_kinds(self) -> dict[str, ElementKind]:
        """Canonical element name -> kind, over the whole base."""
        out: dict[str, ElementKind] = {}
        for case in self.cases:
            for e in case.elements:
                out[e.name] = e.kind
        return out

    def without(self, case_id: str) -> "CaseBase":
        """Copy of this base with one case removed (leave-one-out training side)."""
        remaining = tuple(c for c in self.cases if c.id != case_id)
        return CaseBase(cases=remaining, taxonomy=self.taxonomy)


@dataclass(frozen=True)
class CaseBaseStats:
    """Corpus-level statistics driving the hybrid's verbosity schedule."""

    avg_case_size: float
    verbosity_threshold: float
    element_vocabulary: frozenset[str]
    per_process_counts: Mapping[str, int]


def compute_stats(cb: CaseBase, count: str = "all") -> CaseBaseStats:
    """Average case size and the verbosity threshold (half the average size).

    ``count`` selects which elements enter the size: "all" (default) or
    "kpi" for KPI-kind elements only.
    """
    if count not in ("all", "kpi"):
        raise ValueError(f"unknown counting mode {count!r}")
    sizes = []
    for case in cb:
        if count == "all":
            sizes.append(len(case.elements))
        else:
            sizes.append(sum(1 for e in case.elements if e.kind is ElementKind.KPI))
    avg = sum(sizes) / len(sizes)
    counts: dict[str, int] = {}
    for case in cb:
        counts[case.business_process] = counts.get(case.business_process, 0) + 1
    vocab = frozenset(n for case in cb for n in case.element_names)
    return CaseBaseStats(
        avg_case_size=avg,
        verbosity_threshold=avg / 2,
        element_vocabulary=vocab,
        per_process_counts=dict(sorted(counts.items())),
    )


def partition_by_process(cb: CaseBase) -> dict[str, CaseBase]:
    """Split a case base into one sub-base per business-process label."""
    buckets: dict[str, list[Case]] = {}
    for case in cb:
        buckets.setdefault(case.business_process, []).append(case)
    if "" in buckets:
        logger.warning("%d case(s) carry an empty business_process label", len(buckets[""]))
    return {
        proc: CaseBase(cases=tuple(cases), taxonomy=cb.taxonomy)
        for proc, cases in sorted(buckets.items())
    }


_CASE_FIELDS = {"id", "industry", "business_process", "goal", "target_groups", "elements"}


def _parse_case(raw: Mapping, index: int) -> Case:
    cid = raw.get("id")
    if not isinstance(cid, str) or not cid:
        raise CaseBaseError(f"cases[{index}]: missing or empty id")
    unknown = set(raw) - _CASE_FIELDS
    if unknown:
        logger.warning("case %r: ignoring unknown fields %s", cid, sorted(unknown))
    elements = []
    for e in raw.get("elements", []):
        try:
            elements.append(SolutionElement(name=e["name"], kind=e["kind"]))
        except (KeyError, ValueError, TypeError) as exc:
            raise CaseBaseError(f"case {cid!r}: bad element {e!r}: {exc}") from exc
    try:
        return Case(
            id=cid,
            industry=raw.get("industry", ""),
            business_process=raw.get("business_process", ""),
            goal=raw.get("goal", "") or "",
            target_groups=frozenset(raw.get("target_groups", [])),
            elements=frozenset(elements),
        )
    except CaseBaseError:
        raise
    except (ValueError, TypeError) as exc:
        raise CaseBaseError(f"case {cid!r}: {exc}") from exc


def case_base_from_dict(doc: Mapping) -> CaseBase:
    if "taxonomy" not in doc:
        raise CaseBaseError("document missing 'taxonomy'")
    if "cases" not in doc:
        raise CaseBaseError("document missing 'cases'")
    taxonomy = IndustryTaxonomy(doc["taxonomy"])
    cases = tuple(_parse_case(raw, i) for i, raw in enumerate(doc["cases"]))
    return CaseBase(cases=cases, taxonomy=taxonomy)


def load_case_base(path) -> CaseBase:
    """Load and validate a case-base JSON document (UTF-8)."""
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CaseBaseError(f"{path}: not valid JSON: {exc}") from exc
    return case_base_from_dict(doc)


def case_base_to_dict(cb: CaseBase) -> dict:
    return {
        "taxonomy": cb.taxonomy.to_dict(),
        "cases": [
            {
                "id": c.id,
                "industry": c.industry,
                "business_process": c.business_process,
                "goal": c.goal,
                "target_groups": sorted(c.target_groups),
                "elements": [
                    {"name": e.name, "kind": e.kind.value}
                    for e in sorted(c.elements, key=lambda e: e.name)
                ],
            }
            for c in cb.cases
        ],
    }


def save_case_base(cb: CaseBase, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(case_base_to_dict(cb), fh, indent=2, ensure_ascii=False, sort_keys=True)
        fh.write("\n")


def _copy_tree(node: Mapping) -> dict:
    return {
        "name": node.get("name"),
        "children": [_copy_tree(c) for c in node.get("children", [])],
    }
