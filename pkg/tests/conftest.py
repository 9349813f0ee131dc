"""Shared fixtures: a tiny hand-built case base and the default synthetic one."""

import pytest

from birec import Case, CaseBase, ElementKind, GenConfig, IndustryTaxonomy, SolutionElement, generate

TAXONOMY_DOC = {
    "name": "industry",
    "children": [
        {
            "name": "tech",
            "children": [
                {"name": "software", "children": []},
                {"name": "hardware", "children": []},
            ],
        },
        {
            "name": "retail",
            "children": [
                {"name": "grocery", "children": []},
            ],
        },
    ],
}


def kpi(name):
    return SolutionElement(name=name, kind=ElementKind.KPI)


def dim(name):
    return SolutionElement(name=name, kind=ElementKind.DIMENSION)


def make_case(cid, industry="industry/tech/software", process="sales",
              goal="grow sales revenue", target_groups=("employees",), elements=()):
    return Case(
        id=cid,
        industry=industry,
        business_process=process,
        goal=goal,
        target_groups=frozenset(target_groups),
        elements=frozenset(elements),
    )


@pytest.fixture
def taxonomy():
    return IndustryTaxonomy(TAXONOMY_DOC)


@pytest.fixture
def small_cb(taxonomy):
    """Five hand-built cases over two processes and three leaf industries."""
    cases = (
        make_case("c1", "industry/tech/software", "sales", "grow sales revenue",
                  ("employees",), (kpi("revenue"), kpi("churn rate"), dim("region"))),
        make_case("c2", "industry/tech/software", "sales", "grow sales margin",
                  ("employees", "top management"),
                  (kpi("revenue"), kpi("conversion rate"), dim("region"), dim("channel"))),
        make_case("c3", "industry/tech/hardware", "sales", "reduce churn",
                  ("middle management",),
                  (kpi("churn rate"), kpi("units sold"), dim("product line"))),
        make_case("c4", "industry/retail/grocery", "sales", "optimise inventory turnover",
                  ("employees",),
                  (kpi("inventory turnover"), kpi("basket size"), dim("store"))),
        make_case("c5", "industry/tech/software", "finance", "monitor cash flow",
                  ("top management",),
                  (kpi("cash flow"), kpi("operating cost"), dim("cost center"))),
    )
    return CaseBase(cases=cases, taxonomy=taxonomy)


@pytest.fixture(scope="session")
def default_synth_cb():
    """The default synthetic case base (82 cases, seed 42); built once per run."""
    return generate(GenConfig())
