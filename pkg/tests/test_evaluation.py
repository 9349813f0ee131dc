"""Leave-one-case-out harness: query sampling, AP, hygiene, determinism."""

import random

import pytest

from birec import (
    CBRRecommender,
    Case,
    CaseBase,
    ElementKind,
    EvalConfig,
    GenConfig,
    Ranking,
    SolutionElement,
    UserKNNRecommender,
    average_precision,
    generate,
    leave_one_out,
    make_query,
)
from birec.evaluation import training_fingerprint

from conftest import dim, kpi, make_case


@pytest.fixture(scope="module")
def small_synth_cb():
    return generate(GenConfig(cases=10, sectors=2, industries_per_sector=2, seed=7))


class TestEvalConfig:
    def test_defaults(self):
        cfg = EvalConfig()
        assert cfg.verbosity_levels == (0, 5, 10, 15, 20, 30, 40, 100)
        assert cfg.seed == 42
        assert cfg.relevance_mode == "all"

    def test_levels_must_increase(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            EvalConfig(verbosity_levels=(0, 5, 5))
        with pytest.raises(ValueError, match="strictly increasing"):
            EvalConfig(verbosity_levels=(5, 0))

    def test_levels_non_negative(self):
        with pytest.raises(ValueError, match="non-negative"):
            EvalConfig(verbosity_levels=(-1, 5))

    def test_relevance_mode_validated(self):
        with pytest.raises(ValueError, match="relevance mode"):
            EvalConfig(relevance_mode="strict")


class TestMakeQuery:
    def test_verbosity_zero_has_no_elements(self, small_cb):
        q = make_query(small_cb.cases[0], 0, random.Random(1))
        assert q.chosen_elements == frozenset()

    def test_samples_kpis_only(self, small_cb):
        case = small_cb.cases[1]
        kpi_names = {e.name for e in case.kpis()}
        q = make_query(case, 100, random.Random(1))
        assert q.chosen_elements <= kpi_names

    def test_verbosity_above_pool_exhausts_kpis(self, small_cb):
        case = small_cb.cases[0]
        q = make_query(case, 100, random.Random(3))
        assert q.chosen_elements == {e.name for e in case.kpis()}

    def test_same_seed_same_query(self, small_cb):
        case = small_cb.cases[1]
        a = make_query(case, 1, random.Random(9))
        b = make_query(case, 1, random.Random(9))
        assert a == b

    def test_carries_demographics(self, small_cb):
        case = small_cb.cases[0]
        q = make_query(case, 2, random.Random(5))
        assert q.industry == case.industry
        assert q.business_process == case.business_process
        assert q.goal == case.goal
        assert q.target_groups == case.target_groups

    def test_negative_verbosity_rejected(self, small_cb):
        with pytest.raises(ValueError):
            make_query(small_cb.cases[0], -1, random.Random(1))


class TestAveragePrecision:
    def test_perfect_ranking(self):
        r = Ranking({"a": 3.0, "b": 2.0, "x": 1.0})
        assert average_precision(r, {"a", "b"}) == 1.0

    def test_ranks_one_and_three(self):
        r = Ranking({"a": 3.0, "x": 2.0, "b": 1.0})
        assert average_precision(r, {"a", "b"}) == pytest.approx((1 + 2 / 3) / 2, abs=1e-12)

    def test_nothing_retrieved(self):
        r = Ranking({"x": 1.0, "y": 0.5})
        assert average_precision(r, {"a"}) == 0.0

    def test_unretrieved_relevant_items_penalize(self):
        r = Ranking({"a": 1.0})
        assert average_precision(r, {"a", "b", "c"}) == pytest.approx(1 / 3, abs=1e-12)

    def test_empty_relevant_set_rejected(self):
        with pytest.raises(ValueError, match="relevant"):
            average_precision(Ranking({"a": 1.0}), set())


class TestLeaveOneOut:
    def engines(self):
        return {"cbr:top1": lambda: CBRRecommender(top_n=1)}

    def test_two_identical_cases_score_one_everywhere(self, taxonomy):
        elements = tuple(kpi(f"k{i}") for i in range(6)) + (dim("d1"),)
        cases = (make_case("c1", elements=elements), make_case("c2", elements=elements))
        cb = CaseBase(cases=cases, taxonomy=taxonomy)
        report = leave_one_out(cb, self.engines(), EvalConfig(verbosity_levels=(0, 3, 100)))
        for v, m in report.map_table["cbr:top1"].items():
            assert m == pytest.approx(1.0, abs=1e-12), f"verbosity {v}"

    def test_cf_absent_at_verbosity_zero(self, small_synth_cb):
        engines = {"cf": lambda: UserKNNRecommender(k=5)}
        report = leave_one_out(small_synth_cb, engines, EvalConfig(verbosity_levels=(0, 5)))
        assert report.map_table["cf"][0] is None
        assert report.map_table["cf"][5] is not None
        assert report.to_csv().splitlines()[1].endswith(",-")

    def test_matches_naive_reimplementation(self, small_synth_cb):
        # independent double-loop recomputation of the whole sweep
        cfg = EvalConfig(verbosity_levels=(0, 3, 8), seed=7)
        report = leave_one_out(small_synth_cb, {"cbr": lambda: CBRRecommender(top_n=2)}, cfg)
        for v in cfg.verbosity_levels:
            aps = []
            for idx, case in enumerate(small_synth_cb):
                training = small_synth_cb.without(case.id)
                engine = CBRRecommender(top_n=2).fit(training)
                rng = random.Random(f"{cfg.seed}|{idx}|{v}")
                pool = sorted(e.name for e in case.kpis())
                chosen = frozenset(rng.sample(pool, min(v, len(pool))))
                from birec import Query

                query = Query.from_case(case, chosen_elements=chosen)
                ranking = engine.recommend(query)
                relevant = set(case.element_names)
                hits, ap = 0, 0.0
                for rank, (name, _) in enumerate(ranking, start=1):
                    if name in relevant:
                        hits += 1
                        ap += hits / rank
                aps.append(ap / len(relevant))
            expected = sum(aps) / len(aps)
            assert report.map_table["cbr"][v] == pytest.approx(expected, abs=1e-9)

    def test_training_fingerprint_ignores_held_out_content(self, taxonomy):
        base = [
            make_case("c1", elements=(kpi("a"), kpi("b"))),
            make_case("c2", elements=(kpi("b"), kpi("c"))),
            make_case("c3", elements=(kpi("a"), kpi("c"))),
        ]
        cb1 = CaseBase(cases=tuple(base), taxonomy=taxonomy)
        mutated = make_case("c2", goal="entirely different goal",
                            elements=(kpi("zz"), kpi("yy")))
        cb2 = CaseBase(cases=(base[0], mutated, base[2]), taxonomy=taxonomy)
        # the c2 fold trains on {c1, c3} either way
        assert training_fingerprint(cb1.without("c2")) == training_fingerprint(cb2.without("c2"))
        # other folds do see the mutation
        assert training_fingerprint(cb1.without("c1")) != training_fingerprint(cb2.without("c1"))

    def test_report_fingerprints_recorded_per_fold(self, small_synth_cb):
        report = leave_one_out(small_synth_cb, self.engines(),
                               EvalConfig(verbosity_levels=(0,)))
        fps = report.metadata["training_fingerprints"]
        assert set(fps) == {c.id for c in small_synth_cb}
        for cid in fps:
            assert fps[cid] == training_fingerprint(small_synth_cb.without(cid))

    def test_reports_are_byte_identical(self, small_synth_cb):
        cfg = EvalConfig(verbosity_levels=(0, 4), seed=11)
        a = leave_one_out(small_synth_cb, self.engines(), cfg)
        b = leave_one_out(small_synth_cb, self.engines(), cfg)
        assert a.to_json() == b.to_json()
        assert a.to_csv() == b.to_csv()

    def test_thread_pool_matches_serial(self, small_synth_cb):
        cfg = EvalConfig(verbosity_levels=(0, 4), seed=11)
        serial = leave_one_out(small_synth_cb, self.engines(), cfg, workers=1)
        threaded = leave_one_out(small_synth_cb, self.engines(), cfg, workers=4)
        assert serial.to_json() == threaded.to_json()

    def test_map_invariant_under_case_id_relabeling(self, small_synth_cb):
        from birec.casebase import case_base_from_dict, case_base_to_dict

        doc = case_base_to_dict(small_synth_cb)
        for i, raw in enumerate(doc["cases"]):
            raw["id"] = f"renamed-{i:02d}"
        relabeled = case_base_from_dict(doc)
        cfg = EvalConfig(verbosity_levels=(0, 4, 9), seed=7)
        a = leave_one_out(small_synth_cb, self.engines(), cfg)
        b = leave_one_out(relabeled, self.engines(), cfg)
        for v in cfg.verbosity_levels:
            assert a.map_table["cbr:top1"][v] == pytest.approx(
                b.map_table["cbr:top1"][v], abs=1e-12)

    def test_exclude_query_mode(self, small_synth_cb):
        cfg = EvalConfig(verbosity_levels=(3,), seed=7, relevance_mode="exclude-query")
        report = leave_one_out(small_synth_cb, self.engines(), cfg)
        m = report.map_table["cbr:top1"][3]
        assert m is not None and 0.0 <= m <= 1.0
        assert report.metadata["relevance_mode"] == "exclude-query"

    def test_needs_at_least_two_cases(self, taxonomy):
        cb = CaseBase(cases=(make_case("c1", elements=(kpi("a"),)),), taxonomy=taxonomy)
        with pytest.raises(ValueError, match="at least 2"):
            leave_one_out(cb, self.engines())

    def test_metadata_contents(self, small_synth_cb):
        report = leave_one_out(small_synth_cb, self.engines(),
                               EvalConfig(verbosity_levels=(0,), seed=5))
        meta = report.metadata
        assert meta["seed"] == 5
        assert meta["case_count"] == len(small_synth_cb)
        assert meta["verbosity_threshold"] == pytest.approx(meta["avg_case_size"] / 2)
