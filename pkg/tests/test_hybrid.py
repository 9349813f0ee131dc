"""Verbosity-scheduled mixing: the alpha schedule, normalization, combination."""

import pytest
from hypothesis import given, strategies as st

from birec import (
    CBRRecommender,
    GraphRecommender,
    HybridRecommender,
    Query,
    Ranking,
    alpha,
    hybrid_combine,
    minmax_normalize,
)


class TestAlpha:
    def test_zero_verbosity_is_one(self):
        assert alpha(0, c_bar=14.0, beta=0.3) == 1.0

    def test_at_and_above_threshold_is_beta(self):
        assert alpha(14, c_bar=14.0, beta=0.3) == pytest.approx(0.3, abs=1e-12)
        assert alpha(15, c_bar=14.0, beta=0.3) == 0.3
        assert alpha(100, c_bar=14.0, beta=0.3) == 0.3

    def test_midpoint_value(self):
        # beta 0.3, threshold 14, verbosity 7: 1 - 0.7 * 7/14
        assert alpha(7, c_bar=14.0, beta=0.3) == pytest.approx(0.65, abs=1e-12)

    @given(
        beta=st.floats(0.01, 0.99),
        c_bar=st.floats(0.5, 50.0),
        v=st.integers(0, 200),
    )
    def test_range_and_monotonicity(self, beta, c_bar, v):
        a = alpha(v, c_bar, beta)
        assert beta - 1e-12 <= a <= 1.0 + 1e-12
        assert alpha(v + 1, c_bar, beta) <= a + 1e-12

    def test_validation(self):
        with pytest.raises(ValueError, match="verbosity"):
            alpha(-1, 14.0, 0.3)
        with pytest.raises(ValueError, match="threshold"):
            alpha(0, 0.0, 0.3)
        for bad_beta in (0.0, 1.0, -0.5, 2.0):
            with pytest.raises(ValueError, match="beta"):
                alpha(0, 14.0, bad_beta)


class TestMinMaxNormalize:
    def test_affine_endpoints(self):
        assert minmax_normalize({"a": 2.0, "b": 4.0, "c": 6.0}) == {
            "a": 0.0, "b": 0.5, "c": 1.0}

    def test_hand_computed(self):
        out = minmax_normalize({"a": 0.0, "b": 1.3, "c": 0.8})
        assert out["a"] == 0.0
        assert out["b"] == 1.0
        assert out["c"] == pytest.approx(0.6153846153846154, abs=1e-12)

    def test_degenerate_all_equal_maps_to_zero(self):
        assert minmax_normalize({"a": 5.0, "b": 5.0}) == {"a": 0.0, "b": 0.0}

    def test_empty(self):
        assert minmax_normalize({}) == {}

    @given(scores=st.dictionaries(st.text(min_size=1, max_size=4),
                                  st.floats(-100, 100), min_size=1, max_size=12))
    def test_range_and_order_preserved(self, scores):
        out = minmax_normalize(scores)
        assert all(0.0 <= v <= 1.0 for v in out.values())
        names = sorted(scores)
        for a, b in zip(names, names[1:]):
            if scores[a] < scores[b]:
                assert out[a] <= out[b]


class TestHybridCombine:
    def q(self, n_elements):
        return Query(industry="industry/tech/software", business_process="sales",
                     chosen_elements=frozenset(f"e{i}" for i in range(n_elements)))

    def test_both_empty(self):
        assert len(hybrid_combine(self.q(0), Ranking.empty(), Ranking.empty(),
                                  beta=0.3, c_bar=14.0)) == 0

    def test_equal_mix_hand_value(self):
        # alpha = 0.5 at half the weight span: beta=0, not allowed, so pick
        # verbosity/threshold giving alpha=0.5: beta=0.3, v=10, c_bar=14 -> 0.5
        cbr = Ranking({"x": 2.0, "y": 1.0})
        graph = Ranking({"x": 0.0, "y": 3.0})
        out = hybrid_combine(self.q(10), cbr, graph, beta=0.3, c_bar=14.0)
        scores = out.scores()
        # normalized: cbr x=1,y=0; graph x=0,y=1; alpha=0.5
        assert scores["x"] == pytest.approx(0.5, abs=1e-12)
        assert scores["y"] == pytest.approx(0.5, abs=1e-12)

    def test_graph_only_item_can_outrank(self):
        # item absent from the case-based ranking but top of the graph wins
        # once alpha is at the floor: score (1 - 0.3) * 1 = 0.7
        cbr = Ranking({"a": 1.0, "b": 0.5})
        graph = Ranking({"g": 5.0, "a": 1.0})
        out = hybrid_combine(self.q(20), cbr, graph, beta=0.3, c_bar=14.0)
        scores = out.scores()
        assert scores["g"] == pytest.approx(0.7, abs=1e-12)
        assert out.names[0] == "g" or scores[out.names[0]] >= 0.7

    def test_candidate_superset(self):
        cbr = Ranking({"a": 1.0, "b": 0.5})
        graph = Ranking({"c": 2.0})
        out = hybrid_combine(self.q(3), cbr, graph, beta=0.3, c_bar=14.0)
        assert set(out.names) >= {"a", "b"}
        assert set(out.names) == {"a", "b", "c"}

    def test_scores_in_unit_interval(self):
        cbr = Ranking({"a": 10.0, "b": 3.0, "c": 1.0})
        graph = Ranking({"b": 0.4, "c": 0.2, "d": 0.9})
        out = hybrid_combine(self.q(5), cbr, graph, beta=0.3, c_bar=14.0)
        assert all(0.0 <= s <= 1.0 for _, s in out)

    def test_zero_graph_preserves_cbr_order(self):
        cbr = Ranking({"a": 3.0, "b": 2.0, "c": 1.0})
        zero = Ranking({"a": 0.0, "b": 0.0, "c": 0.0})
        out = hybrid_combine(self.q(4), cbr, zero, beta=0.3, c_bar=14.0)
        assert out.names == cbr.names

    def test_zero_cbr_preserves_graph_order(self):
        graph = Ranking({"a": 0.9, "b": 0.4, "c": 0.1})
        zero = Ranking({"a": 0.0, "b": 0.0, "c": 0.0})
        out = hybrid_combine(self.q(4), zero, graph, beta=0.3, c_bar=14.0)
        assert out.names == graph.names


class TestHybridRecommender:
    def test_threshold_learned_from_case_base(self, small_cb):
        engine = HybridRecommender().fit(small_cb)
        sizes = [len(c.elements) for c in small_cb]
        assert engine.c_bar_ == pytest.approx(sum(sizes) / len(sizes) / 2)

    def test_threshold_override(self, small_cb):
        engine = HybridRecommender(verbosity_threshold=9.0).fit(small_cb)
        assert engine.c_bar_ == 9.0

    def test_kpi_counting_mode(self, small_cb):
        engine = HybridRecommender(threshold_count_mode="kpi").fit(small_cb)
        kpi_sizes = [len(c.kpis()) for c in small_cb]
        assert engine.c_bar_ == pytest.approx(sum(kpi_sizes) / len(kpi_sizes) / 2)

    def test_alpha_for_fresh_query_is_one(self, small_cb):
        engine = HybridRecommender().fit(small_cb)
        q = Query(industry="industry/tech/software", business_process="sales")
        assert engine.alpha_for(q) == 1.0

    def test_invalid_beta_rejected_at_fit(self, small_cb):
        with pytest.raises(ValueError, match="beta"):
            HybridRecommender(beta=1.5).fit(small_cb)

    def test_candidates_superset_of_cbr(self, small_cb):
        q = Query(industry="industry/tech/software", business_process="sales",
                  goal="grow sales revenue", target_groups=frozenset({"employees"}),
                  chosen_elements=frozenset({"revenue"}))
        hybrid = HybridRecommender().fit(small_cb)
        cbr = CBRRecommender().fit(small_cb)
        assert set(hybrid.recommend(q).names) >= set(cbr.recommend(q).names)

    def test_verbosity_zero_equals_cbr_order_when_graph_empty(self, small_cb):
        # non-leaf industry: no graph prior support, so the hybrid is pure CBR
        q = Query(industry="industry/tech", business_process="sales",
                  goal="grow sales revenue")
        hybrid = HybridRecommender().fit(small_cb)
        cbr = CBRRecommender().fit(small_cb)
        graph = GraphRecommender().fit(small_cb)
        assert len(graph.recommend(q)) == 0
        assert hybrid.recommend(q).names == cbr.recommend(q).names
