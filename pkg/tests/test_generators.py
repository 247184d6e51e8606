import pytest

from oracles import arcs_of, girth as girth_oracle, has_directed_triangle
from ssnc.core import build
from ssnc.errors import BadParam
from ssnc.generators import (
    Filter,
    GenSpec,
    HuntReport,
    Kind,
    Target,
    circulant,
    enumerate_labeled,
    enumerate_tournaments,
    filtered_stream,
    hunt_counterexamples,
    labeled_count,
    planted_min_degree,
    random_oriented,
    random_tournament,
)
from ssnc.properties import girth, is_k_anti_transitive, is_m_free
from ssnc.rng import SplitMix64, splitmix_at
from ssnc.seymour import seymour_report

SPLITMIX_1234567 = [
    6457827717110365317,
    3203168211198807973,
    9817491932198370423,
    4593380528125082431,
    16408922859458223821,
]


class TestRng:
    def test_reference_vectors(self):
        g = SplitMix64(1234567)
        assert [g.next_u64() for _ in range(5)] == SPLITMIX_1234567

    def test_random_access(self):
        assert [splitmix_at(1234567, i) for i in range(5)] == SPLITMIX_1234567

    def test_below(self):
        g = SplitMix64(7)
        xs = [g.below(6) for _ in range(600)]
        assert set(xs) == set(range(6))
        with pytest.raises(ValueError):
            g.below(0)

    def test_unit_interval(self):
        g = SplitMix64(0)
        assert all(0.0 <= g.random() < 1.0 for _ in range(1000))


class TestEnumeration:
    @pytest.mark.parametrize("n,count", [(0, 1), (1, 1), (2, 3), (3, 27), (4, 729)])
    def test_counts(self, n, count):
        items = list(enumerate_labeled(n))
        assert len(items) == count == labeled_count(n)
        assert len(set(items)) == count

    def test_n5_count(self):
        assert sum(1 for _ in enumerate_labeled(5)) == 59049

    def test_order(self):
        got = [D.arcs() for D in enumerate_labeled(2)]
        assert got == [[], [(0, 1)], [(1, 0)]]
        first = list(enumerate_labeled(3))[:4]
        # last pair (1, 2) turns fastest
        assert [D.arcs() for D in first] == [[], [(1, 2)], [(2, 1)], [(0, 2)]]

    def test_sharding(self):
        whole = list(enumerate_labeled(4))
        parts = []
        for a in range(0, 729, 100):
            parts.extend(enumerate_labeled(4, a, a + 100))
        assert parts == whole

    def test_too_large(self):
        with pytest.raises(BadParam):
            next(enumerate_labeled(7))

    def test_tournaments(self):
        tours = list(enumerate_tournaments(5))
        assert len(tours) == 1024
        assert all(T.m_arcs == 10 for T in tours)
        assert all(seymour_report(T).has_seymour_vertex for T in tours)


class TestRandom:
    def test_extremes(self):
        assert random_oriented(8, 0.0, 1).m_arcs == 0
        assert random_oriented(8, 1.0, 1).m_arcs == 28

    def test_deterministic(self):
        assert random_oriented(8, 0.5, 42) == random_oriented(8, 0.5, 42)
        assert random_oriented(8, 0.5, 42) != random_oriented(8, 0.5, 43)

    def test_pinned_instance(self):
        # first draws of seed 42 decide pair (0, 1) then its direction
        g = SplitMix64(42)
        expect_arc = g.random() < 0.5
        D = random_oriented(2, 0.5, 42)
        assert (D.m_arcs == 1) == expect_arc

    def test_bad_p(self):
        with pytest.raises(BadParam):
            random_oriented(3, 1.5, 0)

    def test_tournament(self):
        for seed in range(20):
            T = random_tournament(3, seed)
            assert T.m_arcs == 3
            assert girth(T) in (3, None)
        for n in range(1, 9):
            assert random_tournament(n, n).m_arcs == n * (n - 1) // 2


class TestCirculant:
    def test_c5(self, c5):
        assert circulant(5, {1}) == c5

    def test_girth_7_12(self):
        D = circulant(7, {1, 2})
        assert girth(D) == 4 == girth_oracle(7, arcs_of(D))

    def test_cycle_m_free(self):
        for n in range(3, 9):
            D = circulant(n, {1})
            assert all(is_m_free(D, m) == (m <= n - 1) for m in range(1, n + 2))

    def test_regular(self):
        D = circulant(19, range(1, 8))
        assert set(D.out_degrees()) == {7}

    def test_orientation_rules(self):
        with pytest.raises(BadParam):
            circulant(6, {3})
        with pytest.raises(BadParam):
            circulant(7, {2, 5})
        with pytest.raises(BadParam):
            circulant(7, {0})


class TestPlanted:
    def test_hypotheses_by_construction(self):
        for seed in range(50):
            D = planted_min_degree(12, 4, seed)
            assert min(D.out_degrees()) == 4 == D.rows[0].bit_count()
            assert D.second_out_mask(0).bit_count() <= 3

    def test_bad(self):
        with pytest.raises(BadParam):
            planted_min_degree(12, 2, 0)
        with pytest.raises(BadParam):
            planted_min_degree(8, 3, 0)


class TestFilteredStream:
    def test_triangle_free_n4(self):
        spec = GenSpec(Kind.EXHAUSTIVE, 4, filters=(Filter("m_free", 3),))
        stream = filtered_stream(spec)
        got = list(stream)
        expected = [D for D in enumerate_labeled(4) if not has_directed_triangle(4, arcs_of(D))]
        assert got == expected
        assert stream.scanned == 729 and stream.accepted == len(expected)
        assert 0 < stream.acceptance_rate < 1

    def test_random_anti_transitive_reverifies(self):
        spec = GenSpec(Kind.RANDOM_ORIENTED, 10, seed=3, p_arc=0.2,
                       filters=(Filter.parse("k_anti_transitive=7"),), limit=50)
        got = list(filtered_stream(spec))
        assert len(got) == 50
        assert all(is_k_anti_transitive(D, 7) for D in got)

    def test_impossible_filter(self):
        spec = GenSpec(Kind.EXHAUSTIVE, 3, filters=(Filter("min_out_deg", 3),))
        assert list(filtered_stream(spec)) == []

    def test_max_attempts(self):
        spec = GenSpec(Kind.RANDOM_ORIENTED, 6, filters=(Filter("min_out_deg", 6),), limit=5, max_attempts=40)
        stream = filtered_stream(spec)
        assert list(stream) == [] and stream.scanned == 40

    def test_seeded_streams_repeat(self):
        spec = GenSpec(Kind.RANDOM_ORIENTED, 9, seed=99, p_arc=0.4, limit=30)
        assert list(filtered_stream(spec)) == list(filtered_stream(spec))

    def test_spec_validation(self):
        with pytest.raises(BadParam):
            GenSpec(Kind.RANDOM_ORIENTED, 5)
        with pytest.raises(BadParam):
            GenSpec(Kind.RANDOM_ORIENTED, 5, p_arc=-0.1, limit=1)
        with pytest.raises(BadParam):
            GenSpec(Kind.EXHAUSTIVE, 7)
        with pytest.raises(BadParam):
            GenSpec(Kind.CIRCULANT, 6, connection_set=(3,))
        with pytest.raises(BadParam):
            Filter.parse("girth=4")

    def test_filter_post_check(self):
        spec = GenSpec(Kind.RANDOM_ORIENTED, 9, seed=5, p_arc=0.3,
                       filters=(Filter("m_free", 4), Filter("min_out_deg", 1)), limit=20)
        for D in filtered_stream(spec):
            assert is_m_free(D, 4) and min(D.out_degrees()) >= 1


class TestHunt:
    def test_ssnc_n4(self):
        rep = hunt_counterexamples(GenSpec(Kind.EXHAUSTIVE, 4), Target.SSNC)
        assert rep.ok and rep.scanned == 729 and rep.tested == 729
        assert sum(rep.min_slack_histogram.values()) == 729
        assert rep.summary().startswith("729 scanned")

    def test_caccetta_n4(self):
        # degrees >= 2 both ways would need 8 arcs on 6 pairs
        rep = hunt_counterexamples(GenSpec(Kind.EXHAUSTIVE, 4), Target.CACCETTA)
        assert rep.ok and rep.tested == 0

    def test_caccetta_n3(self):
        rep = hunt_counterexamples(GenSpec(Kind.EXHAUSTIVE, 3), Target.CACCETTA)
        assert rep.ok and rep.tested == 2  # the two labeled directed triangles

    def test_lemma3_planted(self):
        spec = GenSpec(Kind.PLANTED, 10, seed=1, p_arc=0.3, limit=100, delta=3)
        rep = hunt_counterexamples(spec, Target.LEMMA3)
        assert rep.ok and rep.tested >= 100

    def test_merge(self):
        a = hunt_counterexamples(GenSpec(Kind.EXHAUSTIVE, 3), Target.SSNC)
        b = hunt_counterexamples(GenSpec(Kind.EXHAUSTIVE, 2), Target.SSNC)
        m = a.merge(b)
        assert (m.scanned, m.tested) == (30, 30)
        assert m.min_slack_histogram == a.min_slack_histogram + b.min_slack_histogram
        with pytest.raises(BadParam):
            a.merge(HuntReport(Target.LEMMA3, a.spec))

    def test_counterexample_payload(self, monkeypatch):
        import ssnc.generators as gen

        monkeypatch.setitem(gen._CHECKS, Target.SSNC, lambda D, rep: {"reason": "forced"})
        rep = hunt_counterexamples(GenSpec(Kind.EXHAUSTIVE, 2), Target.SSNC)
        assert [c["digraph6"] for c in rep.counterexamples] == ["&A?", "&AO", "&AG"]

    def test_progress_callback(self):
        seen = []
        hunt_counterexamples(GenSpec(Kind.EXHAUSTIVE, 4), Target.SSNC, progress=seen.append, progress_every=100)
        assert len(seen) == 7

    def test_to_dict_roundtrips_json(self):
        import json

        rep = hunt_counterexamples(GenSpec(Kind.EXHAUSTIVE, 3), Target.SSNC)
        d = json.loads(json.dumps(rep.to_dict()))
        assert d["scanned"] == 27 and d["target"] == "ssnc"


def test_generated_graphs_are_oriented(rng):
    for seed in range(100):
        D = random_oriented(rng.randint(1, 12), rng.random(), seed)
        assert build(D.n, D.arcs()) == D
