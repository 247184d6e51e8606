import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import oriented_graphs
from oracles import arcs_of, girth as girth_oracle, is_k_anti_transitive as anti_oracle, simple_paths
from ssnc.core import Path, build
from ssnc.errors import BadParam
from ssnc.generators import enumerate_labeled, enumerate_tournaments
from ssnc.properties import (
    exists_path_of_length,
    find_anti_transitivity_witness,
    find_k_quasi_transitivity_violation,
    find_k_transitivity_violation,
    find_transitive_triangle,
    girth,
    is_k_anti_transitive,
    is_k_quasi_transitive,
    is_k_transitive,
    is_m_free,
    is_oriented,
    profile,
)


def test_girth_examples(c3, tt3, c5_chord):
    assert girth(c3) == 3
    assert girth(tt3) is None
    assert girth(c5_chord) == 4
    assert girth_oracle(5, arcs_of(c5_chord)) == 4


def test_m_free(c3, tt3):
    assert is_m_free(c3, 2)
    assert not is_m_free(c3, 3)
    assert all(is_m_free(tt3, m) for m in range(1, 10))
    with pytest.raises(BadParam):
        is_m_free(c3, 0)


class TestPaths:
    def test_examples(self, c5, c5_chord):
        assert exists_path_of_length(c5, 0, 2, 2) == Path((0, 1, 2))
        assert exists_path_of_length(c5, 0, 2, 7) is None
        assert exists_path_of_length(c5_chord, 0, 4, 4) == Path((0, 1, 2, 3, 4))
        assert exists_path_of_length(c5_chord, 0, 4, 3) == Path((0, 2, 3, 4))
        assert simple_paths(5, arcs_of(c5_chord), 0, 4, 3) == [(0, 2, 3, 4)]

    def test_bad_params(self, c5):
        with pytest.raises(BadParam):
            exists_path_of_length(c5, 1, 1, 2)
        with pytest.raises(BadParam):
            exists_path_of_length(c5, 0, 1, 0)

    def test_path_never_revisits_endpoint(self):
        # 0 2 3 1 2 is a walk, not a path
        D = build(5, [(0, 2), (2, 3), (3, 1), (1, 2)])
        assert exists_path_of_length(D, 0, 2, 4) is None
        assert exists_path_of_length(D, 0, 2, 1) == Path((0, 2))

    @settings(max_examples=150, deadline=None)
    @given(oriented_graphs(min_n=2, max_n=6), st.data())
    def test_against_enumeration(self, D, data):
        u = data.draw(st.integers(0, D.n - 1))
        v = data.draw(st.integers(0, D.n - 1).filter(lambda x: x != u))
        k = data.draw(st.integers(1, D.n))
        ref = simple_paths(D.n, arcs_of(D), u, v, k)
        got = exists_path_of_length(D, u, v, k)
        if ref:
            assert got is not None and got.vertices == ref[0]
        else:
            assert got is None


class TestAntiTransitivity:
    def test_tt3(self, tt3):
        w = find_anti_transitivity_witness(tt3, 2)
        assert w.arc == (0, 2)
        assert w.path.vertices == (0, 1, 2)
        assert w.k == 2
        assert w.is_valid_in(tt3)
        assert not is_k_anti_transitive(tt3, 2)

    def test_c5(self, c5):
        for k in range(2, 9):
            assert is_k_anti_transitive(c5, k)
            assert anti_oracle(5, arcs_of(c5), k)

    def test_bad_k(self, c5):
        with pytest.raises(BadParam):
            is_k_anti_transitive(c5, 1)

    def test_c71(self):
        D = build(8, [(i, i + 1) for i in range(7)] + [(0, 7)])
        w = find_anti_transitivity_witness(D, 7)
        assert w.arc == (0, 7) and w.path.length == 7
        assert is_k_anti_transitive(D, 6)

    @settings(max_examples=150, deadline=None)
    @given(oriented_graphs(max_n=6), st.integers(2, 6))
    def test_against_oracle_and_witness(self, D, k):
        w = find_anti_transitivity_witness(D, k)
        assert (w is None) == anti_oracle(D.n, arcs_of(D), k)
        if w is not None:
            assert w.is_valid_in(D) and w.k == k

    @settings(max_examples=80, deadline=None)
    @given(oriented_graphs(max_n=7), st.integers(2, 6), st.data())
    def test_monotone_under_arc_deletion(self, D, k, data):
        if not is_k_anti_transitive(D, k) or not D.m_arcs:
            return
        arcs = D.arcs()
        drop = data.draw(st.sets(st.sampled_from(arcs)))
        assert is_k_anti_transitive(build(D.n, [a for a in arcs if a not in drop]), k)

    def test_k2_equals_transitive_triangle_free_n_le_5(self):
        for n in range(6):
            for D in enumerate_labeled(n):
                assert is_k_anti_transitive(D, 2) == (find_transitive_triangle(D) is None)


class TestTransitivity:
    def test_tt3(self, tt3):
        assert is_k_transitive(tt3, 2)

    def test_c3(self, c3):
        w = find_k_transitivity_violation(c3, 2)
        assert (w.u, w.v) == (0, 2)
        assert w.path.vertices == (0, 1, 2)
        assert c3.has_arc(2, 0)
        assert is_k_quasi_transitive(c3, 2)

    def test_c5(self, c5):
        w = find_k_quasi_transitivity_violation(c5, 2)
        assert w.path.vertices == (0, 1, 2)
        assert not is_k_quasi_transitive(c5, 2)

    def test_bad_k(self, c3):
        with pytest.raises(BadParam):
            is_k_transitive(c3, 1)


def test_transitive_triangle(tt3, c3):
    assert find_transitive_triangle(tt3) == (0, 1, 2)
    assert find_transitive_triangle(c3) is None


def test_tournaments_on_four_have_tt3():
    tours = list(enumerate_tournaments(4))
    assert len(tours) == 64
    assert all(find_transitive_triangle(T) is not None for T in tours)


class TestProfile:
    def test_c3(self, c3):
        p = profile(c3, range(2, 6))
        assert p.girth == 3 and p.max_m_free == 2
        assert all(p.is_anti_transitive(k) for k in range(2, 6))
        assert p.transitive_triangle_free

    def test_tt3(self, tt3):
        p = profile(tt3, [2, 3])
        assert p.acyclic and p.max_m_free is None
        assert not p.is_anti_transitive(2)
        d = p.to_dict()
        assert d["anti_transitive"][0]["witness"]["path"] == [0, 1, 2]

    def test_c5_chord(self, c5_chord):
        p = profile(c5_chord, [2])
        assert (p.girth, p.max_m_free) == (4, 3)

    def test_empty_range(self, c3):
        with pytest.raises(BadParam):
            profile(c3, [])

    @settings(max_examples=100, deadline=None)
    @given(oriented_graphs())
    def test_invariants(self, D):
        p = profile(D, [2, 3])
        assert p.oriented and is_oriented(D)
        assert p.transitive_triangle_free == p.is_anti_transitive(2)
        if p.girth is not None:
            assert p.girth >= 3
            assert p.max_m_free == p.girth - 1
            assert is_m_free(D, p.girth - 1) and not is_m_free(D, p.girth)
        for m in range(1, 8):
            if is_m_free(D, m):
                assert all(is_m_free(D, j) for j in range(1, m))
