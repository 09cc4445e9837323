from __future__ import annotations

import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from garland.complex import (
    GroupAction,
    SimplicialComplex,
    apartment_torus,
    build_from_maximal,
    check_dagger,
    check_star_condition,
    empty_complex,
    flag_defect,
    from_text,
    join,
    link,
    quotient,
    read_complex,
    standard_simplex,
    star,
    to_text,
    top_weight,
    top_weights,
    torus_translations,
    weight_sum_defects,
    write_complex,
)
from garland.complex import _torus_complex
from garland.errors import (
    ActionError,
    DaggerViolation,
    MalformedSimplexError,
    NotASimplexError,
    StarConditionError,
)

from conftest import torus


def brute_closure(maximal):
    out = set()
    for s in maximal:
        s = tuple(sorted(s))
        for k in range(1, len(s) + 1):
            out.update(itertools.combinations(s, k))
    return out


maximal_families = st.lists(
    st.lists(st.integers(0, 7), min_size=1, max_size=4, unique=True), min_size=1, max_size=6
)


@settings(max_examples=100, deadline=None)
@given(maximal_families)
def test_closure_matches_brute_force(maximal):
    X = build_from_maximal(maximal)
    relabelled = {tuple(X.labels[v] for v in s) for s in X}
    assert relabelled == brute_closure(maximal)
    for k in range(X.dim + 1):
        rows = X.simplices(k)
        assert np.all(np.diff(rows, axis=1) > 0)
        assert [tuple(r) for r in rows.tolist()] == sorted(tuple(r) for r in rows.tolist())


@settings(max_examples=60, deadline=None)
@given(maximal_families, maximal_families)
def test_join_face_counts(a, b):
    X, Y = build_from_maximal(a), build_from_maximal(b)
    J = join(X, Y)
    fx = (1,) + X.f_vector
    fy = (1,) + Y.f_vector
    for k in range(J.dim + 1):
        expected = sum(fx[i] * fy[k + 1 - i] for i in range(k + 2) if i < len(fx) and k + 1 - i < len(fy))
        assert J.count(k) == expected


def test_join_with_empty_complex_is_identity():
    X = build_from_maximal([(0, 1, 2), (2, 3)])
    assert join(X, empty_complex()) == X
    assert join(empty_complex(), X) == X


def test_join_of_vertex_sets_is_complete_bipartite():
    two = build_from_maximal([(0,), (1,)])
    three = build_from_maximal([(0,), (1,), (2,)])
    K = join(two, three)
    assert K.f_vector == (5, 6)


@pytest.mark.parametrize("n", range(6))
def test_standard_simplex_counts(n):
    X = standard_simplex(n)
    assert X.f_vector == tuple(comb(n + 1, k + 1) for k in range(n + 1))
    assert check_star_condition(X)


def test_standard_simplex_rejects_negative():
    with pytest.raises(ValueError):
        standard_simplex(-1)


def test_find_and_index():
    X = build_from_maximal([(0, 1, 2), (2, 3)])
    assert X.index((2, 1)) == X.index([1, 2])
    assert (0, 3) not in X
    assert (1, 2, 0) in X
    assert X.find(1, np.array([[0, 3], [2, 3]])).tolist()[0] == -1
    with pytest.raises(NotASimplexError):
        X.index((0, 3))
    with pytest.raises(NotASimplexError):
        X.index((1, 1))


def test_face_index_omits_position():
    X = standard_simplex(3)
    fi = X.face_index(2)
    for row, faces in zip(X.simplices(2).tolist(), fi.tolist()):
        for j, f in enumerate(faces):
            assert tuple(X.simplices(1)[f]) == tuple(row[:j] + row[j + 1 :])


@pytest.mark.parametrize("bad", [[[]], [[1, 1, 2]]])
def test_malformed_simplices(bad):
    with pytest.raises(MalformedSimplexError):
        build_from_maximal(bad)


def test_from_text_reports_bad_line():
    with pytest.raises(MalformedSimplexError, match="line 2"):
        from_text("0 1\n0 x\n")


def test_text_round_trip(tmp_path):
    X = build_from_maximal([(0, 1, 2), (2, 3), (4,)])
    assert from_text(to_text(X)) == X
    path = tmp_path / "x.txt"
    write_complex(X, path)
    assert read_complex(path) == X
    assert from_text("# comment\n\n" + to_text(X)) == X


@settings(max_examples=50, deadline=None)
@given(maximal_families, st.randoms(use_true_random=False))
def test_relabel_preserves_structure(maximal, rnd):
    X = build_from_maximal(maximal)
    perm = list(range(X.num_vertices))
    rnd.shuffle(perm)
    Y = X.relabel(perm)
    assert Y.f_vector == X.f_vector
    assert {tuple(sorted(perm[v] for v in s)) for s in X} == set(Y)


def brute_link(maximal, s):
    s = set(s)
    cl = brute_closure(maximal)
    return {t for t in cl if not s & set(t) and tuple(sorted(s | set(t))) in cl}


@settings(max_examples=80, deadline=None)
@given(maximal_families, st.data())
def test_link_matches_brute_force(maximal, data):
    X = build_from_maximal(maximal)
    s = data.draw(st.sampled_from(sorted(X)))
    L = link(X, s)
    got = {tuple(L.labels[v] for v in t) for t in L}
    assert got == brute_link(X.maximal_simplices(), s)


@settings(max_examples=80, deadline=None)
@given(maximal_families, st.data())
def test_star_is_simplex_join_link(maximal, data):
    X = build_from_maximal(maximal)
    s = data.draw(st.sampled_from(sorted(X)))
    St, L = star(X, s), link(X, s)
    expected = join(standard_simplex(len(s) - 1), L) if L.dim >= 0 else standard_simplex(len(s) - 1)
    assert St.f_vector == expected.f_vector
    in_parent = {tuple(St.labels[v] for v in t) for t in St}
    assert all(tuple(sorted(set(t) | set(s))) in X for t in in_parent)


def test_link_of_top_simplex_is_empty():
    X = standard_simplex(2)
    assert link(X, (0, 1, 2)).dim == -1


def test_top_weights_count_top_simplices():
    X = build_from_maximal([(0, 1, 2), (1, 2, 3), (2, 3, 4)])
    w = top_weights(X)
    assert w[2].tolist() == [1, 1, 1]
    assert top_weight(X, (2,)) == 3
    assert top_weight(X, (1, 2)) == 2
    assert top_weight(X, (0,)) == 1
    assert weight_sum_defects(X) == []


def test_star_condition_failure():
    X = build_from_maximal([(0, 1, 2), (2, 3)])
    assert not check_star_condition(X)
    with pytest.raises(StarConditionError):
        top_weights(X)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 7), min_size=3, max_size=3, unique=True), min_size=1, max_size=8))
def test_weight_sum_identity_on_pure_complexes(maximal):
    # sum of w over the cofaces of s equals (n - i) w(s) for pure complexes
    X = build_from_maximal(maximal)
    assert weight_sum_defects(X) == []


def test_flag_defect():
    hollow = build_from_maximal([(0, 1), (1, 2), (0, 2)])
    assert flag_defect(hollow) == (0, 1, 2)
    boundary = build_from_maximal(list(itertools.combinations(range(4), 3)))
    assert flag_defect(boundary) == (0, 1, 2, 3)
    assert flag_defect(standard_simplex(3)) is None


def test_group_action_closure_and_errors():
    cyc = GroupAction(((1, 2, 3, 0),), 4)
    assert cyc.order == 4
    assert GroupAction.trivial(3).order == 1
    with pytest.raises(ActionError):
        GroupAction(((0, 0, 1),), 3)
    with pytest.raises(ActionError):
        check_dagger(build_from_maximal([(0, 1), (2, 3)]), GroupAction(((1, 2, 0, 3),), 4))


def cycle(n):
    return build_from_maximal([(i, (i + 1) % n) for i in range(n)])


@pytest.mark.parametrize("n,k,holds", [(12, 4, True), (12, 6, True), (12, 2, False), (12, 3, True), (6, 2, False)])
def test_dagger_on_cycles(n, k, holds):
    # rotation by k: closed stars of v and v+k meet iff k <= 2 (or n - k <= 2)
    C = cycle(n)
    rot = GroupAction((tuple((i + k) % n for i in range(n)),), n)
    verdict = check_dagger(C, rot)
    assert bool(verdict) == holds
    if not holds:
        v, g, shared = verdict.witness
        assert shared[0] in C.neighbors[v] | {v}
        assert shared[0] in C.neighbors[g[v]] | {g[v]}


def test_quotient_of_cycle():
    C = cycle(12)
    rot = GroupAction((tuple((i + 4) % 12 for i in range(12)),), 12)
    Q = quotient(C, rot)
    assert Q.f_vector == (4, 4)
    with pytest.raises(DaggerViolation):
        quotient(C, GroupAction((tuple((i + 2) % 12 for i in range(12)),), 12))


@pytest.mark.parametrize("m", [4, 5, 6])
def test_apartment_torus_counts(m):
    X = torus(1, m)
    # m^2 vertices, 3 m^2 edges, 2 m^2 triangles; every vertex link is a hexagon
    assert X.f_vector == (m * m, 3 * m * m, 2 * m * m)
    for v in range(X.num_vertices):
        L = link(X, (v,))
        assert L.f_vector == (6, 6)
        assert L.is_connected()


def test_apartment_torus_refuses_small_m():
    with pytest.raises(DaggerViolation) as info:
        apartment_torus(1, 3)
    assert info.value.witness is not None
    assert info.value.witness not in _torus_complex(1, 3)
    with pytest.raises(DaggerViolation):
        apartment_torus(1, 1)


def test_apartment_torus_star_separation_on_cover():
    cover = _torus_complex(1, 12)
    assert check_dagger(cover, torus_translations(1, 12, 4))
    assert not check_dagger(cover, torus_translations(1, 12, 2))


def test_apartment_torus_quotient_of_cover():
    # the 12-torus modulo translations by 4 is the 4-torus
    cover = _torus_complex(1, 12)
    Q = quotient(cover, torus_translations(1, 12, 4))
    assert Q.f_vector == torus(1, 4).f_vector


def test_apartment_torus_n2():
    X = torus(2, 4)
    assert X.f_vector[0] == 64
    assert X.dim == 2 + 1
    assert check_star_condition(X)


def test_dagger_trivial_group_and_rotated_triangle():
    hollow = build_from_maximal([(0, 1), (1, 2), (0, 2)])
    assert check_dagger(hollow, GroupAction.trivial(3))
    verdict = check_dagger(hollow, GroupAction(((1, 2, 0),), 3))
    assert not verdict and verdict.witness[0] == 0


def test_quotient_by_trivial_group_is_a_copy():
    X = torus(1, 4)
    assert quotient(X, GroupAction.trivial(X.num_vertices)) == X


def test_apartment_torus_n0_is_a_cycle():
    X, verdict = apartment_torus(0, 5)
    assert verdict and X.f_vector == (5, 5)
    assert all(len(nb) == 2 for nb in X.neighbors)
