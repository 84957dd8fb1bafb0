from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from hlgf.complex import (
    Cover,
    NestedPair,
    SimplicialComplex,
    admissible_nested_pairs,
    barycentric_subdivide,
    glue,
    is_admissible,
    is_collapsible,
    path_simplex_boundary,
    restriction_faces,
    skeleton,
    validate_complex,
    validate_cover,
)
from hlgf.errors import SharedNotSubcomplex

from shapes import OCTAHEDRON_FACES, closed_triangle, closure, cx, hollow_triangle, octahedron, tetrahedron, two_triangles


def test_minimal_edge_is_valid():
    c = SimplicialComplex(["a", "b"], [("a",), ("b",), ("a", "b")])
    assert validate_complex(c) == []
    assert c.dim == 1


def test_missing_vertex_face_is_reported():
    c = SimplicialComplex(["a", "b"], [("b",), ("a", "b")])
    vs = validate_complex(c)
    assert [v.kind for v in vs] == ["missing-face"]
    assert vs[0].where == ["a"]
    assert "missing face ['a']" in vs[0].message


def test_descending_and_unknown_simplices_are_reported():
    c = SimplicialComplex(["a", "b"], [("a",), ("b",), ("b", "a"), ("a", "z")])
    kinds = sorted(v.kind for v in validate_complex(c))
    assert kinds == ["not-ascending", "unknown-vertex"]


def test_octahedron_matches_closure_oracle():
    c = octahedron()
    assert validate_complex(c) == []
    assert {frozenset(s) for s in c.simplices} == {frozenset(s) for s in closure(OCTAHEDRON_FACES)}
    assert (len(c.vertices), len(c.edges), len(c.triangles)) == (6, 12, 8)
    assert c.dim == 2


def test_skeleton():
    o1 = skeleton(octahedron(), 1)
    assert (len(o1.vertices), len(o1.edges), len(o1.triangles)) == (6, 12, 0)
    t = closed_triangle()
    assert skeleton(t, 5) == t
    assert skeleton(t, 0).simplices == {("a",), ("b",), ("c",)}


def test_subdivide_edge():
    sd = barycentric_subdivide(cx("ab", [("a", "b")]))
    assert len(sd.complex.vertices) == 3 and len(sd.complex.edges) == 2
    m = sd.barycenter[("a", "b")]
    assert sd.edge_chains[("a", "b")] == ((("a", m), 1), (("b", m), -1))


def _flag_count(facets):
    """Oracle: chains σ0 ⊊ … ⊊ σk of faces, counted by length."""
    faces = sorted(closure(facets))
    counts: dict[int, int] = {}

    def extend(chain):
        counts[len(chain)] = counts.get(len(chain), 0) + 1
        for f in faces:
            if set(chain[-1]) < set(f):
                extend(chain + [f])

    for f in faces:
        extend([f])
    return counts


@pytest.mark.parametrize("facets", [[("a", "b", "c")], [("a", "b", "c", "d")], [("a", "b"), ("b", "c", "d")]])
def test_subdivision_counts_match_flags(facets):
    verts = sorted({v for f in facets for v in f})
    sd = barycentric_subdivide(cx(verts, facets)).complex
    want = _flag_count(facets)
    for k in range(sd.dim + 1):
        assert len(sd.simplices_of_dim(k)) == want[k + 1]
    assert validate_complex(sd) == []


def test_subdivide_triangle_numbers():
    sd = barycentric_subdivide(closed_triangle()).complex
    assert (len(sd.vertices), len(sd.edges), len(sd.triangles)) == (7, 12, 6)


def test_subdivide_empty():
    assert barycentric_subdivide(SimplicialComplex.empty()).complex.simplices == set()


def test_glue_two_triangles():
    c1 = cx("abc", [("a", "b", "c")])
    c2 = cx("abd", [("a", "b", "d")])
    shared = cx("ab", [("a", "b")])
    g = glue(c1, c2, shared)
    assert (len(g.vertices), len(g.edges), len(g.triangles)) == (4, 5, 2)
    assert validate_complex(g) == []


def test_glue_with_empty_is_disjoint_union():
    c = closed_triangle()
    g = glue(c, SimplicialComplex.empty(), SimplicialComplex.empty())
    assert g.simplices == c.simplices


def test_glue_squares_along_two_edge_path():
    # each square is two triangles; they share the boundary path p-q-r
    s1 = cx(["p", "q", "r", "u"], [("p", "q", "u"), ("q", "r", "u")])
    s2 = cx(["p", "q", "r", "v"], [("p", "q", "v"), ("q", "r", "v")])
    path = cx(["p", "q", "r"], [("p", "q"), ("q", "r")])
    g = glue(s1, s2, path)
    assert len(g.vertices) == len(set(s1.vertices) | set(s2.vertices)) == 4 + 4 - 3


def test_glue_rejects_hidden_overlap():
    c1 = cx("ab", [("a", "b")])
    c2 = cx("ab", [("a", "b")])
    with pytest.raises(SharedNotSubcomplex):
        glue(c1, c2, cx("a", [("a",)]))


def _admissible_oracle(c):
    out = set()
    for tau in c.simplices:
        for r in range(1, len(tau)):
            for nu in combinations(tau, r):
                if max(tau, key=c.position) not in nu:
                    out.add((tau, nu))
    return out


def test_admissible_pairs_edge():
    pairs = admissible_nested_pairs(cx("ab", [("a", "b")]))
    assert pairs == [NestedPair(("a", "b"), ("a",))]
    assert pairs[0].level == 0


@pytest.mark.parametrize("c", [closed_triangle(), tetrahedron(), octahedron(), two_triangles()])
def test_admissible_pairs_match_subset_scan(c):
    got = {(p.tau, p.nu) for p in admissible_nested_pairs(c)}
    assert got == _admissible_oracle(c)


def test_admissible_pairs_triangle_top():
    got = {p.nu for p in admissible_nested_pairs(closed_triangle()) if p.tau == ("a", "b", "c")}
    assert got == {("a",), ("b",), ("a", "b")}


def test_vertex_only_has_no_pairs():
    assert admissible_nested_pairs(cx("ab", [("a",), ("b",)])) == []


def test_restriction_faces_are_admissible():
    for p in admissible_nested_pairs(tetrahedron()):
        for kind, q in restriction_faces(p):
            assert is_admissible(q.tau, q.nu)
            assert set(q.nu) <= set(p.tau)
        for q in path_simplex_boundary(p):
            assert q.tau == p.tau and len(q.nu) == len(p.nu) - 1


@pytest.mark.parametrize(
    "c,expected",
    [(closed_triangle(), True), (hollow_triangle(), False), (cx("a", [("a",)]), True), (tetrahedron(), True), (octahedron(), False)],
)
def test_collapsibility(c, expected):
    ok, steps = is_collapsible(c)
    assert ok is expected
    if ok:
        assert len(steps) == (len(c.simplices) - 1) // 2


def test_hollow_triangle_has_no_free_face():
    c = hollow_triangle()
    # oracle: a free face has exactly one proper coface
    free = [s for s in c.simplices if sum(1 for t in c.simplices if set(s) < set(t) and len(t) == len(s) + 1) == 1]
    assert free == []


def test_cover_validation_and_goodness():
    X = two_triangles()
    cover = Cover(X, (X.subcomplex([("a", "b", "c")]), X.subcomplex([("b", "c", "d")])), ("X1", "X2"))
    assert validate_cover(cover) == []
    assert cover.overlaps() == [(0, 1)]
    assert cover.is_good
    partial = Cover(X, (X.subcomplex([("a", "b", "c")]),), ("X1",))
    assert [v.kind for v in validate_cover(partial)].count("uncovered") == 4


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sets(st.sampled_from("abcde"), min_size=1, max_size=4), min_size=1, max_size=6))
def test_closure_is_valid_and_matches_oracle(facets):
    facets = [tuple(sorted(f)) for f in facets]
    c = cx("abcde", facets)
    assert c.simplices == closure(facets) | {(v,) for v in "abcde"}
    assert validate_complex(c) == []
    assert c.dim == max(len(f) for f in facets) - 1
