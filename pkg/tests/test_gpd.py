import random

import pytest
from hypothesis import given, settings, strategies as st

from hlgf.errors import BoundaryMismatch, EdgeNotInComplex, EndpointMismatch, NotComposable
from hlgf.gpd import (
    EdgeWord,
    PastingDiagram,
    apply_move,
    compose_words,
    concat_words,
    format_word,
    invert_word,
    is_reduced,
    make_move,
    parse_word,
    pasting_compose,
    pasting_invert,
    pasting_validate,
    reduce_word,
    whisker,
    words_equal,
)

from shapes import closed_triangle, tetrahedron, tetrahedron_1skeleton, two_triangles


def _cancel_once(letters):
    for i in range(len(letters) - 1):
        if letters[i][0] == letters[i + 1][0] and letters[i][1] == -letters[i + 1][1]:
            return letters[:i] + letters[i + 2 :], True
    return letters, False


def _reduce_oracle(letters):
    """Repeated single cancellation until a fixpoint."""
    letters, changed = list(letters), True
    while changed:
        letters, changed = _cancel_once(letters)
    return tuple(letters)


def random_walk(base, rng, length, start=None):
    verts = base.vertices
    v = start if start is not None else rng.choice(verts)
    path = [v]
    for _ in range(length):
        nbrs = [y for e in base.edges for y in e if v in e and y != v]
        v = rng.choice(nbrs)
        path.append(v)
    return EdgeWord.path(base, path)


def test_e_then_inverse_is_empty():
    K = closed_triangle()
    w = parse_word(K, "a>b.b>a")
    r = reduce_word(w)
    assert r.letters == () and r.source == r.target == "a"


def test_reduced_word_is_fixed():
    K = closed_triangle()
    w = parse_word(K, "a>b.b>c")
    assert reduce_word(w) == w and is_reduced(w)


def test_efffe_reduces_to_e():
    K = closed_triangle()
    w = parse_word(K, "a>b.b>c.c>b.b>a.a>b")
    assert reduce_word(w).letters == parse_word(K, "a>b").letters


def test_tilde_inverts_letter():
    K = closed_triangle()
    assert parse_word(K, "c>a~").letters == parse_word(K, "a>c").letters
    assert parse_word(K, "a>b.b>c.a>c~").is_closed


@pytest.mark.parametrize("bad", ["a>b.c>a", "a>>b", "a>q", ""])
def test_bad_literals(bad):
    with pytest.raises((NotComposable, EdgeNotInComplex)):
        parse_word(closed_triangle(), bad)


def test_bare_vertex_is_empty_word():
    w = parse_word(closed_triangle(), "b")
    assert w.letters == () and w.source == "b"


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 12))
def test_reduction_matches_oracle(seed, n):
    K = tetrahedron_1skeleton()
    w = random_walk(K, random.Random(seed), n)
    r = reduce_word(w)
    assert r.letters == _reduce_oracle(w.letters)
    assert is_reduced(r)
    assert reduce_word(r) == r
    if n:
        assert parse_word(K, format_word(w)).letters == w.letters


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 6), st.integers(0, 6))
def test_groupoid_laws(seed, n, m):
    K = tetrahedron_1skeleton()
    rng = random.Random(seed)
    u = random_walk(K, rng, n)
    w = random_walk(K, rng, m, start=u.target)
    assert compose_words(u, invert_word(u)).letters == ()
    assert words_equal(compose_words(EdgeWord.empty(K, u.source), u), u)
    assert words_equal(invert_word(compose_words(u, w)), compose_words(invert_word(w), invert_word(u)))


def test_compose_two_edges():
    K = closed_triangle()
    e, f = parse_word(K, "a>b"), parse_word(K, "b>c")
    uw = compose_words(e, f)
    assert (uw.source, uw.target, len(uw)) == ("a", "c", 2)
    with pytest.raises(EndpointMismatch):
        compose_words(f, f)


def test_identity_pasting():
    K = closed_triangle()
    p = PastingDiagram.identity(parse_word(K, "a>c"))
    assert pasting_validate(p) == []


def test_expand_move():
    K = closed_triangle()
    m = make_move(K, ("a", "b", "c"), "expand")
    assert apply_move(parse_word(K, "a>c"), m).letters == parse_word(K, "a>b.b>c").letters


def test_move_then_inverse():
    K = closed_triangle()
    m = make_move(K, ("a", "b", "c"), "expand")
    p = PastingDiagram.from_moves(parse_word(K, "a>c"), [m])
    q = pasting_invert(p)
    pq = pasting_compose(p, q, "vertical")
    assert pasting_validate(pq) == []
    assert words_equal(pq.source_word, pq.target_word)


def test_bad_target_is_reported():
    K = closed_triangle()
    m = make_move(K, ("a", "b", "c"), "expand")
    p = PastingDiagram(K, parse_word(K, "a>c"), parse_word(K, "a>c"), (m,))
    assert [v.kind for v in pasting_validate(p)] == ["target"]
    with pytest.raises(BoundaryMismatch):
        apply_move(parse_word(K, "a>b.b>c"), m)


def test_horizontal_composite_and_whisker():
    X = two_triangles()
    p = PastingDiagram.from_moves(parse_word(X, "a>c"), [make_move(X, ("a", "b", "c"), "expand")])
    q = PastingDiagram.identity(parse_word(X, "c>d"))
    h = pasting_compose(p, q, "horizontal")
    assert pasting_validate(h) == []
    assert words_equal(h.source_word, parse_word(X, "a>c.c>d"))
    assert words_equal(h.target_word, parse_word(X, "a>b.b>c.c>d"))
    w = whisker(p, right=parse_word(X, "c>d"))
    assert pasting_validate(w) == []


def test_moves_on_tetrahedron_face_validate():
    T = tetrahedron()
    left = parse_word(T, "0>1")
    m = make_move(T, ("1", "2", "3"), "expand", left=left)
    p = PastingDiagram.from_moves(parse_word(T, "0>1.1>3"), [m])
    assert pasting_validate(p) == []
    assert words_equal(p.target_word, concat_words(left, parse_word(T, "1>2.2>3")))
