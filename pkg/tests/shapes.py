"""Small complexes shared by the tests."""

from itertools import combinations

from hlgf.complex import SimplicialComplex


def closure(facets):
    """Independent face-closure oracle: every nonempty subset of every facet."""
    out = set()
    for f in facets:
        for r in range(1, len(f) + 1):
            out.update(combinations(sorted(f), r))
    return out


def cx(vertices, facets):
    return SimplicialComplex.from_simplices(list(vertices), [list(f) for f in facets])


def hollow_triangle():
    return cx("abc", [("a", "b"), ("b", "c"), ("a", "c")])


def closed_triangle():
    return cx("abc", [("a", "b", "c")])


def square_cycle():
    return cx("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("a", "d")])


def theta_graph():
    # two poles joined by three subdivided arcs
    return cx(["p", "x", "y", "z", "q"], [("p", "x"), ("x", "q"), ("p", "y"), ("y", "q"), ("p", "z"), ("z", "q")])


def two_triangles():
    return cx("abcd", [("a", "b", "c"), ("b", "c", "d")])


def tetrahedron():
    return cx("0123", [("0", "1", "2", "3")])


def tetrahedron_1skeleton():
    return cx("0123", list(combinations("0123", 2)))


OCTAHEDRON_FACES = [
    ("n", "e", "f"), ("n", "f", "w"), ("n", "w", "k"), ("n", "e", "k"),
    ("s", "e", "f"), ("s", "f", "w"), ("s", "w", "k"), ("s", "e", "k"),
]


def octahedron():
    return cx(["n", "e", "w", "f", "k", "s"], OCTAHEDRON_FACES)


def strip():
    """Four triangles in a row; the three-piece cover below has a triple overlap."""
    return cx("abcdef", [("a", "b", "c"), ("b", "c", "d"), ("c", "d", "e"), ("d", "e", "f")])


def strip_cover():
    from hlgf.complex import Cover

    X = strip()
    pieces = (
        X.subcomplex([("a", "b", "c"), ("b", "c", "d")]),
        X.subcomplex([("b", "c", "d"), ("c", "d", "e")]),
        X.subcomplex([("c", "d", "e"), ("d", "e", "f")]),
    )
    return Cover(X, pieces, ("X1", "X2", "X3"))


def random_global_field(cover, G, rng):
    """A valid global field built from a hidden global field and random local gauges.

    Returns the global field together with the hidden field.
    """
    from hlgf.field import random_field, restrict
    from hlgf.gauge import GaugeTransform, act
    from hlgf.glue import GlobalField, TransitionSystem

    elems = list(G.elements())
    A = random_field(cover.parent, G, rng)
    us = [GaugeTransform(p, G, {v: rng.choice(elems) for v in p.vertices}) for p in cover.pieces]
    locals_ = [act(u, restrict(A, p)) for u, p in zip(us, cover.pieces)]
    pairs = {}
    for i, j in cover.overlaps():
        Xij = cover.intersection(i, j)
        pairs[(i, j)] = GaugeTransform(Xij, G, {v: G.mul(us[i](v), G.inv(us[j](v))) for v in Xij.vertices})
    return GlobalField(cover, TransitionSystem.from_pairs(cover, G, pairs), tuple(locals_)), A


def orientation_oracle(K):
    """Brute force over all sign vectors: each edge must be traversed oppositely by its two triangles."""
    from itertools import product as _product

    tris = K.triangles

    def induced(t, eps):
        a, b, c = t
        cyc = [(a, b), (b, c), (c, a)]
        return [(x, y) if eps == 1 else (y, x) for x, y in cyc]

    for signs in _product((1, -1), repeat=len(tris)):
        if signs[0] != 1:
            continue
        seen = set()
        ok = True
        for t, s in zip(tris, signs):
            for d in induced(t, s):
                if d in seen:
                    ok = False
                seen.add(d)
        if ok:
            return dict(zip(tris, signs))
    raise AssertionError("not orientable")


def circle_field_with_winding(K, k, rng):
    """Random circle 2-field whose oriented face lifts sum to k.

    Edge angles are random rationals; each face lift is its boundary angle plus
    an integer, and the integers are chosen so the oriented sum is k.
    """
    from fractions import Fraction

    from hlgf.algebra import circle_crossed_module
    from hlgf.field import GaugeField2

    eps = orientation_oracle(K)
    edges = {e: Fraction(rng.randint(0, 11), 12) for e in K.edges}
    tris = K.triangles
    ints = [rng.randint(-3, 3) for _ in tris]
    # fix the last integer so that the oriented integer sum is k
    partial = sum(eps[t] * n for t, n in zip(tris[:-1], ints[:-1]))
    ints[-1] = eps[tris[-1]] * (k - partial)
    faces = {}
    for (a, b, c), n in zip(tris, ints):
        faces[(a, b, c)] = edges[(a, b)] + edges[(b, c)] - edges[(a, c)] + n
    return GaugeField2(K, circle_crossed_module(), edges, faces)
