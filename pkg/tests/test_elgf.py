import random
from fractions import Fraction as F
from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from hlgf.algebra import CircleWindingModel, CrossedModule, Globe, cyclic_group, symmetric_group
from hlgf.complex import Cover, NestedPair, admissible_nested_pairs
from hlgf.elgf import (
    FiberHomotopyData,
    PathValue,
    act_elgf,
    act_left,
    act_right,
    change_trivialization,
    check_elgf,
    circle_chern_number,
    classify_bundle,
    classify_transitions,
    extract_elgf,
    parallel_transport,
    surface_orientation,
)
from hlgf.errors import AnchorMismatch, ModelLevelUnsupported, NotAClosedSurface
from hlgf.field import GaugeField1, constant_field, holonomy, random_field, random_field2
from hlgf.gauge import GaugeTransform, act
from hlgf.glue import TransitionSystem
from hlgf.gpd import EdgeWord, parse_word

from shapes import (
    circle_field_with_winding,
    closed_triangle,
    cx,
    hollow_triangle,
    octahedron,
    orientation_oracle,
    random_global_field,
    strip_cover,
    tetrahedron,
)

Z2, Z6, S3 = cyclic_group(2), cyclic_group(6), symmetric_group(3)


def _hol(A, *verts):
    """Oracle: product of labels along consecutive vertices, computed by hand."""
    G = A.group
    acc = G.identity
    for x, y in zip(verts, verts[1:]):
        if x == y:
            continue
        g = A.edges[(x, y)] if (x, y) in A.edges else G.inv(A.edges[(y, x)])
        acc = G.mul(acc, g)
    return acc


def test_identity_field_gives_identity_values():
    e = extract_elgf(constant_field(tetrahedron(), S3))
    assert all(c == S3.identity for v in e.values.values() for c in v.corners.values())
    x = CrossedModule.identity_module(S3)
    from hlgf.field import GaugeField2

    T = tetrahedron()
    A2 = GaugeField2(T, x, {ed: 0 for ed in T.edges}, {t: 0 for t in T.triangles})
    e2 = extract_elgf(A2)
    assert all(c == Globe(0, 0) for v in e2.values.values() for c in v.cells.values())


def test_single_triangle_leg_value():
    K = closed_triangle()
    A = GaugeField1(K, Z6, {("a", "b"): 1, ("b", "c"): 2, ("a", "c"): 4})
    e = extract_elgf(A)
    val = e.values[NestedPair(("a", "b", "c"), ("a",))]
    assert val.base_value == holonomy(A, parse_word(K, "c>a")) == (-4) % 6
    val = e.values[NestedPair(("a", "b", "c"), ("a", "b"))]
    # legs c → a → b and c → b → b
    assert val.corners == {"a": (-4 + 1) % 6, "b": (-2) % 6}


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_tetrahedron_cocycle_against_oracle(seed):
    T = tetrahedron()
    A = random_field(T, Z6, random.Random(seed))
    e = extract_elgf(A)
    assert check_elgf(e) == []
    for p in admissible_nested_pairs(T):
        v, m = p.tau[-1], p.nu[-1]
        for x in p.nu:
            assert e.values[p].corners[x] == _hol(A, v, x, m)
    # composition: value(τ,σ) = value(τ,ν)·value(ν,σ) on every admissible triple, by hand
    for p in admissible_nested_pairs(T):
        for r in range(1, len(p.nu)):
            for sigma in combinations(p.nu[:-1], r):
                x = sigma[0]
                lhs = _hol(A, p.tau[-1], x, sigma[-1])
                rhs = Z6.mul(_hol(A, p.tau[-1], x, p.nu[-1]), _hol(A, p.nu[-1], x, sigma[-1]))
                assert lhs == rhs == e.values[NestedPair(p.tau, sigma)].corners[x]


def test_perturbed_level0_value_reports_triple():
    T = tetrahedron()
    e = extract_elgf(random_field(T, Z6, random.Random(1)))
    p = NestedPair(("1", "2", "3"), ("1",))
    val = e.values[p]
    bad = e.with_value(p, PathValue(0, {"1": (val.corners["1"] + 1) % 6}))
    vs = check_elgf(bad)
    assert vs and all(v.kind in ("cocycle", "boundary") for v in vs)
    assert ("1-2-3", "1-2", "1") in [v.where for v in vs if v.kind == "cocycle"]


def test_missing_and_level_mismatch():
    T = closed_triangle()
    e = extract_elgf(random_field(T, Z6, random.Random(1)))
    p = NestedPair(("a", "b", "c"), ("a", "b"))
    vals = dict(e.values)
    del vals[p]
    from hlgf.elgf import ELGF

    assert [v.kind for v in check_elgf(ELGF(T, e.model, vals))] == ["missing"]
    wrong = e.with_value(p, PathValue(0, e.values[p].corners))
    assert "level" in [v.kind for v in check_elgf(wrong)]


def _circle_elgf(seed):
    K = octahedron()
    A = circle_field_with_winding(K, 2, random.Random(seed))
    return A, extract_elgf(A)


def test_circle_elgf_is_clean():
    for seed in range(5):
        _, e = _circle_elgf(seed)
        assert check_elgf(e) == []


def test_circle_displacement_perturbation_breaks_assembly():
    T = tetrahedron()
    rng = random.Random(4)
    from hlgf.algebra import circle_crossed_module

    A = random_field2(T, CrossedModule.trivial_over(Z2), rng)  # shape only
    edges = {ed: F(rng.randint(0, 5), 6) for ed in T.edges}
    faces = {t: edges[(t[0], t[1])] + edges[(t[1], t[2])] - edges[(t[0], t[2])] for t in T.triangles}
    from hlgf.field import GaugeField2

    A = GaugeField2(T, circle_crossed_module(), edges, faces)
    e = extract_elgf(A)
    assert check_elgf(e) == []
    p = NestedPair(("0", "1", "2", "3"), ("0", "1", "2"))
    val = e.values[p]
    cells = dict(val.cells)
    c = cells[("0", "1")]
    cells[("0", "1")] = Globe(c.source, c.cell + 1)
    # oracle: the assembled displacement 0→1→2 must equal the direct one 0→2
    assembled = cells[("0", "1")].cell + cells[("1", "2")].cell
    assert assembled != cells[("0", "2")].cell
    vs = check_elgf(e.with_value(p, PathValue(val.level, val.corners, cells)))
    assert any(v.kind == "boundary" for v in vs)


def test_gauge_action_commutes_with_extraction():
    T = tetrahedron()
    rng = random.Random(8)
    x = CrossedModule.identity_module(S3)
    for _ in range(5):
        A = random_field2(T, x, rng)
        u = GaugeTransform(T, S3, {v: rng.randrange(6) for v in T.vertices})
        assert extract_elgf(act(u, A)) == act_elgf(u, extract_elgf(A))


def test_circle_gauge_with_edge_values_commutes_with_extraction():
    K = octahedron()
    rng = random.Random(3)
    m = CircleWindingModel()
    for _ in range(5):
        A = circle_field_with_winding(K, -1, rng)
        verts = {v: F(rng.randint(0, 7), 8) for v in K.vertices}
        edges = {(a, b): Globe(verts[a], (verts[b] - verts[a]) % 1 + rng.randint(-2, 2)) for a, b in K.edges}
        u = GaugeTransform(K, m.group, verts, edges)
        assert extract_elgf(act(u, A)) == act_elgf(u, extract_elgf(A))


def test_extract_from_global_field():
    cover = strip_cover()
    gf, hidden = random_global_field(cover, S3, random.Random(2))
    e = extract_elgf(gf)
    assert check_elgf(e) == []
    assert e.base == cover.parent


def test_level_requests():
    with pytest.raises(ModelLevelUnsupported):
        extract_elgf(random_field(tetrahedron(), Z6, random.Random(0)), max_level=1)


# ---------------------------------------------------------- classification


def test_orientation_matches_oracle():
    K = octahedron()
    assert surface_orientation(K) == orientation_oracle(K)


@pytest.mark.parametrize("k", [-2, 0, 3])
def test_octahedron_winding(k):
    K = octahedron()
    rng = random.Random(k + 10)
    A = circle_field_with_winding(K, k, rng)
    eps = orientation_oracle(K)
    assert sum(eps[t] * A.faces[t] for t in K.triangles) == k
    assert classify_bundle(A).label == k
    assert classify_bundle(extract_elgf(A)).label == k
    u = GaugeTransform(K, A.group, {v: F(rng.randint(0, 9), 10) for v in K.vertices})
    assert classify_bundle(act(u, A)).label == k


def test_not_a_closed_surface():
    with pytest.raises(NotAClosedSurface):
        surface_orientation(closed_triangle())


def test_identity_transitions_are_trivial():
    cover = strip_cover()
    assert classify_transitions(TransitionSystem.identity(cover, S3)).trivial


def _circle_cover():
    X = hollow_triangle()
    return Cover(X, (X.subcomplex([("a", "b"), ("b", "c")]), X.subcomplex([("a", "c")])), ("P", "Q"))


def test_z2_cover_of_circle_has_two_classes():
    cover = _circle_cover()
    X12 = cover.intersection(0, 1)
    labels = {}
    for ga, gc in product(range(2), repeat=2):
        ts = TransitionSystem.from_pairs(cover, Z2, {(0, 1): GaugeTransform(X12, Z2, {"a": ga, "c": gc})})
        labels[(ga, gc)] = classify_transitions(ts).label
    # oracle: relabel by constants uP, uQ on the connected pieces, psi ↦ uP + psi − uQ
    orbit = {}
    for psi in labels:
        orbit[psi] = frozenset(((psi[0] + p - q) % 2, (psi[1] + p - q) % 2) for p, q in product(range(2), repeat=2))
    assert len(set(orbit.values())) == 2 == len(set(labels.values()))
    for s, t in product(labels, repeat=2):
        assert (labels[s] == labels[t]) == (orbit[s] == orbit[t])
    assert classify_transitions(TransitionSystem.identity(cover, Z2)).trivial


def test_classification_is_gauge_invariant():
    cover = strip_cover()
    rng = random.Random(6)
    for _ in range(5):
        gf, _ = random_global_field(cover, S3, rng)
        ts = gf.transitions
        base = classify_transitions(ts).label
        us = [GaugeTransform(p, S3, {v: c for v in p.vertices}) for p, c in zip(cover.pieces, (rng.randrange(6) for _ in range(3)))]
        from hlgf.elgf import gauge_transitions

        assert classify_transitions(gauge_transitions(ts, us)).label == base


# -------------------------------------------------------- parallel transport


def test_transport_identity_field():
    K = tetrahedron()
    A = constant_field(K, S3)
    phi = FiberHomotopyData("0", S3.parse("120"))
    out = parallel_transport(A, parse_word(K, "0>1.1>3"), phi)
    assert (out.anchor, out.element) == ("3", phi.element)


def test_transport_single_edge_example():
    K = cx("xy", [("x", "y")])
    A = GaugeField1(K, Z6, {("x", "y"): 2})
    out = parallel_transport(A, parse_word(K, "x>y"), FiberHomotopyData("x", 3))
    assert out.element == 5 and out.anchor == "y"
    with pytest.raises(AnchorMismatch):
        parallel_transport(A, parse_word(K, "x>y"), FiberHomotopyData("y", 3))


def test_change_of_trivialization_is_consistent():
    T = tetrahedron()
    rng = random.Random(12)
    for _ in range(20):
        A = random_field(T, S3, rng)
        u = GaugeTransform(T, S3, {v: rng.randrange(6) for v in T.vertices})
        w = parse_word(T, "0>2.2>3.1>3~")
        phi = FiberHomotopyData("0", rng.randrange(6))
        new_coords = parallel_transport(act(u, A), w, change_trivialization(phi, u, A.model))
        old_then_change = change_trivialization(parallel_transport(A, w, phi), u, A.model)
        assert new_coords == old_then_change


def test_left_equivariance_nonabelian():
    T = tetrahedron()
    rng = random.Random(13)
    A = random_field(T, S3, rng)
    w = parse_word(T, "0>1.1>2")
    for g, h in product(range(6), repeat=2):
        phi = FiberHomotopyData("0", h)
        assert parallel_transport(A, w, act_left(g, phi, A.model)) == act_left(g, parallel_transport(A, w, phi), A.model)
