from fractions import Fraction as F
import random

import pytest

from hlgf.cubical import (
    Comp,
    Conn,
    Deg,
    FaceInsert,
    Connection,
    Gen,
    Project,
    SigmaToSimplex,
    apply_cube_map,
    check_site_relations,
    classify_thinness,
    expr_dim,
    sigma_face_property,
    simplex_vertex,
    site_relations,
    symbolic_relation_holds,
)
from hlgf.errors import MalformedExpression


def test_examples():
    assert apply_cube_map(FaceInsert(1, 0, 1), (F(1, 2),)) == (F(0), F(1, 2))
    assert apply_cube_map(Connection(1, 1), (F(1, 5), F(9, 10))) == (F(9, 10),)
    sig = SigmaToSimplex(2)
    assert apply_cube_map(sig, (F(1), F(1, 2))) == (F(1), F(1, 2))
    assert apply_cube_map(sig, (F(0), F(3, 7))) == (F(0), F(0))


def _oracle(m, p):
    """Independent coordinate formulas for the generating maps."""
    p = list(p)
    if m.kind == "face":
        return tuple(p[: m.index - 1] + [F(m.alpha)] + p[m.index - 1 :])
    if m.kind == "project":
        return tuple(p[: m.index - 1] + p[m.index :])
    if m.kind == "connection":
        i = m.index - 1
        return tuple(p[:i] + [max(p[i], p[i + 1])] + p[i + 2 :])
    raise AssertionError(m.kind)


def test_relations_hold_on_random_rational_points():
    rng = random.Random(7)
    for rel in site_relations(3):
        for _ in range(5):
            p = tuple(F(rng.randint(0, 12), 12) for _ in range(rel.domain_dim))
            lhs, rhs = p, p
            for m in reversed(rel.lhs):
                lhs = _oracle(m, lhs)
            for m in reversed(rel.rhs):
                rhs = _oracle(m, rhs)
            assert lhs == rhs, str(rel)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_grid_check_agrees_with_symbolic_oracle(k):
    rep = check_site_relations(k, F(1, 4))
    assert rep.ok
    assert all(symbolic_relation_holds(r) for r in site_relations(k))


def test_kmax_zero_is_vacuous():
    rep = check_site_relations(0, F(1, 4))
    assert rep.failures == []


def test_min_perturbation_is_detected():
    rep = check_site_relations(2, F(1, 4), merge=min)
    assert not rep.ok
    assert any("G" in str(f) for f in rep.failures)


def test_relation_families_are_all_present():
    names = {r.name for r in site_relations(3)}
    for fam in ("E_i D_i^a = id", "D_j D_i = D_i D_(j-1)", "G_i D_(i+e)^0 = id", "G_i G_i = G_i G_(i+1)", "E_i G_i = E_i E_i"):
        assert fam in names


@pytest.mark.parametrize("m", [1, 2, 3])
def test_sigma_faces(m):
    assert sigma_face_property(m, F(1, 4)).ok


def test_sigma_one_is_identity():
    for t in range(5):
        x = F(t, 4)
        assert apply_cube_map(SigmaToSimplex(1), (x,)) == (x,)


def test_sigma_two_direct_oracle():
    # oracle: Σ_2(a1, a2) = (a1, a1·a2); face a1 = 0 is vertex 2, face a1 = 1 is the edge (1, t)
    for t in range(5):
        x = F(t, 4)
        assert apply_cube_map(SigmaToSimplex(2), (F(0), x)) == simplex_vertex(2, 2) == (0, 0)
        assert apply_cube_map(SigmaToSimplex(2), (F(1), x)) == (1, x)


def test_thinness_verdicts():
    g = Gen("g", 1)
    h = Gen("h", 1)
    assert classify_thinness(Deg(0, g)).verdict == "thin"
    assert classify_thinness(Comp(0, Deg(0, g), Conn(0, h))).verdict == "algebraically_thin"
    assert classify_thinness(Gen("k", 2)).verdict == "nondegenerate"
    assert not classify_thinness(Comp(0, Deg(0, g), Gen("k", 2))).is_algebraically_thin


def test_malformed_expressions():
    with pytest.raises(MalformedExpression):
        expr_dim(Comp(0, Gen("a", 1), Gen("b", 2)))
    with pytest.raises(MalformedExpression):
        expr_dim(Conn(0, Gen("a", 0)))
    assert expr_dim(Conn(0, Gen("a", 1))) == 2
