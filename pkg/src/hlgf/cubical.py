"""Cubical-site generator maps, the simplex-of-paths map Σ_m, and thinness.

All coordinates are :class:`fractions.Fraction`; nothing here touches floats.
Indices of face, projection and connection maps are 1-based, matching the
usual presentation of the cube category.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Iterator, Sequence, Union

from .errors import DimensionMismatch, MalformedExpression

CubePoint = tuple  # tuple of Fractions in [0, 1]


def cube_point(coords: Iterable) -> CubePoint:
    pt = tuple(Fraction(c) for c in coords)
    for c in pt:
        if not 0 <= c <= 1:
            raise ValueError(f"coordinate {c} outside [0, 1]")
    return pt


@dataclass(frozen=True)
class CubeMap:
    """One generator of the cubical site.

    ``kind`` is ``"face"`` (insert α at position i, k→k+1), ``"project"``
    (delete coordinate i, k+1→k), ``"connection"`` (replace coordinates i, i+1
    by their maximum, k+1→k) or ``"sigma"`` (the map Σ_m, m→m).
    """

    kind: str
    domain_dim: int
    index: int = 0
    alpha: int = 0

    def __post_init__(self) -> None:
        k, i = self.domain_dim, self.index
        ok = {
            "face": 1 <= i <= k + 1 and self.alpha in (0, 1),
            "project": k >= 1 and 1 <= i <= k,
            "connection": k >= 2 and 1 <= i <= k - 1,
            "sigma": k >= 1,
        }.get(self.kind)
        if ok is None:
            raise ValueError(f"unknown cube map kind {self.kind!r}")
        if not ok:
            raise ValueError(f"invalid index for {self}")

    @property
    def codomain_dim(self) -> int:
        return {"face": 1, "project": -1, "connection": -1, "sigma": 0}[self.kind] + self.domain_dim

    def __str__(self) -> str:
        if self.kind == "face":
            return f"D{self.index}^{self.alpha}"
        if self.kind == "project":
            return f"E{self.index}"
        if self.kind == "connection":
            return f"G{self.index}"
        return f"Sigma{self.domain_dim}"


def FaceInsert(i: int, alpha: int, k: int) -> CubeMap:  # noqa: N802 - constructor-style name
    return CubeMap("face", k, i, alpha)


def Project(i: int, k: int) -> CubeMap:  # noqa: N802
    """Deletion of coordinate i, as a map from the (k+1)-cube to the k-cube."""
    return CubeMap("project", k + 1, i)


def Connection(i: int, k: int) -> CubeMap:  # noqa: N802
    return CubeMap("connection", k + 1, i)


def SigmaToSimplex(m: int) -> CubeMap:  # noqa: N802
    return CubeMap("sigma", m)


Merge = Callable[[Fraction, Fraction], Fraction]


def apply_cube_map(m: CubeMap, p: Sequence[Fraction], merge: Merge = max) -> CubePoint:
    """Exact evaluation; ``merge`` exists only so tests can plant a wrong connection."""
    if len(p) != m.domain_dim:
        raise DimensionMismatch(f"{m} expects a point of dimension {m.domain_dim}, got {len(p)}", tuple(p))
    i = m.index - 1
    if m.kind == "face":
        return tuple(p[:i]) + (Fraction(m.alpha),) + tuple(p[i:])
    if m.kind == "project":
        return tuple(p[:i]) + tuple(p[i + 1 :])
    if m.kind == "connection":
        return tuple(p[:i]) + (merge(p[i], p[i + 1]),) + tuple(p[i + 2 :])
    out = []
    acc = Fraction(1)
    for a in p:
        acc *= a
        out.append(acc)
    return tuple(out)


def compose(maps: Sequence[CubeMap], p: Sequence[Fraction], merge: Merge = max) -> CubePoint:
    """Apply ``maps`` right to left, i.e. ``compose([f, g], p) = f(g(p))``."""
    for m in reversed(maps):
        p = apply_cube_map(m, p, merge)
    return tuple(p)


# ---------------------------------------------------------------- relations
# A relation is stated on a fixed domain dimension as two composites
# (lists of maps applied right to left).  The list below transcribes the
# standard cubical identities together with the connection identities for
# max-connections, read as maps of cubes.


@dataclass(frozen=True)
class Relation:
    name: str
    domain_dim: int
    lhs: tuple
    rhs: tuple  # empty tuple means the identity map

    def __str__(self) -> str:
        def side(ms: tuple) -> str:
            return " o ".join(str(m) for m in ms) if ms else "id"

        return f"{self.name}: {side(self.lhs)} = {side(self.rhs)} on I^{self.domain_dim}"


def site_relations(k_max: int) -> list[Relation]:
    """Every relation instance whose cubes all have dimension ≤ k_max."""
    rels: list[Relation] = []

    def add(name: str, n: int, lhs: list[CubeMap], rhs: list[CubeMap]) -> None:
        dims = [n]
        for ms in (lhs, rhs):
            for m in ms:
                dims += [m.domain_dim, m.codomain_dim]
        if max(dims) <= k_max:
            rels.append(Relation(name, n, tuple(lhs), tuple(rhs)))

    D, E, G = FaceInsert, Project, Connection
    for n in range(0, k_max + 1):
        # E_i D_i^a = id  (I^n -> I^n+1 -> I^n)
        for i in range(1, n + 2):
            for a in (0, 1):
                add("E_i D_i^a = id", n, [E(i, n), D(i, a, n)], [])
        # D_j^b D_i^a = D_i^a D_{j-1}^b, i < j
        for i in range(1, n + 2):
            for j in range(i + 1, n + 3):
                for a in (0, 1):
                    for b in (0, 1):
                        add("D_j D_i = D_i D_(j-1)", n, [D(j, b, n + 1), D(i, a, n)], [D(i, a, n + 1), D(j - 1, b, n)])
        # E_i E_j = E_(j-1) E_i, i < j, on I^(n+2)
        for i in range(1, n + 2):
            for j in range(i + 1, n + 3):
                add("E_i E_j = E_(j-1) E_i", n + 2, [E(i, n), E(j, n + 1)], [E(j - 1, n), E(i, n + 1)])
        # E_j D_i^a on I^(n+1), j != i
        for i in range(1, n + 3):
            for j in range(1, n + 3):
                for a in (0, 1):
                    if i < j:
                        add("E_j D_i = D_i E_(j-1)", n + 1, [E(j, n + 1), D(i, a, n + 1)], [D(i, a, n), E(j - 1, n)])
                    elif i > j:
                        add("E_j D_i = D_(i-1) E_j", n + 1, [E(j, n + 1), D(i, a, n + 1)], [D(i - 1, a, n), E(j, n)])
        # connection / face relations on I^n: G_i D_i^a and G_i D_(i+1)^a
        for i in range(1, n + 1):
            for shift in (0, 1):
                add("G_i D_(i+e)^0 = id", n, [G(i, n), D(i + shift, 0, n)], [])
                add("G_i D_(i+e)^1 = D_i^1 E_i", n, [G(i, n), D(i + shift, 1, n)], [D(i, 1, n - 1), E(i, n - 1)])
        # G_i D_j^a, j < i or j > i+1, on I^(n+1)
        for i in range(1, n + 2):
            for j in range(1, n + 3):
                for a in (0, 1):
                    if j < i:
                        add("G_i D_j = D_j G_(i-1)", n + 1, [G(i, n + 1), D(j, a, n + 1)], [D(j, a, n), G(i - 1, n)])
                    elif j > i + 1:
                        add("G_i D_j = D_(j-1) G_i", n + 1, [G(i, n + 1), D(j, a, n + 1)], [D(j - 1, a, n), G(i, n)])
        # E_j G_i on I^(n+2)
        for i in range(1, n + 2):
            for j in range(1, n + 2):
                if j < i:
                    add("E_j G_i = G_(i-1) E_j", n + 2, [E(j, n), G(i, n + 1)], [G(i - 1, n), E(j, n + 1)])
                elif j > i:
                    add("E_j G_i = G_i E_(j+1)", n + 2, [E(j, n), G(i, n + 1)], [G(i, n), E(j + 1, n + 1)])
                else:
                    add("E_i G_i = E_i E_i", n + 2, [E(i, n), G(i, n + 1)], [E(i, n), E(i, n + 1)])
        # G_i G_i = G_i G_(i+1) on I^(n+2)
        for i in range(1, n + 1):
            add("G_i G_i = G_i G_(i+1)", n + 2, [G(i, n), G(i, n + 1)], [G(i, n), G(i + 1, n + 1)])
        # G_i G_j = G_(j-1) G_i for j > i+1 on I^(n+2)
        for i in range(1, n + 2):
            for j in range(i + 2, n + 2):
                add("G_i G_j = G_(j-1) G_i", n + 2, [G(i, n), G(j, n + 1)], [G(j - 1, n), G(i, n + 1)])
    return rels


def grid_points(dim: int, n: int) -> Iterator[CubePoint]:
    steps = [Fraction(t, n) for t in range(n + 1)]
    return product(steps, repeat=dim)


@dataclass(frozen=True)
class RelationFailure:
    relation: Relation
    point: CubePoint
    lhs_value: CubePoint
    rhs_value: CubePoint

    def __str__(self) -> str:
        pt = "(" + ", ".join(str(c) for c in self.point) + ")"
        return f"{self.relation} fails at {pt}"


@dataclass
class SiteReport:
    k_max: int
    grid: Fraction
    relations_checked: int
    points_checked: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def check_site_relations(k_max: int, grid: Fraction | int = Fraction(1, 4), merge: Merge = max) -> SiteReport:
    """Check every relation pointwise on the grid of the given step."""
    step = Fraction(grid)
    if step <= 0 or (1 / step).denominator != 1:
        raise ValueError("grid step must be 1/N for a positive integer N")
    n = int(1 / step)
    failures: list[RelationFailure] = []
    rels = site_relations(k_max)
    points = 0
    for rel in rels:
        for p in grid_points(rel.domain_dim, n):
            points += 1
            lhs = compose(rel.lhs, p, merge)
            rhs = compose(rel.rhs, p, merge)
            if lhs != rhs:
                failures.append(RelationFailure(rel, p, lhs, rhs))
    return SiteReport(k_max, step, len(rels), points, failures)


# Symbolic oracle.  Under faces, projections and max-connections every
# coordinate of the image of a generic point (x1, ..., xn) is either a
# constant 0/1 or the maximum of a nonempty set of variables, so equality of
# two composites can be decided exactly on these normal forms.

SymCoord = Union[int, frozenset]


def _sym_merge(a: SymCoord, b: SymCoord) -> SymCoord:
    if a == 1 or b == 1:
        return 1
    if a == 0:
        return b
    if b == 0:
        return a
    return a | b  # type: ignore[operator]


def symbolic_apply(m: CubeMap, p: tuple) -> tuple:
    if len(p) != m.domain_dim:
        raise DimensionMismatch("dimension mismatch in symbolic evaluation", p)
    i = m.index - 1
    if m.kind == "face":
        return p[:i] + (m.alpha,) + p[i:]
    if m.kind == "project":
        return p[:i] + p[i + 1 :]
    if m.kind == "connection":
        return p[:i] + (_sym_merge(p[i], p[i + 1]),) + p[i + 2 :]
    raise ValueError("Sigma has no max-normal form")


def symbolic_relation_holds(rel: Relation) -> bool:
    p: tuple = tuple(frozenset([f"x{t}"]) for t in range(rel.domain_dim))
    lhs, rhs = p, p
    for m in reversed(rel.lhs):
        lhs = symbolic_apply(m, lhs)
    for m in reversed(rel.rhs):
        rhs = symbolic_apply(m, rhs)
    return lhs == rhs


# ------------------------------------------------------------------- Σ_m


def simplex_vertex(m: int, j: int) -> CubePoint:
    """Vertex j of Δ_m = {1 ≥ t1 ≥ … ≥ tm ≥ 0}: first m−j coordinates equal 1."""
    return tuple(Fraction(1) if t < m - j else Fraction(0) for t in range(m))


@dataclass
class SigmaReport:
    m: int
    points_checked: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def sigma_face_property(m: int, grid: Fraction | int = Fraction(1, 4)) -> SigmaReport:
    """Check the two face properties of Σ_m on a grid.

    Face {a1 = 0} must collapse to vertex m, and face {a1 = 1} must equal
    (1, Σ_{m-1}(a2, …, am)), i.e. Σ_{m-1} placed on the face opposite vertex m.
    The image of every grid point must also lie in Δ_m.
    """
    if not 1 <= m <= 4:
        raise ValueError("m must be between 1 and 4")
    n = int(1 / Fraction(grid))
    sig = SigmaToSimplex(m)
    failures: list[str] = []
    count = 0
    for p in grid_points(m, n):
        count += 1
        q = apply_cube_map(sig, p)
        if any(q[t] < q[t + 1] for t in range(m - 1)):
            failures.append(f"image of {p} is not in the simplex")
        if p[0] == 0 and q != simplex_vertex(m, m):
            failures.append(f"face a1=0: {p} maps to {q}, not vertex {m}")
        if p[0] == 1:
            expected = (Fraction(1),) + (apply_cube_map(SigmaToSimplex(m - 1), p[1:]) if m > 1 else ())
            if q != expected:
                failures.append(f"face a1=1: {p} maps to {q}, expected {expected}")
    return SigmaReport(m, count, failures)


# ------------------------------------------------------------- thinness


@dataclass(frozen=True)
class Gen:
    name: str
    dim: int


@dataclass(frozen=True)
class Deg:
    """Degeneracy ε_i applied to a cube of dimension k−1, giving dimension k."""

    i: int
    arg: "CubeExpr"


@dataclass(frozen=True)
class Conn:
    """Connection Γ_i applied to a cube of dimension k−1 ≥ 1."""

    i: int
    arg: "CubeExpr"


@dataclass(frozen=True)
class Comp:
    """Composite a +_i b of two cubes of equal dimension."""

    i: int
    left: "CubeExpr"
    right: "CubeExpr"


CubeExpr = Union[Gen, Deg, Conn, Comp]


def expr_dim(e: CubeExpr) -> int:
    """Dimension of a formal expression; raises on any inconsistency."""
    if isinstance(e, Gen):
        if e.dim < 0:
            raise MalformedExpression("negative generator dimension", e)
        return e.dim
    if isinstance(e, Deg):
        k = expr_dim(e.arg)
        if not 0 <= e.i <= k:
            raise MalformedExpression(f"degeneracy index {e.i} out of range for dimension {k}", e)
        return k + 1
    if isinstance(e, Conn):
        k = expr_dim(e.arg)
        if k < 1 or not 0 <= e.i <= k - 1:
            raise MalformedExpression(f"connection index {e.i} out of range for dimension {k}", e)
        return k + 1
    if isinstance(e, Comp):
        a, b = expr_dim(e.left), expr_dim(e.right)
        if a != b:
            raise MalformedExpression(f"cannot compose dimensions {a} and {b}", e)
        if not 0 <= e.i < a:
            raise MalformedExpression(f"composition direction {e.i} invalid in dimension {a}", e)
        return a
    raise MalformedExpression("unknown constructor", e)


@dataclass(frozen=True)
class ThinnessVerdict:
    cube_expr: CubeExpr
    verdict: str  # "thin" | "algebraically_thin" | "nondegenerate"

    @property
    def is_algebraically_thin(self) -> bool:
        return self.verdict in ("thin", "algebraically_thin")


def _leaves(e: CubeExpr) -> Iterator[CubeExpr]:
    if isinstance(e, Comp):
        yield from _leaves(e.left)
        yield from _leaves(e.right)
    else:
        yield e


def classify_thinness(e: CubeExpr) -> ThinnessVerdict:
    expr_dim(e)
    if isinstance(e, (Deg, Conn)):
        return ThinnessVerdict(e, "thin")
    if all(isinstance(leaf, (Deg, Conn)) for leaf in _leaves(e)) and isinstance(e, Comp):
        return ThinnessVerdict(e, "algebraically_thin")
    return ThinnessVerdict(e, "nondegenerate")
