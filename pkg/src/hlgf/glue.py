"""Covers with transition data, global fields, gluing and coarse graining."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Mapping, Sequence

from .complex import Cover, SimplicialComplex, barycentric_subdivide
from .errors import Budget, InvalidGlobalField, ModelNotFinite, NotARefinement, OverlapDisagreement
from .field import GaugeField, GaugeField1, GaugeField2, enumerate_fields, restrict
from .gauge import GaugeTransform, act, identity_transform, invert_transform
from .report import Violation
from .algebra import as_model


@dataclass(frozen=True, eq=False)
class TransitionSystem:
    """Transition transforms psi[(i, j)] on the overlap X_i ∩ X_j.

    Build with :meth:`from_pairs`, which fills the reverse direction with the
    pointwise inverse when only one direction is supplied.
    """

    cover: Cover
    group: Any
    psi: Mapping[tuple[int, int], GaugeTransform] = field(default_factory=dict)

    @classmethod
    def from_pairs(cls, cover: Cover, group: Any, pairs: Mapping[tuple[int, int], GaugeTransform]) -> "TransitionSystem":
        psi = dict(pairs)
        for (i, j), u in list(pairs.items()):
            if (j, i) not in psi:
                psi[(j, i)] = invert_transform(u)
        for i, j in cover.overlaps():
            if (i, j) not in psi:
                psi[(i, j)] = identity_transform(cover.intersection(i, j), group)
                psi[(j, i)] = identity_transform(cover.intersection(i, j), group)
        return cls(cover, group, psi)

    @classmethod
    def identity(cls, cover: Cover, group: Any) -> "TransitionSystem":
        return cls.from_pairs(cover, group, {})

    def value(self, i: int, j: int, v: Any) -> Any:
        if i == j:
            return self.group.identity
        return self.psi[(i, j)].vertices[v]

    def is_identity_on_vertices(self) -> bool:
        e = self.group.identity
        return all(g == e for u in self.psi.values() for g in u.vertices.values())


@dataclass(frozen=True, eq=False)
class GlobalField:
    cover: Cover
    transitions: TransitionSystem
    locals: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "locals", tuple(self.locals))

    @property
    def group(self) -> Any:
        return self.transitions.group


def validate_global(gf: GlobalField) -> list[Violation]:
    """Antisymmetry, triple cocycle and overlap compatibility on generators."""
    cover, ts, G = gf.cover, gf.transitions, gf.group
    names = cover.names
    out: list[Violation] = []
    if len(gf.locals) != len(cover.pieces):
        return [Violation("locals", None, "one local field per piece is required")]
    for k, (A, piece) in enumerate(zip(gf.locals, cover.pieces)):
        if A.base != piece:
            out.append(Violation("local-base", names[k], f"local field {names[k]} is not defined on its piece"))
    if out:
        return out
    for i, j in cover.overlaps():
        X = cover.intersection(i, j)
        where = f"{names[i]}&{names[j]}"
        for pair in ((i, j), (j, i)):
            if pair not in ts.psi:
                out.append(Violation("missing-transition", where, f"no transition for {names[pair[0]]}->{names[pair[1]]}"))
        if out and out[-1].kind == "missing-transition":
            continue
        for v in X.vertices:
            if G.mul(ts.value(i, j, v), ts.value(j, i, v)) != G.identity:
                out.append(Violation("antisymmetry", (where, v), f"psi({names[j]},{names[i]}) is not the inverse of psi({names[i]},{names[j]}) at {v}"))
        Ai, Aj = gf.locals[i], gf.locals[j]
        for x, y in X.edges:
            lhs = Ai.edges[(x, y)]
            rhs = G.mul(G.mul(ts.value(i, j, x), Aj.edges[(x, y)]), G.inv(ts.value(i, j, y)))
            if lhs != rhs:
                out.append(Violation("compatibility", (where, [x, y]), f"edge {x}-{y}: A_{names[i]} != psi A_{names[j]} psi^-1"))
        if isinstance(Ai, GaugeField2) and isinstance(Aj, GaugeField2):
            for t in X.triangles:
                if t in Ai.faces and t in Aj.faces and Ai.faces[t] != Ai.xmod.act(ts.value(i, j, t[0]), Aj.faces[t]):
                    out.append(Violation("compatibility", (where, list(t)), f"triangle {list(t)}: cell labels are not related by psi"))
    n = len(cover.pieces)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if len({i, j, k}) < 3:
                    continue
                for v in cover.triple_overlap_vertices(i, j, k):
                    if G.mul(ts.value(i, j, v), ts.value(j, k, v)) != ts.value(i, k, v):
                        out.append(Violation("cocycle", (names[i], names[j], names[k], v), f"cocycle fails on {names[i]},{names[j]},{names[k]} at {v}"))
    return out


def _nerve_tree(cover: Cover) -> tuple[list[int], dict[int, int | None]]:
    """BFS order and parents on the nerve, each component rooted at its lowest index."""
    n = len(cover.pieces)
    nbrs: dict[int, list[int]] = {i: [] for i in range(n)}
    for i, j in cover.overlaps():
        nbrs[i].append(j)
        nbrs[j].append(i)
    parent: dict[int, int | None] = {}
    order: list[int] = []
    for root in range(n):
        if root in parent:
            continue
        parent[root] = None
        queue = [root]
        for p in queue:
            order.append(p)
            for q in sorted(nbrs[p]):
                if q not in parent:
                    parent[q] = p
                    queue.append(q)
    return order, parent


def normalizing_transforms(gf: GlobalField) -> list[GaugeTransform]:
    """Per-piece transforms u_i making every transition trivial on vertices.

    Pieces are processed along a BFS spanning tree of the nerve. Roots get
    u ≡ 1. A later piece j sets u_j(v) = u_k(v)·psi(k, j)(v) for every vertex v
    it shares with an already processed piece k (the parent first); by the
    cocycle condition the choice of k does not matter. Vertices of X_j shared
    with no processed piece take the value at the lowest vertex X_j shares with
    its parent.
    """
    cover, ts, G = gf.cover, gf.transitions, gf.group
    order, parent = _nerve_tree(cover)
    u: dict[int, dict] = {}
    done: list[int] = []
    for j in order:
        piece = cover.pieces[j]
        vals: dict = {}
        p = parent[j]
        sources = ([p] if p is not None else []) + [k for k in done if k != p]
        for v in piece.vertices:
            for k in sources:
                if v in u[k] and v in cover.intersection(k, j).vertex_ids:
                    vals[v] = G.mul(u[k][v], ts.value(k, j, v))
                    break
        if p is None:
            fill = G.identity
        else:
            shared = [v for v in cover.intersection(p, j).vertices]
            fill = vals[shared[0]]
        for v in piece.vertices:
            vals.setdefault(v, fill)
        u[j] = vals
        done.append(j)
    return [GaugeTransform(cover.pieces[i], G, u[i]) for i in range(len(cover.pieces))]


def transform_transitions(ts: TransitionSystem, us: Sequence[GaugeTransform]) -> TransitionSystem:
    """psi'(i, j) = u_i · psi(i, j) · u_j⁻¹ pointwise on overlap vertices."""
    G = ts.group
    psi = {}
    for (i, j), t in ts.psi.items():
        vals = {v: G.mul(G.mul(us[i].vertices[v], g), G.inv(us[j].vertices[v])) for v, g in t.vertices.items()}
        psi[(i, j)] = GaugeTransform(t.base, G, vals)
    return TransitionSystem(ts.cover, G, psi)


def normalize_transitions(gf: GlobalField) -> tuple[GlobalField, list[GaugeTransform]]:
    bad = validate_global(gf)
    if bad:
        raise InvalidGlobalField(f"global field is invalid: {bad[0].message}", bad)
    us = normalizing_transforms(gf)
    new = GlobalField(
        gf.cover,
        transform_transitions(gf.transitions, us),
        tuple(act(u, A) for u, A in zip(us, gf.locals)),
    )
    bad = validate_global(new)
    if bad or not new.transitions.is_identity_on_vertices():
        raise InvalidGlobalField("normalization did not produce identity transitions", bad)
    return new, us


def glue_to_single(gf: GlobalField) -> GaugeField:
    """Union of the local labelings of a normalized global field."""
    cover = gf.cover
    if not gf.transitions.is_identity_on_vertices():
        raise OverlapDisagreement("transitions are not the identity on overlap vertices", None)
    edges: dict = {}
    faces: dict = {}
    for A in gf.locals:
        for e, g in A.edges.items():
            if e in edges and edges[e] != g:
                raise OverlapDisagreement(f"local fields disagree on edge {e[0]}-{e[1]}", e)
            edges[e] = g
        if isinstance(A, GaugeField2):
            for t, h in A.faces.items():
                if t in faces and faces[t] != h:
                    raise OverlapDisagreement(f"local fields disagree on triangle {'-'.join(map(str, t))}", t)
                faces[t] = h
    first = gf.locals[0]
    if isinstance(first, GaugeField2):
        return GaugeField2(cover.parent, first.xmod, edges, faces)
    return GaugeField1(cover.parent, first.model, edges)


@dataclass
class EqualizerReport:
    global_count: int
    limit_count: int
    injective: bool
    surjective: bool

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective and self.global_count == self.limit_count

    def summary(self) -> str:
        if self.bijective:
            return f"bijection certified: {self.global_count} = {self.limit_count}"
        return f"bijection FAILED: |M(X)| = {self.global_count}, |limit| = {self.limit_count}, injective={self.injective}, surjective={self.surjective}"


def equalizer_check(X: SimplicialComplex, cover: Cover, model: Any, dim: int = 1, budget: int | None = None) -> EqualizerReport:
    """Compare M(X) with the limit of the local field sets (identity transitions).

    The limit consists of tuples of local fields agreeing on every overlap;
    the canonical map sends a global field to its tuple of restrictions.
    """
    if cover.parent != X:
        raise InvalidGlobalField("cover is not a cover of the given complex", None)
    G = as_model(model).group
    if not G.is_finite:
        raise ModelNotFinite("equalizer check needs a finite model", G.name)
    bud = Budget(budget)
    glob = enumerate_fields(X, model, dim)
    bud.require(glob.count, "global enumeration")
    local_enums = [enumerate_fields(p, model, dim) for p in cover.pieces]
    total = 1
    for e in local_enums:
        total *= e.count
    bud.require(total, "limit enumeration")
    local_lists = [list(e) for e in local_enums]
    overlaps = [(i, j, cover.intersection(i, j)) for i, j in cover.overlaps()]

    def agree(tup: tuple) -> bool:
        for i, j, Xij in overlaps:
            for e in Xij.edges:
                if tup[i].edges[e] != tup[j].edges[e]:
                    return False
            if dim == 2:
                for t in Xij.triangles:
                    if tup[i].faces.get(t) != tup[j].faces.get(t):
                        return False
        return True

    limit = {tuple(A.key() for A in tup) for tup in product(*local_lists) if agree(tup)}
    images = [tuple(restrict(A, p).key() for p in cover.pieces) for A in glob]
    injective = len(set(images)) == len(images)
    surjective = set(images) == limit
    return EqualizerReport(len(images), len(limit), injective, surjective)


def coarse_grain(A_fine: GaugeField1, X: SimplicialComplex) -> GaugeField1:
    """Coarse edge label = holonomy of the fine field along a→(barycenter)→b."""
    sd = barycentric_subdivide(X)
    if A_fine.base != sd.complex:
        raise NotARefinement("field is not defined on the barycentric subdivision of the given complex", None)
    G = A_fine.group
    edges = {}
    for e, chain in sd.edge_chains.items():
        acc = G.identity
        for fe, s in chain:
            g = A_fine.edges[fe]
            acc = G.mul(acc, g if s == 1 else G.inv(g))
        edges[e] = acc
    return GaugeField1(X, A_fine.model, edges)
