"""Gauge transformations, their action on fields, and orbit enumeration."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Mapping

from .algebra import Globe, TwoGroupModel, as_model
from .complex import SimplicialComplex
from .errors import BaseMismatch, Budget, InvalidData, ModelNotFinite
from .field import GaugeField, GaugeField1, GaugeField2, enumerate_fields, holonomy
from .gpd import EdgeWord
from .report import Violation


@dataclass(frozen=True, eq=False)
class GaugeTransform:
    """Vertex values in the level-0 group, plus optional level-1 edge values.

    An edge value for [x, y] is a level-1 element from u(x) to u(y). Edge values
    are only meaningful for models with nontrivial level 1 (the circle model).
    """

    base: SimplicialComplex
    group: Any
    vertices: Mapping[Any, Any] = field(default_factory=dict)
    edges: Mapping[tuple, Globe] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", dict(self.vertices))
        if self.edges is not None:
            object.__setattr__(self, "edges", dict(self.edges))
        missing = [v for v in self.base.vertices if v not in self.vertices]
        if missing:
            raise InvalidData(f"vertex {missing[0]!r} has no gauge value", missing[0])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GaugeTransform)
            and self.base == other.base
            and self.vertices == other.vertices
            and (self.edges or {}) == (other.edges or {})
        )

    def __hash__(self) -> int:
        return hash(tuple(self.vertices[v] for v in self.base.vertices))

    def __call__(self, v: Any) -> Any:
        return self.vertices[v]

    def restrict(self, sub: SimplicialComplex) -> "GaugeTransform":
        edges = None if self.edges is None else {e: self.edges[e] for e in sub.edges if e in self.edges}
        return GaugeTransform(sub, self.group, {v: self.vertices[v] for v in sub.vertices}, edges)


def _edge_model(group: Any) -> TwoGroupModel:
    return as_model(group)


def validate_transform(u: GaugeTransform) -> list[Violation]:
    out = []
    for v in u.base.vertices:
        if not u.group.contains(u.vertices[v]):
            out.append(Violation("vertex-value", v, f"value at {v} is not a group element"))
    if u.edges:
        model = _edge_model(u.group)
        for (x, y), eta in u.edges.items():
            if (x, y) not in u.base.simplices:
                out.append(Violation("edge", [x, y], f"{x}-{y} is not an edge"))
            elif eta.source != u.vertices[x] or model.target(eta) != u.vertices[y]:
                out.append(Violation("edge-value", [x, y], f"edge value on {x}-{y} does not run from u({x}) to u({y})"))
    return out


def identity_transform(base: SimplicialComplex, group: Any) -> GaugeTransform:
    return GaugeTransform(base, group, {v: group.identity for v in base.vertices})


def act(u: GaugeTransform, A: GaugeField) -> GaugeField:
    """B(e) = u(x)·A(e)·u(y)⁻¹ for e: x→y; cells transform by u(v0) ▷ h_t.

    For the circle model, edge values additionally shift each triangle's
    displacement by δ01 + δ12 − δ02 (an integer), where δ is the displacement
    of the edge value.
    """
    if u.base != A.base:
        raise BaseMismatch("transform and field live on different complexes", None)
    if u.edges is not None:
        bad = validate_transform(u)
        if not bad and set(u.edges) != set(u.base.edges):
            bad = [Violation("edge", None, "edge values must be given on every edge or on none")]
        if bad:
            raise InvalidData(f"invalid gauge transform: {bad[0].message}", bad[0].where)
    G = A.group
    edges = {(x, y): G.mul(G.mul(u.vertices[x], g), G.inv(u.vertices[y])) for (x, y), g in A.edges.items()}
    if isinstance(A, GaugeField1):
        return GaugeField1(A.base, A.model, edges)
    xm = A.xmod
    faces = {}
    for t, h in A.faces.items():
        h2 = xm.act(u.vertices[t[0]], h)
        if u.edges:
            a, b, c = t
            d = u.edges[(a, b)].cell
            d = xm.H.mul(d, u.edges[(b, c)].cell)
            d = xm.H.mul(d, xm.H.inv(u.edges[(a, c)].cell))
            h2 = xm.H.mul(h2, d)
        faces[t] = h2
    return GaugeField2(A.base, xm, edges, faces)


def compose_transforms(u: GaugeTransform, v: GaugeTransform) -> GaugeTransform:
    """Pointwise product; acting by the result equals acting by v, then by u."""
    if u.base != v.base:
        raise BaseMismatch("transforms live on different complexes", None)
    G = u.group
    verts = {x: G.mul(u.vertices[x], v.vertices[x]) for x in u.base.vertices}
    edges = None
    if u.edges is not None or v.edges is not None:
        model = _edge_model(G)
        eu = u.edges or {e: model.lift(u.vertices[e[0]]) for e in u.base.edges}
        ev = v.edges or {e: model.lift(v.vertices[e[0]]) for e in v.base.edges}
        edges = {e: model.hcompose(eu[e], ev[e]) for e in u.base.edges}
    return GaugeTransform(u.base, G, verts, edges)


def invert_transform(u: GaugeTransform) -> GaugeTransform:
    G = u.group
    edges = None
    if u.edges is not None:
        model = _edge_model(G)
        edges = {e: model.hinverse(eta) for e, eta in u.edges.items()}
    return GaugeTransform(u.base, G, {x: G.inv(g) for x, g in u.vertices.items()}, edges)


def all_transforms(base: SimplicialComplex, group: Any):
    if not group.is_finite:
        raise ModelNotFinite("transforms can only be enumerated for finite groups", group.name)
    verts = base.vertices
    for vals in product(list(group.elements()), repeat=len(verts)):
        yield GaugeTransform(base, group, dict(zip(verts, vals)))


@dataclass
class Orbit:
    representative: GaugeField
    size: int
    members: list


def orbits(base: SimplicialComplex, model: Any, dim: int = 1, budget: int | None = None) -> list[Orbit]:
    """Partition all fields into gauge orbits, sorted by minimal representative."""
    G = as_model(model).group
    if not G.is_finite:
        raise ModelNotFinite("orbits need a finite group", G.name)
    Budget(budget).require(G.order ** len(base.edges) * G.order ** len(base.vertices), "orbit enumeration")
    fields = enumerate_fields(base, model, dim)
    transforms = list(all_transforms(base, G))
    seen: set = set()
    out: list[Orbit] = []
    for A in sorted(fields, key=lambda f: f.key()):
        if A.key() in seen:
            continue
        members = {}
        for u in transforms:
            B = act(u, A)
            members.setdefault(B.key(), B)
        seen.update(members)
        ordered = [members[k] for k in sorted(members)]
        out.append(Orbit(ordered[0], len(ordered), ordered))
    return out


def is_gauge_equivalent(A: GaugeField, B: GaugeField, budget: int | None = None) -> GaugeTransform | None:
    """Find u with act(u, A) = B, or return None after an exhaustive search.

    On each connected component only the value at the lowest vertex is free:
    along a spanning tree the equation u(y) = B(e)⁻¹·u(x)·A(e) forces the
    rest. Trying every root value per component is therefore exhaustive.
    """
    if A.base != B.base:
        raise BaseMismatch("fields live on different complexes", None)
    base, G = A.base, A.group
    if not G.is_finite:
        raise ModelNotFinite("equivalence search needs a finite group", G.name)
    comps = base.components()
    Budget(budget).require(G.order ** len(comps) * max(1, len(base.edges)), "gauge equivalence search")
    adj: dict[Any, list] = {v: [] for v in base.vertices}
    for x, y in base.edges:
        adj[x].append(y)
        adj[y].append(x)
    choices = []
    for comp in comps:
        root = comp[0]
        order = [root]
        parent = {root: None}
        for v in order:
            for w in sorted(adj[v], key=base.position):
                if w not in parent:
                    parent[w] = v
                    order.append(w)
        options = []
        for g in G.elements():
            u = {root: g}
            for v in order[1:]:
                p = parent[v]
                # B(p→v) = u(p)·A(p→v)·u(v)⁻¹  ⇒  u(v) = B(p→v)⁻¹·u(p)·A(p→v)
                u[v] = G.mul(G.mul(G.inv(B.label(p, v)), u[p]), A.label(p, v))
            options.append(u)
        choices.append(options)
    for combo in product(*choices):
        vals: dict = {}
        for part in combo:
            vals.update(part)
        u = GaugeTransform(base, G, vals)
        if act(u, A) == B:
            return u
    return None


def loop_holonomy_after(u: GaugeTransform, A: GaugeField, w: EdgeWord) -> Any:
    """Convenience: holonomy of the transformed field along w."""
    return holonomy(act(u, A), w)
