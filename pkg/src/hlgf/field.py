"""Lattice gauge fields in free-presentation form.

A dimension-1 field labels every canonical edge by a level-0 element. A
dimension-2 field adds a cell label ``h_t`` in H for every triangle
t = [v0, v1, v2], subject to fake-flatness

    boundary(h_t) = A(v0v1) · A(v1v2) · A(v0v2)⁻¹,

so the triangle is a 2-cell from the long edge v0→v2 to the two short edges.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Iterator, Mapping

from .algebra import CircleGroup, CircleWindingModel, CrossedModule, Globe, TwoGroupModel, as_model
from .complex import SimplicialComplex
from .errors import BaseMismatch, BoundaryMismatch, EdgeNotInComplex, FaceNotLabeled, InvalidData, ModelNotFinite, NotClosed
from .gpd import EdgeWord, PastingDiagram, make_move, pasting_validate
from .report import Violation


def _check_keys(kind: str, given: Mapping, expected: list, base: SimplicialComplex) -> None:
    missing = [e for e in expected if e not in given]
    extra = [e for e in given if e not in set(expected)]
    if missing:
        raise InvalidData(f"{kind} {list(missing[0])} has no label", missing[0])
    if extra:
        raise InvalidData(f"label on {extra[0]!r}, which is not a {kind} of the base", extra[0])


@dataclass(frozen=True, eq=False)
class GaugeField1:
    """Edge labels in the level-0 group of ``model``."""

    base: SimplicialComplex
    model: TwoGroupModel
    edges: Mapping[tuple, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "model", as_model(self.model))
        object.__setattr__(self, "edges", dict(self.edges))
        _check_keys("edge", self.edges, self.base.edges, self.base)

    @property
    def group(self) -> Any:
        return self.model.group

    def key(self) -> tuple:
        return tuple(self.edges[e] for e in self.base.edges)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GaugeField1) and self.base == other.base and self.edges == other.edges

    def __hash__(self) -> int:
        return hash(self.key())

    def label(self, x: Any, y: Any) -> Any:
        """Value of the oriented edge x→y (inverse label when against orientation)."""
        e, s = self.base.canonical_edge(x, y)
        if e not in self.edges:
            raise EdgeNotInComplex(f"{x}-{y} is not an edge", e)
        return self.edges[e] if s == 1 else self.group.inv(self.edges[e])


@dataclass(frozen=True, eq=False)
class GaugeField2:
    """Edge labels in G plus triangle labels in H for a crossed module H → G."""

    base: SimplicialComplex
    xmod: CrossedModule
    edges: Mapping[tuple, Any] = field(default_factory=dict)
    faces: Mapping[tuple, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", dict(self.edges))
        object.__setattr__(self, "faces", dict(self.faces))
        _check_keys("edge", self.edges, self.base.edges, self.base)
        extra = [t for t in self.faces if t not in set(self.base.triangles)]
        if extra:
            raise InvalidData(f"label on {extra[0]!r}, which is not a triangle of the base", extra[0])

    @property
    def model(self) -> TwoGroupModel:
        m = self.__dict__.get("_model")
        if m is None:
            m = CircleWindingModel() if isinstance(self.xmod.G, CircleGroup) else TwoGroupModel(self.xmod)
            object.__setattr__(self, "_model", m)
        return m

    @property
    def group(self) -> Any:
        return self.xmod.G

    def key(self) -> tuple:
        return tuple(self.edges[e] for e in self.base.edges) + tuple(self.faces.get(t) for t in self.base.triangles)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GaugeField2)
            and self.base == other.base
            and self.edges == other.edges
            and self.faces == other.faces
        )

    def __hash__(self) -> int:
        return hash(self.key())

    def label(self, x: Any, y: Any) -> Any:
        e, s = self.base.canonical_edge(x, y)
        if e not in self.edges:
            raise EdgeNotInComplex(f"{x}-{y} is not an edge", e)
        return self.edges[e] if s == 1 else self.group.inv(self.edges[e])

    def edge_field(self) -> GaugeField1:
        return GaugeField1(self.base, as_model(self.group) if self.group.is_finite else self.model, self.edges)


GaugeField = GaugeField1 | GaugeField2


def holonomy(A: GaugeField, w: EdgeWord) -> Any:
    """Left-to-right product of the labels read along ``w``."""
    G = A.group
    acc = G.identity
    for e, s in w.letters:
        if e not in A.edges:
            raise EdgeNotInComplex(f"{list(e)} is not an edge of the field's base", e)
        g = A.edges[e]
        acc = G.mul(acc, g if s == 1 else G.inv(g))
    return acc


def boundary_value(A: GaugeField2 | GaugeField1, t: tuple) -> Any:
    """A(v0v1) · A(v1v2) · A(v0v2)⁻¹ for t = [v0, v1, v2]."""
    G = A.group
    a, b, c = t
    return G.mul(G.mul(A.edges[(a, b)], A.edges[(b, c)]), G.inv(A.edges[(a, c)]))


def validate_field2(A: GaugeField2) -> list[Violation]:
    out: list[Violation] = []
    for t in A.base.triangles:
        if t not in A.faces:
            out.append(Violation("unlabeled", list(t), f"triangle {list(t)} has no cell label"))
            continue
        if A.xmod.boundary(A.faces[t]) != boundary_value(A, t):
            out.append(Violation("fake-flatness", list(t), f"triangle {list(t)} violates fake-flatness"))
    return out


def move_value(A: GaugeField2, m) -> Globe:
    """Level-1 element contributed by one whiskered move."""
    t = m.triangle
    if t not in A.faces:
        raise FaceNotLabeled(f"triangle {list(t)} has no cell label", t)
    model = A.model
    cell = Globe(A.edges[(t[0], t[2])], A.faces[t])
    if m.direction == "contract":
        cell = model.vinverse(cell)
    return model.whisker(holonomy(A, m.left), cell, holonomy(A, m.right))


def surface_transport(A: GaugeField2, p: PastingDiagram) -> Globe:
    """Evaluate a pasting diagram as a level-1 element of the 2-group."""
    bad = pasting_validate(p)
    if bad:
        raise BoundaryMismatch(f"invalid pasting diagram: {bad[0].message}", bad)
    model = A.model
    acc = model.lift(holonomy(A, p.source_word))
    for m in p.moves:
        acc = model.vcompose(acc, move_value(A, m))
    return acc


def three_cell_violations(A: GaugeField2) -> list[Violation]:
    """Tetrahedra whose two canonical fillings evaluate differently.

    For [0,1,2,3] both routes go from the edge 0→3 to the path 0→1→2→3:
    through [0,1,3] then [1,2,3], or through [0,2,3] then [0,1,2].
    """
    out: list[Violation] = []
    base = A.base
    for tet in base.simplices_of_dim(3):
        v0, v1, v2, v3 = tet
        long = EdgeWord.path(base, [v0, v3])
        r1 = PastingDiagram.from_moves(
            long,
            [
                make_move(base, (v0, v1, v3), "expand"),
                make_move(base, (v1, v2, v3), "expand", left=EdgeWord.path(base, [v0, v1])),
            ],
        )
        r2 = PastingDiagram.from_moves(
            long,
            [
                make_move(base, (v0, v2, v3), "expand"),
                make_move(base, (v0, v1, v2), "expand", right=EdgeWord.path(base, [v2, v3])),
            ],
        )
        if surface_transport(A, r1) != surface_transport(A, r2):
            out.append(Violation("three-cell", list(tet), f"tetrahedron {list(tet)} has nontrivial 2-holonomy"))
    return out


# ------------------------------------------------------------ enumeration


class FieldEnumeration:
    """Lazy stream of fields together with their exact count."""

    def __init__(self, count: int, factory) -> None:
        self.count = count
        self._factory = factory

    def __iter__(self) -> Iterator[GaugeField]:
        return self._factory()

    def __len__(self) -> int:
        return self.count


def enumerate_fields(base: SimplicialComplex, model: Any, dim: int = 1) -> FieldEnumeration:
    if dim not in (1, 2):
        raise ValueError("dim must be 1 or 2")
    if dim == 1:
        mdl = as_model(model.G if isinstance(model, CrossedModule) else model)
        G = mdl.group
        if not G.is_finite:
            raise ModelNotFinite(f"cannot enumerate fields valued in {G.name}", G.name)
        edges = base.edges
        elems = list(G.elements())

        def gen1() -> Iterator[GaugeField1]:
            for labels in product(elems, repeat=len(edges)):
                yield GaugeField1(base, mdl, dict(zip(edges, labels)))

        return FieldEnumeration(len(elems) ** len(edges), gen1)

    if isinstance(model, CrossedModule):
        xmod = model
    elif isinstance(model, TwoGroupModel):
        xmod = model.xmod
    else:
        xmod = CrossedModule.trivial_over(model)
    if not xmod.is_finite:
        raise ModelNotFinite(f"cannot enumerate fields valued in {xmod.name}", xmod.name)
    G, H = xmod.G, xmod.H
    fiber: dict[Any, list] = {}
    for h in H.elements():
        fiber.setdefault(xmod.boundary(h), []).append(h)
    edges, tris = base.edges, base.triangles
    gelems = list(G.elements())

    def options(edge_map: dict) -> list[list]:
        return [fiber.get(G.mul(G.mul(edge_map[(a, b)], edge_map[(b, c)]), G.inv(edge_map[(a, c)])), []) for a, b, c in tris]

    count = 0
    for labels in product(gelems, repeat=len(edges)):
        n = 1
        for opt in options(dict(zip(edges, labels))):
            n *= len(opt)
        count += n

    def gen2() -> Iterator[GaugeField2]:
        for labels in product(gelems, repeat=len(edges)):
            emap = dict(zip(edges, labels))
            for hs in product(*options(emap)):
                yield GaugeField2(base, xmod, emap, dict(zip(tris, hs)))

    return FieldEnumeration(count, gen2)


def wilson_loop(A: GaugeField, w: EdgeWord) -> frozenset:
    if not w.is_closed:
        raise NotClosed(f"word from {w.source} to {w.target} is not closed", (w.source, w.target))
    return A.group.conjugacy_class(holonomy(A, w))


def restrict(A: GaugeField, sub: SimplicialComplex) -> GaugeField:
    """Restriction to a subcomplex (which must share the vertex order)."""
    if not sub.is_subcomplex_of(A.base):
        raise BaseMismatch("restriction target is not a subcomplex of the field's base", sub)
    edges = {e: A.edges[e] for e in sub.edges}
    if isinstance(A, GaugeField2):
        faces = {t: A.faces[t] for t in sub.triangles if t in A.faces}
        return GaugeField2(sub, A.xmod, edges, faces)
    return GaugeField1(sub, A.model, edges)


def constant_field(base: SimplicialComplex, model: Any) -> GaugeField1:
    mdl = as_model(model)
    return GaugeField1(base, mdl, {e: mdl.group.identity for e in base.edges})


def random_field(base: SimplicialComplex, model: Any, rng: random.Random) -> GaugeField1:
    mdl = as_model(model)
    elems = list(mdl.group.elements())
    return GaugeField1(base, mdl, {e: rng.choice(elems) for e in base.edges})


def random_field2(base: SimplicialComplex, xmod: CrossedModule, rng: random.Random) -> GaugeField2:
    """Random fake-flat field: pick edges whose boundary words all lie in the image of ∂."""
    G, H = xmod.G, xmod.H
    fiber: dict[Any, list] = {}
    for h in H.elements():
        fiber.setdefault(xmod.boundary(h), []).append(h)
    elems = list(G.elements())
    for _ in range(10_000):
        edges = {e: rng.choice(elems) for e in base.edges}
        faces = {}
        for a, b, c in base.triangles:
            opts = fiber.get(G.mul(G.mul(edges[(a, b)], edges[(b, c)]), G.inv(edges[(a, c)])))
            if not opts:
                break
            faces[(a, b, c)] = rng.choice(opts)
        else:
            return GaugeField2(base, xmod, edges, faces)
    raise InvalidData("could not sample a fake-flat field", xmod.name)
