"""Simplexes of paths, extended lattice gauge fields, classification, transport.

For an admissible pair (τ, ν) write v = max τ and m = max ν. The simplex of
paths over ν is the family of two-leg paths v → x → m for x in ν. Its value
is recorded through two traces:

* ``corners[x]``: the level-0 holonomy of v → x → m, for every vertex x of ν;
* ``cells[(x, y)]``: for every edge x < y of ν, the level-1 element from
  ``corners[x]`` to ``corners[y]`` obtained by sweeping the path across the
  triangles [x, y, m] (expand) and [x, y, v] (contract). Cells exist only when
  the field carries level-1 data (a crossed-module or circle 2-field).

The level-0 reading of the pair is the corner at min ν, the two-leg path
through the initial vertex.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Mapping

from .algebra import CircleGroup, Globe, TwoGroupModel
from .complex import NestedPair, SimplicialComplex, admissible_nested_pairs, is_admissible
from .errors import (
    AnchorMismatch,
    BaseMismatch,
    BoundaryMismatch,
    Budget,
    InvalidData,
    ModelLevelUnsupported,
    NotAClosedSurface,
)
from .field import GaugeField, GaugeField1, GaugeField2, holonomy, move_value, validate_field2
from .gauge import GaugeTransform
from .glue import GlobalField, TransitionSystem, glue_to_single, normalize_transitions, transform_transitions
from .gpd import EdgeWord, PastingDiagram, make_move
from .report import Violation


@dataclass(frozen=True)
class PathValue:
    level: int
    corners: Mapping[Any, Any]
    cells: Mapping[tuple, Globe] = field(default_factory=dict)

    @property
    def base_value(self) -> Any:
        """Level-0 reading: the corner at the first vertex of ν."""
        return self.corners[next(iter(self.corners))]


@dataclass(frozen=True, eq=False)
class ELGF:
    base: SimplicialComplex
    model: TwoGroupModel
    values: Mapping[NestedPair, PathValue]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ELGF) and self.base == other.base and dict(self.values) == dict(other.values)

    def __hash__(self) -> int:
        return hash(len(self.values))

    def with_value(self, pair: NestedPair, value: PathValue) -> "ELGF":
        vals = dict(self.values)
        vals[pair] = value
        return ELGF(self.base, self.model, vals)


def path_simplex_moves(base: SimplicialComplex, pair: NestedPair, x: Any, y: Any) -> list:
    """Moves sweeping v → x → m onto v → y → m for an edge x < y of ν."""
    v, m = pair.tau[-1], pair.nu[-1]
    to_x = EdgeWord.path(base, [v, x])
    if y == m:
        return [make_move(base, (x, y, v), "contract", left=to_x, right=EdgeWord.path(base, [v, y]))]
    return [
        make_move(base, (x, y, m), "expand", left=to_x),
        make_move(base, (x, y, v), "contract", left=to_x, right=EdgeWord.path(base, [v, y, m])),
    ]


def path_simplex_diagram(base: SimplicialComplex, pair: NestedPair, x: Any, y: Any) -> PastingDiagram:
    v, m = pair.tau[-1], pair.nu[-1]
    return PastingDiagram.from_moves(EdgeWord.path(base, [v, x, m]), path_simplex_moves(base, pair, x, y))


def _corner(A: GaugeField, v: Any, x: Any, m: Any) -> Any:
    G = A.group
    g = A.label(v, x)
    return g if x == m else G.mul(g, A.label(x, m))


def extract_elgf(source: GaugeField | GlobalField, model: TwoGroupModel | None = None, max_level: int | None = None) -> ELGF:
    """Read an ELGF off a single field, or off a global field after normalizing and gluing."""
    A = glue_to_single(normalize_transitions(source)[0]) if isinstance(source, GlobalField) else source
    has_cells = isinstance(A, GaugeField2)
    if max_level is None:
        max_level = 1 if has_cells else 0
    if max_level >= 1 and not has_cells:
        raise ModelLevelUnsupported("level-1 values need a field with level-1 (triangle) data", max_level)
    if max_level >= 2:
        raise ModelLevelUnsupported("shipped models carry no level-2 content beyond degenerate globes", max_level)
    mdl = A.model
    if model is not None and model.group != mdl.group:
        raise BaseMismatch("model does not match the field's group", model.name)
    base = A.base
    values: dict[NestedPair, PathValue] = {}
    for pair in admissible_nested_pairs(base):
        v, m = pair.tau[-1], pair.nu[-1]
        corners = {x: _corner(A, v, x, m) for x in pair.nu}
        cells = {}
        if max_level >= 1:
            for x, y in combinations(pair.nu, 2):
                acc = mdl.lift(corners[x])
                for mv in path_simplex_moves(base, pair, x, y):
                    acc = mdl.vcompose(acc, move_value(A, mv))
                cells[(x, y)] = acc
        values[pair] = PathValue(pair.level, corners, cells)
    return ELGF(base, mdl, values)


def check_elgf(e: ELGF) -> list[Violation]:
    """Level matching, the cocycle on admissible triples, and boundary assembly."""
    out: list[Violation] = []
    model, G = e.model, e.model.group
    base = e.base
    pairs = admissible_nested_pairs(base)
    expected = set(pairs)
    for p in sorted(set(e.values) - expected, key=str):
        out.append(Violation("not-admissible", str(p), f"{p} is not an admissible pair"))
    usable: dict[NestedPair, PathValue] = {}
    for p in pairs:
        val = e.values.get(p)
        if val is None:
            out.append(Violation("missing", str(p), f"no value for {p}"))
            continue
        edges = set(combinations(p.nu, 2))
        if val.level != p.level:
            out.append(Violation("level", str(p), f"{p} has level {p.level} but its value has level {val.level}"))
            continue
        if set(val.corners) != set(p.nu) or not set(val.cells) <= edges or (val.cells and set(val.cells) != edges):
            out.append(Violation("level", str(p), f"value of {p} does not have the shape of a level-{p.level} simplex of paths"))
            continue
        if not all(model.contains(0, c) for c in val.corners.values()) or not all(model.contains(1, c) for c in val.cells.values()):
            out.append(Violation("level", str(p), f"value of {p} has entries outside the model"))
            continue
        usable[p] = val

    # cocycle: value(τ,σ) = value(τ,ν) ⊙ value(ν,σ), checked on every trace entry of σ
    for p, val in usable.items():
        tau, nu = p.tau, p.nu
        for r in range(1, len(nu)):
            for sigma in combinations(nu[:-1], r):
                outer, inner = usable.get(NestedPair(tau, sigma)), usable.get(NestedPair(nu, sigma))
                if outer is None or inner is None:
                    continue
                triple = ("-".join(map(str, tau)), "-".join(map(str, nu)), "-".join(map(str, sigma)))
                bad = any(outer.corners[x] != G.mul(val.corners[x], inner.corners[x]) for x in sigma)
                if not bad and outer.cells and val.cells and inner.cells:
                    bad = any(outer.cells[ed] != model.hcompose(val.cells[ed], inner.cells[ed]) for ed in combinations(sigma, 2))
                if bad:
                    out.append(Violation("cocycle", triple, f"cocycle fails on tau={triple[0]}, nu={triple[1]}, sigma={triple[2]}"))

    # boundary assembly
    for p, val in usable.items():
        tau, nu = p.tau, p.nu
        m = nu[-1]
        name = str(p)
        # faces through max ν restrict the family
        for r in range(1, len(nu)):
            for rho in combinations(nu, r):
                if rho[-1] != m:
                    continue
                face = usable.get(NestedPair(tau, rho))
                if face is None:
                    continue
                ok = all(face.corners[x] == val.corners[x] for x in rho)
                if ok and face.cells and val.cells:
                    ok = all(face.cells[ed] == val.cells[ed] for ed in combinations(rho, 2))
                if not ok:
                    out.append(Violation("boundary", (name, "-".join(map(str, rho))), f"{p} does not restrict to the value on face {list(rho)}"))
        if not val.cells:
            continue
        endpoints_ok = True
        for (x, y), c in val.cells.items():
            if model.source(c) != val.corners[x] or model.target(c) != val.corners[y]:
                endpoints_ok = False
                out.append(Violation("boundary", (name, [x, y]), f"{p}: cell on {x}-{y} does not run between the corners"))
        if not endpoints_ok:
            continue
        for x, y, z in combinations(nu, 3):
            try:
                ok = model.vcompose(val.cells[(x, y)], val.cells[(y, z)]) == val.cells[(x, z)]
            except BoundaryMismatch:
                ok = False
            if not ok:
                out.append(Violation("boundary", (name, [x, y, z]), f"{p}: cells on {x}-{y}-{z} do not assemble (level-2 boundary)"))
    return out


def act_elgf(u: GaugeTransform, e: ELGF) -> ELGF:
    """Gauge action on path-simplex values.

    Corners become u(v)·c·u(m)⁻¹. Cells are whiskered the same way; circle
    edge values add the integer F(y) − F(x), where F(x) is the displacement of
    the edge values along v → x → m.
    """
    if u.base != e.base:
        raise BaseMismatch("transform and ELGF live on different complexes", None)
    model, G = e.model, e.model.group
    if u.edges and not isinstance(G, CircleGroup):
        raise ModelLevelUnsupported("edge values are only supported for the circle model", model.name)

    def disp(a: Any, b: Any) -> Fraction:
        if a == b:
            return Fraction(0)
        edge, s = e.base.canonical_edge(a, b)
        return s * u.edges[edge].cell

    values = {}
    for p, val in e.values.items():
        v, m = p.tau[-1], p.nu[-1]
        left, right = u.vertices[v], G.inv(u.vertices[m])
        corners = {x: G.mul(G.mul(left, c), right) for x, c in val.corners.items()}
        cells = {}
        for (x, y), c in val.cells.items():
            c2 = model.whisker(left, c, right)
            if u.edges:
                shift = (disp(v, y) + disp(y, m)) - (disp(v, x) + disp(x, m))
                c2 = Globe(c2.source, c2.cell + shift)
            cells[(x, y)] = c2
        values[p] = PathValue(val.level, corners, cells)
    return ELGF(e.base, model, values)


# ----------------------------------------------------------- classification


@dataclass(frozen=True)
class BundleClass:
    label: Any
    trivial: bool
    detail: str = ""


def surface_orientation(base: SimplicialComplex) -> dict[tuple, int]:
    """Coherent orientation signs of a closed connected orientable surface."""
    tris = base.triangles
    if base.dim != 2 or not tris:
        raise NotAClosedSurface("the complex is not 2-dimensional", base.dim)
    covered = {f for t in tris for f in combinations(t, 2)} | {(v,) for t in tris for v in t}
    stray = [s for s in base.simplices if len(s) < 3 and s not in covered]
    if stray:
        raise NotAClosedSurface(f"simplex {list(stray[0])} is not a face of any triangle", stray[0])
    incident: dict[tuple, list] = {e: [] for e in base.edges}
    for t in tris:
        for e in combinations(t, 2):
            incident[e].append(t)
    for e, ts in incident.items():
        if len(ts) != 2:
            raise NotAClosedSurface(f"edge {list(e)} lies in {len(ts)} triangles, not 2", e)

    def sign(e: tuple, t: tuple) -> int:
        return -1 if e == (t[0], t[2]) else 1

    eps = {tris[0]: 1}
    queue = deque([tris[0]])
    while queue:
        t = queue.popleft()
        for e in combinations(t, 2):
            for t2 in incident[e]:
                if t2 == t:
                    continue
                want = -eps[t] * sign(e, t) * sign(e, t2)
                if t2 not in eps:
                    eps[t2] = want
                    queue.append(t2)
                elif eps[t2] != want:
                    raise NotAClosedSurface("the surface is not orientable", e)
    if len(eps) != len(tris):
        raise NotAClosedSurface("the surface is not connected", len(eps))
    return eps


def triangle_windings(source: ELGF | GaugeField2) -> dict[tuple, Fraction]:
    """Lifted displacement of each triangle's 2-cell."""
    if isinstance(source, GaugeField2):
        if not isinstance(source.group, CircleGroup):
            raise ModelLevelUnsupported("windings need the circle model", source.xmod.name)
        bad = validate_field2(source)
        if bad:
            raise InvalidData(f"field is not fake-flat: {bad[0].message}", bad[0].where)
        return {t: Fraction(source.faces[t]) for t in source.base.triangles}
    if not isinstance(source.model.group, CircleGroup):
        raise ModelLevelUnsupported("windings need the circle model", source.model.name)
    out = {}
    for t in source.base.triangles:
        val = source.values.get(NestedPair(t, t[:2]))
        if val is None or (t[0], t[1]) not in val.cells:
            raise InvalidData(f"no level-1 value for the triangle {list(t)}", t)
        # the cell sweeps v→t0→t1 back onto v→t1 through t, i.e. minus the face lift
        out[t] = -val.cells[(t[0], t[1])].cell
    return out


def circle_chern_number(source: ELGF | GaugeField2) -> int:
    base = source.base
    eps = surface_orientation(base)
    w = triangle_windings(source)
    total = sum((eps[t] * w[t] for t in base.triangles), Fraction(0))
    if total.denominator != 1:
        raise InvalidData(f"total winding {total} is not an integer; the level-1 data is incoherent", total)
    return int(total)


def classify_transitions(ts: TransitionSystem, budget: int | None = None) -> BundleClass:
    """Čech class of vertex transition data for a finite structure group.

    Relabelings are per-piece gauge transforms constant on each connected
    component of the piece (for a discrete group a transform must be constant
    along edges). The canonical label is the lexicographically least
    transition vector in the orbit.
    """
    cover, G = ts.cover, ts.group
    slots = []
    for i, piece in enumerate(cover.pieces):
        for comp in piece.components():
            slots.append((i, comp))
    overlaps = cover.overlaps()
    positions = [(i, j, v) for i, j in overlaps for v in cover.intersection(i, j).vertices]
    Budget(budget).require(G.order ** len(slots) * max(1, len(positions)), "coboundary search")
    elems = list(G.elements())

    def vector(us: dict) -> tuple:
        return tuple(G.mul(G.mul(us[i][v], ts.value(i, j, v)), G.inv(us[j][v])) for i, j, v in positions)

    from itertools import product

    best = None
    for choice in product(elems, repeat=len(slots)):
        us: dict[int, dict] = {i: {} for i in range(len(cover.pieces))}
        for (i, comp), g in zip(slots, choice):
            for v in comp:
                us[i][v] = g
        vec = vector(us)
        if best is None or vec < best:
            best = vec
    ident = tuple(G.identity for _ in positions)
    trivial = best == ident
    text = ",".join(f"{cover.names[i]}{cover.names[j]}@{v}={G.format(g)}" for (i, j, v), g in zip(positions, best or ()))
    return BundleClass("trivial" if trivial else f"class[{text}]", trivial, text)


def gauge_transitions(ts: TransitionSystem, us: list[GaugeTransform]) -> TransitionSystem:
    return transform_transitions(ts, us)


def classify_bundle(source: TransitionSystem | ELGF | GaugeField2, budget: int | None = None) -> BundleClass:
    if isinstance(source, TransitionSystem):
        return classify_transitions(source, budget)
    k = circle_chern_number(source)
    return BundleClass(k, k == 0, f"total winding {k}")


# ------------------------------------------------------- parallel transport


@dataclass(frozen=True)
class FiberHomotopyData:
    anchor: Any
    element: Any
    level: int = 0


def parallel_transport(A: GaugeField, path: EdgeWord | PastingDiagram, phi: FiberHomotopyData) -> FiberHomotopyData:
    """φ at the target is φ ⊙ A(path): right multiplication by the field's value."""
    model = A.model
    if isinstance(path, EdgeWord):
        if phi.anchor != path.source:
            raise AnchorMismatch(f"fiber datum sits at {phi.anchor}, path starts at {path.source}", phi.anchor)
        value = holonomy(A, path)
        if phi.level == 0:
            return FiberHomotopyData(path.target, model.mul(phi.element, value), 0)
        if phi.level == 1:
            return FiberHomotopyData(path.target, model.hcompose(phi.element, model.lift(value)), 1)
        raise ModelLevelUnsupported(f"fiber data of level {phi.level} is not supported", phi.level)
    if not isinstance(A, GaugeField2):
        raise ModelLevelUnsupported("transport along a globe needs a field with triangle labels", None)
    from .field import surface_transport

    if phi.anchor != path.source_word.source:
        raise AnchorMismatch(f"fiber datum sits at {phi.anchor}, globe starts at {path.source_word.source}", phi.anchor)
    if phi.level != 0:
        raise ModelLevelUnsupported("a level-1 datum transported along a globe would need level-2 content", phi.level)
    value = surface_transport(A, path)
    return FiberHomotopyData(path.target_word.target, model.hcompose(model.lift(phi.element), value), 1)


def act_right(phi: FiberHomotopyData, g: Any, model: TwoGroupModel) -> FiberHomotopyData:
    el = model.mul(phi.element, g) if phi.level == 0 else model.hcompose(phi.element, g)
    return FiberHomotopyData(phi.anchor, el, phi.level)


def act_left(g: Any, phi: FiberHomotopyData, model: TwoGroupModel) -> FiberHomotopyData:
    el = model.mul(g, phi.element) if phi.level == 0 else model.hcompose(g, phi.element)
    return FiberHomotopyData(phi.anchor, el, phi.level)


def change_trivialization(phi: FiberHomotopyData, u: GaugeTransform, model: TwoGroupModel) -> FiberHomotopyData:
    """Coordinates in the trivialization changed by u: φ' = φ ⊙ u(anchor)⁻¹."""
    g = model.inv(u.vertices[phi.anchor])
    return act_right(phi, g if phi.level == 0 else model.lift(g), model)
