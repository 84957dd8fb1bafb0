"""Finite ordered simplicial complexes, covers, subdivision and gluing.

A complex stores a global total order on its vertex identifiers and a set of
simplices, each written as a tuple of vertices ascending in that order. The
maximal vertex of a simplex is therefore its last entry.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Hashable, Iterable, Iterator, NamedTuple, Sequence

from .errors import SharedNotSubcomplex
from .report import Violation

Vertex = Hashable
Simplex = tuple
Edge = tuple


class SimplicialComplex:
    """An immutable finite complex with a global vertex order.

    Use :meth:`from_simplices` to build a complex from (possibly maximal-only)
    simplex lists; the plain constructor stores its input verbatim so that
    :func:`validate_complex` can inspect malformed data.
    """

    __slots__ = ("vertex_ids", "simplices", "_pos", "_by_dim", "_hash")

    def __init__(self, vertex_ids: Sequence[Vertex], simplices: Iterable[Sequence[Vertex]]) -> None:
        self.vertex_ids: tuple = tuple(vertex_ids)
        self.simplices: frozenset = frozenset(tuple(s) for s in simplices)
        self._pos = {v: i for i, v in enumerate(self.vertex_ids)}
        self._by_dim: dict[int, list] | None = None
        self._hash: int | None = None

    @classmethod
    def from_simplices(
        cls, vertex_ids: Sequence[Vertex], simplices: Iterable[Sequence[Vertex]] = ()
    ) -> "SimplicialComplex":
        """Build the downward closure of ``simplices`` (plus every listed vertex)."""
        pos = {v: i for i, v in enumerate(vertex_ids)}
        closed: set[tuple] = {(v,) for v in vertex_ids}
        for s in simplices:
            for v in s:
                if v not in pos:
                    raise KeyError(f"unknown vertex {v!r} in simplex {list(s)}")
            ordered = tuple(sorted(set(s), key=pos.__getitem__))
            for r in range(1, len(ordered) + 1):
                closed.update(combinations(ordered, r))
        return cls(vertex_ids, closed)

    @classmethod
    def empty(cls) -> "SimplicialComplex":
        return cls((), ())

    # ------------------------------------------------------------------ order
    def position(self, v: Vertex) -> int:
        return self._pos[v]

    def key(self, s: Sequence[Vertex]) -> tuple[int, tuple[int, ...]]:
        """Sort key: by dimension, then lexicographically by vertex position."""
        return (len(s), tuple(self._pos[v] for v in s))

    def ordered(self, vertices: Iterable[Vertex]) -> tuple:
        return tuple(sorted(set(vertices), key=self._pos.__getitem__))

    def canonical_edge(self, x: Vertex, y: Vertex) -> tuple[Edge, int]:
        """Return the ascending edge joining x and y plus the traversal sign of x→y."""
        if self._pos[x] < self._pos[y]:
            return (x, y), 1
        return (y, x), -1

    # ------------------------------------------------------------ structure
    @property
    def dim(self) -> int:
        if not self.simplices:
            return -1
        return max(len(s) for s in self.simplices) - 1

    def _dims(self) -> dict[int, list]:
        if self._by_dim is None:
            by: dict[int, list] = {}
            for s in self.simplices:
                by.setdefault(len(s) - 1, []).append(s)
            for k in by:
                by[k].sort(key=self.key)
            self._by_dim = by
        return self._by_dim

    def simplices_of_dim(self, k: int) -> list[tuple]:
        return list(self._dims().get(k, []))

    @property
    def vertices(self) -> list[Vertex]:
        return [s[0] for s in self.simplices_of_dim(0)]

    @property
    def edges(self) -> list[Edge]:
        return self.simplices_of_dim(1)

    @property
    def triangles(self) -> list[tuple]:
        return self.simplices_of_dim(2)

    def all_simplices(self) -> list[tuple]:
        return sorted(self.simplices, key=self.key)

    def __contains__(self, s: object) -> bool:
        return s in self.simplices

    def max_vertex(self, s: Sequence[Vertex]) -> Vertex:
        return max(s, key=self._pos.__getitem__)

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return self.simplices <= other.simplices

    def subcomplex(self, simplices: Iterable[Sequence[Vertex]]) -> "SimplicialComplex":
        """Closure of the given simplices, keeping only the vertices it uses."""
        closed: set[tuple] = set()
        for s in simplices:
            ordered = self.ordered(s)
            if ordered not in self.simplices:
                raise KeyError(f"{list(s)} is not a simplex of the parent complex")
            for r in range(1, len(ordered) + 1):
                closed.update(combinations(ordered, r))
        used = {v for s in closed for v in s}
        return SimplicialComplex([v for v in self.vertex_ids if v in used], closed)

    def intersection(self, other: "SimplicialComplex") -> "SimplicialComplex":
        common = self.simplices & other.simplices
        used = {v for s in common for v in s}
        return SimplicialComplex([v for v in self.vertex_ids if v in used], common)

    def components(self) -> list[list[Vertex]]:
        """Connected components of the 1-skeleton, each sorted by vertex order."""
        parent = {v: v for v in self.vertices}

        def find(v: Vertex) -> Vertex:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for a, b in self.edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
        groups: dict[Vertex, list] = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values(), key=lambda g: self._pos[g[0]])

    # ------------------------------------------------------------ dunder
    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.vertex_ids == other.vertex_ids and self.simplices == other.simplices

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vertex_ids, self.simplices))
        return self._hash

    def __repr__(self) -> str:
        counts = [len(self.simplices_of_dim(k)) for k in range(self.dim + 1)]
        return f"SimplicialComplex(vertices={len(self.vertex_ids)}, f-vector={counts})"

    def to_json(self) -> dict[str, Any]:
        return {
            "vertices": list(self.vertex_ids),
            "simplices": [list(s) for s in self.all_simplices()],
        }


def validate_complex(c: SimplicialComplex) -> list[Violation]:
    """Report every violated complex invariant, naming the offending simplex."""
    out: list[Violation] = []
    seen: set = set()
    for v in c.vertex_ids:
        if v in seen:
            out.append(Violation("duplicate-vertex", v, f"vertex id {v!r} listed twice"))
        seen.add(v)
    pos = c._pos
    good: set[tuple] = set()
    for s in sorted(c.simplices, key=lambda s: (len(s), [str(v) for v in s])):
        if len(s) == 0:
            out.append(Violation("empty-simplex", list(s), "empty simplex"))
            continue
        unknown = [v for v in s if v not in pos]
        if unknown:
            out.append(Violation("unknown-vertex", list(s), f"simplex {list(s)} uses unknown vertices {unknown}"))
            continue
        if any(pos[s[i]] >= pos[s[i + 1]] for i in range(len(s) - 1)):
            out.append(Violation("not-ascending", list(s), f"simplex {list(s)} is not strictly ascending"))
            continue
        good.add(s)
    missing: set[tuple] = set()
    for s in good:
        for r in range(1, len(s)):
            for f in combinations(s, r):
                if f not in c.simplices:
                    missing.add(f)
    for v in c.vertex_ids:
        if (v,) not in c.simplices:
            missing.add((v,))
    for f in sorted(missing, key=c.key):
        out.append(Violation("missing-face", list(f), f"missing face {list(f)}"))
    return out


def skeleton(c: SimplicialComplex, k: int) -> SimplicialComplex:
    if k < 0:
        raise ValueError("skeleton dimension must be non-negative")
    return SimplicialComplex(c.vertex_ids, [s for s in c.simplices if len(s) <= k + 1])


class Subdivision(NamedTuple):
    """First barycentric subdivision with its bookkeeping maps."""

    complex: SimplicialComplex
    barycenter: dict  # original simplex -> vertex id of its barycenter
    edge_chains: dict  # original edge (a, b) -> ((edge, sign), (edge, sign)) from a to b


def barycenter_name(s: Sequence[Vertex]) -> Vertex:
    if len(s) == 1:
        return s[0]
    return "|".join(str(v) for v in s)


def barycentric_subdivide(c: SimplicialComplex) -> Subdivision:
    """Vertices are barycenters ordered by (dimension, position of the simplex).

    With this order every flag σ0 ⊊ σ1 ⊊ … is ascending, so the subdivision's
    simplices are exactly the flags written bottom-up.
    """
    originals = c.all_simplices()
    bary = {s: barycenter_name(s) for s in originals}
    if len(set(bary.values())) != len(bary):
        raise ValueError("barycenter names collide with existing vertex ids")
    faces_of: dict[tuple, list[tuple]] = {
        s: [f for r in range(1, len(s)) for f in combinations(s, r)] for s in originals
    }

    def flags(top: tuple) -> Iterator[tuple]:
        yield (top,)
        for f in faces_of[top]:
            for chain in flags(f):
                yield chain + (top,)

    simplices = {tuple(bary[s] for s in chain) for top in originals for chain in flags(top)}
    sd = SimplicialComplex([bary[s] for s in originals], simplices)
    chains = {}
    for a, b in c.edges:
        m = bary[(a, b)]
        chains[(a, b)] = (((a, m), 1), ((b, m), -1))
    return Subdivision(sd, bary, chains)


def _merge_orders(o1: Sequence[Vertex], o2: Sequence[Vertex]) -> list[Vertex]:
    """Topologically merge two vertex orders; ties broken by identifier text."""
    succ: dict[Vertex, set] = {}
    indeg: dict[Vertex, int] = {}
    for order in (o1, o2):
        for v in order:
            succ.setdefault(v, set())
            indeg.setdefault(v, 0)
        for a, b in zip(order, order[1:]):
            if b not in succ[a]:
                succ[a].add(b)
                indeg[b] += 1
    heap = [(str(v), i, v) for i, v in enumerate(indeg) if indeg[v] == 0]
    heapq.heapify(heap)
    out: list[Vertex] = []
    while heap:
        _, _, v = heapq.heappop(heap)
        out.append(v)
        for w in sorted(succ[v], key=str):
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, (str(w), len(out), w))
    if len(out) != len(indeg):
        raise SharedNotSubcomplex("vertex orders of the two complexes are inconsistent")
    return out


def glue(c1: SimplicialComplex, c2: SimplicialComplex, shared: SimplicialComplex) -> SimplicialComplex:
    """Pushout of c1 ← shared → c2, identifying simplices by vertex identifier."""
    for name, c in (("first", c1), ("second", c2)):
        if not shared.is_subcomplex_of(c):
            extra = sorted(shared.simplices - c.simplices, key=shared.key)
            raise SharedNotSubcomplex(f"shared complex is not a subcomplex of the {name} complex", extra[0])
    clash = (set(c1.vertex_ids) & set(c2.vertex_ids)) - set(shared.vertex_ids)
    if clash or not (c1.simplices & c2.simplices) <= shared.simplices:
        bad = sorted(map(str, clash)) or sorted(map(str, (c1.simplices & c2.simplices) - shared.simplices))
        raise SharedNotSubcomplex("the complexes overlap outside the shared subcomplex", bad)
    order = _merge_orders(c1.vertex_ids, c2.vertex_ids)
    return SimplicialComplex(order, c1.simplices | c2.simplices)


@dataclass(frozen=True, order=False)
class NestedPair:
    """An admissible pair: ν a proper face of τ avoiding τ's maximal vertex."""

    tau: tuple
    nu: tuple

    @property
    def level(self) -> int:
        return len(self.nu) - 1

    def __str__(self) -> str:
        return f"({'-'.join(map(str, self.tau))} | {'-'.join(map(str, self.nu))})"


def is_admissible(tau: Sequence[Vertex], nu: Sequence[Vertex]) -> bool:
    """τ and ν given ascending; ν must be nonempty, proper and avoid τ[-1]."""
    return 0 < len(nu) < len(tau) and set(nu) <= set(tau) and tau[-1] not in nu


def admissible_nested_pairs(c: SimplicialComplex) -> list[NestedPair]:
    """All admissible pairs, sorted by level, then τ, then ν."""
    pairs = []
    for tau in c.simplices:
        front = tau[:-1]
        for r in range(1, len(front) + 1):
            for nu in combinations(front, r):
                pairs.append(NestedPair(tau, nu))
    pairs.sort(key=lambda p: (p.level, c.key(p.tau), c.key(p.nu)))
    return pairs


def pairs_by_level(c: SimplicialComplex) -> dict[int, list[NestedPair]]:
    out: dict[int, list[NestedPair]] = {}
    for p in admissible_nested_pairs(c):
        out.setdefault(p.level, []).append(p)
    return out


def restriction_faces(pair: NestedPair) -> list[tuple[str, NestedPair]]:
    """Pairs whose path-simplex sits on the boundary of ``pair``'s.

    Two families occur. ``"sub"``: (τ, φ) for φ ⊊ ν avoiding max ν, where the
    family over φ is the restriction of the family over ν. ``"super"``: (φ, ν)
    for ν ⊊ φ ⊊ τ with φ avoiding max τ and ν avoiding max φ.
    """
    tau, nu = pair.tau, pair.nu
    out: list[tuple[str, NestedPair]] = []
    head = nu[:-1]
    for r in range(1, len(head) + 1):
        for phi in combinations(head, r):
            out.append(("sub", NestedPair(tau, phi)))
    rest = [v for v in tau[:-1] if v not in nu]
    for r in range(1, len(rest) + 1):
        for extra in combinations(rest, r):
            phi = tuple(v for v in tau if v in nu or v in extra)
            if phi[-1] not in nu:
                out.append(("super", NestedPair(phi, nu)))
    return out


def path_simplex_boundary(pair: NestedPair) -> list[NestedPair]:
    """Codimension-one sub-pairs (τ, ρ) with ρ a facet of ν."""
    if pair.level == 0:
        return []
    return [NestedPair(pair.tau, rho) for rho in combinations(pair.nu, len(pair.nu) - 1)]


def is_collapsible(c: SimplicialComplex) -> tuple[bool, list[tuple[tuple, tuple]]]:
    """Greedy elementary collapses; ``True`` certifies contractibility.

    Returns the verdict and the sequence of (free face, coface) pairs removed.
    """
    alive = set(c.simplices)
    if not alive:
        return False, []
    cofaces: dict[tuple, set] = {s: set() for s in alive}
    for s in alive:
        if len(s) > 1:
            for f in combinations(s, len(s) - 1):
                cofaces[f].add(s)
    steps: list[tuple[tuple, tuple]] = []
    while True:
        free = [s for s in alive if len(cofaces[s]) == 1]
        if not free:
            break
        free.sort(key=lambda s: (-len(s), c.key(s)))
        s = free[0]
        (t,) = cofaces[s]
        steps.append((s, t))
        for x in (t, s):
            alive.discard(x)
            if len(x) > 1:
                for f in combinations(x, len(x) - 1):
                    cofaces[f].discard(x)
    return len(alive) == 1, steps


@dataclass(frozen=True)
class Cover:
    """A finite cover of ``parent`` by named subcomplexes."""

    parent: SimplicialComplex
    pieces: tuple
    names: tuple = field(default=())

    def __post_init__(self) -> None:
        if not self.names:
            object.__setattr__(self, "names", tuple(f"X{i + 1}" for i in range(len(self.pieces))))
        if len(self.names) != len(self.pieces):
            raise ValueError("one name per piece is required")

    def index(self, name: str) -> int:
        return self.names.index(name)

    def intersection(self, i: int, j: int) -> SimplicialComplex:
        return self.pieces[i].intersection(self.pieces[j])

    def overlaps(self) -> list[tuple[int, int]]:
        """Ordered index pairs i < j whose intersection is nonempty."""
        n = len(self.pieces)
        return [(i, j) for i in range(n) for j in range(i + 1, n) if self.intersection(i, j).simplices]

    def triple_overlap_vertices(self, i: int, j: int, k: int) -> list[Vertex]:
        common = set(self.pieces[i].vertex_ids) & set(self.pieces[j].vertex_ids) & set(self.pieces[k].vertex_ids)
        return [v for v in self.parent.vertex_ids if v in common]

    def goodness(self) -> dict[str, bool]:
        """Collapsibility certificate for every piece and nonempty intersection."""
        cert = {name: is_collapsible(p)[0] for name, p in zip(self.names, self.pieces)}
        for i, j in self.overlaps():
            cert[f"{self.names[i]}&{self.names[j]}"] = is_collapsible(self.intersection(i, j))[0]
        return cert

    @property
    def is_good(self) -> bool:
        return all(self.goodness().values())


def validate_cover(cover: Cover) -> list[Violation]:
    out: list[Violation] = []
    union: set = set()
    for name, p in zip(cover.names, cover.pieces):
        if not p.is_subcomplex_of(cover.parent):
            out.append(Violation("not-subcomplex", name, f"piece {name} is not a subcomplex of the parent"))
        for v in validate_complex(p):
            out.append(Violation("piece-invalid", name, f"piece {name}: {v.message}"))
        union |= p.simplices
    for s in sorted(cover.parent.simplices - union, key=cover.parent.key):
        out.append(Violation("uncovered", list(s), f"simplex {list(s)} is not covered by any piece"))
    return out
