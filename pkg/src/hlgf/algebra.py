"""Groups, crossed modules and leveled homotopy-group models.

Finite groups are stored as Cayley tables over the element indices
``0..n-1``; ``labels`` gives the printable name of each index. For cyclic
groups the index is the residue itself, so ``Z_n`` arithmetic reads naturally.

Two infinite groups are provided for the circle model: rationals modulo 1
(angles) and the rational line (displacements). They share the small
duck-typed interface used everywhere else: ``identity``, ``mul``, ``inv``,
``contains``, ``conjugacy_class``, ``parse`` and ``format``, plus
``is_finite``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Any, Callable, Iterator, Sequence

from .errors import BoundaryMismatch, InvalidData, ModelNotFinite
from .report import Violation

Element = Any


class FiniteGroup:
    """A finite group given by its multiplication table on indices."""

    is_finite = True

    def __init__(self, labels: Sequence[str], table: Sequence[Sequence[int]], name: str = "") -> None:
        self.labels: tuple[str, ...] = tuple(str(x) for x in labels)
        self.table: tuple[tuple[int, ...], ...] = tuple(tuple(row) for row in table)
        self.name = name or f"group of order {len(self.labels)}"
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self._identity = self._find_identity()
        self._inverse = self._find_inverses()
        self._classes: dict[int, frozenset[int]] | None = None

    # --------------------------------------------------------------- basics
    @property
    def order(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def elements(self) -> range:
        return range(len(self.labels))

    @property
    def identity(self) -> int:
        if self._identity is None:
            raise InvalidData(f"{self.name} has no identity element")
        return self._identity

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        inv = self._inverse[a]
        if inv is None:
            raise InvalidData(f"element {self.labels[a]} has no inverse", self.labels[a])
        return inv

    def prod(self, xs: Sequence[int]) -> int:
        acc = self.identity
        for x in xs:
            acc = self.table[acc][x]
        return acc

    def contains(self, a: Any) -> bool:
        return isinstance(a, int) and 0 <= a < len(self.labels)

    def parse(self, text: Any) -> int:
        key = str(text)
        if key not in self._index:
            raise InvalidData(f"unknown element {key!r} of {self.name}", key)
        return self._index[key]

    def format(self, a: int) -> str:
        return self.labels[a]

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteGroup) and self.labels == other.labels and self.table == other.table

    def __hash__(self) -> int:
        return hash((self.labels, self.table))

    # ------------------------------------------------------- derived data
    def _find_identity(self) -> int | None:
        n = len(self.labels)
        for e in range(n):
            try:
                if all(self.table[e][x] == x and self.table[x][e] == x for x in range(n)):
                    return e
            except IndexError:
                return None
        return None

    def _find_inverses(self) -> list[int | None]:
        n = len(self.labels)
        e = self._identity
        out: list[int | None] = [None] * n
        if e is None:
            return out
        for a in range(n):
            for b in range(n):
                try:
                    if self.table[a][b] == e and self.table[b][a] == e:
                        out[a] = b
                        break
                except IndexError:
                    break
        return out

    def conjugacy_class(self, a: int) -> frozenset[int]:
        if self._classes is None:
            classes: dict[int, frozenset[int]] = {}
            for x in self.elements():
                if x not in classes:
                    cls = frozenset(self.mul(self.mul(g, x), self.inv(g)) for g in self.elements())
                    for y in cls:
                        classes[y] = cls
            self._classes = classes
        return self._classes[a]

    def conjugacy_classes(self) -> list[frozenset[int]]:
        seen: list[frozenset[int]] = []
        for x in self.elements():
            c = self.conjugacy_class(x)
            if c not in seen:
                seen.append(c)
        return seen

    def class_label(self, cls: frozenset[int]) -> str:
        return "{" + ", ".join(self.labels[x] for x in sorted(cls)) + "}"

    def is_abelian(self) -> bool:
        return all(self.mul(a, b) == self.mul(b, a) for a in self.elements() for b in self.elements())

    def to_json(self) -> dict[str, Any]:
        return {"elements": list(self.labels), "table": [[self.labels[x] for x in row] for row in self.table]}


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group order must be positive")
    return FiniteGroup([str(i) for i in range(n)], [[(a + b) % n for b in range(n)] for a in range(n)], f"Z{n}")


def symmetric_group(n: int) -> FiniteGroup:
    """S_n on {0..n-1}; permutations in one-line notation, composed left to right.

    The product ``p * q`` means "apply p, then q", matching the left-to-right
    convention for paths.
    """
    perms = sorted(permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(q[p[x]] for x in range(n))] for q in perms] for p in perms]
    return FiniteGroup(["".join(map(str, p)) for p in perms], table, f"S{n}")


def trivial_group() -> FiniteGroup:
    return FiniteGroup(["1"], [[0]], "1")


def group_from_table(elements: Sequence[str], table: Sequence[Sequence[str]], name: str = "") -> FiniteGroup:
    idx = {str(e): i for i, e in enumerate(elements)}
    rows = []
    for r, row in enumerate(table):
        out = []
        for x in row:
            if str(x) not in idx:
                raise InvalidData(f"table entry {x!r} in row {r} is not an element", x)
            out.append(idx[str(x)])
        rows.append(out)
    return FiniteGroup([str(e) for e in elements], rows, name)


def validate_group(g: FiniteGroup) -> list[Violation]:
    out: list[Violation] = []
    n = g.order
    if len(g.table) != n or any(len(row) != n for row in g.table):
        out.append(Violation("table-shape", None, "multiplication table is not n x n"))
        return out
    for a, row in enumerate(g.table):
        for b, c in enumerate(row):
            if not 0 <= c < n:
                out.append(Violation("closure", (g.labels[a], g.labels[b]), f"{g.labels[a]}*{g.labels[b]} is not an element"))
    if out:
        return out
    for a, b, c in product(range(n), repeat=3):
        if g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)):
            trip = (g.labels[a], g.labels[b], g.labels[c])
            out.append(Violation("associativity", trip, f"associativity fails at {trip}"))
    if g._identity is None:
        out.append(Violation("identity", None, "no two-sided identity"))
        return out
    for a in range(n):
        if g._inverse[a] is None:
            out.append(Violation("inverse", g.labels[a], f"{g.labels[a]} has no two-sided inverse"))
    return out


# ------------------------------------------------------------ circle groups


class CircleGroup:
    """Rational angles modulo 1 under addition."""

    is_finite = False
    name = "Q/Z"
    identity = Fraction(0)

    def mul(self, a: Fraction, b: Fraction) -> Fraction:
        return (a + b) % 1

    def inv(self, a: Fraction) -> Fraction:
        return (-a) % 1

    def prod(self, xs: Sequence[Fraction]) -> Fraction:
        return sum(xs, Fraction(0)) % 1

    def contains(self, a: Any) -> bool:
        return isinstance(a, (int, Fraction)) and 0 <= a < 1

    def conjugacy_class(self, a: Fraction) -> frozenset:
        return frozenset([a])

    def class_label(self, cls: frozenset) -> str:
        return "{" + ", ".join(str(x) for x in sorted(cls)) + "}"

    def parse(self, text: Any) -> Fraction:
        try:
            return Fraction(str(text)) % 1
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidData(f"not a rational angle: {text!r}", text) from exc

    def format(self, a: Fraction) -> str:
        return str(a)

    def elements(self) -> Iterator:
        raise ModelNotFinite("the circle group is infinite", self.name)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CircleGroup)

    def __hash__(self) -> int:
        return hash("CircleGroup")

    def __repr__(self) -> str:
        return "CircleGroup()"


class RationalLine:
    """The rationals under addition (displacements of lifted paths)."""

    is_finite = False
    name = "Q"
    identity = Fraction(0)

    def mul(self, a: Fraction, b: Fraction) -> Fraction:
        return a + b

    def inv(self, a: Fraction) -> Fraction:
        return -a

    def contains(self, a: Any) -> bool:
        return isinstance(a, (int, Fraction))

    def parse(self, text: Any) -> Fraction:
        try:
            return Fraction(str(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidData(f"not a rational number: {text!r}", text) from exc

    def format(self, a: Fraction) -> str:
        return str(a)

    def elements(self) -> Iterator:
        raise ModelNotFinite("the rational line is infinite", self.name)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalLine)

    def __hash__(self) -> int:
        return hash("RationalLine")


# ----------------------------------------------------------- crossed modules


class CrossedModule:
    """Crossed module ∂: H → G with a left action g ▷ h.

    ``boundary`` and ``action`` are callables on elements; finite crossed
    modules are usually built with :meth:`from_tables`.
    """

    def __init__(
        self,
        H: Any,
        G: Any,
        boundary: Callable[[Element], Element],
        action: Callable[[Element, Element], Element],
        name: str = "",
    ) -> None:
        self.H = H
        self.G = G
        self.boundary = boundary
        self.act = action
        self.name = name or f"{getattr(H, 'name', 'H')} -> {getattr(G, 'name', 'G')}"

    @property
    def is_finite(self) -> bool:
        return bool(self.H.is_finite and self.G.is_finite)

    @classmethod
    def from_tables(
        cls, H: FiniteGroup, G: FiniteGroup, boundary: Sequence[int], action: Sequence[Sequence[int]], name: str = ""
    ) -> "CrossedModule":
        btab = tuple(boundary)
        atab = tuple(tuple(row) for row in action)
        x = cls(H, G, btab.__getitem__, lambda g, h: atab[g][h], name)
        x.boundary_table = btab  # type: ignore[attr-defined]
        x.action_table = atab  # type: ignore[attr-defined]
        return x

    @classmethod
    def identity_module(cls, G: FiniteGroup) -> "CrossedModule":
        """id: G → G with the conjugation action."""
        act = [[G.mul(G.mul(g, h), G.inv(g)) for h in G.elements()] for g in G.elements()]
        return cls.from_tables(G, G, list(G.elements()), act, f"id: {G.name} -> {G.name}")

    @classmethod
    def trivial_over(cls, G: Any) -> "CrossedModule":
        """1 → G; its 2-group has only degenerate level-1 elements."""
        H = trivial_group()
        return cls(H, G, lambda h: G.identity, lambda g, h: 0, f"1 -> {getattr(G, 'name', 'G')}")

    @classmethod
    def normal_inclusion(cls, G: FiniteGroup, subgroup: Sequence[int], name: str = "") -> "CrossedModule":
        """Inclusion of a normal subgroup N ⊴ G with the conjugation action."""
        elems = sorted(subgroup, key=lambda x: (x != G.identity, x))
        pos = {g: i for i, g in enumerate(elems)}
        if any(G.mul(a, b) not in pos for a in elems for b in elems):
            raise InvalidData("subset is not closed under multiplication", [G.format(x) for x in elems])
        H = FiniteGroup([G.labels[x] for x in elems], [[pos[G.mul(a, b)] for b in elems] for a in elems])
        act = []
        for g in G.elements():
            row = []
            for h in elems:
                c = G.mul(G.mul(g, h), G.inv(g))
                if c not in pos:
                    raise InvalidData("subgroup is not normal", G.format(h))
                row.append(pos[c])
            act.append(row)
        return cls.from_tables(H, G, elems, act, name or f"N -> {G.name}")

    def elements(self) -> Iterator[tuple]:
        if not self.is_finite:
            raise ModelNotFinite(f"crossed module {self.name} is infinite", self.name)
        return product(self.G.elements(), self.H.elements())

    def __repr__(self) -> str:
        return f"CrossedModule({self.name})"


def circle_crossed_module() -> CrossedModule:
    """Q → Q/Z, reduction mod 1, trivial action: the 2-group modelling U(1) paths."""
    return CrossedModule(RationalLine(), CircleGroup(), lambda d: d % 1, lambda g, d: d, "Q -> Q/Z")


def validate_crossed_module(x: CrossedModule) -> list[Violation]:
    if not x.is_finite:
        raise ModelNotFinite("only finite crossed modules can be validated exhaustively", x.name)
    H, G, d, act = x.H, x.G, x.boundary, x.act
    out: list[Violation] = []
    for name, grp in (("H", H), ("G", G)):
        out += [Violation(f"{name}-{v.kind}", v.where, f"{name}: {v.message}") for v in validate_group(grp)]
    if out:
        return out
    hs, gs = list(H.elements()), list(G.elements())
    for a in hs:
        for b in hs:
            if d(H.mul(a, b)) != G.mul(d(a), d(b)):
                out.append(Violation("boundary-hom", (H.format(a), H.format(b)), "boundary is not multiplicative"))
    for g in gs:
        if sorted(act(g, h) for h in hs) != sorted(hs):
            out.append(Violation("action-bijective", G.format(g), f"{G.format(g)} does not act bijectively"))
        for a in hs:
            for b in hs:
                if act(g, H.mul(a, b)) != H.mul(act(g, a), act(g, b)):
                    out.append(Violation("action-auto", (G.format(g), H.format(a), H.format(b)), "action is not by automorphisms"))
    for h in hs:
        if act(G.identity, h) != h:
            out.append(Violation("action-unit", H.format(h), "identity does not act trivially"))
        for g1 in gs:
            for g2 in gs:
                if act(G.mul(g1, g2), h) != act(g1, act(g2, h)):
                    out.append(Violation("action-assoc", (G.format(g1), G.format(g2), H.format(h)), "action is not a left action"))
    for g in gs:
        for h in hs:
            if d(act(g, h)) != G.mul(G.mul(g, d(h)), G.inv(g)):
                out.append(Violation("equivariance", (G.format(g), H.format(h)), "boundary(g.h) != g boundary(h) g^-1"))
    for h in hs:
        for k in hs:
            if act(d(h), k) != H.mul(H.mul(h, k), H.inv(h)):
                out.append(Violation("peiffer", (H.format(h), H.format(k)), "boundary(h).k != h k h^-1"))
    return out


# ------------------------------------------------------------------ models


@dataclass(frozen=True)
class Globe:
    """A level-1 element (g, h): source g, target boundary(h)·g."""

    source: Any
    cell: Any


class TwoGroupModel:
    """The strict 2-group of a crossed module, viewed as a leveled model.

    Level 0 is G. Level 1 consists of globes (g, h). Levels ≥ 2 are
    degenerate: their elements are identity globes on level-1 elements and are
    represented by the underlying level-1 element.

    Compositions, for x = (g, h) and y = (g', h'):

    * ``+0`` (the internal product ⊙): (g g', h · (g ▷ h'))
    * ``+1`` (vertical, x then y, needs target(x) = g'): (g, h' · h)
    """

    max_level = 2

    def __init__(self, xmod: CrossedModule) -> None:
        self.xmod = xmod
        self.group = xmod.G
        self.cells = xmod.H

    @property
    def is_finite(self) -> bool:
        return self.xmod.is_finite

    @property
    def name(self) -> str:
        return f"2-group of {self.xmod.name}"

    # level 0 ---------------------------------------------------------
    def identity(self) -> Any:
        return self.group.identity

    def mul(self, a: Any, b: Any) -> Any:
        return self.group.mul(a, b)

    def inv(self, a: Any) -> Any:
        return self.group.inv(a)

    # level 1 ---------------------------------------------------------
    def lift(self, g: Any) -> Globe:
        return Globe(g, self.cells.identity)

    def source(self, x: Globe) -> Any:
        return x.source

    def target(self, x: Globe) -> Any:
        return self.group.mul(self.xmod.boundary(x.cell), x.source)

    def hcompose(self, x: Globe, y: Globe) -> Globe:
        G, H = self.group, self.cells
        return Globe(G.mul(x.source, y.source), H.mul(x.cell, self.xmod.act(x.source, y.cell)))

    def hinverse(self, x: Globe) -> Globe:
        gi = self.group.inv(x.source)
        return Globe(gi, self.xmod.act(gi, self.cells.inv(x.cell)))

    def vcompose(self, x: Globe, y: Globe) -> Globe:
        if self.target(x) != y.source:
            raise BoundaryMismatch(
                f"vertical composite needs target {self.target(x)!r} to equal source {y.source!r}", (x, y)
            )
        return Globe(x.source, self.cells.mul(y.cell, x.cell))

    def vinverse(self, x: Globe) -> Globe:
        return Globe(self.target(x), self.cells.inv(x.cell))

    def whisker(self, a: Any, x: Globe, b: Any) -> Globe:
        """lift(a) ⊙ x ⊙ lift(b)."""
        return self.hcompose(self.hcompose(self.lift(a), x), self.lift(b))

    # generic ----------------------------------------------------------
    def unit(self, level: int) -> Any:
        return self.identity() if level == 0 else self.lift(self.identity())

    def contains(self, level: int, x: Any) -> bool:
        if level == 0:
            return self.group.contains(x)
        return isinstance(x, Globe) and self.group.contains(x.source) and self.cells.contains(x.cell)

    def elements(self, level: int) -> Iterator[Any]:
        if not self.is_finite:
            raise ModelNotFinite(f"{self.name} is infinite", self.name)
        if level == 0:
            return iter(self.group.elements())
        return (Globe(g, h) for g in self.group.elements() for h in self.cells.elements())

    def compose(self, level: int, op: str, x: Any, y: Any) -> Any:
        """``op`` is ``"+0"`` (the internal product ⊙) or ``"+k"`` for 1 ≤ k ≤ level."""
        k = int(op.lstrip("+"))
        if level == 0:
            if k != 0:
                raise BoundaryMismatch(f"no composition {op} at level 0", op)
            return self.mul(x, y)
        if k == 0:
            return self.hcompose(x, y)
        if k > level:
            raise BoundaryMismatch(f"no composition {op} at level {level}", op)
        if k == 1:
            return self.vcompose(x, y)
        # +k for k ≥ 2 composes degenerate globes: both must be the same level-1 element
        if x != y:
            raise BoundaryMismatch(f"{op} needs matching boundaries at level {level}", (x, y))
        return x

    def inverse(self, level: int, op: str, x: Any) -> Any:
        if level == 0:
            return self.inv(x)
        k = int(op.lstrip("+"))
        if k == 0:
            return self.hinverse(x)
        if k == 1:
            return self.vinverse(x)
        return x

    def parse(self, level: int, data: Any) -> Any:
        if level == 0:
            return self.group.parse(data)
        if isinstance(data, dict):
            return Globe(self.group.parse(data["source"]), self.cells.parse(data["cell"]))
        raise InvalidData(f"level-1 element must be an object with source and cell: {data!r}", data)

    def format(self, level: int, x: Any) -> Any:
        if level == 0:
            return self.group.format(x)
        return {"source": self.group.format(x.source), "cell": self.cells.format(x.cell)}


def two_group_from_crossed_module(x: CrossedModule) -> TwoGroupModel:
    return TwoGroupModel(x)


class DiscreteModel(TwoGroupModel):
    """A finite group viewed as a model with only degenerate higher levels."""

    def __init__(self, G: FiniteGroup) -> None:
        super().__init__(CrossedModule.trivial_over(G))

    @property
    def name(self) -> str:
        return f"discrete {self.group.name}"


class CircleWindingModel(TwoGroupModel):
    """U(1) paths up to homotopy rel endpoints.

    A level-1 element is stored as ``Globe(source angle, displacement)``;
    :meth:`triple` shows it as (source, target, displacement).
    """

    def __init__(self) -> None:
        super().__init__(circle_crossed_module())

    @property
    def name(self) -> str:
        return "circle"

    def globe(self, source: Any, target: Any, displacement: Any) -> Globe:
        s, t, d = Fraction(source) % 1, Fraction(target) % 1, Fraction(displacement)
        if (s + d - t) % 1 != 0:
            raise InvalidData(f"incoherent circle globe ({s}, {t}, {d})", (s, t, d))
        return Globe(s, d)

    def triple(self, x: Globe) -> tuple[Fraction, Fraction, Fraction]:
        return (x.source, self.target(x), x.cell)


def as_model(m: Any) -> TwoGroupModel:
    """Coerce a finite group, crossed module or model into a model."""
    if isinstance(m, TwoGroupModel):
        return m
    if isinstance(m, FiniteGroup):
        return DiscreteModel(m)
    if isinstance(m, CrossedModule):
        return TwoGroupModel(m)
    if isinstance(m, CircleGroup):
        return CircleWindingModel()
    raise TypeError(f"cannot build a model from {m!r}")


def model_compose(m: TwoGroupModel, level: int, op: str, x: Any, y: Any) -> Any:
    return m.compose(level, op, x, y)
