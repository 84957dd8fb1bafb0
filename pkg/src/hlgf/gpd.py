"""Edge words (free groupoid on the 1-skeleton) and pasting diagrams.

A letter is a pair ``(edge, sign)`` with ``edge`` an ascending vertex pair and
``sign`` +1 for traversal along the canonical direction, −1 against it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .complex import SimplicialComplex, Vertex
from .errors import BoundaryMismatch, EdgeNotInComplex, EndpointMismatch, NotComposable
from .report import Violation

Letter = tuple  # ((a, b), ±1)


def letter_ends(letter: Letter) -> tuple[Vertex, Vertex]:
    (a, b), s = letter
    return (a, b) if s == 1 else (b, a)


def invert_letter(letter: Letter) -> Letter:
    return (letter[0], -letter[1])


@dataclass(frozen=True)
class EdgeWord:
    """A word in the free groupoid; construction does not check composability."""

    base: SimplicialComplex = field(repr=False)
    source: Vertex
    target: Vertex
    letters: tuple = ()

    @classmethod
    def empty(cls, base: SimplicialComplex, v: Vertex) -> "EdgeWord":
        return cls(base, v, v, ())

    @classmethod
    def path(cls, base: SimplicialComplex, vertices: Sequence[Vertex]) -> "EdgeWord":
        """The word visiting ``vertices`` in order along edges of ``base``."""
        if not vertices:
            raise NotComposable("a path needs at least one vertex")
        letters = []
        for x, y in zip(vertices, vertices[1:]):
            e, s = base.canonical_edge(x, y)
            if e not in base.simplices:
                raise EdgeNotInComplex(f"{x}-{y} is not an edge", e)
            letters.append((e, s))
        return cls(base, vertices[0], vertices[-1], tuple(letters))

    @classmethod
    def from_letters(cls, base: SimplicialComplex, letters: Sequence[Letter]) -> "EdgeWord":
        if not letters:
            raise NotComposable("use EdgeWord.empty for the empty word")
        return cls(base, letter_ends(letters[0])[0], letter_ends(letters[-1])[1], tuple(letters))

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def is_closed(self) -> bool:
        return self.source == self.target

    def check(self) -> None:
        """Raise unless consecutive letters chain from source to target over base edges."""
        at = self.source
        for letter in self.letters:
            if letter[0] not in self.base.simplices or len(letter[0]) != 2:
                raise EdgeNotInComplex(f"{letter[0]} is not an edge of the base", letter[0])
            s, t = letter_ends(letter)
            if s != at:
                raise NotComposable(f"letter {format_letter(letter)} does not start at {at}", letter)
            at = t
        if at != self.target:
            raise NotComposable(f"word ends at {at}, not at its declared target {self.target}", self.target)

    def vertices(self) -> list[Vertex]:
        out = [self.source]
        for letter in self.letters:
            out.append(letter_ends(letter)[1])
        return out

    def __str__(self) -> str:
        return format_word(self)


def format_letter(letter: Letter) -> str:
    s, t = letter_ends(letter)
    return f"{s}>{t}"


def format_word(w: EdgeWord) -> str:
    if not w.letters:
        return f"<empty at {w.source}>"
    return ".".join(format_letter(x) for x in w.letters)


def parse_word(base: SimplicialComplex, literal: str) -> EdgeWord:
    """Parse ``v1>v2(.v2>v3|~)*``; ``~`` inverts the letter just before it.

    A bare vertex name denotes the empty word at that vertex. Vertex names
    used in literals must not contain ``.``, ``>`` or ``~``.
    """
    text = literal.strip()
    if not text:
        raise NotComposable("empty word literal", literal)
    if ">" not in text:
        return EdgeWord.empty(base, _vertex(base, text))
    letters: list[Letter] = []
    for chunk in text.split("."):
        tildes = len(chunk) - len(chunk.rstrip("~"))
        body = chunk.rstrip("~")
        if body.count(">") != 1:
            raise NotComposable(f"malformed letter {chunk!r}", chunk)
        x, y = (_vertex(base, part) for part in body.split(">"))
        e, s = base.canonical_edge(x, y)
        if e not in base.simplices:
            raise EdgeNotInComplex(f"{x}-{y} is not an edge", e)
        if tildes % 2:
            s = -s
        letters.append((e, s))
    w = EdgeWord.from_letters(base, letters)
    w.check()
    return w


def _vertex(base: SimplicialComplex, name: str) -> Vertex:
    name = name.strip()
    for v in base.vertex_ids:
        if str(v) == name:
            return v
    raise EdgeNotInComplex(f"unknown vertex {name!r}", name)


def reduce_word(w: EdgeWord) -> EdgeWord:
    """Cancel adjacent inverse letter pairs with a stack (the reduced form is unique)."""
    w.check()
    stack: list[Letter] = []
    for letter in w.letters:
        if stack and stack[-1] == invert_letter(letter):
            stack.pop()
        else:
            stack.append(letter)
    return EdgeWord(w.base, w.source, w.target, tuple(stack))


def is_reduced(w: EdgeWord) -> bool:
    return all(w.letters[i + 1] != invert_letter(w.letters[i]) for i in range(len(w.letters) - 1))


def compose_words(u: EdgeWord, w: EdgeWord) -> EdgeWord:
    if u.target != w.source:
        raise EndpointMismatch(f"cannot compose a word ending at {u.target} with one starting at {w.source}", (u.target, w.source))
    return reduce_word(EdgeWord(u.base, u.source, w.target, u.letters + w.letters))


def concat_words(*words: EdgeWord) -> EdgeWord:
    """Unreduced concatenation (endpoints checked)."""
    out = words[0]
    for w in words[1:]:
        if out.target != w.source:
            raise EndpointMismatch(f"cannot concatenate at {out.target} / {w.source}", (out.target, w.source))
        out = EdgeWord(out.base, out.source, w.target, out.letters + w.letters)
    return out


def invert_word(w: EdgeWord) -> EdgeWord:
    return reduce_word(EdgeWord(w.base, w.target, w.source, tuple(invert_letter(x) for x in reversed(w.letters))))


def words_equal(u: EdgeWord, w: EdgeWord) -> bool:
    """Equality as morphisms of the free groupoid."""
    a, b = reduce_word(u), reduce_word(w)
    return (a.source, a.target, a.letters) == (b.source, b.target, b.letters)


# ------------------------------------------------------------ pasting


@dataclass(frozen=True)
class Move:
    """Whiskered substitution across triangle t = [a, b, c].

    ``expand`` rewrites ``left · [a,c] · right`` into ``left · [a,b][b,c] · right``;
    ``contract`` is the reverse. ``left`` ends at a and ``right`` starts at c.
    """

    triangle: tuple
    direction: str
    left: EdgeWord
    right: EdgeWord

    def long_word(self) -> EdgeWord:
        a, _, c = self.triangle
        return EdgeWord(self.left.base, a, c, (((a, c), 1),))

    def short_word(self) -> EdgeWord:
        a, b, c = self.triangle
        return EdgeWord(self.left.base, a, c, (((a, b), 1), ((b, c), 1)))

    def before_after(self) -> tuple[EdgeWord, EdgeWord]:
        long, short = self.long_word(), self.short_word()
        if self.direction == "expand":
            mid_in, mid_out = long, short
        elif self.direction == "contract":
            mid_in, mid_out = short, long
        else:
            raise BoundaryMismatch(f"unknown move direction {self.direction!r}", self.direction)
        return (reduce_word(concat_words(self.left, mid_in, self.right)), reduce_word(concat_words(self.left, mid_out, self.right)))

    def inverse(self) -> "Move":
        return Move(self.triangle, "contract" if self.direction == "expand" else "expand", self.left, self.right)


def make_move(base: SimplicialComplex, triangle: Sequence[Vertex], direction: str, left: EdgeWord | None = None, right: EdgeWord | None = None) -> Move:
    t = base.ordered(triangle)
    a, c = t[0], t[2]
    return Move(t, direction, left if left is not None else EdgeWord.empty(base, a), right if right is not None else EdgeWord.empty(base, c))


def apply_move(word: EdgeWord, move: Move) -> EdgeWord:
    before, after = move.before_after()
    if not words_equal(word, before):
        raise BoundaryMismatch(f"move across {list(move.triangle)} expects {format_word(before)}, found {format_word(word)}", move.triangle)
    return after


@dataclass(frozen=True)
class PastingDiagram:
    base: SimplicialComplex = field(repr=False)
    source_word: EdgeWord
    target_word: EdgeWord
    moves: tuple = ()

    @classmethod
    def identity(cls, w: EdgeWord) -> "PastingDiagram":
        r = reduce_word(w)
        return cls(w.base, r, r, ())

    @classmethod
    def from_moves(cls, source: EdgeWord, moves: Iterable[Move]) -> "PastingDiagram":
        """Build a diagram by running the moves, computing the target word."""
        mv = tuple(moves)
        cur = reduce_word(source)
        for m in mv:
            cur = apply_move(cur, m)
        return cls(source.base, reduce_word(source), cur, mv)


def pasting_validate(p: PastingDiagram) -> list[Violation]:
    out: list[Violation] = []
    try:
        cur = reduce_word(p.source_word)
    except (NotComposable, EdgeNotInComplex) as exc:
        return [Violation("source-word", None, str(exc))]
    for k, m in enumerate(p.moves):
        t = m.triangle
        if len(t) != 3 or t not in p.base.simplices:
            out.append(Violation("triangle", list(t), f"move {k}: {list(t)} is not a triangle of the base"))
            return out
        if m.left.target != t[0] or m.right.source != t[2]:
            out.append(Violation("context", k, f"move {k}: contexts do not meet the triangle endpoints"))
            return out
        try:
            cur = apply_move(cur, m)
        except (BoundaryMismatch, NotComposable, EdgeNotInComplex, EndpointMismatch) as exc:
            out.append(Violation("rewrite", k, f"move {k}: {exc}"))
            return out
    try:
        ok = words_equal(cur, p.target_word)
    except (NotComposable, EdgeNotInComplex) as exc:
        return out + [Violation("target-word", None, str(exc))]
    if not ok:
        out.append(Violation("target", None, f"moves end at {format_word(cur)}, not at {format_word(p.target_word)}"))
    return out


def _whisker_move(m: Move, left: EdgeWord | None, right: EdgeWord | None) -> Move:
    new_left = concat_words(left, m.left) if left is not None else m.left
    new_right = concat_words(m.right, right) if right is not None else m.right
    return Move(m.triangle, m.direction, new_left, new_right)


def whisker(p: PastingDiagram, left: EdgeWord | None = None, right: EdgeWord | None = None) -> PastingDiagram:
    """Pre- and post-compose every word of ``p`` with fixed paths."""
    moves = tuple(_whisker_move(m, left, right) for m in p.moves)
    src = p.source_word
    tgt = p.target_word
    if left is not None:
        src, tgt = compose_words(left, src), compose_words(left, tgt)
    if right is not None:
        src, tgt = compose_words(src, right), compose_words(tgt, right)
    return PastingDiagram(p.base, src, tgt, moves)


def pasting_compose(p: PastingDiagram, q: PastingDiagram, direction: str) -> PastingDiagram:
    """Vertical: p then q. Horizontal: p's paths followed by q's paths.

    The horizontal composite runs p whiskered on the right by q's source,
    then q whiskered on the left by p's target.
    """
    for d in (p, q):
        bad = pasting_validate(d)
        if bad:
            raise BoundaryMismatch(f"invalid pasting diagram: {bad[0].message}", bad)
    if direction == "vertical":
        if not words_equal(p.target_word, q.source_word):
            raise BoundaryMismatch("vertical composite needs target_word(p) = source_word(q)", (str(p.target_word), str(q.source_word)))
        return PastingDiagram(p.base, p.source_word, q.target_word, p.moves + q.moves)
    if direction == "horizontal":
        if p.source_word.target != q.source_word.source:
            raise BoundaryMismatch("horizontal composite needs p to end where q starts", (p.source_word.target, q.source_word.source))
        first = whisker(p, right=q.source_word)
        second = whisker(q, left=p.target_word)
        return PastingDiagram(p.base, first.source_word, second.target_word, first.moves + second.moves)
    raise BoundaryMismatch(f"unknown direction {direction!r}", direction)


def pasting_invert(p: PastingDiagram) -> PastingDiagram:
    return PastingDiagram(p.base, p.target_word, p.source_word, tuple(m.inverse() for m in reversed(p.moves)))
