"""Faces of the n-cube as a cubic (MR) implication algebra.

A face is stored as two bit-planes over the coordinates: ``fixed`` marks the
coordinates pinned to a sign and ``plus`` marks which of those are pinned to
``+``.  Coordinate 1 is bit 0 and is printed leftmost.

``meet`` is partial: it returns ``None`` when the two faces pin some
coordinate to opposite signs.  That is an ordinary outcome (the MR-axiom is
phrased in terms of it), so it is not an exception.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator

MINUS, PLUS, FREE = 0, 1, 2

_PARSE = {"-": MINUS, "−": MINUS, "+": PLUS, "*": FREE}
_PRINT = {MINUS: "-", PLUS: "+", FREE: "*"}


class DimensionError(ValueError):
    """Operands live in cubes of different dimension."""


class MRInvariantError(RuntimeError):
    """An identity that must hold in every MR-algebra failed to hold."""


@dataclass(frozen=True, slots=True)
class Face:
    n: int
    fixed: int
    plus: int

    def __post_init__(self) -> None:
        full = (1 << self.n) - 1
        if self.n < 0 or self.fixed & ~full or self.plus & ~self.fixed:
            raise ValueError(f"malformed face: n={self.n} fixed={self.fixed:b} plus={self.plus:b}")

    @property
    def free(self) -> int:
        return ((1 << self.n) - 1) & ~self.fixed

    @property
    def corank(self) -> int:
        return self.fixed.bit_count()

    @property
    def is_vertex(self) -> bool:
        return self.fixed == (1 << self.n) - 1

    def state(self, i: int) -> int:
        """State of coordinate ``i`` (0-based)."""
        if not self.fixed >> i & 1:
            return FREE
        return PLUS if self.plus >> i & 1 else MINUS

    @property
    def coords(self) -> tuple[int, ...]:
        return tuple(self.state(i) for i in range(self.n))

    def sort_key(self) -> tuple[int, ...]:
        # lexicographic, Minus < Plus < Free, coordinate 1 first
        return self.coords

    def __lt__(self, other: Face) -> bool:
        return (self.n, self.sort_key()) < (other.n, other.sort_key())

    def __str__(self) -> str:
        return "".join(_PRINT[s] for s in self.coords)

    def __repr__(self) -> str:
        return f"Face({str(self)!r})"


def parse_face(text: str) -> Face:
    """Read a face literal such as ``"+*-"`` (``"−"`` is accepted for minus)."""
    fixed = plus = 0
    for i, ch in enumerate(text.strip()):
        try:
            s = _PARSE[ch]
        except KeyError:
            raise ValueError(f"bad face literal {text!r}: unexpected {ch!r}") from None
        if s != FREE:
            fixed |= 1 << i
            if s == PLUS:
                plus |= 1 << i
    n = len(text.strip())
    if n == 0:
        raise ValueError("empty face literal")
    return Face(n, fixed, plus)


def from_coords(coords) -> Face:
    fixed = plus = 0
    for i, s in enumerate(coords):
        if s not in (MINUS, PLUS, FREE):
            raise ValueError(f"bad coordinate state {s!r}")
        if s != FREE:
            fixed |= 1 << i
            if s == PLUS:
                plus |= 1 << i
    return Face(len(coords), fixed, plus)


def top(n: int) -> Face:
    return Face(n, 0, 0)


def base_vertex(n: int) -> Face:
    """The distinguished all-minus vertex (written 0 in the interval [0, 1])."""
    return Face(n, (1 << n) - 1, 0)


def all_faces(n: int) -> list[Face]:
    """All 3^n faces of the n-cube in canonical order."""
    return [from_coords(c) for c in product((MINUS, PLUS, FREE), repeat=n)]


def iter_faces(n: int) -> Iterator[Face]:
    return iter(all_faces(n))


def vertices(n: int) -> list[Face]:
    return [from_coords(c) for c in product((MINUS, PLUS), repeat=n)]


def coatoms(n: int) -> list[Face]:
    """The 2n faces pinning exactly one coordinate, in canonical order."""
    return sorted(Face(n, 1 << i, p << i) for i in range(n) for p in (0, 1))


def _check(x: Face, y: Face) -> None:
    if x.n != y.n:
        raise DimensionError(f"faces of dimension {x.n} and {y.n}")


def leq(x: Face, y: Face) -> bool:
    """Containment order: every coordinate pinned by ``y`` is pinned the same way by ``x``."""
    _check(x, y)
    return y.fixed & ~x.fixed == 0 and (x.plus ^ y.plus) & y.fixed == 0


def lt(x: Face, y: Face) -> bool:
    return x != y and leq(x, y)


def join(x: Face, y: Face) -> Face:
    _check(x, y)
    fixed = x.fixed & y.fixed & ~(x.plus ^ y.plus)
    return Face(x.n, fixed, x.plus & fixed)


def meet(x: Face, y: Face) -> Face | None:
    """Greatest lower bound, or ``None`` when the faces are disjoint."""
    _check(x, y)
    if x.fixed & y.fixed & (x.plus ^ y.plus):
        return None
    return Face(x.n, x.fixed | y.fixed, x.plus | y.plus)


def delta(x: Face, y: Face) -> Face:
    """Reflect ``y`` through the centre of ``x``; requires ``y <= x``."""
    if not leq(y, x):
        raise ValueError(f"delta({x}, {y}) needs {y} <= {x}")
    return Face(x.n, y.fixed, y.plus ^ (y.fixed & ~x.fixed))


def antipode(x: Face) -> Face:
    return delta(top(x.n), x)


def caret(x: Face, y: Face) -> Face:
    m = meet(x, delta(join(x, y), y))
    if m is None:
        raise MRInvariantError(f"caret({x}, {y}) undefined")
    return m


def arrow(x: Face, y: Face) -> Face:
    """The derived implication ``xy = delta(1, delta(x v y, y)) v y``."""
    return join(antipode(delta(join(x, y), y)), y)


def preceq(a: Face, b: Face) -> bool:
    return leq(delta(join(a, b), a), b)


def simeq(a: Face, b: Face) -> bool:
    return delta(join(a, b), a) == b


def translate(a: Face, x: Face) -> Face:
    """Move ``x`` into the upper interval over the vertex ``a``."""
    _check(a, x)
    if not a.is_vertex:
        raise ValueError(f"translate needs a vertex, got {a}")
    m = meet(join(x, a), join(antipode(x), a))
    if m is None:
        raise MRInvariantError(f"translate({a}, {x}) undefined")
    return m


# -- alternative representations ------------------------------------------


@dataclass(frozen=True, slots=True)
class SignedSet:
    """Disjoint pair of 1-based coordinate sets; ordered by reverse inclusion."""

    pos: frozenset[int]
    neg: frozenset[int]

    def __post_init__(self) -> None:
        if self.pos & self.neg:
            raise ValueError(f"signed set parts overlap: {sorted(self.pos & self.neg)}")

    def __le__(self, other: SignedSet) -> bool:
        return self.pos >= other.pos and self.neg >= other.neg


def to_signed_set(x: Face) -> SignedSet:
    pos = frozenset(i + 1 for i in range(x.n) if x.plus >> i & 1)
    neg = frozenset(i + 1 for i in range(x.n) if (x.fixed & ~x.plus) >> i & 1)
    return SignedSet(pos, neg)


def from_signed_set(s: SignedSet, n: int) -> Face:
    if any(not 1 <= i <= n for i in s.pos | s.neg):
        raise ValueError(f"signed set outside 1..{n}")
    plus = sum(1 << (i - 1) for i in s.pos)
    minus = sum(1 << (i - 1) for i in s.neg)
    return Face(n, plus | minus, plus)


def signed_set_chart(chosen: list[Face], n: int):
    """Coordinatise L_n by a set of coatoms containing one of each antipodal pair.

    ``chosen`` must satisfy C u antipode(C) = CoAt and C n antipode(C) = {}.
    Returns a map sending a face to the pair (coatoms of C above it,
    coatoms of antipode(C) above it), i.e. a signed subset of C.
    """
    cs = set(chosen)
    ds = {antipode(c) for c in chosen}
    if cs | ds != set(coatoms(n)) or cs & ds:
        raise ValueError("coatom set is not a transversal of the antipodal pairs")
    order = sorted(cs)

    def chart(x: Face) -> tuple[frozenset[Face], frozenset[Face]]:
        return (
            frozenset(c for c in order if leq(x, c)),
            frozenset(c for c in order if leq(x, antipode(c))),
        )

    return chart


@dataclass(frozen=True, slots=True)
class IntervalPair:
    """A pair <a, b> of subsets of {1..n} (bitmasks) with a v b = 1."""

    n: int
    a: int
    b: int

    def __post_init__(self) -> None:
        full = (1 << self.n) - 1
        if (self.a | self.b) != full or (self.a | self.b) & ~full:
            raise ValueError("interval pair needs a v b = 1")

    def __le__(self, other: IntervalPair) -> bool:
        return self.a & ~other.a == 0 and self.b & ~other.b == 0


def to_interval_pair(x: Face) -> IntervalPair:
    # x holds the vertices whose plus-set lies in [plus, plus | free]
    full = (1 << x.n) - 1
    return IntervalPair(x.n, full & ~x.plus, x.plus | x.free)


def from_interval_pair(p: IntervalPair) -> Face:
    full = (1 << p.n) - 1
    plus = full & ~p.a
    free = p.b & ~plus
    return Face(p.n, full & ~free, plus)


def interval_delta(p: IntervalPair, q: IntervalPair) -> IntervalPair:
    """<a, b>, <c, d> |-> <a ^ (b -> d), b ^ (a -> c)> for q <= p."""
    if p.n != q.n:
        raise DimensionError(f"pairs of dimension {p.n} and {q.n}")
    if not q <= p:
        raise ValueError("interval_delta needs q <= p")
    full = (1 << p.n) - 1

    def implies(u: int, v: int) -> int:
        return (full & ~u) | v

    return IntervalPair(p.n, p.a & implies(p.b, q.b), p.b & implies(p.a, q.a))
