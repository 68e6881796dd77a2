"""MR-subalgebras of L_n and the locator-pair description of them.

Structurally an MR-subalgebra is a signed partial partition of the
coordinates: disjoint blocks S, each carrying a sign pattern defined up to a
global flip.  Its faces pin a union of blocks, each block to its pattern or
the negated pattern.  A subalgebra with k blocks is a copy of L_k.

Locator pairs <c, B> name subalgebras through the interval [0, 1] over the
all-minus vertex 0.  B is an implication sublattice of [0, 1], stored as the
pinned support M of min B together with a partition of M.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator

from .faces import (
    DimensionError,
    Face,
    all_faces,
    base_vertex,
    caret,
    delta,
    join,
    leq,
    meet,
    top,
)

MAX_STRUCTURAL_N = 6
MAX_ORACLE_N = 3


def bits(mask: int) -> list[int]:
    """0-based positions of the set bits."""
    out = []
    i = 0
    while mask >> i:
        if mask >> i & 1:
            out.append(i)
        i += 1
    return out


def _lowbit(mask: int) -> int:
    return mask & -mask


def set_partitions(mask: int) -> Iterator[tuple[int, ...]]:
    """All partitions of the coordinate set ``mask`` into nonempty blocks."""
    if not mask:
        yield ()
        return
    first = _lowbit(mask)
    rest = mask & ~first
    rest_bits = bits(rest)
    # block containing the lowest coordinate, then partition what is left
    for r in range(len(rest_bits) + 1):
        for chosen in combinations(rest_bits, r):
            block = first | sum(1 << i for i in chosen)
            for tail in set_partitions(mask & ~block):
                yield tuple(sorted((block,) + tail, key=_lowbit))


def _canon_sign(block: int, signs: int) -> int:
    signs &= block
    if not signs & _lowbit(block):
        signs = block & ~signs
    return signs


# -- MR-subalgebras ---------------------------------------------------------


@dataclass(frozen=True, slots=True)
class MRSubalgebra:
    n: int
    blocks: tuple[tuple[int, int], ...]  # (coordinate mask, plus-pattern mask), canonical

    @classmethod
    def make(cls, n: int, blocks: Iterable[tuple[int, int]]) -> MRSubalgebra:
        full = (1 << n) - 1
        seen = 0
        canon = []
        for s, sig in blocks:
            if not s or s & ~full:
                raise ValueError(f"bad block {s:b} for n={n}")
            if s & seen:
                raise ValueError("blocks overlap")
            seen |= s
            canon.append((s, _canon_sign(s, sig)))
        canon.sort(key=lambda b: _lowbit(b[0]))
        return cls(n, tuple(canon))

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def support(self) -> int:
        out = 0
        for s, _ in self.blocks:
            out |= s
        return out

    def sort_key(self):
        return (self.k, tuple((tuple(bits(s)), bits(sig)) for s, sig in self.blocks))

    def __lt__(self, other: MRSubalgebra) -> bool:
        return (self.n, self.sort_key()) < (other.n, other.sort_key())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "blocks": [
                {
                    "coords": [i + 1 for i in bits(s)],
                    "signs": "".join("+" if sig >> i & 1 else "-" for i in bits(s)),
                }
                for s, sig in self.blocks
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> MRSubalgebra:
        blocks = []
        for b in data["blocks"]:
            coords = [int(i) - 1 for i in b["coords"]]
            if len(coords) != len(b["signs"]):
                raise ValueError("coords and signs differ in length")
            s = sum(1 << i for i in coords)
            sig = sum(1 << i for i, ch in zip(coords, b["signs"]) if ch == "+")
            blocks.append((s, sig))
        return cls.make(int(data["n"]), blocks)

    def __str__(self) -> str:
        if not self.blocks:
            return "{1}"
        parts = []
        for s, sig in self.blocks:
            parts.append(
                "".join(str(i + 1) for i in bits(s))
                + ":"
                + "".join("+" if sig >> i & 1 else "-" for i in bits(s))
            )
        return "|".join(parts)


def trivial(n: int) -> MRSubalgebra:
    return MRSubalgebra(n, ())


def whole(n: int) -> MRSubalgebra:
    return MRSubalgebra.make(n, [(1 << i, 1 << i) for i in range(n)])


def materialize(a: MRSubalgebra) -> frozenset[Face]:
    """All 3^k faces of the subalgebra."""
    faces = []
    for choice in product((None, 1, -1), repeat=a.k):
        fixed = plus = 0
        for (s, sig), eps in zip(a.blocks, choice):
            if eps is None:
                continue
            fixed |= s
            plus |= sig if eps == 1 else s & ~sig
        faces.append(Face(a.n, fixed, plus))
    return frozenset(faces)


def subalgebra_vertices(a: MRSubalgebra) -> list[Face]:
    sup = a.support
    return sorted(x for x in materialize(a) if x.fixed == sup)


def subalgebra_coatoms(a: MRSubalgebra) -> list[Face]:
    out = []
    for s, sig in a.blocks:
        out.append(Face(a.n, s, sig))
        out.append(Face(a.n, s, s & ~sig))
    return sorted(out)


def from_faces(faces: Iterable[Face]) -> MRSubalgebra:
    """Recognise a face set as an MR-subalgebra; raises if it is not one."""
    fs = frozenset(faces)
    if not fs:
        raise ValueError("empty face set")
    n = next(iter(fs)).n
    if top(n) not in fs:
        raise ValueError("face set does not contain the top")
    proper = [x for x in fs if x != top(n)]
    coats = [x for x in proper if not any(x != y and leq(x, y) for y in proper)]
    blocks = {}
    for c in coats:
        blocks[c.fixed] = (c.fixed, c.plus)
    try:
        a = MRSubalgebra.make(n, blocks.values())
    except ValueError as exc:
        raise ValueError("not an MR-subalgebra") from exc
    if materialize(a) != fs:
        raise ValueError("not an MR-subalgebra")
    return a


def generated_closure(gens: Iterable[Face], top_face: Face | None = None) -> frozenset[Face]:
    """Least set containing ``gens`` and the top, closed under join, delta and caret.

    ``top_face`` replaces the top of L_n when closing inside a downset.
    """
    gens = list(gens)
    if not gens and top_face is None:
        raise ValueError("need at least one generator")
    t = top_face if top_face is not None else top(gens[0].n)
    members: list[Face] = []
    seen: set[Face] = set()
    work = [t, *gens]
    while work:
        e = work.pop()
        if e in seen:
            continue
        seen.add(e)
        members.append(e)
        for f in list(members):
            for x, y in ((e, f), (f, e)):
                out = [join(x, y), caret(x, y)]
                if leq(y, x):
                    out.append(delta(x, y))
                for z in out:
                    if z not in seen:
                        work.append(z)
    return frozenset(seen)


def is_closed_face_set(faces: Iterable[Face]) -> bool:
    fs = frozenset(faces)
    return generated_closure(fs, top_face=max(fs, key=lambda f: f.free.bit_count())) == fs


def enumerate_subalgebras(n: int) -> list[MRSubalgebra]:
    """Every MR-subalgebra of L_n, duplicate-free and in canonical order."""
    if not 1 <= n <= MAX_STRUCTURAL_N:
        raise ValueError(f"structural enumeration supports 1 <= n <= {MAX_STRUCTURAL_N}, got {n}")
    out = []
    for support in range(1 << n):
        for part in set_partitions(support):
            pattern_choices = []
            for s in part:
                low = _lowbit(s)
                rest = bits(s & ~low)
                pattern_choices.append(
                    [low | sum(1 << i for i in combo) for r in range(len(rest) + 1) for combo in combinations(rest, r)]
                )
            for sigs in product(*pattern_choices):
                out.append(MRSubalgebra.make(n, zip(part, sigs)))
    out.sort()
    return out


def enumerate_by_closure(n: int) -> list[frozenset[Face]]:
    """Closure oracle: grow closed sets one generator at a time from {1}."""
    if not 1 <= n <= MAX_ORACLE_N:
        raise ValueError(f"closure oracle supports 1 <= n <= {MAX_ORACLE_N}, got {n}")
    faces = all_faces(n)
    start = generated_closure([top(n)])
    found = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for s in frontier:
            for x in faces:
                if x in s:
                    continue
                c = generated_closure(s | {x})
                if c not in found:
                    found.add(c)
                    nxt.append(c)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), sorted(f.sort_key() for f in s)))


# -- type vectors -------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class TypeVector:
    """Counts t_i of blocks of size i, i = 1..n."""

    t: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(v < 0 for v in self.t):
            raise ValueError("negative type entry")
        if self.r > self.n:
            raise ValueError(f"type {self.t} needs more than n={self.n} coordinates")

    @property
    def n(self) -> int:
        return len(self.t)

    @property
    def r(self) -> int:
        """Corank of a vertex of the subalgebra (size of the support)."""
        return sum(i * v for i, v in enumerate(self.t, start=1))

    @property
    def k(self) -> int:
        """Dimension: the subalgebra is a copy of L_k."""
        return sum(self.t)

    @classmethod
    def from_block_sizes(cls, sizes: Iterable[int], n: int) -> TypeVector:
        t = [0] * n
        for s in sizes:
            t[s - 1] += 1
        return cls(tuple(t))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.t)) + ")"


def type_of(a: MRSubalgebra) -> TypeVector:
    return TypeVector.from_block_sizes((s.bit_count() for s, _ in a.blocks), a.n)


def type_from_coatoms(faces: Iterable[Face]) -> TypeVector:
    """Type read off extensionally: 2 t_i = #{subalgebra coatoms below exactly i cube coatoms}."""
    fs = frozenset(faces)
    n = next(iter(fs)).n
    proper = [x for x in fs if x != top(n)]
    coats = [x for x in proper if not any(x != y and leq(x, y) for y in proper)]
    counts = [0] * n
    for c in coats:
        counts[c.corank - 1] += 1
    if any(v % 2 for v in counts):
        raise ValueError("coatoms do not come in antipodal pairs")
    return TypeVector(tuple(v // 2 for v in counts))


def all_types(n: int) -> Iterator[TypeVector]:
    """Every type vector realisable in L_n."""

    def parts(remaining: int, largest: int):
        if remaining == 0:
            yield []
            return
        for p in range(min(remaining, largest), 0, -1):
            for rest in parts(remaining - p, p):
                yield [p, *rest]

    for r in range(n + 1):
        for sizes in parts(r, r):
            yield TypeVector.from_block_sizes(sizes, n)


# -- inclusion ------------------------------------------------------------------


def includes(a1: MRSubalgebra, a2: MRSubalgebra) -> bool:
    """Structural test for materialize(a1) <= materialize(a2)."""
    if a1.n != a2.n:
        raise DimensionError("subalgebras of different cubes")
    for s, sig in a1.blocks:
        covered = 0
        for t, tau in a2.blocks:
            if t & ~s == 0:
                pattern = sig & t
                if pattern != tau and pattern != t & ~tau:
                    return False
                covered |= t
            elif t & s:
                return False
        if covered != s:
            return False
    return True


# -- Boolean sums and implication sublattices of [0, 1] ---------------------------------


def _beta(a: Face, x: Face) -> Face:
    # (x v a) ^ (delta(1, x) v a); both joins lie over a so the meet exists
    m = meet(join(x, a), join(delta(top(x.n), x), a))
    assert m is not None
    return m


def plus_a(c: Face, d: Face, a: Face) -> Face:
    """Boolean sum of c v a and d v a inside the interval [a, 1]."""
    if not c.n == d.n == a.n:
        raise DimensionError("faces of different cubes")
    u, v = join(c, a), join(d, a)
    free = a.free | (u.free ^ v.free)
    fixed = ((1 << a.n) - 1) & ~free
    return Face(a.n, fixed, a.plus & fixed)


def in_unit_interval(x: Face) -> bool:
    """x lies in [0, 1] over the all-minus vertex."""
    return x.plus == 0


def implies01(x: Face, y: Face) -> Face:
    """Boolean implication in [0, 1]: not-x or y, computed on free sets."""
    full = (1 << x.n) - 1
    free = (full & ~x.free) | y.free
    return Face(x.n, full & ~free, 0)


def meet01(x: Face, y: Face) -> Face:
    return Face(x.n, x.fixed | y.fixed, 0)


def imp_closure(gens: Iterable[Face]) -> frozenset[Face]:
    """Closure of a subset of [0, 1] under implication and meet."""
    seen: set[Face] = set()
    members: list[Face] = []
    work = list(gens)
    for g in work:
        if not in_unit_interval(g):
            raise ValueError(f"{g} is not in [0, 1]")
    while work:
        e = work.pop()
        if e in seen:
            continue
        seen.add(e)
        members.append(e)
        for f in list(members):
            for z in (implies01(e, f), implies01(f, e), meet01(e, f)):
                if z not in seen:
                    work.append(z)
    return frozenset(seen)


@dataclass(frozen=True, slots=True)
class ImpSublattice:
    """Boolean subalgebra of [min B, 1]: faces pinning (to minus) a union of blocks."""

    n: int
    support: int
    partition: tuple[int, ...]

    @classmethod
    def make(cls, n: int, partition: Iterable[int]) -> ImpSublattice:
        part = tuple(sorted(partition, key=_lowbit))
        sup = 0
        for b in part:
            if not b or b & sup or b >> n:
                raise ValueError("partition blocks must be nonempty, disjoint, inside 1..n")
            sup |= b
        return cls(n, sup, part)

    @property
    def min_face(self) -> Face:
        return Face(self.n, self.support, 0)

    @property
    def dim(self) -> int:
        return len(self.partition)

    def __contains__(self, x: Face) -> bool:
        if x.n != self.n or not in_unit_interval(x) or x.fixed & ~self.support:
            return False
        return all(b & x.fixed in (0, b) for b in self.partition)

    def elements(self) -> frozenset[Face]:
        out = []
        for r in range(len(self.partition) + 1):
            for combo in combinations(self.partition, r):
                out.append(Face(self.n, sum(combo), 0))
        return frozenset(out)

    def issubset(self, other: ImpSublattice) -> bool:
        if self.support & ~other.support:
            return False
        return all(all(b & t in (0, t) for t in other.partition) for b in self.partition)

    def is_boolean(self) -> bool:
        """min B is the base vertex, so B is a Boolean subalgebra of [0, 1]."""
        return self.support == (1 << self.n) - 1

    def type_vector(self) -> TypeVector:
        return TypeVector.from_block_sizes((b.bit_count() for b in self.partition), self.n)

    def sort_key(self):
        return (len(self.partition), self.support.bit_count(), tuple(tuple(bits(b)) for b in self.partition))

    def __lt__(self, other: ImpSublattice) -> bool:
        return self.sort_key() < other.sort_key()

    def to_json(self) -> dict:
        return {
            "support": [i + 1 for i in bits(self.support)],
            "partition": [[i + 1 for i in bits(b)] for b in self.partition],
        }

    @classmethod
    def from_json(cls, data: dict, n: int) -> ImpSublattice:
        b = cls.make(n, [sum(1 << (i - 1) for i in blk) for blk in data["partition"]])
        if b.support != sum(1 << (i - 1) for i in data["support"]):
            raise ValueError("support does not match the partition")
        return b

    def __str__(self) -> str:
        if not self.partition:
            return "{1}"
        return "|".join("".join(str(i + 1) for i in bits(b)) for b in self.partition)


def unit_interval(n: int) -> ImpSublattice:
    return ImpSublattice.make(n, [1 << i for i in range(n)])


def top_only(n: int) -> ImpSublattice:
    return ImpSublattice.make(n, [])


def enumerate_imp_structural(n: int) -> list[ImpSublattice]:
    out = [ImpSublattice.make(n, part) for sup in range(1 << n) for part in set_partitions(sup)]
    out.sort()
    return out


def imp_sublattice_from_set(faces: Iterable[Face]) -> ImpSublattice:
    fs = frozenset(faces)
    n = next(iter(fs)).n
    bottom = max(fs, key=lambda f: f.corank)
    coats = [x for x in fs if x.corank > 0 and not any(
        y != x and y.corank > 0 and y.fixed & ~x.fixed == 0 for y in fs)]
    b = ImpSublattice.make(n, [c.fixed for c in coats]) if bottom.corank else top_only(n)
    if b.elements() != fs:
        raise ValueError("not an implication sublattice")
    return b


# -- locator pairs ---------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class LocatorPair:
    c: Face
    B: ImpSublattice

    def __post_init__(self) -> None:
        if self.c.n != self.B.n:
            raise DimensionError("locator pair mixes cubes")
        if not in_unit_interval(self.c):
            raise ValueError(f"locator {self.c} is not in [0, 1]")
        if not leq(self.B.min_face, self.c):
            raise ValueError(f"locator {self.c} is not above min B = {self.B.min_face}")

    @property
    def n(self) -> int:
        return self.c.n

    def to_json(self) -> dict:
        return {"c": str(self.c), "B": self.B.to_json()}

    def __str__(self) -> str:
        return f"<{self.c}, {self.B}>"


def locate(p: LocatorPair) -> MRSubalgebra:
    """The subalgebra named by a locator pair.

    Its distinguished vertex is a = delta(c, min B); the blocks of B carry the
    signs of a.
    """
    a = delta(p.c, p.B.min_face)
    return MRSubalgebra.make(p.n, [(b, a.plus & b) for b in p.B.partition])


def locate_by_closure(p: LocatorPair) -> frozenset[Face]:
    """Same as ``locate`` but extensionally: close the moved filter."""
    a = delta(p.c, p.B.min_face)
    return generated_closure([_beta(a, x) for x in p.B.elements()] or [top(p.n)])


def locator_of(a: MRSubalgebra) -> LocatorPair:
    """Canonical locator: uses the least vertex of ``a``."""
    v = subalgebra_vertices(a)[0]
    c = join(base_vertex(a.n), v)
    return LocatorPair(c, ImpSublattice.make(a.n, [s for s, _ in a.blocks]))


def filter_image(a: MRSubalgebra, vertex: Face) -> frozenset[Face]:
    """Image in [0, 1] of the filter of ``a`` over one of its vertices."""
    zero = base_vertex(a.n)
    return frozenset(_beta(zero, x) for x in materialize(a) if leq(vertex, x))


def pair_leq(p1: LocatorPair, p2: LocatorPair) -> bool:
    if p1.n != p2.n:
        raise DimensionError("locator pairs of different cubes")
    if not p1.B.issubset(p2.B):
        return False
    return plus_a(p1.c, p2.c, p1.B.min_face) in p2.B


def pair_equiv(p1: LocatorPair, p2: LocatorPair) -> bool:
    return pair_leq(p1, p2) and pair_leq(p2, p1)


def pair_closure(p: LocatorPair) -> LocatorPair:
    """<c, B> |-> <c, B*>, B* the Boolean subalgebra of [min B, 1] generated by B and c."""
    cf = p.c.fixed
    parts = []
    for b in p.B.partition:
        for piece in (b & cf, b & ~cf):
            if piece:
                parts.append(piece)
    return LocatorPair(p.c, ImpSublattice.make(p.n, parts))


def is_closed(p: LocatorPair) -> bool:
    return p.c in p.B


def subalgebra_closure(a: MRSubalgebra) -> MRSubalgebra:
    """Closure operator on subalgebras induced by ``pair_closure``."""
    return locate(pair_closure(locator_of(a)))


def dumps(obj) -> str:
    return json.dumps(obj.to_json(), sort_keys=True)
