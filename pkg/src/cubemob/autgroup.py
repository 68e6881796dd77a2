"""Automorphisms of the n-cube face lattice as signed permutations.

Convention: the sign is applied before the coordinate is moved, so the image
of ``x`` carries ``signs[i] * x_i`` in coordinate ``perm[i]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from math import factorial
from typing import Iterable, Iterator, Mapping

from .faces import DimensionError, Face, antipode, coatoms, leq

MAX_ENUM_N = 6


@dataclass(frozen=True, slots=True)
class SignedPerm:
    perm: tuple[int, ...]   # 0-based images
    signs: tuple[int, ...]  # +1 / -1

    def __post_init__(self) -> None:
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"not a permutation: {self.perm}")
        if len(self.signs) != len(self.perm) or any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"bad sign vector: {self.signs}")

    @property
    def n(self) -> int:
        return len(self.perm)

    def __call__(self, x: Face) -> Face:
        return apply(self, x)

    def __str__(self) -> str:
        p = ",".join(str(i + 1) for i in self.perm)
        s = ",".join("+" if v > 0 else "-" for v in self.signs)
        return f"π=[{p}]; s=[{s}]"


def identity(n: int) -> SignedPerm:
    return SignedPerm(tuple(range(n)), (1,) * n)


def parse_signed_perm(text: str) -> SignedPerm:
    """Inverse of ``str(SignedPerm)``; accepts ``pi=`` as well as ``π=``."""
    try:
        left, right = (part.strip() for part in text.split(";"))
        perm = left.split("=", 1)[1].strip().strip("[]")
        signs = right.split("=", 1)[1].strip().strip("[]")
        p = tuple(int(v) - 1 for v in perm.split(",")) if perm else ()
        s = tuple(-1 if v.strip() in ("-", "−") else 1 for v in signs.split(",")) if signs else ()
    except (IndexError, ValueError) as exc:
        raise ValueError(f"bad signed permutation {text!r}") from exc
    return SignedPerm(p, s)


def apply(phi: SignedPerm, x: Face) -> Face:
    if phi.n != x.n:
        raise DimensionError(f"automorphism of L_{phi.n} applied to a face of L_{x.n}")
    fixed = plus = 0
    for i, j in enumerate(phi.perm):
        if x.fixed >> i & 1:
            fixed |= 1 << j
            positive = bool(x.plus >> i & 1) == (phi.signs[i] > 0)
            if positive:
                plus |= 1 << j
    return Face(x.n, fixed, plus)


def compose(phi: SignedPerm, psi: SignedPerm) -> SignedPerm:
    """``phi`` after ``psi``."""
    if phi.n != psi.n:
        raise DimensionError("composing automorphisms of different cubes")
    perm = tuple(phi.perm[psi.perm[i]] for i in range(psi.n))
    signs = tuple(psi.signs[i] * phi.signs[psi.perm[i]] for i in range(psi.n))
    return SignedPerm(perm, signs)


def inverse(phi: SignedPerm) -> SignedPerm:
    perm = [0] * phi.n
    signs = [1] * phi.n
    for i, j in enumerate(phi.perm):
        perm[j] = i
        signs[j] = phi.signs[i]
    return SignedPerm(tuple(perm), tuple(signs))


def group_order(n: int) -> int:
    return 2**n * factorial(n)


def enumerate_aut(n: int) -> Iterator[SignedPerm]:
    """All 2^n n! automorphisms, ordered by (one-line permutation, sign word)."""
    if not 1 <= n <= MAX_ENUM_N:
        raise ValueError(f"automorphism enumeration supports 1 <= n <= {MAX_ENUM_N}, got {n}")
    for perm in permutations(range(n)):
        for signs in product((1, -1), repeat=n):
            yield SignedPerm(perm, signs)


def generators(n: int) -> list[SignedPerm]:
    """Adjacent transpositions and a sign flip of coordinate 1."""
    gens = []
    for i in range(n - 1):
        p = list(range(n))
        p[i], p[i + 1] = p[i + 1], p[i]
        gens.append(SignedPerm(tuple(p), (1,) * n))
    gens.append(SignedPerm(tuple(range(n)), (-1,) + (1,) * (n - 1)))
    return gens


def closure_of(gens: Iterable[SignedPerm]) -> set[SignedPerm]:
    gens = list(gens)
    if not gens:
        return set()
    seen = {identity(gens[0].n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                gh = compose(h, g)
                if gh not in seen:
                    seen.add(gh)
                    nxt.append(gh)
        frontier = nxt
    return seen


def _coatom_coord(c: Face) -> tuple[int, int]:
    i = c.fixed.bit_length() - 1
    return i, (1 if c.plus else -1)


def extend_coatom_map(m: Mapping[Face, Face]) -> SignedPerm:
    """The unique automorphism restricting to an antipode-preserving bijection of coatoms."""
    if not m:
        raise ValueError("empty coatom map")
    n = next(iter(m)).n
    cs = coatoms(n)
    if set(m) != set(cs) or set(m.values()) != set(cs):
        raise ValueError("coatom map is not a bijection of the coatoms")
    for c in cs:
        if m[antipode(c)] != antipode(m[c]):
            raise ValueError(f"coatom map does not commute with the antipode at {c}")
    perm = [0] * n
    signs = [1] * n
    for i in range(n):
        c = Face(n, 1 << i, 1 << i)  # coordinate i pinned to +
        j, s = _coatom_coord(m[c])
        perm[i] = j
        signs[i] = s
    return SignedPerm(tuple(perm), tuple(signs))


def restrict_to_coatoms(phi: SignedPerm) -> dict[Face, Face]:
    return {c: apply(phi, c) for c in coatoms(phi.n)}


def corank_transitive_witness(v1: Face, v2: Face) -> SignedPerm:
    """An automorphism sending ``v1`` to ``v2`` (equal corank required)."""
    if v1.n != v2.n:
        raise DimensionError("faces of different cubes")
    if v1.corank != v2.corank:
        raise ValueError(f"corank mismatch: {v1} has {v1.corank}, {v2} has {v2.corank}")
    n = v1.n
    src_fixed = [i for i in range(n) if v1.fixed >> i & 1]
    dst_fixed = [i for i in range(n) if v2.fixed >> i & 1]
    src_free = [i for i in range(n) if not v1.fixed >> i & 1]
    dst_free = [i for i in range(n) if not v2.fixed >> i & 1]
    perm = [0] * n
    signs = [1] * n
    for i, j in zip(src_fixed, dst_fixed):
        perm[i] = j
        if (v1.plus >> i & 1) != (v2.plus >> j & 1):
            signs[i] = -1
    for i, j in zip(src_free, dst_free):
        perm[i] = j
    return SignedPerm(tuple(perm), tuple(signs))


def _check_coatom_partition(blocks: list[frozenset[Face]], n: int) -> None:
    cs = set(coatoms(n))
    union: set[Face] = set()
    for b in blocks:
        if not b:
            raise ValueError("empty block")
        if union & b:
            raise ValueError("blocks overlap")
        if {antipode(c) for c in b} != set(b):
            raise ValueError(f"block {sorted(map(str, b))} is not antipode-closed")
        union |= b
    if union != cs:
        raise ValueError("blocks do not cover the coatoms")


def aut_partition_product(blocks: Iterable[Iterable[Face]], n: int) -> int:
    """Order of the subgroup preserving every block of an antipode-closed partition of CoAt_n."""
    bl = [frozenset(b) for b in blocks]
    _check_coatom_partition(bl, n)
    total = 1
    for b in bl:
        half = len(b) // 2
        total *= 2**half * factorial(half)
    return total


def aut_partition_brute(blocks: Iterable[Iterable[Face]], n: int) -> int:
    bl = [frozenset(b) for b in blocks]
    _check_coatom_partition(bl, n)
    return sum(
        all(frozenset(apply(phi, c) for c in b) == b for b in bl) for phi in enumerate_aut(n)
    )


def is_automorphism_on(phi: SignedPerm, faces: Iterable[Face]) -> bool:
    fs = list(faces)
    return all(leq(apply(phi, x), apply(phi, y)) == leq(x, y) for x in fs for y in fs)
