"""Orbit, stabiliser and freezer counts for subalgebras, and derangements.

For a subalgebra A of type t (r = support size, k = dimension):

    |Orb(A)|  = 2^(r-k) C(n,r) r! / prod (i!)^t_i t_i!
    |Stab(A)| = 2^(n+k-r) (n-r)! prod (i!)^t_i t_i!
    |Fr(A)|   = 2^(n-r) (n-r)! prod (i!)^t_i
    |Im rho|  = 2^k prod t_i!

Each closed form has a brute-force twin that walks the whole automorphism
group, so those are limited to n <= 4.
"""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from math import comb, factorial
from typing import Iterable

from . import autgroup as ag
from . import mobius as mb
from . import subalgebra as sa
from .faces import Face, all_faces, top

MAX_BRUTE_N = 4
MAX_DIRECT_N = 5
DEFAULT_SEED = 1729


def _prod_fact(t: sa.TypeVector, with_multiplicity: bool) -> int:
    out = 1
    for i, ti in enumerate(t.t, start=1):
        out *= factorial(i) ** ti
        if with_multiplicity:
            out *= factorial(ti)
    return out


def _check_type(t: sa.TypeVector, n: int) -> None:
    if t.n != n or t.r > n:
        raise ValueError(f"type {t} is not a type of L_{n}")


def orbit_size_formula(t: sa.TypeVector, n: int) -> int:
    _check_type(t, n)
    num = 2 ** (t.r - t.k) * comb(n, t.r) * factorial(t.r)
    den = _prod_fact(t, True)
    q, rem = divmod(num, den)
    if rem:
        raise ArithmeticError(f"orbit size for type {t} is not an integer")
    return q


def stab_size_formula(t: sa.TypeVector, n: int) -> int:
    _check_type(t, n)
    return 2 ** (n + t.k - t.r) * factorial(n - t.r) * _prod_fact(t, True)


def fr_size_formula(t: sa.TypeVector, n: int) -> int:
    _check_type(t, n)
    return 2 ** (n - t.r) * factorial(n - t.r) * _prod_fact(t, False)


def im_rho_formula(t: sa.TypeVector, n: int) -> int:
    _check_type(t, n)
    out = 2**t.k
    for ti in t.t:
        out *= factorial(ti)
    return out


# -- brute force ------------------------------------------------------------------


def _check_brute(n: int) -> None:
    if not 1 <= n <= MAX_BRUTE_N:
        raise ValueError(f"brute-force counts support 1 <= n <= {MAX_BRUTE_N}, got {n}")


def stabilizer(a: sa.MRSubalgebra) -> list[ag.SignedPerm]:
    _check_brute(a.n)
    faces = sa.materialize(a)
    return [phi for phi in ag.enumerate_aut(a.n) if frozenset(ag.apply(phi, x) for x in faces) == faces]


def freezer(a: sa.MRSubalgebra) -> list[ag.SignedPerm]:
    _check_brute(a.n)
    faces = sa.materialize(a)
    return [phi for phi in ag.enumerate_aut(a.n) if all(ag.apply(phi, x) == x for x in faces)]


def orbit(a: sa.MRSubalgebra) -> set[frozenset[Face]]:
    _check_brute(a.n)
    faces = sa.materialize(a)
    return {frozenset(ag.apply(phi, x) for x in faces) for phi in ag.enumerate_aut(a.n)}


def orbit_brute(a: sa.MRSubalgebra) -> int:
    return len(orbit(a))


def stab_brute(a: sa.MRSubalgebra) -> int:
    return len(stabilizer(a))


def fr_brute(a: sa.MRSubalgebra) -> int:
    return len(freezer(a))


def restriction(phi: ag.SignedPerm, faces: Iterable[Face]) -> tuple[tuple[Face, Face], ...]:
    return tuple((x, ag.apply(phi, x)) for x in sorted(faces))


def im_rho_brute(a: sa.MRSubalgebra) -> int:
    faces = sa.materialize(a)
    return len({restriction(phi, faces) for phi in stabilizer(a)})


def brute_counts(a: sa.MRSubalgebra) -> dict[str, int]:
    """All four counts in one pass over the group."""
    _check_brute(a.n)
    faces = sa.materialize(a)
    order = sorted(faces)
    images = set()
    stab = fr = 0
    restrictions = set()
    for phi in ag.enumerate_aut(a.n):
        img = tuple(ag.apply(phi, x) for x in order)
        s = frozenset(img)
        images.add(s)
        if s == faces:
            stab += 1
            restrictions.add(img)
            if img == tuple(order):
                fr += 1
    return {"orbit": len(images), "stab": stab, "fr": fr, "im_rho": len(restrictions)}


def automorphisms_of(a: sa.MRSubalgebra) -> list[dict[Face, Face]]:
    """Aut(A) as face maps, via A = L_k with one coordinate per block."""
    out = []
    blocks = a.blocks
    for perm, signs in ((p.perm, p.signs) for p in ag.enumerate_aut(a.k)) if a.k else [((), ())]:
        mapping = {}
        for x in sa.materialize(a):
            fixed = plus = 0
            for bi, (s, sig) in enumerate(blocks):
                if not x.fixed & s:
                    continue
                positive = (x.plus & s) == sig
                if signs[bi] < 0:
                    positive = not positive
                t, tau = blocks[perm[bi]]
                fixed |= t
                plus |= tau if positive else t & ~tau
            mapping[x] = Face(a.n, fixed, plus)
        out.append(mapping)
    return out


def preserves_corank_classes(a: sa.MRSubalgebra, psi: dict[Face, Face]) -> bool:
    """psi maps each class of subalgebra coatoms of equal corank onto itself."""
    return all(psi[c].corank == c.corank for c in sa.subalgebra_coatoms(a))


def sample_subalgebras(n: int, count: int, seed: int = DEFAULT_SEED) -> list[sa.MRSubalgebra]:
    subs = sa.enumerate_subalgebras(n)
    if count >= len(subs):
        return subs
    return sorted(random.Random(seed).sample(subs, count))


# -- Möbius inversion -----------------------------------------------------------------


def _fr_gate(poset: mb.PosetTable) -> None:
    """Brute-check the freezer formula on one subalgebra of each type."""
    seen = set()
    for a in poset.elements:
        t = sa.type_of(a)
        if t in seen:
            continue
        seen.add(t)
        if fr_brute(a) != fr_size_formula(t, a.n):
            raise ArithmeticError(f"freezer formula fails its brute check at {a}")


def s_table(n: int, poset: mb.PosetTable | None = None) -> dict[sa.MRSubalgebra, int]:
    """s(A) = sum_{B >= A} mu(A, B) f(B): automorphisms freezing exactly A."""
    _check_brute(n)
    p = poset if poset is not None else mb.mr_poset(n)
    _fr_gate(p)
    f = {b: fr_size_formula(sa.type_of(b), n) for b in p.elements}
    out = {}
    for a in p.elements:
        out[a] = sum(p.mu(a, b) * f[b] for b in p.elements if p.leq(a, b))
    return out


def fixed_faces(phi: ag.SignedPerm, faces: Iterable[Face]) -> frozenset[Face]:
    return frozenset(x for x in faces if ag.apply(phi, x) == x)


def exact_fixed_census(n: int) -> dict[sa.MRSubalgebra, int]:
    """Brute count of automorphisms whose fixed-face set is exactly each subalgebra."""
    _check_brute(n)
    faces = all_faces(n)
    counts: dict[sa.MRSubalgebra, int] = {}
    for phi in ag.enumerate_aut(n):
        a = sa.from_faces(fixed_faces(phi, faces))
        counts[a] = counts.get(a, 0) + 1
    return counts


def _is_derangement(phi: ag.SignedPerm, faces: list[Face], t: Face) -> bool:
    return all(x == t or ag.apply(phi, x) != x for x in faces)


def _count_derangements(args: tuple[int, list[ag.SignedPerm]]) -> int:
    n, chunk = args
    faces = all_faces(n)
    t = top(n)
    return sum(_is_derangement(phi, faces, t) for phi in chunk)


def derangements_direct(n: int, jobs: int = 1) -> int:
    """Automorphisms whose only fixed face is the whole cube."""
    if not 1 <= n <= MAX_DIRECT_N:
        raise ValueError(f"direct derangement count supports 1 <= n <= {MAX_DIRECT_N}, got {n}")
    if n <= 3:
        # fixed-face sets must be subalgebras
        faces = all_faces(n)
        for phi in ag.enumerate_aut(n):
            fx = fixed_faces(phi, faces)
            if sa.generated_closure(fx) != fx:
                raise ArithmeticError(f"fixed faces of {phi} are not closed")
    auts = list(ag.enumerate_aut(n))
    if jobs <= 1:
        return _count_derangements((n, auts))
    size = -(-len(auts) // jobs)
    chunks = [(n, auts[i:i + size]) for i in range(0, len(auts), size)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return sum(pool.map(_count_derangements, chunks))


def derangements(n: int, method: str = "both", jobs: int = 1, poset: mb.PosetTable | None = None) -> dict:
    if method not in ("inversion", "direct", "both"):
        raise ValueError(f"unknown method {method!r}")
    out: dict = {"n": n}
    if method in ("inversion", "both"):
        out["inversion"] = s_table(n, poset)[sa.trivial(n)]
    if method in ("direct", "both"):
        out["direct"] = derangements_direct(n, jobs)
    if method == "both":
        out["agree"] = out["inversion"] == out["direct"]
    return out


# -- census rows ------------------------------------------------------------------------


@dataclass
class CensusRow:
    subalgebra: str
    type: str
    r: int
    k: int
    orbit_formula: int
    orbit_brute: int | None
    stab_formula: int
    stab_brute: int | None
    fr_formula: int
    fr_brute: int | None
    im_rho_formula: int
    im_rho_brute: int | None
    f: int
    g: int
    s: int | None

    def agrees(self) -> bool:
        pairs = [
            (self.orbit_formula, self.orbit_brute),
            (self.stab_formula, self.stab_brute),
            (self.fr_formula, self.fr_brute),
            (self.im_rho_formula, self.im_rho_brute),
        ]
        return all(b is None or a == b for a, b in pairs)

    def as_dict(self) -> dict:
        return asdict(self)


CENSUS_COLUMNS = list(CensusRow.__dataclass_fields__)


def _row_for(args: tuple[sa.MRSubalgebra, bool, int | None]) -> CensusRow:
    a, brute, s = args
    n = a.n
    t = sa.type_of(a)
    b = brute_counts(a) if brute else {}
    return CensusRow(
        subalgebra=str(a),
        type=str(t),
        r=t.r,
        k=t.k,
        orbit_formula=orbit_size_formula(t, n),
        orbit_brute=b.get("orbit"),
        stab_formula=stab_size_formula(t, n),
        stab_brute=b.get("stab"),
        fr_formula=fr_size_formula(t, n),
        fr_brute=b.get("fr"),
        im_rho_formula=im_rho_formula(t, n),
        im_rho_brute=b.get("im_rho"),
        f=fr_size_formula(t, n),
        g=stab_size_formula(t, n),
        s=s,
    )


def orbit_representatives(n: int) -> list[sa.MRSubalgebra]:
    reps: dict[sa.TypeVector, sa.MRSubalgebra] = {}
    for a in sa.enumerate_subalgebras(n):
        reps.setdefault(sa.type_of(a), a)
    return sorted(reps.values())


def census_rows(n: int, jobs: int = 1, poset: mb.PosetTable | None = None) -> list[CensusRow]:
    """One row per orbit (type); brute columns and s are filled for n <= 4."""
    reps = orbit_representatives(n)
    brute = n <= MAX_BRUTE_N
    s = s_table(n, poset) if brute else {}
    work = [(a, brute, s.get(a)) for a in reps]
    if jobs > 1 and brute:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_row_for, work))
    return [_row_for(w) for w in work]


def sample_check(n: int, count: int = 50, seed: int = DEFAULT_SEED) -> list[dict]:
    """Formula vs brute force on a fixed-seed sample; returns the mismatches."""
    bad = []
    for a in sample_subalgebras(n, count, seed):
        row = _row_for((a, True, None))
        if not row.agrees():
            bad.append(row.as_dict())
    return bad
