"""Möbius functions on finite posets of subalgebras.

Generic engine (``PosetTable``), the implication-sublattice poset of the
Boolean interval [0, 1], the closed-form values for it, the closure-operator
audit, and three routes to mu({1}, L_n):

* ``mr_mobius_bruteforce``: recursion on the enumerated subalgebra poset.
* ``mr_recurrence_paper``: the relation sum_{m=ceil(n/2)}^{n} S(n,m) a_m / 2^m = n!
  solved exactly as printed.
* ``mr_recurrence_adjudicated``: the same closure argument, but with the
  closed-poset value and the per-dimension fibre sizes taken from what
  enumeration shows them to be.
"""
from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Hashable, Sequence

import numpy as np

from . import subalgebra as sa


class PosetError(ValueError):
    pass


class PosetTable:
    """An explicit finite poset with memoised Möbius values.

    ``leq(x, y)`` is evaluated once per pair at construction; the partial
    order laws are then checked and a violation names the offending elements.
    """

    def __init__(self, elements: Sequence[Hashable], leq: Callable[[Hashable, Hashable], bool],
                 name: str = "poset") -> None:
        self.name = name
        self.elements = list(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise PosetError(f"{name}: duplicate elements")
        m = len(self.elements)
        rel = np.zeros((m, m), dtype=bool)
        for i, x in enumerate(self.elements):
            for j, y in enumerate(self.elements):
                rel[i, j] = bool(leq(x, y))
        self.rel = rel
        self._validate()
        # strict down-sets, by index, in a linear extension order
        self._order = sorted(range(m), key=lambda i: int(rel[:, i].sum()))
        self._memo: dict[tuple[int, int], int] = {}
        self._lock = threading.Lock()

    def _validate(self) -> None:
        rel = self.rel
        m = len(self.elements)
        for i in range(m):
            if not rel[i, i]:
                raise PosetError(f"{self.name}: not reflexive at {self.elements[i]}")
        both = rel & rel.T
        np.fill_diagonal(both, False)
        if both.any():
            i, j = map(int, np.argwhere(both)[0])
            raise PosetError(f"{self.name}: antisymmetry fails for {self.elements[i]}, {self.elements[j]}")
        r = rel.astype(np.int64)
        through = (r @ r) > 0
        bad = through & ~rel
        if bad.any():
            i, k = map(int, np.argwhere(bad)[0])
            j = int(np.argwhere(rel[i] & rel[:, k])[0][0])
            raise PosetError(
                f"{self.name}: transitivity fails for ({self.elements[i]}, {self.elements[j]}, {self.elements[k]})"
            )

    def __len__(self) -> int:
        return len(self.elements)

    def leq(self, x, y) -> bool:
        return bool(self.rel[self.index[x], self.index[y]])

    def content_hash(self) -> str:
        h = hashlib.sha256()
        for e in self.elements:
            h.update(str(e).encode())
            h.update(b"\0")
        h.update(np.packbits(self.rel).tobytes())
        return h.hexdigest()

    def bottom(self):
        m = len(self)
        for i in range(m):
            if self.rel[i].all():
                return self.elements[i]
        raise PosetError(f"{self.name}: no least element")

    def top(self):
        m = len(self)
        for i in range(m):
            if self.rel[:, i].all():
                return self.elements[i]
        raise PosetError(f"{self.name}: no greatest element")

    def _row(self, i: int) -> None:
        """Fill mu(i, .) for every element above i."""
        rel = self.rel
        vals: dict[int, int] = {}
        for j in self._order:
            if not rel[i, j]:
                continue
            if j == i:
                vals[j] = 1
                continue
            vals[j] = -sum(v for z, v in vals.items() if rel[z, j] and z != j)
        with self._lock:
            for j, v in vals.items():
                self._memo.setdefault((i, j), v)

    def mu(self, x, y) -> int:
        i, j = self.index[x], self.index[y]
        if not self.rel[i, j]:
            raise PosetError(f"mu({x}, {y}) needs {x} <= {y}")
        key = (i, j)
        if key not in self._memo:
            self._row(i)
        return self._memo[key]

    def mu_or_zero(self, x, y) -> int:
        return self.mu(x, y) if self.leq(x, y) else 0

    def mu_table(self) -> list[list[int]]:
        """Rows [i, j, mu] for all comparable pairs, in index order."""
        out = []
        for i in range(len(self)):
            for j in range(len(self)):
                if self.rel[i, j]:
                    out.append([i, j, self.mu(self.elements[i], self.elements[j])])
        return out

    def load_mu_table(self, rows: list[list[int]]) -> None:
        with self._lock:
            for i, j, v in rows:
                if not self.rel[i, j]:
                    raise PosetError("cached table does not fit this poset")
                self._memo[(i, j)] = v

    def subposet(self, keep: Callable[[Hashable], bool], name: str | None = None) -> PosetTable:
        els = [e for e in self.elements if keep(e)]
        return PosetTable(els, self.leq, name or f"{self.name}/sub")

    def interval(self, x, y) -> list:
        i, j = self.index[x], self.index[y]
        return [e for k, e in enumerate(self.elements) if self.rel[i, k] and self.rel[k, j]]


def mobius(poset: PosetTable, x, y) -> int:
    return poset.mu(x, y)


def mobius_law_violations(poset: PosetTable) -> list[tuple]:
    """Pairs x <= y where sum_{x<=z<=y} mu(x, z) != [x == y]."""
    bad = []
    rel = poset.rel
    els = poset.elements
    for i, x in enumerate(els):
        for j, y in enumerate(els):
            if not rel[i, j]:
                continue
            total = sum(poset.mu(x, els[k]) for k in range(len(els)) if rel[i, k] and rel[k, j])
            if total != (1 if i == j else 0):
                bad.append((x, y, total))
    return bad


# -- concrete posets --------------------------------------------------------------

MAX_IMP_N = 5
MAX_MR_POSET_N = 4


def enumerate_imp_sublattices(n: int) -> PosetTable:
    """Implication sublattices of [0, 1] in L_n, ordered by inclusion of their element sets."""
    if not 1 <= n <= MAX_IMP_N:
        raise ValueError(f"implication poset supports 1 <= n <= {MAX_IMP_N}, got {n}")
    els = sa.enumerate_imp_structural(n)
    sets = {b: b.elements() for b in els}
    return PosetTable(els, lambda x, y: sets[x] <= sets[y], f"Imp({n})")


def mr_poset(n: int) -> PosetTable:
    """MR-subalgebras of L_n ordered by inclusion."""
    if not 1 <= n <= MAX_MR_POSET_N:
        raise ValueError(f"MR-subalgebra poset supports 1 <= n <= {MAX_MR_POSET_N}, got {n}")
    return PosetTable(sa.enumerate_subalgebras(n), sa.includes, f"MR({n})")


# -- closed forms on the implication poset ---------------------------------------


def mu_impl_formula(t: sa.TypeVector, n: int) -> int:
    """(-1)^(n-r) (n-r)! prod_i [(-1)^(i-1) (i-1)!]^(t_i), r = sum i t_i (support size)."""
    if t.n != n:
        raise ValueError(f"type has length {t.n}, expected {n}")
    r = t.r
    if r > n:
        raise ValueError("invalid type")
    val = (-1) ** (n - r) * factorial(n - r)
    for i, ti in enumerate(t.t, start=1):
        val *= ((-1) ** (i - 1) * factorial(i - 1)) ** ti
    return val


def mu_impl_formula_alt(t: sa.TypeVector, n: int) -> int:
    """Second printed form: (-1)^(n-k) (n-r)! prod_i [(i-1)!]^(t_i), k = sum t_i."""
    val = (-1) ** (n - t.k) * factorial(n - t.r)
    for i, ti in enumerate(t.t, start=1):
        val *= factorial(i - 1) ** ti
    return val


def mu_one_printed(n: int) -> int:
    """The printed special value mu({1}, B) = n!."""
    return factorial(n)


@dataclass
class ImplAuditRow:
    element: str
    type: str
    formula: int
    oracle: int

    @property
    def agrees(self) -> bool:
        return self.formula == self.oracle


def impl_formula_audit(n: int) -> list[ImplAuditRow]:
    """Compare the closed form with the poset oracle on every interval [A, B_n]."""
    p = enumerate_imp_sublattices(n)
    topel = p.top()
    rows = []
    for a in p.elements:
        rows.append(ImplAuditRow(str(a), str(a.type_vector()), mu_impl_formula(a.type_vector(), n), p.mu(a, topel)))
    return rows


# -- closure-operator audit --------------------------------------------------------


@dataclass
class Fiber:
    closed: str
    members: list[str]
    fiber_sum: int
    mu_closed: int

    @property
    def match(self) -> bool:
        return self.fiber_sum == self.mu_closed

    def to_json(self) -> dict:
        return {
            "closed": self.closed,
            "members": self.members,
            "fiber_sum": self.fiber_sum,
            "mu_closed": self.mu_closed,
            "match": self.match,
        }


@dataclass
class ClosureReport:
    y: str
    y_closed: bool
    fibers: list[Fiber] = field(default_factory=list)

    @property
    def matches(self) -> bool:
        return all(f.match for f in self.fibers)

    def fiber_of(self, closed_label: str) -> Fiber:
        for f in self.fibers:
            if f.closed == closed_label:
                return f
        raise KeyError(closed_label)


class ClosureLawError(ValueError):
    pass


def check_closure_laws(poset: PosetTable, cl: Callable) -> None:
    cache: dict = {}

    def cl(x, _f=cl):
        if x not in cache:
            cache[x] = _f(x)
        return cache[x]

    for x in poset.elements:
        cx = cl(x)
        if cx not in poset.index:
            raise ClosureLawError(f"closure of {x} is outside the poset")
        if not poset.leq(x, cx):
            raise ClosureLawError(f"closure is not extensive at {x}")
        if cl(cx) != cx:
            raise ClosureLawError(f"closure is not idempotent at {x}")
    for x in poset.elements:
        for y in poset.elements:
            if poset.leq(x, y) and not poset.leq(cl(x), cl(y)):
                raise ClosureLawError(f"closure is not monotone at ({x}, {y})")


def closure_audit(poset: PosetTable, cl: Callable, y) -> ClosureReport:
    """Check sum_{cl(x) = z} mu(y, x) against the Möbius function of the closed elements.

    For y not closed every fibre sum is expected to vanish.
    """
    cmap = {x: cl(x) for x in poset.elements}
    check_closure_laws(poset, lambda x: cmap[x] if x in cmap else cl(x))
    cl = cmap.__getitem__
    closed = poset.subposet(lambda e: cl(e) == e, name=f"{poset.name}-closed")
    y_closed = cl(y) == y
    report = ClosureReport(str(y), y_closed)
    fibers: dict = {z: [] for z in closed.elements}
    for x in poset.elements:
        fibers[cl(x)].append(x)
    for z in closed.elements:
        members = fibers[z]
        s = sum(poset.mu_or_zero(y, x) for x in members)
        expected = closed.mu_or_zero(y, z) if y_closed else 0
        report.fibers.append(Fiber(str(z), [str(x) for x in members], s, expected))
    return report


# -- mu({1}, L_n) -------------------------------------------------------------------


def stirling2(n: int, m: int) -> int:
    if n < 0 or m < 0 or m > n:
        if n >= 0 and m > n:
            return 0
        raise ValueError(f"stirling2({n}, {m}) out of range")
    row = [1] + [0] * m
    for i in range(1, n + 1):
        for j in range(min(i, m), 0, -1):
            row[j] = j * row[j] + row[j - 1]
        row[0] = 0
    return row[m]


MAX_RECURRENCE_N = 12


def mr_mobius_bruteforce(n: int, poset: PosetTable | None = None) -> int:
    p = poset if poset is not None else mr_poset(n)
    return p.mu(sa.trivial(n), sa.whole(n))


def mr_recurrence_paper(n: int) -> Fraction:
    """Solve sum_{m=ceil(n/2)}^{n} S(n,m) a_m / 2^m = n! for a_n, recursively, as printed."""
    if not 1 <= n <= MAX_RECURRENCE_N:
        raise ValueError(f"recurrence supports 1 <= n <= {MAX_RECURRENCE_N}")
    a: dict[int, Fraction] = {}
    for j in range(1, n + 1):
        lo = -(-j // 2)
        rest = sum((Fraction(stirling2(j, m)) * a[m] / 2**m for m in range(lo, j)), Fraction(0))
        a[j] = (factorial(j) - rest) * 2**j / stirling2(j, j)
    return a[n]


def top_fiber_count(n: int, m: int) -> int:
    """Subalgebras of dimension m whose closure is L_n.

    Closure of a subalgebra to L_n forces full support with blocks of size at
    most two, each pair block carrying opposite signs: choose which 2(n-m)
    coordinates are paired and a perfect matching on them.
    """
    if not 0 <= m <= n:
        raise ValueError("need 0 <= m <= n")
    pairs = n - m
    singles = 2 * m - n
    if singles < 0:
        return 0
    return factorial(n) // (factorial(singles) * factorial(pairs) * 2**pairs)


def closed_top_value(n: int) -> int:
    """mu({1}, L_n) in the poset of closed elements, i.e. mu({1}, [0,1]) on implication sublattices."""
    return (-1) ** n * factorial(n)


def mr_recurrence_adjudicated(n: int) -> int:
    """a_n = mu_closed - sum_{m<n} F(n, m) a_m with enumeration-audited F and mu_closed."""
    if not 1 <= n <= MAX_RECURRENCE_N:
        raise ValueError(f"recurrence supports 1 <= n <= {MAX_RECURRENCE_N}")
    a: dict[int, int] = {}
    for j in range(1, n + 1):
        lo = -(-j // 2)
        a[j] = closed_top_value(j) - sum(top_fiber_count(j, m) * a[m] for m in range(lo, j))
    return a[n]


def top_fiber_census(n: int) -> dict[int, int]:
    """Enumerated fibre sizes over L_n by dimension (audit of ``top_fiber_count``)."""
    counts: dict[int, int] = {}
    full = sa.whole(n)
    for a in sa.enumerate_subalgebras(n):
        if sa.subalgebra_closure(a) == full:
            counts[a.k] = counts.get(a.k, 0) + 1
    return dict(sorted(counts.items()))


def boolean_locator_census(n: int, m: int, closing_to_top: bool = False) -> int:
    """Subalgebras of dimension m whose locator B is a Boolean subalgebra of [0, 1].

    With ``closing_to_top`` only those whose pair closure locates L_n are counted.
    """
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got m={m}, n={n}")
    full = sa.whole(n)
    count = 0
    for a in sa.enumerate_subalgebras(n):
        if a.k != m:
            continue
        p = sa.locator_of(a)
        if not p.B.is_boolean():
            continue
        if closing_to_top and sa.locate(sa.pair_closure(p)) != full:
            continue
        count += 1
    return count


def counting_lemma_value(n: int, m: int) -> int:
    return 2 ** (n - m) * stirling2(n, m)


def fraction_json(v: Fraction | int):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return v


def mobius_report(n: int, poset: PosetTable | None = None) -> dict:
    """Side-by-side values for mu({1}, L_n) plus the closure fibres over L_n.

    The brute force column and the fibres are only available for n <= 4.
    """
    report: dict = {"n": n}
    printed = mr_recurrence_paper(n)
    adjudicated = mr_recurrence_adjudicated(n)
    report["mu_recurrence_paper"] = fraction_json(printed)
    report["mu_recurrence_adjudicated"] = adjudicated
    discrepancies = []
    if n <= MAX_MR_POSET_N:
        p = poset if poset is not None else mr_poset(n)
        brute = mr_mobius_bruteforce(n, p)
        report["mu_bruteforce"] = brute
        rep = closure_audit(p, sa.subalgebra_closure, sa.trivial(n))
        top_label = str(sa.whole(n))
        report["closure_fibers"] = [f.to_json() for f in rep.fibers if f.closed == top_label]
        report["closure_theorem_holds"] = rep.matches
        if printed != brute:
            discrepancies.append({
                "check": "mu_recurrence_paper",
                "printed": fraction_json(printed),
                "oracle": brute,
            })
        if adjudicated != brute:
            discrepancies.append({"check": "mu_recurrence_adjudicated", "printed": adjudicated, "oracle": brute})
        mu_closed = rep.fiber_of(top_label).mu_closed
        if mu_closed != factorial(n):
            discrepancies.append({"check": "mu_closed_top", "printed": factorial(n), "oracle": mu_closed})
    else:
        report["mu_bruteforce"] = None
        report["closure_fibers"] = []
        report["closure_theorem_holds"] = None
        if printed != adjudicated:
            discrepancies.append({
                "check": "mu_recurrence_paper",
                "printed": fraction_json(printed),
                "oracle": adjudicated,
            })
    report["discrepancies"] = discrepancies
    report["adjudication"] = {
        "closed_value": closed_top_value(n),
        "fiber_counts": {str(m): top_fiber_count(n, m) for m in range(-(-n // 2), n + 1)},
        "printed_coefficients": {str(m): counting_lemma_value(n, m) for m in range(-(-n // 2), n + 1)},
    }
    return report
