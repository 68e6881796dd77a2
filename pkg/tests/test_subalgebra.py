import json
from itertools import combinations

import networkx as nx
import pytest

from cubemob import autgroup as ag
from cubemob import faces as fc
from cubemob import subalgebra as sa
from cubemob.faces import parse_face as F
from cubemob.subalgebra import ImpSublattice, LocatorPair, MRSubalgebra

SUBS = {n: sa.enumerate_subalgebras(n) for n in (1, 2, 3)}
ANTIDIAG = MRSubalgebra.make(2, [(0b11, 0b01)])
DIAG = MRSubalgebra.make(2, [(0b11, 0b11)])
AXIS1 = MRSubalgebra.make(2, [(0b01, 0b01)])


def faceset(*lits):
    return frozenset(map(F, lits))


def all_locator_pairs(n):
    out = []
    for b in sa.enumerate_imp_structural(n):
        for c in fc.all_faces(n):
            if c.plus == 0 and c.fixed & ~b.support == 0:
                out.append(LocatorPair(c, b))
    return out


PAIRS = {n: all_locator_pairs(n) for n in (1, 2, 3)}


# -- materialisation and closure --------------------------------------------------------


def test_materialize_examples():
    assert sa.materialize(sa.trivial(2)) == {fc.top(2)}
    assert sa.materialize(ANTIDIAG) == faceset("**", "+-", "-+")
    assert sa.materialize(sa.whole(2)) == frozenset(fc.all_faces(2))


def test_generated_closure_examples():
    assert sa.generated_closure([fc.top(2)]) == {fc.top(2)}
    assert sa.generated_closure([F("+-")]) == faceset("**", "+-", "-+")
    assert sa.generated_closure([F("+*"), F("*+")]) == frozenset(fc.all_faces(2))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_materializations_are_closed_copies_of_lk(n):
    for a in SUBS[n]:
        m = sa.materialize(a)
        assert len(m) == 3**a.k
        assert sa.generated_closure(m) == m
        assert sa.from_faces(m) == a


@pytest.mark.parametrize("n,count", [(1, 2), (2, 6), (3, 24)])
def test_enumeration_matches_closure_oracle(n, count):
    oracle = set(sa.enumerate_by_closure(n))
    structural = [sa.materialize(a) for a in SUBS[n]]
    assert len(oracle) == count == len(structural) == len(set(structural))
    assert oracle == set(structural)


@pytest.mark.parametrize("n,count", [(4, 116), (5, 648), (6, 4088)])
def test_enumeration_counts(n, count):
    subs = sa.enumerate_subalgebras(n)
    assert len(subs) == len(set(subs)) == count
    assert subs == sorted(subs)


def test_enumeration_range():
    with pytest.raises(ValueError):
        sa.enumerate_subalgebras(0)
    with pytest.raises(ValueError):
        sa.enumerate_by_closure(4)


def test_from_faces_rejects_non_subalgebra():
    with pytest.raises(ValueError):
        sa.from_faces(faceset("**", "+-"))


def test_json_and_text():
    assert str(ANTIDIAG) == "12:+-"
    assert str(sa.trivial(3)) == "{1}"
    assert ANTIDIAG.to_json() == {"n": 2, "blocks": [{"coords": [1, 2], "signs": "+-"}]}
    for a in SUBS[3]:
        assert MRSubalgebra.from_json(json.loads(sa.dumps(a))) == a


def test_canonical_sign():
    assert MRSubalgebra.make(2, [(0b11, 0b10)]) == ANTIDIAG
    with pytest.raises(ValueError):
        MRSubalgebra.make(2, [(0b11, 0b01), (0b01, 0b01)])


# -- types ----------------------------------------------------------------------------------


def test_type_examples():
    t = sa.type_of(sa.trivial(3))
    assert t.t == (0, 0, 0) and t.r == 0 and t.k == 0
    t = sa.type_of(sa.whole(3))
    assert t.t == (3, 0, 0) and t.r == t.k == 3
    t = sa.type_of(ANTIDIAG)
    assert t.t == (0, 1) and t.r == 2 and t.k == 1
    assert sum(sa.type_of(a).t == (0, 1) for a in SUBS[2]) == 2


@pytest.mark.parametrize("n", [1, 2, 3])
def test_type_agrees_with_coatom_count(n):
    for a in SUBS[n]:
        assert sa.type_from_coatoms(sa.materialize(a)) == sa.type_of(a)


def test_all_types_are_realised():
    for n in (1, 2, 3, 4):
        assert set(sa.all_types(n)) == {sa.type_of(a) for a in sa.enumerate_subalgebras(n)}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_same_type_iff_same_orbit(n):
    auts = list(ag.enumerate_aut(n))
    mats = {a: sa.materialize(a) for a in SUBS[n]}
    for a in SUBS[n]:
        images = {frozenset(phi(x) for x in mats[a]) for phi in auts}
        for b in SUBS[n]:
            assert (mats[b] in images) == (sa.type_of(a) == sa.type_of(b))


# -- inclusion ---------------------------------------------------------------------------------


def test_includes_examples():
    assert all(sa.includes(sa.trivial(2), a) for a in SUBS[2])
    assert sa.includes(AXIS1, sa.whole(2))
    assert not sa.includes(ANTIDIAG, AXIS1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_includes_is_set_inclusion(n):
    mats = {a: sa.materialize(a) for a in SUBS[n]}
    for a in SUBS[n]:
        for b in SUBS[n]:
            assert sa.includes(a, b) == (mats[a] <= mats[b])


# -- Boolean sums and implication sublattices ------------------------------------------------


def test_plus_a_examples():
    zero = fc.base_vertex(2)
    assert sa.plus_a(F("-*"), F("*-"), zero) == fc.top(2)
    for a in fc.all_faces(2):
        for c in fc.all_faces(2):
            assert sa.plus_a(c, c, a) == a
            assert sa.plus_a(c, a, a) == fc.join(c, a)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_imp_sublattices_match_closure_oracle(n):
    unit = [x for x in fc.all_faces(n) if sa.in_unit_interval(x)]
    oracle = set()
    for r in range(len(unit) + 1):
        for gens in combinations(unit, r):
            oracle.add(sa.imp_closure([fc.top(n), *gens]))
    structural = [b.elements() for b in sa.enumerate_imp_structural(n)]
    assert len(structural) == len(set(structural))
    assert oracle == set(structural)
    for b in sa.enumerate_imp_structural(n):
        assert sa.imp_sublattice_from_set(b.elements()) == b
        assert all((x in b) == (x in b.elements()) for x in fc.all_faces(n))


def test_imp_sublattice_json():
    b = ImpSublattice.make(3, [0b011, 0b100])
    assert b.to_json() == {"support": [1, 2, 3], "partition": [[1, 2], [3]]}
    assert ImpSublattice.from_json(b.to_json(), 3) == b


# -- locator pairs ---------------------------------------------------------------------------------


def test_locate_examples():
    n = 2
    zero = fc.base_vertex(n)
    assert sa.locate(LocatorPair(fc.top(n), sa.top_only(n))) == sa.trivial(n)
    assert sa.locate(LocatorPair(zero, sa.unit_interval(n))) == sa.whole(n)
    p = LocatorPair(F("-*"), ImpSublattice.make(2, [0b11]))
    assert sa.materialize(sa.locate(p)) == faceset("**", "+-", "-+")


def test_locator_pair_validation():
    with pytest.raises(ValueError):
        LocatorPair(F("+*"), sa.unit_interval(2))
    with pytest.raises(ValueError):
        LocatorPair(F("*-"), ImpSublattice.make(2, [0b01]))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_locate_agrees_with_closure(n):
    for p in PAIRS[n]:
        assert sa.materialize(sa.locate(p)) == sa.locate_by_closure(p)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_locator_round_trip(n):
    for a in SUBS[n]:
        p = sa.locator_of(a)
        assert sa.locate(p) == a
        v = sa.subalgebra_vertices(a)[0]
        assert sa.filter_image(a, v) == p.B.elements()


def test_pair_order_examples():
    zero = fc.base_vertex(2)
    full = sa.unit_interval(2)
    assert sa.pair_equiv(LocatorPair(F("-*"), full), LocatorPair(zero, full))
    bottom = LocatorPair(fc.top(2), sa.top_only(2))
    assert all(sa.pair_leq(bottom, p) for p in PAIRS[2])
    assert all(sa.pair_leq(p, p) for p in PAIRS[2])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_pair_leq_is_inclusion_of_located(n):
    located = {p: sa.locate(p) for p in PAIRS[n]}
    for p in PAIRS[n]:
        for q in PAIRS[n]:
            assert sa.pair_leq(p, q) == sa.includes(located[p], located[q]), (str(p), str(q))


def test_pair_closure_examples():
    p = LocatorPair(F("-*"), ImpSublattice.make(2, [0b11]))
    assert sa.pair_closure(p) == LocatorPair(F("-*"), sa.unit_interval(2))
    q = LocatorPair(F("-"), ImpSublattice.make(1, [0b1]))
    assert sa.is_closed(q) and sa.pair_closure(q) == q


@pytest.mark.parametrize("n", [1, 2, 3])
def test_pair_closure_laws(n):
    for p in PAIRS[n]:
        cp = sa.pair_closure(p)
        assert cp.B.elements() == sa.imp_closure(p.B.elements() | {p.c})
        assert sa.pair_leq(p, cp)
        assert sa.pair_closure(cp) == cp
        base = LocatorPair(p.B.min_face, p.B)
        assert sa.is_closed(p) == (p.c in p.B) == sa.pair_equiv(p, base)
    for p in PAIRS[n]:
        for q in PAIRS[n]:
            if sa.pair_leq(p, q):
                assert sa.pair_leq(sa.pair_closure(p), sa.pair_closure(q))


# -- order structure of the subalgebra poset ----------------------------------------------------


def _reindex(a: MRSubalgebra, coords: list[int]) -> MRSubalgebra:
    """Restrict ``a`` to blocks inside ``coords`` and renumber them 0..len-1."""
    pos = {c: i for i, c in enumerate(coords)}

    def move(mask):
        return sum(1 << pos[i] for i in sa.bits(mask))

    keep = [(s, sig) for s, sig in a.blocks if all(i in pos for i in sa.bits(s))]
    return MRSubalgebra.make(len(coords), [(move(s), move(sig)) for s, sig in keep])


def test_upper_intervals_factor_as_refinements_times_smaller_cube():
    n = 3
    for a in SUBS[n]:
        up = [b for b in SUBS[n] if sa.includes(a, b)]
        outside = [i for i in range(n) if not a.support >> i & 1]
        zero_a = sa.locator_of(a).B
        refinements = [q for q in sa.enumerate_imp_structural(n) if q.support == a.support and zero_a.issubset(q)]
        lower = sa.enumerate_subalgebras(len(outside)) if outside else [sa.trivial(0)]

        def phi(b):
            inner = ImpSublattice.make(n, [s for s, _ in b.blocks if s & a.support])
            return inner, _reindex(b, outside)

        images = [phi(b) for b in up]
        assert len(set(images)) == len(up) == len(refinements) * len(lower)
        assert {i for i, _ in images} == set(refinements)
        for b1, (q1, l1) in zip(up, images):
            for b2, (q2, l2) in zip(up, images):
                assert sa.includes(b1, b2) == (q1.issubset(q2) and sa.includes(l1, l2))


def _interval_graph(n, a):
    below = [b for b in SUBS[n] if sa.includes(b, a)]
    g = nx.DiGraph()
    g.add_nodes_from(below)
    g.add_edges_from((x, y) for x in below for y in below if x != y and sa.includes(x, y))
    return g


def test_lower_intervals_are_isomorphic_iff_same_dimension():
    n = 3
    graphs = {a: _interval_graph(n, a) for a in SUBS[n]}
    for a1 in SUBS[n]:
        for a2 in SUBS[n]:
            if a1 < a2:
                continue
            iso = nx.is_isomorphic(graphs[a1], graphs[a2])
            assert iso == (a1.k == a2.k), (str(a1), str(a2))
