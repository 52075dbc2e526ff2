from itertools import chain, combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from thomason import desk
from thomason.errors import BudgetExceeded, CycleDetected, DuplicateId, InvalidFiltration, InvalidPoset, UnknownPoint
from thomason.poset import (PrimePoint, SpectrumPoset, ThomasonFiltration, VerdictKind, classify,
                            connected_components, enumerate_filtrations, height_of_subset, localize_filtration,
                            minimal_primes, recombine, weak_cousin_check)


def _brute_up_sets(P):
    ids = P.ids
    out = []
    for s in chain.from_iterable(combinations(ids, k) for k in range(len(ids) + 1)):
        s = set(s)
        if all(q in s for p in s for q in P.up(p)):
            out.append(frozenset(s))
    return out


def _brute_count(P, n):
    ups = _brute_up_sets(P)
    return sum(1 for seq in product(ups, repeat=n) if all(b <= a for a, b in zip(seq, seq[1:])))


def diamond():
    return desk.q_x_y_poset()


def test_order_closure_and_heights():
    P = diamond()
    assert P.leq("0", "m") and not P.leq("px", "py")
    assert P.covers("m") == ["px", "py"]
    assert [P.height(p) for p in P.ids] == [0, 1, 1, 2]
    assert P.minimal_points() == ["0"] and P.maximal_points() == ["m"]
    assert P.up_closure(["px"]) == frozenset({"px", "m"})


def test_construction_errors():
    with pytest.raises(DuplicateId):
        SpectrumPoset([PrimePoint("a"), PrimePoint("a")])
    with pytest.raises(CycleDetected):
        SpectrumPoset([PrimePoint("a"), PrimePoint("b")], [("a", "b"), ("b", "a")])
    with pytest.raises(UnknownPoint):
        SpectrumPoset([PrimePoint("a")], [("a", "z")])
    with pytest.raises(InvalidPoset):
        SpectrumPoset.chain(["0", "m"], singular=["0"])


@pytest.mark.parametrize("P", [desk.point(), desk.chain2(), desk.antichain_one_singular(), diamond()],
                         ids=["point", "chain", "antichain", "diamond"])
def test_up_closed_subsets_brute_force(P):
    assert sorted(map(sorted, P.up_closed_subsets())) == sorted(map(sorted, _brute_up_sets(P)))


@pytest.mark.parametrize("P", [desk.point(), desk.chain2(), desk.antichain_one_singular(), diamond()],
                         ids=["point", "chain", "antichain", "diamond"])
@pytest.mark.parametrize("lo,hi", [(0, 0), (-1, 1), (-2, 1)])
def test_enumeration_count_and_distinct(P, lo, hi):
    fs = list(enumerate_filtrations(P, lo, hi))
    assert len(fs) == _brute_count(P, hi - lo + 1)
    assert len(set(fs)) == len(fs)


def test_enumeration_constraints_and_budget():
    P = desk.chain2()
    wc = list(enumerate_filtrations(P, -1, 1, "weak-cousin-only"))
    assert wc and all(weak_cousin_check(f)[0] for f in wc)
    term = list(enumerate_filtrations(P, -1, 1, "terminating-only"))
    assert all(f.tail_above == P.full and not f.tail_below for f in term)
    with pytest.raises(BudgetExceeded):
        list(enumerate_filtrations(P, -3, 3, budget=5))
    tails = list(enumerate_filtrations(P, 0, -1))
    ups = _brute_up_sets(P)
    assert len(tails) == sum(1 for a in ups for b in ups if b <= a)


def test_filtration_equality_is_functional():
    P = desk.point()
    a = ThomasonFiltration.standard(P)
    b = ThomasonFiltration(P, -3, [P.full] * 4 + [frozenset()] * 2)
    assert a == b and hash(a) == hash(b)
    assert a.shifted(1).at(1) == P.full and a.shifted(1).at(2) == frozenset()
    assert ThomasonFiltration.constant(P, ["m"]).is_constant()
    with pytest.raises(InvalidFiltration):
        ThomasonFiltration(P, 0, [frozenset(), P.full])
    with pytest.raises(InvalidFiltration):
        ThomasonFiltration(desk.chain2(), 0, [["0"]])


def test_weak_cousin_witness_on_chain():
    P = desk.chain2()
    # m at level 0 but 0 missing at level -1
    Phi = ThomasonFiltration(P, 0, [["m"], []], tail_above=["m"])
    ok, w = weak_cousin_check(P, Phi)
    assert not ok and w == (-1, "m", "0")
    std = ThomasonFiltration(P, 0, [P.full, ["m"], []])
    assert weak_cousin_check(std) == (True, None)


def test_heights_and_minimal_primes():
    P = diamond()
    assert height_of_subset(P, ["px", "m"]) == 1
    assert set(minimal_primes(P, ["px", "py", "m"])) == {"px", "py"}
    assert height_of_subset(P, []) == float("inf")


def test_components_localization_recombine():
    P = desk.antichain_one_singular()
    comps = connected_components(P)
    assert [c.ids for c in comps] == [("a",), ("b",)]
    Phi = ThomasonFiltration(P, 0, [["a", "b"], ["b"], []])
    parts = [Phi.restrict(c) for c in comps]
    assert recombine(P, [p.transport(P, {q: q for q in p.poset.ids}) for p in parts]) == Phi
    sub, loc = localize_filtration(diamond(), ThomasonFiltration.standard(diamond()), "px")
    assert set(sub.ids) == {"0", "px"} and loc.at(0) == sub.full


def test_classify_examples():
    P = desk.antichain_one_singular()
    v = classify(P, ThomasonFiltration.standard(P))
    assert v.kind == VerdictKind.OnlyTrivialOnPerf
    assert [c.kind for c in v.components] == [VerdictKind.OnlyTrivialOnPerf, VerdictKind.BoundedOnPerf]
    R = desk.point()
    assert classify(R, ThomasonFiltration.constant(R, [])).kind == VerdictKind.Trivial
    two = SpectrumPoset.antichain(["a", "b"])
    mixed = ThomasonFiltration(two, 0, [["a", "b"], ["a"]])
    assert classify(two, mixed).kind == VerdictKind.RestrictsToPerf


@st.composite
def chain_filtrations(draw):
    P = desk.chain2()
    ups = P.up_closed_subsets()
    n = draw(st.integers(1, 5))
    # the up-sets of a chain are totally ordered, so sorting by size gives a decreasing sequence
    picks = draw(st.lists(st.sampled_from(ups), min_size=n, max_size=n))
    levels = sorted(picks, key=len, reverse=True)
    return ThomasonFiltration(P, draw(st.integers(-3, 3)), levels)


@settings(max_examples=80, deadline=None)
@given(chain_filtrations(), st.integers(-3, 3))
def test_shift_and_window_preserve_the_function(Phi, m):
    assert Phi.shifted(m).shifted(-m) == Phi
    W = Phi.window(Phi.lo - 2, Phi.hi + 2)
    assert all(W.at(i) == Phi.at(i) for i in range(Phi.lo - 4, Phi.hi + 5))
    assert Phi.intersect(Phi) == Phi
    assert Phi.shifted(m).at(3) == Phi.at(3 - m)


@settings(max_examples=80, deadline=None)
@given(chain_filtrations())
def test_weak_cousin_witness_is_genuine(Phi):
    ok, w = weak_cousin_check(Phi)
    if ok:
        P = Phi.poset
        for i in range(Phi.lo - 2, Phi.hi + 3):
            for p in Phi.at(i):
                assert all(q in Phi.at(i - 1) for q in P.covers(p))
    else:
        i, p, q = w
        assert p in Phi.at(i) and q in Phi.poset.covers(p) and q not in Phi.at(i - 1)
