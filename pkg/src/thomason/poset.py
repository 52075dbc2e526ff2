"""Finite models of Spec R: primes ordered by inclusion, Thomason subsets
and decreasing Thomason filtrations, weak cousin checks and verdicts.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import (BudgetExceeded, CycleDetected, DuplicateId, EmptySubset, InvalidFiltration,
                     InvalidPoset, UnknownPoint)

Subset = FrozenSet[str]
INF = float("inf")


@dataclass(frozen=True)
class PrimePoint:
    id: str
    label: str = ""
    singular: bool = False

    def __post_init__(self):
        if not self.label:
            object.__setattr__(self, "label", self.id)


class SpectrumPoset:
    """Points with the relation ``q <= p`` meaning the prime ``q`` lies in ``p``.

    ``order`` may be any relation (e.g. covering pairs); it is closed
    transitively and reflexively on construction, and cycles are rejected.
    The declaration order of ``points`` fixes every tie-break.
    """

    def __init__(self, points: Sequence[PrimePoint], order: Iterable[Tuple[str, str]] = ()):
        ids = [p.id for p in points]
        seen = set()
        for i in ids:
            if i in seen:
                raise DuplicateId("duplicate point id %r" % i, point=i)
            seen.add(i)
        self.points: Tuple[PrimePoint, ...] = tuple(points)
        self.ids: Tuple[str, ...] = tuple(ids)
        self.index = {pid: k for k, pid in enumerate(ids)}
        self._by_id = {p.id: p for p in points}
        above: Dict[str, set] = {i: {i} for i in ids}
        for q, p in order:
            self._need(q)
            self._need(p)
            above[q].add(p)
        changed = True
        while changed:
            changed = False
            for q in ids:
                extra = set()
                for p in above[q]:
                    extra |= above[p]
                if not extra <= above[q]:
                    above[q] |= extra
                    changed = True
        for q in ids:
            for p in above[q]:
                if p != q and q in above[p]:
                    raise CycleDetected("cycle between %r and %r" % (q, p), points=[q, p])
        self._up = {i: frozenset(above[i]) for i in ids}
        self._down = {i: frozenset(q for q in ids if i in above[q]) for i in ids}
        self._heights: Dict[str, int] = {}
        for i in sorted(ids, key=lambda x: len(self._down[x])):
            below = [q for q in self._down[i] if q != i]
            self._heights[i] = 1 + max((self._heights[q] for q in below), default=-1)
        # regular points generize: the singular locus is closed under going up
        for pt in points:
            if pt.singular:
                for p in self._up[pt.id]:
                    if not self._by_id[p].singular:
                        raise InvalidPoset("%r is singular but %r above it is not" % (pt.id, p),
                                           point=pt.id, above=p)

    def _need(self, pid):
        if pid not in self.index:
            raise UnknownPoint("unknown point %r" % pid, point=pid)

    # basic structure

    def __len__(self):
        return len(self.ids)

    def __contains__(self, pid):
        return pid in self.index

    def point(self, pid: str) -> PrimePoint:
        self._need(pid)
        return self._by_id[pid]

    @property
    def full(self) -> Subset:
        return frozenset(self.ids)

    def leq(self, q: str, p: str) -> bool:
        self._need(q)
        self._need(p)
        return p in self._up[q]

    def up(self, p: str) -> Subset:
        self._need(p)
        return self._up[p]

    def down(self, p: str) -> Subset:
        self._need(p)
        return self._down[p]

    def covers(self, p: str) -> List[str]:
        """Primes maximal under ``p`` (no point strictly between), in declaration order."""
        below = [q for q in self._down[p] if q != p]
        return [q for q in self.ids if q in below
                and not any(r != q and q in self._down[r] for r in below)]

    def height(self, p: str) -> int:
        self._need(p)
        return self._heights[p]

    def minimal_points(self) -> List[str]:
        return [p for p in self.ids if self._down[p] == {p}]

    def maximal_points(self) -> List[str]:
        return [p for p in self.ids if self._up[p] == {p}]

    def sort(self, s: Iterable[str]) -> List[str]:
        return sorted(s, key=self.index.__getitem__)

    def subset(self, s: Iterable[str]) -> Subset:
        s = frozenset(s)
        for p in s:
            self._need(p)
        return s

    def is_up_closed(self, s: Iterable[str]) -> bool:
        s = self.subset(s)
        return all(self._up[p] <= s for p in s)

    def up_closure(self, s: Iterable[str]) -> Subset:
        out = set()
        for p in self.subset(s):
            out |= self._up[p]
        return frozenset(out)

    def up_closed_subsets(self) -> List[Subset]:
        """All up-closed subsets, ordered by size then lexicographically by index."""
        found = {frozenset()}
        frontier = [frozenset()]
        while frontier:
            nxt = []
            for s in frontier:
                for p in self.ids:
                    if p not in s:
                        t = s | self._up[p]
                        if t not in found:
                            found.add(t)
                            nxt.append(t)
            frontier = nxt
        return sorted(found, key=lambda s: (len(s), sorted(self.index[p] for p in s)))

    def is_irreducible(self) -> bool:
        return len(self.minimal_points()) == 1

    def has_singular(self) -> bool:
        return any(p.singular for p in self.points)

    def restrict(self, s: Iterable[str]) -> "SpectrumPoset":
        s = self.subset(s)
        pts = [p for p in self.points if p.id in s]
        rel = [(q, p) for q in s for p in self._up[q] if p in s and p != q]
        return SpectrumPoset(pts, rel)

    def relabel(self, mapping: Dict[str, str]) -> "SpectrumPoset":
        pts = [PrimePoint(mapping[p.id], p.label, p.singular) for p in self.points]
        rel = [(mapping[q], mapping[p]) for q in self.ids for p in self._up[q] if p != q]
        return SpectrumPoset(pts, rel)

    def covering_pairs(self) -> List[Tuple[str, str]]:
        return [(q, p) for p in self.ids for q in self.covers(p)]

    def describe(self) -> dict:
        return {
            "points": [{"id": p.id, "singular": p.singular} for p in self.points],
            "covers": ["%s < %s" % qp for qp in self.covering_pairs()],
        }

    def __repr__(self):
        return "SpectrumPoset(%s; %s)" % (
            ",".join(("*" if p.singular else "") + p.id for p in self.points),
            ", ".join("%s<%s" % qp for qp in self.covering_pairs()))

    @classmethod
    def chain(cls, ids: Sequence[str], singular: Iterable[str] = ()) -> "SpectrumPoset":
        sing = set(singular)
        return cls([PrimePoint(i, singular=i in sing) for i in ids],
                   list(zip(ids[:-1], ids[1:])))

    @classmethod
    def antichain(cls, ids: Sequence[str], singular: Iterable[str] = ()) -> "SpectrumPoset":
        sing = set(singular)
        return cls([PrimePoint(i, singular=i in sing) for i in ids])


def validate_poset(points, order) -> SpectrumPoset:
    """Build a poset from raw points (ids or :class:`PrimePoint`) and a relation."""
    pts = [p if isinstance(p, PrimePoint) else PrimePoint(str(p)) for p in points]
    return SpectrumPoset(pts, order)


def is_up_closed(P: SpectrumPoset, s) -> bool:
    return P.is_up_closed(s)


def height_of_subset(P: SpectrumPoset, Z) -> float:
    """``inf{height(p) : up(p) in Z}``; ``inf`` for the empty set."""
    Z = P.subset(Z)
    hs = [P.height(p) for p in Z if P.up(p) <= Z]
    return min(hs) if hs else INF


def minimal_primes(P: SpectrumPoset, Z) -> List[str]:
    Z = P.subset(Z)
    if not Z:
        raise EmptySubset("minimal primes of the empty set")
    h = height_of_subset(P, Z)
    return [p for p in P.ids if p in Z and P.up(p) <= Z and P.height(p) == h]


class ThomasonFiltration:
    """A decreasing map ``i -> Z^i`` of up-closed subsets, constant outside a window.

    ``levels[k]`` is ``Z^(lo + k)``.  For ``i < lo`` the value is
    ``tail_above`` and for ``i > hi`` it is ``tail_below``; for a nonempty
    window these equal the boundary levels.  An empty window is written
    ``hi = lo - 1`` and then the tails alone define the filtration.
    Equality compares the functions on Z, not the representation.
    """

    __slots__ = ("poset", "lo", "hi", "levels", "tail_above", "tail_below")

    def __init__(self, poset: SpectrumPoset, lo: int, levels: Sequence[Iterable[str]] = (),
                 tail_above=None, tail_below=None):
        self.poset = poset
        self.levels = tuple(poset.subset(z) for z in levels)
        self.lo = lo
        self.hi = lo + len(self.levels) - 1
        if self.levels:
            ta = self.levels[0] if tail_above is None else poset.subset(tail_above)
            tb = self.levels[-1] if tail_below is None else poset.subset(tail_below)
            if ta != self.levels[0] or tb != self.levels[-1]:
                raise InvalidFiltration("tails must agree with the boundary levels")
        else:
            if tail_above is None or tail_below is None:
                raise InvalidFiltration("an empty window needs both tails")
            ta, tb = poset.subset(tail_above), poset.subset(tail_below)
        self.tail_above, self.tail_below = ta, tb
        seq = (ta,) + self.levels + (tb,)
        for k, z in enumerate(seq):
            if not poset.is_up_closed(z):
                raise InvalidFiltration("level %s is not up-closed" % poset.sort(z))
            if k and not z <= seq[k - 1]:
                raise InvalidFiltration("levels are not decreasing")

    # constructors

    @classmethod
    def constant(cls, P: SpectrumPoset, Z) -> "ThomasonFiltration":
        return cls(P, 0, [Z])

    @classmethod
    def standard(cls, P: SpectrumPoset, shift: int = 0) -> "ThomasonFiltration":
        """``Spec`` for ``i <= shift`` and empty above."""
        return cls(P, shift, [P.full, frozenset()])

    @classmethod
    def tilting(cls, P: SpectrumPoset, Z, shift: int = 0) -> "ThomasonFiltration":
        """``Spec`` for ``i <= shift``, ``Z`` at ``shift + 1``, empty beyond."""
        return cls(P, shift, [P.full, Z, frozenset()])

    @classmethod
    def from_function(cls, P, lo, hi, fn) -> "ThomasonFiltration":
        return cls(P, lo, [fn(i) for i in range(lo, hi + 1)])

    # evaluation

    def at(self, i: int) -> Subset:
        if i < self.lo:
            return self.tail_above
        if i > self.hi:
            return self.tail_below
        return self.levels[i - self.lo]

    def span(self, pad: int = 1) -> range:
        lo, hi = self.lo, max(self.hi, self.lo - 1)
        return range(lo - pad, hi + pad + 1)

    def _key(self):
        changes = []
        prev = self.tail_above
        for i in range(self.lo, self.hi + 2):
            z = self.at(i)
            if z != prev:
                changes.append((i, z))
                prev = z
        return (self.tail_above, tuple(changes))

    def __eq__(self, other):
        return isinstance(other, ThomasonFiltration) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def is_constant(self) -> bool:
        return not self._key()[1]

    def shifted(self, m: int) -> "ThomasonFiltration":
        """The filtration of the aisle ``U[-m]``: ``i -> Z^(i-m)``."""
        return ThomasonFiltration(self.poset, self.lo + m, self.levels, self.tail_above, self.tail_below)

    def window(self, lo: int, hi: int) -> "ThomasonFiltration":
        """Same function, represented on the window ``[lo, hi]``."""
        return ThomasonFiltration(self.poset, lo, [self.at(i) for i in range(lo, hi + 1)],
                                  self.at(lo - 1), self.at(hi + 1))

    def restrict(self, sub: SpectrumPoset) -> "ThomasonFiltration":
        keep = sub.full
        return ThomasonFiltration(sub, self.lo, [z & keep for z in self.levels],
                                  self.tail_above & keep, self.tail_below & keep)

    def intersect(self, other: "ThomasonFiltration") -> "ThomasonFiltration":
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        return ThomasonFiltration(self.poset, lo, [self.at(i) & other.at(i) for i in range(lo, hi + 1)],
                                  self.tail_above & other.tail_above, self.tail_below & other.tail_below)

    def transport(self, poset: SpectrumPoset, mapping: Dict[str, str]) -> "ThomasonFiltration":
        f = lambda z: frozenset(mapping[p] for p in z)
        return ThomasonFiltration(poset, self.lo, [f(z) for z in self.levels],
                                  f(self.tail_above), f(self.tail_below))

    def describe(self) -> dict:
        s = self.poset.sort
        return {
            "window": [self.lo, self.hi],
            "levels": {str(i): s(self.at(i)) for i in range(self.lo, self.hi + 1)},
            "tail_above": s(self.tail_above),
            "tail_below": s(self.tail_below),
        }

    def __repr__(self):
        s = self.poset.sort
        body = ", ".join("%d:{%s}" % (i, ",".join(s(self.at(i)))) for i in range(self.lo, self.hi + 1))
        return "Filtration(above={%s}; %s; below={%s})" % (
            ",".join(s(self.tail_above)), body, ",".join(s(self.tail_below)))


def recombine(P: SpectrumPoset, parts: Sequence[ThomasonFiltration]) -> ThomasonFiltration:
    """Levelwise union of filtrations living on disjoint pieces of ``P``."""
    if not parts:
        return ThomasonFiltration(P, 0, (), frozenset(), frozenset())
    lo = min(f.lo for f in parts)
    hi = max(max(f.hi, f.lo - 1) for f in parts)
    union = lambda i: frozenset().union(*(f.at(i) for f in parts))
    return ThomasonFiltration(P, lo, [union(i) for i in range(lo, hi + 1)], union(lo - 1), union(hi + 1))


# --- weak cousin, termination, components, localization ---------------------


def weak_cousin_check(P, Phi: ThomasonFiltration = None):
    """Accepts ``(P, Phi)`` or just ``Phi``.  Returns ``(True, None)`` or ``(False, witness)`` with ``witness = (i, p, q)``.

    ``p in Z^i``, ``q`` maximal under ``p`` and ``q`` not in ``Z^(i-1)``: the
    lexicographically first such triple (``i`` ascending, then declaration order).
    """
    if Phi is None:
        Phi = P
    P = Phi.poset
    for i in Phi.span(1):
        zi, prev = Phi.at(i), Phi.at(i - 1)
        for p in P.ids:
            if p not in zi:
                continue
            for q in P.covers(p):
                if q not in prev:
                    return False, (i, p, q)
    return True, None


def termination(Phi: ThomasonFiltration) -> Tuple[Subset, Subset]:
    return Phi.tail_above, Phi.tail_below


def connected_components(P: SpectrumPoset) -> List[SpectrumPoset]:
    """Components of the comparability graph, ordered by first declared point."""
    todo = list(P.ids)
    comps = []
    assigned = set()
    for start in todo:
        if start in assigned:
            continue
        comp = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in P.up(x) | P.down(x):
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        assigned |= comp
        comps.append(P.restrict(comp))
    return comps


def localize_filtration(P: SpectrumPoset, Phi: ThomasonFiltration, p: str):
    """Restrict to the primes inside ``p`` (a model of ``Spec R_p``)."""
    sub = P.restrict(P.down(p))
    return sub, Phi.restrict(sub)


# --- verdicts -----------------------------------------------------------------


class VerdictKind(str, enum.Enum):
    FailsWeakCousin = "FailsWeakCousin"
    RestrictsToBounded = "RestrictsToBounded"
    RestrictsToPerf = "RestrictsToPerf"
    BoundedOnPerf = "BoundedOnPerf"
    NoBoundedTStructure = "NoBoundedTStructure"
    OnlyTrivialOnPerf = "OnlyTrivialOnPerf"
    Trivial = "Trivial"
    Undetermined = "Undetermined"


# combination precedence across connected components, most decisive first
_PRECEDENCE = [VerdictKind.FailsWeakCousin, VerdictKind.OnlyTrivialOnPerf,
               VerdictKind.NoBoundedTStructure, VerdictKind.Undetermined,
               VerdictKind.RestrictsToBounded, VerdictKind.RestrictsToPerf]


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    certificate: dict = dc_field(default_factory=dict)
    components: Tuple["Verdict", ...] = ()

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value, "certificate": self.certificate}
        if self.components:
            out["components"] = [c.to_dict() for c in self.components]
        return out


def _classify_component(C: SpectrumPoset, Phi: ThomasonFiltration) -> Verdict:
    full, empty = C.full, frozenset()
    s = C.sort
    ta, tb = termination(Phi)
    if Phi.is_constant() and ta in (full, empty):
        return Verdict(VerdictKind.Trivial, {"constant": s(ta), "points": s(full)})
    ok, w = weak_cousin_check(Phi)
    if not ok:
        i, p, q = w
        return Verdict(VerdictKind.FailsWeakCousin, {"i": i, "p": p, "q": q, "points": s(full)})
    bounded = ta == full and tb == empty
    tails = {"tail_above": s(ta), "tail_below": s(tb), "points": s(full)}
    if not C.has_singular():
        if bounded:
            return Verdict(VerdictKind.BoundedOnPerf, tails)
        return Verdict(VerdictKind.RestrictsToPerf, tails)
    singular_max = [m for m in C.maximal_points() if C.point(m).singular]
    if C.is_irreducible():
        cert = dict(tails, reason="singular irreducible component admits only trivial t-structures")
        if bounded and singular_max:
            cert["obstruction"] = {"command": "obstruct", "maximal_point": singular_max[0]}
        return Verdict(VerdictKind.OnlyTrivialOnPerf, cert)
    if bounded:
        cert = dict(tails, reason="Koszul truncation at a singular maximal point is the residue field")
        if singular_max:
            cert["obstruction"] = {"command": "obstruct", "maximal_point": singular_max[0]}
        return Verdict(VerdictKind.NoBoundedTStructure, cert)
    cert = dict(tails, reason="singular reducible, non-terminating")
    # an empty level plus a level holding a singular maximal point is still obstructed
    hit = [m for m in singular_max if any(m in Phi.at(i) for i in Phi.span(1))]
    if tb == empty and hit:
        cert["obstruction"] = {"command": "obstruct", "maximal_point": hit[0],
                               "note": "an empty level and a singular maximal point in some level"}
    return Verdict(VerdictKind.Undetermined, cert)


def combine_verdicts(parts: Sequence[Verdict]) -> Verdict:
    """Combine per-component verdicts of a product decomposition."""
    parts = tuple(parts)
    kinds = [v.kind for v in parts]
    for k in _PRECEDENCE:
        if k in kinds:
            first = parts[kinds.index(k)]
            return Verdict(k, first.certificate, parts)
    if all(k == VerdictKind.Trivial for k in kinds):
        return Verdict(VerdictKind.Trivial, parts[0].certificate if len(parts) == 1 else {}, parts)
    if all(k == VerdictKind.BoundedOnPerf for k in kinds):
        return Verdict(VerdictKind.BoundedOnPerf, parts[0].certificate if len(parts) == 1 else {}, parts)
    # some component trivial, the others bounded: the product is not bounded
    return Verdict(VerdictKind.RestrictsToPerf, {"trivial_components": [
        v.certificate.get("points") for v in parts if v.kind == VerdictKind.Trivial]}, parts)


def classify(P: SpectrumPoset, Phi: ThomasonFiltration) -> Verdict:
    """Classify the t-structure of ``Phi`` on Perf, one connected component at a time."""
    comps = connected_components(P)
    parts = [_classify_component(C, Phi.restrict(C)) for C in comps]
    if len(parts) == 1:
        return parts[0]
    return combine_verdicts(parts)


# --- enumeration ----------------------------------------------------------------

CONSTRAINTS = ("all", "weak-cousin-only", "terminating-only")


def enumerate_filtrations(P: SpectrumPoset, lo: int, hi: int, constraint: str = "all",
                          budget: Optional[int] = None,
                          tails: Optional[Tuple[Iterable[str], Iterable[str]]] = None
                          ) -> Iterator[ThomasonFiltration]:
    """Every decreasing filtration with window ``[lo, hi]``, each exactly once.

    With ``tails`` fixed the boundary levels must equal them; an empty window
    (``hi < lo``) enumerates tail pairs only.  ``budget`` caps the number of
    emitted filtrations (``BudgetExceeded`` past it).
    """
    if constraint not in CONSTRAINTS:
        raise ValueError("constraint must be one of %s" % (CONSTRAINTS,))
    ups = P.up_closed_subsets()
    fixed = None
    if tails is not None:
        fixed = (P.subset(tails[0]), P.subset(tails[1]))
    n = hi - lo + 1
    count = 0

    def accept(f):
        if constraint == "weak-cousin-only":
            return weak_cousin_check(f)[0]
        if constraint == "terminating-only":
            return f.tail_above == P.full and f.tail_below == frozenset()
        return True

    def emit(f):
        nonlocal count
        count += 1
        if budget is not None and count > budget:
            raise BudgetExceeded("more than %d filtrations" % budget, budget=budget)
        return f

    if n <= 0:
        pairs = [fixed] if fixed else [(a, b) for a in ups for b in ups if b <= a]
        for a, b in pairs:
            f = ThomasonFiltration(P, lo, (), a, b)
            if accept(f):
                yield emit(f)
        return

    def rec(prefix):
        if len(prefix) == n:
            if fixed and prefix[-1] != fixed[1]:
                return
            f = ThomasonFiltration(P, lo, prefix)
            if accept(f):
                yield emit(f)
            return
        prev = prefix[-1] if prefix else None
        for z in reversed(ups):
            if prev is not None and not z <= prev:
                continue
            if not prefix and fixed and z != fixed[0]:
                continue
            yield from rec(prefix + [z])

    yield from rec([])
