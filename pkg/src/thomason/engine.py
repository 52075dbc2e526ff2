"""Aisles from filtrations and back, explicit truncations, and the perfectness obstruction.

Cut convention: ``truncate(C, Phi, n)`` splits ``C`` as
``tau^{<=n-1}_Phi C -> C -> tau^{>=n}_Phi C``.  The connective part lies in
the aisle whose filtration is ``j -> Z^(j-(n-1))`` (``Phi.shifted(n - 1)``),
called the effective filtration below.  Only four shapes of effective
filtration have closed formulas; anything else raises
:class:`UnsupportedFiltrationShape`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg as la
from .complexes import (ChainComplex, GradedComplex, GradedMap, aisle_membership, as_graded,
                        coaisle_membership_window, is_regular_sequence, koszul, long_exact_check, shift,
                        std_truncation_ge_map, std_truncation_le_map)
from .errors import (HypothesisViolation, OracleError, PreconditionError, ThomasonError, UndecidableSupport,
                     UnrepresentableLocalization, UnsupportedFiltrationShape, UnsupportedRing, WindowTooNarrow)
from .localcoh import (MonomialCech, _exp_of, _localize_exact, cech_total, gamma_torsion_sub, ideal_for_subset,
                       rgamma_triangle)
from .modules import GradedModule, Subquotient, annihilator_window, support_in_distinguished
from .polynomial import Poly
from .poset import SpectrumPoset, ThomasonFiltration, height_of_subset, localize_filtration, minimal_primes
from .rings import RingModel

Matrix = np.ndarray


# --- ideals on the poset ---------------------------------------------------------


def _gens(R: RingModel, ideal) -> List[Poly]:
    return [R.normal_form(R.poly(g)) for g in ideal]


def vanishing_locus(R: RingModel, P: SpectrumPoset, ideal) -> frozenset:
    """Poset points whose distinguished prime contains ``ideal``."""
    gens = _gens(R, ideal)
    missing = [p for p in P.ids if p not in R.primes]
    if missing:
        raise UndecidableSupport("poset points without ideal generators: %s" % missing, points=missing)
    return P.up_closure(p for p in P.ids if all(R.in_ideal(g, R.primes[p]) for g in gens))


def _ideal_label(R: RingModel, ideal) -> str:
    gens = [g for g in _gens(R, ideal) if not g.is_zero()]
    return "(" + ", ".join(R.format(g) for g in gens) + ")" if gens else "(0)"


# --- mu / eta --------------------------------------------------------------


def eta_oracle(Phi: ThomasonFiltration, R: RingModel) -> Callable[[Sequence, int], bool]:
    """Membership of ``R/a[-i]`` in the aisle of ``Phi``, decided on homology supports."""
    def oracle(ideal, i):
        M = GradedModule.cyclic(R, _gens(R, ideal))
        ok, _ = aisle_membership(GradedComplex.from_module(M, i), Phi)
        return ok
    return oracle


def mu_filtration_from_membership(oracle, ideals: Sequence[Sequence], index_range: Tuple[int, int],
                                  R: RingModel, P: SpectrumPoset) -> ThomasonFiltration:
    """``Z^i`` = union of ``V(a)`` over the supplied ideals with ``R/a[-i]`` accepted.

    Levels are read on ``index_range``; the tails repeat the boundary levels.
    An oracle that raises, answers with a non-boolean, or produces
    non-decreasing levels gives :class:`OracleError`.
    """
    lo, hi = index_range
    if hi < lo:
        raise PreconditionError("empty index range")
    loci = [vanishing_locus(R, P, a) for a in ideals]
    levels = []
    for i in range(lo, hi + 1):
        Z = frozenset()
        for a, V in zip(ideals, loci):
            try:
                ans = oracle(a, i)
            except ThomasonError as e:
                raise OracleError("oracle failed on %s at %d: %s" % (_ideal_label(R, a), i, e), index=i) from e
            if not isinstance(ans, (bool, np.bool_)):
                raise OracleError("oracle answered %r, expected a boolean" % (ans,), index=i)
            if ans:
                Z |= V
        levels.append(Z)
    try:
        return ThomasonFiltration(P, lo, levels)
    except ThomasonError as e:
        raise OracleError("oracle answers do not form a filtration: %s" % e) from e


def round_trip(Phi: ThomasonFiltration, R: RingModel, ideals: Sequence[Sequence], pad: int = 1) -> dict:
    """``mu(eta(Phi))`` on the window of ``Phi`` widened by ``pad``."""
    span = Phi.span(pad)
    back = mu_filtration_from_membership(eta_oracle(Phi, R), ideals, (span.start, span.stop - 1), R, Phi.poset)
    return {"ok": back == Phi, "input": Phi.describe(), "recovered": back.describe()}


def all_ideals_artinian(R: RingModel, budget: int = 200) -> List[List[Poly]]:
    """Every homogeneous ideal of a finite monomial-or-not Artinian ring, as generator lists.

    Brute force over subspaces is too big in general; this enumerates ideals
    generated by subsets of the standard monomials plus the distinguished
    primes, deduplicated by equality of ideals.  That is the full lattice for
    the univariate truncated rings and the product models used here.
    """
    if not R.is_artinian:
        raise UnsupportedRing("ideal enumeration needs an Artinian ring")
    cands = [[]]
    mons = [R.monomial(m) for d in range(R.top_degree() + 1) for m in R.standard_monomials(d)]
    for m in mons:
        cands.append([m])
    for gens in R.primes.values():
        cands.append(list(gens))
    for d0 in [R.var(v) for v, w in enumerate(R.degrees) if w == 0]:
        cands.append([R.one() - d0])
        for m in mons:
            if R.degree(m):
                cands.append([m, R.one() - d0])
                cands.append([R.normal_form(m * d0)])
    cands.append([R.one()])
    out: List[List[Poly]] = []
    for c in cands:
        c = [g for g in _gens(R, c) if not g.is_zero()]
        if any(R.ideal_contains(o, c) and R.ideal_contains(c, o) for o in out):
            continue
        out.append(c)
        if len(out) > budget:
            raise PreconditionError("too many ideals")
    return out


# --- Koszul generators ----------------------------------------------------------


@dataclass
class KoszulGenerator:
    index: int
    ideal: List[Poly]
    complex: ChainComplex

    def describe(self, R: RingModel) -> dict:
        return {"index": self.index, "ideal": [R.format(g) for g in self.ideal], "complex": self.complex.describe()}


def koszul_generators(Phi: ThomasonFiltration, ideals: Sequence[Sequence], index_range: Tuple[int, int],
                      R: RingModel) -> List[KoszulGenerator]:
    """``K(a)[-i]`` for every supplied ideal with ``V(a) ⊆ Z^i``, ``i`` in the range."""
    P = Phi.poset
    out = []
    lo, hi = index_range
    for i in range(lo, hi + 1):
        Z = Phi.at(i)
        for a in ideals:
            gens = [g for g in _gens(R, a) if not g.is_zero()] or [R.zero()]
            if vanishing_locus(R, P, gens) <= Z:
                out.append(KoszulGenerator(i, gens, shift(koszul(R, gens), -i)))
    return out


# --- inputs that stay symbolic ------------------------------------------------------


@dataclass
class QuotientModule:
    """``R/J`` placed in cohomological degree ``degree``: the windowed monomial input."""
    ring: RingModel
    ideal: Sequence = ()
    degree: int = 0

    def __post_init__(self):
        self.ideal = _gens(self.ring, self.ideal)

    def exact_module(self) -> GradedModule:
        return GradedModule.cyclic(self.ring, self.ideal)

    def dims(self, d: int) -> int:
        Q = self.ring.quotient(self.ideal) if self.ideal else self.ring
        return len(Q.standard_monomials(d))

    def krull_dim(self) -> int:
        return (self.ring.quotient(self.ideal) if self.ideal else self.ring).krull_dim()


@dataclass
class DimsPart:
    """A truncation part known through dimensions only (monomial engine).

    ``kind``: ``"cech"`` (``H^i = H^(i-q)`` of the Čech complex on ``gens``,
    all ``i`` or only ``i - q <= top``), ``"cofiber"`` (same for the cofiber
    of ``RΓ -> M``), ``"quotient"`` (``M / H^0``, in degree ``q``) or ``"zero"``.
    """
    module: QuotientModule
    kind: str
    gens: List[Poly] = field(default_factory=list)
    top: Optional[int] = None

    def _engine(self, invert=()):
        R = self.module.ring
        return MonomialCech(R, self.gens, self.module.ideal, invert)

    def dim(self, i: int, d: Optional[int] = None, a: Optional[Sequence[int]] = None, invert=()) -> int:
        q = self.module.degree
        k = i - q
        if self.kind == "zero":
            return 0
        if self.kind == "quotient":
            if k != 0:
                return 0
            full = MonomialCech(self.module.ring, [], self.module.ideal, invert)
            eng = self._engine(invert)
            if a is not None:
                return full.dim_at(a, 0) - eng.dim_at(a, 0)
            return full.dim_total(d, 0) - eng.dim_total(d, 0)
        if self.top is not None and k > self.top:
            return 0
        eng = self._engine(invert)
        drop = self.kind == "cofiber"
        if k < -1 or k > len(self.gens):
            return 0
        if a is not None:
            return eng.dim_at(a, k, drop)
        return eng.dim_total(d, k, drop)

    def indices(self) -> range:
        q = self.module.degree
        return range(q - 1, q + len(self.gens) + 1)

    def table(self, degrees: Sequence[int]) -> Dict[int, Dict[int, int]]:
        out = {}
        for i in self.indices():
            row = {d: self.dim(i, d) for d in degrees}
            if any(row.values()):
                out[i] = row
        return out


# --- shapes and truncations --------------------------------------------------------


STANDARD = "Standard"
CONSTANT = "ConstantViaLocalCohomology"
TILTING = "Tilting"
CONSTANT_TAIL = "ConstantTailLemma"


def filtration_shape(E: ThomasonFiltration) -> Tuple[str, dict]:
    """Classify a filtration by its change points (independent of the input complex)."""
    P = E.poset
    top, changes = E._key()
    if not changes:
        return "constant", {"Z": top}
    if top == P.full and len(changes) == 1 and not changes[0][1]:
        return "standard", {"s": changes[0][0] - 1}
    if top == P.full and len(changes) == 2 and not changes[1][1] and changes[1][0] == changes[0][0] + 1:
        return "tilting", {"s": changes[0][0] - 1, "Z": changes[0][1]}
    return "other", {}


def _concentration(C) -> Optional[int]:
    """The single degree carrying homology, if any."""
    if isinstance(C, QuotientModule):
        return C.degree
    G = as_graded(C)
    degs = [n for n in G.span if not G.homology(n).is_zero()]
    if len(degs) == 1:
        return degs[0]
    if not degs:
        return 0
    return None


def _module_dim(C) -> int:
    if isinstance(C, QuotientModule):
        return C.krull_dim()
    G = as_graded(C)
    if G.exact:
        return 0
    raise PreconditionError("dimension of a windowed complex is not computed")


def _resolve_shape(C, E: ThomasonFiltration):
    kind, info = filtration_shape(E)
    if kind == "constant":
        return CONSTANT, {"Z": info["Z"]}
    if kind == "standard":
        return STANDARD, info
    if kind == "tilting":
        return TILTING, info
    q = _concentration(C)
    if q is not None:
        Z = E.at(q)
        # case (1): Z^j = Z from the module degree on
        if all(E.at(j) == Z for j in range(q, max(E.hi, q) + 2)):
            return CONSTANT_TAIL, {"Z": Z, "case": 1, "degree": q}
        # case (2): Z^j = Z up to degree + dim M
        d = _module_dim(C)
        if all(E.at(j) == Z for j in range(min(E.lo, q) - 1, q + d + 1)):
            return CONSTANT_TAIL, {"Z": Z, "case": 2, "degree": q, "dim": d}
    raise UnsupportedFiltrationShape("no closed truncation formula for this filtration",
                                     filtration=E.describe())


@dataclass
class TruncationResult:
    input: object
    filtration: ThomasonFiltration
    n: int
    method: str
    connective: object
    coconnective: object
    effective: ThomasonFiltration
    info: dict
    checks: dict

    @property
    def ok(self) -> bool:
        return all(v.get("ok", True) for v in self.checks.values())

    def homology_tables(self, degrees: Optional[Sequence[int]] = None) -> dict:
        out = {}
        for name, part in (("connective", self.connective), ("coconnective", self.coconnective)):
            if isinstance(part, DimsPart):
                out[name] = {str(i): {str(d): k for d, k in row.items()} for i, row in part.table(degrees).items()}
            else:
                out[name] = {str(i): {str(d): k for d, k in row.items()}
                             for i, row in part.homology_table().items()}
        return out

    def to_dict(self, degrees: Optional[Sequence[int]] = None) -> dict:
        P = self.filtration.poset
        info = {k: (P.sort(v) if isinstance(v, frozenset) else v) for k, v in self.info.items()}
        return {"method": self.method, "cut": self.n, "filtration": self.filtration.describe(),
                "effective_filtration": self.effective.describe(), "shape": info,
                "homology": self.homology_tables(degrees), "checks": self.checks, "ok": self.ok}


def _tilting_parts(G: GradedComplex, t: int, I: Sequence[Poly]):
    """Pullback ``M ⊆ ker d^t`` of ``Γ_I H^t`` and the two parts with their maps."""
    F = G.field
    H = G.homology_sq(t)
    tors = gamma_torsion_sub(H.module, I)
    X = G.term(t)
    Mb = {}
    for d in G.degrees():
        n = X.dim(d)
        parts = [H.small[d]]
        if d in tors and tors[d].shape[1]:
            parts.append(la.matmul(F, H.lift(d), tors[d]))
        Mb[d] = la.colspace(F, la.hstack(F, parts, n))
    sub = Subquotient(X, Mb, None)
    quo = Subquotient(X, None, Mb)
    conn_terms = {n: M for n, M in G.terms.items() if n < t}
    conn_terms[t] = sub.module
    conn_diffs = {n: dict(per) for n, per in G.diffs.items() if n < t - 1}
    if t - 1 in G.terms:
        conn_diffs[t - 1] = {d: sub.project(d, G.d(t - 1, d)) for d in G.degrees()}
    conn = GradedComplex(G.ring, conn_terms, conn_diffs, window=(G.lo, G.hi))
    co_terms = {n: M for n, M in G.terms.items() if n > t}
    co_terms[t] = quo.module
    co_diffs = {n: dict(per) for n, per in G.diffs.items() if n > t}
    if t + 1 in G.terms:
        co_diffs[t] = {d: la.matmul(F, G.d(t, d), quo.lift(d)) for d in G.degrees()}
    coconn = GradedComplex(G.ring, co_terms, co_diffs, window=(G.lo, G.hi))
    inc = {n: {d: F.eye(G.term(n).dim(d)) for d in G.degrees()} for n in G.terms if n < t}
    inc[t] = {d: sub.lift(d) for d in G.degrees()}
    pr = {n: {d: F.eye(G.term(n).dim(d)) for d in G.degrees()} for n in G.terms if n > t}
    pr[t] = {d: quo.project(d, F.eye(X.dim(d))) for d in G.degrees()}
    return conn, coconn, GradedMap(conn, G, inc), GradedMap(G, coconn, pr)


def _check_index_range(E: ThomasonFiltration, Y: GradedComplex, width: int) -> List[int]:
    span = list(Y.span)
    lo = min([E.lo] + span) - 1
    hi = max([E.hi] + [s + width for s in span]) + 1
    return list(range(lo, hi + 1))


def truncate(C, Phi: ThomasonFiltration, n: int = 1, degrees: Optional[Sequence[int]] = None,
             verify: bool = True) -> TruncationResult:
    """``tau^{<=n-1}_Phi C -> C -> tau^{>=n}_Phi C`` for the supported shapes.

    Shapes are read on the effective filtration ``E = Phi.shifted(n - 1)``:
    standard (``Spec`` up to ``s``, then empty), constant (``RΓ_Z`` by Čech),
    tilting (``Spec`` up to ``s``, ``Z`` at ``s + 1``: the pullback of
    ``Γ_Z H^(s+1)`` into ``ker d^(s+1)``) and a constant tail around a
    module concentrated in one degree (again ``RΓ_Z``).

    ``C`` is a complex (ChainComplex, GradedComplex, GradedModule in degree
    0) or a :class:`QuotientModule`, which over non-Artinian monomial rings
    yields dimension-only parts.
    """
    P = Phi.poset
    E = Phi.shifted(n - 1)
    method, info = _resolve_shape(C, E)
    if isinstance(C, QuotientModule):
        R = C.ring
        exact_ok = (R.quotient(C.ideal) if C.ideal else R).is_artinian
        if exact_ok:
            return truncate(GradedComplex.from_module(C.exact_module(), C.degree), Phi, n, degrees, verify)
        return _truncate_dims(C, Phi, n, E, method, info, degrees)
    G = as_graded(C)
    checks = {}
    if method == STANDARD:
        s = info["s"]
        conn, inc = std_truncation_le_map(G, s)
        coconn, pr = std_truncation_ge_map(G, s + 1)
    elif method == TILTING:
        I = ideal_for_subset(G.ring, P, info["Z"])
        conn, coconn, inc, pr = _tilting_parts(G, info["s"] + 1, I)
    else:
        Z = info["Z"]
        if not Z:
            conn = GradedComplex.zero(G.ring, (G.lo, G.hi))
            coconn = G
            inc = GradedMap(conn, G, {})
            pr = GradedMap(G, G, {k: {d: G.field.eye(G.term(k).dim(d)) for d in G.degrees()} for k in G.terms})
        elif Z == P.full:
            conn, coconn = G, GradedComplex.zero(G.ring, (G.lo, G.hi))
            inc = GradedMap(G, G, {k: {d: G.field.eye(G.term(k).dim(d)) for d in G.degrees()} for k in G.terms})
            pr = GradedMap(G, coconn, {})
        else:
            conn, inc, coconn, pr = rgamma_triangle(G, Z, P)
    result = TruncationResult(C, Phi, n, method, conn, coconn, E, dict(info), checks)
    if verify:
        ok, rep = aisle_membership(conn, E)
        checks["connective_in_aisle"] = {"ok": ok, "report": rep}
        width = max((len(ideal_for_subset(G.ring, P, E.at(i))) for i in E.span(1)), default=1)
        idx = _check_index_range(E, coconn.shift(1), width)
        co = coaisle_membership_window(coconn.shift(1), E, idx)
        checks["coconnective_in_coaisle"] = {"ok": all(co.values()), "indices": [min(idx), max(idx)],
                                             "failures": [i for i, v in co.items() if not v]}
        les = long_exact_check(inc, pr)
        checks["triangle"] = {"ok": les["ok"], "alternating_sums": {str(d): s for d, s in
                                                                     les["alternating_sums"].items()},
                              "failures": les["failures"]}
    return result


def _truncate_dims(C: QuotientModule, Phi, n, E, method, info, degrees) -> TruncationResult:
    R, P = C.ring, Phi.poset
    q = C.degree
    if method == STANDARD:
        keep = q <= info["s"]
        conn = DimsPart(C, "cech") if keep else DimsPart(C, "zero")
        coconn = DimsPart(C, "zero") if keep else DimsPart(C, "cech")
    elif method == TILTING:
        t = info["s"] + 1
        gens = ideal_for_subset(R, P, info["Z"])
        if q < t:
            conn, coconn = DimsPart(C, "cech"), DimsPart(C, "zero")
        elif q > t:
            conn, coconn = DimsPart(C, "zero"), DimsPart(C, "cech")
        else:
            conn, coconn = DimsPart(C, "cech", gens, top=0), DimsPart(C, "quotient", gens)
    else:
        Z = info["Z"]
        if not Z:
            conn, coconn = DimsPart(C, "zero"), DimsPart(C, "cech")
        elif Z == P.full:
            conn, coconn = DimsPart(C, "cech"), DimsPart(C, "zero")
        else:
            gens = ideal_for_subset(R, P, Z)
            for g in gens:
                _exp_of(R, g)
            conn, coconn = DimsPart(C, "cech", gens), DimsPart(C, "cofiber", gens)
    checks = {}
    if degrees is not None:
        idx = sorted(set(conn.indices()) | set(coconn.indices()))
        sums = {}
        for d in degrees:
            s = 0
            for i in idx:
                mid = C.dims(d) if i == q else 0
                s += (-1) ** (i % 2) * (conn.dim(i, d) - mid + coconn.dim(i, d))
            sums[str(d)] = s
        checks["triangle"] = {"ok": not any(sums.values()), "alternating_sums": sums,
                              "note": "dimension count only"}
    checks["membership"] = {"ok": True, "note": "by construction: torsion parts are supported in their level"}
    return TruncationResult(C, Phi, n, method, conn, coconn, E, dict(info), checks)


# --- composite and summand checks ---------------------------------------------------


def _homology_dims(part, indices, degrees, invert=()) -> Dict[Tuple[int, int], int]:
    out = {}
    if isinstance(part, DimsPart):
        for i in indices:
            for d in degrees:
                out[(i, d)] = part.dim(i, d, invert=invert)
        return out
    for i in indices:
        H = part.homology(i)
        for d in degrees:
            out[(i, d)] = H.dim(d) if H.lo <= d <= H.hi else 0
    return out


def composite_truncation_check(Psi: ThomasonFiltration, M, n: int = 1,
                               degrees: Optional[Sequence[int]] = None) -> dict:
    """``tau_st ∘ tau_Psi`` against the truncation for ``Phi_st ∩ Psi`` (levelwise).

    Both cut at ``n``; compares homology dims index by index and degree by degree.
    """
    P = Psi.poset
    st = ThomasonFiltration.standard(P)
    first = truncate(M, Psi, n, degrees=degrees)
    both = truncate(M, st.intersect(Psi), n, degrees=degrees)
    conn, right_part = first.connective, both.connective
    if isinstance(conn, DimsPart):
        if degrees is None:
            raise WindowTooNarrow("dimension-only parts need a degree list")
        idx = sorted(set(conn.indices()) | set(right_part.indices()))
        # the standard truncation at the same cut keeps H^i for i <= n - 1
        left = {(i, d): (conn.dim(i, d) if i <= n - 1 else 0) for i in idx for d in degrees}
        right = _homology_dims(right_part, idx, degrees)
    else:
        left_part = truncate(conn, st, n, verify=False).connective
        spans = set(left_part.span) | set(right_part.span)
        idx = list(range(min(spans, default=0) - 1, max(spans, default=0) + 2))
        if degrees is None:
            degrees = list(range(min(left_part.lo, right_part.lo), max(left_part.hi, right_part.hi) + 1))
        left = _homology_dims(left_part, idx, degrees)
        right = _homology_dims(right_part, idx, degrees)
    bad = [{"index": i, "degree": d, "lhs": left[(i, d)], "rhs": right[(i, d)]}
           for (i, d) in sorted(left) if left[(i, d)] != right[(i, d)]]
    return {"ok": not bad, "mismatches": bad, "method_psi": first.method, "method_intersection": both.method,
            "compared": len(left)}


def _localizing_elements(R: RingModel, p_gens: Sequence[Poly]) -> Tuple[str, list]:
    """How to localize at ``p``: invert variables (monomial) or degree-0 idempotents (exact)."""
    if R.is_artinian:
        inv = []
        for v, w in enumerate(R.degrees):
            if w == 0:
                for cand in (R.var(v), R.one() - R.var(v)):
                    if not R.in_ideal(cand, p_gens):
                        inv.append(R.normal_form(cand))
        return "exact", inv
    pv = []
    for g in p_gens:
        e = _exp_of(R, g)
        if sum(e) != 1:
            raise UnrepresentableLocalization("p must be generated by variables in the monomial model")
        pv.append(e.index(1))
    return "monomial", [v for v in range(R.nvars) if v not in pv]


def summand_dimension_check(Psi: ThomasonFiltration, M, interval: Tuple[int, int], p: str,
                            window: Optional[Tuple[int, int]] = None,
                            box: Optional[Sequence[Tuple[int, int]]] = None) -> dict:
    """``dim H^i(tau^{<=0}_Psi M[-a])_p >= dim H^(i-a)_{pR_p}(M_p)`` for ``i`` in ``[a, b]``.

    Only the dimension inequality is checked, never a splitting.  ``M`` is a
    :class:`QuotientModule` (its degree is ignored) or an exact module.
    Monomial rings: with inverted variables the comparison runs per
    multidegree on ``box`` (default ``[-8, 8]`` per variable), otherwise per
    total degree on ``window``.
    """
    P = Psi.poset
    a, b = interval
    if b < a:
        raise PreconditionError("empty interval")
    hs = {i: height_of_subset(P, Psi.at(i)) for i in range(a, b + 1)}
    if len(set(hs.values())) != 1:
        raise PreconditionError("heights differ on the interval", heights={str(k): v for k, v in hs.items()})
    if p not in minimal_primes(P, Psi.at(b)):
        raise PreconditionError("%s is not a minimal prime of the last level" % p)
    h = hs[a]
    if isinstance(M, QuotientModule):
        R = M.ring
        Q = QuotientModule(R, M.ideal, a)
    else:
        R = M.ring
        Q = None
    p_gens = list(R.primes[p])
    mode, inv = _localizing_elements(R, p_gens)
    rows = []
    ok = True
    if Q is not None and not (R.quotient(Q.ideal) if Q.ideal else R).is_artinian:
        res = truncate(Q, Psi, 1)
        conn = res.connective
        rhs_eng = MonomialCech(R, p_gens, Q.ideal, invert=inv)
        if inv:
            box = box or [(-8, 8)] * R.nvars
            points = [("multidegree", x) for x in product(*[range(lo, hi + 1) for lo, hi in box])]
        else:
            if window is None:
                raise WindowTooNarrow("a degree window is required")
            points = [("degree", d) for d in range(window[0], window[1] + 1)]
        for i in range(a, b + 1):
            for kind, x in points:
                if kind == "multidegree":
                    l = conn.dim(i, a=x, invert=inv)
                    r = rhs_eng.dim_at(x, i - a)
                else:
                    l = conn.dim(i, d=x, invert=inv)
                    r = rhs_eng.dim_total(x, i - a)
                good = l >= r
                ok = ok and good
                rows.append({"index": i, kind: list(x) if kind == "multidegree" else x,
                             "lhs": l, "rhs": r, "ok": good})
        return {"ok": ok, "rows": rows, "height": h, "method": res.method, "inverted": [R.names[v] for v in inv],
                "engine": "monomial", "splitting_checked": False}
    base = Q.exact_module() if Q is not None else M
    C = GradedComplex.from_module(base, a)
    res = truncate(C, Psi, 1)
    L = _localize_exact(res.connective, inv) if inv else res.connective
    Mloc = _localize_exact(GradedComplex.from_module(base, 0), inv) if inv else GradedComplex.from_module(base, 0)
    rhs = cech_total(Mloc, p_gens)[0]
    for i in range(a, b + 1):
        H1, H2 = L.homology(i), rhs.homology(i - a)
        degs = sorted(set(H1.degrees()) | set(H2.degrees()))
        for d in degs:
            l = H1.dim(d) if H1.lo <= d <= H1.hi else 0
            r = H2.dim(d) if H2.lo <= d <= H2.hi else 0
            good = l >= r
            ok = ok and good
            rows.append({"index": i, "degree": d, "lhs": l, "rhs": r, "ok": good})
    return {"ok": ok, "rows": rows, "height": h, "method": res.method, "inverted": [R.format(f) for f in inv],
            "engine": "exact", "splitting_checked": False}


# --- perfectness probe --------------------------------------------------------------


@dataclass
class ProbeResult:
    kind: str                       # "Finite" or "ExceedsBudget"
    length: Optional[int]
    budget: int
    betti: List[List[int]]          # generator degrees of F_0, F_1, ...
    presentations: List[tuple]      # matrices of F_i -> F_(i-1), i >= 1
    witness: Optional[dict]
    tag: Optional[str]
    mode: str
    ring: RingModel = field(repr=False, default=None)

    def betti_numbers(self) -> List[int]:
        return [len(b) for b in self.betti]

    def to_dict(self) -> dict:
        R = self.ring
        fmt = lambda A: [[R.format(f) for f in row] for row in A]
        out = {"kind": self.kind, "length": self.length, "budget": self.budget, "mode": self.mode,
               "betti": self.betti_numbers(), "generator_degrees": self.betti,
               "presentations": [fmt(A) for A in self.presentations], "tag": self.tag}
        if self.witness:
            out["witness"] = {"start": self.witness["start"], "period": self.witness["period"],
                              "matrices": [fmt(A) for A in self.witness["matrices"]]}
        else:
            out["witness"] = None
        return out


def _cover(N: GradedModule, gens: List[Tuple[int, Matrix]], window):
    """Free module on ``gens`` (degree, vector in ``N``), the degreewise map to ``N``, its kernel."""
    R, F = N.ring, N.field
    degs = [a for a, _ in gens]
    Fr = GradedModule.free(R, degs, window)
    maps, kern = {}, {}
    for d in Fr.degrees():
        cols = []
        labels = Fr.labels.get(d, [])
        nd = N.dim(d) if (N.exact or N.lo <= d <= N.hi) else None
        if nd is None:
            continue
        for j, m in labels:
            a, v = gens[j]
            cols.append(la.matmul(F, N.act_monomial(m, a), v))
        A = la.hstack(F, cols, nd) if cols else F.zeros(nd, 0)
        maps[d] = A
        kern[d] = la.nullspace(F, A) if A.shape[1] else F.zeros(0, 0)
    return Fr, maps, kern


def _min_gens(Fr: GradedModule, kern: Dict[int, Matrix]) -> List[Tuple[int, Matrix]]:
    sq = Subquotient(Fr, kern, None)
    K = sq.module
    if K.is_zero():
        return []
    out = []
    for d, cols in sorted(K.generator_degrees().items()):
        lifted = la.matmul(Fr.field, sq.lift(d), cols)
        for j in range(lifted.shape[1]):
            out.append((d, lifted[:, j:j + 1]))
    return out


def _as_poly_column(Fr: GradedModule, d: int, v: Matrix, nrows: int) -> List[Poly]:
    R = Fr.ring
    col = [R.zero() for _ in range(nrows)]
    for k, (j, m) in enumerate(Fr.labels[d]):
        c = v[k, 0]
        if c != 0:
            col[j] = col[j] + R.monomial(m, c)
    return col


def _normalize_columns(R: RingModel, A) -> Tuple[int, tuple]:
    cols = []
    ncols = len(A[0]) if A else 0
    for j in range(ncols):
        col = [A[i][j] for i in range(len(A))]
        lead = next((f for f in col if not f.is_zero()), None)
        if lead is not None:
            _, c = lead.leading(R.order)
            col = [f.scale(R.field.one / c) for f in col]
        cols.append(tuple(R.format(f) for f in col))
    return len(A), tuple(sorted(cols))


def _same_presentation(R, A, B) -> bool:
    return _normalize_columns(R, A) == _normalize_columns(R, B)


def _find_period(R, pres) -> Optional[Tuple[int, int]]:
    m = len(pres)
    for period in range(1, m):
        for start in range(m - period):
            if all(_same_presentation(R, pres[i], pres[i + period]) for i in range(start, m - period)):
                return start, period
    return None


def perfectness_probe(M: GradedModule, budget: int = 5, window: Optional[Tuple[int, int]] = None) -> ProbeResult:
    """Minimal free resolution of ``M``, step by step, up to ``budget`` syzygies.

    ``Finite(n)`` when the kernel after ``F_n`` vanishes; otherwise
    ``ExceedsBudget`` with a periodicity witness when the presentation
    matrices repeat (up to column order and scaling).  Windowed modules give
    evidence only: kernels above the window are not seen.
    """
    R = M.ring
    if any(w == 0 for w in R.degrees):
        raise UnsupportedRing("the probe needs a positively graded local ring")
    if window is None:
        window = R.window or (M.lo, M.hi + 8)
    mode = "exact" if R.is_artinian and M.exact else "windowed"
    gens = []
    for d, cols in sorted(M.generator_degrees().items()):
        for j in range(cols.shape[1]):
            gens.append((d, cols[:, j:j + 1]))
    betti, pres = [], []
    N = M
    prev_rows = None
    for step in range(budget + 1):
        betti.append([a for a, _ in gens])
        Fr, maps, kern = _cover(N, gens, window if mode == "windowed" else None)
        if step:
            cols = [_as_poly_column(N, a, v, prev_rows) for a, v in gens]
            pres.append(tuple(tuple(cols[j][i] for j in range(len(cols))) for i in range(prev_rows)))
        nxt = _min_gens(Fr, kern)
        if not nxt:
            return ProbeResult("Finite", step, budget, betti, pres, None,
                               "evidence" if mode == "windowed" else "proof", mode, R)
        prev_rows = len(gens)
        N, gens = Fr, nxt
    # the last kernel is nonzero: record its presentation too
    cols = [_as_poly_column(N, a, v, prev_rows) for a, v in gens]
    pres.append(tuple(tuple(cols[j][i] for j in range(len(cols))) for i in range(prev_rows)))
    per = _find_period(R, pres)
    witness = None
    if per is not None:
        start, period = per
        witness = {"start": start + 1, "period": period,
                   "matrices": [pres[start + k] for k in range(period + 1)]}
    tag = "witness"
    if witness and _univariate_truncated(R) and M.total_dim() == 1:
        tag = "proof"
    return ProbeResult("ExceedsBudget", None, budget, betti, pres[:budget], witness, tag, mode, R)


def _univariate_truncated(R: RingModel) -> bool:
    return R.nvars == 1 and len(R.gb) == 1 and R.gb[0].is_monomial()


# --- obstruction ------------------------------------------------------------------


@dataclass
class ObstructionCertificate:
    ring: dict
    filtration: dict
    localized_filtration: dict
    maximal_point: str
    koszul: dict
    koszul_supports: list
    truncation: dict
    residue_field: dict
    probe: ProbeResult

    def to_dict(self) -> dict:
        return {"ring": self.ring, "filtration": self.filtration, "localized_filtration": self.localized_filtration,
                "maximal_point": self.maximal_point, "koszul": self.koszul, "koszul_supports": self.koszul_supports,
                "truncation": self.truncation, "residue_field": self.residue_field, "probe": self.probe.to_dict(),
                "perfect": self.probe.kind == "Finite"}


def _maximal_point(R: RingModel, P: SpectrumPoset) -> str:
    m = [R.var(v) for v in range(R.nvars)]
    for pid in P.maximal_points():
        g = R.primes.get(pid)
        if g is not None and R.ideal_contains(g, m) and R.ideal_contains(m, g):
            return pid
    raise HypothesisViolation("no poset point is the homogeneous maximal ideal")


def obstruction_pipeline(R: RingModel, Phi: ThomasonFiltration, budget: int = 5) -> ObstructionCertificate:
    """Koszul complex on the maximal ideal, truncated as in the singular-point argument.

    Hypotheses (checked): ``R`` graded local and singular at the maximal
    point ``m``; some level of ``Phi`` is empty and some level contains ``m``.
    After localizing at ``m`` and shifting the last level containing ``m``
    to degree 0, ``K(m)`` lies in the aisle, its standard coconnective part
    at 0 is the residue field, and the probe shows the residue field is not
    perfect.
    """
    P = Phi.poset
    if any(w == 0 for w in R.degrees):
        raise HypothesisViolation("the ring is not graded local")
    mid = _maximal_point(R, P)
    mgens = [R.var(v) for v in range(R.nvars)]
    if not P.point(mid).singular:
        raise HypothesisViolation("no singular maximal point", point=mid)
    if not mgens or is_regular_sequence(R, mgens):
        raise HypothesisViolation("the ring is regular at %s" % mid, point=mid)
    if Phi.tail_below:
        raise HypothesisViolation("the filtration has no empty level")
    if mid not in Phi.tail_above:
        raise HypothesisViolation("no level contains the maximal point", point=mid)
    sub, W = localize_filtration(P, Phi, mid)
    top = max(i for i in W.span(1) if mid in W.at(i))
    Psi = W.shifted(-top)
    K = koszul(R, mgens)
    G = K.realize()
    supports = []
    for n in G.span:
        H = G.homology(n)
        if H.is_zero():
            continue
        supp = support_in_distinguished(H, sub)
        good = n <= 0 and set(supp) <= {mid} and mid in Psi.at(n)
        supports.append({"degree": n, "support": supp, "ok": good})
        if not good:
            raise HypothesisViolation("Koszul homology outside the shifted levels", degree=n)
    in_aisle, _ = aisle_membership(G, Psi, sub)
    if not in_aisle:
        raise HypothesisViolation("the Koszul complex is not in the localized aisle")
    T, _ = std_truncation_ge_map(G, 0)
    table = T.homology_table()
    dims = [(n, d, k) for n, row in table.items() for d, k in row.items() if k]
    if len(dims) != 1 or dims[0][2] != 1 or dims[0][0] != 0:
        raise ArithmeticError("truncation is not one-dimensional in degree 0: %s" % table)
    Hk = T.homology(0)
    ann = annihilator_window(Hk)
    if not (R.ideal_contains(ann, mgens) and R.ideal_contains(mgens, ann)):
        raise ArithmeticError("annihilator of the truncation is not the maximal ideal")
    probe = perfectness_probe(Hk, budget)
    return ObstructionCertificate(
        ring=R.describe(), filtration=Phi.describe(), localized_filtration=Psi.describe(), maximal_point=mid,
        koszul=K.describe(), koszul_supports=supports, truncation=T.describe(),
        residue_field={"dims": {str(d): k for d, k in Hk.dim_table().items()},
                       "annihilator": [R.format(g) for g in ann], "is_residue_field": True},
        probe=probe)


# --- tilts --------------------------------------------------------------------------


def tilt_relation_check(Phi: ThomasonFiltration, Psi: ThomasonFiltration) -> bool:
    """``Z^i ⊆ W^i ⊆ Z^(i-1)`` for all ``i`` (windows plus one step of each tail)."""
    if Phi.poset is not Psi.poset and Phi.poset.ids != Psi.poset.ids:
        raise PreconditionError("filtrations live on different posets")
    lo = min(Phi.lo, Psi.lo) - 1
    hi = max(Phi.hi, Psi.hi) + 2
    for i in range(lo, hi + 1):
        Z, W, Zp = Phi.at(i), Psi.at(i), Phi.at(i - 1)
        if not (Z <= W <= Zp):
            return False
    return True
