"""Torsion functors and Čech local cohomology.

Two engines:

* exact: finite-dimensional modules and complexes.  Localizing at a
  homogeneous ``f`` is the projection onto the part where ``f`` acts
  invertibly (Fitting decomposition); positive-degree elements are nilpotent
  there, so only degree-0 elements (idempotents of a product) survive.
* monomial: ``R/J`` over a monomial ring with monomial Čech generators,
  computed one multidegree at a time.  A Laurent monomial ``x^a`` is nonzero
  in ``(R/J)_{x_S}`` iff ``a_v >= 0`` for every variable ``v`` not inverted
  and no generator ``h`` of ``J`` has ``h_v <= a_v`` for all such ``v``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg as la
from .complexes import GradedComplex, GradedMap, as_graded
from .errors import (InfiniteDimensionalPiece, NotFoundInSearchBudget, PreconditionError,
                     UnrepresentableLocalization, UnrepresentedThomasonSubset, UnsupportedRing, WindowTooNarrow)
from .modules import GradedModule, Subquotient, direct_sum
from .polynomial import Poly
from .rings import RingModel

Matrix = np.ndarray


# --- Thomason subsets as ideals -------------------------------------------------


def ideal_for_subset(R: RingModel, P, Z) -> List[Poly]:
    """Generators of an ideal ``I`` with ``V(I) = Z`` on the distinguished primes.

    ``Z`` is the union of ``V(p)`` over its minimal points, and
    ``V(p_1 ... p_r) = V(p_1) ∪ ... ∪ V(p_r)``, so the product ideal works;
    the empty set gets the unit ideal.
    """
    Z = P.subset(Z)
    mins = [p for p in P.ids if p in Z and not any(q != p and q in Z for q in P.down(p))]
    missing = [p for p in mins if p not in R.primes]
    if missing:
        raise UnrepresentedThomasonSubset("points without ideal generators: %s" % missing, points=missing)
    gens = [R.one()]
    for p in mins:
        gens = [R.normal_form(a * b) for a in gens for b in R.primes[p]]
        gens = [g for g in gens if not g.is_zero()] or [R.zero()]
    return gens


# --- exact engine ---------------------------------------------------------------


def gamma_torsion_sub(M: GradedModule, I: Sequence) -> Dict[int, Matrix]:
    """Basis per degree of ``Γ_I M`` (elements killed by a power of ``I``).

    Iterates ``K_(t+1) = {m : g m ∈ K_t for all g}`` from ``K_0 = 0`` until it
    stabilizes.  Windowed modules: each step loses the top ``max deg g``
    degrees (their images leave the window), and the result is returned only
    on the degrees that stayed computable.
    """
    R, F = M.ring, M.field
    gens = [R.normal_form(R.poly(g)) for g in I]
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return {d: F.eye(M.dims[d]) for d in M.degrees()}
    if any(_is_unit_scalar(g) for g in gens):
        return {d: F.zeros(M.dims[d], 0) for d in M.degrees()}
    degs = [R.degree(g) for g in gens]
    shrink = 0 if M.exact else max(degs)
    top = M.hi
    K = {d: F.zeros(M.dims[d], 0) for d in M.degrees()}
    for _ in range(M.total_dim() + 2):
        top -= shrink
        if top < M.lo:
            raise WindowTooNarrow("window too narrow to compute the torsion submodule")
        new = {}
        for d in range(M.lo, top + 1):
            n = M.dims[d]
            blocks = []
            for g, e in zip(gens, degs):
                t = d + e
                if not M.lo <= t <= M.hi:
                    continue  # exact mode: the image is zero
                blocks.append(la.matmul(F, _complement_projector(F, K[t], M.dims[t]), M.act_element(g, d)))
            new[d] = la.nullspace(F, la.vstack(F, blocks, n)) if blocks else F.eye(n)
        stable = all(new[d].shape[1] == K[d].shape[1] for d in new)
        K = new
        if stable:
            break
    return K


def _is_unit_scalar(g: Poly) -> bool:
    return len(g.terms) == 1 and not any(next(iter(g.terms)))


def _complement_projector(F, K: Matrix, n: int) -> Matrix:
    """A matrix whose kernel is exactly the column span of ``K``."""
    if K.shape[1] == 0:
        return F.eye(n)
    return la.nullspace(F, K.T.copy()).T.copy()


def gamma_torsion(M: GradedModule, I: Sequence) -> GradedModule:
    basis = gamma_torsion_sub(M, I)
    if M.exact:
        return Subquotient(M, basis, None).module
    lo, hi = M.lo, max(basis)
    sub = M.rewindow(lo, hi) if hi < M.hi else M
    return Subquotient(sub, {d: basis[d] for d in sub.degrees()}, None).module


def gamma_thomason(M: GradedModule, Z, P) -> GradedModule:
    """``Γ_Z M`` for an up-closed ``Z``: torsion for the product of the minimal primes of ``Z``."""
    return gamma_torsion(M, ideal_for_subset(M.ring, P, Z))


def _projector(M: GradedModule, gens: Sequence[Poly], S: Tuple[int, ...], d: int) -> Matrix:
    F = M.field
    p = F.eye(M.dim(d))
    for j in S:
        p = la.matmul(F, M.fitting_projection(gens[j], d), p)
    return p


def cech_total(C: GradedComplex, gens: Sequence, drop_zero: bool = False) -> Tuple[GradedComplex, dict]:
    """Total Čech complex of an exact complex for the elements ``gens``.

    Summand ``(S, q)`` is ``C^q`` localized at ``prod_{j in S} g_j``, placed in
    total degree ``|S| + q``; the differential is ``δ + (-1)^|S| d_C`` with
    ``δ = sum_j (-1)^{#{k in S : k < j}}`` localization.  With ``drop_zero``
    the ``S = ∅`` summands are removed, degrees drop by one and the
    differential is negated: this is the cofiber of ``RΓ C -> C``.
    """
    R, F = C.ring, C.field
    if not C.exact:
        raise UnsupportedRing("the exact Čech engine needs a finite-dimensional complex")
    gens = [R.normal_form(R.poly(g)) for g in gens]
    r = len(gens)
    subsets = [S for p in range(r + 1) for S in combinations(range(r), p)]
    if drop_zero:
        subsets = [S for S in subsets if S]
    off = 1 if drop_zero else 0
    layout: Dict[int, List[Tuple[Tuple[int, ...], int]]] = {}
    pieces: Dict[Tuple[Tuple[int, ...], int], Subquotient] = {}
    for S in subsets:
        for q, M in C.terms.items():
            sq = Subquotient(M, {d: la.colspace(F, _projector(M, gens, S, d)) for d in M.degrees()}, None)
            if sq.module.is_zero():
                continue
            pieces[(S, q)] = sq
            layout.setdefault(len(S) + q - off, []).append((S, q))
    for n in layout:
        layout[n].sort(key=lambda t: (len(t[0]), t[0], t[1]))
    terms = {n: direct_sum([pieces[k].module for k in keys]) for n, keys in layout.items()}
    sgn_all = -1 if drop_zero else 1
    diffs = {}
    for n, src in layout.items():
        tgt = layout.get(n + 1)
        if not tgt:
            continue
        per = {}
        for d in C.degrees():
            rows = [pieces[k].module.dim(d) for k in tgt]
            cols = [pieces[k].module.dim(d) for k in src]
            D = F.zeros(sum(rows), sum(cols))
            c0 = 0
            for (S, q), cw in zip(src, cols):
                if cw:
                    lift = pieces[(S, q)].lift(d)
                    r0 = 0
                    for (T, q2), rw in zip(tgt, rows):
                        if rw:
                            blk = None
                            if q2 == q and len(T) == len(S) + 1 and set(S) < set(T):
                                j = (set(T) - set(S)).pop()
                                s = -1 if sum(1 for k in S if k < j) % 2 else 1
                                img = la.matmul(F, C.term(q).fitting_projection(gens[j], d), lift)
                                blk = pieces[(T, q2)].project(d, img) * s
                            elif T == S and q2 == q + 1:
                                s = -1 if len(S) % 2 else 1
                                img = la.matmul(F, C.d(q, d), lift)
                                blk = pieces[(T, q2)].project(d, img) * s
                            if blk is not None:
                                D[r0:r0 + rw, c0:c0 + cw] = blk * sgn_all
                        r0 += rw
                c0 += cw
            per[d] = D
        diffs[n] = per
    T = GradedComplex(R, terms, diffs, window=(C.lo, C.hi), check=True)
    return T, {"layout": layout, "pieces": pieces}


def rgamma_complex(C, Z=None, P=None, gens: Optional[Sequence] = None) -> GradedComplex:
    """``RΓ_Z C`` by the Čech complex on generators of an ideal cutting out ``Z``."""
    C = as_graded(C)
    if gens is None:
        gens = ideal_for_subset(C.ring, P, Z)
    return cech_total(C, gens)[0]


def rgamma_triangle(C, Z=None, P=None, gens: Optional[Sequence] = None):
    """``RΓ_Z C -> C -> T`` with both maps, as degreewise chain maps."""
    C = as_graded(C)
    R, F = C.ring, C.field
    if gens is None:
        gens = ideal_for_subset(R, P, Z)
    G, info = cech_total(C, gens)
    T, tinfo = cech_total(C, gens, drop_zero=True)
    mats = {}
    for n, keys in info["layout"].items():
        per = {}
        for d in C.degrees():
            out = F.zeros(C.term(n).dim(d), G.term(n).dim(d))
            c0 = 0
            for k in keys:
                w = info["pieces"][k].module.dim(d)
                if k[0] == () and k[1] == n and w:
                    out[:, c0:c0 + w] = info["pieces"][k].lift(d)
                c0 += w
            per[d] = out
        mats[n] = per
    proj = GradedMap(G, C, mats)
    mats2 = {}
    for n in C.terms:
        keys = tinfo["layout"].get(n, [])
        per = {}
        for d in C.degrees():
            out = F.zeros(T.term(n).dim(d), C.term(n).dim(d))
            r0 = 0
            for (S, q) in keys:
                pc = tinfo["pieces"][(S, q)]
                w = pc.module.dim(d)
                if len(S) == 1 and q == n and w:
                    img = C.term(n).fitting_projection(R.normal_form(R.poly(gens[S[0]])), d)
                    out[r0:r0 + w, :] = pc.project(d, img)
                r0 += w
            per[d] = out
        mats2[n] = per
    delta = GradedMap(C, T, mats2)
    return G, proj, T, delta


def cech_cohomology_exact(M, gens: Sequence, i: int) -> GradedModule:
    return cech_total(as_graded(M), gens)[0].homology(i)


# --- monomial engine --------------------------------------------------------------


def _exp_of(R: RingModel, f) -> Tuple[int, ...]:
    f = R.poly(f)
    if not f.is_monomial():
        raise UnsupportedRing("the monomial engine needs monomial generators: %s" % R.format(f))
    return next(iter(f.terms))


class MonomialCech:
    """Čech complexes of ``(R/J)`` localized at ``invert``, for monomial generators ``gens``.

    ``R`` must be a polynomial ring or a monomial quotient with positive
    variable degrees; ``J`` adds to the relations of ``R``.
    """

    def __init__(self, R: RingModel, gens: Sequence, module_ideal: Sequence = (), invert: Sequence = ()):
        if any(w <= 0 for w in R.degrees):
            raise UnsupportedRing("monomial engine needs positive degrees")
        if not R.is_monomial_ring():
            raise UnsupportedRing("monomial engine needs a monomial presentation")
        self.R = R
        self.F = R.field
        self.n = R.nvars
        self.gens = [_exp_of(R, g) for g in gens]
        self.J = [lm for lm in R.leading_monomials] + [_exp_of(R, g) for g in module_ideal]
        inv = set()
        for v in invert:
            inv.add(R.names.index(v) if isinstance(v, str) else int(v))
        self.invert = frozenset(inv)
        self.r = len(self.gens)
        self.subsets = [S for p in range(self.r + 1) for S in combinations(range(self.r), p)]
        self._inv = {S: self.invert | {v for j in S for v in range(self.n) if self.gens[j][v]}
                     for S in self.subsets}
        self.T = [max([h[v] for h in self.J] + [0]) for v in range(self.n)]

    # per multidegree

    def nonzero(self, a: Sequence[int], S: Tuple[int, ...]) -> bool:
        V = self._inv[S]
        for v in range(self.n):
            if v not in V and a[v] < 0:
                return False
        for h in self.J:
            if all(h[v] <= a[v] for v in range(self.n) if v not in V):
                return False
        return True

    def complex_at(self, a, drop_zero: bool = False) -> Tuple[Dict[int, List[tuple]], Dict[int, Matrix]]:
        """Basis (nonzero Čech summands) and differentials at multidegree ``a``.

        ``drop_zero`` removes the ``S = ∅`` summand (the cofiber of
        ``RΓ M -> M``, read with cohomological index ``p - 1``)."""
        basis = {p: [S for S in self.subsets if len(S) == p and self.nonzero(a, S)] for p in range(self.r + 1)}
        if drop_zero:
            basis[0] = []
        mats = {}
        for p in range(self.r):
            src, tgt = basis[p], basis[p + 1]
            M = self.F.zeros(len(tgt), len(src))
            idx = {S: k for k, S in enumerate(tgt)}
            for c, S in enumerate(src):
                for j in range(self.r):
                    if j in S:
                        continue
                    T = tuple(sorted(S + (j,)))
                    if T in idx:
                        s = -1 if sum(1 for k in S if k < j) % 2 else 1
                        M[idx[T], c] = self.F(s)
            mats[p] = M
        return basis, mats

    def _hom(self, a, i, drop_zero=False):
        if drop_zero:
            i += 1
        basis, mats = self.complex_at(a, drop_zero)
        n = len(basis.get(i, []))
        dout = mats.get(i, self.F.zeros(0, n))
        din = mats.get(i - 1, self.F.zeros(n, 0))
        Z = la.nullspace(self.F, dout) if dout.shape[0] else self.F.eye(n)
        B = la.colspace(self.F, din) if din.shape[1] else self.F.zeros(n, 0)
        C = la.extend_basis(self.F, B, Z)
        return basis, B, C

    def dim_at(self, a, i: int, drop_zero: bool = False) -> int:
        return self._hom(tuple(a), i, drop_zero)[2].shape[1]

    def multiplication_rank(self, a, v: int, i: int, steps: int = 1) -> int:
        """Rank of ``x_v^steps : H^i_a -> H^i_(a + steps e_v)``."""
        a = tuple(a)
        b = tuple(a[k] + (steps if k == v else 0) for k in range(self.n))
        ba, Ba, Ca = self._hom(a, i)
        bb, Bb, Cb = self._hom(b, i)
        if not Ca.shape[1]:
            return 0
        idx = {S: k for k, S in enumerate(bb[i])}
        # the localization maps send the basis element for S to the one for S (or 0)
        Mv = self.F.zeros(len(bb[i]), len(ba[i]))
        for c, S in enumerate(ba[i]):
            if S in idx:
                Mv[idx[S], c] = self.F.one
        img = la.matmul(self.F, Mv, Ca)
        co = la.Coordinates(self.F, la.hstack(self.F, [Bb, Cb], len(bb[i])))
        x = co(img)[Bb.shape[1]:, :]
        return la.rank(self.F, x)

    # per total degree

    def _classes(self):
        opts = []
        for v in range(self.n):
            o = [("neg",)] + [("fix", t) for t in range(self.T[v])] + [("up",)]
            opts.append(o)
        return product(*opts)

    def _representative(self, cls) -> Tuple[int, ...]:
        out = []
        for v, c in enumerate(cls):
            out.append(-1 if c[0] == "neg" else (c[1] if c[0] == "fix" else self.T[v]))
        return tuple(out)

    def _count(self, cls, d: int) -> Optional[int]:
        """Multidegrees in the class with weighted total ``d``; ``None`` when infinite."""
        w = self.R.degrees
        neg = [v for v, c in enumerate(cls) if c[0] == "neg"]
        up = [v for v, c in enumerate(cls) if c[0] == "up"]
        rest = d - sum(w[v] * c[1] for v, c in enumerate(cls) if c[0] == "fix")
        if neg and up:
            return None
        if not neg and not up:
            return 1 if rest == 0 else 0
        if neg:
            # a_v <= -1: write a_v = -1 - b_v, b_v >= 0
            target = -rest - sum(w[v] for v in neg)
            vs = neg
        else:
            target = rest - sum(w[v] * self.T[v] for v in up)
            vs = up
        if target < 0:
            return 0
        ways = [0] * (target + 1)
        ways[0] = 1
        for v in vs:
            for s in range(w[v], target + 1):
                ways[s] += ways[s - w[v]]
        return ways[target]

    def dim_total(self, d: int, i: int, drop_zero: bool = False) -> int:
        total = 0
        for cls in self._classes():
            h = self.dim_at(self._representative(cls), i, drop_zero)
            if not h:
                continue
            cnt = self._count(cls, d)
            if cnt is None:
                raise InfiniteDimensionalPiece("H^%d has an infinite-dimensional piece in degree %d" % (i, d),
                                               degree=d, index=i)
            total += h * cnt
        return total

    def table(self, i: int, degrees: Iterable[int], drop_zero: bool = False) -> Dict[int, int]:
        return {d: self.dim_total(d, i, drop_zero) for d in degrees}

    def box_table(self, i: int, box: Sequence[Tuple[int, int]], drop_zero: bool = False
                  ) -> Dict[Tuple[int, ...], int]:
        ranges = [range(lo, hi + 1) for lo, hi in box]
        return {a: self.dim_at(a, i, drop_zero) for a in product(*ranges)}


def _degrees_of(window) -> List[int]:
    lo, hi = window
    step = 1 if hi >= lo else -1
    return list(range(lo, hi + step, step))


def cech_cohomology(M, xs: Sequence, i: int, window=None, module_ideal: Sequence = (), invert: Sequence = ()
                    ) -> Dict[int, int]:
    """Degreewise dims of ``H^i`` of the Čech complex on ``xs``.

    ``M`` is an exact :class:`GradedModule` / :class:`GradedComplex`, or a
    :class:`RingModel` standing for the module ``R/(module_ideal)`` handled
    by the monomial engine on the given degree ``window`` (``(lo, hi)``, in
    either orientation).
    """
    if isinstance(M, RingModel):
        if window is None:
            raise WindowTooNarrow("the monomial engine needs a degree window")
        eng = MonomialCech(M, xs, module_ideal, invert)
        return eng.table(i, _degrees_of(window))
    H = cech_cohomology_exact(M, xs, i)
    degs = _degrees_of(window) if window is not None else list(H.degrees())
    return {d: H.dim(d) if H.lo <= d <= H.hi else 0 for d in degs}


# --- certificates -----------------------------------------------------------------


@dataclass
class LengthGrowthCertificate:
    prime: List[str]
    h: int
    windows: List[Tuple[int, int]]
    tables: List[Dict[int, int]]
    totals: List[int]
    threshold: int
    monotone: bool
    accepted: bool
    status: str = "EVIDENCE"

    @property
    def table(self) -> Dict[int, int]:
        return self.tables[0]

    @property
    def total(self) -> int:
        return self.totals[0]

    def to_dict(self) -> dict:
        return {"prime": self.prime, "index": self.h,
                "windows": [list(w) for w in self.windows],
                "tables": [{str(d): n for d, n in t.items()} for t in self.tables],
                "totals": self.totals, "threshold": self.threshold,
                "monotone": self.monotone, "accepted": self.accepted, "status": self.status}


def infinite_generation_certificate(R: RingModel, p_gens: Sequence, h: int, window: Tuple[int, int],
                                    threshold: int = 0, widenings: int = 3, step: int = 2,
                                    module_ideal: Sequence = ()) -> LengthGrowthCertificate:
    """Dim tables of ``H^h_p(R)`` on a window and on successive widenings.

    A finitely generated module with Artinian local cohomology has finite
    length, so totals growing past any fixed threshold are evidence (not
    proof) of infinite generation.  ``window = (start, end)``; widening moves
    ``end`` outward by ``step``.
    """
    if h < 1:
        raise PreconditionError("the index must be at least 1", index=h)
    eng = MonomialCech(R, p_gens, module_ideal)
    start, end = window
    direction = 1 if end >= start else -1
    windows, tables, totals = [], [], []
    for k in range(widenings + 1):
        w = (start, end + direction * step * k)
        t = eng.table(h, _degrees_of(w))
        windows.append(w)
        tables.append(t)
        totals.append(sum(t.values()))
    monotone = all(a <= b for a, b in zip(totals, totals[1:]))
    accepted = monotone and all(t > threshold for t in totals)
    return LengthGrowthCertificate([R.format(g) for g in p_gens], h, windows, tables, totals, threshold,
                                   monotone, accepted)


def finite_length_kernel_element(R: RingModel, M: GradedModule, max_degree: int = 4, budget: int = 2000,
                                 margin: int = 2) -> Tuple[Poly, Dict[int, int]]:
    """First homogeneous ``x`` in the homogeneous maximal ideal with ``ker(x on M)`` of finite length.

    Candidates: by degree, then by number of terms, then lexicographically
    (all coefficients 1).  Exact modules: every kernel has finite length, so
    the first candidate wins.  Windowed: the kernel must vanish in the last
    ``margin`` computable degrees (evidence of finite length).
    """
    if any(w == 0 for w in R.degrees):
        raise UnsupportedRing("needs a positively graded local ring")
    tried = 0
    for e in range(1, max_degree + 1):
        mons = R.standard_monomials(e)
        for size in range(1, len(mons) + 1):
            for combo in combinations(mons, size):
                tried += 1
                if tried > budget:
                    raise NotFoundInSearchBudget("no element found within %d candidates" % budget, budget=budget)
                x = Poly(R.field, R.nvars, {m: R.field.one for m in combo})
                table = {}
                for d in M.degrees():
                    if not M.exact and d + e > M.hi:
                        continue
                    table[d] = la.nullspace(M.field, M.act_element(x, d)).shape[1]
                if M.exact:
                    return x, table
                computable = sorted(table)
                if len(computable) < margin:
                    raise WindowTooNarrow("window too narrow to judge finite length")
                if all(table[d] == 0 for d in computable[-margin:]):
                    return x, table
    raise NotFoundInSearchBudget("no element found up to degree %d" % max_degree)


def _minimal_over(R: RingModel, p_vars: Sequence[int], I_exps: Sequence[Tuple[int, ...]]) -> bool:
    def covers(vs):
        return all(any(e[v] for v in vs) for e in I_exps)
    if not covers(p_vars):
        return False
    return not any(covers([u for u in p_vars if u != v]) for v in p_vars)


def localization_compat_check(R: RingModel, Z_gens: Sequence, p, indices: Sequence[int],
                              box: Sequence[Tuple[int, int]] = None, module_ideal: Sequence = (),
                              M: Optional[GradedModule] = None, invert: Optional[Sequence] = None) -> dict:
    """Compare ``H^i_Z(M)_p`` with ``H^i_{pR_p}(M_p)`` degree by degree.

    Monomial engine (``M`` omitted, module ``R/(module_ideal)``): ``p`` must be
    generated by variables and be minimal over ``Z_gens``; localizing means
    inverting the variables outside ``p``.  The left side localizes the
    cohomology (a colimit along multiplication by those variables), the right
    side runs the Čech complex of the localized module, per multidegree of
    ``box``.

    Exact engine (``M`` given): localization is the Fitting projection for
    the degree-0 elements ``invert`` (default: the degree-0 variables ``e``
    and ``1 - e`` that lie outside ``p``).
    """
    p_gens = list(R.primes[p]) if isinstance(p, str) else [R.poly(g) for g in p]
    if M is not None:
        return _compat_exact(R, Z_gens, p_gens, indices, M, invert)
    p_vars = []
    for g in p_gens:
        e = _exp_of(R, g)
        if sum(e) != 1:
            raise UnrepresentableLocalization("p must be generated by variables in the monomial model")
        p_vars.append(e.index(1))
    I_exps = [_exp_of(R, g) for g in Z_gens]
    if not _minimal_over(R, p_vars, I_exps):
        raise PreconditionError("p is not a minimal prime of Z")
    outside = [v for v in range(R.nvars) if v not in p_vars]
    if box is None:
        box = [(-8, 8)] * R.nvars
    lhs_eng = MonomialCech(R, Z_gens, module_ideal)
    rhs_eng = MonomialCech(R, [R.var(v) for v in p_vars], module_ideal, invert=outside)
    rows = []
    ok = True
    for i in indices:
        for a in product(*[range(lo, hi + 1) for lo, hi in box]):
            # colimit along the outside variables: push far enough that every
            # comparison with a relation exponent is settled, then read off
            # the rank of one more step (an isomorphism once stable)
            push = list(a)
            for v in outside:
                push[v] = max(a[v], lhs_eng.T[v], 0) + 1
            lhs = lhs_eng.dim_at(push, i)
            for v in outside:
                r = lhs_eng.multiplication_rank(push, v, i)
                if r != lhs:
                    raise ArithmeticError("colimit not stable at %s" % (push,))
            rhs = rhs_eng.dim_at(a, i)
            good = lhs == rhs
            ok = ok and good
            rows.append({"index": i, "multidegree": list(a), "lhs": lhs, "rhs": rhs, "ok": good})
    return {"ok": ok, "rows": rows, "inverted": [R.names[v] for v in outside], "box": [list(b) for b in box],
            "engine": "monomial"}


def _compat_exact(R, Z_gens, p_gens, indices, M, invert):
    F = R.field
    if invert is None:
        invert = []
        for v, w in enumerate(R.degrees):
            if w == 0:
                for cand in (R.var(v), R.one() - R.var(v)):
                    if not R.in_ideal(cand, p_gens):
                        invert.append(cand)
    invert = [R.normal_form(R.poly(f)) for f in invert]
    if any(R.in_ideal(f, p_gens) for f in invert):
        raise PreconditionError("an inverted element lies in p")
    G = as_graded(M)
    rows = []
    ok = True
    for i in indices:
        H = cech_total(G, Z_gens)[0].homology(i)
        left = {}
        for d in H.degrees():
            P = F.eye(H.dim(d))
            for f in invert:
                P = la.matmul(F, H.fitting_projection(f, d), P)
            left[d] = la.rank(F, P)
        # localize first: the summand where every inverted element is a unit
        L = _localize_exact(G, invert)
        H2 = cech_total(L, p_gens)[0].homology(i)
        for d in sorted(set(left) | set(H2.degrees())):
            l, r = left.get(d, 0), H2.dim(d) if H2.lo <= d <= H2.hi else 0
            good = l == r
            ok = ok and good
            rows.append({"index": i, "degree": d, "lhs": l, "rhs": r, "ok": good})
    return {"ok": ok, "rows": rows, "inverted": [R.format(f) for f in invert], "engine": "exact"}


def _localize_exact(G: GradedComplex, invert) -> GradedComplex:
    F = G.field
    terms, subs = {}, {}
    for n, M in G.terms.items():
        basis = {}
        for d in M.degrees():
            P = F.eye(M.dim(d))
            for f in invert:
                P = la.matmul(F, M.fitting_projection(f, d), P)
            basis[d] = la.colspace(F, P)
        subs[n] = Subquotient(M, basis, None)
        terms[n] = subs[n].module
    diffs = {}
    for n in G.diffs:
        if n + 1 in subs:
            diffs[n] = {d: subs[n + 1].project(d, la.matmul(F, G.d(n, d), subs[n].lift(d))) for d in G.degrees()}
    return GradedComplex(G.ring, terms, diffs, window=(G.lo, G.hi))
