"""Bounded complexes.

:class:`ChainComplex` holds free graded modules with polynomial-matrix
differentials.  :class:`GradedComplex` is its degreewise shadow: a complex
of :class:`GradedModule` terms with one k-matrix per internal degree.
Truncations, cones of degreewise maps and local cohomology all live at the
GradedComplex level because kernels and cokernels need not be free.

Indexing is cohomological: ``d^n`` goes from term ``n`` to term ``n + 1``.
"""
from __future__ import annotations

from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg as la
from .errors import (InhomogeneousElement, NotAChainMap, NotAComplex, PreconditionError, RingMismatch,
                     WindowTooNarrow)
from .modules import GradedModule, Subquotient, direct_sum, support_in_distinguished
from .polynomial import Poly
from .rings import RingModel

PolyMatrix = Tuple[Tuple[Poly, ...], ...]
Matrix = np.ndarray


def _pmat(R: RingModel, rows, nrows: int, ncols: int) -> PolyMatrix:
    if rows is None:
        return tuple(tuple(R.zero() for _ in range(ncols)) for _ in range(nrows))
    rows = [list(r) for r in rows]
    if len(rows) != nrows or any(len(r) != ncols for r in rows):
        raise ValueError("differential has shape %dx%s, expected %dx%d"
                         % (len(rows), {len(r) for r in rows} or "0", nrows, ncols))
    return tuple(tuple(R.normal_form(R.poly(f) if not isinstance(f, (int,)) else R.one().scale(f))
                       for f in r) for r in rows)


def _pmul(R: RingModel, A: PolyMatrix, B: PolyMatrix, inner: int) -> PolyMatrix:
    out = []
    for i in range(len(A)):
        row = []
        for j in range(len(B[0]) if B else 0):
            s = R.zero()
            for k in range(inner):
                if A[i][k] and B[k][j]:
                    s = s + A[i][k] * B[k][j]
            row.append(R.normal_form(s))
        out.append(tuple(row))
    return tuple(out)


def _pzero(M: PolyMatrix) -> bool:
    return all(f.is_zero() for r in M for f in r)


class ChainComplex:
    """A bounded complex of graded free modules.

    ``terms[n]`` lists the degrees ``a_j`` of the basis of ``⊕ R(-a_j)``;
    ``diffs[n]`` is a ``rank(n+1) x rank(n)`` matrix whose ``(i, j)`` entry
    is zero or homogeneous of degree ``a_j - b_i``.
    """

    def __init__(self, ring: RingModel, terms: Dict[int, Sequence[int]], diffs: Dict[int, object] = None,
                 check: bool = True):
        self.ring = ring
        self.terms: Dict[int, Tuple[int, ...]] = {int(n): tuple(int(a) for a in t)
                                                  for n, t in terms.items() if len(t)}
        diffs = diffs or {}
        self.diffs: Dict[int, PolyMatrix] = {}
        for n, rows in diffs.items():
            n = int(n)
            src, tgt = self.rank(n), self.rank(n + 1)
            if src == 0 or tgt == 0:
                if rows is not None and any(len(r) for r in rows) and src and tgt:
                    raise ValueError("nonzero differential between zero terms")
                continue
            self.diffs[n] = _pmat(ring, rows, tgt, src)
        if check:
            self.check()

    def rank(self, n: int) -> int:
        return len(self.terms.get(n, ()))

    def gens(self, n: int) -> Tuple[int, ...]:
        return self.terms.get(n, ())

    def d(self, n: int) -> PolyMatrix:
        if n in self.diffs:
            return self.diffs[n]
        return _pmat(self.ring, None, self.rank(n + 1), self.rank(n))

    @property
    def span(self) -> range:
        if not self.terms:
            return range(0)
        return range(min(self.terms), max(self.terms) + 1)

    def is_zero(self) -> bool:
        return not self.terms

    def check(self):
        R = self.ring
        for n, D in self.diffs.items():
            a, b = self.gens(n), self.gens(n + 1)
            for i, row in enumerate(D):
                for j, f in enumerate(row):
                    if f.is_zero():
                        continue
                    if not f.is_homogeneous(R.degrees) or R.degree(f) != a[j] - b[i]:
                        raise InhomogeneousElement(
                            "entry (%d,%d) of d^%d is %s, expected degree %d" % (i, j, n, R.format(f), a[j] - b[i]))
        for n in self.diffs:
            if n + 1 in self.diffs:
                if not _pzero(_pmul(R, self.diffs[n + 1], self.diffs[n], self.rank(n + 1))):
                    raise NotAComplex("d^%d d^%d != 0" % (n + 1, n), degree=n)

    def __eq__(self, other):
        if not isinstance(other, ChainComplex) or other.ring is not self.ring:
            return False
        if self.terms != other.terms:
            return False
        return all(self.d(n) == other.d(n) for n in self.terms)

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def euler_ranks(self) -> int:
        return sum((-1) ** (n % 2) * self.rank(n) for n in self.terms)

    def describe(self) -> dict:
        R = self.ring
        return {
            "terms": {str(n): list(t) for n, t in sorted(self.terms.items())},
            "diffs": {str(n): [[R.format(f) for f in r] for r in D] for n, D in sorted(self.diffs.items())},
        }

    def __repr__(self):
        return "ChainComplex(%s)" % ", ".join("%d:%s" % (n, list(t)) for n, t in sorted(self.terms.items()))

    # --- realization -------------------------------------------------------

    def default_window(self) -> Tuple[int, int]:
        R = self.ring
        all_gens = [a for t in self.terms.values() for a in t]
        if R.is_artinian:
            if not all_gens:
                return (0, -1)
            return (min(all_gens), max(all_gens) + R.top_degree())
        if R.window is None:
            raise WindowTooNarrow("a degree window is required over a non-Artinian ring")
        return tuple(R.window)

    def realize(self, window: Optional[Tuple[int, int]] = None) -> "GradedComplex":
        """Degreewise complex of k-vector spaces on the window (exact over Artinian rings)."""
        R, F = self.ring, self.ring.field
        if window is None:
            window = self.default_window()
        lo, hi = window
        if R.is_artinian:
            dlo, dhi = self.default_window()
            lo, hi = min(lo, dlo), max(hi, dhi)
        terms = {n: GradedModule.free(R, t, (lo, hi)) for n, t in self.terms.items()}
        diffs = {}
        for n, D in self.diffs.items():
            a, b = self.gens(n), self.gens(n + 1)
            per = {}
            for d in range(lo, hi + 1):
                blocks = []
                for i in range(len(b)):
                    row = []
                    for j in range(len(a)):
                        f = D[i][j]
                        src = len(R.standard_monomials(d - a[j]))
                        if f.is_zero():
                            row.append(F.zeros(len(R.standard_monomials(d - b[i])), src))
                        else:
                            row.append(R.multiplication_matrix(f, d - a[j]))
                    blocks.append(row)
                per[d] = _assemble(F, blocks, [len(R.standard_monomials(d - x)) for x in b],
                                   [len(R.standard_monomials(d - x)) for x in a])
            diffs[n] = per
        return GradedComplex(R, terms, diffs, window=(lo, hi), check=False)


def _assemble(F, blocks, rows, cols) -> Matrix:
    out = F.zeros(sum(rows), sum(cols))
    r = 0
    for i, rr in enumerate(rows):
        c = 0
        for j, cc in enumerate(cols):
            if rr and cc:
                out[r:r + rr, c:c + cc] = blocks[i][j]
            c += cc
        r += rr
    return out


class ChainMap:
    """Degree-0 map of free complexes: ``mats[n]`` is ``rank D^n x rank C^n``."""

    def __init__(self, source: ChainComplex, target: ChainComplex, mats: Dict[int, object], check=True):
        if source.ring is not target.ring:
            raise RingMismatch("chain map between complexes over different rings")
        self.source, self.target = source, target
        R = source.ring
        self.mats = {}
        for n, rows in mats.items():
            if source.rank(n) and target.rank(n):
                self.mats[int(n)] = _pmat(R, rows, target.rank(n), source.rank(n))
        if check:
            self.check()

    def m(self, n: int) -> PolyMatrix:
        return self.mats.get(n) or _pmat(self.source.ring, None, self.target.rank(n), self.source.rank(n))

    def check(self):
        R = self.source.ring
        C, D = self.source, self.target
        for n, M in self.mats.items():
            for i, row in enumerate(M):
                for j, f in enumerate(row):
                    if f and (not f.is_homogeneous(R.degrees) or R.degree(f) != C.gens(n)[j] - D.gens(n)[i]):
                        raise NotAChainMap("entry (%d,%d) in degree %d is not of the right degree" % (i, j, n))
        for n in set(C.terms) | set(D.terms):
            lhs = _pmul(R, D.d(n), self.m(n), D.rank(n))
            rhs = _pmul(R, self.m(n + 1), C.d(n), C.rank(n + 1))
            if C.rank(n) and D.rank(n + 1) and lhs != rhs:
                raise NotAChainMap("map does not commute with differentials at %d" % n, degree=n)


def identity_map(C: ChainComplex) -> ChainMap:
    R = C.ring
    return ChainMap(C, C, {n: [[R.one() if i == j else R.zero() for j in range(C.rank(n))]
                               for i in range(C.rank(n))] for n in C.terms})


def shift(C, n: int):
    """``C[n]``: term ``k`` is ``C^(k+n)``, differentials multiplied by ``(-1)^n``."""
    if isinstance(C, GradedComplex):
        return C.shift(n)
    sgn = -1 if n % 2 else 1
    terms = {k - n: t for k, t in C.terms.items()}
    diffs = {k - n: [[f.scale(sgn) for f in r] for r in D] for k, D in C.diffs.items()}
    return ChainComplex(C.ring, terms, diffs, check=False)


def tensor(C: ChainComplex, D: ChainComplex) -> ChainComplex:
    """Total tensor complex with ``d(a ⊗ b) = da ⊗ b + (-1)^|a| a ⊗ db``.

    Basis of term ``n``: blocks ``C^p ⊗ D^(n-p)`` by increasing ``p``, each
    ordered with the ``C`` basis index major.
    """
    if C.ring is not D.ring:
        raise RingMismatch("tensor of complexes over different rings")
    R = C.ring
    layout: Dict[int, List[Tuple[int, int, int]]] = {}
    terms: Dict[int, List[int]] = {}
    for p in sorted(C.terms):
        for q in sorted(D.terms):
            for i, a in enumerate(C.gens(p)):
                for j, b in enumerate(D.gens(q)):
                    layout.setdefault(p + q, []).append((p, i, j))
                    terms.setdefault(p + q, []).append(a + b)
    for n in layout:
        layout[n].sort(key=lambda t: t[0])
    # recompute degrees in the sorted order
    terms = {n: [C.gens(p)[i] + D.gens(n - p)[j] for p, i, j in lay] for n, lay in layout.items()}
    diffs = {}
    for n, src in layout.items():
        tgt = layout.get(n + 1)
        if not tgt:
            continue
        index = {t: k for k, t in enumerate(tgt)}
        M = [[R.zero() for _ in src] for _ in tgt]
        for col, (p, i, j) in enumerate(src):
            q = n - p
            dc = C.d(p)
            for i2 in range(C.rank(p + 1)):
                f = dc[i2][i]
                if f:
                    M[index[(p + 1, i2, j)]][col] = M[index[(p + 1, i2, j)]][col] + f
            dd = D.d(q)
            sgn = -1 if p % 2 else 1
            for j2 in range(D.rank(q + 1)):
                f = dd[j2][j]
                if f:
                    M[index[(p, i, j2)]][col] = M[index[(p, i, j2)]][col] + f.scale(sgn)
        diffs[n] = M
    return ChainComplex(R, terms, diffs)


def cone(f: ChainMap) -> ChainComplex:
    """``Cone^n = C^(n+1) ⊕ D^n`` with ``d(c, x) = (-d c, f c + d x)``."""
    C, D = f.source, f.target
    R = C.ring
    idx = sorted(set(n - 1 for n in C.terms) | set(D.terms))
    terms = {n: list(C.gens(n + 1)) + list(D.gens(n)) for n in idx}
    diffs = {}
    for n in idx:
        cs, ds = C.rank(n + 1), D.rank(n)
        ct, dt = C.rank(n + 2), D.rank(n + 1)
        if not (cs + ds) or not (ct + dt):
            continue
        M = [[R.zero() for _ in range(cs + ds)] for _ in range(ct + dt)]
        dC, fm, dD = C.d(n + 1), f.m(n + 1), D.d(n)
        for i in range(ct):
            for j in range(cs):
                M[i][j] = -dC[i][j]
        for i in range(dt):
            for j in range(cs):
                M[ct + i][j] = fm[i][j]
            for j in range(ds):
                M[ct + i][cs + j] = dD[i][j]
        diffs[n] = M
    return ChainComplex(R, terms, diffs)


def koszul(R: RingModel, xs: Sequence) -> ChainComplex:
    """``K(x_1..x_r)``: term ``-p`` has basis ``e_S``, ``|S| = p``, in lexicographic order,
    with ``d e_S = sum_{j in S} (-1)^{#{k in S : k < j}} x_j e_{S - j}``.
    """
    xs = [R.normal_form(R.poly(x)) for x in xs]
    if not xs:
        raise PreconditionError("Koszul complex of an empty sequence")
    degs = []
    for x in xs:
        if not x.is_homogeneous(R.degrees):
            raise InhomogeneousElement("%s is not homogeneous" % R.format(x), element=R.format(x))
        degs.append(R.degree(x) or 0)
    r = len(xs)
    subsets = {p: list(combinations(range(r), p)) for p in range(r + 1)}
    terms = {-p: [sum(degs[j] for j in S) for S in subsets[p]] for p in range(r + 1)}
    diffs = {}
    for p in range(1, r + 1):
        src, tgt = subsets[p], subsets[p - 1]
        index = {S: k for k, S in enumerate(tgt)}
        M = [[R.zero() for _ in src] for _ in tgt]
        for col, S in enumerate(src):
            for pos, j in enumerate(S):
                T = S[:pos] + S[pos + 1:]
                M[index[T]][col] = xs[j].scale(-1 if pos % 2 else 1)
        diffs[-p] = M
    return ChainComplex(R, terms, diffs)


# --- degreewise complexes ------------------------------------------------------


class GradedComplex:
    """Complex of :class:`GradedModule` terms; ``diffs[n][d]`` maps degree ``d``
    of term ``n`` to degree ``d`` of term ``n + 1``.

    All terms share one internal-degree window.
    """

    def __init__(self, ring: RingModel, terms: Dict[int, GradedModule], diffs: Dict[int, Dict[int, Matrix]],
                 window: Optional[Tuple[int, int]] = None, check: bool = True):
        self.ring = ring
        self.field = ring.field
        terms = {int(n): M for n, M in terms.items() if not M.is_zero() or not M.exact}
        if window is None:
            if not terms:
                window = (0, -1)
            elif all(M.exact for M in terms.values()):
                window = (min(M.lo for M in terms.values()), max(M.hi for M in terms.values()))
            else:
                ws = {(M.lo, M.hi) for M in terms.values() if not M.exact}
                if len(ws) != 1:
                    raise WindowTooNarrow("windowed terms with different windows")
                window = ws.pop()
        self.lo, self.hi = window
        self.terms: Dict[int, GradedModule] = {}
        for n, M in terms.items():
            if (M.lo, M.hi) != (self.lo, self.hi):
                M = M.rewindow(self.lo, self.hi)
            self.terms[n] = M
        self.exact = all(M.exact for M in self.terms.values())
        self.diffs: Dict[int, Dict[int, Matrix]] = {}
        for n, per in diffs.items():
            if n in self.terms and n + 1 in self.terms:
                self.diffs[n] = {d: per.get(d) if per.get(d) is not None else
                                 self.field.zeros(self.terms[n + 1].dims[d], self.terms[n].dims[d])
                                 for d in self.degrees()}
        self._homology: Dict[int, Subquotient] = {}
        if check:
            self.check()

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    @property
    def span(self) -> range:
        if not self.terms:
            return range(0)
        return range(min(self.terms), max(self.terms) + 1)

    def term(self, n: int) -> GradedModule:
        M = self.terms.get(n)
        if M is None:
            M = GradedModule(self.ring, self.lo, self.hi, {}, {}, exact=True, check=False)
        return M

    def d(self, n: int, deg: int) -> Matrix:
        per = self.diffs.get(n)
        if per is not None and deg in per:
            return per[deg]
        return self.field.zeros(self.term(n + 1).dim(deg), self.term(n).dim(deg))

    def check(self):
        F, R = self.field, self.ring
        for n in self.diffs:
            for deg in self.degrees():
                if n + 1 in self.diffs:
                    if not la.is_zero(la.matmul(F, self.d(n + 1, deg), self.d(n, deg))):
                        raise NotAComplex("d^%d d^%d != 0 in internal degree %d" % (n + 1, n, deg), degree=n)
                for v, w in enumerate(R.degrees):
                    t = deg + w
                    if not self.lo <= t <= self.hi:
                        continue
                    try:
                        a = la.matmul(F, self.d(n, t), self.term(n).act(v, deg))
                        b = la.matmul(F, self.term(n + 1).act(v, deg), self.d(n, deg))
                    except WindowTooNarrow:
                        continue
                    if not la.is_zero(a - b):
                        raise NotAComplex("d^%d is not R-linear (variable %s, degree %d)" % (n, R.names[v], deg))

    # --- homology ----------------------------------------------------------

    def homology_sq(self, n: int) -> Subquotient:
        hit = self._homology.get(n)
        if hit is None:
            F = self.field
            M = self.term(n)
            big = {deg: la.nullspace(F, self.d(n, deg)) for deg in self.degrees()}
            small = {deg: la.colspace(F, self.d(n - 1, deg)) for deg in self.degrees()}
            hit = Subquotient(M, big, small)
            self._homology[n] = hit
        return hit

    def homology(self, n: int) -> GradedModule:
        return self.homology_sq(n).module

    def homology_dims(self, n: int) -> Dict[int, int]:
        return self.homology(n).dims

    def homology_table(self) -> Dict[int, Dict[int, int]]:
        return {n: self.homology(n).dim_table() for n in self.span if not self.homology(n).is_zero()}

    def is_acyclic_off(self, keep: Sequence[int] = ()) -> bool:
        return all(self.homology(n).is_zero() for n in self.span if n not in keep)

    def euler_check(self) -> bool:
        """Per internal degree, alternating sums of term and homology dims agree."""
        for deg in self.degrees():
            a = sum((-1) ** (n % 2) * self.term(n).dim(deg) for n in self.span)
            b = sum((-1) ** (n % 2) * self.homology(n).dim(deg) for n in self.span)
            if a != b:
                return False
        return True

    def shift(self, m: int) -> "GradedComplex":
        sgn = -1 if m % 2 else 1
        terms = {n - m: M for n, M in self.terms.items()}
        diffs = {n - m: {d: A * sgn for d, A in per.items()} for n, per in self.diffs.items()}
        return GradedComplex(self.ring, terms, diffs, window=(self.lo, self.hi), check=False)

    def describe(self) -> dict:
        return {"window": [self.lo, self.hi], "mode": "exact" if self.exact else "windowed",
                "terms": {str(n): {str(d): k for d, k in M.dims.items() if k} for n, M in sorted(self.terms.items())},
                "homology": {str(n): {str(d): k for d, k in t.items()} for n, t in self.homology_table().items()}}

    def __repr__(self):
        return "GradedComplex(%s)" % ", ".join("%d:%d" % (n, M.total_dim()) for n, M in sorted(self.terms.items()))

    # --- constructors ---------------------------------------------------

    @classmethod
    def from_module(cls, M: GradedModule, n: int = 0) -> "GradedComplex":
        """``M`` concentrated in cohomological degree ``n``."""
        return cls(M.ring, {n: M}, {}, window=(M.lo, M.hi), check=False)

    @classmethod
    def zero(cls, ring: RingModel, window=(0, -1)) -> "GradedComplex":
        return cls(ring, {}, {}, window=window, check=False)


def as_graded(C, window=None) -> GradedComplex:
    if isinstance(C, GradedComplex):
        return C
    if isinstance(C, GradedModule):
        return GradedComplex.from_module(C)
    return C.realize(window)


class GradedMap:
    """Degreewise chain map: ``mats[n][d]`` from ``source^n_d`` to ``target^n_d``."""

    def __init__(self, source: GradedComplex, target: GradedComplex, mats: Dict[int, Dict[int, Matrix]],
                 check: bool = True):
        if source.ring is not target.ring:
            raise RingMismatch("map between complexes over different rings")
        if (source.lo, source.hi) != (target.lo, target.hi):
            raise WindowTooNarrow("map between complexes on different windows")
        self.source, self.target = source, target
        self.mats = mats
        if check:
            self.check()

    def m(self, n: int, d: int) -> Matrix:
        per = self.mats.get(n)
        if per is not None and d in per:
            return per[d]
        return self.source.field.zeros(self.target.term(n).dim(d), self.source.term(n).dim(d))

    def check(self):
        F = self.source.field
        A, B = self.source, self.target
        for n in set(A.span) | set(B.span) | {min(A.span, default=0) - 1}:
            for d in A.degrees():
                lhs = la.matmul(F, B.d(n, d), self.m(n, d))
                rhs = la.matmul(F, self.m(n + 1, d), A.d(n, d))
                if not la.is_zero(lhs - rhs):
                    raise NotAChainMap("map does not commute with d^%d in degree %d" % (n, d), degree=n)

    def on_homology(self, n: int) -> Dict[int, Matrix]:
        """Induced map ``H^n(source)_d -> H^n(target)_d`` for each internal degree."""
        F = self.source.field
        hs, ht = self.source.homology_sq(n), self.target.homology_sq(n)
        out = {}
        for d in self.source.degrees():
            img = la.matmul(F, self.m(n, d), hs.lift(d))
            out[d] = ht.project(d, img)
        return out

    def compose(self, other: "GradedMap") -> "GradedMap":
        """``other ∘ self``."""
        F = self.source.field
        mats = {}
        for n in set(self.source.span) | set(other.target.span):
            mats[n] = {d: la.matmul(F, other.m(n, d), self.m(n, d)) for d in self.source.degrees()}
        return GradedMap(self.source, other.target, mats, check=False)


def graded_cone(f: GradedMap) -> GradedComplex:
    """``Cone^n = A^(n+1) ⊕ B^n`` with ``d = [[-d_A, 0], [f, d_B]]``."""
    A, B = f.source, f.target
    F = A.field
    idx = sorted(set(n - 1 for n in A.terms) | set(B.terms))
    terms = {n: direct_sum([A.term(n + 1), B.term(n)]) for n in idx}
    diffs = {}
    for n in idx:
        per = {}
        for d in A.degrees():
            a1, b0 = A.term(n + 1).dim(d), B.term(n).dim(d)
            a2, b1 = A.term(n + 2).dim(d), B.term(n + 1).dim(d)
            M = F.zeros(a2 + b1, a1 + b0)
            if a2 and a1:
                M[:a2, :a1] = -A.d(n + 1, d)
            if b1 and a1:
                M[a2:, :a1] = f.m(n + 1, d)
            if b1 and b0:
                M[a2:, a1:] = B.d(n, d)
            per[d] = M
        diffs[n] = per
    return GradedComplex(A.ring, terms, diffs, window=(A.lo, A.hi), check=False)


# --- standard truncations ---------------------------------------------------------


def std_truncate_le(C, m: int, window=None) -> GradedComplex:
    """``... -> C^(m-1) -> ker d^m -> 0``: homology kept in degrees ``<= m``."""
    return std_truncation_le_map(as_graded(C, window), m)[0]


def std_truncate_ge(C, m: int, window=None) -> GradedComplex:
    """``0 -> coker d^(m-1) -> C^(m+1) -> ...``: homology kept in degrees ``>= m``."""
    return std_truncation_ge_map(as_graded(C, window), m)[0]


def std_truncation_le_map(C: GradedComplex, m: int) -> Tuple[GradedComplex, GradedMap]:
    F = C.field
    K = Subquotient(C.term(m), {d: la.nullspace(F, C.d(m, d)) for d in C.degrees()}, None)
    terms = {n: M for n, M in C.terms.items() if n < m}
    terms[m] = K.module
    diffs = {n: dict(per) for n, per in C.diffs.items() if n < m - 1}
    if m - 1 in C.terms:
        diffs[m - 1] = {d: K.project(d, C.d(m - 1, d)) for d in C.degrees()}
    T = GradedComplex(C.ring, terms, diffs, window=(C.lo, C.hi), check=False)
    mats = {n: {d: F.eye(C.term(n).dim(d)) for d in C.degrees()} for n in C.terms if n < m}
    mats[m] = {d: K.lift(d) for d in C.degrees()}
    return T, GradedMap(T, C, mats, check=False)


def std_truncation_ge_map(C: GradedComplex, m: int) -> Tuple[GradedComplex, GradedMap]:
    F = C.field
    Q = Subquotient(C.term(m), None, {d: la.colspace(F, C.d(m - 1, d)) for d in C.degrees()})
    terms = {n: M for n, M in C.terms.items() if n > m}
    terms[m] = Q.module
    diffs = {n: dict(per) for n, per in C.diffs.items() if n > m}
    if m + 1 in C.terms:
        diffs[m] = {d: la.matmul(F, C.d(m, d), Q.lift(d)) for d in C.degrees()}
    T = GradedComplex(C.ring, terms, diffs, window=(C.lo, C.hi), check=False)
    mats = {n: {d: F.eye(C.term(n).dim(d)) for d in C.degrees()} for n in C.terms if n > m}
    mats[m] = {d: Q.project(d, F.eye(C.term(m).dim(d))) for d in C.degrees()}
    return T, GradedMap(C, T, mats, check=False)


def long_exact_check(f: GradedMap, g: GradedMap, span: Optional[range] = None) -> dict:
    """Rank bookkeeping for ``A -f-> B -g-> C`` with ``g f = 0`` inducing a triangle.

    Checks, per internal degree: ``H(g)H(f) = 0``; exactness at ``H^n(B)``
    (``h^n(B) = rk f_n + rk g_n``); and that the connecting map has a
    consistent rank (``h^n(C) - rk g_n = h^(n+1)(A) - rk f_(n+1) >= 0``).
    Also reports the alternating dimension sum, which must vanish.
    """
    A, B, C = f.source, f.target, g.target
    F = A.field
    if span is None:
        ns = set(A.span) | set(B.span) | set(C.span)
        span = range(min(ns, default=0) - 1, max(ns, default=0) + 2)
    ok = True
    failures = []
    sums = {}
    for d in A.degrees():
        rf, rg = {}, {}
        for n in span:
            fn, gn = f.on_homology(n)[d], g.on_homology(n)[d]
            rf[n], rg[n] = la.rank(F, fn), la.rank(F, gn)
            comp = la.matmul(F, gn, fn)
            if not la.is_zero(comp):
                ok = False
                failures.append({"degree": d, "n": n, "reason": "composite nonzero"})
        for n in span:
            hb = B.homology(n).dim(d)
            if hb != rf[n] + rg[n]:
                ok = False
                failures.append({"degree": d, "n": n, "reason": "not exact at middle term"})
            if n + 1 in rf:
                left = C.homology(n).dim(d) - rg[n]
                right = A.homology(n + 1).dim(d) - rf[n + 1]
                if left != right or left < 0:
                    ok = False
                    failures.append({"degree": d, "n": n, "reason": "connecting rank mismatch"})
        s = sum((-1) ** (n % 2) * (A.homology(n).dim(d) - B.homology(n).dim(d) + C.homology(n).dim(d))
                for n in span)
        sums[d] = s
        if s:
            ok = False
    return {"ok": ok, "alternating_sums": sums, "failures": failures}


# --- Koszul properties, aisle membership -----------------------------------------------


def homology(C, i: int, window=None) -> GradedModule:
    return as_graded(C, window).homology(i)


def is_regular_sequence(R: RingModel, xs: Sequence, window=None) -> bool:
    """``H^i(K(xs)) = 0`` for every ``i != 0`` (on the window, exactly over Artinian rings)."""
    G = koszul(R, xs).realize(window)
    return G.is_acyclic_off((0,))


def is_regular_sequence_direct(R: RingModel, xs: Sequence, window=None) -> bool:
    """Each ``x_i`` is a nonzerodivisor on ``R/(x_1..x_(i-1))`` and ``R/(xs) != 0``.

    Checked degreewise on the window (exact for Artinian quotients); this
    route shares no code with the Koszul complex.
    """
    xs = [R.poly(x) for x in xs]
    if R._is_unit_ideal(xs):
        return False
    for i, x in enumerate(xs):
        M = GradedModule.cyclic(R, xs[:i], window=window)
        e = R.degree(R.normal_form(x))
        if e is None:
            return False
        for d in M.degrees():
            if not M.exact and d + e > M.hi:
                continue
            if la.nullspace(M.field, M.act_element(x, d)).shape[1]:
                return False
    return True


def aisle_membership(C, Phi, P=None, window=None) -> Tuple[bool, List[dict]]:
    """``Supp H^i(C) ⊆ Z^i`` for all ``i``, via annihilators and distinguished primes."""
    G = as_graded(C, window)
    P = P or Phi.poset
    ok = True
    report = []
    for n in G.span:
        H = G.homology(n)
        if H.is_zero():
            continue
        supp = support_in_distinguished(H, P)
        allowed = Phi.at(n)
        good = set(supp) <= allowed
        ok = ok and good
        report.append({"degree": n, "dims": {str(d): k for d, k in H.dim_table().items()},
                       "support": supp, "allowed": P.sort(allowed), "ok": good})
    return ok, report


def coaisle_membership_window(C, Phi, indices: Sequence[int], P=None, window=None) -> Dict[int, bool]:
    """For each ``i``: ``H^j(RΓ_{Z^(i+1)} C) = 0`` for all ``j <= i``."""
    from .localcoh import rgamma_complex
    G = as_graded(C, window)
    P = P or Phi.poset
    out = {}
    for i in indices:
        Z = Phi.at(i + 1)
        if not Z:
            out[i] = True
            continue
        # RΓ_Spec is the identity; this also keeps windowed inputs usable
        L = G if Z == P.full else rgamma_complex(G, Z, P)
        out[i] = all(L.homology(j).is_zero() for j in L.span if j <= i)
    return out
