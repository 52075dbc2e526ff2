"""Graded modules given degree by degree: a k-basis per degree plus the
matrices by which each ring variable acts.

Two modes.  *Exact* modules are finite dimensional and every piece outside
``[lo, hi]`` is zero.  *Windowed* modules only know the pieces inside the
window; an action whose target leaves the window is unknown, and anything
depending on it raises :class:`WindowTooNarrow`.
"""
from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg as la
from .errors import OutOfWindow, PreconditionError, RingMismatch, UndecidableSupport, UnsupportedRing, \
    WindowTooNarrow
from .polynomial import Exp, Poly
from .rings import RingModel

Matrix = np.ndarray


class GradedModule:
    """Pieces ``M_d`` for ``lo <= d <= hi`` with variable actions.

    ``actions[(v, d)]`` is the matrix of ``x_v : M_d -> M_{d + deg x_v}``.
    ``bounded_below`` records that ``M_d = 0`` for ``d < lo`` (always true in
    exact mode); windowed annihilator and generator computations need it.
    """

    def __init__(self, ring: RingModel, lo: int, hi: int, dims: Dict[int, int],
                 actions: Dict[Tuple[int, int], Matrix], exact: bool, labels: Dict[int, list] = None,
                 bounded_below: bool = True, check: bool = True):
        self.ring = ring
        self.field = ring.field
        self.lo, self.hi = lo, hi
        self.dims = {d: int(dims.get(d, 0)) for d in range(lo, hi + 1)}
        self.exact = exact
        self.bounded_below = bounded_below or exact
        self.labels = labels or {}
        self.actions: Dict[Tuple[int, int], Matrix] = {}
        for v, w in enumerate(ring.degrees):
            for d in range(lo, hi + 1):
                t = d + w
                if lo <= t <= hi:
                    a = actions.get((v, d))
                    if a is None:
                        a = self.field.zeros(self.dims[t], self.dims[d])
                    if a.shape != (self.dims[t], self.dims[d]):
                        raise ValueError("action of %s on degree %d has shape %s" % (ring.names[v], d, a.shape))
                    self.actions[(v, d)] = a
        self._elt_cache: Dict[tuple, Matrix] = {}
        if check:
            self.check()

    # --- basic access ---------------------------------------------------

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def dim(self, d: int) -> int:
        if self.lo <= d <= self.hi:
            return self.dims[d]
        if self.exact or (d < self.lo and self.bounded_below):
            return 0
        raise OutOfWindow("degree %d outside window [%d, %d]" % (d, self.lo, self.hi), degree=d)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total_dim() == 0

    def dim_table(self) -> Dict[int, int]:
        return {d: n for d, n in self.dims.items() if n}

    def support_degrees(self) -> List[int]:
        return [d for d in self.degrees() if self.dims[d]]

    def act(self, v: int, d: int) -> Matrix:
        """Matrix of ``x_v`` from degree ``d``."""
        t = d + self.ring.degrees[v]
        src = self.dim(d)
        if (v, d) in self.actions:
            return self.actions[(v, d)]
        if src == 0:
            return self.field.zeros(self.dim(t) if self.lo <= t <= self.hi or self.exact else 0, 0)
        if self.exact:
            return self.field.zeros(self.dim(t), src)
        raise WindowTooNarrow("action of %s on degree %d leaves the window" % (self.ring.names[v], d),
                              degree=d, variable=self.ring.names[v])

    def act_monomial(self, e: Exp, d: int) -> Matrix:
        key = ("m", e, d)
        hit = self._elt_cache.get(key)
        if hit is not None:
            return hit
        out = self.field.eye(self.dim(d))
        cur = d
        for v, k in enumerate(e):
            for _ in range(k):
                out = la.matmul(self.field, self.act(v, cur), out)
                cur += self.ring.degrees[v]
        self._elt_cache[key] = out
        return out

    def act_element(self, f, d: int) -> Matrix:
        """Matrix of multiplication by a homogeneous ring element on ``M_d``."""
        f = self.ring.normal_form(f)
        e = self.ring.degree(f)
        if e is None:
            return self.field.zeros(0, self.dim(d))
        out = None
        for m, c in f.terms.items():
            a = self.act_monomial(m, d) * c
            out = a if out is None else out + a
        return out

    def check(self):
        """Actions commute and kill the relations, wherever computable."""
        R, F = self.ring, self.field
        for d in self.degrees():
            for v in range(R.nvars):
                for u in range(v + 1, R.nvars):
                    try:
                        a = la.matmul(F, self.act(u, d + R.degrees[v]), self.act(v, d))
                        b = la.matmul(F, self.act(v, d + R.degrees[u]), self.act(u, d))
                    except (WindowTooNarrow, OutOfWindow):
                        continue
                    if not la.is_zero(a - b):
                        raise PreconditionError("actions of %s and %s do not commute in degree %d"
                                                % (R.names[v], R.names[u], d))
            for g in R.gb:
                try:
                    m = self.act_element(g, d)
                except (WindowTooNarrow, OutOfWindow):
                    continue
                if not la.is_zero(m):
                    raise PreconditionError("relation %s does not act as zero" % R.format(g))

    def describe(self) -> dict:
        return {"mode": "exact" if self.exact else "windowed", "window": [self.lo, self.hi],
                "dims": {str(d): n for d, n in self.dims.items()}}

    def __repr__(self):
        return "GradedModule(%s, dims=%s)" % ("exact" if self.exact else "windowed", self.dim_table())

    # --- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, ring: RingModel, lo: int = 0, hi: int = -1) -> "GradedModule":
        return cls(ring, lo, hi, {}, {}, exact=True, check=False)

    @classmethod
    def free(cls, ring: RingModel, gen_degrees: Sequence[int], window: Optional[Tuple[int, int]] = None
             ) -> "GradedModule":
        """``⊕_j R(-a_j)``; exact over Artinian rings, else on ``window``."""
        gen_degrees = tuple(gen_degrees)
        if ring.is_artinian:
            if gen_degrees:
                lo, hi = min(gen_degrees), max(gen_degrees) + ring.top_degree()
            else:
                lo, hi = 0, -1
            if window is not None:
                lo, hi = min(lo, window[0]), max(hi, window[1])
            exact = True
        else:
            if window is None:
                window = ring.window
            if window is None:
                raise WindowTooNarrow("a window is required over a non-Artinian ring")
            lo, hi = window
            exact = False
        dims, labels, actions = {}, {}, {}
        for d in range(lo, hi + 1):
            labels[d] = [(j, m) for j, a in enumerate(gen_degrees) for m in ring.standard_monomials(d - a)]
            dims[d] = len(labels[d])
        F = ring.field
        for v, w in enumerate(ring.degrees):
            x = ring.var(v)
            for d in range(lo, hi + 1):
                if not lo <= d + w <= hi:
                    continue
                blocks = [ring.multiplication_matrix(x, d - a) for a in gen_degrees]
                actions[(v, d)] = _block_diag_rect(F, blocks)
        bb = (not gen_degrees) or lo <= min(gen_degrees)
        return cls(ring, lo, hi, dims, actions, exact=exact, labels=labels, bounded_below=bb, check=False)

    @classmethod
    def cyclic(cls, ring: RingModel, ideal: Sequence = (), window: Optional[Tuple[int, int]] = None,
               shift: int = 0) -> "GradedModule":
        """``R/(ideal)``, generated in degree ``shift``."""
        if len(ideal) and ring._is_unit_ideal(list(ideal)):
            return cls.zero(ring)
        Q = ring.quotient(ideal) if len(ideal) else ring
        if Q.is_artinian:
            lo, hi = shift, shift + Q.top_degree()
            exact = True
            if window is not None:
                lo, hi = min(lo, window[0]), max(hi, window[1])
        else:
            window = window if window is not None else ring.window
            if window is None:
                raise WindowTooNarrow("a window is required for an infinite-dimensional quotient")
            lo, hi = window
            exact = False
        dims, labels, actions = {}, {}, {}
        for d in range(lo, hi + 1):
            labels[d] = list(Q.standard_monomials(d - shift))
            dims[d] = len(labels[d])
        for v, w in enumerate(ring.degrees):
            x = ring.var(v)
            for d in range(lo, hi + 1):
                if lo <= d + w <= hi:
                    actions[(v, d)] = Q.multiplication_matrix(x, d - shift)
        return cls(ring, lo, hi, dims, actions, exact=exact, labels=labels,
                   bounded_below=lo <= shift, check=False)

    # --- windows ------------------------------------------------------------

    def rewindow(self, lo: int, hi: int) -> "GradedModule":
        """Exact modules only: the same module on a different (covering) window."""
        if not self.exact:
            if lo < self.lo or hi > self.hi:
                raise WindowTooNarrow("cannot widen a windowed module")
        else:
            for d in self.degrees():
                if self.dims[d] and not lo <= d <= hi:
                    raise PreconditionError("new window cuts off a nonzero piece")
        dims = {d: self.dim(d) if (self.exact or self.lo <= d <= self.hi) else 0 for d in range(lo, hi + 1)}
        acts = {}
        for v, w in enumerate(self.ring.degrees):
            for d in range(lo, hi + 1):
                if lo <= d + w <= hi:
                    try:
                        acts[(v, d)] = self.act(v, d)
                    except WindowTooNarrow:
                        pass
        return GradedModule(self.ring, lo, hi, dims, acts, self.exact,
                            {d: self.labels.get(d) for d in range(lo, hi + 1)},
                            bounded_below=self.bounded_below and lo <= self.lo, check=False)

    # --- derived modules -----------------------------------------------------

    def direct_sum(self, others: Sequence["GradedModule"]) -> "GradedModule":
        mods = [self] + list(others)
        return direct_sum(mods)

    def subquotient(self, big: Dict[int, Matrix], small: Dict[int, Matrix]) -> "Subquotient":
        return Subquotient(self, big, small)

    def submodule(self, basis: Dict[int, Matrix]) -> "Subquotient":
        return Subquotient(self, basis, None)

    def quotient(self, basis: Dict[int, Matrix]) -> "Subquotient":
        return Subquotient(self, None, basis)

    def fitting_projection(self, f, d: int) -> Matrix:
        """Projection of ``M_d`` onto the part where the degree-0 element ``f`` is invertible.

        ``M_d = ker f^N ⊕ im f^N`` for ``N = dim M_d``; the projection is
        along the kernel.  Positive-degree elements act nilpotently on
        exact modules, so their projection is zero there.
        """
        F = self.field
        n = self.dim(d)
        deg = self.ring.degree(f)
        if deg is None:
            return F.zeros(n, n)
        if deg != 0:
            if self.exact:
                return F.zeros(n, n)
            raise PreconditionError("localizing a windowed module at a positive-degree element")
        a = self.act_element(f, d)
        p = F.eye(n)
        for _ in range(max(n, 1)):
            p = la.matmul(F, a, p)
        img = la.colspace(F, p)
        ker = la.nullspace(F, p)
        basis = la.hstack(F, [img, ker], n)
        if basis.shape[1] != n:
            raise ArithmeticError("Fitting decomposition failed")
        co = la.inverse(F, basis)
        keep = F.zeros(n, n)
        for i in range(img.shape[1]):
            keep[i, i] = F.one
        return la.matmul(F, basis, la.matmul(F, keep, co))

    # --- generators ----------------------------------------------------------

    def generator_degrees(self) -> Dict[int, Matrix]:
        """Minimal generators: for each degree a complement of ``m M`` in ``M_d``."""
        R, F = self.ring, self.field
        if any(w == 0 for w in R.degrees):
            raise UnsupportedRing("minimal generators need a positively graded ring")
        if not self.bounded_below:
            raise WindowTooNarrow("module is not known to vanish below its window")
        out = {}
        for d in self.degrees():
            n = self.dims[d]
            if not n:
                continue
            imgs = [la.matmul(F, self.act(v, d - w), F.eye(self.dim(d - w)))
                    for v, w in enumerate(R.degrees) if d - w >= self.lo]
            span = la.colspace(F, la.hstack(F, imgs, n)) if imgs else F.zeros(n, 0)
            new = la.extend_basis(F, span, F.eye(n))
            if new.shape[1]:
                out[d] = new
        return out

    def top_generator_degree(self) -> Optional[int]:
        g = self.generator_degrees()
        return max(g) if g else None


def _block_diag_rect(F, blocks: List[Matrix]) -> Matrix:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = F.zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def direct_sum(mods: Sequence[GradedModule]) -> GradedModule:
    if not mods:
        raise ValueError("empty direct sum")
    R = mods[0].ring
    if any(m.ring is not R for m in mods):
        raise RingMismatch("direct sum over different rings")
    exact = all(m.exact for m in mods)
    lo = min(m.lo for m in mods)
    hi = max(m.hi for m in mods)
    if not exact:
        lo = max(m.lo for m in mods)
        hi = min(m.hi for m in mods)
    F = R.field
    dims, acts = {}, {}
    for d in range(lo, hi + 1):
        dims[d] = sum(m.dim(d) for m in mods)
    for v, w in enumerate(R.degrees):
        for d in range(lo, hi + 1):
            if lo <= d + w <= hi:
                try:
                    acts[(v, d)] = _block_diag_rect(F, [m.act(v, d) for m in mods])
                except WindowTooNarrow:
                    pass
    return GradedModule(R, lo, hi, dims, acts, exact, bounded_below=all(m.bounded_below for m in mods),
                        check=False)


class Subquotient:
    """``big / small`` inside an ambient module, with lift and projection maps.

    ``big=None`` means the whole ambient module and ``small=None`` means 0.
    The closure of ``big`` and ``small`` under the actions is verified.
    """

    def __init__(self, ambient: GradedModule, big: Optional[Dict[int, Matrix]],
                 small: Optional[Dict[int, Matrix]]):
        M, F = ambient, ambient.field
        self.ambient = M
        self.big, self.small, self.comp = {}, {}, {}
        self._coords = {}
        for d in M.degrees():
            n = M.dims[d]
            B = la.colspace(F, big[d]) if big is not None and d in big else (
                F.zeros(n, 0) if big is not None else F.eye(n))
            S = la.colspace(F, small[d]) if small is not None and d in small else F.zeros(n, 0)
            if S.shape[1] and not la.in_span(F, B, S):
                raise PreconditionError("small subspace not contained in big one in degree %d" % d)
            C = la.extend_basis(F, S, B)
            self.big[d], self.small[d], self.comp[d] = B, S, C
            self._coords[d] = la.Coordinates(F, la.hstack(F, [S, C], n))
        acts = {}
        for (v, d), a in M.actions.items():
            t = d + M.ring.degrees[v]
            img = la.matmul(F, a, self.comp[d])
            if not la.in_span(F, self.big[t], img):
                raise PreconditionError("subspace not closed under %s in degree %d" % (M.ring.names[v], d))
            imgS = la.matmul(F, a, self.small[d])
            if imgS.shape[1] and not la.in_span(F, self.small[t], imgS):
                raise PreconditionError("small subspace not closed under %s in degree %d"
                                        % (M.ring.names[v], d))
            acts[(v, d)] = self.project(t, img)
        dims = {d: self.comp[d].shape[1] for d in M.degrees()}
        self.module = GradedModule(M.ring, M.lo, M.hi, dims, acts, M.exact,
                                   bounded_below=M.bounded_below, check=False)

    def lift(self, d: int) -> Matrix:
        """Representatives in the ambient module of the basis of degree ``d``."""
        return self.comp[d]

    def project(self, d: int, v: Matrix) -> Matrix:
        """Coordinates of ambient vectors (lying in ``big``) in the subquotient basis."""
        c = self._coords[d](v)
        return c[self.small[d].shape[1]:, :]

    def contains(self, d: int, v: Matrix) -> bool:
        return la.in_span(self.ambient.field, self.big[d], v)


# --- annihilators and support ---------------------------------------------


def annihilator_window(M: GradedModule, bound: Optional[int] = None) -> List[Poly]:
    """Homogeneous generators of ``ann M``, up to a degree bound.

    Exact mode: the answer is exact; elements of degree above
    ``hi - lo`` kill everything, so degrees up to ``hi - lo + max deg`` suffice.
    Windowed mode: ``r`` kills ``M`` iff it kills the generators, so degree
    ``e`` is decided by degrees ``d <= hi - e``; the bound defaults to
    ``hi - (top generator degree)`` and ``WindowTooNarrow`` is raised when
    that is negative.
    """
    R, F = M.ring, M.field
    if M.is_zero() and M.exact:
        return [R.one()]
    maxw = max(R.degrees) if R.degrees else 0
    if M.exact:
        deflt = (M.hi - M.lo) + maxw
        if R.is_artinian:
            deflt = min(deflt, R.top_degree())
    else:
        g = M.top_generator_degree()
        if g is None:
            raise WindowTooNarrow("no generators inside the window")
        deflt = M.hi - g
        if deflt < 0:
            raise WindowTooNarrow("window ends before the top generator degree", top_generator=g)
    if bound is None:
        bound = deflt
    elif not M.exact and bound > deflt:
        raise WindowTooNarrow("degree bound %d needs degrees above the window" % bound)
    found: List[Poly] = []
    for e in range(0, bound + 1):
        basis = R.standard_monomials(e)
        if not basis:
            continue
        degs = [d for d in M.degrees() if M.dims[d] and (M.exact or d + e <= M.hi)]
        cols = []
        for m in basis:
            parts = []
            for d in degs:
                a = M.act_monomial(m, d)
                parts.extend(a.flat)
            cols.append(parts)
        nrows = len(cols[0]) if cols else 0
        A = F.zeros(nrows, len(basis))
        for j, col in enumerate(cols):
            for i, c in enumerate(col):
                A[i, j] = c
        ker = la.nullspace(F, A) if nrows else F.eye(len(basis))
        for j in range(ker.shape[1]):
            f = R.element(ker[:, j:j + 1].flatten(), e)
            f = R.normal_form(f)
            if f.is_zero():
                continue
            if found and R.in_ideal(f, found):
                continue
            found.append(f.monic(R.order))
    return found


def support_in_distinguished(M: GradedModule, P=None, ann: Optional[Sequence[Poly]] = None) -> List[str]:
    """Distinguished primes containing ``ann M`` (``Supp M = V(ann M)`` for f.g. ``M``).

    With a poset ``P`` every poset point must be a distinguished prime of
    the ring; only those ids are returned, in poset order.
    """
    R = M.ring
    if ann is None:
        ann = annihilator_window(M)
    if P is not None:
        missing = [p for p in P.ids if p not in R.primes]
        if missing:
            raise UndecidableSupport("poset points without ideal generators: %s" % missing, points=missing)
        ids = list(P.ids)
    else:
        ids = sorted(R.primes)
    return [p for p in ids if all(R.in_ideal(g, R.primes[p]) for g in ann)]


def graded_piece(R: RingModel, M: Optional[GradedModule], d: int) -> list:
    """Basis labels of ``M_d`` (``M = R`` when ``None``)."""
    if M is None:
        if R.window is not None and not R.is_artinian and not R.window[0] <= d <= R.window[1]:
            raise OutOfWindow("degree %d outside the ring window %s" % (d, R.window))
        return list(R.standard_monomials(d))
    M.dim(d)
    return list(M.labels.get(d) or range(M.dim(d)))
