"""Graded commutative k-algebras ``k[x_1..x_n]/I`` with distinguished primes."""
from __future__ import annotations

from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InhomogeneousElement, PreconditionError, UnknownVariable, UnsupportedRing
from .field import Field
from .polynomial import Exp, MonomialOrder, Poly, _GB, buchberger, divides, parse_poly, reduce_terms


class RingModel:
    """A positively graded algebra presented by homogeneous relations.

    Variables of degree 0 are allowed only when the algebra is Artinian
    (some pure power of every variable is a leading monomial), which is how
    finite products such as ``k[x]/(x^2) x k`` are presented via idempotents.

    Parameters
    ----------
    field : Field
    variables : list of names
    degrees : list of nonnegative ints, default all 1
    relations : polynomials (strings or :class:`Poly`) generating ``I``
    primes : mapping point id -> generator list of a distinguished prime
    local : id of the designated maximal ideal, if the ring is local
    window : default degree window ``(lo, hi)`` for windowed computations
    """

    def __init__(self, field: Field, variables: Sequence[str], degrees: Sequence[int] = None,
                 relations: Sequence = (), primes: Dict[str, Sequence] = None,
                 local: Optional[str] = None, order: str = "grevlex",
                 window: Optional[Tuple[int, int]] = None, budget: int = 100000):
        self.field = field
        self.names = tuple(variables)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        self.degrees = tuple(degrees) if degrees is not None else (1,) * len(self.names)
        if len(self.degrees) != len(self.names) or any(d < 0 for d in self.degrees):
            raise ValueError("need one nonnegative degree per variable")
        self.order = MonomialOrder(order, self.degrees)
        self.nvars = len(self.names)
        self.relations = tuple(self.poly(r) for r in relations)
        for r in self.relations:
            self._check_homogeneous(r)
        self.gb = buchberger(self.relations, self.order, budget=budget)
        self._gbl = [_GB(g, self.order) for g in self.gb]
        self.leading_monomials = tuple(g.lm for g in self._gbl)
        self.window = tuple(window) if window is not None else None
        self.budget = budget
        self.is_artinian = all(
            any(sum(lm) == lm[i] and lm[i] > 0 for lm in self.leading_monomials)
            for i in range(self.nvars))
        if self.is_one():
            raise PreconditionError("the relations generate the unit ideal")
        if any(d == 0 for d in self.degrees) and not self.is_artinian:
            raise UnsupportedRing("degree-0 variables need an Artinian presentation")
        self._ideal_cache: Dict[tuple, List[Poly]] = {}
        self.primes: Dict[str, Tuple[Poly, ...]] = {}
        for pid, gens in (primes or {}).items():
            g = tuple(self.poly(x) for x in gens)
            for x in g:
                self._check_homogeneous(x)
            if self._is_unit_ideal(g):
                raise PreconditionError("distinguished prime %r is the unit ideal" % pid)
            self.primes[str(pid)] = g
        if local is not None and local not in self.primes:
            raise PreconditionError("local maximal ideal %r is not a distinguished prime" % local)
        self.local = local
        self._std_cache: Dict[int, List[Exp]] = {}

    # --- elements -------------------------------------------------------

    def poly(self, f) -> Poly:
        if isinstance(f, Poly):
            if f.nvars != self.nvars:
                raise UnknownVariable("polynomial has %d variables, ring has %d" % (f.nvars, self.nvars))
            return f
        return parse_poly(f, self.field, self.names)

    def var(self, i: int) -> Poly:
        return Poly.variable(self.field, self.nvars, i)

    def one(self) -> Poly:
        return Poly.constant(self.field, self.nvars, 1)

    def zero(self) -> Poly:
        return Poly(self.field, self.nvars)

    def monomial(self, e: Exp, c=1) -> Poly:
        return Poly.monomial(self.field, e, c)

    def wdeg(self, e: Exp) -> int:
        return self.order.wdeg(e)

    def degree(self, f) -> Optional[int]:
        """Weighted degree of a homogeneous element (``None`` for zero)."""
        f = self.poly(f)
        ds = f.degrees(self.degrees)
        if len(ds) > 1:
            raise InhomogeneousElement("%s is not homogeneous" % self.format(f))
        return next(iter(ds)) if ds else None

    def _check_homogeneous(self, f: Poly):
        if not f.is_homogeneous(self.degrees):
            raise InhomogeneousElement("%s is not homogeneous" % self.format(f), element=self.format(f))

    def format(self, f) -> str:
        return self.poly(f).format(self.names, self.order)

    def normal_form(self, f) -> Poly:
        """Unique representative of ``f`` modulo the relations."""
        return reduce_terms(self.poly(f), self._gbl, self.order)

    def is_zero(self, f) -> bool:
        return self.normal_form(f).is_zero()

    def is_one(self) -> bool:
        return any(not any(lm) for lm in self.leading_monomials)

    # --- ideals ---------------------------------------------------------

    def _gb_of(self, gens: Sequence[Poly]) -> List[Poly]:
        return _ideal_gb(self, tuple(self.poly(g) for g in gens))

    def _is_unit_ideal(self, gens) -> bool:
        return any(p.is_monomial() and not any(next(iter(p.terms))) for p in self._gb_of(gens))

    def in_ideal(self, f, gens) -> bool:
        """Membership of ``f`` in ``(gens) + I``."""
        g = [_GB(p, self.order) for p in self._gb_of(gens)]
        return reduce_terms(self.poly(f), g, self.order).is_zero()

    def ideal_contains(self, big, small) -> bool:
        """``(small) + I`` is contained in ``(big) + I``."""
        return all(self.in_ideal(f, big) for f in small)

    def quotient(self, gens) -> "RingModel":
        """``R/(gens)`` with the distinguished primes that contain the ideal."""
        gens = [self.poly(g) for g in gens]
        primes = {pid: g for pid, g in self.primes.items() if self.ideal_contains(g, gens)}
        local = self.local if self.local in primes else None
        return RingModel(self.field, self.names, self.degrees, list(self.relations) + gens,
                         primes=primes, local=local, order=self.order.name, window=self.window,
                         budget=self.budget)

    # --- graded pieces --------------------------------------------------

    def is_standard(self, e: Exp) -> bool:
        return not any(divides(lm, e) for lm in self.leading_monomials)

    def standard_monomials(self, d: int) -> List[Exp]:
        """Standard monomials of weighted degree ``d``, largest first."""
        if d in self._std_cache:
            return self._std_cache[d]
        out = []
        if d >= 0:
            zero_vars = [i for i, w in enumerate(self.degrees) if w == 0]
            pos_vars = [i for i, w in enumerate(self.degrees) if w > 0]

            def rec(k, rem, e):
                if k == len(pos_vars):
                    if rem == 0:
                        for z in self._zero_part(zero_vars, e):
                            out.append(z)
                    return
                i = pos_vars[k]
                w = self.degrees[i]
                a = 0
                while a * w <= rem:
                    e[i] = a
                    if self.is_standard(tuple(e)):
                        rec(k + 1, rem - a * w, e)
                    else:
                        e[i] = 0
                        break
                    a += 1
                e[i] = 0

            rec(0, d, [0] * self.nvars)
        out.sort(key=self.order.key, reverse=True)
        self._std_cache[d] = out
        return out

    def _zero_part(self, zero_vars, e):
        # degree-0 variables have bounded exponents in an Artinian ring
        results = []

        def rec(k, e):
            if k == len(zero_vars):
                results.append(tuple(e))
                return
            i = zero_vars[k]
            a = 0
            while True:
                e[i] = a
                if not self.is_standard(tuple(e)):
                    break
                rec(k + 1, e)
                a += 1
            e[i] = 0

        rec(0, list(e))
        return results

    def graded_piece(self, d: int) -> List[Exp]:
        return self.standard_monomials(d)

    def top_degree(self) -> int:
        """Largest degree of a nonzero graded piece (Artinian rings only)."""
        if not self.is_artinian:
            raise UnsupportedRing("ring is not Artinian")
        d, top = 0, 0
        bound = sum(max(lm[i] for lm in self.leading_monomials if sum(lm) == lm[i] and lm[i] > 0) * w
                    for i, w in enumerate(self.degrees))
        while d <= bound:
            if self.standard_monomials(d):
                top = d
            d += 1
        return top

    def dim_k(self) -> int:
        return sum(len(self.standard_monomials(d)) for d in range(self.top_degree() + 1))

    def vector(self, f, d: int) -> np.ndarray:
        """Coordinates of a homogeneous degree-``d`` element in the standard basis."""
        nf = self.normal_form(f)
        basis = self.standard_monomials(d)
        idx = {e: i for i, e in enumerate(basis)}
        v = self.field.zeros(len(basis), 1)
        for e, c in nf.terms.items():
            if self.wdeg(e) != d:
                raise InhomogeneousElement("element is not of degree %d" % d)
            v[idx[e], 0] = c
        return v

    def element(self, v, d: int) -> Poly:
        basis = self.standard_monomials(d)
        return Poly(self.field, self.nvars, {e: v[i] for i, e in enumerate(basis)})

    def multiplication_matrix(self, f, d: int) -> np.ndarray:
        """Matrix of ``g -> f g`` from ``R_d`` to ``R_{d + deg f}``."""
        f = self.poly(f)
        e = self.degree(f)
        src = self.standard_monomials(d)
        if e is None:
            return self.field.zeros(0, len(src))
        tgt = self.standard_monomials(d + e)
        idx = {m: i for i, m in enumerate(tgt)}
        out = self.field.zeros(len(tgt), len(src))
        for j, m in enumerate(src):
            prod = self.normal_form(f.shift(m))
            for t, c in prod.terms.items():
                out[idx[t], j] = c
        return out

    # --- dimension ------------------------------------------------------

    def krull_dim(self) -> int:
        """Krull dimension, read off the leading-monomial ideal."""
        lms = self.leading_monomials
        best = 0
        for k in range(self.nvars, 0, -1):
            for s in combinations(range(self.nvars), k):
                if all(any(lm[i] for i in range(self.nvars) if i not in s) for lm in lms):
                    return k
        return best

    def is_monomial_ring(self) -> bool:
        return all(g.is_monomial() for g in self.gb)

    def describe(self) -> dict:
        return {
            "field": str(self.field),
            "vars": ["%s:%d" % (n, d) for n, d in zip(self.names, self.degrees)],
            "relations": [self.format(g) for g in self.gb],
            "order": self.order.name,
            "primes": {pid: [self.format(g) for g in gens] for pid, gens in sorted(self.primes.items())},
            "local": self.local,
            "mode": "exact" if self.is_artinian else "windowed",
        }

    def __repr__(self):
        rel = ", ".join(self.format(g) for g in self.gb)
        return "RingModel(%s[%s]/(%s))" % (self.field, ",".join(self.names), rel)


def _ideal_gb(ring: RingModel, gens: Tuple[Poly, ...]) -> List[Poly]:
    key = tuple(sorted(repr(sorted(g.terms.items())) for g in gens))
    hit = ring._ideal_cache.get(key)
    if hit is None:
        hit = buchberger(list(ring.relations) + list(gens), ring.order, budget=ring.budget)
        ring._ideal_cache[key] = hit
    return hit
