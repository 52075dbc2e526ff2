"""Sparse multivariate polynomials, monomial orders and Buchberger's algorithm."""
from __future__ import annotations

import ast
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Sequence, Tuple

from .errors import BudgetExceeded, ParseError, UnknownVariable
from .field import Field

Exp = Tuple[int, ...]


class MonomialOrder:
    """Weighted-degree-first monomial order refined by grevlex, grlex or lex.

    The weighted degree comes first so every graded piece is an interval in
    the order; the refinement is a genuine monomial order, so the combination
    is a well order even with weight-zero variables.
    """

    NAMES = ("grevlex", "grlex", "lex")

    def __init__(self, name: str = "grevlex", weights: Sequence[int] = ()):
        if name not in self.NAMES:
            raise ValueError("unknown monomial order %r" % name)
        self.name = name
        self.weights = tuple(weights)

    def wdeg(self, e: Exp) -> int:
        return sum(w * a for w, a in zip(self.weights, e))

    def key(self, e: Exp):
        if self.name == "lex":
            return (self.wdeg(e),) + tuple(e)
        if self.name == "grlex":
            return (self.wdeg(e), sum(e)) + tuple(e)
        return (self.wdeg(e), sum(e)) + tuple(-a for a in reversed(e))


class Poly:
    """Immutable polynomial: a mapping exponent tuple -> nonzero coefficient."""

    __slots__ = ("terms", "nvars", "field")

    def __init__(self, field: Field, nvars: int, terms: Dict[Exp, object] = None):
        self.field = field
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    @classmethod
    def constant(cls, field, nvars, c):
        return cls(field, nvars, {(0,) * nvars: field(c)})

    @classmethod
    def monomial(cls, field, exp: Exp, c=1):
        return cls(field, len(exp), {tuple(exp): field(c)})

    @classmethod
    def variable(cls, field, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls.monomial(field, tuple(e))

    def _lift(self, other):
        if isinstance(other, Poly):
            return other
        return Poly.constant(self.field, self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, self.field.zero) + c
        return Poly(self.field, self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        t: Dict[Exp, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, self.field.zero) + c1 * c2
        return Poly(self.field, self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = Poly.constant(self.field, self.nvars, 1)
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c):
        return Poly(self.field, self.nvars, {e: c * v for e, v in self.terms.items()})

    def shift(self, e: Exp):
        return Poly(self.field, self.nvars,
                    {tuple(a + b for a, b in zip(m, e)): c for m, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = self._lift(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self, weights) -> set:
        return {sum(w * a for w, a in zip(weights, e)) for e in self.terms}

    def is_homogeneous(self, weights) -> bool:
        return len(self.degrees(weights)) <= 1

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def leading(self, order: MonomialOrder):
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def monic(self, order: MonomialOrder):
        if not self.terms:
            return self
        _, c = self.leading(order)
        return self.scale(self.field.one / c)

    def format(self, names: Sequence[str], order: MonomialOrder = None) -> str:
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=order.key if order else None, reverse=True)
        parts = []
        for e in keys:
            c = self.terms[e]
            cs = self.field.format(c)
            neg = cs.startswith("-")
            if neg:
                cs = cs[1:]
            mono = "*".join(n if a == 1 else "%s^%d" % (n, a) for n, a in zip(names, e) if a)
            if mono:
                body = mono if cs == "1" else "%s*%s" % (cs, mono)
            else:
                body = cs
            parts.append(("-" if neg else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += " %s %s" % (sign, body)
        return s


def divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


def parse_poly(text, field: Field, names: Sequence[str]) -> Poly:
    """Parse a polynomial written with ``+ - * / ^ **`` and integer literals."""
    n = len(names)
    if isinstance(text, Poly):
        return text
    if isinstance(text, (int, Fraction)):
        return Poly.constant(field, n, text)
    src = str(text).replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ParseError("bad polynomial %r: %s" % (text, exc.msg), column=exc.offset) from None
    index = {name: i for i, name in enumerate(names)}

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return Poly.constant(field, n, node.value)
        if isinstance(node, ast.Name):
            if node.id not in index:
                raise UnknownVariable("unknown variable %r in %r" % (node.id, text), variable=node.id)
            return Poly.variable(field, n, index[node.id])
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise ParseError("exponent must be a nonnegative integer in %r" % text)
                return ev(node.left) ** node.right.value
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if not b.terms or any(any(e) for e in b.terms) or len(b.terms) != 1:
                    raise ParseError("can only divide by nonzero constants in %r" % text)
                return a.scale(field.one / next(iter(b.terms.values())))
        raise ParseError("unsupported syntax in polynomial %r" % text)

    return ev(tree)


class _GB:
    __slots__ = ("lm", "lc", "poly")

    def __init__(self, poly: Poly, order: MonomialOrder):
        self.poly = poly
        self.lm, self.lc = poly.leading(order)


def reduce_terms(f: Poly, basis: List[_GB], order: MonomialOrder) -> Poly:
    """Full multivariate division remainder of ``f`` by ``basis``."""
    field = f.field
    todo = dict(f.terms)
    rem: Dict[Exp, object] = {}
    while todo:
        m = max(todo, key=order.key)
        c = todo.pop(m)
        for g in basis:
            if divides(g.lm, m):
                q = c / g.lc
                shift = tuple(a - b for a, b in zip(m, g.lm))
                for e, gc in g.poly.terms.items():
                    if e == g.lm:
                        continue
                    t = tuple(a + b for a, b in zip(e, shift))
                    v = todo.get(t, field.zero) - q * gc
                    if v:
                        todo[t] = v
                    else:
                        todo.pop(t, None)
                break
        else:
            rem[m] = c
    return Poly(field, f.nvars, rem)


def buchberger(generators: Iterable[Poly], order: MonomialOrder, budget: int = 100000) -> List[Poly]:
    """Reduced Groebner basis (monic, sorted by decreasing leading monomial).

    ``budget`` caps the number of S-polynomial reductions.
    """
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        return []
    basis: List[_GB] = []
    for g in gens:
        r = reduce_terms(g, basis, order)
        if not r.is_zero():
            basis.append(_GB(r.monic(order), order))
    pairs = list(combinations(range(len(basis)), 2))
    steps = 0
    while pairs:
        pairs.sort(key=lambda ij: order.key(lcm(basis[ij[0]].lm, basis[ij[1]].lm)))
        i, j = pairs.pop(0)
        f, g = basis[i], basis[j]
        if all(a == 0 or b == 0 for a, b in zip(f.lm, g.lm)):
            continue  # coprime leading monomials: S-polynomial reduces to zero
        steps += 1
        if steps > budget:
            raise BudgetExceeded("Buchberger exceeded %d reductions" % budget, budget=budget)
        l = lcm(f.lm, g.lm)
        s = (f.poly.shift(tuple(a - b for a, b in zip(l, f.lm))).scale(f.poly.field.one / f.lc)
             - g.poly.shift(tuple(a - b for a, b in zip(l, g.lm))).scale(g.poly.field.one / g.lc))
        r = reduce_terms(s, basis, order)
        if not r.is_zero():
            basis.append(_GB(r.monic(order), order))
            k = len(basis) - 1
            pairs.extend((a, k) for a in range(k))
    # minimalize then interreduce
    minimal = [g for g in basis
               if not any(h is not g and divides(h.lm, g.lm) and (h.lm != g.lm or id(h) < id(g))
                          for h in basis)]
    reduced = []
    for g in minimal:
        others = [h for h in minimal if h is not g]
        tail = Poly(g.poly.field, g.poly.nvars, {e: c for e, c in g.poly.terms.items() if e != g.lm})
        r = reduce_terms(tail, others, order)
        reduced.append((r + Poly.monomial(g.poly.field, g.lm)).monic(order))
    reduced.sort(key=lambda p: order.key(p.leading(order)[0]), reverse=True)
    return reduced
