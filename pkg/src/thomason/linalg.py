"""Exact row reduction over a :class:`~thomason.field.Field`.

Matrices are 2-d numpy object arrays.  Vectors are columns: a linear map
``V -> W`` is stored with shape ``(dim W, dim V)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import Field


def matmul(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError("shape mismatch %s @ %s" % (a.shape, b.shape))
    if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return field.zeros(a.shape[0], b.shape[1])
    return a.dot(b)


def is_zero(a: np.ndarray) -> bool:
    return not any(bool(v) for v in a.flat)


def rref(field: Field, a: np.ndarray):
    """Reduced row echelon form; returns ``(R, pivot_columns)``."""
    m = a.copy()
    nrows, ncols = m.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if m[i, c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = field.one / m[r, c]
        m[r] = m[r] * inv
        for i in range(nrows):
            if i != r and m[i, c]:
                m[i] = m[i] - m[i, c] * m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(field: Field, a: np.ndarray) -> int:
    if 0 in a.shape:
        return 0
    return len(rref(field, a)[1])


def nullspace(field: Field, a: np.ndarray) -> np.ndarray:
    """Columns spanning ``{v : a v = 0}``, one per free column of the RREF."""
    ncols = a.shape[1]
    if a.shape[0] == 0:
        return field.eye(ncols)
    red, pivots = rref(field, a)
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = field.zeros(ncols, len(free))
    for k, f in enumerate(free):
        out[f, k] = field.one
        for row, pc in enumerate(pivots):
            out[pc, k] = -red[row, f]
    return out


def colspace(field: Field, a: np.ndarray) -> np.ndarray:
    """Independent columns of ``a`` (the pivot columns) spanning its image."""
    if 0 in a.shape:
        return field.zeros(a.shape[0], 0)
    _, pivots = rref(field, a)
    return a[:, pivots]


def kernel_and_image(field: Field, a: np.ndarray):
    """Return ``(kernel basis, image basis, rank)``; rank + nullity = ncols."""
    k = nullspace(field, a)
    im = colspace(field, a)
    return k, im, im.shape[1]


def hstack(field: Field, mats, nrows: int) -> np.ndarray:
    mats = [m for m in mats if m.shape[1]]
    if not mats:
        return field.zeros(nrows, 0)
    return np.concatenate(mats, axis=1)


def vstack(field: Field, mats, ncols: int) -> np.ndarray:
    mats = [m for m in mats if m.shape[0]]
    if not mats:
        return field.zeros(0, ncols)
    return np.concatenate(mats, axis=0)


def block_diag(field: Field, mats) -> np.ndarray:
    m = sum(x.shape[0] for x in mats)
    n = sum(x.shape[1] for x in mats)
    out = field.zeros(m, n)
    r = c = 0
    for x in mats:
        out[r:r + x.shape[0], c:c + x.shape[1]] = x
        r += x.shape[0]
        c += x.shape[1]
    return out


def inverse(field: Field, a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("not square")
    aug = np.concatenate([a, field.eye(n)], axis=1)
    red, pivots = rref(field, aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return red[:, n:]


def extend_basis(field: Field, base: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """Columns of ``candidates`` extending the independent columns ``base``.

    Greedy in column order, so the choice is deterministic.
    """
    stacked = hstack(field, [base, candidates], base.shape[0])
    if stacked.shape[1] == 0:
        return field.zeros(base.shape[0], 0)
    _, pivots = rref(field, stacked)
    nb = base.shape[1]
    chosen = [p - nb for p in pivots if p >= nb]
    return candidates[:, chosen]


@dataclass
class Coordinates:
    """Solve ``B x = v`` for ``v`` in the column span of an independent ``B``."""

    field: Field
    basis: np.ndarray

    def __post_init__(self):
        n = self.basis.shape[1]
        if n == 0:
            self._rows = []
            self._inv = self.field.zeros(0, 0)
            return
        _, rows = rref(self.field, self.basis.T.copy())
        if len(rows) != n:
            raise ValueError("basis columns are dependent")
        self._rows = rows
        self._inv = inverse(self.field, self.basis[rows, :])

    def __call__(self, v: np.ndarray) -> np.ndarray:
        """Coordinates of the columns of ``v`` (shape ``(dim, k)``)."""
        if self.basis.shape[1] == 0:
            return self.field.zeros(0, v.shape[1])
        return matmul(self.field, self._inv, v[self._rows, :])

    def contains(self, v: np.ndarray) -> bool:
        x = self(v)
        return is_zero(matmul(self.field, self.basis, x) - v) if v.shape[1] else True


def in_span(field: Field, basis: np.ndarray, v: np.ndarray) -> bool:
    """True iff every column of ``v`` lies in the span of the columns of ``basis``."""
    if v.shape[1] == 0:
        return True
    return rank(field, hstack(field, [basis, v], v.shape[0])) == rank(field, basis)
