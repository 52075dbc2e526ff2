"""Independent reference computations used by the tests.

Nothing here imports the package: the Čech oracle builds its complexes by
hand with sympy matrices, one multidegree at a time.
"""
from itertools import combinations, product

import sympy


def _sign(S, j):
    return -1 if sum(1 for k in S if k < j) % 2 else 1


def cech_multidegree(n, V, a, i, invert=()):
    """``dim H^i`` in multidegree ``a`` of the Čech complex of ``k[x_1..x_n]``
    on the variables ``V``, with the variables ``invert`` already inverted."""
    W = set(invert)

    def alive(S):
        s = set(S) | W
        return all(a[k] >= 0 for k in range(n) if k not in s)

    terms = {p: [S for S in combinations(sorted(V), p) if alive(S)] for p in range(len(V) + 1)}

    def dmat(p):
        src, tgt = terms.get(p, []), terms.get(p + 1, [])
        M = sympy.zeros(len(tgt), len(src))
        index = {T: r for r, T in enumerate(tgt)}
        for c, S in enumerate(src):
            for j in V:
                if j in S:
                    continue
                T = tuple(sorted(S + (j,)))
                if T in index:
                    M[index[T], c] = _sign(S, j)
        return M

    def rk(M):
        return M.rank() if M.shape[0] and M.shape[1] else 0

    dim = len(terms.get(i, []))
    return dim - rk(dmat(i)) - rk(dmat(i - 1))


def cech_total_degree(n, V, d, i, margin=3):
    """Sum over multidegrees of total degree ``d`` inside a box wide enough
    that every contributing multidegree lies inside."""
    r = abs(d) + margin
    total = 0
    for a in product(range(-r, r + 1), repeat=n):
        if sum(a) == d:
            total += cech_multidegree(n, V, a, i)
    return total


# --- random complexes over Q[x]/(x^2) ------------------------------------------------


def random_block_complex(rng, blocks=4, spread=2):
    """A direct sum of elementary blocks together with its expected homology.

    Blocks over ``R = Q[x]/(x^2)`` (``R(-a)`` has dims 1 in degrees a, a+1):

    * ``free``: ``R(-a)`` alone in position n, ``H^n`` dims {a: 1, a+1: 1};
    * ``mult``: ``R(-a-1) --x--> R(-a)`` in positions n-1, n, with
      ``H^(n-1)`` = {a+2: 1} and ``H^n`` = {a: 1};
    * ``unit``: ``R(-a) --1--> R(-a)``, acyclic;
    * ``chain``: ``R(-a-2) --x--> R(-a-1) --x--> R(-a)`` in n-2..n, with
      ``H^(n-2)`` = {a+3: 1}, ``H^(n-1)`` = 0, ``H^n`` = {a: 1}.

    Returns ``(terms, diffs, expected)`` with ``terms[n]`` a list of basis
    degrees, ``diffs[n]`` rows of strings and ``expected[n][deg]`` dims.
    """
    terms, arrows, expected = {}, [], {}

    def add(pos, deg):
        terms.setdefault(pos, []).append(deg)
        return pos, len(terms[pos]) - 1

    def hom(pos, deg):
        expected.setdefault(pos, {})
        expected[pos][deg] = expected[pos].get(deg, 0) + 1

    for _ in range(blocks):
        kind = rng.choice(["free", "mult", "unit", "chain"])
        n = rng.randint(-spread, spread)
        a = rng.randint(-1, 2)
        if kind == "free":
            add(n, a)
            hom(n, a)
            hom(n, a + 1)
        elif kind == "mult":
            s, t = add(n - 1, a + 1), add(n, a)
            arrows.append((s, t, "x"))
            hom(n - 1, a + 2)
            hom(n, a)
        elif kind == "unit":
            s, t = add(n - 1, a), add(n, a)
            arrows.append((s, t, "1"))
        else:
            u, s, t = add(n - 2, a + 2), add(n - 1, a + 1), add(n, a)
            arrows.append((u, s, "x"))
            arrows.append((s, t, "x"))
            hom(n - 2, a + 3)
            hom(n, a)
    diffs = {}
    for pos in terms:
        if pos + 1 in terms:
            diffs[pos] = [["0"] * len(terms[pos]) for _ in terms[pos + 1]]
    for (sp, sj), (tp, tj), f in arrows:
        diffs[sp][tj][sj] = f
    return terms, diffs, expected


def random_unipotent(rng, degs):
    """``I + N`` with ``N`` strictly upper triangular and homogeneous:
    scalars between equal degrees, multiples of ``x`` one degree apart."""
    n = len(degs)
    M = [["1" if i == j else "0" for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            c = rng.randint(-2, 2)
            if not c:
                continue
            # entry (i, j) maps basis j (degree degs[j]) to basis i: degree degs[j] - degs[i]
            gap = degs[j] - degs[i]
            if gap == 0:
                M[i][j] = str(c)
            elif gap == 1:
                M[i][j] = "%d*x" % c
    return M


def conjugate(R, terms, diffs, rng):
    """Diffs ``g_(n+1) d_n g_n^(-1)`` for random unipotent ``g_n`` (an isomorphic complex).

    ``R`` supplies parsing and normal forms; the inverse of ``I + N`` is the
    finite series ``sum (-N)^k``.
    """
    def mul(A, B):
        return [[R.normal_form(sum((A[i][k] * B[k][j] for k in range(len(B))), R.zero()))
                 for j in range(len(B[0]))] for i in range(len(A))]

    g, inv = {}, {}
    for n, degs in terms.items():
        G = [[R.poly(f) for f in row] for row in random_unipotent(rng, degs)]
        k = len(G)
        minus_N = [[(-G[i][j] if i != j else R.zero()) for j in range(k)] for i in range(k)]
        acc = [[R.one() if i == j else R.zero() for j in range(k)] for i in range(k)]
        power = acc
        for _ in range(k):
            power = mul(power, minus_N)
            acc = [[R.normal_form(a + b) for a, b in zip(r1, r2)] for r1, r2 in zip(acc, power)]
        g[n], inv[n] = G, acc
    return {n: mul(mul(g[n + 1], [[R.poly(f) for f in row] for row in D]), inv[n]) for n, D in diffs.items()}
