"""Acceptance criteria, one test each, with their time limits.

Every test prints a single ``criterion N: PASS|FAIL`` line (visible in the
pytest log even without ``-s``).  Run directly with
``python tests/test_acceptance.py`` for the bare summary.
"""
import random
import sys
import time
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from _oracles import cech_multidegree, cech_total_degree, conjugate, random_block_complex  # noqa: E402
from thomason import desk  # noqa: E402
from thomason.complexes import ChainComplex, is_regular_sequence, is_regular_sequence_direct, koszul  # noqa: E402
from thomason.engine import (all_ideals_artinian, composite_truncation_check, mu_filtration_from_membership,  # noqa: E402
                             eta_oracle, obstruction_pipeline, truncate, vanishing_locus)
from thomason.field import Field  # noqa: E402
from thomason.localcoh import cech_cohomology, infinite_generation_certificate, localization_compat_check  # noqa: E402
from thomason.modules import GradedModule, annihilator_window, support_in_distinguished  # noqa: E402
from thomason.poset import (ThomasonFiltration, VerdictKind, classify, combine_verdicts,  # noqa: E402
                            connected_components, enumerate_filtrations, termination)


def _emit(capsys, line):
    if capsys is None:
        print(line)
        return
    with capsys.disabled():
        print("\n" + line)


def _run(number, limit, body, capsys=None):
    t0 = time.perf_counter()
    ok, detail = body()
    elapsed = time.perf_counter() - t0
    ok_time = elapsed < limit
    status = "PASS" if ok and ok_time else "FAIL"
    _emit(capsys, "criterion %d: %s (%.2fs, limit %gs) %s" % (number, status, elapsed, limit, detail))
    return ok, ok_time, elapsed


# --- 1: Koszul suite -----------------------------------------------------------------


def _koszul_cases():
    F2 = Field.prime(2)
    return [
        ("Q[x],(x)", desk.q_x(), ["x"], desk.chain2(), (0, 6), True),
        ("Q[x,y],(x,y)", desk.q_x_y(), ["x", "y"], desk.q_x_y_poset(), (0, 6), True),
        ("F2[x,y],(x,y)", desk.q_x_y(F2), ["x", "y"], desk.q_x_y_poset(), (0, 6), True),
        ("Q[x]/(x^2),(x)", desk.dual_numbers(), ["x"], desk.point(singular=True), None, False),
        ("Q[x,y],(x,x)", desk.q_x_y(), ["x", "x"], desk.q_x_y_poset(), (0, 6), False),
    ]


def criterion_1():
    failures = []
    for name, R, xs, P, w, regular in _koszul_cases():
        gens = [R.poly(x) for x in xs]
        G = koszul(R, xs).realize(w)
        H0 = G.homology(0)
        expected = GradedModule.cyclic(R, xs, window=w)
        if H0.dim_table() != expected.dim_table():
            failures.append((name, "H^0 dims"))
        ann = annihilator_window(H0)
        if not (all(R.in_ideal(a, gens) for a in ann) and all(R.in_ideal(g, ann) for g in gens)):
            failures.append((name, "H^0 annihilator"))
        V = vanishing_locus(R, P, xs)
        for n in G.span:
            H = G.homology(n)
            if H.is_zero():
                continue
            for g in gens:
                for d in H.degrees():
                    if not H.exact and d + R.degree(g) > H.hi:
                        continue
                    if H.act_element(g, d).any():
                        failures.append((name, "ideal does not kill H^%d" % n))
            if not set(support_in_distinguished(H, P)) <= V:
                failures.append((name, "support of H^%d" % n))
        if not (is_regular_sequence(R, xs, w) == is_regular_sequence_direct(R, xs, w) == regular):
            failures.append((name, "regularity"))
    return not failures, "%d pairs, failures %s" % (len(_koszul_cases()), failures)


def test_criterion_1_koszul_suite(capsys):
    ok, ok_time, _ = _run(1, 1.0, criterion_1, capsys)
    assert ok and ok_time


# --- 2: classification verdicts ---------------------------------------------------------

TRUTH_TABLE = {
    "1-point regular": {"BoundedOnPerf": 6, "Trivial": 2},
    "1-point singular": {"OnlyTrivialOnPerf": 6, "Trivial": 2},
    "2-chain regular": {"FailsWeakCousin": 23, "BoundedOnPerf": 11, "Trivial": 2},
    "antichain, one singular": {"OnlyTrivialOnPerf": 48, "RestrictsToPerf": 12, "Trivial": 4},
}


def _posets():
    return {"1-point regular": desk.point(), "1-point singular": desk.point(singular=True),
            "2-chain regular": desk.chain2(), "antichain, one singular": desk.antichain_one_singular()}


def criterion_2():
    problems = []
    for name, P in _posets().items():
        counts = Counter()
        for Phi in enumerate_filtrations(P, -3, 3):
            v = classify(P, Phi)
            counts[v.kind.value] += 1
            parts = v.components or (v,)
            if v.kind == VerdictKind.FailsWeakCousin:
                c = v.certificate
                i, p, q = c["i"], c["p"], c["q"]
                if not (p in Phi.at(i) and q in P.covers(p) and q not in Phi.at(i - 1)):
                    problems.append((name, "bad witness"))
            if v.kind == VerdictKind.BoundedOnPerf:
                ta, tb = termination(Phi)
                if ta != P.full or tb or P.has_singular():
                    problems.append((name, "bounded verdict without (Spec, empty) tails"))
            for comp, part in zip(connected_components(P), parts):
                if comp.has_singular() and part.kind == VerdictKind.BoundedOnPerf:
                    problems.append((name, "singular component bounded"))
        if dict(counts) != TRUTH_TABLE[name]:
            problems.append((name, dict(counts)))
    return not problems, "problems %s" % problems


def test_criterion_2_classification(capsys):
    ok, ok_time, _ = _run(2, 1.0, criterion_2, capsys)
    assert ok and ok_time


# --- 3: obstruction reproduction ----------------------------------------------------------


def _periodic_resolution(n, steps=6):
    """Minimal resolution of k over k[x]/(x^n) by hand: maps x, x^(n-1), x, ...
    with generators in degrees 0, 1, n, n+1, 2n, ..."""
    maps = ["x" if k % 2 == 0 else ("x^%d" % (n - 1) if n > 2 else "x") for k in range(steps - 1)]
    degs = [(k // 2) * n + (k % 2) for k in range(steps)]
    return maps, degs, 1 if n == 2 else 2


def criterion_3():
    problems = []
    for n in (2, 3):
        R = desk.truncated_poly(n)
        d = obstruction_pipeline(R, ThomasonFiltration.standard(desk.point(singular=True)), budget=5).to_dict()
        rf = d["residue_field"]
        if rf["dims"] != {"0": 1} or rf["annihilator"] != ["x"]:
            problems.append((n, "truncation is not k", rf))
        pr = d["probe"]
        maps, degs, period = _periodic_resolution(n)
        if pr["kind"] != "ExceedsBudget" or pr["budget"] != 5 or pr["betti"] != [1] * 6:
            problems.append((n, "probe", pr["kind"], pr["betti"]))
        if [m[0][0] for m in pr["presentations"]] != maps or [g[0] for g in pr["generator_degrees"]] != degs:
            problems.append((n, "resolution differs from the periodic one"))
        if pr["witness"]["period"] != period:
            problems.append((n, "period", pr["witness"]["period"]))
        if d["perfect"] is not False:
            problems.append((n, "reported perfect"))
    return not problems, "x^2 and x^3, problems %s" % problems


def test_criterion_3_obstruction(capsys):
    ok, ok_time, _ = _run(3, 1.0, criterion_3, capsys)
    assert ok and ok_time


# --- 4: local cohomology against a brute-force Čech complex ------------------------------------


def criterion_4():
    problems = []
    e1 = cech_cohomology(desk.q_x(), ["x"], 1, (-1, -10))
    o1 = {d: cech_total_degree(1, [0], d, 1) for d in range(-10, 0)}
    if not (e1 == o1 and all(v == 1 for v in o1.values())):
        problems.append(("H^1_(x)", e1, o1))
    e2 = cech_cohomology(desk.q_x_y(), ["x", "y"], 2, (-2, -12))
    o2 = {d: cech_total_degree(2, [0, 1], d, 2) for d in range(-12, -1)}
    if not (e2 == o2 and all(o2[-j] == j - 1 for j in range(2, 13)) and sum(o2.values()) == 66):
        problems.append(("H^2_(x,y)", e2, o2))
    for R, gens, h, w in ((desk.q_x(), ["x"], 1, (-1, -10)), (desk.q_x_y(), ["x", "y"], 2, (-2, -12))):
        c = infinite_generation_certificate(R, gens, h, w, widenings=3)
        if not (c.monotone and c.accepted and len(c.totals) == 4):
            problems.append(("certificate", c.totals))
        if not all(a < b for a, b in zip(c.totals, c.totals[1:])):
            problems.append(("certificate not growing", c.totals))
    return not problems, "totals 10 and %d, problems %s" % (sum(e2.values()), problems)


def test_criterion_4_local_cohomology(capsys):
    ok, ok_time, _ = _run(4, 5.0, criterion_4, capsys)
    assert ok and ok_time


# --- 5: round trip -------------------------------------------------------------------------


def criterion_5():
    problems = []
    total = 0
    for R, P in ((desk.truncated_poly(3), desk.point(singular=True)),
                 (desk.product_model(), desk.product_poset())):
        ideals = all_ideals_artinian(R)
        for Phi in enumerate_filtrations(P, -2, 2):
            total += 1
            got = mu_filtration_from_membership(eta_oracle(Phi, R), ideals, (-3, 3), R, P)
            if not all(got.at(i) == Phi.at(i) for i in range(-4, 5)):
                problems.append(("round trip", Phi.describe()))
            v = classify(P, Phi)
            parts = [classify(C, Phi.restrict(C)) for C in connected_components(P)]
            combined = parts[0] if len(parts) == 1 else combine_verdicts(parts)
            if v.kind != combined.kind:
                problems.append(("product verdict", Phi.describe()))
        if len(P) == 1 and len(ideals) != 4:
            problems.append(("ideal lattice", len(ideals)))
    return not problems, "%d filtrations, problems %s" % (total, problems[:3])


def test_criterion_5_round_trip(capsys):
    ok, ok_time, _ = _run(5, 10.0, criterion_5, capsys)
    assert ok and ok_time


# --- 6: truncation consistency on random complexes ---------------------------------------------


def criterion_6(seed=20261014, trials=10):
    R = desk.dual_numbers()
    P = desk.point(singular=True)
    rng = random.Random(seed)
    psis = (ThomasonFiltration.standard(P), ThomasonFiltration.constant(P, ["m"]),
            ThomasonFiltration.constant(P, []))
    problems = []
    for trial in range(trials):
        terms, diffs, expected = random_block_complex(rng)
        C = ChainComplex(R, terms, conjugate(R, terms, diffs, rng))
        G = C.realize()
        got = {n: {d: k for d, k in G.homology_dims(n).items() if k} for n in G.span}
        if {n: v for n, v in got.items() if v} != expected:
            problems.append((trial, "homology of the conjugated complex"))
        for cut in (-1, 0, 1, 2):
            res = truncate(C, ThomasonFiltration.standard(P), cut)
            idx = range(min(G.span) - 1, max(G.span) + 2)
            for i in idx:
                full = expected.get(i, {})
                conn = {d: k for d, k in res.connective.homology_dims(i).items() if k} \
                    if i in res.connective.span else {}
                co = {d: k for d, k in res.coconnective.homology_dims(i).items() if k} \
                    if i in res.coconnective.span else {}
                if conn != (full if i <= cut - 1 else {}) or co != (full if i >= cut else {}):
                    problems.append((trial, "case formula", cut, i))
            if not res.checks["triangle"]["ok"] or any(res.checks["triangle"]["alternating_sums"].values()):
                problems.append((trial, "triangle", cut))
            if not res.ok:
                problems.append((trial, "membership", cut))
        for Psi in psis:
            if not composite_truncation_check(Psi, C, 1)["ok"]:
                problems.append((trial, "composite", Psi.describe()))
    return not problems, "%d complexes, problems %s" % (trials, problems[:3])


def test_criterion_6_truncation_consistency(capsys):
    ok, ok_time, _ = _run(6, 5.0, criterion_6, capsys)
    assert ok and ok_time


# --- 7: local cohomology commutes with localization ------------------------------------------------


def criterion_7():
    rep = localization_compat_check(desk.q_x_y(), ["x"], "px", [0, 1], box=[(-8, 8), (-8, 8)])
    oracle_bad = [r for r in rep["rows"]
                  if r["rhs"] != cech_multidegree(2, [0], r["multidegree"], r["index"], invert=[1])]
    indices = sorted({r["index"] for r in rep["rows"]})
    ok = rep["ok"] and not oracle_bad and indices == [0, 1] and len(rep["rows"]) == 2 * 17 * 17
    return ok, "%d rows, inverted %s, oracle mismatches %d" % (len(rep["rows"]), rep["inverted"], len(oracle_bad))


def test_criterion_7_localization(capsys):
    ok, ok_time, _ = _run(7, 5.0, criterion_7, capsys)
    assert ok and ok_time


if __name__ == "__main__":
    results = [_run(k, lim, fn) for k, lim, fn in ((1, 1, criterion_1), (2, 1, criterion_2), (3, 1, criterion_3),
                                                   (4, 5, criterion_4), (5, 10, criterion_5), (6, 5, criterion_6),
                                                   (7, 5, criterion_7))]
    sys.exit(0 if all(a and b for a, b, _ in results) else 1)
