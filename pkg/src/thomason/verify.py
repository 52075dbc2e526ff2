"""Invariant suite run by ``thomason verify``.

Each check is a small self-contained computation on a desk-sized model and
returns ``(ok, detail)``.  The suite is deterministic.
"""
from __future__ import annotations

from collections import Counter
from typing import Callable, Dict, List, Tuple

from . import desk
from .complexes import aisle_membership, is_regular_sequence, is_regular_sequence_direct, koszul
from .engine import (all_ideals_artinian, composite_truncation_check, koszul_generators, obstruction_pipeline,
                     round_trip, tilt_relation_check, truncate)
from .localcoh import cech_cohomology, infinite_generation_certificate, localization_compat_check
from .modules import GradedModule, annihilator_window, support_in_distinguished
from .poset import ThomasonFiltration, classify, enumerate_filtrations, weak_cousin_check

CHECKS: List[Tuple[str, Callable[[], Tuple[bool, str]]]] = []


def check(name):
    def deco(fn):
        CHECKS.append((name, fn))
        return fn
    return deco


@check("weak-cousin witnesses are genuine covering failures")
def _witnesses():
    P = desk.chain2()
    bad = 0
    n = 0
    for Phi in enumerate_filtrations(P, -2, 2):
        ok, w = weak_cousin_check(P, Phi)
        if not ok:
            n += 1
            i, p, q = w
            if not (p in Phi.at(i) and q in P.covers(p) and q not in Phi.at(i - 1)):
                bad += 1
    return bad == 0 and n > 0, "%d failures checked" % n


@check("singular components never restrict to bounded")
def _singular_bounded():
    P = desk.antichain_one_singular()
    kinds = Counter(classify(P, Phi).kind.value for Phi in enumerate_filtrations(P, -2, 2))
    return kinds.get("BoundedOnPerf", 0) == 0, dict(sorted(kinds.items())).__repr__()


@check("Koszul H^0 is R/(x) and homology is killed by the ideal")
def _koszul_h0():
    R = desk.q_x_y()
    K = koszul(R, ["x", "y"]).realize((0, 6))
    H0 = K.homology(0)
    ok = H0.dims[0] == 1 and all(H0.dims[d] == 0 for d in range(1, 7))
    return ok and is_regular_sequence(R, ["x", "y"], (0, 6)), "dims %s" % H0.dim_table()


@check("acyclicity off zero matches the regular-sequence test")
def _regular_routes():
    out = []
    for R, xs, w in [(desk.q_x(), ["x"], (0, 6)), (desk.q_x_y(), ["x", "x"], (0, 6)),
                     (desk.dual_numbers(), ["x"], None)]:
        a = is_regular_sequence(R, xs, w)
        b = is_regular_sequence_direct(R, xs, w)
        out.append(a == b)
    return all(out), str(out)


@check("Koszul supports lie in V(x)")
def _koszul_support():
    R = desk.dual_numbers()
    G = koszul(R, ["x"]).realize()
    P = desk.point(singular=True)
    supp = [support_in_distinguished(G.homology(n), P) for n in G.span if not G.homology(n).is_zero()]
    return all(set(s) <= {"m"} for s in supp), str(supp)


@check("H^1_(x)(Q[x]) is one-dimensional in negative degrees")
def _h1():
    t = cech_cohomology(desk.q_x(), ["x"], 1, (-1, -10))
    return all(v == 1 for v in t.values()), str(sorted(t.items())[:3])


@check("certificate totals grow under widening")
def _cert():
    c = infinite_generation_certificate(desk.q_x_y(), ["x", "y"], 2, (-2, -12))
    return c.monotone and c.accepted, str(c.totals)


@check("local cohomology commutes with localization")
def _compat():
    R = desk.q_x_y()
    rep = localization_compat_check(R, ["x"], "px", [0, 1], box=[(-4, 4), (-4, 4)])
    return rep["ok"], "%d rows" % len(rep["rows"])


@check("round trip mu(eta(Phi)) = Phi on Q[x]/(x^3)")
def _round_trip():
    R = desk.truncated_poly(3)
    P = desk.point(singular=True)
    ideals = all_ideals_artinian(R)
    res = [round_trip(Phi, R, ideals)["ok"] for Phi in enumerate_filtrations(P, -2, 2)]
    return all(res), "%d filtrations" % len(res)


@check("Koszul generators lie in their aisle")
def _generators():
    R = desk.product_model()
    P = desk.product_poset()
    ideals = all_ideals_artinian(R)
    bad = 0
    total = 0
    for Phi in enumerate_filtrations(P, -1, 1):
        for g in koszul_generators(Phi, ideals, (-2, 2), R):
            total += 1
            if not aisle_membership(g.complex, Phi, P)[0]:
                bad += 1
    return bad == 0, "%d generators" % total


@check("truncation parts pass their membership checks")
def _truncations():
    R = desk.dual_numbers()
    P = desk.point(singular=True)
    C = koszul(R, ["x"])
    results = []
    for Phi in (ThomasonFiltration.standard(P), ThomasonFiltration.constant(P, ["m"]),
                ThomasonFiltration.constant(P, [])):
        for n in (-1, 0, 1):
            results.append(truncate(C, Phi, n).ok)
    return all(results), "%d truncations" % len(results)


@check("composite truncation agrees with the intersected filtration")
def _composite():
    R = desk.dual_numbers()
    P = desk.point(singular=True)
    M = GradedModule.cyclic(R, [])
    res = [composite_truncation_check(Psi, M, 1)["ok"] for Psi in
           (ThomasonFiltration.standard(P), ThomasonFiltration.constant(P, ["m"]), ThomasonFiltration.constant(P, []))]
    return all(res), str(res)


@check("tilts sandwich the aisles")
def _tilt():
    R = desk.product_model()
    P = desk.product_poset()
    ideals = all_ideals_artinian(R)
    tests = [g.complex for g in koszul_generators(ThomasonFiltration.constant(P, P.full), ideals, (-2, 2), R)]
    pairs = 0
    for Phi in enumerate_filtrations(P, -1, 1):
        for Psi in enumerate_filtrations(P, -1, 1):
            if not tilt_relation_check(Phi, Psi):
                continue
            pairs += 1
            for C in tests:
                if aisle_membership(C, Phi, P)[0] and not aisle_membership(C, Psi, P)[0]:
                    return False, "aisle of Phi not inside aisle of Psi"
                if aisle_membership(C, Psi, P)[0] and not aisle_membership(C, Phi.shifted(1), P)[0]:
                    return False, "aisle of Psi not inside the shifted aisle of Phi"
    return pairs > 0, "%d tilt pairs" % pairs


@check("the residue field of Q[x]/(x^2) is not perfect")
def _obstruction():
    cert = obstruction_pipeline(desk.dual_numbers(), ThomasonFiltration.standard(desk.point(singular=True)))
    d = cert.to_dict()
    ok = d["residue_field"]["dims"] == {"0": 1} and d["probe"]["kind"] == "ExceedsBudget" \
        and d["probe"]["witness"]["period"] == 1
    return ok, "betti %s" % d["probe"]["betti"]


@check("annihilators cut out the support")
def _ann():
    R = desk.product_model()
    M = GradedModule.cyclic(R, ["e"])
    return support_in_distinguished(M, desk.product_poset()) == ["b"], str([R.format(g) for g in annihilator_window(M)])


def run_all() -> Dict[str, object]:
    rows = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as e:  # a crash counts as a failure, reported with its type
            ok, detail = False, "%s: %s" % (type(e).__name__, e)
        rows.append({"check": name, "ok": bool(ok), "detail": detail})
    passed = sum(r["ok"] for r in rows)
    return {"passed": passed, "failed": len(rows) - passed, "checks": rows}
