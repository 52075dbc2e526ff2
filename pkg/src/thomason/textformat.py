"""TOML documents describing rings, posets, filtrations, complexes and modules.

Sections::

    [ring]        field = "Q" | "Fp:<p>", vars = ["x", "y:2"] (or degrees = [...]),
                  relations = [...], window = [lo, hi], local = "<id>",
                  [ring.primes] <id> = [generators]
    [poset]       covers = ["a < b", ...], [poset.points.<id>] singular = true|false
    [filtration]  window = [lo, hi], level.<i> = [ids], tail_above = [ids], tail_below = [ids]
                  or kind = "standard" | "constant" | "tilting" with shift / Z
    [complex]     term.<n> = rank | [degrees], diff.<n> = [[poly, ...], ...]
    [module]      quotient = [generators], degree = <n>
    [ideals]      generators = [[...], ...]

Semantic errors are reported at the line of the offending key when it can
be found in the text.
"""
from __future__ import annotations

import re
import sys
from dataclasses import dataclass
from typing import List, Optional, Tuple

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .complexes import ChainComplex
from .errors import ParseError, ThomasonError
from .field import Field
from .polynomial import parse_poly
from .poset import PrimePoint, SpectrumPoset, ThomasonFiltration
from .rings import RingModel


@dataclass
class Document:
    text: str
    data: dict
    ring: Optional[RingModel] = None
    poset: Optional[SpectrumPoset] = None
    filtration: Optional[ThomasonFiltration] = None
    complex: Optional[ChainComplex] = None
    module: Optional[dict] = None
    ideals: Optional[List[list]] = None


def _locate(text: str, section: str, key: Optional[str]) -> Tuple[Optional[int], Optional[int]]:
    """Line/column (1-based) of ``key`` under ``[section]``, or of the header itself."""
    current = None
    header_line = None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        m = re.match(r"\[([^\[\]]+)\]", line)
        if m:
            current = m.group(1).strip()
            if current == section and header_line is None:
                header_line = n
            continue
        if key is None:
            continue
        first = key.split(".")[0]
        inside = current == section or (current or "").startswith(section + ".")
        if inside and re.match(r"%s\s*[.=]" % re.escape(first), line):
            return n, raw.index(first) + 1
        if current is not None and current.startswith(section + ".") and current.endswith(first):
            return n, 1
    return header_line, 1 if header_line else None


def _err(doc_text: str, section: str, key: Optional[str], msg: str) -> ParseError:
    line, col = _locate(doc_text, section, key)
    where = "[%s]%s" % (section, " " + key if key else "")
    return ParseError("%s: %s" % (where, msg), line, col)


def _need(cond: bool, text, section, key, msg):
    if not cond:
        raise _err(text, section, key, msg)


def _str_list(x) -> bool:
    return isinstance(x, list) and all(isinstance(v, str) for v in x)


def parse_ring(sec: dict, text: str = "") -> RingModel:
    S = "ring"
    try:
        F = Field.parse(sec.get("field", "Q"))
    except (ValueError, ThomasonError) as e:
        raise _err(text, S, "field", str(e))
    names = sec.get("vars", [])
    _need(_str_list(names) and names, text, S, "vars", "vars must be a nonempty list of strings")
    vs, degs = [], []
    for v in names:
        if ":" in v:
            a, b = v.split(":", 1)
            _need(b.strip().lstrip("-").isdigit(), text, S, "vars", "bad degree in %r" % v)
            vs.append(a.strip())
            degs.append(int(b))
        else:
            vs.append(v.strip())
            degs.append(1)
    if "degrees" in sec:
        d = sec["degrees"]
        _need(isinstance(d, list) and all(isinstance(k, int) for k in d) and len(d) == len(vs),
              text, S, "degrees", "degrees must be one integer per variable")
        degs = list(d)
    rel = sec.get("relations", [])
    _need(_str_list(rel), text, S, "relations", "relations must be a list of strings")
    primes = sec.get("primes", {})
    _need(isinstance(primes, dict) and all(_str_list(g) for g in primes.values()), text, S, "primes",
          "primes.<id> must be lists of generators")
    window = sec.get("window")
    if window is not None:
        _need(isinstance(window, list) and len(window) == 2 and all(isinstance(k, int) for k in window),
              text, S, "window", "window must be [lo, hi]")
    local = sec.get("local")
    # parse polynomials up front so errors point at their own key
    for key, polys in (("relations", rel), ("primes", [g for gs in primes.values() for g in gs])):
        for f in polys:
            try:
                parse_poly(f, F, vs)
            except ThomasonError as e:
                raise _err(text, S, key, str(e))
    try:
        return RingModel(F, vs, degs, rel, primes=primes, local=local, window=window)
    except ParseError as e:
        raise _err(text, S, "relations", str(e))
    except (ThomasonError, ValueError) as e:
        raise _err(text, S, None, str(e))


def parse_poset(sec: dict, text: str = "") -> SpectrumPoset:
    S = "poset"
    pts = sec.get("points", {})
    _need(isinstance(pts, dict) and pts, text, S, "points", "points must be a table of point ids")
    points = []
    for pid, attrs in pts.items():
        if attrs is True or attrs is False:
            attrs = {"singular": attrs}
        _need(isinstance(attrs, dict), text, S, "points", "point %r needs a table" % pid)
        sing = attrs.get("singular", False)
        _need(isinstance(sing, bool), text, S, "points", "singular must be true or false")
        points.append(PrimePoint(pid, attrs.get("label", pid), sing))
    order = []
    covers = sec.get("covers", [])
    _need(_str_list(covers), text, S, "covers", "covers must be a list of 'a < b' strings")
    for c in covers:
        parts = [p.strip() for p in c.split("<")]
        _need(len(parts) >= 2 and all(parts), text, S, "covers", "bad relation %r" % c)
        order.extend(zip(parts, parts[1:]))
    try:
        return SpectrumPoset(points, order)
    except ThomasonError as e:
        raise _err(text, S, "covers", str(e))


def parse_filtration(sec: dict, P: SpectrumPoset, text: str = "") -> ThomasonFiltration:
    S = "filtration"
    kind = sec.get("kind")
    try:
        if kind is not None:
            shift = sec.get("shift", 0)
            _need(isinstance(shift, int), text, S, "shift", "shift must be an integer")
            if kind == "standard":
                return ThomasonFiltration.standard(P, shift)
            if kind == "constant":
                return ThomasonFiltration.constant(P, sec.get("Z", []))
            if kind == "tilting":
                return ThomasonFiltration.tilting(P, sec.get("Z", []), shift)
            raise _err(text, S, "kind", "unknown kind %r" % kind)
        levels = sec.get("level", {})
        _need(isinstance(levels, dict), text, S, "level", "level.<i> entries expected")
        idx = {}
        for k, v in levels.items():
            _need(re.fullmatch(r"-?\d+", k) is not None, text, S, "level", "level index %r is not an integer" % k)
            _need(_str_list(v), text, S, "level", "level.%s must list point ids" % k)
            idx[int(k)] = v
        window = sec.get("window")
        if window is not None:
            _need(isinstance(window, list) and len(window) == 2 and all(isinstance(k, int) for k in window),
                  text, S, "window", "window must be [lo, hi]")
            lo, hi = window
        elif idx:
            lo, hi = min(idx), max(idx)
        else:
            lo, hi = 0, -1
        for i in idx:
            _need(lo <= i <= hi, text, S, "level", "level %d outside the window" % i)
        ta, tb = sec.get("tail_above"), sec.get("tail_below")
        levels_list = []
        for i in range(lo, hi + 1):
            if i not in idx:
                raise _err(text, S, "level", "missing level.%d" % i)
            levels_list.append(idx[i])
        for key in ("tail_above", "tail_below"):
            if key in sec:
                _need(_str_list(sec[key]), text, S, key, "%s must list point ids" % key)
        for z in list(idx.values()) + [x for x in (ta, tb) if x is not None]:
            for p in z:
                _need(p in P, text, S, "level", "unknown point %r" % p)
        return ThomasonFiltration(P, lo, levels_list, ta, tb)
    except ParseError:
        raise
    except ThomasonError as e:
        raise _err(text, S, None, str(e))


def parse_complex(sec: dict, R: RingModel, text: str = "") -> ChainComplex:
    S = "complex"
    terms_in = sec.get("term", {})
    _need(isinstance(terms_in, dict) and terms_in, text, S, "term", "term.<n> entries expected")
    terms = {}
    for k, v in terms_in.items():
        _need(re.fullmatch(r"-?\d+", k) is not None, text, S, "term", "term index %r is not an integer" % k)
        if isinstance(v, int) and not isinstance(v, bool):
            _need(v >= 0, text, S, "term", "negative rank")
            terms[int(k)] = [0] * v
        else:
            _need(isinstance(v, list) and all(isinstance(a, int) for a in v), text, S, "term",
                  "term.%s must be a rank or a list of degrees" % k)
            terms[int(k)] = list(v)
    diffs = {}
    for k, v in sec.get("diff", {}).items():
        _need(re.fullmatch(r"-?\d+", k) is not None, text, S, "diff", "diff index %r is not an integer" % k)
        _need(isinstance(v, list) and all(_str_list(r) for r in v), text, S, "diff",
              "diff.%s must be a list of rows of polynomial strings" % k)
        diffs[int(k)] = v
    try:
        return ChainComplex(R, terms, diffs)
    except (ThomasonError, ValueError) as e:
        raise _err(text, S, "diff", str(e))


def loads(text: str) -> Document:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ParseError(str(e), getattr(e, "lineno", None), getattr(e, "colno", None))
    doc = Document(text, data)
    if "ring" in data:
        doc.ring = parse_ring(data["ring"], text)
    if "poset" in data:
        doc.poset = parse_poset(data["poset"], text)
    if "filtration" in data:
        if doc.poset is None:
            raise _err(text, "filtration", None, "a filtration needs a [poset] section")
        doc.filtration = parse_filtration(data["filtration"], doc.poset, text)
    if "complex" in data:
        if doc.ring is None:
            raise _err(text, "complex", None, "a complex needs a [ring] section")
        doc.complex = parse_complex(data["complex"], doc.ring, text)
    if "module" in data:
        sec = data["module"]
        q = sec.get("quotient", [])
        _need(_str_list(q), text, "module", "quotient", "quotient must be a list of generators")
        deg = sec.get("degree", 0)
        _need(isinstance(deg, int), text, "module", "degree", "degree must be an integer")
        doc.module = {"quotient": q, "degree": deg}
    if "ideals" in data:
        gens = data["ideals"].get("generators", [])
        _need(isinstance(gens, list) and all(_str_list(g) for g in gens), text, "ideals", "generators",
              "generators must be a list of lists of polynomials")
        doc.ideals = gens
    if doc.ring is not None and doc.poset is not None:
        missing = [p for p in doc.poset.ids if p not in doc.ring.primes]
        if missing:
            raise _err(text, "ring", "primes", "poset points without ring primes: %s" % missing)
    return doc


def load(path: str) -> Document:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError("cannot read %s: %s" % (path, e.strerror))
    return loads(text)


# --- emitting -----------------------------------------------------------------------


def _val(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_val(x) for x in v) + "]"
    raise TypeError("cannot emit %r" % (v,))


def _key(k: str) -> str:
    return k if re.fullmatch(r"[A-Za-z0-9_-]+", k) else _val(k)


def dump_ring(R: RingModel) -> str:
    lines = ["[ring]", "field = %s" % _val(str(R.field)),
             "vars = %s" % _val(list(R.names)), "degrees = %s" % _val(list(R.degrees)),
             "relations = %s" % _val([R.format(g) for g in R.relations])]
    if R.window is not None:
        lines.append("window = %s" % _val(list(R.window)))
    if R.local is not None:
        lines.append("local = %s" % _val(R.local))
    if R.primes:
        lines.append("")
        lines.append("[ring.primes]")
        for pid, gens in sorted(R.primes.items()):
            lines.append("%s = %s" % (_key(pid), _val([R.format(g) for g in gens])))
    return "\n".join(lines) + "\n"


def dump_complex(C: ChainComplex) -> str:
    R = C.ring
    lines = ["[complex]"]
    for n, t in sorted(C.terms.items()):
        lines.append("term.%d = %s" % (n, _val(list(t))))
    for n, D in sorted(C.diffs.items()):
        lines.append("diff.%d = %s" % (n, _val([[R.format(f) for f in row] for row in D])))
    return "\n".join(lines) + "\n"


def dump_poset(P: SpectrumPoset) -> str:
    lines = ["[poset]", "covers = %s" % _val(["%s < %s" % (a, b) for a, b in P.covering_pairs()]), ""]
    for pid in P.ids:
        lines.append("[poset.points.%s]" % _key(pid))
        lines.append("singular = %s" % _val(P.point(pid).singular))
    return "\n".join(lines) + "\n"


def dump_filtration(Phi: ThomasonFiltration) -> str:
    s = Phi.poset.sort
    lines = ["[filtration]", "window = %s" % _val([Phi.lo, Phi.hi])]
    for i in range(Phi.lo, Phi.hi + 1):
        lines.append("level.%d = %s" % (i, _val(s(Phi.at(i)))))
    lines.append("tail_above = %s" % _val(s(Phi.tail_above)))
    lines.append("tail_below = %s" % _val(s(Phi.tail_below)))
    return "\n".join(lines) + "\n"
