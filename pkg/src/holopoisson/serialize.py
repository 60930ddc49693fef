"""Parsing and canonical printing of the JSON object schemas.

All numbers travel as exact strings in the polynomial literal grammar;
printing uses the global monomial and frame orders so that reports are
byte-stable.
"""

from __future__ import annotations

from .algebroid import AlgebroidChart, LieAlgebraData
from .errors import ParseError
from .exactalg import Chart, parse_gq, parse_poly
from .multivec import Form, MixedForm, Multivector
from .poisson import EndoField


def require_keys(obj: dict, allowed, context: str):
    if not isinstance(obj, dict):
        raise ParseError(f"{context}: expected an object")
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ParseError(f"{context}: unknown fields {sorted(unknown)}")


def parse_chart(doc) -> Chart:
    require_keys(doc, {"kind", "n"}, "chart")
    try:
        kind = doc["kind"]
        n = doc["n"]
    except KeyError as exc:
        raise ParseError(f"chart: missing field {exc}") from exc
    if not isinstance(n, int):
        raise ParseError("chart: n must be an integer")
    if kind not in ("complex", "real"):
        raise ParseError(f"chart: unknown kind {kind!r}")
    return Chart(kind, n)


def chart_dict(chart: Chart) -> dict:
    return {"kind": chart.kind, "n": chart.n}


def parse_alternating(chart: Chart, entries, degree, kind) -> "Multivector|Form":
    """Parse a component list [{"frame": [...], "coeff": "..."}] into a
    Multivector (kind 'vector') or Form (kind 'form')."""
    cls = Multivector if kind == "vector" else Form
    comps = {}
    if not isinstance(entries, list):
        raise ParseError("component list expected")
    for entry in entries:
        require_keys(entry, {"frame", "coeff"}, "component")
        names = entry.get("frame")
        if not isinstance(names, list):
            raise ParseError("component frame must be a list of names")
        idx = tuple(chart.var_index(str(name)) for name in names)
        if list(idx) != sorted(set(idx)):
            raise ParseError(f"component frame {names} is not strictly "
                             "increasing in the canonical order")
        if degree is not None and len(idx) != degree:
            raise ParseError(f"component frame {names} has wrong degree")
        poly = parse_poly(str(entry.get("coeff", "0")), chart)
        if idx in comps:
            raise ParseError(f"duplicate component {names}")
        comps[idx] = poly
    if degree is None:
        degrees = {len(i) for i in comps}
        if len(degrees) > 1:
            raise ParseError("components of mixed degree")
        degree = degrees.pop() if degrees else 0
    return cls(chart, degree, comps)


def alternating_dict(obj) -> list:
    out = []
    for idx, poly in obj.sorted_comps():
        out.append({"frame": [obj.chart.var_name(k) for k in idx],
                    "coeff": str(poly)})
    return out


def parse_bivector(chart: Chart, entries) -> Multivector:
    return parse_alternating(chart, entries, 2, "vector")


def mixedform_dict(m: MixedForm) -> list:
    n = m.chart.n
    out = []
    for (J, I), poly in m.sorted_comps():
        out.append({"forms": [m.chart.var_name(n + j) for j in J],
                    "vectors": [m.chart.var_name(i) for i in I],
                    "coeff": str(poly)})
    return out


def parse_matrix(chart: Chart, rows, size, context="matrix"):
    if not isinstance(rows, list) or len(rows) != size:
        raise ParseError(f"{context}: expected {size} rows")
    out = []
    for row in rows:
        if not isinstance(row, list) or len(row) != size:
            raise ParseError(f"{context}: expected {size} columns")
        out.append([parse_poly(str(v), chart) for v in row])
    return out


def parse_endo(chart: Chart, doc) -> EndoField:
    return EndoField(chart, parse_matrix(chart, doc, chart.nvars, "endo"))


def matrix_dict(rows) -> list:
    return [[str(entry) for entry in row] for row in rows]


def parse_liealgebra(doc) -> LieAlgebraData:
    require_keys(doc, {"rank", "brackets", "j"}, "lie_algebra")
    rank = doc.get("rank")
    if not isinstance(rank, int) or rank < 0:
        raise ParseError("lie_algebra: rank must be a nonnegative integer")
    triples = []
    for item in doc.get("brackets", []):
        if not isinstance(item, list) or len(item) != 4:
            raise ParseError("lie_algebra: brackets entries are "
                             "[i, j, k, coeff]")
        i, j, k, coeff = item
        for v in (i, j, k):
            if not isinstance(v, int) or not 1 <= v <= rank:
                raise ParseError(f"lie_algebra: index {v} out of range")
        triples.append((i, j, k, parse_gq(str(coeff))))
    j_matrix = None
    if doc.get("j") is not None:
        rows = doc["j"]
        if not isinstance(rows, list) or len(rows) != rank:
            raise ParseError("lie_algebra: j must be rank x rank")
        j_matrix = [[parse_gq(str(v)) for v in row] for row in rows]
    return LieAlgebraData.from_triples(rank, triples, j_matrix)


def algebroid_dict(a: AlgebroidChart) -> dict:
    structure = []
    for i in range(a.rank):
        for j in range(i + 1, a.rank):
            for k, poly in enumerate(a.structure[i][j]):
                if not poly.is_zero():
                    structure.append([i + 1, j + 1, k + 1, str(poly)])
    return {
        "chart": chart_dict(a.chart),
        "rank": a.rank,
        "anchor": [[str(p) for p in row] for row in a.anchor],
        "structure": structure,
    }


def section_dict(a: AlgebroidChart, section) -> list:
    return [str(p) for p in section]
