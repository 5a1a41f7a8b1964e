"""Report assembly and the JSON graph and report schemas.

Reports carry the tool version, the seed and retry count, and a short
hash of the convention choices, so identical configurations reproduce
byte identical JSON.  Graphs serialize with string ids throughout; the
outer face is written as its boundary walk starting from the least
dart, which makes serialization canonical for a given embedding.
"""

import hashlib
import json
from fractions import Fraction
from importlib import resources

from . import __version__
from .planar import PlanarGraph, _key

SCHEMA = 1


def conventions_text():
    """The pinned convention document shipped with the package."""
    return resources.files("bosco").joinpath(
        "data/conventions.md").read_text(encoding="utf-8")


# reports embed this so a convention edit is a visible format change
CONVENTIONS_HASH = hashlib.sha256(
    conventions_text().encode()).hexdigest()[:12]


class ReportError(ValueError):
    """Input that does not satisfy the serialized graph schema."""


def half(n):
    """Render n/2 as an exact decimal string: 3 -> "1.5", 4 -> "2"."""
    q = Fraction(n, 2)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator / 2:.1f}"


def canonical_json(doc):
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


# -- graph schema ----------------------------------------------------------

def graph_to_json(g):
    """Serialize an embedded graph; ids become strings."""
    verts = sorted(g.rotation, key=_key)
    doc = {
        "schema": SCHEMA,
        "vertices": [str(v) for v in verts],
        "base": None if g.base is None else str(g.base),
        "edges": [
            {"id": str(e), "ends": [str(u) for u in g.edges[e]],
             "height": g.heights.get(e, 0)}
            for e in g.edge_ids()],
        "rotation": {
            str(v): [[str(e), end] for e, end in g.rotation[v]]
            for v in verts},
        "outer_face": [],
    }
    if g.edges:
        orbit = g.faces()[g.outer_face_index()]
        doc["outer_face"] = [[str(e), end] for e, end in orbit]
    return doc


def graph_from_json(doc):
    """Rebuild a PlanarGraph from the schema; raises ReportError."""
    if not isinstance(doc, dict):
        raise ReportError("graph document is not an object")
    if doc.get("schema") != SCHEMA:
        raise ReportError(f"unsupported schema {doc.get('schema')!r}")
    for field in ("vertices", "edges", "rotation", "outer_face"):
        if field not in doc:
            raise ReportError(f"missing field {field!r}")
    edges = {}
    heights = {}
    for rec in doc["edges"]:
        try:
            eid = str(rec["id"])
            ends = tuple(str(u) for u in rec["ends"])
            h = rec["height"]
        except (TypeError, KeyError) as err:
            raise ReportError(f"bad edge record {rec!r}") from err
        if len(ends) != 2 or h not in (0, 1):
            raise ReportError(f"bad edge record {rec!r}")
        if eid in edges:
            raise ReportError(f"duplicate edge id {eid!r}")
        edges[eid] = ends
        heights[eid] = h
    rotation = {}
    for v in doc["vertices"]:
        v = str(v)
        if v in rotation:
            raise ReportError(f"duplicate vertex id {v!r}")
        rotation[v] = []
    for v, darts in doc["rotation"].items():
        v = str(v)
        if v not in rotation:
            raise ReportError(f"rotation for unknown vertex {v!r}")
        try:
            rotation[v] = [(str(e), int(end)) for e, end in darts]
        except (TypeError, ValueError) as err:
            raise ReportError(f"bad rotation at vertex {v!r}") from err
    outer = None
    if doc["outer_face"]:
        walk = doc["outer_face"][0]
        try:
            outer = (str(walk[0]), int(walk[1]))
        except (TypeError, IndexError, ValueError) as err:
            raise ReportError("bad outer face walk") from err
    base = doc.get("base")
    if base is not None:
        base = str(base)
    try:
        return PlanarGraph(edges, rotation, outer_dart=outer,
                           heights=heights, base=base)
    except ValueError as err:
        raise ReportError(f"graph fails validation: {err}") from err


# -- report assembly -------------------------------------------------------

def _stamp(command, config):
    return {
        "schema": SCHEMA,
        "tool": {"name": "bosco", "version": __version__},
        "conventions": CONVENTIONS_HASH,
        "command": command,
        "input": config.input_label(),
        "seed": config.seed,
        "retries": config.retries,
    }


def _height_rows(cert, shift):
    rows = []
    for h in sorted(cert.dims):
        rows.append({
            "height": h,
            "degree": half(h - shift),
            "dimension": cert.dims[h],
            "differential_rank": cert.spec_ranks.get(h, 0),
            "attempts": list(cert.attempts.get(h, [])),
            "upper_bound": cert.upper[h],
            "rank": cert.ranks[h],
            "certified": cert.certified[h],
        })
    return rows


def cohomology_report(cert, config, shift, collapse, hf, lspace):
    doc = _stamp("cohomology", config)
    doc.update({
        "graph": {"vertices": len(cert.graph.rotation),
                  "edges": len(cert.graph.edges)},
        "degree_shift": shift,
        "heights": _height_rows(cert, shift),
        "determinant": cert.determinant,
        "euler_trace": cert.euler,
        "total_rank": cert.total,
        "certified": cert.all_certified,
        "collapsed": bool(collapse),
        "blocking_pairs": [list(p) for p in collapse.pairs],
        "hf_rank": hf[0],
        "hf_reason": hf[1],
        "lspace": lspace[0],
        "lspace_reason": lspace[1],
        "basis": list(cert.basis),
    })
    return doc


def _cert_lines(doc):
    lines = []
    for row in doc["heights"]:
        status = "certified" if row["certified"] else "upper bound"
        lines.append(
            f"height {row['height']} (degree {row['degree']}): "
            f"rank {row['rank']} of dimension {row['dimension']}, {status}, "
            f"differential rank {row['differential_rank']}")
    return lines


def render_cohomology(doc):
    lines = [f"cohomology of {doc['input']}"]
    lines += _cert_lines(doc)
    lines.append(
        f"determinant {doc['determinant']}, euler trace {doc['euler_trace']}, "
        f"total rank {doc['total_rank']}")
    lines.append("all ranks certified" if doc["certified"]
                 else "some ranks are only upper bounds")
    if doc["collapsed"]:
        lines.append("collapsed: no later differential can act")
    else:
        pairs = ", ".join(f"{a} and {b}" for a, b in doc["blocking_pairs"])
        lines.append(f"not collapsed: heights {pairs} could still interact")
    if doc["hf_rank"] is not None:
        lines.append(f"inferred Floer rank of the double cover: {doc['hf_rank']}")
    else:
        lines.append(f"no Floer rank inferred: {doc['hf_reason']}")
    if doc["lspace"] is None:
        lines.append(f"L space test inconclusive: {doc['lspace_reason']}")
    elif doc["lspace"]:
        lines.append("L space: yes, total rank meets the determinant")
    else:
        lines.append(f"L space: no, {doc['lspace_reason']}")
    if doc["basis"]:
        lines.append("derivation:")
        lines += ["  " + b for b in doc["basis"]]
    lines.append(
        f"seed {doc['seed']}, retries {doc['retries']}, bosco "
        f"{doc['tool']['version']}, conventions {doc['conventions']}")
    return "\n".join(lines) + "\n"


def _branch_block(name, cert, res, shift):
    return {
        "name": name,
        "kind": res.kind,
        "edge": str(res.edge),
        "height_shift": res.shift,
        "heights": _height_rows(cert, shift),
        "determinant": cert.determinant,
        "total_rank": cert.total,
        "certified": cert.all_certified,
        "basis": list(cert.basis),
    }


def skein_report(triple, les, config, shift):
    doc = _stamp("skein", config)
    doc.update({
        "edge": str(triple.edge),
        "edge_height": triple.graph.heights[triple.edge],
        "diagram": {
            "heights": _height_rows(triple.cert, shift),
            "determinant": triple.cert.determinant,
            "total_rank": triple.cert.total,
            "certified": triple.cert.all_certified,
            "basis": list(triple.cert.basis),
        },
        "resolutions": [
            _branch_block("zero", triple.cert0, triple.zero, shift),
            _branch_block("one", triple.cert1, triple.one, shift),
        ],
        "les": {"ok": les["ok"], "reason": les["reason"],
                "connecting_ranks": {str(h): r
                                     for h, r in sorted(les["deltas"].items())}},
        "conclusion": triple.conclusion,
    })
    return doc


def render_skein(doc):
    lines = [f"skein resolution of {doc['input']} at edge {doc['edge']} "
             f"(height {doc['edge_height']})"]
    lines.append("diagram:")
    lines += ["  " + s for s in _cert_lines(doc["diagram"])]
    lines.append(f"  determinant {doc['diagram']['determinant']}, "
                 f"total rank {doc['diagram']['total_rank']}")
    for block in doc["resolutions"]:
        lines.append(
            f"{block['name']} resolution ({block['kind']} {doc['edge']}, "
            f"heights shift up {block['height_shift']}):")
        rows = _cert_lines(block)
        lines += ["  " + s for s in rows] if rows else ["  zero complex"]
        lines.append(f"  determinant {block['determinant']}, "
                     f"total rank {block['total_rank']}")
    if doc["les"]["ok"]:
        deltas = doc["les"]["connecting_ranks"]
        tail = (f" with connecting ranks {deltas}" if deltas
                else ", all connecting maps vanish")
        lines.append(f"exact sequence feasible{tail}")
    else:
        lines.append(f"exact sequence check failed: {doc['les']['reason']}")
    if doc["conclusion"]:
        lines.append(f"conclusion: {doc['conclusion']}")
    lines.append(
        f"seed {doc['seed']}, retries {doc['retries']}, bosco "
        f"{doc['tool']['version']}, conventions {doc['conventions']}")
    return "\n".join(lines) + "\n"


def verify_report(checks, config):
    doc = _stamp("verify", config)
    doc.update({
        "checks": [{"name": n, "ok": ok, "detail": detail}
                   for n, ok, detail in checks],
        "passed": all(ok for _, ok, _ in checks),
    })
    return doc


def render_verify(doc):
    lines = []
    for check in doc["checks"]:
        mark = "ok  " if check["ok"] else "FAIL"
        lines.append(f"{mark} {check['name']}: {check['detail']}")
    total = len(doc["checks"])
    good = sum(1 for c in doc["checks"] if c["ok"])
    lines.append(f"{good} of {total} checks passed")
    return "\n".join(lines) + "\n"


def render_graph(doc):
    lines = [f"graph with {len(doc['vertices'])} vertices and "
             f"{len(doc['edges'])} edges, base {doc['base']}"]
    for rec in doc["edges"]:
        lines.append(f"edge {rec['id']}: {rec['ends'][0]} to "
                     f"{rec['ends'][1]}, height {rec['height']}")
    walk = " ".join(f"{e}.{end}" for e, end in doc["outer_face"])
    lines.append(f"outer face walk: {walk or 'none'}")
    return "\n".join(lines) + "\n"
