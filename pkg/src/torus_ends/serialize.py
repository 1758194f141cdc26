"""Plain-JSON records for results and certificates.

Every record is built from dicts, lists, strings, ints and floats only, so
json.loads(json.dumps(r)) == r.  Non-finite floats are written as the
strings "inf", "-inf" and "nan".
"""

from __future__ import annotations

import csv
import io
import json
import math

from .bq import BoundaryEdge, Exhausted, Satisfied, Violated, Witness
from .ends import ArcCover, CantorLike, Empty, FullPL, SingletonCurve, SingletonLamination, Undetermined
from .farey import Arc, FareyPair, FareyTriple, Slope
from .tau import Attractor, EndWitness, TauExhausted


def real(v: float):
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def unreal(v) -> float:
    return float(v)


def cplx(v) -> dict:
    v = complex(v)
    return {"re": real(v.real), "im": real(v.imag)}


def uncplx(d: dict) -> complex:
    return complex(unreal(d["re"]), unreal(d["im"]))


def slope(s: Slope | None):
    return None if s is None else str(s)


def character(ch) -> dict:
    return {"x": cplx(ch.x), "y": cplx(ch.y), "z": cplx(ch.z)}


def triple(t: FareyTriple) -> list:
    return [str(s) for s in t.slopes()]


def witness(w: Witness) -> dict:
    return {
        "kind": w.kind,
        "slope": slope(w.slope),
        "value": None if w.value is None else cplx(w.value),
        "nonzero_neighbor": slope(w.nonzero_neighbor),
    }


def boundary_edge(be: BoundaryEdge) -> dict:
    return {
        "edge": [str(be.a), str(be.b)],
        "seen_from": str(be.c),
        "dropped": str(be.d),
        "values": [cplx(v) for v in be.values],
        "kind": be.kind,
        "small": slope(be.small),
        "method": None if be.cert is None else be.cert.method,
        "checked": None if be.cert is None else be.cert.checked,
    }


def bq_verdict(v) -> dict:
    out = {"verdict": v.verdict}
    if isinstance(v, Satisfied):
        out["attractor"] = {"vertices": [triple(t) for t in v.attractor]}
        out["boundary"] = [boundary_edge(b) for b in v.boundary]
    elif isinstance(v, Violated):
        out["witness"] = witness(v.witness)
    elif isinstance(v, Exhausted):
        out["visited"] = v.visited
        out["frontier"] = dict(v.frontier_stats)
    return out


def arc(a: Arc) -> dict:
    return {"lo": str(a.lo), "hi": str(a.hi)}


def cover(c: ArcCover) -> dict:
    return {
        "depth": c.depth,
        "arcs": [arc(a) for a in c.arcs],
        "kept": [str(s) for s in c.kept_points],
        "measure": real(c.measure()),
        "partial": c.partial,
        "discarded": len(c.discarded),
    }


def tau_outcome(out, with_states: bool = False) -> dict:
    d = {"outcome": out.outcome}
    if isinstance(out, Attractor):
        d["attractor"] = {"vertices": [triple(out.vertex)]}
        d["certificate"] = {k: real(v) for k, v in out.certificate.items()}
    elif isinstance(out, EndWitness):
        d["witness"] = {"kind": "EndWitness", "slope": str(out.slope), "value": cplx(out.value)}
    elif isinstance(out, TauExhausted):
        d["reason"] = out.reason
    if with_states:
        d["states"] = [s.line() for s in out.states]
    d["steps"] = len(out.states)
    return d


def classification(r) -> dict:
    d = {"classification": r.kind}
    if isinstance(r, Empty):
        c = r.certificate
        if isinstance(c, Satisfied):
            d["certificate"] = bq_verdict(c)
        elif isinstance(c, Attractor):
            d["certificate"] = tau_outcome(c)
    elif isinstance(r, SingletonCurve):
        d["slope"] = str(r.slope)
        if isinstance(r.certificate, tuple):
            d["certificate"] = [boundary_edge(b) for b in r.certificate]
    elif isinstance(r, SingletonLamination):
        d["mu"] = real(r.mu)
        d["arc"] = arc(r.arc)
        d["midpoint"] = real(r.arc.midpoint_value())
    elif isinstance(r, CantorLike):
        d["reason"] = r.reason
        d["witnesses"] = [_any_witness(w) for w in r.witnesses]
        d["cover"] = cover(r.cover)
    elif isinstance(r, FullPL):
        d["reason"] = r.reason
    elif isinstance(r, Undetermined):
        d["reason"] = r.reason
        d["witnesses"] = [_any_witness(w) for w in r.witnesses]
    return d


def _any_witness(w) -> dict:
    if isinstance(w, Witness):
        return witness(w)
    return {"kind": "EndWitness", "slope": str(w.slope), "value": cplx(w.value), "nonzero_neighbor": None}


def dumps(record: dict) -> str:
    return json.dumps(record, sort_keys=True, allow_nan=False)


def loads(text: str) -> dict:
    return json.loads(text)


def cover_csv(c: ArcCover) -> str:
    """Rows (kind, lo, hi) in circular order from 0/1; kept points have lo = hi."""
    rows = [(a.lo.circle_key(), "arc", str(a.lo), str(a.hi)) for a in c.arcs]
    rows += [(s.circle_key(), "point", str(s), str(s)) for s in c.kept_points]
    rows.sort(key=lambda r: r[0])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "lo", "hi"])
    for _, kind, lo, hi in rows:
        w.writerow([kind, lo, hi])
    return buf.getvalue()


def flat_csv(record: dict) -> str:
    """Two-column key/value dump with nested keys joined by dots."""
    rows = []

    def walk(prefix, v):
        if isinstance(v, dict):
            for k in sorted(v):
                walk(f"{prefix}.{k}" if prefix else k, v[k])
        elif isinstance(v, list):
            for i, u in enumerate(v):
                walk(f"{prefix}.{i}", u)
        else:
            rows.append((prefix, v))

    walk("", record)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    w.writerows(rows)
    return buf.getvalue()


def edge_key(e: FareyPair) -> list:
    return [str(e.a), str(e.b)]
