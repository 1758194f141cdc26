"""Attractor search for the extended BQ-conditions.

The search grows a subtree of the dual tree from the base vertex (or from one
edge into a chosen side).  An unexplored side of a frontier edge is closed
when it can be certified free of small traces:

* flow: both flanking values exceed 2 and the arrow points back at us, so
  every trace beyond is at least min(|x|, |y|);
* ray: one flanking value w is small and all further neighbours of that
  region on the closed side stay above 2 (growth bound, linear bound at
  w = +-2, or a full period when the rotation is rational).

Every discovered region is checked for a violation witness: a real trace
in (-2, 2), or a trace +-sqrt(kappa + 2) whose neighbours decay to zero.
"""

from __future__ import annotations

import cmath
import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import _kernels
from .audit import AUDIT
from .characters import EPS, Character, Tri, is_saturated
from .farey import (
    BASE_TRIPLE,
    INF,
    ONE,
    ZERO,
    FareyPair,
    FareyTriple,
    Slope,
    other_completion,
)
from .trace_tree import (
    EdgeState,
    FlowArrow,
    VertexState,
    check_vertex_arrows,
    edge_value,
    lam_of,
    sat_abs,
    trace_at,
    traces_at,
)

DEFAULT_MAX_VERTICES = 10**6
RAY_WINDOW = 10**4
MAX_PERIOD = 10**4


# --- single-region tests -----------------------------------------------------


def open_interval(v: complex, eps: float = EPS) -> Tri:
    """Is v a real number in (-2, 2)?  The eps band just inside +-2 is BOUNDARY."""
    if is_saturated(v):
        return Tri.NO
    if abs(v.imag) > eps or abs(v.real) >= 2.0:
        return Tri.NO
    if abs(v.real) < 2.0 - eps:
        return Tri.YES
    return Tri.BOUNDARY


def near_root(v: complex, kappa: complex, eps: float = EPS) -> bool:
    """v within eps of +sqrt(kappa+2) or -sqrt(kappa+2)."""
    if is_saturated(v):
        return False
    r = cmath.sqrt(kappa + 2)
    return abs(v - r) <= eps or abs(v + r) <= eps


@dataclass(frozen=True)
class Witness:
    kind: str  # "OpenInterval", "SqrtKappaSpiral" or "Reducible"
    slope: Slope | None = None
    value: complex | None = None
    nonzero_neighbor: Slope | None = None


def verify_witness(ch: Character, w: Witness, eps: float = EPS) -> bool:
    if w.kind == "Reducible":
        return abs(ch.kappa - 2) <= eps
    v = trace_at(ch, w.slope)
    if w.kind == "OpenInterval":
        return open_interval(v, eps) is Tri.YES
    if w.kind == "SqrtKappaSpiral":
        if not near_root(v, ch.kappa, eps):
            return False
        return w.nonzero_neighbor is not None and sat_abs(trace_at(ch, w.nonzero_neighbor)) > eps
    return False


# --- closing certificates ------------------------------------------------------


def prunable(e: EdgeState, arrow: FlowArrow, eps: float = EPS, toward: Slope | None = None) -> bool:
    """Both flanking values exceed 2 (saturation counts), so the tail the arrow
    leaves is free of small traces.  With ``toward`` set, additionally require
    the arrow to point at that side."""
    if min(sat_abs(e.x), sat_abs(e.y)) <= 2 + eps:
        return False
    return toward is None or arrow.direction.to_slope == toward


def flow_closes(va, vb, vc, vd, eps: float = EPS) -> bool:
    """Edge (a, b) seen from c: the far side d can be dropped."""
    if min(sat_abs(va), sat_abs(vb)) <= 2 + eps:
        return False
    # arrow from d towards c (ties count as inward)
    return sat_abs(vd) >= sat_abs(vc)


@dataclass(frozen=True)
class RayCert:
    method: str  # growth, linear, modulus, periodic, saturated
    checked: int  # number of neighbours verified explicitly


def ray_certificate(w: complex, y0: complex, y1: complex, kappa: complex, eps: float = EPS,
                    window: int = RAY_WINDOW):
    """Certify |y_k| > 2 + eps and y_k != +-sqrt(kappa+2) for all k >= 0 where
    y_{k+1} = w y_k - y_{k-1}.  Returns a RayCert or None."""
    thr = 2.0 + eps
    r = cmath.sqrt(kappa + 2)

    def bad(v):
        return sat_abs(v) <= thr or near_root(v, kappa, eps)

    if is_saturated(w):
        return None
    if bad(y0) or bad(y1):
        return None
    if is_saturated(y0) or is_saturated(y1):
        # growth beyond the saturation bound is not certifiable exactly; one
        # saturated neighbour forces the next to be huge unless w is tiny
        if is_saturated(y0) and is_saturated(y1) and abs(w) > 2 + eps:
            return RayCert("saturated", 0)
        return None
    top = max(thr, abs(r) + eps)
    w = complex(w)
    for sgn in (1, -1):
        if abs(w - 2 * sgn) <= eps:
            # y_k = sgn^k (y0 + k d), |y0 + k d| is convex in k
            d = sgn * y1 - y0
            dd = abs(d) ** 2
            if dd <= eps * eps:
                return RayCert("linear", 2)
            kstar = -(y0.real * d.real + y0.imag * d.imag) / dd
            k = 0
            while k <= window:
                v = y0 + k * d
                if k > kstar and abs(v) > top:
                    return RayCert("linear", k)
                if sat_abs(v) <= thr or near_root(v, kappa, eps) or near_root(-v, kappa, eps):
                    return None
                k += 1
            return None
    lam = lam_of(w)
    if abs(w.imag) <= eps and abs(w.real) < 2:
        # rotation: y_k = A e^{ik t} + B e^{-ik t}
        lam = complex(w.real / 2, math.sqrt(max(0.0, 1 - w.real * w.real / 4)))
        A = (y1 - y0 / lam) / (lam - 1 / lam)
        B = y0 - A
        if abs(abs(A) - abs(B)) > top + 1e-9 * (abs(A) + abs(B)):
            return RayCert("modulus", 0)
        t = cmath.phase(lam) / (2 * math.pi)
        frac = Fraction(t).limit_denominator(MAX_PERIOD)
        N = frac.denominator
        if abs(lam**N - 1) > 1e-9:
            return None
        k = _kernels.scan_ray(w, y0, y1, N, thr, r, eps)
        if k == -1:
            return RayCert("periodic", N)
        return None
    ml = abs(lam)
    if ml <= 1 + 1e-12:
        return None
    A = (y1 - y0 / lam) / (lam - 1 / lam)
    B = y0 - A
    aA, aB = abs(A), abs(B)
    if aA <= 1e-12 * (aA + aB):
        return None
    # smallest K with |A| ml^K - |B| ml^-K > top (with a safety factor)
    target = top * (1 + 1e-6) + 1e-6
    K = 0
    while aA * ml**K - aB * ml ** (-K) <= target:
        K += 1
        if K > window:
            return None
    k = _kernels.scan_ray(w, y0, y1, K + 1, thr, r, eps)
    if k == -1 or k == -2:
        return RayCert("growth", K + 1)
    return None


@dataclass(frozen=True)
class BoundaryEdge:
    """Closed frontier edge: (a, b) seen from c, the far side d dropped."""

    a: Slope
    b: Slope
    c: Slope
    d: Slope
    values: tuple  # (va, vb, vc, vd)
    kind: str  # "flow" or "ray"
    small: Slope | None = None
    cert: RayCert | None = None

    def edge_state(self) -> EdgeState:
        va, vb, vc, vd = self.values
        return EdgeState(FareyPair(self.a, self.b), va, vb, self.c, vc, self.d, vd)


def verify_boundary(ch: Character, be: BoundaryEdge, eps: float = EPS) -> bool:
    """Recompute the values from scratch and re-check the certificate."""
    got = traces_at(ch, [be.a, be.b, be.c, be.d])
    va, vb, vc, vd = (got[s] for s in (be.a, be.b, be.c, be.d))
    if other_completion(be.a, be.b, be.c) != be.d:
        return False
    if be.kind == "flow":
        return flow_closes(va, vb, vc, vd, eps)
    if be.kind == "ray":
        if be.small == be.a:
            w, y0 = va, vb
        elif be.small == be.b:
            w, y0 = vb, va
        else:
            return False
        return ray_certificate(w, y0, vd, ch.kappa, eps) is not None
    return False


def close_edge(va, vb, vc, vd, kappa, eps: float = EPS):
    """Certificate for dropping the far side d of edge (a, b), or None.

    Returns (kind, small_index, cert) with small_index 0 for a, 1 for b.
    """
    if flow_closes(va, vb, vc, vd, eps):
        return ("flow", None, None)
    ma, mb = sat_abs(va), sat_abs(vb)
    thr = 2 + eps
    if ma <= thr < mb:
        cert = ray_certificate(va, vb, vd, kappa, eps)
        if cert is not None:
            return ("ray", 0, cert)
    elif mb <= thr < ma:
        cert = ray_certificate(vb, va, vd, kappa, eps)
        if cert is not None:
            return ("ray", 1, cert)
    return None


# --- the exploration engine ------------------------------------------------------


@dataclass
class Exploration:
    status: str  # violated, satisfied, exhausted, stopped
    witnesses: list = field(default_factory=list)
    expanded: list = field(default_factory=list)
    boundary: list = field(default_factory=list)
    frontier: int = 0
    boundary_hits: list = field(default_factory=list)
    values: dict = field(default_factory=dict)
    other_values: list = field(default_factory=list)


def _region_witness(s, v, flank, kappa, eps, spiral_dir=None):
    """Witness for region s (value v) or a Tri.BOUNDARY marker.

    ``flank`` lists neighbouring (slope, value) pairs.  For a tail endpoint
    ``spiral_dir`` = (y0, y1) gives the neighbour values pointing into the
    tail, and a spiral only counts if it decays in that direction.
    """
    oi = open_interval(v, eps)
    if oi is Tri.YES:
        return Witness("OpenInterval", s, v)
    if near_root(v, kappa, eps):
        if spiral_dir is not None:
            y0, y1 = spiral_dir
            lam = lam_of(complex(v))
            if abs(lam) > 1 + 1e-9:
                A = (y1 - y0 / lam) / (lam - 1 / lam)
                decays = abs(A) <= 1e-9 * (1 + abs(y0))
                if decays and abs(y0) > eps:
                    return Witness("SqrtKappaSpiral", s, v, flank[0][0])
            return None
        for t, u in flank:
            if sat_abs(u) > eps:
                return Witness("SqrtKappaSpiral", s, v, t)
    if oi is Tri.BOUNDARY:
        return Tri.BOUNDARY
    return None


def explore(
    ch: Character,
    max_vertices: int = DEFAULT_MAX_VERTICES,
    mode: str = "first",
    tail: tuple | None = None,
    eps: float = EPS,
    stop=None,
) -> Exploration:
    """Grow the attractor candidate.

    mode "first" stops at the first witness; "collect" keeps going and
    gathers all witnesses met.  ``tail`` = (a, b, inner) restricts the search
    to the closed arc between a and b containing ``inner`` (a completion of
    the edge).  ``stop(result)`` may end a collecting run early.
    """
    if max_vertices < 1:
        raise ValueError("max_vertices must be >= 1")
    kappa = ch.kappa
    res = Exploration("exhausted")
    heap = []

    def push(a, b, c, va, vb, vc):
        d = other_completion(a, b, c)
        key = (min(sat_abs(va), sat_abs(vb)), d.q, d.p)
        heapq.heappush(heap, (key, a, b, c, d, va, vb, vc))

    def found(s, v, flank, spiral_dir=None):
        r = _region_witness(s, v, flank, kappa, eps, spiral_dir)
        if r is Tri.BOUNDARY:
            res.boundary_hits.append((s, v))
            return False
        if isinstance(r, Witness):
            res.witnesses.append(r)
            return mode == "first"
        if sat_abs(v) > 2 + eps and not near_root(v, kappa, eps):
            res.other_values.append((s, v))
        return False

    if tail is None:
        vals = {ZERO: ch.x, INF: ch.y, ONE: ch.z}
        res.values.update(vals)
        res.expanded.append(BASE_TRIPLE)
        base = [(ZERO, (INF, ONE)), (INF, (ZERO, ONE)), (ONE, (ZERO, INF))]
        for s, (p, q) in base:
            if found(s, vals[s], [(p, vals[p]), (q, vals[q])]):
                res.status = "violated"
                return res
        push(ZERO, INF, ONE, ch.x, ch.y, ch.z)
        push(INF, ONE, ZERO, ch.y, ch.z, ch.x)
        push(ONE, ZERO, INF, ch.z, ch.x, ch.y)
    else:
        a, b, inner = tail
        outer = other_completion(a, b, inner)
        got = traces_at(ch, [a, b, inner, outer])
        res.values.update(got)
        # endpoint neighbours into the tail: y0 = other endpoint, y1 = inner
        if found(a, got[a], [(b, got[b]), (inner, got[inner])], (got[b], got[inner])):
            res.status = "violated"
            return res
        if found(b, got[b], [(a, got[a]), (inner, got[inner])], (got[a], got[inner])):
            res.status = "violated"
            return res
        push(a, b, outer, got[a], got[b], got[outer])

    n_expanded = 0
    while heap:
        _, a, b, c, d, va, vb, vc = heapq.heappop(heap)
        vd = edge_value(va, vb, vc)
        AUDIT.edge(EdgeState(FareyPair(a, b), va, vb, c, vc, d, vd))
        cl = close_edge(va, vb, vc, vd, kappa, eps)
        if cl is not None:
            kind, idx, cert = cl
            small = None if idx is None else (a, b)[idx]
            res.boundary.append(BoundaryEdge(a, b, c, d, (va, vb, vc, vd), kind, small, cert))
            continue
        if n_expanded >= max_vertices:
            res.frontier = len(heap) + 1
            res.status = "exhausted"
            return res
        n_expanded += 1
        t = FareyTriple(a, b, d)
        res.expanded.append(t)
        if AUDIT.enabled:
            tv = {a: va, b: vb, d: vd}
            tvals = tuple(tv[s] for s in t.slopes())
            AUDIT.vertex_relation(VertexState(t, tvals), kappa)
            check_vertex_arrows(ch, t, tvals, eps)
        res.values[d] = vd
        if found(d, vd, [(a, va), (b, vb)]):
            res.status = "violated"
            res.frontier = len(heap)
            return res
        if stop is not None and stop(res):
            res.status = "stopped"
            res.frontier = len(heap) + 2
            return res
        push(a, d, b, va, vd, vb)
        push(d, b, a, vd, vb, va)
    res.frontier = 0
    if res.witnesses:
        res.status = "violated"
    elif res.boundary_hits:
        res.status = "exhausted"
    else:
        res.status = "satisfied"
    return res


# --- verdicts ---------------------------------------------------------------------


@dataclass(frozen=True)
class Satisfied:
    attractor: tuple
    boundary: tuple

    verdict = "satisfied"


@dataclass(frozen=True)
class Violated:
    witness: Witness

    verdict = "violated"


@dataclass(frozen=True)
class Exhausted:
    visited: int
    frontier_stats: dict

    verdict = "exhausted"


def _verdict(res: Exploration):
    if res.status == "violated":
        return Violated(res.witnesses[0])
    if res.status == "satisfied":
        return Satisfied(tuple(res.expanded), tuple(res.boundary))
    return Exhausted(
        len(res.expanded),
        {"frontier": res.frontier, "boundary_hits": len(res.boundary_hits)},
    )


def check_bq(ch: Character, max_vertices: int = DEFAULT_MAX_VERTICES, eps: float = EPS):
    """Decide the extended BQ-conditions: Satisfied, Violated or Exhausted."""
    if max_vertices < 1:
        raise ValueError("max_vertices must be >= 1")
    if abs(ch.kappa - 2) <= eps:
        return Violated(Witness("Reducible"))
    return _verdict(explore(ch, max_vertices, "first", eps=eps))


def check_bq_tail(ch: Character, a: Slope, b: Slope, inner: Slope,
                  max_vertices: int = DEFAULT_MAX_VERTICES, eps: float = EPS):
    """BQ-conditions restricted to the closed arc between a and b containing inner."""
    if abs(ch.kappa - 2) <= eps:
        return Violated(Witness("Reducible"))
    return _verdict(explore(ch, max_vertices, "first", tail=(a, b, inner), eps=eps))


def verify_satisfied(ch: Character, v: Satisfied, eps: float = EPS) -> bool:
    return all(verify_boundary(ch, be, eps) for be in v.boundary)
