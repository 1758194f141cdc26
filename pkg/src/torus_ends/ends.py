"""End invariants: rational end tests, arc covers and the classifier.

A cover is refined level by level through the Farey tree.  Each live arc
[lo, hi] carries the edge (lo, hi) and the region c on its outer side; its
interior is dropped once that edge closes (flow or ray certificate), and its
endpoints are kept only if they pass the rational end test.  What remains
is an outer approximation of E(rho).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .audit import AUDIT
from .bq import (
    DEFAULT_MAX_VERTICES,
    BoundaryEdge,
    Satisfied,
    Violated,
    check_bq,
    check_bq_tail,
    close_edge,
    explore,
    near_root,
    open_interval,
    verify_boundary,
)
from .characters import EPS, Character, Tri, classify_type
from .farey import (
    BASE_TRIPLE,
    INF,
    ONE,
    ZERO,
    Arc,
    ArcSet,
    DirectedFareyEdge,
    FareyPair,
    Slope,
    other_completion,
)
from .reducible import ReducibleError, descent_arcs, reducible_data
from .tau import Attractor, EndWitness, tau_from_character
from .trace_tree import edge_value, is_saturated, trace_at

DEFAULT_DEPTH = 12
DEFAULT_COVER_BUDGET = 10**6
CLASSIFY_VERTICES = 20000


# --- rational end test ------------------------------------------------------


def end_test_value(v: complex, kappa: complex, eps: float = EPS) -> Tri:
    if is_saturated(v):
        return Tri.NO
    oi = open_interval(v, eps)
    if oi is Tri.YES or near_root(v, kappa, eps):
        return Tri.YES
    if oi is Tri.BOUNDARY:
        return Tri.BOUNDARY
    # +-2 itself sits on the boundary of the open interval
    if abs(v.imag) <= eps and abs(abs(v.real) - 2) <= eps:
        return Tri.BOUNDARY
    return Tri.NO


def rational_end_test(ch: Character, s: Slope, eps: float = EPS) -> Tri:
    """Could the curve s be an end invariant?  YES, NO or BOUNDARY."""
    return end_test_value(trace_at(ch, s), ch.kappa, eps)


# --- covers -----------------------------------------------------------------


@dataclass
class ArcCover:
    depth: int
    arcs: ArcSet
    kept_points: list
    partial: bool = False
    discarded: list = field(default_factory=list)  # BoundaryEdge per dropped arc
    levels: dict = field(default_factory=dict)  # depth -> (ArcSet, kept points)

    def measure(self) -> float:
        return self.arcs.measure()

    def contains(self, s: Slope) -> bool:
        return self.arcs.contains(s) or s in self.kept_points


def _base_arcs(ch: Character):
    # (lo, hi, outer, vlo, vhi, vouter) in anticlockwise order from 0/1
    x, y, z = ch.x, ch.y, ch.z
    return [
        (ZERO, ONE, INF, x, z, y),
        (ONE, INF, ZERO, z, y, x),
        (INF, ZERO, ONE, y, x, z),
    ]


def _kept(points: dict, live) -> list:
    # slopes seen so far never lie strictly inside a live Farey arc
    ends = {t[0] for t in live} | {t[1] for t in live}
    out = [s for s, t in points.items() if t is not Tri.NO and s not in ends]
    out.sort(key=lambda s: s.circle_key())
    return out


def compute_cover(ch: Character, depth: int = DEFAULT_DEPTH, budget: int = DEFAULT_COVER_BUDGET,
                  eps: float = EPS, record_levels: bool = False) -> ArcCover:
    """Outer approximation of E(rho) after ``depth`` Farey levels."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    kappa = ch.kappa
    if abs(kappa - 2) <= eps:
        raise ReducibleError("covers need kappa != 2")
    points = {s: end_test_value(v, kappa, eps) for s, v in zip((ZERO, INF, ONE), ch.triple())}
    live = _base_arcs(ch)
    discarded = []
    levels = {}
    used = 0
    partial = False
    for level in range(1, depth + 1):
        keep = []
        for i, (lo, hi, c, vlo, vhi, vc) in enumerate(live):
            if used >= budget:
                partial = True
                keep.extend(live[i:])
                break
            used += 1
            d = other_completion(lo, hi, c)
            vd = edge_value(vlo, vhi, vc)
            cl = close_edge(vlo, vhi, vc, vd, kappa, eps)
            if cl is not None:
                kind, idx, cert = cl
                small = None if idx is None else (lo, hi)[idx]
                be = BoundaryEdge(lo, hi, c, d, (vlo, vhi, vc, vd), kind, small, cert)
                discarded.append(be)
                if AUDIT.enabled:
                    AUDIT.pruned(verify_boundary(ch, be, eps), be)
                continue
            keep.append((lo, hi, c, vlo, vhi, vc, d, vd))
        arcs = ArcSet(Arc(t[0], t[1]) for t in keep)
        if record_levels:
            levels[level] = (arcs, _kept(points, keep))
        if partial or level == depth:
            live = keep
            break
        live = []
        for lo, hi, c, vlo, vhi, vc, d, vd in keep:
            points[d] = end_test_value(vd, kappa, eps)
            live.append((lo, d, hi, vlo, vd, vhi))
            live.append((d, hi, lo, vd, vhi, vlo))
    arcs = ArcSet(Arc(t[0], t[1]) for t in live)
    return ArcCover(depth, arcs, _kept(points, live), partial, discarded, levels)


def full_cover(depth: int) -> ArcCover:
    return ArcCover(depth, ArcSet([Arc.full()]), [])


def point_cover(depth: int, s: Slope) -> ArcCover:
    return ArcCover(depth, ArcSet(), [s])


# --- hull -------------------------------------------------------------------


@dataclass(frozen=True)
class InHull:
    edge: FareyPair
    status = "in_hull"


@dataclass(frozen=True)
class DirectedToward:
    direction: DirectedFareyEdge
    certificate: Satisfied
    status = "directed_toward"


@dataclass(frozen=True)
class Unknown:
    edge: FareyPair
    reason: str
    status = "unknown"


def hull_status(ch: Character, e: FareyPair, budget: int = DEFAULT_MAX_VERTICES, eps: float = EPS):
    """Is e in the hull H, or does d(e) point toward it?"""
    c1, c2 = e.completions()
    v1 = check_bq_tail(ch, e.a, e.b, c1, budget, eps)
    v2 = check_bq_tail(ch, e.a, e.b, c2, budget, eps)
    if isinstance(v1, Violated) and isinstance(v2, Violated):
        return InHull(e)
    if isinstance(v1, Satisfied) and isinstance(v2, Violated):
        return DirectedToward(DirectedFareyEdge(e, c1, c2), v1)
    if isinstance(v2, Satisfied) and isinstance(v1, Violated):
        return DirectedToward(DirectedFareyEdge(e, c2, c1), v2)
    if isinstance(v1, Satisfied) and isinstance(v2, Satisfied):
        return Unknown(e, "both tails satisfy the BQ-conditions")
    return Unknown(e, "budget exhausted")


# --- classification ------------------------------------------------------------


@dataclass(frozen=True)
class Empty:
    certificate: object
    kind = "Empty"


@dataclass(frozen=True)
class SingletonCurve:
    slope: Slope
    certificate: object = None
    kind = "SingletonCurve"


@dataclass(frozen=True)
class SingletonLamination:
    arc: Arc
    mu: float
    arcs: tuple = ()
    kind = "SingletonLamination"


@dataclass(frozen=True)
class CantorLike:
    cover: ArcCover
    witnesses: tuple = ()
    reason: str = ""
    kind = "CantorLike"


@dataclass(frozen=True)
class FullPL:
    reason: str
    kind = "FullPL"


@dataclass(frozen=True)
class Undetermined:
    reason: str
    witnesses: tuple = ()
    kind = "Undetermined"


@dataclass
class Budgets:
    max_vertices: int = CLASSIFY_VERTICES
    depth: int = DEFAULT_DEPTH
    cover_budget: int = DEFAULT_COVER_BUDGET
    tau_budget: int = 10**6
    discrete: bool = False


class ClassificationError(RuntimeError):
    """An outcome contradicts the kappa ranges it is allowed in."""


def reducible_classify(ch: Character, eps: float = EPS, depth: int = 25):
    data = reducible_data(ch, eps)
    if data.dependence == "BothUnit":
        return FullPL("reducible with unit eigenvalues")
    if data.dependence == "Boundary":
        return Undetermined("boundary: eigenvalue modulus within tolerance of 1")
    if data.dependence == "Rational":
        return SingletonCurve(data.slope, data)
    arcs = descent_arcs(data.mu, depth)
    return SingletonLamination(arcs[-1], data.mu, tuple(arcs))


# permitted kappa ranges for real characters, as (lo, lo_closed, hi, hi_closed)
REAL_RANGES = {
    "Empty": [(-math.inf, False, 2.0, False), (18.0, True, math.inf, False)],
    "SingletonCurve": [(6.0, True, math.inf, False)],
    "CantorLike": [(2.0, False, math.inf, False)],
    "FullPL": [(-2.0, True, 2.0, False), (2.0, False, math.inf, False)],
}


def in_real_range(kind: str, k: float, eps: float = EPS) -> bool:
    for lo, lo_c, hi, hi_c in REAL_RANGES.get(kind, [(-math.inf, False, math.inf, False)]):
        tol = eps * (1 + abs(k))
        above = k >= lo - tol if lo_c else k > lo - tol
        below = k <= hi + tol if hi_c else k < hi + tol
        if above and below:
            return True
    return False


def _check_real(result, ch: Character, eps: float):
    if result.kind in REAL_RANGES and not in_real_range(result.kind, ch.kappa.real, eps):
        raise ClassificationError(f"{result.kind} outside its kappa range for {ch} (kappa={ch.kappa})")
    return result


def in_discrete_ring(ch: Character, tol: float = 1e-12) -> bool:
    """All entries in Z[i] or all in the Eisenstein integers."""

    def near_int(t):
        return abs(t - round(t)) <= tol

    vals = ch.triple()
    if all(near_int(v.real) and near_int(v.imag) for v in vals):
        return True
    h = math.sqrt(3) / 2
    for v in vals:
        b = v.imag / h
        if not near_int(b) or not near_int(v.real - b / 2):
            return False
    return True


def _distinct(witnesses):
    seen = {}
    for w in witnesses:
        if w.slope is not None and w.slope not in seen:
            seen[w.slope] = w
    return list(seen.values())


def _collect(ch, budgets, eps, want):
    def stop(res):
        return want(res)

    return explore(ch, budgets.max_vertices, "collect", eps=eps, stop=stop)


def _real_branch(ch: Character, b: Budgets, eps: float):
    kappa = ch.kappa

    def oi_count(res):
        return len([w for w in _distinct(res.witnesses) if w.kind == "OpenInterval"])

    res = _collect(ch, b, eps, lambda r: oi_count(r) >= 2 and bool(r.other_values))
    wits = _distinct(res.witnesses)
    if res.status == "satisfied":
        return Empty(Satisfied(tuple(res.expanded), tuple(res.boundary)))
    if oi_count(res) >= 2 and res.other_values:
        cover = compute_cover(ch, b.depth, b.cover_budget, eps)
        return CantorLike(cover, tuple(wits), "two traces in (-2,2) and one outside")
    if res.status == "violated" and res.frontier == 0 and len(wits) == 1:
        return SingletonCurve(wits[0].slope, tuple(res.boundary))
    return Undetermined(f"real branch: search ended with status {res.status}", tuple(wits))


def _imaginary_branch(ch: Character, b: Budgets, eps: float):
    out = tau_from_character(ch, b.tau_budget, eps)
    if isinstance(out, Attractor):
        return Empty(out)
    res = _collect(ch, b, eps, lambda r: len(_distinct(r.witnesses)) >= 2)
    wits = _distinct(res.witnesses)
    if isinstance(out, EndWitness) and out.slope not in {w.slope for w in wits}:
        wits.append(out)
    if len(wits) >= 2:
        cover = compute_cover(ch, b.depth, b.cover_budget, eps)
        return CantorLike(cover, tuple(wits), "imaginary character with two end invariants")
    if res.status == "violated" and res.frontier == 0 and len(wits) == 1:
        return SingletonCurve(wits[0].slope, tuple(res.boundary))
    return Undetermined(f"imaginary branch: search ended with status {res.status}", tuple(wits))


def _general_branch(ch: Character, b: Budgets, eps: float):
    v = check_bq(ch, b.max_vertices, eps)
    if isinstance(v, Satisfied):
        return Empty(v)
    if not isinstance(v, Violated):
        return Undetermined("general branch: BQ search exhausted")
    if not (b.discrete or in_discrete_ring(ch)):
        return Undetermined("general branch: BQ violated, discreteness not asserted", (v.witness,))
    res = _collect(ch, b, eps, lambda r: len(_distinct(r.witnesses)) >= 3)
    wits = _distinct(res.witnesses)
    if len(wits) >= 3:
        cover = compute_cover(ch, b.depth, b.cover_budget, eps)
        return CantorLike(cover, tuple(wits), "discrete with at least three end invariants")
    return Undetermined("general branch: fewer than three end invariants found", tuple(wits))


def classify(ch: Character, budgets: Budgets | None = None, eps: float = EPS):
    b = budgets or Budgets()
    rep = classify_type(ch, eps)
    if rep.reducible is Tri.YES:
        return reducible_classify(ch, eps)
    real = rep.real is Tri.YES
    if rep.dihedral is Tri.YES:
        res = FullPL("dihedral")
    elif rep.su2 is Tri.YES:
        res = FullPL("SU(2)")
    elif real:
        res = _real_branch(ch, b, eps)
    elif rep.imaginary is Tri.YES and ch.kappa.real < 2 - eps:
        res = _imaginary_branch(ch, b, eps)
    else:
        res = _general_branch(ch, b, eps)
    if real:
        _check_real(res, ch, eps)
    return res


def cover_for(ch: Character, depth: int = DEFAULT_DEPTH, budget: int = DEFAULT_COVER_BUDGET, eps: float = EPS):
    """Cover for any character, routing reducible ones through their end slope."""
    if abs(ch.kappa - 2) <= eps:
        r = reducible_classify(ch, eps, depth)
        if isinstance(r, FullPL):
            return full_cover(depth)
        if isinstance(r, SingletonCurve):
            return point_cover(depth, r.slope)
        if isinstance(r, SingletonLamination):
            return ArcCover(depth, ArcSet([r.arc]), [])
        return full_cover(depth)
    return compute_cover(ch, depth, budget, eps)
