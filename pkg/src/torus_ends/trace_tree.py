"""The Fricke trace map on the Farey tree.

Values propagate through the edge relation z + z' = xy.  Also here: the
neighbour sequences around a region, the flow (arrows from larger to
smaller |trace|) and descent along it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .audit import AUDIT
from .characters import EPS, Character, is_saturated, saturate
from .farey import (
    BASE_TRIPLE,
    INF,
    ONE,
    ZERO,
    DirectedFareyEdge,
    FareyPair,
    FareyTriple,
    Slope,
    farey_path,
    neighbor_base,
    slope_depth,
)


def sat_abs(v: complex) -> float:
    return math.inf if is_saturated(v) else abs(v)


def edge_value(a: complex, b: complex, c: complex) -> complex:
    """Value across the edge (a, b) from the region with value c."""
    if is_saturated(a) or is_saturated(b) or is_saturated(c):
        return complex(math.inf, 0.0)
    return saturate(a * b - c)


def base_values(ch: Character) -> dict[Slope, complex]:
    return {ZERO: ch.x, INF: ch.y, ONE: ch.z}


def trace_at(ch: Character, s: Slope) -> complex:
    """Trace at slope s, by propagating (x, y, z) along the Farey path."""
    vals = base_values(ch)
    if s in vals:
        return vals[s]
    for e in farey_path(s):
        vals[e.to_slope] = edge_value(vals[e.pair.a], vals[e.pair.b], vals[e.from_slope])
    return vals[s]


def traces_at(ch: Character, slopes) -> dict[Slope, complex]:
    """Shared-prefix evaluation for many slopes."""
    vals = base_values(ch)
    for s in slopes:
        if s in vals:
            continue
        for e in farey_path(s):
            if e.to_slope not in vals:
                vals[e.to_slope] = edge_value(
                    vals[e.pair.a], vals[e.pair.b], vals[e.from_slope]
                )
    return {s: vals[s] for s in slopes}


def triple_values(ch: Character, t: FareyTriple) -> tuple[complex, complex, complex]:
    got = traces_at(ch, t.slopes())
    return tuple(got[s] for s in t.slopes())


@dataclass(frozen=True)
class VertexState:
    triple: FareyTriple
    values: tuple
    saturated: tuple = field(default=())

    def __post_init__(self):
        if not self.saturated:
            object.__setattr__(self, "saturated", tuple(is_saturated(v) for v in self.values))

    def residual(self, kappa: complex) -> float:
        x, y, z = self.values
        return abs(x * x + y * y + z * z - x * y * z - 2 - kappa)

    def relation_ok(self, kappa: complex, eps: float = EPS) -> bool:
        if any(self.saturated):
            return True
        m = max(abs(v) for v in self.values)
        # floating point products carry relative error ~1e-16 * m^3
        return self.residual(kappa) <= eps * (1 + m) ** 2 + 1e-14 * (1 + m) ** 3


def vertex_state(ch: Character, t: FareyTriple) -> VertexState:
    return VertexState(t, triple_values(ch, t))


@dataclass(frozen=True)
class EdgeState:
    pair: FareyPair
    x: complex
    y: complex
    z_slope: Slope
    z: complex
    z2_slope: Slope
    z2: complex

    def relation_ok(self, eps: float = EPS) -> bool:
        if any(is_saturated(v) for v in (self.x, self.y, self.z, self.z2)):
            return True
        xy = self.x * self.y
        return abs(self.z + self.z2 - xy) <= eps * (1 + abs(xy))

    def bound_ok(self, eps: float = EPS) -> bool:
        """If both opposite values are bounded by K >= 2 then so is one of x, y."""
        if any(is_saturated(v) for v in (self.z, self.z2)):
            return True
        K = max(2.0, abs(self.z), abs(self.z2))
        return min(sat_abs(self.x), sat_abs(self.y)) <= K + eps * (1 + K)


def edge_state(ch: Character, pair: FareyPair) -> EdgeState:
    c1, c2 = pair.completions()
    got = traces_at(ch, [pair.a, pair.b, c1, c2])
    return EdgeState(pair, got[pair.a], got[pair.b], c1, got[c1], c2, got[c2])


# --- neighbours ---------------------------------------------------------------


def lam_of(x: complex) -> complex:
    """lambda with lambda + 1/lambda = x and |lambda| >= 1."""
    d = cmath.sqrt(x * x - 4)
    l1, l2 = (x + d) / 2, (x - d) / 2
    return l1 if abs(l1) >= abs(l2) else l2


def sqrt_kappa_roots(kappa: complex) -> complex:
    return cmath.sqrt(kappa + 2)


DEGENERATE = 1e-3
CANCEL = 1e-6
DESCENT_RECOMPUTE = 0.5


@dataclass(frozen=True)
class NeighborModel:
    """Closed form for the neighbour values y_n of a region with value x."""

    center: Slope
    x: complex
    lam: complex
    A: complex
    B: complex
    y0: complex
    y1: complex
    case: str
    degenerate: bool

    def value(self, n: int) -> complex:
        if self.degenerate:
            return self.y1 * _cheb(self.x, n) - self.y0 * _cheb(self.x, n - 1)
        return self.A * self.lam**n + self.B * self.lam ** (-n)

    def ab_expected(self, kappa: complex) -> complex | None:
        if abs(self.x * self.x - 4) <= DEGENERATE:
            return None
        return (self.x * self.x - kappa - 2) / (self.x * self.x - 4)


def _cheb(x: complex, n: int) -> complex:
    """S(n) with S(0) = 0, S(1) = 1, S(n+1) = x S(n) - S(n-1)."""
    theta = cmath.acos(x / 2)
    sign = 1
    if abs(theta) > 1.5:
        # near x = -2 work with pi - theta
        theta = math.pi - theta
        sign = -1 if n % 2 == 0 else 1
    s = cmath.sin(theta)
    if abs(theta) < 1e-6:
        val = n * (1 - (n * n - 1) * theta * theta / 6)
    else:
        val = cmath.sin(n * theta) / s
    return sign * val


def case_tag(x: complex, kappa: complex, eps: float = EPS) -> str:
    """Which closed-form case the neighbour sequence of x falls in, priority c, d, e, b, a."""
    if abs(x - 2) <= eps:
        return "c"
    if abs(x + 2) <= eps:
        return "d"
    r = sqrt_kappa_roots(kappa)
    if abs(x - r) <= eps or abs(x + r) <= eps:
        return "e"
    if abs(x.imag) <= eps and abs(x.real) < 2:
        return "b"
    return "a"


def neighbor_model(ch: Character, s: Slope, eps: float = EPS) -> NeighborModel:
    a, u = neighbor_base(s)
    s0 = Slope.from_vector(a)
    s1 = Slope.from_vector((a[0] + u[0], a[1] + u[1]))
    got = traces_at(ch, [s, s0, s1])
    return model_from_values(s, got[s], got[s0], got[s1], ch.kappa, eps)


def model_from_values(s, x, y0, y1, kappa, eps: float = EPS) -> NeighborModel:
    x = complex(x)
    lam = lam_of(x)
    tag = case_tag(x, kappa, eps)
    degenerate = abs(x * x - 4) <= DEGENERATE
    if degenerate:
        A = B = complex("nan")
    else:
        A = (y1 - y0 / lam) / (lam - 1 / lam)
        B = y0 - A
    return NeighborModel(s, x, lam, A, B, complex(y0), complex(y1), tag, degenerate)


def neighbors_of(ch: Character, s: Slope, n_lo: int, n_hi: int, budget: int = 10**6):
    """Values y_n for n_lo <= n <= n_hi, with the neighbour model."""
    if n_hi < n_lo:
        raise ValueError("empty index range")
    if n_hi - n_lo > budget:
        raise ValueError("index range exceeds budget")
    m = neighbor_model(ch, s)
    x = m.x
    vals = {}
    if n_hi >= 0:
        fwd = _kernels.recurrence(x, m.y0, m.y1, n_hi + 1)
        for n in range(max(n_lo, 0), n_hi + 1):
            vals[n] = complex(fwd[n])
    if n_lo < 0:
        # backwards: y_{n-1} = x y_n - y_{n+1}
        back = _kernels.recurrence(x, m.y0, x * m.y0 - m.y1, -n_lo + 1)
        for k in range(1, -n_lo + 1):
            if -k <= n_hi:
                vals[-k] = complex(back[k])
    return [vals[n] for n in range(n_lo, n_hi + 1)], m


# --- flow ---------------------------------------------------------------------


@dataclass(frozen=True)
class FlowArrow:
    edge: FareyPair
    direction: DirectedFareyEdge
    tie: bool


def _toward_key(s: Slope):
    return (slope_depth(s), s.sort_key())


def flow_at(ch: Character, e: FareyPair, eps: float = EPS) -> FlowArrow:
    st = edge_state(ch, e)
    return flow_from_state(st, eps)


def flow_from_state(st: EdgeState, eps: float = EPS) -> FlowArrow:
    m1, m2 = sat_abs(st.z), sat_abs(st.z2)
    tie = (math.isinf(m1) and math.isinf(m2)) or (
        not math.isinf(m1) and not math.isinf(m2) and abs(m1 - m2) <= eps * (1 + max(m1, m2))
    )
    if tie:
        # toward the region of smaller depth, then smaller slope
        if _toward_key(st.z_slope) <= _toward_key(st.z2_slope):
            to, frm = st.z_slope, st.z2_slope
        else:
            to, frm = st.z2_slope, st.z_slope
    elif m1 < m2:
        to, frm = st.z_slope, st.z2_slope
    else:
        to, frm = st.z2_slope, st.z_slope
    return FlowArrow(st.pair, DirectedFareyEdge(st.pair, frm, to), tie)


@dataclass(frozen=True)
class Sink:
    state: VertexState
    path: tuple


@dataclass(frozen=True)
class SmallRegion:
    slope: Slope
    value: complex
    path: tuple


@dataclass(frozen=True)
class FlowExhausted:
    path: tuple


def check_vertex_arrows(ch: Character, t: FareyTriple, values, eps: float = EPS):
    """Outward arrows at vertex t; records structural checks in the audit."""
    out = []
    for (pair, opp), v_opp in zip(t.edges(), (values[2], values[0], values[1])):
        va = values[t.slopes().index(pair.a)]
        vb = values[t.slopes().index(pair.b)]
        far_slope = (set(pair.completions()) - {opp}).pop()
        v_far = edge_value(va, vb, v_opp)
        if not is_saturated(v_far) and abs(v_far) <= CANCEL * abs(va * vb):
            # heavy cancellation walking back toward the base: recompute outward
            v_far = trace_at(ch, far_slope)
        st = EdgeState(pair, va, vb, opp, v_opp, far_slope, v_far)
        AUDIT.edge(st)
        arrow = flow_from_state(st, eps)
        if arrow.direction.to_slope == far_slope:
            out.append((pair, opp, far_slope, v_far, arrow))
    AUDIT.vertex(t, values, [o[0] for o in out])
    return out


def descend_flow(ch: Character, start: FareyTriple = BASE_TRIPLE, budget: int = 10**4, eps: float = EPS):
    """Follow flow arrows out of the current vertex until a sink or a small region."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    t = start
    values = list(triple_values(ch, t))
    path = [t]
    for _ in range(budget):
        AUDIT.vertex_relation(VertexState(t, tuple(values)), ch.kappa)
        for s, v in zip(t.slopes(), values):
            if sat_abs(v) <= 2:
                return SmallRegion(s, v, tuple(path))
        outs = check_vertex_arrows(ch, t, values, eps)
        if not outs:
            return Sink(VertexState(t, tuple(values)), tuple(path))
        pair, opp, far, v_far, _ = min(outs, key=lambda o: (sat_abs(o[3]), o[2].sort_key()))
        va, vb = values[t.slopes().index(pair.a)], values[t.slopes().index(pair.b)]
        if not is_saturated(v_far) and abs(v_far) < DESCENT_RECOMPUTE * abs(va * vb):
            # walking inward the relative error grows by |va vb / v_far| per step
            v_far = trace_at(ch, far)
        nt = FareyTriple(pair.a, pair.b, far)
        vals = {pair.a: va, pair.b: vb, far: v_far}
        t = nt
        values = [vals[s] for s in t.slopes()]
        path.append(t)
    return FlowExhausted(tuple(path))
