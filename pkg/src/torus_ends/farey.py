"""Exact combinatorics of the Farey tessellation and its dual trivalent tree.

Slopes are extended rationals p/q with arbitrary precision integers.  A slope
p/q names the simple closed curve in homology class q[X] + p[Y], so that
0/1 <-> X, 1/0 <-> Y and 1/1 <-> XY.

The boundary circle is the extended real line with the anticlockwise
(positive) direction given by increasing t.  Arcs are closed and run
anticlockwise from ``lo`` to ``hi``.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator


class FareyError(ValueError):
    pass


@dataclass(frozen=True, order=False)
class Slope:
    """Canonical extended rational p/q (q >= 0, gcd 1, infinity is 1/0)."""

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if q < 0 or (p, q) == (0, 0) or math.gcd(p, q) != 1 or (q == 0 and p != 1):
            raise FareyError(f"non-canonical slope {p}/{q}; use Slope.make")

    @classmethod
    def make(cls, p: int, q: int = 1) -> "Slope":
        p, q = int(p), int(q)
        if p == 0 and q == 0:
            raise FareyError("0/0 is not a slope")
        if q == 0:
            return cls(1, 0)
        g = math.gcd(p, q)
        p, q = p // g, q // g
        if q < 0:
            p, q = -p, -q
        return cls(p, q)

    @classmethod
    def from_vector(cls, v: tuple[int, int]) -> "Slope":
        return cls.make(v[0], v[1])

    @classmethod
    def parse(cls, text: str) -> "Slope":
        return parse_slope(text)

    @property
    def is_infinite(self) -> bool:
        return self.q == 0

    @property
    def vector(self) -> tuple[int, int]:
        return (self.p, self.q)

    def fraction(self) -> Fraction:
        if self.q == 0:
            raise FareyError("1/0 has no finite value")
        return Fraction(self.p, self.q)

    def __float__(self) -> float:
        return math.inf if self.q == 0 else self.p / self.q

    def sort_key(self):
        """Linear order on the extended reals with 1/0 last."""
        return (1, 0) if self.q == 0 else (0, Fraction(self.p, self.q))

    def circle_key(self):
        """Anticlockwise position starting at 0/1: [0, inf) then inf then (-inf, 0)."""
        if self.q == 0:
            return (1, Fraction(0))
        f = Fraction(self.p, self.q)
        return (0, f) if f >= 0 else (2, f)

    def angle(self) -> float:
        """Chart t -> 2 arctan(t), with 1/0 -> pi."""
        return 2.0 * math.atan2(self.p, self.q)

    def negate(self) -> "Slope":
        return self if self.q == 0 else Slope.make(-self.p, self.q)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"

    def __repr__(self) -> str:
        return f"Slope({self.p}/{self.q})"


ZERO = Slope(0, 1)
INF = Slope(1, 0)
ONE = Slope(1, 1)
BASE_SLOPES = (ZERO, INF, ONE)

_SLOPE_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_slope(text: str) -> Slope:
    """Parse ``"p/q"``, ``"p"`` (q = 1) or ``"inf"``."""
    t = text.strip()
    if t.lower() in ("inf", "infinity", "oo", "-inf"):
        return INF
    m = _SLOPE_RE.match(t)
    if not m:
        raise FareyError(f"malformed slope literal {text!r}")
    p = int(m.group(1))
    q = int(m.group(2)) if m.group(2) is not None else 1
    return Slope.make(p, q)


def det(a: Slope, b: Slope) -> int:
    return a.p * b.q - b.p * a.q


def is_adjacent(a: Slope, b: Slope) -> bool:
    return abs(det(a, b)) == 1


def mediant(a: Slope, b: Slope) -> Slope:
    """(a.p + b.p)/(a.q + b.q); the inputs must be Farey neighbours."""
    if not is_adjacent(a, b):
        raise FareyError(f"{a} and {b} are not Farey neighbours")
    return Slope.make(a.p + b.p, a.q + b.q)


def completions(a: Slope, b: Slope) -> tuple[Slope, Slope]:
    """The two slopes forming a Farey triangle with the edge (a, b)."""
    if not is_adjacent(a, b):
        raise FareyError(f"{a} and {b} are not Farey neighbours")
    return (Slope.make(a.p + b.p, a.q + b.q), Slope.make(a.p - b.p, a.q - b.q))


def other_completion(a: Slope, b: Slope, c: Slope) -> Slope:
    """Given triangle (a, b, c), the vertex across the edge (a, b)."""
    u, v = completions(a, b)
    if u == c:
        return v
    if v == c:
        return u
    raise FareyError(f"({a}, {b}, {c}) is not a Farey triangle")


class ColorClass(enum.Enum):
    R = "R"
    G = "G"
    B = "B"


def color_of(s: Slope) -> ColorClass:
    par = (s.p % 2, s.q % 2)
    if par == (1, 1):
        return ColorClass.R
    if par == (0, 1):
        return ColorClass.B
    return ColorClass.G


@dataclass(frozen=True)
class FareyPair:
    """Unordered Farey edge; stored with ``a`` before ``b`` in sort order."""

    a: Slope
    b: Slope

    def __post_init__(self):
        if not is_adjacent(self.a, self.b):
            raise FareyError(f"({self.a}, {self.b}) is not a Farey pair")
        if self.b.sort_key() < self.a.sort_key():
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)

    def slopes(self) -> tuple[Slope, Slope]:
        return (self.a, self.b)

    def completions(self) -> tuple[Slope, Slope]:
        return completions(self.a, self.b)

    def color(self) -> ColorClass:
        """Class of the edge: the colour absent from its two slopes."""
        present = {color_of(self.a), color_of(self.b)}
        (missing,) = set(ColorClass) - present
        return missing

    def __str__(self):
        return f"({self.a},{self.b})"


@dataclass(frozen=True)
class FareyTriple:
    """Farey triangle; canonical clockwise order starting at the smallest slope."""

    a: Slope
    b: Slope
    c: Slope

    def __post_init__(self):
        s = sorted((self.a, self.b, self.c), key=Slope.sort_key)
        if not (is_adjacent(s[0], s[1]) and is_adjacent(s[1], s[2]) and is_adjacent(s[0], s[2])):
            raise FareyError(f"({self.a}, {self.b}, {self.c}) is not a Farey triangle")
        # increasing order is anticlockwise, so clockwise from s[0] is s[0], s[2], s[1]
        object.__setattr__(self, "a", s[0])
        object.__setattr__(self, "b", s[2])
        object.__setattr__(self, "c", s[1])

    def slopes(self) -> tuple[Slope, Slope, Slope]:
        return (self.a, self.b, self.c)

    def edges(self) -> list[tuple[FareyPair, Slope]]:
        """The three edges, each with the vertex of this triangle opposite it."""
        a, b, c = self.slopes()
        return [(FareyPair(a, b), c), (FareyPair(b, c), a), (FareyPair(c, a), b)]

    def across(self, pair: FareyPair) -> "FareyTriple":
        (third,) = set(self.slopes()) - {pair.a, pair.b}
        return FareyTriple(pair.a, pair.b, other_completion(pair.a, pair.b, third))

    def neighbors(self) -> list[tuple[FareyPair, "FareyTriple"]]:
        return [(e, self.across(e)) for e, _ in self.edges()]

    def colors(self) -> dict[ColorClass, Slope]:
        return {color_of(s): s for s in self.slopes()}

    def depth(self) -> int:
        return max(slope_depth(s) for s in self.slopes())

    def __str__(self):
        return f"({self.a},{self.b},{self.c})"


BASE_TRIPLE = FareyTriple(ZERO, INF, ONE)


@dataclass(frozen=True)
class DirectedFareyEdge:
    """Edge of the dual tree directed from the ``from_slope`` side to the ``to_slope`` side.

    The tail is the closed arc between the pair's slopes that contains
    ``from_slope``.
    """

    pair: FareyPair
    from_slope: Slope
    to_slope: Slope

    def __post_init__(self):
        if set(self.pair.completions()) != {self.from_slope, self.to_slope}:
            raise FareyError(
                f"{self.from_slope}->{self.to_slope} are not the completions of {self.pair}"
            )

    def reversed(self) -> "DirectedFareyEdge":
        return DirectedFareyEdge(self.pair, self.to_slope, self.from_slope)

    def ordered(self) -> tuple[Slope, Slope]:
        """(X, Y) with X, Y, from_slope in clockwise order."""
        a, b = self.pair.a, self.pair.b
        if Arc(a, b).contains(self.from_slope):
            return (a, b)
        return (b, a)

    def tail_arc(self) -> "Arc":
        x, y = self.ordered()
        return Arc(x, y)

    def head_arc(self) -> "Arc":
        x, y = self.ordered()
        return Arc(y, x)

    def tail_triple(self) -> FareyTriple:
        return FareyTriple(self.pair.a, self.pair.b, self.from_slope)

    def head_triple(self) -> FareyTriple:
        return FareyTriple(self.pair.a, self.pair.b, self.to_slope)

    def __str__(self):
        return f"{self.pair}:{self.from_slope}->{self.to_slope}"


def _sb_descent(s: Slope) -> list[DirectedFareyEdge]:
    """Stern-Brocot descent for 0 < s < inf, s != 1."""
    f = s.fraction()
    if f < 1:
        lo, hi, third = ZERO, ONE, INF
    else:
        lo, hi, third = ONE, INF, ZERO
    path = []
    while True:
        med = mediant(lo, hi)
        path.append(DirectedFareyEdge(FareyPair(lo, hi), third, med))
        if med == s:
            return path
        if f < med.fraction():
            lo, hi, third = lo, med, hi
        else:
            lo, hi, third = med, hi, lo


def farey_path(s: Slope) -> list[DirectedFareyEdge]:
    """Minimal dual-tree path from the base triangle (0/1, 1/0, 1/1) to a triangle at ``s``."""
    if s in BASE_SLOPES:
        return []
    if s.p > 0:
        return _sb_descent(s)
    first = DirectedFareyEdge(FareyPair(ZERO, INF), ONE, Slope(-1, 1))
    if s == Slope(-1, 1):
        return [first]
    mirrored = []
    for e in _sb_descent(s.negate()):
        mirrored.append(
            DirectedFareyEdge(
                FareyPair(e.pair.a.negate(), e.pair.b.negate()),
                e.from_slope.negate(),
                e.to_slope.negate(),
            )
        )
    # the mirrored descent starts in (0, -1, inf), which is the head of `first`
    return [first] + mirrored


def slope_depth(s: Slope) -> int:
    return len(farey_path(s))


def slope_from_path(path: list[DirectedFareyEdge]) -> Slope | None:
    return path[-1].to_slope if path else None


def parents(s: Slope) -> tuple[Slope, Slope]:
    """The two Farey neighbours of ``s`` on the base side (the last edge crossed)."""
    path = farey_path(s)
    if not path:
        raise FareyError(f"{s} is a base slope")
    e = path[-1]
    return (e.pair.a, e.pair.b)


def neighbor_base(s: Slope) -> tuple[tuple[int, int], tuple[int, int]]:
    """Vectors (a, u) with Y_n = a + n*u the consecutive neighbours of ``s``.

    Y_0 is a parent of ``s`` (for base slopes: 0/1 -> 1/0, 1/0 -> 0/1,
    1/1 -> 0/1) and Y_{-1} is the other one, so (s, Y_n, Y_{n+1}) is always a
    Farey triangle.
    """
    if s == ZERO:
        return INF.vector, s.vector
    if s == INF:
        return ZERO.vector, s.vector
    if s == ONE:
        return ZERO.vector, s.vector
    a, b = parents(s)
    av, u = a.vector, s.vector
    if Slope.from_vector((av[0] + u[0], av[1] + u[1])) == b:
        u = (-u[0], -u[1])
    return av, u


def neighbor_slope(s: Slope, n: int) -> Slope:
    a, u = neighbor_base(s)
    return Slope.from_vector((a[0] + n * u[0], a[1] + n * u[1]))


def iter_triples(depth: int) -> Iterator[tuple[int, FareyTriple]]:
    """Breadth-first dual-tree vertices within ``depth`` edges of the base."""
    seen = {BASE_TRIPLE}
    frontier = [BASE_TRIPLE]
    yield 0, BASE_TRIPLE
    for d in range(1, depth + 1):
        nxt = []
        for t in frontier:
            for _, u in t.neighbors():
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
                    yield d, u
        frontier = nxt


# --- arcs on the boundary circle -------------------------------------------

_TWO_PI = 2.0 * math.pi


def _turn(a: Slope, b: Slope) -> float:
    """Anticlockwise angle from a to b in the doubled chart, in [0, 2 pi)."""
    cross = a.q * b.p - a.p * b.q
    dot = a.q * b.q + a.p * b.p
    ang = math.atan2(cross, dot)
    if ang < 0:
        ang += math.pi
    if ang >= math.pi:
        ang -= math.pi
    return 2.0 * ang


@dataclass(frozen=True)
class Arc:
    """Closed anticlockwise arc [lo, hi]; lo == hi denotes the full circle."""

    lo: Slope
    hi: Slope

    @classmethod
    def full(cls) -> "Arc":
        return cls(ZERO, ZERO)

    @property
    def is_full(self) -> bool:
        return self.lo == self.hi

    def contains(self, s: Slope) -> bool:
        if self.is_full:
            return True
        lo, hi, k = self.lo.circle_key(), self.hi.circle_key(), s.circle_key()
        if lo <= hi:
            return lo <= k <= hi
        return k >= lo or k <= hi

    def contains_arc(self, other: "Arc") -> bool:
        if self.is_full:
            return True
        if other.is_full:
            return False
        if not (self.contains(other.lo) and self.contains(other.hi)):
            return False
        # other must not wrap past hi: walking from lo, other.lo comes before other.hi
        return _turn(self.lo, other.lo) <= _turn(self.lo, other.hi)

    def measure(self) -> float:
        return arc_measure(self)

    def midpoint_value(self) -> float:
        """Midpoint in the angular chart, reported as a real slope value."""
        if self.is_full:
            return 0.0
        theta = self.lo.angle() + 0.5 * _turn(self.lo, self.hi)
        return math.tan(theta / 2.0)

    def __str__(self):
        return f"[{self.lo},{self.hi}]"


def arc_measure(a: Arc) -> float:
    if a.is_full:
        return _TWO_PI
    return _turn(a.lo, a.hi)


def parse_arc(text: str) -> Arc:
    t = text.strip()
    if not (t.startswith("[") and t.endswith("]")):
        raise FareyError(f"malformed arc literal {text!r}")
    parts = t[1:-1].split(",")
    if len(parts) != 2:
        raise FareyError(f"malformed arc literal {text!r}")
    return Arc(parse_slope(parts[0]), parse_slope(parts[1]))


# positions on the circle cut open at 0/1; the seam point 0/1 approached from
# below gets the sentinel key _END
_END = (3, Fraction(0))


class ArcSet:
    """Finite union of closed arcs in canonical form (merged, disjoint, sorted)."""

    __slots__ = ("arcs",)

    def __init__(self, arcs: Iterable[Arc] = ()):
        self.arcs: tuple[Arc, ...] = tuple(_canonicalize(list(arcs)))

    def __iter__(self):
        return iter(self.arcs)

    def __len__(self):
        return len(self.arcs)

    def __eq__(self, other):
        return isinstance(other, ArcSet) and self.arcs == other.arcs

    def __hash__(self):
        return hash(self.arcs)

    def __repr__(self):
        return "ArcSet(" + ", ".join(str(a) for a in self.arcs) + ")"

    def measure(self) -> float:
        return sum(arc_measure(a) for a in self.arcs)

    def contains(self, s: Slope) -> bool:
        return any(a.contains(s) for a in self.arcs)

    def contains_arc(self, arc: Arc) -> bool:
        return any(a.contains_arc(arc) for a in self.arcs)

    def is_full(self) -> bool:
        return len(self.arcs) == 1 and self.arcs[0].is_full


def _canonicalize(arcs: list[Arc]) -> list[Arc]:
    if not arcs:
        return []
    if any(a.is_full for a in arcs):
        return [Arc.full()]
    # cut every arc at the seam 0/1 into linear pieces (start_key, end_key, lo, hi)
    pieces = []
    for a in arcs:
        lo, hi = a.lo.circle_key(), a.hi.circle_key()
        if hi == (0, Fraction(0)) and lo != hi:
            hi = _END
        if lo <= hi:
            pieces.append((lo, hi, a.lo, a.hi))
        else:
            pieces.append((lo, _END, a.lo, ZERO))
            pieces.append(((0, Fraction(0)), hi, ZERO, a.hi))
    pieces.sort(key=lambda t: (t[0], t[1]))
    merged = [list(pieces[0])]
    for lo, hi, slo, shi in pieces[1:]:
        cur = merged[-1]
        if lo <= cur[1]:
            if hi > cur[1]:
                cur[1], cur[3] = hi, shi
        else:
            merged.append([lo, hi, slo, shi])
    if len(merged) == 1 and merged[0][0] == (0, Fraction(0)) and merged[0][1] == _END:
        return [Arc.full()]
    # re-join the piece ending at the seam with the one starting there
    if len(merged) > 1 and merged[0][0] == (0, Fraction(0)) and merged[-1][1] == _END:
        first = merged.pop(0)
        last = merged.pop()
        merged.append([last[0], first[1], last[2], first[3]])
        merged.sort(key=lambda t: t[0])
    return [Arc(m[2], m[3]) for m in merged]
