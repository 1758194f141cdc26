"""tau-reduction for imaginary characters with kappa < 2.

After normalization the real traces sit on the R class (slope 1/1 at the
base) and the two other classes carry i * real.  We work with real
coordinates throughout: w for an R region, w = trace / i otherwise, so that
the edge relations read

    z + z' = -xy,   y + y' = xz,   x + x' = yz.

The algorithm walks the boundary of an R region Z to the vertex where the
neighbour values change sign, flips across the R-class edge there, and
repeats until it reaches an attractor or a region whose trace lies in
(-2, 2).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import _kernels
from .characters import EPS, Character, apply_word, classify_type, imaginary_normal_form, slope_pullback
from .farey import (
    BASE_TRIPLE,
    ColorClass,
    FareyPair,
    FareyTriple,
    Slope,
    color_of,
    is_adjacent,
    other_completion,
)
from .trace_tree import trace_at, traces_at

WALK_WINDOW = 10**4


class TauError(ValueError):
    pass


@dataclass(frozen=True)
class ImaginaryForm:
    """Normalized character (i x, i y, z) with the word taking the input to it."""

    original: Character
    character: Character
    word: tuple

    @classmethod
    def from_character(cls, ch: Character, eps: float = EPS) -> "ImaginaryForm":
        rep = classify_type(ch, eps)
        if rep.dihedral.value == "yes":
            raise TauError("dihedral characters are not imaginary")
        nf = imaginary_normal_form(ch, eps)
        if nf is None:
            raise TauError("character is not imaginary")
        word, nc = nf
        return cls(ch, nc, word)

    @property
    def x(self) -> float:
        return self.character.x.imag

    @property
    def y(self) -> float:
        return self.character.y.imag

    @property
    def z(self) -> float:
        return self.character.z.real

    @property
    def kappa(self) -> float:
        return self.character.kappa.real

    def residual(self) -> float:
        x, y, z = self.x, self.y, self.z
        return abs(-x * x - y * y + z * z + x * y * z - 2 - self.kappa)

    def coord(self, s: Slope, trace: complex | None = None) -> float:
        """Real coordinate of the region s."""
        if trace is None:
            trace = trace_at(self.character, s)
        return trace.real if color_of(s) is ColorClass.R else trace.imag

    def original_slope(self, s: Slope) -> Slope:
        return slope_pullback(self.word, s)

    def original_trace(self, s: Slope) -> complex:
        return trace_at(self.original, self.original_slope(s))


def tau_of_edge(form: ImaginaryForm, e: FareyPair) -> float:
    """tau(e) = -z z' for an edge whose two flanking regions are not R."""
    if e.color() is not ColorClass.R:
        raise TauError(f"edge {e} is not in the R class")
    z1, z2 = e.completions()
    got = traces_at(form.character, [z1, z2])
    return -form.coord(z1, got[z1]) * form.coord(z2, got[z2])


@dataclass(frozen=True)
class TauState:
    vertex: FareyTriple
    z_k: float
    kind: str  # Start, WalkAlongBoundary, Flip
    steps: int = 0

    def line(self) -> str:
        return f"{self.vertex} {self.z_k!r} {self.kind} {self.steps}"


@dataclass(frozen=True)
class Attractor:
    vertex: FareyTriple  # in the input's slope coordinates
    certificate: dict
    states: tuple = ()

    outcome = "attractor"


@dataclass(frozen=True)
class EndWitness:
    slope: Slope  # in the input's slope coordinates
    value: complex
    states: tuple = ()

    outcome = "end_witness"


@dataclass(frozen=True)
class TauExhausted:
    states: tuple
    reason: str = "budget"

    outcome = "exhausted"


@dataclass
class _Run:
    form: ImaginaryForm
    eps: float
    budget: int
    used: int = 0
    states: list = field(default_factory=list)
    visited: set = field(default_factory=set)
    flips: list = field(default_factory=list)
    sign_word: list = field(default_factory=list)

    def spend(self, n: int) -> bool:
        self.used += n
        return self.used <= self.budget

    def visit(self, t: FareyTriple):
        if t in self.visited:
            raise TauError(f"tau-reduction revisited vertex {t}")
        self.visited.add(t)


def _map_triple(form: ImaginaryForm, t: FareyTriple) -> FareyTriple:
    return FareyTriple(*(form.original_slope(s) for s in t.slopes()))


def _witness(run: _Run, s: Slope):
    form = run.form
    return EndWitness(form.original_slope(s), form.original_trace(s), tuple(run.states))


def _attractor(run: _Run, t: FareyTriple, cert: dict):
    return Attractor(_map_triple(run.form, t), cert, tuple(run.states))


def _split(t: FareyTriple):
    """(Z, X, Y) with Z the R region of t."""
    by = t.colors()
    return by[ColorClass.R], by[ColorClass.B], by[ColorClass.G]


def tau_reduce(form: ImaginaryForm, start: FareyTriple = BASE_TRIPLE, budget: int = 10**6,
               eps: float = EPS, window: int = WALK_WINDOW):
    """Run tau-reduction from ``start`` (normalized slope coordinates)."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if form.kappa >= 2 - eps:
        raise TauError("tau-reduction needs kappa < 2")
    run = _Run(form, eps, budget)
    Z, X, Y = _split(start)
    got = traces_at(form.character, [Z, X, Y])
    z, x, y = (form.coord(s, got[s]) for s in (Z, X, Y))
    run.visit(start)
    run.states.append(TauState(start, z, "Start"))

    def in_open(v):
        return abs(v) < 2 - eps

    if abs(x) <= eps:
        return _witness(run, X)
    if abs(y) <= eps:
        return _witness(run, Y)
    if in_open(z):
        return _witness(run, Z)
    Z2 = other_completion(X, Y, Z)
    z2 = -x * y - z
    if abs(z2) >= 2 - eps and z * z2 > 0:
        cert = {"z": z, "z_prime": z2, "tau": -z * z2}
        if abs(z) <= abs(z2):
            return _attractor(run, start, cert)
        v1 = FareyTriple(X, Y, Z2)
        run.visit(v1)
        run.states.append(TauState(v1, z2, "Flip"))
        return _attractor(run, v1, cert)

    # inductive step; sign tracks the R-class sign change applied so far
    while True:
        if z < 0:
            # sign change on the R and G classes keeps the relations
            z, y = -z, -y
            run.sign_word.append("RG")
        # consecutive neighbours of Z: W_j = X + j*u with W_1 = Y
        xv, zv = X.vector, Z.vector
        u = zv
        if Slope.from_vector((xv[0] + u[0], xv[1] + u[1])) != Y:
            u = (-u[0], -u[1])
        if Slope.from_vector((xv[0] + u[0], xv[1] + u[1])) != Y:
            raise TauError("X, Y are not consecutive neighbours of Z")

        def W(j):
            return Slope.from_vector((xv[0] + j * u[0], xv[1] + j * u[1]))

        a0, a1 = x, y
        if a0 * a1 < 0 and abs(a0) > eps and abs(a1) > eps:
            j, kind, a, b = 0, 0, a0, a1
            forward = True
        else:
            forward = abs(a1) <= abs(a0)
            if forward:
                j, kind, a, b = _kernels.walk_to_sign_change(z, a0, a1, window, eps)
            else:
                # walking backwards: W_1, W_0, W_-1, ...
                j, kind, a, b = _kernels.walk_to_sign_change(z, a1, a0, window, eps)
        if kind == -1:
            run.states.append(TauState(FareyTriple(Z, X, Y), z, "WalkAlongBoundary", window))
            return TauExhausted(tuple(run.states), "walk window")
        if not run.spend(j + 1):
            return TauExhausted(tuple(run.states))
        steps = j
        if forward:
            path = [(W(i), W(i + 1)) for i in range(1, j + 1)] if steps < 2000 else []
        else:
            path = [(W(-i), W(-i + 1)) for i in range(1, j + 1)] if steps < 2000 else []
        for p, q in path:
            run.visit(FareyTriple(Z, p, q))
        if kind == 1:
            # the walk hit a zero region: W_j forward, W_{1-j} backward
            zero = W(j) if forward else W(1 - j)
            t_end = FareyTriple(Z, W(j), W(j + 1)) if forward else FareyTriple(Z, W(-j), W(1 - j))
            run.states.append(TauState(t_end, z, "WalkAlongBoundary", steps))
            return _witness(run, zero)
        if forward:
            P, Q = W(j), W(j + 1)
        else:
            P, Q = W(-j), W(1 - j)
        vmin = FareyTriple(Z, P, Q)
        run.states.append(TauState(vmin, z, "WalkAlongBoundary", steps))
        z2 = -a * b - z
        Z2 = other_completion(P, Q, Z)
        cert = {"z": z, "z_prime": z2, "tau": -z * z2}
        if z2 >= z - eps:
            return _attractor(run, vmin, cert)
        if not run.spend(1):
            return TauExhausted(tuple(run.states))
        v1 = FareyTriple(P, Q, Z2)
        run.visit(v1)
        run.states.append(TauState(v1, z2, "Flip"))
        run.flips.append((z, z2))
        if z2 >= 2 - eps:
            return _attractor(run, v1, cert)
        if abs(z2) < 2 - eps:
            return _witness(run, Z2)
        # z2 <= -2: recurse around Z2 with the pair (P, Q) in B, G order
        Z = Z2
        z = z2
        if color_of(P) is ColorClass.B:
            X, Y, x, y = P, Q, (a if forward else b), (b if forward else a)
        else:
            X, Y, x, y = Q, P, (b if forward else a), (a if forward else b)


def ellipse_walk(form: ImaginaryForm, Z: Slope, eps: float = EPS, window: int = WALK_WINDOW):
    """Walk the neighbours of an R region with value z0 in (0, 2) to a sign change.

    Returns (P, Q, a, b, Zn, zn): consecutive neighbours P, Q with real
    coordinates a, b of opposite sign (or a zero), and the region Zn across
    the edge (P, Q) with zn = -ab - z0.
    """
    if color_of(Z) is not ColorClass.R:
        raise TauError("ellipse walk needs an R region")
    z0 = form.coord(Z)
    if z0 <= eps:
        raise TauError("z0 = 0: both flanking values vanish")
    if not (z0 < 2 - eps):
        raise TauError("ellipse walk needs 0 < z0 < 2")
    from .farey import neighbor_base

    av, u = neighbor_base(Z)
    P0 = Slope.from_vector(av)
    P1 = Slope.from_vector((av[0] + u[0], av[1] + u[1]))
    got = traces_at(form.character, [P0, P1])
    a0, a1 = form.coord(P0, got[P0]), form.coord(P1, got[P1])
    j, kind, a, b = _kernels.walk_to_sign_change(z0, a0, a1, window, eps)
    if kind == -1:
        raise TauError("ellipse walk exceeded its window")
    P = Slope.from_vector((av[0] + j * u[0], av[1] + j * u[1]))
    Q = Slope.from_vector((av[0] + (j + 1) * u[0], av[1] + (j + 1) * u[1]))
    Zn = other_completion(P, Q, Z)
    return P, Q, a, b, Zn, -a * b - z0


def tau_from_character(ch: Character, budget: int = 10**6, eps: float = EPS):
    return tau_reduce(ImaginaryForm.from_character(ch, eps), BASE_TRIPLE, budget, eps)
