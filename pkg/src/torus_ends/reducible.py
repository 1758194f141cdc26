"""Reducible characters (kappa = 2).

The representation is diagonal: A ~ diag(xi, 1/xi), B ~ diag(eta, 1/eta),
so the slope p/q (class q[X] + p[Y]) has trace xi^q eta^p + xi^-q eta^-p.
A class stays bounded exactly when q log|xi| + p log|eta| stays bounded,
which pins the unique end at slope -log|xi| / log|eta|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .characters import EPS, Character, unit_root
from .farey import INF, ZERO, Arc, Slope, mediant

UNIT_TOL = 1e-12
ILL_TOL = 1e-6
MAX_DEN = 1000


@dataclass(frozen=True)
class ReducibleData:
    xi: complex
    eta: complex  # branch chosen so that xi*eta + 1/(xi*eta) = z
    log_moduli: tuple  # (log|alpha|, log|beta|) with alpha = xi^2, beta = eta^2
    dependence: str  # BothUnit, Rational, Irrational, Boundary
    slope: Slope | None = None
    mu: float | None = None

    def trace(self, s: Slope) -> complex:
        """Trace of the class q[X] + p[Y] in the diagonal model."""
        w = self.xi**s.q * self.eta**s.p
        return w + 1 / w


class ReducibleError(ValueError):
    pass


def reducible_data(ch: Character, eps: float = EPS) -> ReducibleData:
    if abs(ch.kappa - 2) > eps:
        raise ReducibleError("character is not reducible")
    xi = unit_root(ch.x)
    eta = unit_root(ch.y)
    # pick eta or 1/eta to reproduce z
    e1 = abs(xi * eta + 1 / (xi * eta) - ch.z)
    e2 = abs(xi / eta + eta / xi - ch.z)
    if e2 < e1:
        eta = 1 / eta
    la, lb = 2 * math.log(abs(xi)), 2 * math.log(abs(eta))
    ua, ub = abs(abs(xi) - 1), abs(abs(eta) - 1)
    if (UNIT_TOL < ua <= ILL_TOL) or (UNIT_TOL < ub <= ILL_TOL):
        return ReducibleData(xi, eta, (la, lb), "Boundary")
    if ua <= UNIT_TOL and ub <= UNIT_TOL:
        return ReducibleData(xi, eta, (la, lb), "BothUnit")
    if ua <= UNIT_TOL:
        return ReducibleData(xi, eta, (la, lb), "Rational", ZERO)
    if ub <= UNIT_TOL:
        return ReducibleData(xi, eta, (la, lb), "Rational", INF)
    mu = -la / lb
    frac = Fraction(mu).limit_denominator(MAX_DEN)
    if abs(mu - float(frac)) <= eps * (1 + abs(mu)):
        return ReducibleData(xi, eta, (la, lb), "Rational", Slope.make(frac.numerator, frac.denominator), mu)
    return ReducibleData(xi, eta, (la, lb), "Irrational", None, mu)


def descent_arcs(mu: float, depth: int) -> list[Arc]:
    """Nested Farey arcs [lo, hi] around the real number mu, one per level."""
    neg = mu < 0
    t = -mu if neg else mu
    arcs = []
    if t < 1:
        lo, hi = ZERO, Slope(1, 1)
    else:
        lo, hi = Slope(1, 1), INF
    for _ in range(depth):
        arcs.append(_signed_arc(lo, hi, neg))
        m = mediant(lo, hi)
        if t < float(m):
            hi = m
        else:
            lo = m
    arcs.append(_signed_arc(lo, hi, neg))
    return arcs


def _signed_arc(lo: Slope, hi: Slope, neg: bool) -> Arc:
    if not neg:
        return Arc(lo, hi)
    return Arc(hi.negate(), lo.negate())
