"""Characters of the one-holed torus as complex trace triples.

A character is (x, y, z) = (tr A, tr B, tr AB).  This module holds kappa, the
mapping class group generators c and s, sign changes, the class predicates
and an explicit matrix model used as an independent trace oracle.
"""

from __future__ import annotations

import cmath
import enum
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .farey import INF, ONE, ZERO, Slope, farey_path

EPS = 1e-9
SAT_BOUND = 1e120


class ParseError(ValueError):
    """Malformed literal; ``pos`` is the 0-based column of the problem."""

    def __init__(self, msg: str, text: str = "", pos: int = 0):
        super().__init__(f"{msg} at column {pos}: {text!r}" if text else msg)
        self.text = text
        self.pos = pos


class Tri(enum.Enum):
    YES = "yes"
    NO = "no"
    BOUNDARY = "boundary"

    def __bool__(self):
        return self is Tri.YES


def tri_all(flags) -> Tri:
    flags = list(flags)
    if any(f is Tri.NO for f in flags):
        return Tri.NO
    if any(f is Tri.BOUNDARY for f in flags):
        return Tri.BOUNDARY
    return Tri.YES


def tri_le(a: float, b: float, eps: float) -> Tri:
    """a <= b with an eps band around equality reported as BOUNDARY."""
    if a < b - eps:
        return Tri.YES
    if a > b + eps:
        return Tri.NO
    return Tri.BOUNDARY


def is_saturated(v: complex) -> bool:
    return not cmath.isfinite(v) or abs(v) > SAT_BOUND


def saturate(v: complex) -> complex:
    if is_saturated(v):
        return complex(math.inf, 0.0)
    return v


# --- literals ---------------------------------------------------------------

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(
    rf"^(?P<re>[+-]?{_NUM})?(?:(?P<sign>[+-])?(?P<im>{_NUM})?(?P<i>i))?$"
)


def parse_complex(text: str) -> complex:
    """Parse "a", "bi", "a+bi" or "a-bi" (``i`` alone means 1i)."""
    t = text.strip().replace(" ", "")
    if not t:
        raise ParseError("empty complex literal", text, 0)
    m = _COMPLEX_RE.match(t)
    if not m or (m.group("re") is None and m.group("i") is None):
        # report the first character where a prefix stops parsing
        pos = 0
        for k in range(len(t), 0, -1):
            if _COMPLEX_RE.match(t[:k]) and (t[:k] not in ("+", "-")):
                pos = k
                break
        raise ParseError("malformed complex literal", text, pos)
    re_part = m.group("re")
    if m.group("i") is None:
        return complex(float(re_part), 0.0)
    sign = m.group("sign")
    im_txt = m.group("im")
    if re_part is not None and sign is None and im_txt is None:
        # "3i": the regex assigned the digits to the real group
        return complex(0.0, float(re_part))
    if re_part is not None and sign is None:
        raise ParseError("malformed complex literal", text, len(re_part))
    im = float(im_txt) if im_txt is not None else 1.0
    if sign == "-":
        im = -im
    return complex(float(re_part) if re_part is not None else 0.0, im)


def format_complex(v: complex) -> str:
    return f"{v.real!r}{'+' if v.imag >= 0 or math.isnan(v.imag) else '-'}{abs(v.imag)!r}i"


# --- characters -------------------------------------------------------------


def kappa(x: complex, y: complex, z: complex) -> complex:
    return x * x + y * y + z * z - x * y * z - 2


@dataclass(frozen=True)
class Character:
    x: complex
    y: complex
    z: complex
    kappa: complex = field(init=False, compare=False)

    def __post_init__(self):
        for name in ("x", "y", "z"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        object.__setattr__(self, "kappa", kappa(self.x, self.y, self.z))

    @classmethod
    def parse(cls, text: str) -> "Character":
        parts = text.split(",")
        if len(parts) != 3:
            raise ParseError("character literal needs three comma-separated entries", text, len(text))
        vals = []
        col = 0
        for p in parts:
            try:
                vals.append(parse_complex(p))
            except ParseError as e:
                raise ParseError("malformed complex literal", text, col + e.pos) from None
            col += len(p) + 1
        return cls(*vals)

    def triple(self) -> tuple[complex, complex, complex]:
        return (self.x, self.y, self.z)

    def is_close(self, other: "Character", eps: float = EPS) -> bool:
        return all(abs(a - b) <= eps * (1 + abs(a)) for a, b in zip(self.triple(), other.triple()))

    def __str__(self):
        return ",".join(format_complex(v) for v in self.triple())


def act_c(ch: Character) -> Character:
    """c: (x, y, z) -> (z, x, y)."""
    return Character(ch.z, ch.x, ch.y)


def act_s(ch: Character) -> Character:
    """s: (x, y, z) -> (y, x, xy - z)."""
    return Character(ch.y, ch.x, ch.x * ch.y - ch.z)


_SIGN_PAIRS = {"xy": (-1, -1, 1), "yz": (1, -1, -1), "zx": (-1, 1, -1)}


def sign_change(ch: Character, pair: str) -> Character:
    sx, sy, sz = _SIGN_PAIRS[pair]
    return Character(sx * ch.x, sy * ch.y, sz * ch.z)


GENERATORS = ("c", "s", "xy", "yz", "zx")


def reduce_word(word) -> tuple[list[str], tuple[int, int, int]]:
    """Normal form (c/s word, trailing signs) of a generator word.

    Sign changes are pushed to the end (c and s only permute them, since the
    three signs multiply to 1) and s s, c c c are cancelled.  The composite map
    is unchanged; it just avoids float cancellation on excursions like s..s.
    """
    signs = (1, 1, 1)
    stack: list[str] = []
    for g in word:
        if g in _SIGN_PAIRS:
            signs = tuple(a * b for a, b in zip(signs, _SIGN_PAIRS[g]))
            continue
        sx, sy, sz = signs
        if g == "c":
            signs = (sz, sx, sy)
            if stack[-2:] == ["c", "c"]:
                del stack[-2:]
            else:
                stack.append(g)
        elif g == "s":
            signs = (sy, sx, sz)
            if stack and stack[-1] == "s":
                stack.pop()
            else:
                stack.append(g)
        else:
            raise ValueError(f"unknown generator {g!r}")
    return stack, signs


def apply_word(ch: Character, word) -> Character:
    """Apply generator labels left to right (``c``, ``s`` or a sign-change pair)."""
    stack, (sx, sy, sz) = reduce_word(word)
    for g in stack:
        ch = act_c(ch) if g == "c" else act_s(ch)
    return Character(sx * ch.x, sy * ch.y, sz * ch.z)


# slope maps g with trace_at(gen(ch), t) = trace_at(ch, g(t)), as integer matrices
_SLOPE_MATRIX = {"c": ((0, 1), (-1, 1)), "s": ((0, -1), (1, 0))}


def slope_pullback(word, s: Slope) -> Slope:
    """Slope t' with trace_at(apply_word(ch, word), s) = +-trace_at(ch, t')."""
    p, q = s.p, s.q
    for g in reversed(list(word)):
        if g in _SLOPE_MATRIX:
            (a, b), (c, d) = _SLOPE_MATRIX[g]
            p, q = a * p + b * q, c * p + d * q
    return Slope.make(p, q)


# --- class predicates -------------------------------------------------------


@dataclass(frozen=True)
class ClassReport:
    real: Tri
    imaginary: Tri
    dihedral: Tri
    su2: Tri
    reducible: Tri
    normalization_word: tuple = ()

    def as_dict(self):
        d = {k: getattr(self, k).value for k in ("real", "imaginary", "dihedral", "su2", "reducible")}
        d["normalization_word"] = list(self.normalization_word)
        return d


def _zero(v: complex, eps: float) -> bool:
    return abs(v) <= eps


def _real_flag(v: complex, eps: float) -> Tri:
    return Tri.YES if abs(v.imag) <= eps else Tri.NO


def imaginary_normal_form(ch: Character, eps: float = EPS):
    """Find a word w with apply_word(ch, w) = (i*x, i*y, z), x, y, z real and z >= 0.

    Returns (word, character) or None.
    """
    cur = ch
    word: list[str] = []
    for _ in range(3):
        x, y, z = cur.triple()
        if abs(x.real) <= eps and abs(y.real) <= eps and abs(z.imag) <= eps:
            if z.real < 0:
                word.append("yz")
                cur = sign_change(cur, "yz")
            return tuple(word), cur
        word.append("c")
        cur = act_c(cur)
    return None


def classify_type(ch: Character, eps: float = EPS) -> ClassReport:
    vals = ch.triple()
    k = ch.kappa
    real = tri_all(_real_flag(v, eps) for v in vals)
    n_zero = sum(_zero(v, eps) for v in vals)
    dihedral = Tri.YES if n_zero >= 2 else Tri.NO
    reducible = Tri.YES if abs(k - 2) <= eps else Tri.NO
    if real is Tri.YES:
        su2 = tri_all(
            [tri_le(abs(v.real), 2.0, eps) for v in vals] + [tri_le(k.real, 2.0, eps)]
        )
        # closed inequalities: the band belongs to the set
        if su2 is Tri.BOUNDARY:
            su2 = Tri.YES
    else:
        su2 = Tri.NO
    word: tuple = ()
    imaginary = Tri.NO
    if dihedral is Tri.NO:
        nf = imaginary_normal_form(ch, eps)
        if nf is not None and abs(k.imag) <= eps:
            word = nf[0]
            # a real character with a zero entry can also match the pattern;
            # it is only imaginary if some entry is genuinely imaginary
            if any(abs(v.imag) > eps for v in vals):
                imaginary = Tri.YES
    return ClassReport(real, imaginary, dihedral, su2, reducible, word)


# --- matrix model -----------------------------------------------------------


def unit_root(t: complex) -> complex:
    """Root r of r + 1/r = t with |r| >= 1 (ties: argument in [0, pi))."""
    t = complex(t)
    d = cmath.sqrt(t * t - 4)
    r1, r2 = (t + d) / 2, (t - d) / 2
    m1, m2 = abs(r1), abs(r2)
    if abs(m1 - m2) > 1e-12 * max(1.0, m1, m2):
        return r1 if m1 > m2 else r2

    def arg_key(r):
        a = cmath.phase(r)
        return 0 if 0 <= a < math.pi else 1

    return r1 if arg_key(r1) <= arg_key(r2) else r2


@dataclass(frozen=True)
class MatrixPair:
    A: np.ndarray
    B: np.ndarray
    zeta: complex

    def inverse(self, M):
        return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]])


def matrices(ch: Character) -> MatrixPair:
    """A = [[x, 1], [-1, 0]], B = [[0, -zeta], [1/zeta, y]] with zeta + 1/zeta = z."""
    zeta = unit_root(ch.z)
    A = np.array([[ch.x, 1], [-1, 0]], dtype=complex)
    B = np.array([[0, -zeta], [1 / zeta, ch.y]], dtype=complex)
    return MatrixPair(A, B, zeta)


_WORD_TOKEN = re.compile(r"(X|Y)(\^-1|⁻¹|\^\{-1\})?|(x|y)")


def parse_word(word) -> str:
    """Normalize a word to letters X, Y, x, y (lowercase = inverse)."""
    if not isinstance(word, str):
        word = "".join(word)
    out = []
    pos = 0
    w = word.replace(" ", "")
    while pos < len(w):
        m = _WORD_TOKEN.match(w, pos)
        if not m:
            raise ParseError("malformed word", word, pos)
        if m.group(3):
            out.append(m.group(3))
        else:
            out.append(m.group(1).lower() if m.group(2) else m.group(1))
        pos = m.end()
    return "".join(out)


def trace_word(ch: Character, word) -> complex:
    """Trace of the word in the explicit matrix model; inf if saturated."""
    w = parse_word(word)
    if not w:
        raise ValueError("empty word")
    mp = matrices(ch)
    letters = {
        "X": mp.A,
        "Y": mp.B,
        "x": mp.inverse(mp.A),
        "y": mp.inverse(mp.B),
    }
    M = np.eye(2, dtype=complex)
    for k, ch_ in enumerate(w, 1):
        M = M @ letters[ch_]
        if k % 64 == 0 and np.max(np.abs(M)) < 1e4:
            # det is only trustworthy while the entries are moderate
            d = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
            if abs(d - 1) < 0.5:
                M = M / np.sqrt(d)
        if not np.all(np.isfinite(M)) or np.max(np.abs(M)) > SAT_BOUND:
            return complex(math.inf, 0.0)
    return saturate(complex(M[0, 0] + M[1, 1]))


def invert_word(word: str) -> str:
    return "".join(c.swapcase() for c in reversed(parse_word(word)))


def primitive_word(s: Slope) -> str:
    """Primitive word in homology class q[X] + p[Y], via W(mediant) = W(lo) W(hi)."""
    if s == ZERO:
        return "X"
    if s == INF:
        return "Y"
    if s == ONE:
        return "XY"
    neg = s.p < 0
    t = s.negate() if neg else s
    words = {ZERO: "X", INF: "Y", ONE: "XY"}
    w = words.get(t, "")
    for e in farey_path(t):
        lo, hi = e.pair.a, e.pair.b
        w = words[lo] + words[hi]
        words[e.to_slope] = w
    if neg:
        w = w.replace("Y", "y")
    return w
