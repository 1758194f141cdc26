import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import characters, coprime_slopes, random_char
from torus_ends.characters import (
    GENERATORS,
    Character,
    ParseError,
    Tri,
    act_c,
    act_s,
    apply_word,
    classify_type,
    format_complex,
    imaginary_normal_form,
    invert_word,
    kappa,
    matrices,
    parse_complex,
    parse_word,
    primitive_word,
    reduce_word,
    sign_change,
    slope_pullback,
    trace_word,
    unit_root,
)
from torus_ends.farey import parse_slope
from torus_ends.trace_tree import trace_at


@pytest.mark.parametrize(
    "text,val",
    [("3", 3), ("2i", 2j), ("-2i", -2j), ("1+2i", 1 + 2j), ("i", 1j), ("-i", -1j), ("1e-3+2i", 0.001 + 2j),
     (" 0.5 - 1.5i ", 0.5 - 1.5j), ("1i", 1j)],
)
def test_parse_complex(text, val):
    assert parse_complex(text) == val


@pytest.mark.parametrize("text", ["", "2x", "1+", "i2", "1..2", "--1"])
def test_parse_complex_rejects(text):
    with pytest.raises(ParseError):
        parse_complex(text)


def test_character_parse_reports_column():
    with pytest.raises(ParseError) as e:
        Character.parse("1,2x,3")
    assert e.value.pos == 3
    with pytest.raises(ParseError):
        Character.parse("1,2")


def test_format_roundtrip():
    for v in (1 + 2j, -0.25 - 3j, 1e-17 + 0j):
        assert parse_complex(format_complex(v)) == v


@pytest.mark.parametrize("ch,k", [((0, 1, 1j), -2), ((2, 2j, -2j), -14), ((0, 0, 0), -2), ((3, 3, 3), -2)])
def test_kappa(ch, k):
    assert kappa(*ch) == k
    assert Character(*ch).kappa == k


def test_generators():
    assert act_s(Character(3, 3, 3)).triple() == (3, 3, 6)
    assert act_c(Character(1, 2, 3)).triple() == (3, 1, 2)
    ch = Character(0, 1, 1j)
    assert act_s(act_s(ch)) == ch
    assert apply_word(Character(1, 2, 3), "ccc") == Character(1, 2, 3)
    assert sign_change(Character(3, 3, 3), "xy").triple() == (-3, -3, 3)
    assert Character(-3, -3, 3).kappa == -2
    assert sign_change(Character(0, 5, 5), "yz").triple() == (0, -5, -5)
    with pytest.raises(ValueError):
        apply_word(ch, ["q"])


def test_kappa_invariance_random_words(rng):
    for _ in range(200):
        ch = random_char(rng)
        word = [GENERATORS[i] for i in rng.integers(0, len(GENERATORS), int(rng.integers(0, 31)))]
        after = apply_word(ch, word)
        assert abs(after.kappa - ch.kappa) <= 1e-6 * (1 + abs(ch.kappa))


def _step(ch, g):
    if g == "c":
        return act_c(ch)
    if g == "s":
        return act_s(ch)
    return sign_change(ch, g)


def test_reduce_word_examples():
    assert reduce_word("ss") == ([], (1, 1, 1))
    assert reduce_word("ccc") == ([], (1, 1, 1))
    assert reduce_word(["s", "xy", "s"]) == ([], (-1, -1, 1))
    assert reduce_word(["xy", "c"]) == (["c"], (1, -1, -1))


@given(characters, st.lists(st.sampled_from(GENERATORS), max_size=12))
def test_reduced_word_is_the_same_map(ch, word):
    seq = ch
    for g in word:
        seq = _step(seq, g)
    red = apply_word(ch, word)
    m = max(abs(v) for v in seq.triple() + red.triple())
    for a, b in zip(seq.triple(), red.triple()):
        assert abs(a - b) <= 1e-9 * (1 + m) ** 2


def test_kappa_drift_at_the_rounding_floor(rng):
    # doubles with entries of size M fix kappa only to ~eps M^2, so the drift
    # is bounded by that floor along the reduced word
    for _ in range(2000):
        ch = random_char(rng)
        word = [GENERATORS[i] for i in rng.integers(0, len(GENERATORS), int(rng.integers(0, 31)))]
        stack, _ = reduce_word(word)
        cur, m = ch, max(abs(v) for v in ch.triple())
        for g in stack:
            cur = _step(cur, g)
            m = max(m, *(abs(v) for v in cur.triple()))
        drift = abs(apply_word(ch, word).kappa - ch.kappa)
        assert drift <= 16 * 2.3e-16 * (1 + m) ** 2


@given(characters, st.lists(st.sampled_from(["c", "s"]), max_size=8), coprime_slopes(30))
def test_slope_pullback_intertwines_traces(ch, word, s):
    lhs = trace_at(apply_word(ch, word), s)
    rhs = trace_at(ch, slope_pullback(word, s))
    scale = 1 + abs(lhs)
    assert min(abs(lhs - rhs), abs(lhs + rhs)) <= 1e-7 * scale**1.5


def test_classify_type_examples():
    assert classify_type(Character(0, 0, 5)).dihedral is Tri.YES
    r = classify_type(Character(1, 1, 1))
    assert r.su2 is Tri.YES and r.real is Tri.YES
    r = classify_type(Character(0, 1, 1j))
    assert r.imaginary is Tri.YES and r.dihedral is Tri.NO
    assert classify_type(Character(3, 3, 3)).su2 is Tri.NO
    xi, eta = 2.0, 3.0
    red = Character(xi + 1 / xi, eta + 1 / eta, xi * eta + 1 / (xi * eta))
    assert classify_type(red).reducible is Tri.YES


def test_imaginary_normal_form_shape():
    for ch in (Character(0, 1, 1j), Character(2, 2j, -2j), Character(2j, 2j, 1), Character(0, 3, 3j)):
        word, nc = imaginary_normal_form(ch)
        assert apply_word(ch, word) == nc
        assert abs(nc.x.real) < 1e-12 and abs(nc.y.real) < 1e-12
        assert abs(nc.z.imag) < 1e-12 and nc.z.real >= 0


def test_matrix_model(rng):
    for _ in range(200):
        ch = random_char(rng)
        m = matrices(ch)
        A, B = m.A, m.B
        assert abs(np.linalg.det(A) - 1) < 1e-9 and abs(np.linalg.det(B) - 1) < 1e-9
        assert abs(np.trace(A) - ch.x) < 1e-9
        assert abs(np.trace(B) - ch.y) < 1e-9
        assert abs(np.trace(A @ B) - ch.z) < 1e-9 * (1 + abs(ch.z))
        comm = A @ B @ np.linalg.inv(A) @ np.linalg.inv(B)
        assert abs(np.trace(comm) - ch.kappa) < 1e-8 * (1 + abs(ch.kappa))


def test_trace_word_examples():
    assert trace_word(Character(1, 2, 3), "XY") == pytest.approx(3)
    assert trace_word(Character(0, 1, 1j), "XYX⁻¹Y⁻¹") == pytest.approx(-2)
    assert trace_word(Character(0, 1, 1j), "XYxy") == pytest.approx(-2)
    assert trace_word(Character(3, 3, 3), "XXY") == pytest.approx(6)
    assert trace_word(Character(3, 3, 3), "XXXY") == pytest.approx(15)
    with pytest.raises(ParseError):
        parse_word("XZ")


def test_trace_identity_random_words(rng):
    letters = "XYxy"
    for _ in range(200):
        ch = random_char(rng, 1.5)
        w = "".join(rng.choice(list(letters), int(rng.integers(1, 6))))
        v = "".join(rng.choice(list(letters), int(rng.integers(1, 6))))
        lhs = trace_word(ch, w + v) + trace_word(ch, w + invert_word(v))
        rhs = trace_word(ch, w) * trace_word(ch, v)
        assert abs(lhs - rhs) <= 1e-8 * (1 + abs(rhs) + abs(lhs))


@pytest.mark.parametrize("s,w", [("1/1", "XY"), ("1/2", "XXY"), ("2/1", "XYY"), ("0/1", "X"), ("1/0", "Y")])
def test_primitive_words(s, w):
    assert primitive_word(parse_slope(s)) == w


@given(coprime_slopes(25))
def test_primitive_word_traces_agree(s):
    ch = Character(1.1 + 0.3j, -0.7 + 0.2j, 0.4 - 1.1j)
    a, b = trace_word(ch, primitive_word(s)), trace_at(ch, s)
    assert abs(a - b) <= 1e-8 * (1 + abs(a))


def test_unit_root_branch():
    r = unit_root(3)
    assert abs(r + 1 / r - 3) < 1e-12 and abs(r) >= 1
    r = unit_root(2 * math.cos(0.4))
    assert abs(abs(r) - 1) < 1e-12 and 0 <= cmath.phase(r) < math.pi


def test_dihedral_traces_take_three_values():
    from torus_ends.farey import iter_triples

    ch = Character(0, 0, 2.5)
    r = cmath.sqrt(ch.kappa + 2)
    for _, t in iter_triples(10):
        for s in t.slopes():
            v = trace_at(ch, s)
            assert min(abs(v), abs(v - r), abs(v + r)) <= 1e-9
