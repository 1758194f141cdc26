import math

import numpy as np
import pytest

from torus_ends.bq import Satisfied, check_bq
from torus_ends.characters import Character, Tri
from torus_ends.ends import rational_end_test
from torus_ends.farey import BASE_TRIPLE, ONE, ZERO, ColorClass, FareyPair, color_of, neighbor_base, Slope
from torus_ends.tau import (
    Attractor,
    EndWitness,
    ImaginaryForm,
    TauError,
    ellipse_walk,
    tau_from_character,
    tau_of_edge,
    tau_reduce,
)
from torus_ends.trace_tree import trace_at


def random_imaginary(rng, lo=-14.0, hi=2.0):
    while True:
        x, y, z = rng.uniform(-4, 4, 3)
        ch = Character(1j * x, 1j * y, z)
        k = ch.kappa.real
        if lo < k < hi and abs(x) > 1e-3 and abs(y) > 1e-3:
            return ch


def test_tau_of_edge_examples():
    form = ImaginaryForm.from_character(Character(2j, 2j, 1))
    assert tau_of_edge(form, FareyPair(ZERO, Slope(1, 0))) == pytest.approx(5)
    form = ImaginaryForm.from_character(Character(0, 3, 3j))
    e = FareyPair(ZERO, Slope(1, 0))
    z1, z2 = e.completions()
    zv, zv2 = form.coord(z1), form.coord(z2)
    assert tau_of_edge(form, e) == pytest.approx(-zv * zv2)
    with pytest.raises(TauError):
        tau_of_edge(form, FareyPair(ZERO, ONE))


def test_zero_flank_gives_zero_tau():
    form = ImaginaryForm.from_character(Character(1j, 0.5j, 0))
    assert tau_of_edge(form, FareyPair(ZERO, Slope(1, 0))) == 0


def test_form_requires_imaginary():
    with pytest.raises(TauError):
        ImaginaryForm.from_character(Character(3, 3, 3))
    with pytest.raises(TauError):
        ImaginaryForm.from_character(Character(0, 0, 5))


def test_examples():
    out = tau_from_character(Character(0, 3, 3j))
    assert isinstance(out, EndWitness) and out.value == 0
    out = tau_from_character(Character(2j, 2j, 1))
    assert isinstance(out, EndWitness)
    out = tau_from_character(Character(2, 2j, -2j))
    assert isinstance(out, Attractor)
    assert isinstance(check_bq(Character(2, 2j, -2j)), Satisfied)


def test_requires_kappa_below_two():
    ch = Character(3j, 3j, 3)
    assert ch.kappa.real > 2
    with pytest.raises(TauError):
        tau_from_character(ch)


def _flip_pairs(states):
    out = []
    for prev, cur in zip(states, states[1:]):
        if cur.kind == "Flip":
            out.append((prev.z_k, cur.z_k))
    return out


def test_random_runs(rng):
    for _ in range(60):
        ch = random_imaginary(rng)
        out = tau_from_character(ch)
        assert isinstance(out, EndWitness)
        assert rational_end_test(ch, out.slope) is Tri.YES
        # a zero-step walk re-records the vertex it starts from
        verts = [s.vertex for i, s in enumerate(out.states) if i == 0 or s.vertex != out.states[i - 1].vertex]
        assert len(set(verts)) == len(verts)
        for z, z2 in _flip_pairs(out.states):
            assert abs(z2) < abs(z)


def test_hyperbola_along_boundaries(rng):
    for _ in range(30):
        form = ImaginaryForm.from_character(random_imaginary(rng))
        z = form.coord(ONE)
        av, u = neighbor_base(ONE)
        prev = None
        for n in range(-10, 11):
            s = Slope.from_vector((av[0] + n * u[0], av[1] + n * u[1]))
            w = form.coord(s)
            if prev is not None:
                x, y = prev, w
                lhs = -x * x - y * y + z * x * y + z * z
                assert abs(lhs - (form.kappa + 2)) <= 1e-7 * (1 + x * x + y * y)
            prev = w


def test_single_sign_change_and_tau_minimum(rng):
    checked = 0
    while checked < 30:
        form = ImaginaryForm.from_character(random_imaginary(rng))
        z = form.coord(ONE)
        if abs(z) < 2:
            continue
        checked += 1
        if z < 0:
            z = -z
        av, u = neighbor_base(ONE)
        vals = []
        for n in range(-40, 41):
            s = Slope.from_vector((av[0] + n * u[0], av[1] + n * u[1]))
            v = form.coord(s)
            # the sign change on R and G classes flips G values with z
            if form.coord(ONE) < 0 and color_of(s) is ColorClass.G:
                v = -v
            vals.append(v)
        a = np.array(vals)
        prods = a[:-1] * a[1:]
        if np.any(np.abs(a) < 1e-9):
            continue
        assert (prods < 0).sum() == 1
        taus = z * (prods + z)
        j = int(np.argmin(taus))
        assert prods[j] < 0
        assert np.all(taus[np.arange(len(taus)) != j] > taus[j] - 1e-9)


def test_ellipse_walk():
    ch = Character(0.7j, 1.1j, 1.5)
    form = ImaginaryForm.from_character(ch)
    assert form.coord(ONE) == pytest.approx(1.5)
    P, Q, a, b, Zn, zn = ellipse_walk(form, ONE)
    assert a * b <= 0
    assert abs(a) <= 1.5 + 1e-9 and abs(b) <= 1.5 + 1e-9
    assert abs(zn) < 2
    assert abs(form.coord(Zn) - zn) < 1e-9


def test_ellipse_walk_zero_neighbour():
    form = ImaginaryForm.from_character(Character(0, 0.9j, 1.2))
    P, Q, a, b, Zn, zn = ellipse_walk(form, ONE)
    assert a == 0 and P == ZERO


def test_ellipse_walk_random_kappa_minus_two(rng):
    done = 0
    while done < 20:
        x, y = rng.uniform(-2, 2, 2)
        # solve -x^2 - y^2 + z^2 + xyz - 2 = -2 for z
        disc = (x * y) ** 2 + 4 * (x * x + y * y)
        z = (-x * y + math.sqrt(disc)) / 2
        if not (0.05 < z < 1.95):
            continue
        form = ImaginaryForm.from_character(Character(1j * x, 1j * y, z))
        if form.coord(ONE) <= 0 or form.coord(ONE) >= 2:
            continue
        done += 1
        P, Q, a, b, Zn, zn = ellipse_walk(form, ONE)
        assert abs(form.original_trace(Zn)) < 2
