"""SVG output: determinism, depth guard, cover band, geodesic geometry."""

import math
import re

import pytest
from hypothesis import given

from torus_ends import Character
from torus_ends.ends import cover_for
from torus_ends.farey import Slope, is_adjacent
from torus_ends.render import MAX_DEPTH, RenderError, geodesic_path, render_svg

from conftest import coprime_slopes

NUM = r"(-?[0-9.e+-]+)"


def svg_for(text, depth=5, cover=True):
    ch = Character.parse(text)
    cov = cover_for(ch, depth, 10**6, 1e-9) if cover else None
    return render_svg(ch, depth, cov)


def test_deterministic():
    assert svg_for("0,1,1i") == svg_for("0,1,1i")


@pytest.mark.parametrize("depth", [-1, MAX_DEPTH + 1])
def test_depth_guard(depth):
    with pytest.raises(RenderError):
        render_svg(Character.parse("1,1,1"), depth)


def test_full_cover_is_a_ring():
    s = svg_for("1,1,1")
    assert '<circle cx="0" cy="0" r="1.04"/>' in s


def test_singleton_is_a_dot():
    s = svg_for("0,3,3")
    dots = re.findall(r'r="0.025" data-slope="([^"]+)"', s)
    assert dots == ["0/1"]


def test_empty_cover_draws_nothing():
    s = svg_for("3,3,3")
    assert 'r="0.025"' not in s and "r=\"1.04\"" not in s


def test_horodisk_per_slope():
    s = svg_for("3,3,3", depth=3, cover=False)
    slopes = re.findall(r'fill="#[0-9a-f]{6}" data-slope="([^"]+)"', s)
    assert len(slopes) == len(set(slopes))
    assert {"0/1", "1/0", "1/1", "-1/1"} <= set(slopes)


def test_diameter_is_straight():
    assert "A" not in geodesic_path(Slope(0, 1), Slope(1, 0))


@given(coprime_slopes(30), coprime_slopes(30))
def test_geodesic_is_orthogonal_arc(a, b):
    if a == b or not is_adjacent(a, b):
        return
    d = geodesic_path(a, b)
    if "A" not in d:
        return
    m = re.fullmatch(rf"M{NUM},{NUM}A{NUM},{NUM} 0 0 [01] {NUM},{NUM}", d)
    x1, y1, r, _, x2, y2 = map(float, m.groups())
    # endpoints on the unit circle, circle of radius r through both meets it orthogonally
    assert math.hypot(x1, y1) == pytest.approx(1, abs=1e-8)
    assert math.hypot(x2, y2) == pytest.approx(1, abs=1e-8)
    chord = math.hypot(x2 - x1, y2 - y1)
    assert chord <= 2 * r + 1e-7
    half = math.asin(min(1.0, chord / 2))
    assert r == pytest.approx(math.tan(half), rel=1e-6, abs=1e-9)
