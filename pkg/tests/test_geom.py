import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from apollogap.geom import (
    PICARD_WALLS,
    InversiveCircle,
    Mobius,
    Point,
    SingularInputError,
    apply_mobius,
    cosh_distance,
    inversive_product,
    is_tangent,
    reflect_circle,
    reflect_circles,
    reflect_point,
)
from apollogap.packing import picard_orbit

unit = InversiveCircle.from_center(0, 0, 1)

coord = st.floats(-5, 5, allow_nan=False)
radius = st.floats(0.1, 5)


@st.composite
def circles(draw):
    x, y, r = draw(coord), draw(coord), draw(radius)
    return InversiveCircle.from_center(x, y, r, outward=draw(st.booleans()))


def test_unit_norm_and_self_product():
    c = InversiveCircle.from_center(Fraction(3, 2), -2, Fraction(1, 3))
    assert c.norm() == 1
    assert inversive_product(c, c) == 1


def test_external_tangency_is_minus_one():
    other = InversiveCircle.from_center(2, 0, 1)
    assert inversive_product(unit, other) == -1
    assert is_tangent(unit, other)


def test_internal_tangency_against_bounding_circle():
    outer = InversiveCircle.from_center(0, 0, 2, outward=True)
    inner = InversiveCircle.from_center(1, 0, 1)
    assert is_tangent(outer, inner)
    # same circle oriented by its interior touches internally with +1
    assert inversive_product(outer.flipped(), inner) == 1
    assert not is_tangent(outer.flipped(), inner)
    assert is_tangent(outer.flipped(), inner, oriented=False)


def classify(c1, c2):
    (x1, y1), (x2, y2) = c1.center, c2.center
    r1, r2 = c1.radius, c2.radius
    d = math.hypot(x1 - x2, y1 - y2)
    if abs(d - (r1 + r2)) < 1e-12 or abs(d - abs(r1 - r2)) < 1e-12:
        return "tangent"
    if abs(r1 - r2) < d < r1 + r2:
        return "crossing"
    return "apart"


def test_concentric_pair_matches_brute_force():
    big = InversiveCircle.from_center(0, 0, 2)
    p = inversive_product(unit, big)
    assert p == Fraction(5, 4)
    assert classify(unit, big) == "apart"
    assert abs(p) > 1


@given(circles(), circles())
def test_product_classifies_like_distances(c1, c2):
    p = float(inversive_product(c1, c2))
    kind = classify(c1, c2)
    if kind == "crossing":
        assert abs(p) < 1 + 1e-9
    elif kind == "apart":
        assert abs(p) > 1 - 1e-9


def test_reflect_point_examples():
    assert reflect_point(InversiveCircle.line(1, 0, 0), Point(3, 1)) == Point(-3, 1)
    q = reflect_point(unit, Point(0, 2))
    assert q.x == pytest.approx(0) and q.y == pytest.approx(0.5)
    m = InversiveCircle.from_center(1, 0, Fraction(1, 2))
    p = Point(1, 1)
    back = reflect_point(m, reflect_point(m, p))
    assert back.x == pytest.approx(1) and back.y == pytest.approx(1)


def test_reflect_point_fixes_mirror_and_rejects_center():
    for t in np.linspace(0.1, 3.0, 7):
        p = Point(math.cos(t), math.sin(t))
        q = reflect_point(unit, p)
        assert q.x == pytest.approx(p.x) and q.y == pytest.approx(p.y)
    with pytest.raises(SingularInputError):
        reflect_point(unit, Point(0, 0))


def test_reflect_circle_examples():
    img = reflect_circle(InversiveCircle.line(1, 0, 1), unit)
    assert img == InversiveCircle.from_center(2, 0, 1)
    assert reflect_circle(unit, unit) == unit.flipped()


@given(circles(), circles(), circles())
def test_reflection_involution_and_isometry(m, a, b):
    ra, rb = reflect_circle(m, a), reflect_circle(m, b)
    scale = max(abs(v) for c in (m, a, b) for v in c.as_tuple()) ** 4
    assert float(ra.norm()) == pytest.approx(1, abs=1e-10 * scale)
    assert float(inversive_product(ra, rb)) == pytest.approx(float(inversive_product(a, b)), abs=1e-10 * scale)
    back = reflect_circle(m, ra)
    assert np.allclose(back.as_array(), a.as_array(), atol=1e-10 * scale)


def test_vectorised_reflection_matches_scalar():
    rng = np.random.default_rng(5)
    cs = [InversiveCircle.from_center(*rng.uniform(-2, 2, 2), rng.uniform(0.2, 2)) for _ in range(20)]
    ms = [InversiveCircle.from_center(*rng.uniform(-2, 2, 2), rng.uniform(0.2, 2)) for _ in range(20)]
    out = reflect_circles(np.array([m.as_array() for m in ms]), np.array([c.as_array() for c in cs]))
    ref = np.array([reflect_circle(m, c).as_array() for m, c in zip(ms, cs)])
    assert np.allclose(out, ref, rtol=1e-12, atol=1e-12)


def test_integer_reflections_stay_exact():
    walls = np.array([w.as_tuple() for w in PICARD_WALLS], dtype=np.int64)
    c = np.array(InversiveCircle.from_center(0, Fraction(1, 2), Fraction(1, 2)).as_tuple(), dtype=np.int64)
    rng = np.random.default_rng(0)
    for _ in range(200):
        c = reflect_circles(walls[rng.integers(1, 5)], c)
        assert c.dtype == np.int64
        assert c[2] ** 2 + c[3] ** 2 - c[1] * c[0] == 1


def test_picard_walls_incidences():
    # W0 is orthogonal (product 0) or tangent to the others; dihedral angles pi/2, pi/3 or 0
    for w in PICARD_WALLS[1:]:
        p = inversive_product(PICARD_WALLS[0], w)
        assert p == 0 or abs(p) == 1
    allowed = {0, Fraction(1, 2), Fraction(-1, 2), 1, -1}
    for i, a in enumerate(PICARD_WALLS):
        for b in PICARD_WALLS[i + 1:]:
            assert inversive_product(a, b) in allowed


def test_first_orbit_circles_are_mutually_tangent():
    # the first four distinct circles of the W0 orbit: y=0, y=1 and two
    # curvature-2 circles between them
    orbit = picard_orbit(3)
    first = orbit[:4]
    assert sorted(c.curv for c in first) == [0, 0, 2, 2]
    for i, a in enumerate(first):
        for b in first[i + 1:]:
            assert inversive_product(a, b) == -1


def test_picard_words_keep_unit_norm_exactly():
    rng = np.random.default_rng(3)
    for _ in range(50):
        c = PICARD_WALLS[0]
        for k in rng.integers(1, 5, size=50):
            c = reflect_circle(PICARD_WALLS[k], c)
        assert c.norm() == 1
        assert all(isinstance(v, int) for v in c.as_tuple())


def test_mobius_examples():
    assert apply_mobius(Mobius.identity(), Point(0.3, 2)) == Point(0.3, 2)
    q = apply_mobius(Mobius.translation(3), Point(0, 1))
    assert (q.x, q.y) == (3, 1)
    q = apply_mobius(Mobius.inversion(), Point(0, 2))
    assert q.x == pytest.approx(0) and q.y == pytest.approx(0.5)
    # the inversion is the unit-circle reflection composed with x -> -x
    p = Point(0.7, 1.3)
    a = apply_mobius(Mobius.inversion(), p)
    b = reflect_point(unit, Point(-p.x, p.y))
    assert a.x == pytest.approx(b.x) and a.y == pytest.approx(b.y)


def test_mobius_pole_gives_ideal_point():
    m = Mobius(1, 0, 1, 1)
    assert apply_mobius(m, Point.at_infinity()) == Point(1.0, 0.0)
    assert Mobius(2, 0, 0, 2).det == pytest.approx(1)
    with pytest.raises(SingularInputError):
        Mobius(1, 2, 2, 4)


@given(
    st.lists(st.floats(-3, 3), min_size=4, max_size=4),
    st.lists(st.floats(-3, 3), min_size=4, max_size=4),
    st.tuples(coord, st.floats(0.05, 5)),
    st.tuples(coord, st.floats(0.05, 5)),
)
def test_mobius_composition_and_distance(e1, e2, z, w):
    a, b, c, d = e1
    if abs(a * d - b * c) < 1e-2:
        a, d = a + 1, d + 1
    if abs(a * d - b * c) < 1e-2:
        return
    m1 = Mobius(a, b, c, d)
    m2 = Mobius(1.0, e2[0], 0.0, 1.0) @ Mobius.inversion()
    p, q = Point(*z), Point(*w)
    lhs = apply_mobius(m1 @ m2, p)
    rhs = apply_mobius(m1, apply_mobius(m2, p))
    if lhs.is_infinite or rhs.is_infinite:
        return
    assert lhs.x == pytest.approx(rhs.x, rel=1e-8, abs=1e-8)
    assert lhs.y == pytest.approx(rhs.y, rel=1e-8, abs=1e-8)
    mp, mq = apply_mobius(m1, p), apply_mobius(m1, q)
    if mp.is_infinite or mq.is_infinite:
        return
    assert mp.y > 0
    d0 = cosh_distance(p, q)
    assert cosh_distance(mp, mq) == pytest.approx(d0, rel=1e-9)


def test_mobius_distance_on_random_pairs():
    rng = np.random.default_rng(11)
    m = Mobius(2.0, 1.0, 1.0, 1.0) @ Mobius.inversion() @ Mobius.translation(0.3)
    for _ in range(1000):
        p = Point(rng.uniform(-2, 2), rng.uniform(0.1, 2))
        q = Point(rng.uniform(-2, 2), rng.uniform(0.1, 2))
        assert cosh_distance(apply_mobius(m, p), apply_mobius(m, q)) == pytest.approx(cosh_distance(p, q), rel=1e-12)
