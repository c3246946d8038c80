import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geoft.errors import DomainError, NonUniqueGeodesicError, NonUniqueGeodesicWarning, UndefinedDirectionError
from geoft.kplane import (
    KPlane,
    aleksandrov_excess,
    angle_at,
    distance,
    exp_map,
    log_direction,
    unified_cosine_side,
)

from oracles import closed_form_distance, spherical_triangle_area

CURVATURES = [-2.0, -1.0, 0.0, 1.0, 2.0]
PI = math.pi


def random_point(geom, rng, radius=1.0):
    r = radius * math.sqrt(rng.uniform())
    a = rng.uniform(0, 2 * PI)
    return geom.from_chart(np.array([r * math.cos(a), r * math.sin(a)]))


def random_unit_tangent(geom, P, rng):
    e1, e2 = geom.tangent_basis(P)
    a = rng.uniform(0, 2 * PI)
    return math.cos(a) * e1 + math.sin(a) * e2


# --- unified cosine law ---------------------------------------------------------------

def test_cosine_law_pythagoras():
    assert unified_cosine_side(0.0, 3.0, 4.0, PI / 2) == pytest.approx(5.0, abs=1e-14)


def test_cosine_law_octant():
    assert unified_cosine_side(1.0, PI / 2, PI / 2, PI / 2) == pytest.approx(PI / 2, abs=1e-14)


def test_cosine_law_hyperbolic_matches_hyperboloid_oracle():
    # right isoceles hyperbolic triangle with legs 1: cosh c = cosh^2 1
    expected = math.acosh(math.cosh(1.0) ** 2)
    assert expected == pytest.approx(1.513374, abs=5e-7)
    assert unified_cosine_side(-1.0, 1.0, 1.0, PI / 2) == pytest.approx(expected, rel=1e-14)


def test_cosine_law_accepts_geometry():
    assert unified_cosine_side(KPlane(-1.0), 1.0, 1.0, PI / 2) == unified_cosine_side(-1.0, 1.0, 1.0, PI / 2)


@pytest.mark.parametrize("K", CURVATURES)
def test_cosine_law_against_model_construction(K):
    # build the SAS triangle in the model and measure the third side
    rng = np.random.default_rng(1)
    g = KPlane(K)
    for _ in range(50):
        a, b = rng.uniform(0.05, 1.2, 2)
        gamma = rng.uniform(0, PI)
        P = g.origin()
        e1, e2 = g.tangent_basis(P)
        Q = g.exp_map(P, e1, a)
        R = g.exp_map(P, math.cos(gamma) * e1 + math.sin(gamma) * e2, b)
        c_model = float(closed_form_distance(K, Q, R))
        assert unified_cosine_side(K, a, b, gamma) == pytest.approx(c_model, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("K", CURVATURES)
def test_cosine_law_endpoints_and_monotone(K):
    rng = np.random.default_rng(2)
    for _ in range(30):
        a, b = rng.uniform(0.0, 1.4, 2)
        assert unified_cosine_side(K, a, b, 0.0) == pytest.approx(abs(a - b), abs=1e-12)
        straight = a + b
        if K > 0:
            straight = min(a + b, 2 * PI / math.sqrt(K) - (a + b))
        assert unified_cosine_side(K, a, b, PI) == pytest.approx(straight, abs=1e-12)
        sides = [unified_cosine_side(K, a, b, gam) for gam in np.linspace(0, PI, 60)]
        assert np.all(np.diff(sides) >= -1e-13)


@pytest.mark.parametrize("eps", [1e-6, -1e-6, 1e-9, -1e-9])
def test_cosine_law_continuous_across_flat(eps):
    for a in (0.3, 1.0, 3.0):
        for b in (0.5, 2.0):
            for gamma in np.linspace(0.1, PI, 7):
                flat = unified_cosine_side(0.0, a, b, gamma)
                bent = unified_cosine_side(eps, a, b, gamma)
                # the first-order correction is bounded by (a + b)^3 |K|
                assert abs(bent - flat) <= (a + b) ** 3 * abs(eps)


def test_cosine_law_series_branch_matches_closed_form():
    # |K| d^2 just below and above the switch
    a, b, gamma = 1e-3, 2e-3, 1.0
    below = unified_cosine_side(1e-7, a, b, gamma)
    above = unified_cosine_side(1e-5, a, b, gamma)
    flat = unified_cosine_side(0.0, a, b, gamma)
    assert below == pytest.approx(flat, rel=1e-12)
    assert above == pytest.approx(flat, rel=1e-10)


def test_cosine_law_domain_errors():
    with pytest.raises(DomainError):
        unified_cosine_side(1.0, 4.0, 0.5, 1.0)
    with pytest.raises(DomainError):
        unified_cosine_side(0.0, -1.0, 0.5, 1.0)
    with pytest.raises(DomainError):
        unified_cosine_side(0.0, 1.0, 0.5, 4.0)


# --- distance / exp / log -------------------------------------------------------------

def test_distance_pole_to_equator():
    g = KPlane(1.0)
    assert distance(g, np.array([0, 0, 1.0]), np.array([1.0, 0, 0])) == pytest.approx(PI / 2, abs=1e-15)


def test_distance_flat():
    assert distance(KPlane(0.0), np.array([0.0, 0.0]), np.array([3.0, 4.0])) == 5.0


def test_distance_hyperbolic_unit_step_along_geodesic():
    # the curve (cosh s, sinh s, 0) is a unit-speed geodesic of the hyperboloid
    g = KPlane(-1.0)
    s = 0.7
    P = np.array([math.cosh(s), math.sinh(s), 0.0])
    Q = np.array([math.cosh(s + 1), math.sinh(s + 1), 0.0])
    assert distance(g, P, Q) == pytest.approx(1.0, abs=1e-14)
    d = log_direction(g, P, Q)
    assert distance(g, P, exp_map(g, P, d, 1.0)) == pytest.approx(1.0, abs=1e-14)


def test_antipodal_distance_warns():
    g = KPlane(1.0)
    with pytest.warns(NonUniqueGeodesicWarning):
        d = distance(g, np.array([0, 0, 1.0]), np.array([0, 0, -1.0]))
    assert d == pytest.approx(PI)
    with pytest.raises(NonUniqueGeodesicError):
        log_direction(g, np.array([0, 0, 1.0]), np.array([0, 0, -1.0]))


@pytest.mark.parametrize("K", CURVATURES)
def test_coincident_direction_is_undefined(K):
    g = KPlane(K)
    P = g.from_chart(np.array([0.2, 0.1]))
    with pytest.raises(UndefinedDirectionError):
        log_direction(g, P, P.copy())


def test_exp_identity_and_equator():
    g = KPlane(1.0)
    N = np.array([0, 0, 1.0])
    d = np.array([math.cos(0.3), math.sin(0.3), 0.0])
    assert np.array_equal(exp_map(g, N, d, 0.0), N)
    X = exp_map(g, N, d, PI / 2)
    assert abs(X[2]) < 1e-15
    assert np.linalg.norm(X) == pytest.approx(1.0, abs=1e-15)


def test_log_flat_and_due_north():
    assert np.allclose(log_direction(KPlane(0.0), np.array([0.0, 0.0]), np.array([1.0, 0.0])), [1.0, 0.0])
    # equator point to the north pole: projection of the pole onto the tangent plane
    g = KPlane(1.0)
    E = np.array([1.0, 0.0, 0.0])
    N = np.array([0.0, 0.0, 1.0])
    oracle = N - np.dot(N, E) * E
    oracle /= np.linalg.norm(oracle)
    assert np.allclose(log_direction(g, E, N), oracle, atol=1e-15)


@pytest.mark.parametrize("K", CURVATURES)
def test_exp_log_round_trips(K):
    g = KPlane(K)
    rng = np.random.default_rng(3)
    for _ in range(1000):
        P = random_point(g, rng)
        d = random_unit_tangent(g, P, rng)
        t = rng.uniform(1e-3, 1.0)
        Q = g.exp_map(P, d, t)
        assert g.residual(Q) < 1e-12
        assert g.distance(P, Q) == pytest.approx(t, abs=1e-10)
        assert np.allclose(g.log_direction(P, Q), d, atol=1e-10)
        Q2 = random_point(g, rng)
        back = g.exp_map(P, g.log_direction(P, Q2), g.distance(P, Q2))
        assert g.distance(back, Q2) < 1e-10


@pytest.mark.parametrize("K", CURVATURES)
def test_tangent_invariants(K):
    g = KPlane(K)
    rng = np.random.default_rng(4)
    for _ in range(100):
        P = random_point(g, rng)
        Q = random_point(g, rng)
        u = g.log_direction(P, Q)
        assert g.norm(P, u) == pytest.approx(1.0, abs=1e-12)
        if K != 0:
            assert abs(g.inner(P, P, u)) < 1e-12 * g.radius


@pytest.mark.parametrize("K", CURVATURES)
def test_triangle_inequality(K):
    g = KPlane(K)
    rng = np.random.default_rng(5)
    for _ in range(1000):
        P, Q, R = (random_point(g, rng) for _ in range(3))
        assert g.distance(P, R) <= g.distance(P, Q) + g.distance(Q, R) + 1e-12
        assert g.distance(P, Q) == pytest.approx(g.distance(Q, P), abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(
    K=st.sampled_from(CURVATURES),
    x=st.floats(-1.0, 1.0), y=st.floats(-1.0, 1.0),
)
def test_chart_round_trip(K, x, y):
    g = KPlane(K)
    P = g.from_chart(np.array([x, y]))
    assert g.residual(P) < 1e-12
    assert np.allclose(g.to_chart(P), [x, y], atol=1e-10)


# --- angles and excess ------------------------------------------------------------------

def test_right_angle_corner():
    g = KPlane(0.0)
    assert angle_at(g, np.zeros(2), np.array([2.0, 0]), np.array([0, 3.0])) == pytest.approx(PI / 2, abs=1e-15)


def octant():
    return np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), np.array([0, 0, 1.0])


def test_octant_angles_and_excess():
    g = KPlane(1.0)
    A, B, C = octant()
    for P, Q, R in ((A, B, C), (B, C, A), (C, A, B)):
        assert angle_at(g, P, Q, R) == pytest.approx(PI / 2, abs=1e-15)
    exc = aleksandrov_excess(g, A, B, C)
    assert not exc.degenerate
    assert exc.value == pytest.approx(PI / 2, abs=1e-8)


def test_small_spherical_triangle_matches_flat_law():
    g = KPlane(1.0)
    for scale in (0.1, 0.05, 0.025):
        P = g.from_chart(np.array([0.0, 0.0]))
        Q = g.from_chart(np.array([scale, 0.0]))
        R = g.from_chart(np.array([0.3 * scale, 0.8 * scale]))
        a, b, c = g.distance(Q, R), g.distance(P, Q), g.distance(P, R)
        flat = math.acos((b * b + c * c - a * a) / (2 * b * c))
        assert abs(angle_at(g, P, Q, R) - flat) <= 0.5 * scale**2


@pytest.mark.parametrize("K", [0.0])
def test_euclidean_excess_vanishes(K):
    g = KPlane(K)
    rng = np.random.default_rng(6)
    for _ in range(100):
        A, B, C = (rng.uniform(-1, 1, 2) for _ in range(3))
        assert abs(aleksandrov_excess(g, A, B, C).value) < 1e-10


def test_excess_matches_gauss_bonnet():
    g = KPlane(1.0)
    rng = np.random.default_rng(7)
    for _ in range(20):
        A, B, C = (random_point(g, rng, 0.4) for _ in range(3))
        exc = aleksandrov_excess(g, A, B, C)
        if exc.degenerate:
            continue
        assert exc.value == pytest.approx(spherical_triangle_area(A, B, C), rel=1e-9, abs=1e-13)


@pytest.mark.parametrize("K,sign", [(1.0, 1), (-1.0, -1)])
def test_excess_sign(K, sign):
    g = KPlane(K)
    rng = np.random.default_rng(8)
    n = 0
    while n < 100:
        A, B, C = (random_point(g, rng, 0.8) for _ in range(3))
        exc = aleksandrov_excess(g, A, B, C)
        if exc.degenerate:
            continue
        n += 1
        assert sign * exc.value > 0


def test_collinear_excess_flagged():
    g = KPlane(1.0)
    A = np.array([1.0, 0, 0])
    B = np.array([math.cos(0.3), math.sin(0.3), 0])
    C = np.array([math.cos(0.9), math.sin(0.9), 0])
    exc = aleksandrov_excess(g, A, B, C)
    assert exc.degenerate and exc.value == 0.0
    assert aleksandrov_excess(KPlane(0.0), np.zeros(2), np.ones(2), 2 * np.ones(2)).degenerate


def test_no_warning_on_regular_points():
    g = KPlane(1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        g.distance(np.array([1.0, 0, 0]), np.array([0, 1.0, 0]))
