"""Geometry kernel for the constant-curvature model planes.

Points live in an embedding that depends on the sign of ``K``:

* ``K > 0``: the sphere of radius ``1/sqrt(K)`` in R^3, pole at ``(0, 0, R)``.
* ``K = 0``: the Euclidean plane, points are pairs.
* ``K < 0``: the upper sheet of the hyperboloid ``-x0^2 + x1^2 + x2^2 = -1/|K|``
  in Minkowski space, coordinates ordered ``(x0, x1, x2)``, origin ``(R, 0, 0)``.

Tangent vectors are plain arrays in the same ambient coordinates.  The
functions at module level (``distance``, ``exp_map``, ...) take a geometry
first and dispatch to its methods, so they work unchanged on
:class:`geoft.revolution.RevolutionSurface`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    DegenerateError,
    DomainError,
    GeometryError,
    NonUniqueGeodesicError,
    NonUniqueGeodesicWarning,
    UndefinedDirectionError,
)

CLAMP_TOL = 1e-9
SERIES_THRESHOLD = 1e-12
COINCIDENT_TOL = 1e-15
ANTIPODAL_TOL = 1e-9


# --- curvature-dependent trig -------------------------------------------------

def sn(K: float, x):
    """Generalized sine: ``sin(sqrt(K) x)/sqrt(K)``, ``x`` or ``sinh`` form."""
    if abs(K) * x * x < SERIES_THRESHOLD:
        return x - K * x**3 / 6.0 + K * K * x**5 / 120.0
    if K > 0:
        k = math.sqrt(K)
        return math.sin(k * x) / k
    k = math.sqrt(-K)
    return math.sinh(k * x) / k


def versin(K: float, x):
    """``(1 - cs_K(x))/K`` written as a squared half-angle sine.

    Equals ``x**2/2`` in the flat limit; the half-angle form keeps full
    relative precision for small arguments.
    """
    if abs(K) * x * x < SERIES_THRESHOLD:
        return x * x / 2.0 - K * x**4 / 24.0 + K * K * x**6 / 720.0
    if K > 0:
        k = math.sqrt(K)
        return 2.0 * math.sin(0.5 * k * x) ** 2 / K
    k = math.sqrt(-K)
    return 2.0 * math.sinh(0.5 * k * x) ** 2 / (-K)


def _inverse_versin(K: float, h: float) -> float:
    if h <= 0.0:
        return 0.0
    c0 = math.sqrt(2.0 * h)
    eps = K * c0 * c0
    if abs(eps) < SERIES_THRESHOLD:
        return c0 * (1.0 + eps / 24.0 + 3.0 * eps * eps / 640.0)
    if K > 0:
        arg = math.sqrt(K * h / 2.0)
        if arg > 1.0:
            if arg > 1.0 + CLAMP_TOL:
                raise DomainError(f"cosine-law argument {arg:.6g} outside [-1, 1]")
            arg = 1.0
        return 2.0 * math.asin(arg) / math.sqrt(K)
    return 2.0 * math.asinh(math.sqrt(-K * h / 2.0)) / math.sqrt(-K)


def _curvature(geom) -> float:
    if isinstance(geom, (int, float, np.floating)):
        return float(geom)
    return float(geom.K)


def unified_cosine_side(geom, a: float, b: float, gamma: float) -> float:
    """Third side of a triangle on the K-plane from two sides and their angle.

    Solves ``cos(kc) = cos(ka)cos(kb) + sin(ka)sin(kb)cos(gamma)`` with
    ``k = sqrt(K)`` (imaginary for ``K < 0``), using the equivalent
    half-angle form ``vs(c) = vs(a - b) + sn(a) sn(b) (1 - cos gamma)``.

    ``geom`` may be a :class:`KPlane` or a bare curvature value.
    """
    K = _curvature(geom)
    if a < 0 or b < 0:
        raise DomainError("side lengths must be nonnegative")
    if not (-CLAMP_TOL <= gamma <= math.pi + CLAMP_TOL):
        raise DomainError(f"angle {gamma} outside [0, pi]")
    gamma = min(max(gamma, 0.0), math.pi)
    if K > 0:
        diameter = math.pi / math.sqrt(K)
        if a > diameter * (1 + CLAMP_TOL) or b > diameter * (1 + CLAMP_TOL):
            raise DomainError("side exceeds the spherical diameter pi/sqrt(K)")
    h = versin(K, a - b) + sn(K, a) * sn(K, b) * 2.0 * math.sin(0.5 * gamma) ** 2
    return _inverse_versin(K, h)


# --- the model planes ------------------------------------------------------------

def _minkowski(u, v):
    return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


@dataclass(frozen=True)
class KPlane:
    """Simply connected surface of constant curvature ``K``."""

    K: float = 0.0
    kind = "constant-curvature"

    def __post_init__(self):
        if not math.isfinite(self.K):
            raise GeometryError("curvature must be finite")

    @property
    def radius(self) -> float:
        return math.inf if self.K == 0 else 1.0 / math.sqrt(abs(self.K))

    @property
    def dim(self) -> int:
        return 2 if self.K == 0 else 3

    def origin(self) -> np.ndarray:
        if self.K == 0:
            return np.zeros(2)
        if self.K > 0:
            return np.array([0.0, 0.0, self.radius])
        return np.array([self.radius, 0.0, 0.0])

    def curvature_at(self, P) -> float:
        return self.K

    # points and tangent vectors

    def project(self, P) -> np.ndarray:
        """Snap an approximate point back onto the model surface."""
        P = np.asarray(P, dtype=float)
        if self.K == 0:
            return P.copy()
        R = self.radius
        if self.K > 0:
            n = np.linalg.norm(P)
            if n == 0:
                raise GeometryError("cannot project the zero vector onto the sphere")
            return P * (R / n)
        x0 = math.sqrt(R * R + P[1] ** 2 + P[2] ** 2)
        return np.array([x0, P[1], P[2]])

    def residual(self, P) -> float:
        """Relative violation of the model constraint (0 in the plane)."""
        P = np.asarray(P, dtype=float)
        if self.K == 0:
            return 0.0
        R2 = self.radius**2
        if self.K > 0:
            return abs(float(P @ P) - R2) / R2
        return abs(_minkowski(P, P) + R2) / R2

    def inner(self, P, u, v) -> float:
        if self.K < 0:
            return float(_minkowski(u, v))
        return float(np.dot(u, v))

    def norm(self, P, u) -> float:
        return math.sqrt(max(self.inner(P, u, u), 0.0))

    def to_tangent(self, P, u) -> np.ndarray:
        """Orthogonal projection of an ambient vector onto the tangent plane at P."""
        u = np.asarray(u, dtype=float)
        if self.K == 0:
            return u.copy()
        R2 = self.radius**2
        if self.K > 0:
            return u - (P @ u) / R2 * P
        return u + _minkowski(P, u) / R2 * P

    def tangent_basis(self, P) -> tuple[np.ndarray, np.ndarray]:
        """Orthonormal frame at P, obtained by moving the origin frame to P.

        At the origin this is the identity frame used by :meth:`from_chart`.
        """
        if self.K == 0:
            return np.array([1.0, 0.0]), np.array([0.0, 1.0])
        p = np.asarray(P, dtype=float) / self.radius
        if self.K < 0:
            s = 1.0 + p[0]
            e1 = np.array([p[1], 1.0 + p[1] ** 2 / s, p[1] * p[2] / s])
            e2 = np.array([p[2], p[1] * p[2] / s, 1.0 + p[2] ** 2 / s])
            return e1, e2
        s = 1.0 + p[2]
        if s < 1e-8:
            # frame transported through the south pole is singular; any frame will do
            return np.array([1.0, 0.0, 0.0]), np.array([0.0, -1.0, 0.0])
        e1 = np.array([1.0 - p[0] ** 2 / s, -p[0] * p[1] / s, -p[0]])
        e2 = np.array([-p[0] * p[1] / s, 1.0 - p[1] ** 2 / s, -p[1]])
        return e1, e2

    def from_chart(self, xy) -> np.ndarray:
        """Point with Riemannian normal coordinates ``xy`` about the origin."""
        xy = np.asarray(xy, dtype=float)
        if xy.shape != (2,):
            raise GeometryError("chart coordinates must be a pair")
        if self.K == 0:
            return xy.copy()
        t = float(np.hypot(*xy))
        if t == 0:
            return self.origin()
        if self.K > 0 and t >= math.pi * self.radius:
            raise GeometryError("normal coordinates beyond the cut locus of the origin")
        e1, e2 = self.tangent_basis(self.origin())
        d = (xy[0] * e1 + xy[1] * e2) / t
        return self.exp_map(self.origin(), d, t)

    def to_chart(self, P) -> np.ndarray:
        """Inverse of :meth:`from_chart`."""
        P = np.asarray(P, dtype=float)
        if self.K == 0:
            return P.copy()
        o = self.origin()
        t = self.distance(o, P)
        e1, e2 = self.tangent_basis(o)
        v = np.array([self.inner(o, P, e1), self.inner(o, P, e2)])
        n = float(np.hypot(*v))
        if n == 0:
            return np.zeros(2)
        # tangential part has length R sin(t/R) (or sinh); rescale to t
        return v * (t / n)

    def point(self, coords) -> np.ndarray:
        """Build a point from chart coordinates (pair) or embedding coordinates."""
        coords = np.asarray(coords, dtype=float)
        if coords.shape == (2,):
            return self.from_chart(coords)
        if coords.shape == (3,) and self.K != 0:
            P = self.project(coords)
            if self.K < 0 and coords[0] <= 0:
                raise GeometryError("hyperboloid points must lie on the upper sheet")
            return P
        raise GeometryError(f"cannot interpret coordinates of shape {coords.shape}")

    # metric operations

    def distance(self, P, Q) -> float:
        P = np.asarray(P, dtype=float)
        Q = np.asarray(Q, dtype=float)
        if self.K == 0:
            return float(np.linalg.norm(Q - P))
        R = self.radius
        if self.K > 0:
            theta = math.atan2(float(np.linalg.norm(np.cross(P, Q))), float(P @ Q))
            if math.pi - theta <= ANTIPODAL_TOL:
                warnings.warn("antipodal points: geodesic is not unique",
                              NonUniqueGeodesicWarning, stacklevel=2)
            return R * theta
        diff = Q - P
        chord2 = max(_minkowski(diff, diff), 0.0)
        return R * 2.0 * math.asinh(math.sqrt(chord2) / (2.0 * R))

    def exp_map(self, P, d, t: float) -> np.ndarray:
        P = np.asarray(P, dtype=float)
        d = self.to_tangent(P, d)
        d = d / self.norm(P, d)
        if t == 0:
            return P.copy()
        if self.K == 0:
            return P + t * d
        R = self.radius
        if self.K > 0:
            return self.project(math.cos(t / R) * P + R * math.sin(t / R) * d)
        return self.project(math.cosh(t / R) * P + R * math.sinh(t / R) * d)

    def log_direction(self, P, Q) -> np.ndarray:
        """Unit tangent at P of the geodesic arc from P to Q."""
        P = np.asarray(P, dtype=float)
        Q = np.asarray(Q, dtype=float)
        if self.K == 0:
            diff = Q - P
            n = float(np.linalg.norm(diff))
            if n <= COINCIDENT_TOL * max(1.0, float(np.linalg.norm(P))):
                raise UndefinedDirectionError("direction between coincident points")
            return diff / n
        R = self.radius
        u = self.to_tangent(P, Q)
        n = self.norm(P, u)
        if n <= COINCIDENT_TOL * R:
            if self.K > 0 and P @ Q < 0:
                raise NonUniqueGeodesicError("antipodal points have no unique direction")
            raise UndefinedDirectionError("direction between coincident points")
        if self.K > 0 and math.pi * R - self.distance(P, Q) <= ANTIPODAL_TOL * R:
            raise NonUniqueGeodesicError("antipodal points have no unique direction")
        return u / n

    def branch(self, P, Q, hint=None):
        """Length and unit direction of the geodesic P -> Q in one call.

        ``hint`` exists for signature compatibility with surfaces whose
        geodesics are found by shooting; it is returned untouched.
        """
        return self.distance(P, Q), self.log_direction(P, Q), hint

    def centroid(self, points) -> np.ndarray:
        """Normalized mean of the embedding vectors."""
        return self.project(np.mean(np.asarray(points, dtype=float), axis=0))

    def chart_distance(self, P, Q) -> float:
        return self.distance(P, Q)

    def describe(self) -> dict:
        return {"kind": self.kind, "K": self.K}


def distance(geom, P, Q) -> float:
    return geom.distance(P, Q)


def exp_map(geom, P, direction, t: float):
    """Point at arclength ``t`` along the geodesic from P with unit ``direction``."""
    if t < 0:
        raise GeometryError("arclength must be nonnegative")
    return geom.exp_map(P, direction, t)


def log_direction(geom, P, Q):
    return geom.log_direction(P, Q)


def angle_between(geom, P, u, v) -> float:
    """Angle in [0, pi] between tangent vectors at P.

    ``2*atan2(|u - v|, |u + v|)`` stays accurate near 0 and pi, where the
    arccosine of the inner product does not.
    """
    u = u / geom.norm(P, u)
    v = v / geom.norm(P, v)
    return 2.0 * math.atan2(geom.norm(P, u - v), geom.norm(P, u + v))


def angle_at(geom, P, Q, R) -> float:
    """Angle at P between the geodesic arcs PQ and PR."""
    return angle_between(geom, P, geom.log_direction(P, Q), geom.log_direction(P, R))


class Excess(NamedTuple):
    value: float
    degenerate: bool


def aleksandrov_excess(geom, A, B, C, tol: float = 1e-12) -> Excess:
    """Signed angle excess ``angle A + angle B + angle C - pi`` of a geodesic triangle.

    A collinear (or coincident) triple returns ``Excess(0.0, True)``.
    """
    try:
        a = geom.distance(B, C)
        b = geom.distance(A, C)
        c = geom.distance(A, B)
    except DegenerateError:
        return Excess(0.0, True)
    perimeter = a + b + c
    if perimeter == 0 or min(b + c - a, a + c - b, a + b - c) <= tol * perimeter:
        return Excess(0.0, True)
    try:
        total = angle_at(geom, A, B, C) + angle_at(geom, B, A, C) + angle_at(geom, C, A, B)
    except UndefinedDirectionError:
        return Excess(0.0, True)
    return Excess(total - math.pi, False)
