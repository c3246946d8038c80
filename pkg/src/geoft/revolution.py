"""Geodesics on surfaces of revolution.

A surface is generated by rotating the profile ``(r(u), z(u))`` about the
z axis; points are chart pairs ``(u, v)`` with ``v`` the rotation angle.
The metric is ``E(u) du^2 + r(u)^2 dv^2`` with ``E = r'^2 + z'^2``.

Geodesics are integrated with a fixed-step classical Runge-Kutta scheme on
the state ``(u, v, u', v')``; two-point problems are solved by shooting on
the initial heading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .errors import (
    GeometryError,
    NoGeodesicFoundError,
    PoleSingularityError,
    UndefinedDirectionError,
)

TWO_PI = 2.0 * math.pi
POLE_TOL = 1e-6
DEFAULT_STEP = 1e-3
DEFAULT_SCAN = 64
MISS_TOL = 1e-9


def wrap_angle(x):
    """Reduce angles to (-pi, pi]."""
    y = np.mod(np.asarray(x, dtype=float) + math.pi, TWO_PI) - math.pi
    y = np.where(y == -math.pi, math.pi, y)
    return float(y) if np.ndim(y) == 0 else y


@dataclass(frozen=True)
class ProfileCurve:
    """Generating curve ``u -> (r(u), z(u))`` with analytic derivatives.

    The supplied first and second derivatives are compared against central
    differences at construction; a mismatch raises :class:`GeometryError`.
    """

    name: str
    r: Callable
    dr: Callable
    ddr: Callable
    z: Callable
    dz: Callable
    ddz: Callable
    u_min: float = -math.inf
    u_max: float = math.inf
    periodic: bool = False
    scale: float = 1.0
    params: tuple = ()
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if self.check:
            self.self_check()

    def sample_grid(self, n: int = 9) -> np.ndarray:
        lo = self.u_min if math.isfinite(self.u_min) else -2.0 * self.scale
        hi = self.u_max if math.isfinite(self.u_max) else 2.0 * self.scale
        return np.linspace(lo, hi, n + 2)[1:-1]

    def self_check(self, h: float = 1e-5, rtol: float = 1e-6):
        us = self.sample_grid()
        r = np.asarray(self.r(us), dtype=float) * np.ones_like(us)
        if np.any(r <= 0):
            raise GeometryError(f"profile {self.name!r}: r(u) must be positive inside the domain")
        pairs = [("r'", self.r, self.dr), ("r''", self.dr, self.ddr),
                 ("z'", self.z, self.dz), ("z''", self.dz, self.ddz)]
        for label, f, df in pairs:
            fd = (np.asarray(f(us + h)) - np.asarray(f(us - h))) / (2 * h)
            an = np.asarray(df(us), dtype=float) * np.ones_like(us)
            bad = np.abs(fd - an) > rtol * np.maximum(1.0, np.abs(an))
            if np.any(bad):
                u = us[np.argmax(bad)]
                raise GeometryError(
                    f"profile {self.name!r}: supplied {label} disagrees with finite differences at u={u:.4g}")

    def jet(self, u):
        """``(r, r', r'', z', z'')`` at ``u``."""
        return self.r(u), self.dr(u), self.ddr(u), self.dz(u), self.ddz(u)

    def metric(self, u):
        """Diagonal metric coefficients ``(E, G)``."""
        r, r1, _, z1, _ = self.jet(u)
        return r1 * r1 + z1 * z1, r * r

    def in_domain(self, u) -> bool:
        return self.periodic or (self.u_min < u < self.u_max)

    def describe(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}:" + ",".join(f"{p:g}" for p in self.params)


def _const(c):
    return lambda u: c + 0.0 * np.asarray(u, dtype=float)


def sphere_profile(rho: float = 1.0) -> ProfileCurve:
    return ProfileCurve(
        "sphere",
        r=lambda u: rho * np.sin(u), dr=lambda u: rho * np.cos(u), ddr=lambda u: -rho * np.sin(u),
        z=lambda u: -rho * np.cos(u), dz=lambda u: rho * np.sin(u), ddz=lambda u: rho * np.cos(u),
        u_min=0.0, u_max=math.pi, scale=rho, params=(rho,),
    )


def torus_profile(R: float = 2.0, rho: float = 1.0) -> ProfileCurve:
    if not R > rho > 0:
        raise GeometryError("torus needs R > r > 0")
    return ProfileCurve(
        "torus",
        r=lambda u: R + rho * np.cos(u), dr=lambda u: -rho * np.sin(u), ddr=lambda u: -rho * np.cos(u),
        z=lambda u: rho * np.sin(u), dz=lambda u: rho * np.cos(u), ddz=lambda u: -rho * np.sin(u),
        u_min=-math.pi, u_max=math.pi, periodic=True, scale=R + rho, params=(R, rho),
    )


def cylinder_profile(rho: float = 1.0) -> ProfileCurve:
    return ProfileCurve(
        "cylinder",
        r=_const(rho), dr=_const(0.0), ddr=_const(0.0),
        z=lambda u: 0.0 + np.asarray(u, dtype=float), dz=_const(1.0), ddz=_const(0.0),
        scale=rho, params=(rho,),
    )


BUILTIN_PROFILES = {"sphere": sphere_profile, "torus": torus_profile, "cylinder": cylinder_profile}


def profile_from_name(spec: str) -> ProfileCurve:
    """Parse ``"sphere:1"``, ``"torus:2,1"`` or ``"cylinder:1"``."""
    name, _, args = spec.partition(":")
    name = name.strip().lower()
    if name not in BUILTIN_PROFILES:
        raise GeometryError(f"unknown profile {name!r}; expected one of {sorted(BUILTIN_PROFILES)}")
    try:
        params = [float(a) for a in args.split(",") if a.strip()]
        return BUILTIN_PROFILES[name](*params)
    except TypeError as exc:
        raise GeometryError(f"bad parameters for profile {name!r}: {args!r}") from exc


def gaussian_curvature(profile: ProfileCurve, u: float) -> float:
    """Gaussian curvature of the surface of revolution at parameter ``u``.

    ``K = z'(r' z'' - r'' z') / (r (r'^2 + z'^2)^2)``, which is ``-r''/r``
    for a unit-speed profile.
    """
    if not profile.in_domain(u):
        raise GeometryError(f"u={u} outside the profile domain")
    r, r1, r2, z1, z2 = (float(x) for x in profile.jet(u))
    if abs(r) <= POLE_TOL * profile.scale:
        raise PoleSingularityError(f"profile radius vanishes at u={u}")
    E = r1 * r1 + z1 * z1
    return z1 * (r1 * z2 - r2 * z1) / (r * E * E)


# --- integration -------------------------------------------------------------------

def _rhs(profile: ProfileCurve, y: np.ndarray) -> np.ndarray:
    u, _, du, dv = y
    r, r1, r2, z1, z2 = profile.jet(u)
    E = r1 * r1 + z1 * z1
    dE = 2.0 * (r1 * r2 + z1 * z2)
    ddu = -0.5 * dE / E * du * du + r * r1 / E * dv * dv
    ddv = -2.0 * r1 / r * du * dv
    return np.array([du, dv, ddu, ddv])


def _rk4_step(profile, y, h):
    k1 = _rhs(profile, y)
    k2 = _rhs(profile, y + 0.5 * h * k1)
    k3 = _rhs(profile, y + 0.5 * h * k2)
    k4 = _rhs(profile, y + h * k3)
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _alive(profile, u):
    r = np.asarray(profile.r(u), dtype=float)
    ok = r > POLE_TOL * profile.scale
    if not profile.periodic:
        ok &= (u > profile.u_min) & (u < profile.u_max)
    return ok


def _integrate(profile, y0: np.ndarray, h: float, n: int) -> np.ndarray:
    """RK4 over ``n`` steps for a batch of states ``y0`` shaped ``(4, m)``.

    Rays that reach a pole (or leave a bounded domain) are frozen as NaN.
    """
    out = np.empty((n + 1,) + y0.shape)
    out[0] = y0
    y = y0.copy()
    with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
        for i in range(n):
            y = _rk4_step(profile, y, h)
            dead = ~_alive(profile, y[0])
            if np.any(dead):
                y[:, dead] = np.nan
            out[i + 1] = y
    return out


@dataclass
class GeodesicPath:
    """Samples ``(u, v, du/ds, dv/ds)`` along a unit-speed geodesic."""

    profile: ProfileCurve
    s: np.ndarray
    states: np.ndarray
    truncated: bool = False
    shoot_angle: float | None = None
    multiplicity: int = 1
    miss: float = 0.0

    @property
    def length(self) -> float:
        return float(self.s[-1])

    @property
    def start(self) -> np.ndarray:
        return self.states[0, :2].copy()

    @property
    def end(self) -> np.ndarray:
        u, v = self.states[-1, :2]
        if self.profile.periodic:
            u = wrap_angle(u)
        return np.array([u, wrap_angle(v)])

    @property
    def clairaut(self) -> np.ndarray:
        """``r^2 dv/ds``, i.e. ``r cos(theta)`` with theta measured from the parallel."""
        u, dv = self.states[:, 0], self.states[:, 3]
        return np.asarray(self.profile.r(u)) ** 2 * dv

    @property
    def clairaut_drift(self) -> float:
        """Largest departure from the initial Clairaut constant.

        Relative to ``r(u0)``, the largest value the constant can take.
        """
        c = self.clairaut
        return float(np.max(np.abs(c - c[0])) / float(self.profile.r(self.states[0, 0])))

    @property
    def speed_error(self) -> float:
        u, du, dv = self.states[:, 0], self.states[:, 2], self.states[:, 3]
        E, G = self.profile.metric(u)
        return float(np.max(np.abs(np.sqrt(E * du * du + G * dv * dv) - 1.0)))

    def summary(self) -> dict:
        return {
            "length": self.length,
            "start": self.start.tolist(),
            "end": self.end.tolist(),
            "samples": int(len(self.s)),
            "clairaut_constant": float(self.clairaut[0]),
            "clairaut_drift": self.clairaut_drift,
            "speed_error": self.speed_error,
            "truncated": self.truncated,
            "multiplicity": self.multiplicity,
            "shoot_angle": self.shoot_angle,
        }


def _check_off_pole(profile, P):
    if abs(float(profile.r(P[0]))) <= POLE_TOL * profile.scale:
        raise PoleSingularityError(f"point {tuple(P)} sits on a pole of the profile")
    if not profile.in_domain(P[0]):
        raise GeometryError(f"u={P[0]} outside the profile domain")


def unit_direction(profile, P, direction) -> np.ndarray:
    """Rescale chart components ``(du, dv)`` to unit length in the metric."""
    d = np.asarray(direction, dtype=float)
    E, G = profile.metric(P[0])
    n = math.sqrt(E * d[0] ** 2 + G * d[1] ** 2)
    if n == 0:
        raise GeometryError("zero tangent direction")
    return d / n


def heading_to_direction(profile, P, theta: float) -> np.ndarray:
    """Unit chart direction making angle ``theta`` with the u-axis (towards +v)."""
    E, G = profile.metric(P[0])
    return np.array([math.cos(theta) / math.sqrt(E), math.sin(theta) / math.sqrt(G)])


def direction_to_heading(profile, P, d) -> float:
    E, G = profile.metric(P[0])
    return math.atan2(math.sqrt(G) * d[1], math.sqrt(E) * d[0])


def geodesic_ivp(profile: ProfileCurve, start, direction, length: float,
                 step: float = DEFAULT_STEP) -> GeodesicPath:
    """Integrate the geodesic from ``start`` with initial chart direction ``direction``."""
    if step <= 0:
        raise GeometryError("integration step must be positive")
    if length < 0:
        raise GeometryError("length must be nonnegative")
    P = np.asarray(start, dtype=float)
    _check_off_pole(profile, P)
    d = unit_direction(profile, P, direction)
    y0 = np.array([P[0], P[1], d[0], d[1]])
    if length == 0:
        return GeodesicPath(profile, np.zeros(1), y0[None, :])
    n = max(1, math.ceil(length / step - 1e-9))
    h = length / n
    states = _integrate(profile, y0[:, None], h, n)[:, :, 0]
    s = h * np.arange(n + 1)
    bad = np.isnan(states[:, 0])
    if np.any(bad):
        k = int(np.argmax(bad))
        return GeodesicPath(profile, s[:k], states[:k], truncated=True)
    return GeodesicPath(profile, s, states)


def tangent_at_start(path: GeodesicPath) -> np.ndarray:
    """Unit initial direction ``(du/ds, dv/ds)`` of ``path``."""
    return unit_direction(path.profile, path.states[0, :2], path.states[0, 2:])


def _chart_delta(profile, P, Q):
    du = Q[0] - P[0]
    if profile.periodic:
        du = wrap_angle(du)
    return np.array([du, wrap_angle(Q[1] - P[1])])


def chart_line_length(profile, P, Q, n: int = 32) -> float:
    """Metric length of the straight chart segment P -> Q (an upper bound on distance)."""
    delta = _chart_delta(profile, P, Q)
    t = np.linspace(0.0, 1.0, n + 1)
    E, G = profile.metric(P[0] + t * delta[0])
    speed = np.sqrt(E * delta[0] ** 2 + G * delta[1] ** 2) * np.ones_like(t)
    w = np.ones(n + 1)
    w[1:-1:2], w[2:-1:2] = 4.0, 2.0
    return float(np.sum(w * speed) / (3.0 * n))


class _Shooter:
    """Miss function for rays from P aimed at Q, evaluated in batches."""

    def __init__(self, profile, P, Q, step):
        self.profile = profile
        self.P = np.asarray(P, dtype=float)
        self.Q = np.asarray(Q, dtype=float)
        d_line = chart_line_length(profile, P, Q)
        self.h = min(step, d_line / 32.0)
        self.L = 1.25 * d_line + 2.0 * self.h
        # scanning only needs the sign of the miss
        self.h_scan = max(self.h, self.L / 256.0)

    def _offset(self, y):
        # chart offset from the states y (4, m) to Q, metric at y
        du = self.Q[0] - y[0]
        if self.profile.periodic:
            du = wrap_angle(du)
        dv = wrap_angle(self.Q[1] - y[1])
        E, G = self.profile.metric(y[0])
        return du, dv, E, G

    def evaluate(self, thetas, coarse=False):
        """Signed miss, chart residual and arclength of closest approach per heading."""
        thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
        h = self.h_scan if coarse else self.h
        n = math.ceil(self.L / h)
        E0, G0 = self.profile.metric(self.P[0])
        y0 = np.vstack([
            np.full_like(thetas, self.P[0]), np.full_like(thetas, self.P[1]),
            np.cos(thetas) / math.sqrt(E0), np.sin(thetas) / math.sqrt(G0),
        ])
        traj = _integrate(self.profile, y0, h, n)
        with np.errstate(invalid="ignore"):
            du, dv, E, G = self._offset(np.moveaxis(traj, 1, 0))
            dist2 = E * du**2 + G * dv**2
        dist2 = np.where(np.isnan(dist2), np.inf, dist2)
        idx = np.argmin(dist2, axis=0)
        cols = np.arange(len(thetas))
        y = traj[idx, :, cols].T
        # closest approach: the tangent is orthogonal to the offset
        delta = np.zeros(len(thetas))
        with np.errstate(invalid="ignore", over="ignore"):
            for _ in range(4):
                yd = _rk4_step(self.profile, y, delta) if np.any(delta) else y
                du_, dv_, E_, G_ = self._offset(yd)
                along = E_ * yd[2] * du_ + G_ * yd[3] * dv_
                delta = np.clip(delta + np.nan_to_num(along), -h, h)
            yd = _rk4_step(self.profile, y, delta)
            du_, dv_, E_, G_ = self._offset(yd)
            miss = np.sqrt(E_ * G_) * (yd[2] * dv_ - yd[3] * du_)
            resid = np.sqrt(E_ * du_**2 + G_ * dv_**2)
        s = idx * h + delta
        interior = (idx > 0) & (idx < n) & np.isfinite(miss)
        miss = np.where(interior, miss, np.nan)
        return miss, resid, s

    def refine(self, lo, hi, max_iter: int = 80):
        """Roots of the miss function in the brackets ``[lo_i, hi_i]``.

        Illinois-modified false position (a bracketed secant iteration), run
        on all brackets at once.  Returns ``(theta, length, residual)`` for
        every bracket that converged below the miss tolerance.
        """
        a = np.asarray(lo, dtype=float).copy()
        b = np.asarray(hi, dtype=float).copy()
        if a.size == 0:
            return []
        fa = self.evaluate(a)[0]
        fb = self.evaluate(b)[0]
        ok = np.isfinite(fa) & np.isfinite(fb) & (fa * fb <= 0)
        side = np.zeros(a.shape, dtype=int)
        x = np.where(np.abs(fa) < np.abs(fb), a, b)
        for _ in range(max_iter):
            with np.errstate(invalid="ignore", divide="ignore"):
                x = np.where(fb != fa, b - fb * (b - a) / (fb - fa), 0.5 * (a + b))
            x = np.where(np.isfinite(x), x, 0.5 * (a + b))
            fx, resid, s = self.evaluate(x)
            ok &= np.isfinite(fx)
            if np.all(~ok | (resid < 0.01 * MISS_TOL)) or np.all(np.abs(b - a) < 1e-15):
                break
            left = fa * fx > 0
            # replace the endpoint whose sign matches; halve the stale one
            a = np.where(left, x, a)
            fa = np.where(left, fx, fa)
            fb = np.where(left & (side == 1), 0.5 * fb, fb)
            b = np.where(~left, x, b)
            fb = np.where(~left, fx, fb)
            fa = np.where(~left & (side == -1), 0.5 * fa, fa)
            side = np.where(left, 1, -1)
        return [(wrap_angle(t), float(l), float(r))
                for t, l, r, good in zip(x, s, resid, ok) if good and r < MISS_TOL]

    def brackets(self, thetas, misses):
        m = len(thetas)
        for k in range(m):
            a, b = misses[k], misses[(k + 1) % m]
            if np.isfinite(a) and np.isfinite(b) and (a == 0 or a * b < 0):
                lo = thetas[k]
                hi = thetas[k + 1] if k + 1 < m else thetas[0] + TWO_PI
                yield lo, hi


def geodesic_bvp(profile: ProfileCurve, P, Q, n_scan: int = DEFAULT_SCAN,
                 step: float = DEFAULT_STEP, guess: float | None = None) -> GeodesicPath:
    """Shortest geodesic from P to Q found by shooting on the initial heading.

    The heading is scanned at ``n_scan`` equispaced values; each sign change
    of the signed miss is refined until the chart miss drops below 1e-9.
    With ``guess`` (a heading from a previous, nearby solve) a narrow bracket
    around it is tried before falling back to the full scan.
    """
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    _check_off_pole(profile, P)
    _check_off_pole(profile, Q)
    if np.allclose(_chart_delta(profile, P, Q), 0.0, rtol=0.0, atol=1e-14):
        raise UndefinedDirectionError("boundary value problem between coincident points")
    shooter = _Shooter(profile, P, Q, step)

    candidates = []
    if guess is not None:
        width = math.pi / n_scan
        candidates = shooter.refine([guess - width], [guess + width])
    if not candidates:
        thetas = -math.pi + TWO_PI * np.arange(n_scan) / n_scan
        misses = shooter.evaluate(thetas, coarse=True)[0]
        pairs = list(shooter.brackets(thetas, misses))
        if pairs:
            lo, hi = zip(*pairs)
            candidates = shooter.refine(lo, hi)
    if not candidates:
        raise NoGeodesicFoundError(
            f"no connecting geodesic bracketed with a {n_scan}-heading scan", n_scan=n_scan)

    candidates.sort(key=lambda c: (c[1], c[0]))
    best = candidates[0]
    ties = sum(1 for c in candidates if abs(c[1] - best[1]) <= 1e-9 * max(best[1], 1.0)
               and abs(wrap_angle(c[0] - best[0])) > 1e-6)
    theta, length, resid = best
    path = geodesic_ivp(profile, P, heading_to_direction(profile, P, theta), length, step=shooter.h)
    path.shoot_angle = theta
    path.multiplicity = 1 + ties
    path.miss = resid
    return path


class CurvatureTriplet(NamedTuple):
    k1: float
    k2: float
    k3: float
    fallback: bool


def local_curvature_triplet(profile: ProfileCurve, F, tri) -> CurvatureTriplet:
    """Curvature at the chart centroids of the sub-triangles BFC, AFC and ABF.

    ``tri`` is anything with ``A``, ``B`` and ``C`` chart points (a
    :class:`geoft.solver.WeightedTriangle` or a plain triple).
    """
    if hasattr(tri, "A"):
        A, B, C = tri.A, tri.B, tri.C
    else:
        A, B, C = tri
    F = np.asarray(F, dtype=float)
    rel = {k: F + _chart_delta(profile, F, np.asarray(X, dtype=float))
           for k, X in (("A", A), ("B", B), ("C", C))}
    fallback = False
    ks = []
    for a, b in (("B", "C"), ("A", "C"), ("A", "B")):
        u = (F[0] + rel[a][0] + rel[b][0]) / 3.0
        if profile.periodic:
            u = wrap_angle(u)
        try:
            ks.append(gaussian_curvature(profile, u))
        except GeometryError:
            fallback = True
            ks.append(gaussian_curvature(profile, F[0]))
    return CurvatureTriplet(ks[0], ks[1], ks[2], fallback)


@dataclass(frozen=True)
class RevolutionSurface:
    """A surface of revolution, exposing the same operations as :class:`KPlane`."""

    profile: ProfileCurve
    step: float = DEFAULT_STEP
    n_scan: int = DEFAULT_SCAN
    kind = "revolution"
    dim = 2
    # shooting leaves ~1e-9 noise in distances, so gradients below this are noise
    gradient_floor = 1e-6

    def curvature_at(self, P) -> float:
        return gaussian_curvature(self.profile, float(P[0]))

    def project(self, P) -> np.ndarray:
        P = np.asarray(P, dtype=float)
        u = wrap_angle(P[0]) if self.profile.periodic else P[0]
        return np.array([u, wrap_angle(P[1])])

    def residual(self, P) -> float:
        return 0.0

    def point(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        if coords.shape != (2,):
            raise GeometryError("revolution surface points are (u, v) pairs")
        P = self.project(coords)
        _check_off_pole(self.profile, P)
        return P

    def delta(self, P, Q) -> np.ndarray:
        return _chart_delta(self.profile, P, Q)

    def inner(self, P, u, v) -> float:
        E, G = self.profile.metric(P[0])
        return float(E * u[0] * v[0] + G * u[1] * v[1])

    def norm(self, P, u) -> float:
        return math.sqrt(max(self.inner(P, u, u), 0.0))

    def to_tangent(self, P, u) -> np.ndarray:
        return np.asarray(u, dtype=float)

    def tangent_basis(self, P):
        E, G = self.profile.metric(P[0])
        return np.array([1.0 / math.sqrt(E), 0.0]), np.array([0.0, 1.0 / math.sqrt(G)])

    def bvp(self, P, Q, guess=None) -> GeodesicPath:
        return geodesic_bvp(self.profile, P, Q, n_scan=self.n_scan, step=self.step, guess=guess)

    def distance(self, P, Q) -> float:
        if np.allclose(self.delta(P, Q), 0.0, rtol=0.0, atol=1e-14):
            return 0.0
        return self.bvp(P, Q).length

    def exp_map(self, P, d, t: float) -> np.ndarray:
        if t == 0:
            return np.asarray(P, dtype=float).copy()
        path = geodesic_ivp(self.profile, P, d, t, step=self.step)
        if path.truncated:
            raise PoleSingularityError("geodesic ran into a pole of the profile")
        return path.end

    def log_direction(self, P, Q) -> np.ndarray:
        return tangent_at_start(self.bvp(P, Q))

    def branch(self, P, Q, hint=None):
        path = self.bvp(P, Q, guess=hint)
        return path.length, tangent_at_start(path), path.shoot_angle

    def centroid(self, points) -> np.ndarray:
        pts = [np.asarray(p, dtype=float) for p in points]
        base = pts[0]
        offset = np.mean([self.delta(base, p) for p in pts], axis=0)
        return self.project(base + offset)

    def chart_distance(self, P, Q) -> float:
        return float(np.linalg.norm(self.delta(P, Q)))

    def from_chart(self, xy) -> np.ndarray:
        return self.project(xy)

    def to_chart(self, P) -> np.ndarray:
        return self.project(P)

    def describe(self) -> dict:
        return {"kind": self.kind, "profile": self.profile.describe()}
