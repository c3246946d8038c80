"""Weighted Fermat-Torricelli point of a geodesic triangle.

The solver runs geodesic descent on ``f(F) = sum_Q w_Q l_Q(F)``.  The
negative gradient of ``f`` at F is ``g = sum_Q w_Q U_FQ`` (``U_FQ`` the unit
tangent of the branch towards vertex Q), so the stopping test ``|g| < tol``
is also the balance condition at the optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ConvergenceError, DegenerateError, GeometryError, UndefinedDirectionError
from .kplane import angle_between, angle_at

VERTICES = ("A", "B", "C")

# vertex angles this close to 0 or pi mean the triangle is collinear
DEGENERATE_ANGLE = 1e-9


def _others(q: str) -> tuple[str, str]:
    i = VERTICES.index(q)
    return VERTICES[(i + 1) % 3], VERTICES[(i + 2) % 3]


@dataclass(frozen=True)
class WeightTriple:
    w_A: float
    w_B: float
    w_C: float

    def __post_init__(self):
        for q, w in zip(VERTICES, self.as_tuple()):
            if not (math.isfinite(w) and w > 0):
                raise GeometryError(f"weight w_{q} must be a positive finite number, got {w}")

    @classmethod
    def of(cls, values) -> "WeightTriple":
        if isinstance(values, WeightTriple):
            return values
        if isinstance(values, dict):
            return cls(*(float(values[q]) for q in VERTICES))
        return cls(*(float(v) for v in values))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.w_A, self.w_B, self.w_C)

    def __getitem__(self, q: str) -> float:
        return getattr(self, f"w_{q}")

    def __iter__(self):
        return iter(self.as_tuple())

    @property
    def total(self) -> float:
        return self.w_A + self.w_B + self.w_C

    @property
    def interior_feasible(self) -> bool:
        """Strict triangle inequalities among the weights."""
        a, b, c = self.as_tuple()
        return abs(b - c) < a < b + c and abs(a - c) < b < a + c and abs(a - b) < c < a + b

    def scaled(self, lam: float) -> "WeightTriple":
        return WeightTriple(*(lam * w for w in self.as_tuple()))


@dataclass(frozen=True)
class WeightedTriangle:
    geom: object
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    weights: WeightTriple

    def __post_init__(self):
        object.__setattr__(self, "weights", WeightTriple.of(self.weights))
        for q in VERTICES:
            object.__setattr__(self, q, np.asarray(getattr(self, q), dtype=float))
        for p, q in (("A", "B"), ("B", "C"), ("A", "C")):
            if self.geom.chart_distance(self[p], self[q]) == 0:
                raise GeometryError(f"vertices {p} and {q} coincide")

    def __getitem__(self, q: str) -> np.ndarray:
        return getattr(self, q)

    def vertices(self) -> list[np.ndarray]:
        return [self.A, self.B, self.C]

    def diameter(self) -> float:
        g = self.geom
        return max(g.distance(self.A, self.B), g.distance(self.B, self.C), g.distance(self.A, self.C))

    def permuted(self, order: str) -> "WeightedTriangle":
        """Relabel vertices, e.g. ``order="BCA"`` puts the old B in slot A."""
        pts = [self[q] for q in order]
        ws = [self.weights[q] for q in order]
        return WeightedTriangle(self.geom, *pts, WeightTriple(*ws))


@dataclass
class SolverOptions:
    """Descent settings.

    ``method="newton"`` scales the move by the inverse Hessian of the
    objective (closed form on the K-planes); ``"gradient"`` walks along
    ``g/|g|`` itself.  ``step`` is the initial step factor; for the gradient
    method, ``None`` means ``1 / sum_Q(w_Q / l_Q)`` (the Weiszfeld step in
    the flat case).
    """

    tol: float = 1e-10
    max_iter: int = 10_000
    step: float | None = None
    backtrack: float = 0.5
    method: str = "newton"


class Classification(NamedTuple):
    case: str
    vertex: str | None
    norms: dict


def floating_case(tri: WeightedTriangle) -> Classification:
    """Decide whether the minimizer floats inside the triangle.

    At each vertex P the norm ``|w_Q U_PQ + w_S U_PS|`` is compared with
    ``w_P``; the point floats iff all three strict inequalities hold.
    """
    g = tri.geom
    norms = {}
    failed = []
    for p in VERTICES:
        q, s = _others(p)
        wq, ws = tri.weights[q], tri.weights[s]
        try:
            ang = angle_at(g, tri[p], tri[q], tri[s])
        except UndefinedDirectionError as exc:
            raise DegenerateError("degenerate triangle") from exc
        if min(ang, math.pi - ang) <= DEGENERATE_ANGLE:
            raise DegenerateError(f"degenerate (collinear) triangle: angle at {p} is {ang:.17g}")
        n = math.sqrt(max(wq * wq + ws * ws + 2 * wq * ws * math.cos(ang), 0.0))
        norms[p] = n
        if not n > tri.weights[p]:
            failed.append(p)
    if len(failed) > 1:
        raise DegenerateError(f"inequalities fail at several vertices {failed}; triangle is degenerate")
    if failed:
        return Classification("vertex", failed[0], norms)
    return Classification("interior", None, norms)


@dataclass
class FTTree:
    F: np.ndarray
    l_A: float
    l_B: float
    l_C: float
    phi_A: float
    phi_B: float
    phi_C: float
    objective: float
    balance_residual: float
    case: str
    vertex: str | None = None
    iterations: int = 0
    weights: WeightTriple | None = None
    hints: dict = field(default_factory=dict, repr=False)

    def length(self, q: str) -> float:
        return getattr(self, f"l_{q}")

    def angle(self, q: str) -> float:
        return getattr(self, f"phi_{q}")

    @property
    def angles(self) -> tuple[float, float, float]:
        return (self.phi_A, self.phi_B, self.phi_C)

    @property
    def lengths(self) -> tuple[float, float, float]:
        return (self.l_A, self.l_B, self.l_C)

    def to_dict(self, degrees: bool = False) -> dict:
        conv = math.degrees if degrees else float

        def ang(x):
            return None if x is None or math.isnan(x) else conv(x)

        return {
            "F": [float(x) for x in self.F],
            "case": self.case,
            "vertex": self.vertex,
            "lengths": {q: float(self.length(q)) for q in VERTICES},
            "angles": {q: ang(self.angle(q)) for q in VERTICES},
            "angle_unit": "degrees" if degrees else "radians",
            "objective": float(self.objective),
            "balance_residual": None if math.isnan(self.balance_residual) else float(self.balance_residual),
            "iterations": self.iterations,
        }


class _Branches(NamedTuple):
    lengths: dict
    dirs: dict
    hints: dict
    objective: float
    gradient: np.ndarray


def _branches(tri: WeightedTriangle, F, hints=None) -> _Branches:
    g = tri.geom
    hints = hints or {}
    lengths, dirs, new_hints = {}, {}, {}
    grad = 0.0
    for q in VERTICES:
        lq, uq, hq = g.branch(F, tri[q], hints.get(q))
        lengths[q], dirs[q], new_hints[q] = lq, uq, hq
        grad = grad + tri.weights[q] * uq
    f = sum(tri.weights[q] * lengths[q] for q in VERTICES)
    return _Branches(lengths, dirs, new_hints, f, np.asarray(grad, dtype=float))


def objective(tri: WeightedTriangle, F) -> float:
    """Weighted length ``w_A l_A(F) + w_B l_B(F) + w_C l_C(F)``."""
    g = tri.geom
    return sum(tri.weights[q] * g.distance(F, tri[q]) for q in VERTICES)


def branch_angles(geom, F, dirs: dict) -> dict:
    """Angles at F between branches; ``phi_Q`` is opposite the branch to Q."""
    out = {}
    for q in VERTICES:
        r, s = _others(q)
        out[q] = angle_between(geom, F, dirs[r], dirs[s])
    return out


def cot_k(K: float, l: float) -> float:
    """``sn_K'(l)/sn_K(l)``: the curvature of a distance circle of radius l."""
    if abs(K) * l * l < 1e-12:
        return 1.0 / l - K * l / 3.0
    if K > 0:
        k = math.sqrt(K)
        return k / math.tan(k * l)
    k = math.sqrt(-K)
    return k / math.tanh(k * l)


def _newton_direction(tri: WeightedTriangle, F, br: "_Branches"):
    """Solve ``H delta = g`` in an orthonormal frame at F.

    ``H = sum_Q w_Q cot_K(l_Q) (I - u_Q u_Q^T)`` is the Hessian of the
    objective on a K-plane; elsewhere it uses the curvature at F.
    Returns None when H is not positive definite.
    """
    g = tri.geom
    K = g.curvature_at(F)
    e1, e2 = g.tangent_basis(F)

    def coords(v):
        return np.array([g.inner(F, v, e1), g.inner(F, v, e2)])

    H = np.zeros((2, 2))
    for q in VERTICES:
        c = cot_k(K, br.lengths[q])
        u = coords(br.dirs[q])
        H += tri.weights[q] * c * (np.eye(2) - np.outer(u, u))
    gc = coords(br.gradient)
    try:
        if np.linalg.eigvalsh(H)[0] <= 0:
            return None
        delta = np.linalg.solve(H, gc)
    except np.linalg.LinAlgError:
        return None
    if delta @ gc <= 0:
        return None
    return delta[0] * e1 + delta[1] * e2


def _vertex_tree(tri: WeightedTriangle, q: str) -> FTTree:
    g = tri.geom
    F = tri[q].copy()
    r, s = _others(q)
    lengths = {q: 0.0, r: g.distance(F, tri[r]), s: g.distance(F, tri[s])}
    phis = {q: angle_at(g, F, tri[r], tri[s]), r: math.nan, s: math.nan}
    f = sum(tri.weights[x] * lengths[x] for x in VERTICES)
    return FTTree(F, lengths["A"], lengths["B"], lengths["C"], phis["A"], phis["B"], phis["C"],
                  f, math.nan, "vertex", q, 0, tri.weights)


def _line_search(tri, F, cur, d, t, backtrack, max_halvings, c1=1e-4):
    """Backtrack along the unit direction d until sufficient decrease."""
    g = tri.geom
    slope = g.inner(F, cur.gradient, d)
    slack = 4 * np.finfo(float).eps * abs(cur.objective)
    for _ in range(max_halvings + 1):
        try:
            F_new = g.exp_map(F, d, t)
            new = _branches(tri, F_new, cur.hints)
        except UndefinedDirectionError:
            t *= backtrack
            continue
        if new.objective <= cur.objective - c1 * t * slope + slack:
            return F_new, new
        t *= backtrack
    return None


def solve_ft(tri: WeightedTriangle, opts: SolverOptions | None = None) -> FTTree:
    """Minimize the weighted branch length over the surface.

    A vertex-case triangle returns the heavy vertex directly.  Otherwise the
    iteration starts at the centroid and moves ``F <- exp_F(t g/|g|)`` with
    ``t = step * |g|`` halved by ``opts.backtrack`` until the objective does
    not increase.
    """
    opts = opts or SolverOptions()
    cls = floating_case(tri)
    if cls.case == "vertex":
        return _vertex_tree(tri, cls.vertex)

    g = tri.geom
    start = g.centroid(tri.vertices())
    chart_radius = 2.0 * max(g.chart_distance(start, X) for X in tri.vertices())
    F = start
    cur = _branches(tri, F)
    best_F, best = F, cur
    it = 0
    gnorm = g.norm(F, cur.gradient)
    while gnorm >= opts.tol:
        if it >= opts.max_iter:
            raise ConvergenceError(
                f"no convergence after {it} iterations (|g| = {gnorm:.3e})",
                best_point=best_F, residual=g.norm(best_F, best.gradient), iterations=it)
        it += 1
        step = None
        move = _newton_direction(tri, F, cur) if opts.method == "newton" else None
        if move is not None:
            mnorm = g.norm(F, move)
            t = mnorm * (1.0 if opts.step is None else opts.step)
            # a cone-like objective near a vertex defeats Newton; give up early
            step = _line_search(tri, F, cur, move / mnorm, t, opts.backtrack, 4)
        if step is None:
            if opts.step is None:
                alpha = 1.0 / sum(tri.weights[q] / cur.lengths[q] for q in VERTICES)
            else:
                alpha = opts.step
            step = _line_search(tri, F, cur, cur.gradient / gnorm, alpha * gnorm, opts.backtrack, 60)
        if step is None and gnorm < getattr(g, "gradient_floor", 0.0) * tri.weights.total:
            # no further decrease is resolvable; accept and report the residual
            break
        if step is None:
            raise ConvergenceError(
                f"line search stalled at iteration {it} (|g| = {gnorm:.3e})",
                best_point=best_F, residual=g.norm(best_F, best.gradient), iterations=it)
        F_new, new = step
        F, cur = F_new, new
        if g.kind == "revolution" and g.chart_distance(start, F) > chart_radius:
            raise GeometryError("iterate left the chart neighbourhood of the triangle")
        if cur.objective <= best.objective:
            best_F, best = F, cur
        gnorm = g.norm(F, cur.gradient)

    phis = branch_angles(g, F, cur.dirs)
    L = cur.lengths
    return FTTree(F, L["A"], L["B"], L["C"], phis["A"], phis["B"], phis["C"],
                  cur.objective, gnorm, "interior", None, it, tri.weights, cur.hints)


def balance_vector(tri: WeightedTriangle, F) -> np.ndarray:
    return _branches(tri, F).gradient


def verify_balance(tree: FTTree, tri: WeightedTriangle) -> float:
    """``|w_A U_FA + w_B U_FB + w_C U_FC|`` recomputed at ``tree.F``."""
    if tree.case != "interior":
        raise GeometryError("balance condition only applies to an interior minimizer")
    return tri.geom.norm(tree.F, balance_vector(tri, tree.F))


def angles_from_weights(w) -> tuple[float, float, float]:
    """Branch angles at an interior optimum from the weights alone.

    ``cos(phi_Q) = (w_Q^2 - w_R^2 - w_S^2) / (2 w_R w_S)``.
    """
    w = WeightTriple.of(w)
    out = []
    for q in VERTICES:
        r, s = _others(q)
        wq, wr, ws = w[q], w[r], w[s]
        c = (wq * wq - wr * wr - ws * ws) / (2.0 * wr * ws)
        if not -1.0 < c < 1.0:
            raise DegenerateError(
                f"weights {w.as_tuple()} violate the strict triangle inequality (cos phi_{q} = {c:.6g})")
        out.append(math.acos(c))
    return tuple(out)


def balance_equations(w, phi) -> tuple[float, float, float]:
    """Residuals of the three first-variation balance equations.

    ``w_A + w_B cos phi_C + w_C cos phi_B`` and its two cyclic companions;
    all vanish at an interior optimum.  ``w`` may hold signed values.
    """
    wA, wB, wC = (w.as_tuple() if isinstance(w, WeightTriple) else tuple(w))
    cA, cB, cC = (math.cos(p) for p in phi)
    return (
        wA + wB * cC + wC * cB,
        wA * cC + wB + wC * cA,
        wA * cB + wB * cA + wC,
    )


@dataclass
class FirstVariation:
    toward: str
    h: float
    measured: dict
    predicted: dict

    def error(self, q: str) -> float:
        return abs(self.measured[q] - self.predicted[q])

    @property
    def max_error(self) -> float:
        return max(self.error(q) for q in VERTICES)


def first_variation_check(tri: WeightedTriangle, tree: FTTree, toward: str = "B",
                          h: float | None = None) -> FirstVariation:
    """Move F a distance ``h`` along the branch towards ``toward`` and
    compare the change of every branch length with the first-variation
    prediction: ``-1`` for the branch walked along, ``cos(pi - phi_Y)`` for
    a branch X, Y being the remaining vertex.
    """
    if tree.case != "interior":
        raise GeometryError("first variation check needs an interior tree")
    if toward not in VERTICES:
        raise GeometryError(f"unknown vertex {toward!r}")
    if h is None:
        h = 1e-5 * tri.diameter()
    if h < 1e-12:
        raise GeometryError(f"step h={h:g} is below the round-off floor 1e-12")
    g = tri.geom
    F = tree.F
    d = g.log_direction(F, tri[toward])
    F2 = g.exp_map(F, d, h)
    measured, predicted = {}, {}
    for q in VERTICES:
        measured[q] = (g.distance(F2, tri[q]) - g.distance(F, tri[q])) / h
        if q == toward:
            predicted[q] = -1.0
        else:
            (y,) = set(VERTICES) - {q, toward}
            predicted[q] = math.cos(math.pi - tree.angle(y))
    return FirstVariation(toward, h, measured, predicted)


def measured_angles(tri: WeightedTriangle, F) -> tuple[float, float, float]:
    """Angles at F between the geodesics to the vertices, recomputed from scratch."""
    g = tri.geom
    return tuple(angle_at(g, F, tri[r], tri[s]) for r, s in (_others(q) for q in VERTICES))
