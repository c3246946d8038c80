"""Inverse problems: weights from branch angles, with and without a
residual weight ("subconscious") kept at the branching point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BalanceViolationError, DegenerateError, GeometryError, InconsistentAnglesError
from .kplane import aleksandrov_excess
from .solver import VERTICES, WeightTriple

TWO_PI = 2.0 * math.pi
ANGLE_SUM_TOL = 1e-9
SIN_TOL = 1e-12
BALANCE_TOL = 1e-12


def _check_angle_sum(phis):
    total = sum(phis)
    if abs(total - TWO_PI) > ANGLE_SUM_TOL:
        raise InconsistentAnglesError(f"branch angles sum to {total!r}, expected 2*pi")


def inverse_weights(phi_A: float, phi_B: float, phi_C: float, c: float = 1.0) -> WeightTriple:
    """Weights summing to ``c`` that make the given branch angles optimal.

    ``w_Q = c / (1 + sin(phi_R)/sin(phi_Q) + sin(phi_S)/sin(phi_Q))``, so
    each weight is proportional to the sine of its own angle.
    """
    phis = (phi_A, phi_B, phi_C)
    if not c > 0:
        raise GeometryError("normalization constant must be positive")
    _check_angle_sum(phis)
    sines = [math.sin(p) for p in phis]
    for q, s in zip(VERTICES, sines):
        if abs(s) < SIN_TOL:
            raise DegenerateError(f"sin(phi_{q}) = 0: inverse problem is degenerate")
    out = []
    for i in range(3):
        sq, sr, ss = sines[i], sines[(i + 1) % 3], sines[(i + 2) % 3]
        out.append(c / (1.0 + sr / sq + ss / sq))
    return WeightTriple(*out)


@dataclass
class SubconsciousWeights:
    """Weights ``w̄_A, w̄_B, w̄_C`` together with the residual weight ``w̄_S`` at F."""

    w_A: float
    w_B: float
    w_C: float
    w_S: float
    c: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.w_A, self.w_B, self.w_C)

    @property
    def total(self) -> float:
        return self.w_A + self.w_B + self.w_C

    @property
    def all_positive(self) -> bool:
        return all(w > 0 for w in self.as_tuple())

    @property
    def sum_matches(self) -> bool:
        return abs(self.total - self.c) <= BALANCE_TOL * max(1.0, abs(self.c))

    def pair_balance(self) -> dict:
        """Which of ``w̄_i + w̄_j = w̄_S + w̄_k`` hold, keyed by k."""
        out = {}
        scale = max(1.0, max(abs(x) for x in (*self.as_tuple(), self.w_S)))
        for k in VERTICES:
            i, j = (q for q in VERTICES if q != k)
            lhs = getattr(self, f"w_{i}") + getattr(self, f"w_{j}")
            rhs = self.w_S + getattr(self, f"w_{k}")
            out[k] = abs(lhs - rhs) <= BALANCE_TOL * scale
        return out

    def to_dict(self) -> dict:
        return {
            "w_bar": {q: getattr(self, f"w_{q}") for q in VERTICES},
            "w_bar_S": self.w_S,
            "c": self.c,
            "sum": self.total,
            "all_positive": self.all_positive,
            "sum_matches_c": self.sum_matches,
            "pair_balance": self.pair_balance(),
        }


def subconscious_weights(phi_B: float, phi_C: float, c: float, w_S: float) -> SubconsciousWeights:
    """Weights from two branch angles and a prescribed residual weight.

    ``w̄_A = -sin(phi_B + phi_C)/sin(phi_C) (c - w̄_S)/2``,
    ``w̄_B = sin(phi_B)/sin(phi_C) (c - w̄_S)/2`` and ``w̄_C = (c - w̄_S)/2``.
    Nothing forces the result to be positive or to sum to ``c``; the
    returned record reports both.
    """
    sc = math.sin(phi_C)
    if abs(sc) < SIN_TOL:
        raise DegenerateError("sin(phi_C) = 0")
    half = (c - w_S) / 2.0
    return SubconsciousWeights(
        w_A=-(math.sin(phi_B + phi_C) / sc) * half,
        w_B=(math.sin(phi_B) / sc) * half,
        w_C=half,
        w_S=w_S,
        c=c,
    )


def consistent_subconscious(phi_A: float, phi_B: float, phi_C: float, c: float) -> float:
    """The residual weight for which :func:`subconscious_weights` sums to ``c``.

    With ``S = (sin phi_A + sin phi_B + sin phi_C) / sin phi_C`` the sum is
    ``S (c - w̄_S)/2``, hence ``w̄_S = c (1 - 2/S)``.
    """
    phis = (phi_A, phi_B, phi_C)
    _check_angle_sum(phis)
    sc = math.sin(phi_C)
    if abs(sc) < SIN_TOL:
        raise DegenerateError("sin(phi_C) = 0")
    S = (math.sin(phi_A) + math.sin(phi_B) + sc) / sc
    if abs(S) < 1e-12:
        raise DegenerateError("sine sum vanishes; no consistent residual weight")
    w_S = c * (1.0 - 2.0 / S)
    check = subconscious_weights(phi_B, phi_C, c, w_S)
    if abs(check.total - c) > 1e-9 * max(1.0, abs(c)):
        raise DegenerateError(f"substitution check failed: weights sum to {check.total!r}")
    return w_S


@dataclass(frozen=True)
class MassFlow:
    """Outbound masses ``w_*`` and inbound masses ``wt_*`` along the branches."""

    w_A: float
    w_B: float
    w_C: float
    w_S: float
    wt_A: float
    wt_B: float
    wt_C: float
    wt_S: float

    def outflow_residual(self) -> float:
        return self.w_A + self.w_B - self.w_C - self.w_S

    def inflow_residual(self) -> float:
        return self.wt_A + self.wt_B + self.wt_S - self.wt_C

    def scale(self) -> float:
        return max(1.0, max(abs(x) for x in self.__dict__.values()))

    def validate(self, tol: float = BALANCE_TOL):
        for name, x in self.__dict__.items():
            if not (math.isfinite(x) and x >= 0):
                raise BalanceViolationError(f"mass {name} must be a nonnegative number", equation=None)
        if abs(self.outflow_residual()) > tol * self.scale():
            raise BalanceViolationError(
                f"outflow balance w_A + w_B = w_C + w_S violated by {self.outflow_residual():.3e}",
                equation="outflow")
        if abs(self.inflow_residual()) > tol * self.scale():
            raise BalanceViolationError(
                f"inflow balance wt_A + wt_B + wt_S = wt_C violated by {self.inflow_residual():.3e}",
                equation="inflow")


def mass_flow_reduce(flow: MassFlow) -> SubconsciousWeights:
    """Net weights of a two-way mass flow.

    ``w̄_R = w_R + wt_R`` at each vertex and ``w̄_S = w_S - wt_S`` at F; the
    two input balances then force ``w̄_A + w̄_B = w̄_C + w̄_S``.
    """
    flow.validate()
    out = SubconsciousWeights(
        w_A=flow.w_A + flow.wt_A,
        w_B=flow.w_B + flow.wt_B,
        w_C=flow.w_C + flow.wt_C,
        w_S=flow.w_S - flow.wt_S,
        c=0.0,
    )
    out.c = out.total
    gap = out.w_A + out.w_B - out.w_C - out.w_S
    assert abs(gap) <= 4 * BALANCE_TOL * flow.scale(), f"net balance off by {gap}"
    return out


@dataclass
class Phase2Result:
    weights: SubconsciousWeights
    excess: float
    feasible: bool

    def to_dict(self) -> dict:
        d = self.weights.to_dict()
        d.update({"excess": self.excess, "feasible": self.feasible})
        return d


def evolution_phase2(geom, A, B, C, phi_B: float, phi_C: float) -> Phase2Result:
    """Residual weight equal to the absolute angle excess of ABC, with c = 1.

    Once the excess reaches 1 the common factor ``(1 - w̄_S)/2`` is no
    longer positive, and the result is flagged infeasible.
    """
    exc = aleksandrov_excess(geom, A, B, C)
    if exc.degenerate:
        raise DegenerateError("degenerate triangle has no angle excess")
    w_S = abs(exc.value)
    weights = subconscious_weights(phi_B, phi_C, 1.0, w_S)
    return Phase2Result(weights, exc.value, w_S < 1.0)


def phase1_subconscious(geom, F) -> float:
    """Absolute Gaussian curvature at F."""
    return abs(geom.curvature_at(F))
