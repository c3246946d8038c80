"""SVG figures of Fermat-Torricelli trees.

Each geometry is drawn in its own flat picture: azimuthal equidistant
about the triangle centroid for K > 0, the Poincaré disk for K < 0, plain
coordinates for K = 0 and the (v, u) chart for surfaces of revolution.
Output is byte-for-byte reproducible.
"""

from __future__ import annotations

import math

import matplotlib
import numpy as np
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

from .revolution import geodesic_ivp, tangent_at_start
from .solver import VERTICES

SAMPLES = 64

RC = {
    "svg.hashsalt": "geoft",
    "svg.fonttype": "none",
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.linewidth": 0.6,
}


def _sig(x: float) -> str:
    return f"{x:.4g}"


class _Projection:
    def __init__(self, geom, center):
        self.geom = geom
        self.center = center
        if geom.kind == "constant-curvature" and geom.K > 0:
            self.frame = geom.tangent_basis(center)

    def __call__(self, P) -> np.ndarray:
        g = self.geom
        if g.kind == "revolution":
            d = g.delta(self.center, P)
            return np.array([self.center[1] + d[1], self.center[0] + d[0]])
        if g.K == 0:
            return np.asarray(P, dtype=float)
        if g.K < 0:
            p = np.asarray(P) / g.radius
            return p[1:] / (1.0 + p[0])
        t = g.distance(self.center, P)
        if t == 0:
            return np.zeros(2)
        u = g.log_direction(self.center, P)
        e1, e2 = self.frame
        return t * np.array([g.inner(self.center, u, e1), g.inner(self.center, u, e2)])


def geodesic_samples(geom, P, Q, n: int = SAMPLES) -> list[np.ndarray]:
    """``n + 1`` points along the geodesic from P to Q."""
    if geom.kind == "revolution":
        path = geom.bvp(P, Q)
        if path.length == 0:
            return [np.asarray(P)] * (n + 1)
        fine = geodesic_ivp(geom.profile, P, tangent_at_start(path), path.length, step=path.length / n)
        return [fine.states[i, :2] for i in range(len(fine.s))]
    L = geom.distance(P, Q)
    if L == 0:
        return [np.asarray(P)] * (n + 1)
    d = geom.log_direction(P, Q)
    return [geom.exp_map(P, d, s) for s in np.linspace(0.0, L, n + 1)]


def build_figure(tree, tri, title: str | None = None) -> Figure:
    geom = tri.geom
    center = geom.centroid(tri.vertices())
    proj = _Projection(geom, center)
    fig = Figure(figsize=(5.0, 5.0))
    ax = fig.add_subplot(1, 1, 1)
    ax.set_aspect("equal")

    def draw(P, Q, **kw):
        xy = np.array([proj(X) for X in geodesic_samples(geom, P, Q)])
        ax.plot(xy[:, 0], xy[:, 1], **kw)

    for p, q in (("A", "B"), ("B", "C"), ("C", "A")):
        draw(tri[p], tri[q], color="0.55", lw=0.9)
    for q in VERTICES:
        if tree.length(q) > 0:
            draw(tree.F, tri[q], color="tab:red", lw=1.4)

    for q in VERTICES:
        x, y = proj(tri[q])
        ax.plot([x], [y], "o", color="black", ms=4)
        ax.annotate(f"{q}  w={_sig(tri.weights[q])}", (x, y), xytext=(4, 4),
                    textcoords="offset points")
    fx, fy = proj(tree.F)
    ax.plot([fx], [fy], "s", color="tab:red", ms=4)
    phis = ", ".join(f"φ{q}={_sig(tree.angle(q))}" for q in VERTICES if not math.isnan(tree.angle(q)))
    ax.annotate(f"F  {phis}", (fx, fy), xytext=(4, -12), textcoords="offset points", color="tab:red")

    if geom.kind == "constant-curvature" and geom.K < 0:
        t = np.linspace(0.0, 2 * math.pi, 257)
        ax.plot(np.cos(t), np.sin(t), color="0.8", lw=0.6)
    if geom.kind == "revolution":
        ax.set_xlabel("v")
        ax.set_ylabel("u")
    if title is None:
        title = f"{_geometry_label(geom)}   f(F) = {_sig(tree.objective)}"
    ax.set_title(title)
    return fig


def _geometry_label(geom) -> str:
    if geom.kind == "revolution":
        return geom.profile.describe()
    if geom.K > 0:
        return f"K = {geom.K:g} (azimuthal equidistant)"
    if geom.K < 0:
        return f"K = {geom.K:g} (Poincaré disk)"
    return f"K = {geom.K:g}"


def render_svg(tree, tri, path, title: str | None = None):
    """Write the tree over its triangle as an SVG 1.1 file."""
    with matplotlib.rc_context(RC):
        fig = build_figure(tree, tri, title)
        FigureCanvasSVG(fig)
        fig.savefig(path, format="svg", metadata={"Date": None, "Creator": "geoft"})
    return path
