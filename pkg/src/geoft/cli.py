"""Command-line front end.

    geoft solve instance.json [--svg tree.svg]
    geoft verify instance.json
    geoft inverse|subconscious|massflow|evolve|geodesic|excess instance.json
    geoft solve --batch instances/ [--jobs 4]

Results go to stdout as JSON.  Exit status: 0 success, 2 invalid input,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConvergenceError, GeometryError, NoGeodesicFoundError
from .instance import InstanceError, load, parse
from .inverse import (
    MassFlow,
    consistent_subconscious,
    evolution_phase2,
    inverse_weights,
    mass_flow_reduce,
    phase1_subconscious,
    subconscious_weights,
)
from .kplane import aleksandrov_excess
from .revolution import geodesic_bvp, geodesic_ivp, heading_to_direction
from .solver import (
    VERTICES,
    angles_from_weights,
    balance_equations,
    first_variation_check,
    measured_angles,
    solve_ft,
    verify_balance,
)

COMMANDS = ("solve", "verify", "inverse", "subconscious", "massflow", "evolve", "geodesic", "excess")
EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3
SCHEMA_VERSION = 1

BALANCE_THRESHOLD = 1e-8
ANGLE_THRESHOLD = 1e-6


class Failure(Exception):
    def __init__(self, code, payload):
        super().__init__(payload.get("error"))
        self.code = code
        self.payload = payload


def _angles_out(values: dict, degrees: bool) -> dict:
    return {q: (math.degrees(v) if degrees else v) for q, v in values.items()}


def _apply_overrides(doc: dict, args) -> dict:
    opts = dict(doc.get("options", {}))
    for key, attr in (("tol", "tol"), ("max_iter", "max_iter"), ("step", "step"),
                      ("backtrack", "backtrack"), ("scan", "scan"), ("ode_step", "ode_step"),
                      ("method", "method")):
        value = getattr(args, attr, None)
        if value is not None:
            opts[key] = value
    if opts:
        doc = dict(doc, options=opts)
    return doc


def cmd_solve(inst, args):
    tri = inst.triangle()
    tree = solve_ft(tri, inst.options())
    if args.svg:
        from .plotting import render_svg
        render_svg(tree, tri, args.svg)
    return {"tree": tree.to_dict(args.degrees)}


def cmd_verify(inst, args):
    tri = inst.triangle()
    tree = solve_ft(tri, inst.options())
    out = {"tree": tree.to_dict(args.degrees)}
    if tree.case != "interior":
        out["applicable"] = False
        out["passed"] = True
        return out
    residual = verify_balance(tree, tri)
    measured = measured_angles(tri, tree.F)
    predicted = angles_from_weights(tri.weights)
    angle_err = max(abs(m - p) for m, p in zip(measured, predicted))
    eqs = balance_equations(tri.weights, measured)
    fv = inst.doc.get("first_variation", {})
    towards = [fv["toward"]] if "toward" in fv else list(VERTICES)
    variations = {}
    for q in towards:
        res = first_variation_check(tri, tree, q, fv.get("h"))
        variations[q] = {
            "h": res.h,
            "measured": res.measured,
            "predicted": res.predicted,
            "max_error": res.max_error,
        }
    out.update({
        "applicable": True,
        "balance_residual": residual,
        "angle_law": {
            "measured": _angles_out(dict(zip(VERTICES, measured)), args.degrees),
            "predicted": _angles_out(dict(zip(VERTICES, predicted)), args.degrees),
            "max_error_rad": angle_err,
        },
        "angle_sum_error_rad": abs(sum(measured) - 2 * math.pi),
        "balance_equations": list(eqs),
        "first_variation": variations,
        "passed": residual < BALANCE_THRESHOLD and angle_err < ANGLE_THRESHOLD,
    })
    if args.svg:
        from .plotting import render_svg
        render_svg(tree, tri, args.svg)
    return out


def cmd_inverse(inst, args):
    a = inst.angles("ABC")
    c = inst.doc.get("c", 1.0)
    w = inverse_weights(a["A"], a["B"], a["C"], c)
    return {"weights": dict(zip(VERTICES, w.as_tuple())), "c": c}


def cmd_subconscious(inst, args):
    a = inst.angles("BC")
    c = inst.doc.get("c", 1.0)
    if "w_bar_S" in inst.doc:
        w_S, source = float(inst.doc["w_bar_S"]), "given"
    elif "A" in a:
        w_S, source = consistent_subconscious(a["A"], a["B"], a["C"], c), "sum-consistent"
    else:
        raise InstanceError("w_bar_S: required unless all three angles are given", field="w_bar_S")
    out = subconscious_weights(a["B"], a["C"], c, w_S).to_dict()
    out["w_bar_S_source"] = source
    return out


def cmd_massflow(inst, args):
    flow = MassFlow(**inst.doc["flow"])
    checks = {
        "outflow": abs(flow.outflow_residual()) <= 1e-12 * flow.scale(),
        "inflow": abs(flow.inflow_residual()) <= 1e-12 * flow.scale(),
    }
    out = {"input_balance": checks}
    out.update(mass_flow_reduce(flow).to_dict())
    return out


def cmd_evolve(inst, args):
    geom = inst.geometry()
    A, B, C = inst.vertices(geom)
    a = inst.angles("BC")
    if "point" in inst.doc:
        F, source = inst.point(geom, inst.doc["point"], "point"), "given"
    elif "weights" in inst.doc:
        F, source = solve_ft(inst.triangle(geom), inst.options()).F, "solved"
    else:
        F, source = geom.centroid([A, B, C]), "centroid"
    phase2 = evolution_phase2(geom, A, B, C, a["B"], a["C"])
    return {
        "phase1": {"F": [float(x) for x in F], "F_source": source,
                   "subconscious": phase1_subconscious(geom, F)},
        "phase2": phase2.to_dict(),
    }


def cmd_geodesic(inst, args):
    geom = inst.geometry()
    spec = inst.doc["geodesic"]
    P = inst.point(geom, spec["start"], "geodesic.start")
    if geom.kind != "revolution":
        Q = inst.point(geom, spec["end"], "geodesic.end") if "end" in spec else None
        if Q is None:
            raise InstanceError("geodesic.end: required on constant-curvature planes", field="geodesic.end")
        return {"length": geom.distance(P, Q), "start": P.tolist(), "end": Q.tolist(),
                "direction": geom.log_direction(P, Q).tolist()}
    if "end" in spec:
        Q = inst.point(geom, spec["end"], "geodesic.end")
        path = geodesic_bvp(geom.profile, P, Q, n_scan=geom.n_scan, step=geom.step)
    else:
        if "length" not in spec:
            raise InstanceError("geodesic.length: required without an end point", field="geodesic.length")
        if "direction" in spec:
            d = np.asarray(spec["direction"], dtype=float)
        elif "heading" in spec:
            d = heading_to_direction(geom.profile, P, inst.angle(spec["heading"]))
        else:
            raise InstanceError("geodesic: give end, direction or heading", field="geodesic")
        path = geodesic_ivp(geom.profile, P, d, spec["length"], step=geom.step)
    return {"path": path.summary()}


def cmd_excess(inst, args):
    geom = inst.geometry()
    exc = aleksandrov_excess(geom, *inst.vertices(geom))
    value = math.degrees(exc.value) if args.degrees else exc.value
    return {"excess": value, "degenerate": exc.degenerate}


HANDLERS = {
    "solve": cmd_solve, "verify": cmd_verify, "inverse": cmd_inverse,
    "subconscious": cmd_subconscious, "massflow": cmd_massflow, "evolve": cmd_evolve,
    "geodesic": cmd_geodesic, "excess": cmd_excess,
}


def run(command: str, doc: dict, args) -> tuple[int, dict]:
    """Execute one command on one instance document; returns (exit code, result)."""
    header = {"schema_version": SCHEMA_VERSION, "command": command}
    try:
        inst = parse(_apply_overrides(doc, args), command, degrees=args.degrees)
        header["name"] = inst.name
        if "geometry" in inst.doc:
            header["geometry"] = inst.doc["geometry"]
        result = HANDLERS[command](inst, args)
    except InstanceError as exc:
        return EXIT_INVALID, dict(header, status="invalid", error=str(exc), field=exc.field)
    except ConvergenceError as exc:
        best = None if exc.best_point is None else [float(x) for x in exc.best_point]
        return EXIT_NUMERIC, dict(header, status="numerical-failure", error=str(exc),
                                  best_iterate=best, residual=exc.residual, iterations=exc.iterations)
    except (NoGeodesicFoundError, ArithmeticError) as exc:
        return EXIT_NUMERIC, dict(header, status="numerical-failure", error=str(exc))
    except (GeometryError, OSError) as exc:
        return EXIT_INVALID, dict(header, status="invalid", error=str(exc))
    return EXIT_OK, dict(header, status="ok", result=result)


def _default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def dumps(doc: dict, fmt: str = "pretty") -> str:
    if fmt == "compact":
        return json.dumps(doc, separators=(",", ":"), default=_default, allow_nan=False)
    return json.dumps(doc, indent=2, default=_default, allow_nan=False)


def _run_file(command, path, args):
    try:
        doc = load(path)
    except InstanceError as exc:
        return EXIT_INVALID, {"schema_version": SCHEMA_VERSION, "command": command,
                              "status": "invalid", "error": str(exc), "field": exc.field}
    except OSError as exc:
        return EXIT_INVALID, {"schema_version": SCHEMA_VERSION, "command": command,
                              "status": "invalid", "error": str(exc)}
    return run(command, doc, args)


def _batch_one(command, path, args):
    path = Path(path)
    try:
        listed = json.loads(path.read_text()).get("commands")
    except (OSError, ValueError, AttributeError):
        listed = None
    if listed is not None and command not in listed:
        return str(path), EXIT_OK, None
    if args.svg:
        svg_dir = Path(args.svg)
        args = argparse.Namespace(**vars(args))
        args.svg = str(svg_dir / f"{path.stem}.svg")
    code, doc = _run_file(command, path, args)
    out = path.with_name(f"{path.stem}.{command}.result.json")
    out.write_text(dumps(doc, args.format) + "\n")
    return str(path), code, str(out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="geoft", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"geoft {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", nargs="?", help="instance document (JSON)")
    p.add_argument("--tol", type=float, help="gradient-norm tolerance (default 1e-10)")
    p.add_argument("--max-iter", dest="max_iter", type=int, help="iteration cap (default 10000)")
    p.add_argument("--step", type=float, help="initial step factor of the descent")
    p.add_argument("--backtrack", type=float, help="step reduction factor in the line search (default 0.5)")
    p.add_argument("--method", choices=["newton", "gradient"], help="descent direction")
    p.add_argument("--scan", type=int, help="number of headings in the shooting scan (default 64)")
    p.add_argument("--ode-step", dest="ode_step", type=float, help="geodesic integration step (default 1e-3)")
    p.add_argument("--format", choices=["pretty", "compact"], default="pretty")
    p.add_argument("--degrees", action="store_true", help="read and write angles in degrees")
    p.add_argument("--svg", help="write a figure of the solved tree (a directory with --batch)")
    p.add_argument("--batch", help="process every *.json instance in this directory")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for --batch")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.batch:
        files = sorted(p for p in Path(args.batch).glob("*.json") if not p.name.endswith(".result.json"))
        if args.svg:
            Path(args.svg).mkdir(parents=True, exist_ok=True)
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(_batch_one, [args.command] * len(files), files, [args] * len(files)))
        else:
            results = [_batch_one(args.command, f, args) for f in files]
        summary = {"schema_version": SCHEMA_VERSION, "command": args.command,
                   "instances": [{"input": i, "exit_code": c, "output": o} for i, c, o in results if o],
                   "skipped": [i for i, _, o in results if not o]}
        print(dumps(summary, args.format))
        return max((c for _, c, _ in results), default=EXIT_OK)
    if not args.input:
        print("geoft: an input file (or --batch) is required", file=sys.stderr)
        return EXIT_INVALID
    code, doc = _run_file(args.command, args.input, args)
    print(dumps(doc, args.format))
    if code != EXIT_OK:
        print(f"geoft: {doc.get('error')}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
