"""Command-line front end.

Usage::

    hhd-lyap decompose --field field.json --out out/ [--theorem1]
    hhd-lyap certify   --field field.json [--potential "3/2*x^2 + y^2"]
    hhd-lyap search    --field field.json --budget 200 --quartic 0,0.25,0.5
    hhd-lyap basin     --field field.json --bounds -1,1,-1,1 --resolution 400
    hhd-lyap planar-jet --field field.json --boundary alpha.json
    hhd-lyap flow      --field field.json --x0 0.1,0 --horizon 50 --dt 1e-3
    hhd-lyap grid      --field field.json --potential "..." --levels 0.02,0.05

Exit status: 0 on success, 2 when the input violates a hypothesis (or does
not parse), 1 on internal errors.
"""

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from .errors import HypothesisError, NotStrictlyOrthogonal, ParseError
from .flow import integrate_many, verify_theorem3, cluster_points
from .grid import Grid, normalize_bounds, normalize_resolution
from .harmonic import optimize_quadratic, quartic_basin_search
from .hhd import Decomposition, decompose, is_strictly_orthogonal, theorem1_construction
from .lyapunov import basin_estimate, orbital_derivative, sign_grid, theorem2_certify
from .planar import (
    DEFAULT_NODES,
    FourierBoundary,
    PlanarJet,
    coefficient_feasible,
    h_jet_at_origin,
    hdot_extension,
    hdot_jet_at_origin,
)
from .poly import PolyVectorField, default_variables, format_polynomial, parse_polynomial
from .render import render_contours
from .report import decomposition_report, write_csv, write_json

COMMANDS = ("decompose", "certify", "search", "basin", "planar-jet", "flow", "grid")


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class FieldSpec:
    variables: tuple
    components: tuple

    @classmethod
    def from_dict(cls, data):
        comps = tuple(data.get("components", ()))
        variables = tuple(data.get("variables") or default_variables(len(comps)))
        if not comps:
            raise UsageError("field spec has no components")
        if len(comps) != len(variables):
            raise UsageError(
                f"field spec has {len(comps)} components but {len(variables)} variables")
        return cls(variables, comps)

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise UsageError(f"{path}: invalid JSON at line {exc.lineno}, "
                                 f"column {exc.colno}: {exc.msg}") from None
        return cls.from_dict(data)

    def parse(self):
        polys = []
        for k, text in enumerate(self.components):
            try:
                polys.append(parse_polynomial(text, self.variables))
            except ParseError as exc:
                raise ParseError(f"component {k + 1}: {exc.reason}", exc.line, exc.column) from None
        return PolyVectorField(polys)

    @classmethod
    def from_field(cls, field, variables=None):
        variables = tuple(variables or default_variables(field.nvars))
        return cls(variables, tuple(format_polynomial(c, variables) for c in field))

    def to_dict(self):
        return {"variables": list(self.variables), "components": list(self.components)}


def _floats(text, count=None, name="value"):
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"could not parse {name} {text!r}") from None
    if count is not None and len(vals) != count:
        raise UsageError(f"{name} needs {count} comma-separated numbers")
    return vals


def _positive(value, name):
    if not value > 0:
        raise UsageError(f"{name} must be positive")
    return value


def build_parser():
    p = argparse.ArgumentParser(prog="hhd-lyap", description=__doc__.split("\n")[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--field", required=True, help="FieldSpec JSON file")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--potential", help="use this potential instead of the default construction")
    p.add_argument("--theorem1", action="store_true",
                   help="decompose: use the minimum-at-origin construction")
    p.add_argument("--bounds", default="-1,1,-1,1", help="xmin,xmax,ymin,ymax")
    p.add_argument("--resolution", type=int, default=400, help="grid nodes per axis")
    p.add_argument("--epsilon", type=float, default=None, help="excluded radius for basin scans")
    p.add_argument("--levels", default=None, help="comma-separated contour levels")
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--horizon", type=float, default=50.0)
    p.add_argument("--transient", type=float, default=0.5, help="discarded fraction of a flow")
    p.add_argument("--x0", action="append", default=None, help="initial state (repeatable)")
    p.add_argument("--theorem3", action="store_true",
                   help="flow: check omega-limits against the critical set of V")
    p.add_argument("--budget", type=int, default=200, help="Nelder-Mead evaluations")
    p.add_argument("--quartic", default=None, help="coefficients for the quartic scan")
    p.add_argument("--harmonic", default="x^4 - 6*x^2*y^2 + y^4",
                   help="harmonic polynomial scaled in the quartic scan")
    p.add_argument("--nodes", type=int, default=DEFAULT_NODES, help="quadrature nodes")
    p.add_argument("--boundary", default=None, help="boundary data (.json coefficients or .csv samples)")
    p.add_argument("--order", type=int, default=2, help="Fourier order for CSV boundary samples")
    return p


class Runner:
    def __init__(self, args):
        self.args = args
        self.spec = FieldSpec.load(args.field)
        self.field = self.spec.parse()
        self.vars = self.spec.variables
        os.makedirs(args.out, exist_ok=True)

    def path(self, name):
        return os.path.join(self.args.out, name)

    def json(self, name, obj):
        write_json(self.path(name), obj, self.vars)

    def potential(self):
        if not self.args.potential:
            return None
        try:
            return parse_polynomial(self.args.potential, self.vars)
        except ParseError as exc:
            raise ParseError(f"--potential: {exc.reason}", exc.line, exc.column) from None

    def decomposition(self, default="theorem1"):
        v = self.potential()
        if v is not None:
            return Decomposition.from_potential(self.field, v)
        if default == "theorem1":
            return theorem1_construction(self.field)
        return decompose(self.field)

    def candidate(self):
        """--potential as given (any function, not necessarily an HHD potential)."""
        v = self.potential()
        return v if v is not None else self.decomposition().potential

    def grid_args(self):
        a = self.args
        bounds = normalize_bounds(_floats(a.bounds, 4, "--bounds"))
        return bounds, normalize_resolution(_positive(a.resolution, "--resolution"))

    def planar(self):
        if self.field.nvars != 2:
            raise UsageError(f"{self.args.command} needs a planar field")

    # commands

    def decompose(self):
        d = self.decomposition("theorem1" if self.args.theorem1 else "poisson")
        report = decomposition_report(d)
        if self.args.theorem1:
            report["rho"] = -self.field.divergence().exact_value((0,) * d.nvars)
        self.json("decomposition.json", report)

    def certify(self):
        d = self.decomposition()
        cert = theorem2_certify(d)
        self.json("decomposition.json", decomposition_report(d))
        self.json("certificate.json", cert.to_dict())

    def search(self):
        d = self.decomposition()
        best, cert = optimize_quadratic(self.field, d, budget=max(0, self.args.budget))
        report = {
            "incumbent": {"potential": d.potential, "certificate": theorem2_certify(d).to_dict()},
            "quadratic": {
                "harmonic": best.potential - d.potential,
                "potential": best.potential,
                "certificate": cert.to_dict(),
            },
        }
        if self.args.quartic:
            self.planar()
            harmonic = parse_polynomial(self.args.harmonic, self.vars)
            bounds, res = self.grid_args()
            ranked = quartic_basin_search(
                self.field, best, _floats(self.args.quartic, name="--quartic"),
                bounds, res, self.args.epsilon, harmonics=[harmonic])
            report["quartic"] = {
                "harmonic": harmonic,
                "candidates": [c.to_dict() for c in ranked],
            }
        self.json("search.json", report)

    def basin(self):
        self.planar()
        v = self.candidate()
        bounds, res = self.grid_args()
        est = basin_estimate(v, self.field, bounds, res, self.args.epsilon)
        out = est.to_dict()
        out["potential"] = v
        self.json("basin.json", out)
        levels = _floats(self.args.levels, name="--levels") if self.args.levels else [est.level]
        self._svg("basin.svg", v, levels, bounds, res)

    def _svg(self, name, v, levels, bounds, res):
        grid = Grid.from_bounds(bounds, res)
        values = grid.evaluate(v - v.constant_term)
        shade = grid.evaluate(orbital_derivative(v, self.field))
        svg = render_contours(grid.xs, grid.ys, values, [l for l in levels if l > 0] or levels,
                              shade=shade)
        with open(self.path(name), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(svg)

    def grid(self):
        self.planar()
        v = self.candidate()
        bounds, res = self.grid_args()
        sg = sign_grid(orbital_derivative(v, self.field), bounds, res)
        write_csv(self.path("grid.csv"), ("x", "y", "sign"), sg.rows())
        levels = _floats(self.args.levels, name="--levels") if self.args.levels else [0.02, 0.05, 0.09]
        self._svg("grid.svg", v, levels, bounds, res)

    def planar_jet(self):
        self.planar()
        a = self.args
        if not a.boundary:
            raise UsageError("planar-jet needs --boundary")
        alpha = load_boundary(a.boundary, a.order)
        jet = PlanarJet.from_field(self.field)
        grad, hess = h_jet_at_origin(alpha)
        value, dgrad, dhess = hdot_jet_at_origin(alpha, jet)
        step = 1e-4
        nodes = _positive(a.nodes, "--nodes")

        def q(x, y):
            return hdot_extension(alpha, self.field, x, y, nodes)

        fd = np.array([
            [(q(step, 0) - 2 * q(0, 0) + q(-step, 0)) / step ** 2,
             (q(step, step) - q(step, -step) - q(-step, step) + q(-step, -step)) / (4 * step ** 2)],
            [0.0, (q(0, step) - 2 * q(0, 0) + q(0, -step)) / step ** 2],
        ])
        fd[1, 0] = fd[0, 1]
        trace = float(np.trace(jet.J))
        report = {
            "boundary": alpha.to_dict(),
            "h_gradient": grad,
            "h_hessian": hess,
            "hdot_value": value,
            "hdot_gradient": dgrad,
            "hdot_hessian": dhess,
            "hdot_hessian_quadrature": fd,
            "trace_df0": trace,
            "feasible": coefficient_feasible(alpha.a[1], alpha.b[1], trace) if trace < 0 else None,
        }
        self.json("planar_jet.json", report)

    def flow(self):
        a = self.args
        seeds = [_floats(x, self.field.nvars, "--x0") for x in (a.x0 or [])]
        if not seeds:
            raise UsageError("flow needs at least one --x0")
        _positive(a.dt, "--dt")
        _positive(a.horizon, "--horizon")
        times, states = integrate_many(self.field, seeds, a.horizon, a.dt)
        header = ("t",) + tuple(self.vars)
        omegas = []
        for k in range(len(seeds)):
            name = "trajectory.csv" if len(seeds) == 1 else f"trajectory_{k:03d}.csv"
            write_csv(self.path(name), header,
                      ((t, *s) for t, s in zip(times, states[:, k, :])))
            tail = states[int(a.transient * (len(times) - 1)):, k, :]
            omegas.append({
                "x0": seeds[k],
                "final": states[-1, k, :],
                "omega_points": len(cluster_points(tail)),
            })
        self.json("omega.json", {"dt": a.dt, "horizon": a.horizon, "seeds": omegas})
        if a.theorem3:
            d = self.decomposition("poisson")
            if not is_strictly_orthogonal(d):
                raise NotStrictlyOrthogonal(
                    "decomposition is not strictly orthogonal; pass --potential")
            rep = verify_theorem3(self.field, d, seeds, a.horizon, a.dt, a.transient)
            self.json("theorem3.json", rep.to_dict())

    def run(self):
        getattr(self, self.args.command.replace("-", "_"))()


def load_boundary(path, order=2):
    if path.endswith(".csv"):
        with open(path, encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r]
        if rows and not _is_number(rows[0][0]):
            rows = rows[1:]
        theta = [float(r[0]) for r in rows]
        values = [float(r[1]) for r in rows]
        return FourierBoundary.from_samples(theta, values, order)
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return FourierBoundary(data.get("a0", 0.0), tuple(data.get("a", ())), tuple(data.get("b", ())))


def _is_number(text):
    try:
        float(text)
        return True
    except ValueError:
        return False


# comma lists such as "-1,1,-1,1" look like options to argparse
_LIST_FLAGS = ("--bounds", "--x0", "--levels", "--quartic")


def _bind_list_flags(argv):
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _LIST_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_bind_list_flags(argv))
    try:
        Runner(args).run()
    except (HypothesisError, ParseError, UsageError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
