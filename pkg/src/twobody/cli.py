"""Command-line front end.

Commands: catalog, coeffs, simulate, masscenter, verify.  Exit codes:
0 success, 1 verification failure, 2 invalid arguments or config,
3 integration stopped at a radial boundary (partial output written),
4 non-finite state during integration.
"""

import argparse
import configparser
import json
import math
import sys

import numpy as np

from . import coefficients as cf
from . import dynamics as dyn
from . import masscenter, verify
from .algebra import build_adapted_basis, realize_algebra
from .errors import BoundaryReached, NonFiniteState, TwoBodyError
from .spaces import Family, catalog_rows, make_space


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _space_args(sub):
    sub.add_argument("--space", required=True, help="family name, e.g. Sphere")
    sub.add_argument("--n", type=int, default=2)
    sub.add_argument("--radius", type=float, default=1.0)


def cmd_catalog(_args) -> int:
    print(f"{'family':<22s} {'n':<5s} {'q1':<6s} {'q2':<5s} "
          f"{'compact':<8s} r_interval")
    for row in catalog_rows():
        print(f"{row['family']:<22s} {row['n']:<5s} {row['q1']:<6s} "
              f"{row['q2']:<5s} {str(row['compact']).lower():<8s} "
              f"{row['r_interval']}")
    return 0


_COEFF_FIELDS = ("a", "b", "c", "d", "h", "f", "u", "w", "v",
                 "g00", "g01", "g11", "D", "E", "F", "C", "B", "A",
                 "nu", "A2", "A1", "det_gamma")


def coeff_values(space, params, r) -> dict:
    blocks = cf.gamma_blocks(space, params, r)
    inv = cf.inverse_coeffs(space, params, r)
    A2, A1 = cf.radial_operator(space, params, r)
    vals = {k: getattr(blocks, k) for k in ("a", "b", "c", "d", "h", "f", "u", "w", "v")}
    vals.update({k: getattr(inv, k) for k in ("g00", "g01", "g11",
                                              "D", "E", "F", "C", "B", "A")})
    vals["nu"] = cf.measure_density(space, params, r)
    vals["A2"] = A2
    vals["A1"] = A1
    vals["det_gamma"] = cf.gamma_det_closed(space, params, r)
    return vals


def cmd_coeffs(args) -> int:
    space = make_space(Family.parse(args.space), args.n, args.radius)
    params = cf.TwoBodyParams(m1=args.m1, m2=args.m2, alpha=args.alpha)
    vals = coeff_values(space, params, args.r)
    if args.format == "json":
        text = json.dumps({k: vals[k] for k in _COEFF_FIELDS}, indent=2)
    else:
        header = ",".join(_COEFF_FIELDS)
        row = ",".join(_fmt(vals[k]) for k in _COEFF_FIELDS)
        text = header + "\n" + row
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


_CONFIG_SECTIONS = {
    "space": {"family", "n", "radius"},
    "particles": {"m1", "m2", "alpha"},
    "potential": {"kind", "gamma", "k", "r_values", "u_values"},
    "initial": None,  # validated against the basis layout
    "integrator": {"dt", "t_end", "sample_every"},
    "output": {"path", "format"},
}


class ConfigError(Exception):
    pass


def _parse_potential(section) -> cf.Potential:
    kind = section.get("kind", "free") if section is not None else "free"
    if kind == "free":
        return cf.Potential()
    if kind == "cotangent":
        return cf.Potential(kind="cotangent",
                            coefficient=float(section.get("gamma", "1.0")))
    if kind == "harmonic":
        return cf.Potential(kind="harmonic",
                            coefficient=float(section.get("k", "1.0")))
    if kind == "tabulated":
        rs = tuple(float(x) for x in section["r_values"].split(","))
        us = tuple(float(x) for x in section["u_values"].split(","))
        return cf.Potential(kind="tabulated", r_samples=rs, u_samples=us)
    raise ConfigError(f"unknown potential kind {kind!r}")


def load_run_config(path: str):
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    for sec in parser.sections():
        if sec not in _CONFIG_SECTIONS:
            raise ConfigError(f"unknown config section [{sec}]")
        allowed = _CONFIG_SECTIONS[sec]
        if allowed is not None:
            unknown = set(parser[sec]) - allowed
            if unknown:
                raise ConfigError(f"unknown keys {sorted(unknown)} in [{sec}]")
    try:
        sp = parser["space"]
        space = make_space(Family.parse(sp["family"]), int(sp["n"]),
                           float(sp["radius"]))
        pt = parser["particles"]
        params = cf.TwoBodyParams(
            m1=float(pt["m1"]), m2=float(pt["m2"]), alpha=float(pt["alpha"]),
            potential=_parse_potential(parser["potential"]
                                       if parser.has_section("potential") else None))
        basis = build_adapted_basis(space, realize_algebra(space))
        init = parser["initial"]
        allowed_init = {"r", "p_r"} | set(basis.mu_names)
        unknown = set(init) - allowed_init
        if unknown:
            raise ConfigError(f"unknown keys {sorted(unknown)} in [initial]; "
                              f"momentum names for this space: {basis.mu_names}")
        mu = np.zeros(basis.dim)
        for i, name in enumerate(basis.mu_names):
            if name in init:
                mu[i] = float(init[name])
        state = dyn.PhaseState(r=float(init["r"]),
                               p_r=float(init.get("p_r", "0.0")), mu=mu)
        ig = parser["integrator"]
        dt = float(ig["dt"])
        t_end = float(ig["t_end"])
        sample_every = int(ig.get("sample_every", "1"))
        out = parser["output"]
        out_path = out["path"]
        out_format = out.get("format", "csv")
        if out_format not in ("csv", "json"):
            raise ConfigError(f"output format must be csv or json, "
                              f"got {out_format!r}")
    except (KeyError, ValueError, TwoBodyError) as exc:
        raise ConfigError(str(exc)) from exc
    return space, basis, params, state, dt, t_end, sample_every, out_path, out_format


def _write_trajectory(path, fmt, traj):
    names = ("t", "r", "p_r", "energy", "casimir", "geodesic_residual") \
            + traj.mu_names
    cols = [traj.t, traj.r, traj.p_r, traj.energy, traj.casimir,
            traj.geodesic_residual] + [traj.mu[:, i] for i in range(traj.mu.shape[1])]
    if fmt == "csv":
        with open(path, "w") as fh:
            fh.write(",".join(names) + "\n")
            for k in range(len(traj.t)):
                fh.write(",".join(_fmt(col[k]) for col in cols) + "\n")
    else:
        with open(path, "w") as fh:
            json.dump({name: [float(v) for v in col]
                       for name, col in zip(names, cols)}, fh)


def _summary(traj, backend) -> dict:
    return {
        "exit_reason": traj.exit_reason,
        "samples": int(len(traj.t)),
        "t_final": float(traj.t[-1]),
        "energy_drift_rel": traj.energy_drift(),
        "casimir_drift_rel": traj.casimir_drift(),
        "max_geodesic_residual": float(np.max(traj.geodesic_residual)),
        "backend": backend,
    }


def cmd_simulate(args) -> int:
    try:
        (space, basis, params, state, dt, t_end, sample_every,
         out_path, out_format) = load_run_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    backend = args.backend
    try:
        traj = dyn.integrate(space, basis, params, state, dt, t_end,
                             sample_every=sample_every, backend=backend)
        code = 0
    except BoundaryReached as exc:
        traj, code = exc.trajectory, 3
    except NonFiniteState as exc:
        traj, code = exc.trajectory, 4
    _write_trajectory(out_path, out_format, traj)
    print(json.dumps(_summary(traj, backend)))
    return code


def cmd_masscenter(args) -> int:
    space = make_space(Family.parse(args.space), args.n, args.radius)
    query = masscenter.CenterQuery(space=space, m1=args.m1, m2=args.m2,
                                   rho=args.rho)
    if args.kind == "R1":
        rho1 = masscenter.center_r1(query)
        print(f"rho1={_fmt(rho1)} rho2={_fmt(args.rho - rho1)}")
    elif args.kind == "R2":
        rho1, mass = masscenter.center_r2(query)
        print(f"rho1={_fmt(rho1)} rho2={_fmt(args.rho - rho1)} mass={_fmt(mass)}")
    else:
        rho1 = masscenter.center_r3(query)
        print(f"rho1={_fmt(rho1)} rho2={_fmt(args.rho - rho1)}")
    return 0


def cmd_verify(args) -> int:
    rows, extra = verify.run_scope(args.scope, inject_fault=args.inject_fault,
                                   backend=args.backend)
    for row in rows:
        print(row.line())
    for line in extra:
        print(line)
    n_fail = sum(0 if r.ok else 1 for r in rows)
    print(f"{len(rows) - n_fail}/{len(rows)} checks passed")
    return 0 if n_fail == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twobody",
        description="two-body dynamics on rank-one homogeneous spaces")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("catalog", help="list the space families")

    p = sub.add_parser("coeffs", help="radial coefficients at one r")
    _space_args(p)
    p.add_argument("--m1", type=float, required=True)
    p.add_argument("--m2", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--output", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("simulate", help="integrate a configured trajectory")
    p.add_argument("--config", required=True)
    p.add_argument("--backend", choices=("auto", "compiled", "python"),
                   default="auto")

    p = sub.add_parser("masscenter", help="mass-center positions")
    _space_args(p)
    p.add_argument("--m1", type=float, required=True)
    p.add_argument("--m2", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--kind", choices=("R1", "R2", "R3"), required=True)

    p = sub.add_parser("verify", help="run the verification battery")
    p.add_argument("--scope", choices=verify.SCOPES + ("all",), default="all")
    p.add_argument("--backend", choices=("auto", "compiled", "python"),
                   default="auto")
    p.add_argument("--inject-fault", action="store_true",
                   help=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"catalog": cmd_catalog, "coeffs": cmd_coeffs,
               "simulate": cmd_simulate, "masscenter": cmd_masscenter,
               "verify": cmd_verify}[args.command]
    try:
        return handler(args)
    except (ValueError, TwoBodyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
