"""Command-line entry points.

Exit codes: 0 success, 2 usage error, 3 numerical-tolerance failure,
4 model-assumption violation. Failures also emit a machine-readable error
JSON on stdout. Every structured report embeds the config hash and seed.
"""

import sys
import json
import argparse
import numpy as np
from pathlib import Path

from .errors import (LmcflabError, ParameterError, ToleranceError,
                     ModelAssumptionError)
from .config import RunConfig
from . import serialization as ser


def _parse_floats(text):
    try:
        return np.array([float(v) for v in text.split(",") if v != ""])
    except ValueError as exc:
        raise ParameterError("cannot parse float list %r" % text) from exc


def cmd_lawlor(args, cfg):
    from . import lawlor as lw
    if args.a is None and args.phi is None:
        raise ParameterError("provide --a or (--phi and --A)")
    out = cfg.ensure_outdir()
    roundtrip = None
    if args.a is not None:
        a = _parse_floats(args.a)
        if np.any(a <= 0):
            raise ParameterError("parameters a must be positive")
        params = lw.lawlor_forward(a)
    else:
        phi = _parse_floats(args.phi)
        if args.A is None:
            raise ParameterError("--phi requires --A")
        a = lw.lawlor_inverse(phi, args.A)
        params = lw.lawlor_forward(a)
        roundtrip = {"phi_gap": float(np.max(np.abs(params.phi - phi))),
                     "A_gap": abs(params.A - args.A)}
    report = ser.lawlor_params_json(params, cfg.tolerances)
    if roundtrip:
        report["roundtrip"] = roundtrip
    grid = lw.GridSpec(extent=cfg.grid["extent"], points=cfg.grid["points"])
    profile = lw.lawlor_profile(params, grid)
    pot = lw.neck_potential(profile)
    angle_res, omega_res = lw.special_residual(profile)
    fits = lw.asymptotic_fit(profile)
    report["special_residual"] = {"angle": angle_res, "omega": omega_res}
    report["A_invariant"] = pot["A_invariant"]
    report["asymptotic_fits"] = [
        {"end": f.end, "potential_exponent": f.potential_exponent,
         "gradient_exponent": f.gradient_exponent, "residual": f.residual,
         "degenerate": f.degenerate} for f in fits]
    report["profile_warnings"] = profile.metadata["warnings"]
    ser.write_json(out / "lawlor.json", report, cfg.as_dict(), cfg.seed)
    from .poisson import profile_angle
    ser.write_profile(out / "lawlor_profile.txt", profile,
                      potential=pot["f"], theta=profile_angle(profile))
    if angle_res > cfg.tolerances["special_angle"]:
        raise ToleranceError(
            "special residual %.3e above tolerance" % angle_res,
            estimate=angle_res)
    return report


def cmd_flow(args, cfg):
    from . import fixtures, flow
    from .ambient import gaussian_area
    out = cfg.ensure_outdir()
    name = args.fixture
    if name not in fixtures.FIXTURES:
        raise ParameterError("unknown fixture %r; known: %s"
                             % (name, sorted(fixtures.FIXTURES)))
    if name == "circle":
        curve = fixtures.circle(args.R0, args.m)
    elif name == "twoline-desing":
        curve = fixtures.twoline_desing(neck_scale=args.neck_scale,
                                        m=args.m)
    else:
        curve = fixtures.FIXTURES[name]()
    trace = flow.csf_evolve(curve, args.dt, args.steps, t0=args.t_start,
                            store_every=args.store_every)
    times = trace.times()
    report = {"fixture": name, "dt": args.dt, "steps": args.steps,
              "states": len(trace.states),
              "singular_time": trace.singular_time,
              "singular_flag": trace.singular_flag}
    channels = {"t": times}
    if name == "circle":
        radius = np.array([np.mean(np.linalg.norm(
            s.components[0].vertices, axis=1)) for s in trace.states])
        channels["radius"] = radius
        channels["radius_exact"] = np.sqrt(np.maximum(
            args.R0 ** 2 - 2.0 * (times - times[0]), 0.0))
        report["radius_error"] = float(np.max(np.abs(
            channels["radius"] - channels["radius_exact"])))
    else:
        channels["gaussian_area"] = np.array(
            [gaussian_area(s, tol=np.inf) for s in trace.states])
    if args.audit == "huisken":
        aud = flow.monotonicity_audit(trace, t0=args.t_center)
        channels["gaussian_area"] = aud["gaussian_area"]
        channels["t"] = aud["t"]
        channels["theta_functional"] = aud["theta_functional"]
        report["max_area_increase"] = float(np.max(
            aud["gaussian_area_increase"])) if len(
            aud["gaussian_area_increase"]) else 0.0
        report["total_huisken_residual"] = float(np.sum(
            aud["huisken_residual"]))
    ser.write_csv(out / ("flow_%s_channels.csv" % name), channels,
                  config=cfg.as_dict(), seed=cfg.seed)
    for key in channels:
        if key != "t":
            ser.write_dat(out / ("flow_%s_%s.dat" % (name, key)),
                          channels["t"], channels[key],
                          config=cfg.as_dict(), seed=cfg.seed)
    ser.write_trace(out / ("flow_%s_trace.txt" % name), trace,
                    cfg.tolerances)
    ser.write_curve(out / ("flow_%s_final.txt" % name), trace.states[-1])
    ser.write_json(out / ("flow_%s.json" % name), report, cfg.as_dict(),
                   cfg.seed)
    return report


def cmd_spectrum(args, cfg):
    from . import spectra
    out = cfg.ensure_outdir()
    if args.cone == "plane":
        desc = spectra.PlaneLink(args.n)
    elif args.cone == "torus":
        desc = spectra.harvey_lawson_t2_link()
    elif args.cone == "two-planes":
        desc = [spectra.PlaneLink(args.n), spectra.PlaneLink(args.n)]
    else:
        raise ParameterError(
            "unsupported cone %r; supported: plane, torus, two-planes"
            % args.cone)
    spec = spectra.link_spectrum(desc, mu_max=args.mu_max)
    report = ser.spectrum_json(spec)
    if args.stability:
        rep = spectra.stability_check(desc)
        report["stability"] = {"is_stable": rep.is_stable,
                               "offending_degrees":
                               {str(k): list(v)
                                for k, v in rep.offending_degrees.items()},
                               "expected": {str(k): v for k, v
                                            in rep.expected.items()}}
    ser.write_json(out / "spectrum.json", report, cfg.as_dict(), cfg.seed)
    return report


def cmd_drift(args, cfg):
    from . import driftheat
    out = cfg.ensure_outdir()
    data = json.loads(Path(args.expansion).read_text())
    expansion = ser.expansion_from_json(data)
    if args.check == "three-annulus":
        lam1, lam2 = args.lambdas
        rep = driftheat.three_annulus_parabolic(expansion, args.d, lam1,
                                                lam2)
        report = ser.clause_report_json(rep)
    elif args.check == "norms":
        report = {"norms": [driftheat.eta_norm(expansion, t)
                            for t in (0.0, 1.0, 2.0)]}
    else:
        raise ParameterError("unknown check %r" % args.check)
    ser.write_json(out / "drift_report.json", report, cfg.as_dict(),
                   cfg.seed)
    return report


def cmd_poisson(args, cfg):
    from . import lawlor as lw
    from . import poisson as ps
    out = cfg.ensure_outdir()
    a = _parse_floats(args.a)
    if not args.manufactured:
        raise ParameterError("only --manufactured runs are exposed here")
    rows = []
    for m in args.points:
        prof = lw.lawlor_profile(a, lw.GridSpec(extent=args.extent,
                                                points=m))
        ustar, rhs = ps.manufactured_problem(prof, args.rho)
        u = ps.solve_equivariant_poisson(prof, rhs, rate=args.rho)
        err = float(np.max(np.abs(u.u - ustar.u))
                    / np.max(np.abs(ustar.u)))
        rows.append({"points": int(m), "rel_error": err})
    orders = [float(np.log2(rows[i]["rel_error"]
                            / rows[i + 1]["rel_error"]))
              for i in range(len(rows) - 1)]
    report = {"rho": args.rho, "a": a.tolist(), "table": rows,
              "orders": orders}
    ser.write_json(out / "poisson_convergence.json", report, cfg.as_dict(),
                   cfg.seed)
    if rows and orders and min(orders) < 1.8:
        raise ToleranceError("convergence order %.2f below 1.8"
                             % min(orders), estimate=min(orders))
    return report


def cmd_potential(args, cfg):
    from . import potential as pt
    out = cfg.ensure_outdir()
    if args.check == "strip-bigon":
        soup = pt.bigon_strip(np.sin, m=args.m, layers=40)
        xs = np.linspace(0.0, np.pi, args.m)

        def f_upper(q):
            x = float(np.real(np.atleast_1d(q)[0]))
            return 0.5 * (x * np.sin(x) + 2.0 * np.cos(x) - 2.0)

        report = {
            "potential_difference": (f_upper(np.pi) - 0.0) - (f_upper(0.0)
                                                              - 0.0),
            "direct_area": soup.omega_integral(),
        }
        report["discrepancy"] = abs(report["potential_difference"]
                                    - report["direct_area"])
    elif args.check == "ball-halfdisc":
        disc = pt.FlatHalfDisc(np.zeros(1, complex), 1.0)
        rep = pt.ball_monotonicity_check(disc, None, np.zeros(1, complex),
                                         1.0)
        report = {"min_ratio": rep["min_ratio"],
                  "expected": float(np.pi / 2.0)}
    else:
        raise ParameterError("unknown check %r" % args.check)
    ser.write_json(out / "potential_report.json", report, cfg.as_dict(),
                   cfg.seed)
    return report


def build_parser():
    p = argparse.ArgumentParser(
        prog="lmcflab",
        description="Numerical laboratory for Lagrangian mean curvature "
                    "flow singularity models")
    p.add_argument("--config", help="RunConfig JSON file")
    p.add_argument("--outdir", default=None)
    p.add_argument("--seed", type=int, default=None)
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("lawlor", help="construct and verify a Lawlor neck")
    q.add_argument("--a", help="comma-separated positive parameters")
    q.add_argument("--phi", help="comma-separated phases summing to pi")
    q.add_argument("--A", type=float, help="area invariant for --phi")
    q.set_defaults(func=cmd_lawlor)

    q = sub.add_parser("flow", help="run the curve-shortening testbed")
    q.add_argument("--fixture", required=True)
    q.add_argument("--R0", type=float, default=2.0)
    q.add_argument("--neck-scale", type=float, default=0.25,
                   dest="neck_scale")
    q.add_argument("--dt", type=float, default=1e-3)
    q.add_argument("--steps", type=int, default=200)
    q.add_argument("--m", type=int, default=400)
    q.add_argument("--t-start", type=float, default=-1.0, dest="t_start")
    q.add_argument("--t-center", type=float, default=0.0, dest="t_center")
    q.add_argument("--store-every", type=int, default=1,
                   dest="store_every")
    q.add_argument("--audit", choices=["huisken", "none"], default="none")
    q.set_defaults(func=cmd_flow)

    q = sub.add_parser("spectrum", help="link spectra and stability")
    q.add_argument("--cone", required=True)
    q.add_argument("--n", type=int, default=3)
    q.add_argument("--mu-max", type=float, default=30.0, dest="mu_max")
    q.add_argument("--stability", action="store_true")
    q.set_defaults(func=cmd_spectrum)

    q = sub.add_parser("drift", help="drift-heat mode expansions")
    q.add_argument("--expansion", required=True, help="expansion JSON file")
    q.add_argument("--check", default="three-annulus")
    q.add_argument("--d", type=float, default=0.0)
    q.add_argument("--lambdas", type=float, nargs=2, default=(0.05, 0.1))
    q.set_defaults(func=cmd_drift)

    q = sub.add_parser("poisson", help="equivariant Poisson solver checks")
    q.add_argument("--rho", type=float, default=-0.5)
    q.add_argument("--a", default="1,1,1")
    q.add_argument("--extent", type=float, default=100.0)
    q.add_argument("--points", type=int, nargs="+",
                   default=[401, 801, 1601])
    q.add_argument("--manufactured", action="store_true")
    q.set_defaults(func=cmd_poisson)

    q = sub.add_parser("potential", help="strip and ball identities")
    q.add_argument("--check", required=True)
    q.add_argument("--m", type=int, default=400)
    q.set_defaults(func=cmd_potential)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    import os
    env_root = os.environ.get("LMCFLAB_OUT")   # output root only
    if env_root:
        cfg.outdir = env_root
    if args.outdir:
        cfg.outdir = args.outdir
    if args.seed is not None:
        cfg.seed = args.seed
    try:
        args.func(args, cfg)
    except LmcflabError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc),
                   "exit_code": exc.exit_code}
        print(json.dumps(payload))
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
