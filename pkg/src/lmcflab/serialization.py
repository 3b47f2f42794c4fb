"""File formats: the sampled-Lagrangian record schema, parameter and
spectrum JSON, expansion JSON, trace/CSV/plot-data emission, and the
config-hash stamp embedded in every structured report.

Sampled-Lagrangian schema (version 1): a JSON header line followed by
whitespace-separated records
    component  parameter  x_1 .. x_{2n}  [channel values ...]
with real coordinates ordered (Re z_1..Re z_n, Im z_1..Im z_n).
"""

import json
import hashlib
import numpy as np
from pathlib import Path

from .errors import ParameterError

SCHEMA_NAME = "lmcflab/sampled-lagrangian"
SCHEMA_VERSION = 1


def config_fingerprint(config):
    """Stable sha256 of a JSON-serializable configuration mapping."""
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"),
                      default=_json_default)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return repr(obj)
    raise TypeError("not JSON-serializable: %r" % type(obj))


def _finite_or_string(x):
    if isinstance(x, float) and not np.isfinite(x):
        return "exceeds horizon" if x > 0 else repr(x)
    return x


def stamp(report, config=None, seed=None):
    """Attach the reproducibility stamp to a report dict."""
    out = dict(report)
    out["config_hash"] = config_fingerprint(config or {})
    if seed is not None:
        out["seed"] = int(seed)
    return out


def write_json(path, report, config=None, seed=None):
    data = stamp(report, config, seed)
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True,
                                     default=_json_default) + "\n")
    return data


def _stamp_comment(config, seed):
    return "# config_hash=%s seed=%s\n" % (
        config_fingerprint(config or {}), 0 if seed is None else int(seed))


def write_csv(path, columns, header=True, config=None, seed=None):
    """columns: mapping name -> 1-D array; plain CSV with the
    reproducibility stamp as a leading comment line."""
    names = list(columns)
    arrs = [np.asarray(columns[k]).ravel() for k in names]
    m = len(arrs[0])
    if any(len(a) != m for a in arrs):
        raise ParameterError("CSV columns must share a length")
    with open(path, "w") as fh:
        fh.write(_stamp_comment(config, seed))
        if header:
            fh.write(",".join(names) + "\n")
        for i in range(m):
            fh.write(",".join("%.17g" % a[i] for a in arrs) + "\n")


def write_dat(path, x, y, config=None, seed=None):
    """Two-column whitespace plot data with the stamp comment."""
    x = np.asarray(x).ravel()
    y = np.asarray(y).ravel()
    with open(path, "w") as fh:
        fh.write(_stamp_comment(config, seed))
        for xi, yi in zip(x, y):
            fh.write("%.17g %.17g\n" % (xi, yi))


# ---------------------------------------------------------------------------
# sampled Lagrangians
# ---------------------------------------------------------------------------

def write_sampled(path, blocks, n, channels=()):
    """blocks: iterable of (component_id, params (m,), coords (m, 2n) real,
    channel columns dict). Channels listed in `channels` must be present in
    every block."""
    with open(path, "w") as fh:
        fh.write(json.dumps({"schema": SCHEMA_NAME,
                             "version": SCHEMA_VERSION,
                             "n": n, "channels": list(channels)}) + "\n")
        for comp_id, params, coords, chans in blocks:
            coords = np.asarray(coords, float)
            for i in range(len(params)):
                row = [str(comp_id), "%.17g" % params[i]]
                row += ["%.17g" % c for c in coords[i]]
                row += ["%.17g" % chans[name][i] for name in channels]
                fh.write(" ".join(row) + "\n")


def read_sampled(path):
    with open(path) as fh:
        header = json.loads(fh.readline())
        if header.get("schema") != SCHEMA_NAME:
            raise ParameterError("not a sampled-Lagrangian file: %s" % path)
        n = header["n"]
        channels = header["channels"]
        rows = [line.split() for line in fh if line.strip()]
    comp_ids = [r[0] for r in rows]
    data = np.array([[float(v) for v in r[1:]] for r in rows])
    blocks = []
    for cid in dict.fromkeys(comp_ids):
        sel = np.array([c == cid for c in comp_ids])
        sub = data[sel]
        chans = {name: sub[:, 1 + 2 * n + k]
                 for k, name in enumerate(channels)}
        blocks.append((cid, sub[:, 0], sub[:, 1:1 + 2 * n], chans))
    return header, blocks


def curve_blocks(curve):
    blocks = []
    for ci, comp in enumerate(curve.components):
        s = comp.arclength()
        chans = {"theta": comp.theta}
        if comp.f is not None:
            chans["f"] = comp.f
        blocks.append((ci, s, comp.vertices.copy(), chans))
    return blocks


def write_curve(path, curve):
    chan_names = ("theta", "f") if all(
        c.f is not None for c in curve.components) else ("theta",)
    write_sampled(path, [(cid, s, xy, ch) for cid, s, xy, ch
                         in curve_blocks(curve)], n=1,
                  channels=chan_names)


def write_profile(path, profile, potential=None, theta=None):
    coords = np.hstack([profile.z.real, profile.z.imag])
    chans = {"psi_%d" % k: profile.psi[:, k] for k in range(profile.n)}
    names = list(chans)
    if potential is not None:
        chans["f"] = potential
        names.append("f")
    if theta is not None:
        chans["theta"] = theta
        names.append("theta")
    write_sampled(path, [(0, profile.y, coords, chans)], n=profile.n,
                  channels=names)


# ---------------------------------------------------------------------------
# module-specific JSON shapes
# ---------------------------------------------------------------------------

def lawlor_params_json(params, tolerances=None):
    return {"n": params.n, "a": params.a.tolist(),
            "phi": params.phi.tolist(), "A": params.A,
            "quad_error": params.quad_error,
            "tolerances": tolerances or {}}


def spectrum_json(spectrum):
    degs = spectrum.degrees()
    return {"n": spectrum.n, "provenance": spectrum.provenance,
            "entries": [{"mu": float(m), "degree": float(d),
                         "multiplicity": int(c),
                         "lambda": float(-d / 2.0)}
                        for m, d, c in zip(spectrum.mu, degs,
                                           spectrum.multiplicity)]}


def expansion_json(expansion):
    return {"cone_ref": expansion.cone_ref,
            "modes": [{"d": e.degree, "a": e.coeff}
                      for e in expansion.entries],
            "a0": expansion.log_coeff,
            "log_factor": expansion.log_factor}


def expansion_from_json(data):
    from .driftheat import ModeExpansion, ModeEntry
    n = data.get("n", 2)
    return ModeExpansion(n, [ModeEntry(m["d"], m["a"])
                             for m in data["modes"]],
                         log_coeff=data.get("a0", 0.0),
                         log_factor=data.get("log_factor", "half"))


def write_trace(path, trace, tolerances=None):
    """Flow-trace file: a JSON header line (scheme, dt, tolerances) followed
    by per-state sampled-curve sections separated by '# state t=...'."""
    with open(path, "w") as fh:
        fh.write(json.dumps({"schema": "lmcflab/flow-trace", "version": 1,
                             "scheme": trace.scheme, "dt": trace.dt,
                             "singular_time": trace.singular_time,
                             "tolerances": tolerances or {},
                             "states": len(trace.states)}) + "\n")
        for state in trace.states:
            fh.write("# state t=%.17g\n" % state.t)
            for cid, s, xy, chans in curve_blocks(state):
                for i in range(len(s)):
                    row = [str(cid), "%.17g" % s[i],
                           "%.17g" % xy[i, 0], "%.17g" % xy[i, 1],
                           "%.17g" % chans["theta"][i]]
                    fh.write(" ".join(row) + "\n")


def weighted_function_json(wf):
    return {"gamma": wf.rate, "y": wf.y.tolist(), "u": wf.u.tolist(),
            "weighted_norms": list(wf.weighted_norms)}


def perturbation_report_json(rep):
    return {"delta": rep.delta, "theta_sup": rep.theta_sup,
            "linear_consistency": rep.linear_consistency,
            "weighted_remainder": rep.weighted_remainder,
            "end_values": list(rep.end_values),
            "ladder": [{"delta": d, "weighted_remainder": w}
                       for d, w in rep.ladder]}


def intersection_json(datum):
    return {"point": np.asarray(datum.point).tolist()
            if not np.iscomplexobj(datum.point)
            else [[z.real, z.imag] for z in np.atleast_1d(datum.point)],
            "alphas": datum.alphas.tolist(),
            "grading_L": datum.grading_L,
            "grading_Lprime": datum.grading_Lp,
            "degree": datum.degree}


def clause_report_json(report):
    return {
        "norms": report.norms.tolist(),
        "log_ratios": report.log_ratios.tolist(),
        "growth": {"hypothesis": report.growth_hypothesis,
                   "conclusion": report.growth_conclusion},
        "decay": {"hypothesis": report.decay_hypothesis,
                  "conclusion": report.decay_conclusion},
        "has_degree_d": report.has_degree_d,
        "implication_admissible": report.implication_admissible,
        "dichotomy_admissible": report.dichotomy_admissible,
        "dichotomy_asserted": report.dichotomy_asserted,
        "dichotomy_holds": report.dichotomy_holds,
        "violations": report.violations(),
    }
