"""Command-line front end: deterministic parameter sweeps emitted as CSV/JSON.

Grid points are evaluated in lexicographic grid order (the cartesian product
of the parameter lists in their documented order); a worker pool may compute
them concurrently but rows are emitted in grid order, so identical configs
produce byte-identical files.  Exit codes: 0 success, 1 usage error, 2 for any
Violated certificate or solver hard failure.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import certify as cert
from . import constants as cn
from . import planar, spectra, torus
from .errors import SolverError
from .ring import BifurcationEstimate, RingProblem, SolverOptions, optimal_constant_ring
from .testfields import torus_positive_profile

SCHEMAS = {
    "constants": ["a", "p", "regime", "ring_threshold", "lambda_star", "lambda_bullet",
                  "sphere_ground", "torus_l00", "torus_l10", "torus_l01", "status"],
    "spectrum": ["domain", "a", "index", "k", "l", "value", "est_error", "status"],
    "ring-opt": ["a", "p", "regime", "param", "value", "symmetric", "gap_to_constant",
                 "iters", "status"],
    "torus-opt": ["a", "p", "mu", "value", "ring_value", "classification", "x_variation",
                  "iters", "status"],
    "planar-opt": ["a", "p", "lambda", "mu_closed", "mu_numeric", "lambda_star",
                   "lambda_bullet", "k1_eig", "status"],
    "flow": ["t", "functional", "lp_norm", "drift"],
    "certify": ["id", "a", "p", "q", "seed", "lhs", "rhs", "margin", "quad_error",
                "verdict", "constant_source"],
}


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def emit_records(rows: list[dict], columns: list[str], fmt: str, path: str | None) -> None:
    """Write rows as CSV (header, UTF-8, LF) or a JSON array of objects."""
    if fmt == "csv":
        lines = [",".join(columns)]
        for row in rows:
            lines.append(",".join(_fmt(row.get(c)) for c in columns))
        text = "\n".join(lines) + "\n"
    else:
        objs = []
        for row in rows:
            obj = {}
            for c in columns:
                v = row.get(c)
                if isinstance(v, (float, np.floating)):
                    v = float(f"{float(v):.12g}")
                elif isinstance(v, (np.integer,)):
                    v = int(v)
                obj[c] = v
            objs.append(obj)
        text = json.dumps(objs, indent=1) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise SystemExit(f"cannot write {path}: {exc}") from exc


def parse_config(path: str) -> dict:
    """Line-oriented `key = value` pairs, # comments, comma-separated lists."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SystemExit(f"bad config line: {raw.rstrip()}")
            key, value = (t.strip() for t in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def _floats(text: str) -> list[float]:
    return [float(t) for t in str(text).split(",") if t.strip() != ""]


# -- per-task evaluation (top level so a process pool can pickle it) ----------

def eval_point(task: str, point: dict) -> list[dict]:
    try:
        return _eval_point_inner(task, point)
    except (SolverError, ValueError) as exc:
        row = dict(point)
        row["status"] = f"error: {exc}"
        return [row]


def _eval_point_inner(task: str, point: dict) -> list[dict]:
    if task == "constants":
        a, p = point["a"], point["p"]
        fp = cn.FluxParams.make(a, p)
        row = {
            "a": a, "p": p, "regime": fp.regime.value,
            "ring_threshold": cn.ring_rigidity_threshold(fp),
            "sphere_ground": cn.sphere_ground_energy(a),
            "status": "ok",
        }
        row["torus_l00"], row["torus_l10"], row["torus_l01"] = cn.torus_low_modes(fp.a)
        if p > 2:
            row["lambda_star"], row["lambda_bullet"] = cn.planar_symmetry_thresholds(fp.a, p)
        return [row]

    if task == "spectrum":
        a = point["a"]
        domain = point["domain"]
        res = int(point["resolution"])
        count = int(point["count"])
        kind = {
            "ring": spectra.OperatorKind.RING_MAGNETIC,
            "torus": spectra.OperatorKind.TORUS_MAGNETIC,
            "sphere2": spectra.OperatorKind.SPHERE2_MAGNETIC,
        }[domain]
        spec = spectra.eigen_solve(spectra.OperatorSpec(kind, a=a, resolution=res), count)
        rows = []
        for i, (val, lab) in enumerate(zip(spec.eigenvalues, spec.labels)):
            rows.append({
                "domain": domain, "a": a, "index": i, "k": lab[0], "l": lab[1],
                "value": val, "est_error": float(spec.est_error[i]), "status": "ok",
            })
        return rows

    if task == "ring-opt":
        a, p, param = point["a"], point["p"], point["param"]
        fp = cn.FluxParams.make(a, p)
        res = optimal_constant_ring(RingProblem(fp, param, SolverOptions(n=int(point["resolution"]))))
        return [{
            "a": a, "p": p, "regime": fp.regime.value, "param": param,
            "value": res.value, "symmetric": res.symmetric,
            "gap_to_constant": res.gap_to_constant, "iters": res.iterations,
            "status": "ok",
        }]

    if task == "torus-opt":
        a, p, mu = point["a"], point["p"], point["mu"]
        n = int(point["resolution"])
        res = torus.minimize_rayleigh_torus(torus.TorusProblem(a, p, mu, resolution=(n, n)))
        return [{
            "a": a, "p": p, "mu": mu, "value": res.value, "ring_value": res.ring_value,
            "classification": res.classification, "x_variation": res.x_variation,
            "iters": res.iterations, "status": "ok",
        }]

    if task == "planar-opt":
        a, p, lam = point["a"], point["p"], point["lam"]
        lam_star, lam_bullet = cn.planar_symmetry_thresholds(a, p)
        mu_closed, _ = cn.planar_mu_closed(a, p, lam)
        shoot = planar.solve_radial_euler_lagrange(a, p, lam)
        k1 = planar.k1_second_variation(a, p, lam)
        return [{
            "a": a, "p": p, "lambda": lam, "mu_closed": mu_closed,
            "mu_numeric": shoot.mu_numeric, "lambda_star": lam_star,
            "lambda_bullet": lam_bullet, "k1_eig": k1, "status": "ok",
        }]

    if task == "flow":
        p, lam = point["p"], point["lam"]
        n = int(point["resolution"])
        u0 = torus_positive_profile(int(point["seed"]), (n, n))
        state = torus.run_bakry_emery_flow(u0, p, lam, t_end=point["t_end"], dt=point["dt"])
        lp0 = state.history[0][2]
        return [{
            "t": t, "functional": f, "lp_norm": lp, "drift": abs(lp - lp0),
        } for (t, f, lp) in state.history]

    if task == "certify":
        cid = cert.InequalityId(point["id"])
        params = cert._default_params(cid, int(point["seed"]))
        rep = cert.evaluate_certificate(cid, params)
        return [{
            "id": rep.id.value, "a": rep.params.get("a"), "p": rep.params.get("p"),
            "q": rep.params.get("q"), "seed": rep.params.get("seed"), "lhs": rep.lhs,
            "rhs": rep.rhs, "margin": rep.margin, "quad_error": rep.quad_error,
            "verdict": rep.verdict.value, "constant_source": rep.constant_source,
        }]

    raise SystemExit(f"unknown task {task!r}")


def run_sweep(task: str, points: list[dict], workers: int = 1):
    """Evaluate all grid points, preserving grid order in the output."""
    if workers <= 1 or len(points) <= 1:
        results = [eval_point(task, pt) for pt in points]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(eval_point, itertools.repeat(task), points))
    rows = []
    for chunk in results:
        rows.extend(chunk)
    return rows


# -- argument plumbing ---------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_common(sp):
    sp.add_argument("--config", default=None)
    sp.add_argument("--out", default=None)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--resolution", type=int, default=None)
    sp.add_argument("--tolerance", type=float, default=None)


def build_parser() -> _Parser:
    ap = _Parser(prog="fluxineq")
    sub = ap.add_subparsers(dest="cmd", required=True)
    for name in ("constants", "spectrum", "ring-opt", "torus-opt", "planar-opt",
                 "flow", "certify", "sweep"):
        sp = sub.add_parser(name)
        _add_common(sp)
        if name in ("constants", "spectrum", "ring-opt", "torus-opt", "planar-opt"):
            sp.add_argument("--a", default="0.3")
            sp.add_argument("--p", default=None)
        if name == "spectrum":
            sp.add_argument("--domain", choices=("ring", "torus", "sphere2"), default="ring")
            sp.add_argument("--count", type=int, default=6)
        if name == "ring-opt":
            sp.add_argument("--param", default="1.0")
        if name == "torus-opt":
            sp.add_argument("--mu", default="1.0")
        if name == "planar-opt":
            sp.add_argument("--lam", default="0.1")
        if name == "flow":
            sp.add_argument("--p", default="1.5")
            sp.add_argument("--lam", default="1.0")
            sp.add_argument("--t-end", type=float, default=1.0)
            sp.add_argument("--dt", type=float, default=1e-3)
        if name == "certify":
            sp.add_argument("--ids", default=None, help="comma list; default all")
            sp.add_argument("--seeds", type=int, default=5)
        if name == "sweep":
            pass
    return ap


DEFAULT_RES = {"spectrum": 200, "ring-opt": 256, "torus-opt": 48, "flow": 48}


def _grid(ns, task: str) -> list[dict]:
    res = ns.resolution or DEFAULT_RES.get(task, 128)
    if task == "constants":
        return [{"a": a, "p": p}
                for a, p in itertools.product(_floats(ns.a), _floats(ns.p or "4.0"))]
    if task == "spectrum":
        return [{"a": a, "domain": ns.domain, "resolution": res, "count": ns.count}
                for a in _floats(ns.a)]
    if task == "ring-opt":
        return [{"a": a, "p": p, "param": m, "resolution": res}
                for a, p, m in itertools.product(_floats(ns.a), _floats(ns.p or "1.5"),
                                                 _floats(ns.param))]
    if task == "torus-opt":
        return [{"a": a, "p": p, "mu": m, "resolution": res}
                for a, p, m in itertools.product(_floats(ns.a), _floats(ns.p or "1.5"),
                                                 _floats(ns.mu))]
    if task == "planar-opt":
        return [{"a": a, "p": p, "lam": lam}
                for a, p, lam in itertools.product(_floats(ns.a), _floats(ns.p or "4.0"),
                                                   _floats(ns.lam))]
    if task == "flow":
        return [{"p": p, "lam": lam, "t_end": ns.t_end, "dt": ns.dt, "seed": ns.seed,
                 "resolution": res}
                for p, lam in itertools.product(_floats(ns.p), _floats(ns.lam))]
    if task == "certify":
        ids = [i.strip() for i in ns.ids.split(",")] if ns.ids else [c.value for c in cert.InequalityId]
        return [{"id": cid, "seed": s}
                for cid, s in itertools.product(ids, range(ns.seed, ns.seed + ns.seeds))]
    raise SystemExit(f"no grid builder for {task}")


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    task = ns.cmd
    if ns.config:
        cfg = parse_config(ns.config)
        if task == "sweep":
            task = cfg.pop("task", None)
            if task is None:
                sys.stderr.write("sweep config must set `task = <subcommand>`\n")
                return 1
        for key, value in cfg.items():
            attr = key
            if not hasattr(ns, attr):
                sys.stderr.write(f"unknown config key {key}\n")
                return 1
            current = getattr(ns, attr)
            # command-line values win only when explicitly provided; argparse
            # defaults are overridden by the file
            if f"--{key.replace('_', '-')}" not in (argv or sys.argv[1:]):
                cast = type(current) if current is not None and not isinstance(current, str) else str
                setattr(ns, attr, cast(value) if not isinstance(current, bool) else value == "true")
    elif task == "sweep":
        sys.stderr.write("sweep requires --config\n")
        return 1

    try:
        points = _grid(ns, task)
        rows = run_sweep(task, points, workers=ns.workers)
    except SolverError as exc:
        sys.stderr.write(f"solver failure: {exc}\n")
        return 2

    emit_records(rows, SCHEMAS[task], ns.format, ns.out)

    bad = any(str(r.get("status", "")).startswith("error") for r in rows)
    violated = any(r.get("verdict") == "Violated" for r in rows)
    return 2 if (bad or violated) else 0


if __name__ == "__main__":
    sys.exit(main())
