"""Command line entry point: ``python3 -m schurmult <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .core import ExponentPair, as_exponent
from .discretize import discretize_kernel, parse_kernel, parse_partition
from .experiments import (explore_open_problem, run_inclusion_check, run_kernel_growth,
                          run_triangle_growth)
from .io import matrix_to_csv, matrix_to_dict, read_matrix, report_to_csv, report_to_json
from .opnorm import SearchConfig, opnorm
from .schur import (certificate_upper, certificate_value, dominated_norm, duality_report,
                    factorization_solve, multiplier_norm_lower)


def _exponent(text):
    try:
        return as_exponent(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _sizes(text):
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None


def _common(p: argparse.ArgumentParser, p_default="2", q_default="2"):
    p.add_argument("--p", type=_exponent, default=as_exponent(p_default))
    p.add_argument("--q", type=_exponent, default=as_exponent(q_default))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--atoms", type=int, default=None)
    p.add_argument("--out", default=None, help="write here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="schurmult",
                                 description="Schur multiplier norms on B(l_p, l_q).")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, help_ in (("opnorm", "operator norm ||A||_{p->q}"),
                        ("schurnorm", "lower bound on the multiplier norm"),
                        ("factorize", "factorization certificate (upper bound)"),
                        ("dominated", "dominated-operator norm"),
                        ("duality", "lower/upper sandwich")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("matrix", help="matrix file (.json or .csv)")
        _common(sp)

    sp = sub.add_parser("discretize", help="cell averages of a kernel")
    sp.add_argument("--kernel", required=True, help="signstep | const:<c> | gauss:<s> | grid:<path>")
    sp.add_argument("--pa", required=True, help="s partition, uniform:<a>:<b>:<n>")
    sp.add_argument("--pb", default=None, help="t partition (defaults to --pa)")
    sp.add_argument("--domain", default="-1:1", help="kernel domain a:b")
    _common(sp)

    sp = sub.add_parser("triangle", help="triangular truncation growth")
    sp.add_argument("--sizes", type=_sizes, default=[8, 16, 32, 64, 128, 256])
    _common(sp)

    sp = sub.add_parser("kernel-growth", help="kernel multiplier norms under refinement")
    sp.add_argument("--kernel", default="signstep")
    sp.add_argument("--L", type=float, default=1.0, dest="truncation")
    sp.add_argument("--sizes", type=_sizes, default=[2, 4, 8, 16, 32, 64])
    _common(sp)

    sp = sub.add_parser("inclusion", help="compare (p2,q2) lower with (p1,q1) upper bounds")
    sp.add_argument("--p1", type=_exponent, default=as_exponent(4))
    sp.add_argument("--q1", type=_exponent, default=as_exponent(2))
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--size", type=int, default=4)
    sp.add_argument("--exhaustive", action="store_true", help="2x2 grid oracle for the lower side")
    _common(sp, "3", "2.5")

    sp = sub.add_parser("open-problem", help="ratio of (p,p) and (p,1) multiplier norms")
    sp.add_argument("--trials", type=int, default=8)
    sp.add_argument("--size", type=int, default=4)
    _common(sp, "1.5", "1")
    return ap


def _config(ns) -> SearchConfig:
    return SearchConfig(restarts=ns.restarts, max_iters=ns.max_iters, tol=ns.tol, seed=ns.seed)


def _estimate_dict(est) -> dict:
    return {"lower": est.lower, "upper": est.upper if np.isfinite(est.upper) else None,
            "methods": list(est.methods),
            "witness": None if est.witness is None else np.asarray(est.witness).tolist()}


def _emit(ns, payload=None, matrix=None, report=None):
    if report is not None:
        text = report_to_csv(report) if ns.format == "csv" else report_to_json(report) + "\n"
    elif matrix is not None:
        text = matrix_to_csv(matrix) if ns.format == "csv" else json.dumps(matrix_to_dict(matrix)) + "\n"
    else:
        if ns.format == "csv":
            keys = [k for k, v in payload.items() if not isinstance(v, (list, dict))]
            text = ",".join(keys) + "\n" + ",".join(
                f"{payload[k]:.17g}" if isinstance(payload[k], float) else str(payload[k])
                for k in keys) + "\n"
        else:
            text = json.dumps(payload, indent=2) + "\n"
    if ns.out:
        with open(ns.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cert_dict(cert, pq, m) -> dict:
    return {"value": certificate_value(cert, pq), "upper": certificate_upper(cert, pq, m),
            "residual": cert.residual, "atom_weights": cert.atom_weights.tolist(),
            "x_vectors": cert.x_vectors.tolist(), "y_vectors": cert.y_vectors.tolist()}


def run(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = _config(ns)
    pq = ExponentPair(ns.p, ns.q)
    cmd = ns.command

    if cmd in ("opnorm", "schurnorm", "factorize", "dominated", "duality"):
        m = read_matrix(ns.matrix)
        if cmd == "opnorm":
            _emit(ns, _estimate_dict(opnorm(m, pq, cfg)))
        elif cmd == "schurnorm":
            _emit(ns, _estimate_dict(multiplier_norm_lower(m, pq, cfg)))
        elif cmd == "factorize":
            _emit(ns, _cert_dict(factorization_solve(m, pq, ns.atoms, cfg), pq, m))
        elif cmd == "dominated":
            value, sc, certified = dominated_norm(m, pq, cfg)
            _emit(ns, {"value": value, "certified": certified, "mu": sc.mu.tolist(),
                       "nu": sc.nu.tolist()})
        else:
            rep = duality_report(m, pq, cfg, atoms=ns.atoms)
            _emit(ns, rep.as_dict())
        return 0

    if cmd == "discretize":
        a, b = (float(x) for x in ns.domain.split(":"))
        k = parse_kernel(ns.kernel, (a, b))
        pa = parse_partition(ns.pa)
        pb = parse_partition(ns.pb) if ns.pb else pa
        _emit(ns, matrix=discretize_kernel(k, pa, pb))
        return 0

    if cmd == "triangle":
        rep = run_triangle_growth(ns.sizes, pq, cfg)
    elif cmd == "kernel-growth":
        k = parse_kernel(ns.kernel, (-ns.truncation, ns.truncation))
        rep = run_kernel_growth(k, ns.truncation, ns.sizes, pq, cfg)
    elif cmd == "inclusion":
        rep = run_inclusion_check(ExponentPair(ns.p1, ns.q1), pq, ns.trials, cfg,
                                  size=ns.size, exhaustive=ns.exhaustive)
    else:
        rep = explore_open_problem(ns.p, ns.trials, cfg, size=ns.size)
    _emit(ns, report=rep)
    return 0


def main(argv=None):
    try:
        code = run(argv)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        code = 2
    sys.exit(code)


if __name__ == "__main__":
    main()
