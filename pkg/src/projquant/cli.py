"""Command-line front end.

Exit codes: 0 success, 2 parse/validation error, 3 critical shift without a
rescue (no quantization exists), 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .checks import check_flat_equivariance, check_invariance, check_lemmas
from .coefficients import NoExistence, critical_pairs, table_for
from .errors import ProjquantError
from .geometry import cartan_curvature, curvature, is_normal, normal_cartan, ricci
from .jobs import Job, load_job
from .parsing import format_poly
from .quantization import quantize

log = logging.getLogger("projquant")


class _NoExistence(ProjquantError):
    exit_code = 3

    def __init__(self, doc):
        super().__init__("no natural projectively equivariant quantization for these weights")
        self.doc = doc


def _weights_doc(job: Job) -> dict:
    w = job.weights
    return {"lambda": str(w.lam), "mu": str(w.mu), "delta": str(w.delta)}


def _matrix_doc(M) -> dict:
    m = len(M)
    return {
        f"{a + 1},{b + 1}": format_poly(M[a][b])
        for a in range(m)
        for b in range(m)
        if M[a][b]
    }


def cmd_quantize(job: Job, args) -> dict:
    table = table_for(job.m, job.k, job.weights)
    crit = [list(p) for p in critical_pairs(job.m, job.k, job.weights.delta)]
    meta = {
        "command": "quantize",
        "m": job.m,
        "k": job.k,
        **_weights_doc(job),
        "criticality": {"critical_pairs": crit},
    }
    if isinstance(table, NoExistence):
        meta["criticality"]["rescued"] = False
        raise _NoExistence(meta)
    meta["criticality"]["rescued"] = table.rescued_from is not None
    if table.rescued_from is not None:
        meta["criticality"]["zeroed_from"] = table.rescued_from
    meta["coefficients"] = [str(c) for c in table.entries]
    D = quantize(job.christoffel, job.symbol, job.weights, table)
    meta["operator"] = [
        {"index": list(alpha), "coefficient": format_poly(c)}
        for alpha, c in sorted(D.coefficients.items(), key=lambda t: (sum(t[0]), t[0]))
    ]
    return meta


def cmd_normal_connection(job: Job, args) -> dict:
    nc = normal_cartan(job.christoffel)
    Ric = ricci(curvature(job.christoffel))
    om = cartan_curvature(nc)
    m = job.m
    g1 = {
        f"{k + 1},{l + 1},{j + 1}": format_poly(om.one[k][l][j])
        for k in range(m)
        for l in range(k + 1, m)
        for j in range(m)
        if om.one[k][l][j]
    }
    return {
        "command": "normal-connection",
        "m": m,
        "P": _matrix_doc(nc.p_tensor),
        "ricci": _matrix_doc(Ric),
        "normal": is_normal(nc),
        "curvature_g1": g1,
    }


def cmd_criticality(job: Job, args) -> dict:
    k_max = args.kmax if args.kmax is not None else max(job.k, 1)
    pairs = critical_pairs(job.m, k_max, job.weights.delta)
    return {
        "command": "criticality",
        "m": job.m,
        "k_max": k_max,
        "delta": str(job.weights.delta),
        "critical": bool(pairs),
        "critical_pairs": [list(p) for p in pairs],
    }


def cmd_check(job: Job, args) -> dict:
    suite = args.suite
    reports = []
    if suite in ("lemmas", "all"):
        k_max = args.kmax if args.kmax is not None else min(max(job.k, 1), 3)
        reports.append(check_lemmas(job.christoffel, k_max, args.seed))
    if suite in ("invariance", "all"):
        reports.append(check_invariance(job.christoffel, job.symbol, job.weights, job.alpha, args.seed))
    if suite in ("flat-equivariance", "all"):
        table = table_for(job.m, job.k, job.weights)
        if isinstance(table, NoExistence):
            raise _NoExistence({"command": "check", "suite": suite})
        reports.append(check_flat_equivariance(job.symbol, job.weights, table))
    doc = {
        "command": "check",
        "suite": suite,
        "seed": args.seed,
        "passed": all(r["passed"] for r in reports),
        "reports": reports,
    }
    if suite == "invariance":
        doc["exact-equal"] = reports[0]["exact-equal"]
    return doc


COMMANDS = {
    "quantize": cmd_quantize,
    "normal-connection": cmd_normal_connection,
    "criticality": cmd_criticality,
    "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="projquant",
        description="Exact natural projectively equivariant quantization on a chart.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--job", required=True, help="JSON job file")
        p.add_argument("--out", help="write the JSON result here instead of stdout")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
        p.add_argument("--kmax", type=int, default=None)
        return p

    common(sub.add_parser("quantize", help="emit the operator Q(Gamma, S)"))
    common(sub.add_parser("normal-connection", help="emit the normal Cartan tensor P"))
    common(sub.add_parser("criticality", help="list critical (k, l) pairs"))
    check = common(sub.add_parser("check", help="run verification suites"))
    check.add_argument("suite", choices=["lemmas", "invariance", "flat-equivariance", "all"])
    return parser


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        job = load_job(args.job)
        log.debug("loaded job m=%d k=%d", job.m, job.k)
        doc = COMMANDS[args.command](job, args)
    except _NoExistence as exc:
        _emit({"error": {"type": "NoExistence", "message": str(exc), **exc.doc}}, args.out)
        return exc.exit_code
    except ProjquantError as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, args.out)
        return exc.exit_code
    _emit(doc, args.out)
    if args.command == "check" and not doc["passed"]:
        return 4
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
