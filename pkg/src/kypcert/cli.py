"""Command-line interface.

Subcommands: check, transform, combine, eval, wmat, fixtures. Every command
prints a JSON report to stdout. Exit codes: 0 = pass, 1 = usage/IO/tool
error, 2 = refuted by a concrete witness, 3 = inconclusive.
"""

from __future__ import annotations

import argparse
import datetime
import math
import os
import sys

import numpy as np

from . import __version__
from .convexity import random_isometry_family, verify_preservation
from .exceptions import PassivityError
from .families import (
    MembershipReport,
    family_domain,
    hyper_bounded_oracle,
    lossless_boundary_oracle,
    make_grid,
    membership_oracle,
)
from .fixtures import FIXTURE_NAMES, fixture
from .qmi import (
    Certificate,
    Family,
    FamilyTag,
    NotFound,
    balance,
    build_balanced_weight,
    build_weight,
    check_lossless,
    solve_p,
    verify_kyp,
)
from .realization import (
    change_coordinates,
    evaluate,
    invert_array,
    invert_function,
    is_minimal,
)
from .families import bilinear_substitute, cayley_function
from .serialization import (
    encode_matrix,
    file_digest,
    load_isometry_family,
    load_matrix,
    load_realization,
    save_realization,
)
from ._linalg import spectral_norm

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_REFUTED = 2
EXIT_INCONCLUSIVE = 3

FAMILY_CODES = {
    "p": Family.POSITIVE_REAL,
    "b": Family.BOUNDED_REAL,
    "dp": Family.DISCRETE_POSITIVE_REAL,
    "db": Family.DISCRETE_BOUNDED_REAL,
}


def _default_seed() -> int:
    try:
        return int(os.environ.get("PASSIVITY_SEED", "0"))
    except ValueError:
        return 0


def _emit(report: dict, deterministic: bool) -> None:
    import json

    if not deterministic:
        report["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    print(json.dumps(report, indent=2, sort_keys=True))


def _base_report(args, argv: list[str], inputs: list[str]) -> dict:
    return {
        "command": argv,
        "tool": {"name": "kypcert", "version": __version__},
        "seed": getattr(args, "seed", None),
        "inputs": {path: file_digest(path) for path in inputs},
    }


def _complex_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _report_oracle(rep: MembershipReport) -> dict:
    out = {
        "family": rep.family,
        "verdict": rep.verdict,
        "worst_margin": rep.worst_margin,
        "samples_used": rep.samples_used,
        "skipped": rep.skipped,
        "tol": rep.tol,
    }
    if rep.worst_point is not None:
        out["worst_point"] = _complex_pair(rep.worst_point)
    return out


def _report_certificate(cert: Certificate) -> dict:
    return {
        "family": cert.family.label,
        "status": cert.status.value,
        "min_eig_p": None if math.isinf(cert.min_eig_p) else cert.min_eig_p,
        "min_eig_q": cert.min_eig_q,
        "p": encode_matrix(cert.p),
    }


def _tag(args) -> FamilyTag:
    family = FAMILY_CODES[args.family]
    eta = getattr(args, "eta", None)
    if eta is not None and math.isfinite(eta):
        return FamilyTag(family=family, eta=eta)
    return FamilyTag(family=family)


def cmd_check(args, argv) -> int:
    r = load_realization(args.file)
    tag = _tag(args)
    grid = make_grid(family_domain(tag), args.grid, args.grid, args.seed)
    report = _base_report(args, argv, [args.file])
    report["family"] = tag.label
    minimal, rank_c, rank_o = is_minimal(r)
    report["minimal"] = {"minimal": minimal, "rank_ctrb": rank_c, "rank_obsv": rank_o}
    report["grid"] = {
        "domain": grid.domain.value,
        "boundary": int(grid.boundary_points.size),
        "interior": int(grid.interior_points.size),
        "seed": grid.seed,
    }

    if args.eta is not None and math.isfinite(args.eta):
        oracle = hyper_bounded_oracle(r, args.eta, grid, args.tol_oracle)
    else:
        oracle = membership_oracle(r, tag, grid, args.tol_oracle)
    report["oracle"] = _report_oracle(oracle)

    if args.lossless:
        if tag.family not in (Family.POSITIVE_REAL, Family.BOUNDED_REAL):
            print("error: --lossless needs --family p or b", file=sys.stderr)
            return EXIT_ERROR
        kind = "LP" if tag.family is Family.POSITIVE_REAL else "LB"
        report["lossless_oracle"] = _report_oracle(lossless_boundary_oracle(r, kind, grid, args.tol_oracle))

    cert = None
    if args.p_matrix:
        p = load_matrix(args.p_matrix)
        report["inputs"][args.p_matrix] = file_digest(args.p_matrix)
        cert = verify_kyp(r, p, tag, args.tol_psd)
    elif args.solve:
        found = solve_p(r, tag, tol_psd=args.tol_psd)
        if isinstance(found, NotFound):
            report["solver"] = {
                "status": "not-found",
                "iterations": found.iterations,
                "residual": found.residual,
                "note": "not a proof of non-membership",
            }
        else:
            cert = found
    if cert is not None:
        report["certificate"] = _report_certificate(cert)
        if args.lossless and cert.verified:
            report["lossless_qmi"] = bool(check_lossless(r, cert.p, tag, args.tol_oracle))

    oracle_pass = oracle.passed and (not args.lossless or report["lossless_oracle"]["verdict"] == "pass")
    cert_verified = cert is not None and cert.verified
    if cert_verified and not oracle_pass:
        # The algebraic certificate and the sampling oracle may never disagree.
        report["verdict"] = "tool-error"
        report["note"] = "verified certificate but failing oracle: internal inconsistency"
        _emit(report, args.deterministic)
        return EXIT_ERROR
    if not oracle_pass:
        report["verdict"] = "refuted-by-witness"
        _emit(report, args.deterministic)
        return EXIT_REFUTED
    wants_certificate = args.solve or args.p_matrix
    if wants_certificate and not cert_verified:
        report["verdict"] = "inconclusive"
        if not minimal:
            report["note"] = "realization is not minimal; only sampling evidence is available"
        _emit(report, args.deterministic)
        return EXIT_INCONCLUSIVE
    report["verdict"] = "pass"
    _emit(report, args.deterministic)
    return EXIT_OK


def cmd_transform(args, argv) -> int:
    r = load_realization(args.file)
    report = _base_report(args, argv, [args.file])
    report["op"] = args.op
    if args.op == "cayley-fn":
        out = cayley_function(r)
    elif args.op == "bilinear":
        out = bilinear_substitute(r)
    elif args.op == "invert-array":
        out = invert_array(r)
    elif args.op == "invert-fn":
        out = invert_function(r)
    elif args.op == "coords":
        if not args.t_matrix:
            print("error: --op coords needs --t-matrix", file=sys.stderr)
            return EXIT_ERROR
        t = load_matrix(args.t_matrix)
        report["inputs"][args.t_matrix] = file_digest(args.t_matrix)
        out = change_coordinates(r, t)
    elif args.op == "balance":
        if not args.p_matrix or not args.family:
            print("error: --op balance needs --p-matrix and --family", file=sys.stderr)
            return EXIT_ERROR
        p = load_matrix(args.p_matrix)
        report["inputs"][args.p_matrix] = file_digest(args.p_matrix)
        tag = _tag(args)
        cert = verify_kyp(r, p, tag, args.tol_psd)
        if not cert.verified:
            report["certificate"] = _report_certificate(cert)
            report["verdict"] = "certificate-not-verified"
            _emit(report, args.deterministic)
            return EXIT_INCONCLUSIVE
        out, new_cert = balance(r, cert)
        report["certificate"] = _report_certificate(new_cert)
    else:  # pragma: no cover - argparse restricts choices
        return EXIT_ERROR
    save_realization(args.output, out)
    report["output"] = args.output
    report["verdict"] = "ok"
    _emit(report, args.deterministic)
    return EXIT_OK


def cmd_combine(args, argv) -> int:
    paths = [p for p in args.inputs.split(",") if p]
    if not paths:
        print("error: --inputs needs at least one file", file=sys.stderr)
        return EXIT_ERROR
    rs = [load_realization(p) for p in paths]
    report = _base_report(args, argv, paths)
    tag = _tag(args)
    if args.isometries:
        fam = load_isometry_family(args.isometries)
        report["inputs"][args.isometries] = file_digest(args.isometries)
    else:
        k = args.random if args.random else len(rs)
        if k != len(rs):
            print(f"error: --random {k} does not match {len(rs)} inputs", file=sys.stderr)
            return EXIT_ERROR
        fam = random_isometry_family(k, rs[0].n, rs[0].m, args.seed)
    result = verify_preservation(rs, fam, tag, args.tol_psd)
    save_realization(args.output, result.combined)
    report["output"] = args.output
    report["family"] = tag.label
    report["per_input"] = [_report_certificate(c) for c in result.per_input]
    report["combined"] = _report_certificate(result.certificate)
    report["combined"]["q_norm"] = spectral_norm(result.certificate.q)
    ok = result.certificate.verified
    report["verdict"] = "pass" if ok else "inconclusive"
    _emit(report, args.deterministic)
    return EXIT_OK if ok else EXIT_INCONCLUSIVE


def cmd_eval(args, argv) -> int:
    r = load_realization(args.file)
    try:
        re_s, im_s = args.at.split(",")
        z = complex(float(re_s), float(im_s))
    except ValueError:
        print(f"error: --at expects 're,im', got {args.at!r}", file=sys.stderr)
        return EXIT_ERROR
    sample = evaluate(r, z)
    report = _base_report(args, argv, [args.file])
    report["z"] = _complex_pair(z)
    report["value"] = encode_matrix(sample.value)
    _emit(report, args.deterministic)
    return EXIT_OK


def cmd_wmat(args, argv) -> int:
    tag = _tag(args)
    report = _base_report(args, argv, [])
    if args.p_matrix and not args.balanced:
        p = load_matrix(args.p_matrix)
        report["inputs"][args.p_matrix] = file_digest(args.p_matrix)
        w = build_weight(tag, p, args.m)
    else:
        w = build_balanced_weight(tag, args.n, args.m)
    report["family"] = tag.label
    report["n"] = w.n
    report["m"] = w.m
    report["entries"] = encode_matrix(w.entries)
    _emit(report, args.deterministic)
    return EXIT_OK


def cmd_fixtures(args, argv) -> int:
    r = fixture(args.name, a=args.a, b=args.b)
    meta = {"name": args.name}
    if args.name in ("F1", "F2", "F3"):
        meta["params"] = {"a": args.a if args.a is not None else 1.0,
                          "b": args.b if args.b is not None else 1.0}
    save_realization(args.output, r, metadata=meta)
    report = _base_report(args, argv, [])
    report["fixture"] = meta
    report["output"] = args.output
    _emit(report, args.deterministic)
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol-psd", type=float, default=None, help="PSD slack for certificates")
    p.add_argument("--tol-oracle", type=float, default=1e-8, help="margin tolerance for oracles")
    p.add_argument("--seed", type=int, default=_default_seed(), help="grid/random seed (default $PASSIVITY_SEED or 0)")
    p.add_argument("--deterministic", action="store_true", help="suppress the timestamp field")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kypcert", description=__doc__)
    parser.add_argument("--version", action="version", version=f"kypcert {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("check", help="verify family membership (certificate and sampling oracle)")
    p.add_argument("--family", required=True, choices=sorted(FAMILY_CODES))
    p.add_argument("--eta", type=float, default=None, help="hyper-bounded parameter in (1, inf]")
    p.add_argument("--lossless", action="store_true", help="also run the lossless boundary checks")
    p.add_argument("--p-matrix", default=None, help="verify this certificate P (matrix document)")
    p.add_argument("--solve", action="store_true", help="search for a certificate P")
    p.add_argument("--grid", type=int, default=64, help="boundary/interior sample counts")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("transform", help="apply a realization transform")
    p.add_argument("--op", required=True,
                   choices=["cayley-fn", "bilinear", "invert-array", "invert-fn", "balance", "coords"])
    p.add_argument("--t-matrix", default=None)
    p.add_argument("--p-matrix", default=None)
    p.add_argument("--family", choices=sorted(FAMILY_CODES), default=None)
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("combine", help="matrix-convex combination with certificate preservation")
    p.add_argument("--family", required=True, choices=sorted(FAMILY_CODES))
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--inputs", required=True, help="comma-separated realization files")
    p.add_argument("--isometries", default=None, help="isometry family document")
    p.add_argument("--random", type=int, default=None, help="sample k random tiers instead")
    p.add_argument("-o", "--output", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_combine)

    p = sub.add_parser("eval", help="evaluate the transfer function at a point")
    p.add_argument("--at", required=True, help="complex point as 're,im'")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("wmat", help="print a family weight matrix")
    p.add_argument("--family", required=True, choices=sorted(FAMILY_CODES))
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--balanced", action="store_true")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p-matrix", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_wmat)

    p = sub.add_parser("fixtures", help="write a worked-example realization")
    p.add_argument("--name", required=True, choices=list(FIXTURE_NAMES))
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("-o", "--output", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help/--version, 2 for usage errors
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    try:
        return args.func(args, argv)
    except PassivityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
