"""Command-line entry point.

Exit codes: 0 success or all checks passed, 1 a check failed, 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import ast
import json
import os
import sys

import numpy as np

from . import gallery, io, suites
from .chords import chord_length_distribution
from .covariogram import covariogram_grid, dk_map
from .errors import CovkitError, ParseError
from .smooth import body_from_curvature
from .symmetry import check_pair, detect_local_symmetries

DEFAULT_SEED = 42


class UsageError(Exception):
    pass


def resolve_seed(flag):
    """Seed precedence: flag, then COVKIT_SEED, then 42."""
    if flag is not None:
        return int(flag)
    env = os.environ.get("COVKIT_SEED")
    if env not in (None, ""):
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"COVKIT_SEED must be an integer, got {env!r}") from None
    return DEFAULT_SEED


def _emit(obj, path=None):
    if path:
        io.write_json(obj, path)
    else:
        json.dump(io._plain(obj), sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")


def _parse_params(items):
    out = {}
    for it in items or []:
        if "=" not in it:
            raise UsageError(f"parameter {it!r} is not key=value")
        k, v = it.split("=", 1)
        try:
            out[k] = ast.literal_eval(v)
        except (ValueError, SyntaxError):
            out[k] = v
    return out


def _read_pair(path):
    with open(path) as fh:
        doc = io._loads(fh.read())
    if not isinstance(doc, dict) or doc.get("type") != "pair":
        raise ParseError("expected a pair file", "field 'type'")
    return io.body_from_dict(doc.get("K")), io.body_from_dict(doc.get("H"))


# commands ---------------------------------------------------------------------


def cmd_body_from_curvature(a):
    R, base = io.read_profile(a.input)
    B = body_from_curvature(R, base)
    io.write_body(B, a.out)
    return 0


def cmd_cov_eval(a):
    B = io.read_body(a.body)
    fld = covariogram_grid(B, a.step, region=a.region, body_id=os.path.basename(a.body))
    io.export_field(fld, a.out)
    return 0


def cmd_cov_dk(a):
    B = io.read_body(a.body)
    r = dk_map(B, (a.x, a.y))
    _emit(
        {
            "x": r.x,
            "dk": r.dk,
            "p": r.p,
            "q": r.q,
            "parallelogram_area": r.parallelogram_area,
        }
    )
    return 0


def cmd_sym_detect(a):
    B = io.read_body(a.body)
    if not hasattr(B, "R"):
        raise UsageError("symmetry detection needs a smooth body")
    rep = detect_local_symmetries(B, a.tol)
    _emit(
        {
            "centrally_symmetric": rep.centrally_symmetric,
            "symmetries": [s.as_dict() for s in rep],
        },
        a.out,
    )
    return 0


def cmd_pair_check(a):
    if a.pair:
        K, H = _read_pair(a.pair)
    elif a.k and a.h:
        K, H = io.read_body(a.k), io.read_body(a.h)
    else:
        raise UsageError("give --pair FILE or both --k and --h")
    v = check_pair(K, H, band=a.band)
    _emit(v.as_dict(), a.out)
    return 0


def cmd_chords_dist(a):
    B = io.read_body(a.body)
    poly = B.polygon() if hasattr(B, "polygon") else B
    hist = chord_length_distribution(poly, (np.cos(a.theta), np.sin(a.theta)), a.bins)
    io.export_histogram(hist, a.out)
    return 0


def _make(name, params):
    if name in ("p1", "p2"):
        if params:
            raise UsageError(f"{name} takes no parameters")
        return gallery.p1_p2()[0 if name == "p1" else 1]
    if name == "part4":
        return gallery.part_iv_pair(**params)
    if name == "radial-flip":
        rf = gallery.radial_flip_pair(**params)
        return rf.K, rf.H
    if name == "remark-flip":
        rb = gallery.remark_body(**params)
        return gallery.flip_remark_pair(rb.K, rb.b1)
    raise UsageError(f"unknown gallery item {name!r}")


def cmd_gallery_make(a):
    try:
        made = _make(a.item, _parse_params(a.params))
    except TypeError as e:
        raise UsageError(str(e)) from None
    if isinstance(made, tuple):
        doc = {"type": "pair", "K": io.body_to_dict(made[0]), "H": io.body_to_dict(made[1])}
        with open(a.out, "w") as fh:
            json.dump(doc, fh)
            fh.write("\n")
    else:
        io.write_body(made, a.out)
    return 0


GALLERY_CHECKS = {
    "lemma-quadratic": [suites.crit_quadratic],
    "simplex-scaling": [suites.crit_simplex],
    "p1p2": [suites.crit_p1p2],
    "part4": [suites.crit_part4],
    "radial-flip": [suites.crit_radial_flip],
    "remark-flip": [suites.crit_remark_flip],
}


def cmd_gallery_check(a):
    cfg = suites.SuiteConfig(seed=resolve_seed(a.seed), band=a.band).validate()
    checks = [c for g in GALLERY_CHECKS[a.item] for c in g(cfg)]
    ok = all(c.passed for c in checks)
    _emit({"check": a.item, "passed": ok, "seed": cfg.seed, "checks": [c.as_dict() for c in checks]}, a.report)
    return 0 if ok else 1


def cmd_suite_run(a):
    cfg = suites.SuiteConfig(seed=resolve_seed(a.seed), band=a.band, jobs=a.jobs)
    rep = suites.run_suite(a.name, cfg)
    _emit(rep.as_dict(), a.out)
    for c in rep.checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {rep.suite_name}:{c.name} residual={c.residual:.3g} tol={c.tolerance:.3g}", file=sys.stderr)
    return 0 if rep.passed else 1


# parser -----------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="covkit", description="Covariogram toolkit for planar convex bodies.")
    sub = p.add_subparsers(dest="group", required=True)

    body = sub.add_parser("body").add_subparsers(dest="cmd", required=True)
    s = body.add_parser("from-curvature", help="integrate a curvature profile into a body file")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_body_from_curvature)

    cov = sub.add_parser("cov").add_subparsers(dest="cmd", required=True)
    s = cov.add_parser("eval", help="covariogram on a grid, written as CSV")
    s.add_argument("--body", required=True)
    s.add_argument("--step", type=float, required=True)
    s.add_argument("--region", default="support", choices=["support"])
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_cov_eval)
    s = cov.add_parser("dk", help="chord map D_K at a point")
    s.add_argument("--body", required=True)
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--y", type=float, required=True)
    s.set_defaults(func=cmd_cov_dk)

    sym = sub.add_parser("sym").add_subparsers(dest="cmd", required=True)
    s = sym.add_parser("detect", help="local symmetries of a smooth body")
    s.add_argument("--body", required=True)
    s.add_argument("--tol", type=float, default=None)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_sym_detect)

    pair = sub.add_parser("pair").add_subparsers(dest="cmd", required=True)
    s = pair.add_parser("check", help="verdicts for a pair of bodies")
    s.add_argument("--k")
    s.add_argument("--h")
    s.add_argument("--pair", help="pair file written by 'gallery make'")
    s.add_argument("--band", type=float, default=0.05)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_pair_check)

    ch = sub.add_parser("chords").add_subparsers(dest="cmd", required=True)
    s = ch.add_parser("dist", help="chord-length distribution as CSV")
    s.add_argument("--body", required=True)
    s.add_argument("--theta", type=float, required=True)
    s.add_argument("--bins", type=int, default=50)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_chords_dist)

    gal = sub.add_parser("gallery").add_subparsers(dest="cmd", required=True)
    s = gal.add_parser("make", help="write a gallery body or pair")
    s.add_argument("item", choices=["p1", "p2", "part4", "radial-flip", "remark-flip"])
    s.add_argument("--params", nargs="*", default=[], metavar="KEY=VALUE")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_gallery_make)
    s = gal.add_parser("check", help="run one gallery check")
    s.add_argument("item", choices=list(GALLERY_CHECKS))
    s.add_argument("--report", default=None)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--band", type=float, default=0.05)
    s.set_defaults(func=cmd_gallery_check)

    su = sub.add_parser("suite").add_subparsers(dest="cmd", required=True)
    s = su.add_parser("run", help="run a verification suite")
    s.add_argument("name")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--band", type=float, default=0.05)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_suite_run)
    return p


def main(argv=None):
    parser = build_parser()
    a = parser.parse_args(argv)
    try:
        return a.func(a)
    except (UsageError, ParseError, suites.UnknownSuite, suites.ConfigError, FileNotFoundError) as e:
        print(f"covkit: error: {e}", file=sys.stderr)
        return 2
    except CovkitError as e:
        print(f"covkit: error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
