"""Command-line interface: frames, kernel grids and verification suites.

Exit codes: 0 success, 1 a property check failed, 2 invalid input or an
evaluation error, 3 a numerical failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .curve import BranchData, PeriodFrame, build_frame
from .exceptions import (DiagonalSingularity, FrameInvariantViolation, NonConvergence,
                         SuperpropError, TailBoundFailure)
from .kernels import DIAGONAL_EPS, KernelEvaluator
from .numerics import QuadratureConfig
from .verify import SUITES, default_frame, run_suite

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_USAGE = 64

CSV_HEADER = "re_zQ,im_zQ,re_zP,im_zP,re_aQ,im_aQ,re_aP,im_aP"
DEFAULTS = {"n": 2, "which": "s1", "frame": None, "grid": "8", "seed": 0, "tol": 1e-12,
            "out": None}
_CASTS = {"n": int, "which": str, "frame": str, "grid": str, "seed": int, "tol": float,
          "out": str}
SUITE_DEFAULT_N = {"zero-set": 4, "reflections": 4}
FRAMELESS_SUITES = ("frame", "bilinear", "cohomology", "theta-translations", "kontsevich")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


def read_config(path):
    """Parse a ``key=value`` file; blank lines and ``#`` comments are skipped."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CASTS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _CASTS[key](value)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: bad value for {key}") from None
    return out


def resolve(args):
    """Merge defaults, config file and flags (flags win)."""
    merged = dict(DEFAULTS)
    if getattr(args, "config", None):
        merged.update(read_config(args.config))
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    if merged["which"] not in ("s1", "s2", "a1", "a2"):
        raise UsageError(f"--which must be one of s1, s2, a1, a2 (got {merged['which']!r})")
    return merged


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _fmt(x):
    return format(float(x), ".17g")


def load_frame(path):
    return PeriodFrame.from_json(Path(path).read_text())


# --------------------------------------------------------------------------
# grids


def parse_grid(spec, n, frame, seed):
    """Return ``(zQ, zP)`` arrays of pairs in lexicographic order.

    ``N`` or ``N:re0:re1:im0:im1`` gives N values per axis: Q on the
    endpoint lattice ``linspace(lo, hi, N)`` and P on the cell-centre
    lattice, so the two only meet for odd N.  ``random:M`` draws M pairs
    from the default box with the given seed.
    """
    if frame is not None:
        x = frame.branch.array
        box = [x[0] - 1.0, x[-1] + 1.0, 0.1, 2.0]
    else:
        box = [-2.0, 2.0, 0.1, 2.0]
    parts = spec.split(":")
    try:
        if parts[0] == "random":
            m = int(parts[1])
            rng = np.random.default_rng(seed)
            zQ = rng.uniform(box[0], box[1], m) + 1j * rng.uniform(box[2], box[3], m)
            zP = rng.uniform(box[0], box[1], m) + 1j * rng.uniform(box[2], box[3], m)
            return zQ, zP
        N = int(parts[0])
        if len(parts) == 5:
            box = [float(p) for p in parts[1:]]
        elif len(parts) != 1:
            raise ValueError
    except (ValueError, IndexError):
        raise UsageError(f"bad grid spec {spec!r}") from None
    if N < 1 or box[2] < 0 or box[3] < box[2] or box[1] < box[0]:
        raise UsageError(f"bad grid spec {spec!r}")
    ends_re = np.linspace(box[0], box[1], N)
    ends_im = np.linspace(box[2], box[3], N)
    mid_re = box[0] + (box[1] - box[0]) * (np.arange(N) + 0.5) / N
    mid_im = box[2] + (box[3] - box[2]) * (np.arange(N) + 0.5) / N
    qr, qi, pr, pi = np.meshgrid(ends_re, ends_im, mid_re, mid_im, indexing="ij")
    return (qr + 1j * qi).ravel(), (pr + 1j * pi).ravel()


# --------------------------------------------------------------------------
# commands


def cmd_curve(args):
    pts = args.points
    if len(pts) < 3 or len(pts) % 2 == 0:
        raise UsageError("curve needs an odd number (>= 3) of branch points")
    conf = resolve(args)
    cfg = QuadratureConfig(target_abs_tol=conf["tol"])
    try:
        branch = BranchData(pts)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    frame = build_frame(branch, cfg)
    _emit(frame.to_json() + "\n", conf["out"])
    log = sys.stdout if conf["out"] else sys.stderr
    print(f"genus {frame.g}; invariant checks passed", file=log)
    for key, val in frame.diagnostics.items():
        print(f"  {key}: {val:.3e}", file=log)
    return EXIT_OK


def cmd_kernel(args):
    conf = resolve(args)
    n = conf["n"]
    cfg = QuadratureConfig(target_abs_tol=conf["tol"])
    frame = None
    if n >= 4:
        if not conf["frame"]:
            print(f"error: n={n} needs --frame", file=sys.stderr)
            return EXIT_INPUT
        frame = load_frame(conf["frame"])
        if 2 * frame.g + 2 != n:
            print(f"error: frame genus {frame.g} does not match n={n}", file=sys.stderr)
            return EXIT_INPUT
    ev = KernelEvaluator(n, conf["which"], frame, cfg=cfg)
    zQ, zP = parse_grid(conf["grid"], n, frame, conf["seed"])
    diag = np.abs(zP - zQ) < DIAGONAL_EPS
    keep = ~diag
    zq, zp = zQ[keep], zP[keep]
    # images of distinct points only
    uq_pts, uq_idx = np.unique(zq, return_inverse=True)
    up_pts, up_idx = np.unique(zp, return_inverse=True)
    uQ, uP = ev.u(uq_pts)[uq_idx], ev.u(up_pts)[up_idx]
    wQ, wP = ev.du(uq_pts)[uq_idx], ev.du(up_pts)[up_idx]
    try:
        f = ev.forms(zq, zp, uQ=uQ, uP=uP, wQ=wQ, wP=wP)
    except SuperpropError:
        for i in range(len(zq)):
            try:
                ev.forms(zq[i:i + 1], zp[i:i + 1], uQ=uQ[i:i + 1], uP=uP[i:i + 1],
                         wQ=wQ[i:i + 1], wP=wP[i:i + 1])
            except SuperpropError as exc:
                print(f"error: evaluation failed at zQ={zq[i]!r}, zP={zp[i]!r}: {exc}",
                      file=sys.stderr)
                return EXIT_INPUT
        raise
    lines = [CSV_HEADER]
    for a, b, c, d in zip(zq, zp, f.aQ, f.aP):
        lines.append(",".join(_fmt(t) for t in (a.real, a.imag, b.real, b.imag,
                                                c.real, c.imag, d.real, d.imag)))
    _emit("\n".join(lines) + "\n", conf["out"])
    print(f"{len(zq)} rows written; {int(diag.sum())} diagonal pairs skipped", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args):
    conf = resolve(args)
    cfg = QuadratureConfig(target_abs_tol=conf["tol"])
    frame = load_frame(conf["frame"]) if conf["frame"] else None
    from_file = read_config(args.config) if args.config else {}
    explicit_n = args.n is not None or "n" in from_file
    n = conf["n"] if explicit_n else SUITE_DEFAULT_N.get(args.suite, conf["n"])
    # reflections cover both index sets unless one is asked for
    explicit_which = args.which is not None or "which" in from_file
    which = conf["which"] if explicit_which or args.suite != "reflections" else None
    if args.suite == "zero-set" and n < 4:
        print("error: the zero-set suite needs n >= 4", file=sys.stderr)
        return EXIT_INPUT
    if frame is None and args.suite in FRAMELESS_SUITES:
        pass  # curves, if any, are chosen by the suite itself
    else:
        try:
            frame = default_frame(n, frame, cfg)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
    report = run_suite(args.suite, n=n, which=which, frame=frame,
                       seed=conf["seed"], cfg=cfg)
    _emit(json.dumps(report.to_dict(), indent=2) + "\n", conf["out"])
    log = sys.stdout if conf["out"] else sys.stderr
    for line in report.summary_lines():
        print(line, file=log)
    return EXIT_OK if report.passed else EXIT_FAIL


# --------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; flags override its entries")
    common.add_argument("--n", type=int, help="number of branes (default 2)")
    common.add_argument("--which", help="index set: s1, s2, a1 or a2 (default s1)")
    common.add_argument("--frame", help="frame JSON written by the curve command")
    common.add_argument("--grid", help="N, N:re0:re1:im0:im1 or random:M (default 8)")
    common.add_argument("--seed", type=int, help="seed for random probes (default 0)")
    common.add_argument("--tol", type=float, help="quadrature tolerance (default 1e-12)")
    common.add_argument("--out", help="output path (default stdout)")

    p = _Parser(prog="superprop", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    c = sub.add_parser("curve", parents=[common], help="build a period frame")
    c.add_argument("points", type=float, nargs="+", help="increasing real branch points")
    c.set_defaults(func=cmd_curve)
    k = sub.add_parser("kernel", parents=[common], help="kernel coefficients on a grid (CSV)")
    k.set_defaults(func=cmd_kernel)
    v = sub.add_parser("verify", parents=[common], help="run a verification suite (JSON)")
    v.add_argument("suite", choices=sorted(SUITES))
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FrameInvariantViolation, DiagonalSingularity) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NonConvergence, TailBoundFailure) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except SuperpropError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
