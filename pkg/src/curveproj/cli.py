"""Command line: ``curveproj PAIR [options]``.

PAIR is a JSON file {"C1": {...}, "C2": {...}} or the name of a bundled
fixture (see ``--list-fixtures``).  The report goes to stdout.

Exit codes: 0 when at least one projection is found (exact, or approximate
and accepted), 1 when none is found, 2 on input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .curves import plane_of_curve
from .detect import DEFAULT_SEED, compute_constraint_surface, run_exact
from .errors import CurveprojError, ParseError
from .geometry import apply_projection, build_projection_matrix
from .numeric import DEFAULT_EPSILON, DEFAULT_PRECISION, DEFAULT_SAMPLES, NumCurve, detect_approx, float_plane
from .parser import CurveSpec, load_pair
from .report import NOT_FOUND, build_report, emit_report_json, ordered_findings, rat
from .svg import emit_svg_plot


def fixture_names() -> list[str]:
    root = resources.files("curveproj") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_document(arg: str) -> dict:
    p = Path(arg)
    if p.is_file():
        text = p.read_text(encoding="utf-8")
    else:
        name = arg[:-5] if arg.endswith(".json") else arg
        if name not in fixture_names():
            raise FileNotFoundError(f"no such file or bundled fixture: {arg}")
        text = (resources.files("curveproj") / "fixtures" / f"{name}.json").read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from None


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _precision(text):
    try:
        v = Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _samples(text):
    n = int(text)
    if n < 64:
        raise argparse.ArgumentTypeError("at least 64 samples are needed")
    return n


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="curveproj", description="Decide whether a space curve projects onto a planar curve.")
    ap.add_argument("pair", nargs="?", help="pair JSON file or bundled fixture name")
    ap.add_argument("--mode", choices=("exact", "approx", "both"), default="both")
    ap.add_argument("--epsilon", type=_positive_float, default=DEFAULT_EPSILON, help="Hausdorff acceptance threshold")
    ap.add_argument("--samples", type=_samples, default=DEFAULT_SAMPLES, help="samples per curve for Hausdorff estimates")
    ap.add_argument("--precision", type=_precision, default=DEFAULT_PRECISION, help="root isolation width")
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for fallback rational sampling")
    ap.add_argument("--svg", metavar="PATH", help="write one overlay per finding as PATH-<i>.svg")
    ap.add_argument("--json", action="store_true", help="JSON report on stdout (the default)")
    ap.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    ap.add_argument("--list-fixtures", action="store_true", help="print bundled fixture names and exit")
    ap.add_argument("--version", action="version", version=f"curveproj {__version__}")
    return ap


def error_json(exc: BaseException) -> bytes:
    kind = exc.kind if isinstance(exc, CurveprojError) else type(exc).__name__
    doc = {"error": {"type": kind, "message": str(exc)}}
    return (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode("utf-8")


def svg_paths(base: str, count: int) -> list[Path]:
    p = Path(base)
    suffix = p.suffix or ".svg"
    stem = p.with_suffix("") if p.suffix else p
    return [Path(f"{stem}-{i}{suffix}") for i in range(1, count + 1)]


def _projected(obj, c1, plane):
    if hasattr(obj, "matrix"):
        return apply_projection(obj.matrix, c1)
    P = build_projection_matrix(obj.proj_point(), float_plane(plane)).to_numpy()
    return NumCurve.from_curve(c1).project(P)


def run_detect_command(args) -> tuple[int, bytes, dict]:
    """Returns (exit code, stdout bytes, {svg path: text})."""
    timings = {}
    t_start = time.perf_counter()
    try:
        doc = load_document(args.pair)
        c1, c2 = load_pair(doc)
        inputs = {k: CurveSpec.from_doc(doc[k]).to_doc() for k in ("C1", "C2")}
        plane, _ = plane_of_curve(c2)
        surface = compute_constraint_surface(c1, c2)
        timings["surface"] = time.perf_counter() - t_start
        exact, rejected, approx = [], [], []
        if args.mode in ("exact", "both"):
            t0 = time.perf_counter()
            exact, rejected = run_exact(c1, c2, surface, seed=args.seed)
            timings["exact"] = time.perf_counter() - t0
        if args.mode in ("approx", "both"):
            t0 = time.perf_counter()
            approx = detect_approx(c1, c2, args.epsilon, args.samples, args.precision, surface=surface)
            timings["approx"] = time.perf_counter() - t0
    except (CurveprojError, FileNotFoundError, ValueError) as exc:
        return 2, error_json(exc), {}
    params = {
        "epsilon": args.epsilon,
        "samples": args.samples,
        "precision": rat(args.precision),
        "seed": args.seed,
    }
    timings["total"] = time.perf_counter() - t_start
    report = build_report(inputs, args.mode, params, exact, rejected, approx, timings if args.timings else None)
    svgs = {}
    if args.svg:
        pairs = ordered_findings(exact, approx)
        for path, (_, obj) in zip(svg_paths(args.svg, len(pairs)), pairs):
            try:
                proj = _projected(obj, c1, plane)
                svgs[str(path)] = emit_svg_plot(c2, proj, plane, title=path.stem)
            except CurveprojError:
                continue
    code = 1 if report["status"] == NOT_FOUND else 0
    return code, emit_report_json(report), svgs


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.list_fixtures:
        print("\n".join(fixture_names()))
        return 0
    if not args.pair:
        ap.error("the pair argument is required")
    np.seterr(all="ignore")
    code, out, svgs = run_detect_command(args)
    for path, text in svgs.items():
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text, encoding="utf-8")
    sys.stdout.buffer.write(out)
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
