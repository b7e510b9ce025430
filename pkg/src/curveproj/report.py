"""JSON reports: building, canonical serialization, schema location."""
from __future__ import annotations

import hashlib
import json
import math
from fractions import Fraction
from importlib import resources

import numpy as np

from . import __version__
from .detect import ProjectionFinding
from .numeric import ApproxFinding
from .ratfun import Poly, RatFun

NOT_FOUND = "No projection has been found"
FOUND = "Projection found"


def rat(v) -> dict:
    v = Fraction(v)
    return {"num": str(v.numerator), "den": str(v.denominator)}


def num(v):
    """Floats pass through; non-finite values become strings."""
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def poly_doc(p: Poly) -> list:
    return [rat(c) for c in p.coeffs]


def ratfun_doc(f: RatFun | None, var: str = "t"):
    if f is None:
        return None
    return {"num": poly_doc(f.num), "den": poly_doc(f.den), "text": f.pretty(var)}


def exact_finding_doc(f: ProjectionFinding, source: str = "exact") -> dict:
    return {
        "certification": "exact",
        "source": source,
        "kind": f.kind,
        "degenerate": f.degenerate,
        "eye": [rat(c) for c in f.eye.coords],
        "psi": ratfun_doc(f.psi),
        "psi_degree": f.psi.degree,
        "psi_inverse": ratfun_doc(f.psi_inverse),
        "lambda": ratfun_doc(f.lam),
        "matrix": [[rat(v) for v in row] for row in f.matrix.entries],
        "samples": [rat(t) for t in f.samples],
        "hausdorff": None if f.hausdorff is None else num(f.hausdorff),
    }


def approx_finding_doc(f: ApproxFinding) -> dict:
    return {
        "certification": "numeric",
        "source": "approx",
        "kind": f.kind,
        "eye": None if f.eye is None else [num(v) for v in f.eye],
        "direction": None if f.direction is None else [num(v) for v in f.direction],
        "gap": num(f.gap),
        "hausdorff": num(f.hausdorff),
        "accepted": f.accepted,
        "epsilon": num(f.epsilon),
        "branch": f.branch,
        "s_pair": [num(v) for v in f.s_pair],
        "t_pair": [num(v) for v in f.t_pair],
        "promoted": None if f.promoted is None else exact_finding_doc(f.promoted, "promoted"),
    }


def _eye_key(doc):
    if doc["certification"] == "exact":
        return [float(Fraction(int(c["num"]), int(c["den"]))) for c in doc["eye"]]
    v = doc["eye"] if doc["eye"] is not None else doc["direction"]
    return [x if isinstance(x, float) else float("inf") for x in v]


def _sort_key(doc):
    deg = doc.get("psi_degree")
    if deg is None and doc.get("promoted"):
        deg = doc["promoted"]["psi_degree"]
    return (0 if doc["certification"] == "exact" else 1, deg if deg is not None else 1 << 30, _eye_key(doc), doc.get("branch", 0))


def curve_digest(doc: dict) -> str:
    body = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(body.encode("utf-8")).hexdigest()


def is_success(doc) -> bool:
    if doc["certification"] == "exact":
        return True
    return bool(doc["accepted"])


def ordered_findings(exact=None, approx=None) -> list:
    """(document, finding object) pairs in report order."""
    pairs = [(exact_finding_doc(f), f) for f in exact or []]
    pairs += [(approx_finding_doc(f), f) for f in approx or []]
    pairs.sort(key=lambda p: _sort_key(p[0]))
    return pairs


def build_report(
    inputs: dict,
    mode: str,
    parameters: dict,
    exact=None,
    rejected=None,
    approx=None,
    timings: dict | None = None,
) -> dict:
    findings = [doc for doc, _ in ordered_findings(exact, approx)]
    ok = any(is_success(d) for d in findings)
    rep = {
        "tool": {"name": "curveproj", "version": __version__},
        "inputs": {k: {"curve": v, "digest": curve_digest(v)} for k, v in inputs.items()},
        "mode": mode,
        "parameters": parameters,
        "status": FOUND if ok else NOT_FOUND,
        "findings": findings,
        "rejected": [{"psi": ratfun_doc(p), "reason": r} for p, r in (rejected or [])],
    }
    if timings is not None:
        rep["timings"] = {k: num(v) for k, v in timings.items()}
    return rep


def _plain(o):
    if isinstance(o, dict):
        return {str(k): _plain(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_plain(v) for v in o]
    if isinstance(o, np.generic):
        o = o.item()
    if isinstance(o, float):
        return num(o)
    if isinstance(o, Fraction):
        return rat(o)
    return o


def emit_report_json(report: dict) -> bytes:
    """Canonical bytes: sorted keys, fixed separators, trailing newline."""
    text = json.dumps(_plain(report), sort_keys=True, indent=2, ensure_ascii=True, allow_nan=False)
    return (text + "\n").encode("utf-8")


def schema() -> dict:
    ref = resources.files("curveproj") / "schema" / "report.schema.json"
    return json.loads(ref.read_text(encoding="utf-8"))
