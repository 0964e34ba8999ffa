"""JSON and CSV exchange formats.

Matrices are ``{"rows": n, "cols": m, "data": [[re, im], ...]}`` in row-major
order; vectors are lists of ``[re, im]`` pairs.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np


class FormatError(ValueError):
    pass


def complex_pairs(v) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=np.complex128).ravel()]


def pair(z: complex) -> list[float]:
    return [float(complex(z).real), float(complex(z).imag)]


def matrix_to_json(X) -> dict:
    X = np.asarray(X, dtype=np.complex128)
    return {"rows": int(X.shape[0]), "cols": int(X.shape[1]), "data": complex_pairs(X)}


def _positive_int(obj: dict, key: str) -> int:
    if key not in obj:
        raise FormatError(f"missing field '{key}'")
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, int) or val < 1:
        raise FormatError(f"field '{key}' must be a positive integer, got {val!r}")
    return val


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise FormatError("matrix document must be a JSON object")
    rows, cols = _positive_int(obj, "rows"), _positive_int(obj, "cols")
    data = obj.get("data")
    if not isinstance(data, list):
        raise FormatError("field 'data' must be a list of [re, im] pairs")
    if len(data) != rows * cols:
        raise FormatError(f"field 'data' has {len(data)} entries, expected rows*cols = {rows * cols}")
    out = np.empty(rows * cols, dtype=np.complex128)
    for k, entry in enumerate(data):
        if (
            not isinstance(entry, (list, tuple))
            or len(entry) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)
        ):
            raise FormatError(f"field 'data[{k}]' must be a [re, im] pair of numbers")
        if not all(math.isfinite(x) for x in entry):
            raise FormatError(f"field 'data[{k}]' is not finite")
        out[k] = complex(entry[0], entry[1])
    return out.reshape(rows, cols)


def load_matrix(path) -> np.ndarray:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    return matrix_from_json(obj)


def save_matrix(path, X) -> None:
    write_atomic(path, json.dumps(matrix_to_json(X)))


def polygon_to_json(polygon) -> list[list[float]]:
    return complex_pairs(polygon.vertices)


def numrange_result_to_json(res) -> dict:
    return {
        "distance": res.distance,
        "value": pair(res.value),
        "achiever": complex_pairs(res.achiever),
        "converged": bool(res.converged),
        "iterations": int(res.iterations),
    }


def pnr_result_to_json(res) -> dict:
    a, b = res.achiever
    return {
        "distance": res.distance,
        "value": pair(res.value),
        "achiever": {"a": complex_pairs(a), "b": complex_pairs(b)},
        "converged": bool(res.converged),
        "restarts_used": int(res.restarts_used),
    }


def plan_to_json(plan) -> dict:
    doc = {
        "mode": plan.mode,
        "branch": plan.branch,
        "distance": plan.distance,
        "delta": plan.delta,
        "p2_predicted": plan.p2_predicted,
        "split": list(plan.split),
        "input_state": complex_pairs(plan.input_state),
        "h0": complex_pairs(plan.h0),
        "h1": complex_pairs(plan.h1),
        "omega": complex_pairs(plan.omega),
        "omega_perp": None if plan.omega_perp is None else complex_pairs(plan.omega_perp),
        "converged": bool(plan.converged),
    }
    if plan.product_factors is not None:
        a, b = plan.product_factors
        doc["product_factors"] = {"a": complex_pairs(a), "b": complex_pairs(b)}
    return doc


def transcript_to_json(transcript, delta: float, p2_predicted: float) -> dict:
    n = transcript.shots
    p1, p2 = transcript.p1_hat, transcript.p2_hat
    sigma1 = math.sqrt(delta * (1 - delta) / n) if n else 0.0
    sigma2 = math.sqrt(p2_predicted * (1 - p2_predicted) / n) if n else 0.0
    wilson = transcript.wilson()
    return {
        "shots": n,
        "counts": transcript.counts,
        "p1_hat": p1,
        "p2_hat": p2,
        "p1_exact": transcript.exact_p1,
        "p2_exact": transcript.exact_p2,
        "wilson95": {k: list(v) for k, v in wilson.items()},
        "checks": {
            "p1_within_delta_3sigma": bool(p1 <= delta + 3 * sigma1),
            "p2_within_3sigma": bool(abs(p2 - p2_predicted) <= 3 * sigma2),
        },
        "alice_basis": [complex_pairs(transcript.alice_basis[:, i]) for i in range(transcript.alice_basis.shape[1])],
        "bob_vectors": [None if v is None else complex_pairs(v) for v in transcript.bob_vectors],
    }


def shadow_to_csv(samples) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["re", "im"])
    for z in np.asarray(samples, dtype=np.complex128):
        writer.writerow([repr(float(z.real)), repr(float(z.imag))])
    return buf.getvalue()


def shadow_from_csv(text: str) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["re", "im"]:
        raise FormatError("shadow CSV must start with the header 're,im'")
    return np.array([complex(float(r[0]), float(r[1])) for r in rows[1:]], dtype=np.complex128)


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_atomic(path, text: str) -> None:
    """Write via a temporary file and rename so readers never see partial output."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
