"""Plain-text file formats used by the command-line tool.

* GPT documents: JSON with fields ``order``, ``sigma`` (a number, or the
  strings ``"inf"`` / ``"0"``), ``lambda``, ``n1``, ``n2`` (row-major
  nested lists of ``[re, im]`` pairs) and a free ``metadata`` object.
* Curves: three columns ``theta x y`` after ``#``-prefixed header lines;
  header lines of the form ``# key = value`` carry parameters.
* Metrics: flat ``key=value`` lines.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .potential import Contrast
from .tensors import GptMatrix

__all__ = [
    "sigma_token",
    "parse_sigma",
    "gpt_to_dict",
    "gpt_from_dict",
    "write_gpt",
    "read_gpt",
    "write_curve",
    "read_curve",
    "write_metrics",
    "read_metrics",
]


def sigma_token(sigma: float):
    if np.isinf(sigma):
        return "inf"
    if sigma == 0:
        return "0"
    return float(sigma)


def parse_sigma(value) -> float:
    """Accepts numbers, ``inf``, ``0`` and simple fractions such as ``1/50``."""
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).strip().lower()
    if text in ("inf", "infinity", "+inf"):
        return np.inf
    if "/" in text:
        num, den = text.split("/", 1)
        return float(num) / float(den)
    return float(text)


def _pairs(A: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in A]


def _matrix(rows, order: int) -> np.ndarray:
    A = np.array(rows, dtype=float)
    if A.shape != (order, order, 2):
        raise ValueError(f"tensor block has shape {A.shape[:2]}, expected ({order}, {order})")
    return A[..., 0] + 1j * A[..., 1]


def gpt_to_dict(gpt: GptMatrix, contrast: Contrast, metadata: dict | None = None) -> dict:
    return {
        "order": gpt.order,
        "sigma": sigma_token(contrast.sigma),
        "lambda": float(contrast.lam),
        "n1": _pairs(gpt.N1),
        "n2": _pairs(gpt.N2),
        "metadata": dict(metadata or {}),
    }


def gpt_from_dict(doc: dict) -> tuple[GptMatrix, Contrast, dict]:
    try:
        order = int(doc["order"])
        contrast = Contrast.from_sigma(parse_sigma(doc["sigma"]))
        lam = float(doc["lambda"])
        n1, n2 = _matrix(doc["n1"], order), _matrix(doc["n2"], order)
    except KeyError as exc:
        raise ValueError(f"GPT document lacks field {exc}") from None
    if abs(lam - contrast.lam) > 1e-12 * max(1.0, abs(lam)):
        raise ValueError(f"lambda {lam} does not match sigma {doc['sigma']}")
    return GptMatrix(order, n1, n2, contrast.lam), contrast, doc.get("metadata", {})


def write_gpt(path, gpt: GptMatrix, contrast: Contrast, metadata: dict | None = None):
    text = json.dumps(gpt_to_dict(gpt, contrast, metadata), indent=1)
    Path(path).write_text(text + "\n")


def read_gpt(path) -> tuple[GptMatrix, Contrast, dict]:
    return gpt_from_dict(json.loads(Path(path).read_text()))


def _fmt(v) -> str:
    if isinstance(v, (complex, np.complexfloating)):
        return f"{v.real!r} {v.imag!r}"
    if isinstance(v, (list, tuple, np.ndarray)):
        return " ".join(_fmt(x) for x in v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_curve(path, theta, z, header: dict | None = None):
    """Write ``theta x y`` rows; complex header values are ``re im``."""
    theta = np.asarray(theta, dtype=float)
    z = np.asarray(z, dtype=complex)
    if np.any(np.diff(theta) <= 0) or theta[0] < 0 or theta[-1] >= 2 * np.pi:
        raise ValueError("theta must increase strictly within [0, 2pi)")
    lines = ["# gptshape curve: theta x y"]
    for key, value in (header or {}).items():
        lines.append(f"# {key} = {_fmt(value)}")
    lines += [f"{t!r} {p.real!r} {p.imag!r}" for t, p in zip(theta.tolist(), z.tolist())]
    Path(path).write_text("\n".join(lines) + "\n")


def read_curve(path) -> tuple[np.ndarray, np.ndarray, dict]:
    header: dict[str, str] = {}
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, value = body.split("=", 1)
                header[key.strip()] = value.strip()
            continue
        rows.append([float(v) for v in line.split()])
    data = np.array(rows, dtype=float)
    if data.ndim != 2 or data.shape[1] != 3 or len(data) < 3:
        raise ValueError(f"{path}: expected at least three 'theta x y' rows")
    return data[:, 0], data[:, 1] + 1j * data[:, 2], header


def write_metrics(path, metrics: dict):
    text = "".join(f"{k}={_fmt(v)}\n" for k, v in metrics.items())
    if path is None or str(path) == "-":
        print(text, end="")
    else:
        Path(path).write_text(text)


def read_metrics(path) -> dict[str, str]:
    out = {}
    for line in Path(path).read_text().splitlines():
        if "=" in line:
            k, v = line.split("=", 1)
            out[k.strip()] = v.strip()
    return out
