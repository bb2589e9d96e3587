"""Command-line interface: ``gptshape forward|recover|evaluate|demo``.

Exit status is 0 on success, 1 for usage errors (bad flags, unreadable or
malformed files) and 2 when a numerical method refuses or fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import conformal, io, metrics, recover
from .errors import GptShapeError
from .potential import Contrast
from .tensors import add_noise, gpt_forward, symmetry_residuals

METHODS = ("disk", "ellipse", "conformal")

# figure id -> shape, sigma values, orders, SNR values
FIGURES = {
    "kite": ("kite", ("5", "50", "inf"), (6,), (np.inf,)),
    "kite-orders": ("kite", ("50",), (2, 4), (np.inf,)),
    "asymmetric": ("asymmetric", ("1/5", "1/50", "0"), (6,), (np.inf,)),
    "asymmetric-noise": ("asymmetric", ("1/50",), (6,), (np.inf, 5.0, 2.0)),
    "straight": ("straight", ("1/5", "1/50", "0"), (6,), (np.inf,)),
    "crescent": ("crescent", ("5", "50", "inf"), (6,), (np.inf,)),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_shape(name: str, gamma=None, e0=None, e1=None, radius=None, center=None, coeffs=None):
    params = {}
    for key, value in (
        ("gamma", gamma),
        ("e0", e0),
        ("e1", e1),
        ("radius", radius),
        ("center", center),
        ("coeffs", coeffs),
    ):
        if value is not None:
            params[key] = value
    if name == "map" and "e0" in params:
        params["a0"] = params.pop("e0")
    return conformal.catalog(name, **params)


def truth_curve(shape: conformal.ShapeSpec, n: int):
    theta = 2 * np.pi * np.arange(n) / n
    if shape.kind == "map":
        return recover.map_curve(shape.exterior_map, n)
    return theta, shape.sample(theta)


def forward(shape, sigma: float, order: int, n_quad: int = 1024):
    if order < 2:
        raise ValueError("order must be at least 2")
    if n_quad < 8 * order:
        raise ValueError(f"--quad-nodes must be at least 8 * order = {8 * order}")
    contrast = Contrast.from_sigma(sigma)
    frame = conformal.boundary_frame(shape, n_quad)
    return gpt_forward(frame, contrast, order), contrast


def reconstruct(gpt, contrast, method: str, order: int, n_curve: int = 512, formula="closed"):
    """Curve samples and a parameter dictionary for one recovery method."""
    if method == "conformal":
        fm = recover.recover_conformal(gpt, contrast, order)
        theta, z = recover.map_curve(fm, n_curve)
        params = {"gamma": fm.gamma, "a0": fm.a0}
        params.update({f"a{k}": a for k, a in enumerate(fm.coeffs, start=1)})
        return theta, z, params
    if method == "disk":
        res = recover.recover_disk(gpt, contrast, order, formula=formula)
    elif method == "ellipse":
        res = recover.recover_ellipse_perturbation(gpt, contrast, order, formula=formula)
    else:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    theta, z = res.curve(n_curve)
    params = {"gamma_e": res.base.gamma_e, "e0": res.base.e0, "e1": res.base.e1}
    params.update({f"fhat{k}": v for k, v in enumerate(res.fhat)})
    return theta, z, params


def _complex(text: str) -> complex:
    return complex(text.replace(" ", ""))


def _coeffs(text: str):
    return [_complex(t) for t in text.split(",") if t.strip()]


def _slug(text: str) -> str:
    return str(text).replace("/", "_").replace(".", "p")


def _snr_label(snr: float) -> str:
    return "inf" if np.isinf(snr) else f"{snr:g}"


def run_demo(
    figure: str,
    out_dir,
    n_quad: int = 1024,
    n_curve: int = 512,
    trials: int = 1,
    seed: int = 0,
    formula: str = "closed",
) -> dict:
    """Run every (setting x method) cell of a figure and write its files.

    Returns the manifest (also written as ``manifest.json``).
    """
    if figure not in FIGURES:
        raise ValueError(f"unknown figure {figure!r}; expected one of {tuple(FIGURES)}")
    shape_name, sigmas, orders, snrs = FIGURES[figure]
    shape = conformal.catalog(shape_name)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    theta_t, z_t = truth_curve(shape, n_curve)
    io.write_curve(out / "truth.txt", theta_t, z_t, {"shape": shape_name})
    cells, overlays = [], []
    for sig_text in sigmas:
        sigma = io.parse_sigma(sig_text)
        base, contrast = forward(shape, sigma, max(orders), n_quad)
        for order in orders:
            clean = base.truncated(order)
            for snr in snrs:
                seeds = [None] if np.isinf(snr) else [seed + t for t in range(trials)]
                for s in seeds:
                    gpt = clean if s is None else add_noise(clean, snr, s)
                    tag = f"sigma{_slug(sig_text)}_ord{order}_snr{_snr_label(snr)}"
                    if s is not None:
                        tag += f"_seed{s}"
                    gpt_file = f"gpt_{tag}.json"
                    io.write_gpt(
                        out / gpt_file,
                        gpt,
                        contrast,
                        {"shape": shape_name, "quad_nodes": n_quad, "snr": _snr_label(snr), "seed": s},
                    )
                    for method in METHODS:
                        cell = {
                            "id": f"{tag}_{method}",
                            "sigma": sig_text,
                            "order": order,
                            "snr": _snr_label(snr),
                            "seed": s,
                            "method": method,
                            "gpt": gpt_file,
                            "truth": "truth.txt",
                        }
                        try:
                            theta, z, params = reconstruct(gpt, contrast, method, order, n_curve, formula)
                        except GptShapeError as exc:
                            cell.update(status=f"error: {exc}", recon=None, metrics=None)
                            cells.append(cell)
                            continue
                        recon_file = f"recon_{tag}_{method}.txt"
                        io.write_curve(out / recon_file, theta, z, {"method": method, **params})
                        try:
                            m = metrics.compare(z_t, z)
                            cell["status"] = "ok"
                        except GptShapeError as exc:
                            m = {"symmetric_difference": None, "hausdorff": None}
                            cell["status"] = f"metric error: {exc}"
                        cell.update(recon=recon_file, metrics=m)
                        cells.append(cell)
                        overlays.append(["truth.txt", recon_file])
    manifest = {
        "figure": figure,
        "shape": shape_name,
        "quad_nodes": n_quad,
        "curve_samples": n_curve,
        "formula": formula,
        "cells": cells,
        "overlays": overlays,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")
    return manifest


def _add_shape_args(p):
    p.add_argument("--shape", required=True, choices=conformal.CATALOG_NAMES)
    p.add_argument("--gamma", type=float)
    p.add_argument("--e0", type=_complex, help="centre (ellipse) or a0 (map)")
    p.add_argument("--e1", type=_complex)
    p.add_argument("--radius", type=float)
    p.add_argument("--center", type=_complex)
    p.add_argument("--coeffs", type=_coeffs, help="comma-separated a1,a2,... for --shape map")


def _parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gptshape", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("forward", help="compute GPTs of a shape")
    _add_shape_args(p)
    p.add_argument("--sigma", type=io.parse_sigma, required=True)
    p.add_argument("--order", type=int, default=6)
    p.add_argument("--quad-nodes", type=int, default=1024)
    p.add_argument("--snr", type=float, default=np.inf)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise-mode", choices=("relative", "absolute"), default="relative")
    p.add_argument("--out", default="-")

    p = sub.add_parser("recover", help="reconstruct a boundary from a GPT file")
    p.add_argument("--gpt", required=True)
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--order", type=int)
    p.add_argument("--formula", choices=recover.FORMULAS, default="closed")
    p.add_argument("--curve-samples", type=int, default=512)
    p.add_argument("--out", required=True)

    p = sub.add_parser("evaluate", help="compare two curve files")
    p.add_argument("--truth", required=True)
    p.add_argument("--recon", required=True)
    p.add_argument("--out", default="-")

    p = sub.add_parser("demo", help="reproduce one experiment configuration")
    p.add_argument("figure", choices=tuple(FIGURES))
    p.add_argument("--out", required=True)
    p.add_argument("--quad-nodes", type=int, default=1024)
    p.add_argument("--curve-samples", type=int, default=512)
    p.add_argument("--trials", type=int, default=1, help="noise seeds per SNR")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--formula", choices=recover.FORMULAS, default="closed")
    return parser


def _cmd_forward(a):
    shape = build_shape(a.shape, a.gamma, a.e0, a.e1, a.radius, a.center, a.coeffs)
    gpt, contrast = forward(shape, a.sigma, a.order, a.quad_nodes)
    gpt = add_noise(gpt, a.snr, a.seed, a.noise_mode)
    r1, r2 = symmetry_residuals(gpt)
    meta = {
        "shape": a.shape,
        "shape_params": {k: str(v) for k, v in shape_params(a).items()},
        "quad_nodes": a.quad_nodes,
        "snr": _snr_label(a.snr),
        "seed": a.seed,
        "noise_mode": a.noise_mode,
        "symmetry_residuals": [r1, r2],
    }
    doc = io.gpt_to_dict(gpt, contrast, meta)
    text = json.dumps(doc, indent=1) + "\n"
    if a.out == "-":
        sys.stdout.write(text)
    else:
        Path(a.out).write_text(text)


def shape_params(a) -> dict:
    keys = ("gamma", "e0", "e1", "radius", "center", "coeffs")
    return {k: getattr(a, k) for k in keys if getattr(a, k) is not None}


def _cmd_recover(a):
    gpt, contrast, _ = io.read_gpt(a.gpt)
    order = gpt.order if a.order is None else a.order
    if order > gpt.order:
        raise ValueError(f"GPT file has order {gpt.order} < requested {order}")
    theta, z, params = reconstruct(gpt, contrast, a.method, order, a.curve_samples, a.formula)
    io.write_curve(a.out, theta, z, {"method": a.method, "order": order, **params})


def _cmd_evaluate(a):
    _, zt, _ = io.read_curve(a.truth)
    _, zr, _ = io.read_curve(a.recon)
    io.write_metrics(a.out, metrics.compare(zt, zr))


def _cmd_demo(a):
    manifest = run_demo(a.figure, a.out, a.quad_nodes, a.curve_samples, a.trials, a.seed, a.formula)
    for cell in manifest["cells"]:
        m = cell["metrics"] or {}
        sd = m.get("symmetric_difference")
        print(f"{cell['id']}\t{cell['status']}\t" + ("-" if sd is None else f"{sd:.4g}"))


_COMMANDS = {
    "forward": _cmd_forward,
    "recover": _cmd_recover,
    "evaluate": _cmd_evaluate,
    "demo": _cmd_demo,
}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        _COMMANDS[args.command](args)
    except GptShapeError as exc:
        print(f"gptshape: numerical error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError) as exc:
        print(f"gptshape: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
