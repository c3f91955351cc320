"""Flat result records and their JSON / CSV / table renderings.

Complex numbers become ``<name>.re`` / ``<name>.im`` pairs, absent quantities
are ``None`` (JSON ``null``, CSV ``NA``).  Floats are written with ``repr`` so
every value round-trips exactly.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import fields

import numpy as np

from .concentration import ConcentrationResult
from .hilbert import CustomFock, QuadratureEigenstate

ABSENT = None


def _complex(rec: dict, name: str, z):
    rec[f"{name}.re"] = ABSENT if z is None else float(z.real)
    rec[f"{name}.im"] = ABSENT if z is None else float(z.imag)


def _spec_echo(rec: dict, role: str, spec):
    rec[f"{role}.scheme"] = {"Coherent": "coherent", "SqueezedVacuum": "squeezed",
                             "QuadratureEigenstate": "quadrature", "CustomFock": "custom"}[type(spec).__name__]
    if isinstance(spec, CustomFock):
        rec[f"{role}.dim"] = int(spec.vector.cutoff.dim)
        return
    for f in fields(spec):
        v = getattr(spec, f.name)
        rec[f"{role}.{f.name}"] = v if isinstance(v, str) else float(v)


def result_record(result: ConcentrationResult, weak_value_source: str = "numeric",
                  window_prob=None) -> dict:
    cfg = result.config
    rec = {"lambda": float(cfg.lam), "kappa_T": float(cfg.kappa_T)}
    _spec_echo(rec, "pre", cfg.pre)
    _spec_echo(rec, "post", cfg.post)
    rec.update({
        "n_max": cfg.cutoff.n_max,
        "ancilla_n_max": cfg.ancilla_cutoff.n_max,
        "tail_tol": float(cfg.cutoff.tail_tol),
        "ortho_threshold": float(cfg.ortho_threshold),
        "weak_value_source": weak_value_source,
        "success_prob": float(result.success_prob),
        "is_density": bool(result.is_density),
        "window_prob": ABSENT if window_prob is None else float(window_prob),
    })
    wv = result.weak_value
    _complex(rec, "n_w", wv.value if wv else None)
    rec["overlap_mag"] = float(wv.overlap_mag) if wv else ABSENT
    _complex(rec, "n_w_analytic", result.n_w_analytic)
    _complex(rec, "o_w", result.o_w)
    _complex(rec, "lambda_prime", result.lambda_prime)
    rec["abs_lambda_prime"] = ABSENT if result.lambda_prime is None else float(abs(result.lambda_prime))
    rec["success"] = result.success
    v = result.verdict
    rec.update({
        "majorized": bool(v.majorized),
        "more_entangled": bool(v.more_entangled),
        "entropy_in": v.entropy_in,
        "entropy_out": v.entropy_out,
        "entropy_gain": v.entropy_gain,
        "purity_in": v.purity_in,
        "purity_out": v.purity_out,
        "mean_photons_in": v.mean_photons_in,
        "mean_photons_out": v.mean_photons_out,
        "fidelity": result.fidelity,
        "unphysical_output": bool(result.unphysical_output),
    })
    res = result.residuals
    rec["max_residual"] = res.max_abs if res else ABSENT
    rec["residual_argmax"] = res.argmax if res else ABSENT
    rec["max_relative_residual"] = float(np.max(np.abs(res.relative))) if res else ABSENT
    rec["tmsv_tail_mass"] = float(cfg.lam ** (2 * cfg.cutoff.dim))
    rec["ancilla_tail_mass"] = float(cfg.pre_ket.tail_mass)
    post = cfg.post_selector
    rec["post_tail_mass"] = ABSENT if isinstance(cfg.post, QuadratureEigenstate) else float(post.vector.tail_mass)
    rec["output_edge_prob"] = float(result.exact_output.probs[-1])
    rec["notes"] = " | ".join(result.notes) if result.notes else ABSENT
    return rec


def to_json(rec) -> str:
    return json.dumps(rec, indent=2, allow_nan=False)


def from_json(text: str):
    return json.loads(text)


def format_value(v) -> str:
    if v is None:
        return "NA"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def parse_value(s: str):
    if s == "NA":
        return None
    if s in ("true", "false"):
        return s == "true"
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def to_csv(rows) -> str:
    """Header plus one line per row; all rows must share keys."""
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    keys = list(rows[0])
    w.writerow(keys)
    for r in rows:
        w.writerow([format_value(r[k]) for k in keys])
    return buf.getvalue()


def from_csv(text: str):
    reader = csv.reader(io.StringIO(text))
    keys = next(reader)
    return [dict(zip(keys, map(parse_value, line))) for line in reader]


def to_table(rec: dict) -> str:
    width = max(map(len, rec))
    out = []
    for k, v in rec.items():
        if isinstance(v, float) and math.isfinite(v):
            s = f"{v:.10g}"
        else:
            s = format_value(v)
        out.append(f"{k:<{width}}  {s}")
    return "\n".join(out)

