"""Scenario files: TOML documents describing one protocol run or a sweep.

    [protocol]
    lambda = 0.5
    kappa_T = 0.05

    [ancilla.pre]
    scheme = "coherent"
    alpha = 1.0

    [ancilla.post]
    scheme = "coherent"          # coherent | squeezed | quadrature | custom
    alpha = 1.0
    phi = 4.71238898038469       # radians

    [numerics]                   # all optional
    n_max = 40                   # omitted: smallest cutoff passing the tail guard
    ancilla_n_max = 40
    tail_tol = 1e-10
    ortho_threshold = 1e-8
    weak_value = "numeric"       # or "analytic"
    window = 0.1                 # quadrature acceptance width; omitted: ideal functional

    [[sweep.axis]]               # one or two axes, endpoints inclusive
    name = "ancilla.post.phi"
    start = 0.0
    stop = 6.283185307179586
    steps = 629
"""
from __future__ import annotations

import copy
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import hilbert
from .concentration import ProtocolConfig
from .errors import CutoffTooSmall, ValidationError, WeakConcError
from .hilbert import Coherent, CustomFock, Cutoff, QuadratureEigenstate, SqueezedVacuum
from .weak_values import ORTHO_THRESHOLD, weak_value_numeric


class ScenarioError(ValidationError):
    pass


SCHEME_FIELDS = {
    "coherent": {"alpha": True, "phi": False},
    "squeezed": {"r": True, "phi": False},
    "quadrature": {"x": True, "phi": False, "convention": False},
    "custom": {"amps_re": True, "amps_im": False},
}
NUMERICS = {"n_max", "ancilla_n_max", "tail_tol", "ortho_threshold", "weak_value", "window"}


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    steps: int

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)

    @property
    def step(self) -> float:
        return (self.stop - self.start) / (self.steps - 1)


@dataclass(frozen=True)
class Scenario:
    doc: dict
    axes: tuple = ()

    @property
    def weak_value_source(self) -> str:
        return self.doc.get("numerics", {}).get("weak_value", "numeric")

    @property
    def window(self) -> Optional[float]:
        return self.doc.get("numerics", {}).get("window")

    def with_values(self, assignments: dict) -> "Scenario":
        doc = copy.deepcopy(self.doc)
        for path, value in assignments.items():
            set_path(doc, path, value)
        return Scenario(doc, self.axes)


def _reject_unknown(section: dict, allowed, where: str):
    extra = sorted(set(section) - set(allowed))
    if extra:
        raise ScenarioError(f"unknown key(s) in [{where}]: {', '.join(extra)}")


def _number(section: dict, key: str, where: str, required=True, default=None):
    if key not in section:
        if required:
            raise ScenarioError(f"[{where}] missing required key '{key}'")
        return default
    v = section[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ScenarioError(f"[{where}] '{key}' must be a finite number, got {v!r}")
    return float(v)


def set_path(doc: dict, path: str, value):
    keys = path.split(".")
    node = doc
    for k in keys[:-1]:
        if not isinstance(node.get(k), dict):
            raise ScenarioError(f"sweep parameter '{path}' does not name a scenario field")
        node = node[k]
    node[keys[-1]] = value


def _check_structure(doc: dict):
    _reject_unknown(doc, {"protocol", "ancilla", "numerics", "sweep"}, "top level")
    for sec in ("protocol", "ancilla"):
        if not isinstance(doc.get(sec), dict):
            raise ScenarioError(f"missing section [{sec}]")
    _reject_unknown(doc["protocol"], {"lambda", "kappa_T"}, "protocol")
    _reject_unknown(doc["ancilla"], {"pre", "post"}, "ancilla")
    for role in ("pre", "post"):
        sec = doc["ancilla"].get(role)
        if not isinstance(sec, dict):
            raise ScenarioError(f"missing section [ancilla.{role}]")
        scheme = sec.get("scheme")
        if scheme not in SCHEME_FIELDS:
            raise ScenarioError(f"[ancilla.{role}] scheme must be one of {sorted(SCHEME_FIELDS)}, got {scheme!r}")
        _reject_unknown(sec, set(SCHEME_FIELDS[scheme]) | {"scheme"}, f"ancilla.{role}")
    _reject_unknown(doc.get("numerics", {}), NUMERICS, "numerics")


def _spec(sec: dict, where: str, cutoff: Cutoff):
    scheme = sec["scheme"]
    if scheme == "coherent":
        return Coherent(_number(sec, "alpha", where), _number(sec, "phi", where, False, 0.0))
    if scheme == "squeezed":
        return SqueezedVacuum(_number(sec, "r", where), _number(sec, "phi", where, False, 0.0))
    if scheme == "quadrature":
        return QuadratureEigenstate(_number(sec, "x", where), _number(sec, "phi", where, False, 0.0),
                                    sec.get("convention", hilbert.CONJUGATE))
    if "amps_re" not in sec:
        raise ScenarioError(f"[{where}] missing required key 'amps_re'")
    try:
        re = np.asarray(sec["amps_re"], dtype=float)
        im = np.asarray(sec.get("amps_im", np.zeros_like(re)), dtype=float)
    except (TypeError, ValueError) as e:
        raise ScenarioError(f"[{where}] amps_re/amps_im must be lists of numbers") from e
    if not (np.all(np.isfinite(re)) and np.all(np.isfinite(im))):
        raise ScenarioError(f"[{where}] custom amplitudes must be finite")
    if re.shape != im.shape or re.ndim != 1 or re.size == 0:
        raise ScenarioError(f"[{where}] amps_re/amps_im must be equal-length non-empty lists")
    amps = re + 1j * im
    norm = np.linalg.norm(amps)
    if norm == 0:
        raise ScenarioError(f"[{where}] custom ancilla amplitudes are all zero")
    # custom states are normalised on load
    return CustomFock(hilbert.FockVector(amps / norm, Cutoff(amps.size - 1, cutoff.tail_tol)))


def _auto_ancilla_n_max(specs, tail_tol: float) -> int:
    n = 0
    for spec in specs:
        if isinstance(spec, (Coherent, SqueezedVacuum)):
            n = max(n, hilbert.fit_cutoff(lambda c, s=spec: hilbert.ancilla_ket(s, c), tail_tol).n_max)
        elif isinstance(spec, CustomFock):
            n = max(n, spec.vector.cutoff.n_max)
    return max(n, 1)


def build_config(scenario: Scenario) -> ProtocolConfig:
    """Validate a scenario document and turn it into a ``ProtocolConfig``."""
    doc = scenario.doc
    _check_structure(doc)
    proto, num = doc["protocol"], doc.get("numerics", {})
    lam = _number(proto, "lambda", "protocol")
    if not 0.0 <= lam < 1.0:
        raise ScenarioError(f"[protocol] lambda={lam!r}: the two-mode squeezed vacuum requires 0 <= lambda < 1")
    kappa = _number(proto, "kappa_T", "protocol")
    tail_tol = _number(num, "tail_tol", "numerics", False, 1e-10)
    ortho = _number(num, "ortho_threshold", "numerics", False, ORTHO_THRESHOLD)
    if num.get("weak_value", "numeric") not in ("numeric", "analytic"):
        raise ScenarioError("[numerics] weak_value must be 'numeric' or 'analytic'")
    window = _number(num, "window", "numerics", False, None)
    if window is not None and not window > 0:
        raise ScenarioError(f"[numerics] window must be > 0, got {window!r}")
    for key in ("n_max", "ancilla_n_max"):
        if key in num and (isinstance(num[key], bool) or not isinstance(num[key], int) or num[key] < 0):
            raise ScenarioError(f"[numerics] {key} must be a non-negative integer, got {num[key]!r}")
    probe = Cutoff(0, tail_tol)
    try:
        pre = _spec(doc["ancilla"]["pre"], "ancilla.pre", probe)
        post = _spec(doc["ancilla"]["post"], "ancilla.post", probe)
        if isinstance(pre, QuadratureEigenstate):
            raise ScenarioError("[ancilla.pre] the pre-selected ancilla must be normalisable (not quadrature)")
        if window is not None and not isinstance(post, QuadratureEigenstate):
            raise ScenarioError("[numerics] window only applies to quadrature post-selection")

        if "ancilla_n_max" in num:
            anc = Cutoff(num["ancilla_n_max"], tail_tol)
        else:
            anc = Cutoff(_auto_ancilla_n_max((pre, post), tail_tol), tail_tol)
        if "n_max" in num:
            cut = Cutoff(num["n_max"], tail_tol)
        else:
            cut = _auto_schmidt_cutoff(lam, kappa, pre, post, anc, ortho)
        return ProtocolConfig(lam, kappa, pre, post, cut, anc, ortho)
    except CutoffTooSmall as e:
        raise ScenarioError(f"{e} (increase n_max/ancilla_n_max or loosen tail_tol)") from e
    except ScenarioError:
        raise
    except ValidationError as e:
        raise ScenarioError(str(e)) from e


def _auto_schmidt_cutoff(lam, kappa, pre, post, anc, ortho) -> Cutoff:
    """Cutoff large enough for the input TMSV and, when physical, the predicted output."""
    lam_eff = lam
    try:
        wv = weak_value_numeric(hilbert.ancilla_ket(pre, anc), hilbert.post_selector(post, anc),
                                ortho_threshold=ortho)
        mag = lam * math.exp(kappa * wv.value.imag)
        if mag < 1.0:
            lam_eff = max(lam, mag)
    except WeakConcError:
        pass
    return hilbert.tmsv_cutoff(lam_eff, anc.tail_tol)


def parse_axes(doc: dict) -> tuple:
    sweep = doc.get("sweep")
    if sweep is None:
        return ()
    if not isinstance(sweep, dict):
        raise ScenarioError("[sweep] must be a table")
    _reject_unknown(sweep, {"axis"}, "sweep")
    axes = sweep.get("axis")
    if not isinstance(axes, list) or not 1 <= len(axes) <= 2:
        raise ScenarioError("[sweep] needs one or two [[sweep.axis]] entries")
    out = []
    for i, ax in enumerate(axes):
        where = f"sweep.axis[{i}]"
        _reject_unknown(ax, {"name", "start", "stop", "steps"}, where)
        name = ax.get("name")
        if not isinstance(name, str) or not (name.startswith("protocol.") or name.startswith("ancilla.")):
            raise ScenarioError(f"[{where}] name must be a protocol.* or ancilla.* field, got {name!r}")
        steps = ax.get("steps")
        if isinstance(steps, bool) or not isinstance(steps, int) or steps < 2:
            raise ScenarioError(f"[{where}] steps must be an integer >= 2, got {steps!r}")
        out.append(Axis(name, _number(ax, "start", where), _number(ax, "stop", where), steps))
    if len(out) == 2 and out[0].name == out[1].name:
        raise ScenarioError("[sweep] axes must name different parameters")
    return tuple(out)


def load(text: str) -> Scenario:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ScenarioError(f"malformed scenario file: {e}") from e
    _check_structure(doc)
    return Scenario(doc, parse_axes(doc))


def load_file(path) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            return load(fh.read())
    except OSError as e:
        raise ScenarioError(f"cannot read scenario file: {e}") from e
