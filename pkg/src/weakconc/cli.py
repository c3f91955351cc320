"""Command-line front end.

Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 physical-regime
error (unphysical predicted output, vanishing or near-orthogonal post-selection).
"""
from __future__ import annotations

import argparse
import copy
import sys

from . import concentration, hilbert, records, scenario, sweep, verification, weak_values
from .errors import PhysicalRegimeError, ValidationError

EXIT_OK, EXIT_VERIFY, EXIT_INVALID, EXIT_PHYSICAL = 0, 1, 2, 3


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _error(msg: str):
    print(f"weakconc: {msg}", file=sys.stderr)


def _load(args) -> scenario.Scenario:
    sc = scenario.load_file(args.file)
    doc = copy.deepcopy(sc.doc)
    num = doc.setdefault("numerics", {})
    if args.n_max is not None:
        num["n_max"] = args.n_max
    if args.analytic_weak_value:
        num["weak_value"] = "analytic"
    return scenario.Scenario(doc, sc.axes)


def cmd_simulate(args) -> int:
    sc = _load(args)
    config = scenario.build_config(sc)
    result = concentration.run(config, analytic_weak_value=sc.weak_value_source == "analytic")
    window_prob = None
    if sc.window is not None:
        window_prob = concentration.windowed_success_probability(config, sc.window)
    rec = records.result_record(result, sc.weak_value_source, window_prob)
    machine = records.to_csv([rec]) if args.format == "csv" else records.to_json(rec)
    if args.out:
        _emit(machine, args.out)
        print(records.to_table(rec))
    elif args.format:
        _emit(machine, None)
    else:
        print(records.to_table(rec))
    if result.unphysical_output:
        _error("predicted output is unphysical: " + "; ".join(result.notes))
        return EXIT_PHYSICAL
    return EXIT_OK


def cmd_sweep(args) -> int:
    sc = _load(args)
    if not sc.axes:
        raise scenario.ScenarioError("sweep needs a [sweep] section with one or two [[sweep.axis]] entries")
    sweep.validate(sc)
    rows = sweep.run_sweep(sc, jobs=args.jobs)
    text = records.to_json(rows) if args.format == "json" else records.to_csv(rows)
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    return EXIT_OK if verification.run_all(invariants=not args.criteria_only) else EXIT_VERIFY


def _post_spec(args):
    if args.scheme == "coherent":
        if args.beta is None:
            raise ValidationError("coherent post-selection needs --beta")
        return hilbert.Coherent(args.beta, args.phi)
    if args.scheme == "squeezed":
        if args.r is None:
            raise ValidationError("squeezed post-selection needs --r")
        return hilbert.SqueezedVacuum(args.r, args.phi)
    if args.x is None:
        raise ValidationError("quadrature post-selection needs --x")
    return hilbert.QuadratureEigenstate(args.x, args.phi, args.convention)


def cmd_weakvalue(args) -> int:
    post = _post_spec(args)
    pre = hilbert.Coherent(args.alpha)
    if args.n_max is None:
        specs = [pre] + ([post] if not isinstance(post, hilbert.QuadratureEigenstate) else [])
        cut = hilbert.Cutoff(max(hilbert.fit_cutoff(lambda c, s=s: hilbert.ancilla_ket(s, c), 1e-16).n_max
                                 for s in specs), 1e-16)
    else:
        cut = hilbert.Cutoff(args.n_max)
    w = weak_values.weak_value_numeric(hilbert.ancilla_ket(pre, cut), hilbert.post_selector(post, cut))
    closed = weak_values.n_w_analytic(post, args.alpha)
    rec = {"scheme": args.scheme, "alpha": args.alpha, "n_max": cut.n_max,
           "n_w.re": w.value.real, "n_w.im": w.value.imag,
           "n_w_analytic.re": closed.real, "n_w_analytic.im": closed.imag,
           "overlap_mag": w.overlap_mag, "success": w.value.imag > 0}
    if args.format == "json":
        _emit(records.to_json(rec), args.out)
    elif args.format == "csv":
        _emit(records.to_csv([rec]), args.out)
    else:
        _emit(records.to_table(rec), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="weakconc", description=(
        "Weak-measurement entanglement concentration of the two-mode squeezed vacuum."))
    sub = p.add_subparsers(dest="command", required=True)

    def scenario_cmd(name, fn, help_, formats, default_format):
        s = sub.add_parser(name, help=help_)
        s.add_argument("file", help="TOML scenario file")
        s.add_argument("--out", help="write machine-readable output here")
        s.add_argument("--format", choices=formats, default=default_format)
        s.add_argument("--n-max", type=int, help="override the Schmidt-mode cutoff")
        s.add_argument("--analytic-weak-value", action="store_true",
                       help="use the closed-form weak value for the predicted TMSV")
        s.set_defaults(func=fn)
        return s

    scenario_cmd("simulate", cmd_simulate, "run one scenario", ["json", "csv"], None)
    sw = scenario_cmd("sweep", cmd_sweep, "sweep one or two scenario parameters", ["csv", "json"], "csv")
    sw.add_argument("--jobs", type=int, default=1, help="worker processes")

    v = sub.add_parser("verify", help="run the acceptance and invariant suite")
    v.add_argument("--criteria-only", action="store_true")
    v.set_defaults(func=cmd_verify)

    w = sub.add_parser("weakvalue", help="photon-number weak value for a built-in scheme")
    w.add_argument("scheme", choices=["coherent", "quadrature", "squeezed"])
    w.add_argument("--alpha", type=float, required=True, help="pre-selected coherent amplitude (> 0)")
    w.add_argument("--beta", type=float, help="coherent post-selection magnitude")
    w.add_argument("--r", type=float, help="squeezing of the post-selected vacuum")
    w.add_argument("--x", type=float, help="quadrature outcome")
    w.add_argument("--phi", type=float, default=0.0, help="post-selection phase [rad]")
    w.add_argument("--convention", choices=hilbert.CONVENTIONS, default=hilbert.CONJUGATE)
    w.add_argument("--n-max", type=int)
    w.add_argument("--out")
    w.add_argument("--format", choices=["json", "csv"])
    w.set_defaults(func=cmd_weakvalue)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as e:
        _error(f"invalid input: {e}")
        return EXIT_INVALID
    except PhysicalRegimeError as e:
        _error(f"{type(e).__name__}: {e}")
        return EXIT_PHYSICAL


if __name__ == "__main__":
    sys.exit(main())
