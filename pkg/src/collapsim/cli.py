"""Command-line front end.

Exit codes:

    0  success
    1  unexpected internal error
    2  usage error (bad command line)
    3  parse error in an input file
    4  capacity exceeded
    5  verification failed
    6  input rejected by an operation's precondition
    7  input/output error (missing or unreadable file)
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import collapse, formats, scaling, solver
from .errors import CapacityError, ParseError, RejectedInputError
from .ising import build_quantum_diagonal, decode_assignment, encode_3sat

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_CAPACITY = 4
EXIT_VERIFY = 5
EXIT_REJECTED = 6
EXIT_IO = 7


class _Table:
    def __init__(self, header, rows, trailer=None):
        self.header = header
        self.rows = rows
        self.trailer = trailer


def _read(path, stage):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _StageError(EXIT_IO, stage, f"cannot read {path}: {exc.strerror}") from None


class _StageError(Exception):
    def __init__(self, code, stage, message):
        super().__init__(message)
        self.code = code
        self.stage = stage


def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, np.floating):
        return _clean(float(value))
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def _load_model(manifest):
    inputs = manifest.inputs
    if inputs.get("cnf"):
        cnf = formats.parse_dimacs(_read(inputs["cnf"], "read-cnf"))
        model, cert = encode_3sat(cnf)
        return model, cnf, cert
    return formats.parse_ising(_read(inputs["model"], "read-model")), None, None


def _cmd_encode(m):
    cnf = formats.parse_dimacs(_read(m.inputs["cnf"], "read-cnf"))
    model, cert = encode_3sat(cnf)
    out = m.options.get("out")
    if out:
        Path(out).write_text(formats.serialize_ising(model))
    return EXIT_OK, {
        "num_vars": cnf.num_vars,
        "num_clauses": cnf.num_clauses,
        "num_spins": model.num_spins,
        "penalty_unit": cert.penalty_unit,
        "variable_map": {str(k): v for k, v in cert.variable_map.items()},
        "ancilla_spins": list(cert.ancilla_spins),
        "model": out,
    }


def _cmd_solve(m):
    model, cnf, cert = _load_model(m)
    r = solver.Restraint(float(m.options.get("threshold", 0.0)), m.options.get("comparison", "le"))
    result = solver.brute_force_ground_state(model, workers=int(m.options.get("workers", 1)))
    outcome = solver.solve_pi0(model, r, result)
    report = {
        "answer": outcome.answer,
        "ground_energy": result.ground_energy,
        "threshold": r.threshold,
        "comparison": r.comparison,
        "verified": outcome.verified,
        "witness": None if outcome.witness is None else list(outcome.witness),
        "degeneracy": result.degeneracy,
        "configurations_enumerated": result.enumerated_count,
    }
    if cnf is not None:
        assignment = decode_assignment(cert, result.witnesses[0])
        report["assignment"] = assignment
        report["assignment_satisfies"] = cnf.is_satisfied_by(assignment)
    return EXIT_OK, report


def _cmd_spectrum(m):
    model, _, _ = _load_model(m)
    diag = build_quantum_diagonal(model)
    spec = solver.exact_spectrum(diag, with_vectors=False)
    return EXIT_OK, {
        "dim": diag.dim,
        "ground_energy": float(spec.eigenvalues[0]),
        "eigenvalues": [float(x) for x in spec.eigenvalues],
        "max_residual": spec.max_residual,
    }


def _cmd_verify(m):
    model, _, _ = _load_model(m)
    try:
        psi = formats.read_state(m.inputs["state"])
    except OSError as exc:
        raise _StageError(EXIT_IO, "read-state", f"cannot read {m.inputs['state']}: {exc.strerror}") from None
    diag = build_quantum_diagonal(model)
    energy = float(m.options["energy"])
    tol = float(m.options.get("tol", 1e-8))
    ok = solver.verify_eigenpair(diag, psi, energy, tol)
    return (EXIT_OK if ok else EXIT_VERIFY), {"verified": ok, "energy": energy, "tol": tol, "dim": diag.dim}


def _cmd_bench(m):
    n_min, n_max = int(m.options["n_min"]), int(m.options["n_max"])
    if n_min > n_max or n_min < 1:
        raise RejectedInputError("need 1 <= n-min <= n-max")
    records, slope = scaling.scaling_benchmark(
        range(n_min, n_max + 1), m.seed, int(m.options.get("repetitions", 3)), int(m.options.get("workers", 1))
    )
    rows = [[r.num_spins, r.wall_time, r.configurations_enumerated, r.seed] for r in records]
    return EXIT_OK, _Table(["N", "wall_time_seconds", "configurations", "seed"], rows, ["slope", slope])


def _experiment(m):
    cfg = formats.parse_experiment_config(_read(m.inputs["config"], "read-config"))
    samples = int(m.options.get("samples") or cfg.samples)
    seed = m.seed if m.options.get("seed_given") else cfg.seed
    p = collapse.TestParticle(cfg.coefficient_array())
    spec = collapse.EnvironmentSpec(tuple(cfg.estimates), cfg.tau, cfg.hbar, seed)
    return cfg, p, spec, samples


def _cmd_collapse(m):
    cfg, p, spec, samples = _experiment(m)
    stats = collapse.monte_carlo_transition(p, spec, samples, workers=int(m.options.get("workers", 1)))
    equal = p.is_equal_amplitude
    report = {
        "n": p.n,
        "tau": spec.tau,
        "seed": spec.sampling_seed,
        "mean": stats.mean,
        "variance": stats.variance,
        "standard_error": stats.standard_error,
        "samples": stats.samples,
        "formula": cfg.formula,
        "analytic": collapse.analytic_transition(p, spec, cfg.formula) if equal else None,
        "analytic_paper_sinc": collapse.analytic_transition(p, spec, "paper-sinc") if equal else None,
        "analytic_product_sinc": collapse.analytic_transition(p, spec, "product-sinc") if equal else None,
        "born_limit": collapse.born_limit(p) if equal else None,
        "born_limit_label": "large-environment limit of the self-overlap, read as P(psi -> psi_j) = 1/n",
    }
    if not equal:
        report["decohered_mean_extension"] = collapse.decohered_mean(p)
    return EXIT_OK, report


def _cmd_sweep(m):
    cfg, p, spec, samples = _experiment(m)
    taus = [float(t) for t in m.options["tau_grid"]]
    rows = collapse.transition_sweep(p, spec, taus, samples, workers=int(m.options.get("workers", 1)))
    header = ["tau", "mc_mean", "mc_stderr", "analytic_paper", "analytic_product", "born_limit"]
    return EXIT_OK, _Table(header, [[r[h] for h in header] for r in rows])


def _cmd_feasibility(m):
    if m.options.get("budget_seconds") is not None:
        budget = float(m.options["budget_seconds"])
    else:
        budget = float(m.options.get("budget_years", 1.0)) * scaling.SECONDS_PER_YEAR
    rep = scaling.feasibility(float(m.options["log2_ops"]), budget)
    return EXIT_OK, {
        "log10_seconds_per_op": rep.log10_seconds_per_op,
        "planck_log10": rep.planck_log10,
        "verdict": rep.verdict,
    }


_HANDLERS = {
    "encode": _cmd_encode,
    "solve": _cmd_solve,
    "spectrum": _cmd_spectrum,
    "verify": _cmd_verify,
    "bench": _cmd_bench,
    "collapse": _cmd_collapse,
    "sweep": _cmd_sweep,
    "feasibility": _cmd_feasibility,
}


def _fmt(value):
    if value is None:
        return "NA"
    if isinstance(value, float):
        return "NA" if not math.isfinite(value) else repr(value)
    return str(value)


def render(payload, fmt: str, timestamp: str | None = None) -> str:
    """Render a report dict or table as JSON or CSV text."""
    if isinstance(payload, _Table):
        if fmt == "json":
            doc = {"columns": payload.header, "rows": payload.rows}
            if payload.trailer:
                doc[payload.trailer[0]] = payload.trailer[1]
            payload = doc
        else:
            buf = io.StringIO()
            if timestamp:
                buf.write(f"# generated {timestamp}\n")
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(payload.header)
            for row in payload.rows:
                w.writerow([_fmt(v) for v in row])
            if payload.trailer:
                w.writerow([_fmt(v) for v in payload.trailer])
            return buf.getvalue()
    if fmt == "csv":
        buf = io.StringIO()
        if timestamp:
            buf.write(f"# generated {timestamp}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in payload.items():
            w.writerow([k, json.dumps(_clean(v)) if isinstance(v, (list, dict)) else _fmt(v)])
        return buf.getvalue()
    doc = {"generated": timestamp} if timestamp else {}
    doc.update(payload)
    return json.dumps(_clean(doc), indent=2) + "\n"


def run(manifest: formats.RunManifest, *, timestamp: bool = True):
    """Execute one manifest.

    Returns:
        ``(exit_code, report_text, diagnostic)``; ``report_text`` is None and
        ``diagnostic`` a one-line message naming the failing stage on error.
    """
    stage = manifest.subcommand
    try:
        code, payload = _HANDLERS[manifest.subcommand](manifest)
    except _StageError as exc:
        return exc.code, None, f"{exc.stage}: {exc}"
    except ParseError as exc:
        return EXIT_PARSE, None, f"{stage}: parse error: {exc}"
    except CapacityError as exc:
        return EXIT_CAPACITY, None, f"{stage}: capacity error: {exc}"
    except RejectedInputError as exc:
        return EXIT_REJECTED, None, f"{stage}: rejected input: {exc}"
    except OSError as exc:
        return EXIT_IO, None, f"{stage}: io error: {exc}"
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds") if timestamp else None
    fmt = manifest.format
    text = render(payload, fmt, stamp)
    diag = None if code == EXIT_OK else f"{stage}: verification failed"
    return code, text, diag


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="collapsim", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="report path (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--no-timestamp", action="store_true", help="omit the generated-at header line")
    common.add_argument("--workers", type=int, default=1)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("encode", parents=[common], help="encode a DIMACS 3-CNF file as an Ising model")
    p.add_argument("--cnf", required=True)
    p.add_argument("--out", required=True, help="model JSON output path")

    for name, helptext in (("solve", "decide E0 <= threshold by exhaustive search"), ("spectrum", "diagonal spectrum of the lifted model")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--model")
        src.add_argument("--cnf")
        if name == "solve":
            p.add_argument("--threshold", type=float, default=0.0)
            p.add_argument("--comparison", choices=("le", "lt", "eq"), default="le")

    p = sub.add_parser("verify", parents=[common], help="check an eigenpair of the lifted model")
    p.add_argument("--model", required=True)
    p.add_argument("--state", required=True, help="raw little-endian complex128 state file")
    p.add_argument("--energy", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-8)

    p = sub.add_parser("bench", parents=[common], help="exhaustive-search scaling benchmark")
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repetitions", type=int, default=3)

    p = sub.add_parser("collapse", parents=[common], help="Monte Carlo transition probability")
    p.add_argument("--config", required=True)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("sweep", parents=[common], help="transition probability over a tau grid")
    p.add_argument("--config", required=True)
    p.add_argument("--tau-grid", type=float, nargs="+", required=True)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("feasibility", parents=[common], help="seconds per operation for 2^X operations")
    p.add_argument("--log2-ops", type=float, required=True)
    budget = p.add_mutually_exclusive_group()
    budget.add_argument("--budget-years", type=float, default=1.0)
    budget.add_argument("--budget-seconds", type=float)
    return parser


_DEFAULT_FORMAT = {"bench": "csv", "sweep": "csv"}


def manifest_from_args(args) -> formats.RunManifest:
    inputs = {k: getattr(args, k) for k in ("cnf", "model", "state", "config") if getattr(args, k, None)}
    skip = {"subcommand", "output", "format", "no_timestamp", "seed", "cnf", "model", "state", "config"}
    options = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    seed = getattr(args, "seed", None)
    if seed is not None:
        options["seed_given"] = True
    return formats.RunManifest(
        subcommand=args.subcommand,
        inputs=inputs,
        output=args.output,
        seed=0 if seed is None else seed,
        format=args.format or _DEFAULT_FORMAT.get(args.subcommand, "json"),
        options=options,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    manifest = manifest_from_args(args)
    try:
        code, text, diag = run(manifest, timestamp=not args.no_timestamp)
    except Exception as exc:  # noqa: BLE001
        print(f"collapsim: {manifest.subcommand}: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL
    if text is not None:
        if manifest.output:
            Path(manifest.output).write_text(text)
        else:
            sys.stdout.write(text)
    if diag:
        print(f"collapsim: {diag}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
