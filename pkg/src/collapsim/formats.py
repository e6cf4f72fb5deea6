"""Text and binary formats: DIMACS CNF, Ising model JSON, state vectors, experiment configs."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import ParseError, RejectedInputError
from .hilbert import StateVector
from .ising import CnfFormula, IsingModel

STATE_DTYPE = np.dtype("<c16")


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF text.

    Clauses may span lines and are terminated by ``0``. Clauses with fewer
    than three literals are padded by repetition; longer clauses are an
    error. The clause count must match the ``p cnf`` header.
    """
    num_vars = num_clauses = None
    clauses = []
    current = []
    current_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if num_vars is not None:
                raise ParseError("duplicate problem line", line=lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"malformed header {line!r}", line=lineno)
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"malformed header {line!r}", line=lineno) from None
            if num_vars < 1 or num_clauses < 0:
                raise ParseError("header counts out of range", line=lineno)
            continue
        if num_vars is None:
            raise ParseError("clause before 'p cnf' header", line=lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"invalid literal {tok!r}", line=lineno) from None
            if current_line is None:
                current_line = lineno
            if lit == 0:
                if not current:
                    raise ParseError("empty clause", line=lineno)
                clauses.append((current_line, current))
                current, current_line = [], None
                continue
            if abs(lit) > num_vars:
                raise ParseError(f"literal {lit} out of range 1..{num_vars}", line=lineno)
            current.append(lit)
            if len(current) > 3:
                raise ParseError("clause has more than 3 literals", line=lineno)
    if num_vars is None:
        raise ParseError("missing 'p cnf' header")
    if current:
        raise ParseError("last clause is not terminated by 0", line=current_line)
    if len(clauses) != num_clauses:
        raise ParseError(f"header declares {num_clauses} clauses, found {len(clauses)}")
    return CnfFormula(num_vars, [c for _, c in clauses])


def format_dimacs(cnf: CnfFormula, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"c {c}" for c in comment.splitlines())
    lines.append(f"p cnf {cnf.num_vars} {cnf.num_clauses}")
    lines.extend(" ".join(str(l) for l in clause) + " 0" for clause in cnf.clauses)
    return "\n".join(lines) + "\n"


def ising_to_dict(model: IsingModel) -> dict:
    return {
        "num_spins": model.num_spins,
        "couplings": [[j, k, v] for j, k, v in model.couplings],
        "fields": [float(x) for x in model.fields],
        "moment": model.moment,
        "offset": model.offset,
    }


def serialize_ising(model: IsingModel) -> str:
    """JSON document; floats use shortest round-trip repr so re-parsing is bit-exact."""
    return json.dumps(ising_to_dict(model), indent=2) + "\n"


def _number(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"expected a number, got {value!r}", field=name)
    return float(value)


def ising_from_dict(doc) -> IsingModel:
    if not isinstance(doc, dict):
        raise ParseError("model document must be a JSON object")
    if "num_spins" not in doc:
        raise ParseError("missing required field", field="num_spins")
    n = doc["num_spins"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ParseError(f"must be a positive integer, got {n!r}", field="num_spins")
    raw_couplings = doc.get("couplings", [])
    if not isinstance(raw_couplings, list):
        raise ParseError("must be an array of [j, k, J]", field="couplings")
    couplings = []
    for item in raw_couplings:
        if not (isinstance(item, list) and len(item) == 3):
            raise ParseError(f"entry {item!r} is not [j, k, J]", field="couplings")
        j, k, v = item
        if not (isinstance(j, int) and isinstance(k, int)):
            raise ParseError(f"indices in {item!r} must be integers", field="couplings")
        if not 0 <= j < k < n:
            raise ParseError(f"index pair ({j}, {k}) out of range for {n} spins", field="couplings")
        couplings.append((j, k, _number(v, "couplings")))
    fields = doc.get("fields", [0.0] * n)
    if not isinstance(fields, list) or len(fields) != n:
        raise ParseError(f"must be an array of length {n}", field="fields")
    fields = [_number(x, "fields") for x in fields]
    moment = _number(doc.get("moment", 1.0), "moment")
    offset = _number(doc.get("offset", 0.0), "offset")
    try:
        return IsingModel(n, couplings, fields, moment=moment, offset=offset)
    except RejectedInputError as exc:
        raise ParseError(str(exc), field="couplings") from exc


def parse_ising(text: str) -> IsingModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    return ising_from_dict(doc)


def write_state(path, psi: StateVector) -> None:
    """Raw little-endian complex128: real/imaginary interleaved, in basis-index order."""
    Path(path).write_bytes(psi.amplitudes.astype(STATE_DTYPE).tobytes())


def read_state(path) -> StateVector:
    data = Path(path).read_bytes()
    if len(data) == 0 or len(data) % STATE_DTYPE.itemsize:
        raise ParseError(f"state file size {len(data)} is not a positive multiple of 16 bytes")
    return StateVector(np.frombuffer(data, dtype=STATE_DTYPE).astype(np.complex128))


@dataclass
class ExperimentConfig:
    """Input document of a collapse experiment.

    ``coefficients`` defaults to the equal superposition; complex entries
    may be written as ``[re, im]`` pairs.
    """

    n: int
    estimates: list
    tau: float
    hbar: float = 1.0
    samples: int = 10000
    seed: int = 0
    formula: str = "product-sinc"
    coefficients: list | None = None

    def coefficient_array(self) -> np.ndarray:
        if self.coefficients is None:
            return np.full(self.n, 1.0 / math.sqrt(self.n), dtype=np.complex128)
        return np.array(
            [complex(c[0], c[1]) if isinstance(c, list) else complex(c) for c in self.coefficients]
        )


_CONFIG_FIELDS = {"n", "estimates", "tau", "hbar", "samples", "seed", "formula", "coefficients"}


def parse_experiment_config(text: str) -> ExperimentConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("config must be a JSON object")
    unknown = set(doc) - _CONFIG_FIELDS
    if unknown:
        raise ParseError("unknown field", field=sorted(unknown)[0])
    for name in ("estimates", "tau"):
        if name not in doc:
            raise ParseError("missing required field", field=name)
    est = doc["estimates"]
    if not isinstance(est, list) or not est:
        raise ParseError("must be a non-empty array", field="estimates")
    n = doc.get("n", len(est))
    if not isinstance(n, int) or n != len(est):
        raise ParseError(f"n={n!r} does not match {len(est)} estimates", field="n")
    coeffs = doc.get("coefficients")
    if coeffs is not None and (not isinstance(coeffs, list) or len(coeffs) != n):
        raise ParseError(f"must be an array of length {n}", field="coefficients")
    formula = doc.get("formula", "product-sinc")
    if formula not in ("paper-sinc", "product-sinc"):
        raise ParseError(f"unknown formula {formula!r}", field="formula")
    return ExperimentConfig(
        n=n,
        estimates=[_number(x, "estimates") for x in est],
        tau=_number(doc["tau"], "tau"),
        hbar=_number(doc.get("hbar", 1.0), "hbar"),
        samples=int(doc.get("samples", 10000)),
        seed=int(doc.get("seed", 0)),
        formula=formula,
        coefficients=coeffs,
    )


def serialize_experiment_config(cfg: ExperimentConfig) -> str:
    doc = {k: v for k, v in asdict(cfg).items() if v is not None}
    return json.dumps(doc, indent=2) + "\n"


SUBCOMMANDS = ("encode", "solve", "spectrum", "verify", "bench", "collapse", "sweep", "feasibility")


@dataclass
class RunManifest:
    """One CLI invocation: subcommand, input paths, output path, seed, format and options."""

    subcommand: str
    inputs: dict = field(default_factory=dict)
    output: str | None = None
    seed: int = 0
    format: str = "json"
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise RejectedInputError(f"unknown subcommand {self.subcommand!r}")
        if self.format not in ("json", "csv"):
            raise RejectedInputError(f"unknown format {self.format!r}")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> RunManifest:
        doc = json.loads(text)
        return cls(**doc)
