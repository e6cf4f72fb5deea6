"""Classical Ising spin glasses, their diagonal quantum lift, and 3-SAT encoding.

Energy convention::

    E(s) = -sum_{j<k} J_jk s_j s_k - moment * sum_j h_j s_j + offset

with every ``s_j`` in {-1, +1}.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from . import config
from .errors import CapacityError, RejectedInputError
from .hilbert import DiagonalOperator, index_to_spins


class IsingModel:
    """Sparse Ising model.

    Args:
        num_spins: Number of spins N.
        couplings: Iterable of ``(j, k, J_jk)`` with ``0 <= j < k < N``.
            Each pair may appear at most once.
        fields: Length-N local fields ``h_j``. Defaults to zeros.
        moment: Magnetic moment multiplying every field term.
        offset: Constant energy shift.
    """

    __slots__ = ("num_spins", "couplings", "fields", "moment", "offset", "_rows", "_cols", "_vals")

    def __init__(self, num_spins, couplings=(), fields=None, moment=1.0, offset=0.0):
        num_spins = int(num_spins)
        if num_spins < 1:
            raise RejectedInputError("num_spins must be positive")
        seen = set()
        clean = []
        for item in couplings:
            if len(item) != 3:
                raise RejectedInputError(f"coupling {item!r} is not a (j, k, J) triple")
            j, k, value = int(item[0]), int(item[1]), float(item[2])
            if not 0 <= j < k < num_spins:
                raise RejectedInputError(f"coupling index pair ({j}, {k}) must satisfy 0 <= j < k < {num_spins}")
            if (j, k) in seen:
                raise RejectedInputError(f"duplicate coupling ({j}, {k})")
            if not np.isfinite(value):
                raise RejectedInputError(f"coupling ({j}, {k}) is not finite")
            seen.add((j, k))
            clean.append((j, k, value))
        if fields is None:
            fields = np.zeros(num_spins)
        h = np.array(fields, dtype=np.float64)
        if h.shape != (num_spins,):
            raise RejectedInputError(f"fields must have length {num_spins}, got shape {h.shape}")
        if not (np.all(np.isfinite(h)) and np.isfinite(moment) and np.isfinite(offset)):
            raise RejectedInputError("fields, moment and offset must be finite")
        h.setflags(write=False)

        self.num_spins = num_spins
        self.couplings = tuple(clean)
        self.fields = h
        self.moment = float(moment)
        self.offset = float(offset)
        self._rows = np.array([c[0] for c in clean], dtype=np.intp)
        self._cols = np.array([c[1] for c in clean], dtype=np.intp)
        self._vals = np.array([c[2] for c in clean], dtype=np.float64)

    @property
    def effective_fields(self) -> np.ndarray:
        return self.moment * self.fields

    def coupling_matrix(self) -> np.ndarray:
        """Upper-triangular dense J (zero diagonal)."""
        mat = np.zeros((self.num_spins, self.num_spins))
        mat[self._rows, self._cols] = self._vals
        return mat

    def coupling_arrays(self):
        return self._rows, self._cols, self._vals

    def __eq__(self, other):
        if not isinstance(other, IsingModel):
            return NotImplemented
        return (
            self.num_spins == other.num_spins
            and sorted(self.couplings) == sorted(other.couplings)
            and np.array_equal(self.fields, other.fields)
            and self.moment == other.moment
            and self.offset == other.offset
        )

    __hash__ = None

    def __repr__(self):
        return f"IsingModel(num_spins={self.num_spins}, couplings={len(self.couplings)})"


class SpinConfiguration:
    """Vector of +/-1 spins."""

    __slots__ = ("spins",)

    def __init__(self, spins):
        arr = np.asarray(spins)
        if arr.ndim != 1 or arr.size < 1:
            raise RejectedInputError("spins must be a non-empty 1-d sequence")
        if not np.all((arr == 1) | (arr == -1)):
            raise RejectedInputError("every spin must be exactly -1 or +1")
        arr = arr.astype(np.int8)
        arr.setflags(write=False)
        self.spins = arr

    @classmethod
    def from_index(cls, index: int, num_spins: int) -> SpinConfiguration:
        return cls(index_to_spins(index, num_spins))

    def to_index(self) -> int:
        index = 0
        for s in self.spins:
            index = (index << 1) | (1 if s == -1 else 0)
        return index

    def __len__(self):
        return self.spins.size

    def __iter__(self):
        return iter(int(s) for s in self.spins)

    def __eq__(self, other):
        if not isinstance(other, SpinConfiguration):
            return NotImplemented
        return np.array_equal(self.spins, other.spins)

    def __hash__(self):
        return hash(self.spins.tobytes())

    def __repr__(self):
        return "SpinConfiguration(" + "".join("+" if s > 0 else "-" for s in self.spins) + ")"


class CnfFormula:
    """3-CNF formula over variables ``1..num_vars``.

    Literals are signed 1-based variable indices. Clauses with fewer than
    three literals are padded by repeating their last literal; clauses with
    more than three are rejected.
    """

    __slots__ = ("num_vars", "clauses")

    def __init__(self, num_vars, clauses):
        num_vars = int(num_vars)
        if num_vars < 1:
            raise RejectedInputError("num_vars must be positive")
        padded = []
        for i, clause in enumerate(clauses):
            lits = [int(x) for x in clause]
            if not lits:
                raise RejectedInputError(f"clause {i} is empty")
            if len(lits) > 3:
                raise RejectedInputError(f"clause {i} has {len(lits)} literals; at most 3 allowed")
            for lit in lits:
                if lit == 0 or abs(lit) > num_vars:
                    raise RejectedInputError(f"clause {i}: literal {lit} outside [1, {num_vars}]")
            while len(lits) < 3:
                lits.append(lits[-1])
            padded.append(tuple(lits))
        self.num_vars = num_vars
        self.clauses = tuple(padded)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def is_satisfied_by(self, assignment) -> bool:
        """``assignment[v - 1]`` is the truth value of variable ``v``."""
        return self.count_unsatisfied(assignment) == 0

    def count_unsatisfied(self, assignment) -> int:
        count = 0
        for clause in self.clauses:
            if not any(assignment[abs(l) - 1] == (l > 0) for l in clause):
                count += 1
        return count

    def __eq__(self, other):
        if not isinstance(other, CnfFormula):
            return NotImplemented
        return self.num_vars == other.num_vars and self.clauses == other.clauses

    __hash__ = None

    def __repr__(self):
        return f"CnfFormula(num_vars={self.num_vars}, clauses={self.num_clauses})"


@dataclass(frozen=True)
class ReductionCertificate:
    """Bookkeeping that ties an encoded model back to its formula.

    ``variable_map[v]`` is the spin carrying CNF variable ``v`` (1-based).
    """

    variable_map: dict = field(hash=False)
    ancilla_spins: tuple
    penalty_unit: float
    num_spins: int

    def __post_init__(self):
        spins = list(self.variable_map.values())
        if len(set(spins)) != len(spins):
            raise RejectedInputError("variable_map must be injective")
        if set(spins) & set(self.ancilla_spins):
            raise RejectedInputError("ancilla spins overlap variable spins")


def classical_energy(model: IsingModel, config: SpinConfiguration) -> float:
    """Evaluate the Ising energy of one configuration."""
    spins = config.spins if isinstance(config, SpinConfiguration) else SpinConfiguration(config).spins
    if spins.size != model.num_spins:
        raise RejectedInputError(f"configuration has {spins.size} spins, model has {model.num_spins}")
    s = spins.astype(np.float64)
    rows, cols, vals = model.coupling_arrays()
    pair = float(np.sum(vals * s[rows] * s[cols])) if vals.size else 0.0
    local = float(np.sum(model.effective_fields * s))
    return -pair - local + model.offset


def _spin_column(indices: np.ndarray, spin: int, num_spins: int) -> np.ndarray:
    bits = (indices >> (num_spins - 1 - spin)) & 1
    return (1 - 2 * bits).astype(np.float64)


def build_quantum_diagonal(model: IsingModel, max_dim: int | None = None) -> DiagonalOperator:
    """Replace every spin by Pauli-Z and return the resulting diagonal Hamiltonian."""
    limit = config.max_hilbert_dim() if max_dim is None else max_dim
    n = model.num_spins
    if n > config.max_spins_for_dim(limit):
        raise CapacityError(f"{n} spins need dimension 2^{n}, maximum is {limit}")
    indices = np.arange(2**n, dtype=np.int64)
    sigma = [_spin_column(indices, j, n) for j in range(n)]
    energies = np.full(indices.size, model.offset, dtype=np.float64)
    for j, k, value in model.couplings:
        energies -= value * (sigma[j] * sigma[k])
    for j, hj in enumerate(model.effective_fields):
        if hj != 0.0:
            energies -= hj * sigma[j]
    return DiagonalOperator(energies)


class _Qubo:
    """Pseudo-Boolean quadratic accumulator over binary variables (b**2 == b)."""

    def __init__(self):
        self.const = 0.0
        self.linear = defaultdict(float)
        self.quad = defaultdict(float)

    def add_affine_product(self, coeff, terms):
        """Add ``coeff * prod(a + c * b_var for (a, c, var) in terms)`` for up to two factors."""
        if len(terms) == 1:
            (a, c, v), = terms
            self.const += coeff * a
            self.linear[v] += coeff * c
            return
        (a1, c1, v1), (a2, c2, v2) = terms
        self.const += coeff * a1 * a2
        self.linear[v2] += coeff * a1 * c2
        self.linear[v1] += coeff * c1 * a2
        if v1 == v2:
            self.linear[v1] += coeff * c1 * c2
        else:
            key = (min(v1, v2), max(v1, v2))
            self.quad[key] += coeff * c1 * c2

    def to_ising(self, num_spins) -> IsingModel:
        # b = (1 - s) / 2, so b = 1 <-> s = -1 <-> basis bit 1.
        offset = self.const
        lin_s = np.zeros(num_spins)
        pair_s = defaultdict(float)
        for v, q in self.linear.items():
            offset += q / 2
            lin_s[v] -= q / 2
        for (i, j), q in self.quad.items():
            offset += q / 4
            lin_s[i] -= q / 4
            lin_s[j] -= q / 4
            pair_s[(i, j)] += q / 4
        couplings = [(i, j, -q) for (i, j), q in sorted(pair_s.items()) if q != 0.0]
        fields = -lin_s + 0.0
        return IsingModel(num_spins, couplings, fields, moment=1.0, offset=offset)


def _falsity(literal):
    """Affine form (a, c, var) of the binary 'literal is false' in terms of b_var.

    Variable v is true <-> spin +1 <-> b = 0.
    """
    var = abs(literal) - 1
    if literal > 0:
        return (0.0, 1.0, var)
    return (1.0, -1.0, var)


def encode_3sat(cnf: CnfFormula, penalty_unit: float = 1.0):
    """Encode a 3-CNF formula as an Ising model with one ancilla per clause.

    Each clause contributes the cubic penalty ``y1*y2*y3`` (``y`` = literal is
    false), quadratized by substituting an ancilla ``w`` for ``y1*y2``::

        w*y3 + y1*y2 - 2*y1*w - 2*y2*w + 3*w

    The bracketed Rosenberg term is zero iff ``w == y1*y2`` and at least 1
    otherwise, so minimizing over ``w`` leaves exactly ``y1*y2*y3``. The
    ground energy therefore counts the minimum number of violated clauses
    (in units of ``penalty_unit``) and is 0 iff the formula is satisfiable.

    Returns:
        ``(model, certificate)``.
    """
    if penalty_unit <= 0:
        raise RejectedInputError("penalty_unit must be positive")
    nv = cnf.num_vars
    num_spins = nv + cnf.num_clauses
    qubo = _Qubo()
    ancillas = []
    for c, clause in enumerate(cnf.clauses):
        y1, y2, y3 = (_falsity(lit) for lit in clause)
        w = (0.0, 1.0, nv + c)
        ancillas.append(nv + c)
        qubo.add_affine_product(penalty_unit, [w, y3])
        qubo.add_affine_product(penalty_unit, [y1, y2])
        qubo.add_affine_product(-2.0 * penalty_unit, [y1, w])
        qubo.add_affine_product(-2.0 * penalty_unit, [y2, w])
        qubo.add_affine_product(3.0 * penalty_unit, [w])
    model = qubo.to_ising(num_spins)
    cert = ReductionCertificate(
        variable_map={v: v - 1 for v in range(1, nv + 1)},
        ancilla_spins=tuple(ancillas),
        penalty_unit=float(penalty_unit),
        num_spins=num_spins,
    )
    return model, cert


def decode_assignment(cert: ReductionCertificate, config: SpinConfiguration) -> list[bool]:
    """Read the CNF assignment off the variable spins (+1 -> True)."""
    spins = config.spins if isinstance(config, SpinConfiguration) else SpinConfiguration(config).spins
    if spins.size != cert.num_spins:
        raise RejectedInputError(f"configuration has {spins.size} spins, encoding has {cert.num_spins}")
    return [bool(spins[cert.variable_map[v]] == 1) for v in sorted(cert.variable_map)]


def random_ising_model(num_spins, rng, low=-3, high=3, density=1.0) -> IsingModel:
    """Random model with integer couplings and fields drawn from ``[low, high]``."""
    rng = np.random.default_rng(rng)
    couplings = []
    for j in range(num_spins):
        for k in range(j + 1, num_spins):
            if density >= 1.0 or rng.random() < density:
                couplings.append((j, k, float(rng.integers(low, high + 1))))
    fields = rng.integers(low, high + 1, size=num_spins).astype(np.float64)
    return IsingModel(num_spins, couplings, fields)


def random_3sat(num_vars, num_clauses, rng) -> CnfFormula:
    """Uniform random 3-CNF: three distinct variables per clause, random signs.

    Falls back to sampling with replacement when ``num_vars < 3``.
    """
    rng = np.random.default_rng(rng)
    clauses = []
    for _ in range(num_clauses):
        replace = num_vars < 3
        vars_ = rng.choice(np.arange(1, num_vars + 1), size=3, replace=replace)
        signs = rng.choice([-1, 1], size=3)
        clauses.append(tuple(int(v * s) for v, s in zip(vars_, signs)))
    return CnfFormula(num_vars, clauses)
