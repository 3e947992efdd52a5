"""Reproducible operator sources.

Every operator is produced from a :class:`GeneratorSpec`; the spec alone
(kind, qubit count, 64-bit seed, extras) determines the output bit for bit, so
a witness stored in a report can be replayed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .algebra import Observable, PauliString, bell_projector, levels, op_norm, pauli_matrix
from .classical import BooleanFn, random_table

KINDS = (
    "random_hermitian",
    "random_quantum_boolean",
    "low_degree",
    "pauli_character",
    "bell",
    "classical_embed",
    "constant",
)


def derive_seed(master: int, *index: int) -> int:
    """Mix a master seed with a trial index into an independent 64-bit seed.

    Uses numpy's ``SeedSequence`` hashing with the index as spawn key, so
    streams for different ``(master, index)`` pairs are statistically
    independent and do not depend on scheduling order.
    """
    ss = np.random.SeedSequence(entropy=int(master), spawn_key=tuple(int(i) for i in index))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int
    seed: int = 0
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}; known: {', '.join(KINDS)}")
        if self.n < 0:
            raise ValueError("qubit count must be nonnegative")

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "n": self.n, "seed": self.seed, "extras": dict(self.extras)}

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorSpec":
        return cls(d["kind"], int(d["n"]), int(d.get("seed", 0)), dict(d.get("extras") or {}))

    def describe(self) -> str:
        extra = ",".join(f"{k}={v}" for k, v in sorted(self.extras.items()) if k != "table")
        return f"{self.kind}(n={self.n},seed={self.seed}{',' + extra if extra else ''})"


def _rescale(m: np.ndarray, n: int) -> Observable:
    A = Observable(n, matrix=m, hermitian=True)
    norm = op_norm(A)
    if norm == 0.0:
        return A
    return Observable(n, matrix=m / norm, hermitian=True)


def _random_hermitian(rng, n, extras):
    d = 2**n
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return _rescale((g + g.conj().T) / 2.0, n)


def _random_quantum_boolean(rng, n, extras):
    if n < 1:
        raise ValueError("random_quantum_boolean needs n >= 1")
    d = 2**n
    rank = int(extras.get("rank", rng.integers(1, d)))
    if not 0 <= rank <= d:
        raise ValueError(f"rank must lie in [0, {d}]")
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, _ = np.linalg.qr(g)
    cols = q[:, :rank]
    proj = cols @ cols.conj().T
    a = 2.0 * proj - np.eye(d)
    return Observable(n, matrix=(a + a.conj().T) / 2.0, hermitian=True)


def _low_degree(rng, n, extras):
    degree = int(extras.get("degree", rng.integers(1, max(n, 1) + 1)))
    coeffs = np.where(levels(n) <= degree, rng.standard_normal((4,) * n), 0.0)
    A = Observable(n, coeffs=coeffs, hermitian=True)
    return _rescale(np.array(A.matrix), n)


def _pauli_character(rng, n, extras):
    chars = extras.get("chars")
    if chars is None:
        entries = tuple(int(x) for x in rng.integers(0, 4, size=n))
        if n and not any(entries):
            entries = (int(rng.integers(1, 4)),) + entries[1:]
        s = PauliString(entries)
    elif isinstance(chars, str):
        s = PauliString.from_label(chars)
    else:
        s = PauliString(tuple(chars))
    if s.n != n:
        raise ValueError(f"character {s} has length {s.n}, expected {n}")
    return pauli_matrix(s)


def _bell(rng, n, extras):
    return bell_projector(n)


def _classical(rng, n, extras):
    table = extras.get("table")
    if table is None:
        f = random_table(rng, n, boolean=bool(extras.get("boolean", False)))
    else:
        f = BooleanFn.from_table(table)
        if f.n != n:
            raise ValueError("truth table does not match n")
    return classical_embed(f)


def _constant(rng, n, extras):
    return Observable.scalar(n, float(extras.get("value", 1.0)))


_BUILDERS = {
    "random_hermitian": _random_hermitian,
    "random_quantum_boolean": _random_quantum_boolean,
    "low_degree": _low_degree,
    "pauli_character": _pauli_character,
    "bell": _bell,
    "classical_embed": _classical,
    "constant": _constant,
}


def generate(spec: GeneratorSpec) -> Observable:
    rng = np.random.default_rng(spec.seed)
    return _BUILDERS[spec.kind](rng, spec.n, spec.extras)


def classical_embed(f: BooleanFn) -> Observable:
    """Diagonal operator ``diag(f)``; ``χ_S`` maps to the Pauli string with ``Z`` on ``S``."""
    m = np.diag(np.asarray(f.table, dtype=complex))
    return Observable(f.n, matrix=m, hermitian=True)
