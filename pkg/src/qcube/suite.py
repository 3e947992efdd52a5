"""Suite execution: seeded trials over the law catalog, aggregation, and
extremizer search."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .algebra import MAX_QUBITS, Observable, PauliString, bell_projector, fourier_synthesize, op_norm, pauli_matrix
from .classical import CLASSICAL_LAWS, classical_check, random_table
from .generators import GeneratorSpec, derive_seed, generate
from .laws import LAWS, Grid, check
from .records import TOL_PSD, TOL_SCALAR, CheckRecord

SCHEMA_VERSION = 1
DEFAULT_KINDS = (
    "random_hermitian",
    "random_quantum_boolean",
    "low_degree",
    "classical_embed",
    "pauli_character",
    "bell",
)
QUANTUM_DEFAULT = tuple(f"Q{i}" for i in range(1, 21))
CLASSICAL_DEFAULT = CLASSICAL_LAWS
ALL_LAWS = QUANTUM_DEFAULT + CLASSICAL_DEFAULT
A1_EXTRA_Q = (2.0, 4.0)

PRESETS = {
    "default": {"laws": ALL_LAWS, "n": (1, 2, 3, 4), "trials": 100},
    "quantum": {"laws": QUANTUM_DEFAULT, "n": (1, 2, 3, 4), "trials": 100},
    "appendix": {"laws": CLASSICAL_DEFAULT, "n": (1, 2, 3, 4), "trials": 200},
    "smoke": {"laws": ALL_LAWS, "n": (1, 2), "trials": 3},
}


class ConfigError(ValueError):
    """Invalid suite configuration (maps to exit status 2)."""


@dataclass
class SuiteConfig:
    laws: tuple = ALL_LAWS
    n_values: tuple = (1, 2, 3, 4)
    trials: int = 100
    seed: int = 42
    grid: Grid = field(default_factory=Grid)
    tol_scalar: float = TOL_SCALAR
    tol_psd: float = TOL_PSD
    generators: tuple = ()
    workers: int = 1
    suite: str = "custom"

    def validate(self) -> "SuiteConfig":
        unknown = [law for law in self.laws if law not in LAWS and law not in CLASSICAL_LAWS]
        if unknown:
            raise ConfigError(f"unknown law ids: {', '.join(unknown)}")
        if any(not 1 <= int(n) <= MAX_QUBITS for n in self.n_values):
            raise ConfigError(f"n values must lie in [1, {MAX_QUBITS}], got {list(self.n_values)}")
        if self.trials < 0:
            raise ConfigError("trials must be nonnegative")
        if not (self.tol_scalar > 0 and self.tol_psd > 0):
            raise ConfigError("tolerances must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        bad = [k for k in self.generators if k not in DEFAULT_KINDS + ("constant",)]
        if bad:
            raise ConfigError(f"unknown generator kinds: {', '.join(bad)}")
        return self

    def to_dict(self, scheduling: bool = True) -> dict:
        """Serializable form; ``scheduling=False`` drops fields that cannot change results."""
        out = {
            "suite": self.suite,
            "laws": list(self.laws),
            "n": [int(n) for n in self.n_values],
            "trials": int(self.trials),
            "seed": int(self.seed),
            "grid": self.grid.to_dict(),
            "tol_scalar": self.tol_scalar,
            "tol_psd": self.tol_psd,
            "generators": list(self.generators),
        }
        if scheduling:
            out["workers"] = int(self.workers)
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "SuiteConfig":
        try:
            grid = Grid(**d["grid"]) if "grid" in d else Grid()
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid grid: {exc}") from exc
        return cls(
            laws=tuple(d.get("laws", ALL_LAWS)),
            n_values=tuple(int(n) for n in d.get("n", (1, 2, 3, 4))),
            trials=int(d.get("trials", 100)),
            seed=int(d.get("seed", 42)),
            grid=grid,
            tol_scalar=float(d.get("tol_scalar", TOL_SCALAR)),
            tol_psd=float(d.get("tol_psd", TOL_PSD)),
            generators=tuple(d.get("generators", ())),
            workers=int(d.get("workers", 1)),
            suite=str(d.get("suite", "custom")),
        )

    @classmethod
    def preset(cls, name: str, **overrides) -> "SuiteConfig":
        if name not in PRESETS:
            raise ConfigError(f"unknown suite {name!r}; known: {', '.join(PRESETS)}")
        p = PRESETS[name]
        base = {"laws": p["laws"], "n_values": p["n"], "trials": p["trials"], "suite": name}
        base.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**base)


# -- trials -------------------------------------------------------------------


@dataclass(frozen=True)
class Trial:
    law_id: str
    n: int
    index: int
    spec: GeneratorSpec


@dataclass
class TrialResult:
    trial: Trial
    records: list


def _law_index(law_id: str) -> int:
    return ALL_LAWS.index(law_id)


def plan_trials(config: SuiteConfig) -> list[Trial]:
    kinds = tuple(config.generators) or DEFAULT_KINDS
    plan = []
    for law in config.laws:
        li = _law_index(law)
        for n in config.n_values:
            for i in range(config.trials):
                seed = derive_seed(config.seed, li, n, i)
                if law in CLASSICAL_LAWS:
                    spec = GeneratorSpec("classical_embed", n, seed, {"boolean": bool(i % 2)})
                else:
                    kind = kinds[i % len(kinds)]
                    if kind == "bell" and n < 2:
                        kind = "random_hermitian"
                    spec = GeneratorSpec(kind, n, seed)
                plan.append(Trial(law, n, i, spec))
    return plan


def _quantum_params(config: SuiteConfig) -> dict:
    return {"grid": config.grid, "tol_scalar": config.tol_scalar, "tol_psd": config.tol_psd}


def run_trial(trial: Trial, config: SuiteConfig) -> TrialResult:
    if trial.law_id in CLASSICAL_LAWS:
        f = random_table(np.random.default_rng(trial.spec.seed), trial.n, bool(trial.spec.extras.get("boolean")))
        records = []
        qs = config.grid.q + (A1_EXTRA_Q if trial.law_id == "A1" else ())
        for q in qs:
            if trial.law_id == "A6":
                for p in config.grid.p:
                    records += classical_check("A6", f, {"q": q, "p": p}, config.tol_scalar)
            elif trial.law_id == "A1":
                records += classical_check("A1", f, {"q": q, "t_grid": config.grid.t}, config.tol_scalar)
            else:
                records += classical_check(trial.law_id, f, {"q": q}, config.tol_scalar)
    else:
        records = check(trial.law_id, generate(trial.spec), _quantum_params(config))
    return TrialResult(trial, records)


def _run_chunk(args) -> list[TrialResult]:
    trials, config = args
    return [run_trial(t, config) for t in trials]


def execute(config: SuiteConfig, plan: Sequence[Trial] | None = None) -> list[TrialResult]:
    plan = list(plan if plan is not None else plan_trials(config))
    if config.workers <= 1 or len(plan) < 2:
        results = [run_trial(t, config) for t in plan]
    else:
        size = max(1, len(plan) // (config.workers * 8))
        chunks = [(plan[i:i + size], config) for i in range(0, len(plan), size)]
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = [r for chunk in pool.map(_run_chunk, chunks) for r in chunk]
    results.sort(key=lambda r: (_law_index(r.trial.law_id), r.trial.n, r.trial.index))
    return results


# -- aggregation -------------------------------------------------------------------


def _relative(rec: CheckRecord) -> float:
    if rec.kind == "operator":
        return rec.margin / max(1.0, rec.lhs)
    return rec.margin / max(abs(rec.lhs), abs(rec.rhs), 1e-300)


@dataclass
class LawSummary:
    law_id: str
    trials: int = 0
    records: int = 0
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    worst: CheckRecord | None = None
    worst_spec: GeneratorSpec | None = None
    failures: list = field(default_factory=list)

    def add(self, result: TrialResult) -> None:
        self.trials += 1
        for rec in result.records:
            self.records += 1
            if rec.skipped:
                self.skipped += 1
                continue
            if rec.passed:
                self.passed += 1
            else:
                self.failed += 1
                self.failures.append((rec, result.trial.spec))
            if self.worst is None or _key(rec) < _key(self.worst):
                self.worst = rec
                self.worst_spec = result.trial.spec

    def to_dict(self) -> dict:
        out = {
            "trials": self.trials,
            "records": self.records,
            "passed": self.passed,
            "failed": self.failed,
            "skipped": self.skipped,
            "worst_margin": None,
            "worst_relative_margin": None,
            "witness": None,
        }
        if self.worst is not None:
            out["worst_margin"] = self.worst.margin
            out["worst_relative_margin"] = _relative(self.worst)
            out["witness"] = {"generator": self.worst_spec.to_dict(), "record": self.worst.to_dict()}
        out["failures"] = [{"generator": s.to_dict(), "record": r.to_dict()} for r, s in self.failures[:20]]
        return out


def _key(rec: CheckRecord):
    # worst = most negative margin relative to its tolerance, ties broken by raw margin
    return (rec.margin + rec.tolerance) / max(rec.tolerance, 1e-300), rec.margin


@dataclass
class RunReport:
    config: SuiteConfig
    laws: dict
    results: list = field(default_factory=list, repr=False)

    @property
    def failures(self) -> int:
        return sum(s.failed for s in self.laws.values())

    @property
    def skipped(self) -> int:
        return sum(s.skipped for s in self.laws.values())

    @property
    def all_passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "artifact_version": __version__,
            "config": self.config.to_dict(scheduling=False),
            "summary": {
                "laws": len(self.laws),
                "records": sum(s.records for s in self.laws.values()),
                "failures": self.failures,
                "skipped": self.skipped,
                "all_passed": self.all_passed,
            },
            "laws": {law: s.to_dict() for law, s in self.laws.items()},
        }


def aggregate(config: SuiteConfig, results: Iterable[TrialResult]) -> RunReport:
    summaries = {law: LawSummary(law) for law in config.laws}
    results = list(results)
    for r in results:
        summaries[r.trial.law_id].add(r)
    return RunReport(config, summaries, results)


def run_suite(config: SuiteConfig) -> RunReport:
    config.validate()
    return aggregate(config, execute(config))


# -- extremizer search -------------------------------------------------------------


@dataclass
class Candidate:
    descriptor: dict
    margin: float
    relative_margin: float
    record: CheckRecord | None
    status: str = "ok"


def _objective(law_id: str, A: Observable, params: dict):
    records = [r for r in check(law_id, A, params) if not r.skipped]
    if not records:
        return math.inf, None
    worst = min(records, key=_relative)
    return _relative(worst), worst


def _from_coeffs(coeffs: np.ndarray, n: int) -> Observable:
    A = fourier_synthesize(coeffs.reshape((4,) * n), n)
    norm = op_norm(A)
    return A / norm if norm > 0 else A


def _seeds(n: int, rng: np.random.Generator, restarts: int) -> list[tuple[str, np.ndarray]]:
    out = []
    if n >= 2:
        out.append(("bell", np.real(bell_projector(n).coeffs).ravel().copy()))
    for j in range(n):
        for s in (1, 3):
            entries = [0] * n
            entries[j] = s
            out.append((f"pauli:{PauliString(tuple(entries)).label}", np.real(pauli_matrix(entries).coeffs).ravel().copy()))
    for r in range(restarts):
        out.append((f"random:{r}", rng.standard_normal(4**n)))
    return out


def search_extremal(law_id: str, n: int = 2, params: dict | None = None, restarts: int = 3, iters: int = 60,
                    seed: int = 0, family: str = "pauli", top: int = 5, step: float = 0.25) -> list[Candidate]:
    """Coordinate-perturbation descent on the relative margin of one law.

    Starts from structured seeds (Bell projector, single-site Pauli characters)
    and random real Pauli coefficient vectors. Any negative margin beyond
    tolerance is re-evaluated at a tenfold tighter tolerance before it is
    reported as a violation.
    """
    if law_id not in LAWS:
        raise KeyError(f"search supports the quantum catalog only, got {law_id!r}")
    params = dict(params or {})
    if family == "constant":
        out = []
        for value in (0.0, 0.5, 1.0, -1.0):
            A = Observable.scalar(n, value)
            rel, rec = _objective(law_id, A, params)
            status = "degenerate" if rec is None else "ok"
            out.append(Candidate({"family": "constant", "n": n, "value": value},
                                 math.nan if rec is None else rec.margin, rel if rec else math.nan, rec, status))
        return out
    if family != "pauli":
        raise ValueError(f"unknown search family {family!r}")

    rng = np.random.default_rng(seed)
    found = []
    for label, coeffs in _seeds(n, rng, restarts):
        coeffs = np.array(coeffs, dtype=float)
        best, rec = _objective(law_id, _from_coeffs(coeffs, n), params)
        h = step
        for _ in range(iters):
            improved = False
            for idx in rng.permutation(coeffs.size)[: min(coeffs.size, 16)]:
                for sign in (1.0, -1.0):
                    trial = coeffs.copy()
                    trial[idx] += sign * h
                    if not np.any(trial):
                        continue
                    val, r = _objective(law_id, _from_coeffs(trial, n), params)
                    if val < best:
                        best, rec, coeffs, improved = val, r, trial, True
                        break
            if not improved:
                h *= 0.5
                if h < 1e-6:
                    break
        found.append((best, label, coeffs, rec))

    found.sort(key=lambda x: x[0])
    out = []
    for rel, label, coeffs, rec in found[:top]:
        if rec is None:
            out.append(Candidate({"family": family, "start": label, "n": n}, math.nan, math.nan, None, "degenerate"))
            continue
        status = "ok"
        if not rec.passed:
            tight = {**params, "tol_scalar": params.get("tol_scalar", TOL_SCALAR) / 10,
                     "tol_psd": params.get("tol_psd", TOL_PSD) / 10}
            _, again = _objective(law_id, _from_coeffs(coeffs, n), tight)
            status = "violation" if again is not None and not again.passed else "unconfirmed"
        desc = {"family": family, "start": label, "n": n, "coeffs": [float(c) for c in coeffs]}
        out.append(Candidate(desc, rec.margin, rel, rec, status))
    return out
