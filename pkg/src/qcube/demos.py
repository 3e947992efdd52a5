"""Worked examples that print every intermediate quantity of a sharp case."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import bell_projector, pauli_matrix, psd_margin
from .calculus import conditional_variance, derivative, influence, v_functional, variance
from .classical import classical_check, majority, v_i, variance as classical_variance
from .generators import classical_embed
from .laws import check
from .records import CheckRecord


@dataclass
class DemoResult:
    name: str
    lines: list = field(default_factory=list)
    records: list = field(default_factory=list)
    values: dict = field(default_factory=dict)

    def say(self, text: str = "") -> None:
        self.lines.append(text)

    def transcript(self) -> str:
        return "\n".join(self.lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "demo": self.name,
            "values": self.values,
            "records": [r.to_dict() for r in self.records],
        }


def _fmt_matrix(m: np.ndarray) -> list[str]:
    rows = []
    for row in np.real_if_close(np.round(m, 12)):
        rows.append("  [" + " ".join(f"{complex(x).real:+.4f}" if abs(complex(x).imag) < 1e-12 else f"{complex(x):+.3f}"
                                     for x in row) + "]")
    return rows


def _eigs(A) -> list[float]:
    return [float(x) for x in np.linalg.eigvalsh(A.matrix)]


def bell_sharpness() -> DemoResult:
    out = DemoResult("bell-sharpness")
    P = bell_projector(2)
    out.say("Bell projector P = |Φ+><Φ+| on two qubits:")
    out.lines += _fmt_matrix(P.matrix)
    var1 = conditional_variance(P, 0)
    grad = derivative(P, {0})
    grad_sq = grad.sq_abs()
    out.say()
    out.say("conditional variance on site 0, Var_0(P) = tau_0(P^2) - tau_0(P)^2:")
    out.lines += _fmt_matrix(var1.matrix)
    out.say()
    out.say("derivative d_0 P = P - tau_0(P):")
    out.lines += _fmt_matrix(grad.matrix)
    out.say()
    eig_grad = _eigs(grad_sq)
    out.say(f"eigenvalues of |d_0 P|^2: {', '.join(f'{x:.12f}' for x in eig_grad)}")
    out.say(f"eigenvalues of Var_0(P):  {', '.join(f'{x:.12f}' for x in _eigs(var1))}")
    margin = psd_margin(3.0 * var1 - grad_sq)
    out.say(f"min eigenvalue of 3 Var_0(P) - |d_0 P|^2 = {margin:.3e}")
    out.records = check("Q4", P, {"j": 0})
    for rec in out.records:
        out.say(f"Q4 record: margin={rec.margin:.3e} pass={rec.passed}")
    out.values = {"top_eigenvalue_grad_sq": max(eig_grad), "expected": 9 / 16, "margin": margin}
    out.say("the constant 3 is attained: margin 0 with top eigenvalue 9/16")
    return out


def poincare_extremizer(n: int = 2, site: int = 0, t: float = 0.7) -> DemoResult:
    out = DemoResult("poincare-extremizer")
    entries = [0] * n
    entries[site] = 1
    A = pauli_matrix(entries)
    var = variance(A)
    inf2 = influence(A, {site}, 2)
    out.say(f"A = single-site Pauli X on site {site} of {n} qubits (level-1 character)")
    out.say(f"Var(A) = {var:.12f}")
    out.say(f"Inf^2_{site}(A) = ||d_{site} A||_2^2 = {inf2:.12f}")
    out.say(f"sum of influences - Var = {inf2 - var:.3e}")
    out.records = check("Q1", A, {"t": t})
    for rec in out.records:
        out.say(f"Q1 at t={rec.params.get('t')}: lhs={rec.lhs:.12f} rhs={rec.rhs:.12f} margin={rec.margin:.3e}")
    out.values = {"variance": var, "influence_sq": inf2, "margins": [r.margin for r in out.records]}
    out.say("level-1 operators saturate the Poincare inequality")
    return out


def appendix_maj3() -> DemoResult:
    out = DemoResult("appendix-maj3")
    f = majority(3)
    out.say("Maj_3 truth table (index bit 1 means x_j = -1): " + " ".join(f"{int(x):+d}" for x in f.table))
    out.say("Walsh coefficients: " + " ".join(f"{x:+.3f}" for x in f.walsh))
    vs = [v_i(f, i) for i in range(3)]
    vq = [v_i(f, i, method="quadrature") for i in range(3)]
    for i in range(3):
        out.say(f"V_{i}(f): fourier={vs[i]:.15f} quadrature={vq[i]:.10f}")
    out.say(f"sum V_i = {sum(vs):.15f}, Var(f) = {classical_variance(f):.15f}")
    A = classical_embed(f)
    out.say(f"quantum side: V_0(diag f) = {v_functional(A, {0}):.15f}")
    records: list[CheckRecord] = []
    for q in (1.0, 1.5):
        records += classical_check("A6", f, {"q": q, "p": 1.0})
    for rec in records:
        where = f"i={rec.params['i']}" if "i" in rec.params else "summed"
        out.say(f"A6 q={rec.params['q']} {where}: bound={rec.lhs:.6f} >= {rec.rhs:.6f} pass={rec.passed}")
    out.records = records
    out.values = {"V": vs, "V_quadrature": vq, "variance": classical_variance(f)}
    return out


DEMOS = {
    "bell-sharpness": bell_sharpness,
    "poincare-extremizer": poincare_extremizer,
    "appendix-maj3": appendix_maj3,
}


def run_demo(name: str) -> DemoResult:
    try:
        fn = DEMOS[name]
    except KeyError:
        raise KeyError(f"unknown demo {name!r}; known: {', '.join(DEMOS)}") from None
    return fn()
