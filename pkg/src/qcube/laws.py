"""Executable catalog of the quantum inequalities.

Each law maps an operator and a parameter grid to a list of
:class:`~qcube.records.CheckRecord`. Scalar laws put the dominating side in
``lhs``; operator laws report the smallest eigenvalue of ``lhs - rhs``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from . import calculus as qc
from . import constants as K
from .algebra import Observable, op_norm, psd_margin, schatten_norm
from .records import TOL_PSD, TOL_SCALAR, CheckRecord, operator_record, scalar_record, skipped_record

DEFAULT_P = (1.0, 1.25, 1.5, 1.75, 2.0)
DEFAULT_Q = (1.0, 1.5, 1.9)
DEFAULT_ALPHA = (0.0, 0.25, 0.5, 1.0)
DEFAULT_T = (0.1, 0.5, 1.0, 2.0)
DEFAULT_K = (1, 2, 3)
SMOOTHING_Q = (2.0, 4.0, math.inf)
NORM_SLACK = 1e-12


@dataclass(frozen=True)
class Grid:
    p: tuple = DEFAULT_P
    q: tuple = DEFAULT_Q
    alpha: tuple = DEFAULT_ALPHA
    t: tuple = DEFAULT_T
    k: tuple = DEFAULT_K

    def __post_init__(self):
        for name in ("p", "q", "alpha", "t", "k"):
            vals = getattr(self, name)
            if isinstance(vals, (int, float)):
                vals = (vals,)
            object.__setattr__(self, name, tuple(float(v) if name != "k" else int(v) for v in vals))
        if any(not 1.0 <= p <= 2.0 for p in self.p):
            raise ValueError(f"p grid must lie in [1, 2], got {self.p}")
        if any(not 1.0 <= q < 2.0 for q in self.q):
            raise ValueError(f"q grid must lie in [1, 2), got {self.q}")
        if any(not 0.0 <= a <= 1.0 for a in self.alpha):
            raise ValueError(f"alpha grid must lie in [0, 1], got {self.alpha}")
        if any(not t > 0.0 for t in self.t):
            raise ValueError(f"t grid must be positive, got {self.t}")
        if any(k < 1 for k in self.k):
            raise ValueError(f"k grid must be positive integers, got {self.k}")

    def to_dict(self) -> dict:
        return {name: list(getattr(self, name)) for name in ("p", "q", "alpha", "t", "k")}


class Context:
    """Per-operator memo of the quantities shared between laws."""

    def __init__(self, A: Observable, grid: Grid, tol_scalar: float = TOL_SCALAR, tol_psd: float = TOL_PSD,
                 sites: Sequence[int] | None = None, subsets: Sequence[Sequence[int]] | None = None):
        self.A = A
        self.n = A.n
        self.grid = grid
        self.tol_scalar = tol_scalar
        self.tol_psd = tol_psd
        self._sites = tuple(sites) if sites is not None else None
        self._subsets = tuple(tuple(J) for J in subsets) if subsets is not None else None
        self._bundles: dict = {}
        self._derivs: dict = {}
        self._sgrad: dict = {}
        self._semigroup: dict = {}

    # -- basic quantities -------------------------------------------------
    @cached_property
    def norm(self) -> float:
        return op_norm(self.A)

    @cached_property
    def var(self) -> float:
        return qc.variance(self.A)

    @cached_property
    def centered(self) -> Observable:
        return self.A - self.A.trace()

    @cached_property
    def unitary_hermitian(self) -> bool:
        if not self.A.hermitian or self.n == 0:
            return False
        m = self.A.matrix
        return bool(np.abs(m @ m - np.eye(self.A.dim)).max() <= 1e-10)

    @property
    def sites(self) -> tuple:
        return self._sites if self._sites is not None else tuple(range(self.n))

    def subsets(self, sizes: Sequence[int] | None = None) -> list[tuple]:
        if self._subsets is not None:
            return [J for J in self._subsets if sizes is None or len(J) in sizes]
        sizes = self.grid.k if sizes is None else sizes
        out = []
        for k in sorted(set(sizes)):
            if k <= self.n:
                out.extend(itertools.combinations(range(self.n), k))
        return out

    def deriv(self, J) -> Observable:
        J = tuple(sorted(J))
        if J not in self._derivs:
            self._derivs[J] = qc.derivative(self.A, J)
        return self._derivs[J]

    def bundle(self, alpha: float) -> qc.GradientBundle:
        if alpha not in self._bundles:
            self._bundles[alpha] = qc.alpha_gradient(self.A, alpha)
        return self._bundles[alpha]

    def site_grad(self, j: int, alpha: float) -> Observable:
        key = (j, alpha)
        if key not in self._sgrad:
            if alpha in self._bundles:
                self._sgrad[key] = self._bundles[alpha].per_site[j]
            else:
                self._sgrad[key] = qc.site_gradient_sq(self.A, j, alpha)
        return self._sgrad[key]

    def evolved(self, t: float) -> Observable:
        if t not in self._semigroup:
            self._semigroup[t] = qc.semigroup_apply(self.A, t)
        return self._semigroup[t]

    def v(self, J) -> float:
        return qc.v_functional(self.A, J)

    def grad_norm_p(self, alpha: float, p: float) -> float:
        """``‖|∇^α A|‖_p^p``."""
        abs_grad = self.bundle(alpha).total_abs
        return schatten_norm(abs_grad, p) ** p if not math.isinf(p) else schatten_norm(abs_grad, p)

    # -- record helpers ---------------------------------------------------
    def scalar(self, law, lhs, rhs, notes="", **params) -> CheckRecord:
        return scalar_record(law, lhs, rhs, {"n": self.n, **params}, self.tol_scalar, notes)

    def operator(self, law, lhs: Observable, rhs: Observable, notes="", **params) -> CheckRecord:
        diff = lhs - rhs
        scale = max(1.0, op_norm(lhs), op_norm(rhs))
        return operator_record(law, psd_margin(diff), scale, {"n": self.n, **params}, self.tol_psd, notes)

    def skip(self, law, reason, kind="scalar", **params) -> CheckRecord:
        return skipped_record(law, {"n": self.n, **params}, reason, kind)


def _fmt_set(J) -> str:
    return "{" + ",".join(str(j) for j in sorted(J)) + "}"


def _log_plus(x: float) -> float:
    return math.log(x) if x > 1.0 else 0.0


def _ratio(num: float, den: float) -> float:
    if den <= 0.0:
        return 0.0 if num <= 0.0 else math.inf
    return num / den


def _bounded(ctx: Context, law: str):
    """Operator satisfying ``‖A‖_∞ <= 1`` for laws that assume it (rescaled if needed)."""
    if ctx.norm <= 1.0 + NORM_SLACK:
        return ctx, False
    inner = Context(ctx.A / ctx.norm, ctx.grid, ctx.tol_scalar, ctx.tol_psd, ctx._sites, ctx._subsets)
    return inner, True


# -- first-order semigroup laws -------------------------------------------------


def q1_poincare(ctx: Context) -> list[CheckRecord]:
    return [
        ctx.scalar("Q1", math.exp(-2.0 * t) * ctx.var, qc.variance(ctx.evolved(t)), t=t)
        for t in ctx.grid.t
    ]


def q2_hypercontractivity(ctx: Context) -> list[CheckRecord]:
    out = []
    for t in ctx.grid.t:
        r = 1.0 + math.exp(-2.0 * t)
        out.append(ctx.scalar("Q2", schatten_norm(ctx.A, r), schatten_norm(ctx.evolved(t), 2.0), t=t, r=r))
    return out


def q3_derivative_decay(ctx: Context) -> list[CheckRecord]:
    out = []
    ps = tuple(ctx.grid.p) + (math.inf,)
    for J in ctx.subsets():
        dJ = ctx.deriv(J)
        base = {p: schatten_norm(dJ, p) for p in ps}
        for t in ctx.grid.t:
            evolved = qc.derivative(ctx.evolved(t), J)
            for p in ps:
                lhs = math.exp(-len(J) * t) * base[p]
                out.append(ctx.scalar("Q3", lhs, schatten_norm(evolved, p), J=_fmt_set(J), t=t, p=p))
    return out


# -- operator-valued gradient laws ----------------------------------------------


def q4_khintchine(ctx: Context) -> list[CheckRecord]:
    out = []
    for j in ctx.sites:
        var_j = qc.conditional_variance(ctx.A, j)
        out.append(ctx.operator("Q4", 3.0 * var_j, ctx.deriv((j,)).sq_abs(), j=j))
    return out


def q5_gradient_comparison(ctx: Context) -> list[CheckRecord]:
    out = []
    for j in ctx.sites:
        for a, b in itertools.permutations(ctx.grid.alpha, 2):
            const = K.gradient_compare(a, b)
            out.append(ctx.operator("Q5", ctx.site_grad(j, a), const * ctx.site_grad(j, b), j=j, alpha=a, beta=b))
    return out


def q6_gradient_estimate(ctx: Context) -> list[CheckRecord]:
    out = []
    for t in ctx.grid.t:
        evolved = ctx.evolved(t)
        for j in ctx.sites:
            for a in ctx.grid.alpha:
                lhs = K.gradient_decay(a, t) * qc.semigroup_apply(ctx.site_grad(j, a), t)
                rhs = qc.site_gradient_sq(evolved, j, a)
                out.append(ctx.operator("Q6", lhs, rhs, j=j, alpha=a, t=t))
    return out


def q7_lipschitz_smoothing(ctx: Context) -> list[CheckRecord]:
    out = []
    for t in ctx.grid.t:
        evolved = ctx.evolved(t)
        for a in ctx.grid.alpha:
            grad = qc.alpha_gradient(evolved, a).total_abs
            rate = K.smoothing_rate(a, t) ** -0.5
            for q in SMOOTHING_Q:
                lhs = rate * schatten_norm(ctx.A, q)
                out.append(ctx.scalar("Q7", lhs, schatten_norm(grad, q), alpha=a, t=t, q=q))
    return out


def q8_lp_poincare(ctx: Context) -> list[CheckRecord]:
    out = []
    for a in ctx.grid.alpha:
        grad = ctx.bundle(a).total_abs
        for p in ctx.grid.p:
            rhs = K.lp_poincare(a) * schatten_norm(ctx.centered, p)
            out.append(ctx.scalar("Q8", schatten_norm(grad, p), rhs, alpha=a, p=p))
    return out


# -- Talagrand-type variance laws -------------------------------------------------


def q9_talagrand(ctx: Context) -> list[CheckRecord]:
    """Main variance inequality, in the stated (ln⁺-clamped) and proof forms."""
    out = []
    if ctx.var <= 0.0:
        return [ctx.skip("Q9", "Var(A) = 0", alpha=a, p=p, q=q)
                for a in ctx.grid.alpha for p in ctx.grid.p for q in ctx.grid.q if q <= p]
    ratios = {q: qc.log_ratio(ctx.A, q) for q in ctx.grid.q}
    for p in ctx.grid.p:
        c1, c2 = K.talagrand_c1(p), K.talagrand_c2(p)
        for a in ctx.grid.alpha:
            lhs = ctx.norm ** (2.0 - p) * ctx.grad_norm_p(a, p)
            pref = ctx.var * ((1.0 + 2.0 * a) / 3.0) ** (p / 2.0)
            for q in ctx.grid.q:
                if q > p:
                    continue
                r = ratios[q]
                stated = pref * max(c1, c2 * max(r, 0.0) ** (p / 2.0))
                proof = pref * max(c1, c2 * max(2.0, r) ** (p / 2.0))
                out.append(ctx.scalar("Q9", lhs, stated, alpha=a, p=p, q=q, form="stated", R=r))
                out.append(ctx.scalar("Q9", lhs, proof, alpha=a, p=p, q=q, form="proof", R=r))
    return out


def q10_eldan_gross(ctx: Context) -> list[CheckRecord]:
    ctx, rescaled = _bounded(ctx, "Q10")
    out = []
    if ctx.var <= 0.0:
        return [ctx.skip("Q10", "Var(A) = 0", p=p) for p in ctx.grid.p]
    total = sum(qc.influence(ctx.A, j, 1.0) ** 2 for j in range(ctx.n))
    log_term = 1.0 + _log_plus(_ratio(1.0, total))
    for p in ctx.grid.p:
        lhs = ctx.grad_norm_p(1.0, p)
        if p < 2.0 - K.SINGULAR_GUARD:
            rhs = K.eldan_gross(p) * ctx.var * log_term ** (p / 2.0)
            out.append(ctx.scalar("Q10", lhs, rhs, p=p, branch="general", rescaled=rescaled))
        if ctx.unitary_hermitian:
            rhs = K.eldan_gross_unitary(p) * ctx.var * log_term ** (p / 2.0)
            out.append(ctx.scalar("Q10", lhs, rhs, p=p, branch="unitary", rescaled=rescaled))
    return out


def q11_cee(ctx: Context) -> list[CheckRecord]:
    ctx, rescaled = _bounded(ctx, "Q11")
    out = []
    for a in ctx.grid.alpha:
        for p in ctx.grid.p:
            for q in ctx.grid.q:
                if q > p:
                    continue
                if ctx.var <= 0.0:
                    out.append(ctx.skip("Q11", "Var(A) = 0", alpha=a, p=p, q=q))
                    continue
                gp = ctx.grad_norm_p(a, p)
                gq2 = schatten_norm(ctx.bundle(a).total_abs, q) ** 2
                lhs = gp / (1.0 + q / (2.0 - q) * _log_plus(_ratio(gp, gq2))) ** (p / 2.0)
                rhs = K.cee(p, q, a) * ctx.var
                out.append(ctx.scalar("Q11", lhs, rhs, alpha=a, p=p, q=q, rescaled=rescaled))
    return out


def q12_isoperimetric(ctx: Context) -> list[CheckRecord]:
    ctx, rescaled = _bounded(ctx, "Q12")
    if ctx.var <= 0.0:
        return [ctx.skip("Q12", "Var(A) = 0", p=p) for p in ctx.grid.p]
    out = []
    log_term = math.log(math.e / ctx.var)
    for p in ctx.grid.p:
        lhs = ctx.grad_norm_p(1.0, p)
        if p < 2.0 - K.SINGULAR_GUARD:
            rhs = K.isoper_c1(p) * ctx.var * log_term ** (p / 2.0)
            out.append(ctx.scalar("Q12", lhs, rhs, p=p, branch="general", rescaled=rescaled))
        if ctx.unitary_hermitian:
            rhs = K.isoper_c2(p) * ctx.var * log_term ** (p / 2.0)
            out.append(ctx.scalar("Q12", lhs, rhs, p=p, branch="unitary", rescaled=rescaled))
    return out


# -- high-order laws ----------------------------------------------------------------


def q13_high_order_talagrand(ctx: Context) -> list[CheckRecord]:
    out = []
    for J in ctx.subsets():
        k = len(J)
        dJ = ctx.deriv(J)
        vJ = ctx.v(J)
        for q in ctx.grid.q:
            dq = schatten_norm(dJ, q)
            log_term = q / (2.0 - q) * _log_plus(_ratio(math.sqrt(k * vJ), dq))
            for p in ctx.grid.p:
                lhs = ctx.norm ** (2.0 - p) * schatten_norm(dJ, p) ** p
                rhs = 2.0 ** ((p - 2.0) * k) * vJ * max(k, log_term)
                out.append(ctx.scalar("Q13", lhs, rhs, J=_fmt_set(J), p=p, q=q))
    return out


def q14_talagrand_sum(ctx: Context) -> list[CheckRecord]:
    ctx, rescaled = _bounded(ctx, "Q14")
    out = []
    for k in ctx.grid.k:
        subsets = ctx.subsets((k,))
        if not subsets:
            continue
        v_total = sum(ctx.v(J) for J in subsets)
        for p in ctx.grid.p:
            for q in ctx.grid.q:
                lhs = 0.0
                for J in subsets:
                    dJ = ctx.deriv(J)
                    inf_p = schatten_norm(dJ, p) ** p
                    if inf_p == 0.0:
                        continue
                    arg = _ratio(math.sqrt(k * inf_p), schatten_norm(dJ, q))
                    lhs += inf_p / (k + q / (2.0 - q) * _log_plus(arg))
                rhs = K.talagrand_sum_ck(k, p, q) * v_total
                out.append(ctx.scalar("Q14", lhs, rhs, k=k, p=p, q=q, rescaled=rescaled))
    return out


def q15_partial_isoper(ctx: Context) -> list[CheckRecord]:
    ctx, rescaled = _bounded(ctx, "Q15")
    out = []
    weights = qc.fourier_weights(ctx.A)
    for p in ctx.grid.p:
        if p >= 2.0 - K.SINGULAR_GUARD:
            continue
        for k in ctx.grid.k:
            subsets = ctx.subsets((k,))
            if not subsets:
                continue
            const = K.partial_isoper_ck(k, p)
            infs = []
            for J in subsets:
                vJ = ctx.v(J)
                inf_p = schatten_norm(ctx.deriv(J), p) ** p
                infs.append(inf_p)
                rhs = const * vJ * (k - 0.5 * math.log(k * vJ)) if vJ > 0 else 0.0
                out.append(ctx.scalar("Q15", inf_p, rhs, J=_fmt_set(J), p=p, form="local", rescaled=rescaled))
            if len(subsets) == math.comb(ctx.n, k):
                binom = math.comb(ctx.n, k)
                w = weights.at_least(k)
                rhs = const / (2 * k * binom) * w * math.log(math.exp(2 * k) * binom / w) if w > 0 else 0.0
                out.append(ctx.scalar("Q15", max(infs), rhs, k=k, p=p, form="weight", rescaled=rescaled))
    return out


def q16_restricted_poincare(ctx: Context) -> list[CheckRecord]:
    out = []
    weights = qc.fourier_weights(ctx.A)
    for J in ctx.subsets():
        k = len(J)
        vJ = ctx.v(J)
        out.append(ctx.scalar("Q16", qc.influence(ctx.A, J, 2.0), k * vJ, J=_fmt_set(J), form="restricted"))
        for t in ctx.grid.t:
            lhs = math.exp(-2.0 * k * t) * vJ
            out.append(ctx.scalar("Q16", lhs, qc.v_functional(ctx.evolved(t), J), J=_fmt_set(J), t=t, form="decay"))
    for k in ctx.grid.k:
        if k <= ctx.n and ctx._subsets is None:
            total = sum(ctx.v(J) for J in itertools.combinations(range(ctx.n), k))
            out.append(ctx.scalar("Q16", total, weights.at_least(k) / k, k=k, form="weight-sum"))
    return out


def q17_variance_decay(ctx: Context) -> list[CheckRecord]:
    out = []
    if ctx.var <= 0.0:
        return [ctx.skip("Q17", "Var(A) = 0", q=q, t=t) for q in ctx.grid.q for t in ctx.grid.t]
    for q in ctx.grid.q:
        m = min(schatten_norm(ctx.centered, q) ** 2, sum(schatten_norm(ctx.deriv((j,)), q) ** 2 for j in range(ctx.n)))
        for eps in ctx.grid.t:
            theta = min(math.tanh(eps) / (2.0 / q - 1.0), 1.0)
            lhs = ctx.var ** (1.0 - theta) * m**theta
            out.append(ctx.scalar("Q17", lhs, qc.variance(ctx.evolved(eps)), q=q, t=eps, theta=theta, form="hypercontractive"))
    times = (0.0,) + tuple(ctx.grid.t)
    for t1, t2 in itertools.combinations(sorted(set(times)), 2):
        mid = 0.5 * (t1 + t2)
        lhs = qc.variance(qc.semigroup_apply(ctx.A, t1)) * qc.variance(qc.semigroup_apply(ctx.A, t2))
        rhs = qc.variance(qc.semigroup_apply(ctx.A, mid)) ** 2
        out.append(ctx.scalar("Q17", lhs, rhs, t1=t1, t2=t2, form="log-convexity"))
    return out


def q18_dj_operator_norm(ctx: Context) -> list[CheckRecord]:
    return [
        ctx.scalar("Q18", 2.0 ** len(J) * ctx.norm, op_norm(ctx.deriv(J)), J=_fmt_set(J))
        for J in ctx.subsets()
    ]


def q19_improved_l2_decay(ctx: Context) -> list[CheckRecord]:
    out = []
    for J in ctx.subsets():
        inf2 = qc.influence(ctx.A, J, 2.0)
        for t in ctx.grid.t:
            rhs = qc.influence(ctx.evolved(t), J, 2.0)
            out.append(ctx.scalar("Q19", math.exp(-2.0 * len(J) * t) * inf2, rhs, J=_fmt_set(J), t=t))
    return out


def q20_kadison_schwarz(ctx: Context) -> list[CheckRecord]:
    out = []
    sq = ctx.A.sq_abs()
    for J in ctx.subsets():
        cond = qc.cond_expectation(ctx.A, J)
        out.append(ctx.operator("Q20", qc.cond_expectation(sq, J), cond.sq_abs(), J=_fmt_set(J), map="cond"))
    for t in ctx.grid.t:
        out.append(ctx.operator("Q20", qc.semigroup_apply(sq, t), ctx.evolved(t).sq_abs(), t=t, map="semigroup"))
    return out


@dataclass(frozen=True)
class LawInfo:
    law_id: str
    name: str
    kind: str
    statement: str
    checker: Callable[[Context], list]
    bounded: bool = False


LAWS = {
    info.law_id: info
    for info in (
        LawInfo("Q1", "poincare", "scalar", "Var(P_t A) <= e^{-2t} Var(A)", q1_poincare),
        LawInfo("Q2", "hypercontractivity", "scalar", "||P_t A||_2 <= ||A||_{1+e^{-2t}}", q2_hypercontractivity),
        LawInfo("Q3", "derivative-decay", "scalar", "||d_J P_t A||_p <= e^{-kt} ||d_J A||_p", q3_derivative_decay),
        LawInfo("Q4", "khintchine", "operator", "|d_j A|^2 <= 3 Var_j(A)", q4_khintchine),
        LawInfo("Q5", "gradient-comparison", "operator", "|grad_j^a A|^2 >= B(a,b) |grad_j^b A|^2", q5_gradient_comparison),
        LawInfo("Q6", "gradient-estimate", "operator", "|grad_j^a P_t A|^2 <= C_a(t) P_t |grad_j^a A|^2", q6_gradient_estimate),
        LawInfo("Q7", "lipschitz-smoothing", "scalar", "|| |grad^a P_t A| ||_q <= G_a(t)^{-1/2} ||A||_q", q7_lipschitz_smoothing),
        LawInfo("Q8", "lp-poincare", "scalar", "|| |grad^a A| ||_p >= (3/2pi) ((1+2a)/3)^{1/2} ||A - tau(A)||_p", q8_lp_poincare),
        LawInfo("Q9", "talagrand-variance", "scalar", "||A||^{2-p} || |grad^a A| ||_p^p >= Var ((1+2a)/3)^{p/2} max{C1, C2 R^{p/2}}", q9_talagrand),
        LawInfo("Q10", "eldan-gross", "scalar", "|| |grad^1 A| ||_p^p >= C(p) Var [1 + ln+(1/sum Inf_j^1^2)]^{p/2}", q10_eldan_gross, True),
        LawInfo("Q11", "cee", "scalar", "|| |grad^a A| ||_p^p / [1 + c_q ln+(...)]^{p/2} >= C_a(p,q) Var", q11_cee, True),
        LawInfo("Q12", "isoperimetric", "scalar", "|| |grad^1 A| ||_p^p >= C(p) Var ln(e/Var)^{p/2}", q12_isoperimetric, True),
        LawInfo("Q13", "high-order-talagrand", "scalar", "||A||^{2-p} Inf_J^p >= 2^{(p-2)k} V_J max{k, c_q ln+(sqrt(k V_J)/||d_J A||_q)}", q13_high_order_talagrand),
        LawInfo("Q14", "talagrand-sum", "scalar", "sum_J Inf_J^p / (k + c_q ln+(...)) >= C_k(p,q) sum_J V_J", q14_talagrand_sum, True),
        LawInfo("Q15", "partial-isoperimetric", "scalar", "Inf_J^p >= C_k(p) V_J ln(e^k / sqrt(k V_J))", q15_partial_isoper, True),
        LawInfo("Q16", "restricted-poincare", "scalar", "k V_J <= Inf_J^2, V_J(P_t A) <= e^{-2kt} V_J, sum V_J >= W^{>=k}/k", q16_restricted_poincare),
        LawInfo("Q17", "hypercontractive-variance-decay", "scalar", "Var(P_e A) <= Var^{1-theta} m^theta; t -> Var(P_t A) log-convex", q17_variance_decay),
        LawInfo("Q18", "dJ-operator-norm", "scalar", "||d_J A||_inf <= 2^k ||A||_inf", q18_dj_operator_norm),
        LawInfo("Q19", "improved-L2-decay", "scalar", "||d_J P_s A||_2^2 <= e^{-2ks} Inf_J^2", q19_improved_l2_decay),
        LawInfo("Q20", "kadison-schwarz", "operator", "Phi(A*A) >= Phi(A)* Phi(A) for Phi = tau_J, P_t", q20_kadison_schwarz),
    )
}

QUANTUM_LAWS = tuple(LAWS)


def make_context(A: Observable, params: dict | None = None) -> Context:
    params = dict(params or {})
    grid = params.pop("grid", None)
    if grid is None:
        axes = {}
        for name in ("p", "q", "alpha", "t", "k"):
            if name in params:
                axes[name] = params[name]
        grid = Grid(**axes)
    sites = params.get("j")
    subsets = params.get("J")
    if isinstance(sites, int):
        sites = (sites,)
    if subsets is not None and subsets and isinstance(subsets[0], int):
        subsets = (tuple(subsets),)
    return Context(A, grid, params.get("tol_scalar", TOL_SCALAR), params.get("tol_psd", TOL_PSD), sites, subsets)


def check(law_id: str, A: Observable, params: dict | None = None) -> list[CheckRecord]:
    """Evaluate one catalog law on ``A``.

    ``params`` may fix single values or grids for ``p, q, alpha, t, k``,
    restrict sites with ``j`` or subsets with ``J``, and override
    ``tol_scalar``/``tol_psd``.
    """
    if law_id not in LAWS:
        raise KeyError(f"unknown law {law_id!r}")
    return LAWS[law_id].checker(make_context(A, params))
