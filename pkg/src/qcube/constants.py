"""Named scalar constants, rate functions and the incomplete Beta function."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .quadrature import adaptive_simpson

SINGULAR_GUARD = 1e-6
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class ConstantDomainError(ValueError):
    """A constant was requested outside its domain of definition."""


def incomplete_beta(x: float, a: float, b: float, tol: float = 1e-13) -> float:
    """``Β(x; a, b) = ∫_0^x t^{a-1} (1-t)^{b-1} dt``.

    Near ``t = 0`` the substitution ``u = t^a`` turns ``t^{a-1} dt`` into
    ``du / a``; past ``1/2`` the mirrored substitution ``v = (1-t)^b`` does the
    same for the right endpoint, so both singular endpoints become regular.
    """
    if not 0.0 <= x <= 1.0:
        raise ConstantDomainError(f"incomplete Beta needs 0 <= x <= 1, got x={x}")
    if not (a > 0 and b > 0):
        raise ConstantDomainError(f"incomplete Beta needs a, b > 0, got a={a}, b={b}")
    if x == 0.0:
        return 0.0

    def left(u: float) -> float:
        return (1.0 - u ** (1.0 / a)) ** (b - 1.0) / a

    def right(v: float) -> float:
        return (1.0 - v ** (1.0 / b)) ** (a - 1.0) / b

    cut = min(x, 0.5)
    total = adaptive_simpson(left, 0.0, cut**a, tol=tol)
    if x > 0.5:
        total += adaptive_simpson(right, (1.0 - x) ** b, 0.5**b, tol=tol)
    return total


def _ratio(r: float, p: float) -> float:
    if r == 0.0:
        return 1.0 if p == 2.0 else 0.0
    return -math.expm1(-r) / r ** (p / 2.0)


@dataclass(frozen=True)
class SupRatio:
    value: float
    argmax: float


def sup_ratio(p: float) -> SupRatio:
    """Maximize ``(1 - e^{-r}) / r^{p/2}`` over ``r >= 0`` for ``1 <= p <= 2``.

    For ``p < 2`` the maximizer solves ``e^r = 1 + (2/p) r`` and lies in
    ``(0, 2(2-p)/p]``; golden-section search brackets it and Newton polishes.
    At ``p = 2`` the supremum 1 is approached as ``r → 0``.
    """
    if not 1.0 <= p <= 2.0:
        raise ConstantDomainError(f"sup_ratio needs 1 <= p <= 2, got p={p}")
    if p == 2.0:
        return SupRatio(1.0, 0.0)

    lo, hi = 0.0, 2.0 * (2.0 - p) / p
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = _ratio(x1, p), _ratio(x2, p)
    while hi - lo > 1e-6 * max(1.0, hi):
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = _ratio(x2, p)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = _ratio(x1, p)

    r = 0.5 * (lo + hi)
    slope = 2.0 / p
    for _ in range(50):
        h = math.expm1(r) - slope * r
        step = h / (math.exp(r) - slope)
        r -= step
        if abs(step) <= 1e-15 * max(1.0, r):
            break
    return SupRatio(_ratio(r, p), r)


# -- rate functions ---------------------------------------------------------


def gradient_compare(alpha: float, beta: float) -> float:
    """``B(α,β) = min{(1+2α)/(1+2β), (1-α)/(1-β)}`` (second term dropped at ``β = 1``)."""
    _unit("alpha", alpha)
    _unit("beta", beta)
    first = (1.0 + 2.0 * alpha) / (1.0 + 2.0 * beta)
    if beta == 1.0:
        return first
    return min(first, (1.0 - alpha) / (1.0 - beta))


def gradient_decay(alpha: float, t: float) -> float:
    """``C_α(t) = (1+2α) / (e^{2t} + 2α e^t)``."""
    _unit("alpha", alpha)
    _nonneg("t", t)
    return (1.0 + 2.0 * alpha) / (math.exp(2.0 * t) + 2.0 * alpha * math.exp(t))


def smoothing_rate(alpha: float, t: float) -> float:
    """``G_α(t)``, the Lipschitz smoothing rate."""
    _unit("alpha", alpha)
    _nonneg("t", t)
    et = math.exp(t)
    if alpha <= 0.5:
        return math.expm1(t) * (et + 1.0 + 4.0 * alpha) / (2.0 * (1.0 - alpha) * (1.0 + 2.0 * alpha))
    return math.expm1(t) * (et + 3.0) / (1.0 + 2.0 * alpha)


def integrated_decay(beta: float, t: float) -> float:
    """``I_β(t) = ∫_0^t 2 / C_β(s) ds`` in closed form."""
    _unit("beta", beta)
    _nonneg("t", t)
    return (math.exp(t) + 1.0 + 4.0 * beta) * math.expm1(t) / (1.0 + 2.0 * beta)


def g1_inverse_sqrt_integral(upper: float = math.inf, tol: float = 1e-12) -> float:
    """``∫_0^upper G_1(s)^{-1/2} ds`` with ``G_1(s) = (e^s + 3)(e^s - 1)/3``.

    Substituting ``x = e^{-s}`` gives ``√3 dx / sqrt((1+3x)(1-x))``; the square-root
    singularity at ``x = 1`` disappears under ``1 - x = v²``, leaving the smooth
    integrand ``2√3 / sqrt(1 + 3(1 - v²))`` on ``[0, sqrt(1 - e^{-upper})]``.
    """
    if upper <= 0:
        return 0.0
    top = 1.0 if math.isinf(upper) else math.sqrt(-math.expm1(-upper))
    return adaptive_simpson(lambda v: 2.0 * math.sqrt(3.0) / math.sqrt(4.0 - 3.0 * v * v), 0.0, top, tol=tol)


def g1_integral_oracle() -> float:
    """Independent route: ``2√3 ∫_0^1 du / (1 + 3u²)``."""
    return adaptive_simpson(lambda u: 2.0 * math.sqrt(3.0) / (1.0 + 3.0 * u * u), 0.0, 1.0, tol=1e-13)


def time_integral(p: float, t: float, tol: float = 1e-12) -> float:
    """``∫_0^t 2 e^{-2(p-1)s} G_1(2s)^{-(1-p/2)} ds`` by quadrature.

    Near ``s = 0`` the integrand behaves like ``(8s/3)^{-(1-p/2)}``; the substitution
    ``s = w^{2/p}`` (so ``ds ∝ w^{2/p - 1}``) cancels that singularity.
    """
    if not 1.0 <= p <= 2.0:
        raise ConstantDomainError(f"p must lie in [1, 2], got {p}")
    expo = 1.0 - p / 2.0

    def g1(s: float) -> float:
        return (math.exp(s) + 3.0) * math.expm1(s) / 3.0

    def integrand(w: float) -> float:
        if w <= 0.0:
            # limit: 2 * (2/p) * (8/3)^{-expo}
            return 2.0 * (2.0 / p) * (8.0 / 3.0) ** (-expo)
        s = w ** (2.0 / p)
        jac = (2.0 / p) * w ** (2.0 / p - 1.0)
        return 2.0 * math.exp(-2.0 * (p - 1.0) * s) * g1(2.0 * s) ** (-expo) * jac

    return adaptive_simpson(integrand, 0.0, t ** (p / 2.0), tol=tol)


def time_integral_closed(p: float, t: float) -> float:
    """``(4/3)^{p-1} Β(¾(1 - e^{-2t}); p/2, p/2)``."""
    return (4.0 / 3.0) ** (p - 1.0) * incomplete_beta(0.75 * -math.expm1(-2.0 * t), p / 2.0, p / 2.0)


# -- named constants --------------------------------------------------------


def _unit(name: str, x: float) -> None:
    if not 0.0 <= x <= 1.0:
        raise ConstantDomainError(f"{name} must lie in [0, 1], got {x}")


def _nonneg(name: str, x: float) -> None:
    if not x >= 0.0:
        raise ConstantDomainError(f"{name} must be nonnegative, got {x}")


def _p_range(p: float, strict: bool = False) -> None:
    if strict:
        if not 1.0 <= p < 2.0 - SINGULAR_GUARD:
            raise ConstantDomainError(f"p must satisfy 1 <= p < 2 - {SINGULAR_GUARD}, got {p}")
    elif not 1.0 <= p <= 2.0:
        raise ConstantDomainError(f"p must lie in [1, 2], got {p}")


def _q_range(q: float) -> None:
    if not 1.0 <= q < 2.0 - SINGULAR_GUARD:
        raise ConstantDomainError(f"q must satisfy 1 <= q < 2 - {SINGULAR_GUARD}, got {q}")


def talagrand_c1(p: float) -> float:
    _p_range(p)
    return 0.75 ** (p - 1.0) / incomplete_beta(0.75, p / 2.0, p / 2.0)


def talagrand_c2(p: float) -> float:
    _p_range(p)
    return 0.75 ** (p - 1.0) * (2.0 / 3.0) ** (p / 2.0) * (p / 2.0) * sup_ratio(p).value


def isoper_b(p: float) -> float:
    _p_range(p, strict=True)
    return 2.0 * p / (2.0 - p) * math.log(3.0 / (2.0 * math.pi))


def isoper_k(p: float) -> float:
    _p_range(p, strict=True)
    e = 2.0 / p
    return talagrand_c2(p) ** (-e) + p / (math.e * (2.0 - p)) + talagrand_c1(p) ** (-e) * (1.0 - isoper_b(p))


def isoper_c1(p: float) -> float:
    return isoper_k(p) ** (-p / 2.0)


def isoper_c2(p: float) -> float:
    _p_range(p)
    return 2.0 ** (-p / 2.0) * min(talagrand_c1(p), talagrand_c2(p))


def eldan_gross(p: float) -> float:
    _p_range(p, strict=True)
    return 2.0 ** (-p / 2.0) * min(talagrand_c2(p), isoper_c1(p))


def eldan_gross_unitary(p: float) -> float:
    """Constant used for unitary Hermitian inputs, valid up to ``p = 2``."""
    _p_range(p)
    return 2.0 ** (-p / 2.0) * min(talagrand_c2(p), isoper_c2(p))


def cee(p: float, q: float, alpha: float) -> float:
    _p_range(p)
    _q_range(q)
    _unit("alpha", alpha)
    if q > p:
        raise ConstantDomainError(f"need q <= p, got q={q}, p={p}")
    e = 2.0 / p
    cq = q / (2.0 - q)
    w = 3.0 / (1.0 + 2.0 * alpha)
    log_term = math.log(3.0 * (1.0 + 2.0 * alpha) / (2.0 * math.pi) ** 2)
    total = w * talagrand_c2(p) ** (-e) + p / (2.0 * math.e) * cq + w * talagrand_c1(p) ** (-e) * (1.0 - cq * log_term)
    return total ** (-p / 2.0)


def talagrand_sum_ck(k: int, p: float, q: float) -> float:
    _k_range(k)
    _p_range(p)
    _q_range(q)
    return 1.0 / (2.0 ** (1.0 + k * (2.0 - p)) + q / (2.0 - q) / (2.0 * math.e))


def partial_isoper_ck(k: int, p: float) -> float:
    _k_range(k)
    _p_range(p, strict=True)
    return 1.0 / (2.0 ** (1.0 + (2.0 - p) * k) + 1.0 / (math.e * k * (2.0 - p)))


def lp_poincare(alpha: float) -> float:
    _unit("alpha", alpha)
    return 3.0 / (2.0 * math.pi) * math.sqrt((1.0 + 2.0 * alpha) / 3.0)


def classical_gap(q: float) -> float:
    """``c_q`` of the classical ``L^q`` spectral gap."""
    if not q >= 1.0:
        raise ConstantDomainError(f"q must be >= 1, got {q}")
    if math.isinf(q):
        return 0.0
    return 2.0 * (1.0 - 1.0 / q) if q <= 2.0 else 2.0 / q


def classical_crude(c: float) -> float:
    """``C = 4 + 2(1 + e²)(1 + c/2)``."""
    if not c >= 1.0:
        raise ConstantDomainError(f"c must be >= 1, got {c}")
    return 4.0 + 2.0 * (1.0 + math.e**2) * (1.0 + c / 2.0)


def _k_range(k: int) -> None:
    if int(k) != k or k < 1:
        raise ConstantDomainError(f"k must be a positive integer, got {k}")


_REGISTRY = {
    "C1_main": (talagrand_c1, ("p",)),
    "C2_main": (talagrand_c2, ("p",)),
    "B_compare": (gradient_compare, ("alpha", "beta")),
    "C_alpha_t": (gradient_decay, ("alpha", "t")),
    "G_alpha_t": (smoothing_rate, ("alpha", "t")),
    "I_beta_t": (integrated_decay, ("beta", "t")),
    "lp_poincare": (lp_poincare, ("alpha",)),
    "cor16_Ck": (talagrand_sum_ck, ("k", "p", "q")),
    "isoper_C1": (isoper_c1, ("p",)),
    "isoper_C2": (isoper_c2, ("p",)),
    "isoper_K": (isoper_k, ("p",)),
    "isoper_B": (isoper_b, ("p",)),
    "eldan_gross": (eldan_gross, ("p",)),
    "cee": (cee, ("p", "q", "alpha")),
    "partial_isoper_Ck": (partial_isoper_ck, ("k", "p")),
    "classical_cq": (classical_gap, ("q",)),
    "classical_Ccrude": (classical_crude, ("c",)),
}

CONSTANT_NAMES = tuple(_REGISTRY)


def constant_params(name: str) -> tuple[str, ...]:
    if name not in _REGISTRY:
        raise KeyError(f"unknown constant {name!r}; known: {', '.join(CONSTANT_NAMES)}")
    return _REGISTRY[name][1]


@dataclass(frozen=True)
class ConstantRequest:
    name: str
    params: Mapping[str, float] = field(default_factory=dict)


def named_constant(req: ConstantRequest | str, **params: float) -> float:
    """Evaluate a constant by name, e.g. ``named_constant("C1_main", p=1)``."""
    if isinstance(req, ConstantRequest):
        name, params = req.name, {**req.params, **params}
    else:
        name = req
    needed = constant_params(name)
    missing = [k for k in needed if k not in params]
    if missing:
        raise ConstantDomainError(f"{name} requires parameters {missing}")
    extra = set(params) - set(needed)
    if extra:
        raise ConstantDomainError(f"{name} does not take parameters {sorted(extra)}")
    fn = _REGISTRY[name][0]
    return float(fn(*(params[k] for k in needed)))
