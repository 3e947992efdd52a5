"""Differential calculus on the quantum Boolean cube.

Fourier multipliers (``P_t``, ``d_J``, the Riesz transform) act on the
coefficient array; conditional variances, carré du champ and gradients act on
dense matrices through partial traces. Sites are 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .algebra import (
    Observable,
    levels,
    operator_abs_power,
    schatten_norm,
    schatten_power,
    support_contains,
)
from .quadrature import adaptive_simpson

EPS_QUAD = 1e-7


@dataclass(frozen=True)
class SubsetMask:
    """A subset ``J`` of the qubit sites ``{0, ..., n-1}``."""

    n: int
    members: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        members = frozenset(int(j) for j in self.members)
        bad = [j for j in members if not 0 <= j < self.n]
        if bad:
            raise ValueError(f"sites {sorted(bad)} outside range(0, {self.n})")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, n: int, sites: "SubsetMask | int | Iterable[int]") -> "SubsetMask":
        if isinstance(sites, SubsetMask):
            if sites.n != n:
                raise ValueError("subset belongs to a different qubit count")
            return sites
        if isinstance(sites, (int, np.integer)):
            sites = (int(sites),)
        return cls(n, frozenset(sites))

    @property
    def k(self) -> int:
        return len(self.members)

    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def __iter__(self):
        return iter(self.sorted())

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.sorted())) + "}"


def _mask(A: Observable, J) -> SubsetMask:
    return SubsetMask.of(A.n, J)


# -- partial traces ---------------------------------------------------------


def _partial_trace_site(matrix: np.ndarray, n: int, j: int) -> np.ndarray:
    left, right = 2**j, 2 ** (n - j - 1)
    t = matrix.reshape(left, 2, right, left, 2, right)
    reduced = 0.5 * (t[:, 0, :, :, 0, :] + t[:, 1, :, :, 1, :])
    out = np.einsum("acbd,ij->aicbjd", reduced, np.eye(2))
    return out.reshape(2**n, 2**n)


def cond_expectation(A: Observable, J) -> Observable:
    """``τ_J A``: normalized partial trace over the sites in ``J``, padded with identities."""
    J = _mask(A, J)
    m = A.matrix
    for j in J:
        m = _partial_trace_site(m, A.n, j)
    return Observable(A.n, matrix=m, hermitian=A._hermitian)


def cond_expectation_fourier(A: Observable, J) -> Observable:
    """Same as :func:`cond_expectation` but as a multiplier: keep ``s`` with ``s_J = 0``."""
    J = _mask(A, J)
    keep = np.ones((4,) * A.n, dtype=bool)
    for j in J:
        idx = [slice(None)] * A.n
        idx[j] = slice(1, None)
        keep[tuple(idx)] = False
    return A.multiplier(keep.astype(float))


# -- multipliers ------------------------------------------------------------


def derivative(A: Observable, J) -> Observable:
    """``d_J A``: keep the coefficients with ``J ⊆ supp(s)``."""
    J = _mask(A, J)
    return A.multiplier(support_contains(A.n, J.members).astype(float))


def derivative_dense(A: Observable, J) -> Observable:
    """``d_J = Π_j (id − τ_j)`` evaluated with partial traces."""
    J = _mask(A, J)
    m = A.matrix
    for j in J:
        m = m - _partial_trace_site(m, A.n, j)
    return Observable(A.n, matrix=m, hermitian=A._hermitian)


def semigroup_apply(A: Observable, t: float) -> Observable:
    """Depolarizing semigroup ``P_t``: multiply ``Â_s`` by ``exp(-t |supp s|)``."""
    if t < 0:
        raise ValueError(f"semigroup time must be nonnegative, got {t}")
    if t == 0:
        return A
    return A.multiplier(np.exp(-t * levels(A.n)))


def semigroup_apply_dense(A: Observable, t: float) -> Observable:
    """``P_t`` as a product of single-qubit depolarizing channels."""
    if t < 0:
        raise ValueError(f"semigroup time must be nonnegative, got {t}")
    keep = math.exp(-t)
    m = A.matrix
    for j in range(A.n):
        m = keep * m + (1.0 - keep) * _partial_trace_site(m, A.n, j)
    return Observable(A.n, matrix=m, hermitian=A._hermitian)


def riesz_transform(A: Observable, J) -> Observable:
    """``R_J A = d_J L^{-1/2}(A − τ(A))``."""
    J = _mask(A, J)
    if J.k == 0:
        raise ValueError("the Riesz transform needs a nonempty subset")
    lv = levels(A.n)
    mult = np.where(support_contains(A.n, J.members), 1.0 / np.sqrt(np.maximum(lv, 1)), 0.0)
    return A.multiplier(mult)


# -- variances and gradients -------------------------------------------------


def variance(A: Observable) -> float:
    """``Var(A) = τ(|A − τ(A)|²) = Σ_{s≠0} |Â_s|²``."""
    c = A.coeffs
    return float(np.sum(np.abs(c) ** 2) - abs(c[(0,) * A.n]) ** 2) if A.n else 0.0


def conditional_variance(A: Observable, j: int) -> Observable:
    """``Var_j(A) = τ_j(|A − τ_j A|²)``."""
    centered = A - cond_expectation(A, j)
    out = cond_expectation(centered.sq_abs(), j)
    return Observable(A.n, matrix=(out.matrix + out.matrix.conj().T) / 2, hermitian=True)


def carre_du_champ(A: Observable, j: int) -> Observable:
    """``Γ_j(A) = ½(Var_j(A) + |d_j A|²)``."""
    return 0.5 * (conditional_variance(A, j) + derivative(A, j).sq_abs())


def variance_stats(A: Observable, j: int) -> tuple[float, Observable, Observable]:
    var_j = conditional_variance(A, j)
    gamma = 0.5 * (var_j + derivative(A, j).sq_abs())
    return variance(A), var_j, gamma


@dataclass(frozen=True)
class GradientBundle:
    """Per-site ``|∇_j^α A|²`` together with ``|∇^α A|²`` and ``|∇^α A|``."""

    alpha: float
    per_site: tuple
    total_sq: Observable
    total_abs: Observable


def site_gradient_sq(A: Observable, j: int, alpha: float) -> Observable:
    """``|∇_j^α A|² = (1−α) Var_j(A) + α |d_j A|²``."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    out = (1.0 - alpha) * conditional_variance(A, j) + alpha * derivative(A, j).sq_abs()
    return Observable(A.n, matrix=out.matrix, hermitian=True)


def alpha_gradient(A: Observable, alpha: float) -> GradientBundle:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    per_site = tuple(site_gradient_sq(A, j, alpha) for j in range(A.n))
    total = np.zeros((A.dim, A.dim), dtype=complex)
    for g in per_site:
        total = total + g.matrix
    total_sq = Observable(A.n, matrix=total, hermitian=True)
    return GradientBundle(alpha, per_site, total_sq, operator_abs_power(total_sq, 0.5))


def gradient_norm(A: Observable, alpha: float, p: float) -> float:
    """``‖ |∇^α A| ‖_p``."""
    return schatten_norm(alpha_gradient(A, alpha).total_abs, p)


# -- influences and local variance ------------------------------------------


def influence(A: Observable, J, p: float) -> float:
    """``Inf_J^p[A] = ‖d_J A‖_p^p`` (for ``p = inf`` the operator norm is returned)."""
    J = _mask(A, J)
    p = float(p)
    if not p >= 1:
        raise ValueError(f"influence exponent must be >= 1, got {p}")
    if p == 2:
        return float(np.sum(np.abs(A.coeffs[support_contains(A.n, J.members)]) ** 2))
    dA = derivative(A, J)
    if math.isinf(p):
        return schatten_norm(dA, p)
    return schatten_power(dA, p)


def _v_fourier(A: Observable, J: SubsetMask) -> float:
    lv = levels(A.n)
    mask = support_contains(A.n, J.members)
    return float(np.sum(np.abs(A.coeffs[mask]) ** 2 / lv[mask]))


def _sq_norm2(m: np.ndarray) -> float:
    return float(np.sum(np.abs(m) ** 2) / m.shape[0])


def _v_quadrature(A: Observable, J: SubsetMask, eps: float) -> float:
    inf2 = _sq_norm2(derivative_dense(A, J).matrix)
    if inf2 == 0.0:
        return 0.0
    k = J.k
    # tail beyond T is at most ∫_T^∞ 2 e^{-2ks} Inf_J² ds = e^{-2kT} Inf_J² / k
    horizon = max(math.log(2.0 * inf2 / (k * eps)) / (2.0 * k), 0.0)

    def integrand(t: float) -> float:
        return 2.0 * _sq_norm2(derivative_dense(semigroup_apply_dense(A, t), J).matrix)

    return adaptive_simpson(integrand, 0.0, horizon, tol=eps * 1e-3)


def v_functional(A: Observable, J, method: str = "fourier", eps: float = EPS_QUAD) -> float:
    """Local variance ``V_J(A) = ∫_0^∞ 2 Inf_J²[P_t A] dt``.

    ``method="fourier"`` evaluates ``Σ_{J⊆supp s} |Â_s|²/|supp s|``;
    ``method="quadrature"`` integrates the dense semigroup orbit numerically.
    """
    J = _mask(A, J)
    if J.k == 0:
        raise ValueError("V_J needs a nonempty subset")
    if method == "fourier":
        return _v_fourier(A, J)
    if method == "quadrature":
        return _v_quadrature(A, J, eps)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class FourierWeights:
    exact: np.ndarray  # W^{=d}, d = 0..n
    tails: np.ndarray  # W^{>=k}, k = 0..n

    def at_least(self, k: int) -> float:
        return float(self.tails[k]) if k < len(self.tails) else 0.0


def fourier_weights(A: Observable) -> FourierWeights:
    sq = np.abs(A.coeffs) ** 2
    exact = np.bincount(np.ravel(levels(A.n)), weights=np.ravel(sq), minlength=A.n + 1)
    tails = np.cumsum(exact[::-1])[::-1]
    return FourierWeights(exact, tails)


def log_ratio(A: Observable, q: float) -> float:
    """``R(A,q) = (q/(2−q)) max{ln(Var/‖A−τA‖_q²), ln(Var/Σ_j ‖d_j A‖_q²)}`` (unclamped)."""
    if not 1.0 <= q < 2.0:
        raise ValueError(f"q must lie in [1, 2), got {q}")
    var = variance(A)
    if var <= 0.0:
        raise ValueError("log ratio undefined for Var(A) = 0")
    centered = A - A.trace()
    first = math.log(var / schatten_norm(centered, q) ** 2)
    grad = sum(schatten_norm(derivative(A, j), q) ** 2 for j in range(A.n))
    second = math.log(var / grad)
    return q / (2.0 - q) * max(first, second)


def log_ratio_clamped(A: Observable, q: float) -> float:
    return max(log_ratio(A, q), 0.0)


def log_plus(x: float) -> float:
    """``ln⁺(x) = max(ln x, 0)`` with ``ln⁺(0) = 0``."""
    return math.log(x) if x > 1.0 else 0.0
