"""Walsh-Fourier analysis on the discrete cube {±1}^n and the improved
Talagrand chain built on the local energies ``V_i``.

A function is stored as a truth table of length ``2^n``. Index bit ``j``
(most significant first) encodes coordinate ``j``; bit value 1 means
``x_j = -1``. Walsh coefficients use the same subset indexing, so
``χ_S(x) = (-1)^{popcount(S & x)}`` and the diagonal embedding sends ``χ_S`` to
the Pauli string with ``Z`` on ``S``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .constants import classical_crude, classical_gap
from .quadrature import adaptive_simpson
from .records import CheckRecord, TOL_SCALAR, scalar_record, skipped_record

_H = np.array([[1.0, 1.0], [1.0, -1.0]])

CLASSICAL_LAWS = ("A1", "A2", "A3", "A3'", "A4", "A5", "A6")


def _per_axis(table: np.ndarray, n: int, mat: np.ndarray) -> np.ndarray:
    t = np.asarray(table, dtype=float).reshape((2,) * n)
    for axis in range(n):
        t = np.moveaxis(np.tensordot(mat, t, axes=([1], [axis])), 0, axis)
    return t.reshape(-1)


@lru_cache(maxsize=None)
def subset_sizes(n: int) -> np.ndarray:
    idx = np.arange(2**n)
    out = np.array([bin(i).count("1") for i in idx], dtype=int)
    out.setflags(write=False)
    return out


def _bit(n: int, i: int) -> int:
    return 1 << (n - 1 - i)


@lru_cache(maxsize=None)
def _contains(n: int, i: int) -> np.ndarray:
    out = (np.arange(2**n) & _bit(n, i)) != 0
    out.setflags(write=False)
    return out


def walsh_transform(table, n: int) -> np.ndarray:
    """``f̂(S) = E[f χ_S]`` via the Sylvester-Hadamard fast transform."""
    return _per_axis(table, n, _H) / 2**n


def inverse_walsh(coeffs, n: int) -> np.ndarray:
    return _per_axis(coeffs, n, _H)


@dataclass(frozen=True)
class BooleanFn:
    """A real function on ``{±1}^n`` as truth table plus Walsh coefficients."""

    n: int
    table: np.ndarray
    walsh: np.ndarray

    @classmethod
    def from_table(cls, table) -> "BooleanFn":
        table = np.asarray(table, dtype=float).reshape(-1).copy()
        n = int(round(math.log2(table.size))) if table.size else -1
        if n < 0 or table.size != 2**n:
            raise ValueError(f"truth table length {table.size} is not a power of two")
        table.setflags(write=False)
        walsh = walsh_transform(table, n)
        walsh.setflags(write=False)
        return cls(n, table, walsh)

    @classmethod
    def from_walsh(cls, coeffs) -> "BooleanFn":
        coeffs = np.asarray(coeffs, dtype=float).reshape(-1)
        n = int(round(math.log2(coeffs.size)))
        return cls.from_table(inverse_walsh(coeffs, n))

    @classmethod
    def from_callable(cls, n: int, fn) -> "BooleanFn":
        return cls.from_table([fn(point(n, idx)) for idx in range(2**n)])

    def coefficient(self, S) -> float:
        return float(self.walsh[subset_index(self.n, S)])

    @property
    def mean(self) -> float:
        return float(self.walsh[0])

    def centered(self) -> "BooleanFn":
        return BooleanFn.from_table(self.table - self.mean)


def point(n: int, idx: int) -> np.ndarray:
    """The cube point ``x ∈ {±1}^n`` addressed by table index ``idx``."""
    bits = [(idx >> (n - 1 - j)) & 1 for j in range(n)]
    return np.array([-1.0 if b else 1.0 for b in bits])


def subset_index(n: int, S) -> int:
    out = 0
    for j in S:
        out |= _bit(n, j)
    return out


def character(n: int, S) -> BooleanFn:
    coeffs = np.zeros(2**n)
    coeffs[subset_index(n, S)] = 1.0
    return BooleanFn.from_walsh(coeffs)


def majority(n: int = 3) -> BooleanFn:
    if n % 2 == 0:
        raise ValueError("majority needs an odd number of voters")
    return BooleanFn.from_callable(n, lambda x: float(np.sign(x.sum())))


def dictator(n: int, i: int) -> BooleanFn:
    return BooleanFn.from_callable(n, lambda x: float(x[i]))


# -- calculus ---------------------------------------------------------------


def heat(f: BooleanFn, t: float) -> BooleanFn:
    """``P_t f``: multiply ``f̂(S)`` by ``e^{-t|S|}``."""
    if t < 0:
        raise ValueError("heat time must be nonnegative")
    return BooleanFn.from_walsh(f.walsh * np.exp(-t * subset_sizes(f.n)))


def heat_dense(f: BooleanFn, t: float) -> np.ndarray:
    """``P_t f`` as a product of 2x2 Markov kernels, one per coordinate."""
    keep = math.exp(-t)
    kernel = 0.5 * np.array([[1 + keep, 1 - keep], [1 - keep, 1 + keep]])
    return _per_axis(f.table, f.n, kernel)


def derivative(f: BooleanFn, i: int) -> BooleanFn:
    """``D_i f``: keep the Walsh coefficients with ``i ∈ S``."""
    return BooleanFn.from_walsh(np.where(_contains(f.n, i), f.walsh, 0.0))


def flip_derivative(table: np.ndarray, n: int, i: int) -> np.ndarray:
    """``(f(x) - f(x^{(i)}))/2`` straight from the table."""
    idx = np.arange(2**n) ^ _bit(n, i)
    return 0.5 * (table - table[idx])


def lp_norm(values, p: float) -> float:
    a = np.abs(np.asarray(values, dtype=float))
    if math.isinf(p):
        return float(a.max()) if a.size else 0.0
    top = a.max() if a.size else 0.0
    if top == 0:
        return 0.0
    return float(top * np.mean((a / top) ** p) ** (1.0 / p))


def variance(f: BooleanFn) -> float:
    return float(np.sum(f.walsh[1:] ** 2))


def influence(f: BooleanFn, i: int, p: float) -> float:
    """``‖D_i f‖_p^p``."""
    if p == 2:
        return float(np.sum(f.walsh[_contains(f.n, i)] ** 2))
    return lp_norm(derivative(f, i).table, p) ** p


@dataclass(frozen=True)
class ClassicalCalculus:
    heat: BooleanFn
    derivatives: tuple
    variance: float
    influences: tuple


def classical_calculus(f: BooleanFn, t: float = 0.0, p: float = 2.0) -> ClassicalCalculus:
    ders = tuple(derivative(f, i) for i in range(f.n))
    infl = tuple(lp_norm(d.table, p) for d in ders)
    return ClassicalCalculus(heat(f, t), ders, variance(f), infl)


def entropy(h_sq) -> float:
    """``Ent(h²) = E[h² log h²] - E[h²] log E[h²]`` with ``0 log 0 = 0``."""
    h_sq = np.asarray(h_sq, dtype=float)
    mass = float(h_sq.mean())
    if mass == 0.0:
        return 0.0
    pos = h_sq > 0
    first = float(np.sum(h_sq[pos] * np.log(h_sq[pos])) / h_sq.size)
    return first - mass * math.log(mass)


def energy(g: BooleanFn, t: float) -> float:
    """``u(t) = ‖P_t g‖_2² = Σ_S e^{-2t|S|} ĝ(S)²``."""
    return float(np.sum(np.exp(-2.0 * t * subset_sizes(g.n)) * g.walsh**2))


def energy_rate(g: BooleanFn, t: float) -> float:
    """``u'(t) = -2 Σ_S |S| e^{-2t|S|} ĝ(S)²``."""
    sizes = subset_sizes(g.n)
    return float(-2.0 * np.sum(sizes * np.exp(-2.0 * t * sizes) * g.walsh**2))


def v_i(f: BooleanFn, i: int, method: str = "fourier", eps: float = 1e-7) -> float:
    """Local energy ``V_i(f) = ∫_0^∞ 2‖D_i P_t f‖_2² dt = Σ_{S∋i} f̂(S)²/|S|``."""
    if not 0 <= i < f.n:
        raise ValueError(f"coordinate {i} outside range(0, {f.n})")
    mask = _contains(f.n, i)
    if method == "fourier":
        return float(np.sum(f.walsh[mask] ** 2 / subset_sizes(f.n)[mask]))
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    u0 = float(np.mean(flip_derivative(f.table, f.n, i) ** 2))
    if u0 == 0.0:
        return 0.0
    # the tail beyond T is at most u0 e^{-2T}
    horizon = max(0.5 * math.log(2.0 * u0 / eps), 0.0)

    def integrand(t: float) -> float:
        return 2.0 * float(np.mean(flip_derivative(heat_dense(f, t), f.n, i) ** 2))

    return adaptive_simpson(integrand, 0.0, horizon, tol=eps * 1e-3)


def g_integral(x: float, c: float, b: float, tol: float = 1e-10) -> float:
    """``G(x) = ∫_0^x 2 / (1 + c log₊(√s / b)) ds``; linear on ``[0, b²]``."""
    if x < 0:
        raise ValueError("G is defined for x >= 0")
    if b <= 0:
        raise ValueError("b must be positive")
    knee = b * b
    if x <= knee:
        return 2.0 * x
    # s = b² e^τ maps (b², x] to (0, ln(x/b²)]
    top = math.log(x / knee)
    tail = adaptive_simpson(lambda tau: math.exp(tau) / (1.0 + 0.5 * c * tau), 0.0, top, tol=tol / (2.0 * knee))
    return 2.0 * knee + 2.0 * knee * tail


def log_plus(x: float) -> float:
    return math.log(x) if x > 1.0 else 0.0


def _ratio(num: float, den: float) -> float:
    """``num/den`` for the log₊ argument; ``0/0`` counts as 0 (log₊ term vanishes)."""
    if den == 0.0:
        return 0.0 if num == 0.0 else math.inf
    return num / den


def log_sobolev_margin(f: BooleanFn) -> float:
    """``2 Σ_i ‖D_i f‖_2² − Ent(f²)`` (nonnegative by the log-Sobolev inequality)."""
    energy_sum = sum(influence(f, i, 2) for i in range(f.n))
    return 2.0 * energy_sum - entropy(f.table**2)


# -- appendix law checkers ---------------------------------------------------


def classical_check(law_id: str, f: BooleanFn, params: dict | None = None, tol: float = TOL_SCALAR) -> list[CheckRecord]:
    """Evaluate one appendix law on ``f``; returns one record per site/time."""
    params = dict(params or {})
    try:
        checker = _CHECKERS[law_id]
    except KeyError:
        raise KeyError(f"unknown classical law {law_id!r}") from None
    return checker(f, params, tol)


def _q_param(params: dict, upper_open: bool = True) -> float:
    q = float(params.get("q", 1.0))
    if not q >= 1.0 or (upper_open and q >= 2.0):
        raise ValueError(f"q must lie in [1, 2), got {q}")
    return q


def _check_a1(f, params, tol):
    q = float(params.get("q", 1.0))
    if not q >= 1.0:
        raise ValueError("q must be >= 1")
    centered = f.centered()
    out = []
    for t in params.get("t_grid", (params.get("t", 0.5),)):
        lhs = math.exp(-classical_gap(q) * t) * lp_norm(centered.table, q)
        rhs = lp_norm(heat(centered, t).table, q)
        out.append(scalar_record("A1", lhs, rhs, {"q": q, "t": t}, tol, "gap bound taken as given"))
    return out


def _check_a2(f, params, tol):
    q = _q_param(params)
    h = f.table
    if not np.any(h != 0):
        return [skipped_record("A2", {"q": q}, "h vanishes identically")]
    n2, nq = lp_norm(h, 2), lp_norm(h, q)
    rhs = 2.0 * q / (2.0 - q) * n2**2 * log_plus(_ratio(n2, nq))
    return [scalar_record("A2", entropy(h**2), rhs, {"q": q}, tol)]


def _sites(f, params):
    i = params.get("i")
    return range(f.n) if i is None else (int(i),)


def _check_a3(f, params, tol, combined=False):
    q = _q_param(params)
    law = "A3'" if combined else "A3"
    out = []
    for i in _sites(f, params):
        g = derivative(f, i)
        gq = lp_norm(g.table, q)
        for t in params.get("t_grid", (0.0, 0.25, 1.0)):
            meta = {"q": q, "i": i, "t": t}
            if gq == 0.0:
                out.append(skipped_record(law, meta, "D_i f vanishes"))
                continue
            u = energy(g, t)
            log_term = log_plus(_ratio(math.sqrt(u), gq))
            if combined:
                rhs = u * (1.0 + q / (2.0 - q) * log_term)
            else:
                rhs = 2.0 * q / (2.0 - q) * u * log_term
            out.append(scalar_record(law, -energy_rate(g, t), rhs, meta, tol))
    return out


def _check_a4(f, params, tol):
    q = _q_param(params)
    c = q / (2.0 - q)
    out = []
    for i in _sites(f, params):
        g = derivative(f, i)
        b = lp_norm(g.table, q)
        meta = {"q": q, "i": i}
        if b == 0.0:
            out.append(skipped_record("A4", meta, "D_i f vanishes"))
            continue
        out.append(scalar_record("A4", g_integral(energy(g, 0.0), c, b), v_i(f, i), meta, tol))
    return out


def _check_a5(f, params, tol):
    q = _q_param(params)
    c = float(params.get("c", q / (2.0 - q)))
    crude = classical_crude(c)
    out = []
    for i in _sites(f, params):
        g = derivative(f, i)
        b = lp_norm(g.table, q)
        if b == 0.0:
            out.append(skipped_record("A5", {"q": q, "i": i, "c": c}, "D_i f vanishes"))
            continue
        u0 = energy(g, 0.0)
        for x in (u0, 0.5 * b * b, 4.0 * b * b, 50.0 * b * b):
            rhs = g_integral(x, c, b)
            lhs = crude * x / (1.0 + c * log_plus(math.sqrt(x) / b))
            branch = "linear" if x <= b * b else "log"
            out.append(scalar_record("A5", lhs, rhs, {"q": q, "i": i, "c": c, "x": x, "branch": branch}, tol))
    return out


def _a6_term(f, i, p, q, cq):
    table = derivative(f, i).table
    np_ = lp_norm(table, p)
    nq = lp_norm(table, q)
    return np_**p / (1.0 + cq * log_plus(_ratio(np_ ** (p / 2.0), nq)))


def _check_a6(f, params, tol):
    q = _q_param(params)
    p = float(params.get("p", 1.0))
    if not 1.0 <= p <= 2.0:
        raise ValueError(f"p must lie in [1, 2], got {p}")
    if np.any(np.abs(f.table) > 1.0 + 1e-12):
        return [skipped_record("A6", {"p": p, "q": q}, "f leaves [-1, 1]")]
    cq = q / (2.0 - q)
    big_c = classical_crude(cq)
    out = []
    total = 0.0
    for i in range(f.n):
        term = _a6_term(f, i, p, q, cq)
        total += term
        if params.get("i") is None or int(params["i"]) == i:
            out.append(scalar_record("A6", big_c * term, v_i(f, i), {"p": p, "q": q, "i": i}, tol))
    if params.get("i") is None:
        out.append(scalar_record("A6", big_c * total, variance(f), {"p": p, "q": q, "form": "summed"}, tol))
    return out


_CHECKERS = {
    "A1": _check_a1,
    "A2": _check_a2,
    "A3": _check_a3,
    "A3'": lambda f, p, t: _check_a3(f, p, t, combined=True),
    "A4": _check_a4,
    "A5": _check_a5,
    "A6": _check_a6,
}


def random_table(rng: np.random.Generator, n: int, boolean: bool = False) -> BooleanFn:
    """Uniform table in ``[-1, 1]``; ``boolean=True`` thresholds it to ``±1``."""
    vals = rng.uniform(-1.0, 1.0, size=2**n)
    if boolean:
        vals = np.where(vals >= 0.0, 1.0, -1.0)
    return BooleanFn.from_table(vals)
