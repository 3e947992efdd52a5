"""Dense operator algebra on n qubits.

Operators live in ``M_2(C)^{⊗n}`` with the normalized trace ``τ = 2^{-n} tr``.
An :class:`Observable` holds a dense ``2^n x 2^n`` matrix and/or the ``4^n``
Pauli-Fourier coefficients; whichever side is missing is computed on first use
and cached.

Conventions
-----------
* Qubit 0 is the leftmost Kronecker factor (most significant bit of the
  computational-basis index).
* Pauli strings are indexed by ``s ∈ {0,1,2,3}^n`` with ``σ_0 = I, σ_1 = X,
  σ_2 = Y, σ_3 = Z``. Coefficient arrays have shape ``(4,) * n`` so that
  ``coeffs[s]`` is ``Â_s``; flattening in C order gives the base-4 index
  with ``s_0`` most significant.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

MAX_QUBITS = 12
RT_TOL = 1e-10
EIG_TOL = 1e-10
PSD_TOL = 1e-9

PAULIS = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
_LABELS = "IXYZ"

# analysis[x, 2a+b] = (σ_x)_{ba} / 2  so that  c_x = τ(σ_x A) on one qubit
_ANALYSIS = np.array([PAULIS[x].T.reshape(4) / 2 for x in range(4)])
# synthesis[2a+b, x] = (σ_x)_{ab}
_SYNTHESIS = np.array([PAULIS[x].reshape(4) for x in range(4)]).T


class DimensionError(ValueError):
    """Raised when array shapes do not match the declared qubit count."""


def _check_n(n: int) -> int:
    n = int(n)
    if n < 0 or n > MAX_QUBITS:
        raise DimensionError(f"qubit count must be in [0, {MAX_QUBITS}], got {n}")
    return n


@lru_cache(maxsize=None)
def levels(n: int) -> np.ndarray:
    """Array of shape ``(4,)*n`` holding ``|supp(s)|`` for every Pauli string."""
    grids = np.indices((4,) * n) if n else np.zeros((0,), dtype=int)
    if n == 0:
        out = np.zeros((), dtype=int)
    else:
        out = (grids != 0).sum(axis=0)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def support_contains(n: int, J: frozenset) -> np.ndarray:
    """Boolean mask over Pauli strings: ``J ⊆ supp(s)``."""
    mask = np.ones((4,) * n, dtype=bool)
    for j in J:
        idx = [slice(None)] * n
        idx[j] = 0
        mask[tuple(idx)] = False
    mask.setflags(write=False)
    return mask


def _apply_per_qubit(tensor: np.ndarray, mat: np.ndarray) -> np.ndarray:
    for axis in range(tensor.ndim):
        tensor = np.moveaxis(np.tensordot(mat, tensor, axes=([1], [axis])), 0, axis)
    return tensor


def _expand_matrix(matrix: np.ndarray, n: int) -> np.ndarray:
    if n == 0:
        return matrix.reshape(()).astype(complex)
    t = matrix.reshape((2,) * (2 * n))
    order = [ax for k in range(n) for ax in (k, n + k)]
    t = t.transpose(order).reshape((4,) * n)
    return _apply_per_qubit(t, _ANALYSIS)


def _synthesize_coeffs(coeffs: np.ndarray, n: int) -> np.ndarray:
    if n == 0:
        return coeffs.reshape(1, 1).astype(complex)
    t = _apply_per_qubit(coeffs.astype(complex), _SYNTHESIS)
    t = t.reshape((2,) * (2 * n))
    inverse = [2 * k for k in range(n)] + [2 * k + 1 for k in range(n)]
    return t.transpose(inverse).reshape(2**n, 2**n)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PauliString:
    """Multi-index ``s ∈ {0,1,2,3}^n`` addressing one Fourier coefficient."""

    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(e) for e in self.entries)
        if any(e not in (0, 1, 2, 3) for e in entries):
            raise ValueError(f"Pauli entries must lie in {{0,1,2,3}}, got {entries}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse a label such as ``"ZIX"`` (or digits, ``"301"``)."""
        out = []
        for ch in label.strip().upper():
            if ch in _LABELS:
                out.append(_LABELS.index(ch))
            elif ch in "0123":
                out.append(int(ch))
            else:
                raise ValueError(f"bad Pauli label character {ch!r}")
        return cls(tuple(out))

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def support(self) -> frozenset:
        return frozenset(j for j, e in enumerate(self.entries) if e)

    @property
    def level(self) -> int:
        return sum(1 for e in self.entries if e)

    @property
    def label(self) -> str:
        return "".join(_LABELS[e] for e in self.entries)

    def __str__(self) -> str:
        return self.label


class Observable:
    """An n-qubit operator in dual (matrix / Pauli coefficient) representation.

    Instances are treated as immutable: the stored arrays are read-only and the
    lazily computed side is cached. Populate both sides (touch ``.matrix`` and
    ``.coeffs``) before sharing an instance across threads.
    """

    __slots__ = ("n", "_matrix", "_coeffs", "_hermitian", "_svals", "_eigh")

    def __init__(self, n: int, matrix=None, coeffs=None, hermitian: bool | None = None):
        self.n = _check_n(n)
        dim = 2**self.n
        if matrix is None and coeffs is None:
            raise ValueError("need a matrix or a coefficient array")
        if matrix is not None:
            matrix = np.asarray(matrix)
            if matrix.shape != (dim, dim):
                raise DimensionError(f"expected a {dim}x{dim} matrix, got {matrix.shape}")
            matrix = _frozen(matrix)
        if coeffs is not None:
            coeffs = np.asarray(coeffs)
            if coeffs.size != 4**self.n:
                raise DimensionError(f"expected {4 ** self.n} coefficients, got {coeffs.size}")
            coeffs = _frozen(coeffs.reshape((4,) * self.n))
        self._matrix = matrix
        self._coeffs = coeffs
        self._hermitian = hermitian
        self._svals = None
        self._eigh = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_matrix(cls, matrix, hermitian: bool | None = None) -> "Observable":
        matrix = np.asarray(matrix)
        dim = matrix.shape[0]
        n = int(round(np.log2(dim))) if dim > 0 else -1
        if dim != 2**n or matrix.ndim != 2 or matrix.shape[1] != dim:
            raise DimensionError(f"matrix shape {matrix.shape} is not 2^n x 2^n")
        return cls(n, matrix=matrix, hermitian=hermitian)

    @classmethod
    def from_coeffs(cls, coeffs, n: int | None = None, hermitian: bool | None = None) -> "Observable":
        coeffs = np.asarray(coeffs)
        if n is None:
            n = int(round(np.log(coeffs.size) / np.log(4))) if coeffs.size > 1 else 0
        if coeffs.size != 4**n:
            raise DimensionError(f"{coeffs.size} coefficients do not match n={n}")
        return cls(n, coeffs=coeffs, hermitian=hermitian)

    @classmethod
    def identity(cls, n: int) -> "Observable":
        return cls(n, matrix=np.eye(2**n), hermitian=True)

    @classmethod
    def scalar(cls, n: int, c: complex) -> "Observable":
        return cls(n, matrix=c * np.eye(2**n), hermitian=bool(np.isreal(c)))

    # -- representations --------------------------------------------------
    @property
    def dim(self) -> int:
        return 2**self.n

    @property
    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            self._matrix = _frozen(_synthesize_coeffs(self._coeffs, self.n))
        return self._matrix

    @property
    def coeffs(self) -> np.ndarray:
        if self._coeffs is None:
            self._coeffs = _frozen(_expand_matrix(self._matrix, self.n))
        return self._coeffs

    def coefficient(self, s: PauliString | Sequence[int]) -> complex:
        entries = s.entries if isinstance(s, PauliString) else tuple(s)
        if len(entries) != self.n:
            raise DimensionError("Pauli string length does not match n")
        return complex(self.coeffs[entries])

    @property
    def hermitian(self) -> bool:
        if self._hermitian is None:
            m = self.matrix
            self._hermitian = bool(np.linalg.norm(m - m.conj().T) <= RT_TOL * max(1.0, np.abs(m).max()))
        return self._hermitian

    def trace(self) -> complex:
        """Normalized trace ``τ(A)``."""
        if self._coeffs is not None:
            return complex(self._coeffs[(0,) * self.n])
        return complex(np.trace(self._matrix) / self.dim)

    # -- spectral data ----------------------------------------------------
    def eigh(self) -> "SpectralDecomp":
        if not self.hermitian:
            raise ValueError("eigendecomposition requested for a non-Hermitian operator")
        if self._eigh is None:
            m = self.matrix
            w, v = np.linalg.eigh((m + m.conj().T) / 2)
            self._eigh = SpectralDecomp(w, v)
        return self._eigh

    def singular_values(self) -> np.ndarray:
        if self._svals is None:
            if self.hermitian:
                s = np.abs(self.eigh().eigenvalues)
            else:
                s = np.linalg.svd(self.matrix, compute_uv=False)
            s = np.sort(s)
            s.setflags(write=False)
            self._svals = s
        return self._svals

    # -- algebra ----------------------------------------------------------
    def adjoint(self) -> "Observable":
        if self._coeffs is not None and self._matrix is None:
            # σ_s are Hermitian, so (Σ c_s σ_s)* = Σ conj(c_s) σ_s
            return Observable(self.n, coeffs=self._coeffs.conj(), hermitian=self._hermitian)
        return Observable(self.n, matrix=self.matrix.conj().T, hermitian=self._hermitian)

    def multiplier(self, factors: np.ndarray) -> "Observable":
        """Apply a Fourier multiplier ``Â_s ↦ m_s Â_s``."""
        factors = np.asarray(factors)
        herm = self._hermitian if np.isrealobj(factors) else None
        return Observable(self.n, coeffs=self.coeffs * factors, hermitian=herm)

    def _coerce(self, other) -> "Observable":
        if isinstance(other, Observable):
            if other.n != self.n:
                raise DimensionError("qubit counts differ")
            return other
        return Observable.scalar(self.n, other)

    def _combine(self, other, sign: float) -> "Observable":
        other = self._coerce(other)
        herm = self._hermitian and other._hermitian if None not in (self._hermitian, other._hermitian) else None
        if self._matrix is None and other._matrix is None:
            return Observable(self.n, coeffs=self._coeffs + sign * other._coeffs, hermitian=herm)
        return Observable(self.n, matrix=self.matrix + sign * other.matrix, hermitian=herm)

    def __add__(self, other):
        return self._combine(other, 1.0)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __rsub__(self, other):
        return (-self)._combine(other, 1.0)

    def __neg__(self):
        return self * -1.0

    def __mul__(self, c):
        if isinstance(c, Observable):
            raise TypeError("use @ for operator products")
        herm = self._hermitian if np.isreal(c) else None
        if self._matrix is None:
            return Observable(self.n, coeffs=self._coeffs * c, hermitian=herm)
        return Observable(self.n, matrix=self.matrix * c, hermitian=herm)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1.0 / c)

    def __matmul__(self, other: "Observable") -> "Observable":
        other = self._coerce(other)
        return Observable(self.n, matrix=self.matrix @ other.matrix)

    def sq_abs(self) -> "Observable":
        """``|A|^2 = A^* A`` (PSD)."""
        m = self.matrix
        return Observable(self.n, matrix=m.conj().T @ m, hermitian=True)

    def allclose(self, other: "Observable", atol: float = RT_TOL) -> bool:
        return bool(np.abs(self.matrix - self._coerce(other).matrix).max() <= atol)

    def __repr__(self) -> str:
        return f"Observable(n={self.n}, hermitian={self._hermitian})"


@dataclass(frozen=True)
class SpectralDecomp:
    """Eigen-decomposition ``A = U diag(λ) U^*`` of a Hermitian operator."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T

    def apply(self, fn) -> np.ndarray:
        u = self.eigenvectors
        return (u * fn(self.eigenvalues)) @ u.conj().T


# -- operations -------------------------------------------------------------


def pauli_matrix(s: PauliString | Sequence[int]) -> Observable:
    """The Pauli string operator ``σ_s = σ_{s_0} ⊗ ... ⊗ σ_{s_{n-1}}``."""
    s = s if isinstance(s, PauliString) else PauliString(tuple(s))
    m = np.ones((1, 1), dtype=complex)
    for e in s.entries:
        m = np.kron(m, PAULIS[e])
    coeffs = np.zeros((4,) * s.n, dtype=complex)
    coeffs[s.entries] = 1.0
    return Observable(s.n, matrix=m, coeffs=coeffs, hermitian=True)


def fourier_expand(A: Observable) -> np.ndarray:
    """Coefficients ``Â_s = τ(σ_s A)`` as an array of shape ``(4,)*n``."""
    return A.coeffs


def fourier_synthesize(coeffs, n: int) -> Observable:
    """Assemble ``Σ_s Â_s σ_s`` densely.

    ``coeffs`` is a ``(4,)*n`` array or a sparse map from Pauli strings (or
    index tuples) to coefficients.
    """
    if isinstance(coeffs, dict):
        dense = np.zeros((4,) * n, dtype=complex)
        for s, c in coeffs.items():
            s = s.entries if isinstance(s, PauliString) else tuple(s)
            if len(s) != n:
                raise DimensionError(f"string {s} has length {len(s)}, expected {n}")
            dense[s] += c
        coeffs = dense
    coeffs = np.asarray(coeffs)
    if coeffs.size != 4**n:
        raise DimensionError(f"{coeffs.size} coefficients supplied for n={n}")
    herm = bool(np.all(np.abs(np.imag(coeffs)) <= RT_TOL))
    A = Observable(n, coeffs=coeffs, hermitian=herm)
    A.matrix  # noqa: B018 - force the dense side
    return A


def op_norm(A: Observable) -> float:
    return float(A.singular_values()[-1]) if A.dim else 0.0


def schatten_norm(A: Observable, p: float) -> float:
    """Normalized Schatten norm ``τ(|A|^p)^{1/p}``; ``p=inf`` is the operator norm."""
    p = float(p)
    if not p >= 1:
        raise ValueError(f"Schatten exponent must be >= 1, got {p}")
    s = A.singular_values()
    if np.isinf(p):
        return float(s[-1])
    top = s[-1]
    if top == 0:
        return 0.0
    # factor out the largest singular value to avoid under/overflow
    return float(top * np.mean((s / top) ** p) ** (1.0 / p))


def schatten_power(A: Observable, p: float) -> float:
    """``‖A‖_p^p = τ(|A|^p)`` computed without the final root."""
    p = float(p)
    if not p >= 1 or np.isinf(p):
        raise ValueError(f"finite exponent >= 1 required, got {p}")
    return float(np.mean(A.singular_values() ** p))


def operator_abs_power(A: Observable, r: float) -> Observable:
    """``|A|^r = (A^*A)^{r/2}`` via Hermitian spectral calculus."""
    if not r > 0:
        raise ValueError("power must be positive")
    if A.hermitian:
        dec = A.eigh()
        m = dec.apply(lambda w: np.abs(w) ** r)
    else:
        G = A.sq_abs()
        dec = G.eigh()
        m = dec.apply(lambda w: np.clip(w, 0.0, None) ** (r / 2))
    m = (m + m.conj().T) / 2
    return Observable(A.n, matrix=m, hermitian=True)


def spectral_decomp(A: Observable) -> SpectralDecomp:
    return A.eigh()


def psd_margin(A: Observable) -> float:
    """Smallest eigenvalue of a Hermitian operator."""
    if not A.hermitian:
        raise ValueError("psd_margin requires a Hermitian operator")
    return float(A.eigh().eigenvalues[0])


def psd_scale(*ops: Observable) -> float:
    return max([1.0] + [op_norm(X) for X in ops])


def is_psd(A: Observable, eps: float = PSD_TOL) -> bool:
    return psd_margin(A) >= -eps * max(1.0, op_norm(A))


def all_pauli_strings(n: int) -> Iterable[PauliString]:
    for idx in np.ndindex(*((4,) * n)):
        yield PauliString(idx)


def basis_state(bits: str) -> np.ndarray:
    """Computational basis ket ``|b_0 b_1 ...⟩`` as a vector."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def projector(vec: np.ndarray) -> Observable:
    vec = np.asarray(vec, dtype=complex)
    vec = vec / np.linalg.norm(vec)
    return Observable.from_matrix(np.outer(vec, vec.conj()), hermitian=True)


def bell_projector(n: int = 2) -> Observable:
    """``|Φ⁺⟩⟨Φ⁺|`` on qubits 0,1 (tensored with the identity on the rest)."""
    if n < 2:
        raise ValueError("the Bell projector needs n >= 2")
    phi = (basis_state("00") + basis_state("11")) / np.sqrt(2)
    m = np.outer(phi, phi.conj())
    m = np.kron(m, np.eye(2 ** (n - 2)))
    return Observable(n, matrix=m, hermitian=True)
