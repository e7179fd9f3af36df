"""Dense bipartite operator algebra, spectra and entropies.

Operators live on ``C^d1 (x) C^d2`` in the product basis ``|ij>``, flattened
row-major (``(i, j) -> i*d2 + j``).  All entropies use the natural logarithm
unless ``base`` is given; ``base=2`` returns bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DimensionMismatch, DomainError, InputError, NotAState, NotHermitian

#: eigenvalues of the second argument below this count as outside its support
SUPPORT_CUTOFF = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Operator:
    """Square matrix on a bipartite space with an immutable split ``(d1, d2)``."""

    dims: tuple[int, int]
    mat: np.ndarray = field(repr=False)

    def __post_init__(self):
        d1, d2 = (int(x) for x in self.dims)
        if d1 < 1 or d2 < 1:
            raise InputError(f"dimensions must be positive, got {self.dims}")
        m = _frozen(self.mat)
        n = d1 * d2
        if m.shape != (n, n):
            raise DimensionMismatch(f"expected a {n}x{n} matrix for dims {(d1, d2)}, got {m.shape}")
        object.__setattr__(self, "dims", (d1, d2))
        object.__setattr__(self, "mat", m)

    @classmethod
    def identity(cls, d1: int, d2: int = 1) -> "Operator":
        return cls((d1, d2), np.eye(d1 * d2))

    @property
    def size(self) -> int:
        return self.dims[0] * self.dims[1]

    def dag(self) -> "Operator":
        return Operator(self.dims, self.mat.conj().T)

    def trace(self) -> complex:
        return complex(np.trace(self.mat))

    def expect(self, other: "OperatorLike") -> complex:
        """``tr(self @ other)``."""
        b = as_matrix(other)
        return complex(np.einsum("ij,ji->", self.mat, b))

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.mat - self.mat.conj().T), initial=0.0) <= tol)

    def _check(self, other: "Operator") -> None:
        if self.dims != other.dims:
            raise DimensionMismatch(f"{self.dims} vs {other.dims}")

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.dims, self.mat @ other.mat)

    def __add__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.dims, self.mat + other.mat)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.dims, self.mat - other.mat)

    def __mul__(self, scalar: complex) -> "Operator":
        return Operator(self.dims, self.mat * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "Operator":
        return Operator(self.dims, self.mat / scalar)

    def __neg__(self) -> "Operator":
        return Operator(self.dims, -self.mat)

    def allclose(self, other: "OperatorLike", atol: float = 1e-10) -> bool:
        return bool(np.allclose(self.mat, as_matrix(other), atol=atol, rtol=0))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite operator."""

    op: Operator
    psd_tolerance: float = 1e-9

    def __post_init__(self):
        m = self.op.mat
        herm = float(np.max(np.abs(m - m.conj().T), initial=0.0))
        if herm > 1e-12:
            raise NotAState(f"not Hermitian (residual {herm:.3g})")
        tr = np.trace(m).real
        if abs(tr - 1.0) > 1e-12:
            raise NotAState(f"trace is {tr!r}, not 1")
        lo = float(np.linalg.eigvalsh(m)[0])
        if lo < -self.psd_tolerance:
            raise NotAState(f"minimum eigenvalue {lo:.3g} below -{self.psd_tolerance:g}")

    @classmethod
    def from_matrix(cls, m, dims: tuple[int, int] | None = None, *, normalize: bool = False,
                    psd_tolerance: float = 1e-9) -> "DensityMatrix":
        """Build from a raw matrix; Hermitian part is taken to kill round-off."""
        m = np.asarray(m, dtype=complex)
        if dims is None:
            dims = (m.shape[0], 1)
        m = (m + m.conj().T) / 2
        if normalize:
            m = m / np.trace(m).real
        return cls(Operator(dims, m), psd_tolerance)

    @classmethod
    def pure(cls, psi: "PureStateVector | np.ndarray", dims: tuple[int, int] | None = None) -> "DensityMatrix":
        if isinstance(psi, PureStateVector):
            dims, v = psi.dims, psi.amplitudes
        else:
            v = np.asarray(psi, dtype=complex)
            v = v / np.linalg.norm(v)
        return cls.from_matrix(np.outer(v, v.conj()), dims)

    @property
    def dims(self) -> tuple[int, int]:
        return self.op.dims

    @property
    def mat(self) -> np.ndarray:
        return self.op.mat


@dataclass(frozen=True, eq=False)
class PureStateVector:
    """Unit vector with components ``Phi[i, j]`` on ``C^d1 (x) C^d2``."""

    dims: tuple[int, int]
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        d1, d2 = self.dims
        v = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if v.size != d1 * d2:
            raise DimensionMismatch(f"expected {d1 * d2} amplitudes, got {v.size}")
        nrm = np.linalg.norm(v)
        if abs(nrm - 1.0) > 1e-12:
            raise InputError(f"vector norm is {nrm!r}, not 1")
        v.setflags(write=False)
        object.__setattr__(self, "dims", (int(d1), int(d2)))
        object.__setattr__(self, "amplitudes", v)

    @classmethod
    def normalized(cls, dims: tuple[int, int], v) -> "PureStateVector":
        v = np.asarray(v, dtype=complex).reshape(-1)
        return cls(dims, v / np.linalg.norm(v))

    def coefficient_matrix(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)


OperatorLike = Union[Operator, DensityMatrix, np.ndarray]


def as_matrix(a: OperatorLike) -> np.ndarray:
    if isinstance(a, (Operator, DensityMatrix)):
        return a.mat
    return np.asarray(a, dtype=complex)


def _log_scale(base) -> float:
    if base is None or base == "e":
        return 1.0
    if isinstance(base, str):
        base = {"nats": math.e, "bits": 2.0}[base]
    return 1.0 / math.log(base)


def _eta(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    pos = p > 0
    out[pos] = -p[pos] * np.log(p[pos])
    return out


def eta(t: float) -> float:
    """``-t log t`` with ``eta(0) = 0``."""
    return float(_eta(np.array([t]))[0])


def shannon_entropy(probs, base=None) -> float:
    return float(np.sum(_eta(np.clip(probs, 0.0, None)))) * _log_scale(base)


# -- products and transposes ------------------------------------------------

def kron(a: Operator, b: Operator) -> Operator:
    """Plain Kronecker product ``H1 H2 K1 K2``, split after ``H1 H2``."""
    return Operator((a.size, b.size), np.kron(a.mat, b.mat))


def tensor(a: Operator, b: Operator, *, sort: bool = True) -> Operator:
    """Tensor product of two bipartite operators.

    With ``sort=True`` (default) the factors are regrouped into the
    Alice-Bob split ``(H1 K1) | (H2 K2)``: the result has dims
    ``(a1*b1, a2*b2)``.  ``sort=False`` is :func:`kron`.
    """
    if not sort:
        return kron(a, b)
    (a1, a2), (b1, b2) = a.dims, b.dims
    t = np.kron(a.mat, b.mat).reshape(a1, a2, b1, b2, a1, a2, b1, b2)
    t = t.transpose(0, 2, 1, 3, 4, 6, 5, 7)
    n = a1 * a2 * b1 * b2
    return Operator((a1 * b1, a2 * b2), t.reshape(n, n))


def tensor_vectors(u: np.ndarray, v: np.ndarray, dims_u, dims_v) -> np.ndarray:
    """Alice-Bob sorted tensor product of two bipartite vectors."""
    (a1, a2), (b1, b2) = dims_u, dims_v
    t = np.kron(u, v).reshape(a1, a2, b1, b2).transpose(0, 2, 1, 3)
    return t.reshape(-1)


def partial_transpose(a: OperatorLike, dims: tuple[int, int] | None = None) -> Operator:
    """Transpose on the second tensor factor: ``<ij|T(A)|kl> = <il|A|kj>``."""
    if isinstance(a, (Operator, DensityMatrix)):
        dims = a.dims
    m = as_matrix(a)
    if dims is None:
        raise InputError("dims required for a raw matrix")
    d1, d2 = dims
    t = m.reshape(d1, d2, d1, d2).transpose(0, 3, 2, 1).reshape(d1 * d2, d1 * d2)
    return Operator((d1, d2), t)


# -- spectra ------------------------------------------------------------------

def _hermitian_check(m: np.ndarray, tol: float) -> None:
    res = float(np.max(np.abs(m - m.conj().T), initial=0.0))
    if res > tol:
        raise NotHermitian(f"Hermiticity residual {res:.3g} exceeds {tol:g}")


def hermitian_spectrum(a: OperatorLike, tol: float = 1e-10) -> np.ndarray:
    """Real eigenvalues in ascending order."""
    m = as_matrix(a)
    _hermitian_check(m, tol)
    return np.linalg.eigvalsh((m + m.conj().T) / 2)


def hermitian_eig(a: OperatorLike, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and the matching orthonormal eigenvectors (columns)."""
    m = as_matrix(a)
    _hermitian_check(m, tol)
    return np.linalg.eigh((m + m.conj().T) / 2)


def von_neumann_entropy(rho: OperatorLike, base=None) -> float:
    """``S(rho) = sum eta(lambda_k)``."""
    lam = hermitian_spectrum(rho)
    return float(np.sum(_eta(np.clip(lam, 0.0, None)))) * _log_scale(base)


def relative_entropy(rho: OperatorLike, sigma: OperatorLike, base=None) -> float:
    """``tr rho (log rho - log sigma)``; ``inf`` when supp(rho) is not inside supp(sigma)."""
    r, s = as_matrix(rho), as_matrix(sigma)
    if r.shape != s.shape:
        raise DimensionMismatch(f"{r.shape} vs {s.shape}")
    lam = np.clip(hermitian_spectrum(r), 0.0, None)
    mu, vecs = hermitian_eig(s)
    # weight of rho along each eigenvector of sigma
    w = np.real(np.einsum("ik,ij,jk->k", vecs.conj(), r, vecs))
    off = mu < SUPPORT_CUTOFF
    if np.any(w[off] > SUPPORT_CUTOFF):
        return math.inf
    cross = float(np.sum(w[~off] * np.log(mu[~off])))
    return (-float(np.sum(_eta(lam))) - cross) * _log_scale(base)


# -- special operators ------------------------------------------------------

def flip_operator(d: int) -> Operator:
    """Swap ``F = sum_ij |ij><ji|`` on ``C^d (x) C^d``."""
    if d < 1:
        raise InputError("d must be >= 1")
    m = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            m[i * d + j, j * d + i] = 1.0
    return Operator((d, d), m)


def phihat_operator(d: int) -> Operator:
    """``sum_ij |ii><jj|``, i.e. ``|Phi><Phi|`` for the unnormalized ``Phi = sum_i |ii>``."""
    if d < 1:
        raise InputError("d must be >= 1")
    phi = np.zeros(d * d)
    phi[[i * d + i for i in range(d)]] = 1.0
    return Operator((d, d), np.outer(phi, phi))


def binary_entropy(p: float, base=None) -> float:
    """``H2(p) = eta(p) + eta(1 - p)``."""
    if p < -1e-12 or p > 1 + 1e-12 or math.isnan(p):
        raise DomainError(f"p={p!r} outside [0, 1]")
    p = min(max(p, 0.0), 1.0)
    return (eta(p) + eta(1.0 - p)) * _log_scale(base)


def schmidt_coefficients(psi: "PureStateVector | np.ndarray", dims=None) -> np.ndarray:
    """Eigenvalues of the reduced state ``Phi Phi^*``, descending."""
    if isinstance(psi, PureStateVector):
        dims, v = psi.dims, psi.amplitudes
    else:
        v = np.asarray(psi, dtype=complex)
    s = np.linalg.svd(np.reshape(v, dims), compute_uv=False)
    return s**2


def schmidt_entanglement(psi: "PureStateVector | np.ndarray", base=None, dims=None) -> float:
    """Entropy of entanglement of a pure state (entropy of its reduced state)."""
    c = schmidt_coefficients(psi, dims)
    return float(np.sum(_eta(c / c.sum()))) * _log_scale(base)
