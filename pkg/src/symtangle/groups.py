"""Local symmetry groups, their commutants, and the twirl projection.

A :class:`GroupSpec` names a family of local unitaries ``U1 (x) U2``.  For each
family we know a finite basis of the commutant (the operators commuting with
every group element); the twirl is the Hilbert-Schmidt orthogonal projection
onto that span, so no group integration is needed at run time.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, InputError, NotAState, Unsupported
from .opcore import (
    DensityMatrix,
    Operator,
    OperatorLike,
    as_matrix,
    flip_operator,
    partial_transpose,
    phihat_operator,
    tensor,
)

FAMILIES = ("UU", "UUbar", "OO", "Bell", "Weyl", "WeylTilde", "SU2", "Tensor", "TensorFlip")

PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _spin(j) -> Fraction:
    s = Fraction(j).limit_denominator(2)
    if s < 0 or (2 * s).denominator != 1:
        raise InputError(f"spin must be a non-negative half-integer, got {j!r}")
    return s


@dataclass(frozen=True)
class GroupSpec:
    """Descriptor of a symmetry family.

    Use the classmethod constructors (``GroupSpec.uu(3)``, ``GroupSpec.tensor(g, h)``, ...)
    rather than filling the fields by hand.
    """

    family: str
    d: Optional[int] = None
    j1: Optional[Fraction] = None
    j2: Optional[Fraction] = None
    factors: Optional[tuple["GroupSpec", "GroupSpec"]] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown group family {self.family!r}")
        if self.family in ("UU", "UUbar", "OO", "Weyl", "WeylTilde", "TensorFlip"):
            if self.d is None or int(self.d) < 1:
                raise InputError(f"{self.family} needs a dimension d >= 1")

    # constructors
    @classmethod
    def uu(cls, d: int) -> "GroupSpec":
        return cls("UU", int(d))

    @classmethod
    def uubar(cls, d: int) -> "GroupSpec":
        return cls("UUbar", int(d))

    @classmethod
    def oo(cls, d: int) -> "GroupSpec":
        return cls("OO", int(d))

    @classmethod
    def bell(cls) -> "GroupSpec":
        return cls("Bell")

    @classmethod
    def weyl(cls, d: int) -> "GroupSpec":
        return cls("Weyl", int(d))

    @classmethod
    def weyl_tilde(cls, d: int) -> "GroupSpec":
        return cls("WeylTilde", int(d))

    @classmethod
    def su2(cls, j1, j2) -> "GroupSpec":
        return cls("SU2", j1=_spin(j1), j2=_spin(j2))

    @classmethod
    def tensor(cls, g: "GroupSpec", h: "GroupSpec") -> "GroupSpec":
        return cls("Tensor", factors=(g, h))

    @classmethod
    def tensor_flip(cls, d: int) -> "GroupSpec":
        """``UU (x) UU`` on two pairs, enlarged by the Alice/Bob swap ``F_A (x) F_B``."""
        return cls("TensorFlip", int(d))

    @property
    def dims(self) -> tuple[int, int]:
        f = self.family
        if f == "Bell":
            return (2, 2)
        if f == "SU2":
            return (int(2 * self.j1 + 1), int(2 * self.j2 + 1))
        if f == "Tensor":
            (a1, a2), (b1, b2) = self.factors[0].dims, self.factors[1].dims
            return (a1 * b1, a2 * b2)
        if f == "TensorFlip":
            return (self.d**2, self.d**2)
        return (self.d, self.d)

    @property
    def name(self) -> str:
        f = self.family
        if f == "Bell":
            return "Bell"
        if f == "SU2":
            return f"SU2({self.j1},{self.j2})"
        if f == "Tensor":
            return f"Tensor({self.factors[0].name},{self.factors[1].name})"
        return f"{f}({self.d})"


@dataclass(frozen=True, eq=False)
class CommutantBasis:
    """Spanning set of the commutant; the identity is always the last element."""

    ops: tuple[Operator, ...]
    labels: tuple[str, ...]
    gram: np.ndarray
    is_abelian: bool
    hermitian: bool
    minimal_projections: Optional[tuple[Operator, ...]] = None

    @property
    def k(self) -> int:
        return len(self.ops)

    @property
    def stack(self) -> np.ndarray:
        return np.stack([b.mat for b in self.ops])

    @property
    def coord_labels(self) -> tuple[str, ...]:
        return self.labels[:-1]


@dataclass(frozen=True, eq=False)
class InvariantCoords:
    """Expectations ``tr(rho B_i)`` of the non-identity commutant basis elements."""

    group: GroupSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.values))
        k = commutant_basis(self.group).k
        if v.shape != (k - 1,):
            raise DimensionMismatch(f"{self.group.name} needs {k - 1} coordinates, got {v.shape}")
        object.__setattr__(self, "values", v)

    def real(self) -> np.ndarray:
        """Real embedding: complex coordinates become ``[Re..., Im...]``."""
        return real_embedding(self.values)


def real_embedding(values: np.ndarray) -> np.ndarray:
    v = np.asarray(values)
    if np.iscomplexobj(v):
        return np.concatenate([v.real, v.imag], axis=-1)
    return v.astype(float)


# -- single-site building blocks ---------------------------------------------

def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random ``U(d)`` element: QR of a Ginibre matrix with phase-fixed R."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph


def haar_orthogonal(d: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * np.sign(np.diagonal(r))


def haar_su2(rng: np.random.Generator) -> np.ndarray:
    """Uniform quaternion mapped to ``q0 - i q.sigma``."""
    q = rng.standard_normal(4)
    q /= np.linalg.norm(q)
    return q[0] * PAULI[0] - 1j * (q[1] * PAULI[1] + q[2] * PAULI[2] + q[3] * PAULI[3])


def weyl_operator(d: int, x: int, y: int) -> np.ndarray:
    """``W(x, y)|z> = w^(x z) |z - y>`` with ``w = exp(2 pi i / d)``."""
    w = np.exp(2j * np.pi / d)
    m = np.zeros((d, d), dtype=complex)
    for z in range(d):
        m[(z - y) % d, z] = w ** ((x * z) % d)
    return m


@functools.lru_cache(maxsize=None)
def spin_matrices(j, basis: str = "standard") -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Angular momentum matrices ``(Jx, Jy, Jz)`` for spin ``j``.

    ``basis="standard"`` orders ``|j, m>`` by ``m = j, j-1, ..., -j``.
    ``basis="real"`` (integer ``j`` only) uses the real combinations of
    ``|m>`` and ``|-m>`` in which every rotation matrix is real orthogonal.
    """
    j = _spin(j)
    n = int(2 * j + 1)
    ms = [j - k for k in range(n)]
    jp = np.zeros((n, n), dtype=complex)
    for k in range(1, n):
        m = ms[k]
        jp[k - 1, k] = np.sqrt(float(j * (j + 1) - m * (m + 1)))
    jx = (jp + jp.conj().T) / 2
    jy = (jp - jp.conj().T) / 2j
    jz = np.diag([float(m) for m in ms]).astype(complex)
    if basis == "standard":
        return jx, jy, jz
    if basis != "real":
        raise InputError(f"unknown basis {basis!r}")
    if j.denominator != 1:
        raise InputError("a real basis exists only for integer spin")
    idx = {m: k for k, m in enumerate(ms)}
    cols = []
    for m in range(int(j), 0, -1):
        plus, minus = np.zeros(n, complex), np.zeros(n, complex)
        plus[idx[Fraction(m)]] = 1
        minus[idx[Fraction(-m)]] = 1
        sgn = (-1) ** m
        cols.append((minus + sgn * plus) / np.sqrt(2))
        cols.append(1j * (minus - sgn * plus) / np.sqrt(2))
    zero = np.zeros(n, complex)
    zero[idx[Fraction(0)]] = 1
    cols.append(zero)
    t = np.stack(cols, axis=1)
    return tuple(t.conj().T @ a @ t for a in (jx, jy, jz))


def su2_representation(j, u: np.ndarray, basis: str = "standard") -> np.ndarray:
    """Spin-``j`` matrix ``D^j(u)`` of ``u`` in SU(2), via ``expm(-i theta n.J)``."""
    c = np.clip(np.trace(u).real / 2, -1.0, 1.0)
    sn = np.array([1j * np.trace(PAULI[k] @ u) / 2 for k in (1, 2, 3)]).real
    half = np.arccos(c)
    s = np.sin(half)
    axis = sn / s if s > 1e-15 else np.zeros(3)
    jx, jy, jz = spin_matrices(j, basis)
    gen = 2 * half * (axis[0] * jx + axis[1] * jy + axis[2] * jz)
    d = scipy.linalg.expm(-1j * gen)
    return d.real.astype(complex) if basis == "real" else d


def su2_projections(j1, j2, basis: str = "standard") -> list[Operator]:
    """Projections onto total spin ``s = |j1-j2|, ..., j1+j2``, ascending in ``s``."""
    j1, j2 = _spin(j1), _spin(j2)
    n1, n2 = int(2 * j1 + 1), int(2 * j2 + 1)
    a = spin_matrices(j1, basis if j1.denominator == 1 else "standard")
    b = spin_matrices(j2, basis if j2.denominator == 1 else "standard")
    tot = [np.kron(x, np.eye(n2)) + np.kron(np.eye(n1), y) for x, y in zip(a, b)]
    casimir = sum(t @ t for t in tot)
    vals, vecs = np.linalg.eigh((casimir + casimir.conj().T) / 2)
    # s(s+1) -> s
    spins = (-1 + np.sqrt(1 + 4 * np.clip(vals, 0, None))) / 2
    out = []
    s = abs(j1 - j2)
    while s <= j1 + j2:
        sel = np.abs(spins - float(s)) < 1e-6
        v = vecs[:, sel]
        out.append(Operator((n1, n2), v @ v.conj().T))
        s += 1
    return out


# -- commutants -----------------------------------------------------------------

def _gram(ops) -> np.ndarray:
    s = np.stack([o.mat for o in ops])
    return np.einsum("aij,bij->ab", s.conj(), s)


def _commutes(ops, tol=1e-10) -> bool:
    for a, b in itertools.combinations(ops, 2):
        if np.max(np.abs(a.mat @ b.mat - b.mat @ a.mat)) > tol:
            return False
    return True


def _hermitian_parts(ops) -> list[np.ndarray]:
    out = []
    for o in ops:
        m = o.mat
        out.append((m + m.conj().T) / 2)
        out.append((m - m.conj().T) / 2j)
    return out


def _joint_projections(ops, dims) -> tuple[Operator, ...]:
    """Minimal projections of a commutative *-algebra by diagonalizing a generic element."""
    rng = np.random.default_rng(12345)
    parts = _hermitian_parts(ops)
    x = sum(rng.uniform(0.5, 1.5) * h for h in parts)
    vals, vecs = np.linalg.eigh(x)
    groups, start = [], 0
    for k in range(1, len(vals) + 1):
        if k == len(vals) or vals[k] - vals[k - 1] > 1e-8:
            groups.append((start, k))
            start = k
    return tuple(Operator(dims, vecs[:, a:b] @ vecs[:, a:b].conj().T) for a, b in groups)


def _basis(ops, labels, dims, projections=None) -> CommutantBasis:
    hermitian = all(o.is_hermitian(1e-12) for o in ops)
    abelian = _commutes(ops)
    if abelian and projections is None:
        projections = _joint_projections(ops, dims)
    return CommutantBasis(
        ops=tuple(ops),
        labels=tuple(labels),
        gram=_gram(ops),
        is_abelian=abelian,
        hermitian=hermitian,
        minimal_projections=tuple(projections) if abelian else None,
    )


def _bell_vectors() -> list[np.ndarray]:
    psi0 = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    return [psi0] + [1j * np.kron(PAULI[0], PAULI[k]) @ psi0 for k in (1, 2, 3)]


@functools.lru_cache(maxsize=None)
def commutant_basis(group: GroupSpec) -> CommutantBasis:
    """Basis of the commutant ``G'`` (identity last) and, if abelian, its minimal projections."""
    f = group.family
    dims = group.dims
    one = Operator.identity(*dims)
    if f == "UU":
        F = flip_operator(group.d)
        return _basis([F, one], ["F", "1"], dims, [(one + F) / 2, (one - F) / 2])
    if f == "UUbar":
        Fh = phihat_operator(group.d)
        return _basis([Fh, one], ["Fhat", "1"], dims, [Fh / group.d, one - Fh / group.d])
    if f == "OO":
        d = group.d
        F, Fh = flip_operator(d), phihat_operator(d)
        p0 = Fh / d
        p1 = (one - F) / 2
        p2 = (one + F) / 2 - Fh / d
        return _basis([F, Fh, one], ["F", "Fhat", "1"], dims, [p0, p1, p2])
    if f == "Bell":
        ops = [Operator(dims, -np.kron(PAULI[k], PAULI[k])) for k in (1, 2, 3)]
        projs = [Operator(dims, np.outer(v, v.conj())) for v in _bell_vectors()]
        return _basis(ops + [one], ["-XX", "-YY", "-ZZ", "1"], dims, projs)
    if f in ("Weyl", "WeylTilde"):
        d = group.d
        ops, labels = [], []
        for x, y in itertools.product(range(d), range(d)):
            if (x, y) == (0, 0):
                continue
            second = (-x, -y) if f == "Weyl" else (-x, y)
            ops.append(Operator(dims, np.kron(weyl_operator(d, x, y), weyl_operator(d, *second))))
            labels.append(f"W({x},{y},{second[0] % d},{second[1] % d})")
        return _basis(ops + [one], labels + ["1"], dims)
    if f == "SU2":
        projs = su2_projections(group.j1, group.j2)
        spins = [abs(group.j1 - group.j2) + k for k in range(len(projs))]
        return _basis(projs[:-1] + [one], [f"P_{s}" for s in spins[:-1]] + ["1"], dims, projs)
    if f == "Tensor":
        g, h = (commutant_basis(x) for x in group.factors)
        og, oh = g.ops[-1], h.ops[-1]
        ops, labels = [], []
        for a, la in zip(g.ops[:-1], g.labels[:-1]):
            ops.append(tensor(a, oh))
            labels.append(f"{la}(x)1")
        for b, lb in zip(h.ops[:-1], h.labels[:-1]):
            ops.append(tensor(og, b))
            labels.append(f"1(x){lb}")
        for (a, la), (b, lb) in itertools.product(zip(g.ops[:-1], g.labels[:-1]), zip(h.ops[:-1], h.labels[:-1])):
            ops.append(tensor(a, b))
            labels.append(f"{la}(x){lb}")
        ops.append(tensor(og, oh))
        labels.append("1")
        projs = None
        if g.is_abelian and h.is_abelian:
            projs = [tensor(p, q) for p in g.minimal_projections for q in h.minimal_projections]
        return _basis(ops, labels, dims, projs)
    if f == "TensorFlip":
        d = group.d
        F, one_d = flip_operator(d), Operator.identity(d, d)
        fsym = (tensor(one_d, F) + tensor(F, one_d)) / 2
        f12 = tensor(F, F)
        pp, pm = (one_d + F) / 2, (one_d - F) / 2
        projs = [tensor(pp, pp), tensor(pp, pm) + tensor(pm, pp), tensor(pm, pm)]
        return _basis([fsym, f12, one], ["F", "F12", "1"], dims, projs)
    raise Unsupported(f"no commutant for {group.name}")


# -- sampling ------------------------------------------------------------------------

def _finite_elements(group: GroupSpec) -> list[np.ndarray]:
    f = group.family
    if f == "Bell":
        return [np.eye(4, dtype=complex)] + [-np.kron(PAULI[k], PAULI[k]) for k in (1, 2, 3)]
    d = group.d
    out = []
    for x, y in itertools.product(range(d), range(d)):
        w = weyl_operator(d, x, y)
        out.append(np.kron(w, w if f == "Weyl" else w.conj()))
    return out


def group_elements(group: GroupSpec) -> list[Operator]:
    """All elements of a finite family (Bell, Weyl, WeylTilde), phases omitted."""
    if group.family not in ("Bell", "Weyl", "WeylTilde"):
        raise Unsupported(f"{group.name} is not a finite group")
    return [Operator(group.dims, m) for m in _finite_elements(group)]


def haar_sample(group: GroupSpec, rng: np.random.Generator) -> Operator:
    """One Haar-distributed (uniform, for finite families) group element."""
    f = group.family
    dims = group.dims
    if f == "UU":
        u = haar_unitary(group.d, rng)
        return Operator(dims, np.kron(u, u))
    if f == "UUbar":
        u = haar_unitary(group.d, rng)
        return Operator(dims, np.kron(u, u.conj()))
    if f == "OO":
        o = haar_orthogonal(group.d, rng)
        return Operator(dims, np.kron(o, o))
    if f in ("Bell", "Weyl", "WeylTilde"):
        els = _finite_elements(group)
        return Operator(dims, els[rng.integers(len(els))])
    if f == "SU2":
        u = haar_su2(rng)
        return Operator(dims, np.kron(su2_representation(group.j1, u), su2_representation(group.j2, u)))
    if f == "Tensor":
        return tensor(haar_sample(group.factors[0], rng), haar_sample(group.factors[1], rng))
    if f == "TensorFlip":
        d = group.d
        uu = GroupSpec.uu(d)
        g = tensor(haar_sample(uu, rng), haar_sample(uu, rng))
        if rng.integers(2):
            swap = np.kron(flip_operator(d).mat, flip_operator(d).mat)
            g = Operator(dims, swap @ g.mat)
        return g
    raise Unsupported(f"no sampler for {group.name}")


# -- twirl and coordinates -----------------------------------------------------------

def _check_dims(group: GroupSpec, m: np.ndarray) -> None:
    n = group.dims[0] * group.dims[1]
    if m.shape != (n, n):
        raise DimensionMismatch(f"{group.name} acts on {n}x{n} matrices, got {m.shape}")


def twirl(group: GroupSpec, a: OperatorLike) -> Operator:
    """Group average of ``U A U^*``, computed exactly as the HS projection onto ``G'``."""
    m = as_matrix(a)
    _check_dims(group, m)
    basis = commutant_basis(group)
    s = basis.stack
    c = np.einsum("kij,ij->k", s.conj(), m)
    x = np.linalg.solve(basis.gram, c)
    return Operator(group.dims, np.einsum("k,kij->ij", x, s))


def coords(group: GroupSpec, rho: OperatorLike) -> InvariantCoords:
    """Invariant coordinates ``tr(rho B_i)`` (complex for non-Hermitian bases)."""
    m = as_matrix(rho)
    _check_dims(group, m)
    basis = commutant_basis(group)
    vals = np.einsum("kij,ji->k", basis.stack[:-1], m)
    if basis.hermitian:
        vals = vals.real
    return InvariantCoords(group, vals)


def state_from_coords(group: GroupSpec, c, psd_tolerance: float = 1e-9) -> DensityMatrix:
    """The unique invariant density matrix with the given coordinates."""
    if isinstance(c, InvariantCoords):
        if c.group != group:
            raise InputError(f"coordinates belong to {c.group.name}, not {group.name}")
        c = c.values
    basis = commutant_basis(group)
    vals = np.atleast_1d(np.asarray(c))
    if vals.shape != (basis.k - 1,):
        raise DimensionMismatch(f"{group.name} needs {basis.k - 1} coordinates, got {vals.shape}")
    s = basis.stack
    rhs = np.concatenate([vals.astype(complex), [1.0]])
    n = np.einsum("aij,bji->ab", s, s)
    x = np.linalg.solve(n, rhs)
    m = np.einsum("k,kij->ij", x, s)
    herm = float(np.max(np.abs(m - m.conj().T)))
    if herm > 1e-9:
        raise NotAState(f"coordinates do not describe a Hermitian operator (residual {herm:.3g})")
    m = (m + m.conj().T) / 2
    m = m / np.trace(m).real
    lo = float(np.linalg.eigvalsh(m)[0])
    if lo < -psd_tolerance:
        raise NotAState(f"coordinates {vals} lie outside the invariant state space (min eigenvalue {lo:.3g})")
    return DensityMatrix(Operator(group.dims, m), psd_tolerance)


def weights(group: GroupSpec, rho: OperatorLike) -> np.ndarray:
    """Expectations ``tr(rho p_alpha)`` of the minimal projections (abelian commutants)."""
    basis = commutant_basis(group)
    if not basis.is_abelian:
        raise Unsupported(f"{group.name} has a non-abelian commutant")
    m = as_matrix(rho)
    return np.array([np.einsum("ij,ji->", p.mat, m).real for p in basis.minimal_projections])


def extreme_states(group: GroupSpec) -> list[DensityMatrix]:
    """Normalized minimal projections ``p / tr p`` (the vertices of the invariant simplex)."""
    basis = commutant_basis(group)
    if not basis.is_abelian:
        raise Unsupported(f"{group.name} has a non-abelian commutant")
    return [DensityMatrix.from_matrix(p.mat / p.trace().real, group.dims) for p in basis.minimal_projections]


# -- partial transposition of groups ---------------------------------------------------

def twiddle(group: GroupSpec) -> GroupSpec:
    """Group of ``U1 (x) conj(U2)``; its commutant is the partial transpose of ``G'``."""
    f = group.family
    if f == "UU":
        return GroupSpec.uubar(group.d)
    if f == "UUbar":
        return GroupSpec.uu(group.d)
    if f in ("OO", "Bell"):
        return group
    if f == "Weyl":
        return GroupSpec.weyl_tilde(group.d)
    if f == "WeylTilde":
        return GroupSpec.weyl(group.d)
    if f == "Tensor":
        return GroupSpec.tensor(twiddle(group.factors[0]), twiddle(group.factors[1]))
    raise Unsupported(f"partial-transpose analysis is not available for {group.name}")


def twirl_residual(group: GroupSpec, a: OperatorLike) -> float:
    """Max-entry distance between ``A`` and its twirl (0 for invariant operators)."""
    m = as_matrix(a)
    return float(np.max(np.abs(twirl(group, m).mat - m)))


def monte_carlo_twirl(group: GroupSpec, a: OperatorLike, samples: int, rng: np.random.Generator) -> Operator:
    """Average of ``U A U^*`` over Haar samples (a test oracle, not the production twirl)."""
    m = as_matrix(a)
    acc = np.zeros_like(m, dtype=complex)
    for _ in range(samples):
        u = haar_sample(group, rng).mat
        acc += u @ m @ u.conj().T
    return Operator(group.dims, acc / samples)


__all__ = [
    "CommutantBasis",
    "GroupSpec",
    "InvariantCoords",
    "commutant_basis",
    "coords",
    "extreme_states",
    "group_elements",
    "haar_orthogonal",
    "haar_sample",
    "haar_su2",
    "haar_unitary",
    "monte_carlo_twirl",
    "partial_transpose",
    "real_embedding",
    "spin_matrices",
    "state_from_coords",
    "su2_projections",
    "su2_representation",
    "twiddle",
    "twirl",
    "twirl_residual",
    "weights",
    "weyl_operator",
]
