"""Relative entropy of entanglement for invariant states.

For an abelian commutant every invariant state is a probability vector over
the minimal projections, and the relative entropy between two invariant states
is the classical relative entropy of those vectors.  Minimizing over
separable states then reduces to a convex problem over the vertex weights of
the invariant separable region.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .eof import oo_region
from .errors import DomainError, GroupMismatch, InvalidDistribution, NonAbelianUnsupported, OutsideStateSpace
from .geometry import Region, _exact_separable, separable_region
from .groups import GroupSpec, InvariantCoords, commutant_basis, real_embedding, weights
from .opcore import DensityMatrix, Operator, _log_scale, shannon_entropy

WEIGHT_FLOOR = 1e-14


def _unit(base) -> str:
    return "bits" if base in (2, "bits") else "nats"


# weights of (P+P+, P+P- + P-P+, P-P-) from (averaged flip, F (x) F, 1); avoids building d**4 matrices
_TENSOR_FLIP_MAP = np.array([[0.5, 0.25, 0.25], [0.0, -0.5, 0.5], [-0.5, 0.25, 0.25]])


def _require_abelian(group: GroupSpec) -> None:
    if group.family != "TensorFlip" and not commutant_basis(group).is_abelian:
        raise NonAbelianUnsupported(f"{group.name} has a non-abelian commutant")


@functools.lru_cache(maxsize=128)
def _weight_map(group: GroupSpec) -> np.ndarray:
    """Matrix ``X`` with ``weight_alpha = Re(X[alpha, :-1] @ c + X[alpha, -1])`` for complex coordinates ``c``."""
    if group.family == "TensorFlip":
        return _TENSOR_FLIP_MAP.astype(complex)
    basis = commutant_basis(group)
    if not basis.is_abelian:
        raise NonAbelianUnsupported(f"{group.name} has a non-abelian commutant")
    s = basis.stack
    gram = np.einsum("aji,bji->ab", s.conj(), s)
    rows = []
    for p in basis.minimal_projections:
        rhs = np.einsum("aji,ji->a", s.conj(), p.mat)
        rows.append(np.linalg.solve(gram, rhs))
    return np.array(rows)


def _complex_coords(group: GroupSpec, c) -> np.ndarray:
    if isinstance(c, InvariantCoords):
        return np.asarray(c.values, dtype=complex)
    r = np.atleast_1d(np.asarray(c, dtype=float if np.isrealobj(c) else complex))
    if np.iscomplexobj(r) or group.family == "TensorFlip" or commutant_basis(group).hermitian:
        return r.astype(complex)
    # real embedding [Re, Im] of complex coordinates
    k = len(r) // 2
    return r[:k] + 1j * r[k:]


def weights_from_coords(group: GroupSpec, c) -> np.ndarray:
    """Minimal-projection weights of the invariant state with coordinates ``c``."""
    x = _weight_map(group)
    cc = _complex_coords(group, c)
    if cc.shape != (x.shape[1] - 1,):
        raise DomainError(f"{group.name} needs {x.shape[1] - 1} coordinates, got {cc.shape}")
    return (x[:, :-1] @ cc + x[:, -1]).real


@dataclass(frozen=True, eq=False)
class AbelianState:
    """Invariant state of an abelian commutant, stored as minimal-projection weights."""

    group: GroupSpec
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if np.any(w < -1e-12) or abs(w.sum() - 1.0) > 1e-12:
            raise InvalidDistribution(f"weights must be a probability vector, got {w}")
        object.__setattr__(self, "weights", np.clip(w, 0.0, None))

    @classmethod
    def from_coords(cls, group: GroupSpec, c, tol: float = 1e-9) -> "AbelianState":
        w = weights_from_coords(group, c)
        if np.any(w < -tol):
            raise OutsideStateSpace(f"coordinates {np.ravel(c)} are outside the {group.name} state space")
        w = np.clip(w, 0.0, None)
        return cls(group, w / w.sum())

    @classmethod
    def from_state(cls, group: GroupSpec, rho) -> "AbelianState":
        """Weights of the twirl of ``rho``."""
        w = weights(group, rho)
        return cls(group, np.clip(w, 0.0, None) / w.sum())

    def density_matrix(self) -> DensityMatrix:
        basis = commutant_basis(self.group)
        m = sum(w * p.mat / p.trace().real for w, p in zip(self.weights, basis.minimal_projections))
        return DensityMatrix(Operator(self.group.dims, m))


def relative_entropy_abelian(rho: AbelianState, sigma: AbelianState, base=None) -> float:
    """``sum_a r_a (log r_a - log s_a)``; ``inf`` when ``sigma`` misses part of the support of ``rho``."""
    if rho.group != sigma.group:
        raise GroupMismatch(f"{rho.group.name} vs {sigma.group.name}")
    total = 0.0
    for r, s in zip(rho.weights, sigma.weights):
        if r <= 0:
            continue
        if s <= 0:
            return math.inf
        total += r * (math.log(r) - math.log(s))
    return max(total, 0.0) * _log_scale(base)


# -- closed forms ---------------------------------------------------------------------

def ree_werner(f: float, base=None) -> float:
    """Relative entropy of entanglement of the Werner state with flip expectation ``f``."""
    if not (-1 - 1e-12 <= f <= 1 + 1e-12):
        raise DomainError(f"f out of range [-1,1] (got {float(f)!r})")
    f = min(max(f, -1.0), 1.0)
    if f >= 0:
        return 0.0
    return max(math.log(2) - shannon_entropy([(1 + f) / 2, (1 - f) / 2]), 0.0) * _log_scale(base)


def ree_isotropic(fhat: float, d: int, base=None) -> float:
    """Relative entropy of entanglement of the isotropic state with ``tr(rho Fhat) = fhat``."""
    if d < 2:
        raise DomainError("d must be at least 2")
    if not (-1e-12 <= fhat <= d + 1e-12):
        raise DomainError(f"fhat out of range [0,{d}] (got {float(fhat)!r})")
    fhat = min(max(fhat, 0.0), float(d))
    if fhat <= 1:
        return 0.0
    p = fhat / d
    value = math.log(d) - (1 - p) * math.log(d - 1) - shannon_entropy([p, 1 - p])
    return max(value, 0.0) * _log_scale(base)


@dataclass(frozen=True, eq=False)
class ReeResult:
    value: float
    minimizer: np.ndarray
    method: str  # closed_form | numeric
    base: str = "nats"
    endpoint_ok: Optional[bool] = None
    meta: dict = field(default_factory=dict)


def ree_oo(f: float, fhat: float, d: int, base=None) -> ReeResult:
    """Relative entropy of entanglement on the OO state space with its closest separable state.

    The minimizer is found by following the line from the apex of the
    triangle containing the point to the separable square.
    """
    region = oo_region(f, fhat, d)
    meta = {"group": f"OO({d})", "region": region}
    if region == "square":
        sigma = np.array([f, fhat])
    elif region == "A":
        meta["derived_by_analogy"] = d != 3
        if d - fhat < 1e-15:
            sigma = np.array([1.0, 1.0])
        else:
            s = (d - 1) / (d - fhat)
            sigma = np.array([1 + s * (f - 1), 1.0])
    elif region == "B":
        sigma = np.array([0.0, fhat / (f + 1) if f + 1 > 1e-15 else 0.0])
    else:
        sigma = np.array([0.0, 1.0])
    g = GroupSpec.oo(d)
    value = 0.0 if region == "square" else relative_entropy_abelian(
        AbelianState.from_coords(g, [f, fhat]), AbelianState.from_coords(g, sigma), base)
    return ReeResult(value, sigma, "closed_form", _unit(base), meta=meta)


# -- numeric minimization -----------------------------------------------------------------

def _objective(r: np.ndarray, sw: np.ndarray, mu: np.ndarray) -> float:
    sig = mu @ sw
    mask = r > 0
    if np.any(sig[mask] <= 0):
        return math.inf
    return float(np.sum(r[mask] * (np.log(r[mask]) - np.log(sig[mask]))))


def ree_numeric(group: GroupSpec, c, sep: Optional[Region] = None, budget: int = 10_000,
                base=None) -> ReeResult:
    """Minimize the relative entropy to the separable region over its vertex simplex.

    Multiplicative (entropic mirror-descent) steps on the vertex weights are
    followed by a polish with SLSQP and a comparison with every single vertex.
    For interval regions ``endpoint_ok`` reports whether the minimizer sits on
    an end point.
    """
    _require_abelian(group)
    rho = AbelianState.from_coords(group, c)
    r = rho.weights
    if sep is None:
        sep = separable_region(group)
    verts = sep.vertex_array()
    sw = np.array([np.clip(weights_from_coords(group, v), 0.0, None) for v in verts])
    n = len(verts)

    mu = np.full(n, 1.0 / n)
    iters = 0
    for iters in range(1, budget + 1):
        sig = np.maximum(mu @ sw, WEIGHT_FLOOR)
        g = -(sw * (r / sig)).sum(axis=1)
        kkt = float(np.max(mu * np.abs(g - mu @ g)))
        if kkt < 1e-10:
            break
        mu = mu * (-g)
        mu = np.maximum(mu / mu.sum(), WEIGHT_FLOOR)
        mu /= mu.sum()

    # polish: drop negligible weights, then a constrained local solve on the support
    mu = np.where(mu < 1e-10, 0.0, mu)
    mu /= mu.sum()
    candidates = [mu]
    if n > 1:
        def capped(m):
            v = _objective(r, sw, np.maximum(m, 0))
            return v if np.isfinite(v) else 1e6

        res = minimize(capped, mu, method="SLSQP", bounds=[(0, 1)] * n,
                       constraints=[{"type": "eq", "fun": lambda m: m.sum() - 1.0}],
                       options={"ftol": 1e-15, "maxiter": 500})
        m = np.maximum(res.x, 0)
        candidates.append(m / m.sum())
    candidates += list(np.eye(n))
    vals = [_objective(r, sw, m) for m in candidates]
    best = int(np.argmin(vals))
    mu = candidates[best]
    value = max(vals[best], 0.0)
    minimizer = mu @ verts
    endpoint_ok = None
    if sep.kind == "interval":
        endpoint_ok = bool(min(abs(minimizer[0] - sep.lo), abs(minimizer[0] - sep.hi)) <= 1e-6) or value <= 1e-12
    meta = {"group": group.name, "iterations": iters, "vertex_weights": mu.tolist(), "exact_region": sep.exact}
    return ReeResult(value * _log_scale(base), minimizer, "numeric", _unit(base), endpoint_ok, meta)


# -- additivity counterexample -----------------------------------------------------------------

@dataclass(frozen=True)
class CounterexampleReport:
    d: int
    e_single: float
    e_pair_expected: float
    e_pair_actual: float
    e_pair_analytic: float
    numeric_minus_analytic: float
    violation: float
    violation_analytic: float
    minimizer_coords: tuple[float, float, float]
    symmetric_minimizer: tuple[float, float]

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        out["minimizer_coords"] = list(self.minimizer_coords)
        out["symmetric_minimizer"] = list(self.symmetric_minimizer)
        return out


def additivity_counterexample(d: int) -> CounterexampleReport:
    """Compare the relative entropy of entanglement of two copies of the
    antisymmetric Werner state with twice its single-copy value.

    The pair is treated as invariant under ``U (x) U (x) V (x) V`` together
    with the exchange of the two copies; coordinates are the averaged flip
    expectation and the expectation of ``F (x) F``.
    """
    if d < 2:
        raise DomainError("d must be at least 2")
    g = GroupSpec.tensor_flip(d)
    sep = Region.from_points(_exact_separable(g), ("F_avg", "F(x)F"), group=g.name)
    res = ree_numeric(g, [-1.0, 1.0], sep)
    e_single = ree_werner(-1.0)
    analytic = math.log(2 * d / (d - 1))
    violation = 2 * e_single - res.value
    if abs(violation) < 1e-12:
        violation = 0.0
    f, f12 = (float(x) for x in res.minimizer)
    return CounterexampleReport(
        d=d,
        e_single=e_single,
        e_pair_expected=2 * e_single,
        e_pair_actual=res.value,
        e_pair_analytic=analytic,
        numeric_minus_analytic=res.value - analytic,
        violation=violation,
        violation_analytic=math.log(2 * (d - 1) / d),
        minimizer_coords=(f, f, f12),
        symmetric_minimizer=(f, f12),
    )


def coords_from_weights(group: GroupSpec, w) -> np.ndarray:
    """Real-embedded coordinates of the invariant state with minimal-projection weights ``w``."""
    basis = commutant_basis(group)
    m = sum(x * p.mat / p.trace().real for x, p in zip(w, basis.minimal_projections))
    vals = np.einsum("kij,ji->k", basis.stack[:-1], m)
    return vals.real if basis.hermitian else real_embedding(vals)
