"""Entanglement of formation for invariant states.

For a symmetry group G the entanglement of formation of an invariant state is
the convex hull of ``eps(x)``, the least pure-state entanglement among pure
states whose twirl has coordinates ``x``.  This module has the closed forms
(Werner, isotropic, OO, Bell-diagonal), the 1-D hull step, the extension test
for non-invariant states, and two numeric routes used as oracles:
:func:`epsilon_numeric` and :func:`eof_bruteforce`.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from scipy.optimize import linprog, minimize, minimize_scalar, nnls

from .errors import (
    DimensionMismatch,
    DomainError,
    FlipExpectationOutOfRange,
    Infeasible,
    InputError,
    InvalidDistribution,
    OutsideStateSpace,
    Unsupported,
    UnsupportedRegion,
)
from .geometry import (
    CurveSamples,
    DEFAULT_GRID,
    _hermitian_coordinate_ops,
    invariant_state_space,
    lower_convex_envelope,
    maximize_product_expectation,
)
from .groups import GroupSpec, InvariantCoords, haar_unitary, real_embedding, twirl
from .opcore import (
    DensityMatrix,
    PureStateVector,
    _log_scale,
    as_matrix,
    binary_entropy,
    flip_operator,
    hermitian_spectrum,
    partial_transpose,
    schmidt_entanglement,
)

Witness = list[tuple[float, PureStateVector]]

#: named budgets for the numeric oracle: (targets, restarts per target, random pool size)
BUDGETS = {
    "small": (12, 3, 64),
    "medium": (32, 4, 256),
    "large": (96, 6, 1024),
}


@dataclass(frozen=True, eq=False)
class EofResult:
    value: float
    method: str  # closed_form | envelope | oracle_upper_bound | extension
    decomposition: Optional[Witness] = None
    flat_piece: Optional[tuple[float, float]] = None
    base: str = "nats"
    meta: dict = field(default_factory=dict)


def _unit(base) -> str:
    return "bits" if base in (2, "bits") else "nats"


def _check_range(name: str, x: float, lo: float, hi: float, slack: float = 1e-12) -> float:
    if not (lo - slack <= x <= hi + slack):
        raise DomainError(f"{name} out of range [{lo:g},{hi:g}] (got {float(x)!r})")
    return min(max(float(x), lo), hi)


def _vector(dims, entries: dict) -> PureStateVector:
    d1, d2 = dims
    v = np.zeros(d1 * d2, dtype=complex)
    for (i, j), a in entries.items():
        v[i * d2 + j] = a
    return PureStateVector.normalized(dims, v)


def _two_point_mixture(x: float, lo: float, hi: float, at_lo, at_hi) -> Witness:
    """Weights putting mass on ``lo`` and ``hi`` so that the mean is ``x``."""
    if hi - lo < 1e-15:
        return [(1.0, at_lo)]
    w = (hi - x) / (hi - lo)
    out = [(w, at_lo), (1.0 - w, at_hi)]
    return [(float(a), v) for a, v in out if a > 1e-15]


# -- Werner states ----------------------------------------------------------------

def epsilon_werner(f: float, base=None) -> float:
    """Least entanglement of a pure state with flip expectation ``f``; convex, so also E_F."""
    f = _check_range("f", f, -1.0, 1.0)
    if f >= 0:
        return 0.0
    return binary_entropy(0.5 * (1.0 - math.sqrt(1.0 - f * f)), base)


def werner_witness(f: float, d: int = 2) -> Witness:
    """Optimal ensemble (one vector per group orbit) for the Werner state with expectation ``f``."""
    f = _check_range("f", f, -1.0, 1.0)
    dims = (d, d)
    if f >= 0:
        return _two_point_mixture(f, 0.0, 1.0, _vector(dims, {(0, 1): 1}), _vector(dims, {(0, 0): 1}))
    p = 0.5 * (1.0 - math.sqrt(1.0 - f * f))
    return [(1.0, _vector(dims, {(0, 1): math.sqrt(p), (1, 0): -math.sqrt(1.0 - p)}))]


def eof_werner(f: float, d: int = 2, base=None) -> EofResult:
    """E_F of the UU-invariant state with ``tr(rho F) = f``; independent of ``d``."""
    if d < 2:
        raise DomainError("d must be at least 2")
    value = epsilon_werner(f, base)
    return EofResult(value, "closed_form", werner_witness(f, d), base=_unit(base), meta={"group": f"UU({d})"})


# -- isotropic states -----------------------------------------------------------

def _gamma(fhat: float, d: int) -> float:
    g = (math.sqrt(fhat) + math.sqrt(max((d - 1) * (d - fhat), 0.0))) ** 2 / d**2
    return min(max(g, 0.0), 1.0)


def epsilon_isotropic(fhat: float, d: int, base=None) -> float:
    """Least pure-state entanglement at ``tr(rho Fhat) = fhat`` for U(x)conj(U) symmetry."""
    if d < 2:
        raise DomainError("d must be at least 2")
    fhat = _check_range("fhat", fhat, 0.0, float(d))
    if fhat <= 1.0:
        return 0.0
    g = _gamma(fhat, d)
    return (binary_entropy(g) + (1.0 - g) * math.log(d - 1)) * _log_scale(base)


def isotropic_witness_vector(fhat: float, d: int) -> PureStateVector:
    """Minimizer ``(x 1 + y Fhat)|00>`` with real ``x, y`` for ``1 <= fhat <= d``."""
    g = _gamma(fhat, d)
    a, b = math.sqrt(g), math.sqrt((1.0 - g) / (d - 1))
    return _vector((d, d), {(0, 0): a, **{(i, i): b for i in range(1, d)}})


def _isotropic_point_witness(fhat: float, d: int) -> Witness:
    if fhat <= 1.0:
        return _two_point_mixture(fhat, 0.0, 1.0, _vector((d, d), {(0, 1): 1}), _vector((d, d), {(0, 0): 1}))
    return [(1.0, isotropic_witness_vector(fhat, d))]


def _refine_flat_piece(eps, a: float, b: float, lo: float, hi: float, h: float) -> tuple[float, float]:
    """Polish grid end points of a hull edge so the chord is tangent to ``eps``."""
    for _ in range(4):
        if lo < a:
            ea, eb = a, b
            res = minimize_scalar(lambda x: -(eps(eb) - eps(x)) / (eb - x),
                                  bounds=(max(lo, ea - h), min(ea + h, eb - h / 2)),
                                  method="bounded", options={"xatol": 1e-13})
            a = float(res.x)
        if b < hi:
            res = minimize_scalar(lambda x: (eps(x) - eps(a)) / (x - a),
                                  bounds=(max(a + h / 2, b - h), min(hi, b + h)),
                                  method="bounded", options={"xatol": 1e-13})
            b = float(res.x)
    return a, b


@functools.lru_cache(maxsize=64)
def isotropic_envelope(d: int, points: int = DEFAULT_GRID):
    """Grid envelope of ``epsilon_isotropic`` on ``[0, d]`` and the refined flat pieces."""
    xs = np.linspace(0.0, float(d), points)
    ys = np.array([epsilon_isotropic(x, d) for x in xs])
    env = lower_convex_envelope(CurveSamples(xs, ys, {"group": f"UUbar({d})"}))
    h = xs[1] - xs[0]
    pieces = [_refine_flat_piece(lambda x: epsilon_isotropic(x, d), a, b, 0.0, float(d), h)
              for a, b in env.flat_pieces]
    return env, tuple(pieces)


def eof_isotropic(fhat: float, d: int, base=None) -> EofResult:
    """E_F of the isotropic state with ``tr(rho Fhat) = fhat``: hull of the eps-function."""
    if d < 2:
        raise DomainError("d must be at least 2")
    fhat = _check_range("fhat", fhat, 0.0, float(d))
    scale = _log_scale(base)
    _, pieces = isotropic_envelope(d)
    for a, b in pieces:
        if a < fhat < b:
            ea, eb = epsilon_isotropic(a, d), epsilon_isotropic(b, d)
            lam = (b - fhat) / (b - a)
            value = (lam * ea + (1 - lam) * eb) * scale
            wit = [(lam * w, v) for w, v in _isotropic_point_witness(a, d)]
            wit += [((1 - lam) * w, v) for w, v in _isotropic_point_witness(b, d)]
            return EofResult(value, "envelope", wit, flat_piece=(a, b), base=_unit(base),
                             meta={"group": f"UUbar({d})"})
    value = epsilon_isotropic(fhat, d) * scale
    return EofResult(value, "envelope" if pieces else "closed_form", _isotropic_point_witness(fhat, d),
                     base=_unit(base), meta={"group": f"UUbar({d})", "flat_pieces": [list(p) for p in pieces]})


# -- OO and Bell-diagonal states -----------------------------------------------------

def _in_triangle(p, a, b, c, tol=1e-12) -> bool:
    m = np.array([[a[0] - c[0], b[0] - c[0]], [a[1] - c[1], b[1] - c[1]]], dtype=float)
    l1, l2 = np.linalg.solve(m, np.array([p[0] - c[0], p[1] - c[1]], dtype=float))
    return min(l1, l2, 1 - l1 - l2) >= -tol


def oo_region(f: float, fhat: float, d: int) -> str:
    """Which part of the OO state space ``(f, fhat)`` lies in: square, A, B or C."""
    p = (f, fhat)
    if not _in_triangle(p, (-1, 0), (1, 0), (1, d)):
        raise OutsideStateSpace(f"({f}, {fhat}) is not an OO({d})-invariant state")
    tol = 1e-12
    if -tol <= f <= 1 + tol and -tol <= fhat <= 1 + tol:
        return "square"
    if _in_triangle(p, (-1, 0), (0, 0), (0, 1)):
        return "B"
    if _in_triangle(p, (0, 1), (1, 1), (1, d)):
        return "A"
    return "C"


def eof_oo(f: float, fhat: float, d: int, base=None) -> EofResult:
    """E_F on the OO state space: 0 on the separable square, Werner value on
    triangle B, isotropic value on triangle A.  Triangle C is not covered."""
    region = oo_region(f, fhat, d)
    meta = {"group": f"OO({d})", "region": region}
    if region == "square":
        return EofResult(0.0, "closed_form", base=_unit(base), meta=meta)
    if region == "B":
        return EofResult(epsilon_werner(min(f, 0.0), base), "extension", base=_unit(base), meta=meta)
    if region == "A":
        r = eof_isotropic(max(fhat, 1.0), d, base)
        return EofResult(r.value, "extension", flat_piece=r.flat_piece, base=_unit(base), meta=meta)
    raise UnsupportedRegion(f"no formula for E_F in triangle C of the OO({d}) state space")


def eof_bell_diagonal(weights, base=None) -> EofResult:
    """E_F of a Bell-diagonal two-qubit state from its Bell-basis weights."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (4,) or np.any(w < -1e-12) or abs(w.sum() - 1.0) > 1e-9:
        raise InvalidDistribution(f"expected four probabilities summing to 1, got {weights!r}")
    c = max(0.0, 2.0 * float(w.max()) - 1.0)
    value = binary_entropy(0.5 * (1.0 + math.sqrt(1.0 - c * c)), base)
    return EofResult(value, "closed_form", base=_unit(base), meta={"group": "Bell", "concurrence": c})


# -- extension to non-invariant states -----------------------------------------------

@dataclass(frozen=True, eq=False)
class ExtensionResult:
    verdict: str  # yes | no | unknown
    rho_tilde: DensityMatrix
    f: float
    value: Optional[float] = None
    product_decomposition: Optional[list[tuple[float, np.ndarray]]] = None

    @property
    def applies(self) -> bool:
        return self.verdict == "yes"


def find_product_decomposition(rho, dims, rng: np.random.Generator, restarts: int = 200,
                               tol: float = 1e-8) -> Optional[list[tuple[float, np.ndarray]]]:
    """Search for ``rho = sum w_i |a_i b_i><a_i b_i|`` with product vectors from its range."""
    m = as_matrix(rho)
    lam, vecs = np.linalg.eigh((m + m.conj().T) / 2)
    rng_vecs = vecs[:, lam > 1e-10]
    r = rng_vecs.shape[1]
    if r == m.shape[0]:
        return None
    proj = rng_vecs @ rng_vecs.conj().T
    found: list[np.ndarray] = []
    for _ in range(restarts):
        val, (a, b) = maximize_product_expectation(proj, dims, rng, restarts=1)
        if val < 1 - 1e-9:
            continue
        v = np.kron(a, b)
        if all(abs(np.vdot(v, u)) ** 2 < 1 - 1e-8 for u in found):
            found.append(v)
    if not found:
        return None
    cols = np.stack([np.outer(v, v.conj()).ravel() for v in found], axis=1)
    target = m.ravel()
    w, _ = nnls(np.vstack([cols.real, cols.imag]), np.concatenate([target.real, target.imag]))
    resid = np.linalg.norm(cols @ w - target)
    if resid > tol:
        return None
    return [(float(x), v) for x, v in zip(w, found) if x > 1e-14]


def extension_applies_werner(rho, *, seed: int = 0, restarts: int = 200) -> ExtensionResult:
    """Test whether the Werner formula gives E_F for a (not necessarily invariant) state.

    ``rho`` is mapped to ``N (1 + tF) rho (1 + tF)`` with ``t`` chosen so the
    flip expectation vanishes.  The formula applies iff that state is
    separable; the verdict is ``"unknown"`` when separability cannot be settled.
    """
    m = as_matrix(rho)
    dims = rho.dims if isinstance(rho, DensityMatrix) else None
    n = m.shape[0]
    d = int(round(math.sqrt(n)))
    if d * d != n or (dims is not None and dims != (d, d)):
        raise DimensionMismatch("the extension test needs a d x d system")
    F = flip_operator(d).mat
    f = float(np.einsum("ij,ji->", m, F).real)
    if not (-1.0 < f < 0.0):
        raise FlipExpectationOutOfRange(f"flip expectation {f:.6g} not in (-1, 0)")
    # (1 + t^2) f + 2 t = 0, root with |t| < 1
    t = (math.sqrt(1.0 - f * f) - 1.0) / f
    k = np.eye(n) + t * F
    rt = k @ m @ k
    rt = rt / np.trace(rt).real
    rho_tilde = DensityMatrix.from_matrix(rt, (d, d))

    verdict, decomp = "unknown", None
    pt_min = float(hermitian_spectrum(partial_transpose(rho_tilde))[0])
    if pt_min < -1e-9:
        verdict = "no"
    elif d == 2:
        verdict = "yes"
    elif np.max(np.abs(twirl(GroupSpec.uu(d), rt).mat - rt)) <= 1e-9:
        # a UU-invariant state with flip expectation 0 is separable
        verdict = "yes"
    else:
        decomp = find_product_decomposition(rt, (d, d), np.random.default_rng(seed), restarts)
        if decomp is not None:
            verdict = "yes"
    value = epsilon_werner(f) if verdict == "yes" else None
    return ExtensionResult(verdict, rho_tilde, f, value, decomp)


# -- numeric routes ---------------------------------------------------------------------

class _PureProblem:
    """Entanglement and twirled coordinates of an unnormalized pure state, with gradients.

    Gradients are returned with respect to ``x = [Re v, Im v]``.
    """

    def __init__(self, group: GroupSpec):
        self.group = group
        self.dims = group.dims
        self.n = self.dims[0] * self.dims[1]
        self.ops = _hermitian_coordinate_ops(group)

    def split(self, x):
        return x[: self.n] + 1j * x[self.n:]

    @staticmethod
    def join(g):
        return np.concatenate([2 * g.real, 2 * g.imag])

    def entropy(self, v):
        nrm = np.vdot(v, v).real
        mat = v.reshape(self.dims)
        rho = mat @ mat.conj().T / nrm
        lam, u = np.linalg.eigh(rho)
        lam = np.clip(lam, 1e-16, None)
        log = (u * np.log(lam)) @ u.conj().T
        e = float(-np.sum(lam * np.log(lam)))
        trl = float(np.sum(lam * np.log(lam)))
        g = (-log @ mat + trl * mat) / nrm
        return e, g.ravel()

    def coords(self, v):
        nrm = np.vdot(v, v).real
        hv = np.einsum("kij,j->ki", self.ops, v)
        a = (v.conj() @ hv.T).real / nrm
        grads = (hv - a[:, None] * v[None, :]) / nrm
        return a, grads

    def evaluate(self, v):
        """Exact entropy (no clipping bias) and coordinates of the normalized state."""
        v = v / np.linalg.norm(v)
        return schmidt_entanglement(v, dims=self.dims), self.coords(v)[0]


def _alm(problem: _PureProblem, target: np.ndarray, x0: np.ndarray, stages: int = 5,
         mu0: float = 10.0, growth: float = 10.0, maxiter: int = 400):
    """Augmented-Lagrangian minimization of the entropy subject to ``coords = target``."""
    nu = np.zeros_like(target)
    mu = mu0
    x = x0
    for _ in range(stages):
        def fun(x, nu=nu, mu=mu):
            v = problem.split(x)
            e, ge = problem.entropy(v)
            a, ga = problem.coords(v)
            r = a - target
            val = e + nu @ r + 0.5 * mu * r @ r
            g = ge + (nu + mu * r) @ ga
            return val, problem.join(g)

        res = minimize(fun, x, jac=True, method="L-BFGS-B", options={"maxiter": maxiter, "gtol": 1e-12})
        x = res.x
        v = problem.split(x)
        x = x / np.linalg.norm(v)
        a, _ = problem.coords(problem.split(x))
        nu = nu + mu * (a - target)
        mu *= growth
    v = problem.split(x)
    v = v / np.linalg.norm(v)
    e, a = problem.evaluate(v)
    return v, e, a


def _face_minimizer(problem: _PureProblem, direction: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Least entangled vector (local search) in the lowest eigenspace of ``sum_k c_k H_k``.

    Every vector in that eigenspace has coordinates on the same supporting
    hyperplane, so boundary points of the coordinate image are reached exactly.
    """
    h = np.einsum("k,kij->ij", direction, problem.ops)
    lam, vecs = np.linalg.eigh(h)
    q = vecs[:, lam <= lam[0] + 1e-10]
    r = q.shape[1]
    z0 = rng.standard_normal(r) + 1j * rng.standard_normal(r)
    if r == 1:
        return q[:, 0]

    def fun(x):
        z = x[:r] + 1j * x[r:]
        e, g = problem.entropy(q @ z)
        gz = q.conj().T @ g
        return e, np.concatenate([2 * gz.real, 2 * gz.imag])

    res = minimize(fun, np.concatenate([z0.real, z0.imag]), jac=True, method="L-BFGS-B",
                   options={"maxiter": 300})
    v = q @ (res.x[:r] + 1j * res.x[r:])
    return v / np.linalg.norm(v)


def _target_vector(group: GroupSpec, c) -> np.ndarray:
    if isinstance(c, InvariantCoords):
        c = c.values
    return real_embedding(np.atleast_1d(np.asarray(c)))


def _check_in_state_space(group: GroupSpec, t: np.ndarray) -> None:
    try:
        space = invariant_state_space(group)
    except Unsupported:
        return
    if not space.contains(t if space.dim > 1 else t[0], 1e-9):
        raise OutsideStateSpace(f"coordinates {t} are outside the {group.name} state space")


def _random_vector(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


@dataclass(frozen=True, eq=False)
class EpsilonResult:
    value: float
    witness: PureStateVector
    residual: float


def epsilon_numeric(group: GroupSpec, c, budget: int = 128, *, seed: int = 0, base=None,
                    feasibility: float = 1e-6) -> EpsilonResult:
    """Upper bound on ``eps(c)`` by constrained local descent on the pure-state sphere.

    ``budget`` is the number of random restarts; the best feasible local
    minimum is returned together with its witness vector.
    """
    t = _target_vector(group, c)
    _check_in_state_space(group, t)
    prob = _PureProblem(group)
    best = None
    for i in range(budget):
        rng = np.random.default_rng([seed, i])
        v0 = _random_vector(prob.n, rng)
        v, e, a = _alm(prob, t, np.concatenate([v0.real, v0.imag]))
        res = float(np.max(np.abs(a - t)))
        if res <= feasibility and (best is None or e < best[0]):
            best = (e, v, res)
    if best is None:
        raise Infeasible(f"no pure state found with coordinates {t} (restarts={budget})")
    e, v, res = best
    return EpsilonResult(e * _log_scale(base), PureStateVector.normalized(group.dims, v), res)


def _budget(budget: Union[str, int]) -> tuple[int, int, int]:
    if isinstance(budget, str):
        if budget not in BUDGETS:
            raise InputError(f"unknown budget {budget!r}; choose from {sorted(BUDGETS)}")
        return BUDGETS[budget]
    n = int(budget)
    return (n, 3, 8 * n)


def eof_bruteforce(group: GroupSpec, c, K: Optional[int] = None, budget: Union[str, int] = "small",
                   *, seed: int = 0, base=None) -> EofResult:
    """Oracle upper bound on E_F: minimize ``sum_i w_i E(psi_i)`` with ``sum_i w_i coords(psi_i) = c``.

    A pool of pure states is built from random vectors, random product vectors
    and entropy-minimizing vectors aimed at targets around ``c``; the optimal
    weights over the pool are then an exact linear program.  Pools for a larger
    budget contain those of a smaller one, so the bound never increases with budget.
    """
    t = _target_vector(group, c)
    _check_in_state_space(group, t)
    m = len(t)
    if K is None:
        K = (group.dims[0] * group.dims[1]) ** 2
    if K < 2:
        raise InputError("K must be at least 2")
    if K < m + 1:
        raise InputError(f"K={K} is below the {m + 1} terms a basic solution may need")
    n_targets, restarts, n_random = _budget(budget)
    prob = _PureProblem(group)
    d1, d2 = group.dims

    vecs: list[np.ndarray] = []
    for i in range(n_random):
        rng = np.random.default_rng([seed, 0, i])
        vecs.append(_random_vector(prob.n, rng))
        a = _random_vector(d1, rng)
        b = _random_vector(d2, rng)
        vecs.append(np.kron(a, b))
    for i in range(n_targets):
        rng = np.random.default_rng([seed, 1, i])
        if i == 0:
            target = t
        else:
            _, anchor = prob.evaluate(_random_vector(prob.n, rng))
            s = rng.uniform(0.0, 0.5)
            target = (1 - s) * t + s * anchor
        for j in range(restarts):
            rj = np.random.default_rng([seed, 2, i, j])
            v0 = _random_vector(prob.n, rj)
            v, _, _ = _alm(prob, target, np.concatenate([v0.real, v0.imag]), maxiter=200)
            vecs.append(v)
    # exact boundary points: least entangled vectors in lowest eigenspaces
    m = len(t)
    directions = [s * e for e in np.eye(m) for s in (1.0, -1.0)]
    directions += [np.random.default_rng([seed, 3, i]).standard_normal(m) for i in range(n_targets)]
    for i, c in enumerate(directions):
        for j in range(restarts):
            vecs.append(_face_minimizer(prob, c, np.random.default_rng([seed, 4, i, j])))

    ents, pts = [], []
    for v in vecs:
        e, a = prob.evaluate(v)
        ents.append(e)
        pts.append(a)
    ents = np.array(ents)
    pts = np.array(pts)
    a_eq = np.vstack([pts.T, np.ones(len(vecs))])
    b_eq = np.append(t, 1.0)
    lp = linprog(ents, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if lp.status != 0:
        raise Infeasible(f"pool does not cover coordinates {t}; raise the budget ({lp.message})")
    w = lp.x
    support = np.flatnonzero(w > 1e-12)
    # polish the weights on the support so the constraints hold to round-off
    ws, *_ = np.linalg.lstsq(a_eq[:, support], b_eq, rcond=None)
    if np.all(ws >= 0):
        w = np.zeros_like(w)
        w[support] = ws
    support = np.flatnonzero(w > 0)
    if len(support) > K:
        raise Infeasible(f"optimal pool ensemble has {len(support)} terms, more than K={K}")
    decomposition = [(float(w[i]), PureStateVector.normalized(group.dims, vecs[i])) for i in support]
    value = float(w[support] @ ents[support])
    return EofResult(value * _log_scale(base), "oracle_upper_bound", decomposition, base=_unit(base),
                     meta={"group": group.name, "pool": len(vecs), "budget": budget, "seed": seed,
                           "constraint_residual": float(np.max(np.abs(a_eq @ w - b_eq)))})


def witness_check(group: GroupSpec, result: EofResult, c) -> dict:
    """Residuals of a decomposition against the invariants of :class:`EofResult`."""
    t = _target_vector(group, c)
    prob = _PureProblem(group)
    ws = np.array([w for w, _ in result.decomposition])
    es, pts = [], []
    for _, v in result.decomposition:
        e, a = prob.evaluate(v.amplitudes)
        es.append(e)
        pts.append(a)
    scale = 1.0 if result.base == "nats" else 1 / math.log(2)
    return {
        "weights_nonnegative": bool(np.all(ws >= 0)),
        "weight_sum": abs(ws.sum() - 1.0),
        "value": abs(float(ws @ np.array(es)) * scale - result.value),
        "coords": float(np.max(np.abs(ws @ np.array(pts) - t))),
    }
