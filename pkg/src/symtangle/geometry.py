"""Regions in invariant-coordinate space and 1-D convex envelopes.

Coordinates are the expectations of the non-identity commutant basis
elements (see :func:`symtangle.groups.coords`); complex coordinates are
embedded as ``[Re..., Im...]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection
from scipy.spatial import QhullError

from .errors import DimensionMismatch, InputError, Unsupported, UnsortedGrid
from .groups import (
    GroupSpec,
    InvariantCoords,
    commutant_basis,
    coords,
    extreme_states,
    haar_unitary,
    real_embedding,
    twiddle,
)
from .opcore import partial_transpose

VERTEX_TOL = 1e-9
DEFAULT_GRID = 1025


# -- hull helpers -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class _Hull:
    """Convex hull of a point set, possibly lower-dimensional than the ambient space."""

    origin: np.ndarray
    frame: np.ndarray  # (m, k) orthonormal rows spanning the affine hull
    equations: Optional[np.ndarray]  # facets a.x + b <= 0 in frame coordinates
    vertex_index: np.ndarray
    span: tuple[float, float] = (0.0, 0.0)  # used when the hull is a segment

    @classmethod
    def build(cls, pts: np.ndarray) -> "_Hull":
        pts = np.asarray(pts, dtype=float)
        origin = pts.mean(axis=0)
        centered = pts - origin
        if len(pts) == 1 or np.max(np.abs(centered)) < VERTEX_TOL:
            return cls(origin, np.zeros((0, pts.shape[1])), None, np.array([0]))
        _, s, vt = np.linalg.svd(centered, full_matrices=False)
        m = int(np.sum(s > VERTEX_TOL * max(1.0, s[0])))
        frame = vt[:m]
        local = centered @ frame.T
        if m == 1:
            t = local[:, 0]
            lo, hi = int(np.argmin(t)), int(np.argmax(t))
            return cls(origin, frame, None, np.array(sorted({lo, hi})), (float(t[lo]), float(t[hi])))
        hull = ConvexHull(local)
        eq = _merge_facets(hull.equations)
        idx = _extreme_subset(local, hull.vertices)
        return cls(origin, frame, eq, idx)

    def contains(self, x: np.ndarray, tol: float) -> np.ndarray:
        x = np.atleast_2d(x)
        centered = x - self.origin
        local = centered @ self.frame.T
        off = np.linalg.norm(centered - local @ self.frame, axis=1) if len(self.frame) else np.linalg.norm(centered, axis=1)
        ok = off <= tol
        if self.frame.shape[0] == 1:
            lo, hi = self.span
            t = local[:, 0]
            ok &= (t >= lo - tol) & (t <= hi + tol)
        elif self.equations is not None:
            viol = local @ self.equations[:, :-1].T + self.equations[:, -1]
            ok &= np.all(viol <= tol, axis=1)
        return ok


def _merge_facets(eq: np.ndarray) -> np.ndarray:
    keep = []
    for row in eq:
        if not any(np.allclose(row, k, atol=1e-9) for k in keep):
            keep.append(row)
    return np.array(keep)


def _extreme_subset(local: np.ndarray, cand: np.ndarray) -> np.ndarray:
    """Drop qhull vertices that lie in the hull of the others (tolerance ``VERTEX_TOL``)."""
    keep = list(cand)
    for i in list(cand):
        others = [j for j in keep if j != i]
        a = np.vstack([local[others].T, np.ones(len(others))])
        b = np.append(local[i], 1.0)
        res = linprog(np.zeros(len(others)), A_eq=a, b_eq=b, bounds=(0, None), method="highs",
                      options={"primal_feasibility_tolerance": VERTEX_TOL})
        if res.status == 0:
            keep.remove(i)
    return np.array(sorted(keep))


# -- regions -----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Region:
    """Convex set in coordinate space.

    ``kind`` is ``"interval"`` (1-D, ``lo``/``hi``), ``"polytope"`` (vertex list)
    or ``"sampled"`` (hull of optimized points; an inner approximation).
    ``outer`` optionally carries a region known to contain this one.
    """

    kind: str
    labels: tuple[str, ...]
    exact: bool = True
    lo: Optional[float] = None
    hi: Optional[float] = None
    vertices: Optional[np.ndarray] = None
    outer: Optional["Region"] = None
    group: Optional[str] = None
    _hull: Optional[_Hull] = field(default=None, repr=False)

    @classmethod
    def interval(cls, lo, hi, labels=("x",), **kw) -> "Region":
        if lo > hi:
            raise InputError(f"empty interval [{lo}, {hi}]")
        return cls("interval", tuple(labels), lo=float(lo), hi=float(hi), **kw)

    @classmethod
    def from_points(cls, pts, labels, kind: str = "polytope", **kw) -> "Region":
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        if pts.shape[1] == 1 and kind != "sampled":
            return cls.interval(pts.min(), pts.max(), labels, **kw)
        hull = _Hull.build(pts)
        return cls(kind, tuple(labels), vertices=pts[hull.vertex_index], _hull=hull, **kw)

    @property
    def dim(self) -> int:
        return 1 if self.kind == "interval" else self.vertices.shape[1]

    def vertex_array(self) -> np.ndarray:
        if self.kind == "interval":
            return np.array([[self.lo], [self.hi]])
        return self.vertices

    def contains(self, point, tol: float = 1e-9):
        return region_membership(self, point, tol)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "basis_labels": list(self.labels), "exact": bool(self.exact)}
        if self.kind == "interval":
            out["interval"] = [_clean(self.lo), _clean(self.hi)]
        else:
            out["vertices"] = [[_clean(x) for x in v] for v in _sorted_rows(self.vertices)]
        if self.group is not None:
            out["group"] = self.group
        if self.outer is not None:
            out["outer"] = self.outer.to_dict()
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "Region":
        outer = cls.from_dict(data["outer"]) if data.get("outer") else None
        kw = dict(exact=data["exact"], outer=outer, group=data.get("group"))
        if data["kind"] == "interval":
            lo, hi = data["interval"]
            return cls.interval(lo, hi, data["basis_labels"], **kw)
        return cls.from_points(data["vertices"], data["basis_labels"], kind=data["kind"], **kw)


def _clean(x: float) -> float:
    # round away hull round-off and negative zeros for stable serialized output
    return round(float(x), 13) + 0.0


def _sorted_rows(v: np.ndarray) -> np.ndarray:
    order = np.lexsort(np.round(v, 12).T[::-1])
    return v[order]


def region_membership(r: Region, point, tol: float = 1e-9):
    """Whether ``point`` (or each row of a 2-D array) lies within ``tol`` of ``r``."""
    x = np.asarray(point, dtype=float)
    single = x.ndim <= 1 and not (r.dim > 1 and x.ndim == 1 and x.shape[0] != r.dim)
    if r.kind == "interval":
        x = x.reshape(-1, 1) if x.ndim <= 1 else x
        if x.shape[1] != 1:
            raise DimensionMismatch(f"interval expects scalar points, got shape {x.shape}")
        ok = (x[:, 0] >= r.lo - tol) & (x[:, 0] <= r.hi + tol)
        return bool(ok[0]) if single and ok.size == 1 else ok
    x2 = np.atleast_2d(x)
    if x2.shape[1] != r.dim:
        raise DimensionMismatch(f"region has dimension {r.dim}, point has {x2.shape[1]}")
    hull = r._hull or _Hull.build(r.vertices)
    ok = hull.contains(x2, tol)
    return bool(ok[0]) if x.ndim == 1 else ok


def intersect(a: Region, b: Region, **kw) -> Region:
    """Intersection of two exact regions of the same dimension."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"{a.dim} vs {b.dim}")
    if a.kind == "interval":
        lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
        return Region.interval(lo, hi, a.labels, **kw)
    ha, hb = a._hull, b._hull
    k = a.dim
    if ha.frame.shape[0] != k or hb.frame.shape[0] != k:
        raise Unsupported("intersection needs full-dimensional polytopes")
    halfspaces = []
    for h in (ha, hb):
        # a.(R(x - o)) + b <= 0  ->  (R^T a).x + (b - (R^T a).o) <= 0
        normals = h.equations[:, :-1] @ h.frame
        offsets = h.equations[:, -1] - normals @ h.origin
        halfspaces.append(np.hstack([normals, offsets[:, None]]))
    hs = np.vstack(halfspaces)
    norm = np.linalg.norm(hs[:, :-1], axis=1)
    c = np.zeros(k + 1)
    c[-1] = -1
    lp = linprog(c, A_ub=np.hstack([hs[:, :-1], norm[:, None]]), b_ub=-hs[:, -1],
                 bounds=[(None, None)] * k + [(0, None)], method="highs")
    if lp.status != 0 or lp.x[-1] < 1e-12:
        raise Unsupported("intersection is empty or lower-dimensional")
    pts = HalfspaceIntersection(hs, lp.x[:-1]).intersections
    return Region.from_points(_dedupe(pts), a.labels, **kw)


def _dedupe(pts: np.ndarray) -> np.ndarray:
    out = []
    for p in pts:
        if not any(np.allclose(p, q, atol=1e-9) for q in out):
            out.append(p)
    return np.array(out)


# -- state spaces ------------------------------------------------------------------

def _labels(group: GroupSpec) -> tuple[str, ...]:
    basis = commutant_basis(group)
    lab = basis.coord_labels
    if basis.hermitian:
        return lab
    return tuple(f"Re {x}" for x in lab) + tuple(f"Im {x}" for x in lab)


def invariant_state_space(group: GroupSpec) -> Region:
    """Set of invariant states: the simplex spanned by the normalized minimal projections."""
    basis = commutant_basis(group)
    if not basis.is_abelian:
        raise Unsupported(
            f"{group.name}: the commutant is non-abelian; its state space is isomorphic to a "
            "full matrix state space and has no vertex description"
        )
    pts = np.array([real_embedding(coords(group, w).values) for w in extreme_states(group)])
    return Region.from_points(pts, _labels(group), group=group.name)


def ppt_region(group: GroupSpec) -> Region:
    """Partial transpose of the twiddle group's state space, in this group's coordinates.

    Its intersection with :func:`invariant_state_space` is the set of invariant
    states with positive partial transpose (see :func:`ppt_states`).
    """
    tg = twiddle(group)
    if not commutant_basis(tg).is_abelian:
        raise Unsupported(f"twiddle group {tg.name} has a non-abelian commutant")
    pts = []
    for w in extreme_states(tg):
        pts.append(real_embedding(coords(group, partial_transpose(w)).values))
    return Region.from_points(np.array(pts), _labels(group), group=group.name)


def ppt_states(group: GroupSpec) -> Region:
    """Invariant states with positive partial transpose."""
    return intersect(invariant_state_space(group), ppt_region(group), group=group.name)


# -- product vectors ------------------------------------------------------------------

def _hermitian_coordinate_ops(group: GroupSpec) -> np.ndarray:
    """Hermitian operators whose expectations are the real-embedded coordinates."""
    basis = commutant_basis(group)
    s = basis.stack[:-1]
    if basis.hermitian:
        return s
    re = (s + s.conj().transpose(0, 2, 1)) / 2
    im = (s - s.conj().transpose(0, 2, 1)) / 2j
    return np.concatenate([re, im])


def product_expectations(group: GroupSpec, phi, psi) -> InvariantCoords:
    """Coordinates of the pure product state ``phi (x) psi``."""
    d1, d2 = group.dims
    phi = np.asarray(phi, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    if phi.shape != (d1,) or psi.shape != (d2,):
        raise DimensionMismatch(f"{group.name} needs vectors of sizes {(d1, d2)}, got {phi.shape}, {psi.shape}")
    v = np.kron(phi / np.linalg.norm(phi), psi / np.linalg.norm(psi))
    return coords(group, np.outer(v, v.conj()))


def product_expectations_batch(group: GroupSpec, phis: np.ndarray, psis: np.ndarray) -> np.ndarray:
    """Real-embedded coordinates for rows of ``phis``/``psis`` (vectorized)."""
    phis = phis / np.linalg.norm(phis, axis=1, keepdims=True)
    psis = psis / np.linalg.norm(psis, axis=1, keepdims=True)
    v = np.einsum("ni,nj->nij", phis, psis).reshape(len(phis), -1)
    ops = _hermitian_coordinate_ops(group)
    return np.einsum("ni,kij,nj->nk", v.conj(), ops, v).real


def random_product_vectors(group: GroupSpec, n: int, rng: np.random.Generator):
    """``n`` Haar-random unit vector pairs for Alice and Bob."""
    d1, d2 = group.dims
    phis = rng.standard_normal((n, d1)) + 1j * rng.standard_normal((n, d1))
    psis = rng.standard_normal((n, d2)) + 1j * rng.standard_normal((n, d2))
    phis /= np.linalg.norm(phis, axis=1, keepdims=True)
    psis /= np.linalg.norm(psis, axis=1, keepdims=True)
    return phis, psis


def maximize_product_expectation(h: np.ndarray, dims, rng: np.random.Generator,
                                 restarts: int = 64, iters: int = 200):
    """Maximize ``<phi psi|h|phi psi>`` over unit product vectors by alternating eigen-steps."""
    d1, d2 = dims
    t = h.reshape(d1, d2, d1, d2)
    best, best_pair = -np.inf, None
    for _ in range(restarts):
        psi = rng.standard_normal(d2) + 1j * rng.standard_normal(d2)
        psi /= np.linalg.norm(psi)
        val = -np.inf
        for _ in range(iters):
            a = np.einsum("ajbk,j,k->ab", t, psi.conj(), psi)
            w, v = np.linalg.eigh((a + a.conj().T) / 2)
            phi = v[:, -1]
            b = np.einsum("jakb,j,k->ab", t, phi.conj(), phi)
            w, v = np.linalg.eigh((b + b.conj().T) / 2)
            psi = v[:, -1]
            if w[-1] - val < 1e-14:
                val = w[-1]
                break
            val = w[-1]
        if val > best:
            best, best_pair = val, (phi, psi)
    return best, best_pair


def _exact_separable(group: GroupSpec) -> Optional[np.ndarray]:
    f = group.family
    if f == "OO":
        return np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=float)
    if f == "Bell":
        return np.vstack([np.eye(3), -np.eye(3)])
    if f == "Tensor":
        g, h = group.factors
        if g.family == h.family == "UU" and g.d == h.d:
            d = g.d
            return np.array([[0, 0, 0], [0, 1, 0], [1, 0, 0], [1, 1, 1], [1 / d, 1 / d, 1]])
    if f == "TensorFlip":
        d = group.d
        # image of the UUVV separable polytope under (f1, f2, f12) -> ((f1 + f2)/2, f12)
        return np.array([[0, 0], [0.5, 0], [1, 1], [1 / d, 1]])
    return None


def separable_region(group: GroupSpec, budget: int = 32, *, restarts: int = 64,
                     seed: int = 0) -> Region:
    """Invariant separable states.

    Exact for UU, UUbar, OO, Bell, Tensor(UU(d), UU(d)) and TensorFlip; otherwise
    the hull of product-state coordinates that maximize ``budget`` random linear
    objectives (plus the coordinate axes), flagged ``exact=False``.  When the
    PPT set is computable it is attached as ``outer``.
    """
    labels = _labels(group)
    try:
        outer = ppt_states(group)
    except Unsupported:
        outer = None
    if group.family in ("UU", "UUbar"):
        return Region.interval(0.0, 1.0, labels, group=group.name, outer=outer)
    pts = _exact_separable(group)
    if pts is not None:
        return Region.from_points(pts, labels, group=group.name, outer=outer)

    rng = np.random.default_rng(seed)
    ops = _hermitian_coordinate_ops(group)
    k = len(ops)
    dirs = [s * e for e in np.eye(k) for s in (1, -1)]
    for _ in range(budget):
        c = rng.standard_normal(k)
        dirs.append(c / np.linalg.norm(c))
    found = []
    for c in dirs:
        h = np.einsum("k,kij->ij", c, ops)
        _, (phi, psi) = maximize_product_expectation(h, group.dims, rng, restarts=restarts)
        found.append(real_embedding(product_expectations(group, phi, psi).values))
    found = np.array(found)
    if k == 1:
        return Region.interval(found.min(), found.max(), labels, exact=False, group=group.name, outer=outer)
    return Region.from_points(found, labels, kind="sampled", exact=False, group=group.name, outer=outer)


# -- 1-D convex envelopes ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CurveSamples:
    xs: np.ndarray
    ys: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape:
            raise InputError("xs and ys must be 1-D arrays of equal length")
        if np.any(np.diff(xs) <= 0):
            raise UnsortedGrid("xs must be strictly ascending")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)


@dataclass(frozen=True, eq=False)
class Envelope:
    curve: CurveSamples
    flat_pieces: list[tuple[float, float]]
    hull_indices: np.ndarray

    def __iter__(self):
        return iter((self.curve, self.flat_pieces))


def lower_convex_envelope(c: CurveSamples, tol: float = 1e-12) -> Envelope:
    """Greatest convex minorant of the piecewise-linear interpolant of ``c``.

    Flat pieces are the hull edges along which the envelope lies strictly
    below some sample (by more than ``tol`` relative to the data scale);
    each is reported by its two end points.
    """
    xs, ys = c.xs, c.ys
    if len(xs) < 2:
        raise InputError("need at least two samples")
    hull: list[int] = []
    for i in range(len(xs)):
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (xs[a] - xs[o]) * (ys[i] - ys[o]) - (ys[a] - ys[o]) * (xs[i] - xs[o])
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    idx = np.array(hull)
    env = np.interp(xs, xs[idx], ys[idx])
    scale = tol * max(1.0, float(np.max(np.abs(ys))))
    pieces = []
    for a, b in zip(idx[:-1], idx[1:]):
        if b > a + 1 and np.max(ys[a + 1:b] - env[a + 1:b]) > scale:
            pieces.append((float(xs[a]), float(xs[b])))
    return Envelope(CurveSamples(xs, env, dict(c.meta)), pieces, idx)


def second_differences(ys: Sequence[float]) -> np.ndarray:
    ys = np.asarray(ys, dtype=float)
    return ys[2:] - 2 * ys[1:-1] + ys[:-2]
