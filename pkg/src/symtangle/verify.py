"""Self-check suites run by ``symtangle verify``.

Each suite returns a list of checks ``{"name", "residual", "tolerance", "passed"}``;
a suite passes when every check does.
"""

from __future__ import annotations

import math
import zlib
from typing import Callable

import numpy as np

from .eof import eof_bruteforce, eof_isotropic, eof_werner
from .geometry import ppt_states, product_expectations, separable_region
from .groups import GroupSpec, coords, haar_sample, twiddle, twirl
from .opcore import Operator, hermitian_spectrum, partial_transpose
from .ree import additivity_counterexample, ree_isotropic, ree_numeric, ree_werner

TWIRL_FAMILIES = (GroupSpec.uu(3), GroupSpec.uubar(3), GroupSpec.oo(3), GroupSpec.bell(), GroupSpec.weyl(3))

BELL_VECTORS = np.array([[1, 0, 0, 1], [0, 1, 1, 0], [0, 1, -1, 0], [1, 0, 0, -1]]) / math.sqrt(2)


def _check(name: str, residual: float, tol: float, **extra) -> dict:
    return {"name": name, "residual": float(residual), "tolerance": tol, "passed": bool(residual <= tol), **extra}


def _ginibre(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def random_density(n: int, rng: np.random.Generator) -> np.ndarray:
    g = _ginibre(n, rng)
    m = g @ g.conj().T
    return m / np.trace(m).real


def suite_twirl(seed: int = 0, samples: int = 50, families=TWIRL_FAMILIES) -> list[dict]:
    """Idempotence, invariance of the image, and duality of the twirl."""
    out = []
    for g in families:
        rng = np.random.default_rng([seed, zlib.crc32(g.name.encode())])
        n = g.dims[0] * g.dims[1]
        idem = comm = dual = 0.0
        for _ in range(samples):
            a = _ginibre(n, rng)
            rho = random_density(n, rng)
            pa = twirl(g, a).mat
            idem = max(idem, np.max(np.abs(twirl(g, pa).mat - pa)))
            u = haar_sample(g, rng).mat
            comm = max(comm, np.max(np.abs(u @ pa - pa @ u)))
            lhs = np.trace(twirl(g, rho).mat @ a)
            rhs = np.trace(rho @ pa)
            dual = max(dual, abs(lhs - rhs))
        out += [
            _check(f"{g.name} idempotence", idem, 1e-9),
            _check(f"{g.name} commutes with group", comm, 1e-9),
            _check(f"{g.name} duality", dual, 1e-9),
        ]
    return out


def suite_ppt(seed: int = 0, samples: int = 50, families=TWIRL_FAMILIES) -> list[dict]:
    """Partial transpose intertwines the twirls of a group and of its twiddle group."""
    out = []
    for g in families:
        rng = np.random.default_rng([seed, 1, zlib.crc32(g.name.encode())])
        tg = twiddle(g)
        n = g.dims[0] * g.dims[1]
        worst = 0.0
        for _ in range(samples):
            a = _ginibre(n, rng)
            lhs = partial_transpose(twirl(g, a)).mat
            rhs = twirl(tg, partial_transpose(Operator(g.dims, a))).mat
            worst = max(worst, np.max(np.abs(lhs - rhs)))
        out.append(_check(f"{g.name} partial transpose vs {tg.name} twirl", worst, 1e-9, twiddle=tg.name))
    return out


def bell_disagreements(n: int, seed: int = 0, tol: float = 1e-10) -> int:
    """Count random Bell-diagonal states where the three separability tests disagree."""
    rng = np.random.default_rng(seed)
    g = GroupSpec.bell()
    sep = separable_region(g)
    bad = 0
    for w in rng.dirichlet(np.ones(4), size=n):
        rho = np.einsum("k,ki,kj->ij", w, BELL_VECTORS, BELL_VECTORS)
        by_weight = w.max() <= 0.5
        by_ppt = hermitian_spectrum(partial_transpose(Operator((2, 2), rho)))[0] >= -tol
        by_region = bool(sep.contains(coords(g, rho).values, tol))
        bad += not (by_weight == by_ppt == by_region)
    return bad


def suite_regions(seed: int = 0, samples: int = 2000) -> list[dict]:
    out = []
    out.append(_check("Bell weight/PPT/octahedron disagreements", bell_disagreements(samples, seed), 0))
    oo = GroupSpec.oo(3)
    phi = np.array([1, 1j, 0]) / math.sqrt(2)
    e1, e2 = np.eye(3)[:2]
    corners = [((phi, phi), (1, 0)), ((phi, phi.conj()), (0, 1)), ((e1, e2), (0, 0)), ((e1, e1), (1, 1))]
    worst = max(float(np.max(np.abs(product_expectations(oo, a, b).values - want)))
                for (a, b), want in corners)
    out.append(_check("OO square corners from product vectors", worst, 1e-12))
    uuvv = GroupSpec.tensor(GroupSpec.uu(3), GroupSpec.uu(3))
    psi = alice_bob_product_state(3)
    c = coords(uuvv, np.outer(psi, psi.conj())).values
    out.append(_check("UUVV twirl of Alice-Bob product state", np.max(np.abs(c - [1 / 3, 1 / 3, 1])), 1e-10))
    out.append(_check("UUVV PPT polytope vertex count", abs(len(ppt_states(uuvv).vertices) - 5), 0))
    return out


def alice_bob_product_state(d: int) -> np.ndarray:
    """Each party holds a maximally entangled vector on its two subsystems.

    In the Alice-Bob ordering used by :func:`~symtangle.opcore.tensor` this is a
    plain Kronecker product; it is entangled across each of the two pairs.
    """
    phi = np.eye(d).ravel() / math.sqrt(d)
    return np.kron(phi, phi)


def suite_eof_oracle(seed: int = 0, budget: str = "small") -> list[dict]:
    out = []
    for d in (2, 3):
        for f in (-1.0, -0.5):
            exact = eof_werner(f, d).value
            orc = eof_bruteforce(GroupSpec.uu(d), [f], budget=budget, seed=seed).value
            out.append(_check(f"UU({d}) f={f} oracle - closed form", max(orc - exact, exact - orc - 1e-3, 0.0), 1e-2))
    exact = eof_isotropic(2.0, 3).value
    orc = eof_bruteforce(GroupSpec.uubar(3), [2.0], budget=budget, seed=seed).value
    out.append(_check("UUbar(3) fhat=2 oracle - closed form", max(orc - exact, exact - orc - 1e-3, 0.0), 1e-2))
    return out


def suite_ree(seed: int = 0) -> list[dict]:
    out = []
    worst = 0.0
    for d in (2, 3):
        for f in np.linspace(-1, 0, 11):
            worst = max(worst, abs(ree_numeric(GroupSpec.uu(d), [f]).value - ree_werner(f)))
        for x in np.linspace(0, d, 11):
            worst = max(worst, abs(ree_numeric(GroupSpec.uubar(d), [x]).value - ree_isotropic(x, d)))
    out.append(_check("numeric vs closed form on Werner/isotropic grids", worst, 1e-6))
    for d in (2, 3):
        rep = additivity_counterexample(d)
        out.append(_check(f"counterexample d={d} numeric vs analytic", abs(rep.numeric_minus_analytic), 1e-6))
        out.append(_check(f"counterexample d={d} violation", abs(rep.violation - rep.violation_analytic), 1e-9))
    return out


SUITES: dict[str, Callable[..., list[dict]]] = {
    "twirl": suite_twirl,
    "ppt": suite_ppt,
    "regions": suite_regions,
    "eof-oracle": suite_eof_oracle,
    "ree": suite_ree,
}
