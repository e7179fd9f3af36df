import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_density
from symtangle.errors import InputError, NotAState, Unsupported
from symtangle.groups import (
    GroupSpec,
    commutant_basis,
    coords,
    group_elements,
    haar_orthogonal,
    haar_su2,
    haar_sample,
    haar_unitary,
    monte_carlo_twirl,
    spin_matrices,
    state_from_coords,
    su2_projections,
    su2_representation,
    twiddle,
    twirl,
    twirl_residual,
    weights,
)
from symtangle.opcore import flip_operator, partial_transpose, phihat_operator

ALL = [
    GroupSpec.uu(2), GroupSpec.uu(3), GroupSpec.uubar(3), GroupSpec.oo(3), GroupSpec.bell(),
    GroupSpec.weyl(3), GroupSpec.weyl_tilde(3), GroupSpec.su2(1, 1), GroupSpec.su2(0.5, 1),
    GroupSpec.tensor(GroupSpec.uu(2), GroupSpec.uu(2)), GroupSpec.tensor_flip(2),
]
ABELIAN = [g for g in ALL if g.family not in ("Weyl",)]


@pytest.mark.parametrize("g", ALL, ids=lambda g: g.name)
def test_commutant_commutes_with_group(g):
    rng = np.random.default_rng(0)
    basis = commutant_basis(g)
    assert np.allclose(basis.ops[-1].mat, np.eye(basis.ops[-1].mat.shape[0]))
    for _ in range(5):
        u = haar_sample(g, rng).mat
        assert np.allclose(u @ u.conj().T, np.eye(len(u)), atol=1e-12)
        for b in basis.ops:
            assert np.max(np.abs(u @ b.mat - b.mat @ u)) < 1e-10


@pytest.mark.parametrize("g", ABELIAN, ids=lambda g: g.name)
def test_minimal_projections_resolve_identity(g):
    basis = commutant_basis(g)
    assert basis.is_abelian
    ps = [p.mat for p in basis.minimal_projections]
    assert np.allclose(sum(ps), np.eye(len(ps[0])), atol=1e-10)
    for i, p in enumerate(ps):
        assert np.allclose(p @ p, p, atol=1e-10)
        for q in ps[i + 1:]:
            assert np.max(np.abs(p @ q)) < 1e-10


@pytest.mark.parametrize(
    "g, ranks",
    [
        (GroupSpec.uu(3), [6, 3]),
        (GroupSpec.uubar(3), [1, 8]),
        (GroupSpec.oo(3), [1, 3, 5]),
        (GroupSpec.bell(), [1, 1, 1, 1]),
        (GroupSpec.weyl_tilde(3), [1] * 9),
        (GroupSpec.tensor(GroupSpec.uu(3), GroupSpec.uu(3)), [36, 18, 18, 9]),
        (GroupSpec.tensor_flip(3), [36, 36, 9]),
    ],
    ids=lambda x: x.name if isinstance(x, GroupSpec) else "",
)
def test_minimal_projection_ranks(g, ranks):
    got = sorted(round(p.trace().real) for p in commutant_basis(g).minimal_projections)
    assert got == sorted(ranks)


def test_weyl_commutant_is_non_abelian():
    b = commutant_basis(GroupSpec.weyl(3))
    assert not b.is_abelian and b.minimal_projections is None
    assert b.k == 9
    assert len(group_elements(GroupSpec.weyl(3))) == 9


def test_bell_projections_are_bell_states():
    vecs = np.array([[1, 0, 0, 1], [0, 1, 1, 0], [0, 1, -1, 0], [1, 0, 0, -1]]) / math.sqrt(2)
    ps = commutant_basis(GroupSpec.bell()).minimal_projections
    for v in vecs:
        proj = np.outer(v, v)
        assert min(np.max(np.abs(p.mat - proj)) for p in ps) < 1e-12


def test_oo_projections_closed_form():
    d = 4
    f, fh, one = flip_operator(d).mat, phihat_operator(d).mat, np.eye(d * d)
    expected = [fh / d, (one - f) / 2, (one + f) / 2 - fh / d]
    ps = commutant_basis(GroupSpec.oo(d)).minimal_projections
    for e, p in zip(expected, ps):
        assert np.allclose(p.mat, e, atol=1e-12)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(ALL))
def test_twirl_is_idempotent_invariant_and_dual(seed, g):
    rng = np.random.default_rng(seed)
    n = g.dims[0] * g.dims[1]
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    rho = random_density(n, rng)
    pa = twirl(g, a)
    assert np.max(np.abs(twirl(g, pa).mat - pa.mat)) < 1e-9
    assert twirl_residual(g, pa) < 1e-9
    u = haar_sample(g, rng).mat
    assert np.max(np.abs(u @ pa.mat - pa.mat @ u)) < 1e-9
    assert abs(np.trace(twirl(g, rho).mat @ a) - np.trace(rho @ pa.mat)) < 1e-9


def test_twirl_matches_haar_average():
    # independent oracle: Monte Carlo average over the group
    rng = np.random.default_rng(3)
    g = GroupSpec.uu(2)
    rho = random_density(4, rng)
    mc = monte_carlo_twirl(g, rho, 4000, rng)
    assert np.max(np.abs(mc.mat - twirl(g, rho).mat)) < 0.03
    bell = GroupSpec.bell()
    full = sum(u.mat @ rho @ u.mat.conj().T for u in group_elements(bell)) / 4
    assert np.allclose(full, twirl(bell, rho).mat, atol=1e-12)


@pytest.mark.parametrize("g", [GroupSpec.uu(3), GroupSpec.uubar(3), GroupSpec.oo(3), GroupSpec.bell(),
                               GroupSpec.weyl(3), GroupSpec.tensor(GroupSpec.uu(2), GroupSpec.uubar(2))],
                         ids=lambda g: g.name)
def test_partial_transpose_intertwines_twiddle(g):
    rng = np.random.default_rng(4)
    tg = twiddle(g)
    n = g.dims[0] * g.dims[1]
    for _ in range(5):
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        lhs = partial_transpose(twirl(g, a), g.dims).mat
        rhs = twirl(tg, partial_transpose(a, g.dims)).mat
        assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_twiddle_pairs_and_unsupported():
    assert twiddle(GroupSpec.uu(3)) == GroupSpec.uubar(3)
    assert twiddle(twiddle(GroupSpec.weyl(2))) == GroupSpec.weyl(2)
    with pytest.raises(Unsupported):
        twiddle(GroupSpec.su2(1, 1))
    with pytest.raises(Unsupported):
        twiddle(GroupSpec.tensor_flip(2))


@pytest.mark.parametrize("g", [GroupSpec.uu(3), GroupSpec.oo(3), GroupSpec.bell(), GroupSpec.weyl(2)],
                         ids=lambda g: g.name)
def test_state_from_coords_round_trip(g):
    rng = np.random.default_rng(5)
    n = g.dims[0] * g.dims[1]
    rho = twirl(g, random_density(n, rng))
    c = coords(g, rho)
    back = state_from_coords(g, c)
    assert np.allclose(back.mat, rho.mat, atol=1e-12)


def test_state_from_coords_rejects_outside():
    with pytest.raises(NotAState):
        state_from_coords(GroupSpec.uu(3), [1.5])
    with pytest.raises(InputError):
        state_from_coords(GroupSpec.oo(3), [0.5])


def test_werner_weights():
    g = GroupSpec.uu(3)
    rho = state_from_coords(g, [-0.2])
    # (1 + F)/2 and (1 - F)/2 expectations
    assert np.allclose(weights(g, rho), [0.4, 0.6], atol=1e-12)


def test_su2_spin_matrices_and_representation():
    for j in (0.5, 1, 1.5, 2):
        for basis in ("standard", "real") if float(j).is_integer() else ("standard",):
            jx, jy, jz = spin_matrices(j, basis)
            assert np.allclose(jx @ jy - jy @ jx, 1j * jz, atol=1e-12)
            cas = jx @ jx + jy @ jy + jz @ jz
            assert np.allclose(cas, j * (j + 1) * np.eye(len(cas)), atol=1e-12)
    with pytest.raises(InputError):
        spin_matrices(0.5, "real")
    rng = np.random.default_rng(6)
    u, v = haar_su2(rng), haar_su2(rng)
    r = lambda w: su2_representation(1, w)
    assert np.allclose(r(u @ v), r(u) @ r(v), atol=1e-10)
    # integer spin in the real basis is a real orthogonal representation
    assert np.max(np.abs(su2_representation(1, u, "real").imag)) < 1e-12


def test_su2_projection_ranks():
    ps = su2_projections(1, 1)
    assert [round(p.trace().real) for p in ps] == [1, 3, 5]
    ps = su2_projections(0.5, 1.5)
    assert [round(p.trace().real) for p in ps] == [3, 5]


def test_haar_samplers_are_unitary():
    rng = np.random.default_rng(7)
    u = haar_unitary(4, rng)
    o = haar_orthogonal(4, rng)
    assert np.allclose(u @ u.conj().T, np.eye(4), atol=1e-12)
    assert np.allclose(o @ o.T, np.eye(4), atol=1e-12) and np.isrealobj(o)


def test_group_spec_validation():
    with pytest.raises(InputError):
        GroupSpec("XX", 3)
    with pytest.raises(InputError):
        GroupSpec("UU")
    assert GroupSpec.tensor(GroupSpec.uu(2), GroupSpec.uu(3)).dims == (6, 6)
