import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symtangle.eof import (
    eof_bell_diagonal,
    eof_bruteforce,
    eof_isotropic,
    eof_oo,
    eof_werner,
    epsilon_isotropic,
    epsilon_numeric,
    epsilon_werner,
    extension_applies_werner,
    isotropic_envelope,
    oo_region,
    witness_check,
)
from symtangle.errors import (
    DimensionMismatch,
    DomainError,
    FlipExpectationOutOfRange,
    Infeasible,
    InputError,
    InvalidDistribution,
    OutsideStateSpace,
    UnsupportedRegion,
)
from symtangle.geometry import second_differences
from symtangle.groups import GroupSpec, state_from_coords
from symtangle.opcore import DensityMatrix, flip_operator, schmidt_entanglement

LOG2 = math.log(2)

# high-precision reference values (30-digit evaluation of the closed forms)
WERNER_M05 = 0.245775366668471097537822860596
WERNER_M08 = 0.500402423538187879533187938893
ISO_2_D3 = 0.425848449238581369835341719007
BELL_07 = 0.173442691989075064470342194907


def assert_witness(group, res, c):
    chk = witness_check(group, res, c)
    assert chk["weights_nonnegative"]
    assert chk["weight_sum"] <= 1e-10
    assert chk["value"] <= 1e-8
    assert chk["coords"] <= 1e-8


# -- Werner --------------------------------------------------------------------------

def test_epsilon_werner_values():
    assert epsilon_werner(0.3) == 0.0
    assert epsilon_werner(0.0) == 0.0
    assert epsilon_werner(-1.0) == pytest.approx(LOG2, abs=1e-15)
    assert epsilon_werner(-0.5) == pytest.approx(WERNER_M05, abs=1e-14)
    assert epsilon_werner(-0.8) == pytest.approx(WERNER_M08, abs=1e-14)
    assert epsilon_werner(-1.0, base="bits") == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(DomainError):
        epsilon_werner(1.5)


def test_epsilon_werner_convex():
    xs = np.linspace(-1, 0, 1025)
    assert second_differences([epsilon_werner(x) for x in xs]).min() >= -1e-10


@pytest.mark.parametrize("f", [-1.0, -0.8, -0.5, -0.2, 0.0, 0.4, 1.0])
@pytest.mark.parametrize("d", [2, 3, 5])
def test_eof_werner_witness_and_dimension_independence(f, d):
    r = eof_werner(f, d)
    assert r.value == eof_werner(f, 2).value
    assert_witness(GroupSpec.uu(d), r, [f])


def test_eof_werner_singlet_decomposition():
    r = eof_werner(-1.0, 2)
    assert r.value == pytest.approx(LOG2, abs=1e-15)
    (w, v), = r.decomposition
    assert w == 1.0
    assert abs(abs(np.vdot(v.amplitudes, [0, 1, -1, 0])) / math.sqrt(2) - 1) < 1e-12


@pytest.mark.slow
@pytest.mark.parametrize("f", np.linspace(-1, 1, 21))
def test_werner_closed_form_consistent_with_numeric_routes(f):
    g = GroupSpec.uu(3)
    exact = eof_werner(f).value
    assert exact <= epsilon_numeric(g, [f], budget=8).value + 1e-6
    assert eof_bruteforce(g, [f], budget="small").value >= exact - 1e-3


# -- isotropic ----------------------------------------------------------------------------

def test_epsilon_isotropic_values():
    for d in range(2, 6):
        assert epsilon_isotropic(1.0, d) == 0.0
        assert epsilon_isotropic(0.3, d) == 0.0
        assert epsilon_isotropic(float(d), d) == pytest.approx(math.log(d), abs=1e-12)
    assert epsilon_isotropic(2.0, 3) == pytest.approx(ISO_2_D3, abs=1e-14)
    with pytest.raises(DomainError):
        epsilon_isotropic(3.5, 3)


def test_isotropic_epsilon_not_convex_near_right_endpoint_for_d3():
    _, pieces = isotropic_envelope(3)
    (a, b), = pieces
    assert b == 3.0
    xs = np.linspace(a, 3, 200)
    assert second_differences([epsilon_isotropic(x, 3) for x in xs]).min() < 0


def test_isotropic_d2_has_no_flat_piece():
    env, pieces = isotropic_envelope(2)
    assert pieces == ()
    ys = [epsilon_isotropic(x, 2) for x in env.curve.xs]
    assert np.allclose(env.curve.ys, ys, atol=1e-12)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_isotropic_envelope_convex_with_endpoints(d):
    xs = np.linspace(1, d, 401)
    vals = [eof_isotropic(x, d).value for x in xs]
    assert second_differences(vals).min() >= -1e-10
    assert vals[0] == 0.0
    assert vals[-1] == pytest.approx(math.log(d), abs=1e-12)
    assert all(v <= epsilon_isotropic(x, d) + 1e-12 for x, v in zip(xs, vals))


@pytest.mark.parametrize("fhat", [0.4, 1.0, 1.7, 2.0, 2.8, 2.95, 3.0])
def test_eof_isotropic_witness(fhat):
    r = eof_isotropic(fhat, 3)
    assert_witness(GroupSpec.uubar(3), r, [fhat])
    if r.flat_piece:
        assert r.flat_piece[0] < fhat < r.flat_piece[1]


def test_eof_isotropic_flat_piece_value_below_epsilon():
    r = eof_isotropic(2.9, 3)
    assert r.flat_piece is not None
    assert r.value < epsilon_isotropic(2.9, 3)


# -- OO and Bell --------------------------------------------------------------------------------

def test_oo_regions_and_values():
    d = 3
    assert eof_oo(0.5, 0.5, d).value == 0.0
    assert eof_oo(-1, 0, d).value == pytest.approx(LOG2, abs=1e-15)
    assert eof_oo(1, d, d).value == pytest.approx(math.log(d), abs=1e-12)
    assert eof_oo(-0.5, 0.2, d).value == pytest.approx(WERNER_M05, abs=1e-14)
    assert eof_oo(1, 2.0, d).value == pytest.approx(ISO_2_D3, abs=1e-12)
    assert oo_region(-0.2, 1.0, d) == "C"
    with pytest.raises(UnsupportedRegion):
        eof_oo(-0.2, 1.0, d)
    with pytest.raises(OutsideStateSpace):
        eof_oo(0.5, 2.5, d)


def test_oo_triangle_b_matches_oracle():
    g = GroupSpec.oo(3)
    orc = eof_bruteforce(g, [-0.5, 0.2], budget="small")
    assert_witness(g, orc, [-0.5, 0.2])
    assert eof_oo(-0.5, 0.2, 3).value - 1e-3 <= orc.value <= eof_oo(-0.5, 0.2, 3).value + 1e-2


def test_bell_diagonal():
    assert eof_bell_diagonal([1, 0, 0, 0]).value == pytest.approx(LOG2, abs=1e-15)
    assert eof_bell_diagonal([0.25] * 4).value == 0.0
    assert eof_bell_diagonal([0.5, 0.5, 0, 0]).value == 0.0
    assert eof_bell_diagonal([0.7, 0.1, 0.1, 0.1]).value == pytest.approx(BELL_07, abs=1e-14)
    with pytest.raises(InvalidDistribution):
        eof_bell_diagonal([0.5, 0.6, 0, 0])


def test_bell_diagonal_matches_oracle():
    from symtangle.ree import coords_from_weights

    g = GroupSpec.bell()
    c = coords_from_weights(g, [0.7, 0.1, 0.1, 0.1])
    orc = eof_bruteforce(g, c, budget="small")
    assert_witness(g, orc, c)
    assert BELL_07 - 1e-3 <= orc.value <= BELL_07 + 1e-2


# -- extension test ---------------------------------------------------------------------------------

def pushed(rho0: np.ndarray, d: int, y: float) -> DensityMatrix:
    k = np.eye(d * d) + y * flip_operator(d).mat
    m = k @ rho0 @ k
    return DensityMatrix.from_matrix(m / np.trace(m).real, (d, d))


def test_extension_for_invariant_state():
    rho = state_from_coords(GroupSpec.uu(3), [-0.6])
    ext = extension_applies_werner(rho)
    assert ext.verdict == "yes"
    assert ext.value == pytest.approx(epsilon_werner(-0.6))
    assert abs(np.trace(ext.rho_tilde.mat @ flip_operator(3).mat)) < 1e-12


@pytest.mark.parametrize("d, y", [(2, -0.4), (3, -0.3), (3, -0.8)])
def test_extension_on_pushed_product_state(d, y):
    # the pure state (1 + yF)|01> has Werner-value entanglement; its extension is |01>
    e = np.zeros(d * d)
    e[1] = 1
    rho = pushed(np.outer(e, e), d, y)
    ext = extension_applies_werner(rho)
    assert ext.verdict == "yes"
    psi = np.linalg.eigh(rho.mat)[1][:, -1]
    assert ext.value == pytest.approx(schmidt_entanglement(psi, dims=(d, d)), abs=1e-10)


def test_extension_on_pushed_mixed_face_state():
    d = 3
    basis = np.eye(9)
    rho0 = (np.outer(basis[1], basis[1]) + np.outer(basis[5], basis[5])) / 2  # |01>, |12>
    ext = extension_applies_werner(pushed(rho0, d, -0.5))
    assert ext.verdict == "yes"
    assert ext.product_decomposition is not None


def test_extension_rejects_npt_extension():
    # the extension of a maximally entangled-ish state with f < 0 that remains NPT
    v = np.array([0, 1, -1, 0]) / math.sqrt(2) * math.sqrt(0.9) + np.array([1, 0, 0, 1]) / math.sqrt(2) * math.sqrt(0.1)
    rho = DensityMatrix.pure(v, (2, 2))
    ext = extension_applies_werner(rho)
    assert ext.verdict == "no" and ext.value is None


def test_extension_preconditions():
    phi = np.eye(3).ravel() / math.sqrt(3)
    with pytest.raises(FlipExpectationOutOfRange):
        extension_applies_werner(DensityMatrix.pure(phi, (3, 3)))
    with pytest.raises(DimensionMismatch):
        extension_applies_werner(DensityMatrix.from_matrix(np.eye(6) / 6, (2, 3)))


# -- numeric routes ----------------------------------------------------------------------------------

def test_epsilon_numeric_werner_endpoints():
    g = GroupSpec.uu(2)
    r = epsilon_numeric(g, [-1.0], budget=16)
    assert r.value == pytest.approx(LOG2, abs=1e-6)
    f = flip_operator(2).mat
    assert np.vdot(r.witness.amplitudes, f @ r.witness.amplitudes).real == pytest.approx(-1, abs=1e-6)
    r = epsilon_numeric(g, [1.0], budget=4)
    assert r.value == pytest.approx(0.0, abs=1e-6)


def test_epsilon_numeric_isotropic_grid():
    g = GroupSpec.uubar(3)
    for x in np.linspace(0.2, 2.9, 9):
        assert epsilon_numeric(g, [x], budget=12).value == pytest.approx(epsilon_isotropic(x, 3), abs=1e-3)


def test_epsilon_numeric_errors():
    with pytest.raises(OutsideStateSpace):
        epsilon_numeric(GroupSpec.uu(2), [1.5])
    with pytest.raises(Infeasible):
        epsilon_numeric(GroupSpec.uu(2), [0.0], budget=0)


def test_bruteforce_examples_and_witness():
    g = GroupSpec.uu(2)
    r = eof_bruteforce(g, [-1.0])
    assert r.method == "oracle_upper_bound"
    assert r.value == pytest.approx(LOG2, abs=1e-3)
    assert_witness(g, r, [-1.0])
    # separable point: the LP support may carry entangled vectors at solver tolerance
    r = eof_bruteforce(GroupSpec.uu(3), [0.0])
    assert r.value == pytest.approx(0.0, abs=1e-7)
    r = eof_bruteforce(GroupSpec.uubar(3), [2.0])
    assert r.value == pytest.approx(ISO_2_D3, abs=1e-2)
    assert len(r.decomposition) <= 81


def test_bruteforce_errors():
    with pytest.raises(OutsideStateSpace):
        eof_bruteforce(GroupSpec.uu(2), [-1.5])
    with pytest.raises(InputError):
        eof_bruteforce(GroupSpec.uu(2), [0.0], K=1)
    with pytest.raises(InputError):
        eof_bruteforce(GroupSpec.uu(2), [0.0], budget="huge")


@settings(max_examples=6, deadline=None)
@given(st.integers(0, 1000), st.floats(-0.95, -0.05))
def test_bruteforce_monotone_in_budget(seed, f):
    g = GroupSpec.uu(2)
    small = eof_bruteforce(g, [f], budget=4, seed=seed).value
    larger = eof_bruteforce(g, [f], budget=8, seed=seed).value
    assert larger <= small + 1e-9
    assert larger >= epsilon_werner(f) - 1e-9
