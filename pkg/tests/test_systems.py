import math

import numpy as np
import pytest
from scipy import integrate, special

from hyperdot.errors import DomainError, WrongKindError
from hyperdot.specfun import bessel_zero, neumann_zero
from hyperdot.systems import (
    QuantumNumbers,
    Space,
    SystemKind,
    SystemSpec,
    angular_density_l0,
    dot_energy,
    dot_momentum_radial,
    dot_position_radial,
    fourier_consistency,
    hydrogen_momentum_radial,
    hydrogen_position_radial,
    overlap,
    profile_csv,
    radial_profile,
)

D, N, H = SystemKind.DIRICHLET, SystemKind.NEUMANN, SystemKind.HYDROGEN
QN0 = QuantumNumbers()


def _norm(system, qn, space):
    return overlap(system, qn, qn, space)


# -- types -------------------------------------------------------------------------------

@pytest.mark.parametrize("kind,d", [(D, 1), (N, 0), (H, 2)])
def test_system_spec_rejects_low_dimension(kind, d):
    with pytest.raises(DomainError):
        SystemSpec(kind, d)


@pytest.mark.parametrize("length", [0.0, -1.0, math.inf])
def test_system_spec_rejects_bad_length(length):
    with pytest.raises(DomainError):
        SystemSpec(D, 3, length)


def test_quantum_numbers_validation():
    with pytest.raises(DomainError):
        QuantumNumbers(0, 0)
    with pytest.raises(DomainError):
        QuantumNumbers(1, -1)
    assert QuantumNumbers(2, 1).m == 0
    with pytest.raises(DomainError):
        hydrogen_position_radial(SystemSpec(H, 3), QuantumNumbers(1, 1))


# -- energies --------------------------------------------------------------------------------

def test_dot_energy_examples():
    assert dot_energy(SystemSpec(D, 3), QN0) == pytest.approx(math.pi ** 2, rel=1e-14)
    for d in (2, 3, 7):
        assert dot_energy(SystemSpec(N, d), QN0) == 0.0
    assert dot_energy(SystemSpec(D, 4), QN0) == pytest.approx(bessel_zero(1.0, 1) ** 2, rel=1e-14)
    assert dot_energy(SystemSpec(D, 4), QN0) == pytest.approx(14.682, abs=1e-3)
    with pytest.raises(WrongKindError):
        dot_energy(SystemSpec(H, 3), QN0)


def test_neumann_energy_uses_neumann_zero():
    assert dot_energy(SystemSpec(N, 3), QuantumNumbers(2, 0)) == pytest.approx(neumann_zero(3, 0, 2) ** 2)


# -- position profiles -------------------------------------------------------------------------

def test_position_profile_examples():
    dir3 = dot_position_radial(SystemSpec(D, 3), QN0)
    assert abs(dir3(np.array([1.0]))[0]) < 1e-14
    assert dir3(np.array([0.5]))[0] == pytest.approx(2 * math.sqrt(2), rel=1e-12)
    neu3 = dot_position_radial(SystemSpec(N, 3), QN0)
    np.testing.assert_allclose(neu3(np.array([0.0, 0.3, 1.0])), math.sqrt(3), rtol=1e-14)
    with pytest.raises(WrongKindError):
        dot_position_radial(SystemSpec(H, 3), QN0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_dirichlet_3d_matches_spherical_bessel(n):
    prof = dot_position_radial(SystemSpec(D, 3), QuantumNumbers(n, 0))
    x = np.linspace(0.05, 0.95, 11) + 0.013  # off the nodes k/n
    explicit = math.sqrt(2) * np.sin(n * math.pi * x) / x
    ratio = prof(x) / explicit
    np.testing.assert_allclose(ratio, ratio[0], rtol=1e-12)
    assert abs(ratio[0]) == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("l,n", [(1, 1), (0, 2), (2, 1)])
def test_neumann_boundary_slope_vanishes(l, n):
    prof = dot_position_radial(SystemSpec(N, 3), QuantumNumbers(n, l))
    x = np.linspace(0, 1, 2001)[1:]
    peak = np.max(np.abs(prof(x)))
    assert abs(prof.derivative(np.array([1.0]))[0]) < 1e-9 * peak


# -- momentum profiles ---------------------------------------------------------------------------

def test_dirichlet_momentum_at_origin():
    prof = dot_momentum_radial(SystemSpec(D, 3), QN0)
    phi0 = prof(np.array([0.0]))[0] * math.sqrt(angular_density_l0(3))
    assert phi0 == pytest.approx(math.pi ** -2, rel=1e-12)
    assert phi0 == pytest.approx(0.10132, abs=1e-5)


def test_dirichlet_momentum_singular_point_patch():
    prof = dot_momentum_radial(SystemSpec(D, 3), QN0)
    j = math.pi
    jp = special.jvp(0.5, j)
    expected = -jp / (2 * math.sqrt(j)) * math.sqrt(2)
    assert prof(np.array([j]))[0] == pytest.approx(expected, rel=1e-12)
    # inside and just outside the patch radius
    for dz in (1e-6, 5e-5, 2e-4, 1e-3):
        z = np.array([j - dz * j, j + dz * j])
        v = prof(z)
        direct = math.sqrt(2) * j * special.jv(0.5, z) / ((j * j - z * z) * np.sqrt(z))
        np.testing.assert_allclose(v, direct, rtol=1e-9)


def test_neumann_ground_momentum_form():
    prof = dot_momentum_radial(SystemSpec(N, 3), QN0)
    z = np.array([0.3, 2.0, 17.0])
    np.testing.assert_allclose(prof(z), math.sqrt(3) * special.jv(1.5, z) / z ** 1.5, rtol=1e-12)


def test_neumann_ground_normalization_identity():
    # 3 int J_{3/2}^2 / z dz = 3 / (2 * 3/2) = 1
    val = _norm(SystemSpec(N, 3), QN0, Space.MOMENTUM)
    assert val == pytest.approx(1.0, abs=1e-9)


# -- normalization and orthogonality -----------------------------------------------------------------

CASES = [(k, d, n, l) for k in (D, N) for d in (2, 3, 5, 8) for (n, l) in ((1, 0), (2, 0), (1, 1), (3, 2))]


@pytest.mark.parametrize("kind,d,n,l", CASES)
@pytest.mark.parametrize("space", list(Space))
def test_dot_normalization(kind, d, n, l, space):
    assert _norm(SystemSpec(kind, d), QuantumNumbers(n, l), space) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("d,n,l", [(3, 1, 0), (3, 2, 1), (4, 3, 0), (6, 2, 1), (10, 1, 0)])
@pytest.mark.parametrize("space", list(Space))
def test_hydrogen_normalization(d, n, l, space):
    assert _norm(SystemSpec(H, d), QuantumNumbers(n, l), space) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("kind", [D, N, H])
@pytest.mark.parametrize("space", list(Space))
def test_orthogonality(kind, space):
    system = SystemSpec(kind, 3)
    for l in (0, 1):
        lo = l + 1 if kind is H else 1
        ov = overlap(system, QuantumNumbers(lo, l), QuantumNumbers(lo + 1, l), space)
        assert abs(ov) < 1e-8


def test_overlap_needs_equal_l_for_oscillating_pair():
    with pytest.raises(DomainError):
        overlap(SystemSpec(D, 3), QuantumNumbers(1, 0), QuantumNumbers(1, 1), Space.MOMENTUM)


def test_normalization_against_scipy_quad():
    prof = dot_position_radial(SystemSpec(D, 5), QuantumNumbers(2, 1))
    val, _ = integrate.quad(lambda x: prof(np.array([x]))[0] ** 2 * x ** 4, 0, 1, epsabs=1e-14, limit=200)
    assert val == pytest.approx(1.0, abs=1e-11)


# -- hydrogen ----------------------------------------------------------------------------------------------

def test_hydrogen_ground_density():
    prof = hydrogen_position_radial(SystemSpec(H, 3), QN0)
    v0 = prof(np.array([0.0]))[0]
    assert v0 ** 2 * angular_density_l0(3) == pytest.approx(1 / math.pi, rel=1e-10)
    r = np.array([0.5, 1.7, 4.0])
    np.testing.assert_allclose(prof(r) ** 2 * angular_density_l0(3), np.exp(-2 * r) / math.pi, rtol=1e-12)


def test_hydrogen_momentum_ground_peak_at_origin():
    prof = hydrogen_momentum_radial(SystemSpec(H, 3), QN0)
    z = np.linspace(0, 5, 101)
    v = prof(z)
    assert v[0] > 0
    assert v[0] == pytest.approx(v.max())


@pytest.mark.parametrize("n,changes", [(1, 0), (2, 1), (3, 2)])
def test_hydrogen_momentum_sign_structure(n, changes):
    prof = hydrogen_momentum_radial(SystemSpec(H, 3), QuantumNumbers(n, 0))
    v = prof(np.geomspace(1e-3, 1e3, 4001))
    assert np.count_nonzero(np.diff(np.sign(v)) != 0) == changes


# -- angular constant ----------------------------------------------------------------------------------------

@pytest.mark.parametrize("d,expected", [(2, 1 / (2 * math.pi)), (3, 1 / (4 * math.pi)), (5, 3 / (8 * math.pi ** 2))])
def test_angular_density(d, expected):
    assert angular_density_l0(d) == pytest.approx(expected, rel=1e-14)


def test_angular_density_large_d_is_finite():
    val = angular_density_l0(400)
    assert 0 < val < math.inf


# -- transform consistency ---------------------------------------------------------------------------------------

@pytest.mark.parametrize("kind,d,n,l", [(D, 3, 1, 0), (N, 3, 2, 0), (D, 2, 1, 1), (N, 6, 3, 2), (D, 5, 2, 2)])
def test_fourier_consistency(kind, d, n, l):
    r = fourier_consistency(SystemSpec(kind, d), QuantumNumbers(n, l), [0.0, 0.5, 1.0, 2.0, 9.0])
    assert r < 1e-8


def test_fourier_consistency_rejects_hydrogen():
    with pytest.raises(WrongKindError):
        fourier_consistency(SystemSpec(H, 3), QN0, [1.0])


# -- output ---------------------------------------------------------------------------------------------------------

def test_profile_csv_format():
    prof = radial_profile(SystemSpec(N, 3), QN0, "position")
    text = profile_csv(prof, [0.0, 0.5])
    lines = text.strip().splitlines()
    assert lines[0] == "x,value"
    assert lines[1] == "0,1.73205080757"


# -- explicit 3D spherical-Bessel forms ---------------------------------------------------------------

def _sj(l, x, deriv=False):
    return special.spherical_jn(l, x, derivative=deriv)


@pytest.mark.parametrize("n,l", [(1, 0), (2, 0), (1, 1), (2, 2)])
def test_3d_momentum_forms_match_up_to_phase(n, l):
    z = np.array([0.7, 2.3, 5.1, 11.0])
    dir_prof = dot_momentum_radial(SystemSpec(D, 3), QuantumNumbers(n, l))
    j = bessel_zero(l + 0.5, n)
    explicit = 2 / math.sqrt(math.pi) * j / (j * j - z * z) * _sj(l, z)
    ratio = explicit / dir_prof(z)    # radial parts; both share Y_lm
    np.testing.assert_allclose(np.abs(ratio), 1.0, rtol=1e-11)
    if (n, l) == (1, 0):
        return
    a = neumann_zero(3, l, n)
    neu_prof = dot_momentum_radial(SystemSpec(N, 3), QuantumNumbers(n, l))
    explicit = 2 / math.sqrt(math.pi) * a / math.sqrt(a * a - l * (l + 1)) * z / (a * a - z * z) * _sj(l, z, True)
    ratio = explicit / neu_prof(z)
    np.testing.assert_allclose(np.abs(ratio), 1.0, rtol=1e-11)


def test_3d_neumann_ground_momentum_constant():
    # sqrt(3)/pi j_1(z)/z carries an extra sqrt(2): its squared norm is 2, not 1
    z = np.array([0.7, 2.3, 5.1])
    prof = dot_momentum_radial(SystemSpec(N, 3), QN0)
    alt = math.sqrt(3) / math.pi * _sj(1, z) / z
    np.testing.assert_allclose(alt / (prof(z) * math.sqrt(angular_density_l0(3))), math.sqrt(2), rtol=1e-12)
    assert _norm(SystemSpec(N, 3), QN0, Space.MOMENTUM) == pytest.approx(1.0, abs=1e-10)
