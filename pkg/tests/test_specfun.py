import math
import threading

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from hyperdot.errors import DomainError
from hyperdot.specfun import (
    LogReal,
    ZeroTable,
    bessel_j,
    bessel_j_deriv,
    bessel_zero,
    bessel_zeros,
    digamma,
    gegenbauer,
    laguerre,
    ln_gamma,
    log_sum,
    neumann_zero,
    neumann_zeros,
    radial_kernel,
    radial_kernel_deriv,
    sum_logreals,
)
from hyperdot.specfun.zeros import CACHE_HEADER, FUNCTION_ZERO, NEUMANN_ZERO


def _series_j(nu, z, terms=50):
    """Power series oracle for J_nu in arbitrary precision."""
    with mpmath.workdps(40):
        z = mpmath.mpf(z)
        return float(sum((-1) ** k * (z / 2) ** (2 * k + nu) / (mpmath.factorial(k) * mpmath.gamma(k + nu + 1))
                         for k in range(terms)))


# -- LogReal ------------------------------------------------------------------------

@given(st.floats(min_value=-1e300, max_value=1e300, allow_nan=False).filter(lambda x: abs(x) > 1e-300))
def test_logreal_round_trip(x):
    assert float(LogReal.from_float(x)) == pytest.approx(x, rel=1e-14)


@given(st.floats(1e-200, 1e200), st.floats(-1e200, -1e-200))
def test_logreal_multiplication_adds_logs(a, b):
    pa, pb = LogReal.from_float(a), LogReal.from_float(b)
    prod = pa * pb
    assert prod.sign == -1
    assert prod.log == pytest.approx(pa.log + pb.log, abs=1e-12)


def test_logreal_extended_range_and_format():
    tiny = LogReal.from_log(-1480.0)     # ~1e-643
    huge = LogReal.from_log(668.0)       # ~1e290
    assert (tiny * huge).log == pytest.approx(-812.0)
    assert LogReal.from_float(1.7688e-21).format_e(5) == "0.17688E-20"
    assert LogReal.from_float(0.18494e-87).format_e() == "0.18494E-87"
    assert (-LogReal.from_float(250.0)).format_e(3) == "-0.250E+3"


def test_logreal_cancellation_to_zero():
    a = LogReal.from_float(3.0)
    assert (a - a).sign == 0
    assert float(a - LogReal.from_float(1.0)) == pytest.approx(2.0, rel=1e-15)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_log_sum_matches_mpmath(seed):
    rng = np.random.default_rng(seed)
    exps = rng.uniform(-690, 690, 1000)
    signs = rng.choice([-1.0, 1.0], 1000)
    with mpmath.workdps(60):
        ref = mpmath.fsum(s * mpmath.e ** mpmath.mpf(e) for s, e in zip(signs, exps))
    got = log_sum(signs, exps)
    assert got.sign == int(mpmath.sign(ref))
    assert got.log == pytest.approx(float(mpmath.log(abs(ref))), abs=1e-12)


def test_sum_logreals_skips_zeros():
    vals = [LogReal.zero(), LogReal.from_float(2.0), LogReal.from_float(-0.5)]
    assert float(sum_logreals(vals)) == pytest.approx(1.5)


# -- Bessel ---------------------------------------------------------------------------

@pytest.mark.parametrize("nu,z,expected", [
    (0.0, 0.0, 1.0),
    (0.5, math.pi, 0.0),
    (1.0, 3.8317059702, 0.0),
])
def test_bessel_j_examples(nu, z, expected):
    assert bessel_j(nu, z) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 2.5, 7.0, 30.5])
@pytest.mark.parametrize("z", [1e-3, 0.7, 5.0, 23.0, 48.0])
def test_bessel_j_against_series(nu, z):
    ref = _series_j(nu, z, terms=80)
    assert bessel_j(nu, z) == pytest.approx(ref, rel=1e-11, abs=1e-300)


@pytest.mark.parametrize("nu,z", [(3.5, 200.0), (0.0, 1000.0), (60.0, 400.0)])
def test_bessel_j_large_argument(nu, z):
    ref = float(mpmath.besselj(nu, z))
    assert abs(bessel_j(nu, z) - ref) < 1e-13


def test_bessel_j_rejects_negative():
    with pytest.raises(DomainError):
        bessel_j(1.0, -1.0)
    with pytest.raises(DomainError):
        bessel_j(-0.5, 1.0)


def test_bessel_deriv_small_z_and_simple_zero():
    assert bessel_j_deriv(0.0, 1e-4) == pytest.approx(-5e-5, abs=1e-12)
    assert abs(bessel_j_deriv(1.0, 3.8317059702)) > 0.4


@given(st.floats(0.0, 40.0), st.floats(0.05, 80.0))
@settings(max_examples=60, deadline=None)
def test_bessel_recurrence_identity(nu, z):
    lhs = bessel_j(nu + 1.0, z)
    rhs = nu / z * bessel_j(nu, z) - bessel_j_deriv(nu, z)
    assert lhs == pytest.approx(rhs, abs=1e-10)


@pytest.mark.parametrize("nu,z", [(0.5, math.pi), (1.0, 2.0), (4.5, 9.0)])
def test_bessel_deriv_finite_difference(nu, z):
    h = 1e-5
    fd = (bessel_j(nu, z + h) - bessel_j(nu, z - h)) / (2 * h)
    assert bessel_j_deriv(nu, z) == pytest.approx(fd, rel=1e-8)


# -- zeros -----------------------------------------------------------------------------

@pytest.mark.parametrize("nu,n,expected", [
    (0.5, 1, math.pi),
    (0.0, 1, 2.404825558),
    (1.0, 1, 3.831705970),
])
def test_bessel_zero_examples(nu, n, expected):
    assert bessel_zero(nu, n) == pytest.approx(expected, abs=1e-8)


@pytest.mark.parametrize("nu", [0.0, 1.0, 2.5, 11.0, 49.0])
def test_bessel_zeros_against_mpmath(nu):
    zs = bessel_zeros(nu, 6)
    for k, z in enumerate(zs, start=1):
        assert z == pytest.approx(float(mpmath.besseljzero(nu, k)), rel=1e-12)


def test_large_order_zero_residual():
    nu = 199.0
    z = bessel_zero(nu, 1)
    assert z == pytest.approx(nu + 1.8557571 * nu ** (1 / 3), rel=2e-3)
    assert abs(special.jv(nu, z)) < 1e-12 * max(1.0, abs(special.jvp(nu, z)) * z)


@pytest.mark.parametrize("d,l,n,expected", [
    (3, 0, 1, 0.0),
    (7, 0, 1, 0.0),
    (3, 0, 2, 4.493409458),
    (3, 1, 1, 2.081575978),
])
def test_neumann_zero_examples(d, l, n, expected):
    assert neumann_zero(d, l, n) == pytest.approx(expected, abs=1e-8)


@pytest.mark.parametrize("d,l", [(2, 1), (3, 2), (4, 1), (6, 3)])
def test_neumann_zeros_residual_and_mpmath(d, l):
    nu = l + d / 2 - 1
    for z in neumann_zeros(d, l, 5):
        g = l * special.jv(nu, z) - z * special.jv(nu + 1, z)
        assert abs(g) < 1e-12 * max(1.0, z * abs(special.jvp(nu, z)) + abs(special.jv(nu, z)))
        with mpmath.workdps(30):
            ref = mpmath.findroot(lambda t: l * mpmath.besselj(nu, t) - t * mpmath.besselj(nu + 1, t), z)
        assert z == pytest.approx(float(ref), rel=1e-12)


@pytest.mark.parametrize("nu", [0.0, 0.5, 3.0, 12.5])
def test_zero_interlacing(nu):
    a, b = bessel_zeros(nu, 8), bessel_zeros(nu + 1.0, 8)
    assert np.all(a < b)
    assert np.all(b[:-1] < a[1:])


def test_zero_table_round_trip(tmp_path):
    table = ZeroTable()
    vals = np.array([2.4048255576957729, 5.5200781102863115])
    table.put((FUNCTION_ZERO, 0.0), vals)
    table.put((NEUMANN_ZERO, 3, 1), np.array([2.0815759778181, 5.940369990572712]))
    path = tmp_path / "z.txt"
    assert table.save(path)
    assert not table.save(path)           # unchanged content is not rewritten
    other = ZeroTable()
    assert other.load(path)
    np.testing.assert_array_equal(other.get((FUNCTION_ZERO, 0.0), 2), vals)


@pytest.mark.parametrize("content", ["garbage\n", f"{CACHE_HEADER}\nfunction-zero,0.0,1,notanumber\n",
                                     f"{CACHE_HEADER}\nfunction-zero,0.0,1,5.0\nfunction-zero,0.0,2,3.0\n"])
def test_zero_table_rejects_corrupt(tmp_path, content):
    path = tmp_path / "bad.txt"
    path.write_text(content)
    table = ZeroTable()
    assert not table.load(path)
    assert len(table) == 0


def test_zero_table_concurrent_readers():
    errors = []

    def work(nu):
        try:
            for _ in range(5):
                bessel_zeros(nu, 10)
        except Exception as exc:  # pragma: no cover - collected for the assertion
            errors.append(exc)
    threads = [threading.Thread(target=work, args=(0.25 * k,)) for k in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors


# -- radial kernel ------------------------------------------------------------------------

def test_radial_kernel_examples():
    assert radial_kernel(3, 0, 0.0) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-14)
    assert abs(radial_kernel(3, 0, math.pi)) < 1e-12
    assert radial_kernel(4, 0, 1.0) == pytest.approx(0.4400505857, abs=1e-9)


@pytest.mark.parametrize("d,l", [(2, 0), (3, 1), (5, 2), (10, 0), (40, 3)])
def test_radial_kernel_continuity_at_switch(d, l):
    eps = 1e-9
    lo, hi = radial_kernel(d, l, 1.0 - eps), radial_kernel(d, l, 1.0 + eps)
    slope = radial_kernel_deriv(d, l, 1.0)
    assert hi - lo == pytest.approx(2 * eps * slope, abs=1e-12 * abs(lo) + 1e-20)


def test_radial_kernel_deriv_examples():
    assert abs(radial_kernel_deriv(3, 0, 4.493409458)) < 1e-10
    d, z = 6, 1e-3
    lead = -z * 2 ** (-d / 2) / math.gamma(d / 2 + 1)
    assert radial_kernel_deriv(d, 0, z) == pytest.approx(lead, rel=1e-5)
    h = 1e-5
    fd = (radial_kernel(4, 1, 2 + h) - radial_kernel(4, 1, 2 - h)) / (2 * h)
    assert radial_kernel_deriv(4, 1, 2.0) == pytest.approx(fd, rel=1e-8)
    with pytest.raises(DomainError):
        radial_kernel_deriv(3, 0, 0.0)


# -- polynomials and Gamma family ---------------------------------------------------------

@pytest.mark.parametrize("n,lam,x,expected", [(0, 1.7, 0.2, 1.0), (1, 2.0, 0.3, 1.2), (2, 1.0, 0.5, 0.0)])
def test_gegenbauer_examples(n, lam, x, expected):
    assert gegenbauer(n, lam, x) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("n,eta,x,expected", [(0, 3.0, 2.0, 1.0), (1, 3.0, 2.0, 2.0), (2, 2.0, 1.0, 2.5)])
def test_laguerre_examples(n, eta, x, expected):
    assert laguerre(n, eta, x) == pytest.approx(expected, abs=1e-14)


@given(st.integers(0, 12), st.floats(0.1, 8.0), st.floats(-1.0, 1.0))
@settings(max_examples=80, deadline=None)
def test_gegenbauer_matches_scipy(n, lam, x):
    assert gegenbauer(n, lam, x) == pytest.approx(special.eval_gegenbauer(n, lam, x), rel=1e-10, abs=1e-10)


@given(st.integers(0, 12), st.floats(-0.9, 10.0), st.floats(0.0, 30.0))
@settings(max_examples=80, deadline=None)
def test_laguerre_matches_scipy(n, eta, x):
    ref = special.eval_genlaguerre(n, eta, x)
    assert laguerre(n, eta, x) == pytest.approx(ref, rel=1e-9, abs=1e-9 * (1 + x) ** n)


def test_gamma_family():
    assert ln_gamma(0.5) == pytest.approx(0.5723649429, abs=1e-10)
    assert ln_gamma(1.0) == 0.0
    assert digamma(1.0) == pytest.approx(-0.5772156649, abs=1e-9)
    assert ln_gamma(123.4) == pytest.approx(float(mpmath.loggamma(123.4)), rel=1e-13)
    for bad in (0.0, -1.0):
        with pytest.raises(DomainError):
            ln_gamma(bad)
        with pytest.raises(DomainError):
            digamma(bad)
