"""Special-function evaluation tests."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad
from scipy.special import gamma as Gamma, rgamma

from prabstab import (
    Branch,
    PrabhakarParams,
    integral_of_power,
    inverse_factorial_leading,
    kernel_e,
    kernel_laplace,
    prabhakar_asymptotic,
    prabhakar_eval,
    prabhakar_series,
)
from prabstab.errors import (
    BranchCutError,
    DomainError,
    InvalidParam,
    NonConvergence,
    SectorUnavailable,
)
from prabstab.special import ml_negative_axis_grid, _contour_negative_axis

from _oracles import ml2_series, ml3_highprec, prabhakar_polynomial

CM = PrabhakarParams(0.8, 0.9, 0.8, -1.0)

# frozen values from the arbitrary-precision series oracle (>= 50 digits)
E_089_08_M1 = 0.4171282309968124676608
E_089_08_M2 = 0.2352656297408387818073
OVERLAP_088908 = {
    20.0: 0.02724727669216391902526,
    35.0: 0.01710940311069508050666,
    60.0: 0.01101050517892164344583,
    100.0: 0.007278252197888996160175,
    140.0: 0.005548106842587383000707,
    200.0: 0.004163809452301550314941,
}
OVERLAP_09509508 = {
    20.0: 0.02396935477146098485674,
    60.0: 0.00967378504237703235616,
    140.0: 0.004873903205755626112316,
}
# direct complex-power evaluation in an independent 50-digit environment
KL_1P1J = 0.4275280302258617100288 - 0.2287597855269072969134j
IOP_NU09_T1 = 0.4192986884457239159215


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


class TestSeries:
    def test_exponential_point(self):
        r = prabhakar_series(1.0, 1.0, 1.0, 1.0)
        assert rel(r.value, math.e) < 1e-15

    def test_gamma_zero_collapses_to_leading_term(self):
        for z in (0.3, -2.0, 1.5 + 0.5j):
            r = prabhakar_series(0.7, 0.55, 0.0, z)
            assert rel(r.value, rgamma(0.55)) < 1e-15
            assert r.branch is Branch.POLYNOMIAL

    def test_gamma_minus_one_binomial(self):
        a, b, z = 0.6, 0.7, 1.7
        r = prabhakar_series(a, b, -1.0, z)
        expect = rgamma(b) - z * rgamma(a + b)
        assert rel(r.value, expect) < 1e-15

    def test_high_precision_point(self):
        r = prabhakar_series(0.8, 0.9, 0.8, -2.0)
        assert rel(r.value, E_089_08_M2) < 1e-13

    def test_nonconvergence_raises(self):
        with pytest.raises(NonConvergence):
            prabhakar_series(0.8, 0.9, 0.8, 25.0, max_terms=5)

    def test_invalid_alpha(self):
        with pytest.raises(InvalidParam):
            prabhakar_series(-0.1, 1.0, 1.0, 1.0)

    @given(
        j=st.integers(min_value=0, max_value=6),
        a=st.floats(0.2, 1.0),
        b=st.floats(0.2, 1.0),
        zr=st.floats(-8.0, 8.0),
        zi=st.floats(-8.0, 8.0),
    )
    @settings(max_examples=60, deadline=None)
    def test_nonpositive_integer_gamma_terminates(self, j, a, b, zr, zi):
        z = complex(zr, zi)
        r = prabhakar_series(a, b, -float(j), z)
        assert r.branch is Branch.POLYNOMIAL
        assert r.terms_used <= j + 1
        assert abs(r.value - prabhakar_polynomial(a, b, j, z)) <= 1e-12 * (1.0 + abs(r.value))


class TestReductions:
    def test_two_parameter_reduction(self):
        rng = np.random.default_rng(7)
        for _ in range(40):
            a = rng.uniform(0.3, 1.0)
            b = rng.uniform(0.3, 1.0)
            z = complex(*rng.uniform(-3.5, 3.5, 2))
            r = prabhakar_eval(a, b, 1.0, z)
            assert rel(r.value, ml2_series(a, b, z)) < 1e-10

    def test_one_parameter_reduction(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            a = rng.uniform(0.3, 1.0)
            z = complex(*rng.uniform(-3.0, 3.0, 2))
            r = prabhakar_eval(a, 1.0, 1.0, z)
            assert rel(r.value, ml2_series(a, 1.0, z)) < 1e-10

    def test_exponential_reduction(self):
        for z in np.linspace(-5.0, 5.0, 21):
            r = prabhakar_eval(1.0, 1.0, 1.0, z)
            assert rel(r.value, np.exp(z)) < 1e-13


class TestAsymptotic:
    def test_overlap_against_highprec_series(self):
        # asymptotic vs the arbitrary-precision series on the shared annulus
        for x, expect in OVERLAP_088908.items():
            r = prabhakar_asymptotic(0.8, 0.9, 0.8, -x, K=60)
            assert rel(r.value, expect) < 1e-8

    def test_overlap_second_parameter_set(self):
        for x, expect in OVERLAP_09509508.items():
            r = prabhakar_asymptotic(0.9, 0.95, 0.8, -x, K=60)
            assert rel(r.value, expect) < 1e-8

    def test_cross_check_with_series_oracle_at_minus_50(self):
        r = prabhakar_asymptotic(0.8, 0.9, 0.8, -50.0, K=4)
        assert rel(r.value, ml3_highprec(0.8, 0.9, 0.8, -50.0)) < 1e-8

    def test_exponential_sector_sanity(self):
        r = prabhakar_asymptotic(1.0, 1.0, 1.0, -10.0, K=1)
        assert abs(r.value) <= 1e-4 * math.exp(10.0)

    def test_huge_argument_algebraic_decay(self):
        r = prabhakar_asymptotic(0.8, 0.9, 0.8, -1e6, K=2)
        assert np.isfinite(r.value.real)
        assert abs(r.value) < 1.0
        assert rel(r.value, ml3_highprec(0.8, 0.9, 0.8, -25.0)) > 0  # smoke: oracle reachable

    def test_off_axis_sectors(self):
        for frac in (0.95, 0.75, 0.55):
            z = 40.0 * np.exp(1j * np.pi * frac)
            r = prabhakar_asymptotic(0.8, 0.9, 0.8, z, K=60)
            assert rel(r.value, ml3_highprec(0.8, 0.9, 0.8, z)) < 1e-9

    def test_exponential_dominant_sector(self):
        z = 40.0 * np.exp(1j * np.pi * 0.25)
        r = prabhakar_asymptotic(0.8, 0.9, 0.8, z, K=2)
        assert r.branch is Branch.EXPONENTIAL_ASYMPTOTIC
        assert rel(r.value, ml3_highprec(0.8, 0.9, 0.8, z)) < 1e-5

    def test_sector_unavailable(self):
        with pytest.raises(SectorUnavailable):
            prabhakar_asymptotic(0.8, 0.9, 0.8, 40.0 * np.exp(0.1j), K=5)


class TestEvalDispatch:
    def test_exponential_negative(self):
        r = prabhakar_eval(1.0, 1.0, 1.0, -3.0)
        assert rel(r.value, math.exp(-3.0)) < 1e-14

    def test_matches_series_point(self):
        r = prabhakar_eval(0.8, 0.9, 0.8, -2.0)
        assert rel(r.value, E_089_08_M2) < 1e-13

    def test_negative_axis_uniform_accuracy(self):
        # all three routes against the high-precision oracle
        for x in (0.5, 3.0, 7.0, 12.0, 25.0, 45.0, 80.0):
            r = prabhakar_eval(0.8, 0.9, 0.8, -x)
            assert rel(r.value, ml3_highprec(0.8, 0.9, 0.8, -x)) < 5e-12

    def test_route_overlap_series_contour(self):
        # internal branch agreement on a shared band
        for x in np.linspace(1.5, 4.5, 7):
            s = prabhakar_series(0.8, 0.9, 0.8, -x).value.real
            c = float(_contour_negative_axis(0.8, 0.9, 0.8, np.float64(x)))
            assert rel(c, s) < 1e-10

    def test_route_overlap_contour_asymptotic(self):
        for x in (30.0, 40.0, 60.0):
            c = float(_contour_negative_axis(0.8, 0.9, 0.8, np.float64(x)))
            a = prabhakar_asymptotic(0.8, 0.9, 0.8, -x, K=60).value.real
            assert rel(c, a) < 1e-10

    def test_grid_evaluator_matches_scalar(self):
        xs = np.array([0.0, 0.3, 2.0, 6.5, 15.0, 33.0, 90.0])
        grid = ml_negative_axis_grid(0.8, 0.9, 0.8, xs)
        assert rel(grid[0], rgamma(0.9)) < 1e-14
        for x, v in zip(xs[1:], grid[1:]):
            r = prabhakar_eval(0.8, 0.9, 0.8, -x)
            assert rel(v, r.value.real) < 1e-11

    def test_negative_upper_parameter_midband(self):
        # tail kernels of the large-time expansion: gamma < 0, beta <= 0
        for (b, g) in ((0.1, -0.8), (-0.8, -1.6), (-1.7, -2.4)):
            for x in (15.0, 25.0):
                r = prabhakar_eval(0.8, b, g, -x)
                assert rel(r.value, ml3_highprec(0.8, b, g, -x)) < 1e-9


class TestKernel:
    def test_exponential_kernel(self):
        assert rel(kernel_e(PrabhakarParams(1, 1, 1, -1), 2.0), math.exp(-2.0)) < 1e-14

    def test_value_from_oracle(self):
        assert rel(kernel_e(CM, 1.0), E_089_08_M1) < 1e-12

    def test_monotone_nonincreasing_on_log_grid(self):
        ts = np.logspace(-3, 3, 121)
        vals = np.array([kernel_e(CM, t) for t in ts])
        assert (vals >= 0.0).all()
        diffs = np.diff(vals) / np.diff(ts)
        assert (vals[1:] - vals[:-1] <= 1e-12 * np.abs(vals[:-1])).all()
        assert (diffs <= 1e-12).all()

    def test_domain(self):
        with pytest.raises(DomainError):
            kernel_e(CM, 0.0)


class TestKernelLaplace:
    def test_exponential_case(self):
        assert rel(kernel_laplace(PrabhakarParams(1, 1, 1, -1), 2.0), 1.0 / 3.0) < 1e-15

    def test_unit_point(self):
        assert rel(kernel_laplace(CM, 1.0), 2.0 ** -0.8) < 1e-15

    def test_complex_point_frozen(self):
        assert abs(kernel_laplace(CM, 1.0 + 1.0j) - KL_1P1J) < 1e-13

    def test_branch_cut(self):
        with pytest.raises(BranchCutError):
            kernel_laplace(CM, -1.0)

    def test_zero_rejected(self):
        with pytest.raises(DomainError):
            kernel_laplace(CM, 0.0)


class TestIntegralOfPower:
    def test_exponential_case(self):
        p = PrabhakarParams(1, 1, 1, -1)
        for t in (0.25, 1.0, 3.0):
            assert rel(integral_of_power(p, 0.0, t), 1.0 - math.exp(-t)) < 1e-13

    def test_nu_zero_identity(self):
        p = CM
        for t in (0.5, 2.0):
            lhs = integral_of_power(p, 0.0, t)
            r = prabhakar_eval(p.alpha, p.beta + 1.0, p.gamma, p.omega * t ** p.alpha)
            assert rel(lhs, t ** p.beta * r.value.real) < 1e-14

    def test_frozen_quadrature_value(self):
        assert rel(integral_of_power(CM, 0.9, 1.0), IOP_NU09_T1) < 1e-10

    def test_against_adaptive_quadrature(self):
        # direct convolution integral, algebraic endpoint weight at tau = 0
        p = CM

        def ml_part(u, nu, t):
            r = prabhakar_eval(p.alpha, p.beta, p.gamma, p.omega * u ** p.alpha)
            return r.value.real * (t - u) ** nu

        for nu in (0.0, p.beta, 2 * p.beta):
            for t in (0.5, 1.0, 5.0):
                val, err = quad(
                    ml_part, 0.0, t, args=(nu, t),
                    weight="alg", wvar=(p.beta - 1.0, 0.0),
                    limit=200,
                )
                assert rel(integral_of_power(p, nu, t), val) < 1e-7


class TestInverseFactorial:
    def test_identity_case(self):
        cs = inverse_factorial_leading(1.0, 1.0, 1.0, K=2)
        assert cs[0] == 1.0
        assert abs(cs[1]) < 1e-8 and abs(cs[2]) < 1e-8

    def test_k_zero(self):
        assert inverse_factorial_leading(0.55, 0.8, 0.9, K=0) == [1.0]

    def test_leading_and_first_coefficient(self):
        cs = inverse_factorial_leading(0.8, 0.9, 0.8, K=2)
        assert cs[0] == 1.0
        # closed form of the 1/s coefficient from the log-Gamma expansion
        a, b, g = 0.8, 0.9, 0.8
        c1_closed = (1 - g) * (2 * b - g - a * g) / 2.0
        assert abs(cs[1] - c1_closed) < 2e-3

    def test_cache_and_threads(self):
        import concurrent.futures

        with concurrent.futures.ThreadPoolExecutor(max_workers=8) as ex:
            results = list(ex.map(
                lambda _: tuple(inverse_factorial_leading(0.77, 0.85, 0.9, K=2)),
                range(32),
            ))
        assert len(set(results)) == 1

    def test_cap(self):
        with pytest.raises(InvalidParam):
            inverse_factorial_leading(0.8, 0.9, 0.8, K=3)


class TestParams:
    def test_violations_named(self):
        with pytest.raises(InvalidParam, match="alpha"):
            PrabhakarParams(1.2, 0.9, 0.5, -1.0)
        with pytest.raises(InvalidParam, match="alpha\\*gamma <= beta"):
            PrabhakarParams(0.8, 0.5, 0.8, -1.0)
        with pytest.raises(InvalidParam, match="omega"):
            PrabhakarParams(0.8, 0.9, 0.8, 1.0)
        with pytest.raises(InvalidParam, match="beta <= 1"):
            PrabhakarParams(0.9, 1.1, 0.9, -1.0)
