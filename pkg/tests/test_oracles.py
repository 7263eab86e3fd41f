import math

import numpy as np
import pytest
from numpy.polynomial import Chebyshev

from segcap import capacity, new_segment_system
from segcap.errors import OracleError
from segcap.oracles import (PolynomialOracle, chebyshev_capacity, chebyshev_oracle, chebyshev_preimage_set,
                            leja_points, polynomial_preimage_capacity, polynomial_preimage_green,
                            random_segment_system, sample_points, transfinite_diameter_estimate)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_chebyshev_set_endpoints(n):
    E = chebyshev_preimage_set(n)
    assert len(E.endpoints) == 2 * n + 2 and E.genus == n
    v = Chebyshev.basis(2 * n)(E.array)
    assert np.max(np.minimum(np.abs(v), np.abs(v - 1))) < 1e-13


def test_chebyshev_set_n2_values():
    c8 = math.cos(math.pi / 8)
    c38 = math.cos(3 * math.pi / 8)
    assert np.allclose(chebyshev_preimage_set(2).array, [-1, -c8, -c38, c38, c8, 1], atol=1e-15)


def test_bad_degree():
    with pytest.raises(OracleError):
        chebyshev_preimage_set(0)


def test_oracle_preimage_recovers_chebyshev_set():
    for n in (2, 3):
        assert np.allclose(chebyshev_oracle(n).preimage().array, chebyshev_preimage_set(n).array, atol=1e-8)


@pytest.mark.parametrize("coef, cap", [
    ((0.0, 1.0), 0.5),
    ((-1.0, 0.0, 2.0), 0.5),
    (((-1 - 0.36) / 0.64, 0.0, 2 / 0.64), 0.4),
])
def test_preimage_capacity_examples(coef, cap):
    assert polynomial_preimage_capacity(PolynomialOracle(coef)) == pytest.approx(cap, rel=1e-14)


def test_zero_leading_coefficient():
    with pytest.raises(OracleError) as info:
        PolynomialOracle((1.0, 0.0))
    assert info.value.code == "ZERO_LEADING_COEFFICIENT"


def test_non_real_preimage_rejected():
    with pytest.raises(OracleError):
        PolynomialOracle((5.0, 0.0, 1.0)).preimage()


def test_chebyshev_capacity_closed_form():
    for n in (2, 3, 4):
        assert chebyshev_capacity(n) == pytest.approx(polynomial_preimage_capacity(chebyshev_oracle(n)), rel=1e-14)
        # on [-2, 2] the same set has the tabulated constant 2^{-1/(2n)}
        assert chebyshev_capacity(n, half_width=2.0) == pytest.approx(2.0 ** (-1.0 / (2 * n)), rel=1e-15)


def test_preimage_green_simple_cases():
    T = PolynomialOracle((0.0, 1.0))
    assert polynomial_preimage_green(T, 2.0) == pytest.approx(math.log(2 + math.sqrt(3)))
    assert polynomial_preimage_green(T, 0.5) == 0.0
    assert polynomial_preimage_green(T, -2.0) == pytest.approx(math.log(2 + math.sqrt(3)))


def test_leja_points_distinct_and_on_set():
    E = chebyshev_preimage_set(2)
    p = leja_points(E, 50)
    assert len(np.unique(p)) == 50
    assert all(E.contains(x, 1e-14) for x in p)
    assert abs(p[0]) == 1.0


def test_leja_bad_sizes():
    E = new_segment_system([0, 1])
    with pytest.raises(OracleError):
        leja_points(E, 1)
    with pytest.raises(OracleError):
        leja_points(E, 5000, per_segment=100)


@pytest.mark.slow
def test_transfinite_diameter_upper_bias():
    E = new_segment_system([0, 1])
    d = [transfinite_diameter_estimate(E, N) for N in (20, 50, 100)]
    assert d[0] >= d[1] >= d[2] > 0.25


def test_random_system_separation(rng):
    E = random_segment_system(4, rng, min_gap=0.05)
    assert E.genus == 3
    assert np.min(np.diff(E.array)) >= 0.05 * 2.0


def test_sample_points_avoid_set(rng):
    E = chebyshev_preimage_set(2)
    pts = sample_points(E, 10, 10, rng)
    assert len(pts) == 20
    assert all(not E.contains(z.real, 1e-3) for z in pts[:10])
    assert all(z.imag > 0 for z in pts[10:])
