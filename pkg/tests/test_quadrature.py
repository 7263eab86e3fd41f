import numpy as np
import pytest

from segcap import QuadratureConfig
from segcap.errors import QuadratureError
from segcap.quadrature import gauss_legendre, integrate


def test_gauss_legendre_exact_for_polynomials():
    t, w = gauss_legendre(8, -1.0, 3.0)
    assert np.sum(w * t ** 15) == pytest.approx((3.0 ** 16 - 1.0) / 16, rel=1e-13)


def test_integrate_smooth():
    val = integrate(lambda t: np.exp(t), 0.0, 1.0, QuadratureConfig())
    assert abs(val - (np.e - 1)) < 1e-14


def test_integrate_vector_valued():
    f = lambda t: np.stack([np.cos(t), np.sin(t)], axis=1)
    val = integrate(f, 0.0, np.pi / 2, QuadratureConfig(nodes_per_interval=16))
    assert np.allclose(val, [1.0, 1.0], atol=1e-14)


def test_refinement_reaches_tolerance_for_hard_integrand():
    # a near pole just outside the interval needs several doublings
    cfg = QuadratureConfig(nodes_per_interval=8, max_refinements=8)
    val = integrate(lambda t: 1.0 / (t + 0.01), 0.0, 1.0, cfg)
    assert abs(val - np.log(101.0)) < 1e-10


def test_not_converged_raises():
    cfg = QuadratureConfig(nodes_per_interval=8, max_refinements=1)
    with pytest.raises(QuadratureError) as info:
        integrate(lambda t: 1.0 / (t + 1e-4), 0.0, 1.0, cfg)
    assert info.value.code == "QUADRATURE_NOT_CONVERGED"


@pytest.mark.parametrize("kw", [
    {"nodes_per_interval": 4},
    {"max_refinements": -1},
    {"target_tol": 0.0},
    {"far_field_split": 1.0},
])
def test_bad_config(kw):
    with pytest.raises(Exception) as info:
        QuadratureConfig(**kw)
    assert getattr(info.value, "code", "") == "BAD_QUADRATURE_CONFIG"
