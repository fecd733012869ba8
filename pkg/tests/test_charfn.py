import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures import ELASTIC_1234, random_config
from rod_hearing import (
    DomainError,
    FasteningConfig,
    char_det_direct,
    char_det_expansion,
    krylov_eval,
    transcendental_basis,
    xvector_of,
)
from rod_hearing.charfn import SERIES_BETA, basis_scaled, projective_distance

angles = st.lists(st.floats(min_value=0.0, max_value=math.pi / 2), min_size=4, max_size=4)
svals = st.floats(min_value=1e-3, max_value=2000.0)


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def test_krylov_identity_at_origin():
    for s in (0.3, 4.0, 900.0):
        np.testing.assert_allclose(krylov_eval(0.0, s).table, np.eye(4), atol=1e-15)


def test_krylov_value_at_pi_squared():
    # y1(1) = (cos pi + cosh pi) / 2
    assert krylov_eval(1.0, math.pi ** 2).table[0, 0] == pytest.approx((math.cosh(math.pi) - 1) / 2, rel=1e-14)
    assert krylov_eval(1.0, math.pi ** 2).table[0, 0] == pytest.approx(5.295977, abs=1e-6)


@pytest.mark.parametrize("x, s", [(0.3, 0.5), (0.7, 20.0), (0.9, 300.0), (0.05, 1.2)])
def test_krylov_derivatives_by_finite_differences(x, s):
    h = 1e-6
    t = krylov_eval(x, s).table
    fd = (krylov_eval(x + h, s).table[:3] - krylov_eval(x - h, s).table[:3]) / (2 * h)
    np.testing.assert_allclose(fd, t[1:], rtol=1e-6, atol=1e-6)


def test_krylov_domain():
    with pytest.raises(DomainError):
        krylov_eval(1.5, 1.0)
    with pytest.raises(DomainError):
        krylov_eval(0.5, -1.0)


@settings(max_examples=200, deadline=None)
@given(angles, svals)
def test_expansion_matches_direct(th, s):
    cfg = FasteningConfig.from_angles(th)
    d = char_det_direct(cfg, s)
    e = char_det_expansion(xvector_of(cfg), s)
    scale = np.abs(basis_scaled(np.array([s]))[0]) @ np.abs(xvector_of(cfg).values)
    assert abs(d - e) <= 1e-10 * max(scale, abs(d))


@pytest.mark.parametrize("s", [1e-3, 0.5, 0.999, 1.001, 50.0, 1.0e5, 4.0e5])
def test_expansion_matches_direct_across_regimes(s):
    cfg = ELASTIC_1234
    assert _rel(char_det_direct(cfg, s), char_det_expansion(xvector_of(cfg), s)) < 1e-9


def test_series_and_closed_form_agree_at_switch():
    b = SERIES_BETA
    lo = basis_scaled(np.array([(b - 1e-9) ** 2]))[0]
    hi = basis_scaled(np.array([(b + 1e-9) ** 2]))[0]
    np.testing.assert_allclose(lo, hi, rtol=1e-7, atol=1e-12)


def test_scaled_values_stay_finite_for_large_s():
    rng = np.random.default_rng(3)
    for _ in range(5):
        v = char_det_direct(random_config(rng), 640000.0)   # sqrt(s) = 800
        assert math.isfinite(v)


def test_transcendental_basis_unscaled():
    s = 7.0
    b = transcendental_basis(s).unscaled()
    beta = math.sqrt(s)
    assert b["f_minus"] == pytest.approx((1 - math.cos(beta) * math.cosh(beta)) / 2, rel=1e-12)
    assert b["z"] == pytest.approx(math.sin(beta) * math.sinh(beta) / 2, rel=1e-12)


def test_xvector_known_config():
    # Exact integer x-vector of the stiffness-(1,2,3,4) configuration
    np.testing.assert_allclose(xvector_of(ELASTIC_1234).values,
                               [24, -10, 1, 24, 6, -16, -32, 6, -18, 4], atol=1e-12)


def test_projective_distance_scale_invariant():
    u = np.arange(1.0, 11.0)
    assert projective_distance(u, -3 * u) < 1e-7
    assert projective_distance(u, u + np.eye(10)[0]) > 0
