import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures import (
    CLAMPED_FREE,
    CLAMPED_PINNED,
    CLAMPED_PINNED_S,
    PINNED_PINNED,
    SPRING5_CLAMPED,
    SPRING5_CLAMPED_S,
    rel_err,
)
from rod_hearing import (
    DomainError,
    FasteningConfig,
    MaterialParams,
    ScanExhausted,
    dual_of,
    forward_spectrum,
    omega_to_s,
    s_to_omega,
)
from rod_hearing.forward import SolverOptions

angles = st.lists(st.floats(min_value=0.0, max_value=math.pi / 2), min_size=4, max_size=4)


@pytest.mark.parametrize("cfg, ref", [(CLAMPED_PINNED, CLAMPED_PINNED_S), (SPRING5_CLAMPED, SPRING5_CLAMPED_S)])
def test_reference_spectra(cfg, ref):
    assert np.max(rel_err(forward_spectrum(cfg, 9).values, ref)) < 1e-12


def test_pinned_pinned_closed_form():
    s = forward_spectrum(PINNED_PINNED, 12).as_array()
    n = np.arange(1, 13)
    np.testing.assert_allclose(s, (n * math.pi) ** 2, rtol=1e-12)


def test_clamped_free_first_root():
    assert forward_spectrum(CLAMPED_FREE, 1)[0] == pytest.approx(1.8751040687119611 ** 2, rel=1e-12)


def test_free_free_skips_rigid_modes():
    # the double zero eigenvalue of the free rod is outside (0, inf)
    s = forward_spectrum(FasteningConfig.from_coefficients([0, 0, 1, 1, 0, 0, 1, 1]), 2).as_array()
    np.testing.assert_allclose(np.sqrt(s), [4.730040744862704, 7.853204624095838], rtol=1e-12)


@settings(max_examples=25, deadline=None)
@given(angles)
def test_spectrum_increasing_and_small_residuals(th):
    sp = forward_spectrum(FasteningConfig.from_angles(th), 9)
    s = sp.as_array()
    assert np.all(s > 0) and np.all(np.diff(s) > 0)
    assert max(sp.residuals) < 1e-6


@settings(max_examples=15, deadline=None)
@given(angles)
def test_dual_is_isospectral(th):
    c = FasteningConfig.from_angles(th)
    a = forward_spectrum(c, 9).as_array()
    b = forward_spectrum(dual_of(c), 9).as_array()
    np.testing.assert_allclose(a, b, rtol=1e-10)


def test_scan_exhausted_reports_partial_roots():
    with pytest.raises(ScanExhausted) as info:
        forward_spectrum(PINNED_PINNED, 9, SolverOptions(beta_max=10.0))
    assert len(info.value.found) == 3


def test_n_must_be_positive():
    with pytest.raises(ValueError):
        forward_spectrum(PINNED_PINNED, 0)


def test_units_roundtrip():
    p = MaterialParams(alpha=2.1e2, rho=7.8e3, F=1e-4, l=1.5)
    assert s_to_omega(omega_to_s(123.4, p), p) == pytest.approx(123.4, rel=1e-14)
    with pytest.raises(DomainError):
        MaterialParams(alpha=-1.0, rho=1.0, F=1.0, l=1.0)
    with pytest.raises(DomainError):
        omega_to_s(0.0, p)
