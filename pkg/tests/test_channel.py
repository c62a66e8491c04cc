import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twinbeam.channel import (
    OMEGA,
    ChannelParams,
    TwoModeCM,
    apply_loss,
    log_negativity,
    nu_minus,
    oracle_symplectic_spectrum,
    tmsv_cm,
    total_lognegativity_lossy,
)
from twinbeam.errors import ContractViolationError, InvalidParameterError
from twinbeam.grid import build_custom_grid
from twinbeam.schmidt import SchmidtSpectrum, total_lognegativity_pure

squeezings = st.floats(0, 3)
taus = st.floats(0, 1)
normal_taus = taus.filter(lambda t: t == 0 or t > 1e-100)  # keep t1 * t2 out of subnormals


def dilation_oracle(r, tau):
    """Lossy CM from a beam splitter mixing mode b with vacuum, environment traced out."""
    two = tmsv_cm(r).matrix
    full = np.eye(6)
    full[:4, :4] = two
    t, s = np.sqrt(tau), np.sqrt(1 - tau)
    bs = np.eye(6)
    bs[2:, 2:] = np.block([[t * np.eye(2), s * np.eye(2)], [-s * np.eye(2), t * np.eye(2)]])
    out = bs @ full @ bs.T
    return out[:4, :4]


def _spectrum(r):
    n = len(r)
    return SchmidtSpectrum(np.asarray(r), np.eye(n), np.eye(n), 1.0, build_custom_grid(0, 1, n))


def test_tmsv():
    assert tmsv_cm(0.0) == TwoModeCM(1.0, 1.0, 0.0)
    np.testing.assert_array_equal(tmsv_cm(0.0).matrix, np.eye(4))
    m = tmsv_cm(1.0)
    assert (m.a, m.c) == pytest.approx((3.76220, 3.62686), abs=1e-5)
    m = tmsv_cm(0.5)
    assert (m.a, m.b, m.c) == pytest.approx((1.54308, 1.54308, 1.17520), abs=1e-5)
    with pytest.raises(InvalidParameterError):
        tmsv_cm(-0.1)


def test_apply_loss_examples():
    m = tmsv_cm(1.0)
    assert apply_loss(m, ChannelParams(1.0)) == m
    dead = apply_loss(m, ChannelParams(0.0))
    assert (dead.b, dead.c) == (1.0, 0.0)
    lossy = apply_loss(m, ChannelParams(0.5))
    assert (lossy.a, lossy.b, lossy.c) == pytest.approx((3.76220, 2.38110, 2.56458), abs=1e-5)
    np.testing.assert_allclose(lossy.matrix, dilation_oracle(1.0, 0.5), atol=1e-12)


@given(squeezings, taus)
def test_apply_loss_matches_dilation(r, tau):
    np.testing.assert_allclose(
        apply_loss(tmsv_cm(r), ChannelParams(tau)).matrix, dilation_oracle(r, tau), rtol=1e-12, atol=1e-12
    )


def test_channel_validation():
    for bad in (-0.01, 1.5):
        with pytest.raises(InvalidParameterError, match=r"tau must be in \[0,1\]"):
            ChannelParams(bad)


def test_unphysical_cm_rejected():
    with pytest.raises(InvalidParameterError):
        TwoModeCM(1.0, 1.0, 0.5)
    with pytest.raises(InvalidParameterError):
        TwoModeCM(0.5, 1.0, 0.0)


def test_nu_minus_examples():
    assert nu_minus(tmsv_cm(0.5)) == pytest.approx(np.exp(-1), abs=1e-12)
    assert nu_minus(apply_loss(tmsv_cm(0.0), ChannelParams(0.3))) == 1.0
    lossy = apply_loss(tmsv_cm(1.0), ChannelParams(0.5))
    assert nu_minus(lossy) == pytest.approx(0.4157, abs=1e-4)
    assert abs(nu_minus(lossy) - oracle_symplectic_spectrum(lossy.partial_transpose())[1]) <= 1e-9


def test_nu_minus_is_the_quoted_closed_form():
    # direct evaluation of sqrt((D - sqrt(D^2 - 4 det M)) / 2) where it does not cancel
    m = apply_loss(tmsv_cm(0.3), ChannelParams(0.7))
    delta = m.a**2 + m.b**2 + 2 * m.c**2
    det = np.linalg.det(m.matrix)
    direct = np.sqrt((delta - np.sqrt(delta**2 - 4 * det)) / 2)
    assert nu_minus(m) == pytest.approx(direct, rel=1e-12)


def test_log_negativity_examples():
    assert log_negativity(tmsv_cm(0.5)) == pytest.approx(1.44270, abs=1e-5)
    assert log_negativity(apply_loss(tmsv_cm(0.0), ChannelParams(0.4))) == 0.0
    assert log_negativity(apply_loss(tmsv_cm(1.0), ChannelParams(0.5))) == pytest.approx(1.266, abs=1e-3)
    assert log_negativity(apply_loss(tmsv_cm(2.0), ChannelParams(0.0))) == 0.0


def test_total_lossy():
    s = _spectrum([0.9, 0.5, 0.2, 0.05, 0.0])
    assert abs(total_lognegativity_lossy(s, ChannelParams(1.0)) - total_lognegativity_pure(s)) <= 1e-9
    assert total_lognegativity_lossy(s, ChannelParams(0.0)) == 0.0


def test_oracle_examples():
    assert oracle_symplectic_spectrum(np.eye(4)) == pytest.approx((1.0, 1.0), abs=1e-14)
    big, small = oracle_symplectic_spectrum(tmsv_cm(0.5).partial_transpose())
    assert (big, small) == pytest.approx((np.e, np.exp(-1)), abs=1e-12)
    with pytest.raises(ContractViolationError):
        oracle_symplectic_spectrum(np.triu(np.ones((4, 4))) + 3 * np.eye(4))
    with pytest.raises(ContractViolationError):
        oracle_symplectic_spectrum(np.eye(3))


def test_oracle_uses_symplectic_form():
    assert np.allclose(OMEGA, -OMEGA.T)
    assert np.allclose(OMEGA @ OMEGA, -np.eye(4))


@settings(max_examples=300)
@given(squeezings, taus)
def test_closed_form_matches_oracle(r, tau):
    m = apply_loss(tmsv_cm(r), ChannelParams(tau))
    assert abs(nu_minus(m) - oracle_symplectic_spectrum(m.partial_transpose())[1]) <= 1e-9


@given(squeezings)
def test_pure_closed_form(r):
    assert abs(nu_minus(tmsv_cm(r)) - np.exp(-2 * r)) <= 1e-12


@given(st.floats(0.01, 3))
def test_monotone_in_tau(r):
    values = [log_negativity(apply_loss(tmsv_cm(r), ChannelParams(t))) for t in np.linspace(0, 1, 100)]
    assert np.all(np.diff(values) >= 0)


@given(st.floats(0.01, 1))
def test_monotone_in_r(tau):
    values = [log_negativity(apply_loss(tmsv_cm(r), ChannelParams(tau))) for r in np.linspace(0, 3, 100)]
    assert np.all(np.diff(values) >= 0)


@given(squeezings, normal_taus, normal_taus)
def test_channel_composition(r, t1, t2):
    m = tmsv_cm(r)
    twice = apply_loss(apply_loss(m, ChannelParams(t1)), ChannelParams(t2))
    once = apply_loss(m, ChannelParams(t1 * t2))
    assert twice.a == once.a
    assert twice.b == pytest.approx(once.b, rel=1e-14)
    assert twice.c == pytest.approx(once.c, rel=1e-14, abs=1e-300)


@given(squeezings, taus)
def test_loss_preserves_physicality(r, tau):
    assert apply_loss(tmsv_cm(r), ChannelParams(tau)).is_physical


def test_never_fully_disentangled():
    for r in np.linspace(0.01, 3, 30):
        for tau in np.linspace(0.01, 1, 30):
            assert nu_minus(apply_loss(tmsv_cm(r), ChannelParams(tau))) < 1


def test_loss_on_either_mode_same_negativity():
    lossy = apply_loss(tmsv_cm(0.8), ChannelParams(0.3))
    swapped = TwoModeCM(lossy.b, lossy.a, lossy.c)
    assert nu_minus(swapped) == nu_minus(lossy)
