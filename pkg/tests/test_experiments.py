import warnings

import numpy as np
import pytest

from twinbeam.errors import InvalidParameterError, NoInteriorPeakError
from twinbeam.experiments import (
    SweepSpec,
    default_sigma_values,
    find_rg_peak,
    fit_decay_rate,
    golden_peak,
    refinement_change,
    run_negativity_surface,
    run_rg_sweep,
    run_rtot_sweep,
    run_supermode_spectrum,
)
from twinbeam.grid import build_default_grid
from twinbeam.jsa import build_jsa
from twinbeam.schmidt import decompose

PAPER_SIGMA = 1.4240e12
# sigma* at length_scale 1, n = 1000; unchanged to 1e9 Hz at n = 2000
GOLDEN_SIGMA_STAR = 5.745e12


def test_default_sigma_values():
    s = default_sigma_values()
    assert len(s) == 40
    assert s[0] == pytest.approx(0.5e12) and s[-1] == pytest.approx(10e12)
    assert np.allclose(np.diff(np.log(s)), np.log(20) / 39)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(kind="bogus"),
        dict(kind="rtot-vs-sigma", sigma_values=()),
        dict(kind="rtot-vs-sigma", sigma_values=(-1.0,)),
        dict(kind="negativity-surface", tau_values=(1.2,)),
        dict(kind="rtot-vs-sigma", length_scales=(0.0,)),
    ],
)
def test_spec_validation(kwargs):
    with pytest.raises(InvalidParameterError):
        SweepSpec(**kwargs)


def test_runner_checks_kind():
    with pytest.raises(InvalidParameterError):
        run_rtot_sweep(SweepSpec("rg-vs-sigma", sigma_values=(1e12,)))


def test_spectrum_single_mode(paper_model, paper_spectrum):
    spec = SweepSpec("supermode-spectrum", sigma_values=(PAPER_SIGMA,), length_scales=(1.0,),
                     mode_count_display=1)
    rows = run_supermode_spectrum(spec)
    assert len(rows) == 1
    assert rows[0].k == 1
    assert rows[0].r_k == pytest.approx(paper_model.zeta * paper_spectrum.c[0], rel=1e-12)


def test_spectrum_decay():
    spec = SweepSpec("supermode-spectrum", sigma_values=(PAPER_SIGMA, 4e12), length_scales=(1.0,))
    rows = run_supermode_spectrum(spec)
    by_sigma = {}
    for row in rows:
        by_sigma.setdefault(row.sigma_p, []).append(row.r_k)
    narrow, wide = by_sigma[PAPER_SIGMA], by_sigma[4e12]
    assert len(narrow) == 20
    assert narrow[0] > narrow[-1] > 0
    assert fit_decay_rate(narrow) < fit_decay_rate(wide)


def test_fit_decay_rate_exact():
    assert fit_decay_rate(3.0 * np.exp(-0.25 * np.arange(1, 21))) == pytest.approx(0.25, rel=1e-12)
    with pytest.raises(InvalidParameterError):
        fit_decay_rate([1.0, 0.0])


def test_rtot_sweep_small_n():
    spec = SweepSpec("rtot-vs-sigma", sigma_values=(2e12, 1e12, 4e12), length_scales=(1.0,), n=400)
    rows = run_rtot_sweep(spec)
    assert [r.sigma_p for r in rows] == [1e12, 2e12, 4e12]
    r_tot = [r.r_tot for r in rows]
    assert r_tot[0] > r_tot[1] > r_tot[2]
    for row in rows:
        assert row.tau == 1.0
        assert row.r_g <= row.r_tot
        assert row.e_tot == pytest.approx(2 * row.r_tot / np.log(2), rel=1e-9)


def test_zero_efficiency(paper_model):
    spec = SweepSpec("rtot-vs-sigma", sigma_values=(1e12, 3e12), length_scales=(1.0,), n=200,
                     base_model=paper_model.with_(zeta=0.0))
    for row in run_rtot_sweep(spec):
        assert row.r_tot == 0.0 and row.r_g == 0.0 and row.e_tot == 0.0


def test_cross_kind_consistency():
    common = dict(sigma_values=(1e12, 3e12), length_scales=(0.5, 1.0), n=300)
    top = run_rtot_sweep(SweepSpec("rtot-vs-sigma", **common))
    bottom = run_rg_sweep(SweepSpec("rg-vs-sigma", **common))
    assert [(r.sigma_p, r.length_scale, r.r_tot) for r in top] == [
        (r.sigma_p, r.length_scale, r.r_tot) for r in bottom
    ]


def test_determinism_across_workers():
    common = dict(sigma_values=(3e12, 1e12, 2e12), tau_values=(0.0, 0.5, 1.0), length_scales=(1.0,), n=200)
    serial = run_negativity_surface(SweepSpec("negativity-surface", **common))
    again = run_negativity_surface(SweepSpec("negativity-surface", **common))
    parallel = run_negativity_surface(SweepSpec("negativity-surface", workers=2, **common))
    assert serial == again == parallel
    keys = [(r.sigma_p, r.tau, r.length_scale) for r in serial]
    assert keys == sorted(keys)


def test_negativity_surface_columns():
    spec = SweepSpec("negativity-surface", sigma_values=(1e12, 3e12), tau_values=(0.0, 0.3, 1.0),
                     length_scales=(1.0,), n=300)
    for row in run_negativity_surface(spec):
        if row.tau == 0.0:
            assert row.e_tot == 0.0
        if row.tau == 1.0:
            assert row.e_tot == pytest.approx(2 * row.r_tot / np.log(2), rel=1e-6)


def test_rows_record_grid():
    spec = SweepSpec("rtot-vs-sigma", sigma_values=(2e12,), length_scales=(1.0,), n=100)
    row = run_rtot_sweep(spec)[0]
    assert row.grid == build_default_grid(spec.base_model.omega_p, 2e12, 100)
    assert spec.grid_policy == "default-paper"


def test_golden_peak_synthetic():
    x_star, y_star = golden_peak(lambda x: -((x - 3.3) ** 2), np.linspace(0, 10, 11), 1e-6)
    assert x_star == pytest.approx(3.3, abs=1e-5)
    assert y_star >= max(-((x - 3.3) ** 2) for x in np.linspace(0, 10, 11))


def test_golden_peak_monotone():
    with pytest.raises(NoInteriorPeakError):
        golden_peak(lambda x: -x, np.linspace(1, 2, 5), 1e-6)


def test_golden_peak_coarse_tolerance():
    with pytest.warns(UserWarning, match="bracket width"):
        x, y = golden_peak(lambda x: -((x - 3.3) ** 2), np.linspace(0, 10, 11), 100.0)
    assert (x, y) == (3.0, pytest.approx(-0.09))


def test_rg_peak_interior():
    spec = SweepSpec("rg-vs-sigma", sigma_values=tuple(np.geomspace(2e12, 1e13, 7)), length_scales=(1.0,))
    sigma_star, rg_star = find_rg_peak(spec)
    assert 2e12 < sigma_star < 1e13
    assert sigma_star == pytest.approx(GOLDEN_SIGMA_STAR, rel=2e-3)
    sampled = [row.r_g for row in run_rg_sweep(spec)]
    assert rg_star >= max(sampled)


def test_rg_peak_right_of_peak():
    spec = SweepSpec("rg-vs-sigma", sigma_values=(7e12, 8e12, 9e12, 1e13), length_scales=(1.0,), n=400)
    with pytest.raises(NoInteriorPeakError):
        find_rg_peak(spec)


def test_rg_peak_needs_single_length():
    spec = SweepSpec("rg-vs-sigma", sigma_values=(1e12, 2e12, 3e12))
    with pytest.raises(InvalidParameterError):
        find_rg_peak(spec)


def test_peak_length_scaling():
    # sigma* scales inversely with crystal length
    sig = tuple(np.geomspace(1e12, 1e13, 9))
    spec = SweepSpec("rg-vs-sigma", sigma_values=sig, length_scales=(1.0, 2.0))
    s1, _ = find_rg_peak(spec, 1e9, length_scale=1.0)
    s2, _ = find_rg_peak(spec, 1e9, length_scale=2.0)
    assert s2 == pytest.approx(s1 / 2, rel=0.02)


def test_refinement_change(paper_model):
    lo, hi = paper_model.omega_p - 5e13, paper_model.omega_p + 5e13
    assert refinement_change(paper_model, lo, hi, 200) < 0.01


def test_spectrum_rows_match_decompose(paper_model):
    spec = SweepSpec("supermode-spectrum", sigma_values=(3e12,), length_scales=(1.0,), n=300,
                     mode_count_display=5)
    rows = run_supermode_spectrum(spec)
    model = paper_model.with_(sigma_p=3e12)
    s = decompose(build_jsa(model, build_default_grid(model.omega_p, 3e12, 300)), model.zeta)
    np.testing.assert_allclose([r.r_k for r in rows], s.r[:5], rtol=1e-12)


def test_warnings_clean_in_normal_sweep():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        run_rtot_sweep(SweepSpec("rtot-vs-sigma", sigma_values=(1e12,), length_scales=(1.0,), n=100))
