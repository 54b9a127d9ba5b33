import math

import numpy as np
import pytest
from scipy.special import gamma, kv

import fchlab

L = 40.0


def gaussian(n, amp=1.0):
    x = fchlab.grid_x(n, L)
    return amp * np.exp(-x * x)


def test_helmholtz_matches_numpy_fft():
    n = 128
    rng = np.random.default_rng(3)
    f = rng.standard_normal(n)
    k = 2 * np.pi * np.fft.fftfreq(n, d=L / n)
    k[n // 2] = -np.pi * n / L
    want = np.real(np.fft.ifft((1 + k * k) ** 1.5 * np.fft.fft(f)))
    got = fchlab.helmholtz_apply(f, L, 1.5)
    assert np.max(np.abs(got - want)) <= 1e-10 * np.max(np.abs(want))
    back = fchlab.helmholtz_invert(got, L, 1.5)
    assert np.max(np.abs(back - f)) <= 1e-12


def test_derivative_of_cosine():
    n = 64
    x = fchlab.grid_x(n, 2 * np.pi)
    d = fchlab.derivative(np.cos(3 * x), 2 * np.pi, 1)
    assert np.max(np.abs(d + 3 * np.sin(3 * x))) <= 1e-12


@pytest.mark.parametrize("a", [0.75, 1.5, 2.0])
def test_kernel_against_bessel_form(a):
    nu = a - 0.5
    c = 2 ** (0.5 - a) / (math.sqrt(math.pi) * gamma(a))
    for x in (0.3, 1.0, 2.5):
        value, slope = fchlab.green_kernel(a, x)
        assert value == pytest.approx(c * x**nu * kv(nu, x), rel=1e-9)
        assert slope == pytest.approx(-c * x**nu * kv(nu - 1, x), rel=1e-9)
    assert fchlab.green_kernel(a, -0.7)[0] == fchlab.green_kernel(a, 0.7)[0]


def test_blocks_sum_to_the_field():
    f = gaussian(256)
    rows = fchlab.lp_blocks(f, L)
    assert rows.shape[1] == 256
    assert np.max(np.abs(rows.sum(axis=0) - f)) <= 1e-13
    u, v = gaussian(256), np.cos(fchlab.grid_x(256, L))
    bony = fchlab.paraproduct(u, v, L) + fchlab.paraproduct(v, u, L) + fchlab.remainder(u, v, L)
    assert np.max(np.abs(bony - u * v)) <= 1e-12


def test_besov_l2_agrees_with_plain_norm_scale():
    f = gaussian(256)
    b = fchlab.besov_norm(f, L, 0.0, 2.0, 2.0)
    l2 = math.sqrt(np.sum(f * f) * L / 256)
    assert 0.5 * l2 <= b <= 2.0 * l2


def test_simulation_conserves_l1_of_positive_momentum():
    m0 = gaussian(256, 0.5)
    run = fchlab.simulate(m0, L, 1.5, 1.0, diagnostics_every=0.25)
    assert not run["blew_up"]
    l1 = run["diagnostics"]["l1_m"]
    assert np.max(np.abs(l1 - l1[0])) <= 1e-6 * l1[0]
    assert run["trajectory"].shape == (5, 256)
    assert run["final_t"] == pytest.approx(1.0)


def test_rhs_has_zero_mean():
    m = gaussian(128) * np.cos(fchlab.grid_x(128, L))
    r = fchlab.rhs(m, L, 1.5, False)
    assert abs(r.sum()) <= 1e-12 * np.abs(r).sum()


def test_picard_contracts_on_small_data():
    res = fchlab.picard(gaussian(128, 0.2), L, 1.5, horizon=0.5, iterations=6, dt=0.05)
    assert not res["diverged"]
    d = res["differences"]
    assert d[-1] < d[1]


def test_characteristics_keep_the_lagrangian_identity():
    res = fchlab.characteristics(gaussian(256), L, 1.5, 1.0, diagnostics_every=0.1, stride=4)
    assert res["monotone"]
    assert np.max(res["lagrangian_defect"]) <= 1e-4
    assert res["q"].shape == res["q_xi"].shape


def test_presets_and_snapshots():
    names = fchlab.preset_names()
    assert "thm13_positive" in names and len(names) == 5
    m0 = fchlab.preset_initial_momentum("thm13_positive")
    text = fchlab.format_snapshot(m0, L, 1.5, 0.0)
    back = fchlab.parse_snapshot(text)
    assert np.array_equal(back["samples"], m0)
    assert back["length"] == L
    with pytest.raises(ValueError):
        fchlab.parse_snapshot("N=8\n")


def test_run_preset_with_overrides():
    res = fchlab.run_preset("thm14_odd", "N=256\nT=0.5\ndiagnostics_every=0.1\n")
    assert res["audits_passed"]
    assert res["run"]["final_m"].shape == (256,)
    with pytest.raises(ValueError):
        fchlab.run_preset("nope")
