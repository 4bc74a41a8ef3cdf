import cmath
import math
import random

import numpy as np
import pytest

from lchi.characters import character, conjugate_character, enumerate_characters, lambda_sieve
from lchi.errors import NearZeroError, PoleError, XFactorDomainError
from lchi.lfunc import (
    _l_batch,
    find_quiet_ordinate,
    hurwitz_zeta,
    l_value,
    log_derivative,
    x_factor_asymptotic,
    x_factor_exact,
    x_factor_on_line,
)

CATALAN = 0.9159655941772190  # L(2, chi mod 4 nontrivial)


def test_hurwitz_basel():
    assert abs(hurwitz_zeta(2, 1.0) - math.pi**2 / 6) < 1e-12


def test_hurwitz_at_zero_closed_form():
    for alpha in (0.25, 0.5, 0.9, 1.0):
        assert abs(hurwitz_zeta(0, alpha) - (0.5 - alpha)) < 1e-12


def test_hurwitz_against_truncated_series_oracle():
    # raw series to 1e6 terms plus integral tail and half-term correction
    s, alpha = 0.5 + 30j, 1.0 / 3.0
    big_n = 10**6
    n = np.arange(big_n)
    partial = complex(np.sum(np.exp(-s * np.log(n + alpha))[::-1]))
    z = big_n + alpha
    oracle = partial + z ** (1 - s) / (s - 1) + 0.5 * z**-s
    assert abs(hurwitz_zeta(s, alpha) - oracle) < 1e-8


def test_hurwitz_pole_signal():
    with pytest.raises(PoleError):
        hurwitz_zeta(1.0 + 0j, 0.5)
    with pytest.raises(ValueError):
        hurwitz_zeta(2.0, 1.5)


def test_l_value_examples():
    one = character(1, 0)
    chi4 = character(4, 1)
    assert abs(l_value(2, one) - math.pi**2 / 6) < 1e-12
    assert abs(l_value(1, chi4) - math.pi / 4) < 1e-12
    assert abs(l_value(2, chi4) - CATALAN) < 1e-12


def test_l_value_catalan_series_oracle():
    # direct alternating series over odd n up to 2e6
    n = np.arange(1, 2_000_001, 2, dtype=float)
    signs = np.where(np.arange(len(n)) % 2 == 0, 1.0, -1.0)
    oracle = float(np.sum((signs / n**2)[::-1]))
    assert abs(l_value(2, character(4, 1)) - oracle) < 1e-10


def test_l_pole_for_principal():
    with pytest.raises(PoleError):
        l_value(1, character(1, 0))
    with pytest.raises(PoleError):
        l_value(1, character(4, 0))


def test_dirichlet_series_agreement_sigma_2_5():
    # l_value against the raw 1e6-term Dirichlet series at sigma = 2.5
    s = 2.5 + 0j
    n = np.arange(1, 10**6 + 1)
    powers = np.exp(-s * np.log(n))
    for q in range(1, 9):
        for chi in enumerate_characters(q):
            series = complex(np.sum((chi.value_array()[n % q] * powers)[::-1]))
            assert abs(l_value(s, chi) - series) < 1e-9, (q, chi.label)


def test_functional_equation_point():
    chi4 = character(4, 1)
    s = 0.5 + 10j
    lhs = l_value(s, chi4)
    rhs = x_factor_exact(s, chi4).value * l_value(1 - s, conjugate_character(chi4))
    assert abs(lhs - rhs) < 1e-8


def test_functional_equation_sampled():
    rng = random.Random(20260809)
    for q in (1, 3, 4, 5, 7, 8):
        for chi in enumerate_characters(q):
            if not chi.primitive:
                continue
            chib = conjugate_character(chi)
            for _ in range(20):
                t = 1.0 + 39.0 * rng.random()
                s = 0.5 + 1j * t
                lv = l_value(s, chi)
                resid = abs(lv - x_factor_exact(s, chi).value * l_value(1 - s, chib))
                assert resid <= 1e-6 * (1 + abs(lv))


def test_x_factor_self_dual_point():
    assert abs(x_factor_exact(0.5, character(1, 0)).value - 1) < 1e-12


def test_x_factor_unit_modulus_on_critical_line():
    chi4 = character(4, 1)
    for t in (0.5, 7.0, 42.0, 199.0):
        assert abs(abs(x_factor_exact(0.5 + 1j * t, chi4).value) - 1) < 1e-12


def test_x_factor_reciprocal_identity():
    rng = random.Random(11)
    for q in (1, 3, 4, 5, 8):
        chi = character(q, 1 if q > 1 else 0)
        chib = conjugate_character(chi)
        for _ in range(25):
            s = 0.5 + 1j * (1 + 39 * rng.random())
            prod = x_factor_exact(s, chi).value * x_factor_exact(1 - s, chib).value
            assert abs(prod - 1) <= 1e-8


def test_x_factor_removable_and_genuine_poles():
    one = character(1, 0)
    # removable at s = 2 (Gamma pole cancelled by the sine zero)
    assert abs(x_factor_exact(2.0, one).value - (-2 * math.pi**2)) < 1e-8
    with pytest.raises(XFactorDomainError):
        x_factor_exact(1.0, one)
    chi4 = character(4, 1)  # odd: poles at even s
    with pytest.raises(XFactorDomainError):
        x_factor_exact(2.0, chi4)
    assert np.isfinite(x_factor_exact(1.0, chi4).value.real)


def test_x_factor_line_matches_scalar():
    chi = character(3, 1)
    ts = np.array([-40.0, -7.5, 3.3, 120.0])
    line = x_factor_on_line(chi, 0.5, ts)
    for t, v in zip(ts, line):
        assert abs(v - x_factor_exact(0.5 + 1j * t, chi).value) < 1e-12 * abs(v)


def test_x_factor_asymptotic_modulus_and_deviation():
    chi4 = character(4, 1)
    res = x_factor_asymptotic(0.5, 50.0, chi4)
    assert abs(abs(res.value) - 1.0) < 1e-12
    assert res.method == "asymptotic" and res.relative_error_estimate == pytest.approx(0.1)
    exact = x_factor_exact(1 - 0.5 - 50j, chi4).value
    assert abs(res.value / exact - 1) <= 5.0 / 50.0

    one = character(1, 0)
    dev = abs(x_factor_asymptotic(1.0, 100.0, one).value / x_factor_exact(-100j, one).value - 1)
    assert dev <= 5.0 / 100.0


def test_x_factor_asymptotic_rejects_small_t():
    with pytest.raises(ValueError):
        x_factor_asymptotic(0.5, 0.5, character(4, 1))


def test_asymptotic_consistency_slopes():
    ts = [25.0, 50.0, 100.0, 200.0]
    for q in (1, 4):
        chi = character(q, 0 if q == 1 else 1)
        for c in (0.1, 0.5, 1.0, 2.0):
            devs = [
                abs(
                    x_factor_asymptotic(c, t, chi).value
                    / x_factor_exact(1 - c - 1j * t, chi).value
                    - 1
                )
                for t in ts
            ]
            slope = np.polyfit(np.log(ts), np.log(devs), 1)[0]
            assert slope <= -0.8, (q, c, devs)


def test_log_derivative_series_oracle_zeta():
    # truncated prime-power series with integral tail at s = 2
    lam = lambda_sieve(10**6)
    ns = np.flatnonzero(lam)
    oracle = -(float(np.sum((lam[ns] / ns.astype(float) ** 2)[::-1])) + 1.0 / 10**6)
    mine = log_derivative(2.0, character(1, 0))
    assert abs(mine - oracle) < 1e-7


def test_log_derivative_character_series_oracle():
    chi4 = character(4, 1)
    lam = lambda_sieve(10**6)
    ns = np.flatnonzero(lam)
    vals = chi4.value_array()[ns % 4]
    oracle = -complex(np.sum((lam[ns] * vals * ns.astype(float) ** -2.0)[::-1]))
    assert abs(log_derivative(2.0, chi4) - oracle) < 1e-8


def test_log_derivative_routes_agree():
    # the series route (sigma large) against the Euler-Maclaurin route
    one = character(1, 0)
    chi4 = character(4, 1)
    for s, chi in ((2 + 0j, one), (2 + 5j, chi4), (2.5 - 3j, chi4)):
        series = log_derivative(s, chi)
        lv, ld = _l_batch(np.array([s]), chi, want_deriv=True)
        em = complex(ld[0] / lv[0])
        assert abs(series - em) < 1e-7, (s, series, em)


def test_log_derivative_conjugation_reflection():
    chi3 = character(3, 1)
    s = 1.5 + 3j
    lhs = log_derivative(s.conjugate(), conjugate_character(chi3))
    rhs = log_derivative(s, chi3).conjugate()
    assert abs(lhs - rhs) < 1e-10


def test_log_derivative_near_zero_signal():
    one = character(1, 0)
    with pytest.raises(NearZeroError):
        log_derivative(0.5 + 14.134725141734694j, one)


def test_quiet_ordinate_contract():
    chi4 = character(4, 1)
    qo = find_quiet_ordinate(chi4, 2.0)
    assert 2.0 <= qo.t_star <= 3.0
    # recorded value equals re-evaluation at the returned ordinate
    sigmas = (-1.0, -0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0)
    redo = max(abs(log_derivative(sig + 1j * qo.t_star, chi4)) for sig in sigmas)
    assert abs(redo - qo.max_abs_log_derivative) < 1e-9


def test_quiet_ordinate_ten_x_grid_oracle():
    chi4 = character(4, 1)
    qo = find_quiet_ordinate(chi4, 2.0)
    # the 10x grid contains every coarse candidate, so its minimum can only
    # be lower, and the returned candidate must be one of its points
    fine = np.linspace(2.0, 3.0, 1991)
    sigmas = (-1.0, -0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0)
    grid = np.array([sig + 1j * tc for tc in fine for sig in sigmas])
    lv, ld = _l_batch(grid, chi4, want_deriv=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        maxima = np.abs((ld / lv).reshape(len(fine), len(sigmas))).max(axis=1)
    assert maxima.min() <= qo.max_abs_log_derivative + 1e-9
    j = int(round((qo.t_star - 2.0) * 1990))
    assert abs(fine[j] - qo.t_star) < 1e-12
    assert abs(maxima[j] - qo.max_abs_log_derivative) < 1e-9


def test_quiet_ordinate_avoids_zero_interval():
    # [13.5, 14.5] contains the first zeta ordinate 14.1347...
    one = character(1, 0)
    qo = find_quiet_ordinate(one, 13.5)
    assert 13.5 <= qo.t_star <= 14.5
    assert abs(qo.t_star - 14.134725141734693) > 2e-3
    assert qo.max_abs_log_derivative < 10.0 * math.log(1 * 14.5) ** 2
    with pytest.raises(ValueError):
        find_quiet_ordinate(one, 1.5)
