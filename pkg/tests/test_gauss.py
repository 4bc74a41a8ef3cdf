import cmath
import math

import pytest

from lchi.characters import (
    RationalXi,
    character,
    conjugate_character,
    enumerate_characters,
)
from lchi.gauss import (
    c_tilde,
    gauss_data,
    gauss_sum,
    product_character_tau,
    root_number,
    twisted_ramanujan_sum,
)


def test_gauss_sum_examples():
    assert gauss_sum(character(1, 0)) == 1
    assert gauss_sum(character(4, 1)) == 2j  # e(1/4) - e(3/4), exact quarter roots
    tau3 = gauss_sum(character(3, 1))
    assert abs(tau3 - 1j * math.sqrt(3)) < 1e-15


def test_root_number_examples():
    assert root_number(character(1, 0)) == 1
    assert root_number(character(4, 1)) == 1  # 2i / (i * 2)
    assert abs(root_number(character(3, 1)) - 1) < 1e-15


def test_root_number_rejects_imprimitive():
    with pytest.raises(ValueError):
        root_number(character(4, 0))


def test_modulus_and_pair_identities_q_up_to_50():
    for q in range(1, 51):
        for chi in enumerate_characters(q):
            if not chi.primitive:
                continue
            data = gauss_data(chi)
            assert data.abs_tau_residual <= 1e-12, (q, chi.label)
            assert data.pair_residual <= 1e-12, (q, chi.label)
            assert data.epsilon_modulus_residual <= 1e-12, (q, chi.label)


def test_conjugation_identity():
    for q in range(1, 41):
        for chi in enumerate_characters(q):
            if not chi.primitive:
                continue
            lhs = gauss_sum(conjugate_character(chi))
            rhs = chi.value(-1) * gauss_sum(chi).conjugate()
            assert abs(lhs - rhs) <= 1e-12


def test_twisted_ramanujan_examples():
    one = character(1, 0)
    r = twisted_ramanujan_sum(one, 1, 1)
    assert abs(r.brute_force - 1) < 1e-15 and abs(r.closed_form - 1) < 1e-15

    chi4 = character(4, 1)
    r = twisted_ramanujan_sum(chi4, 1, 1)
    # direct two-term evaluation: e(-1/4) - e(-3/4) = -2i
    assert abs(r.brute_force - (-2j)) < 1e-15
    assert abs(r.closed_form - (-2j)) < 1e-15
    assert r.main_term_window

    r = twisted_ramanujan_sum(chi4, 2, 1)
    assert abs(r.brute_force) < 1e-15 and r.closed_form == 0
    assert not r.main_term_window


def test_twisted_ramanujan_rejects_common_factor():
    with pytest.raises(ValueError):
        twisted_ramanujan_sum(character(4, 1), 2, 4)


def test_twisted_ramanujan_sweep_small():
    # brute force equals closed form; the q <= 20 sweep runs in acceptance
    for q in (1, 3, 4, 5, 8):
        for chi in enumerate_characters(q):
            if not chi.primitive:
                continue
            for k in range(1, 7):
                for h in range(1, 7):
                    if math.gcd(h, k) != 1:
                        continue
                    r = twisted_ramanujan_sum(chi, h, k)
                    assert r.disagreement <= 1e-10, (q, chi.label, h, k)


def test_c_tilde_values():
    one = character(1, 0)
    assert abs(c_tilde(one, RationalXi(1, 1)) - 1) < 1e-15
    assert abs(c_tilde(one, RationalXi(1, 6)) - 0.5) < 1e-15
    chi4 = character(4, 1)
    assert c_tilde(chi4, RationalXi(2, 3)) == 0  # (h, q) = 2
    assert abs(c_tilde(chi4, RationalXi(1, 1)) - 2.0) < 1e-15
    assert abs(c_tilde(chi4, RationalXi(1, 3)) - 1.0) < 1e-15


def test_product_character_tau_cases():
    one = character(1, 0)
    chi4 = character(4, 1)
    chi3 = character(3, 1)

    # theta = psi when chi is trivial; direct two-term evaluation gives 2i,
    # while the closed form vanishes with mu(4) = 0: recorded, not asserted
    r = product_character_tau(one, chi4)
    assert r.theta_modulus == 4
    assert abs(r.brute_force - 2j) < 1e-14
    assert r.closed_form == 0

    # psi = chi: theta is principal-type mod 16, both routes vanish
    r = product_character_tau(chi4, chi4)
    assert abs(r.brute_force) < 1e-12
    assert abs(r.closed_form) < 1e-12
    assert r.disagreement < 1e-12

    # coprime moduli: thetabar is primitive mod 12, |tau| = sqrt(12);
    # closed form has mu(4) = 0, the disagreement is recorded
    r = product_character_tau(chi3, chi4)
    assert abs(abs(r.brute_force) - math.sqrt(12)) < 1e-12
    assert r.closed_form == 0

    # q2 = 1 regime: the identity is exact
    r = product_character_tau(chi4, one)
    assert abs(r.brute_force - r.closed_form) < 1e-14
    assert abs(r.closed_form - gauss_sum(chi4)) < 1e-14


def test_gauss_data_imprimitive_has_no_epsilon():
    data = gauss_data(character(4, 0))
    assert data.epsilon is None
    assert data.epsilon_modulus_residual is None
