import math
import random
from fractions import Fraction

import pytest

from lchi.characters import (
    DirichletCharacter,
    RationalXi,
    character,
    char_value,
    conductor,
    conjugate_character,
    enumerate_characters,
    euler_phi,
    is_primitive,
    lambda_sieve,
    moebius,
    unit_root,
    von_mangoldt,
)


def test_enumeration_counts_and_labels():
    assert len(enumerate_characters(1)) == 1
    for q in range(1, 61):
        chars = enumerate_characters(q)
        assert len(chars) == euler_phi(q)
        assert [c.label for c in chars] == list(range(len(chars)))


def test_trivial_character_mod_1():
    one = character(1, 0)
    for n in (-3, 0, 1, 7, 100):
        assert one.value(n) == 1
    assert one.primitive and one.conductor == 1 and one.kappa == 0


def test_mod4_nontrivial():
    chi = character(4, 1)
    assert chi.value(3) == -1
    assert chi.value(2) == 0
    assert chi.value(7) == -1  # periodicity
    assert chi.kappa == 1
    assert chi.primitive and chi.conductor == 4


def test_mod4_conductor_by_brute_force():
    # no character mod 1 or mod 2 induces the nontrivial character mod 4:
    # an induced character is 1 on every unit a = 1 mod f
    chi = character(4, 1)
    for f in (1, 2):
        witnesses = [a for a in range(1, 5, f) if math.gcd(a, 4) == 1 and chi.value(a) != 1]
        assert witnesses, f"some unit = 1 mod {f} must separate chi from an induced character"
    assert conductor(chi) == 4 and is_primitive(chi)


def test_mod5_all_nontrivial_primitive():
    chars = enumerate_characters(5)
    assert len(chars) == 4
    for c in chars[1:]:
        assert c.primitive and c.conductor == 5


def test_principal_mod4_not_primitive():
    chi0 = character(4, 0)
    assert chi0.conductor == 1 and not chi0.primitive


def test_chi_of_one_and_units():
    for q in (1, 2, 3, 8, 12, 45):
        for chi in enumerate_characters(q):
            assert chi.value(1) == 1
            for a in range(q):
                if math.gcd(a, q) > 1:
                    assert chi.value(a) == 0
                else:
                    assert abs(abs(chi.value(a)) - 1) < 1e-15


def test_multiplicativity_random_pairs():
    rng = random.Random(20260809)
    for q in range(1, 51):
        for chi in enumerate_characters(q):
            for _ in range(1000 // euler_phi(q) + 5):
                a = rng.randrange(-500, 500)
                b = rng.randrange(-500, 500)
                lhs = chi.value(a * b)
                rhs = chi.value(a) * chi.value(b)
                assert abs(lhs - rhs) <= 1e-14


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9, 12, 16, 24, 40])
def test_row_orthogonality(q):
    chars = enumerate_characters(q)
    for c1 in chars:
        for c2 in chars:
            s = sum(c1.value(a) * c2.value(a).conjugate() for a in range(q))
            if c1.label == c2.label:
                assert abs(s - euler_phi(q)) <= 1e-12
            else:
                assert abs(s) <= 1e-12


def test_column_orthogonality_principal_sum():
    for q in (3, 4, 5, 8, 12):
        for chi in enumerate_characters(q):
            s = sum(chi.value(a) for a in range(q))
            expect = euler_phi(q) if chi.is_principal else 0.0
            assert abs(s - expect) <= 1e-12


def test_conjugate_closure_and_parity():
    for q in range(1, 41):
        chars = enumerate_characters(q)
        labels = {c.label for c in chars}
        for chi in chars:
            bar = conjugate_character(chi)
            assert bar.label in labels
            assert bar.kappa == chi.kappa
            for a in range(q):
                assert abs(bar.value(a) - chi.value(a).conjugate()) <= 1e-15


def test_parity_matches_minus_one():
    for q in (3, 4, 5, 7, 8, 11, 12):
        for chi in enumerate_characters(q):
            v = chi.value(-1)
            assert v == (1 if chi.kappa == 0 else -1)


def test_von_mangoldt_values():
    assert von_mangoldt(1) == 0.0
    assert abs(von_mangoldt(8) - math.log(2)) < 1e-15
    assert abs(von_mangoldt(8) - 0.693147) < 1e-6
    assert von_mangoldt(12) == 0.0
    assert abs(von_mangoldt(13) - math.log(13)) < 1e-15


def test_moebius_and_phi():
    assert moebius(12) == 0
    assert moebius(6) == 1
    assert moebius(30) == -1
    assert euler_phi(12) == 4
    assert euler_phi(1) == 1
    values = [moebius(n) for n in range(1, 100)]
    # Mertens partial sums stay small
    assert abs(sum(values)) < 10


def test_lambda_sieve_matches_scalar():
    lam = lambda_sieve(2000)
    for n in range(1, 2001):
        assert abs(lam[n] - von_mangoldt(n)) < 1e-15


def test_chebyshev_excluded_mass_bound():
    # sum of Lambda(n) over n <= N with gcd(n, M) > 1 is at most 2 log M log N
    lam = lambda_sieve(10**4)
    rng = random.Random(7)
    pairs = [(2, 10**4), (6, 10**4), (210, 9999), (9240, 10**4), (16, 512)]
    pairs += [(rng.randrange(2, 10**4), rng.randrange(10, 10**4)) for _ in range(40)]
    for M, N in pairs:
        mass = sum(lam[n] for n in range(2, N + 1) if math.gcd(n, M) > 1)
        assert mass <= 2.0 * math.log(M) * math.log(N) + 1e-12, (M, N)


def test_unit_root_quarter_points_exact():
    assert unit_root(Fraction(0)) == 1
    assert unit_root(Fraction(1, 2)) == -1
    assert unit_root(Fraction(1, 4)) == 1j
    assert unit_root(Fraction(3, 4)) == -1j
    assert unit_root(Fraction(5, 4)) == 1j  # reduced mod 1


def test_rational_xi_normalization():
    xi = RationalXi(2, 4)
    assert (xi.h, xi.k) == (1, 2)
    assert float(xi) == 0.5
    assert str(xi) == "1/2"
    with pytest.raises(ValueError):
        RationalXi(0, 3)
    with pytest.raises(ValueError):
        RationalXi(1, -2)


def test_char_value_negative_arguments():
    chi = character(4, 1)
    assert char_value(chi, -1) == -1
    assert char_value(chi, -4) == 0


def test_labels_deterministic_across_calls():
    a = [c.exponent_tuple for c in enumerate_characters(24)]
    b = [c.exponent_tuple for c in enumerate_characters(24)]
    assert a == b
    # lexicographic in generator exponents
    assert a == sorted(a)
