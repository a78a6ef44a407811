import cmath
import math
import random

import pytest

from heckemoments.fields import FracQuad, QuadInt
from heckemoments.gauss import (
    ComplexVal,
    additive_char,
    family_class,
    gauss_sum_g,
    gauss_sum_literal,
    rational_gauss_sum,
    root_number,
)
from heckemoments.primes import enumerate_prime_elements, norm_form_solve
from heckemoments.symbols import induced_dirichlet_character, residue_symbol
from oracles import gauss_sum_bruteforce


def test_additive_char_examples():
    # Tr(1/delta) = 0 in both rings
    assert additive_char(1, "qw").close_to(1)
    assert additive_char(1, "qi").close_to(1)
    # Tr(w / sqrt(-3)) = 1 and Tr(i / 2i) = 1
    assert additive_char(QuadInt(0, 1, "qw")).close_to(1)
    k = FracQuad(QuadInt(1, 0, "qw"), QuadInt(7, 0, "qw"))
    assert additive_char(k * FracQuad.of(QuadInt(0, 1, "qw"), "qw")).close_to(cmath.exp(2j * math.pi / 7))


def test_additive_char_periodic_under_ring():
    rng = random.Random(5)
    for _ in range(50):
        field = rng.choice(["qw", "qi"])
        num = QuadInt(rng.randrange(-50, 50), rng.randrange(-50, 50), field)
        shift = QuadInt(rng.randrange(-9, 9), rng.randrange(-9, 9), field)
        den = QuadInt(13, 0, field)
        assert additive_char(FracQuad(num, den)).close_to(additive_char(FracQuad(num + shift * den, den)))


def test_documented_moduli():
    g = gauss_sum_g(3, 1, QuadInt(-2, -3, "qw"))
    assert abs(abs(g.value) ** 2 - 7) < 1e-9
    g = gauss_sum_g(4, 1, QuadInt(1, 16, "qi"))
    assert abs(abs(g.value) - math.sqrt(257)) < 1e-9


@pytest.mark.parametrize(
    "n, field, coords",
    [(3, "qw", (-2, -3)), (3, "qw", (1, 9)), (3, "qw", (5, 9)), (2, "qw", (3, 2)),
     (4, "qi", (1, 16)), (4, "qi", (-1, 2)), (2, "qi", (3, 8))],
)
def test_fast_path_matches_bruteforce(n, field, coords):
    c = QuadInt(*coords, field)
    want = gauss_sum_bruteforce(n, coords, field)
    assert abs(gauss_sum_g(n, 1, c).value - want) < 1e-8
    assert abs(gauss_sum_literal(n, 1, c).value - want) < 1e-8


@pytest.mark.parametrize("n, field", [(3, "qw"), (4, "qi")])
def test_literal_and_fast_paths_agree(n, field):
    for pe in enumerate_prime_elements(field, 3000)[:80]:
        if pe.split_type != "split" or pe.norm % n == 0 or pe.norm < 5:
            continue
        for r in (1, QuadInt(2, 1, field)):
            a = gauss_sum_g(n, r, pe.value)
            b = gauss_sum_literal(n, r, pe.value)
            assert abs(a.value - b.value) < 1e-8


def test_twist_law():
    c = QuadInt(1, 9, "qw")
    base = gauss_sum_g(3, 1, c).value
    for r in (QuadInt(2, 0, "qw"), QuadInt(4, 1, "qw"), QuadInt(-3, 5, "qw")):
        chi = complex(residue_symbol(r, c, 3))
        assert abs(gauss_sum_g(3, r, c).value - chi.conjugate() * base) < 1e-8


def test_gauss_sum_vanishes_when_r_divisible():
    c = QuadInt(1, 9, "qw")
    assert abs(gauss_sum_g(3, c * QuadInt(2, 1, "qw"), c).value) < 1e-8


def test_conjugation():
    # conj g(1, c) = g(1, conj c) since chi_c(-1) = 1 for these class primes
    for z in (QuadInt(1, 9, "qw"), QuadInt(-8, -9, "qw")):
        g = gauss_sum_g(3, 1, z).value
        gc = gauss_sum_g(3, 1, z.conjugate()).value
        assert abs(g.conjugate() - gc) < 1e-8


def test_composite_modulus_modulus():
    c = QuadInt(-2, -3, "qw") * QuadInt(1, 9, "qw")
    g = gauss_sum_literal(3, 1, c)
    assert abs(abs(g.value) ** 2 - c.norm) < 1e-6


@pytest.mark.parametrize("n, field, m", [(3, "qw", 9), (4, "qi", 16)])
def test_rational_gauss_sum_equals_g(n, field, m):
    for pe in enumerate_prime_elements(field, 4000, m):
        if pe.split_type != "split":
            continue
        chi = induced_dirichlet_character(pe, n)
        tau = rational_gauss_sum(1, chi)
        assert abs(tau.value - gauss_sum_g(n, 1, pe.value).value) < 1e-6


def test_rational_gauss_sum_modulus():
    chi = induced_dirichlet_character(norm_form_solve(13, "qi"), 4)
    assert abs(abs(rational_gauss_sum(1, chi).value) - math.sqrt(13)) < 1e-10
    assert abs(rational_gauss_sum(13, chi).value) < 1e-10


def test_root_numbers():
    z = QuadInt(37, 72, "qw")
    assert root_number("quad-hecke-qw", z).value == pytest.approx(math.sqrt(z.norm))
    w = root_number("cubic-hecke", QuadInt(1, 9, "qw"))
    assert abs(abs(w.value) - math.sqrt(73)) < 1e-9
    with pytest.raises(ValueError):
        root_number("cubic-hecke", QuadInt(-2, -3, "qw"))
    assert family_class("quartic-hecke", "qi") == (4, 16)
    with pytest.raises(ValueError):
        family_class("cubic-hecke", "qi")


def test_invalid_arguments():
    with pytest.raises(ValueError):
        gauss_sum_g(3, 1, QuadInt(1, 16, "qi"))
    with pytest.raises(ValueError):
        gauss_sum_g(5, 1, QuadInt(1, 9, "qw"))
    with pytest.raises(ValueError):
        gauss_sum_g(3, 1, QuadInt(0, 0, "qw"))


def test_complexval():
    v = ComplexVal.of(1 + 2j, 1e-12)
    assert v.conjugate().value == 1 - 2j
    assert v.close_to(1 + 2j + 5e-13)
    assert not v.close_to(1 + 2.1j)
    assert abs(v) == pytest.approx(math.sqrt(5))
