"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line (printed in the "acceptance criteria" section
of the pytest summary) and then asserts the same condition.  Tolerances are the
contractual ones; nothing is loosened when a check fails.
"""

import math
import random
import time

import numpy as np
import pytest

from heckemoments.cache import LValueCache
from heckemoments.fields import QI, QW, QuadInt, ray_class_number
from heckemoments.gauss import gauss_sum_g, rational_gauss_sum
from heckemoments.lfunc import (
    dirichlet_L_central,
    dirichlet_L_via_hurwitz,
    functional_equation_residual,
    hecke_L_central,
)
from heckemoments.moments import fit_main_terms, moment, patterson_diagnostic, predicted_constant
from heckemoments.primes import enumerate_prime_elements, norm_form_solve, prime_sieve
from heckemoments.special import kernel_V, kernel_W, mellin_V, mellin_W
from heckemoments.symbols import (
    classify_order_n_characters,
    induced_dirichlet_character,
    residue_symbol,
    supplement_check,
)
from oracles import euler_symbol_index

pytestmark = pytest.mark.acceptance


def _elapsed(t0):
    return f"{time.perf_counter() - t0:.1f} s"


# 1 ------------------------------------------------------------------------


def test_c01_symbol_oracle(criterion):
    t0 = time.perf_counter()
    rng = random.Random(2024)
    checked = mismatches = 0
    for field, orders in (("qw", (2, 3)), ("qi", (2, 4))):
        for pe in enumerate_prime_elements(field, 10**4):
            residues = [QuadInt(rng.randrange(-10**4, 10**4), rng.randrange(-10**4, 10**4), field)
                        for _ in range(50)]
            for n in orders:
                if math.gcd(pe.norm, n) != 1:
                    continue
                for a in residues:
                    got = residue_symbol(a, pe.value, n)
                    want = euler_symbol_index((a.a, a.b), (pe.value.a, pe.value.b), n, field)
                    mismatches += (None if got.is_zero else got.index) != want
                    checked += 1
    ok = mismatches == 0
    criterion("1", ok, f"Euler congruence: {checked} symbols, {mismatches} mismatches ({_elapsed(t0)})")
    assert ok


# 2 ------------------------------------------------------------------------


def test_c02_supplement_laws(criterion):
    cubic = [pe for pe in enumerate_prime_elements("qw", 10**4, 9)]
    quad = [pe for pe in enumerate_prime_elements("qw", 10**4, 36)]
    fail_3 = [pe for pe in cubic if not supplement_check(pe.value)["cubic_1-w"]]
    fail_2 = [pe for pe in quad if not supplement_check(pe.value)["quadratic_2"]]
    fail_1w = [pe for pe in quad if not supplement_check(pe.value)["quadratic_1-w"]]
    ok = not (fail_3 or fail_2 or fail_1w)
    detail = (
        f"((1-w)/c)_3: {len(fail_3)}/{len(cubic)} failures; ((1-w)/c)_2: {len(fail_1w)}/{len(quad)}; "
        f"(2/c)_2: {len(fail_2)}/{len(quad)}"
    )
    if fail_2:
        pe = fail_2[0]
        detail += (
            f" (e.g. c={pe.value}, N(c)={pe.norm} == {pe.norm % 8} mod 8, "
            f"2^((N-1)/2) mod N = {pow(2, (pe.norm - 1) // 2, pe.norm)})"
        )
    criterion("2", ok, detail)
    assert ok


# 3 ------------------------------------------------------------------------


def test_c03_gauss_modulus(criterion):
    t0 = time.perf_counter()
    worst = 0.0
    count = 0
    for field, m, n in (("qw", 36, 2), ("qi", 16, 2), ("qw", 9, 3), ("qi", 16, 4)):
        for pe in enumerate_prime_elements(field, 10**5, m):
            g = gauss_sum_g(n, 1, pe.value)
            worst = max(worst, abs(abs(g.value) ** 2 - pe.norm) / pe.norm)
            count += 1
    ok = worst < 1e-6
    criterion("3", ok, f"||g|^2 - N|/N <= {worst:.2e} over {count} family primes ({_elapsed(t0)})")
    assert ok


# 4 ------------------------------------------------------------------------


def test_c04_tau_equals_g(criterion):
    worst = 0.0
    count = skipped = 0
    for field, m, n in (("qw", 9, 3), ("qi", 16, 4)):
        for pe in enumerate_prime_elements(field, 10**4, m):
            if pe.split_type != "split":
                skipped += 1  # no Dirichlet character attached to an inert prime
                continue
            tau = rational_gauss_sum(1, induced_dirichlet_character(pe, n)).value
            worst = max(worst, abs(tau - gauss_sum_g(n, 1, pe.value).value))
            count += 1
    ok = worst < 1e-6
    criterion("4", ok, f"max |tau - g| = {worst:.2e} over {count} split primes ({skipped} inert skipped)")
    assert ok


# 5 ------------------------------------------------------------------------


def test_c05_ray_class_numbers(criterion):
    got = (ray_class_number(QW, QuadInt(36, 0, "qw")), ray_class_number(QW, QuadInt(9, 0, "qw")),
           ray_class_number(QI, QuadInt(16, 0, "qi")))
    ok = got[:2] == (108, 9)
    criterion("5", ok, f"#h(36) = {got[0]}, #h(9) = {got[1]} over Z[w]; #h(16) = {got[2]} over Z[i]")
    assert ok


# 6 ------------------------------------------------------------------------


def test_c06_kernels(criterion):
    diffs = []
    for x in (0.1, 1.0, 10.0):
        diffs.append(abs(float(kernel_V(x)) - mellin_V(x)))
        diffs.append(abs(float(kernel_W(x)) - mellin_W(x)))
    near_zero = [1 - float(kernel_V(1e-12)), 1 - float(kernel_W(1e-12))]
    ok = max(diffs) < 1e-8 and max(near_zero) < 1e-5
    criterion("6", ok, f"closed form vs Mellin quadrature: max diff {max(diffs):.1e}; "
                       f"1 - V, 1 - W at 1e-12: {near_zero[0]:.1e}, {near_zero[1]:.1e}")
    assert ok


# 7 ------------------------------------------------------------------------


def _sample(field, m, max_norm, k, seed, split_only=False):
    primes = enumerate_prime_elements(field, max_norm, m)
    if split_only:
        primes = [pe for pe in primes if pe.split_type == "split"]
    assert len(primes) >= k
    return random.Random(seed).sample(primes, k)


def test_c07_afe_self_consistency(criterion):
    t0 = time.perf_counter()
    worst_stab = worst_res = 0.0
    count = 0
    hecke = (("quad-hecke-qw", "qw", 36, 400000), ("quad-hecke-qi", "qi", 16, 100000),
             ("cubic-hecke", "qw", 9, 40000), ("quartic-hecke", "qi", 16, 60000))
    for family, field, m, X in hecke:
        for pe in _sample(field, m, X, 100, seed=len(family)):
            base = hecke_L_central(family, pe)
            L = base.value.value
            doubled = hecke_L_central(family, pe, balance=2 * base.balance)
            raised = hecke_L_central(family, pe, threshold=50.0)
            scale = max(1.0, abs(L))
            worst_stab = max(worst_stab, abs(doubled.value.value - L) / scale,
                             abs(raised.value.value - L) / scale)
            worst_res = max(worst_res, functional_equation_residual(doubled), functional_equation_residual(base))
            count += 1
    for n, field, m in ((3, "qw", 9), (4, "qi", 16)):
        for pe in _sample(field, m, 60000, 100, seed=n, split_only=True):
            chi = induced_dirichlet_character(pe, n)
            base = dirichlet_L_central(chi)
            L = base.value.value
            doubled = dirichlet_L_central(chi, balance_A=2 * base.balance)
            raised = dirichlet_L_central(chi, threshold=50.0)
            scale = max(1.0, abs(L))
            worst_stab = max(worst_stab, abs(doubled.value.value - L) / scale,
                             abs(raised.value.value - L) / scale)
            eps = complex(base.root_number) / math.sqrt(chi.modulus) / (1 if chi.is_even else 1j)
            Ld = doubled.value.value
            worst_res = max(worst_res, abs(Ld - eps * Ld.conjugate()))
            count += 1
    ok = worst_stab < 1e-8 and worst_res < 1e-6
    criterion("7", ok, f"{count} characters (100 per family): balance/threshold drift {worst_stab:.1e}, "
                       f"functional-equation residual {worst_res:.1e} ({_elapsed(t0)})")
    assert ok


# 8 ------------------------------------------------------------------------


def test_c08_dirichlet_vs_hurwitz(criterion):
    t0 = time.perf_counter()
    sieve = prime_sieve(2000)
    worst = 0.0
    count = 0
    for n in (3, 4):
        for p in range(5, 2001):
            if not sieve[p]:
                continue
            for chi in classify_order_n_characters(p, n):
                afe = dirichlet_L_central(chi).value.value
                hz = dirichlet_L_via_hurwitz(chi).value
                worst = max(worst, abs(afe - hz))
                count += 1
    ok = worst < 1e-8
    criterion("8", ok, f"max |AFE - Hurwitz| = {worst:.1e} over {count} characters ({_elapsed(t0)})")
    assert ok


# 9 ------------------------------------------------------------------------


def _tables_by_trial_generator(p, n):
    if (p - 1) % n:
        return set()
    divs = [q for q in range(2, p) if (p - 1) % q == 0 and all(q % r for r in range(2, int(q**0.5) + 1))]
    g = next(g for g in range(2, p) if all(pow(g, (p - 1) // q, p) != 1 for q in divs))
    out = set()
    for k in range(1, n):
        if math.gcd(k, n) != 1:
            continue
        table = [-1] * p
        x = 1
        for e in range(p - 1):
            table[x] = (k * e) % n
            x = x * g % p
        out.add(tuple(table))
    return out


def test_c09_lemma_classification(criterion):
    sieve = prime_sieve(1000)
    disagreements = 0
    primes = 0
    for p in range(5, 1001):
        if not sieve[p]:
            continue
        primes += 1
        for n, field in ((3, "qw"), (4, "qi")):
            brute = _tables_by_trial_generator(p, n)
            if (p - 1) % n:
                induced = set()
            else:
                pi = norm_form_solve(p, field)
                induced = {tuple(induced_dirichlet_character(z, n).table.tolist()) for z in (pi, pi.conjugate())}
            disagreements += brute != induced or len(brute) not in (0, 2)
    ok = disagreements == 0
    criterion("9", ok, f"{primes} primes p <= 1000, orders 3 and 4: {disagreements} disagreements")
    assert ok


# 10, 11 ---------------------------------------------------------------------


@pytest.fixture(scope="module")
def moment_runs(tmp_path_factory):
    cache = LValueCache(tmp_path_factory.mktemp("lv") / "values.jsonl")
    t0 = time.perf_counter()
    runs = {}
    for y in (1e4, 2e4, 4e4, 8e4):
        runs[("quad-qw", y)] = moment("quad-qw", y, cache=cache)
    for fam in ("cubic", "dirichlet3"):
        for y in (1e4, 2.5e4, 5e4, 1e5):
            runs[(fam, y)] = moment(fam, y, cache=cache)
    runs["elapsed"] = time.perf_counter() - t0
    return runs


def test_c10a_quadratic_fit(criterion, moment_runs):
    pts = [(y, moment_runs[("quad-qw", y)].observed_re) for y in (1e4, 2e4, 4e4, 8e4)]
    A_hat, B_hat = fit_main_terms(pts)
    A = predicted_constant("Aqw")
    ok = abs(A_hat / A - 1) <= 0.15
    counts = [moment_runs[("quad-qw", y)].prime_count for y in (1e4, 2e4, 4e4, 8e4)]
    criterion("10a", ok, f"Q(w) quadratic fit over y = 1e4..8e4 (primes per scale {counts}): "
                         f"A_hat = {A_hat:.5f}, A = {A:.5f}, A_hat/A = {A_hat / A:.3f}, B_hat = {B_hat:.4f}")
    assert ok


@pytest.mark.parametrize("family, label", [("cubic", "10b"), ("dirichlet3", "10c")])
def test_c10bc_linear_moments(criterion, moment_runs, family, label):
    scales = (1e4, 2.5e4, 5e4, 1e5)
    ratios = [moment_runs[(family, y)].ratio for y in scales]
    in_budget = 0.75 <= ratios[-1] <= 1.25
    closer = abs(ratios[-1] - 1) < abs(ratios[0] - 1)
    ok = in_budget and closer
    trend = ", ".join(f"{y:.1e}: {r:.3f}" for y, r in zip(scales, ratios))
    criterion(label, ok, f"{family} ratio observed/predicted by scale [{trend}]; "
                         f"budget [0.75, 1.25] at 1e5: {'met' if in_budget else 'missed'}; "
                         f"closer to 1 than at 1e4: {closer} (moments took {moment_runs['elapsed']:.0f} s)")
    assert ok


def test_c11_reality_and_determinism(criterion, moment_runs):
    worst = max(r.relative_imag for k, r in moment_runs.items() if k != "elapsed")
    one = moment("cubic", 1e4, workers=1)
    four = moment("cubic", 1e4, workers=4)
    identical = one.to_json(include_run=False) == four.to_json(include_run=False) and (
        one.contributions_csv() == four.contributions_csv()
    )
    ok = worst < 1e-6 and identical
    criterion("11", ok, f"max relative imaginary part {worst:.1e}; workers 1 vs 4 bit-identical: {identical}")
    assert ok


# 12 -----------------------------------------------------------------------


def test_c12_patterson(criterion, capsys):
    t0 = time.perf_counter()
    rows = patterson_diagnostic("qw", 3, 1e6)
    zero_below = all(r.abs_S == 0.0 for r in rows if r.x < 73)
    below_x = all(r.abs_S < r.x for r in rows)
    ok = zero_below and below_x and rows[-1].x == 2.0**19
    last = rows[-1]
    criterion("12", ok, f"cubic S(x) to 1e6 ({last.prime_count} primes): zero below 73: {zero_below}; "
                        f"|S(x)| < x at all {len(rows)} dyadic x: {below_x}; at x = 2^19 |S| = {last.abs_S:.1f}, "
                        f"x^(27/32) = {last.shape_27_32:.1f}, x^(19/20) = {last.shape_19_20:.1f} ({_elapsed(t0)})")
    with capsys.disabled():
        print("\n      x        |S(x)|   x^(27/32)   x^(19/20)  primes")
        for r in rows:
            print(f"{r.x:9.0f} {r.abs_S:11.3f} {r.shape_27_32:11.1f} {r.shape_19_20:11.1f} {r.prime_count:7d}")
    assert ok
