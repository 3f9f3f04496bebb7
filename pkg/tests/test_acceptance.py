"""Acceptance criteria 1-8.  Each test records one PASS/FAIL line, printed
in the pytest terminal summary (or directly when run as a script)."""
import itertools
import random
import sys
import time
from fractions import Fraction

import pytest

from wachlab.characters import CrystallineCharacter, ell_s_vectors
from wachlab.families import FamilySpec, analyze, family_module, reduction_from_types
from wachlab.filtered_modules import FilteredPhiModule, FiltrationStep, check_weak_admissibility
from wachlab.product_ring import (
    ProductMatrix,
    frobenius_shift,
    matrix_mul,
    matrix_shift,
    matrix_tensor_n,
    semilinear_conjugate,
    theta_embed,
)
from wachlab.reduction import irreducibility_oracle, is_irreducible_closed_form, star_identity_check
from wachlab.scalars import ONE, ZERO, Monomial, Scalar
from wachlab.wach_series import check_qk_condition, family_wach, restrict_wach

RESULTS = {}

P = Scalar.p_power
I = Scalar.zeta(2, 8)
Z8 = Scalar.zeta(1, 8)
FIXTURE_GRID = [(p, k0, k1) for p in (3, 5) for k0 in range(1, 7) for k1 in range(1, 7)]


def family_grid(primes=(3, 5), k_max=4):
    for p in primes:
        for f in (1, 3):
            for types in itertools.product((1, 2, 3, 4), repeat=f):
                for weights in itertools.product(range(1, k_max + 1), repeat=f):
                    yield p, types, weights


def record(n, ok, detail, start):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail} ({time.perf_counter() - start:.2f} s)"
    RESULTS[n] = line
    print(line)
    assert ok, line


def orbit(e, p, f):
    mod = p ** (2 * f) - 1
    return sorted((e % mod, e * p**f % mod))


def fixture_run(family, expected_diag, expected_exps, reference_exp):
    bad, slowest = [], 0.0
    for p, k0, k1 in FIXTURE_GRID:
        t = time.perf_counter()
        r = analyze(FamilySpec(p, 2, (k0, k1), family=family))
        slowest = max(slowest, time.perf_counter() - t)
        ok = (
            r.diagonal == expected_diag(k0, k1)
            and [[str(x) for x in v] for v in r.diagonal] == [[str(x) for x in v] for v in expected_diag(k0, k1)]
            and r.character_ell == CrystallineCharacter(4, Z8, expected_exps(k0, k1))
            and list(r.reduction.exponents) == orbit(reference_exp(p, k0, k1), p, 2)
            and r.valid
        )
        if not ok:
            bad.append((p, k0, k1))
    return bad, slowest


def test_criterion_1_fixture_25():
    start = time.perf_counter()

    def diag(k0, k1):
        ip = I * P(Fraction(k1, 2))
        return ((ip, P(k0), ip, ONE), (-ip, ONE, -ip, P(k0)))

    bad, slowest = fixture_run("25", diag, lambda k0, k1: (0, 0, k1, k0), lambda p, k0, k1: -(k1 * p + k0 * p * p))
    record(1, not bad and slowest < 1.0,
           f"{len(FIXTURE_GRID) - len(bad)}/{len(FIXTURE_GRID)} instances exact, slowest {slowest * 1000:.0f} ms", start)


def test_criterion_2_fixture_28():
    start = time.perf_counter()

    def diag(k0, k1):
        ip = I * P(Fraction(k1, 2))
        return ((ip, ONE, ip, P(k0)), (-ip, P(k0), -ip, ONE))

    bad, slowest = fixture_run("28", diag, lambda k0, k1: (0, k0, k1, 0), lambda p, k0, k1: -(k0 + k1 * p))
    record(2, not bad, f"{len(FIXTURE_GRID) - len(bad)}/{len(FIXTURE_GRID)} instances exact", start)


def brute_force_reducible(e, p, f):
    mod = p ** (2 * f) - 1
    return any(((1 + p**f) * m - e) % mod == 0 for m in range(mod))


def test_criterion_3_irreducibility():
    start = time.perf_counter()
    cases = [(p, f) for p in (2, 3, 5) for f in (1, 2, 3) if p ** (2 * f) - 1 <= 10**4]
    checked = disagreements = 0
    for p, f in cases:
        for e in range(p ** (2 * f) - 1):
            brute = not brute_force_reducible(e, p, f)
            if not (is_irreducible_closed_form(e, p, f) == irreducibility_oracle(e, p, f) == brute):
                disagreements += 1
            checked += 1
    # on fixture 25 the closed form reads (1 + p^2) does not divide k1 + p k0
    fixture_bad = sum(
        ((k1 + p * k0) % (1 + p * p) != 0) != analyze(FamilySpec(p, 2, (k0, k1), family="25")).irreducible
        for p, k0, k1 in FIXTURE_GRID
    )
    strong_bad = sum(
        ((k1 + p * k0) % ((1 + p * p) * (1 + p)) != 0) != (not brute_force_reducible(-(k1 + p * k0), p, 2))
        for p, k0, k1 in FIXTURE_GRID
    )
    elapsed = time.perf_counter() - start
    record(3, disagreements == 0 and fixture_bad == 0 and elapsed < 10,
           f"{disagreements} disagreements over {checked} residues in {len(cases)} (p, f) cases; "
           f"fixture 25 divisor 1+p^2: {fixture_bad} mismatches, divisor (1+p)(1+p^2): "
           f"{strong_bad}/{len(FIXTURE_GRID)} mismatches", start)


def test_criterion_4_ell_s():
    start = time.perf_counter()
    bad = n = 0
    for p, types, weights in family_grid():
        ell, s = reduction_from_types(p, types, weights)
        bad += ell.exponents != s.exponents
        n += 1
    elapsed = time.perf_counter() - start
    record(4, bad == 0 and elapsed < 60, f"{n - bad}/{n} instances agree", start)


def test_criterion_5_det_star():
    start = time.perf_counter()
    bad = n = 0
    for p, types, weights in family_grid():
        f = len(types)
        mod = p ** (2 * f) - 1
        red, _ = reduction_from_types(p, types, weights)
        det = -sum(k * p**i for i, k in enumerate(weights))
        det_ok = (sum(red.exponents) - (1 + p**f) * det) % mod == 0
        star_ok = star_identity_check(ell_s_vectors(types, weights), weights, p, f)
        bad += not (det_ok and star_ok)
        n += 1
    record(5, bad == 0, f"{n - bad}/{n} instances satisfy both identities", start)


def test_criterion_6_wach():
    start = time.perf_counter()
    bad = n = 0
    for p, types, weights in family_grid(primes=(2, 3)):
        w = family_wach(types, weights, p, T=64)
        k = max(weights)
        r = restrict_wach(w, 2)
        ok = (check_qk_condition(w, p, k) and not check_qk_condition(w, p, k - 1)
              and check_qk_condition(r, p, k) and not check_qk_condition(r, p, k - 1))
        bad += not ok
        n += 1
    elapsed = time.perf_counter() - start
    record(6, bad == 0 and elapsed < 5, f"{n - bad}/{n} Wach matrices sharp at k, with their restrictions", start)


def test_criterion_7_admissibility():
    start = time.perf_counter()
    bad = n = 0
    for family in ("25", "28"):
        for p, k0, k1 in FIXTURE_GRID:
            bad += not check_weak_admissibility(family_module(FamilySpec(p, 2, (k0, k1), family=family)))[0]
            n += 1
    for p, types, weights in family_grid():
        bad += not check_weak_admissibility(family_module(FamilySpec(p, len(types), weights, types)))[0]
        n += 1
    counter_rejected = 0
    for k in range(1, 7):
        step = FiltrationStep(1, k, (1,), ((ONE,), (ZERO,)))
        d = FilteredPhiModule(2, ProductMatrix.diag((ONE,), (P(k),)), (step,), (k,))
        counter_rejected += not check_weak_admissibility(d)[0]
    record(7, bad == 0 and counter_rejected == 6,
           f"{n - bad}/{n} modules admissible, {counter_rejected}/6 counterexamples rejected", start)


# randomized property suites ---------------------------------------------------

N_CASES = 10**4


def rand_scalar(rng, terms=3):
    out = []
    for _ in range(rng.randint(0, terms)):
        params = tuple((name, e) for name in ("a_0", "a_1") if (e := rng.randint(0, 2)))
        mono = Monomial(rng.randint(-6, 6), Fraction(rng.randrange(8), 8), params)
        out.append((mono, rng.randint(-5, 5)))
    return Scalar(out)


def rand_unit(rng):
    return Scalar.zeta(rng.randrange(8), 8) * P(Fraction(rng.randint(-4, 4), 2))


def rand_matrix(rng, m, entry):
    return ProductMatrix(tuple(tuple(tuple(entry(rng) for _ in range(m)) for _ in range(2)) for _ in range(2)))


def rand_invertible(rng, m):
    comps = []
    for _ in range(m):
        u, v = rand_unit(rng), rand_unit(rng)
        comps.append([[u, ZERO], [ZERO, v]] if rng.random() < 0.5 else [[ZERO, u], [v, ZERO]])
    return ProductMatrix.from_components(comps)


def ring_axioms(rng):
    a, b, c = rand_scalar(rng), rand_scalar(rng), rand_scalar(rng)
    return (a + b == b + a and a * b == b * a and (a + b) + c == a + (b + c)
            and (a * b) * c == a * (b * c) and a * (b + c) == a * b + a * c
            and a + ZERO == a and a * ONE == a and (a + (-a)).is_zero())


def cocycle(rng):
    m = rng.randint(1, 3)
    a = rand_matrix(rng, m, lambda r: rand_scalar(r, 2))
    q1, q2 = rand_invertible(rng, m), rand_invertible(rng, m)
    return semilinear_conjugate(q2, semilinear_conjugate(q1, a)) == semilinear_conjugate(matrix_mul(q2, q1), a)


def theta_phi(rng):
    m, n = rng.randint(1, 5), rng.randint(1, 4)
    t = tuple(rng.randint(-99, 99) for _ in range(m))
    a = rand_matrix(rng, m, lambda r: rand_scalar(r, 1))
    return (frobenius_shift(theta_embed(t, n)) == theta_embed(frobenius_shift(t), n)
            and matrix_shift(matrix_tensor_n(a, n)) == matrix_tensor_n(matrix_shift(a), n))


def shift_period(rng):
    m = rng.randint(1, 6)
    t = tuple(rng.randint(-99, 99) for _ in range(m))
    a = rand_matrix(rng, m, lambda r: rand_scalar(r, 1))
    s, b = t, a
    for _ in range(m):
        s, b = frobenius_shift(s), matrix_shift(b)
    return s == t and b == a


def test_criterion_8_properties():
    start = time.perf_counter()
    rng = random.Random(20240601)
    counts = {}
    for prop in (ring_axioms, cocycle, theta_phi, shift_period):
        counts[prop.__name__] = sum(not prop(rng) for _ in range(N_CASES))
    detail = ", ".join(f"{name} {N_CASES - bad}/{N_CASES}" for name, bad in counts.items())
    record(8, not any(counts.values()), detail, start)


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for test in tests:
        try:
            test()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
