import pytest
from hypothesis import given
from hypothesis import strategies as st

from wachlab.characters import character_from_exponents, ell_s_vectors
from wachlab.errors import TooLarge
from wachlab.families import FamilySpec, analyze, reduction_from_types
from wachlab.reduction import (
    InertiaCharacter,
    SemisimpleReduction,
    det_consistent,
    det_reduction,
    induce_reduction,
    irreducibility_oracle,
    is_irreducible_closed_form,
    lift,
    modulus,
    oracle_audit,
    reduce_character,
    star_identity_check,
)

PRIMES = st.sampled_from([2, 3, 5, 7])


def test_det_reduction_example():
    assert det_reduction((1, 2), 3, 2).exp == 1
    assert det_reduction((1, 2), 3, 2).modulus == 8


def test_relative_exponents():
    c = InertiaCharacter(3, 4, 25)
    assert c.relative_to(0) == 25
    assert c.relative_to(1) == 35
    assert SemisimpleReduction(3, 4, (25, 65)).relative_to(1) == (35, 75)


def test_fixture_25_orbit():
    r = analyze(FamilySpec(3, 2, (1, 2), family="25"))
    assert r.orbit_relative() == [35, 75]
    assert r.irreducible


def test_reducible_fixtures():
    r = analyze(FamilySpec(3, 2, (1, 37), family="25"))
    assert r.orbit_relative() == [40, 40]
    assert not r.irreducible


def test_weaker_divisor_is_not_enough():
    # 70 is divisible by 1 + p^2 = 10 but not by (1 + p)(1 + p^2) = 40,
    # yet the reduction splits
    r = analyze(FamilySpec(3, 2, (1, 7), family="25"))
    assert r.orbit_relative() == [70, 70]
    assert not r.irreducible
    assert not irreducibility_oracle(70, 3, 2)


@pytest.mark.parametrize("e,p,f,expected", [(2, 3, 1, True), (4, 3, 1, False), (0, 3, 1, False),
                                            (35, 3, 2, True), (40, 3, 2, False), (10, 3, 2, False),
                                            (1, 2, 1, True), (3, 2, 1, False)])
def test_irreducibility_examples(e, p, f, expected):
    assert is_irreducible_closed_form(e, p, f) is expected
    assert irreducibility_oracle(e, p, f) is expected


@pytest.mark.parametrize("p,f", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1), (7, 2)])
def test_closed_form_matches_oracle_everywhere(p, f):
    assert oracle_audit(p, f) == []


def test_oracle_cap():
    with pytest.raises(TooLarge):
        irreducibility_oracle(1, 11, 4)


def test_induce_and_lift():
    red = induce_reduction(InertiaCharacter(3, 2, 3), 1)
    assert red.exponents == (1, 3)
    with pytest.raises(ValueError):
        induce_reduction(InertiaCharacter(3, 4, 1), 1)
    assert lift(InertiaCharacter(3, 1, 1), 2).exp == 4
    with pytest.raises(ValueError):
        lift(InertiaCharacter(3, 2, 1), 3)


def test_light_path_agrees_with_analyze():
    for types in [(1,), (2,), (3,), (4,), (1, 2, 3), (4, 4, 1)]:
        weights = tuple(range(2, 2 + len(types)))
        r = analyze(FamilySpec(5, len(types), weights, types))
        ell, s = reduction_from_types(5, types, weights)
        assert r.reduction == ell == s


@given(PRIMES, st.integers(1, 3), st.data())
def test_det_consistency(p, f, data):
    weights = data.draw(st.lists(st.integers(1, 40), min_size=f, max_size=f))
    types = data.draw(st.lists(st.integers(1, 4), min_size=f, max_size=f))
    if f % 2 == 0:
        return
    d = ell_s_vectors(types, weights)
    ell_red, s_red = reduction_from_types(p, types, weights)
    assert ell_red == s_red
    assert det_consistent(ell_red, weights, f)
    assert star_identity_check(d, weights, p, f)


@given(PRIMES, st.integers(1, 4), st.data())
def test_reduce_character_linear(p, n, data):
    a = data.draw(st.lists(st.integers(-50, 50), min_size=n, max_size=n))
    b = data.draw(st.lists(st.integers(-50, 50), min_size=n, max_size=n))
    ca = reduce_character(character_from_exponents(a), p)
    cb = reduce_character(character_from_exponents(b), p)
    cab = reduce_character(character_from_exponents([x + y for x, y in zip(a, b)]), p)
    assert ca * cb == cab


@given(PRIMES, st.integers(1, 3), st.integers(0, 10**6))
def test_closed_form_matches_oracle_random(p, f, e):
    if modulus(p, 2 * f) > 10**6:
        return
    assert is_irreducible_closed_form(e, p, f) == irreducibility_oracle(e, p, f)


@given(PRIMES, st.integers(1, 3), st.integers(0, 10**6))
def test_orbit_closed_under_frobenius_f(p, f, e):
    red = induce_reduction(InertiaCharacter(p, 2 * f, e), f)
    assert red.twist(p**f) == red
