import cmath
import os
import sys
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from wachlab.product_ring import ProductMatrix
from wachlab.scalars import Monomial, Scalar

settings.register_profile("default", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ORDER = 8
PARAMS = ("a_0", "a_1")


@st.composite
def monomials(draw, params=True, max_exp=10):
    p2 = draw(st.integers(-2 * max_exp, 2 * max_exp))
    turn = Fraction(draw(st.integers(0, ORDER - 1)), ORDER)
    ps = ()
    if params:
        ps = tuple(
            (name, e)
            for name in PARAMS
            if (e := draw(st.integers(0, 3)))
        )
    return Monomial(p2, turn, ps)


@st.composite
def scalars(draw, max_terms=4, params=True):
    n = draw(st.integers(0, max_terms))
    terms = [(draw(monomials(params=params)), draw(st.integers(-5, 5))) for _ in range(n)]
    return Scalar(terms)


@st.composite
def unit_monomials(draw, max_exp=10):
    m = draw(monomials(params=False, max_exp=max_exp))
    return Scalar([(m, draw(st.sampled_from((1, -1))))])


@st.composite
def tuples_of(draw, elements, m):
    return tuple(draw(elements) for _ in range(m))


@st.composite
def product_matrices(draw, m, dim=2, entries=None):
    if entries is None:
        entries = scalars(max_terms=2, params=False)
    return ProductMatrix(
        tuple(tuple(draw(tuples_of(entries, m)) for _ in range(dim)) for _ in range(dim))
    )


@st.composite
def invertible_monomial_matrices(draw, m):
    """Per-embedding diagonal or antidiagonal matrices of unit monomials."""
    comps = []
    zero = Scalar()
    for _ in range(m):
        a, b = draw(unit_monomials(max_exp=4)), draw(unit_monomials(max_exp=4))
        if draw(st.booleans()):
            comps.append([[a, zero], [zero, b]])
        else:
            comps.append([[zero, a], [b, zero]])
    return ProductMatrix.from_components(comps)


def numeric(s: Scalar, p: float = 3.0, values=None) -> complex:
    """Evaluate a scalar as a complex number: an independent check on
    canonical-form arithmetic."""
    values = values or {"a_0": 0.7, "a_1": -1.3}
    total = 0j
    for m, c in s.terms:
        z = cmath.exp(2j * cmath.pi * float(m.turn))
        v = c * z * p ** float(m.p_exp)
        for name, e in m.params:
            v *= values[name] ** e
        total += v
    return total


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
