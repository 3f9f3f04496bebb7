"""Exact symbolic scalars: integer combinations of monomials

    zeta^a * p^r * prod(x_i^e_i)

where zeta is a root of unity, r is a half-integer and the x_i are formal
family parameters (``a_0``, ``a_1``, ...).

Roots of unity are stored as a *turn* ``a/N`` in ``[0, 1)``; this keeps
scalars of different cyclotomic orders compatible.  Canonical form folds
``zeta^(N/2) = -1`` into the integer coefficient, so every stored turn lies
in ``[0, 1/2)``.  That is a normal form for the power-of-two cyclotomic
fields used by the fixtures; for other orders equality is equality of
canonical forms, which is all the monomial computations here need.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import NonMonomialInverse, ParamValuation, ZeroValuation

DEFAULT_ORDER = 8

ScalarLike = Union["Scalar", int]


def default_order(f: int) -> int:
    """Root-of-unity order big enough for sqrt(-1), its square root and the
    2f-th roots of -1."""
    return math.lcm(8, 2 * f)


@dataclass(frozen=True, order=True)
class Monomial:
    p2: int = 0  # twice the exponent of p
    turn: Fraction = Fraction(0)
    params: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "turn", Fraction(self.turn) % 1)
        if any(e <= 0 for _, e in self.params):
            raise ValueError("parameter exponents must be positive")

    @property
    def p_exp(self) -> Fraction:
        return Fraction(self.p2, 2)

    def zeta_exp(self, order: int) -> int:
        e = self.turn * order
        if e.denominator != 1:
            raise ValueError(f"turn {self.turn} is not representable with zeta{order}")
        return int(e)

    def __mul__(self, other: "Monomial") -> "Monomial":
        params = dict(self.params)
        for name, e in other.params:
            params[name] = params.get(name, 0) + e
        return Monomial(self.p2 + other.p2, self.turn + other.turn, tuple(sorted(params.items())))


ONE_MONO = Monomial()


def _canonical(terms: Iterable[tuple[Monomial, int]]) -> tuple[tuple[Monomial, int], ...]:
    acc: dict[Monomial, int] = {}
    for mono, c in terms:
        if mono.turn >= Fraction(1, 2):
            mono = Monomial(mono.p2, mono.turn - Fraction(1, 2), mono.params)
            c = -c
        acc[mono] = acc.get(mono, 0) + c
    return tuple(sorted((m, c) for m, c in acc.items() if c != 0))


class Scalar:
    """An immutable element of the coefficient field in canonical form."""

    __slots__ = ("terms", "order", "_hash")

    def __init__(self, terms: Iterable[tuple[Monomial, int]] = (), order: int = DEFAULT_ORDER):
        self.terms = _canonical(terms)
        self.order = order
        self._hash = None

    # constructors ---------------------------------------------------------
    @classmethod
    def from_int(cls, n: int) -> "Scalar":
        return cls([(ONE_MONO, n)])

    @classmethod
    def zeta(cls, exp: int = 1, order: int = DEFAULT_ORDER) -> "Scalar":
        return cls([(Monomial(turn=Fraction(exp, order)), 1)], order=order)

    @classmethod
    def p_power(cls, exp) -> "Scalar":
        exp = Fraction(exp)
        if (2 * exp).denominator != 1:
            raise ValueError(f"p-exponent {exp} is not a half-integer")
        return cls([(Monomial(p2=int(2 * exp)), 1)])

    @classmethod
    def param(cls, name: str, exp: int = 1) -> "Scalar":
        return cls([(Monomial(params=((name, exp),)), 1)])

    @classmethod
    def coerce(cls, x: ScalarLike) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, int):
            return cls.from_int(x)
        if isinstance(x, str):
            return parse_scalar(x)
        raise TypeError(f"cannot make a Scalar from {type(x).__name__}")

    # predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def has_params(self) -> bool:
        return any(m.params for m, _ in self.terms)

    def is_unit_monomial(self) -> bool:
        return len(self.terms) == 1 and abs(self.terms[0][1]) == 1

    @property
    def monomial(self) -> Monomial:
        if len(self.terms) != 1:
            raise ValueError(f"{self} is not a monomial")
        return self.terms[0][0]

    @property
    def coefficient(self) -> int:
        if len(self.terms) != 1:
            raise ValueError(f"{self} is not a monomial")
        return self.terms[0][1]

    # arithmetic -----------------------------------------------------------
    def _order_with(self, other: "Scalar") -> int:
        return math.lcm(self.order, other.order)

    def __add__(self, other: ScalarLike) -> "Scalar":
        if not isinstance(other, (Scalar, int)):
            return NotImplemented
        other = Scalar.coerce(other)
        return Scalar(self.terms + other.terms, self._order_with(other))

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar([(m, -c) for m, c in self.terms], self.order)

    def __sub__(self, other: ScalarLike) -> "Scalar":
        if not isinstance(other, (Scalar, int)):
            return NotImplemented
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other: ScalarLike) -> "Scalar":
        return Scalar.coerce(other) - self

    def __mul__(self, other: ScalarLike) -> "Scalar":
        if not isinstance(other, (Scalar, int)):
            return NotImplemented
        other = Scalar.coerce(other)
        return Scalar(
            [(m1 * m2, c1 * c2) for m1, c1 in self.terms for m2, c2 in other.terms],
            self._order_with(other),
        )

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Scalar":
        base = self if n >= 0 else scalar_inv(self)
        result = Scalar.from_int(1)
        for _ in range(abs(n)):
            result = result * base
        return Scalar(result.terms, self.order)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Scalar.from_int(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __repr__(self) -> str:
        return f"Scalar({str(self)!r})"

    def __str__(self) -> str:
        return render_scalar(self)

    # valuation ------------------------------------------------------------
    def valuation(self) -> Fraction:
        return p_valuation(self)

    def unit_part(self) -> "Scalar":
        """The monomial with its p-power stripped (monomials only)."""
        m, c = self.monomial, self.coefficient
        return Scalar([(Monomial(0, m.turn, m.params), c)], self.order)


def scalar_mul(a: ScalarLike, b: ScalarLike) -> Scalar:
    return Scalar.coerce(a) * Scalar.coerce(b)


def scalar_inv(s: Scalar) -> Scalar:
    """Inverse of a unit monomial ``+-zeta^a p^r x^e``."""
    s = Scalar.coerce(s)
    if not s.is_unit_monomial():
        raise NonMonomialInverse(f"cannot invert non-monomial scalar {s}")
    m, c = s.terms[0]
    if m.params:
        # negative parameter exponents leave the polynomial regime
        raise NonMonomialInverse(f"cannot invert formal parameter in {s}")
    return Scalar([(Monomial(-m.p2, -m.turn), c)], s.order)


def p_valuation(s: Scalar) -> Fraction:
    s = Scalar.coerce(s)
    if s.is_zero():
        raise ZeroValuation("the zero scalar has no valuation")
    if s.has_params():
        raise ParamValuation(f"formal parameter in {s}; specialise a = 0 first")
    return min(m.p_exp for m, _ in s.terms)


def monomial_sqrt(s: Scalar) -> Scalar | None:
    """A square root of a unit monomial, or None if it is not a monomial
    with half-integer p-exponent."""
    if not s.is_unit_monomial() or s.has_params():
        return None
    m, c = s.terms[0]
    if m.p2 % 2:
        return None
    turn = m.turn / 2 + (Fraction(1, 4) if c < 0 else 0)
    order = math.lcm(s.order, turn.denominator)
    return Scalar([(Monomial(m.p2 // 2, turn), 1)], order)


def principal_root(s: Scalar, n: int) -> Scalar:
    """Principal n-th root of a root of unity ``+-zeta^a`` (no p, no params)."""
    if not s.is_unit_monomial() or s.has_params() or s.monomial.p2:
        raise ValueError(f"{s} is not a root of unity")
    m, c = s.terms[0]
    turn = (m.turn + (Fraction(1, 2) if c < 0 else 0)) % 1
    root = turn / n
    return Scalar([(Monomial(turn=root), 1)], math.lcm(s.order, root.denominator))


# rendering -----------------------------------------------------------------

def _render_monomial(m: Monomial, order: int) -> list[str]:
    parts = []
    if m.turn:
        parts.append(f"zeta{order}^{m.zeta_exp(order)}")
    if m.p2:
        e = m.p_exp
        if e == 1:
            parts.append("p")
        elif e.denominator == 1 and e > 0:
            parts.append(f"p^{e.numerator}")
        else:
            parts.append(f"p^({e})")
    for name, e in m.params:
        parts.append(name if e == 1 else f"{name}^{e}")
    return parts


def render_scalar(s: Scalar) -> str:
    if s.is_zero():
        return "0"
    order = s.order
    for m, _ in s.terms:
        order = math.lcm(order, m.turn.denominator)
    out = []
    for i, (m, c) in enumerate(s.terms):
        parts = _render_monomial(m, order)
        mag = abs(c)
        if not parts:
            body = str(mag)
        elif mag == 1:
            body = "*".join(parts)
        else:
            body = f"{mag}*" + "*".join(parts)
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


# parsing -------------------------------------------------------------------

_FACTOR = re.compile(
    r"""^(?:
        (?P<int>\d+)
      | zeta(?P<zorder>\d+)(?:\^(?P<zexp>-?\d+))?
      | p(?:\^(?:\((?P<pfrac>-?\d+(?:/\d+)?)\)|(?P<pint>-?\d+)))?
      | (?P<name>[A-Za-z_][A-Za-z0-9_]*)(?:\^(?P<nexp>\d+))?
    )$""",
    re.VERBOSE,
)


def _split_terms(text: str) -> list[tuple[int, str]]:
    terms = []
    buf, sign, depth = "", 1, 0
    for i, ch in enumerate(text):
        if ch in "+-" and depth == 0 and (i == 0 or text[i - 1] not in "^("):
            if buf:
                terms.append((sign, buf))
                buf, sign = "", 1
            sign *= -1 if ch == "-" else 1
            continue
        depth += (ch == "(") - (ch == ")")
        buf += ch
    if buf:
        terms.append((sign, buf))
    return terms


def parse_scalar(text: str, order: int = DEFAULT_ORDER) -> Scalar:
    """Parse the canonical text rendering back into a Scalar."""
    text = text.replace(" ", "")
    if not text:
        raise ValueError("empty scalar literal")
    terms = []
    for sign, body in _split_terms(text):
        coef = sign
        mono = ONE_MONO
        for factor in body.split("*"):
            mt = _FACTOR.match(factor)
            if not mt:
                raise ValueError(f"bad scalar factor {factor!r} in {text!r}")
            if mt["int"] is not None:
                coef *= int(mt["int"])
            elif mt["zorder"] is not None:
                zorder = int(mt["zorder"])
                order = math.lcm(order, zorder)
                zexp = int(mt["zexp"]) if mt["zexp"] is not None else 1
                mono = mono * Monomial(turn=Fraction(zexp, zorder))
            elif factor.startswith("p") and mt["name"] is None:
                e = Fraction(mt["pfrac"] or mt["pint"] or 1)
                if (2 * e).denominator != 1:
                    raise ValueError(f"p-exponent {e} is not a half-integer")
                mono = mono * Monomial(p2=int(2 * e))
            else:
                mono = mono * Monomial(params=((mt["name"], int(mt["nexp"] or 1)),))
        terms.append((mono, coef))
    return Scalar(terms, order)


ZERO = Scalar()
ONE = Scalar.from_int(1)
SQRT_MINUS_ONE = Scalar.zeta(2, 8)
