"""Truncated power series in pi and desk-scale checks of Wach-module conditions.

Series carry exact integer (or rational) coefficients below a truncation
order T.  ``phi`` substitutes ``(1+pi)^p - 1`` for pi and ``gamma_c``
substitutes ``(1+pi)^c - 1``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

from .characters import type_shape
from .errors import MissingGammaData, TruncationTooShallow
from .product_ring import ProductMatrix, matrix_tensor_n


def default_truncation(k: int, p: int) -> int:
    env = os.environ.get("WACHLAB_TRUNC")
    if env:
        return int(env)
    return max(32, k * (p - 1) + 8)


class TruncSeries:
    __slots__ = ("coeffs", "T")

    def __init__(self, coeffs: Sequence, T: int):
        if T < 1:
            raise ValueError("truncation order must be positive")
        c = list(coeffs[:T])
        c += [0] * (T - len(c))
        self.coeffs = tuple(c)
        self.T = T

    @classmethod
    def constant(cls, c, T: int) -> "TruncSeries":
        return cls([c], T)

    @classmethod
    def pi(cls, T: int) -> "TruncSeries":
        return cls([0, 1], T)

    def _coerce(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            if other.T != self.T:
                raise ValueError("series with different truncation orders")
            return other
        if isinstance(other, (int, Fraction)):
            return TruncSeries.constant(other, self.T)
        raise TypeError(f"cannot combine TruncSeries with {type(other).__name__}")

    def __add__(self, other) -> "TruncSeries":
        other = self._coerce(other)
        return TruncSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.T)

    __radd__ = __add__

    def __neg__(self) -> "TruncSeries":
        return TruncSeries([-a for a in self.coeffs], self.T)

    def __sub__(self, other) -> "TruncSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "TruncSeries":
        return self._coerce(other) - self

    def __mul__(self, other) -> "TruncSeries":
        other = self._coerce(other)
        T = self.T
        out = [0] * T
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(T - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] += a * b
        return TruncSeries(out, T)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "TruncSeries":
        result = TruncSeries.constant(1, self.T)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = TruncSeries.constant(other, self.T)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.T == other.T and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.coeffs, self.T))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> int | None:
        """pi-adic valuation below T, or None for a series that vanishes there."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def compose(self, g: "TruncSeries") -> "TruncSeries":
        """``s(g(pi))`` for g without constant term."""
        if g.coeffs[0]:
            raise ValueError("can only substitute series with zero constant term")
        result = TruncSeries.constant(0, self.T)
        for c in reversed(self.coeffs):
            result = result * g + c
        return result

    def shift_down(self, v: int) -> "TruncSeries":
        """Divide by pi^v (the low coefficients must vanish); T drops by v."""
        return TruncSeries(self.coeffs[v:], self.T - v)

    def truncate(self, T: int) -> "TruncSeries":
        return TruncSeries(self.coeffs[:T], T)

    def reduce_mod(self, modulus: int) -> "TruncSeries":
        return TruncSeries([c % modulus for c in self.coeffs], self.T)

    def inverse(self) -> "TruncSeries":
        """Inverse over Q[[pi]]; needs a nonzero constant term."""
        c0 = self.coeffs[0]
        if not c0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        inv = [Fraction(1, 1) / c0]
        for n in range(1, self.T):
            acc = sum(self.coeffs[i] * inv[n - i] for i in range(1, n + 1))
            inv.append(-acc / c0)
        return TruncSeries(inv, self.T)

    def is_p_integral(self, p: int, upto: int | None = None) -> bool:
        upto = self.T if upto is None else upto
        return all(Fraction(c).denominator % p for c in self.coeffs[:upto])

    def __repr__(self) -> str:
        return f"TruncSeries({str(self)!r})"

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("pi" if i == 1 else f"pi^{i}")
            parts.append(str(c) if i == 0 else f"{c}*{mono}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(pi^{self.T})"

    def to_json(self) -> list:
        return [c if isinstance(c, int) else str(c) for c in self.coeffs]


def _binomial_series(exponent: int, T: int) -> TruncSeries:
    return TruncSeries([comb(exponent, i) for i in range(min(exponent, T - 1) + 1)], T) - 1


def phi_substitute(s: TruncSeries, p: int) -> TruncSeries:
    return s.compose(_binomial_series(p, s.T))


def gamma_substitute(s: TruncSeries, c: int) -> TruncSeries:
    if c < 1:
        raise ValueError("gamma is modelled by a positive integer character value")
    return s.compose(_binomial_series(c, s.T))


def q_series(p: int, T: int = 32) -> TruncSeries:
    """``((1+pi)^p - 1) / pi``."""
    return TruncSeries([comb(p, i + 1) for i in range(p)], T)


@lru_cache(maxsize=256)
def q_power(p: int, T: int, k: int) -> TruncSeries:
    return q_series(p, T) ** k


def gamma_probes(p: int) -> list[int]:
    return [2, 3] if p == 2 else [1 + p, 1 + p * p]


@dataclass(frozen=True)
class WachData:
    Pi: ProductMatrix
    k: int
    gamma: tuple[tuple[int, ProductMatrix], ...] | None = field(default=None)

    @property
    def T(self) -> int:
        return self.Pi[0, 0][0].T


def _series_adjugate(mat: list[list[TruncSeries]]) -> list[list[TruncSeries]]:
    if len(mat) == 1:
        return [[TruncSeries.constant(1, mat[0][0].T)]]
    return [[mat[1][1], -mat[0][1]], [-mat[1][0], mat[0][0]]]


def _series_det(mat: list[list[TruncSeries]]) -> TruncSeries:
    if len(mat) == 1:
        return mat[0][0]
    if len(mat) == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    raise ValueError("only rank <= 2 Wach matrices are supported")


def check_qk_condition(w: WachData, p: int, k: int | None = None) -> bool:
    """Is ``q^k * Pi^-1`` integral, i.e. is N / phi^*(N) killed by q^k?"""
    k = w.k if k is None else k
    return all(
        _component_qk(tuple(tuple(row) for row in mat), p, k) for mat in w.Pi.components()
    )


@lru_cache(maxsize=4096)
def _component_qk(mat: tuple[tuple[TruncSeries, ...], ...], p: int, k: int) -> bool:
    T = mat[0][0].T
    qk = q_power(p, T, k)
    det = _series_det(mat)
    v = det.valuation()
    horizon = T - k * (p - 1) - (v or 0)
    if v is None or horizon < 1:
        raise TruncationTooShallow(f"T = {T} cannot decide the q^{k} condition")
    unit = det.shift_down(v).coeffs[:horizon]
    for row in _series_adjugate(mat):
        for entry in row:
            num = qk * entry
            low = num.valuation()
            if low is not None and low < v:
                return False  # leaves a pole in pi
            if not _quotient_p_integral(num.coeffs[v:v + horizon], unit, p):
                return False
    return True


def _p_adic_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _quotient_p_integral(num: Sequence[int], unit: Sequence[int], p: int) -> bool:
    """Are the coefficients of ``num / unit`` (below len(num)) p-integral?

    Works with ``w_n = c0^(n+1) * (1/unit)_n``, which are integers, so the
    test is a valuation comparison instead of rational arithmetic.
    """
    c0 = unit[0]
    e = _p_adic_valuation(c0, p)
    if e == 0:
        return True
    H = len(num)
    w = [1]
    for n in range(1, H):
        w.append(-sum(unit[i] * w[n - i] * c0 ** (i - 1) for i in range(1, n + 1)))
    for n in range(H):
        # c0^(n+1) * quotient_n
        x = sum(num[i] * w[n - i] * c0**i for i in range(n + 1))
        if x and _p_adic_valuation(x, p) < e * (n + 1):
            return False
    return True


def check_gamma_trivial_mod_pi(w: WachData) -> bool:
    if not w.gamma:
        raise MissingGammaData("no Gamma-action matrices supplied")
    for _, g in w.gamma:
        for mat in g.components():
            for i, row in enumerate(mat):
                for j, entry in enumerate(row):
                    if entry.coeffs[0] != (1 if i == j else 0):
                        return False
    return True


def restrict_wach(w: WachData, n: int) -> WachData:
    gamma = None
    if w.gamma is not None:
        gamma = tuple((c, matrix_tensor_n(g, n)) for c, g in w.gamma)
    return WachData(matrix_tensor_n(w.Pi, n), w.k, gamma)


def family_wach(types: Sequence[int], weights: Sequence[int], p: int, T: int | None = None) -> WachData:
    """Wach matrix of the type I-IV family at a = 0: slot s carries the
    antidiagonal ``[[0, b], [c, 0]]`` of index s + 1, with ``b, c`` equal to
    -1 or ``q^k``."""
    f = len(types)
    kmax = max(weights)
    T = default_truncation(kmax, p) if T is None else T
    zero = TruncSeries.constant(0, T)
    minus_one = TruncSeries.constant(-1, T)
    comps = []
    for s in range(f):
        j = (s + 1) % f
        beta_p, gamma_p = type_shape(types[j])
        big = q_power(p, T, weights[j])
        b = big if beta_p else minus_one
        c = big if gamma_p else minus_one
        comps.append([[zero, b], [c, zero]])
    return WachData(ProductMatrix.from_components(comps), kmax)
