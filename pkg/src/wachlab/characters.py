"""Exponent bookkeeping for crystalline characters ``eta_C * prod chi_{e_i}^{n_i}``.

The Lubin-Tate characters ``chi_{e_i}`` are never constructed; a character
is its unramified constant ``C`` (a root of unity) together with its
exponent vector.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import EvenDegree, NonMonomialFrobenius, NonNormalized
from .scalars import ONE, Scalar, principal_root

# slot k of a normalised Frobenius vector carries chi_{e_{k + SLOT_TO_CHI}}
SLOT_TO_CHI = 0

# Frobenius-matrix entries at X = 0, as (beta is p^k, gamma is p^k) per type
_TYPE_SHAPE = {
    1: (False, True),   # [[0, -1], [p^k, X p^m]]
    2: (False, True),   # [[X p^m, -1], [p^k, 0]]
    3: (True, False),   # [[X p^m, p^k], [-1, 0]]
    4: (True, False),   # [[0, p^k], [-1, X p^m]]
}


@dataclass(frozen=True)
class CrystallineCharacter:
    level: int
    unram: Scalar
    exponents: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(self.exponents))
        if len(self.exponents) != self.level:
            raise ValueError("one exponent per embedding is required")
        if not self.unram.is_unit_monomial() or self.unram.monomial.p2 or self.unram.has_params():
            raise ValueError(f"unramified constant {self.unram} must be a root of unity")

    def __str__(self) -> str:
        parts = [f"eta({self.unram})"]
        parts += [f"chi[{i}]^{n}" for i, n in enumerate(self.exponents) if n]
        return "*".join(parts)

    def to_json(self) -> dict:
        return {"level": self.level, "unram": str(self.unram), "exponents": list(self.exponents), "text": str(self)}


@dataclass(frozen=True)
class EllSData:
    ell: tuple[int, ...]
    s: tuple[int, ...]
    t: int


def from_rank_one(vec: Sequence[Scalar]) -> CrystallineCharacter:
    vec = tuple(vec)
    m = len(vec)
    exps = [0] * m
    for k, x in enumerate(vec):
        if x.is_zero() or not x.is_monomial() or x.has_params():
            raise NonMonomialFrobenius(f"entry {x} is not a parameter-free monomial")
        e = x.monomial.p_exp
        if e.denominator != 1 or e < 0:
            raise NonNormalized(f"entry {x} does not carry a non-negative integral power of p")
        exps[(k + SLOT_TO_CHI) % m] = int(e)
    unit = ONE
    for x in vec:
        unit = unit * x.unit_part()
    return CrystallineCharacter(m, principal_root(unit, m), tuple(exps))


def type_shape(kind: int) -> tuple[bool, bool]:
    try:
        return _TYPE_SHAPE[kind]
    except KeyError:
        raise ValueError(f"matrix type must be 1..4, got {kind}") from None


def ell_s_vectors(types: Sequence[int], weights: Sequence[int]) -> EllSData:
    f = len(types)
    if len(weights) != f:
        raise ValueError("types and weights must have the same length")
    if f % 2 == 0:
        raise EvenDegree("the induced-character formula needs odd f")
    if any(k < 1 for k in weights):
        raise ValueError("weights must be positive")
    ell = []
    for j in range(2 * f):
        beta_p, gamma_p = type_shape(types[j % f])
        k = weights[j % f]
        big = beta_p if j % 2 else gamma_p
        ell.append(k if big else 0)
    s = tuple(weights[j % f] - ell[j] for j in range(2 * f))
    return EllSData(tuple(ell), s, sum(1 for x in ell if x == 0))


def frobenius_conjugate(chi: CrystallineCharacter, shift: int) -> CrystallineCharacter:
    n = chi.level
    exps = tuple(chi.exponents[(i - shift) % n] for i in range(n))
    return CrystallineCharacter(n, chi.unram, exps)


def character_from_exponents(exponents: Sequence[int], unram: Scalar = ONE) -> CrystallineCharacter:
    return CrystallineCharacter(len(exponents), unram, tuple(exponents))


__all__ = [
    "CrystallineCharacter",
    "EllSData",
    "SLOT_TO_CHI",
    "from_rank_one",
    "ell_s_vectors",
    "frobenius_conjugate",
    "character_from_exponents",
    "type_shape",
]
