"""Mod-p reductions on inertia as exponent arithmetic.

A tame character of level m is stored as its exponent with respect to the
fundamental character ``omega_m = omega_{m, tau_0}``; the others are
``omega_{m, tau_i} = omega_m^(p^i)``.  A crystalline character
``prod chi_{e_i}^{n_i}`` reduces to ``prod omega_{tau_{i+1}}^{-n_i}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .characters import CrystallineCharacter, EllSData
from .errors import TooLarge

# chi_{e_i} reduces to a power of omega_{tau_{i + CHI_TO_OMEGA}}
CHI_TO_OMEGA = 1

ORACLE_CAP = 10**7


def modulus(p: int, level: int) -> int:
    return p**level - 1


@dataclass(frozen=True)
class InertiaCharacter:
    p: int
    level: int
    exp: int

    def __post_init__(self):
        object.__setattr__(self, "exp", self.exp % modulus(self.p, self.level))

    @property
    def modulus(self) -> int:
        return modulus(self.p, self.level)

    def relative_to(self, generator: int) -> int:
        """Exponent with respect to ``omega_{level, tau_generator}``."""
        inv = pow(self.p, (-generator) % self.level, self.modulus)
        return self.exp * inv % self.modulus

    def __mul__(self, other: "InertiaCharacter") -> "InertiaCharacter":
        _check_compatible(self, other)
        return InertiaCharacter(self.p, self.level, self.exp + other.exp)

    def __pow__(self, n: int) -> "InertiaCharacter":
        return InertiaCharacter(self.p, self.level, self.exp * n)


def _check_compatible(a: InertiaCharacter, b: InertiaCharacter) -> None:
    if a.p != b.p or a.level != b.level:
        raise ValueError("characters of different primes or levels")


@dataclass(frozen=True)
class SemisimpleReduction:
    p: int
    level: int
    exponents: tuple[int, ...]  # sorted multiset

    def __post_init__(self):
        mod = modulus(self.p, self.level)
        object.__setattr__(self, "exponents", tuple(sorted(e % mod for e in self.exponents)))

    @property
    def components(self) -> tuple[InertiaCharacter, ...]:
        return tuple(InertiaCharacter(self.p, self.level, e) for e in self.exponents)

    def relative_to(self, generator: int) -> tuple[int, ...]:
        return tuple(c.relative_to(generator) for c in self.components)

    def twist(self, n: int) -> "SemisimpleReduction":
        return SemisimpleReduction(self.p, self.level, tuple(e * n for e in self.exponents))


def reduce_character(chi: CrystallineCharacter, p: int) -> InertiaCharacter:
    n = chi.level
    mod = modulus(p, n)
    exp = -sum(e * pow(p, (i + CHI_TO_OMEGA) % n, mod) for i, e in enumerate(chi.exponents))
    return InertiaCharacter(p, n, exp)


def induce_reduction(c: InertiaCharacter, f: int) -> SemisimpleReduction:
    if c.level != 2 * f:
        raise ValueError(f"expected a level-{2 * f} character, got level {c.level}")
    return SemisimpleReduction(c.p, c.level, (c.exp, c.exp * c.p**f))


def det_reduction(weights: Sequence[int], p: int, f: int) -> InertiaCharacter:
    if len(weights) != f:
        raise ValueError("one weight per embedding is required")
    return InertiaCharacter(p, f, -sum(k * p**i for i, k in enumerate(weights)))


def lift(c: InertiaCharacter, level: int) -> InertiaCharacter:
    """View a level-l character as a level-(multiple of l) one."""
    if level % c.level:
        raise ValueError("target level must be a multiple of the source level")
    factor = modulus(c.p, level) // modulus(c.p, c.level)
    return InertiaCharacter(c.p, level, c.exp * factor)


def det_consistent(red: SemisimpleReduction, weights: Sequence[int], f: int) -> bool:
    det = lift(det_reduction(weights, red.p, f), red.level)
    return sum(red.exponents) % det.modulus == det.exp


def star_identity_check(data: EllSData, weights: Sequence[int], p: int, f: int) -> bool:
    """``L + det * (1 + p^f) == -p^f L`` with ``L = sum ell_i p^i``."""
    mod = modulus(p, 2 * f)
    ell_exp = sum(e * p**i for i, e in enumerate(data.ell))
    det = lift(det_reduction(weights, p, f), 2 * f).exp
    return (ell_exp + det) % mod == (-(p**f) * ell_exp) % mod


def is_irreducible_closed_form(e: int, p: int, f: int) -> bool:
    mod = modulus(p, 2 * f)
    return (e % mod) % (p**f + 1) != 0


@lru_cache(maxsize=None)
def _reducible_residues(p: int, f: int) -> frozenset[int]:
    mod = modulus(p, 2 * f)
    if mod + 1 > ORACLE_CAP:
        raise TooLarge(f"p^(2f) = {mod + 1} exceeds the enumeration cap {ORACLE_CAP}")
    return frozenset(((1 + p**f) * m) % mod for m in range(mod))


def irreducibility_oracle(e: int, p: int, f: int) -> bool:
    """Exhaustive search for m with (1 + p^f) m == e mod p^(2f) - 1."""
    mod = modulus(p, 2 * f)
    return (e % mod) not in _reducible_residues(p, f)


def oracle_audit(p: int, f: int) -> list[int]:
    """Residues on which the closed form and the oracle disagree."""
    mod = modulus(p, 2 * f)
    _reducible_residues(p, f)
    return [
        e for e in range(mod)
        if is_irreducible_closed_form(e, p, f) != irreducibility_oracle(e, p, f)
    ]
