"""The type I-IV families, the two f = 2 fixtures and the analysis pipeline.

``analyze`` runs: build at a = 0 -> restrict to the quadratic unramified
extension -> diagonalising base change -> split -> normalise -> characters
-> reductions -> determinant, star and irreducibility checks, with the
brute-force oracle as arbiter.  Reductions are family-constant in ``a``, so
the a = 0 computation is reported for the whole family.
"""
from __future__ import annotations

import json
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Any, Sequence

from .characters import (
    CrystallineCharacter,
    EllSData,
    character_from_exponents,
    ell_s_vectors,
    from_rank_one,
    type_shape,
)
from .errors import TooLarge, TruncationTooShallow, UnsupportedShape
from .filtered_modules import (
    FilteredPhiModule,
    FiltrationStep,
    base_change,
    check_weak_admissibility,
    frobenius_vector,
    normalize_rank_one,
    restrict,
    split_rank_one,
)
from .product_ring import ProductMatrix
from .reduction import (
    ORACLE_CAP,
    SemisimpleReduction,
    det_consistent,
    det_reduction,
    induce_reduction,
    irreducibility_oracle,
    is_irreducible_closed_form,
    lift,
    reduce_character,
    star_identity_check,
)
from .scalars import ONE, ZERO, Scalar
from .wach_series import check_qk_condition, default_truncation, family_wach, restrict_wach

SCHEMA_VERSION = "1.0"
FIXTURES = ("25", "28")


@dataclass(frozen=True)
class FamilySpec:
    p: int
    f: int
    weights: tuple[int, ...]
    types: tuple[int, ...] = ()
    a_symbolic: bool = False
    family: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(k) for k in self.weights))
        object.__setattr__(self, "types", tuple(int(t) for t in self.types))
        if self.p < 2 or any(self.p % d == 0 for d in range(2, int(self.p**0.5) + 1)):
            raise ValueError(f"p = {self.p} is not a prime")
        if self.f < 1:
            raise ValueError("f must be positive")
        if len(self.weights) != self.f:
            raise ValueError(f"expected {self.f} weights, got {len(self.weights)}")
        if any(k < 1 for k in self.weights):
            raise ValueError("weights must be positive integers")
        if self.family is not None:
            if self.family not in FIXTURES:
                raise ValueError(f"unknown fixture family {self.family!r}")
            if self.f != 2:
                raise ValueError("the fixture families live over f = 2")
        else:
            if len(self.types) != self.f:
                raise ValueError(f"expected {self.f} matrix types, got {len(self.types)}")
            for t in self.types:
                type_shape(t)

    @property
    def k(self) -> int:
        return max(self.weights)

    @property
    def m(self) -> int:
        return (self.k - 1) // (self.p - 1)

    @property
    def key(self) -> tuple:
        return (self.family or "", self.p, self.f, self.weights, self.types)

    def at_zero(self) -> "FamilySpec":
        return FamilySpec(self.p, self.f, self.weights, self.types, False, self.family)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "f": self.f,
            "weights": list(self.weights),
            "types": list(self.types),
            "a_symbolic": self.a_symbolic,
            "family": self.family,
        }

    @classmethod
    def from_json(cls, data) -> "FamilySpec":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            data["p"],
            data["f"],
            tuple(data["weights"]),
            tuple(data.get("types", ())),
            bool(data.get("a_symbolic", False)),
            data.get("family"),
        )


# construction -----------------------------------------------------------------

def _p(exp) -> Scalar:
    return Scalar.p_power(exp)


def _alpha(spec: FamilySpec, i: int) -> Scalar:
    if not spec.a_symbolic:
        return ZERO
    return Scalar.param(f"a_{i}") * _p(spec.m)


def type_matrix(kind: int, k: int, x: Scalar, m: int) -> list[list[Scalar]]:
    xm = x * _p(m)
    pk = _p(k)
    minus = Scalar.from_int(-1)
    return {
        1: [[ZERO, minus], [pk, xm]],
        2: [[xm, minus], [pk, ZERO]],
        3: [[xm, pk], [minus, ZERO]],
        4: [[ZERO, pk], [minus, xm]],
    }[kind]


def build_P(spec: FamilySpec) -> ProductMatrix:
    """Slot s carries the matrix with index (s + 1) mod f, so the tuple reads
    ``P_1 x P_2 x ... x P_0``."""
    if spec.family is not None:
        return _fixture_frobenius(spec)
    comps = []
    for s in range(spec.f):
        j = (s + 1) % spec.f
        x = Scalar.param(f"a_{j}") if spec.a_symbolic else ZERO
        comps.append(type_matrix(spec.types[j], spec.weights[j], x, spec.m))
    return ProductMatrix.from_components(comps)


def filtration_vectors(spec: FamilySpec) -> tuple[tuple[Scalar, ...], tuple[Scalar, ...]]:
    if spec.family == "25":
        return (ONE, ONE), (-_alpha(spec, 0), _alpha(spec, 1))
    if spec.family == "28":
        return (ZERO, ONE), (ONE, _alpha(spec, 1))
    # Types 1, 2 put the Hodge line on eta_1 and types 3, 4 on eta_2 at a = 0,
    # which is what the Wach matrix (depending only on beta, gamma) forces.
    xs, ys = [], []
    for t, kind in enumerate(spec.types):
        am = _alpha(spec, t)
        x, y = {1: (ONE, ZERO), 2: (ONE, am), 3: (ZERO, ONE), 4: (am, ONE)}[kind]
        xs.append(x)
        ys.append(y)
    return tuple(xs), tuple(ys)


def build_filtration(spec: FamilySpec) -> tuple[FiltrationStep, ...]:
    """Steps ``[1, w_0], [1 + w_0, w_1], ...`` over the sorted distinct
    weights ``w``; step s is supported on ``{i : k_i >= w_s}``."""
    x, y = filtration_vectors(spec)
    steps = []
    lo = 1
    for w in sorted(set(spec.weights)):
        support = tuple(int(k >= w) for k in spec.weights)
        steps.append(FiltrationStep(lo, w, support, (x, y)))
        lo = w + 1
    return tuple(steps)


def family_module(spec: FamilySpec) -> FilteredPhiModule:
    return FilteredPhiModule(2, build_P(spec), build_filtration(spec), spec.weights)


# the f = 2 fixtures -----------------------------------------------------------

def _fixture_frobenius(spec: FamilySpec) -> ProductMatrix:
    k0, k1 = spec.weights
    a0, a1 = _alpha(spec, 0), _alpha(spec, 1)
    minus = Scalar.from_int(-1)
    if spec.family == "25":
        rows = (((a1, _p(k0)), (minus, ZERO)), ((_p(k1), a0), (ZERO, ONE)))
    else:
        rows = (((a1, ONE), (minus, ZERO)), ((_p(k1), a0), (ZERO, _p(k0))))
    return ProductMatrix(rows)


def fixture_Q(k1: int) -> ProductMatrix:
    """Identity at embeddings 1 and 2, ``[[0, i p^(-k1/2)], [i p^(k1/2), 0]]`` at 0 and 3."""
    i = Scalar.zeta(2, 8)
    swap = [[ZERO, i * _p(Fraction(-k1, 2))], [i * _p(Fraction(k1, 2)), ZERO]]
    ident = [[ONE, ZERO], [ZERO, ONE]]
    return ProductMatrix.from_components([swap, ident, ident, swap])


@dataclass(frozen=True)
class FixtureExpectation:
    diag: tuple[tuple[Scalar, ...], tuple[Scalar, ...]]
    character: CrystallineCharacter
    generator: int  # the orbit is given relative to omega_{4, tau_generator}
    reference_exponent: int  # before reduction mod p^4 - 1
    weight_sum: int
    strong_divisor: int  # (1 + p^2)(1 + p), stronger than the true criterion


def fixture_expectation(family: str, p: int, k0: int, k1: int) -> FixtureExpectation:
    ip = Scalar.zeta(2, 8) * _p(Fraction(k1, 2))
    fourth_root = Scalar.zeta(1, 8)
    if family == "25":
        diag = ((ip, _p(k0), ip, ONE), (-ip, ONE, -ip, _p(k0)))
        chi = character_from_exponents((0, 0, k1, k0), fourth_root)
        return FixtureExpectation(diag, chi, 1, -(k1 + p * k0), k1 + p * k0, (1 + p * p) * (1 + p))
    if family == "28":
        diag = ((ip, ONE, ip, _p(k0)), (-ip, _p(k0), -ip, ONE))
        chi = character_from_exponents((0, k0, k1, 0), fourth_root)
        return FixtureExpectation(diag, chi, 0, -(k0 + p * k1), k0 + p * k1, (1 + p * p) * (1 + p))
    raise ValueError(f"unknown fixture family {family!r}")


def fixture_25(p: int, k0: int, k1: int) -> tuple[FilteredPhiModule, FixtureExpectation]:
    return family_module(FamilySpec(p, 2, (k0, k1), family="25")), fixture_expectation("25", p, k0, k1)


def fixture_28(p: int, k0: int, k1: int) -> tuple[FilteredPhiModule, FixtureExpectation]:
    return family_module(FamilySpec(p, 2, (k0, k1), family="28")), fixture_expectation("28", p, k0, k1)


def expected_orbit(exp: FixtureExpectation, p: int) -> SemisimpleReduction:
    """The reference orbit, converted to exponents relative to omega_{4, tau_0}."""
    mod = p**4 - 1
    e = exp.reference_exponent * p**exp.generator % mod
    return SemisimpleReduction(p, 4, (e, e * p * p))


# general odd f ---------------------------------------------------------------

def alternating_Q(m: int) -> ProductMatrix:
    ident = [[ONE, ZERO], [ZERO, ONE]]
    swap = [[ZERO, ONE], [ONE, ZERO]]
    return ProductMatrix.from_components([ident if j % 2 == 0 else swap for j in range(m)])


def diagonalizing_Q(spec: FamilySpec) -> ProductMatrix:
    if spec.family is not None:
        return fixture_Q(spec.weights[1])
    return alternating_Q(2 * spec.f)


# analysis ------------------------------------------------------------------------

@dataclass
class AnalysisReport:
    spec: FamilySpec
    character_ell: CrystallineCharacter
    character_s: CrystallineCharacter
    reduction: SemisimpleReduction
    det_exponent: int
    generator: int
    det_ok: bool
    star_ok: bool
    admissible: bool
    irreducible: bool
    oracle_agrees: bool | None
    summands_agree: bool
    ell_match: bool | None
    diagonal: tuple[tuple[Scalar, ...], ...]
    wach_checks: dict[str, Any] = field(default_factory=dict)
    admissibility: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return (
            self.oracle_agrees is not False
            and self.det_ok
            and self.star_ok
            and self.admissible
            and self.summands_agree
            and self.ell_match is not False
            and all(v is not False for v in self.wach_checks.values() if isinstance(v, bool))
        )

    def orbit_relative(self) -> list[int]:
        return sorted(self.reduction.relative_to(self.generator))

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "spec": self.spec.to_json(),
            "character_ell": self.character_ell.to_json(),
            "character_s": self.character_s.to_json(),
            "diagonal": [[str(x) for x in v] for v in self.diagonal],
            "reduction": {
                "level": self.reduction.level,
                "generator": self.generator,
                "exponents": self.orbit_relative(),
                "det_exponent": self.det_exponent,
                "irreducible": self.irreducible,
                "oracle_agrees": self.oracle_agrees,
            },
            "checks": {
                "det_ok": self.det_ok,
                "star_ok": self.star_ok,
                "admissible": self.admissible,
                "summands_agree": self.summands_agree,
                "ell_match": self.ell_match,
            },
            "admissibility": self.admissibility,
            "wach_checks": self.wach_checks,
            "notes": list(self.notes),
            "valid": self.valid,
        }


def _ell_from_character(chi: CrystallineCharacter) -> EllSData:
    """ell_j is the exponent feeding omega_{tau_j}: slot j - 1 of the character."""
    n = chi.level
    ell = tuple(chi.exponents[(j - 1) % n] for j in range(n))
    return EllSData(ell, (), sum(1 for x in ell if x == 0))


def _oracle(e: int, p: int, f: int) -> bool | None:
    if p ** (2 * f) > ORACLE_CAP:
        return None
    try:
        return irreducibility_oracle(e, p, f)
    except TooLarge:
        return None


def _wach_report(spec: FamilySpec, trunc: int | None) -> dict[str, Any]:
    if spec.family is not None:
        return {
            "qk": "not available",
            "qk_restricted": "not available",
            "gamma": "not supplied",
        }
    T = trunc if trunc is not None else default_truncation(spec.k, spec.p)
    w = family_wach(spec.types, spec.weights, spec.p, T)
    out: dict[str, Any] = {"T": T}
    try:
        out["qk"] = check_qk_condition(w, spec.p)
        out["qk_restricted"] = check_qk_condition(restrict_wach(w, 2), spec.p)
    except TruncationTooShallow as exc:
        out["qk"] = out["qk_restricted"] = f"undecided: {exc}"
    out["gamma"] = "not supplied"
    return out


def _summand_characters(diagonal_module: FilteredPhiModule) -> tuple[CrystallineCharacter, CrystallineCharacter]:
    d1, d2 = split_rank_one(diagonal_module)
    return from_rank_one(frobenius_vector(normalize_rank_one(d1))), from_rank_one(
        frobenius_vector(normalize_rank_one(d2))
    )


def analyze(spec: FamilySpec, trunc: int | None = None) -> AnalysisReport:
    spec0 = spec.at_zero()
    p, f = spec.p, spec.f
    if spec.family is None and f % 2 == 0:
        raise UnsupportedShape(
            "even f is only supported for the fixture families 25 and 28"
        )
    module = family_module(spec0)
    adm_base, rep_base = check_weak_admissibility(module)
    restricted = restrict(module, 2)
    adm_res, rep_res = check_weak_admissibility(restricted)
    diag_module = base_change(restricted, diagonalizing_Q(spec0))
    adm_diag, rep_diag = check_weak_admissibility(diag_module)
    diagonal = tuple(diag_module.frobenius.diagonal())
    chi1, chi2 = _summand_characters(diag_module)
    notes = ["computed at a = 0; the reduction is constant over the family"]

    if spec.family is not None:
        # D_2 carries the ell-form character, D_1 its conjugate
        character_ell, character_s = chi2, chi1
        ell_match = None
        generator = fixture_expectation(spec.family, p, *spec.weights).generator
    else:
        character_ell = from_rank_one(diagonal[0])
        character_s = from_rank_one(diagonal[1])
        data = ell_s_vectors(spec.types, spec.weights)
        ell_match = _ell_from_character(character_ell).ell == data.ell and (
            _ell_from_character(character_s).ell == data.s
        )
        generator = 0
        # the unramified constant is a 2f-th root of (-1)^t
        notes.append(f"t = {data.t}")

    c_ell = reduce_character(character_ell, p)
    reduction = induce_reduction(c_ell, f)
    reduction_s = induce_reduction(reduce_character(character_s, p), f)
    summands = SemisimpleReduction(p, 2 * f, (reduce_character(chi1, p).exp, reduce_character(chi2, p).exp))
    summands_agree = reduction == reduction_s == summands

    det = lift(det_reduction(spec.weights, p, f), 2 * f)
    det_ok = det_consistent(reduction, spec.weights, f)
    star_ok = star_identity_check(_ell_from_character(character_ell), spec.weights, p, f)
    irreducible = is_irreducible_closed_form(c_ell.exp, p, f)
    oracle = _oracle(c_ell.exp, p, f)
    oracle_agrees = None if oracle is None else oracle == irreducible
    if oracle is None:
        notes.append(f"oracle skipped: p^(2f) exceeds {ORACLE_CAP}")

    return AnalysisReport(
        spec=spec,
        character_ell=character_ell,
        character_s=character_s,
        reduction=reduction,
        det_exponent=det.exp,
        generator=generator,
        det_ok=det_ok,
        star_ok=star_ok,
        admissible=adm_base and adm_res and adm_diag,
        irreducible=irreducible,
        oracle_agrees=oracle_agrees,
        summands_agree=summands_agree,
        ell_match=ell_match,
        diagonal=diagonal,
        wach_checks=_wach_report(spec0, trunc),
        admissibility={"base": rep_base, "restricted": rep_res, "diagonal": rep_diag},
        notes=notes,
    )


def reduction_from_types(p: int, types: Sequence[int], weights: Sequence[int]) -> tuple[SemisimpleReduction, SemisimpleReduction]:
    """Light path: the ell- and s-form reductions straight from the case
    table, without building modules."""
    f = len(types)
    data = ell_s_vectors(types, weights)
    out = []
    for vec in (data.ell, data.s):
        chi = character_from_exponents(tuple(vec[(j + 1) % (2 * f)] for j in range(2 * f)))
        out.append(induce_reduction(reduce_character(chi, p), f))
    return out[0], out[1]


__all__ = [
    "FamilySpec",
    "AnalysisReport",
    "FixtureExpectation",
    "SCHEMA_VERSION",
    "build_P",
    "build_filtration",
    "family_module",
    "fixture_25",
    "fixture_28",
    "fixture_Q",
    "fixture_expectation",
    "expected_orbit",
    "alternating_Q",
    "analyze",
    "reduction_from_types",
]
