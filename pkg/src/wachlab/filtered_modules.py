"""Filtered phi-modules of rank <= 2 over a product of copies of E.

A module is free on ``eta_1, ..., eta_rank`` with Frobenius matrix ``A``
(``phi(eta) = eta * A``, semilinear for the left cyclic shift).  Each
filtration step says: for ``lo <= j <= hi``, ``Fil^j`` is spanned, at every
embedding ``k`` with ``support[k] == 1``, by the coordinate vector
``(generator[0][k], ..., generator[rank-1][k])``; it is zero at the other
embeddings.  ``Fil^j`` is everything for ``j <= 0`` and zero past the last
step.

Weak admissibility is decided exactly when the Frobenius is monomial.  A
phi-stable line ``L`` is determined by its component at embedding 0,
which must be an eigenline of ``M = A_0 A_1 ... A_{m-1}``; its other
components are ``L_k = A_k ... A_{m-1} L_0``.  When ``M`` is scalar every
line is stable and only the lines meeting some filtration generator can
carry Hodge weight, so those are the ones enumerated.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Sequence

from .errors import NonMonomialFrobenius, NotAdmissible, NotDiagonal
from .product_ring import (
    ProductMatrix,
    adjugate,
    apply_to_coordinates,
    det2,
    matrix_tensor_n,
    semilinear_conjugate,
    theta_embed,
)
from .scalars import ONE, ZERO, Scalar, monomial_sqrt, p_valuation, parse_scalar, principal_root


@dataclass(frozen=True)
class FiltrationStep:
    lo: int
    hi: int
    support: tuple[int, ...]
    generator: tuple[tuple[Scalar, ...], ...]

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty filtration range [{self.lo}, {self.hi}]")
        if any(s not in (0, 1) for s in self.support):
            raise ValueError("support entries must be 0 or 1")
        object.__setattr__(self, "support", tuple(self.support))
        object.__setattr__(self, "generator", tuple(tuple(g) for g in self.generator))

    def vector_at(self, k: int) -> tuple[Scalar, ...]:
        return tuple(g[k] for g in self.generator)

    def is_line_at(self, k: int) -> bool:
        return bool(self.support[k]) and any(not x.is_zero() for x in self.vector_at(k))

    @property
    def length(self) -> int:
        return self.hi - self.lo + 1


@dataclass(frozen=True)
class FilteredPhiModule:
    rank: int
    frobenius: ProductMatrix
    steps: tuple[FiltrationStep, ...] = ()
    # labeled Hodge-Tate weights: {0, -k_i} per embedding (rank 2), {-k_i} (rank 1)
    weights: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "weights", tuple(self.weights))
        if self.rank not in (1, 2) or self.frobenius.dim != self.rank:
            raise ValueError("rank must be 1 or 2 and match the Frobenius matrix")
        prev = 0
        for step in self.steps:
            if step.lo <= prev:
                raise ValueError("filtration steps must increase and start at 1")
            if len(step.support) != self.m or len(step.generator) != self.rank:
                raise ValueError("filtration step does not match module shape")
            prev = step.hi
        if self.weights and len(self.weights) != self.m:
            raise ValueError("one labeled weight per embedding is required")

    @property
    def m(self) -> int:
        return self.frobenius.m

    def jumps(self) -> tuple[int, ...]:
        """Number of j >= 1 with Fil^j nonzero, per embedding."""
        return tuple(
            sum(step.length for step in self.steps if step.is_line_at(k))
            for k in range(self.m)
        )

    def hodge_number(self) -> int:
        return sum(self.jumps())

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "frobenius": self.frobenius.to_json(),
            "steps": [
                {
                    "lo": s.lo,
                    "hi": s.hi,
                    "support": list(s.support),
                    "generator": [[str(x) for x in g] for g in s.generator],
                }
                for s in self.steps
            ],
            "weights": list(self.weights),
        }

    @classmethod
    def from_json(cls, data) -> "FilteredPhiModule":
        if isinstance(data, str):
            data = json.loads(data)
        steps = [
            FiltrationStep(
                s["lo"],
                s["hi"],
                tuple(s["support"]),
                tuple(tuple(parse_scalar(str(x)) for x in g) for g in s["generator"]),
            )
            for s in data.get("steps", [])
        ]
        return cls(
            data["rank"],
            ProductMatrix.from_json(data["frobenius"]),
            tuple(steps),
            tuple(data.get("weights", ())),
        )


def restrict(d: FilteredPhiModule, n: int) -> FilteredPhiModule:
    steps = tuple(
        FiltrationStep(
            s.lo,
            s.hi,
            theta_embed(s.support, n),
            tuple(theta_embed(g, n) for g in s.generator),
        )
        for s in d.steps
    )
    return FilteredPhiModule(d.rank, matrix_tensor_n(d.frobenius, n), steps, theta_embed(d.weights, n))


def base_change(d: FilteredPhiModule, q: ProductMatrix) -> FilteredPhiModule:
    # new Frobenius Q A phi(Q)^-1 means new coordinates are Q times old ones
    frob = semilinear_conjugate(q, d.frobenius)
    steps = tuple(replace(s, generator=apply_to_coordinates(q, s.generator)) for s in d.steps)
    return replace(d, frobenius=frob, steps=steps)


# weak admissibility ----------------------------------------------------------

def _require_monomial(d: FilteredPhiModule) -> None:
    for row in d.frobenius.rows:
        for entry in row:
            for x in entry:
                if not x.is_zero() and (not x.is_monomial() or x.has_params()):
                    raise NonMonomialFrobenius(
                        f"Frobenius entry {x} is not a parameter-free monomial"
                    )


def _parallel(u: Sequence[Scalar], w: Sequence[Scalar]) -> bool:
    return (u[0] * w[1] - u[1] * w[0]).is_zero()


def _apply(mat: list[list[Scalar]], v: Sequence[Scalar]) -> tuple[Scalar, ...]:
    return tuple(mat[i][0] * v[0] + mat[i][1] * v[1] for i in range(2))


def _mul(x, y):
    return [[x[i][0] * y[0][j] + x[i][1] * y[1][j] for j in range(2)] for i in range(2)]


def _tails(comps: list) -> list:
    """``B_k = A_k A_{k+1} ... A_{m-1}`` for k = 0..m-1."""
    tails = [None] * len(comps)
    acc = [[ONE, ZERO], [ZERO, ONE]]
    for k in range(len(comps) - 1, -1, -1):
        acc = _mul(comps[k], acc)
        tails[k] = acc
    return tails


def _stable_lines(d: FilteredPhiModule, tails: list) -> list[tuple[tuple[Scalar, ...], Scalar]]:
    mat = tails[0]
    a, b, c, dd = mat[0][0], mat[0][1], mat[1][0], mat[1][1]
    if b.is_zero() and c.is_zero():
        if a != dd:
            return [((ONE, ZERO), a), ((ZERO, ONE), dd)]
        candidates = [(ONE, ZERO), (ZERO, ONE)]
        for step in d.steps:
            for k in range(d.m):
                if step.is_line_at(k):
                    candidates.append(_apply(adjugate(tails[k]), step.vector_at(k)))
        lines = []
        for v in candidates:
            if not any(_parallel(v, w) for w, _ in lines):
                lines.append((v, a))
        return lines
    if a.is_zero() and dd.is_zero():
        lam = monomial_sqrt(b * c)
        if lam is None:
            raise NonMonomialFrobenius(f"eigenvalues of {mat} are not monomials")
        return [((b, lam), lam), ((b, -lam), -lam)]
    raise NonMonomialFrobenius("linearised Frobenius is neither diagonal nor antidiagonal")


def _line_hodge(d: FilteredPhiModule, line_at) -> int:
    total = 0
    for step in d.steps:
        for k in range(d.m):
            if step.is_line_at(k) and _parallel(line_at(k), step.vector_at(k)):
                total += step.length
    return total


def check_weak_admissibility(d: FilteredPhiModule) -> tuple[bool, dict]:
    """Return ``(admissible, report)``; see the module docstring."""
    _require_monomial(d)
    comps = d.frobenius.components()
    t_n = sum(p_valuation(det2(c)) for c in comps)
    t_h = d.hodge_number()
    report = {"t_N": str(t_n), "t_H": t_h, "lines": []}
    ok = t_n == t_h
    if d.rank == 2:
        tails = _tails(comps)
        for v, lam in _stable_lines(d, tails):
            def line_at(k, v=v):
                return v if k == 0 else _apply(tails[k], v)

            ln, lh = p_valuation(lam), _line_hodge(d, line_at)
            report["lines"].append({"line": [str(x) for x in v], "t_N": str(ln), "t_H": lh})
            ok = ok and ln >= lh
    report["admissible"] = ok
    return ok, report


# rank-one summands -------------------------------------------------------------

def split_rank_one(d: FilteredPhiModule) -> tuple[FilteredPhiModule, FilteredPhiModule]:
    if d.rank != 2 or not d.frobenius.is_diagonal():
        raise NotDiagonal("split_rank_one needs a diagonal rank-2 Frobenius")
    _require_monomial(d)
    parts = []
    for i in range(2):
        other = 1 - i
        steps = []
        for s in d.steps:
            support = tuple(
                int(
                    s.support[k]
                    and not s.generator[i][k].is_zero()
                    and s.generator[other][k].is_zero()
                )
                for k in range(d.m)
            )
            steps.append(FiltrationStep(s.lo, s.hi, support, ((ONE,) * d.m,)))
        frob = ProductMatrix(((d.frobenius[i, i],),))
        summand = FilteredPhiModule(1, frob, tuple(steps))
        parts.append(replace(summand, weights=summand.jumps()))
    return parts[0], parts[1]


def frobenius_vector(d: FilteredPhiModule) -> tuple[Scalar, ...]:
    if d.rank != 1:
        raise ValueError("frobenius_vector needs a rank-one module")
    return d.frobenius[0, 0]


def normalize_rank_one(d: FilteredPhiModule) -> FilteredPhiModule:
    """Isomorphic rank-one module with entries ``root * p^n_k``.

    The Hodge weight at embedding ``k`` is moved to slot ``k - 1``; the
    unit parts are replaced by equal copies of the principal m-th root of
    their product, so the cyclic product is unchanged.
    """
    _require_monomial(d)
    vec = frobenius_vector(d)
    if any(x.is_zero() for x in vec):
        raise NonMonomialFrobenius("rank-one Frobenius has a zero entry")
    m = d.m
    jumps = d.jumps()
    total = cyclic_product(vec)
    val = p_valuation(total)
    if val != sum(jumps):
        raise NotAdmissible(f"t_N = {val} differs from t_H = {sum(jumps)}")
    unit = total * Scalar.p_power(-val)
    root = principal_root(unit, m)
    new = tuple(root * Scalar.p_power(jumps[(k + 1) % m]) for k in range(m))
    return replace(d, frobenius=ProductMatrix(((new,),)))


def cyclic_product(vec: Sequence[Scalar]) -> Scalar:
    total = ONE
    for x in vec:
        total = total * x
    return total


__all__ = [
    "FiltrationStep",
    "FilteredPhiModule",
    "restrict",
    "base_change",
    "check_weak_admissibility",
    "split_rank_one",
    "normalize_rank_one",
    "frobenius_vector",
    "cyclic_product",
]
