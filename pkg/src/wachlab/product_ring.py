"""Tuples and matrices over a product of copies of the coefficient ring.

A tuple ``(a_0, ..., a_{m-1})`` has one entry per embedding, index 0 being
the distinguished embedding.  Frobenius moves slot ``i+1`` into slot ``i``
(a left cyclic shift).  ``theta_embed`` realises restriction to the degree
``n`` unramified extension by repeating the tuple ``n`` times.

Matrices act on column coordinates: ``(phi(e_1), ..., phi(e_d)) = e * A``.
Entries are generic ring elements; only inversion insists on scalars.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from .errors import NonMonomialInverse, SingularBaseChange
from .scalars import ONE, ZERO, Scalar, parse_scalar, scalar_inv


def frobenius_shift(t: Sequence) -> tuple:
    t = tuple(t)
    return t[1:] + t[:1]


def theta_embed(t: Sequence, n: int) -> tuple:
    if n < 1:
        raise ValueError("theta_embed needs n >= 1")
    return tuple(t) * n


@dataclass(frozen=True)
class ProductMatrix:
    """A d x d matrix whose entries are length-m tuples."""

    rows: tuple[tuple[tuple, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(tuple(entry) for entry in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        d = len(rows)
        if d == 0 or any(len(r) != d for r in rows):
            raise ValueError("ProductMatrix must be square and non-empty")
        m = len(rows[0][0])
        if m == 0 or any(len(e) != m for r in rows for e in r):
            raise ValueError("tuple lengths must agree and be positive")

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def m(self) -> int:
        return len(self.rows[0][0])

    def __getitem__(self, ij) -> tuple:
        i, j = ij
        return self.rows[i][j]

    def component(self, k: int) -> list[list[Any]]:
        """The ordinary d x d matrix sitting at embedding k."""
        return [[self.rows[i][j][k] for j in range(self.dim)] for i in range(self.dim)]

    def components(self) -> list[list[list[Any]]]:
        return [self.component(k) for k in range(self.m)]

    @classmethod
    def from_components(cls, comps: Sequence[Sequence[Sequence[Any]]]) -> "ProductMatrix":
        d = len(comps[0])
        return cls(
            tuple(
                tuple(tuple(c[i][j] for c in comps) for j in range(d))
                for i in range(d)
            )
        )

    @classmethod
    def identity(cls, dim: int, m: int, one=ONE, zero=ZERO) -> "ProductMatrix":
        return cls(
            tuple(
                tuple((one if i == j else zero,) * m for j in range(dim))
                for i in range(dim)
            )
        )

    @classmethod
    def diag(cls, *vectors: Sequence, zero=ZERO) -> "ProductMatrix":
        d = len(vectors)
        m = len(vectors[0])
        return cls(
            tuple(
                tuple(tuple(vectors[i]) if i == j else (zero,) * m for j in range(d))
                for i in range(d)
            )
        )

    def map_entries(self, fn: Callable[[tuple], tuple]) -> "ProductMatrix":
        return ProductMatrix(tuple(tuple(fn(e) for e in row) for row in self.rows))

    def diagonal(self) -> list[tuple]:
        return [self.rows[i][i] for i in range(self.dim)]

    def is_diagonal(self) -> bool:
        return all(
            all(_is_zero(x) for x in self.rows[i][j])
            for i in range(self.dim)
            for j in range(self.dim)
            if i != j
        )

    def __matmul__(self, other: "ProductMatrix") -> "ProductMatrix":
        return matrix_mul(self, other)

    # serialisation --------------------------------------------------------
    def to_json(self) -> list:
        return [[[str(x) for x in entry] for entry in row] for row in self.rows]

    @classmethod
    def from_json(cls, data) -> "ProductMatrix":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            tuple(
                tuple(tuple(parse_scalar(str(x)) for x in entry) for entry in row)
                for row in data
            )
        )

    def __str__(self) -> str:
        return json.dumps(self.to_json())


def _is_zero(x) -> bool:
    is_zero = getattr(x, "is_zero", None)
    return is_zero() if is_zero is not None else x == 0


def matrix_tensor_n(a: ProductMatrix, n: int) -> ProductMatrix:
    return a.map_entries(lambda e: theta_embed(e, n))


def matrix_shift(a: ProductMatrix) -> ProductMatrix:
    """phi applied entrywise to a matrix of constant tuples."""
    return a.map_entries(frobenius_shift)


def _mat_mul(x: list[list], y: list[list]) -> list[list]:
    d = len(x)
    out = []
    for i in range(d):
        row = []
        for j in range(d):
            acc = x[i][0] * y[0][j]
            for k in range(1, d):
                acc = acc + x[i][k] * y[k][j]
            row.append(acc)
        out.append(row)
    return out


def matrix_mul(a: ProductMatrix, b: ProductMatrix) -> ProductMatrix:
    if a.dim != b.dim or a.m != b.m:
        raise ValueError("matrix_mul needs equal dimension and tuple length")
    return ProductMatrix.from_components(
        [_mat_mul(x, y) for x, y in zip(a.components(), b.components())]
    )


def det2(x: list[list]):
    if len(x) == 1:
        return x[0][0]
    if len(x) == 2:
        return x[0][0] * x[1][1] - x[0][1] * x[1][0]
    raise ValueError("only 1x1 and 2x2 determinants are supported")


def adjugate(x: list[list]) -> list[list]:
    if len(x) == 1:
        return [[ONE]]
    if len(x) == 2:
        return [[x[1][1], -x[0][1]], [-x[1][0], x[0][0]]]
    raise ValueError("only 1x1 and 2x2 adjugates are supported")


def component_inverse(x: list[list[Scalar]]) -> list[list[Scalar]]:
    try:
        inv_det = scalar_inv(det2(x))
    except NonMonomialInverse as exc:
        raise SingularBaseChange(f"determinant {det2(x)} is not an invertible monomial") from exc
    return [[inv_det * e for e in row] for row in adjugate(x)]


def matrix_inverse(a: ProductMatrix) -> ProductMatrix:
    return ProductMatrix.from_components([component_inverse(c) for c in a.components()])


def det_components(a: ProductMatrix) -> tuple:
    return tuple(det2(c) for c in a.components())


def semilinear_conjugate(q: ProductMatrix, a: ProductMatrix) -> ProductMatrix:
    """``Q * A * phi(Q)^-1``."""
    return matrix_mul(matrix_mul(q, a), matrix_inverse(matrix_shift(q)))


def apply_to_coordinates(q: ProductMatrix, vectors: Sequence[tuple]) -> tuple[tuple, ...]:
    """Multiply the column vectors ``(v_1[k], ..., v_d[k])`` by ``Q_k`` for every k."""
    d, m = q.dim, q.m
    out = [[None] * m for _ in range(d)]
    for k in range(m):
        qk = q.component(k)
        for i in range(d):
            acc = qk[i][0] * vectors[0][k]
            for j in range(1, d):
                acc = acc + qk[i][j] * vectors[j][k]
            out[i][k] = acc
    return tuple(tuple(row) for row in out)


def scalar_tuple(values: Sequence) -> tuple[Scalar, ...]:
    return tuple(Scalar.coerce(v) for v in values)
