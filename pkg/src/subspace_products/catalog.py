"""Constructors for the structured matrix subspaces used across the package.

Each constructor returns the subspace together with honesty-tested metadata
flags: whether inverses of invertible members stay inside the subspace, and
whether the identity is a member.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .core import (
    COMPLEX,
    REAL,
    MatrixSubspace,
    Tolerances,
    as_square_matrix,
    check_field,
    dtype_for,
    membership,
    subspace_from_matrices,
)
from .errors import BadParameters

KINDS = (
    "diagonal",
    "circulant",
    "lower_triangular",
    "upper_triangular",
    "unit_upper_constant_diagonal",
    "unit_lower_constant_diagonal",
    "band_lower",
    "band_upper",
    "toeplitz_upper_triangular",
    "toeplitz_lower_triangular",
    "symmetric",
    "persymmetric_constant_antidiagonal",
    "rank_cols",
    "rank_rows",
    "hurwitz_radon_2",
    "krylov",
)


@dataclass(frozen=True)
class CatalogSpec:
    """A named structured subspace with its parameters.

    ``p``/``q`` are bandwidths, ``k`` the rank-structure width, ``matrix``
    and ``max_power`` configure the power-span kind.
    """

    kind: str
    n: int
    field: str = COMPLEX
    p: Optional[int] = None
    q: Optional[int] = None
    k: Optional[int] = None
    matrix: Optional[np.ndarray] = None
    max_power: Optional[int] = None


def _cell(n: int, i: int, j: int, dtype) -> np.ndarray:
    A = np.zeros((n, n), dtype=dtype)
    A[i, j] = 1.0
    return A


def _diagonal(n, dtype):
    return [_cell(n, i, i, dtype) for i in range(n)]


def _circulant(n, dtype):
    shift = np.zeros((n, n), dtype=dtype)
    for j in range(n):
        shift[(j + 1) % n, j] = 1.0
    return [np.linalg.matrix_power(shift, k) for k in range(n)]


def _lower_triangular(n, dtype):
    return [_cell(n, i, j, dtype) for i in range(n) for j in range(i + 1)]


def _upper_triangular(n, dtype):
    return [_cell(n, i, j, dtype) for i in range(n) for j in range(i, n)]


def _strict_upper(n, dtype):
    return [_cell(n, i, j, dtype) for i in range(n) for j in range(i + 1, n)]


def _unit_upper_constant_diagonal(n, dtype):
    return [np.eye(n, dtype=dtype)] + _strict_upper(n, dtype)


def _unit_lower_constant_diagonal(n, dtype):
    return [np.eye(n, dtype=dtype)] + [
        _cell(n, i, j, dtype) for i in range(n) for j in range(i)
    ]


def _band_lower(n, p, dtype):
    return [
        _cell(n, i, j, dtype) for i in range(n) for j in range(n) if 0 <= i - j <= p
    ]


def _band_upper(n, q, dtype):
    return [
        _cell(n, i, j, dtype) for i in range(n) for j in range(n) if 0 <= j - i <= q
    ]


def _toeplitz_upper_triangular(n, dtype):
    out = []
    for d in range(n):
        T = np.zeros((n, n), dtype=dtype)
        for i in range(n - d):
            T[i, i + d] = 1.0
        out.append(T)
    return out


def _toeplitz_lower_triangular(n, dtype):
    return [T.T.copy() for T in _toeplitz_upper_triangular(n, dtype)]


def _symmetric(n, dtype):
    out = []
    for i in range(n):
        for j in range(i, n):
            A = _cell(n, i, j, dtype)
            if i != j:
                A = A + _cell(n, j, i, dtype)
            out.append(A)
    return out


def _sym_constant_antidiagonal(n, dtype):
    # Symmetric matrices whose antidiagonal entries are all equal: the free
    # antidiagonal cells collapse onto the exchange matrix J.
    J = np.fliplr(np.eye(n)).astype(dtype)
    out = [J]
    for i in range(n):
        for j in range(i, n):
            if i + j == n - 1:
                continue
            A = _cell(n, i, j, dtype)
            if i != j:
                A = A + _cell(n, j, i, dtype)
            out.append(A)
    return out


def _rank_cols(n, k, dtype):
    return [_cell(n, i, j, dtype) for i in range(n) for j in range(k)]


def _rank_rows(n, k, dtype):
    return [_cell(n, i, j, dtype) for i in range(k) for j in range(n)]


def _hurwitz_radon_2(dtype):
    rot = np.array([[0.0, -1.0], [1.0, 0.0]], dtype=dtype)
    return [np.eye(2, dtype=dtype), rot]


def make_subspace(
    spec: CatalogSpec, tols: Optional[Tolerances] = None
) -> Tuple[MatrixSubspace, dict]:
    """Construct the named subspace and its metadata flags.

    Returns ``(subspace, {"inverse_closed": bool, "contains_identity": bool})``.
    ``contains_identity`` is computed by an actual membership test;
    ``inverse_closed`` comes from the algebraic structure of the kind.
    """
    check_field(spec.field)
    tols = tols or Tolerances()
    n = spec.n
    if n < 1:
        raise BadParameters(f"n must be positive, got {n}")
    dtype = dtype_for(spec.field)
    kind = spec.kind
    inverse_closed: bool

    if kind == "diagonal":
        basis, inverse_closed = _diagonal(n, dtype), True
    elif kind == "circulant":
        basis, inverse_closed = _circulant(n, dtype), True
    elif kind == "lower_triangular":
        basis, inverse_closed = _lower_triangular(n, dtype), True
    elif kind == "upper_triangular":
        basis, inverse_closed = _upper_triangular(n, dtype), True
    elif kind == "unit_upper_constant_diagonal":
        basis, inverse_closed = _unit_upper_constant_diagonal(n, dtype), True
    elif kind == "unit_lower_constant_diagonal":
        basis, inverse_closed = _unit_lower_constant_diagonal(n, dtype), True
    elif kind == "band_lower":
        if spec.p is None or not 0 <= spec.p <= n - 1:
            raise BadParameters(f"band_lower needs 0 <= p <= n-1, got {spec.p}")
        basis = _band_lower(n, spec.p, dtype)
        inverse_closed = spec.p in (0, n - 1)  # diagonal or full lower triangular
    elif kind == "band_upper":
        if spec.q is None or not 0 <= spec.q <= n - 1:
            raise BadParameters(f"band_upper needs 0 <= q <= n-1, got {spec.q}")
        basis = _band_upper(n, spec.q, dtype)
        inverse_closed = spec.q in (0, n - 1)
    elif kind == "toeplitz_upper_triangular":
        basis, inverse_closed = _toeplitz_upper_triangular(n, dtype), True
    elif kind == "toeplitz_lower_triangular":
        basis, inverse_closed = _toeplitz_lower_triangular(n, dtype), True
    elif kind == "symmetric":
        basis, inverse_closed = _symmetric(n, dtype), True
    elif kind == "persymmetric_constant_antidiagonal":
        basis, inverse_closed = _sym_constant_antidiagonal(n, dtype), False
    elif kind == "rank_cols":
        if spec.k is None or not 1 <= spec.k <= n:
            raise BadParameters(f"rank_cols needs 1 <= k <= n, got {spec.k}")
        basis, inverse_closed = _rank_cols(n, spec.k, dtype), False
    elif kind == "rank_rows":
        if spec.k is None or not 1 <= spec.k <= n:
            raise BadParameters(f"rank_rows needs 1 <= k <= n, got {spec.k}")
        basis, inverse_closed = _rank_rows(n, spec.k, dtype), False
    elif kind == "hurwitz_radon_2":
        if n != 2 or spec.field != REAL:
            raise BadParameters("hurwitz_radon_2 is defined for n=2 over the real field")
        basis, inverse_closed = _hurwitz_radon_2(dtype), True
    elif kind == "krylov":
        if spec.matrix is None:
            raise BadParameters("krylov needs a generator matrix")
        if spec.max_power is None or spec.max_power < 1:
            raise BadParameters(f"krylov needs max_power >= 1, got {spec.max_power}")
        A = as_square_matrix(spec.matrix, field=spec.field, name="matrix")
        if A.shape[0] != n:
            raise BadParameters(f"generator side {A.shape[0]} does not match n={n}")
        basis = [np.eye(n, dtype=dtype)]
        power = np.eye(n, dtype=dtype)
        saturated = False
        for _ in range(spec.max_power):
            power = power @ A
            span_so_far = subspace_from_matrices(basis, field=spec.field, tols=tols)
            if membership(span_so_far, power).inside:
                saturated = True
                break
            basis.append(power.copy())
        # The span is an algebra (hence inverse-closed) only when the powers
        # saturated before the cap.
        inverse_closed = saturated
    else:
        raise BadParameters(f"unknown catalog kind {kind!r}")

    S = subspace_from_matrices(basis, field=spec.field, tols=tols)
    flags = {
        "inverse_closed": inverse_closed,
        "contains_identity": membership(S, np.eye(n)).inside,
    }
    return S, flags


def persym_genericity_check(d: Sequence[float], rel_tol: float = 1e-10) -> bool:
    """Genericity of a diagonal for the symmetric x constant-antidiagonal pair.

    True iff every entry is nonzero and the antidiagonal products
    d_j * d_{n-j+1} are pairwise distinct over the index pairs j != k with
    k != n - j + 1, all within the given relative tolerance.
    """
    d = np.asarray(d, dtype=np.float64)
    n = d.size
    scale = float(np.max(np.abs(d))) if n else 0.0
    if n == 0 or scale == 0.0:
        return False
    if np.any(np.abs(d) <= rel_tol * scale):
        return False
    prod = np.array([d[j] * d[n - 1 - j] for j in range(n)])
    for j in range(n):
        for k in range(n):
            if k == j or k == n - 1 - j:
                continue
            if abs(prod[j] - prod[k]) <= rel_tol * max(abs(prod[j]), abs(prod[k]), 1.0):
                return False
    return True
