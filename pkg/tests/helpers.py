"""Shared construction helpers and independent oracles for the test suite."""

from fractions import Fraction

import numpy as np

from subspace_products import CatalogSpec, make_subspace, vec


def cell(n, i, j, value=1.0):
    A = np.zeros((n, n), dtype=complex)
    A[i, j] = value
    return A


def catalog(kind, n, field="complex", **params):
    S, _ = make_subspace(CatalogSpec(kind=kind, n=n, field=field, **params))
    return S


def catalog_flags(kind, n, field="complex", **params):
    return make_subspace(CatalogSpec(kind=kind, n=n, field=field, **params))


def exact_rank_fraction(A):
    """Row reduction over the rationals; exact rank for integer matrices."""
    rows = [[Fraction(int(x)) for x in row] for row in np.asarray(A)]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    rank = 0
    col = 0
    while rank < nrows and col < ncols:
        pivot = next((r for r in range(rank, nrows) if rows[r][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [x / pv for x in rows[rank]]
        for r in range(nrows):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def brute_span_rank(mats, tol=1e-8):
    """Independent rank of a span: SVD of the vectorized stack."""
    V = np.column_stack([vec(np.asarray(M, dtype=complex)) for M in mats])
    s = np.linalg.svd(V, compute_uv=False)
    if s.size == 0 or s[0] < 1e-12:
        return 0
    return int(np.sum(s > tol * s[0]))


def brute_tangent_rank(basis1, basis2, V1, V2, tol=1e-8):
    """Rank of the span {V1 C} union {B V2}, independent of the library path."""
    return brute_span_rank([V1 @ C for C in basis2] + [B @ V2 for B in basis1], tol)


def random_complex(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def crout_lu(A):
    """Elimination oracle: A = L U with L general lower and U unit upper.

    No pivoting; valid for strongly nonsingular A.
    """
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    L = np.zeros_like(A)
    U = np.eye(n, dtype=complex)
    for j in range(n):
        for i in range(j, n):
            L[i, j] = A[i, j] - L[i, :j] @ U[:j, j]
        for k in range(j + 1, n):
            U[j, k] = (A[j, k] - L[j, :j] @ U[:j, k]) / L[j, j]
    return L, U


def strongly_nonsingular(A, floor=1e-6):
    A = np.asarray(A)
    return all(
        abs(np.linalg.det(A[: m + 1, : m + 1])) > floor for m in range(A.shape[0])
    )
