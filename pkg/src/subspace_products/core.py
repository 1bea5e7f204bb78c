"""Matrix subspace primitives.

A matrix subspace of n-by-n matrices over the reals or the complex numbers is
stored as the raw spanning set plus an orthonormal basis of its vectorization.
Vectorization is column-major (Fortran order) throughout the package, so
structure constants and serialized bases are reproducible.

The inner product is the Frobenius (trace) inner product; over the reals its
real part, which for real matrices is the plain trace form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import (
    BadParameters,
    EmptyInput,
    FieldMismatch,
    MixedSizes,
    NonFiniteInput,
    NotMember,
    RealFieldViolation,
    SingularTransform,
    SizeMismatch,
    ZeroSubspace,
)

REAL = "real"
COMPLEX = "complex"
FIELDS = (REAL, COMPLEX)


@dataclass(frozen=True)
class Tolerances:
    """Numerical rank thresholds.

    Singular values are kept when they exceed ``rel_rank_tol`` times the
    largest singular value; if the largest singular value is below
    ``abs_floor`` the rank is reported as zero.
    """

    rel_rank_tol: float = 1e-8
    abs_floor: float = 1e-12

    def __post_init__(self):
        if not (self.rel_rank_tol > 0.0 and self.abs_floor > 0.0):
            raise BadParameters("tolerance values must be strictly positive")


def vec(A: np.ndarray) -> np.ndarray:
    """Stack a matrix into a vector, column by column."""
    return np.asarray(A).reshape(-1, order="F")


def unvec(v: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`vec` for an n-by-n matrix."""
    return np.asarray(v).reshape((n, n), order="F")


def dtype_for(field: str):
    return np.float64 if field == REAL else np.complex128


def check_field(field: str) -> str:
    if field not in FIELDS:
        raise BadParameters(f"unknown field {field!r}; expected 'real' or 'complex'")
    return field


def as_square_matrix(A, field: Optional[str] = None, name: str = "matrix") -> np.ndarray:
    """Validate and normalize a square matrix.

    Rejects non-square shapes, NaN/Inf entries and, for ``field='real'``,
    nonzero imaginary parts.  Returns float64 or complex128 storage.
    """
    arr = np.asarray(A)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise SizeMismatch(f"{name} must be square and nonempty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or (
        np.iscomplexobj(arr) and not np.all(np.isfinite(arr.imag))
    ):
        raise NonFiniteInput(f"{name} contains NaN or Inf entries")
    if field == REAL:
        if np.iscomplexobj(arr) and np.any(arr.imag != 0):
            raise RealFieldViolation(f"{name} has nonzero imaginary entries over the real field")
        return np.array(arr.real, dtype=np.float64)
    if field == COMPLEX:
        return np.array(arr, dtype=np.complex128)
    if np.iscomplexobj(arr):
        return np.array(arr, dtype=np.complex128)
    return np.array(arr, dtype=np.float64)


def rank_from_singular_values(s: np.ndarray, tols: Tolerances) -> int:
    s = np.asarray(s)
    if s.size == 0 or s[0] < tols.abs_floor:
        return 0
    return int(np.sum(s > tols.rel_rank_tol * s[0]))


def frobenius_inner(A: np.ndarray, B: np.ndarray, field: str = COMPLEX):
    """Trace inner product (B, A) -> tr(B* A); real part over the reals."""
    val = np.vdot(vec(B), vec(A))
    return val.real if field == REAL else val


class Membership(NamedTuple):
    inside: bool
    residual: float


@dataclass(frozen=True)
class MatrixSubspace:
    """A subspace of n-by-n matrices with an orthonormalized vector basis.

    Attributes
    ----------
    n : side length of the member matrices.
    field : 'real' or 'complex'.
    raw_basis : the spanning matrices as supplied (possibly dependent).
    dim : numerical rank of the vectorized spanning set.
    ortho_basis : (n*n, dim) array with orthonormal columns spanning the
        same space as the vectorized raw basis.
    tols : the rank thresholds used at construction and in membership tests.

    Instances are value objects: never mutate the stored arrays.
    """

    n: int
    field: str
    raw_basis: tuple
    dim: int
    ortho_basis: np.ndarray
    tols: Tolerances

    def __post_init__(self):
        self.ortho_basis.setflags(write=False)
        for B in self.raw_basis:
            B.setflags(write=False)

    @property
    def tol(self) -> float:
        """The relative rank threshold in force for this subspace."""
        return self.tols.rel_rank_tol

    def basis_matrices(self) -> list:
        """Orthonormal basis as matrices (columns of ``ortho_basis`` unstacked)."""
        return [unvec(self.ortho_basis[:, i], self.n) for i in range(self.dim)]

    def coefficients(self, A: np.ndarray) -> np.ndarray:
        """Expansion coefficients of the orthogonal projection of A."""
        c = self.ortho_basis.conj().T @ vec(A)
        return c.real if self.field == REAL else c

    def project(self, A: np.ndarray) -> np.ndarray:
        """Orthogonal projection of A onto the subspace."""
        return unvec(self.ortho_basis @ self.coefficients(A), self.n)

    def project_out(self, A: np.ndarray) -> np.ndarray:
        """Component of A orthogonal to the subspace."""
        return np.asarray(A, dtype=self.ortho_basis.dtype) - self.project(A)


def subspace_from_matrices(
    mats: Sequence, field: str = COMPLEX, tols: Optional[Tolerances] = None
) -> MatrixSubspace:
    """Build the numerical span of a list of square matrices.

    The dimension is the numerical rank of the column-stacked vectorizations,
    decided by ``tols``.  A list of all-zero matrices yields the representable
    zero subspace (dim 0), which sampling and analysis operations reject.
    """
    check_field(field)
    tols = tols or Tolerances()
    if len(mats) == 0:
        raise EmptyInput("need at least one matrix to span a subspace")
    arrs = [as_square_matrix(M, field=field, name=f"mats[{i}]") for i, M in enumerate(mats)]
    n = arrs[0].shape[0]
    for i, M in enumerate(arrs):
        if M.shape[0] != n:
            raise MixedSizes(f"mats[{i}] has side {M.shape[0]}, expected {n}")
    stack = np.column_stack([vec(M) for M in arrs])
    U, s, _ = np.linalg.svd(stack, full_matrices=False)
    dim = rank_from_singular_values(s, tols)
    Q = np.array(U[:, :dim])
    if field == REAL:
        Q = np.array(Q.real, dtype=np.float64)
    return MatrixSubspace(
        n=n, field=field, raw_basis=tuple(arrs), dim=dim, ortho_basis=Q, tols=tols
    )


def membership(S: MatrixSubspace, A) -> Membership:
    """Distance of A from S and the resulting inside/outside verdict.

    The residual is the Frobenius norm of A minus its orthogonal projection
    onto S; A is inside when the residual is below ``S.tol * max(1, ||A||_F)``.
    """
    arr = as_square_matrix(A, name="A")
    if arr.shape[0] != S.n:
        raise SizeMismatch(f"matrix side {arr.shape[0]} does not match subspace side {S.n}")
    v = vec(arr).astype(np.complex128)
    coef = S.ortho_basis.conj().T @ v
    if S.field == REAL:
        coef = coef.real
    residual = float(np.linalg.norm(v - S.ortho_basis @ coef))
    scale = max(1.0, float(np.linalg.norm(arr)))
    return Membership(inside=residual < S.tol * scale, residual=residual)


def require_member(S: MatrixSubspace, A, name: str = "matrix") -> np.ndarray:
    """Return A validated as a member of S, raising NotMember otherwise."""
    arr = as_square_matrix(A, name=name)
    got = membership(S, arr)
    if not got.inside:
        raise NotMember(f"{name} is not in the subspace (residual {got.residual:.3e})")
    return arr.astype(dtype_for(S.field)) if S.field == COMPLEX else arr


def numerical_rank(vectors: Sequence, tols: Optional[Tolerances] = None) -> int:
    """Numerical rank of a set of equal-length vectors."""
    tols = tols or Tolerances()
    if len(vectors) == 0:
        raise EmptyInput("need at least one vector")
    arrs = [np.asarray(v).reshape(-1) for v in vectors]
    m = arrs[0].size
    for i, v in enumerate(arrs):
        if v.size != m:
            raise MixedSizes(f"vectors[{i}] has length {v.size}, expected {m}")
        if not np.all(np.isfinite(v.real)) or (
            np.iscomplexobj(v) and not np.all(np.isfinite(v.imag))
        ):
            raise NonFiniteInput(f"vectors[{i}] contains NaN or Inf")
    s = np.linalg.svd(np.column_stack(arrs), compute_uv=False)
    return rank_from_singular_values(s, tols)


def is_invertible(A: np.ndarray, tols: Optional[Tolerances] = None) -> bool:
    """Numerical invertibility: smallest singular value above the rank cutoff."""
    tols = tols or Tolerances()
    s = np.linalg.svd(np.asarray(A), compute_uv=False)
    if s.size == 0 or s[0] < tols.abs_floor:
        return False
    return bool(s[-1] > tols.rel_rank_tol * s[0])


def equivalence_transform(S: MatrixSubspace, X, Y) -> MatrixSubspace:
    """The subspace X S Y^{-1} for invertible X and Y.

    Dimension is preserved; minrank and factorizability are invariant under
    this operation.
    """
    Xa = as_square_matrix(X, field=S.field if S.field == REAL else None, name="X")
    Ya = as_square_matrix(Y, field=S.field if S.field == REAL else None, name="Y")
    if Xa.shape[0] != S.n or Ya.shape[0] != S.n:
        raise SizeMismatch("transform matrices must match the subspace side")
    for name, M in (("X", Xa), ("Y", Ya)):
        if not is_invertible(M, S.tols):
            raise SingularTransform(f"{name} is numerically singular")
    # X B Y^{-1} computed by a solve against Y^T to avoid forming the inverse
    new_basis = [np.linalg.solve(Ya.T, (Xa @ B).T).T for B in S.raw_basis]
    return subspace_from_matrices(new_basis, field=S.field, tols=S.tols)


def random_element(S: MatrixSubspace, seed: int) -> np.ndarray:
    """Seeded Gaussian element of S.

    Coefficients against the orthonormal basis are i.i.d. standard normal
    (independent real and imaginary parts over the complex field), so the
    draw is an isotropic Gaussian on the subspace and deterministic in the
    seed.  This is the package's realization of a generic point.
    """
    if S.dim == 0:
        raise ZeroSubspace("cannot sample from the zero subspace")
    rng = np.random.default_rng(seed)
    if S.field == REAL:
        c = rng.standard_normal(S.dim)
    else:
        c = rng.standard_normal(S.dim) + 1j * rng.standard_normal(S.dim)
    return unvec(S.ortho_basis @ c, S.n)


def random_unit_element(S: MatrixSubspace, seed: int) -> np.ndarray:
    """Seeded Gaussian element scaled to unit Frobenius norm."""
    A = random_element(S, seed)
    return A / np.linalg.norm(A)


def check_same_space(S1: MatrixSubspace, S2: MatrixSubspace) -> None:
    if S1.n != S2.n:
        raise SizeMismatch(f"subspace sides differ: {S1.n} vs {S2.n}")
    if S1.field != S2.field:
        raise FieldMismatch(f"subspace fields differ: {S1.field} vs {S2.field}")


def subspace_sum(S1: MatrixSubspace, S2: MatrixSubspace) -> MatrixSubspace:
    """Span of the union of the two spanning sets."""
    check_same_space(S1, S2)
    return subspace_from_matrices(
        list(S1.raw_basis) + list(S2.raw_basis), field=S1.field, tols=S1.tols
    )


def subspaces_equal(S1: MatrixSubspace, S2: MatrixSubspace) -> bool:
    """Mutual membership of the orthonormal bases, plus equal dimensions."""
    if S1.n != S2.n or S1.field != S2.field or S1.dim != S2.dim:
        return False
    return all(membership(S2, B).inside for B in S1.basis_matrices()) and all(
        membership(S1, C).inside for C in S2.basis_matrices()
    )


def identity(n: int, field: str = COMPLEX) -> np.ndarray:
    return np.eye(n, dtype=dtype_for(field))
