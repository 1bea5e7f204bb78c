"""Numerical analysis of the set of products of two matrix subspaces.

Given matrix subspaces spanned by square matrices over the reals or the
complex numbers, this package computes the linearization of their product
set, sampled ranks of the product map, a curvature measure deciding
flatness, two-dimensional pencil normal forms with the generalized
linear-fractional and zero-product determinant tests, minrank with
closedness certificates, bilinear structure constants with a Gauss-Newton
solver, and explicit factorizations over inverse-closed pairs.
"""

__version__ = "0.1.0"

from .bilinear import (
    BilinearModel,
    SolveReport,
    extract_bilinear,
    factor_via_inverse_closed,
    model_from_bases,
    nullstellensatz_degree_bound,
    solve_bilinear,
)
from .catalog import KINDS, CatalogSpec, make_subspace, persym_genericity_check
from .core import (
    COMPLEX,
    REAL,
    MatrixSubspace,
    Membership,
    Tolerances,
    equivalence_transform,
    membership,
    numerical_rank,
    random_element,
    random_unit_element,
    subspace_from_matrices,
    subspace_sum,
    subspaces_equal,
    unvec,
    vec,
)
from .errors import (
    BadParameters,
    ChainConditionViolated,
    EmptyInput,
    FieldMismatch,
    MixedSizes,
    NoFactorization,
    NoInvertibleElementFound,
    NonFiniteInput,
    NotMember,
    NotSymmetric,
    ParseError,
    RealFieldViolation,
    SingularTransform,
    SingularWitness,
    SizeMismatch,
    SubspaceProductsError,
    UnsupportedDegree,
    WrongDimension,
    ZeroScalar,
    ZeroSubspace,
)
from .geometry import (
    CurvatureSample,
    ProductAnalysis,
    curvature_measure,
    factorizability_check,
    flatness_test,
    linearization,
    product_map,
    product_map_rank,
    sample_pair,
    second_fundamental_form,
    tangent_space,
)
from .pencil import (
    ClosednessCertificate,
    LftWitness,
    MinrankReport,
    chain_factor,
    closedness_certificate,
    craig_sakamoto_check,
    find_lft_witness,
    minrank,
    normalize_pair,
    normalize_pencil,
    zero_product_probe,
)
