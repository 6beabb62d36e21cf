"""Linear symmetry-based disentanglement (LSBD) metric.

Thin Python layer over the C++ core. Encodings are ``(N, D)`` arrays whose rows
follow the row-major order of the factor grid given by ``sizes``.
"""

from ._lsbd import (
    FactorProjection,
    ProjectionModel,
    apply_rep,
    apply_rep_inverse,
    center_encodings,
    compute_lambdas,
    encode_images_pca,
    evaluate,
    fit_projection,
    gen_perfect_embedding,
    gen_random_invertible,
    gen_square_translation,
    inner_product,
    inner_product_reduced,
    lsbd_loss,
    lsbd_loss_equivariance,
    lsbd_loss_pairwise,
    project,
    rotation_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "FactorProjection",
    "ProjectionModel",
    "apply_rep",
    "apply_rep_inverse",
    "center_encodings",
    "compute_lambdas",
    "encode_images_pca",
    "evaluate",
    "fit_projection",
    "gen_perfect_embedding",
    "gen_random_invertible",
    "gen_square_translation",
    "inner_product",
    "inner_product_reduced",
    "lsbd_loss",
    "lsbd_loss_equivariance",
    "lsbd_loss_pairwise",
    "project",
    "rotation_matrix",
]
