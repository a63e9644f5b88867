"""Hyperbolic invariants of fundamental shadow link complements.

Explicit solutions of the block gluing equations, volumes via the
Bloch-Wigner dilogarithm, the one-loop determinant invariant, adjoint
twisted torsion, and the transformations relating them (0-2 moves, Dehn
filling folds, curve system changes).
"""

from .dblock import (
    BlockSolution,
    block_datum,
    block_jacobian,
    block_oneloop_identity,
    block_shapes,
    block_system,
    block_volume,
    gram_det,
    gram_matrix,
    quadratic_coeffs,
    solve_block_explicit,
)
from .errors import (
    DegenerateFill,
    DegenerateQuadratic,
    DegenerateShape,
    FlatteningBroken,
    FslGeomError,
    InputError,
    InvalidSplit,
    MalformedGluing,
    MathError,
    NoConvergence,
    PatternMismatch,
    SingularGram,
    SingularJacobian,
)
from .fsl import (
    FaceGluing,
    FslComplex,
    FslSolution,
    assemble_solution,
    change_of_curves_factor,
    curve_holonomy_map,
    derive_block_signs,
    derive_components,
    fsl_oneloop,
    fsl_torsion,
    hyperideal_volume,
    total_volume,
)
from .nz import (
    NzDatum,
    direct_sum,
    fill_fold,
    one_loop,
    one_loop_symmetric,
    pachner_02,
    perturbed_datum,
    surgery_factor,
    validate_flattening,
)
from .polylog import bloch_wigner, li2
from .solver import NewtonConfig, newton, newton_block, newton_generic

__version__ = "1.0.0"

__all__ = [
    "BlockSolution",
    "DegenerateFill",
    "DegenerateQuadratic",
    "DegenerateShape",
    "FaceGluing",
    "FlatteningBroken",
    "FslComplex",
    "FslGeomError",
    "FslSolution",
    "InputError",
    "InvalidSplit",
    "MalformedGluing",
    "MathError",
    "NewtonConfig",
    "NoConvergence",
    "NzDatum",
    "PatternMismatch",
    "SingularGram",
    "SingularJacobian",
    "assemble_solution",
    "bloch_wigner",
    "block_datum",
    "block_jacobian",
    "block_oneloop_identity",
    "block_shapes",
    "block_system",
    "block_volume",
    "change_of_curves_factor",
    "curve_holonomy_map",
    "derive_block_signs",
    "derive_components",
    "direct_sum",
    "fill_fold",
    "fsl_oneloop",
    "fsl_torsion",
    "gram_det",
    "gram_matrix",
    "hyperideal_volume",
    "li2",
    "newton",
    "newton_block",
    "newton_generic",
    "one_loop",
    "one_loop_symmetric",
    "pachner_02",
    "perturbed_datum",
    "quadratic_coeffs",
    "solve_block_explicit",
    "surgery_factor",
    "total_volume",
    "validate_flattening",
]
