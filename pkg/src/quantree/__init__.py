"""Shapes of equilateral quantum trees from Neumann and Dirichlet spectra."""

from .charpoly import (
    CharPolyBundle,
    charpoly_bundle,
    compute_psi,
    compute_psi_hat,
    compute_psi_tilde,
    compute_ratio,
    evaluate_branched_fraction,
)
from .errors import BoundExceededError, InconsistentInputError, ParseError, QuantreeError
from .exactalg import Polynomial, RationalFunction, isolate_real_roots, parse_polynomial, snap_to_rational
from .invert import (
    CandidateShape,
    child_reciprocal_sum,
    decompose_branches,
    egyptian_multisets,
    invert_ratio,
    invert_snowflake,
    root_degree_from_ratio,
)
from .spectra import (
    Spectrum,
    build_ratio,
    extract_constants,
    infer_p,
    recover_shape_from_spectra,
    synthesize_spectrum,
)
from .tree import (
    RootedTree,
    canonical_code,
    enumerate_trees,
    make_snowflake,
    principal_subforest,
)

__version__ = "0.1.0"
