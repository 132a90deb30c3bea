"""dpforge: exact verification of weighted differential Poisson structures.

The package represents finite-dimensional candidate algebras by rational
structure constants, decides every defining identity exactly, executes the
closure constructions (opposite, tensor, quotient, first isomorphism,
cohomology, and their module analogues), and builds degree-truncated
universal enveloping algebras from generators and relations, certifying
equalities by exact ideal-membership computations.
"""

from .algebra import (
    AlgebraSpec,
    DPModuleSpec,
    MorphismSpec,
    apply_diff,
    eval_bilinear,
    load_spec,
    module_act,
    module_diff,
    morphism_apply,
    save_spec,
)
from .axioms import AxiomProfile, profile_for, verify_algebra, verify_module, verify_morphism
from .constructions import (
    check_ideal,
    check_submodule,
    cohomology,
    first_iso,
    module_cohomology,
    module_first_iso,
    module_opposite,
    module_quotient,
    module_tensor,
    opposite,
    quotient,
    tensor,
)
from .enveloping import (
    Relation,
    TruncatedUEA,
    build_relations,
    build_stable_uea,
    build_truncated_uea,
    check_D_preserves_ideal,
)
from .freealg import Generator, NcPoly, Word, parse_poly, render_poly
from .isos import check_generator_iso
from .ptriple import PTriple, build_phi, check_ptriple, check_remark33, tensor_ptriple, trivial_ptriple
from .linalg import (
    Scalar,
    SparseVector,
    Subspace,
    format_scalar,
    parse_scalar,
    quotient_basis,
    row_reduce,
    subspace_intersection,
    subspace_sum,
)
from .report import CheckResult, VerificationReport

__version__ = "0.1.0"

__all__ = [
    "AlgebraSpec",
    "AxiomProfile",
    "CheckResult",
    "DPModuleSpec",
    "Generator",
    "MorphismSpec",
    "NcPoly",
    "PTriple",
    "Relation",
    "Scalar",
    "SparseVector",
    "Subspace",
    "TruncatedUEA",
    "VerificationReport",
    "Word",
    "apply_diff",
    "build_phi",
    "build_relations",
    "build_stable_uea",
    "build_truncated_uea",
    "check_D_preserves_ideal",
    "check_generator_iso",
    "check_ideal",
    "check_ptriple",
    "check_remark33",
    "check_submodule",
    "cohomology",
    "eval_bilinear",
    "first_iso",
    "format_scalar",
    "load_spec",
    "module_act",
    "module_cohomology",
    "module_diff",
    "module_first_iso",
    "module_opposite",
    "module_quotient",
    "module_tensor",
    "morphism_apply",
    "opposite",
    "parse_poly",
    "parse_scalar",
    "profile_for",
    "quotient",
    "quotient_basis",
    "render_poly",
    "row_reduce",
    "save_spec",
    "subspace_intersection",
    "subspace_sum",
    "tensor",
    "tensor_ptriple",
    "trivial_ptriple",
    "verify_algebra",
    "verify_module",
    "verify_morphism",
]
