"""Exact-arithmetic engine for nineteen-vertex lattice models.

Everything runs over the rationals: vertex weights in a multiplicative
parametrization, transfer-row operators, brute-force plaquette sums, the
operator exchange algebra, and a linear solver that pins down the modified
partition functions from their functional equations.
"""

from .errors import (
    BackendMismatch,
    ConfigError,
    DegenerateParameter,
    DegenerateSample,
    IoError,
    NonUniqueSolution,
    NormalizationFailure,
    OmegaZero,
    TooLarge,
    Vertex19Error,
    ZeroArgument,
)
from .fieldcore import Model, ModelContext, make_context, rat, rat_str
from .weights import RMatrix, big_lambdas, check_ybe, omegas, r_matrix, weight
from .bruteforce import (
    BoundarySpec,
    dwbc_boundary,
    f_boundary,
    fbar_boundary,
    partition_bruteforce,
)
from .monodromy import (
    SingularReport,
    StructureReport,
    compute_F,
    compute_Fbar,
    compute_H,
    compute_Hbar,
    compute_Z,
    singular_weights_report,
    verify_structure,
)
from .algebra import (
    CoeffKind,
    RelationId,
    RelationResidual,
    exchange_coeffs,
    sample_phi_lemmas,
    sample_relation,
    verify_phi_lemmas,
    verify_relation,
)
from .zhsolver import (
    AnsatzLayout,
    CoeffSet,
    LinearSystem,
    Solution,
    TableReport,
    assemble_system,
    compare_tables,
    nullspace,
    reconstruct_z,
    solve_zh,
    zh_coeffs,
)
from .reporting import Command, Report, RunConfig, emit, run

__version__ = "0.1.0"

__all__ = [
    "AnsatzLayout",
    "BackendMismatch",
    "BoundarySpec",
    "CoeffKind",
    "CoeffSet",
    "Command",
    "ConfigError",
    "DegenerateParameter",
    "DegenerateSample",
    "IoError",
    "LinearSystem",
    "Model",
    "ModelContext",
    "NonUniqueSolution",
    "NormalizationFailure",
    "OmegaZero",
    "RMatrix",
    "RelationId",
    "RelationResidual",
    "Report",
    "RunConfig",
    "SingularReport",
    "Solution",
    "StructureReport",
    "TableReport",
    "TooLarge",
    "Vertex19Error",
    "ZeroArgument",
    "assemble_system",
    "big_lambdas",
    "check_ybe",
    "compare_tables",
    "compute_F",
    "compute_Fbar",
    "compute_H",
    "compute_Hbar",
    "compute_Z",
    "dwbc_boundary",
    "emit",
    "exchange_coeffs",
    "f_boundary",
    "fbar_boundary",
    "make_context",
    "nullspace",
    "omegas",
    "partition_bruteforce",
    "r_matrix",
    "rat",
    "rat_str",
    "reconstruct_z",
    "run",
    "sample_phi_lemmas",
    "sample_relation",
    "singular_weights_report",
    "solve_zh",
    "verify_phi_lemmas",
    "verify_relation",
    "verify_structure",
    "weight",
    "zh_coeffs",
]
