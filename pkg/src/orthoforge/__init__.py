"""Orthocomplementations of finite lattices via exact linear programming."""

from .lattice import (
    Lattice,
    NoBottomError,
    NoTopError,
    NotALatticeError,
    Poset,
    PosetParseError,
    PosetSpec,
    build_lattice,
    corpus,
    dual_spec,
    generate,
    parse_poset,
    poset_from_spec,
)
from .incidence import (
    Q,
    conjointness_trace,
    disjointness_trace,
    lift_permutation,
    linearized_join,
    linearized_meet,
    moebius_matrix,
    zeta_matrix,
)
from .polytope import (
    ConstraintSystem,
    build_polytope,
    is_integer_point,
    is_vertex,
    lift_point,
    membership,
)
from .simplex import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LPProblem,
    LPSolution,
    PivotLimitExceeded,
    solve,
    solve_with_frozen,
    verify_dual_certificate,
)
from .search import (
    CrossCheckError,
    Orthocomplementation,
    OrthoViolation,
    SearchAborted,
    SearchReport,
    brute_force_orthos,
    cross_check,
    lp_orthos,
    verify_ortho,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
