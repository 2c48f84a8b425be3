"""Toolkit for description logics over relations of arbitrary arity.

Concepts count tuples of permuted n-ary relations; the package provides
model checking, bounded model search, a relation-algebra evaluator, a
reduction to binary roles with a tableau decision procedure on top, tree
unraveling, a translation bridge to the algebra's unary fragment, and a
round-based model comparison game.
"""

from .bridge import BridgeError, to_alc, to_gra
from .errors import BudgetError, InputError, PolyalcError
from .game import (
    EnumerationBudgetError,
    canonical_words,
    duplicator_wins,
    enumerate_concepts,
    game_partition,
    role_type,
    winning_trace,
)
from .gra import (
    DEFAULT_BUDGET,
    EvalBudgetError,
    EvalEnv,
    UndeclaredAtomError,
    apply_permutation,
    eval_term,
)
from .model import (
    ArityRel,
    Interp,
    ModelFormatError,
    Signature,
    interp_from_dict,
    interp_to_dict,
    load_interp,
    make_interp,
    random_interp,
    save_interp,
    validate_interp,
)
from .reify import (
    ReifySignature,
    build_chi,
    build_outdeg,
    extract_polyadic,
    lanternize,
    translate,
    with_dom,
)
from .semantics import (
    OracleResult,
    SearchBudgetError,
    check_alcqi,
    check_concept,
    minimal_witness_size,
    oracle_sat,
)
from .syntax import (
    AtLeast,
    AtLeastBin,
    AtMostBin,
    AtomicConcept,
    And,
    ArityError,
    BinRole,
    Bot,
    Exactly,
    Exists,
    ForAll,
    LessThan,
    Not,
    Or,
    ParseError,
    Permutation,
    RoleExpr,
    Top,
    concept_names,
    concept_roles,
    concept_size,
    concept_to_alcqi,
    embed_alcqi,
    expand_shorthand,
    is_core,
    modal_depth,
    parse_alcqi,
    parse_concept,
    parse_gra_term,
    perm_of_word,
    print_alcqi,
    print_concept,
    print_gra_term,
)
from .tableau import (
    KCapError,
    SatResult,
    TableauBudgetError,
    alcqi_sat,
    alcqp_sat,
    branching_bound,
    nnf,
)
from .unravel import UnravelBudgetError, UnravelResult, canonical_map, g_unravel

__all__ = [
    "And",
    "ArityError",
    "ArityRel",
    "AtLeast",
    "AtLeastBin",
    "AtMostBin",
    "AtomicConcept",
    "BinRole",
    "Bot",
    "BridgeError",
    "BudgetError",
    "DEFAULT_BUDGET",
    "EnumerationBudgetError",
    "EvalBudgetError",
    "EvalEnv",
    "Exactly",
    "Exists",
    "ForAll",
    "InputError",
    "Interp",
    "KCapError",
    "LessThan",
    "ModelFormatError",
    "Not",
    "Or",
    "OracleResult",
    "ParseError",
    "Permutation",
    "PolyalcError",
    "ReifySignature",
    "RoleExpr",
    "SatResult",
    "SearchBudgetError",
    "Signature",
    "TableauBudgetError",
    "Top",
    "UndeclaredAtomError",
    "UnravelBudgetError",
    "UnravelResult",
    "alcqi_sat",
    "alcqp_sat",
    "apply_permutation",
    "branching_bound",
    "build_chi",
    "build_outdeg",
    "canonical_map",
    "canonical_words",
    "check_alcqi",
    "check_concept",
    "concept_names",
    "concept_roles",
    "concept_size",
    "concept_to_alcqi",
    "duplicator_wins",
    "enumerate_concepts",
    "eval_term",
    "embed_alcqi",
    "expand_shorthand",
    "extract_polyadic",
    "g_unravel",
    "game_partition",
    "interp_from_dict",
    "interp_to_dict",
    "is_core",
    "lanternize",
    "load_interp",
    "make_interp",
    "minimal_witness_size",
    "modal_depth",
    "nnf",
    "oracle_sat",
    "parse_alcqi",
    "parse_concept",
    "parse_gra_term",
    "perm_of_word",
    "print_alcqi",
    "print_concept",
    "print_gra_term",
    "random_interp",
    "role_type",
    "save_interp",
    "to_alc",
    "to_gra",
    "translate",
    "validate_interp",
    "winning_trace",
]
