"""Many-sorted hybrid polyadic modal logic and Matching Logic toolkit."""

from .errors import (
    ArityMismatchError,
    BadReferenceError,
    FeatureNotInSystemError,
    HymlError,
    NotForm0Error,
    NotInSystemError,
    NotSubstitutableError,
    RuleShapeMismatchError,
    SchemeMismatchError,
    SexprSyntaxError,
    SideConditionViolatedError,
    SortMismatchError,
    UnboundVariableError,
    UnknownSymbolError,
    ValidationError,
)
from .syntax import (
    App,
    At,
    Defined,
    Forall,
    Formula,
    Hole,
    Neg,
    Nom,
    NomContext,
    NCClass,
    OpDecl,
    Or,
    Prop,
    SVar,
    Signature,
    SystemId,
    Top,
    and_,
    bot,
    check_admissible,
    dual_app,
    equals,
    exists,
    expand_derived,
    free_svars,
    iff,
    implies,
    is_admissible,
    is_substitutable,
    nomc_apply,
    nomc_apply_dual,
    nomc_classify,
    sort_of,
    substitute,
    total,
    univ_mod,
)
from .semantics import (
    Assignment,
    KripkeStructure,
    default_assignment,
    frame_satisfies,
    generated_submodel,
    is_form0,
    random_model,
    satisfies,
    valid_in_model,
)
from .matching import (
    MLModel,
    Valuation,
    equality_eval,
    evaluate,
    is_pattern,
    ml_satisfies,
    pointwise_extend,
    totality_eval,
)
from .bridge import (
    ExtendedSignature,
    check_prop_equiv,
    check_thm_ml2_semantic,
    encode_at,
    encode_definedness,
    extend_signature,
    hmodl_of_ml,
    ml_of_hmodl,
    translate_formula,
)
from .proofs import (
    AxiomStep,
    PremiseStep,
    ProofReport,
    ProofScript,
    RuleStep,
    Scheme,
    TautStep,
    apply_rule,
    build_axiom_instance,
    check_proof,
    is_prop_tautology,
    match_axiom,
)
from .textio import parse_document, render_document

__version__ = "0.1.0"
