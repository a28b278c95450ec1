"""Temporal regular path queries over temporal property graphs."""

from .errors import (
    ConflictingValue,
    DomainTooLarge,
    FormatError,
    FragmentError,
    InvalidInstance,
    QuerySyntaxError,
    ResourceLimit,
    SizeLimit,
    TrpqError,
    UnsupportedFeature,
    ValidationError,
)
from .expr import (
    AxisKind,
    Fragment,
    PathExpr,
    TestExpr,
    classify_fragment,
    expr_size,
    pretty_print,
    temporal_radius,
)
from .graph import (
    BindingTuple,
    Itpg,
    Tpg,
    canonical_translation,
    recompress,
    validate_itpg,
    validate_tpg,
)
from .intervals import (
    Interval,
    IntervalFamily,
    ValuedInterval,
    ValuedIntervalFamily,
    before,
    coalesce,
    coalesce_valued,
    family_contained,
    meets,
    occurs_during,
)
from .bundle import load_bundle, save_bundle
from .evaluate import (
    Algorithm,
    EvalStats,
    eval_anoi,
    eval_bindings,
    eval_dispatch,
    eval_full,
    eval_only_pc,
)
from .fixtures import CONTACT_QUERY, contact_example
from .generate import GenParams, gen_contact_graph
from .oracle import check_membership, eval_relation, snapshot_relation, test_holds
from .parser import parse_match, parse_trpq
from .reductions import (
    QbfFormula,
    ReductionInstance,
    gen_gsubset_sum,
    gen_qbf,
    gen_qbf_anoi,
    gen_subset_sum,
    solve_gsubset_sum_brute,
    solve_qbf_brute,
    solve_subset_sum_brute,
)

__version__ = "0.1.0"
