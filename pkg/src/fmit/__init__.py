"""Feature-model comparison and integration toolkit."""

from .compare import (
    ComparisonReport,
    IntegrationMode,
    Matching,
    compute_cee,
    global_equivalence,
    jaro,
    jaro_winkler,
    match_features,
    select_mode,
    semantic_score,
    structural_score,
    syntactic_score,
)
from .logic import (
    CapExceeded,
    Configuration,
    PropositionalFormula,
    enumerate_configurations,
    is_valid_configuration,
    to_propositional,
)
from .merge import (
    Choice,
    Conflict,
    ConflictKind,
    MergeStrategy,
    Session,
    SessionState,
    auto_integrate,
    detect_conflicts,
    finalize,
    integrate,
    resolve,
    start_session,
)
from .model import (
    ConstraintKind,
    CrossTreeConstraint,
    Feature,
    FeatureModel,
    RelKind,
    Severity,
    Violation,
    depth,
    model_from_tree,
    preorder,
    relationship_slots,
    structurally_equal,
    validate,
)
from .report import ReportDocument, render_report
from .xmlio import ParseDiagnostic, ParseResult, parse_xml, serialize_xml

__version__ = "0.1.0"
