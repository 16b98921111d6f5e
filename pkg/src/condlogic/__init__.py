"""Toolkit for QA over logically interacting conditions.

Evaluates condition groups under three-valued logic, generates synthetic
entailment-reasoning datasets from an NLI bank, parses document contexts
into condition groups, and scores predictions with compound answer and
condition metrics.
"""

__version__ = "0.1.0"

from .errors import BankError, GenerationError, InvariantError, ParseError, ToolkitError
from .logic import (
    Condition,
    ConditionGroup,
    ConditionLabel,
    EvidenceState,
    FactRelation,
    GroupStatus,
    LogicalType,
    TaskProfile,
    Verdict,
    derive_answer,
    enumerate_assignments,
    evaluate_group,
    reference_evaluate,
    resolve_state,
)
from .templates import (
    Template,
    TemplateGroup,
    VarRef,
    condition_ids,
    parse_template_dsl,
    render_template_dsl,
    solve_template,
    template_groups,
    validate_template,
)
from .generate import (
    Example,
    GenConfig,
    NliBank,
    NliRecord,
    config_hash,
    generate_dataset,
    generate_template,
    generate_templates,
    instantiate,
    load_nli_bank,
)
from .contexts import (
    HEADING_TAGS,
    KNOWN_TAGS,
    RESULT_SEPARATOR,
    DomNode,
    EduSequence,
    HtmlElement,
    accept_edu_input,
    build_dom_tree,
    load_html_elements,
    parse_html_context,
)
from .metrics import (
    EvalReport,
    GoldRecord,
    Prediction,
    answer_em_f1,
    bleu,
    condition_prf,
    conditional_em_f1,
    evaluate_files,
    format_report,
    label_accuracy,
    normalize_text,
    read_gold_file,
    read_prediction_file,
    score_example,
)
from .dataset_io import (
    SplitManifest,
    example_from_dict,
    example_to_dict,
    read_manifest,
    read_split,
    write_split,
)

__all__ = [
    "__version__",
    "BankError",
    "GenerationError",
    "InvariantError",
    "ParseError",
    "ToolkitError",
    "Condition",
    "ConditionGroup",
    "ConditionLabel",
    "EvidenceState",
    "FactRelation",
    "GroupStatus",
    "LogicalType",
    "TaskProfile",
    "Verdict",
    "derive_answer",
    "enumerate_assignments",
    "evaluate_group",
    "reference_evaluate",
    "resolve_state",
    "Template",
    "TemplateGroup",
    "VarRef",
    "condition_ids",
    "parse_template_dsl",
    "render_template_dsl",
    "solve_template",
    "template_groups",
    "validate_template",
    "Example",
    "GenConfig",
    "NliBank",
    "NliRecord",
    "config_hash",
    "generate_dataset",
    "generate_template",
    "generate_templates",
    "instantiate",
    "load_nli_bank",
    "DomNode",
    "EduSequence",
    "HEADING_TAGS",
    "HtmlElement",
    "KNOWN_TAGS",
    "RESULT_SEPARATOR",
    "accept_edu_input",
    "build_dom_tree",
    "load_html_elements",
    "parse_html_context",
    "EvalReport",
    "GoldRecord",
    "Prediction",
    "answer_em_f1",
    "bleu",
    "condition_prf",
    "conditional_em_f1",
    "evaluate_files",
    "format_report",
    "label_accuracy",
    "normalize_text",
    "read_gold_file",
    "read_prediction_file",
    "score_example",
    "SplitManifest",
    "example_from_dict",
    "example_to_dict",
    "read_manifest",
    "read_split",
    "write_split",
]
