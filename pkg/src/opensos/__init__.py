"""Toolkit for positive GSOS transition system specifications.

Parse a textual specification into signatures, labels and deduction rules;
derive most-general ruloids for open terms; check strong, closed-instance,
hypothesis-preserving and formal-hypothesis bisimilarity (plus their proper
variants); and analyse when sound equations survive disjoint extensions.
"""
from .terms import (
    App,
    Equation,
    Signature,
    SignatureError,
    Term,
    Var,
    apply_subst,
    canonical_rename,
    enumerate_closed_terms,
    enumerate_open_terms,
    is_closed,
    is_linear,
    term_size,
    vars_of,
)
from .tss import FormatViolation, Rule, Trans, Tss
from .ruloids import (
    Hyp,
    Lts,
    Ruloid,
    explore,
    initial_actions,
    instantiate_ruloid,
    instantiations,
    ruloids,
    transitions,
)
from .analysis import (
    ArityConflictError,
    EquationCriteria,
    ExtensionCriteria,
    FertilityResult,
    FormatReport,
    LabelGuardError,
    NonEvolvingTable,
    adds_labels,
    conservativity_probe,
    initial_fertility,
    label_usage,
    non_evolving_indices,
    robust_equation_criteria,
    robust_extension_criteria,
    validate_disjoint_extension,
    validate_positive_gsos,
)
from .bisim import (
    Bounds,
    NOTIONS,
    Verdict,
    check,
    ci_bisim,
    fh_bisim,
    hp_bisim,
    pfh_bisim,
    php_bisim,
    strong_bisim,
)
from .equations import (
    BROKEN,
    EMPIRICAL,
    GUARANTEED,
    EquationalTheory,
    PreservationReport,
    preservation_advisor,
    prove,
    soundness_sweep,
)
from .specio import ParseError, SpecDocument, parse, parse_term, print_document

__version__ = "0.1.0"
