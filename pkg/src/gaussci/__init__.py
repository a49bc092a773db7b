"""Conditional independence implication in Gaussian DAG models.

The package decides, exactly, which conditional independence statements
follow when a linear structural equation model over a DAG is augmented
with one extra independence constraint.  The positive-definite
covariances of the DAG model are parameterized by edge weights and error
variances; an extra statement cuts out a subvariety, and implication is
settled by polynomial arithmetic on almost-principal minors: monomial
minors split the model into a union of edge-deleted DAG models, and
divisibility between saturated minors certifies implication in general.

Alongside the exact engine there is a gaussoid-axiom closure used to
verify the four-node completeness of axiomatic reasoning, and a numeric
layer for strong-faithfulness questions: whether near-independence
propagates, with witness search for the cases where it does not.
"""

from .dag import (
    CycleError,
    Dag,
    Trek,
    d_connecting_paths,
    d_separated,
    edge_on_all_connecting_paths,
    enumerate_dags,
    enumerate_treks,
    format_dag,
    parse_dag,
    random_dag,
)
from .errors import GuardError
from .gaussoid import (
    ClosureResult,
    ConjectureReport,
    canonical_form,
    close,
    exceptional_structures_n4,
    glob_statements,
    verify_conjecture_n4,
)
from .implication import (
    AugmentedModel,
    CiStatement,
    DecompositionResult,
    IterativeResult,
    Verdict,
    decompose,
    exact_components,
    format_statement,
    implies_exact,
    implies_via_union,
    is_graphical_algebraic,
    is_graphical_graphical,
    iterative_decompose,
    parse_statement,
)
from .numeric import (
    ApproxQuery,
    ApproxWitness,
    NumericSem,
    approx_implies,
    batch_sigma,
    build_sigma,
    check_rho_factorization,
    implication_witness,
    mi_gap,
    partial_correlation,
    sample_sem,
    search_counterexample,
)
from .poly import MvPoly, divides, exact_divide, monomial_factors
from .trek import (
    ci_minor,
    phi_minor,
    phi_sigma,
    principal_minor_images,
    saturate,
    sigma_entry,
    trek_rule_sigma,
    trek_systems_nsi,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxQuery",
    "ApproxWitness",
    "AugmentedModel",
    "CiStatement",
    "ClosureResult",
    "ConjectureReport",
    "CycleError",
    "Dag",
    "DecompositionResult",
    "GuardError",
    "IterativeResult",
    "MvPoly",
    "NumericSem",
    "Trek",
    "Verdict",
    "approx_implies",
    "batch_sigma",
    "build_sigma",
    "canonical_form",
    "check_rho_factorization",
    "ci_minor",
    "close",
    "d_connecting_paths",
    "d_separated",
    "decompose",
    "divides",
    "edge_on_all_connecting_paths",
    "enumerate_dags",
    "enumerate_treks",
    "exact_components",
    "exact_divide",
    "exceptional_structures_n4",
    "format_dag",
    "format_statement",
    "glob_statements",
    "implication_witness",
    "implies_exact",
    "implies_via_union",
    "is_graphical_algebraic",
    "is_graphical_graphical",
    "iterative_decompose",
    "mi_gap",
    "monomial_factors",
    "parse_dag",
    "parse_statement",
    "partial_correlation",
    "phi_minor",
    "phi_sigma",
    "principal_minor_images",
    "random_dag",
    "sample_sem",
    "saturate",
    "search_counterexample",
    "sigma_entry",
    "trek_rule_sigma",
    "trek_systems_nsi",
    "verify_conjecture_n4",
]
