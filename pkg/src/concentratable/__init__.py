"""Concentratable entanglement of n-qubit pure states.

Statevector simulation of the family of entanglement measures obtained by
averaging reduced-state purities over the subsets of a chosen qubit set,
together with the parallelized SWAP test that measures them: exact outcome
distributions, seeded shot sampling, Bell-pair concentration, and a
numerical verification suite for the measure's properties.
"""

__version__ = "0.1.0"

from .errors import BudgetError, ConsistencyError, ValidationError
from .measures import (
    CEResult,
    ce_distribution,
    ce_even_weight,
    ce_from_histogram,
    ce_purity,
    ce_shots,
    ce_two_state,
    compare_ghz_w,
    concentratable_entanglement,
    ghz_closed_form,
    n_tangle,
    w_closed_form,
    w_post_projection_ce,
)
from .reductions import PurityTable, cross_purity, purity, purity_array, purity_table, subsets_of
from .states import (
    QubitSet,
    Statevector,
    inner_product,
    make_ghz,
    make_haar_random,
    make_product,
    make_w,
    permute_qubits,
    perturb,
    statevector_from_dict,
    statevector_to_dict,
    trace_distance_pure,
)
from .swaptest import (
    JointState,
    MeasurementOutcome,
    OutcomeDistribution,
    ShotHistogram,
    apply_controlled_projector,
    distribution_via_purities,
    exact_distribution,
    full_circuit_oracle,
    full_distribution_via_purities,
    outcome_probability,
    pair_marginal,
    post_measurement,
    sample,
    singlet_fidelity,
    zero_outcome_probability,
)

__all__ = [
    "BudgetError",
    "CEResult",
    "ConsistencyError",
    "JointState",
    "MeasurementOutcome",
    "OutcomeDistribution",
    "PurityTable",
    "QubitSet",
    "ShotHistogram",
    "Statevector",
    "ValidationError",
    "apply_controlled_projector",
    "ce_distribution",
    "ce_even_weight",
    "ce_from_histogram",
    "ce_purity",
    "ce_shots",
    "ce_two_state",
    "compare_ghz_w",
    "concentratable_entanglement",
    "cross_purity",
    "distribution_via_purities",
    "exact_distribution",
    "full_circuit_oracle",
    "full_distribution_via_purities",
    "ghz_closed_form",
    "inner_product",
    "make_ghz",
    "make_haar_random",
    "make_product",
    "make_w",
    "n_tangle",
    "outcome_probability",
    "pair_marginal",
    "permute_qubits",
    "perturb",
    "post_measurement",
    "purity",
    "purity_array",
    "purity_table",
    "sample",
    "singlet_fidelity",
    "statevector_from_dict",
    "statevector_to_dict",
    "subsets_of",
    "trace_distance_pure",
    "w_closed_form",
    "w_post_projection_ce",
    "zero_outcome_probability",
]
