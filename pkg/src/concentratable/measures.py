"""The concentratable-entanglement family and related monotones.

For a subset s of qubit labels, the measure is

    C(s) = 1 - 2^{-c(s)} * sum over subsets alpha of s of Tr[rho_alpha^2]

and equals both 1 - p(all-zero) of a SWAP test on the qubits in s and the
total probability of even-weight SWAP-test outcomes touching s. The three
routes are implemented separately so they can cross-check each other:
``ce_purity`` sums 2^{c(s)} purities, ``ce_distribution`` runs the
projector-chain simulation, ``ce_even_weight`` sums signed purity terms
over the full register. Term counts of the first two are inversely
proportional (2^{c} vs 2^{n-c}), hence the auto-selection policy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetError, ConsistencyError, ValidationError
from .limits import PURITY_DISTRIBUTION_MAX_QUBITS
from .reductions import cross_purity, purity_array, purity_table, submasks
from .states import QubitSet, Statevector
from .swaptest import ShotHistogram, _parity, _fwht, sample, zero_outcome_probability

METHODS = ("purity_sum", "distribution_zero_set", "even_weight_sum", "shots")

CSV_COLUMNS = ("n", "mask", "cardinality", "method", "value", "stderr")


@dataclass(frozen=True)
class CEResult:
    """A computed concentratable-entanglement value with its provenance."""

    value: float
    s: QubitSet
    method: str
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValidationError(f"unknown method {self.method!r}")
        # Exact values obey 1 - p(all-zero) <= 1 - 2^{-c(s)}; an unbiased
        # shot estimate may legitimately overshoot that bound.
        bound = 1.0 if self.method == "shots" else 1.0 - 2.0 ** (-self.s.cardinality)
        if not -1e-9 <= self.value <= bound + 1e-9:
            raise ValidationError(
                f"value {self.value} outside [0, {bound}] for c(s)={self.s.cardinality}"
            )

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "mask": self.s.mask,
            "method": self.method,
            "detail": self.detail,
        }

    def csv_row(self) -> tuple:
        stderr = self.detail.get("stderr", "")
        return (
            self.s.n_qubits,
            self.s.mask,
            self.s.cardinality,
            self.method,
            self.value,
            stderr,
        )


def _require_nonempty(psi: Statevector, s: QubitSet) -> None:
    if s.n_qubits != psi.n_qubits:
        raise ValidationError(f"subset is over {s.n_qubits} qubits, state has {psi.n_qubits}")
    if s.cardinality == 0:
        raise ValidationError("the empty subset has no concentratable entanglement")


def _clamp(value: float) -> float:
    if value < -1e-9:
        raise ConsistencyError(f"entanglement value {value} is significantly negative")
    return max(value, 0.0)


def ce_purity(psi: Statevector, s: QubitSet) -> CEResult:
    """C(s) from the purity sum over all 2^{c(s)} subsets of s."""
    _require_nonempty(psi, s)
    try:
        table = purity_table(psi, s)
    except BudgetError as exc:
        raise BudgetError(f"{exc}; switch to ce_distribution for large subsets") from exc
    total = sum(table.values.values())
    value = _clamp(1.0 - total / (1 << s.cardinality))
    return CEResult(value, s, "purity_sum", {"terms": 1 << s.cardinality})


def ce_distribution(psi: Statevector, s: QubitSet) -> CEResult:
    """C(s) = 1 - p(all-zero) from a simulated SWAP test on the qubits in s.

    Only the all-zero projector branch is evaluated; its norm is exactly
    the all-zero entry of ``exact_distribution(psi, psi, tested=s)``.
    """
    _require_nonempty(psi, s)
    p_zero = zero_outcome_probability(psi, psi, s)
    value = _clamp(1.0 - p_zero)
    return CEResult(
        value, s, "distribution_zero_set", {"zero_outcome_probability": p_zero}
    )


def ce_even_weight(psi: Statevector, s: QubitSet) -> CEResult:
    """C(s) as the summed probability of even-weight outcomes touching s.

    Uses the purity route for the full-register outcome probabilities, so
    the n <= 14 budget is set by the 2^n purity terms.
    """
    _require_nonempty(psi, s)
    n = psi.n_qubits
    if n > PURITY_DISTRIBUTION_MAX_QUBITS:
        raise BudgetError(
            f"{1 << n} purity terms for n={n} (cap {PURITY_DISTRIBUTION_MAX_QUBITS})"
        )
    by_label_mask = _fwht(purity_array(psi)) / (1 << n)
    masks = np.arange(1 << n)
    selected = (_parity(masks) == 0) & ((masks & s.mask) != 0)
    value = _clamp(float(by_label_mask[selected].sum()))
    return CEResult(value, s, "even_weight_sum", {"terms": int(selected.sum())})


def ce_shots(psi: Statevector, s: QubitSet, shots: int, seed: int) -> CEResult:
    """Monte-Carlo estimate of C(s) from sampled SWAP-test runs on s."""
    _require_nonempty(psi, s)
    if shots < 100:
        raise ValidationError(f"need at least 100 shots for an estimate, got {shots}")
    return ce_from_histogram(sample(psi, psi, s, shots, seed))


def ce_from_histogram(hist: ShotHistogram) -> CEResult:
    """C(s) estimate (1 - zero-outcome fraction) from an existing histogram."""
    m = hist.tested.cardinality
    if m == 0:
        raise ValidationError("histogram tested set is empty")
    p_zero = hist.counts.get("0" * m, 0) / hist.shots
    stderr = math.sqrt(p_zero * (1.0 - p_zero) / hist.shots)
    return CEResult(
        1.0 - p_zero,
        hist.tested,
        "shots",
        {"shots": hist.shots, "stderr": stderr, "seed": hist.seed},
    )


def concentratable_entanglement(
    psi: Statevector, s: QubitSet, method: str = "auto"
) -> CEResult:
    """C(s) by the requested route; "auto" picks the cheaper term count."""
    if method == "auto":
        cardinality = s.cardinality
        method = (
            "purity_sum"
            if cardinality <= psi.n_qubits - cardinality
            else "distribution_zero_set"
        )
    if method == "purity_sum":
        return ce_purity(psi, s)
    if method == "distribution_zero_set":
        return ce_distribution(psi, s)
    if method == "even_weight_sum":
        return ce_even_weight(psi, s)
    raise ValidationError(f"unknown method {method!r} (seed-based 'shots' runs via ce_shots)")


def ce_two_state(psi: Statevector, psi_prime: Statevector, s: QubitSet) -> float:
    """Two-state generalization: 1 - 2^{-c(s)} * sum of Tr[rho_alpha rho'_alpha].

    Reduces to the single-state value when the copies are equal; for
    nearby copies the symmetrized excess over the single-state values is
    bounded by 4 * (trace distance)^2.
    """
    _require_nonempty(psi, s)
    if psi.n_qubits != psi_prime.n_qubits:
        raise ValidationError(
            f"copy sizes differ: {psi.n_qubits} vs {psi_prime.n_qubits}"
        )
    cardinality = s.cardinality
    if cardinality > 24:
        raise BudgetError(f"{1 << cardinality} cross-purity terms (cap 2^24)")
    total = sum(
        cross_purity(psi, psi_prime, QubitSet(psi.n_qubits, mask))
        for mask in submasks(s.mask)
    )
    return 1.0 - total / (1 << cardinality)


def n_tangle(psi: Statevector) -> float:
    """|<psi| Y^(x)n |psi*>|^2; equals 2^n p(all-ones) for even n."""
    amps = psi.amplitudes
    signs = 1.0 - 2.0 * _parity(np.arange(psi.dim))
    overlap = np.sum(signs * amps * amps[::-1])
    return float(min(abs(overlap) ** 2, 1.0))


def ghz_closed_form(n: int, cardinality: int) -> float:
    """C(s) of the n-qubit GHZ state for any subset of the given cardinality."""
    if n < 1 or not 1 <= cardinality <= n:
        raise ValidationError(f"need 1 <= cardinality <= n, got c={cardinality}, n={n}")
    exponent = cardinality - (1 if cardinality == n else 0)
    return 0.5 * (1.0 - 0.5**exponent)


def w_closed_form(n: int, cardinality: int) -> float:
    """C(s) of the n-qubit W state for any subset of the given cardinality."""
    if n < 1 or not 1 <= cardinality <= n:
        raise ValidationError(f"need 1 <= cardinality <= n, got c={cardinality}, n={n}")
    return cardinality * (2 * n - cardinality - 1) / (2.0 * n * n)


def w_post_projection_ce(n: int, cardinality: int) -> tuple[float, float]:
    """(C(s) of the zero branch, quoted zero-branch probability) after
    measuring one qubit of the n-qubit W state in the computational basis.

    The zero branch is the (n-1)-qubit W state, so its C(s) is the W
    closed form one size down; the quoted branch probability is
    1 - 1/n^2. The directly simulated computational-basis probability of
    the zero outcome is (n-1)/n; both are reported by the verification
    tooling without asserting equality.
    """
    if n < 2:
        raise ValidationError(f"need n >= 2, got {n}")
    if not 1 <= cardinality <= n - 1:
        raise ValidationError(
            f"cardinality must address the surviving {n - 1} qubits, got {cardinality}"
        )
    value = cardinality * (2 * n - cardinality - 3) / (2.0 * (n - 1) ** 2)
    return value, 1.0 - 1.0 / (n * n)


def compare_ghz_w(n_max: int, cardinalities: list[int] | None = None) -> list[dict]:
    """Closed-form table of C_GHZ(s) - C_W(s) for n = 4..n_max.

    Default cardinalities per n are {1, 2, n//2, n-1, n} (deduplicated).
    Every difference is checked to be strictly positive.
    """
    if n_max < 4:
        raise ValidationError(f"need n_max >= 4, got {n_max}")
    rows = []
    for n in range(4, n_max + 1):
        cs = cardinalities if cardinalities is not None else [1, 2, n // 2, n - 1, n]
        for c in sorted({c for c in cs if 1 <= c <= n}):
            ghz = ghz_closed_form(n, c)
            w = w_closed_form(n, c)
            delta = ghz - w
            if delta <= 0.0:
                raise ConsistencyError(f"GHZ-W difference not positive at n={n}, c={c}")
            rows.append({"n": n, "cardinality": c, "ghz": ghz, "w": w, "delta": delta})
    return rows
