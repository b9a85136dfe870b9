"""Batch numerical verification of the measure's claimed properties.

Each check runs seeded random trials, records the worst violation seen and
a witness (the trial parameters that produced it), and passes iff the
violation stays within the property's tolerance. The CLI ``verify``
command runs the whole registry; the acceptance tests reuse the same
functions with their own trial counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measures import (
    ce_distribution,
    ce_even_weight,
    ce_purity,
    ce_two_state,
    ghz_closed_form,
    n_tangle,
    w_closed_form,
    w_post_projection_ce,
)
from .oracle import LocalKrausPair, apply_local_kraus, random_local_kraus
from .reductions import purity
from .states import (
    QubitSet,
    Statevector,
    make_ghz,
    make_haar_random,
    make_w,
    perturb,
    trace_distance_pure,
)
from .swaptest import (
    exact_distribution,
    distribution_via_purities,
    outcome_probability,
    pair_marginal,
    post_measurement,
    sample,
    singlet_fidelity,
)


@dataclass
class PropertyReport:
    name: str
    trials: int
    max_violation: float
    tolerance: float
    passed: bool
    witness: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "max_violation": self.max_violation,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "witness": self.witness,
        }


class _Worst:
    """Tracks the largest violation and the trial that produced it."""

    def __init__(self):
        self.value = -np.inf
        self.witness = ""

    def update(self, violation: float, witness: str) -> None:
        if violation > self.value:
            self.value = violation
            self.witness = witness


def _state_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**32))


def _nonempty_mask(rng: np.random.Generator, n: int) -> int:
    return int(rng.integers(1, 1 << n))


def check_route_agreement(trials=100, n_values=(2, 3, 4, 5, 6), seed=101, tolerance=1e-9):
    """ce_purity, ce_distribution and ce_even_weight agree on random states."""
    rng = np.random.default_rng(seed)
    worst = _Worst()
    per_n = max(1, trials // len(n_values))
    count = 0
    for n in n_values:
        for _ in range(per_n):
            state_seed = _state_seed(rng)
            psi = make_haar_random(n, state_seed)
            s = QubitSet(n, _nonempty_mask(rng, n))
            a = ce_purity(psi, s).value
            b = ce_distribution(psi, s).value
            c = ce_even_weight(psi, s).value
            worst.update(
                max(abs(a - b), abs(a - c)),
                f"n={n} state_seed={state_seed} mask={s.mask:#b}",
            )
            count += 1
    return PropertyReport(
        "route-agreement", count, worst.value, tolerance, worst.value <= tolerance, worst.witness
    )


def check_odd_weight_zero(trials=50, n_values=(2, 3, 4, 5, 6), seed=202, tolerance=1e-10):
    """Odd-weight control bitstrings never occur for identical copies."""
    rng = np.random.default_rng(seed)
    worst = _Worst()
    per_n = max(1, trials // len(n_values))
    count = 0
    for n in n_values:
        indices = np.arange(1 << n)
        odd = np.array([bool(int(i).bit_count() & 1) for i in indices])
        for _ in range(per_n):
            state_seed = _state_seed(rng)
            psi = make_haar_random(n, state_seed)
            dist = exact_distribution(psi, psi, QubitSet.full(n))
            worst.update(
                float(dist.probabilities[odd].max()),
                f"n={n} state_seed={state_seed} route=projector",
            )
            z_mask = _nonempty_mask(rng, n)
            if z_mask.bit_count() % 2 == 0:
                z_mask ^= 1 << int(rng.integers(0, n))
            z = "".join("1" if z_mask >> k & 1 else "0" for k in range(n))
            worst.update(
                distribution_via_purities(psi, z),
                f"n={n} state_seed={state_seed} z={z} route=purities",
            )
            count += 1
    return PropertyReport(
        "odd-weight-zero", count, worst.value, tolerance, worst.value <= tolerance, worst.witness
    )


def check_biseparable_zero(trials=50, n_values=(2, 3, 4, 5, 6), seed=303, tolerance=1e-10):
    """Weight-2 outcomes straddling a product cut have zero probability."""
    rng = np.random.default_rng(seed)
    worst = _Worst()
    count = 0
    for _ in range(trials):
        n = int(rng.choice(n_values))
        cut = int(rng.integers(1, n)) if n > 1 else 1
        seed_a, seed_b = _state_seed(rng), _state_seed(rng)
        left = make_haar_random(cut, seed_a)
        right = make_haar_random(n - cut, seed_b)
        psi = Statevector(n, np.kron(left.amplitudes, right.amplitudes))
        for k in range(cut):
            for k_prime in range(cut, n):
                z = "".join("1" if j in (k, k_prime) else "0" for j in range(n))
                worst.update(
                    outcome_probability(psi, psi, z),
                    f"n={n} cut={cut} seeds=({seed_a},{seed_b}) z={z}",
                )
        count += 1
    return PropertyReport(
        "bi-separable-zero", count, worst.value, tolerance, worst.value <= tolerance, worst.witness
    )


def check_tangle_identity(trials=40, n_values=(2, 4, 6), seed=404, tolerance=1e-9):
    """For even n, the all-ones outcome carries the n-tangle: 2^n p(1...1) = tau."""
    rng = np.random.default_rng(seed)
    worst = _Worst()
    per_n = max(1, trials // len(n_values))
    count = 0
    for n in n_values:
        for _ in range(per_n):
            state_seed = _state_seed(rng)
            psi = make_haar_random(n, state_seed)
            p_ones = outcome_probability(psi, psi, "1" * n)
            worst.update(
                abs((1 << n) * p_ones - n_tangle(psi)),
                f"n={n} state_seed={state_seed}",
            )
            count += 1
    return PropertyReport(
        "tangle-identity", count, worst.value, tolerance, worst.value <= tolerance, worst.witness
    )


def check_singlet_projection(trials=100, n_values=(2, 3, 4), seed=505, tolerance=1e-9):
    """Every |1> control leaves its copy-qubit pair in the singlet state."""
    rng = np.random.default_rng(seed)
    worst = _Worst()
    count = 0
    pairs_seen = 0
    while count < trials:
        n = int(rng.choice(n_values))
        state_seed = _state_seed(rng)
        shot_seed = _state_seed(rng)
        psi = make_haar_random(n, state_seed)
        hist = sample(psi, psi, QubitSet.full(n), 1, shot_seed)
        (z,) = hist.counts
        count += 1
        if "1" not in z:
            continue
        outcome = post_measurement(psi, psi, z)
        for k, bit in enumerate(z):
            if bit != "1":
                continue
            fidelity = singlet_fidelity(pair_marginal(outcome.post_state, k))
            pairs_seen += 1
            worst.update(
                1.0 - fidelity,
                f"n={n} state_seed={state_seed} shot_seed={shot_seed} z={z} k={k}",
            )
    if pairs_seen == 0:
        return PropertyReport("singlet-projection", count, np.inf, tolerance, False, "no |1> outcomes sampled")
    return PropertyReport(
        "singlet-projection", count, worst.value, tolerance, worst.value <= tolerance, worst.witness
    )


def check_ce_locc_monotonicity(trials=200, n_values=(2, 3, 4, 5), seed=606, tolerance=1e-9):
    """Average C(s) over the branches of a random local measurement never grows."""
    rng = np.random.default_rng(seed)
    worst = _Worst()
    for trial in range(trials):
        n = int(rng.choice(n_values))
        state_seed = _state_seed(rng)
        kraus_seed = _state_seed(rng)
        qubit = int(rng.integers(0, n))
        psi = make_haar_random(n, state_seed)
        s = QubitSet(n, _nonempty_mask(rng, n))
        before = ce_purity(psi, s).value
        averaged = sum(
            b.probability * ce_purity(b.post_state, s).value
            for b in apply_local_kraus(psi, random_local_kraus(kraus_seed, qubit))
        )
        worst.update(
            averaged - before,
            f"n={n} state_seed={state_seed} kraus_seed={kraus_seed} qubit={qubit} mask={s.mask:#b}",
        )
    return PropertyReport(
        "ce-locc-monotonicity", trials, worst.value, tolerance, worst.value <= tolerance, worst.witness
    )


def check_purity_locc_monotonicity(trials=200, n_values=(2, 3, 4, 5), seed=707, tolerance=1e-9):
    """Average local purities never drop under a random local measurement."""
    rng = np.random.default_rng(seed)
    worst = _Worst()
    for trial in range(trials):
        n = int(rng.choice(n_values))
        state_seed = _state_seed(rng)
        kraus_seed = _state_seed(rng)
        qubit = int(rng.integers(0, n))
        psi = make_haar_random(n, state_seed)
        branches = apply_local_kraus(psi, random_local_kraus(kraus_seed, qubit))
        for mask in range(1 << n):
            alpha = QubitSet(n, mask)
            averaged = sum(b.probability * purity(b.post_state, alpha) for b in branches)
            worst.update(
                purity(psi, alpha) - averaged,
                f"n={n} state_seed={state_seed} kraus_seed={kraus_seed} qubit={qubit} alpha={mask:#b}",
            )
    return PropertyReport(
        "purity-locc-monotonicity", trials, worst.value, tolerance, worst.value <= tolerance, worst.witness
    )


def check_nested_monotonicity(trials=200, n_values=(2, 3, 4, 5, 6), seed=808, tolerance=1e-10):
    """C(s') <= C(s) whenever s' is a subset of s."""
    rng = np.random.default_rng(seed)
    worst = _Worst()
    for _ in range(trials):
        n = int(rng.choice(n_values))
        state_seed = _state_seed(rng)
        psi = make_haar_random(n, state_seed)
        outer_mask = _nonempty_mask(rng, n)
        labels = [k for k in range(n) if outer_mask >> k & 1]
        keep = rng.random(len(labels)) < 0.5
        inner_mask = sum(1 << l for l, k in zip(labels, keep) if k)
        if inner_mask == 0:
            inner_mask = 1 << labels[int(rng.integers(0, len(labels)))]
        inner = ce_purity(psi, QubitSet(n, inner_mask)).value
        outer = ce_purity(psi, QubitSet(n, outer_mask)).value
        worst.update(
            inner - outer,
            f"n={n} state_seed={state_seed} inner={inner_mask:#b} outer={outer_mask:#b}",
        )
    return PropertyReport(
        "nested-monotonicity", trials, worst.value, tolerance, worst.value <= tolerance, worst.witness
    )


def check_subadditivity(trials=200, n_values=(2, 3, 4, 5, 6), seed=909, tolerance=1e-10):
    """max(C(s), C(s')) <= C(s u s') <= C(s) + C(s') for disjoint s, s'."""
    rng = np.random.default_rng(seed)
    worst = _Worst()
    for _ in range(trials):
        n = int(rng.choice([v for v in n_values if v >= 2]))
        state_seed = _state_seed(rng)
        psi = make_haar_random(n, state_seed)
        first = _nonempty_mask(rng, n)
        while first == (1 << n) - 1:
            first = _nonempty_mask(rng, n)
        complement_labels = [k for k in range(n) if not first >> k & 1]
        keep = rng.random(len(complement_labels)) < 0.5
        second = sum(1 << l for l, k in zip(complement_labels, keep) if k)
        if second == 0:
            second = 1 << complement_labels[int(rng.integers(0, len(complement_labels)))]
        c_first = ce_purity(psi, QubitSet(n, first)).value
        c_second = ce_purity(psi, QubitSet(n, second)).value
        c_union = ce_purity(psi, QubitSet(n, first | second)).value
        witness = f"n={n} state_seed={state_seed} s={first:#b} s'={second:#b}"
        worst.update(c_union - c_first - c_second, witness)
        worst.update(max(c_first, c_second) - c_union, witness)
    return PropertyReport(
        "subadditivity", trials, worst.value, tolerance, worst.value <= tolerance, worst.witness
    )


def check_continuity(trials=200, n_values=(2, 3, 4, 5), seed=1010, tolerance=1e-9):
    """|C(psi) - C(phi)| <= 2 * ||psi psi+ - phi phi+||_1 on perturbed pairs."""
    rng = np.random.default_rng(seed)
    worst = _Worst()
    for _ in range(trials):
        n = int(rng.choice(n_values))
        state_seed = _state_seed(rng)
        epsilon = float(rng.uniform(1e-4, 0.9))
        psi = make_haar_random(n, state_seed)
        phi = perturb(psi, epsilon)
        s = QubitSet(n, _nonempty_mask(rng, n))
        gap = abs(ce_purity(psi, s).value - ce_purity(phi, s).value)
        one_norm = 2.0 * trace_distance_pure(psi, phi)
        worst.update(
            gap - 2.0 * one_norm,
            f"n={n} state_seed={state_seed} eps={epsilon:.6f} mask={s.mask:#b}",
        )
    return PropertyReport(
        "continuity", trials, worst.value, tolerance, worst.value <= tolerance, worst.witness
    )


def check_error_bound(
    trials=600, epsilons=(0.1, 0.001, 0.0001), n=3, seed=1111, tolerance=1e-9
):
    """Unequal copies: 0 <= [C_xy - C_x] + [C_xy - C_y] < 4 eps^2 on every pair."""
    rng = np.random.default_rng(seed)
    worst = _Worst()
    s = QubitSet.full(n)
    per_eps = max(1, trials // len(epsilons))
    count = 0
    strict_ok = True
    for epsilon in epsilons:
        for _ in range(per_eps):
            state_seed = _state_seed(rng)
            psi = make_haar_random(n, state_seed)
            psi_prime = perturb(psi, epsilon)
            cross = ce_two_state(psi, psi_prime, s)
            excess = (cross - ce_purity(psi, s).value) + (
                cross - ce_purity(psi_prime, s).value
            )
            witness = f"n={n} state_seed={state_seed} eps={epsilon}"
            worst.update(-excess, witness)
            if excess >= 4.0 * epsilon * epsilon:
                strict_ok = False
                worst.update(excess - 4.0 * epsilon * epsilon + tolerance, witness)
            count += 1
    passed = strict_ok and worst.value <= tolerance
    return PropertyReport("error-bound", count, worst.value, tolerance, passed, worst.witness)


def check_closed_forms(n_max=8, seed=1212, tolerance=1e-10):
    """GHZ and W values match their closed forms for every cardinality."""
    rng = np.random.default_rng(seed)
    worst = _Worst()
    count = 0
    for n in range(2, n_max + 1):
        ghz = make_ghz(n)
        w = make_w(n)
        for cardinality in range(1, n + 1):
            labels = rng.permutation(n)[:cardinality]
            s = QubitSet.from_labels(n, (int(l) for l in labels))
            worst.update(
                abs(ce_purity(ghz, s).value - ghz_closed_form(n, cardinality)),
                f"ghz n={n} mask={s.mask:#b}",
            )
            worst.update(
                abs(ce_purity(w, s).value - w_closed_form(n, cardinality)),
                f"w n={n} mask={s.mask:#b}",
            )
            count += 1
    return PropertyReport(
        "closed-forms", count, worst.value, tolerance, worst.value <= tolerance, worst.witness
    )


def _projective_pair(qubit: int) -> LocalKrausPair:
    return LocalKrausPair(
        qubit,
        np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex),
        np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex),
    )


def check_w_projection(n_values=(3, 4, 5, 6), seed=1313, tolerance=1e-10):
    """Measuring one W-state qubit leaves a W state one size down (zero branch)
    with the advertised residual entanglement; GHZ loses everything either way."""
    worst = _Worst()
    count = 0
    for n in n_values:
        w = make_w(n)
        branches = apply_local_kraus(w, _projective_pair(n - 1))
        zero_branch = branches[0].post_state
        for cardinality in range(1, n - 1 + 1):
            expected, _quoted_prob = w_post_projection_ce(n, cardinality)
            s = QubitSet.from_labels(n, range(cardinality))
            worst.update(
                abs(ce_purity(zero_branch, s).value - expected),
                f"w n={n} c={cardinality} branch=0",
            )
            count += 1
        one_branch = branches[1].post_state
        worst.update(
            ce_purity(one_branch, QubitSet.full(n)).value, f"w n={n} branch=1"
        )
        ghz = make_ghz(n)
        for branch in apply_local_kraus(ghz, _projective_pair(n - 1)):
            worst.update(
                ce_purity(branch.post_state, QubitSet.full(n)).value,
                f"ghz n={n}",
            )
            count += 1
    return PropertyReport(
        "w-projection", count, worst.value, tolerance, worst.value <= tolerance, worst.witness
    )


CHECKS = {
    "route-agreement": check_route_agreement,
    "odd-weight-zero": check_odd_weight_zero,
    "bi-separable-zero": check_biseparable_zero,
    "tangle-identity": check_tangle_identity,
    "singlet-projection": check_singlet_projection,
    "ce-locc-monotonicity": check_ce_locc_monotonicity,
    "purity-locc-monotonicity": check_purity_locc_monotonicity,
    "nested-monotonicity": check_nested_monotonicity,
    "subadditivity": check_subadditivity,
    "continuity": check_continuity,
    "error-bound": check_error_bound,
    "closed-forms": check_closed_forms,
    "w-projection": check_w_projection,
}


def run_suite(
    trials: int = 200,
    seed: int = 2024,
    n_max: int = 6,
    epsilons: tuple[float, ...] = (0.1, 0.001, 0.0001),
    properties: list[str] | None = None,
) -> list[PropertyReport]:
    """Run the selected (default: all) property checks with shared settings."""
    names = properties if properties is not None else list(CHECKS)
    unknown = set(names) - set(CHECKS)
    if unknown:
        raise ValueError(f"unknown properties: {sorted(unknown)}")
    small = tuple(v for v in (2, 3, 4, 5, 6) if v <= n_max)
    even = tuple(v for v in (2, 4, 6, 8) if v <= max(n_max, 2))
    reports = []
    for name in names:
        check = CHECKS[name]
        if name == "error-bound":
            reports.append(check(trials=trials, epsilons=epsilons, seed=seed))
        elif name == "closed-forms":
            reports.append(check(n_max=max(n_max, 4), seed=seed))
        elif name == "w-projection":
            reports.append(check(n_values=tuple(v for v in (3, 4, 5, 6) if v <= max(n_max, 3)), seed=seed))
        elif name == "tangle-identity":
            reports.append(check(trials=trials, n_values=even, seed=seed))
        elif name == "singlet-projection":
            reports.append(check(trials=trials, n_values=tuple(v for v in (2, 3, 4) if v <= n_max), seed=seed))
        elif name in ("ce-locc-monotonicity", "purity-locc-monotonicity", "continuity"):
            reports.append(check(trials=trials, n_values=tuple(v for v in small if v <= 5), seed=seed))
        else:
            reports.append(check(trials=trials, n_values=small, seed=seed))
    return reports
