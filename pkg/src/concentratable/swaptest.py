"""Exact and sampled simulation of the parallelized SWAP test.

Two copies of an m-qubit state are held as one 4^m joint vector; copy-A
qubits come first, so copy-A qubit k sits on axis k and copy-B qubit k on
axis m+k of the (2,)*2m tensor view. Measuring the k-th control qubit in
|z> projects the joint vector with (1 + (-1)^z S_k)/2, where S_k swaps
qubit k between the copies, so no ancilla register is ever simulated on
the default path. The explicit ancilla+Fredkin circuit is kept as a
cross-checking oracle.

Outcome bitstrings are written with the lowest tested qubit label
leftmost, matching the package-wide "qubit 0 is the most significant bit"
convention; a bitstring and its table index are related by int(z, 2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetError, ConsistencyError, ValidationError
from .limits import (
    OUTCOME_ENUM_MAX_QUBITS,
    PURITY_DISTRIBUTION_MAX_QUBITS,
    max_sim_qubits,
)
from .reductions import purity_array
from .states import QubitSet, Statevector

PROB_CLAMP_FLOOR = -1e-12

#: The two-qubit singlet (|01> - |10>)/sqrt(2) produced on a |1> control.
SINGLET = np.array([0.0, 1.0, -1.0, 0.0], dtype=np.complex128) / np.sqrt(2.0)


@dataclass(frozen=True)
class JointState:
    """Vector on copy-A (x) copy-B, possibly shrunk by earlier projections."""

    n_qubits_per_copy: int
    amplitudes: np.ndarray

    def __post_init__(self):
        m = self.n_qubits_per_copy
        if m < 1:
            raise ValidationError(f"n_qubits_per_copy must be >= 1, got {m}")
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << (2 * m),):
            raise ValidationError(
                f"expected {1 << (2 * m)} joint amplitudes, got shape {amps.shape}"
            )
        if float(np.vdot(amps, amps).real) > 1.0 + 1e-10:
            raise ValidationError("joint state norm exceeds 1")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_copies(cls, psi: Statevector, psi_prime: Statevector) -> "JointState":
        if psi.n_qubits != psi_prime.n_qubits:
            raise ValidationError(
                f"copy sizes differ: {psi.n_qubits} vs {psi_prime.n_qubits}"
            )
        return cls(psi.n_qubits, np.kron(psi.amplitudes, psi_prime.amplitudes))

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


@dataclass(frozen=True)
class OutcomeDistribution:
    """Exact probabilities over control bitstrings of a SWAP test.

    Index bit (m-1-j) holds the outcome for the j-th smallest tested label,
    i.e. probabilities[int(z, 2)] is the probability of bitstring z.
    """

    tested: QubitSet
    probabilities: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probabilities, dtype=float)
        m = self.tested.cardinality
        if probs.shape != (1 << m,):
            raise ValidationError(f"expected {1 << m} probabilities, got {probs.shape}")
        low = float(probs.min())
        if low < PROB_CLAMP_FLOOR:
            raise ConsistencyError(
                f"probability {low} below {PROB_CLAMP_FLOOR}; projector logic is broken"
            )
        probs = np.where(probs < 0.0, 0.0, probs)
        total = float(probs.sum())
        if abs(total - 1.0) > 1e-10:
            raise ValidationError(f"probabilities sum to {total!r}, expected 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probabilities", probs)

    def bitstrings(self) -> list[str]:
        m = self.tested.cardinality
        return [format(i, f"0{m}b") for i in range(1 << m)]

    def probability(self, z: str) -> float:
        _check_bitstring(z, self.tested.cardinality)
        return float(self.probabilities[int(z, 2)])


@dataclass(frozen=True)
class ShotHistogram:
    """Empirical bitstring counts from sampled SWAP-test runs."""

    tested: QubitSet
    shots: int
    counts: dict[str, int]
    seed: int

    def __post_init__(self):
        if self.shots < 1:
            raise ValidationError(f"shots must be >= 1, got {self.shots}")
        m = self.tested.cardinality
        for z in self.counts:
            _check_bitstring(z, m)
        total = sum(self.counts.values())
        if total != self.shots:
            raise ValidationError(f"counts sum to {total}, expected {self.shots}")


@dataclass(frozen=True)
class MeasurementOutcome:
    """One probabilistic branch: (probability, normalized post-state)."""

    probability: float
    post_state: object  # Statevector for local operations, JointState for SWAP tests

    def __post_init__(self):
        if not -1e-12 <= self.probability <= 1.0 + 1e-10:
            raise ValidationError(f"branch probability {self.probability} out of [0, 1]")
        # Statevector normalizes at construction; JointState only bounds its norm.
        norm_squared = getattr(self.post_state, "norm_squared", None)
        if norm_squared is not None and abs(np.sqrt(norm_squared) - 1.0) > 1e-10:
            raise ValidationError(f"post state norm^2 is {norm_squared!r}, expected 1")


def _check_bitstring(z: str, length: int) -> None:
    if not isinstance(z, str) or len(z) != length or set(z) - {"0", "1"}:
        raise ValidationError(f"expected a {length}-bit string of 0/1, got {z!r}")


def _pair_view(amps: np.ndarray, m: int, k: int) -> np.ndarray:
    # Axes: (high, copy-A qubit k, middle, copy-B qubit k, low).
    return amps.reshape(1 << k, 2, 1 << (m - 1), 2, 1 << (m - 1 - k))


def _projected(amps: np.ndarray, m: int, k: int, z_bit: int) -> np.ndarray:
    """Apply (1 + (-1)^z S_k)/2 to a 4^m joint vector; returns a new array."""
    view = _pair_view(amps, m, k)
    if z_bit == 0:
        out = amps.copy()
        out_view = _pair_view(out, m, k)
        symmetric = 0.5 * (view[:, 0, :, 1] + view[:, 1, :, 0])
        out_view[:, 0, :, 1] = symmetric
        out_view[:, 1, :, 0] = symmetric
    else:
        out = np.zeros_like(amps)
        out_view = _pair_view(out, m, k)
        antisymmetric = 0.5 * (view[:, 0, :, 1] - view[:, 1, :, 0])
        out_view[:, 0, :, 1] = antisymmetric
        out_view[:, 1, :, 0] = -antisymmetric
    return out


def apply_controlled_projector(joint: JointState, qubit: int, z_bit: int) -> JointState:
    """Project the joint state on control outcome ``z_bit`` for one tested qubit."""
    m = joint.n_qubits_per_copy
    if not 0 <= qubit < m:
        raise ValidationError(f"qubit {qubit} out of range for {m} qubits per copy")
    if z_bit not in (0, 1):
        raise ValidationError(f"z_bit must be 0 or 1, got {z_bit}")
    return JointState(m, _projected(joint.amplitudes, m, qubit, z_bit))


def _check_joint_budget(n_qubits: int) -> None:
    cap = max_sim_qubits()
    if 2 * n_qubits > cap:
        raise BudgetError(
            f"two {n_qubits}-qubit copies need {2 * n_qubits} simulated qubits "
            f"(cap {cap}; override with CE_MAX_QUBITS)"
        )


def _require_same_size(psi: Statevector, psi_prime: Statevector, tested: QubitSet) -> None:
    if psi.n_qubits != psi_prime.n_qubits:
        raise ValidationError(
            f"copy sizes differ: {psi.n_qubits} vs {psi_prime.n_qubits}"
        )
    if tested.n_qubits != psi.n_qubits:
        raise ValidationError(
            f"tested set is over {tested.n_qubits} qubits, state has {psi.n_qubits}"
        )


def _require_tested_nonempty(tested: QubitSet) -> None:
    if tested.cardinality == 0:
        raise ValidationError("no tested qubits: the control register would be empty")


def _leaf_norms(
    amps: np.ndarray,
    m: int,
    labels: tuple[int, ...],
    depth: int,
    prefix: int,
    out: np.ndarray,
) -> None:
    if depth == len(labels):
        out[prefix] = float(np.vdot(amps, amps).real)
        return
    k = labels[depth]
    if depth == len(labels) - 1:
        # Both leaf norms follow from the quarter blocks; skip materializing
        # the projected vectors. The (0,0)/(1,1) blocks pass through the
        # symmetric projector unchanged and are killed by the antisymmetric one.
        view = _pair_view(amps, m, k)
        symmetric = 0.5 * (view[:, 0, :, 1] + view[:, 1, :, 0])
        antisymmetric = 0.5 * (view[:, 0, :, 1] - view[:, 1, :, 0])
        unchanged = (
            float(np.vdot(view[:, 0, :, 0], view[:, 0, :, 0]).real)
            + float(np.vdot(view[:, 1, :, 1], view[:, 1, :, 1]).real)
        )
        out[prefix << 1] = unchanged + 2.0 * float(np.vdot(symmetric, symmetric).real)
        out[(prefix << 1) | 1] = 2.0 * float(np.vdot(antisymmetric, antisymmetric).real)
        return
    _leaf_norms(_projected(amps, m, k, 0), m, labels, depth + 1, prefix << 1, out)
    _leaf_norms(_projected(amps, m, k, 1), m, labels, depth + 1, (prefix << 1) | 1, out)


def exact_distribution(
    psi: Statevector, psi_prime: Statevector, tested: QubitSet
) -> OutcomeDistribution:
    """Exact control-register distribution of the parallelized SWAP test.

    One projector pair per tested qubit is applied along a depth-first
    branch tree, so prefixes are shared across the 2^m outcomes.
    """
    _require_same_size(psi, psi_prime, tested)
    _require_tested_nonempty(tested)
    m_tested = tested.cardinality
    if m_tested > OUTCOME_ENUM_MAX_QUBITS:
        raise BudgetError(
            f"{1 << m_tested} outcomes for {m_tested} tested qubits "
            f"(cap {OUTCOME_ENUM_MAX_QUBITS})"
        )
    _check_joint_budget(psi.n_qubits)
    joint = np.kron(psi.amplitudes, psi_prime.amplitudes)
    probs = np.empty(1 << m_tested)
    _leaf_norms(joint, psi.n_qubits, tested.labels(), 0, 0, probs)
    return OutcomeDistribution(tested, probs)


def outcome_probability(psi: Statevector, psi_prime: Statevector, z: str) -> float:
    """Probability of one full-register control bitstring, via the projector chain."""
    tested = QubitSet.full(psi.n_qubits)
    _require_same_size(psi, psi_prime, tested)
    _check_bitstring(z, psi.n_qubits)
    _check_joint_budget(psi.n_qubits)
    amps = np.kron(psi.amplitudes, psi_prime.amplitudes)
    for k in range(psi.n_qubits):
        amps = _projected(amps, psi.n_qubits, k, int(z[k]))
    return float(np.vdot(amps, amps).real)


def zero_outcome_probability(
    psi: Statevector, psi_prime: Statevector, tested: QubitSet
) -> float:
    """Probability of the all-zero outcome of a SWAP test on ``tested`` only."""
    _require_same_size(psi, psi_prime, tested)
    _check_joint_budget(psi.n_qubits)
    amps = np.kron(psi.amplitudes, psi_prime.amplitudes)
    for k in tested.labels():
        amps = _projected(amps, psi.n_qubits, k, 0)
    return float(np.vdot(amps, amps).real)


def _parity(masks: np.ndarray) -> np.ndarray:
    """Popcount parity (0 or 1) of each entry of an integer array."""
    x = masks.copy()
    for shift in (16, 8, 4, 2, 1):
        x ^= x >> shift
    return x & 1


def _fwht(values: np.ndarray) -> np.ndarray:
    """b[z] = sum_x (-1)^{popcount(z & x)} a[x] via the Walsh butterfly."""
    a = np.array(values, dtype=float)
    h = 1
    while h < len(a):
        a = a.reshape(-1, 2 * h)
        left = a[:, :h].copy()
        a[:, :h] = left + a[:, h:]
        a[:, h:] = left - a[:, h:]
        a = a.reshape(-1)
        h *= 2
    return a


def distribution_via_purities(psi: Statevector, z: str) -> float:
    """p(z) for identical copies, from the signed sum of all 2^n subset purities.

    Each subset x contributes Tr[rho_x^2] with the parity of |S1 & x| as its
    sign, S1 being the set of labels where z is 1. Independent of the
    projector-chain route.
    """
    n = psi.n_qubits
    _check_bitstring(z, n)
    if n > PURITY_DISTRIBUTION_MAX_QUBITS:
        raise BudgetError(
            f"{1 << n} purity terms for n={n} (cap {PURITY_DISTRIBUTION_MAX_QUBITS})"
        )
    ones_mask = sum(1 << k for k in range(n) if z[k] == "1")
    table = purity_array(psi)
    signs = 1.0 - 2.0 * _parity(np.arange(1 << n) & ones_mask)
    value = float(signs @ table) / (1 << n)
    if value < PROB_CLAMP_FLOOR:
        raise ConsistencyError(f"purity-route probability {value} below {PROB_CLAMP_FLOOR}")
    return max(value, 0.0)


def full_distribution_via_purities(psi: Statevector) -> OutcomeDistribution:
    """Full-register distribution from one purity table and a Walsh transform."""
    n = psi.n_qubits
    if n > PURITY_DISTRIBUTION_MAX_QUBITS:
        raise BudgetError(
            f"{1 << n} purity terms for n={n} (cap {PURITY_DISTRIBUTION_MAX_QUBITS})"
        )
    by_label_mask = _fwht(purity_array(psi)) / (1 << n)
    # Label mask (bit k = qubit k) -> table index (qubit 0 most significant).
    probs = np.empty_like(by_label_mask)
    for mask in range(1 << n):
        index = int(format(mask, f"0{n}b")[::-1], 2)
        probs[index] = by_label_mask[mask]
    return OutcomeDistribution(QubitSet.full(n), probs)


def sample(
    psi: Statevector,
    psi_prime: Statevector,
    tested: QubitSet,
    shots: int,
    seed: int,
) -> ShotHistogram:
    """Sampled SWAP-test runs, one bit per tested qubit per shot.

    Each shot walks the tested qubits in ascending label order, drawing the
    control bit from the two projected-branch norms conditioned on the bits
    already fixed. Branch norms are precomputed once (they are shot
    independent); the per-shot randomness comes from a dedicated generator
    seeded with (seed, shot index), so histograms do not depend on how
    shots might be batched or threaded.
    """
    if shots < 1:
        raise ValidationError(f"shots must be >= 1, got {shots}")
    dist = exact_distribution(psi, psi_prime, tested)
    m = tested.cardinality
    # masses[d][i] is the joint norm^2 after fixing the first d control bits to i.
    masses = [dist.probabilities]
    while len(masses[-1]) > 1:
        masses.append(masses[-1].reshape(-1, 2).sum(axis=1))
    masses.reverse()
    counts: dict[int, int] = {}
    for shot in range(shots):
        rng = np.random.default_rng((seed, shot))
        uniforms = rng.random(m)
        node = 0
        for depth in range(m):
            p_zero = masses[depth + 1][2 * node] / masses[depth][node]
            node = 2 * node + (0 if uniforms[depth] < p_zero else 1)
        counts[node] = counts.get(node, 0) + 1
    labelled = {format(i, f"0{m}b"): c for i, c in sorted(counts.items())}
    return ShotHistogram(tested, shots, labelled, seed)


def post_measurement(psi: Statevector, psi_prime: Statevector, z: str) -> MeasurementOutcome:
    """Normalized joint state after observing control bitstring ``z``, plus p(z).

    Wherever z has a 1, the corresponding pair of copy qubits lands in the
    singlet (|01> - |10>)/sqrt(2).
    """
    n = psi.n_qubits
    tested = QubitSet.full(n)
    _require_same_size(psi, psi_prime, tested)
    _check_bitstring(z, n)
    _check_joint_budget(n)
    amps = np.kron(psi.amplitudes, psi_prime.amplitudes)
    for k in range(n):
        amps = _projected(amps, n, k, int(z[k]))
    probability = float(np.vdot(amps, amps).real)
    if probability <= 1e-12:
        raise ValidationError(f"outcome {z!r} has probability {probability}; cannot condition on it")
    post = JointState(n, amps / np.sqrt(probability))
    return MeasurementOutcome(probability, post)


def pair_marginal(joint: JointState, qubit: int) -> np.ndarray:
    """4x4 reduced density matrix of (copy-A qubit k, copy-B qubit k)."""
    m = joint.n_qubits_per_copy
    if not 0 <= qubit < m:
        raise ValidationError(f"qubit {qubit} out of range for {m} qubits per copy")
    norm = np.sqrt(joint.norm_squared)
    if norm <= 0.0:
        raise ValidationError("cannot take marginals of a zero vector")
    tensor = (joint.amplitudes / norm).reshape((2,) * (2 * m))
    tensor = np.moveaxis(tensor, (qubit, m + qubit), (0, 1))
    matrix = tensor.reshape(4, -1)
    return matrix @ matrix.conj().T


def singlet_fidelity(pair_density: np.ndarray) -> float:
    """Overlap of a two-qubit density matrix with the singlet state."""
    return float(np.vdot(SINGLET, pair_density @ SINGLET).real)


# ---------------------------------------------------------------------------
# Explicit-circuit oracle: ancillas, Hadamards, and Fredkin gates.

_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / np.sqrt(2.0)


def _apply_single_qubit(state: np.ndarray, n_total: int, qubit: int, gate: np.ndarray) -> np.ndarray:
    tensor = state.reshape((2,) * n_total)
    tensor = np.moveaxis(np.tensordot(gate, tensor, axes=([1], [qubit])), 0, qubit)
    return tensor.reshape(-1)


def _apply_fredkin(state: np.ndarray, n_total: int, control: int, a: int, b: int) -> np.ndarray:
    pos_c = n_total - 1 - control
    pos_a = n_total - 1 - a
    pos_b = n_total - 1 - b
    idx = np.arange(1 << n_total)
    differ = ((idx >> pos_a) ^ (idx >> pos_b)) & 1
    swapped = idx ^ ((differ << pos_a) | (differ << pos_b))
    source = np.where((idx >> pos_c) & 1 == 1, swapped, idx)
    return state[source]


def full_circuit_oracle(
    psi: Statevector, psi_prime: Statevector, tested: QubitSet
) -> OutcomeDistribution:
    """Simulate the literal test circuit: |0> ancillas, H, Fredkins, H, measure.

    Builds the (m' + 2m)-qubit register with one ancilla per tested qubit
    and returns the exact ancilla marginal distribution. Slow but direct;
    used to cross-check the projector route.
    """
    _require_same_size(psi, psi_prime, tested)
    _require_tested_nonempty(tested)
    labels = tested.labels()
    m = psi.n_qubits
    m_tested = len(labels)
    n_total = m_tested + 2 * m
    cap = max_sim_qubits()
    if n_total > cap:
        raise BudgetError(
            f"circuit oracle needs {n_total} simulated qubits "
            f"(cap {cap}; override with CE_MAX_QUBITS)"
        )
    state = np.zeros(1 << n_total, dtype=np.complex128)
    state[: 1 << (2 * m)] = np.kron(psi.amplitudes, psi_prime.amplitudes)
    for j in range(m_tested):
        state = _apply_single_qubit(state, n_total, j, _HADAMARD)
    for j, t in enumerate(labels):
        state = _apply_fredkin(state, n_total, j, m_tested + t, m_tested + m + t)
    for j in range(m_tested):
        state = _apply_single_qubit(state, n_total, j, _HADAMARD)
    weights = np.abs(state.reshape((2,) * n_total)) ** 2
    probs = weights.sum(axis=tuple(range(m_tested, n_total))).reshape(-1)
    return OutcomeDistribution(tested, probs)


# ---------------------------------------------------------------------------
# JSON forms.


def distribution_to_dict(dist: OutcomeDistribution) -> dict:
    return {
        "tested_mask": dist.tested.mask,
        "entries": [
            {"z": z, "p_or_count": float(p)}
            for z, p in zip(dist.bitstrings(), dist.probabilities)
        ],
    }


def distribution_from_dict(data: dict, n_qubits: int) -> OutcomeDistribution:
    try:
        tested = QubitSet(n_qubits, int(data["tested_mask"]))
        entries = {e["z"]: float(e["p_or_count"]) for e in data["entries"]}
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed distribution record: {exc}") from exc
    m = tested.cardinality
    probs = np.zeros(1 << m)
    for z, p in entries.items():
        _check_bitstring(z, m)
        probs[int(z, 2)] = p
    return OutcomeDistribution(tested, probs)


def histogram_to_dict(hist: ShotHistogram) -> dict:
    return {
        "tested_mask": hist.tested.mask,
        "shots": hist.shots,
        "seed": hist.seed,
        "entries": [
            {"z": z, "p_or_count": int(c)} for z, c in sorted(hist.counts.items())
        ],
    }


def histogram_from_dict(data: dict, n_qubits: int) -> ShotHistogram:
    try:
        tested = QubitSet(n_qubits, int(data["tested_mask"]))
        counts = {e["z"]: int(e["p_or_count"]) for e in data["entries"]}
        shots = int(data["shots"])
        seed = int(data["seed"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed histogram record: {exc}") from exc
    return ShotHistogram(tested, shots, counts, seed)
