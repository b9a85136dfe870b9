"""n-qubit pure states as dense complex amplitude vectors.

Index convention, used everywhere in this package: qubit k (0-based)
occupies bit (n - 1 - k) of the amplitude index, so qubit 0 is the most
significant bit and basis state |q0 q1 ... q_{n-1}> sits at index
int("q0 q1 ... q_{n-1}", 2). Reshaping amplitudes to shape (2,)*n puts
qubit k on axis k.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

NORM_ATOL = 1e-10


def _frozen_amplitudes(values, dim: int) -> np.ndarray:
    amps = np.asarray(values, dtype=np.complex128)
    if amps.shape != (dim,):
        raise ValidationError(f"expected {dim} amplitudes, got shape {amps.shape}")
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) > NORM_ATOL:
        raise ValidationError(f"state norm {norm!r} deviates from 1 by more than {NORM_ATOL}")
    amps = amps.copy()
    amps.setflags(write=False)
    return amps


@dataclass(frozen=True)
class Statevector:
    """Normalized amplitude vector of an n-qubit pure state. Immutable."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValidationError(f"n_qubits must be >= 1, got {self.n_qubits}")
        object.__setattr__(
            self, "amplitudes", _frozen_amplitudes(self.amplitudes, 1 << self.n_qubits)
        )

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def tensor(self) -> np.ndarray:
        """View of the amplitudes with shape (2,)*n; axis k is qubit k."""
        return self.amplitudes.reshape((2,) * self.n_qubits)


@dataclass(frozen=True)
class QubitSet:
    """Subset of the qubit labels {0, ..., n-1}, stored as a bitmask.

    Bit k of ``mask`` is set iff qubit k belongs to the subset. Note the
    mask is over labels, not over amplitude-index bit positions.
    """

    n_qubits: int
    mask: int

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValidationError(f"n_qubits must be >= 1, got {self.n_qubits}")
        if not 0 <= self.mask < (1 << self.n_qubits):
            raise ValidationError(
                f"mask {self.mask:#b} out of range for {self.n_qubits} qubits"
            )

    @classmethod
    def from_labels(cls, n_qubits: int, labels: Iterable[int]) -> "QubitSet":
        mask = 0
        for label in labels:
            if not 0 <= label < n_qubits:
                raise ValidationError(f"qubit label {label} out of range for n={n_qubits}")
            mask |= 1 << label
        return cls(n_qubits, mask)

    @classmethod
    def full(cls, n_qubits: int) -> "QubitSet":
        return cls(n_qubits, (1 << n_qubits) - 1)

    @property
    def cardinality(self) -> int:
        return self.mask.bit_count()

    def labels(self) -> tuple[int, ...]:
        return tuple(k for k in range(self.n_qubits) if self.mask >> k & 1)

    def complement(self) -> "QubitSet":
        return QubitSet(self.n_qubits, self.mask ^ ((1 << self.n_qubits) - 1))

    def __contains__(self, label: int) -> bool:
        return 0 <= label < self.n_qubits and bool(self.mask >> label & 1)


def make_product(single_qubit_states: Sequence[tuple[complex, complex]]) -> Statevector:
    """Tensor product of single-qubit states, each given as (amp0, amp1)."""
    if not single_qubit_states:
        raise ValidationError("need at least one single-qubit factor")
    amps = np.ones(1, dtype=np.complex128)
    for j, pair in enumerate(single_qubit_states):
        factor = np.asarray(pair, dtype=np.complex128)
        if factor.shape != (2,):
            raise ValidationError(f"factor {j} is not a single-qubit pair")
        if abs(np.linalg.norm(factor) - 1.0) > NORM_ATOL:
            raise ValidationError(f"factor {j} is not normalized")
        amps = np.kron(amps, factor)
    return Statevector(len(single_qubit_states), amps)


def make_ghz(n: int) -> Statevector:
    """(|0...0> + |1...1>)/sqrt(2); for n=1 this is |+>."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[0] = amps[-1] = 1.0 / np.sqrt(2.0)
    return Statevector(n, amps)


def make_w(n: int) -> Statevector:
    """Equal superposition of the n basis states with a single 1 bit."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[[1 << k for k in range(n)]] = 1.0 / np.sqrt(n)
    return Statevector(n, amps)


def make_haar_random(n: int, seed: int) -> Statevector:
    """Haar-random pure state: normalized i.i.d. complex Gaussian vector."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    amps = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    return Statevector(n, amps / np.linalg.norm(amps))


def inner_product(a: Statevector, b: Statevector) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.n_qubits != b.n_qubits:
        raise ValidationError(f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def trace_distance_pure(a: Statevector, b: Statevector) -> float:
    """Trace distance between pure states: sqrt(1 - |<a|b>|^2)."""
    overlap = abs(inner_product(a, b))
    return float(np.sqrt(max(0.0, 1.0 - overlap * overlap)))


def perturb(psi: Statevector, epsilon: float) -> Statevector:
    """Deterministic nearby state at trace distance exactly epsilon.

    Mixes psi with the normalized component of |0...0> orthogonal to psi:
    psi' = delta*psi + sqrt(1-delta^2)*u with delta = sqrt(1-eps^2), so
    <psi|psi'> = delta and the trace distance comes out to epsilon.
    Fails when psi is |0...0> up to phase (the orthogonal component vanishes).
    """
    if not 0.0 < epsilon <= 1.0:
        raise ValidationError(f"epsilon must lie in (0, 1], got {epsilon}")
    c0 = psi.amplitudes[0]
    if abs(c0) >= 1.0 - 1e-12:
        raise ValidationError("psi is |0...0> up to phase; the projected |0> vanishes")
    residual = -np.conj(c0) * psi.amplitudes
    residual[0] += 1.0
    residual /= np.linalg.norm(residual)
    delta = np.sqrt(max(0.0, 1.0 - epsilon * epsilon))
    amps = delta * psi.amplitudes + np.sqrt(1.0 - delta * delta) * residual
    return Statevector(psi.n_qubits, amps / np.linalg.norm(amps))


def permute_qubits(psi: Statevector, permutation: Sequence[int]) -> Statevector:
    """Relabel qubits: qubit k of the input becomes qubit permutation[k]."""
    n = psi.n_qubits
    if sorted(permutation) != list(range(n)):
        raise ValidationError(f"not a permutation of 0..{n - 1}: {permutation}")
    order = [0] * n
    for k, target in enumerate(permutation):
        order[target] = k
    return Statevector(n, np.transpose(psi.tensor(), order).reshape(-1))


def statevector_to_dict(psi: Statevector) -> dict:
    """JSON form: {"n": int, "amplitudes": [[re, im], ...]} in index order."""
    return {
        "n": psi.n_qubits,
        "amplitudes": [[float(a.real), float(a.imag)] for a in psi.amplitudes],
    }


def statevector_from_dict(data: dict) -> Statevector:
    try:
        n = int(data["n"])
        pairs = data["amplitudes"]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed state record: {exc}") from exc
    if len(pairs) != 1 << n:
        raise ValidationError(f"expected {1 << n} amplitudes, got {len(pairs)}")
    amps = np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)
    return Statevector(n, amps)
