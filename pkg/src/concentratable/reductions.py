"""Reduced-state purities Tr[rho_alpha^2] for subsets of a pure state.

Instead of materializing density matrices, amplitudes are gathered into a
2^|alpha| x 2^(n-|alpha|) matrix M; then rho_alpha = M M^dag and the purity
is the squared Frobenius norm of that Gram matrix. For |alpha| > n/2 the
complement subset is used instead, which is valid for pure states because
a reduced state and its complement share a spectrum.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np

from .errors import BudgetError, ValidationError
from .limits import PURITY_TABLE_MAX_CARDINALITY
from .states import QubitSet, Statevector


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, in standard descending enumeration order."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def subsets_of(s: QubitSet) -> Iterator[QubitSet]:
    """All 2^c(s) subsets of s, each exactly once (descending-mask order)."""
    for sub in submasks(s.mask):
        yield QubitSet(s.n_qubits, sub)


def _gather_matrix(psi: Statevector, labels: tuple[int, ...]) -> np.ndarray:
    """Amplitudes reshaped so rows index the qubits in ``labels``."""
    rest = [k for k in range(psi.n_qubits) if k not in labels]
    tensor = np.transpose(psi.tensor(), list(labels) + rest)
    return tensor.reshape(1 << len(labels), -1)


def purity(psi: Statevector, alpha: QubitSet) -> float:
    """Tr[rho_alpha^2] of the reduced state on the qubits in alpha.

    alpha = empty set returns exactly 1.0 (the scalar convention).
    """
    if alpha.n_qubits != psi.n_qubits:
        raise ValidationError(
            f"subset is over {alpha.n_qubits} qubits, state has {psi.n_qubits}"
        )
    if alpha.mask == 0:
        return 1.0
    if 2 * alpha.cardinality > psi.n_qubits:
        alpha = alpha.complement()
    matrix = _gather_matrix(psi, alpha.labels())
    gram = matrix @ matrix.conj().T
    return float(np.vdot(gram, gram).real)


def cross_purity(psi: Statevector, psi_prime: Statevector, alpha: QubitSet) -> float:
    """Tr[rho_alpha rho'_alpha] for reduced states of two (possibly different) states.

    No complement shortcut here: for distinct states the two sides of a cut
    carry different overlaps.
    """
    if psi.n_qubits != psi_prime.n_qubits:
        raise ValidationError(
            f"qubit count mismatch: {psi.n_qubits} vs {psi_prime.n_qubits}"
        )
    if alpha.n_qubits != psi.n_qubits:
        raise ValidationError(
            f"subset is over {alpha.n_qubits} qubits, state has {psi.n_qubits}"
        )
    if alpha.mask == 0:
        return 1.0
    labels = alpha.labels()
    m1 = _gather_matrix(psi, labels)
    m2 = _gather_matrix(psi_prime, labels)
    if 2 * len(labels) <= psi.n_qubits:
        r1 = m1 @ m1.conj().T
        r2 = m2 @ m2.conj().T
        return float(np.vdot(r2, r1).real)
    # Tr[M1 M1+ M2 M2+] = ||M1+ M2||_F^2, cheaper on the complement side.
    overlap = m1.conj().T @ m2
    return float(np.vdot(overlap, overlap).real)


@dataclass(frozen=True)
class PurityTable:
    """Purities Tr[rho_alpha^2] for every subset alpha of some base set."""

    n_qubits: int
    values: dict[int, float]

    def __getitem__(self, mask: int) -> float:
        return self.values[mask]

    def to_dict(self) -> dict:
        """JSON form, entries sorted by mask."""
        return {
            "n": self.n_qubits,
            "entries": [
                {"mask": mask, "purity": self.values[mask]}
                for mask in sorted(self.values)
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PurityTable":
        try:
            n = int(data["n"])
            values = {int(e["mask"]): float(e["purity"]) for e in data["entries"]}
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed purity table record: {exc}") from exc
        return cls(n, values)


def purity_table(psi: Statevector, s: QubitSet) -> PurityTable:
    """Purities for every subset of s, keyed by mask (includes the empty set)."""
    cardinality = s.cardinality
    if cardinality > PURITY_TABLE_MAX_CARDINALITY:
        raise BudgetError(
            f"purity table over c(s)={cardinality} would hold 2^{cardinality} "
            f"= {1 << cardinality} entries (cap: c(s) <= {PURITY_TABLE_MAX_CARDINALITY})"
        )
    values = {
        mask: purity(psi, QubitSet(psi.n_qubits, mask)) for mask in submasks(s.mask)
    }
    return PurityTable(psi.n_qubits, values)


def purity_array(psi: Statevector) -> np.ndarray:
    """All 2^n purities of psi as an array indexed by label mask."""
    n = psi.n_qubits
    out = np.empty(1 << n)
    for mask in range(1 << n):
        out[mask] = purity(psi, QubitSet(n, mask))
    return out
