"""Continuous-variable Gaussian-state linear algebra.

Conventions
-----------
Quadratures are ordered (x_1, p_1, ..., x_n, p_n) with x = (a + a^dag)/sqrt(2),
p = (a - a^dag)/(i*sqrt(2)), hbar = 1, so the vacuum variance is 1/2 and a
covariance matrix V is physical iff every symplectic eigenvalue nu_k >= 1/2
(equivalently V + i*Omega/2 >= 0).

All operations are pure functions; nothing here holds mutable state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NonPairedSpectrum,
    UnphysicalState,
)

#: symplectic eigenvalues below 1/2 - NEGATIVITY_GUARD count as entangling;
#: values within the guard of 1/2 are treated as exactly on the boundary.
NEGATIVITY_GUARD = 1e-12

#: physicality margin: V is physical iff min nu >= 1/2 - PHYSICALITY_TOL.
PHYSICALITY_TOL = 1e-9

#: relative tolerance for matching the +-i*nu conjugate pairs of Omega @ V.
PAIRING_TOL = 1e-9


def symplectic_form(n_modes: int) -> NDArray[np.float64]:
    """Return the 2n x 2n block-diagonal symplectic form Omega.

    Omega is built from [[0, 1], [-1, 0]] blocks and satisfies
    Omega^2 = -I and Omega^T = -Omega.
    """
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        omega[2 * k, 2 * k + 1] = 1.0
        omega[2 * k + 1, 2 * k] = -1.0
    return omega


@dataclass(frozen=True)
class CovarianceMatrix:
    """Real symmetric 2n x 2n covariance matrix of quadrature fluctuations.

    The matrix is symmetrized on construction; dimensions must equal
    2 * n_modes. Physicality (nu_k >= 1/2) is checkable via
    :func:`is_physical`, not enforced here, so that intermediate objects
    (e.g. partial transposes) remain representable.
    """

    entries: NDArray[np.float64]
    mode_labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"covariance matrix must be square, got {m.shape}")
        if m.shape[0] % 2 != 0 or m.shape[0] == 0:
            raise DimensionMismatch(
                f"covariance matrix dimension must be a positive even number, got {m.shape[0]}"
            )
        if not np.all(np.isfinite(m)):
            raise UnphysicalState("covariance matrix has non-finite entries")
        m = 0.5 * (m + m.T)
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        n = m.shape[0] // 2
        labels = tuple(self.mode_labels) if self.mode_labels else tuple(
            f"mode{i}" for i in range(n)
        )
        if len(labels) != n:
            raise DimensionMismatch(
                f"{len(labels)} mode labels for {n} modes"
            )
        object.__setattr__(self, "mode_labels", labels)

    @property
    def n_modes(self) -> int:
        return self.entries.shape[0] // 2

    def matrix(self) -> NDArray[np.float64]:
        """Return a writable copy of the underlying array."""
        return np.array(self.entries, dtype=float)


def vacuum(n_modes: int, labels: tuple[str, ...] = ()) -> CovarianceMatrix:
    """Covariance matrix of the n-mode vacuum, (1/2) * I."""
    return CovarianceMatrix(0.5 * np.eye(2 * n_modes), labels)


def two_mode_squeezed(r: float) -> CovarianceMatrix:
    """Two-mode squeezed vacuum with squeezing parameter r.

    diag blocks cosh(2r)/2 * I, off-diagonal sinh(2r)/2 * diag(1, -1).
    """
    c = 0.5 * math.cosh(2.0 * r)
    s = 0.5 * math.sinh(2.0 * r)
    m = np.array(
        [
            [c, 0.0, s, 0.0],
            [0.0, c, 0.0, -s],
            [s, 0.0, c, 0.0],
            [0.0, -s, 0.0, c],
        ]
    )
    return CovarianceMatrix(m)


def _check_modes(V: CovarianceMatrix, modes) -> tuple[int, ...]:
    modes = tuple(modes)
    if not modes:
        raise IndexOutOfRange("mode subset must be nonempty")
    if len(set(modes)) != len(modes):
        raise IndexOutOfRange(f"duplicate mode indices in {modes}")
    for m in modes:
        if not (0 <= int(m) < V.n_modes):
            raise IndexOutOfRange(f"mode index {m} out of range for {V.n_modes} modes")
    return tuple(int(m) for m in modes)


def symplectic_eigenvalues(V: CovarianceMatrix) -> NDArray[np.float64]:
    """Symplectic eigenvalues of V, sorted ascending, one per mode.

    Computed as the absolute imaginary parts of the eigenvalues of Omega @ V,
    which occur in +-i*nu conjugate pairs for symmetric V. Raises
    :class:`NonPairedSpectrum` if the pairing fails to the relative tolerance
    ``PAIRING_TOL`` (signals a corrupted input).
    """
    m = V.entries
    scale = max(np.linalg.norm(m), 1.0)
    eig = np.linalg.eigvals(symplectic_form(V.n_modes) @ m)
    if np.max(np.abs(eig.real)) > PAIRING_TOL * scale:
        raise NonPairedSpectrum(
            "eigenvalues of Omega @ V have non-negligible real parts"
        )
    nus = np.sort(np.abs(eig.imag))
    for k in range(V.n_modes):
        lo, hi = nus[2 * k], nus[2 * k + 1]
        if hi - lo > PAIRING_TOL * max(hi, scale):
            raise NonPairedSpectrum(
                f"conjugate pair mismatch: {lo!r} vs {hi!r}"
            )
    return nus[::2].copy()


def is_physical(V: CovarianceMatrix) -> bool:
    """True iff every symplectic eigenvalue is >= 1/2 - 1e-9."""
    return bool(symplectic_eigenvalues(V)[0] >= 0.5 - PHYSICALITY_TOL)


def partial_transpose(V: CovarianceMatrix, modes) -> CovarianceMatrix:
    """Phase-space partial transposition: flip the sign of p for each mode.

    Returns P V P with P = identity except -1 on the transposed modes'
    momentum rows/columns. Involutive.
    """
    modes = _check_modes(V, modes)
    p = np.ones(2 * V.n_modes)
    for m in modes:
        p[2 * m + 1] = -1.0
    return CovarianceMatrix(V.entries * np.outer(p, p), V.mode_labels)


def reduce(V: CovarianceMatrix, modes) -> CovarianceMatrix:
    """Reduced covariance matrix on the selected modes (in the given order)."""
    modes = _check_modes(V, modes)
    idx = np.concatenate([[2 * m, 2 * m + 1] for m in modes])
    labels = tuple(V.mode_labels[m] for m in modes)
    return CovarianceMatrix(V.entries[np.ix_(idx, idx)], labels)


def log_negativity(V: CovarianceMatrix, partition_a) -> float:
    """Logarithmic negativity across the bipartition partition_a | rest.

    E_N = max[0, -sum_k ln(2 nu~_k)] over the symplectic eigenvalues nu~_k of
    the partially transposed state that lie below 1/2 - 1e-12 (product form;
    at most one eigenvalue is below 1/2 for 1-vs-N Gaussian cuts, where this
    coincides with -ln of the single 2*nu~).
    """
    partition_a = _check_modes(V, partition_a)
    if len(partition_a) >= V.n_modes:
        raise IndexOutOfRange("partition must be a proper subset of the modes")
    if not is_physical(V):
        raise UnphysicalState("log_negativity requires a physical covariance matrix")
    nus = symplectic_eigenvalues(partial_transpose(V, partition_a))
    total = -sum(math.log(2.0 * nu) for nu in nus if nu < 0.5 - NEGATIVITY_GUARD)
    return max(0.0, total)


def gaussian_fidelity_single_mode(V1: CovarianceMatrix, V2: CovarianceMatrix) -> float:
    """Uhlmann fidelity of two zero-mean single-mode Gaussian states.

    F = 1 / (sqrt(Delta + delta) - sqrt(delta)) with Delta = det(V1 + V2) and
    delta = 4 (det V1 - 1/4)(det V2 - 1/4).
    """
    for V in (V1, V2):
        if V.n_modes != 1:
            raise DimensionMismatch("fidelity is defined for single-mode states")
        if not is_physical(V):
            raise UnphysicalState("fidelity requires physical covariance matrices")
    big = float(np.linalg.det(V1.entries + V2.entries))
    small = 4.0 * (float(np.linalg.det(V1.entries)) - 0.25) * (
        float(np.linalg.det(V2.entries)) - 0.25
    )
    small = max(small, 0.0)
    f = 1.0 / (math.sqrt(big + small) - math.sqrt(small))
    return min(max(f, 0.0), 1.0)
