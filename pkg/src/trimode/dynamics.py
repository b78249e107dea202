"""Stability certification and steady-state Lyapunov solver.

The linearized system is dR = A R dt + noise with diffusion matrix D; a
steady state exists iff A is Hurwitz (all eigenvalues in the open left half
plane), in which case the stationary covariance solves A V + V A^T + D = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.typing import NDArray

from .errors import InconsistentVerdicts, SingularSystem, UnstableSystem
from .gaussian import CovarianceMatrix

#: stability margin as a fraction of ||A||_F: eigenvalues with real part in
#: [-tol, tol] are treated as marginal and classified unstable.
STABILITY_TOL_FACTOR = 1e-9

#: Lyapunov residual bound, relative to ||D||_F.
LYAPUNOV_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class StabilityReport:
    """Outcome of the spectral and Routh-Hurwitz stability tests."""

    stable: bool
    max_real_eigenvalue: float
    routh_hurwitz_pass: bool
    char_poly_coeffs: tuple[float, ...]
    eigenvalues: tuple[complex, ...]


def _fraction_det(m: list[list[Fraction]]) -> Fraction:
    """Exact determinant of a matrix of Fractions by Gaussian elimination."""
    n = len(m)
    m = [row[:] for row in m]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = m[col][col]
        for r in range(col + 1, n):
            factor = m[r][col] / inv
            if factor:
                for c in range(col, n):
                    m[r][c] -= factor * m[col][c]
    return det


def hurwitz_minors(coeffs) -> list[Fraction]:
    """Leading principal minors of the Hurwitz matrix, in exact arithmetic.

    ``coeffs`` are the descending polynomial coefficients (a_0 ... a_n) with
    a_0 > 0. The polynomial is Hurwitz iff all n minors are positive.
    """
    a = [Fraction(float(c)) for c in coeffs]
    n = len(a) - 1
    def coef(k: int) -> Fraction:
        return a[k] if 0 <= k <= n else Fraction(0)

    h = [[coef(2 * (j + 1) - (i + 1)) for j in range(n)] for i in range(n)]
    return [_fraction_det([row[: k + 1] for row in h[: k + 1]]) for k in range(n)]


def routh_hurwitz(coeffs) -> bool:
    """True iff the polynomial with the given descending coefficients is Hurwitz."""
    if coeffs[0] <= 0:
        return False
    return all(m > 0 for m in hurwitz_minors(coeffs))


def stability(
    A: NDArray[np.float64], tol_factor: float = STABILITY_TOL_FACTOR
) -> StabilityReport:
    """Certify stability of the drift matrix by two independent tests.

    The spectral test requires max Re lambda < -tol with
    tol = tol_factor * ||A||_F; the Routh-Hurwitz test evaluates the full
    Hurwitz-determinant chain of the characteristic polynomial in exact
    rational arithmetic (on the time-rescaled matrix A/||A||, under which the
    verdict is invariant). Eigenvalues inside the marginal band |Re| <= tol
    are classified unstable. A disagreement between the two tests outside the
    band raises :class:`InconsistentVerdicts`.
    """
    A = np.asarray(A, dtype=float)
    scale = float(np.linalg.norm(A))
    eigs = np.linalg.eigvals(A)
    max_re = float(np.max(eigs.real))
    char = np.poly(eigs).real
    if scale == 0.0:
        return StabilityReport(False, 0.0, False, tuple(char), tuple(eigs))
    tol = tol_factor * scale
    routh = routh_hurwitz(np.poly(eigs / scale).real)
    spectral = max_re < -tol
    if abs(max_re) <= tol:
        stable = False
    elif spectral != routh:
        raise InconsistentVerdicts(
            f"spectral verdict (max Re = {max_re!r}, tol = {tol!r}) and "
            f"Routh-Hurwitz verdict ({routh}) disagree"
        )
    else:
        stable = spectral
    return StabilityReport(
        stable=stable,
        max_real_eigenvalue=max_re,
        routh_hurwitz_pass=routh,
        char_poly_coeffs=tuple(float(c) for c in char),
        eigenvalues=tuple(complex(e) for e in eigs),
    )


def lyapunov_residual(
    A: NDArray[np.float64], D: NDArray[np.float64], V: NDArray[np.float64]
) -> float:
    """Frobenius norm of A V + V A^T + D."""
    return float(np.linalg.norm(A @ V + V @ A.T + D))


def steady_state_covariance(
    A: NDArray[np.float64],
    D: NDArray[np.float64],
    mode_labels: tuple[str, ...] = ("F", "S", "M"),
    check_stability: bool = True,
) -> CovarianceMatrix:
    """Solve A V + V A^T + D = 0 for the stationary covariance matrix.

    The equation is vectorized to a dense (2n)^2 x (2n)^2 linear system
    (exact at this size) and the solution symmetrized. The residual must
    satisfy ||A V + V A^T + D||_F <= 1e-10 ||D||_F.
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    n = A.shape[0]
    if check_stability and not stability(A).stable:
        raise UnstableSystem("drift matrix is not strictly stable")
    eye = np.eye(n)
    op = np.kron(A, eye) + np.kron(eye, A)
    try:
        v = np.linalg.solve(op, -D.reshape(-1))
    except np.linalg.LinAlgError as exc:
        raise SingularSystem("vectorized Lyapunov operator is singular") from exc
    V = v.reshape(n, n)
    V = 0.5 * (V + V.T)
    d_norm = float(np.linalg.norm(D))
    if d_norm > 0.0 and lyapunov_residual(A, D, V) > LYAPUNOV_RESIDUAL_TOL * d_norm:
        raise SingularSystem(
            "Lyapunov residual exceeds tolerance; system is ill-conditioned"
        )
    labels = mode_labels if 2 * len(mode_labels) == n else ()
    return CovarianceMatrix(V, labels)
