"""Homodyne-inference model with finite detector bandwidth.

The detector response is a normalized boxcar of length tau (bandwidth 1/tau);
convolving the quadrature signals with it yields "tilde" operators whose
stationary covariance is

    Vt = (A tau)^-1 { (e^{A tau} - I) V (e^{A tau} - I)^T
         + int_0^tau [e^{A(tau-s)} - I] D [e^{A(tau-s)} - I]^T ds } (A tau)^-T

which tends to V as tau -> 0 and expands to V - tau D / 6 at first order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import quad_vec
from scipy.linalg import expm

from . import gaussian
from .errors import LengthMismatch, SingularDrift, UnphysicalReduction
from .gaussian import CovarianceMatrix

#: below this value of ||A|| * tau the direct formula cancels catastrophically
#: and the series evaluation is used instead.
SERIES_THRESHOLD = 1e-3

#: single-mode reductions with nu in [1/2 - CLAMP_TOL, 1/2) are clamped to the
#: physical boundary; larger violations raise UnphysicalReduction.
CLAMP_TOL = 1e-9


@dataclass(frozen=True)
class DetectorModel:
    """Boxcar point-spread detector with window length tau = 1/bandwidth."""

    tau: float

    def __post_init__(self) -> None:
        if not (self.tau > 0.0 and math.isfinite(self.tau)):
            raise ValueError(f"tau must be positive and finite, got {self.tau!r}")

    @property
    def bandwidth(self) -> float:
        return 1.0 / self.tau

    @classmethod
    def from_bandwidth(cls, bandwidth_hz: float) -> "DetectorModel":
        return cls(tau=1.0 / bandwidth_hz)


def _check_singular(A: NDArray[np.float64]) -> None:
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] < 1e-12 * sv[0]:
        raise SingularDrift("drift matrix is numerically singular")


def _phi1(B: NDArray[np.float64]) -> NDArray[np.float64]:
    """(B)^-1 (e^B - I) evaluated by series, accurate for small ||B||."""
    n = B.shape[0]
    out = np.eye(n)
    term = np.eye(n)
    for k in range(2, 8):
        term = term @ B / k
        out = out + term
    return out


def inferred_covariance(
    A: NDArray[np.float64],
    D: NDArray[np.float64],
    V: CovarianceMatrix,
    det: DetectorModel,
) -> CovarianceMatrix:
    """Exact inferred covariance matrix for a boxcar detector of length tau.

    For ||A|| tau above ``SERIES_THRESHOLD`` the integral is evaluated with a
    single augmented (2n x 2n -> 4n x 4n) matrix exponential; below it, an
    O((||A|| tau)^4)-accurate series is used to avoid cancellation in the
    (A tau)^-1 prefactors.
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    _check_singular(A)
    tau = det.tau
    Vm = V.entries
    n = A.shape[0]
    B = A * tau
    if np.linalg.norm(B) < SERIES_THRESHOLD:
        phi = _phi1(B)
        noise = (
            tau * D / 3.0
            + tau**2 * (A @ D + D @ A.T) / 8.0
            + tau**3 * ((A @ A @ D + D @ A.T @ A.T) / 30.0 + A @ D @ A.T / 20.0)
        )
        vt = phi @ Vm @ phi.T + noise
    else:
        F = expm(B)
        eye = np.eye(n)
        Fm = F - eye
        # Van Loan block exponential: the top-right block of
        # expm([[A, D], [0, -A^T]] tau) right-multiplied by e^{A^T tau} gives
        # G = int_0^tau e^{A s} D e^{A^T s} ds.
        block = np.zeros((2 * n, 2 * n))
        block[:n, :n] = A
        block[:n, n:] = D
        block[n:, n:] = -A.T
        G = expm(block * tau)[:n, n:] @ F.T
        H = np.linalg.solve(A, Fm)  # int_0^tau e^{A s} ds
        integral = G - H @ D - D @ H.T + tau * D
        pref = np.linalg.solve(B, Fm @ Vm @ Fm.T + integral)
        vt = np.linalg.solve(B, pref.T).T
    vt = 0.5 * (vt + vt.T)
    return CovarianceMatrix(vt, V.mode_labels)


def inferred_covariance_quadrature(
    A: NDArray[np.float64],
    D: NDArray[np.float64],
    V: CovarianceMatrix,
    det: DetectorModel,
) -> CovarianceMatrix:
    """Cross-check evaluation of the exact formula by adaptive quadrature."""
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    _check_singular(A)
    tau = det.tau
    n = A.shape[0]
    eye = np.eye(n)
    Fm = expm(A * tau) - eye

    def integrand(s: float) -> NDArray[np.float64]:
        E = expm(A * (tau - s)) - eye
        return E @ D @ E.T

    integral, _ = quad_vec(integrand, 0.0, tau, epsabs=1e-12 * np.linalg.norm(D) * tau)
    pref = np.linalg.solve(A * tau, Fm @ V.entries @ Fm.T + integral)
    vt = np.linalg.solve(A * tau, pref.T).T
    return CovarianceMatrix(0.5 * (vt + vt.T), V.mode_labels)


def inferred_covariance_first_order(
    V: CovarianceMatrix, D: NDArray[np.float64], det: DetectorModel
) -> CovarianceMatrix:
    """First-order expansion in tau: Vt = V - tau D / 6."""
    return CovarianceMatrix(
        V.entries - det.tau * np.asarray(D, dtype=float) / 6.0, V.mode_labels
    )


def _clamped_single_mode(V: CovarianceMatrix, mode: int) -> CovarianceMatrix:
    red = gaussian.reduce(V, (mode,))
    nu = math.sqrt(max(float(np.linalg.det(red.entries)), 0.0))
    if nu < 0.5 - CLAMP_TOL:
        raise UnphysicalReduction(
            f"single-mode reduction has nu = {nu!r} < 1/2 - {CLAMP_TOL}"
        )
    if nu < 0.5:
        red = CovarianceMatrix(red.entries * (0.5 / nu), red.mode_labels)
    return red


def inference_fidelity(
    V: CovarianceMatrix, V_inferred: CovarianceMatrix, mode: int
) -> float:
    """Gaussian fidelity between the single-mode reductions of V and Vt.

    Reductions within CLAMP_TOL of the uncertainty boundary are clamped onto
    it; larger violations raise :class:`UnphysicalReduction`.
    """
    r1 = _clamped_single_mode(V, mode)
    r2 = _clamped_single_mode(V_inferred, mode)
    return gaussian.gaussian_fidelity_single_mode(r1, r2)


def intracavity_from_io(x_out, x_in, kappa: float):
    """Reconstruct an intracavity quadrature series from input/output records.

    x = (x_out - x_in) / sqrt(2 kappa), elementwise.
    """
    x_out = np.asarray(x_out, dtype=float)
    x_in = np.asarray(x_in, dtype=float)
    if x_out.shape != x_in.shape:
        raise LengthMismatch(
            f"series lengths differ: {x_out.shape} vs {x_in.shape}"
        )
    return (x_out - x_in) / math.sqrt(2.0 * kappa)
