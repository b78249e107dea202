"""Physical parameters, mean-field steady state, drift and diffusion matrices.

The device hosts two optical modes -- fundamental F at the drive wavelength and
second harmonic S -- coupled by a chi(2) process, plus one mechanical mode M
coupled to both via radiation pressure. All rates and frequencies inside this
module are angular (rad/s); unit conversion from Hz-denominated configuration
happens in :mod:`trimode.config`.

Quadrature ordering everywhere is (x_F, p_F, x_S, p_S, x, p).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np
from numpy.typing import NDArray
from scipy.constants import c as SPEED_OF_LIGHT
from scipy.constants import hbar as HBAR
from scipy.constants import k as K_BOLTZMANN

from .errors import ConfigError, GaugeViolation, NoPositiveRoot, ZeroTemperature

MODES = ("paper", "self_consistent")
ROOT_METHODS = ("linear", "cubic")


@dataclass(frozen=True)
class SystemParams:
    """All physical constants and drive settings, in angular units (rad/s).

    g_S is fixed to 2 * g_F (simplifying assumption of the model) and exposed
    as a derived property.
    """

    omega_m: float      # mechanical angular frequency [rad/s]
    kappa_m: float      # mechanical amplitude decay [rad/s]
    kappa_F: float      # fundamental optical amplitude decay [rad/s]
    kappa_S: float      # second-harmonic optical amplitude decay [rad/s]
    g_F: float          # optomechanical coupling, fundamental [rad/s]
    chi: float          # second-harmonic-generation coupling [rad/s]
    Delta: float        # drive detuning [rad/s], any sign
    T_env: float        # environment temperature [K]
    lambda_F: float     # fundamental wavelength [m]
    P_in: float         # input power [W]

    def __post_init__(self) -> None:
        for name in ("omega_m", "kappa_m", "kappa_F", "kappa_S", "g_F", "chi",
                     "lambda_F"):
            v = getattr(self, name)
            if not (v > 0.0 or (name in ("g_F", "chi") and v == 0.0)):
                raise ConfigError(f"{name} must be positive, got {v!r}")
        if self.T_env < 0.0:
            raise ConfigError(f"T_env must be >= 0, got {self.T_env!r}")
        if self.P_in < 0.0:
            raise ConfigError(f"P_in must be >= 0, got {self.P_in!r}")
        if not math.isfinite(self.Delta):
            raise ConfigError(f"Delta must be finite, got {self.Delta!r}")

    @property
    def g_S(self) -> float:
        """Second-harmonic optomechanical coupling, g_S = 2 g_F exactly."""
        return 2.0 * self.g_F

    @property
    def Q_m(self) -> float:
        """Mechanical quality factor, Q_m = omega_m / (2 kappa_m)."""
        return self.omega_m / (2.0 * self.kappa_m)

    def replace(self, **kwargs) -> "SystemParams":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class MeanFields:
    """Classical steady-state amplitudes in the real-a_F gauge.

    a_F is real nonnegative (the drive phase phi has been absorbed);
    a_S = chi * |a_F|^2 / (2i Delta - kappa_S) in this gauge. alpha and beta
    are the rescaled parameters alpha = g_F / (sqrt(2) chi), beta = chi * a_F.
    delta_F_eff and delta_S_eff are the detunings entering the drift matrix
    (bare Delta and 2*Delta in ``paper`` mode; shifted by the radiation-
    pressure displacement in ``self_consistent`` mode).
    """

    a_F: complex
    a_S: complex
    phi: float
    x_bar: float
    p_bar: float
    alpha: float
    beta: float
    u: float
    roots: tuple[float, ...]
    delta_F_eff: float
    delta_S_eff: float
    mode: str
    root_method: str

    @property
    def n_roots(self) -> int:
        return len(self.roots)


def thermal_occupation(params: SystemParams) -> float:
    """Mean phonon number of the mechanical bath, n_th = k_B T / (hbar omega_m)."""
    return K_BOLTZMANN * params.T_env / (HBAR * params.omega_m)


def decoherence_time(params: SystemParams) -> float:
    """Mechanical decoherence time tau_d = 1 / (kappa_m * n_th)."""
    n_th = thermal_occupation(params)
    if n_th <= 0.0:
        raise ZeroTemperature("decoherence time is undefined at n_th = 0")
    return 1.0 / (params.kappa_m * n_th)


def input_amplitude(params: SystemParams) -> float:
    """Drive amplitude a_in = sqrt(P_in / (hbar omega_c)), omega_c = 2 pi c / lambda."""
    return math.sqrt(
        params.P_in * params.lambda_F / (2.0 * math.pi * HBAR * SPEED_OF_LIGHT)
    )


def cubic_coefficients(params: SystemParams) -> NDArray[np.float64]:
    """Descending coefficients of the real cubic in u = |a_F|^2.

    Taking the squared modulus of the mean-field equation
    (2 chi^2/(2i Delta - kappa_S)) u a_F + (i Delta - kappa_F) a_F =
    sqrt(2 kappa_F) e^{-i phi} a_in yields
    |c u + i Delta - kappa_F|^2 * u = 2 kappa_F a_in^2 with
    c = 2 chi^2 / (2i Delta - kappa_S).
    """
    d, kF, kS = params.Delta, params.kappa_F, params.kappa_S
    den = 4.0 * d * d + kS * kS
    c_r = -2.0 * params.chi**2 * kS / den
    c_i = -4.0 * params.chi**2 * d / den
    a_in = input_amplitude(params)
    return np.array(
        [
            c_r * c_r + c_i * c_i,
            2.0 * (c_i * d - c_r * kF),
            kF * kF + d * d,
            -2.0 * kF * a_in * a_in,
        ]
    )


def _positive_cubic_roots(params: SystemParams) -> tuple[float, ...]:
    """All real positive roots of the mean-field cubic, ascending."""
    coeffs = cubic_coefficients(params)
    if abs(coeffs[3]) == 0.0:
        return ()
    roots = np.roots(coeffs)
    scale = max(abs(r) for r in roots) if len(roots) else 1.0
    pos = sorted(
        float(r.real)
        for r in roots
        if abs(r.imag) <= 1e-8 * max(abs(r), scale * 1e-12) and r.real > 0.0
    )
    if not pos:
        # Bracketing-scan fallback: the cubic is negative at u=0 (constant
        # term < 0) and positive for large u, so a sign change must exist.
        grid = np.logspace(-6, 40, 2000)
        vals = np.polyval(coeffs, grid)
        idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        from scipy.optimize import brentq

        pos = sorted(
            float(brentq(lambda x: np.polyval(coeffs, x), grid[i], grid[i + 1]))
            for i in idx
        )
        if not pos:
            raise NoPositiveRoot("mean-field cubic has no positive root")
    return tuple(pos)


def mean_field_residual(params: SystemParams, u: float, phi: float) -> float:
    """|LHS - RHS| of the complex mean-field equation at amplitude sqrt(u)."""
    d, kF, kS = params.Delta, params.kappa_F, params.kappa_S
    c = 2.0 * params.chi**2 / (2j * d - kS)
    lhs = (c * u + (1j * d - kF)) * math.sqrt(u)
    rhs = math.sqrt(2.0 * kF) * cmath.exp(-1j * phi) * input_amplitude(params)
    return abs(lhs - rhs)


def steady_state_mean_fields(
    params: SystemParams,
    mode: str = "paper",
    root_method: str = "linear",
) -> MeanFields:
    """Classical steady state of the driven three-mode system.

    root_method "linear" (default) uses the weak-conversion amplitude
    u = 2 kappa_F a_in^2 / (kappa_F^2 + Delta^2), i.e. the chi = 0 cavity
    response inserted into the second-harmonic formula. root_method "cubic"
    selects the smallest positive root of the exact cubic (the branch
    continuously connected to the chi = 0 solution). All positive cubic roots
    are reported in either case.

    mode "paper" sets x_bar = p_bar = 0 and bare detunings; mode
    "self_consistent" sets x_bar = (g_F u + g_S |a_S|^2)/omega_m and shifts
    the drift-matrix detunings to mu_j Delta + g_j x_bar.
    """
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")
    if root_method not in ROOT_METHODS:
        raise ConfigError(
            f"root_method must be one of {ROOT_METHODS}, got {root_method!r}"
        )
    d, kF, kS = params.Delta, params.kappa_F, params.kappa_S
    a_in = input_amplitude(params)
    roots = _positive_cubic_roots(params) if a_in > 0.0 else ()
    if root_method == "cubic" and a_in > 0.0:
        u = roots[0]
    else:
        u = 2.0 * kF * a_in * a_in / (kF * kF + d * d)
    if u > 0.0:
        c = 2.0 * params.chi**2 / (2j * d - kS)
        phi = -cmath.phase((c * u + (1j * d - kF)) * math.sqrt(u))
    else:
        phi = 0.0
    a_F = complex(math.sqrt(u))
    a_S = params.chi * u / (2j * d - kS)
    x_bar = 0.0
    delta_F_eff = d
    delta_S_eff = 2.0 * d
    if mode == "self_consistent":
        x_bar = (params.g_F * u + params.g_S * abs(a_S) ** 2) / params.omega_m
        delta_F_eff = d + params.g_F * x_bar
        delta_S_eff = 2.0 * d + params.g_S * x_bar
    alpha = params.g_F / (math.sqrt(2.0) * params.chi) if params.chi > 0.0 else math.inf
    beta = params.chi * a_F.real
    return MeanFields(
        a_F=a_F,
        a_S=a_S,
        phi=phi,
        x_bar=x_bar,
        p_bar=0.0,
        alpha=alpha,
        beta=beta,
        u=u,
        roots=roots,
        delta_F_eff=delta_F_eff,
        delta_S_eff=delta_S_eff,
        mode=mode,
        root_method=root_method,
    )


def drift_matrix(params: SystemParams, fields: MeanFields) -> NDArray[np.float64]:
    """6x6 drift matrix A of the linearized Langevin system, raw form.

    Entries follow the linearization around the mean fields with
    a_j = a_j^r + i a_j^i; row 5 is (0, 0, 0, 0, 0, omega_m) identically.
    Raises :class:`GaugeViolation` if fields.a_F is not real (the real-a_F
    gauge is assumed throughout).
    """
    if abs(fields.a_F.imag) > 1e-12 * max(1.0, abs(fields.a_F)):
        raise GaugeViolation(
            f"a_F must be real in this gauge, got {fields.a_F!r}"
        )
    kF, kS = params.kappa_F, params.kappa_S
    om, km = params.omega_m, params.kappa_m
    gF, gS, chi = params.g_F, params.g_S, params.chi
    dF, dS = fields.delta_F_eff, fields.delta_S_eff
    aFr, aFi = fields.a_F.real, fields.a_F.imag
    aSr, aSi = fields.a_S.real, fields.a_S.imag
    s2 = math.sqrt(2.0)
    return np.array(
        [
            [-kF + 2 * chi * aSr, -dF + 2 * chi * aSi, 2 * chi * aFr,
             2 * chi * aFi, -s2 * gF * aFi, 0.0],
            [dF + 2 * chi * aSi, -kF - 2 * chi * aSr, -2 * chi * aFi,
             2 * chi * aFr, s2 * gF * aFr, 0.0],
            [-2 * chi * aFr, 2 * chi * aFi, -kS, -dS, -s2 * gS * aSi, 0.0],
            [-2 * chi * aFi, -2 * chi * aFr, dS, -kS, s2 * gS * aSr, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, om],
            [s2 * gF * aFr, s2 * gF * aFi, s2 * gS * aSr, s2 * gS * aSi,
             -om, -2 * km],
        ]
    )


def drift_matrix_rescaled(
    params: SystemParams, alpha: float, beta: float
) -> NDArray[np.float64]:
    """6x6 drift matrix as a function of the rescaled parameters alpha, beta.

    Valid in the real-a_F gauge with bare detunings (``paper`` mode), where
    the steady state is a universal function of alpha = g_F/(sqrt(2) chi) and
    beta = chi * a_F. Must agree entry-for-entry with :func:`drift_matrix`.
    """
    d, kF, kS = params.Delta, params.kappa_F, params.kappa_S
    om, km = params.omega_m, params.kappa_m
    den = 4.0 * d * d + kS * kS
    b2 = beta * beta
    ab2 = alpha * b2
    return np.array(
        [
            [-kF - 2 * kS * b2 / den, -d - 4 * d * b2 / den, 2 * beta, 0.0,
             0.0, 0.0],
            [d - 4 * d * b2 / den, -kF + 2 * kS * b2 / den, 0.0, 2 * beta,
             2 * alpha * beta, 0.0],
            [-2 * beta, 0.0, -kS, -2 * d, 8 * d * ab2 / den, 0.0],
            [0.0, -2 * beta, 2 * d, -kS, -4 * kS * ab2 / den, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, om],
            [2 * alpha * beta, 0.0, -4 * kS * ab2 / den, -8 * d * ab2 / den,
             -om, -2 * km],
        ]
    )


def diffusion_matrix(params: SystemParams) -> NDArray[np.float64]:
    """6x6 diagonal diffusion matrix.

    D = diag(kappa_F, kappa_F, kappa_S, kappa_S, 0, 2 kappa_m (2 n_th + 1)):
    vacuum optical inputs contribute kappa per quadrature; the mechanical
    Brownian bath contributes through the thermal occupation n_th.
    """
    n_th = thermal_occupation(params)
    return np.diag(
        [
            params.kappa_F,
            params.kappa_F,
            params.kappa_S,
            params.kappa_S,
            0.0,
            2.0 * params.kappa_m * (2.0 * n_th + 1.0),
        ]
    )
