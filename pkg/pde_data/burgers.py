"""Viscous Burgers equation on the periodic unit interval.

    u_t + u u_x = nu u_xx

The reference solver linearizes through the Cole-Hopf transform
phi = exp(-(1/2nu) int_0^x u), which turns Burgers into the heat equation
phi_t = nu phi_xx, and inverts with u = -2nu phi_x / phi. A conservative
finite-difference integrator is kept as an independent oracle.
"""

import logging
from typing import Optional

import numpy as np
from scipy.signal import resample

from config.errors import ColeHopfTruncationError, ParameterRangeError, SolverError, ZeroMeanError
from pde_data.fields import Field1D

logger = logging.getLogger(__name__)

ZERO_MEAN_TOL = 1e-12
SPECTRAL_MODES = 256
PHI_FLOOR = 1e-290


def _wavenumbers(m: int) -> np.ndarray:
    return np.fft.fftfreq(m, d=1.0 / m)


def _strip_nyquist(coeffs: np.ndarray) -> np.ndarray:
    if coeffs.size % 2 == 0:
        coeffs = coeffs.copy()
        coeffs[coeffs.size // 2] = 0.0
    return coeffs


def _check_zero_mean(values: np.ndarray) -> None:
    mean = float(np.mean(values))
    if abs(mean) > ZERO_MEAN_TOL:
        raise ZeroMeanError(f"Cole-Hopf needs a zero-mean field, got mean {mean:.3e}")


def _antiderivative(values: np.ndarray) -> np.ndarray:
    """int_0^x u on the grid, for a zero-mean periodic u."""
    m = values.size
    k = _wavenumbers(m)
    coeffs = _strip_nyquist(np.fft.fft(values))
    integral = np.zeros_like(coeffs)
    nonzero = k != 0
    integral[nonzero] = coeffs[nonzero] / (2j * np.pi * k[nonzero])
    antideriv = np.real(np.fft.ifft(integral))
    return antideriv - antideriv[0]


def _spectral_derivative(values: np.ndarray) -> np.ndarray:
    k = _wavenumbers(values.size)
    coeffs = _strip_nyquist(np.fft.fft(values))
    return np.real(np.fft.ifft(2j * np.pi * k * coeffs))


def _fourier_eval(coeffs: np.ndarray, k: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Trigonometric sum and its x-derivative at arbitrary points."""
    basis = np.exp(2j * np.pi * np.outer(x, k))
    return np.real(basis @ coeffs), np.real(basis @ (2j * np.pi * k * coeffs))


def cole_hopf_forward(u: Field1D, nu: float) -> Field1D:
    """
    phi(x) = exp(-(1/2nu) int_0^x u dx'), antiderivative taken spectrally.

    Raises:
        ZeroMeanError: u does not have zero spatial mean (phi would not be periodic)
    """
    if nu <= 0:
        raise ParameterRangeError(f"viscosity must be positive, got {nu}")
    _check_zero_mean(u.values)
    return Field1D(np.exp(-_antiderivative(u.values) / (2.0 * nu)))


def cole_hopf_inverse(phi: Field1D, nu: float) -> Field1D:
    """u = -2 nu phi_x / phi with a spectral derivative."""
    if np.min(phi.values) <= 0.0:
        raise SolverError("Cole-Hopf inverse needs phi > 0")
    return Field1D(-2.0 * nu * _spectral_derivative(phi.values) / phi.values)


def _evolve_cole_hopf(
    u0: Field1D,
    nu: float,
    t: float,
    modes: int,
    keep: Optional[int] = None,
    n_out: Optional[int] = None,
) -> Field1D:
    if nu <= 0:
        raise ParameterRangeError(f"viscosity must be positive, got {nu}")
    if t < 0:
        raise ParameterRangeError(f"time must be non-negative, got {t}")
    _check_zero_mean(u0.values)

    fine = u0.values if u0.n == modes else resample(u0.values, modes)
    exponent = -_antiderivative(fine) / (2.0 * nu)
    phi0 = np.exp(exponent - exponent.max())

    k = _wavenumbers(modes)
    coeffs = _strip_nyquist(np.fft.fft(phi0)) / modes
    if keep is not None:
        coeffs[np.abs(k) > keep // 2] = 0.0
    coeffs = coeffs * np.exp(-4.0 * np.pi ** 2 * k ** 2 * nu * t)

    n_out = n_out or u0.n
    phi, phi_x = _fourier_eval(coeffs, k, np.arange(n_out) / n_out)
    if not np.all(np.isfinite(phi)) or np.min(phi) <= PHI_FLOOR:
        if keep is not None:
            raise ColeHopfTruncationError(f"truncated Cole-Hopf expansion with n_f={keep} lost positivity of phi")
        raise SolverError(f"phi underflow in Cole-Hopf solve (nu={nu}, t={t})")
    return Field1D(-2.0 * nu * phi_x / phi)


def burgers_solve_spectral(u0: Field1D, nu: float, t: float, modes: int = SPECTRAL_MODES,
                           n_out: Optional[int] = None) -> Field1D:
    """
    u(., t) through the Cole-Hopf transform and the exact heat-equation evolution
    phi_k(t) = phi_k(0) exp(-4 pi^2 k^2 nu t).

    The initial field is Fourier-interpolated onto ``modes`` points; phi and phi_x
    are evaluated exactly at the output grid (u0's grid unless ``n_out`` is given).

    Raises:
        ZeroMeanError: u0 is not zero-mean
        SolverError: phi underflows
    """
    return _evolve_cole_hopf(u0, nu, t, modes, n_out=n_out)


def cole_hopf_rom(u0: Field1D, nu: float, t: float, n_f: int, modes: int = SPECTRAL_MODES) -> Field1D:
    """
    Reduced Cole-Hopf model keeping the phi modes |k| <= n_f / 2.

    Raises:
        ParameterRangeError: n_f is not a positive even number
        ColeHopfTruncationError: The truncated phi is not positive on the grid
    """
    if n_f < 2 or n_f % 2:
        raise ParameterRangeError(f"n_f must be a positive even number, got {n_f}")
    return _evolve_cole_hopf(u0, nu, t, modes, keep=n_f)


def _flux_rhs(u: np.ndarray, nu: float, dx: float, order: int) -> np.ndarray:
    flux = 0.5 * u * u
    if order == 2:
        dflux = (np.roll(flux, -1) - np.roll(flux, 1)) / (2.0 * dx)
        lap = (np.roll(u, -1) - 2.0 * u + np.roll(u, 1)) / dx ** 2
    else:
        dflux = (-np.roll(flux, -2) + 8.0 * np.roll(flux, -1) - 8.0 * np.roll(flux, 1) + np.roll(flux, 2)) / (12.0 * dx)
        lap = (-np.roll(u, -2) + 16.0 * np.roll(u, -1) - 30.0 * u + 16.0 * np.roll(u, 1) - np.roll(u, 2)) / (12.0 * dx ** 2)
    return nu * lap - dflux


def stable_time_step(u: np.ndarray, nu: float, dx: float) -> float:
    """Largest step kept for the explicit RK2 integrator (diffusive and advective limits)."""
    limit = 0.25 * dx ** 2 / nu
    peak = float(np.max(np.abs(u)))
    if peak > 0:
        limit = min(limit, 0.25 * dx / peak)
    return limit


def burgers_solve_fd(
    u0: Field1D,
    nu: float,
    t: float,
    dt: Optional[float] = None,
    refine: int = 4,
    order: int = 4,
) -> Field1D:
    """
    Conservative central differences in flux form, -(u^2/2)_x + nu u_xx, with RK2 (Heun).

    Args:
        u0: Initial field
        nu: Viscosity
        t: Final time
        dt: Time step; defaults to the stability limit
        refine: The solve runs on a grid ``refine`` times finer than u0's and is
            sampled back at u0's points
        order: Spatial order of the central stencils (2 or 4)

    Raises:
        SolverError: dt above the stability limit, or blow-up during integration
    """
    if nu <= 0 or t < 0:
        raise ParameterRangeError(f"need nu > 0 and t >= 0, got nu={nu}, t={t}")
    if order not in (2, 4) or refine < 1:
        raise ParameterRangeError(f"order must be 2 or 4 and refine >= 1, got order={order}, refine={refine}")
    n_fine = u0.n * refine
    u = u0.values.copy() if refine == 1 else resample(u0.values, n_fine)
    dx = 1.0 / n_fine
    limit = stable_time_step(u, nu, dx)
    if dt is None:
        dt = limit
    elif dt > limit:
        raise SolverError(f"time step {dt:.3e} exceeds the stability limit {limit:.3e}")
    steps = int(np.ceil(t / dt)) if t > 0 else 0
    if steps:
        dt = t / steps

    bound = 1e3 * max(1.0, float(np.max(np.abs(u))))
    for step in range(steps):
        stage = u + dt * _flux_rhs(u, nu, dx, order)
        u = 0.5 * (u + stage + dt * _flux_rhs(stage, nu, dx, order))
        if step % 100 == 0 and (not np.all(np.isfinite(u)) or np.max(np.abs(u)) > bound):
            raise SolverError(f"finite-difference Burgers solve blew up at t={step * dt:.4f}")
    logger.debug("FD Burgers: %d steps of %.3e on %d points", steps, dt, n_fine)
    return Field1D(u[::refine])
