"""Pulse envelopes and two-photon spectral amplitudes.

Three probe states of light are supported:

* a classical Lorentzian pulse (also reused for the narrowband reference
  arm of the uncorrelated state),
* the entangled twin-photon amplitude produced by type-II down-conversion
  with group delays ``t1 < t2`` (entanglement time ``t2 - t1``),
* separable benchmarks: the correlated-separable weight |Phi|^2 and the
  fully factorized product of two single-photon Lorentzians.

Every evaluator accepts complex frequency arguments because the gated
Raman windows sample the amplitudes slightly off the real axis.  The
twin amplitude stays well behaved there: each interference term equals
(exp(2ix) - 1)/(2ix), which is entire and bounded for the small
imaginary shifts (a few dephasing widths) used by the signals.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import ConfigError, NonConvergenceError, SingularityError
from .units import angular_to_wavenumber, wavenumber_to_angular

#: Below this |argument| sinc switches to its Taylor series to avoid 0/0.
_SINC_SERIES_CUTOFF = 1e-4

#: Minimum |denominator| (cm^-1) before envelope evaluation is refused.
_POLE_GUARD = 1e-12


def complex_sinc(z):
    """Unnormalized sinc sin(z)/z for complex arguments, sinc(0) = 1.

    Uses the series 1 - z^2/6 + z^4/120 near the origin where the direct
    quotient loses accuracy.
    """
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < _SINC_SERIES_CUTOFF
    safe = np.where(small, 1.0, z)
    direct = np.sin(safe) / safe
    z2 = z * z
    series = 1.0 - z2 / 6.0 + z2 * z2 / 120.0
    out = np.where(small, series, direct)
    if out.ndim == 0:
        return out[()]
    return out


@dataclass(frozen=True)
class LorentzianEnvelope:
    """Field envelope A0 / (z - center + i*sigma) with center, sigma in cm^-1.

    sigma is the half width at half maximum of |E|^2.  Evaluation accepts
    any complex z with the pole at center - i*sigma avoided; the analytic
    continuation is exact because the form is rational.
    """

    amplitude: float = 1.0
    center: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ConfigError(f"envelope sigma must be positive, got {self.sigma}")
        if not np.isfinite(self.amplitude) or not np.isfinite(self.center):
            raise ConfigError("envelope amplitude and center must be finite")

    def __call__(self, z):
        den = np.asarray(z, dtype=complex) - self.center + 1j * self.sigma
        if np.min(np.abs(den)) < _POLE_GUARD:
            raise SingularityError(
                f"envelope evaluated within {_POLE_GUARD} cm^-1 of its pole "
                f"at {self.center - 1j * self.sigma}"
            )
        out = self.amplitude / den
        if out.ndim == 0:
            return out[()]
        return out


def envelope_eval(env: LorentzianEnvelope, z):
    """Function-style alias for :meth:`LorentzianEnvelope.__call__`."""
    return env(z)


@dataclass(frozen=True)
class TwinParams:
    """Entangled-pair parameters: pump envelope, degeneracy point, delays.

    ``pump`` is the down-conversion pump envelope evaluated at the signal
    + reference sum frequency; it is centered at 2*omega0 so that the sum
    frequency is distributed around twice the degenerate photon frequency.
    ``t1`` and ``t2`` (fs) are the group delays of the two photons inside
    the crystal; their difference is the entanglement time.
    """

    pump: LorentzianEnvelope
    omega0: float
    t1: float
    t2: float

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ConfigError(f"omega0 must be positive, got {self.omega0}")
        if self.t1 < 0:
            raise ConfigError(f"t1 must be >= 0 fs, got {self.t1}")
        if not self.t2 > self.t1:
            raise ConfigError(
                "entanglement time must be positive: "
                f"need t2 > t1, got t1={self.t1} fs, t2={self.t2} fs"
            )

    @property
    def entanglement_time(self) -> float:
        return self.t2 - self.t1

    @classmethod
    def from_pump(cls, omega0, sigma0, t1, t2, a0=1.0, pump_center=None):
        """Build with the conventional pump centering at 2*omega0."""
        center = 2.0 * omega0 if pump_center is None else pump_center
        return cls(
            pump=LorentzianEnvelope(amplitude=a0, center=center, sigma=sigma0),
            omega0=omega0,
            t1=t1,
            t2=t2,
        )


def twin_amplitude(p: TwinParams, zs, wr):
    """Joint spectral amplitude of the twin state at (zs, wr), cm^-1.

    zs may be complex (upper half-plane shifts from the gated windows and
    mildly negative shifts of a few dephasing widths are both fine); wr is
    the reference-arm frequency.  Broadcasting applies, so a column of zs
    against a row of wr samples a full matrix in one call.
    """
    ws0 = wavenumber_to_angular(np.asarray(zs, dtype=complex) - p.omega0)
    wr0 = wavenumber_to_angular(np.asarray(wr, dtype=complex) - p.omega0)
    x12 = 0.5 * (ws0 * p.t1 + wr0 * p.t2)
    x21 = 0.5 * (ws0 * p.t2 + wr0 * p.t1)
    pair_sum = complex_sinc(x12) * np.exp(1j * x12) + complex_sinc(x21) * np.exp(
        1j * x21
    )
    out = p.pump(np.asarray(zs, dtype=complex) + wr) * pair_sum
    if np.ndim(out) == 0:
        return np.asarray(out)[()]
    return out


def twin_support_window(p: TwinParams, wr, halfwidth_sigmas=20.0):
    """Frequency window (cm^-1) covering the zs-support of Phi(., wr).

    Centered where the pump envelope peaks for the given reference
    frequency, wide enough that the Lorentzian tails and the sinc arms
    are negligible at the edges.
    """
    center = p.pump.center - np.real(wr)
    half = halfwidth_sigmas * p.pump.sigma
    return center - half, center + half


def twin_amplitude_time(p: TwinParams, t, wr, rel_tol=1e-8, abs_tol=1e-12,
                        halfwidth_sigmas=20.0, limit=400):
    """Time-domain amplitude Phi(t, wr) = (1/2pi) int dw e^{-iwt} Phi(w, wr).

    The transform runs over angular frequency so the phase is w*t with t
    in fs.  Oscillatory weights are handled by the cos/sin forms of the
    adaptive Gauss-Kronrod integrator, which stay accurate for the few
    hundred cycles present across the pump bandwidth at t ~ 1 ps.
    """
    lo_nu, hi_nu = twin_support_window(p, wr, halfwidth_sigmas)
    lo = wavenumber_to_angular(lo_nu)
    hi = wavenumber_to_angular(hi_nu)

    def re_phi(w_ang):
        return twin_amplitude(p, angular_to_wavenumber(w_ang), wr).real

    def im_phi(w_ang):
        return twin_amplitude(p, angular_to_wavenumber(w_ang), wr).imag

    pieces = []
    worst = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for f in (re_phi, im_phi):
            for weight in ("cos", "sin"):
                val, err = integrate.quad(
                    f, lo, hi, weight=weight, wvar=t,
                    epsabs=abs_tol, epsrel=rel_tol, limit=limit,
                )
                pieces.append(val)
                worst = max(worst, err)
    rc, rs, ic, is_ = pieces
    value = ((rc + is_) + 1j * (ic - rs)) / (2.0 * np.pi)
    # Noise floor relative to the amplitude-bandwidth scale: in the causal
    # tail the four pieces cancel to ~0 and QUADPACK reports a pessimistic
    # roundoff bound there, which must not trip the convergence check.
    floor = 1e-3 * abs(p.pump.amplitude) * wavenumber_to_angular(1.0)
    allowed = max(abs_tol, floor, 10.0 * rel_tol * abs(value))
    if worst / (2.0 * np.pi) > allowed:
        raise NonConvergenceError(
            f"time-domain amplitude at t={t} fs did not converge: "
            f"error bound {worst:.3e}",
            estimate=value,
            error_bound=worst,
        )
    return value


def uncorrelated_amplitude(s_env: LorentzianEnvelope, r_env: LorentzianEnvelope,
                           ws, wr):
    """Fully separable two-photon amplitude Phi_s(ws) * Phi_r(wr)."""
    out = s_env(ws) * r_env(wr)
    if np.ndim(out) == 0:
        return np.asarray(out)[()]
    return out


def correlated_weight(p: TwinParams, ws, wr):
    """Spectral weight |Phi(ws, wr)|^2 of the correlated-separable state."""
    amp = twin_amplitude(p, ws, wr)
    out = np.abs(np.asarray(amp)) ** 2
    if np.ndim(out) == 0:
        return out[()]
    return out
