"""Time-frequency spectrograms and marginal-width metrics.

The spectrogram of a spectral field slice F is the symmetric transform

    W(nu, t) = int dD/2pi  F*(nu - D/2) F(nu + D/2) exp(-i D t),

which is real for any F, integrates over t to the spectral intensity
|F(nu)|^2, and integrates over nu to the temporal intensity profile.
Resolution is compared between fields through the full width at half
maximum of the two marginals; their product is the figure of merit and is
about 3.7 ps*cm^-1 for any Lorentzian pulse (ln 2 / 2*pi*c, bandwidth
independent) but can be far smaller for a twin-photon slice because its
time and frequency structure are not Fourier conjugate.

The D-integral runs on a uniform trapezoid over +/- ``halfwidth_sigmas``
pump widths with enough points that the implied aliasing period safely
exceeds the requested time span.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MultiModalMarginalError, RamanSimError
from .fields import LorentzianEnvelope, TwinParams, twin_amplitude
from .units import Grid1D, wavenumber_to_angular

#: Imaginary residue above this fraction of the real peak aborts the map.
_IMAG_TOL = 1e-8

#: Aliasing-period safety factor for the trapezoid point count.
_NYQUIST_MARGIN = 4.0

_MIN_DELTA_POINTS = 4097


@dataclass(frozen=True)
class Spectrogram:
    """Real-valued map over (frequency, time): values[i, j] = W(nu_i, t_j)."""

    t_axis: Grid1D
    nu_axis: Grid1D
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        if self.values.shape != (self.nu_axis.n, self.t_axis.n):
            raise RamanSimError(
                f"spectrogram shape {self.values.shape} does not match axes "
                f"({self.nu_axis.n}, {self.t_axis.n})"
            )
        if not np.all(np.isfinite(self.values)):
            raise RamanSimError("spectrogram contains non-finite values")

    def frequency_marginal(self) -> np.ndarray:
        """Integral over time; proportional to the spectral intensity."""
        return np.trapezoid(self.values, self.t_axis.points, axis=1)

    def time_marginal(self) -> np.ndarray:
        """Integral over frequency; proportional to the temporal intensity."""
        return np.trapezoid(self.values, self.nu_axis.points, axis=0)

    def total_mass(self) -> float:
        """Double integral with angular frequency measure over 2*pi."""
        per_t = np.trapezoid(self.values, self.t_axis.points, axis=1)
        return float(
            np.trapezoid(per_t, wavenumber_to_angular(self.nu_axis.points))
            / (2.0 * np.pi)
        )


def wigner_from_slice(field_slice, t_axis: Grid1D, nu_axis: Grid1D, sigma: float,
                      halfwidth_sigmas: float = 20.0, label: str = "") -> Spectrogram:
    """Spectrogram of an arbitrary complex spectral slice F(nu).

    ``field_slice`` must broadcast over complex numpy arrays of
    wavenumbers; ``sigma`` (cm^-1) sets the D-integration window.
    """
    w_half = halfwidth_sigmas * wavenumber_to_angular(sigma)
    t_span = max(abs(t_axis.stop), abs(t_axis.start), t_axis.stop - t_axis.start)
    n_delta = int(max(
        _MIN_DELTA_POINTS,
        np.ceil(_NYQUIST_MARGIN * 2.0 * w_half * t_span / (2.0 * np.pi)) + 1,
    ))
    d_ang = np.linspace(-w_half, w_half, n_delta)
    d_nu = d_ang / wavenumber_to_angular(1.0)
    trap = np.full(n_delta, d_ang[1] - d_ang[0])
    trap[0] *= 0.5
    trap[-1] *= 0.5

    nus = nu_axis.points[:, None]
    corr = (np.conj(field_slice(nus - 0.5 * d_nu[None, :]))
            * field_slice(nus + 0.5 * d_nu[None, :])) * trap[None, :]
    phases = np.exp(-1j * np.outer(d_ang, t_axis.points))
    w_map = (corr @ phases) / (2.0 * np.pi)

    peak = np.max(np.abs(w_map.real))
    residue = np.max(np.abs(w_map.imag))
    if peak == 0.0 or residue > _IMAG_TOL * peak:
        raise RamanSimError(
            f"spectrogram transform is not real: imaginary residue "
            f"{residue:.3e} vs peak {peak:.3e}"
        )
    return Spectrogram(t_axis=t_axis, nu_axis=nu_axis, values=w_map.real,
                       label=label)


def wigner_classical(env: LorentzianEnvelope, t_axis: Grid1D, nu_axis: Grid1D,
                     halfwidth_sigmas: float = 20.0) -> Spectrogram:
    """Spectrogram of a classical Lorentzian probe pulse."""
    return wigner_from_slice(env, t_axis, nu_axis, env.sigma,
                             halfwidth_sigmas, label="classical")


def wigner_twin(p: TwinParams, wr: float, t_axis: Grid1D, nu_axis: Grid1D,
                halfwidth_sigmas: float = 20.0) -> Spectrogram:
    """Spectrogram of the twin amplitude at fixed reference frequency."""
    return wigner_from_slice(lambda z: twin_amplitude(p, z, wr),
                             t_axis, nu_axis, p.pump.sigma,
                             halfwidth_sigmas, label="twin")


@dataclass(frozen=True)
class MarginalWidths:
    """FWHM widths of the dominant spectrogram feature and their product."""

    delta_nu: float          # cm^-1
    delta_t: float           # ps
    product: float           # ps * cm^-1
    nu_resolution_limited: bool
    t_resolution_limited: bool


def _dominant_fwhm(x, y):
    """FWHM of the connected above-half-maximum region around the peak.

    Crossings are linearly interpolated.  Raises when the dominant region
    holds less than half of the total above-half-maximum mass, i.e. when
    no single feature dominates and a FWHM would be ambiguous.
    """
    y = np.clip(np.asarray(y, dtype=float), 0.0, None)
    if np.max(y) <= 0.0:
        raise MultiModalMarginalError("marginal has no positive mass")
    i_peak = int(np.argmax(y))
    half = 0.5 * y[i_peak]

    i_lo = i_peak
    while i_lo > 0 and y[i_lo - 1] >= half:
        i_lo -= 1
    i_hi = i_peak
    while i_hi < len(y) - 1 and y[i_hi + 1] >= half:
        i_hi += 1

    above = y >= half
    dominant_mass = float(np.sum(y[i_lo:i_hi + 1]))
    total_mass = float(np.sum(y[above]))
    if dominant_mass < 0.5 * total_mass:
        raise MultiModalMarginalError(
            "no single dominant feature: the peak region holds "
            f"{dominant_mass / total_mass:.1%} of the above-half-maximum mass"
        )

    limited = (i_hi - i_lo) < 2
    if i_lo == 0:
        x_lo = x[0]
    else:
        frac = (half - y[i_lo - 1]) / (y[i_lo] - y[i_lo - 1])
        x_lo = x[i_lo - 1] + frac * (x[i_lo] - x[i_lo - 1])
    if i_hi == len(y) - 1:
        x_hi = x[-1]
    else:
        frac = (y[i_hi] - half) / (y[i_hi] - y[i_hi + 1])
        x_hi = x[i_hi] + frac * (x[i_hi + 1] - x[i_hi])

    width = x_hi - x_lo
    if limited:
        width = max(width, x[1] - x[0])
    return float(width), limited


def marginal_widths(s: Spectrogram) -> MarginalWidths:
    """FWHM of both marginals and the time-bandwidth product in ps*cm^-1."""
    d_nu, nu_limited = _dominant_fwhm(s.nu_axis.points, s.frequency_marginal())
    d_t_fs, t_limited = _dominant_fwhm(s.t_axis.points, s.time_marginal())
    d_t = d_t_fs * 1e-3
    return MarginalWidths(
        delta_nu=d_nu,
        delta_t=d_t,
        product=d_nu * d_t,
        nu_resolution_limited=nu_limited,
        t_resolution_limited=t_limited,
    )
