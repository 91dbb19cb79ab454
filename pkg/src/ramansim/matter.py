"""Two-state-jump vibrational model.

A single excited-state vibration starts at frequency omega_ac + delta and
tunnels at rate k to omega_ac - delta, with electronic dephasing gamma_a;
the low-temperature limit of the stochastic two-state frequency-jump
problem.  This module provides the closed forms that every signal is
built from: the linear absorption lineshape and the two four-point matter
correlation functions (reduced to two time arguments) that the Raman
detection windows convolve.

Frequencies are stored in cm^-1; time-domain evaluations convert to
rad/fs internally.  The common leading factor i/hbar^3 of the correlation
functions is omitted here (all signals are in arbitrary units) and
reinstated by the detection formulas that need the 90-degree rotation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .units import wavenumber_to_angular


@dataclass(frozen=True)
class TsjParams:
    """Two-state-jump parameters (frequencies and rates in cm^-1).

    omega_a is the electronic transition center used by the absorption
    lineshape; None defers it until a configuration resolves it (the
    default convention places it at omega_p + omega_ac so absorption
    peaks line up with the Raman resonances on a common detuning axis).
    """

    omega_ac: float = 500.0
    delta: float = 120.0
    k: float = 18.0
    gamma_a: float = 9.0
    omega_a: float | None = None
    mu_ag: float = 1.0
    alpha_ac: float = 1.0

    def __post_init__(self):
        if not self.delta > 0:
            raise ConfigError(f"level splitting delta must be > 0, got {self.delta}")
        if not self.omega_ac - self.delta > 0:
            raise ConfigError(
                "both jump frequencies must be positive: need omega_ac > delta, "
                f"got omega_ac={self.omega_ac}, delta={self.delta}"
            )
        if self.k < 0:
            raise ConfigError(f"tunneling rate k must be >= 0, got {self.k}")
        if not self.gamma_a > 0:
            raise ConfigError(f"dephasing gamma_a must be > 0, got {self.gamma_a}")

    @property
    def omega_plus(self) -> float:
        return self.omega_ac + self.delta

    @property
    def omega_minus(self) -> float:
        return self.omega_ac - self.delta

    @property
    def tunneling_weight(self) -> complex:
        """Dimensionless branching factor 2*i*delta / (k + 2*i*delta)."""
        return 2j * self.delta / (self.k + 2j * self.delta)

    @property
    def strength(self) -> float:
        """Single-mode coupling weight |mu_ag|^2 * alpha_ac^2."""
        return self.mu_ag**2 * self.alpha_ac**2


def absorption(p: TsjParams, nu, prefactor=1.0):
    """Linear absorption of the jumping vibration at wavenumber nu.

    Two Lorentzian-like peaks at omega_a +/- delta whose widths mix the
    dephasing gamma_a and the tunneling rate k; field spectrum, dipole
    strength, and hbar factors are folded into ``prefactor``.
    """
    if p.omega_a is None:
        raise ConfigError("absorption requires omega_a to be set")
    nu = np.asarray(nu, dtype=float)
    w_lo = p.omega_a - p.delta
    w_hi = p.omega_a + p.delta
    core = ((p.k + 1j * p.delta) / (nu - w_lo + 1j * p.gamma_a)
            + 1j * p.delta / (nu - w_hi + 1j * (p.gamma_a + p.k)))
    out = -np.imag(prefactor * core / (p.k + 2j * p.delta))
    if out.ndim == 0:
        return out[()]
    return out


def _bracket_i(w_minus_ang, w_plus_ang, weight, k_ang, t1):
    return (np.exp(-1j * w_minus_ang * t1)
            - weight * (np.exp(-1j * w_minus_ang * t1)
                        - np.exp(-(k_ang + 1j * w_plus_ang) * t1)))


def _bracket_ii(w_minus_ang, w_plus_ang, weight, k_ang, t1):
    return (np.exp(1j * w_plus_ang * t1)
            - weight * (np.exp(1j * w_plus_ang * t1)
                        - np.exp(-(k_ang - 1j * w_minus_ang) * t1)))


def _correlation(p: TsjParams, t1, t2, bracket, sign):
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    live = (t1 >= 0) & (t2 >= 0)
    t1s = np.where(live, t1, 0.0)
    t2s = np.where(live, t2, 0.0)
    g_ang = wavenumber_to_angular(p.gamma_a)
    k_ang = wavenumber_to_angular(p.k)
    wm = wavenumber_to_angular(p.omega_minus)
    wp = wavenumber_to_angular(p.omega_plus)
    weight = p.tunneling_weight * np.exp(-k_ang * t2s)
    val = (sign * p.strength * np.exp(-g_ang * (t1s + 2.0 * t2s))
           * bracket(wm, wp, weight, k_ang, t1s))
    out = np.where(live, val, 0.0 + 0.0j)
    if out.ndim == 0:
        return out[()]
    return out


def f_i(p: TsjParams, t1, t2):
    """Raman correlation for pathways ending in a different jump state.

    Leading oscillation at -omega_minus during t1 with dephasing envelope
    exp(-gamma_a (t1 + 2 t2)); vanishes for negative times.  The k=0
    limit collapses to the bare omega_plus coherence.
    """
    return _correlation(p, t1, t2, _bracket_i, +1.0)


def f_ii(p: TsjParams, t1, t2):
    """Raman correlation for pathways returning to the initial state.

    Conjugate-frequency partner of :func:`f_i` (leading oscillation at
    +omega_plus, tunneling term at -(k - i*omega_minus)), with an overall
    minus sign relative to f_i.
    """
    return _correlation(p, t1, t2, _bracket_ii, -1.0)
