"""Unit conventions, frequency conversion, and uniform grids.

All user-facing frequencies are spectroscopic wavenumbers in cm^-1 and all
times are femtoseconds; delay axes are reported in ps where that is the
natural scale.  Internal phase evolution always uses angular frequency in
rad/fs, obtained from a wavenumber by omega = 2*pi*c*nu with c in cm/fs.
Keeping the conversion in one place avoids silent factor-2*pi*c mistakes
in time-frequency products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

#: Speed of light in cm/fs (CODATA exact value scaled to these units).
C_CM_PER_FS = 2.99792458e-5

#: Multiply a wavenumber in cm^-1 by this to get angular frequency in rad/fs.
TWO_PI_C = 2.0 * math.pi * C_CM_PER_FS


def wavenumber_to_angular(nu):
    """Convert a wavenumber (cm^-1) to angular frequency (rad/fs).

    Accepts real or complex scalars and numpy arrays; the map is linear,
    so complex analytic continuations convert the same way.
    """
    return TWO_PI_C * nu


def angular_to_wavenumber(omega):
    """Inverse of :func:`wavenumber_to_angular`."""
    return omega / TWO_PI_C


@dataclass(frozen=True)
class Grid1D:
    """Uniform closed grid with ``n`` points from ``start`` to ``stop``."""

    start: float
    stop: float
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ConfigError(f"grid needs at least 2 points, got n={self.n}")
        if not (self.stop > self.start):
            raise ConfigError(
                f"grid requires stop > start, got [{self.start}, {self.stop}]"
            )
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ConfigError("grid endpoints must be finite")

    @property
    def spacing(self) -> float:
        return (self.stop - self.start) / (self.n - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.n)

    def __len__(self) -> int:
        return self.n


def make_grid(start: float, stop: float, n: int) -> Grid1D:
    """Validated constructor for :class:`Grid1D`."""
    return Grid1D(float(start), float(stop), int(n))


@dataclass(frozen=True)
class ExperimentConfig:
    """Detection settings shared by every Raman signal.

    omega_p      : narrowband Raman pump frequency (cm^-1)
    omega_r_bar  : reference-arm detector frequency (cm^-1)
    delay_T      : delay between the actinic pulse and the probe (fs)
    prefactor    : overall arbitrary-units scale; absorbs hbar powers,
                   pump/actinic intensities, and the flat field-commutator
                   normalization constant
    """

    omega_p: float = 12500.0
    omega_r_bar: float = 15500.0
    delay_T: float = 0.0
    prefactor: float = 1.0

    def __post_init__(self):
        if not self.omega_p > 0:
            raise ConfigError(f"omega_p must be positive, got {self.omega_p}")
        if not self.omega_r_bar > 0:
            raise ConfigError(
                f"omega_r_bar must be positive, got {self.omega_r_bar}"
            )
        if self.delay_T < 0:
            raise ConfigError(f"delay_T must be >= 0 fs, got {self.delay_T}")
        if not self.prefactor > 0:
            raise ConfigError(f"prefactor must be positive, got {self.prefactor}")
