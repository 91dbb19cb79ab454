"""Schmidt analysis of sampled two-photon amplitudes.

The joint amplitude is sampled on a rectangular frequency grid with
sqrt(dw_s * dw_r) quadrature weights folded into the matrix, so that the
singular values of the discrete matrix approximate the mode weights of
the continuum decomposition and the participation ratio converges under
grid refinement.  Entanglement is quantified by the inverse participation
ratio r_p = 1 / sum(lambda_n^2) of the normalized eigenvalues; r_p = 1
for a separable state and grows with the number of occupied mode pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateInputError
from .units import Grid1D, wavenumber_to_angular


@dataclass(frozen=True)
class AmplitudeMatrix:
    """Sampled amplitude M[i, j] = sqrt(dw_s dw_r) * Phi(s_i, r_j)."""

    values: np.ndarray
    s_axis: Grid1D
    r_axis: Grid1D

    def __post_init__(self):
        if self.values.shape != (self.s_axis.n, self.r_axis.n):
            raise ConfigError(
                f"amplitude matrix shape {self.values.shape} does not match "
                f"axes ({self.s_axis.n}, {self.r_axis.n})"
            )
        if not np.all(np.isfinite(self.values.real)) or not np.all(
            np.isfinite(self.values.imag)
        ):
            raise ConfigError("amplitude matrix contains non-finite entries")


@dataclass(frozen=True)
class SchmidtResult:
    """Normalized Schmidt spectrum and derived entanglement measures.

    lambdas sum to one and are sorted descending; r_p = 1/sum(lambda^2);
    reconstruction_error is the relative Frobenius mismatch of the
    decomposition rebuilt from all retained modes.
    """

    lambdas: np.ndarray
    r_p: float
    reconstruction_error: float
    s_modes: np.ndarray
    r_modes: np.ndarray


def sample_amplitude(source, s_axis: Grid1D, r_axis: Grid1D) -> AmplitudeMatrix:
    """Sample ``source(ws, wr)`` on the grid with quadrature weights.

    ``source`` must broadcast over numpy arrays (a column of s-frequencies
    against a row of r-frequencies), as the field amplitudes here do.
    """
    ws = s_axis.points[:, None]
    wr = r_axis.points[None, :]
    weight = np.sqrt(
        wavenumber_to_angular(s_axis.spacing) * wavenumber_to_angular(r_axis.spacing)
    )
    values = weight * np.asarray(source(ws, wr), dtype=complex)
    return AmplitudeMatrix(values=values, s_axis=s_axis, r_axis=r_axis)


def schmidt_decompose(m: AmplitudeMatrix) -> SchmidtResult:
    """Full Schmidt decomposition of a sampled amplitude via SVD."""
    norm = np.linalg.norm(m.values)
    if norm == 0.0:
        raise DegenerateInputError("cannot decompose an all-zero amplitude")
    u, s, vh = np.linalg.svd(m.values, full_matrices=False)
    total = float(np.sum(s**2))
    lambdas = s**2 / total
    rebuilt = (u * s) @ vh
    rec_err = float(np.linalg.norm(m.values - rebuilt) / norm)
    return SchmidtResult(
        lambdas=lambdas,
        r_p=float(1.0 / np.sum(lambdas**2)),
        reconstruction_error=rec_err,
        s_modes=u,
        r_modes=vh.conj().T,
    )


def schmidt_lambdas(m: AmplitudeMatrix) -> np.ndarray:
    """Normalized Schmidt eigenvalues only (skips the mode vectors).

    Cheaper than :func:`schmidt_decompose` for large grids where only the
    spectrum and r_p are needed, e.g. grid-refinement checks.
    """
    norm = np.linalg.norm(m.values)
    if norm == 0.0:
        raise DegenerateInputError("cannot decompose an all-zero amplitude")
    s = np.linalg.svd(m.values, compute_uv=False)
    return s**2 / float(np.sum(s**2))


def participation_ratio(lambdas) -> float:
    """Inverse participation ratio 1/sum(lambda^2) of a normalized spectrum."""
    lam = np.asarray(lambdas, dtype=float)
    if np.any(lam < 0):
        raise ConfigError("Schmidt eigenvalues must be non-negative")
    total = float(np.sum(lam))
    if abs(total - 1.0) > 1e-8:
        raise ConfigError(
            f"Schmidt eigenvalues must sum to 1 within 1e-8, got {total!r}"
        )
    return float(1.0 / np.sum(lam**2))
