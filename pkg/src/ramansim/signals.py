"""Gated Raman windows and the full signal formulas.

Every frequency-gated signal shares one skeleton: a detection window R
(classical or photon-counting) evaluated at three resonance arguments of
the jumping vibration, combined as

    exp(-2 g T) * [ R(2g, O1) - c1 exp(-kT) (R(2g+k, O2) - R(2g+k, O3)) ]

with g the dephasing, k the tunneling rate, c1 the complex branching
factor, and T the actinic delay.  The counting channels differ only in
the window and in which side of the pump the resonances sit:

* gain/loss channels (0 or 2 photons at the sample detector) resonate at
  detunings +omega_-, +omega_+;
* the coincidence channel (1 photon) mirrors them to -omega_+, -omega_-;
* the classical probe-transmission signal is the gain set minus that
  mirrored set, so all four lines appear.

Window numerators take wavenumber arguments; every pole denominator,
rate, and phase is evaluated in angular units (rad/fs) so that time
exponents and frequency denominators share one unit system.  Outputs are
in arbitrary units, one scale per channel.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import ConfigError, NonConvergenceError, SingularityError
from .fields import (
    TwinParams,
    twin_amplitude,
    twin_amplitude_time,
    twin_support_window,
)
from .matter import TsjParams, absorption, f_i
from .units import ExperimentConfig, Grid1D, wavenumber_to_angular

_POLE_GUARD = 1e-9


@dataclass(frozen=True)
class QuadSettings:
    """Adaptive-quadrature knobs for the frequency-integrated windows."""

    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    halfwidth_sigmas: float = 20.0
    limit: int = 400


@dataclass(frozen=True)
class WindowArgs:
    """Decay gamma (cm^-1) and complex resonance Omega (cm^-1, Im <= 0)."""

    gamma: float
    omega: complex

    def __post_init__(self):
        if self.gamma < 0:
            raise ConfigError(f"window gamma must be >= 0, got {self.gamma}")
        if np.imag(self.omega) > 0:
            raise ConfigError(
                f"window resonance must have Im <= 0, got {self.omega}"
            )


def _amplitude_of(source):
    """Accept TwinParams or any callable (ws, wr) -> complex amplitude."""
    if isinstance(source, TwinParams):
        return lambda ws, wr: twin_amplitude(source, ws, wr)
    if callable(source):
        return source
    raise ConfigError(f"not a two-photon amplitude source: {source!r}")


def _pole_denominator(nu, cfg: ExperimentConfig, w: WindowArgs):
    den = wavenumber_to_angular(np.asarray(nu, dtype=complex)
                                - cfg.omega_p - w.omega)
    if np.imag(w.omega) == 0 and np.min(np.abs(den)) < wavenumber_to_angular(
        _POLE_GUARD
    ):
        raise SingularityError(
            f"window evaluated on its real pole at detuning {w.omega}"
        )
    return den


def window_classical(probe, cfg: ExperimentConfig, nu, w: WindowArgs):
    """Classical Raman window E*(nu) E(nu + i gamma) / (nu - w_p - Omega)."""
    num = np.conj(probe(nu)) * probe(np.asarray(nu, dtype=complex)
                                     + 1j * w.gamma)
    out = num / _pole_denominator(nu, cfg, w)
    if np.ndim(out) == 0:
        return np.asarray(out)[()]
    return out


def window_q21(source, cfg: ExperimentConfig, nu_s, nu_r, w: WindowArgs):
    """Two-photon gain window: both amplitude factors at the detector."""
    amp = _amplitude_of(source)
    num = np.conj(amp(nu_s, nu_r)) * amp(np.asarray(nu_s, dtype=complex)
                                         + 1j * w.gamma, nu_r)
    out = num / _pole_denominator(nu_s, cfg, w)
    if np.ndim(out) == 0:
        return np.asarray(out)[()]
    return out


def window_q11(source, cfg: ExperimentConfig, nu_s, nu_r, w: WindowArgs):
    """Coincidence window: second amplitude pinned at the complex resonance."""
    amp = _amplitude_of(source)
    pinned = amp(cfg.omega_p + w.omega - 1j * w.gamma, nu_r)
    num = np.conj(amp(nu_s, nu_r)) * pinned
    out = num / _pole_denominator(nu_s, cfg, w)
    if np.ndim(out) == 0:
        return np.asarray(out)[()]
    return out


def window_q01(source, cfg: ExperimentConfig, nu_r, w: WindowArgs,
               quad: QuadSettings | None = None, bounds=None):
    """Loss window: the sample-arm frequency is integrated out.

    Computes (1/2pi) int dw  Phi*(w, nu_r) Phi(w + i gamma, nu_r) /
    (w - w_p - Omega) by adaptive quadrature over the amplitude support.
    ``bounds`` (cm^-1) must be given for amplitude sources that are not
    TwinParams.
    """
    quad = quad or QuadSettings()
    if np.imag(w.omega) == 0:
        raise SingularityError(
            "loss window requires a resonance below the real axis"
        )
    amp = _amplitude_of(source)
    if bounds is None:
        if not isinstance(source, TwinParams):
            raise ConfigError(
                "explicit integration bounds are required for a bare "
                "amplitude callable"
            )
        bounds = twin_support_window(source, nu_r, quad.halfwidth_sigmas)
    lo, hi = float(bounds[0]), float(bounds[1])

    def integrand(nu):
        num = np.conj(amp(nu, nu_r)) * amp(nu + 1j * w.gamma, nu_r)
        return num / wavenumber_to_angular(nu - cfg.omega_p - w.omega)

    pole = cfg.omega_p + float(np.real(w.omega))
    points = [pole] if lo < pole < hi else None
    value, err = integrate.quad(
        integrand, lo, hi, points=points, limit=quad.limit,
        epsabs=quad.abs_tol, epsrel=quad.rel_tol, complex_func=True,
    )
    err_mag = max(abs(np.real(err)), abs(np.imag(err)))
    scale = wavenumber_to_angular(1.0) / (2.0 * np.pi)
    if err_mag > 10.0 * max(quad.abs_tol, quad.rel_tol * abs(value)):
        raise NonConvergenceError(
            f"loss-window quadrature did not converge: error bound "
            f"{err_mag:.3e} for value {abs(value):.3e}",
            estimate=value * scale,
            error_bound=err_mag * scale,
        )
    return value * scale


def _gain_args(m: TsjParams):
    g, k = m.gamma_a, m.k
    return (
        WindowArgs(2 * g, m.omega_minus - 1j * g),
        WindowArgs(2 * g + k, m.omega_minus - 1j * g),
        WindowArgs(2 * g + k, m.omega_plus - 1j * (g + k)),
    )


def _mirror_args(m: TsjParams):
    g, k = m.gamma_a, m.k
    return (
        WindowArgs(2 * g, -m.omega_plus - 1j * g),
        WindowArgs(2 * g + k, -m.omega_plus - 1j * g),
        WindowArgs(2 * g + k, -m.omega_minus - 1j * (g + k)),
    )


def _delay_bracket(w1, w2, w3, m: TsjParams, T: float):
    """Shared delay structure exp(-2gT) [W1 - c1 exp(-kT) (W2 - W3)]."""
    g_ang = wavenumber_to_angular(m.gamma_a)
    k_ang = wavenumber_to_angular(m.k)
    return np.exp(-2.0 * g_ang * T) * (
        w1 - m.tunneling_weight * np.exp(-k_ang * T) * (w2 - w3)
    )


def fsrs_classical(probe, cfg: ExperimentConfig, m: TsjParams, nu, T: float):
    """Classical probe-transmission Raman spectrum at detection frequency nu.

    Gain-side resonances at detunings omega_-, omega_+ minus the mirrored
    set at -omega_+, -omega_-; each side carries the common delay bracket.
    """
    if T < 0:
        raise ConfigError(f"actinic delay must be >= 0, got T={T}")
    gain = [window_classical(probe, cfg, nu, w) for w in _gain_args(m)]
    mirror = [window_classical(probe, cfg, nu, w) for w in _mirror_args(m)]
    val = (_delay_bracket(*gain, m, T) - _delay_bracket(*mirror, m, T))
    out = -np.imag(2.0 * cfg.prefactor * m.strength * val)
    if np.ndim(out) == 0:
        return float(out)
    return out


def _counting_windows(ns: int, source, cfg: ExperimentConfig, m: TsjParams,
                      nu_s, nu_r, quad: QuadSettings | None):
    if ns == 0:
        return [window_q01(source, cfg, nu_r, w, quad) for w in _gain_args(m)]
    if ns == 2:
        return [window_q21(source, cfg, nu_s, nu_r, w) for w in _gain_args(m)]
    if ns == 1:
        return [window_q11(source, cfg, nu_s, nu_r, w) for w in _mirror_args(m)]
    raise ConfigError(f"photon number ns must be 0, 1 or 2, got {ns}")


def _counting_combine(ns: int, windows, cfg: ExperimentConfig, m: TsjParams,
                      T: float):
    sign = 1.0 if ns == 0 else -1.0
    val = _delay_bracket(*windows, m, T)
    return sign * np.imag(cfg.prefactor * m.strength * val)


def ifsrs(ns: int, source, cfg: ExperimentConfig, m: TsjParams, nu_s,
          T: float, quad: QuadSettings | None = None, nu_r=None,
          include_background: bool = False):
    """Photon-counting Raman signal for ns detected sample photons.

    ns=0 ignores nu_s (loss channel, integrated detection); ns=2 peaks at
    detunings +omega_-/+omega_+; ns=1 at -omega_+/-omega_-.  The
    coincidence background term is added only on request since it carries
    no Raman resonances.
    """
    if T < 0:
        raise ConfigError(f"actinic delay must be >= 0, got T={T}")
    if nu_r is None:
        nu_r = cfg.omega_r_bar
    windows = _counting_windows(ns, source, cfg, m, nu_s, nu_r, quad)
    out = _counting_combine(ns, windows, cfg, m, T)
    if ns == 1 and include_background:
        out = out + ifsrs11_background(source, cfg, m, nu_s, T, nu_r)
    if np.ndim(out) == 0:
        return float(out)
    return out


def ifsrs11_background(source, cfg: ExperimentConfig, m: TsjParams, nu_s,
                       T: float, nu_r=None):
    """Non-resonant background of the coincidence channel.

    Real part of Phi*(nu_s) [Phi(nu_s) - exp(-2gT) Phi(nu_s + 2i g)] /
    (2 g); smooth in nu_s, so it only offsets the resonant spectrum.
    """
    if nu_r is None:
        nu_r = cfg.omega_r_bar
    amp = _amplitude_of(source)
    g_ang = wavenumber_to_angular(m.gamma_a)
    decay = np.exp(-2.0 * g_ang * T)
    base = amp(nu_s, nu_r)
    shifted = amp(np.asarray(nu_s, dtype=complex) + 2j * m.gamma_a, nu_r)
    val = np.conj(base) * (base - decay * shifted) / (2.0 * g_ang)
    out = np.real(cfg.prefactor * m.strength * val)
    if np.ndim(out) == 0:
        return float(out)
    return out


def ifsrs21_two_freq(source, cfg: ExperimentConfig, m: TsjParams, nu_s1,
                     nu_s2, T: float, nu_r=None):
    """Gain signal with both sample photons frequency-resolved.

    Contains the detector-exchange interference term whose phase advances
    at the detector detuning difference as T scans; the matter content
    itself carries no T dependence in this double-frequency gating.
    """
    if nu_r is None:
        nu_r = cfg.omega_r_bar
    amp = _amplitude_of(source)
    g = wavenumber_to_angular(m.gamma_a)
    k = wavenumber_to_angular(m.k)
    wm = wavenumber_to_angular(m.omega_minus)
    wp = wavenumber_to_angular(m.omega_plus)
    c1 = m.tunneling_weight

    def pole_lo(x):
        return x - wm + 1j * g

    def pole_hi(x):
        return x - wp + 1j * (g + k)

    def one_ordering(nu_a, nu_b):
        xa = wavenumber_to_angular(nu_a - cfg.omega_p)
        xb = wavenumber_to_angular(nu_b - cfg.omega_p)
        diff = wavenumber_to_angular(nu_b - nu_a)
        direct = (1.0 / (2.0 * g * pole_lo(xb))
                  - c1 / (k + 2.0 * g) * (1.0 / pole_lo(xb) - 1.0 / pole_hi(xb)))
        exchange = (1.0 / (pole_lo(xa) * (diff - 2j * g))
                    - c1 / (diff - 1j * (2.0 * g + k))
                    * (1.0 / pole_lo(xa) - 1.0 / pole_hi(xa)))
        return np.conj(amp(nu_a, nu_r)) * (
            amp(nu_a, nu_r) * direct
            + 1j * amp(nu_b, nu_r) * np.exp(1j * diff * T) * exchange
        )

    val = one_ordering(nu_s1, nu_s2) + one_ordering(nu_s2, nu_s1)
    out = np.imag(cfg.prefactor * m.strength * val)
    if np.ndim(out) == 0:
        return float(out)
    return out


def ifsrs_time_11(p: TwinParams, cfg: ExperimentConfig, m: TsjParams,
                  t_s: float, T: float, quad: QuadSettings | None = None,
                  include_background: bool = True):
    """Time-gated coincidence signal at sample-detector time t_s (fs).

    Zero before the actinic delay; afterwards the resonant part beats at
    the pump-shifted jump frequencies while the smooth background grows
    toward |Phi(t_s)|^2 / (2 gamma).
    """
    if t_s < T:
        return 0.0
    quad = quad or QuadSettings()
    nu_r = cfg.omega_r_bar
    g = wavenumber_to_angular(m.gamma_a)
    k = wavenumber_to_angular(m.k)
    dw_hi = wavenumber_to_angular(m.omega_plus - cfg.omega_p)
    dw_lo = wavenumber_to_angular(m.omega_minus - cfg.omega_p)
    phi_t = twin_amplitude_time(p, t_s, nu_r, quad.rel_tol, quad.abs_tol,
                                quad.halfwidth_sigmas, quad.limit)
    a_hi = twin_amplitude(p, cfg.omega_p - m.omega_plus + 1j * m.gamma_a, nu_r)
    a_hik = twin_amplitude(
        p, cfg.omega_p - m.omega_plus + 1j * (m.gamma_a + m.k), nu_r
    )
    a_lo = twin_amplitude(p, cfg.omega_p - m.omega_minus + 1j * m.gamma_a, nu_r)
    dt = t_s - T
    bracket = (a_hi * np.exp((1j * dw_hi + g) * dt)
               - m.tunneling_weight * np.exp(-k * t_s)
               * (a_hik * np.exp((1j * dw_hi + k + g) * dt)
                  - a_lo * np.exp((1j * dw_lo + g) * dt)))
    resonant = np.real(np.conj(phi_t) * np.exp(-2.0 * g * t_s) * bracket)
    out = resonant
    if include_background:
        out = out + abs(phi_t) ** 2 * (1.0 - np.exp(-2.0 * g * t_s)) / (2.0 * g)
    return float(cfg.prefactor * m.strength * out)


def ifsrs_time_21(p: TwinParams, cfg: ExperimentConfig, m: TsjParams,
                  t_s1: float, t_s2: float, T: float = 0.0,
                  quad: QuadSettings | None = None):
    """Time-gated gain signal for two sample-photon detection times (fs).

    Double sum over detection orderings of Phi*(t_i) Phi(t_j) times the
    pump phase and the jump-state correlation; detection times are
    measured from the actinic event, which is where the closed form pins
    the vibrational preparation (the T argument does not enter it).
    """
    del T
    quad = quad or QuadSettings()
    nu_r = cfg.omega_r_bar
    wp_ang = wavenumber_to_angular(cfg.omega_p)
    times = (float(t_s1), float(t_s2))
    cache = {}
    for t in set(times):
        cache[t] = twin_amplitude_time(p, t, nu_r, quad.rel_tol, quad.abs_tol,
                                       quad.halfwidth_sigmas, quad.limit)
    total = 0.0 + 0.0j
    for ti in times:
        for tj in times:
            total += (np.conj(cache[ti]) * cache[tj]
                      * np.exp(-1j * wp_ang * (tj - ti))
                      * f_i(m, tj - ti, ti))
    return float(cfg.prefactor * np.real(total))


def _sep_bracket(detune_ang, m: TsjParams, mirror: bool):
    g = wavenumber_to_angular(m.gamma_a)
    k = wavenumber_to_angular(m.k)
    wm = wavenumber_to_angular(m.omega_minus)
    wp = wavenumber_to_angular(m.omega_plus)
    if mirror:
        first = detune_ang + wp + 1j * g
        second = detune_ang + wm + 1j * (g + k)
    else:
        first = detune_ang - wm + 1j * g
        second = detune_ang - wp + 1j * (g + k)
    return (1.0 / (2.0 * g * first)
            - m.tunneling_weight / (k + 2.0 * g)
            * (1.0 / first - 1.0 / second))


def ifsrs_sep(ns: int, state: str, light, cfg: ExperimentConfig, m: TsjParams,
              nu_s, nu_r=None, quad: QuadSettings | None = None):
    """Counting signals for the dephased (separable) benchmark states.

    ``state`` selects the spectral weight: "correlated" uses |Phi|^2 of
    the twin parameters in ``light``; "uncorrelated" expects ``light`` to
    be a (s_env, r_env) envelope pair and uses the factorized product.
    These closed forms carry no actinic-delay dependence at all: high
    spectral, zero temporal resolution.
    """
    if nu_r is None:
        nu_r = cfg.omega_r_bar
    if state == "correlated":
        twin = light
        amp = _amplitude_of(twin)

        def weight(ws):
            return np.abs(amp(ws, nu_r)) ** 2

        bounds_src = twin
    elif state == "uncorrelated":
        s_env, r_env = light
        r_fixed = abs(r_env(nu_r)) ** 2

        def weight(ws):
            return np.abs(s_env(ws)) ** 2 * r_fixed

        bounds_src = None
    else:
        raise ConfigError(f"unknown separable state {state!r}")

    sign = 1.0 if ns == 1 else -1.0
    mirror = ns == 1
    if ns in (1, 2):
        detune = wavenumber_to_angular(np.asarray(nu_s, dtype=float)
                                       - cfg.omega_p)
        val = weight(np.asarray(nu_s, dtype=float)) * _sep_bracket(
            detune, m, mirror
        )
        out = sign * np.imag(cfg.prefactor * m.strength * val)
        if np.ndim(out) == 0:
            return float(out)
        return out
    if ns != 0:
        raise ConfigError(f"photon number ns must be 0, 1 or 2, got {ns}")

    quad = quad or QuadSettings()
    if bounds_src is not None:
        lo, hi = twin_support_window(bounds_src, nu_r, quad.halfwidth_sigmas)
    else:
        half = quad.halfwidth_sigmas * s_env.sigma
        lo, hi = s_env.center - half, s_env.center + half

    def integrand(nu):
        det = wavenumber_to_angular(nu - cfg.omega_p)
        return weight(nu) * _sep_bracket(det, m, mirror)

    value, err = integrate.quad(
        integrand, lo, hi,
        points=[cfg.omega_p + m.omega_minus, cfg.omega_p + m.omega_plus],
        limit=quad.limit, epsabs=quad.abs_tol, epsrel=quad.rel_tol,
        complex_func=True,
    )
    err_mag = max(abs(np.real(err)), abs(np.imag(err)))
    if err_mag > 10.0 * max(quad.abs_tol, quad.rel_tol * abs(value)):
        raise NonConvergenceError(
            "separable loss-channel quadrature did not converge",
            estimate=value, error_bound=err_mag,
        )
    scale = wavenumber_to_angular(1.0) / (2.0 * np.pi)
    return float(sign * np.imag(cfg.prefactor * m.strength * value * scale))


SCAN_KINDS = (
    "fsrs", "ifsrs01", "ifsrs11", "ifsrs21",
    "sep-correlated-01", "sep-correlated-11", "sep-correlated-21",
    "sep-uncorrelated-01", "sep-uncorrelated-11", "sep-uncorrelated-21",
    "absorption",
)


@dataclass(frozen=True)
class SignalMap:
    """2-D signal over (detuning offset, actinic delay T)."""

    nu_axis: Grid1D
    T_axis: Grid1D
    values: np.ndarray
    kind: str

    def __post_init__(self):
        if self.values.shape != (self.nu_axis.n, self.T_axis.n):
            raise ConfigError(
                f"signal map shape {self.values.shape} does not match axes "
                f"({self.nu_axis.n}, {self.T_axis.n})"
            )
        if not np.all(np.isfinite(self.values)):
            raise ConfigError("signal map contains non-finite values")


def _parallel_map(fn, items, threads):
    if threads is None or threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    out = [None] * len(items)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {pool.submit(fn, x): i for i, x in enumerate(items)}
        for fut, i in futures.items():
            out[i] = fut.result()
    return out


def scan2d(kind: str, cfg: ExperimentConfig, m: TsjParams,
           nu_axis: Grid1D, T_axis: Grid1D, twin: TwinParams | None = None,
           probe=None, s_env=None, r_env=None,
           quad: QuadSettings | None = None, threads: int | None = None,
           include_background: bool = False) -> SignalMap:
    """Dense signal map over a detuning-offset grid and a delay grid.

    Offsets on ``nu_axis`` are relative to the pump for the sample-arm
    detector (and relative to the reference setting for the loss
    channels, which carry no sample-arm frequency).  Deterministic:
    identical inputs produce bit-identical maps regardless of threading.
    """
    if kind not in SCAN_KINDS:
        raise ConfigError(f"unknown scan kind {kind!r}; expected {SCAN_KINDS}")
    if kind == "fsrs" and probe is None:
        raise ConfigError("fsrs scan requires a probe envelope")
    if (kind.startswith("ifsrs") or "correlated" in kind) and twin is None:
        raise ConfigError(f"{kind} scan requires twin parameters")
    if kind.startswith("sep-uncorrelated") and (s_env is None or r_env is None):
        raise ConfigError(f"{kind} scan requires both single-photon envelopes")
    offs = nu_axis.points
    Ts = T_axis.points
    values = np.empty((nu_axis.n, T_axis.n))

    if kind == "absorption":
        col = absorption(m, cfg.omega_p + offs, cfg.prefactor)
        values[:] = col[:, None]
    elif kind == "fsrs":
        wins_g = [window_classical(probe, cfg, cfg.omega_p + offs, w)
                  for w in _gain_args(m)]
        wins_m = [window_classical(probe, cfg, cfg.omega_p + offs, w)
                  for w in _mirror_args(m)]
        for j, T in enumerate(Ts):
            val = (_delay_bracket(*wins_g, m, T)
                   - _delay_bracket(*wins_m, m, T))
            values[:, j] = -np.imag(2.0 * cfg.prefactor * m.strength * val)
    elif kind in ("ifsrs11", "ifsrs21"):
        ns = 1 if kind == "ifsrs11" else 2
        wins = _counting_windows(ns, twin, cfg, m, cfg.omega_p + offs,
                                 cfg.omega_r_bar, quad)
        for j, T in enumerate(Ts):
            col = _counting_combine(ns, wins, cfg, m, T)
            if ns == 1 and include_background:
                col = col + ifsrs11_background(twin, cfg, m,
                                               cfg.omega_p + offs, T)
            values[:, j] = col
    elif kind == "ifsrs01":
        def windows_at(off):
            return _counting_windows(0, twin, cfg, m, None,
                                     cfg.omega_r_bar + off, quad)

        win_rows = _parallel_map(windows_at, list(offs), threads)
        for i, wins in enumerate(win_rows):
            for j, T in enumerate(Ts):
                values[i, j] = _counting_combine(0, wins, cfg, m, T)
    elif kind.startswith("sep-"):
        _, state, channel = kind.split("-")
        light = twin if state == "correlated" else (s_env, r_env)
        if channel == "01":
            def value_at(off):
                return ifsrs_sep(0, state, light, cfg, m, None,
                                 cfg.omega_r_bar + off, quad)

            col = np.asarray(_parallel_map(value_at, list(offs), threads))
        else:
            ns = int(channel[0])
            col = ifsrs_sep(ns, state, light, cfg, m, cfg.omega_p + offs,
                            cfg.omega_r_bar, quad)
        values[:] = np.asarray(col)[:, None]
    return SignalMap(nu_axis=nu_axis, T_axis=T_axis, values=values, kind=kind)
