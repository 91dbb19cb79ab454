"""Independent numerical cross-checks.

The signal formulas here cannot be validated against external data, so
trust comes from redundancy: every delicate numerical path in the main
code (Gauss-Kronrod quadrature from scipy, LAPACK SVD from numpy) has a
from-scratch counterpart built on a different algorithm.  Tests and the
CLI ``--verify`` mode evaluate both sides and compare.

* :func:`quad_adaptive` - recursive adaptive Simpson with Richardson
  extrapolation, for complex integrands.
* :func:`trapezoid_complex` - brute-force uniform trapezoid at a caller
  chosen resolution (used at 2**20 points as the quadrature referee).
* :func:`svd_reference` - one-sided Jacobi singular values for complex
  matrices.
"""

from __future__ import annotations

import numpy as np

from .errors import NonConvergenceError


def _simpson(f_a, f_m, f_b, a, b):
    return (b - a) / 6.0 * (f_a + 4.0 * f_m + f_b)


def quad_adaptive(f, a, b, tol=1e-10, max_depth=48):
    """Adaptive Simpson integral of a complex-valued f over [a, b].

    Returns (value, error_estimate).  Subdivides until the Richardson
    error estimate of each panel is below its share of ``tol``; raises
    :class:`NonConvergenceError` if the recursion depth limit is hit.
    """
    a = float(a)
    b = float(b)
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = _simpson(fa, fm, fb, a, b)

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = _simpson(fa, flm, fm, a, m)
        right = _simpson(fm, frm, fb, m, b)
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0, abs(delta) / 15.0
        if depth >= max_depth:
            raise NonConvergenceError(
                f"adaptive Simpson hit depth {max_depth} on [{a}, {b}]",
                estimate=left + right,
                error_bound=abs(delta),
            )
        lv, le = recurse(a, m, fa, flm, fm, left, tol / 2.0, depth + 1)
        rv, re_ = recurse(m, b, fm, frm, fb, right, tol / 2.0, depth + 1)
        return lv + rv, le + re_

    return recurse(a, b, fa, fm, fb, whole, tol, 0)


def trapezoid_complex(f, a, b, n):
    """Uniform n-point trapezoid rule for a vectorized complex integrand."""
    x = np.linspace(float(a), float(b), int(n))
    y = np.asarray(f(x), dtype=complex)
    return complex(np.trapezoid(y, x))


def svd_reference(matrix, tol=1e-13, max_sweeps=60):
    """Singular values by one-sided Jacobi rotations, descending order.

    Orthogonalizes column pairs with complex plane rotations until every
    off-diagonal Gram element is negligible, then reads the singular
    values off as column norms.  Independent of LAPACK; intended for
    matrices up to ~128x128 where the O(n^4)-ish cost is irrelevant.
    """
    a = np.array(matrix, dtype=complex)
    if a.ndim != 2:
        raise ValueError("svd_reference expects a 2-D matrix")
    if a.shape[0] < a.shape[1]:
        a = a.conj().T
    m, n = a.shape
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                cp = a[:, p]
                cq = a[:, q]
                app = float(np.real(np.vdot(cp, cp)))
                aqq = float(np.real(np.vdot(cq, cq)))
                apq = complex(np.vdot(cp, cq))
                if app == 0.0 or aqq == 0.0:
                    continue
                rel = abs(apq) / np.sqrt(app * aqq)
                off = max(off, rel)
                if rel <= tol:
                    continue
                # Rotate within the (p, q) plane: absorb the phase of the
                # Gram element, then apply the real Jacobi angle.
                phase = apq / abs(apq)
                tau = (aqq - app) / (2.0 * abs(apq))
                t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                if tau == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                new_p = c * cp - s * np.conj(phase) * cq
                new_q = s * phase * cp + c * cq
                a[:, p] = new_p
                a[:, q] = new_q
        if off <= tol:
            break
    else:
        raise NonConvergenceError(
            f"Jacobi SVD did not converge in {max_sweeps} sweeps "
            f"(residual {off:.3e})"
        )
    sigma = np.sqrt(np.sum(np.abs(a) ** 2, axis=0))
    return np.sort(sigma)[::-1]
