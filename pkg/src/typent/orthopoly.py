"""Zeros and coefficients of scaled Laguerre and Hermite polynomials.

The typical entanglement spectra computed elsewhere in this package are the
zeros of L_N^(a)(xi * x) (unbalanced, unconstrained) and of H_N(s * (x - b))
(balanced, fixed purity).  Zeros are found the Golub-Welsch way: eigenvalues
of the symmetric tridiagonal Jacobi matrix of the family, here computed by an
in-repo implicit-shift QL iteration, then polished by a single Newton step
using three-term recurrences.  Polynomials are never evaluated through their
expanded coefficients; the recurrences carry a joint rescaling of the value
pair so degrees in the hundreds stay inside floating-point range.

Jacobi matrices (in the unscaled variable y):

* Laguerre L_N^(a):  diag_k = 2k + a + 1 (k = 0..N-1), off_k = sqrt(k (k + a))
* Hermite  H_N:      diag_k = 0,                      off_k = sqrt(k / 2)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError

__all__ = [
    "LaguerreSpec",
    "HermiteSpec",
    "tridiagonal_eigenvalues",
    "laguerre_jacobi",
    "hermite_jacobi",
    "laguerre_zeros",
    "hermite_zeros",
    "laguerre_coefficients",
    "laguerre_log_coefficients",
    "laguerre_relative_residuals",
    "hermite_relative_residuals",
]

_RESCALE_LIMIT = 1e250
_QL_MAX_SWEEPS = 60


@dataclass(frozen=True)
class LaguerreSpec:
    """L_N^(a)(xi * x): degree N, order a > -1, scale xi > 0 on the argument."""

    degree: int
    order: float
    scale: float

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError(f"degree must be >= 0, got {self.degree}")
        if not self.order > -1.0:
            raise ValueError(f"order must be > -1, got {self.order}")
        if not self.scale > 0.0:
            raise ValueError(f"scale must be > 0, got {self.scale}")


@dataclass(frozen=True)
class HermiteSpec:
    """H_N(s * (x - b)): degree N, shift b, scale s > 0."""

    degree: int
    shift: float
    scale: float

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError(f"degree must be >= 0, got {self.degree}")
        if not self.scale > 0.0:
            raise ValueError(f"scale must be > 0, got {self.scale}")


def tridiagonal_eigenvalues(diag, offdiag) -> np.ndarray:
    """Eigenvalues of a symmetric tridiagonal matrix, ascending.

    Implicit-shift QL with Wilkinson-style shifts, eigenvalues only (the
    classic tqli/imtqlx iteration).  Cubic convergence in practice; raises
    ConvergenceError if any eigenvalue needs more than _QL_MAX_SWEEPS sweeps.
    """
    d = np.asarray(diag, dtype=float).copy()
    n = d.size
    if n == 0:
        return d
    e = np.zeros(n)
    if n > 1:
        off = np.asarray(offdiag, dtype=float)
        if off.size != n - 1:
            raise ValueError(f"offdiag must have length {n - 1}, got {off.size}")
        e[: n - 1] = off
    eps = np.finfo(float).eps

    for l in range(n):
        sweeps = 0
        while True:
            # find the first negligible off-diagonal at or after l
            for m in range(l, n - 1):
                if abs(e[m]) <= eps * (abs(d[m]) + abs(d[m + 1])):
                    break
            else:
                m = n - 1
            if m == l:
                break
            sweeps += 1
            if sweeps > _QL_MAX_SWEEPS:
                raise ConvergenceError(
                    f"QL iteration stalled at eigenvalue {l} after {sweeps} sweeps"
                )
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # underflow recovery: drop the rotation chain and retry
                    d[i + 1] -= p
                    e[m] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            else:
                d[l] -= p
                e[l] = g
                e[m] = 0.0
    d.sort()
    return d


def laguerre_jacobi(spec: LaguerreSpec) -> tuple[np.ndarray, np.ndarray]:
    """(diagonal, off-diagonal) of the degree-N Laguerre Jacobi matrix in y."""
    n, a = spec.degree, spec.order
    k = np.arange(n, dtype=float)
    diag = 2.0 * k + a + 1.0
    koff = np.arange(1, n, dtype=float)
    off = np.sqrt(koff * (koff + a))
    return diag, off


def hermite_jacobi(spec: HermiteSpec) -> tuple[np.ndarray, np.ndarray]:
    """(diagonal, off-diagonal) of the degree-N Hermite Jacobi matrix in y."""
    n = spec.degree
    diag = np.zeros(n)
    koff = np.arange(1, n, dtype=float)
    off = np.sqrt(koff / 2.0)
    return diag, off


def _laguerre_pair(n: int, a: float, y: float) -> tuple[float, float]:
    """(L_n^(a)(y), L_{n-1}^(a)(y)) up to a common positive rescaling."""
    if n == 0:
        return 1.0, 0.0
    prev = 1.0
    cur = 1.0 + a - y
    for k in range(1, n):
        nxt = ((2.0 * k + 1.0 + a - y) * cur - (k + a) * prev) / (k + 1.0)
        prev, cur = cur, nxt
        mag = max(abs(prev), abs(cur))
        if mag > _RESCALE_LIMIT:
            prev /= _RESCALE_LIMIT
            cur /= _RESCALE_LIMIT
    return cur, prev


def _hermite_pair(n: int, y: float) -> tuple[float, float]:
    """(H_n(y), H_{n-1}(y)) up to a common positive rescaling."""
    if n == 0:
        return 1.0, 0.0
    prev = 1.0
    cur = 2.0 * y
    for k in range(1, n):
        nxt = 2.0 * y * cur - 2.0 * k * prev
        prev, cur = cur, nxt
        mag = max(abs(prev), abs(cur))
        if mag > _RESCALE_LIMIT:
            prev /= _RESCALE_LIMIT
            cur /= _RESCALE_LIMIT
    return cur, prev


def _laguerre_newton_step(n: int, a: float, y: float) -> float:
    """Newton correction L/L' at y; the derivative uses the same-order identity
    y L_n' = n L_n - (n + a) L_{n-1}, so a single recurrence pass suffices."""
    val, below = _laguerre_pair(n, a, y)
    deriv = (n * val - (n + a) * below) / y
    if deriv == 0.0 or not math.isfinite(deriv):
        return 0.0
    return val / deriv


def _hermite_newton_step(n: int, y: float) -> float:
    """Newton correction H/H' at y, with H_n' = 2 n H_{n-1}."""
    val, below = _hermite_pair(n, y)
    deriv = 2.0 * n * below
    if deriv == 0.0 or not math.isfinite(deriv):
        return 0.0
    return val / deriv


def _polish(y: np.ndarray, step) -> np.ndarray:
    """One guarded Newton step per zero; a step crossing toward a neighbor is
    rejected (the QL eigenvalue is already good to roundoff in that case)."""
    if y.size == 0:
        return y
    if y.size == 1:
        guard = np.array([math.inf])
    else:
        gaps = np.diff(y)
        guard = 0.45 * np.minimum(
            np.concatenate(([gaps[0]], gaps)), np.concatenate((gaps, [gaps[-1]]))
        )
    out = y.copy()
    for i in range(y.size):
        delta = step(y[i])
        if math.isfinite(delta) and abs(delta) < guard[i]:
            out[i] = y[i] - delta
    return out


def laguerre_zeros(spec: LaguerreSpec) -> np.ndarray:
    """Zeros of L_N^(a)(xi x) in x, ascending; all strictly positive.

    Relative Newton residual |L| / |L' * y| at each returned zero is at the
    1e-12 contract or (typically) far below it.
    """
    n, a, xi = spec.degree, spec.order, spec.scale
    if n == 0:
        return np.empty(0)
    diag, off = laguerre_jacobi(spec)
    y = tridiagonal_eigenvalues(diag, off)
    y = _polish(y, lambda t: _laguerre_newton_step(n, a, t))
    return y / xi


def hermite_zeros(spec: HermiteSpec) -> np.ndarray:
    """Zeros of H_N(s (x - b)) in x, ascending; symmetric about b."""
    n, b, s = spec.degree, spec.shift, spec.scale
    if n == 0:
        return np.empty(0)
    diag, off = hermite_jacobi(spec)
    y = tridiagonal_eigenvalues(diag, off)
    y = _polish(y, lambda t: _hermite_newton_step(n, t))
    return b + y / s


def laguerre_relative_residuals(spec: LaguerreSpec, zeros_x) -> np.ndarray:
    """|L(y)| / |L'(y) * y| at y = xi * x for each supplied zero."""
    n, a, xi = spec.degree, spec.order, spec.scale
    out = np.empty(len(zeros_x))
    for i, x in enumerate(np.asarray(zeros_x, dtype=float)):
        y = xi * x
        out[i] = abs(_laguerre_newton_step(n, a, y)) / abs(y)
    return out


def hermite_relative_residuals(spec: HermiteSpec, zeros_x) -> np.ndarray:
    """|H(y) / H'(y)| / max(|y|, 1) at y = s (x - b) for each supplied zero.

    The floor at |y| = 1 keeps the odd-degree zero at y = 0 meaningful.
    """
    n, b, s = spec.degree, spec.shift, spec.scale
    out = np.empty(len(zeros_x))
    for i, x in enumerate(np.asarray(zeros_x, dtype=float)):
        y = s * (x - b)
        out[i] = abs(_hermite_newton_step(n, y)) / max(abs(y), 1.0)
    return out


def laguerre_log_coefficients(spec: LaguerreSpec) -> np.ndarray:
    """ln c_nu, nu = 0..N, of L_N^(a)(xi x) = sum_nu c_nu (-x)^nu.

    With m = a + N + 1 (a real stand-in for the larger dimension),
    c_nu = xi^nu / nu! * C(m - 1, N - nu); all c_nu are positive, so logs
    are well defined.  Log-gamma arithmetic keeps degree-500 inputs exact
    to the usual ~1e-14 relative level.
    """
    n, a, xi = spec.degree, spec.order, spec.scale
    m = a + n + 1.0
    nu = np.arange(n + 1, dtype=float)
    lg = math.lgamma
    logs = np.empty(n + 1)
    for i, v in enumerate(nu):
        logs[i] = (
            v * math.log(xi)
            - lg(v + 1.0)
            + lg(m)
            - lg(n - v + 1.0)
            - lg(m - n + v)
        )
    return logs


def laguerre_coefficients(spec: LaguerreSpec) -> np.ndarray:
    """Coefficients c_0..c_N with L_N^(a)(xi x) = sum_nu c_nu (-x)^nu.

    Vieta on the expansion ties c_{N-1}/c_N to the zero sum; tests hold that
    to 1e-10 relative.  Raises OverflowError when any coefficient exceeds
    the double range; use laguerre_log_coefficients for those inputs.
    """
    logs = laguerre_log_coefficients(spec)
    if np.max(logs) > math.log(np.finfo(float).max):
        raise OverflowError(
            "coefficient exponent exceeds double range; "
            "use laguerre_log_coefficients instead"
        )
    return np.exp(logs)
