"""Balanced spectra conditioned on purity.

For balanced dimensions (M = N) the most probable spectrum at fixed purity
pi solves a force balance with two multipliers; its eigenvalues are the
zeros of a Hermite polynomial mapped by x -> sqrt(eta) (x - 1/N), where

    eta = N^2 (N - 1) / (2 (N pi - 1)),      xi = -2 eta / N.

The construction stays meaningful past the point where the smallest zero
crosses 0 (the spectrum simply stops being a spectrum), which is how the
positivity threshold eta_plus is located: bisection on the smallest zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import BipartitionDims, Spectrum
from .errors import FeasibilityError
from .orthopoly import HermiteSpec, hermite_zeros

__all__ = [
    "IsopurityProblem",
    "FixedPuritySolution",
    "CriticalThreshold",
    "MultiplierReport",
    "ScanRow",
    "eta_from_purity",
    "purity_from_eta",
    "position_variance",
    "solve_isopurity",
    "critical_threshold",
    "multiplier_relation_check",
    "threshold_scan",
]


def eta_from_purity(n: int, purity: float) -> float:
    """Stiffness eta enforcing mean square sum pi: N^2(N-1)/(2(N pi - 1))."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 1.0 / n < purity <= 1.0:
        raise ValueError(
            f"purity must lie in (1/{n}, 1], got {purity}"
        )
    return n * n * (n - 1) / (2.0 * (n * purity - 1.0))


def purity_from_eta(n: int, eta: float) -> float:
    """Inverse map: pi = 1/N + N(N-1)/(2 eta)."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if eta <= 0:
        raise ValueError(f"eta must be > 0, got {eta}")
    return 1.0 / n + n * (n - 1) / (2.0 * eta)


def position_variance(n: int, purity: float) -> float:
    """Per-position eigenvalue variance (pi - 1/N)/N implied by purity pi."""
    return (purity - 1.0 / n) / n


@dataclass(frozen=True)
class IsopurityProblem:
    """Balanced fixed-purity problem, stored as (n, eta) with the target
    purity kept alongside for reporting."""

    n: int
    eta: float
    purity_target: float

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.eta <= 0:
            raise ValueError(f"eta must be > 0, got {self.eta}")

    @classmethod
    def from_purity(cls, n: int, purity: float) -> "IsopurityProblem":
        return cls(n=n, eta=eta_from_purity(n, purity), purity_target=float(purity))

    @classmethod
    def from_eta(cls, n: int, eta: float) -> "IsopurityProblem":
        return cls(n=n, eta=float(eta), purity_target=purity_from_eta(n, eta))

    @property
    def dims(self) -> BipartitionDims:
        return BipartitionDims(self.n, self.n)

    @property
    def beta(self) -> float:
        """Rescaled stiffness eta / N^3."""
        return self.eta / self.n**3

    @property
    def xi(self) -> float:
        """Linear multiplier fixed by the trace constraint, -2 eta / N."""
        return -2.0 * self.eta / self.n


@dataclass(frozen=True)
class FixedPuritySolution:
    """Mapped Hermite zeros for an isopurity problem.

    `values` always holds the descending zeros, feasible or not, so
    threshold scans can report how far below zero the smallest one sits.
    `spectrum` refuses to build a Spectrum from an infeasible solution.
    """

    problem: IsopurityProblem
    values: np.ndarray
    feasible: bool
    min_eigenvalue: float
    purity_residual: float

    @property
    def spectrum(self) -> Spectrum:
        if not self.feasible:
            raise FeasibilityError(
                f"no nonnegative spectrum at n={self.problem.n}, "
                f"eta={self.problem.eta:.6g}: smallest value "
                f"{self.min_eigenvalue:.6g} < 0"
            )
        return Spectrum.from_values(self.values)


def _mapped_zeros(n: int, eta: float) -> np.ndarray:
    spec = HermiteSpec(degree=n, shift=1.0 / n, scale=math.sqrt(eta))
    return hermite_zeros(spec)


def solve_isopurity(problem: IsopurityProblem) -> FixedPuritySolution:
    """Solve the balanced fixed-purity problem via mapped Hermite zeros."""
    zeros = _mapped_zeros(problem.n, problem.eta)
    values = zeros[::-1].copy()
    min_eig = float(zeros[0])
    actual = float(np.sum(values * values))
    return FixedPuritySolution(
        problem=problem,
        values=values,
        feasible=min_eig >= 0.0,
        min_eigenvalue=min_eig,
        purity_residual=abs(actual - problem.purity_target),
    )


@dataclass(frozen=True)
class CriticalThreshold:
    """Positivity threshold of the fixed-purity family at size n.

    eta_plus is the finite-n bisection result (smallest eigenvalue crosses
    zero); beta_plus and purity_critical are its large-n limits 2 and 5/(4n).
    """

    n: int
    eta_plus: float
    beta_plus_finite: float
    purity_plus_finite: float
    beta_plus: float
    purity_critical: float


def critical_threshold(n: int, tol: float = 1e-10) -> CriticalThreshold:
    """Bisect eta until the smallest mapped zero changes sign.

    The smallest zero 1/n + h_min/sqrt(eta) is increasing in eta, h_min < 0
    being the smallest raw Hermite zero. lo = n^2/8 is always infeasible
    (h_min <= -1/sqrt(2)) and hi = 8 n^3 always feasible (|h_min| <=
    sqrt(2n)), so the bracket never needs growing.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    lo = n * n / 8.0
    hi = 8.0 * n**3
    if _mapped_zeros(n, lo)[0] > 0 or _mapped_zeros(n, hi)[0] < 0:
        raise FeasibilityError(f"threshold bracket failed at n={n}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            # bracket has hit float64 resolution; 1e-10 absolute width is
            # unreachable once eta_plus grows past ~1e6 (ulp > tol there)
            break
        if _mapped_zeros(n, mid)[0] >= 0.0:
            hi = mid
        else:
            lo = mid
    eta_plus = 0.5 * (lo + hi)
    return CriticalThreshold(
        n=n,
        eta_plus=eta_plus,
        beta_plus_finite=eta_plus / n**3,
        purity_plus_finite=purity_from_eta(n, eta_plus),
        beta_plus=2.0,
        purity_critical=5.0 / (4.0 * n),
    )


@dataclass(frozen=True)
class MultiplierReport:
    """Closure checks for a solved isopurity problem: the multiplier sum
    rule xi + 2 eta pi = N(N-1) and the stationarity residual, both
    relative to max(|xi|, 1)."""

    sum_rule_residual: float
    force_residual: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return (
            self.sum_rule_residual <= self.tolerance
            and self.force_residual <= self.tolerance
        )


def multiplier_relation_check(
    problem: IsopurityProblem,
    solution: FixedPuritySolution,
    tolerance: float = 1e-8,
) -> MultiplierReport:
    from .coulomb import EnergyParams, gradient

    if not solution.feasible:
        raise FeasibilityError("multiplier check needs a feasible solution")
    scale = max(abs(problem.xi), 1.0)
    pi_actual = float(np.sum(solution.values**2))
    sum_rule = abs(problem.xi + 2.0 * problem.eta * pi_actual - problem.n * (problem.n - 1))
    params = EnergyParams(dims=problem.dims, eta=problem.eta, xi=problem.xi)
    g = gradient(solution.values, params)
    force = float(np.max(np.abs(g)))
    return MultiplierReport(
        sum_rule_residual=sum_rule / scale,
        force_residual=force / scale,
        tolerance=tolerance,
    )


@dataclass(frozen=True)
class ScanRow:
    n: int
    eta: float
    beta: float
    purity: float
    min_eigenvalue: float
    feasible: bool


def threshold_scan(n: int, etas: np.ndarray | list[float]) -> list[ScanRow]:
    """Feasibility scan over stiffness values, one row per eta."""
    rows = []
    for eta in np.asarray(etas, dtype=float):
        problem = IsopurityProblem.from_eta(n, float(eta))
        sol = solve_isopurity(problem)
        rows.append(
            ScanRow(
                n=n,
                eta=float(eta),
                beta=problem.beta,
                purity=problem.purity_target,
                min_eigenvalue=sol.min_eigenvalue,
                feasible=sol.feasible,
            )
        )
    return rows
