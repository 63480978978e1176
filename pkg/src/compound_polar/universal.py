"""Improved lower bound on the compound SC rate of the whole class BMS(I).

At height one the two tree channels are a check and a variable combination of
two copies of the unknown channel.  The variable branch is worst for the BSC
of capacity I.  For the check branch the class is approximated by grid
mixtures ``sum_i alpha_i D_{p_i}`` with fixed entropy, and Z(a [x] a) becomes
the quadratic form ``alpha^T P alpha`` with ``P_ij = sqrt(1 - (p_i p_j)^2)``.
The form is concave on the constraint set, so dropping ``alpha >= 0`` and
solving the stationarity (KKT) linear system gives an upper bound on the
worst check-branch Z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bms import binary_entropy, bsc_with_capacity, make_bsc, bhattacharyya
from .density import quantization_delta

DEFAULT_KKT_GRID = 1024


class KktError(ArithmeticError):
    """The KKT system could not be solved to the required accuracy."""


@dataclass(frozen=True, eq=False)
class PolytopeProblem:
    m: int
    p: np.ndarray
    P_matrix: np.ndarray
    H_vec: np.ndarray
    target_entropy: float

    @property
    def capacity(self):
        return 1.0 - self.target_entropy


@dataclass(frozen=True, eq=False)
class KktSolution:
    alpha: np.ndarray
    lambda1: float
    lambda2: float
    objective: float
    problem: PolytopeProblem

    @property
    def residuals(self):
        pr = self.problem
        return (
            abs(math.fsum(self.alpha) - 1.0),
            abs(math.fsum(self.alpha * pr.H_vec) - pr.target_entropy),
        )

    @property
    def objective_from_multipliers(self):
        # stationarity 2 P a + l1 1 + l2 H = 0 gives a^T P a = -(l1 + l2 h) / 2
        return -0.5 * (self.lambda1 + self.lambda2 * self.problem.target_entropy)


def build_polytope(capacity, m=DEFAULT_KKT_GRID):
    if not 0.0 <= capacity <= 1.0:
        raise ValueError(f"capacity {capacity} outside [0, 1]")
    if m < 3:
        raise ValueError("polytope needs at least 3 grid points")
    p = np.linspace(0.0, 1.0, m)
    pp = np.outer(p, p)
    P = np.sqrt(np.maximum(0.0, (1.0 - pp) * (1.0 + pp)))
    H = binary_entropy((1.0 - p) / 2.0)
    return PolytopeProblem(m, p, P, H, 1.0 - capacity)


def quadratic_form(P, a):
    """Compensated ``a^T P a``."""
    return math.fsum((np.outer(a, a) * P).ravel())


def solve_kkt(problem, tol=1e-9):
    """Stationary point of ``a^T P a`` on ``{sum a = 1, a^T H = 1 - I}``."""
    m = problem.m
    A = np.zeros((m + 2, m + 2))
    A[:m, :m] = 2.0 * problem.P_matrix
    A[:m, m] = 1.0
    A[:m, m + 1] = problem.H_vec
    A[m, :m] = 1.0
    A[m + 1, :m] = problem.H_vec
    rhs = np.zeros(m + 2)
    rhs[m] = 1.0
    rhs[m + 1] = problem.target_entropy
    try:
        x = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise KktError(f"singular KKT system (m={m}, I={problem.capacity})") from exc
    if not np.all(np.isfinite(x)):
        raise KktError(f"non-finite KKT solution (m={m}, I={problem.capacity})")
    alpha = x[:m]
    sol = KktSolution(alpha, float(x[m]), float(x[m + 1]), quadratic_form(problem.P_matrix, alpha), problem)
    if max(sol.residuals) > tol:
        raise KktError(f"KKT residuals {sol.residuals} exceed {tol} (m={m}, I={problem.capacity})")
    return sol


def var_conv_max(capacity):
    """Largest Z(a (*) a) over BMS(capacity): Z(BSC)^2 for the matching BSC."""
    if not 0.0 <= capacity <= 1.0:
        raise ValueError(f"capacity {capacity} outside [0, 1]")
    return bhattacharyya(make_bsc(bsc_with_capacity(capacity))) ** 2


def chk_conv_max(capacity, m=DEFAULT_KKT_GRID):
    return solve_kkt(build_polytope(capacity, m)).objective


def improved_lower_bound(capacity, m=DEFAULT_KKT_GRID):
    """1 - (worst variable-branch Z + worst check-branch Z) / 2."""
    if not 0.0 < capacity < 1.0:
        raise ValueError(f"capacity {capacity} outside (0, 1)")
    return 1.0 - 0.5 * (var_conv_max(capacity) + chk_conv_max(capacity, m))


def baseline_lower_bound(capacity):
    """Height-zero bound 1 - Z(BSC) with the BSC of the given capacity."""
    return 1.0 - bhattacharyya(make_bsc(bsc_with_capacity(capacity)))


@dataclass(frozen=True)
class UniversalReport:
    capacity: float
    m: int
    var_max: float
    chk_max: float
    bound: float
    delta: float
    baseline: float

    def as_dict(self):
        return {
            "var_max": self.var_max,
            "chk_max": self.chk_max,
            "bound": self.bound,
            "m": self.m,
            "delta": self.delta,
        }


def universal_report(capacity, m=DEFAULT_KKT_GRID):
    var_max = var_conv_max(capacity)
    chk_max = chk_conv_max(capacity, m)
    return UniversalReport(
        capacity,
        m,
        var_max,
        chk_max,
        1.0 - 0.5 * (var_max + chk_max),
        quantization_delta(m),
        baseline_lower_bound(capacity),
    )
