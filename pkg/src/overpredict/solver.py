"""Dense LP and least-distance QP kernels with KKT certificates.

Both problems share the inequality form ``A x >= lower`` with few
variables ``d`` and many rows ``m``.  The LP is solved through its dual
(``max lower.T lam  s.t.  A.T lam = cost, lam >= 0``) by a two-phase revised
simplex whose basis has only ``d`` columns, so each pivot costs one
``m x d`` pricing pass.  The least-distance QP is solved by a dual
active-set method that adds the most violated row each step.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import Infeasible, IterationLimit, Unbounded

log = logging.getLogger(__name__)

__all__ = [
    "FEAS_TOL",
    "GAP_TOL",
    "FlopCounter",
    "LinearProgram",
    "LeastDistanceQP",
    "SolveReport",
    "solve_lp",
    "solve_ldqp",
    "lp_certificate",
    "ldqp_certificate",
]

FEAS_TOL = 1e-9
GAP_TOL = 1e-7
PIVOT_TOL = 1e-11


class FlopCounter:
    """Coarse arithmetic-operation tally; one instance per solve."""

    def __init__(self):
        self.count = 0

    def add(self, n) -> None:
        self.count += int(n)


def _as_problem_arrays(A, lower):
    A = np.array(A, dtype=float, ndmin=2)
    lower = np.array(lower, dtype=float).reshape(-1)
    if A.shape[0] != lower.size:
        raise ValueError("A and lower have inconsistent row counts")
    if A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError("need at least one row and one variable")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(lower))):
        raise ValueError("problem data must be finite")
    A.setflags(write=False)
    lower.setflags(write=False)
    return A, lower


@dataclass(frozen=True)
class LinearProgram:
    """minimize ``cost @ x`` subject to ``A @ x >= lower``."""

    cost: np.ndarray
    A: np.ndarray
    lower: np.ndarray

    def __post_init__(self):
        A, lower = _as_problem_arrays(self.A, self.lower)
        cost = np.array(self.cost, dtype=float).reshape(-1)
        if cost.size != A.shape[1]:
            raise ValueError("cost length must equal the number of columns of A")
        if not np.all(np.isfinite(cost)):
            raise ValueError("cost must be finite")
        cost.setflags(write=False)
        object.__setattr__(self, "cost", cost)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "lower", lower)


@dataclass(frozen=True)
class LeastDistanceQP:
    """minimize ``||x - target||**2`` subject to ``A @ x >= lower``."""

    target: np.ndarray
    A: np.ndarray
    lower: np.ndarray

    def __post_init__(self):
        A, lower = _as_problem_arrays(self.A, self.lower)
        target = np.array(self.target, dtype=float).reshape(-1)
        if target.size != A.shape[1]:
            raise ValueError("target length must equal the number of columns of A")
        target.setflags(write=False)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "lower", lower)


@dataclass(frozen=True)
class SolveReport:
    x: np.ndarray
    objective: float
    max_violation: float
    duality_gap: float
    iterations: int
    multipliers: np.ndarray = field(repr=False)
    flops: int = 0

    @property
    def active(self) -> np.ndarray:
        return np.flatnonzero(self.multipliers > 0)


def lp_certificate(lp: LinearProgram, report: SolveReport) -> dict:
    """Residuals of the LP optimality conditions at ``report``."""
    x, lam = report.x, report.multipliers
    slack = lp.A @ x - lp.lower
    return {
        "primal_violation": float(max(0.0, -slack.min())),
        "dual_min": float(lam.min()),
        "stationarity": float(np.max(np.abs(lp.A.T @ lam - lp.cost))),
        "complementarity": float(np.max(np.abs(lam * slack))),
        "duality_gap": float(abs(lp.cost @ x - lp.lower @ lam)),
    }


def ldqp_certificate(qp: LeastDistanceQP, report: SolveReport) -> dict:
    x, lam = report.x, report.multipliers
    slack = qp.A @ x - qp.lower
    return {
        "primal_violation": float(max(0.0, -slack.min())),
        "dual_min": float(lam.min()),
        "stationarity": float(np.max(np.abs(x - qp.target - qp.A.T @ lam))),
        "complementarity": float(np.max(np.abs(lam * slack))),
        "duality_gap": float(report.duality_gap),
    }


# ---------------------------------------------------------------------------
# LP: two-phase revised simplex on the dual standard form


class _DualSimplex:
    """Standard form ``min g @ lam, M @ lam = rhs, lam >= 0`` with ``M = A.T``.

    Columns ``0..m-1`` are the rows of ``A`` (sign-flipped so ``rhs >= 0``);
    columns ``m..m+d-1`` are phase-1 artificials.
    """

    def __init__(self, A, cost, counter, max_iter):
        self.m, self.d = A.shape
        self.sign = np.where(cost < 0, -1.0, 1.0)
        # scaled constraint matrix, stored row-per-column for fast pricing
        self.cols = A * self.sign
        self.rhs = cost * self.sign
        self.basis = list(range(self.m, self.m + self.d))
        self.counter = counter
        self.max_iter = max_iter
        self.iterations = 0

    def column(self, j):
        if j < self.m:
            return self.cols[j]
        e = np.zeros(self.d)
        e[j - self.m] = 1.0
        return e

    def basis_matrix(self):
        return np.column_stack([self.column(j) for j in self.basis])

    def factor(self):
        lu = scipy.linalg.lu_factor(self.basis_matrix(), check_finite=False)
        self.counter.add(2 * self.d ** 3 // 3)
        return lu

    def basic_values(self, lu):
        self.counter.add(2 * self.d ** 2)
        return scipy.linalg.lu_solve(lu, self.rhs, check_finite=False)

    def run(self, g_real, g_art, tol):
        """Iterate to optimality for cost ``(g_real, g_art)``; returns status."""
        d, m = self.d, self.m
        degenerate_run = 0
        while True:
            if self.iterations >= self.max_iter:
                return "iteration_limit"
            lu = self.factor()
            lam_b = self.basic_values(lu)
            g_b = np.array([g_real[j] if j < m else g_art for j in self.basis])
            pi = scipy.linalg.lu_solve(lu, g_b, trans=1, check_finite=False)
            reduced = g_real - self.cols @ pi
            self.counter.add(2 * d ** 2 + 2 * m * d + m)
            reduced[self.basis_real_mask()] = np.inf
            use_bland = degenerate_run > 2 * d + 10
            if use_bland:
                candidates = np.flatnonzero(reduced < -tol)
                if candidates.size == 0:
                    return "optimal"
                q = int(candidates[0])
            else:
                q = int(np.argmin(reduced))
                if reduced[q] >= -tol:
                    return "optimal"
            w = scipy.linalg.lu_solve(lu, self.column(q), check_finite=False)
            self.counter.add(2 * d ** 2 + 2 * d)
            scale = max(1.0, float(np.max(np.abs(w))))
            rows = np.flatnonzero(w > PIVOT_TOL * scale)
            if rows.size == 0:
                return "unbounded"
            ratios = np.maximum(lam_b[rows], 0.0) / w[rows]
            best = ratios.min()
            ties = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
            # smallest basic-variable index among ties
            leave = int(min(ties, key=lambda i: self.basis[i]))
            degenerate_run = degenerate_run + 1 if best <= 1e-14 else 0
            self.basis[leave] = q
            self.iterations += 1

    def basis_real_mask(self):
        return [j for j in self.basis if j < self.m]

    def drive_out_artificials(self):
        """Pivot zero-level artificials out of the basis where possible."""
        for pos in range(self.d):
            if self.basis[pos] < self.m:
                continue
            lu = self.factor()
            e = np.zeros(self.d)
            e[pos] = 1.0
            row = scipy.linalg.lu_solve(lu, e, trans=1, check_finite=False)
            coeffs = self.cols @ row
            coeffs[self.basis_real_mask()] = 0.0
            self.counter.add(2 * self.m * self.d)
            j = int(np.argmax(np.abs(coeffs)))
            if abs(coeffs[j]) > 1e-9:
                self.basis[pos] = j
            else:
                log.debug("redundant equality row %d kept with artificial basic", pos)

    def multipliers(self):
        lu = self.factor()
        lam_b = np.maximum(self.basic_values(lu), 0.0)
        lam = np.zeros(self.m)
        for pos, j in enumerate(self.basis):
            if j < self.m:
                lam[j] = lam_b[pos]
        return lam, lu


def solve_lp(
    lp: LinearProgram,
    tol: float = FEAS_TOL,
    max_iter: int | None = None,
    counter: FlopCounter | None = None,
) -> SolveReport:
    """Solve ``lp`` and return the primal point with its dual multipliers.

    The reduced costs of the dual simplex are exactly the primal slacks
    ``A x - lower``, so the optimality test doubles as the primal
    feasibility check at tolerance ``tol``.
    """
    counter = counter if counter is not None else FlopCounter()
    A, lower, cost = lp.A, lp.lower, lp.cost
    m, d = A.shape
    if max_iter is None:
        max_iter = 50 * (m + d)
    simplex = _DualSimplex(A, cost, counter, max_iter)

    status = simplex.run(np.zeros(m), 1.0, tol)
    if status == "iteration_limit":
        raise IterationLimit("phase 1 hit the iteration cap", _partial_report(lp, simplex))
    lam, _ = simplex.multipliers()
    art = np.abs(A.T @ lam - cost)
    if art.max() > 1e-8 * max(1.0, float(np.abs(cost).max())):
        # dual infeasible: the primal is unbounded or infeasible
        if not np.any(cost) or _primal_infeasible(A, lower, tol, max_iter):
            raise Infeasible("no x satisfies A x >= lower")
        raise Unbounded("objective is unbounded below on the feasible set")
    simplex.drive_out_artificials()

    status = simplex.run(-lower, 0.0, tol)
    if status == "unbounded":
        raise Infeasible("dual unbounded: no x satisfies A x >= lower")
    report = _partial_report(lp, simplex)
    if status == "iteration_limit":
        raise IterationLimit("phase 2 hit the iteration cap", report)
    return report


def _primal_infeasible(A, lower, tol, max_iter):
    probe = _DualSimplex(A, np.zeros(A.shape[1]), FlopCounter(), max_iter)
    probe.run(np.zeros(A.shape[0]), 1.0, tol)
    probe.drive_out_artificials()
    return probe.run(-lower, 0.0, tol) == "unbounded"


def _partial_report(lp, simplex):
    lam, lu = simplex.multipliers()
    g_b = np.array([-lp.lower[j] if j < simplex.m else 0.0 for j in simplex.basis])
    pi = scipy.linalg.lu_solve(lu, g_b, trans=1, check_finite=False)
    x = -simplex.sign * pi
    slack = lp.A @ x - lp.lower
    objective = float(lp.cost @ x)
    return SolveReport(
        x=x,
        objective=objective,
        max_violation=float(-slack.min()),
        duality_gap=float(abs(objective - lp.lower @ lam)),
        iterations=simplex.iterations,
        multipliers=lam,
        flops=simplex.counter.count,
    )


# ---------------------------------------------------------------------------
# least-distance QP


def solve_ldqp(
    qp: LeastDistanceQP,
    tol: float = FEAS_TOL,
    max_iter: int | None = None,
    counter: FlopCounter | None = None,
    method: str = "active_set",
) -> SolveReport:
    """Euclidean projection of ``qp.target`` onto ``{x : A x >= lower}``.

    ``method`` is ``"active_set"`` (dual active-set, exact up to roundoff)
    or ``"hildreth"`` (dual coordinate ascent, tolerance-limited).
    """
    counter = counter if counter is not None else FlopCounter()
    if method == "active_set":
        x, lam, iterations = _ldqp_active_set(qp, tol, max_iter, counter)
    elif method == "hildreth":
        x, lam, iterations = _ldqp_hildreth(qp, tol, max_iter, counter)
    else:
        raise ValueError(f"unknown QP method {method!r}")
    return _qp_report(qp, x, lam, iterations, counter)


def _qp_report(qp, x, lam, iterations, counter):
    slack = qp.A @ x - qp.lower
    objective = float(np.sum((x - qp.target) ** 2))
    at_lam = qp.A.T @ lam
    dual = float(-(at_lam @ at_lam) - 2.0 * lam @ (qp.A @ qp.target - qp.lower))
    return SolveReport(
        x=x,
        objective=objective,
        max_violation=float(-slack.min()),
        duality_gap=objective - dual,
        iterations=iterations,
        multipliers=lam,
        flops=counter.count,
    )


def _ldqp_active_set(qp, tol, max_iter, counter):
    A, lower = qp.A, qp.lower
    m, d = A.shape
    if max_iter is None:
        max_iter = 50 * (m + d)
    x = qp.target.copy()
    active: list[int] = []
    u = np.zeros(0)
    iterations = 0
    norms = np.linalg.norm(A, axis=1)
    counter.add(2 * m * d)
    while True:
        slack = A @ x - lower
        counter.add(2 * m * d)
        p = int(np.argmin(slack))
        if slack[p] >= -tol:
            break
        n_p = A[p]
        u_plus = np.append(u, 0.0)
        while True:
            iterations += 1
            if iterations > max_iter:
                lam = _expand(active, u, m)
                raise IterationLimit(
                    "active-set QP hit the iteration cap",
                    _qp_report(qp, x, lam, iterations, counter),
                )
            q = len(active)
            if q:
                N = A[active].T
                r = np.linalg.lstsq(N, n_p, rcond=None)[0]
                z = n_p - N @ r
                counter.add(4 * d * q * q + 4 * d * q)
            else:
                r = np.zeros(0)
                z = n_p.copy()
            zz = float(z @ z)
            if np.sqrt(zz) > 1e-10 * norms[p]:
                t2 = -(n_p @ x - lower[p]) / zz
            else:
                t2 = np.inf
            pos = np.flatnonzero(r > 1e-12)
            if pos.size:
                ratios = u_plus[pos] / r[pos]
                t1 = float(ratios.min())
                k = int(pos[np.flatnonzero(ratios <= t1)[0]])
            else:
                t1, k = np.inf, -1
            if not np.isfinite(t1) and not np.isfinite(t2):
                raise Infeasible("constraint set is empty (dependent violated row)")
            t = min(t1, t2)
            if np.isfinite(t2):
                x = x + t * z
                counter.add(2 * d)
            u_plus[:q] -= t * r
            u_plus[q] += t
            if t2 <= t1:
                active.append(p)
                u = u_plus
                break
            # drop a blocking constraint and retry the same violated row
            del active[k]
            u_plus = np.delete(u_plus, k)
    return x, _expand(active, u, m), iterations


def _expand(active, u, m):
    lam = np.zeros(m)
    for j, value in zip(active, u):
        lam[j] += max(value, 0.0)
    return lam


def _ldqp_hildreth(qp, tol, max_iter, counter):
    A, lower = qp.A, qp.lower
    m, d = A.shape
    if max_iter is None:
        max_iter = 200 * m
    row_sq = np.einsum("ij,ij->i", A, A)
    lam = np.zeros(m)
    x = qp.target.copy()
    for sweep in range(1, max_iter + 1):
        biggest = 0.0
        for i in range(m):
            step = (lower[i] - A[i] @ x) / row_sq[i]
            new = max(0.0, lam[i] + step)
            delta = new - lam[i]
            if delta:
                x += delta * A[i]
                lam[i] = new
                biggest = max(biggest, abs(delta) * np.sqrt(row_sq[i]))
        counter.add(m * (4 * d + 4))
        if biggest <= 1e-8 and np.min(A @ x - lower) >= -tol:
            return x, lam, sweep
    raise IterationLimit(
        "Hildreth iteration cap reached", _qp_report(qp, x, lam, max_iter, counter)
    )
