"""Dual coordinate-ascent solver for diagonal quadratic programs.

Solves ``min x^T Q x  subject to  A x >= g`` with ``Q`` diagonal and positive
definite.  Because ``Q`` is diagonal each dual coordinate update is closed
form (Hildreth's method): with ``x(lam) = Q^{-1} A^T lam / 2`` maintained
throughout, one sweep performs

    lam_i <- max(0, lam_i + (g_i - a_i . x) / h_i),   h_i = a_i . Q^{-1} a_i / 2

cyclically over the constraints that are active or violated.

Cyclic ascent alone stalls when two nearly parallel constraints are both
active (adjacent grid phases straddling a tangency point): multiplier mass
then migrates between them sublinearly and the target tolerances become
unreachable.  The solve therefore first attempts an exact dual active-set
pass (add the worst violated row with a full step or drop the blocking
multiplier on a ratio test; all directions come from small dense solves,
feasible because Q is diagonal).  Its candidate is accepted only when a
fresh recomputation of all KKT residuals certifies it; otherwise it is
discarded and the plain sweeps carry the solve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotConverged

# Convergence targets a fraction of the contract tolerances so downstream
# checks (certification at -1e-9, nested-cost comparisons at 1e-8) keep slack.
_SAFETY = 0.1

_RANK_CUT = 1e-12


@dataclass(frozen=True, eq=False)
class QpProblem:
    """Problem data: diagonal ``q_diag`` of Q, constraint rows, right-hand sides."""

    q_diag: np.ndarray
    a_rows: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        q = np.array(self.q_diag, dtype=float).reshape(-1)
        a = np.array(self.a_rows, dtype=float)
        if a.ndim != 2:
            a = a.reshape(-1, q.shape[0]) if a.size else a.reshape(0, q.shape[0])
        g = np.array(self.g, dtype=float).reshape(-1)
        if np.any(q <= 0):
            raise ValueError("all q_diag entries must be positive")
        if a.shape[1] != q.shape[0]:
            raise DimensionMismatch(
                f"rows have length {a.shape[1]} but q_diag has length {q.shape[0]}"
            )
        if g.shape[0] != a.shape[0]:
            raise DimensionMismatch(
                f"{a.shape[0]} rows but {g.shape[0]} right-hand sides"
            )
        for arr in (q, a, g):
            arr.setflags(write=False)
        object.__setattr__(self, "q_diag", q)
        object.__setattr__(self, "a_rows", a)
        object.__setattr__(self, "g", g)

    @property
    def n(self) -> int:
        return self.a_rows.shape[0]

    @property
    def d(self) -> int:
        return self.q_diag.shape[0]

    def objective(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        return float(x @ (self.q_diag * x))


@dataclass(frozen=True, eq=False)
class QpSolution:
    """Primal/dual iterate with its KKT residuals.

    ``converged`` is True only when feasibility, complementarity and
    stationarity were all verified below tolerance on a fresh recomputation.
    """

    x: np.ndarray
    lam: np.ndarray
    iterations: int
    converged: bool
    primal_violation: float
    dual_violation: float
    complementarity: float
    stationarity: float


def _residuals(problem: QpProblem, x: np.ndarray, lam: np.ndarray):
    slack = problem.a_rows @ x - problem.g
    primal = float(max(0.0, -np.min(slack, initial=0.0)))
    dual = float(max(0.0, -np.min(lam, initial=0.0)))
    comp = float(np.max(np.abs(lam * slack), initial=0.0))
    stat = float(
        np.max(
            np.abs(2.0 * problem.q_diag * x - problem.a_rows.T @ lam), initial=0.0
        )
    )
    return primal, dual, comp, stat


def kkt_residuals(problem: QpProblem, solution: QpSolution):
    """Recompute all four KKT residuals from scratch.

    Returns ``(primal_violation, dual_violation, complementarity,
    stationarity)``; independent of any solver-internal state so it can audit
    a solve after the fact.
    """
    x = np.asarray(solution.x, dtype=float).reshape(-1)
    lam = np.asarray(solution.lam, dtype=float).reshape(-1)
    if x.shape[0] != problem.d:
        raise DimensionMismatch(f"x has length {x.shape[0]}, expected {problem.d}")
    if lam.shape[0] != problem.n:
        raise DimensionMismatch(
            f"lambda has length {lam.shape[0]}, expected {problem.n}"
        )
    return _residuals(problem, x, lam)


def _active_set_refine(problem, feas_target, comp_factor, stat_target):
    """Exact dual active-set pass; returns a certified ``(x, lam)`` or None.

    Starts from the unconstrained minimum and repeatedly activates the worst
    violated row: a full step makes it tight, a partial step (ratio test on
    the working-set multipliers) drops a blocker first.  The working set
    stays linearly independent, so every direction comes from a small
    positive-definite solve.  Any numerical trouble, cap overrun, or failed
    final KKT verification returns None and leaves the solve to the sweeps.
    """
    a, g, q = problem.a_rows, problem.g, problem.q_diag
    n, d = a.shape
    ginv = 0.5 / q
    x = np.zeros(d)
    active: list[int] = []
    lam_active: list[float] = []
    for _outer in range(30 * (d + 1) + 100):
        slack = a @ x - g
        p = int(np.argmin(slack))
        if slack[p] >= -0.5 * feas_target:
            lam = np.zeros(n)
            for idx, value in zip(active, lam_active):
                lam[idx] += max(value, 0.0)
            primal, _dual, _comp, stat = _residuals(problem, x, lam)
            comp_sum = float(np.sum(np.abs(lam * slack)))
            obj = problem.objective(x)
            if (
                primal <= feas_target
                and comp_sum <= comp_factor * (1.0 + abs(obj))
                and stat <= stat_target
            ):
                return x, lam
            return None
        row_p = a[p]
        scale_p = float(row_p @ (ginv * row_p))
        lam_p = 0.0
        for _inner in range(3 * d + 20):
            if active:
                nw = a[active]
                k_mat = (nw * ginv) @ nw.T
                rhs = nw @ (ginv * row_p)
                try:
                    r = np.linalg.solve(k_mat, rhs)
                except np.linalg.LinAlgError:
                    r = np.linalg.lstsq(k_mat, rhs, rcond=None)[0]
                z = ginv * (row_p - nw.T @ r)
            else:
                r = np.zeros(0)
                z = ginv * row_p
            viol = float(g[p] - row_p @ x)
            if viol <= 0.25 * feas_target:
                break
            denom = float(row_p @ z)
            t_full = viol / denom if denom > _RANK_CUT * max(scale_p, 1.0) else np.inf
            t_drop = np.inf
            blocker = -1
            for k in range(len(active)):
                if r[k] > _RANK_CUT:
                    bound = lam_active[k] / r[k]
                    if bound < t_drop:
                        t_drop, blocker = bound, k
            step = min(t_full, t_drop)
            if not np.isfinite(step):
                return None
            x = x + step * z
            lam_p += step
            for k in range(len(active)):
                lam_active[k] -= step * r[k]
            if t_drop < t_full:
                active.pop(blocker)
                lam_active.pop(blocker)
                continue
            active.append(p)
            lam_active.append(lam_p)
            break
        else:
            return None
    return None


def solve(
    problem: QpProblem,
    tol_feas: float = 1e-9,
    tol_stat: float = 1e-8,
    max_iter: int = 200000,
    initial_lam: np.ndarray | None = None,
) -> QpSolution:
    """Minimize ``x^T Q x`` over ``A x >= g`` by dual coordinate ascent.

    One iteration is a full sweep over the working set (constraints with a
    positive multiplier or a violated row); the first iteration additionally
    attempts the exact active-set refinement, which usually finishes the
    solve outright.  Warm starts are accepted through ``initial_lam``
    (clipped to be nonnegative).

    Raises :class:`NotConverged` (with the best iterate attached) when
    ``max_iter`` iterations did not bring the residuals below tolerance.
    """
    a = problem.a_rows
    g = problem.g
    q = problem.q_diag
    n, d = a.shape

    if initial_lam is None:
        lam = np.zeros(n)
    else:
        lam = np.asarray(initial_lam, dtype=float).reshape(-1)
        if lam.shape[0] != n:
            raise DimensionMismatch(
                f"initial_lam has length {lam.shape[0]}, expected {n}"
            )
        lam = np.maximum(lam, 0.0)

    # x is kept equal to Q^{-1} A^T lam / 2; u holds the per-row primal steps.
    u = a / (2.0 * q)
    h = np.einsum("ij,ij->i", a, u)
    updatable = h > 0.0

    feas_target = _SAFETY * tol_feas
    comp_factor = _SAFETY * tol_stat
    stat_target = 0.5 * tol_stat

    def _pack(x, lam_out, iterations, converged):
        primal, dual, comp, stat = _residuals(problem, x, lam_out)
        return QpSolution(
            x=x,
            lam=lam_out,
            iterations=iterations,
            converged=converged,
            primal_violation=primal,
            dual_violation=dual,
            complementarity=comp,
            stationarity=stat,
        )

    for sweep in range(max_iter + 1):
        # Fresh recomputation each sweep kills incremental drift in x.
        x = u.T @ lam
        slack = a @ x - g
        viol = float(max(0.0, -np.min(slack, initial=0.0)))
        comp_sum = float(np.sum(np.abs(lam * slack)))
        obj = problem.objective(x)
        if viol <= feas_target and comp_sum <= comp_factor * (1.0 + abs(obj)):
            return _pack(x, lam.copy(), sweep, True)
        if sweep == max_iter:
            break
        if sweep == 0:
            refined = _active_set_refine(
                problem, feas_target, comp_factor, stat_target
            )
            if refined is not None:
                return _pack(refined[0], refined[1], 1, True)
        work = np.flatnonzero(((lam > 0.0) | (slack < 0.0)) & updatable)
        for i in work:
            ai = a[i]
            delta = (g[i] - ai @ x) / h[i]
            if delta < -lam[i]:
                delta = -lam[i]
            if delta != 0.0:
                lam[i] += delta
                x = x + delta * u[i]

    solution = _pack(u.T @ lam, lam.copy(), max_iter, False)
    raise NotConverged(
        f"no convergence in {max_iter} sweeps "
        f"(primal_violation={solution.primal_violation:.3e}, "
        f"complementarity={solution.complementarity:.3e})",
        solution=solution,
    )
