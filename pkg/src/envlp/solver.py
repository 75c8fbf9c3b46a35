"""End-to-end envelope pipeline: discretize, solve, lift, bound, certify.

The discretized problem asks for the cheapest degree-``L`` trigonometric
polynomial that lies above the signal at the ``n`` grid phases ``i/n``.  Its
minimizer is only guaranteed above the signal at those phases, so the result
is lifted by ``(c + c') / n`` in DC (``c`` the signal slope bound, ``c'`` the
envelope slope bound), which restores the everywhere-above property and costs
an exactly computable amount.  That same amount bounds the distance of both
the unlifted and the lifted cost from the continuum optimum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qp
from .errors import BudgetTooLarge, TooFewConstraints
from .fourier import (
    MAX_HARMONICS,
    FourierEnvelope,
    apriori_derivative_bound,
    phasor_matrix,
)
from .signals import PeriodicSignal

MAX_CONSTRAINTS = 10 ** 6

CERTIFY_TOL = 1e-9
DEFAULT_CERTIFY_GRID = 8192

EXACT_POSTSOLVE = "exact_postsolve"
APRIORI = "apriori"
C_PRIME_MODES = (EXACT_POSTSOLVE, APRIORI)


@dataclass(frozen=True, eq=False)
class EnvelopeResult:
    """Everything one discretized run produces.

    ``cost_*`` are coefficient energies; ``paper_cost_subopt`` subtracts the
    fixed signal energy (the area actually lost to the over-approximation,
    which may be negative for sign-changing signals).  ``gap_bound`` bounds
    both ``cost(optimum) - cost_appopt`` and ``cost_subopt - cost(optimum)``.
    """

    appopt: FourierEnvelope
    subopt: FourierEnvelope
    n: int
    L: int
    c: float
    c_prime: float
    c_prime_mode: str
    cost_appopt: float
    cost_subopt: float
    paper_cost_subopt: float
    gap_bound: float
    certified: bool
    min_margin: float
    solver_diag: qp.QpSolution

    def to_dict(self) -> dict:
        """JSON-ready payload (field order is the wire contract)."""
        return {
            "L": self.L,
            "n": self.n,
            "appopt": self.appopt.to_dict(),
            "subopt": self.subopt.to_dict(),
            "c": self.c,
            "c_prime": self.c_prime,
            "c_prime_mode": self.c_prime_mode,
            "cost_appopt": self.cost_appopt,
            "cost_subopt": self.cost_subopt,
            "paper_cost_subopt": self.paper_cost_subopt,
            "gap_bound": self.gap_bound,
            "certified": self.certified,
            "min_margin": self.min_margin,
            "solver": {
                "iterations": self.solver_diag.iterations,
                "converged": self.solver_diag.converged,
                "primal_violation": self.solver_diag.primal_violation,
                "stationarity": self.solver_diag.stationarity,
            },
        }


def build_constraints(sig: PeriodicSignal, L: int, n: int) -> qp.QpProblem:
    """Assemble the ``n``-point constraint system for harmonic budget ``L``.

    Requires ``n >= 2L+1`` so the constraints can pin all degrees of freedom;
    with fewer rows the polynomial between grid points is uncontrolled.
    """
    L = int(L)
    n = int(n)
    if L < 0:
        raise ValueError(f"harmonic budget must be nonnegative, got {L}")
    if L > MAX_HARMONICS:
        raise BudgetTooLarge(f"harmonic budget {L} exceeds maximum {MAX_HARMONICS}")
    if n < 2 * L + 1:
        raise TooFewConstraints(f"need n >= 2L+1 = {2 * L + 1}, got n={n}")
    if n > MAX_CONSTRAINTS:
        raise ValueError(f"n={n} exceeds the supported maximum {MAX_CONSTRAINTS}")
    t = np.arange(n) / n
    rows = phasor_matrix(L, t)
    g = sig.value_at(t)
    q_diag = np.full(2 * L + 1, 2.0)
    q_diag[0] = 1.0
    return qp.QpProblem(q_diag=q_diag, a_rows=rows, g=g)


def solve_appopt(
    sig: PeriodicSignal,
    L: int,
    n: int,
    max_iter: int = 200000,
    initial_lam: np.ndarray | None = None,
):
    """Solve the discretized problem; returns ``(envelope, qp_solution)``.

    The envelope lies above the signal at every grid phase ``i/n`` to solver
    feasibility tolerance; between grid phases it may dip below.
    """
    problem = build_constraints(sig, L, n)
    solution = qp.solve(problem, max_iter=max_iter, initial_lam=initial_lam)
    return FourierEnvelope.from_params(L, solution.x), solution


def lift_to_envelope(
    appopt: FourierEnvelope, c: float, c_prime: float, n: int
) -> FourierEnvelope:
    """Add ``(c + c')/n`` to the DC coefficient; harmonics are untouched."""
    if c < 0 or c_prime < 0:
        raise ValueError("slope bounds must be nonnegative")
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    delta = (c + c_prime) / n
    return FourierEnvelope(
        L=appopt.L, b0=appopt.b0 + delta, b_re=appopt.b_re, b_im=appopt.b_im
    )


def gap_bound(appopt: FourierEnvelope, c: float, c_prime: float, n: int) -> float:
    """Exact cost increase of the lift: ``2*b0*delta + delta**2``.

    Upper-bounds the suboptimality of both the unlifted and lifted costs with
    respect to the continuum optimum.  The DC coefficient of a solved problem
    is never negative (it equals half the multiplier sum), so the bound is
    nonnegative as well.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    delta = (c + c_prime) / n
    return float(2.0 * appopt.b0 * delta + delta * delta)


def certify(
    subopt: FourierEnvelope,
    sig: PeriodicSignal,
    grid_m: int = DEFAULT_CERTIFY_GRID,
):
    """Check the everywhere-above property on a dense phase grid.

    Returns ``(certified, min_margin)`` where ``min_margin`` is the smallest
    value of envelope minus signal over ``grid_m`` uniform phases.  A grid at
    least four times denser than ``max(L, 1) * n`` is recommended so dips
    between constraint phases are visible.
    """
    grid_m = int(grid_m)
    if grid_m < 16:
        raise ValueError(f"certification grid must have >= 16 points, got {grid_m}")
    t = np.arange(grid_m) / grid_m
    margin = subopt.evaluate(t) - sig.value_at(t)
    min_margin = float(np.min(margin))
    return min_margin >= -CERTIFY_TOL, min_margin


def approximate(
    sig: PeriodicSignal,
    L: int,
    n: int,
    c_prime_mode: str = EXACT_POSTSOLVE,
    grid_m: int = DEFAULT_CERTIFY_GRID,
    max_iter: int = 200000,
    initial_lam: np.ndarray | None = None,
) -> EnvelopeResult:
    """Full pipeline: solve, bound the envelope slope, lift, bound, certify.

    ``c_prime_mode`` selects the envelope slope bound: ``exact_postsolve``
    (default; computed from the realized coefficients, tighter) or
    ``apriori`` (available before solving, reproduces the original
    construction).
    """
    if c_prime_mode not in C_PRIME_MODES:
        raise ValueError(
            f"c_prime_mode must be one of {C_PRIME_MODES}, got {c_prime_mode!r}"
        )
    appopt, solution = solve_appopt(
        sig, L, n, max_iter=max_iter, initial_lam=initial_lam
    )
    c = sig.lipschitz_c
    if c_prime_mode == EXACT_POSTSOLVE:
        c_prime = appopt.derivative_bound()
    else:
        c_prime = apriori_derivative_bound(L, sig.sup_norm())
    subopt = lift_to_envelope(appopt, c, c_prime, n)
    bound = gap_bound(appopt, c, c_prime, n)
    certified, min_margin = certify(subopt, sig, grid_m=grid_m)
    cost_appopt = appopt.energy()
    cost_subopt = subopt.energy()
    return EnvelopeResult(
        appopt=appopt,
        subopt=subopt,
        n=int(n),
        L=int(L),
        c=float(c),
        c_prime=float(c_prime),
        c_prime_mode=c_prime_mode,
        cost_appopt=cost_appopt,
        cost_subopt=cost_subopt,
        paper_cost_subopt=cost_subopt - sig.signal_energy(),
        gap_bound=bound,
        certified=certified,
        min_margin=min_margin,
        solver_diag=solution,
    )


def fine_grid_opt(
    sig: PeriodicSignal, L: int, n_fine: int = 4096, max_iter: int = 200000
) -> FourierEnvelope:
    """Dense-grid solve used as a stand-in for the continuum optimum.

    Its cost is within ``gap_bound(.., n_fine)`` of the true optimum, so with
    ``n_fine`` well above any comparison grid (16x or more) it serves as the
    brute-force reference in tests.
    """
    envelope, _ = solve_appopt(sig, L, n_fine, max_iter=max_iter)
    return envelope
