"""Eigenvalue derivatives, Newton correction, and the continuation driver.

The construction works in two nested loops.  The outer loop ramps the fill
parameters (u, omega) linearly from zero to their targets along a homotopy
parameter t in [0, 1], with adaptive step halving and doubling.  At each
accepted t the inner Newton loop restores the labeled eigenvalue
coordinates to the target spectrum by correcting only the block parameters
(x, y, z) — the square subsystem whose Jacobian is the identity at the
seed and stays nonsingular nearby.  Fill entries are written verbatim and
never solved for, so the output matrix carries its prescribed nonzeros
exactly.

A first-order eigenvalue perturbation identity supplies the Jacobian: for
a simple eigenvalue with unit right/left eigenvectors v and w, moving the
matrix along direction B moves the eigenvalue at rate

    zeta = (w^T B v) / (w^T v),

whose real part drives the real-part coordinate and whose imaginary part
drives the imaginary-part coordinate.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    DimensionMismatch,
    DiscViolation,
    IllConditioned,
    NoConvergence,
    StepUnderflow,
)
from .linalg import (
    TOL_ORTHO,
    EigenTriple,
    as_square_matrix,
    eig_all,
    eigen_triple,
    solve_linear,
)
from .model import (
    DiscSystem,
    LabeledValue,
    ParameterPoint,
    Pattern,
    Spectrum,
    assemble,
    disc_radius,
    label_eigenvalues,
    spectrum_mismatch,
)

logger = logging.getLogger("giep.solver")

TOL_NEWTON_FACTOR = 1e-11   # newton tolerance = factor * (1 + |spectrum|_inf)
TOL_FINAL_FACTOR = 1e-8     # final spectrum tolerance, same scaling


@dataclass(frozen=True)
class BasisDirection:
    """One coordinate direction of the matrix family.

    kind 'x'/'y'/'z' take a 1-based block index j; kind 'u'/'omega' take a
    1-based slot index r.  ``matrix`` materializes the induced perturbation:
    x(j) -> E(2j-1,2j-1) + E(2j,2j); y(j) -> E(2j-1,2j) - E(2j,2j-1);
    z(j) -> E(2k+j,2k+j); u(r) -> E(i_r,j_r); omega(r) -> E(j_r,i_r).
    """

    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in ("x", "y", "z", "u", "omega"):
            raise ValueError(f"unknown direction kind {self.kind!r}")
        if self.index < 1:
            raise ValueError("direction index is 1-based")

    def matrix(self, p: Pattern) -> np.ndarray:
        b = np.zeros((p.n, p.n))
        j = self.index
        if self.kind == "x":
            if j > p.k:
                raise DimensionMismatch(f"x({j}) exceeds k={p.k}")
            b[2 * j - 2, 2 * j - 2] = 1.0
            b[2 * j - 1, 2 * j - 1] = 1.0
        elif self.kind == "y":
            if j > p.k:
                raise DimensionMismatch(f"y({j}) exceeds k={p.k}")
            b[2 * j - 2, 2 * j - 1] = 1.0
            b[2 * j - 1, 2 * j - 2] = -1.0
        elif self.kind == "z":
            if j > p.l:
                raise DimensionMismatch(f"z({j}) exceeds l={p.l}")
            b[2 * p.k + j - 1, 2 * p.k + j - 1] = 1.0
        elif self.kind == "u":
            if j > p.m:
                raise DimensionMismatch(f"u({j}) exceeds m={p.m}")
            row, col = p.slots[j - 1]
            b[row - 1, col - 1] = 1.0
        else:
            if j > p.m or not p.bidirected[j - 1]:
                raise DimensionMismatch(f"omega({j}) has no bidirected slot")
            row, col = p.slots[j - 1]
            b[col - 1, row - 1] = 1.0
        return b


def xyz_directions(p: Pattern) -> list[BasisDirection]:
    """The block-parameter directions in Jacobian column order."""
    return (
        [BasisDirection("x", j) for j in range(1, p.k + 1)]
        + [BasisDirection("y", j) for j in range(1, p.k + 1)]
        + [BasisDirection("z", j) for j in range(1, p.l + 1)]
    )


def eigen_derivative(triple: EigenTriple, b) -> complex:
    """Rate of change of a simple eigenvalue along matrix direction ``b``.

    Returns zeta = (w^T b v) / (w^T v); the caller reads the real part as
    the real-coordinate rate and the imaginary part as the imaginary rate.
    For a real eigenvalue (real eigenvectors) the result is real.
    """
    if abs(triple.pairing) < TOL_ORTHO:
        raise IllConditioned(
            f"derivative undefined: |w^T v| = {abs(triple.pairing):.3e}"
        )
    b = np.asarray(b, dtype=float)
    return complex(triple.left @ b @ triple.right) / triple.pairing


def jacobian_xyz(m, p: Pattern, triples: list[EigenTriple]) -> np.ndarray:
    """Jacobian of the labeled coordinates with respect to (x, y, z).

    ``triples`` lists the k plus-disc eigenpairs then the l real eigenpairs
    of ``m``.  Rows are ordered (lam_1..k, mu_1..k, gamma_1..l); columns
    follow :func:`xyz_directions`.  At the seed matrix this is the identity.
    """
    a = as_square_matrix(m)
    if a.shape[0] != p.n:
        raise DimensionMismatch(f"matrix is {a.shape[0]}x{a.shape[0]}, pattern n={p.n}")
    dim = 2 * p.k + p.l
    if len(triples) != p.k + p.l:
        raise DimensionMismatch(f"need {p.k + p.l} eigen triples, got {len(triples)}")
    jac = np.empty((dim, dim))
    for c, direction in enumerate(xyz_directions(p)):
        b = direction.matrix(p)
        for j in range(p.k):
            zeta = eigen_derivative(triples[j], b)
            jac[j, c] = zeta.real
            jac[p.k + j, c] = zeta.imag
        for j in range(p.l):
            jac[2 * p.k + j, c] = eigen_derivative(triples[p.k + j], b).real
    return jac


def _labeled_state(mtx: np.ndarray, d: DiscSystem):
    """Label the spectrum of ``mtx`` and compute triples for tracked eigenvalues."""
    ev = eig_all(mtx)
    labeled = label_eigenvalues(ev, d)
    triples = [
        eigen_triple(mtx, complex(labeled.lam[j], labeled.mu[j])) for j in range(d.k)
    ] + [eigen_triple(mtx, complex(labeled.gamma[j], 0.0)) for j in range(d.l)]
    return labeled, triples, ev


def evaluate_f(p: Pattern, theta: ParameterPoint, d: DiscSystem) -> LabeledValue:
    """Labeled eigenvalue coordinates of the assembled matrix."""
    return label_eigenvalues(eig_all(assemble(p, theta)), d)


def _target_scale(target: LabeledValue) -> float:
    """Largest modulus among the spectrum points a target prescribes."""
    moduli = np.hypot(target.lam, target.mu)
    scale = float(moduli.max()) if moduli.size else 0.0
    if target.gamma.size:
        scale = max(scale, float(np.abs(target.gamma).max()))
    return scale


def _correct(
    p: Pattern,
    d: DiscSystem,
    theta: ParameterPoint,
    target: LabeledValue,
    max_iter: int,
    tol: float,
):
    """Newton iteration on (x, y, z); returns (theta, iterations, residual,
    labeled, triples, eigs) at the converged point."""
    goal = target.vector()
    for it in range(max_iter + 1):
        mtx = assemble(p, theta)
        labeled, triples, ev = _labeled_state(mtx, d)
        residual_vec = goal - labeled.vector()
        residual = float(np.abs(residual_vec).max())
        if residual <= tol:
            return theta, it, residual, labeled, triples, ev
        if it == max_iter:
            break
        jac = jacobian_xyz(mtx, p, triples)
        delta = solve_linear(jac, residual_vec)
        theta = theta.with_xyz_delta(delta)
    raise NoConvergence(
        f"newton residual {residual:.3e} above {tol:.3e} after {max_iter} iterations"
    )


def newton_correct(
    p: Pattern,
    d: DiscSystem,
    theta: ParameterPoint,
    target: LabeledValue,
    max_iter: int = 25,
    tol: float | None = None,
) -> ParameterPoint:
    """Correct (x, y, z) until the labeled coordinates hit ``target``.

    u and omega are never modified.  Each iteration solves the square
    (2k+l) Jacobian system for the coordinate mismatch; a point that
    already meets the tolerance is returned unchanged after zero
    iterations.

    Raises NoConvergence past ``max_iter``, SingularSystem on a singular
    Jacobian, and DiscViolation when an iterate's eigenvalues leave the
    discs (the continuation driver reacts by shrinking its step).
    """
    if tol is None:
        tol = TOL_NEWTON_FACTOR * (1.0 + _target_scale(target))
    point, _, _, _, _, _ = _correct(p, d, theta, target, max_iter, tol)
    return point


@dataclass
class StepRecord:
    """One accepted continuation step."""

    t: float
    residual: float
    newton_iterations: int


@dataclass
class ContinuationState:
    """Driver state at an accepted homotopy parameter."""

    t: float
    theta: ParameterPoint
    step: float
    triples: list[EigenTriple]
    history: list[StepRecord] = field(default_factory=list)


@dataclass
class SolverConfig:
    """Knobs for the continuation driver (all have safe defaults).

    ``fill_scale`` sizes default fill targets as a fraction of the disc
    radius; the construction is only guaranteed for small fills, so
    aggressive values trade success probability for larger entries.
    ``observer``, when set, is called as ``observer(state, eigs)`` after
    every accepted step.  ``rng_seed`` is reserved for randomized
    tie-breaks; the default pipeline has none.
    """

    fill_scale: float = 0.1
    tol_final: float | None = None
    tol_newton: float | None = None
    max_newton: int = 25
    step_init: float = 0.25
    step_min: float = 1e-6
    step_max: float = 0.25
    max_steps: int = 10_000
    easy_newton_iters: int = 4
    observer: Callable[[ContinuationState, np.ndarray], None] | None = None
    rng_seed: int | None = None


@dataclass
class SolveReport:
    """Result of a continuation run.

    ``final_residual`` is the greedy multiset distance between the output
    matrix's eigenvalues and the target spectrum.  ``history`` holds one
    record per accepted step (Newton residuals, not spectrum distances).
    """

    matrix: np.ndarray
    final_residual: float
    steps: int
    newton_iterations_total: int
    mode: str
    history: list[StepRecord] = field(default_factory=list)


def default_targets(
    p: Pattern, d: DiscSystem, mode: str = "generic", cfg: SolverConfig | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Fill targets sized fill_scale * radius, tied together by mode.

    generic and symmetric set omega* = u*; skew sets omega* = -u*.  For
    one-directional slots the omega component is zero (never written).
    """
    cfg = cfg or SolverConfig()
    if mode not in ("generic", "symmetric", "skew"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode in ("symmetric", "skew") and not all(p.bidirected):
        raise ValueError(f"{mode} mode requires every slot to be bidirected")
    magnitude = cfg.fill_scale * d.radius
    if not magnitude > 0.0:
        raise ValueError("fill_scale must be positive")
    u = np.full(p.m, magnitude)
    omega = np.where(p.bidirected, magnitude, 0.0) if p.m else np.zeros(0)
    if mode == "skew":
        omega = -omega
    return u, omega


def _check_mode(mode: str, p: Pattern, u: np.ndarray, omega: np.ndarray) -> None:
    if mode not in ("generic", "symmetric", "skew"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "generic":
        return
    if not all(p.bidirected):
        raise ValueError(f"{mode} mode requires every slot to be bidirected")
    tied = u if mode == "symmetric" else -u
    if not np.array_equal(omega, tied):
        raise ValueError(f"{mode} mode requires omega* = {'u*' if mode == 'symmetric' else '-u*'}")


def continuation_solve(
    s: Spectrum,
    p: Pattern,
    targets: tuple[np.ndarray, np.ndarray],
    mode: str = "generic",
    cfg: SolverConfig | None = None,
) -> SolveReport:
    """Ramp the fills from zero to their targets, Newton-correcting (x, y, z).

    The step halves after a rejected trial (disc violation or stalled
    Newton) and doubles after two consecutive easy accepts, within
    [step_min, step_max].  On success the returned matrix realizes the
    target spectrum with every slot entry written at its exact target.

    Raises StepUnderflow (with the largest accepted t) when the step
    shrinks below step_min — the construction is local, so distant fill
    targets can honestly fail; other numerical errors propagate.
    """
    cfg = cfg or SolverConfig()
    if p.n != s.n or p.k != s.k:
        raise DimensionMismatch(
            f"pattern (n={p.n}, k={p.k}) does not match spectrum (n={s.n}, k={s.k})"
        )
    u_target = np.asarray(targets[0], dtype=float).reshape(-1)
    omega_target = np.asarray(targets[1], dtype=float).reshape(-1)
    if u_target.size != p.m or omega_target.size != p.m:
        raise DimensionMismatch(
            f"fill targets have sizes {u_target.size}/{omega_target.size}, pattern m={p.m}"
        )
    if np.any(u_target == 0.0):
        raise ValueError("every u* component must be nonzero")
    if any(bi and omega_target[r] == 0.0 for r, bi in enumerate(p.bidirected)):
        raise ValueError("omega* must be nonzero on bidirected slots")
    _check_mode(mode, p, u_target, omega_target)

    scale = 1.0 + s.inf_norm()
    tol_newton = cfg.tol_newton if cfg.tol_newton is not None else TOL_NEWTON_FACTOR * scale
    tol_final = cfg.tol_final if cfg.tol_final is not None else TOL_FINAL_FACTOR * scale
    d = disc_radius(s)
    target = s.target_coordinates()
    theta = ParameterPoint(
        x=np.array([a for a, _ in s.pairs]),
        y=np.array([b for _, b in s.pairs]),
        z=np.array(s.reals),
        u=np.zeros(p.m),
        omega=np.zeros(p.m),
    )

    state = ContinuationState(t=0.0, theta=theta, step=min(cfg.step_init, cfg.step_max), triples=[])
    # The seed realizes the targets exactly; record it as the first accepted state.
    labeled, triples, ev = _labeled_state(assemble(p, theta), d)
    seed_residual = float(np.abs(target.vector() - labeled.vector()).max())
    state.triples = triples
    state.history.append(StepRecord(t=0.0, residual=seed_residual, newton_iterations=0))
    if cfg.observer is not None:
        cfg.observer(state, ev)

    newton_total = 0
    accepted = 0
    easy_streak = 0
    while p.m > 0 and state.t < 1.0:
        if accepted >= cfg.max_steps:
            raise StepUnderflow(
                f"step budget {cfg.max_steps} exhausted at t={state.t:.6g}",
                t_reached=state.t,
            )
        trial_dt = min(state.step, 1.0 - state.t)
        t_try = state.t + trial_dt
        if 1.0 - t_try < 1e-12:
            t_try = 1.0
        theta_try = state.theta.with_fill(t_try * u_target, t_try * omega_target)
        try:
            theta_new, iters, residual, labeled, triples, ev = _correct(
                p, d, theta_try, target, cfg.max_newton, tol_newton
            )
        except (NoConvergence, DiscViolation) as exc:
            state.step = trial_dt / 2.0
            easy_streak = 0
            logger.debug("rejected t=%.6g (%s); step -> %.3g", t_try, exc, state.step)
            if state.step < cfg.step_min:
                raise StepUnderflow(
                    f"step {state.step:.3g} fell below {cfg.step_min:.3g} at "
                    f"t={state.t:.6g}: {exc}",
                    t_reached=state.t,
                ) from exc
            continue
        state.t = t_try
        state.theta = theta_new
        state.triples = triples
        accepted += 1
        newton_total += iters
        state.history.append(StepRecord(t=t_try, residual=residual, newton_iterations=iters))
        logger.debug("accepted t=%.6g after %d newton iterations", t_try, iters)
        if cfg.observer is not None:
            cfg.observer(state, ev)
        if iters <= cfg.easy_newton_iters:
            easy_streak += 1
        else:
            easy_streak = 0
        if easy_streak >= 2:
            state.step = min(state.step * 2.0, cfg.step_max)
            easy_streak = 0

    matrix = assemble(p, state.theta)
    final_residual = spectrum_mismatch(eig_all(matrix), s)
    if final_residual > tol_final:
        raise NoConvergence(
            f"final spectrum distance {final_residual:.3e} exceeds {tol_final:.3e}"
        )
    logger.info(
        "continuation finished: %d steps, %d newton iterations, residual %.3e",
        accepted,
        newton_total,
        final_residual,
    )
    return SolveReport(
        matrix=matrix,
        final_residual=final_residual,
        steps=accepted,
        newton_iterations_total=newton_total,
        mode=mode,
        history=state.history,
    )


__all__ = [
    "BasisDirection",
    "ContinuationState",
    "SolveReport",
    "SolverConfig",
    "StepRecord",
    "continuation_solve",
    "default_targets",
    "eigen_derivative",
    "evaluate_f",
    "jacobian_xyz",
    "newton_correct",
    "xyz_directions",
]
