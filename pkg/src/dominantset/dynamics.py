"""Discrete and continuous replicator dynamics on the simplex.

The continuous flow is ``dx_i/dt = x_i ((Ax)_i - x'Ax)``, integrated with a
fixed-step classical Runge-Kutta scheme. The discrete map is the
multiplicative update ``x_i <- x_i (Ax)_i / x'Ax``, which needs positive
payoffs; :func:`run` shifts the matrix when that does not hold.

Stopping rule: a run is declared converged once the max-norm of the
per-step state change (discrete) or of the vector field (continuous) drops
below ``tol_convergence``. This is a modelling choice, not a law.
"""

from dataclasses import dataclass, field

import numpy as np

from ._validation import CLAMP_TOL, check_payoff_matrix, check_simplex

DISCRETE = "discrete"
CONTINUOUS = "continuous"


@dataclass(frozen=True)
class DynamicsConfig:
    """Settings for a dynamics run.

    ``record_every=0`` keeps only the first and last state.
    """

    mode: str = DISCRETE
    dt: float = 0.01
    tol_convergence: float = 1e-10
    max_iters: int = 100_000
    record_every: int = 1

    def __post_init__(self):
        if self.mode not in (DISCRETE, CONTINUOUS):
            raise ValueError(f"unknown dynamics mode {self.mode!r}")
        if self.mode == CONTINUOUS and not self.dt > 0:
            raise ValueError("dt must be positive in continuous mode")
        if not self.tol_convergence > 0:
            raise ValueError("tol_convergence must be positive")
        if int(self.max_iters) < 1:
            raise ValueError("max_iters must be at least 1")
        if int(self.record_every) < 0:
            raise ValueError("record_every must be nonnegative")


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    converged: bool
    iterations_used: int
    shift: float = 0.0
    config: DynamicsConfig = field(default_factory=DynamicsConfig)

    @property
    def final(self):
        return self.states[-1]


class _Recorder:
    def __init__(self, every):
        self.every = every
        self.times = []
        self.states = []

    def add(self, k, t, x, last=False):
        if k == 0 or last or (self.every and k % self.every == 0):
            if self.times and self.times[-1] == t:
                return
            self.times.append(t)
            self.states.append(x.copy())

    def arrays(self):
        return np.array(self.times, dtype=float), np.array(self.states)


def _rhs(A, x):
    p = A @ x
    return x * (p - x @ p)


def _renormalize(x):
    if x.min() < 0:
        if x.min() < -CLAMP_TOL:
            raise ValueError("step size too large: state left the simplex")
        x[x < 0] = 0.0
    return x / x.sum()


def _discrete(A, x):
    p = A @ x
    m = x @ p
    if not m > 0 or np.any(p[x > 0] < 0):
        raise ValueError("nonpositive mean payoff: shift the payoff matrix")
    y = x * p
    return y / y.sum()


def _rk4(A, x, dt, k1=None):
    if k1 is None:
        k1 = _rhs(A, x)
    k2 = _rhs(A, x + 0.5 * dt * k1)
    k3 = _rhs(A, x + 0.5 * dt * k2)
    k4 = _rhs(A, x + dt * k3)
    y = x + dt / 6.0 * (k1 + 2.0 * (k2 + k3) + k4)
    if not np.isfinite(y.sum()):
        raise ValueError("step size too large: non-finite state")
    return _renormalize(y)


def replicator_rhs(A, x):
    """Replicator vector field ``x_i ((Ax)_i - x'Ax)``; its entries sum to zero."""
    A = check_payoff_matrix(A)
    x = check_simplex(x, A.shape[0])
    return _rhs(A, x)


def discrete_step(A, x):
    """One multiplicative replicator update.

    Requires ``x'Ax > 0`` and nonnegative payoffs on the support of ``x``;
    shift the matrix with :func:`dominantset.game.shift_payoffs` otherwise.
    Zero weights stay exactly zero.
    """
    A = check_payoff_matrix(A)
    x = check_simplex(x, A.shape[0])
    return check_simplex(_discrete(A, x))


def integrate_continuous_step(A, x, dt):
    """One RK4 step of the replicator flow, clamped and renormalized."""
    A = check_payoff_matrix(A)
    x = check_simplex(x, A.shape[0])
    if not dt > 0:
        raise ValueError("dt must be positive")
    return _rk4(A, x, dt)


def is_stationary(A, x, tol=1e-9):
    """True iff every component of the replicator field is within ``tol`` of zero."""
    return bool(np.max(np.abs(replicator_rhs(A, x))) <= tol)


def discrete_shift(A):
    """Constant to add to ``A`` so the multiplicative update is well defined.

    Zero when every entry is nonnegative and the diagonal is positive (then
    ``x'Ax > 0`` everywhere on the simplex); ``1 - min(A)`` otherwise.
    """
    m = A.min()
    if m < 0 or A.diagonal().min() <= 0:
        return 1.0 - m
    return 0.0


def iterate(step, x0, cfg, *, residual=None):
    """Drive ``step`` from ``x0`` until the state change falls below tolerance.

    When ``residual(x)`` is given it replaces the max-norm of the state
    change as the convergence measure and is checked before each step.
    Returns ``(times, states, converged, iterations)``.
    """
    rec = _Recorder(cfg.record_every)
    x = x0
    rec.add(0, 0.0, x)
    converged = False
    k = 0
    while k < cfg.max_iters:
        if residual is not None and residual(x) < cfg.tol_convergence:
            converged = True
            break
        y = step(x)
        k += 1
        done = residual is None and np.max(np.abs(y - x)) < cfg.tol_convergence
        x = y
        if done:
            converged = True
            break
        rec.add(k, float(k), x)
    rec.add(k, float(k), x, last=True)
    times, states = rec.arrays()
    return times, states, converged, k


def run(A, x0, cfg=None):
    """Run replicator dynamics from ``x0`` and record the trajectory.

    In discrete mode a matrix that could produce a nonpositive mean payoff
    is shifted once up front (see :func:`discrete_shift`); the shift is
    reported on the returned :class:`Trajectory`. Failure to converge within
    ``cfg.max_iters`` is reported through ``Trajectory.converged``.
    """
    cfg = cfg or DynamicsConfig()
    A = check_payoff_matrix(A)
    x0 = check_simplex(x0, A.shape[0])
    shift = 0.0
    if cfg.mode == DISCRETE:
        shift = discrete_shift(A)
        B = A + shift if shift else A
        times, states, converged, k = iterate(lambda x: _discrete(B, x), x0, cfg)
    else:
        dt = cfg.dt
        cache = {}

        def residual(x):
            cache["x"], cache["v"] = x, _rhs(A, x)
            return np.abs(cache["v"]).max()

        def step(x):
            k1 = cache["v"] if cache.get("x") is x else None
            return _rk4(A, x, dt, k1)

        times, states, converged, k = iterate(step, x0, cfg, residual=residual)
        times = times * dt
    return Trajectory(times=times, states=states, converged=converged,
                      iterations_used=k, shift=shift, config=cfg)
