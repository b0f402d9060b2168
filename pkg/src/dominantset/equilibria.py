"""Equilibrium classification for symmetric games.

A point is classified in three nested levels: stationary under the
replicator flow, symmetric Nash equilibrium, and evolutionarily stable
strategy (ESS). The ESS test is the second-order condition on the extended
support ``E = {j : (Ax)_j >= x'Ax - tol}``: the symmetric part of ``A``
restricted to ``E`` must be negative definite on the tangent space
``{y : sum(y) = 0}``.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from ._validation import SUPPORT_EPS, check_payoff_matrix, check_simplex, support
from .dynamics import _rhs

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8
DEFAULT_MAX_N = 12
DEDUP_TOL = 1e-6


@dataclass
class EquilibriumReport:
    point: np.ndarray
    stationary: bool
    nash: bool
    ess: bool
    tol: float
    support: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))
    certificate: str = ""


def _prepare(A, x):
    A = check_payoff_matrix(A)
    x = check_simplex(x, A.shape[0])
    p = A @ x
    return A, x, p, float(x @ p)


def _tangent_basis(k):
    # orthonormal basis of {y in R^k : sum(y) = 0}
    M = np.column_stack([np.ones(k), np.eye(k)[:, : k - 1]])
    Q, _ = np.linalg.qr(M)
    return Q[:, 1:]


def _projected_curvature(A, idx):
    """Eigen-decomposition of the symmetric part of ``A[idx, idx]`` on the tangent space."""
    S = A[np.ix_(idx, idx)]
    S = 0.5 * (S + S.T)
    Q = _tangent_basis(len(idx))
    vals, vecs = np.linalg.eigh(Q.T @ S @ Q)
    return vals, Q @ vecs


def _nash_violation(x, p, m, tol, eps):
    j = int(np.argmax(p))
    if p[j] > m + tol:
        return f"strategy {j + 1} earns {p[j]:.6g} > mean payoff {m:.6g}"
    for i in support(x, eps):
        if abs(p[i] - m) > tol:
            return f"support strategy {i + 1} earns {p[i]:.6g} != mean payoff {m:.6g}"
    return None


def is_nash(A, x, tol=DEFAULT_TOL, support_eps=SUPPORT_EPS):
    """True iff no pure strategy beats the mean payoff and every strategy in
    the support of ``x`` earns it (both up to ``tol``)."""
    A, x, p, m = _prepare(A, x)
    return _nash_violation(x, p, m, tol, support_eps) is None


def _ess_violation(A, x, p, m, tol):
    ext = np.flatnonzero(p >= m - tol)
    if len(ext) < 2:
        return None
    vals, _ = _projected_curvature(A, ext)
    if vals[-1] >= -tol:
        return (f"quadratic form on extended support {[int(i) + 1 for i in ext]} "
                f"is not negative definite (max eigenvalue {vals[-1]:.6g})")
    return None


def is_ess(A, x, tol=DEFAULT_TOL, support_eps=SUPPORT_EPS):
    """True iff ``x`` is a Nash equilibrium resistant to every invader.

    Invaders are restricted to the extended support of best replies; the
    check is negative definiteness of ``(A + A')/2`` there, projected onto
    directions summing to zero.
    """
    A, x, p, m = _prepare(A, x)
    if _nash_violation(x, p, m, tol, support_eps) is not None:
        return False
    return _ess_violation(A, x, p, m, tol) is None


def invasion_direction(A, x, tol=DEFAULT_TOL):
    """A zero-sum direction along which ``x'Ax`` increases, or ``None``.

    Returns ``e_j - x`` for a strictly better pure reply ``j``, otherwise
    the leading eigenvector of the projected curvature on the extended
    support when its eigenvalue exceeds ``tol``. ``None`` means no ascent
    direction of either kind exists (flat directions do not count).
    """
    A, x, p, m = _prepare(A, x)
    n = len(x)
    j = int(np.argmax(p))
    if p[j] > m + tol:
        d = -x.copy()
        d[j] += 1.0
        return d
    ext = np.flatnonzero(p >= m - tol)
    if len(ext) < 2:
        return None
    vals, vecs = _projected_curvature(A, ext)
    if vals[-1] <= tol:
        return None
    d = np.zeros(n)
    d[ext] = vecs[:, -1]
    return d


def classify(A, x, tol=DEFAULT_TOL, support_eps=SUPPORT_EPS):
    """Classify ``x`` as stationary / Nash / ESS; the levels are nested.

    ``certificate`` names the first test that failed, or ``"ess"``.
    """
    A, x, p, m = _prepare(A, x)
    supp = support(x, support_eps)
    report = EquilibriumReport(point=x, stationary=False, nash=False, ess=False,
                               tol=tol, support=supp)
    field_norm = float(np.max(np.abs(_rhs(A, x))))
    if field_norm > tol:
        report.certificate = f"not stationary: replicator field max-norm {field_norm:.6g}"
        return report
    report.stationary = True
    reason = _nash_violation(x, p, m, tol, support_eps)
    if reason is not None:
        report.certificate = "not nash: " + reason
        return report
    report.nash = True
    reason = _ess_violation(A, x, p, m, tol)
    if reason is not None:
        report.certificate = "not ess: " + reason
        return report
    report.ess = True
    report.certificate = "ess"
    return report


def _solve_support(A, S):
    """Point on the face ``S`` where all strategies in ``S`` earn equal payoff, or None."""
    k = len(S)
    M = np.zeros((k + 1, k + 1))
    M[:k, :k] = A[np.ix_(S, S)]
    M[:k, k] = -1.0
    M[k, :k] = 1.0
    if np.linalg.matrix_rank(M) < k + 1:
        return None
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    return np.linalg.solve(M, rhs)[:k]


def enumerate_candidates(A, max_n=DEFAULT_MAX_N, tol=DEFAULT_TOL, support_eps=SUPPORT_EPS):
    """Support enumeration of isolated symmetric equilibrium candidates.

    For every nonempty support ``S`` (by size, then lexicographically) the
    linear system "equal payoffs on ``S``, weights summing to one" is solved;
    nonnegative solutions are clamped, classified, and kept unless within
    max-norm ``1e-6`` of an earlier one. Rank-deficient supports describe
    continua of solutions and are skipped (logged at debug level).

    Raises
    ------
    ValueError
        If ``n > max_n``.
    """
    A = check_payoff_matrix(A)
    n = A.shape[0]
    if n > max_n:
        raise ValueError(f"support enumeration cap exceeded: n = {n} > {max_n}")
    reports = []
    for size in range(1, n + 1):
        for S in combinations(range(n), size):
            S = list(S)
            xs = _solve_support(A, S)
            if xs is None:
                logger.debug("degenerate support %s skipped", [i + 1 for i in S])
                continue
            if np.any(xs < -tol):
                continue
            x = np.zeros(n)
            x[S] = np.clip(xs, 0.0, None)
            x /= x.sum()
            if any(np.max(np.abs(r.point - x)) <= DEDUP_TOL for r in reports):
                continue
            reports.append(classify(A, x, tol, support_eps))
    return reports
