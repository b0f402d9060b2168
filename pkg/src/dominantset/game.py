"""Payoff algebra of a symmetric two-player game.

Strategies are indexed ``0..n-1``. A population state is a point on the
probability simplex; ``A[i, j]`` is the payoff to strategy ``i`` against
strategy ``j``. Payoff matrices need not be symmetric or nonnegative.
"""

import numpy as np

from ._validation import check_payoff_matrix, check_simplex


def _checked(A, x):
    A = check_payoff_matrix(A)
    x = check_simplex(x, A.shape[0])
    return A, x


def expected_payoffs(A, x):
    """Payoff of every pure strategy against population ``x``, i.e. ``A @ x``.

    Raises
    ------
    ValueError
        On a dimension mismatch or when the product is not finite.
    """
    A, x = _checked(A, x)
    p = A @ x
    if not np.all(np.isfinite(p)):
        raise ValueError("non-finite expected payoff")
    return p


def mean_payoff(A, x):
    """Average payoff ``x' A x`` over the whole population."""
    A, x = _checked(A, x)
    m = float(x @ (A @ x))
    if not np.isfinite(m):
        raise ValueError("non-finite mean payoff")
    return m


def relative_fitness(A, x):
    """``(Ax)_i - x'Ax`` for every strategy."""
    p = expected_payoffs(A, x)
    return p - x @ p


def shift_payoffs(A, c):
    """Return a copy of ``A`` with the constant ``c`` added to every entry.

    The replicator vector field, and with it every stationary point and
    equilibrium verdict, is unchanged by such a shift.
    """
    A = check_payoff_matrix(A)
    if not np.isfinite(c):
        raise ValueError(f"shift must be finite, got {c!r}")
    return A + c
