"""Input validation helpers shared by every module."""

import numpy as np
from sklearn.utils import check_array

#: Sum deviation tolerated (and silently renormalized) when building a simplex point.
SUM_TOL = 1e-9
#: Magnitude of negative weights clamped to zero instead of rejected.
CLAMP_TOL = 1e-12
#: Default support threshold, relative to 1/n.
SUPPORT_EPS = 1e-4


def check_payoff_matrix(A, name="payoff matrix"):
    """Return ``A`` as a finite, square float64 array of shape (n, n), n >= 1."""
    A = check_array(A, dtype=np.float64, ensure_all_finite=True,
                    ensure_min_samples=1, ensure_min_features=1,
                    input_name=name)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"{name} must be square, got shape {A.shape}")
    return A


def check_simplex(x, n=None):
    """Validate a population state and return it as a float64 vector.

    Negative weights down to ``-CLAMP_TOL`` are clamped to zero and sums
    within ``SUM_TOL`` of one are renormalized; anything worse raises
    ``ValueError``.
    """
    x = np.array(x, dtype=np.float64, copy=True).reshape(-1)
    if x.size == 0:
        raise ValueError("simplex point must have at least one component")
    if n is not None and x.size != n:
        raise ValueError(f"dimension mismatch: expected {n} weights, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise ValueError("simplex point has non-finite weights")
    if np.any(x < -CLAMP_TOL):
        raise ValueError(f"simplex point has negative weight {x.min():.3g}")
    x[x < 0] = 0.0
    s = x.sum()
    if abs(s - 1.0) > SUM_TOL:
        raise ValueError(f"simplex point weights sum to {s!r}, not 1")
    if s != 1.0:
        x /= s
    return x


def barycenter(n):
    return np.full(n, 1.0 / n)


def vertex(n, k):
    x = np.zeros(n)
    x[k] = 1.0
    return x


def support(x, eps=SUPPORT_EPS):
    """Indices ``i`` with ``x[i] > eps / n``, in increasing order."""
    x = np.asarray(x, dtype=np.float64)
    return np.flatnonzero(x > eps / x.size)


def check_positive(value, name):
    if not (np.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be positive, got {value!r}")
    return value
