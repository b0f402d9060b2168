from itertools import combinations

import numpy as np
import pytest

HAWK_DOVE = np.array([[-1.0, 2.0], [0.0, 1.0]])
RPS = np.array([[0.0, -1.0, 1.0], [1.0, 0.0, -1.0], [-1.0, 1.0, 0.0]])


def adjacency(n, edges):
    W = np.zeros((n, n))
    for i, j in edges:
        W[i, j] = W[j, i] = 1.0
    return W


def triangle():
    return adjacency(3, [(0, 1), (0, 2), (1, 2)])


def triangle_pendant():
    W = adjacency(4, [(0, 1), (0, 2), (1, 2)])
    W[2, 3] = W[3, 2] = 0.1
    return W


def two_triangles():
    return adjacency(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)])


def shared_vertex_triangles():
    return adjacency(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])


def random_symmetric(rng, n, zero_diagonal=False):
    A = rng.random((n, n))
    A = (A + A.T) / 2
    if zero_diagonal:
        np.fill_diagonal(A, 0.0)
    return A


def random_graph(rng, n, p=0.5):
    W = np.triu((rng.random((n, n)) < p).astype(float), 1)
    return W + W.T


# --- independent oracles ----------------------------------------------------

def clique_number(W):
    """Brute-force size of the largest clique of an unweighted graph."""
    n = W.shape[0]
    best = 1
    for size in range(2, n + 1):
        found = any(all(W[i, j] > 0 for i, j in combinations(S, 2))
                    for S in combinations(range(n), size))
        if not found:
            break
        best = size
    return best


def max_quadratic_by_support(W):
    """max x'Wx over the simplex by checking the face-interior KKT point of every support."""
    n = W.shape[0]
    best, arg = -np.inf, None
    for size in range(1, n + 1):
        for S in combinations(range(n), size):
            S = list(S)
            M = np.block([[W[np.ix_(S, S)], -np.ones((size, 1))],
                          [np.ones((1, size)), np.zeros((1, 1))]])
            rhs = np.r_[np.zeros(size), 1.0]
            sol, *_ = np.linalg.lstsq(M, rhs, rcond=None)
            xs = sol[:size]
            if not np.allclose(M @ sol, rhs, atol=1e-10) or np.any(xs < -1e-12):
                xs = np.full(size, 1.0 / size)
            x = np.zeros(n)
            x[S] = np.clip(xs, 0, None) / np.clip(xs, 0, None).sum()
            v = x @ W @ x
            if v > best + 1e-12:
                best, arg = v, x
    return best, arg


def rk4_by_hand_identity2(x1, dt):
    """One RK4 step of the replicator flow for A = I (2x2), written out in scalars."""
    def f(a):
        b = 1.0 - a
        m = a * a + b * b
        return a * (a - m)
    k1 = f(x1)
    k2 = f(x1 + dt / 2 * k1)
    k3 = f(x1 + dt / 2 * k2)
    k4 = f(x1 + dt * k3)
    return x1 + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
