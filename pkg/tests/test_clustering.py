import numpy as np
import pytest
from sklearn.base import clone

from dominantset.clustering import (DominantSetClustering, enumerate_overlapping,
                                    extract_dominant_set, normalize_affinities, peel_partition)
from dominantset.dynamics import CONTINUOUS, DynamicsConfig

from conftest import (clique_number, max_quadratic_by_support, random_graph, random_symmetric,
                      shared_vertex_triangles, triangle, triangle_pendant, two_triangles)


def _member_sets(result):
    return {frozenset(c.members.tolist()) for c in result.clusters}


def test_triangle_pendant():
    W = triangle_pendant()
    best, arg = max_quadratic_by_support(W)
    assert best == pytest.approx(2 / 3, abs=1e-12)
    c = extract_dominant_set(W)
    assert c.members.tolist() == [0, 1, 2]
    np.testing.assert_allclose(c.weights, 1 / 3, atol=1e-6)
    assert c.cohesiveness == pytest.approx(best, abs=1e-6)
    np.testing.assert_allclose(arg[:3], c.weights, atol=1e-6)


def test_single_object_and_zero_matrix():
    c = extract_dominant_set([[7.0]])
    assert c.members.tolist() == [0] and c.weights.tolist() == [1.0]
    assert c.cohesiveness == 0.0
    c = extract_dominant_set(np.zeros((3, 3)))
    assert c.converged and c.cohesiveness == 0.0
    assert c.members.tolist() == [0, 1, 2]
    np.testing.assert_allclose(c.weights, 1 / 3)


def test_extract_rejects_continuous_config():
    with pytest.raises(ValueError):
        extract_dominant_set(triangle(), cfg=DynamicsConfig(mode=CONTINUOUS))


def test_peel_two_triangles():
    res = peel_partition(two_triangles())
    assert _member_sets(res) == {frozenset({0, 1, 2}), frozenset({3, 4, 5})}
    assert res.outliers.size == 0
    for c in res.clusters:
        assert c.cohesiveness == pytest.approx(2 / 3, abs=1e-6)


def test_peel_flags_noise_object():
    W = np.zeros((7, 7))
    W[:6, :6] = two_triangles()
    W[6, :6] = W[:6, 6] = 0.01
    res = peel_partition(W, min_cohesiveness=0.1)
    assert _member_sets(res) == {frozenset({0, 1, 2}), frozenset({3, 4, 5})}
    assert res.outliers.tolist() == [6]


def test_peel_all_zero():
    res = peel_partition(np.zeros((4, 4)), min_cohesiveness=0.1)
    assert res.clusters == [] and res.outliers.tolist() == [0, 1, 2, 3]


def test_peel_min_size():
    W = two_triangles()
    W[0, 1] = W[1, 0] = 5.0
    res = peel_partition(W, min_size=3)
    # the heavy pair wins first and is too small, so everything is left over
    assert res.clusters == [] and res.outliers.size == 6


def test_peel_argument_checks():
    with pytest.raises(ValueError):
        peel_partition(triangle(), min_size=0)
    with pytest.raises(ValueError):
        peel_partition(triangle(), min_cohesiveness=-1)


def test_overlap_shared_vertex():
    res = enumerate_overlapping(shared_vertex_triangles())
    assert [c.members.tolist() for c in res.clusters] in (
        [[0, 1, 2], [2, 3, 4]], [[2, 3, 4], [0, 1, 2]])
    assert _member_sets(res) == {frozenset({0, 1, 2}), frozenset({2, 3, 4})}
    assert res.outliers.size == 0


def test_overlap_single_triangle():
    for restarts in (1, 2, 3, 10):
        res = enumerate_overlapping(triangle(), restarts=restarts)
        assert _member_sets(res) == {frozenset({0, 1, 2})}


def test_overlap_zero_matrix_filtered():
    W = np.zeros((3, 3)) + np.eye(3)
    res = enumerate_overlapping(W, min_cohesiveness=0.1)
    assert res.clusters == [] and res.outliers.tolist() == [0, 1, 2]


def test_overlap_sorted_by_cohesiveness(rng):
    for _ in range(20):
        res = enumerate_overlapping(random_symmetric(rng, 7, zero_diagonal=True))
        coh = [c.cohesiveness for c in res.clusters]
        assert coh == sorted(coh, reverse=True)


def test_normalize_examples():
    W = np.array([[5.0, 1.0], [2.0, 5.0]])
    Wn, shift = normalize_affinities(W)
    np.testing.assert_array_equal(Wn, [[0, 1], [2, 0]])
    assert shift == 0.0
    W = np.array([[0.0, -2.0, 1.0], [0.5, 9.0, 0.0], [3.0, 1.0, 0.0]])
    Wn, shift = normalize_affinities(W)
    assert shift == 2.0
    np.testing.assert_array_equal(Wn, [[0, 0, 3], [2.5, 0, 2], [5, 3, 0]])
    Wn, _ = normalize_affinities([[0, 1], [3, 0]])
    assert Wn[0, 1] == 1 and Wn[1, 0] == 3


def test_normalize_idempotent(rng):
    for _ in range(100):
        W = rng.normal(size=(5, 5))
        once, _ = normalize_affinities(W)
        twice, shift = normalize_affinities(once)
        assert shift == 0.0
        np.testing.assert_array_equal(once, twice)


def test_normalize_rejects_nonfinite():
    with pytest.raises(ValueError):
        normalize_affinities([[0, np.nan], [1, 0]])


def test_negative_affinities_are_handled():
    W = two_triangles() * 2 - 1
    res = peel_partition(W)
    assert res.shift_applied == 1.0
    assert _member_sets(res) == {frozenset({0, 1, 2}), frozenset({3, 4, 5})}


def test_asymmetric_affinities_run():
    W = np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0.0]])
    c = extract_dominant_set(W)
    assert c.converged


def test_motzkin_straus(rng):
    for _ in range(30):
        n = rng.integers(3, 9)
        W = random_graph(rng, n)
        omega = clique_number(W)
        bound = 1 - 1 / omega
        for x0 in [None, *(rng.dirichlet(np.ones(n)) for _ in range(3))]:
            assert extract_dominant_set(W, x0).cohesiveness <= bound + 1e-6
        # start at the barycenter of a maximum-clique face
        from itertools import combinations
        S = next(S for S in combinations(range(n), omega)
                 if all(W[i, j] for i, j in combinations(S, 2)))
        x0 = np.zeros(n)
        x0[list(S)] = 1 / omega
        assert extract_dominant_set(W, x0).cohesiveness == pytest.approx(bound, abs=1e-6)


def _uniform_cohesiveness(W, S):
    S = sorted(S)
    w = np.full(len(S), 1 / len(S))
    return w @ W[np.ix_(S, S)] @ w


@pytest.mark.parametrize("weighted", [False, True])
def test_support_is_local_maximizer(rng, weighted):
    for _ in range(100):
        n = rng.integers(2, 9)
        W = random_symmetric(rng, n, True) if weighted else random_graph(rng, n)
        c = extract_dominant_set(W)
        S = set(c.members.tolist())
        for j in range(n):
            T = S ^ {j}
            if T:
                assert c.cohesiveness >= _uniform_cohesiveness(W, T) - 1e-9


def test_peel_coverage_and_index_integrity(rng):
    for _ in range(50):
        n = rng.integers(1, 10)
        W = random_graph(rng, n, 0.4) * rng.random((n, n))
        W = (W + W.T) / 2
        res = peel_partition(W, min_cohesiveness=0.05 * rng.random())
        seen = []
        for c in res.clusters:
            seen.extend(c.members.tolist())
            coh = c.weights @ W[np.ix_(c.members, c.members)] @ c.weights
            assert coh == pytest.approx(c.cohesiveness, abs=1e-10)
        assert len(seen) == len(set(seen))
        assert sorted(seen + res.outliers.tolist()) == list(range(n))


def test_estimator_peel():
    est = DominantSetClustering()
    labels = est.fit_predict(two_triangles())
    assert labels[0] == labels[1] == labels[2] != labels[3] == labels[4] == labels[5]
    assert est.membership_.shape == (6, 2)
    np.testing.assert_allclose(est.membership_.sum(axis=0), 1.0)
    assert est.outliers_.size == 0


def test_estimator_overlap_and_params():
    est = DominantSetClustering(mode="overlap", min_cohesiveness=0.1)
    est.fit(shared_vertex_triangles())
    assert len(est.clusters_) == 2
    assert (est.membership_[2] > 0).all()
    params = est.get_params()
    assert params["mode"] == "overlap" and params["min_cohesiveness"] == 0.1
    other = clone(est).set_params(mode="peel")
    assert other.mode == "peel" and not hasattr(other, "labels_")


def test_estimator_kernel_affinity(rng):
    X = np.r_[rng.normal(0, 0.1, (10, 2)), rng.normal(5, 0.1, (10, 2))]
    labels = DominantSetClustering(affinity="rbf", gamma=1.0).fit_predict(X)
    assert len(set(labels[:10])) == 1 and len(set(labels[10:])) == 1
    assert labels[0] != labels[10]


def test_estimator_bad_mode():
    with pytest.raises(ValueError):
        DominantSetClustering(mode="spectral").fit(triangle())
