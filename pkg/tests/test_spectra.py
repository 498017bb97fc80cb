import random
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_symmetric
from strongprops.constructs import flipped_cycle_matrix
from strongprops.errors import AmbiguousClusterWarning, ShapeError
from strongprops.scalars import ExactMatrix, ExactScalar
from strongprops.spectra import (MultiplicityList, eig_cluster, multiplicity_list, power_traces,
                                 q_exact)


def test_q_exact_examples(certs):
    assert q_exact(ExactMatrix.identity(4)) == 1
    assert q_exact(flipped_cycle_matrix(5)) == 3
    assert q_exact(certs["SMPnotSAP"].matrix) == 2


def test_q_exact_needs_symmetric():
    with pytest.raises(ShapeError):
        q_exact(ExactMatrix([[0, 1], [0, 0]]))


def test_eig_cluster_examples(certs):
    S = eig_cluster(np.diag([1.0, 2.0, 3.0]))
    assert np.allclose(S.eigenvalues, [1, 2, 3]) and S.multiplicities == [1, 1, 1]
    S = eig_cluster(certs["exstar"].matrix)
    assert np.allclose(S.eigenvalues, [-np.sqrt(3), 0, np.sqrt(3)]) and S.multiplicities == [1, 2, 1]
    S = eig_cluster(certs["SMPnotSAP"].matrix)
    assert np.allclose(S.eigenvalues, [0, 4]) and S.multiplicities == [4, 4]


def test_eig_cluster_warns_when_ambiguous():
    with pytest.warns(AmbiguousClusterWarning):
        S = eig_cluster(np.diag([1.0, 1.0 + 5e-8]))
    assert S.ambiguous


def test_power_traces_examples():
    assert power_traces(ExactMatrix.zeros(3), 3) == [3, 0, 0, 0]
    assert power_traces(ExactMatrix([[0, 1], [1, 0]]), 2) == [2, 0, 2]
    assert power_traces(flipped_cycle_matrix(4), 2)[2] == 8


def test_multiplicity_list_examples(certs):
    assert tuple(multiplicity_list(eig_cluster(np.array([[5.0]])))) == (1,)
    assert tuple(multiplicity_list(eig_cluster(certs["exstar"].matrix))) == (1, 2, 1)
    assert tuple(multiplicity_list(eig_cluster(flipped_cycle_matrix(6)))) == (2, 2, 2)
    with pytest.raises(ValueError):
        MultiplicityList((1, 0))


@given(st.integers(0, 2**32 - 1), st.integers(1, 7))
def test_q_exact_matches_clusters(seed, n):
    A = random_symmetric(random.Random(seed), n)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AmbiguousClusterWarning)
        S = eig_cluster(A)
    if S.cluster_gap > 1e2:
        assert q_exact(A) == S.q


@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.integers(-5, 5))
def test_q_exact_shift_invariant(seed, n, c):
    A = random_symmetric(random.Random(seed), n)
    assert q_exact(A.shift(ExactScalar(c))) == q_exact(A)


@given(st.integers(0, 2**32 - 1), st.integers(1, 7))
def test_spectral_decomposition_invariants(seed, n):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, n))
    A = X + X.T
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AmbiguousClusterWarning)
        S = eig_cluster(A)
    tol = S.tol * max(1.0, np.abs(A).max())
    assert sum(S.multiplicities) == n
    assert np.allclose(sum(S.projectors), np.eye(n), atol=1e-10)
    for E in S.projectors:
        assert np.abs(E @ E - E).max() <= n * 1e-8
    recon = sum(lam * E for lam, E in zip(S.eigenvalues, S.projectors))
    assert np.abs(A - recon).max() <= n * tol * max(1.0, np.abs(A).max())
    assert abs(sum(m * l for m, l in zip(S.multiplicities, S.eigenvalues)) - np.trace(A)) <= n * tol


def test_spectral_json():
    S = eig_cluster(np.diag([1.0, 1.0, 2.0]))
    out = S.to_json()
    assert out["multiplicities"] == [2, 1] and "projectors" not in out
    assert len(S.to_json(full=True)["projectors"]) == 2
