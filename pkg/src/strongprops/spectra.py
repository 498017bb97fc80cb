"""Eigenstructure: exact distinct-eigenvalue counts, clustered float spectra, power traces."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeError, warn_ambiguous
from .scalars import ExactMatrix, ExactScalar, rank_exact

DEFAULT_CLUSTER_TOL = 1e-8
AMBIGUOUS_GAP = 10.0


def _sym_vec(M: ExactMatrix) -> list:
    n = M.nrows
    return [M[i, j] for i in range(n) for j in range(i, n)]


def q_exact(A: ExactMatrix) -> int:
    """Number of distinct eigenvalues of a symmetric exact matrix.

    Computed as the degree of the minimal polynomial: the first k for which
    I, A, ..., A^k are linearly dependent.  No roots are ever computed.
    """
    if not isinstance(A, ExactMatrix):
        raise TypeError("q_exact needs an ExactMatrix")
    if not A.is_symmetric():
        raise ShapeError("q_exact needs a symmetric matrix")
    n = A.nrows
    if n == 0:
        return 0
    power = ExactMatrix.identity(n, A.d)
    vecs = [_sym_vec(power)]
    for k in range(1, n + 1):
        power = power @ A
        vecs.append(_sym_vec(power))
        if rank_exact(vecs) < k + 1:
            return k
    raise ArithmeticError("powers of a symmetric matrix stayed independent past n")


def power_traces(A: ExactMatrix, kmax: int) -> list[ExactScalar]:
    """Exact tr(A^k) for k = 0..kmax."""
    if not A.is_square():
        raise ShapeError("power_traces needs a square matrix")
    out = []
    power = ExactMatrix.identity(A.nrows, A.d)
    for k in range(kmax + 1):
        if k:
            power = power @ A
        out.append(power.trace())
    return out


@dataclass(frozen=True)
class MultiplicityList:
    m: tuple

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        if any(x < 1 for x in self.m):
            raise ValueError("multiplicities must be positive")

    def __iter__(self):
        return iter(self.m)

    def __len__(self):
        return len(self.m)

    @property
    def n(self) -> int:
        return sum(self.m)


@dataclass
class SpectralData:
    eigenvalues: list
    multiplicities: list
    projectors: list = field(repr=False)
    cluster_gap: float
    tol: float = DEFAULT_CLUSTER_TOL
    ambiguous: bool = False
    raw_eigenvalues: np.ndarray | None = field(default=None, repr=False)
    eigenvectors: np.ndarray | None = field(default=None, repr=False)

    @property
    def q(self) -> int:
        return len(self.eigenvalues)

    def to_json(self, full: bool = False) -> dict:
        out = {
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "multiplicities": [int(m) for m in self.multiplicities],
            "cluster_gap": _json_float(self.cluster_gap),
            "ambiguous": self.ambiguous,
        }
        if full:
            out["projectors"] = [np.asarray(E).tolist() for E in self.projectors]
        return out


def _json_float(x: float):
    return None if math.isinf(x) else float(x)


def eig_cluster(A, tol: float = DEFAULT_CLUSTER_TOL) -> SpectralData:
    """Symmetric eigendecomposition with greedy clustering of nearby eigenvalues.

    Consecutive sorted eigenvalues closer than ``tol * max(1, ||A||)`` are
    merged.  ``cluster_gap`` is the smallest gap between clusters measured in
    units of that threshold; below 10 the result is flagged ambiguous.
    """
    if isinstance(A, ExactMatrix):
        A = A.to_numpy()
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError("eig_cluster needs a square matrix")
    n = A.shape[0]
    scale = max(1.0, float(np.max(np.abs(A))) if n else 1.0)
    if np.max(np.abs(A - A.T), initial=0.0) > tol * scale:
        raise ShapeError("matrix is not symmetric within tolerance")
    w, V = np.linalg.eigh((A + A.T) / 2)
    norm = max(1.0, float(np.max(np.abs(w))) if n else 1.0)
    thresh = tol * norm
    groups: list[list[int]] = []
    for k in range(n):
        if groups and w[k] - w[groups[-1][-1]] <= thresh:
            groups[-1].append(k)
        else:
            groups.append([k])
    vals = [float(np.mean(w[g])) for g in groups]
    mults = [len(g) for g in groups]
    projs = [V[:, g] @ V[:, g].T for g in groups]
    gaps = [w[groups[k + 1][0]] - w[groups[k][-1]] for k in range(len(groups) - 1)]
    gap = min(gaps) / thresh if gaps else math.inf
    ambiguous = gap < AMBIGUOUS_GAP
    if ambiguous:
        warn_ambiguous(f"eigenvalue clusters separated by only {gap:.3g} tolerances")
    return SpectralData(vals, mults, projs, float(gap), tol, ambiguous, w, V)


def multiplicity_list(S: SpectralData) -> MultiplicityList:
    return MultiplicityList(tuple(S.multiplicities))
