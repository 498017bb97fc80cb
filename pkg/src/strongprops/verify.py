"""Decide the strong Arnold / spectral / multiplicity properties.

Two independent routes are provided.  The rank criteria build, for the
non-edges of G (in lexicographic order), the matrix of tangent directions
restricted to those positions and compare its rank with the number p of
non-edges.  The definitional route solves the homogeneous linear system on
a symmetric X directly; a nonzero solution is a witness that the property
fails.  Exact inputs (``ExactMatrix``) give proofs, float inputs give
verdicts with a rank margin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import ExactOnlyError, PatternError, ShapeError, DomainError, warn_ambiguous
from .matgraph import Graph, complement, disjoint_union, matches_pattern, pattern_of
from .scalars import (
    ExactMatrix,
    block_diag,
    nullspace_basis_exact,
    rank_exact,
    rank_float,
)
from .spectra import DEFAULT_CLUSTER_TOL, eig_cluster, q_exact

PROPERTIES = ("SAP", "SSP", "SMP")
DEFAULT_RANK_TOL = 1e-9
DEFAULT_PATTERN_TOL = 1e-10
ADVISORY_GAP = 1e2
REPORT_SCHEMA = "strongprops.report/1"


@dataclass
class StrongPropertyReport:
    property: str
    verdict: bool
    p: int
    rank: int
    mode: str
    n: int
    margin: float | None = None
    witness: object = None
    path: str = "rank-criterion"
    q: int | None = None
    advisory: bool = False
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "schema": REPORT_SCHEMA,
            "property": self.property,
            "verdict": self.verdict,
            "n": self.n,
            "p": self.p,
            "rank": self.rank,
            "mode": self.mode,
            "path": self.path,
            "margin": None if self.margin is None or math.isinf(self.margin) else self.margin,
            "margin_infinite": self.margin is not None and math.isinf(self.margin),
            "q": self.q,
            "advisory": self.advisory,
        }
        if self.witness is not None:
            if isinstance(self.witness, ExactMatrix):
                out["witness"] = self.witness.to_strings()
            else:
                out["witness"] = np.asarray(self.witness).tolist()
        if self.notes:
            out["notes"] = list(self.notes)
        return out


# ---------------------------------------------------------------------------
# helpers


def _is_exact(A) -> bool:
    return isinstance(A, ExactMatrix)


def _order(A) -> int:
    return A.nrows if _is_exact(A) else np.asarray(A).shape[0]


def _graph_for(A, G: Graph | None, pattern_tol: float) -> Graph:
    if G is None:
        return pattern_of(A, pattern_tol)
    if _order(A) != G.n:
        raise PatternError(f"matrix order {_order(A)} differs from graph order {G.n}")
    verdict = matches_pattern(A, G, pattern_tol)
    if not verdict.in_class:
        raise PatternError(f"matrix is not in S(G): {verdict.violations[:5]}")
    return G


def _nonedges(G: Graph) -> list[tuple[int, int]]:
    """Non-edges as 0-based (k, l), k < l, lexicographic."""
    return [(k, l) for k in range(G.n) for l in range(k + 1, G.n) if not G.has_edge(k + 1, l + 1)]


def _getter(A):
    if _is_exact(A):
        rows = A.rows()
        zero = rows[0][0] * 0 if rows and rows[0] else 0
        return rows, zero
    A = np.asarray(A, dtype=float)
    return A, 0.0


def _sap_columns(a, zero, n, nonedges):
    cols = []
    for i in range(n):
        for j in range(n):
            col = []
            for k, l in nonedges:
                v = zero
                if l == j:
                    v = v + a[k][i]
                if k == j:
                    v = v + a[i][l]
                col.append(v)
            cols.append(col)
    return cols


def _ssp_columns(a, zero, n, nonedges):
    cols = []
    for i in range(n):
        for j in range(i + 1, n):
            col = []
            for k, l in nonedges:
                v = zero
                if l == j:
                    v = v + a[k][i]
                if l == i:
                    v = v - a[k][j]
                if k == i:
                    v = v - a[j][l]
                if k == j:
                    v = v + a[i][l]
                col.append(v)
            cols.append(col)
    return cols


def _powers(A, q: int):
    if _is_exact(A):
        out, P = [], ExactMatrix.identity(A.nrows, A.d)
        for k in range(q):
            if k:
                P = P @ A
            out.append(P.rows())
        return out
    A = np.asarray(A, dtype=float)
    out, P = [], np.eye(A.shape[0])
    for k in range(q):
        if k:
            P = P @ A
        out.append(P)
    return out


def constraint_matrix(A, G: Graph, prop: str, q: int | None = None):
    """Rank-criterion matrix: rows = non-edges of G, columns = tangent generators.

    Returned as a list of rows (exact field elements) or a numpy array.
    """
    prop = prop.upper()
    n = _order(A)
    ne = _nonedges(G)
    a, zero = _getter(A)
    if prop == "SAP":
        cols = _sap_columns(a, zero, n, ne)
    elif prop in ("SSP", "SMP"):
        cols = _ssp_columns(a, zero, n, ne)
        if prop == "SMP":
            if q is None:
                raise ValueError("SMP constraint matrix needs q")
            for P in _powers(A, q):
                cols.append([P[k][l] for k, l in ne])
    else:
        raise ValueError(f"unknown property {prop!r}")
    rows = [list(r) for r in zip(*cols)] if ne else []
    if _is_exact(A):
        return rows
    return np.array(rows, dtype=float).reshape(len(ne), len(cols))


def _sym_index(n: int):
    idx = {}
    for i in range(n):
        for j in range(i, n):
            idx[(i, j)] = len(idx)
    return idx


def definition_system(A, G: Graph, prop: str):
    """Linear system on the n(n+1)/2 upper-triangular unknowns of symmetric X.

    Rows encode I∘X = O, A∘X = O, then AX = O (SAP) or AX - XA = O (SSP), and
    for SMP additionally tr(A^t X) = 0 for t = 0..n-1.
    """
    prop = prop.upper()
    n = _order(A)
    idx = _sym_index(n)
    N = len(idx)
    a, zero = _getter(A)
    one = zero + 1

    def u(i, j):
        return idx[(i, j)] if i <= j else idx[(j, i)]

    rows = []
    for i in range(n):
        r = [zero] * N
        r[u(i, i)] = one
        rows.append(r)
    for i, j in G.sorted_edges():
        r = [zero] * N
        r[u(i - 1, j - 1)] = one
        rows.append(r)
    if prop == "SAP":
        for k in range(n):
            for l in range(n):
                r = [zero] * N
                for m in range(n):
                    r[u(m, l)] = r[u(m, l)] + a[k][m]
                rows.append(r)
    elif prop in ("SSP", "SMP"):
        for k in range(n):
            for l in range(k + 1, n):
                r = [zero] * N
                for m in range(n):
                    r[u(m, l)] = r[u(m, l)] + a[k][m]
                    r[u(k, m)] = r[u(k, m)] - a[m][l]
                rows.append(r)
        if prop == "SMP":
            for P in _powers(A, n):
                r = [zero] * N
                for k in range(n):
                    for l in range(n):
                        r[u(k, l)] = r[u(k, l)] + P[l][k]
                rows.append(r)
    else:
        raise ValueError(f"unknown property {prop!r}")
    if _is_exact(A):
        return rows, idx
    return np.array(rows, dtype=float), idx


def _vector_to_symmetric(v, idx, n, d):
    rows = [[None] * n for _ in range(n)]
    for (i, j), k in idx.items():
        rows[i][j] = v[k]
        rows[j][i] = v[k]
    return ExactMatrix._raw(rows, d)


def _exact_witness(A: ExactMatrix, G: Graph, prop: str):
    rows, idx = definition_system(A, G, prop)
    basis = nullspace_basis_exact(ExactMatrix._raw(rows, A.d))
    if not basis:
        return None, 0
    X = _vector_to_symmetric(basis[0], idx, A.nrows, A.d)
    return X, len(basis)


def _float_witness(A: np.ndarray, G: Graph, prop: str) -> np.ndarray:
    M, idx = definition_system(A, G, prop)
    _, _, vt = np.linalg.svd(M)
    v = vt[-1]
    n = A.shape[0]
    X = np.zeros((n, n))
    for (i, j), k in idx.items():
        X[i, j] = X[j, i] = v[k]
    return X / np.linalg.norm(X)


def _float_q(A, cluster_tol: float):
    S = eig_cluster(A, cluster_tol)
    return S.q, S.cluster_gap


# ---------------------------------------------------------------------------
# verifiers


def _verify(A, G, prop, tol, pattern_tol, cluster_tol) -> StrongPropertyReport:
    G = _graph_for(A, G, pattern_tol)
    n = G.n
    p = n * (n - 1) // 2 - G.num_edges
    q = None
    advisory = False
    notes = []
    if prop == "SMP":
        if _is_exact(A):
            q = q_exact(A)
        else:
            q, gap = _float_q(A, cluster_tol)
            if gap < ADVISORY_GAP:
                advisory = True
                notes.append(f"cluster_gap {gap:.3g} below {ADVISORY_GAP:g}")
    M = constraint_matrix(A, G, prop, q)
    if _is_exact(A):
        rank = rank_exact(M) if p else 0
        report = StrongPropertyReport(prop, rank == p, p, rank, "exact", n, None, None, q=q)
        if not report.verdict:
            X, nullity = _exact_witness(A, G, prop)
            if X is None:
                raise ArithmeticError("rank criterion and definitional system disagree")
            report.witness = X
            report.notes.append(f"definitional nullity {nullity}")
        return report
    if p:
        rank, margin = rank_float(M, tol)
    else:
        rank, margin = 0, math.inf
    A = np.asarray(A, dtype=float)
    report = StrongPropertyReport(prop, rank == p, p, rank, "float", n, margin, None,
                                  q=q, advisory=advisory, notes=notes)
    if not report.verdict:
        report.witness = _float_witness(A, G, prop)
    return report


def verify_sap(A, G: Graph | None = None, tol: float = DEFAULT_RANK_TOL,
               pattern_tol: float = DEFAULT_PATTERN_TOL) -> StrongPropertyReport:
    return _verify(A, G, "SAP", tol, pattern_tol, DEFAULT_CLUSTER_TOL)


def verify_ssp(A, G: Graph | None = None, tol: float = DEFAULT_RANK_TOL,
               pattern_tol: float = DEFAULT_PATTERN_TOL) -> StrongPropertyReport:
    return _verify(A, G, "SSP", tol, pattern_tol, DEFAULT_CLUSTER_TOL)


def verify_smp(A, G: Graph | None = None, tol: float = DEFAULT_RANK_TOL,
               pattern_tol: float = DEFAULT_PATTERN_TOL,
               cluster_tol: float = DEFAULT_CLUSTER_TOL) -> StrongPropertyReport:
    """SMP via the SSP matrix augmented by vec(A^k), k < q."""
    return _verify(A, G, "SMP", tol, pattern_tol, cluster_tol)


def verify(A, prop: str, G: Graph | None = None, **kw) -> StrongPropertyReport:
    prop = prop.upper()
    fn = {"SAP": verify_sap, "SSP": verify_ssp, "SMP": verify_smp}.get(prop)
    if fn is None:
        raise ValueError(f"unknown property {prop!r}")
    return fn(A, G, **kw)


def verify_by_definition(A, G: Graph | None = None, prop: str = "SSP") -> StrongPropertyReport:
    """Independent oracle: exact nullspace of the defining linear system."""
    if not _is_exact(A):
        raise ExactOnlyError("verify_by_definition needs exact entries")
    prop = prop.upper()
    G = _graph_for(A, G, DEFAULT_PATTERN_TOL)
    rows, idx = definition_system(A, G, prop)
    N = len(idx)
    basis = nullspace_basis_exact(ExactMatrix._raw(rows, A.d))
    rank = N - len(basis)
    witness = _vector_to_symmetric(basis[0], idx, A.nrows, A.d) if basis else None
    return StrongPropertyReport(prop, not basis, N, rank, "exact", A.nrows, None, witness,
                                path="definition", notes=[f"nullity {len(basis)}"])


def check_witness(A: ExactMatrix, X: ExactMatrix, prop: str, G: Graph | None = None) -> bool:
    """True when X is a nonzero symmetric solution of the defining system for prop."""
    prop = prop.upper()
    G = pattern_of(A) if G is None else G
    if X.is_zero() or not X.is_symmetric():
        return False
    n = A.nrows
    for i in range(n):
        if X[i, i]:
            return False
    if any(X[i - 1, j - 1] for i, j in G.edges):
        return False
    if prop == "SAP":
        return (A @ X).is_zero()
    AX, XA = A @ X, X @ A
    if not (AX - XA).is_zero():
        return False
    if prop == "SMP":
        P = ExactMatrix.identity(n, A.d)
        for k in range(n):
            if k:
                P = P @ A
            if (P @ X).trace():
                return False
    return True


# ---------------------------------------------------------------------------
# Gershgorin test


@dataclass
class GershgorinResult:
    status: str  # "ProvedSSP" or "Inconclusive"
    intersection_graph: Graph
    pattern: Graph

    @property
    def proved(self) -> bool:
        return self.status == "ProvedSSP"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "intersection_edges": [list(e) for e in self.intersection_graph.sorted_edges()],
            "pattern_edges": [list(e) for e in self.pattern.sorted_edges()],
        }


def gershgorin_graph(A) -> Graph:
    """Vertices i, j adjacent when |a_ii - a_jj| <= R_i + R_j (off-diagonal absolute row sums)."""
    if _is_exact(A):
        a = A.rows()
        n = A.nrows
    else:
        a = np.asarray(A, dtype=float)
        n = a.shape[0]
    radius = []
    for i in range(n):
        s = 0
        for l in range(n):
            if l != i:
                s = s + abs(a[i][l])
        radius.append(s)
    es = [(i + 1, j + 1) for i in range(n) for j in range(i + 1, n)
          if abs(a[i][i] - a[j][j]) <= radius[i] + radius[j]]
    return Graph.from_edges(n, es)


def gershgorin_ssp(A, pattern_tol: float = DEFAULT_PATTERN_TOL) -> GershgorinResult:
    """Sufficient SSP test; never asserts failure."""
    G = pattern_of(A, pattern_tol)
    GI = gershgorin_graph(A)
    status = "ProvedSSP" if GI.is_subgraph_of(G) else "Inconclusive"
    return GershgorinResult(status, GI, G)


# ---------------------------------------------------------------------------
# direct sums


def _sylvester_witness(A1: ExactMatrix, A2: ExactMatrix):
    """Nonzero W with A1 W = W A2, or None."""
    n1, n2 = A1.nrows, A2.nrows
    a, b = A1.rows(), A2.rows()
    d = A1.d or A2.d
    zero = ExactMatrix.zeros(1, 1, d)[0, 0]
    rows = []
    for i in range(n1):
        for j in range(n2):
            r = [zero] * (n1 * n2)
            for m in range(n1):
                r[m * n2 + j] = r[m * n2 + j] + a[i][m]
            for m in range(n2):
                r[i * n2 + m] = r[i * n2 + m] - b[m][j]
            rows.append(r)
    basis = nullspace_basis_exact(ExactMatrix._raw(rows, d))
    if not basis:
        return None
    v = basis[0]
    return ExactMatrix._raw([[v[i * n2 + j] for j in range(n2)] for i in range(n1)], d)


def direct_sum_matrix(A1, A2):
    if _is_exact(A1) and _is_exact(A2):
        return block_diag(A1, A2)
    a1, a2 = np.asarray(_as_float(A1)), np.asarray(_as_float(A2))
    out = np.zeros((a1.shape[0] + a2.shape[0],) * 2)
    out[:a1.shape[0], :a1.shape[0]] = a1
    out[a1.shape[0]:, a1.shape[0]:] = a2
    return out


def _as_float(A):
    return A.to_numpy() if _is_exact(A) else np.asarray(A, dtype=float)


def direct_sum_verdict(A1, A2, prop: str = "SSP", r1: StrongPropertyReport | None = None,
                       r2: StrongPropertyReport | None = None, tol: float = DEFAULT_RANK_TOL,
                       cluster_tol: float = DEFAULT_CLUSTER_TOL) -> StrongPropertyReport:
    """Strong property of A1 ⊕ A2 from the blocks: both blocks have it and spectra are disjoint.

    On failure the witness is built from the obstruction: a block witness
    padded with zeros, or an off-diagonal Z = [[O, W], [W^T, O]] with
    A1 W = W A2 when the spectra meet.
    """
    prop = prop.upper()
    if prop not in ("SSP", "SMP"):
        raise ValueError("direct sums are characterized for SSP and SMP")
    exact = _is_exact(A1) and _is_exact(A2)
    if _is_exact(A1) != _is_exact(A2):
        raise ExactOnlyError("both blocks must use the same mode")
    r1 = r1 or verify(A1, prop)
    r2 = r2 or verify(A2, prop)
    n1, n2 = _order(A1), _order(A2)
    A = direct_sum_matrix(A1, A2)
    G = disjoint_union(pattern_of(A1), pattern_of(A2))
    p = (n1 + n2) * (n1 + n2 - 1) // 2 - G.num_edges
    notes = []
    advisory = r1.advisory or r2.advisory
    if exact:
        disjoint = q_exact(A) == q_exact(A1) + q_exact(A2)
    else:
        w1 = np.linalg.eigvalsh(_as_float(A1))
        w2 = np.linalg.eigvalsh(_as_float(A2))
        scale = max(1.0, float(np.max(np.abs(np.concatenate([w1, w2])))))
        sep = float(np.min(np.abs(w1[:, None] - w2[None, :]))) / (cluster_tol * scale)
        disjoint = sep > 1.0
        if 1.0 < sep < 10.0:
            advisory = True
            warn_ambiguous(f"block spectra separated by only {sep:.3g} tolerances")
        notes.append(f"spectral separation {sep:.3g} tolerances")
    verdict = r1.verdict and r2.verdict and disjoint
    witness = None
    if not verdict:
        if not disjoint:
            witness = _shared_eigen_witness(A1, A2, exact)
            notes.append("spectra intersect")
        else:
            blk = r1 if not r1.verdict else r2
            witness = _pad_block_witness(blk.witness, n1, n2, first=not r1.verdict, exact=exact)
            notes.append("block lacks the property")
    if exact:
        rank = rank_exact(constraint_matrix(A, G, prop, q_exact(A) if prop == "SMP" else None)) if p else 0
        margin = None
    else:
        M = constraint_matrix(A, G, prop, len(eig_cluster(A, cluster_tol).eigenvalues) if prop == "SMP" else None)
        rank, margin = rank_float(M, tol) if p else (0, math.inf)
    if (rank == p) != verdict:
        notes.append("composed verdict disagrees with the direct rank computation")
        if exact:
            raise ArithmeticError("direct-sum characterization contradicted by exact rank")
        advisory = True
    return StrongPropertyReport(prop, verdict, p, rank, "exact" if exact else "float", n1 + n2,
                                margin, witness, path="direct-sum", advisory=advisory, notes=notes)


def _pad_block_witness(X, n1, n2, first: bool, exact: bool):
    if X is None:
        return None
    if exact:
        d = X.d
        Z1 = X if first else ExactMatrix.zeros(n1, d=d)
        Z2 = ExactMatrix.zeros(n2, d=d) if first else X
        return block_diag(Z1, Z2)
    out = np.zeros((n1 + n2, n1 + n2))
    if first:
        out[:n1, :n1] = X
    else:
        out[n1:, n1:] = X
    return out


def _shared_eigen_witness(A1, A2, exact: bool):
    n1, n2 = _order(A1), _order(A2)
    if exact:
        W = _sylvester_witness(A1, A2)
        d = W.d
        z = ExactMatrix.zeros(1, 1, d)[0, 0]
        rows = [[z] * (n1 + n2) for _ in range(n1 + n2)]
        for i in range(n1):
            for j in range(n2):
                rows[i][n1 + j] = W[i, j]
                rows[n1 + j][i] = W[i, j]
        return ExactMatrix._raw(rows, d)
    w1, V1 = np.linalg.eigh(_as_float(A1))
    w2, V2 = np.linalg.eigh(_as_float(A2))
    i, j = np.unravel_index(np.argmin(np.abs(w1[:, None] - w2[None, :])), (n1, n2))
    Z = np.zeros((n1 + n2, n1 + n2))
    Z[:n1, n1:] = np.outer(V1[:, i], V2[:, j])
    Z[n1:, :n1] = Z[:n1, n1:].T
    return Z


# ---------------------------------------------------------------------------
# tangent spaces and edge bounds


@dataclass
class TangentDims:
    dim_rank_tangent: int
    dim_spec_tangent: int
    dim_mult_tangent: int
    r: int
    m: tuple
    q: int
    n: int

    def to_json(self) -> dict:
        return {
            "n": self.n, "rank": self.r, "multiplicities": list(self.m), "q": self.q,
            "dim_rank_tangent": self.dim_rank_tangent,
            "dim_spec_tangent": self.dim_spec_tangent,
            "dim_mult_tangent": self.dim_mult_tangent,
        }


def tangent_dims_from(n: int, r: int, m) -> TangentDims:
    m = tuple(int(x) for x in m)
    if sum(m) != n:
        raise ValueError("multiplicities must sum to n")
    q = len(m)
    rank_t = comb(n + 1, 2) - comb(n - r + 1, 2)
    spec_t = comb(n, 2) - sum(comb(x, 2) for x in m)
    return TangentDims(rank_t, spec_t, spec_t + q, r, m, q, n)


def tangent_dims(A, cluster_tol: float = DEFAULT_CLUSTER_TOL, tol: float = DEFAULT_RANK_TOL) -> TangentDims:
    """Closed-form dimensions of the rank, spectral and multiplicity tangent spaces at A."""
    S = eig_cluster(A, cluster_tol)
    if _is_exact(A):
        r = rank_exact(A)
        if q_exact(A) != S.q:
            warn_ambiguous("float clustering disagrees with the exact distinct-eigenvalue count")
    else:
        r, _ = rank_float(A, tol)
    return tangent_dims_from(_order(A), r, S.multiplicities)


def _symvec_np(M: np.ndarray) -> np.ndarray:
    iu = np.triu_indices(M.shape[0])
    return M[iu]


def tangent_span_ranks(A, q: int | None = None, tol: float = DEFAULT_RANK_TOL) -> dict:
    """Numerical ranks (with margins) of the generating sets of the three tangent spaces."""
    A = _as_float(A)
    n = A.shape[0]
    if q is None:
        q = eig_cluster(A).q
    sap = []
    for i in range(n):
        for j in range(n):
            E = np.zeros((n, n))
            E[i, j] = 1.0
            sap.append(_symvec_np(A @ E + E.T @ A))
    ssp = []
    for i in range(n):
        for j in range(i + 1, n):
            K = np.zeros((n, n))
            K[i, j], K[j, i] = 1.0, -1.0
            ssp.append(_symvec_np(A @ K - K @ A))
    powers = [_symvec_np(P) for P in (np.linalg.matrix_power(A, k) for k in range(q))]
    # commutators of a near-scalar A are pure round-off, so the threshold
    # is measured against the size of A, not only against the largest generator
    scale = max(float(np.linalg.norm(A, 2)), 1.0)
    out = {}
    for name, gens in (("rank", sap), ("spec", ssp), ("mult", ssp + powers)):
        out[name] = _rank_with_floor(np.array(gens).T, tol, scale)
    return out


def _rank_with_floor(M, tol: float, scale: float) -> tuple[int, float]:
    if M.size == 0:
        return 0, math.inf
    s = np.linalg.svd(M, compute_uv=False)
    thresh = tol * max(float(s[0]), scale)
    kept, dropped = s[s > thresh], s[s <= thresh]
    if kept.size == 0:
        return 0, (math.inf if not dropped.size or dropped[0] == 0.0 else thresh / float(dropped[0]))
    if dropped.size == 0 or dropped[0] == 0.0:
        return int(kept.size), math.inf
    return int(kept.size), float(kept[-1] / dropped[0])


@dataclass
class EdgeBoundReport:
    edges: int
    sap_bound: int
    ssp_bound: int
    smp_bound: int
    bipartite: bool

    @property
    def sap_excluded(self) -> bool:
        return self.edges < self.sap_bound

    @property
    def ssp_excluded(self) -> bool:
        return self.edges < self.ssp_bound

    @property
    def smp_excluded(self) -> bool:
        return self.edges < self.smp_bound

    def to_json(self) -> dict:
        return {
            "edges": self.edges, "bipartite": self.bipartite,
            "sap": {"bound": self.sap_bound, "excluded": self.sap_excluded},
            "ssp": {"bound": self.ssp_bound, "excluded": self.ssp_excluded},
            "smp": {"bound": self.smp_bound, "excluded": self.smp_excluded},
        }


def edge_bounds(G: Graph, m, r: int | None = None) -> EdgeBoundReport:
    """Necessary edge counts for transversality given a multiplicity list (and rank)."""
    m = [int(x) for x in m]
    if len(m) < 2:
        raise DomainError("bounds assume a non-scalar matrix (at least two distinct eigenvalues)")
    n = G.n
    bip = G.is_bipartite()
    if r is None:
        sap = 0
    else:
        sap = comb(n - r + 1, 2) - (1 if bip else 0)
    s = sum(comb(x, 2) for x in m)
    return EdgeBoundReport(G.num_edges, sap, s, s - len(m) + 2, bip)


def edge_bound_check(G: Graph, A) -> EdgeBoundReport:
    td = tangent_dims(A)
    if td.q < 2:
        raise DomainError("scalar matrix: the edge bounds do not apply")
    return edge_bounds(G, td.m, td.r)
