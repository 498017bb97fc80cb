"""Realize a spectrum or multiplicity list on a supergraph by continuation.

The seed A has the SSP (or SMP) for its graph G.  Iterates are kept in the
form B = Q diag(d) Q^T with Q orthogonal, updated by Q <- expm(K) Q for a
skew-symmetric K, so spectrum mode is isospectral by construction.  At each
continuation value t the positions outside G are driven to their targets:
new edges to t, remaining non-edges to 0.  The Newton step is the
minimum-norm least-squares solution of the linearization, whose matrix is
the SSP constraint matrix of the current iterate (plus eigenprojector
columns in multiplicity-list mode).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import (ContinuationError, LiftIntegrityError, PatternError, RejectedSeedError,
                     SpectrumCollisionError)
from .matgraph import Graph, PatternVerdict, find_embedding, matches_pattern, pattern_of
from .scalars import ExactMatrix
from .spectra import eig_cluster
from .verify import direct_sum_verdict, verify_smp, verify_ssp

SPECTRUM = "preserve-spectrum"
MULTIPLICITY = "preserve-multiplicity-list"
_MODE_ALIASES = {"spectrum": SPECTRUM, "ssp": SPECTRUM, SPECTRUM: SPECTRUM,
                 "multiplicity": MULTIPLICITY, "multiplicity-list": MULTIPLICITY, "smp": MULTIPLICITY,
                 MULTIPLICITY: MULTIPLICITY}

DEFAULT_STEPS = 16
DEFAULT_NEWTON_TOL = 1e-11
DEFAULT_SEED_MARGIN = 1e3
MAX_NEWTON_ITERS = 40
MAX_HALVINGS = 8


def _mode(mode: str) -> str:
    try:
        return _MODE_ALIASES[mode.lower()]
    except KeyError:
        raise ValueError(f"unknown lift mode {mode!r}") from None


@dataclass
class LiftProblem:
    A: np.ndarray
    Gtilde: Graph
    mode: str = SPECTRUM
    target_magnitude: float | None = None
    steps: int = DEFAULT_STEPS
    newton_tol: float = DEFAULT_NEWTON_TOL
    seed_margin: float = DEFAULT_SEED_MARGIN
    pattern_tol: float = 1e-10

    def __post_init__(self):
        if isinstance(self.A, ExactMatrix):
            self.A = self.A.to_numpy()
        self.A = np.array(self.A, dtype=float)
        self.mode = _mode(self.mode)
        if self.steps < 1:
            raise ValueError("steps must be positive")

    @property
    def G(self) -> Graph:
        return pattern_of(self.A, self.pattern_tol)

    def delta(self) -> list[tuple[int, int]]:
        return sorted(self.Gtilde.edges - self.G.edges)

    def default_target(self) -> float:
        A = self.A
        G = self.G
        if G.num_edges:
            return 0.1 * min(abs(A[i - 1, j - 1]) for i, j in G.edges)
        w = np.unique(np.round(np.linalg.eigvalsh(A), 12))
        return 0.1 * (float(np.min(np.diff(w))) if len(w) > 1 else 1.0)


@dataclass
class LiftResult:
    B: np.ndarray
    spectrum_error: float
    pattern_report: PatternVerdict
    ssp_margin: float | None
    path_log: list = field(default_factory=list)
    mode: str = SPECTRUM
    target_magnitude: float = 0.0
    min_edge_entry: float | None = None
    eigenvalue_drift: float = 0.0
    q: int | None = None

    def to_json(self) -> dict:
        return {
            "schema": "strongprops.lift/1",
            "mode": self.mode,
            "B": np.asarray(self.B).tolist(),
            "spectrum_error": self.spectrum_error,
            "eigenvalue_drift": self.eigenvalue_drift,
            "target_magnitude": self.target_magnitude,
            "min_edge_entry": self.min_edge_entry,
            "ssp_margin": None if self.ssp_margin is None or math.isinf(self.ssp_margin) else self.ssp_margin,
            "margin_infinite": self.ssp_margin is not None and math.isinf(self.ssp_margin),
            "in_class": self.pattern_report.in_class,
            "q": self.q,
            "path_log": [list(x) for x in self.path_log],
        }


class _State:
    """B = Q diag(d) Q^T with eigenvalue groups fixed by ``groups``."""

    def __init__(self, Q, d, groups):
        self.Q = Q
        self.d = d
        self.groups = groups

    def copy(self):
        return _State(self.Q.copy(), self.d.copy(), self.groups)

    def matrix(self):
        B = (self.Q * self.d) @ self.Q.T
        return (B + B.T) / 2


def _skew_pairs(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _jacobian(B, ctrl, pairs, state: _State | None):
    """Columns: d/dK_ij of (e^K B e^-K)[ctrl] at K = 0, then eigenprojectors."""
    rows_k = np.array([k for k, _ in ctrl])
    rows_l = np.array([l for _, l in ctrl])
    cols = []
    for i, j in pairs:
        # K = E_ij - E_ji;  KB - BK
        KB = np.zeros_like(B)
        KB[i, :] = B[j, :]
        KB[j, :] = -B[i, :]
        BK = np.zeros_like(B)
        BK[:, j] = B[:, i]
        BK[:, i] = -B[:, j]
        cols.append((KB - BK)[rows_k, rows_l])
    if state is not None:
        for g in state.groups:
            Qg = state.Q[:, g]
            cols.append((Qg @ Qg.T)[rows_k, rows_l])
    return np.column_stack(cols) if cols else np.zeros((len(ctrl), 0))


def _residual(B, ctrl, target):
    return np.array([B[k, l] for k, l in ctrl]) - target


def _newton(state: _State, ctrl, target, pairs, smp: bool, tol: float):
    """Solve for the targets at fixed t.  Returns (state, residual, iterations, converged)."""
    n = state.Q.shape[0]
    history = []
    for it in range(MAX_NEWTON_ITERS + 1):
        B = state.matrix()
        F = _residual(B, ctrl, target)
        res = float(np.max(np.abs(F))) if F.size else 0.0
        history.append(res)
        if res <= tol:
            return state, res, it, True
        if not np.isfinite(res):
            return state, res, it, False
        if len(history) > 5 and history[-1] > history[-6] / 2:
            return state, res, it, False
        J = _jacobian(B, ctrl, pairs, state if smp else None)
        step = np.linalg.lstsq(J, -F, rcond=None)[0]
        K = np.zeros((n, n))
        for (i, j), v in zip(pairs, step[:len(pairs)]):
            K[i, j] = v
            K[j, i] = -v
        state = state.copy()
        state.Q = expm(K) @ state.Q
        if smp:
            for g, c in zip(state.groups, step[len(pairs):]):
                state.d[g] += c
    return state, history[-1], MAX_NEWTON_ITERS, False


def _check_seed(p: LiftProblem, G: Graph):
    if p.mode == SPECTRUM:
        rep = verify_ssp(p.A, G)
    else:
        rep = verify_smp(p.A, G)
    margin = rep.margin if rep.margin is not None else math.inf
    if not rep.verdict:
        raise RejectedSeedError(f"seed fails the {rep.property} (rank {rep.rank} < {rep.p})")
    if margin < p.seed_margin:
        raise RejectedSeedError(f"seed {rep.property} margin {margin:.3g} below {p.seed_margin:g}")
    return rep


def _lift(p: LiftProblem) -> LiftResult:
    A = p.A
    n = A.shape[0]
    G = p.G
    if p.Gtilde.n != n:
        raise PatternError(f"supergraph has {p.Gtilde.n} vertices, seed has {n}")
    if not G.edges <= p.Gtilde.edges:
        missing = sorted(G.edges - p.Gtilde.edges)
        raise PatternError(f"supergraph lacks seed edges {missing[:5]}")
    seed_rep = _check_seed(p, G)
    smp = p.mode == MULTIPLICITY
    spec0 = eig_cluster(A)
    delta = p.delta()
    tstar = p.target_magnitude if p.target_magnitude is not None else p.default_target()
    if not delta:
        pv = matches_pattern(A, p.Gtilde, p.newton_tol)
        return LiftResult(A.copy(), 0.0, pv, seed_rep.margin, [], p.mode, tstar,
                          _min_edge(A, G), 0.0, spec0.q)

    w, V = np.linalg.eigh(A)
    groups, start = [], 0
    for m in spec0.multiplicities:
        groups.append(list(range(start, start + m)))
        start += m
    if smp:
        d = np.empty(n)
        for g, lam in zip(groups, spec0.eigenvalues):
            d[g] = lam
    else:
        d = w.copy()
    state = _State(V.copy(), d, groups)

    ctrl = [(k - 1, l - 1) for k in range(1, n + 1) for l in range(k + 1, n + 1)
            if not G.has_edge(k, l)]
    is_delta = np.array([(k + 1, l + 1) in p.Gtilde.edges for k, l in ctrl], dtype=float)
    pairs = _skew_pairs(n)

    log = []
    t_done = 0.0
    h = tstar / p.steps
    halvings = 0
    while t_done < tstar * (1 - 1e-12):
        t_next = min(tstar, t_done + h)
        new, res, its, ok = _newton(state, ctrl, is_delta * t_next, pairs, smp, p.newton_tol)
        log.append((float(t_next), float(res), int(its)))
        if ok:
            state, t_done = new, t_next
            continue
        halvings += 1
        if halvings > MAX_HALVINGS:
            raise ContinuationError(f"continuation stalled near t = {t_next:.4g}", log)
        h /= 2

    B = state.matrix()
    for k in range(n):
        for l in range(k + 1, n):
            if not p.Gtilde.has_edge(k + 1, l + 1):
                B[k, l] = B[l, k] = 0.0
    pv = matches_pattern(B, p.Gtilde, p.newton_tol)
    min_edge = _min_edge(B, G)
    if not pv.in_class:
        raise ContinuationError("lifted matrix left the pattern class", log)

    wB = np.linalg.eigvalsh(B)
    err = float(np.max(np.abs(wB - w)))
    specB = eig_cluster(B)
    drift = 0.0
    if smp:
        if list(specB.multiplicities) != list(spec0.multiplicities):
            raise LiftIntegrityError(f"multiplicity list changed from {spec0.multiplicities} "
                                     f"to {specB.multiplicities}")
        drift = float(np.max(np.abs(np.asarray(specB.eigenvalues) - np.asarray(spec0.eigenvalues))))
        rep = verify_smp(B, p.Gtilde)
    else:
        rep = verify_ssp(B, p.Gtilde)
    if not rep.verdict:
        raise LiftIntegrityError(f"lifted matrix fails the {rep.property}")
    return LiftResult(B, err, pv, rep.margin, log, p.mode, tstar, min_edge, drift, specB.q)


def _min_edge(B, G: Graph):
    if not G.num_edges:
        return None
    return float(min(abs(B[i - 1, j - 1]) for i, j in G.edges))


def lift_ssp(p: LiftProblem) -> LiftResult:
    """Same spectrum as the seed, pattern of the supergraph, SSP preserved."""
    if p.mode != SPECTRUM:
        raise ValueError("lift_ssp needs mode preserve-spectrum")
    return _lift(p)


def lift_smp(p: LiftProblem) -> LiftResult:
    """Same ordered multiplicity list as the seed; eigenvalues may drift."""
    if p.mode != MULTIPLICITY:
        raise ValueError("lift_smp needs mode preserve-multiplicity-list")
    return _lift(p)


def lift(p: LiftProblem) -> LiftResult:
    return lift_ssp(p) if p.mode == SPECTRUM else lift_smp(p)


def augment_and_lift(cert, Ghat: Graph, extra, embedding: dict | None = None,
                     mode: str | None = None, **kw) -> LiftResult:
    """Pad a certificate with new distinct eigenvalues, then lift to a larger graph.

    The seed is A (placed on the embedded vertices) plus diag(extra) on the
    remaining vertices.  The result realizes Ghat with
    q = |Ghat| - |H| + q(A) distinct eigenvalues, confirmed by clustering.
    """
    A = cert.matrix.to_numpy() if hasattr(cert, "matrix") else np.asarray(cert, dtype=float)
    H = cert.graph if hasattr(cert, "graph") else pattern_of(A)
    n, m = H.n, Ghat.n
    extra = [float(x) for x in extra]
    if len(extra) != m - n:
        raise ValueError(f"need {m - n} extra eigenvalues, got {len(extra)}")
    if mode is None:
        mode = SPECTRUM if (not hasattr(cert, "claim") or cert.claim("SSP")) else MULTIPLICITY
    mode = _mode(mode)
    w = np.linalg.eigvalsh(A)
    scale = max(1.0, float(np.max(np.abs(np.concatenate([w, extra])))) if extra else 1.0)
    gap_tol = 1e-8 * scale
    for k, x in enumerate(extra):
        if np.min(np.abs(w - x)) <= gap_tol or any(abs(x - y) <= gap_tol for y in extra[:k]):
            raise SpectrumCollisionError(f"extra eigenvalue {x} collides with the seed spectrum "
                                         "or another extra value")
    if embedding is None:
        embedding = find_embedding(Ghat, H, "identical") or find_embedding(Ghat, H, "isomorphic")
        if embedding is None:
            raise PatternError("certificate graph does not embed in the target graph")
    embedding = {int(k): int(v) for k, v in embedding.items()}
    if not all(Ghat.has_edge(embedding[i], embedding[j]) for i, j in H.edges):
        raise PatternError("supplied embedding does not carry edges into edges")
    img = [embedding[v] for v in H.vertices]
    rest = [v for v in Ghat.vertices if v not in set(img)]
    S = np.zeros((m, m))
    for a in range(n):
        for b in range(n):
            S[img[a] - 1, img[b] - 1] = A[a, b]
    for v, x in zip(rest, extra):
        S[v - 1, v - 1] = x

    prop = "SSP" if mode == SPECTRUM else "SMP"
    if extra:
        rep = direct_sum_verdict(A, np.diag(extra), prop)
        if not rep.verdict:
            raise RejectedSeedError(f"padded seed fails the {prop}: {'; '.join(rep.notes)}")
    res = lift(LiftProblem(S, Ghat, mode, **kw))
    qA = cert.q if getattr(cert, "q", None) is not None else eig_cluster(A).q
    expected = m - n + int(qA)
    if res.q != expected:
        raise LiftIntegrityError(f"expected {expected} distinct eigenvalues, found {res.q}")
    return res
