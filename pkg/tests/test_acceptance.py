"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import itertools
import math
import random

import numpy as np
import pytest

from conftest import random_symmetric
from strongprops.constructs import (all_ones, corpus, direct_sum, flipped_cycle,
                                    flipped_cycle_eigenvalues, flipped_cycle_matrix)
from strongprops.lifting import LiftProblem, augment_and_lift, lift_ssp
from strongprops.matgraph import (Graph, complement, cycle, enumerate_graphs,
                                  recognize_high_q_family, star)
from strongprops.qbounds import (GraphParams, brute_force_params, find_forbidden_structure,
                                 q_lower, q_upper, replay, zero_forcing_number)
from strongprops.scalars import ExactMatrix, ExactScalar, block_diag, rank_exact
from strongprops.spectra import q_exact
from strongprops.verify import (check_witness, direct_sum_verdict, gershgorin_ssp, tangent_dims,
                                tangent_span_ranks, verify, verify_by_definition, verify_smp,
                                verify_ssp)

KNOWN_X = ExactMatrix([[0, 0, 1, 1, 0], [0, 0, 0, 2, -1], [1, 0, 0, 0, -1],
                       [1, 2, 0, 0, 0], [0, -1, -1, 0, 0]])


@pytest.fixture
def report(capsys):
    def emit(k: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\ncriterion {k}: {'PASS' if ok else 'FAIL'} - {detail}")
        return ok
    return emit


def proportional(X, Y):
    n = X.nrows
    pivot = next((i, j) for i in range(n) for j in range(n) if Y[i, j])
    c = X[pivot] / Y[pivot]
    return bool(c) and X == Y.scale(c)


def test_criterion_1_corpus_regression(report, certs):
    bad = []
    if not verify_ssp(certs["exstar"].matrix).verdict:
        bad.append("exstar SSP")
    A = certs["exdistinctnoSSP"].matrix
    rep = verify_ssp(A)
    if rep.verdict or not proportional(rep.witness, KNOWN_X) or not verify_smp(A).verdict:
        bad.append("exdistinctnoSSP")
    S = certs["SMPnotSAP"].matrix
    spec_ok = all(S.nrows - rank_exact(S.shift(ExactScalar(-lam))) == 4 for lam in (0, 4))
    if not (verify(S, "SAP").verdict and not verify_smp(S).verdict and spec_ok):
        bad.append("SMPnotSAP")
    B = certs["bowtie"].matrix
    if not (B.d == 6 and verify_ssp(B).verdict):
        bad.append("bowtie")
    qs = []
    for k, expected in zip(range(1, 5), (4, 3, 5, 4)):
        c = certs[f"prop:HHY3/A{k}"]
        q = q_exact(c.matrix)
        qs.append(q)
        if not (verify_ssp(c.matrix).verdict and q == c.n - 2 == expected):
            bad.append(f"A{k}")
    ok = not bad
    report(1, ok, f"exact corpus verdicts, q of the four |G| - 2 certificates {qs}" + (f"; failed {bad}" if bad else ""))
    assert ok


@pytest.mark.xfail(strict=True, reason="n = 3 gives K3, where every matrix has the SSP; "
                                       "'SSP iff n = 4' cannot hold at n = 3")
def test_criterion_2_flipped_cycle(report):
    bad = []
    for n in range(3, 13):
        A = flipped_cycle_matrix(n)
        if q_exact(A) != math.ceil(n / 2):
            bad.append(f"q({n})")
        if n <= 9 and not verify_smp(A).verdict:
            bad.append(f"SMP({n})")
        if verify_ssp(A).verdict != (n == 4):
            bad.append(f"SSP({n})={verify_ssp(A).verdict}")
        w = np.linalg.eigvalsh(A.to_numpy())
        if np.max(np.abs(w - np.array(flipped_cycle_eigenvalues(n)))) > 1e-10:
            bad.append(f"eig({n})")
    ok = not bad
    report(2, ok, "n = 3..12" + (f"; mismatches {bad}" if bad else ""))
    assert ok


def test_criterion_3_oracle_equivalence(report):
    rng = random.Random(20240603)
    mismatches = hierarchy = 0
    for _ in range(200):
        A = random_symmetric(rng, rng.randint(1, 6))
        v = {}
        for prop in ("SAP", "SSP", "SMP"):
            v[prop] = verify(A, prop).verdict
            mismatches += v[prop] != verify_by_definition(A, prop=prop).verdict
        hierarchy += (v["SSP"] and not v["SMP"]) or (v["SMP"] and not v["SAP"])
    ok = mismatches == 0 and hierarchy == 0
    report(3, ok, f"200 matrices, {mismatches} oracle mismatches, {hierarchy} hierarchy violations")
    assert ok


def _planted(rng, n):
    q = int(rng.integers(1, n + 1))
    cuts = sorted(rng.choice(np.arange(1, n), size=q - 1, replace=False)) if q > 1 else []
    mult = np.diff([0, *cuts, n])
    vals = np.cumsum(rng.uniform(1.0, 3.0, size=q)) - 4.0
    d = np.repeat(vals, mult)
    Q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    return (Q * d) @ Q.T


def test_criterion_4_tangent_dimensions(report):
    rng = np.random.default_rng(7)
    bad, worst = 0, math.inf
    for _ in range(50):
        A = _planted(rng, int(rng.integers(2, 8)))
        td = tangent_dims(A)
        ranks = tangent_span_ranks(A, td.q)
        want = {"rank": td.dim_rank_tangent, "spec": td.dim_spec_tangent, "mult": td.dim_mult_tangent}
        for key, (r, margin) in ranks.items():
            worst = min(worst, margin)
            bad += r != want[key] or margin < 1e3
    ok = bad == 0
    report(4, ok, f"50 matrices, {bad} dimension/margin failures, smallest margin {worst:.3g}")
    assert ok


def test_criterion_5_gershgorin(report, certs):
    rng = random.Random(5)
    mats = [c.matrix for c in certs.values()]
    for _ in range(100):
        n = rng.randint(2, 7)
        A = random_symmetric(rng, n, -1, 1, 0.5)
        mats.append(A + ExactMatrix.diag([rng.randint(-8, 8) * 4 for _ in range(n)]))
    proved = bad = 0
    for A in mats:
        if gershgorin_ssp(A).proved:
            proved += 1
            bad += not verify_ssp(A).verdict
    bow = certs["bowtie"].matrix
    bow_ok = gershgorin_ssp(bow).status == "Inconclusive" and verify_ssp(bow).verdict
    ok = bad == 0 and bow_ok
    report(5, ok, f"{len(mats)} matrices, {proved} proved, {bad} unsound; bowtie inconclusive-yet-SSP: {bow_ok}")
    assert ok


def _ssp_block(rng):
    while True:
        A = random_symmetric(rng, rng.randint(1, 3))
        if verify_ssp(A).verdict:
            return A


def test_criterion_6_direct_sums(report, certs):
    rng = random.Random(6)
    bad_disjoint = bad_shared = 0
    for _ in range(100):
        A1, A2 = _ssp_block(rng), _ssp_block(rng)
        c = 0
        while q_exact(block_diag(A1, A2.shift(ExactScalar(c)))) != q_exact(A1) + q_exact(A2):
            c += 7
        B = A2.shift(ExactScalar(c))
        bad_disjoint += not (direct_sum_verdict(A1, B).verdict and verify_ssp(block_diag(A1, B)).verdict)
        # exact shared eigenvalue: repeat the first block
        rep = direct_sum_verdict(A1, A1)
        bad_shared += rep.verdict or not check_witness(block_diag(A1, A1), rep.witness, "SSP")
        # float shared eigenvalue: shift the second block onto an eigenvalue of the first
        F1, F2 = A1.to_numpy(), B.to_numpy()
        lam, mu = np.linalg.eigvalsh(F1)[0], np.linalg.eigvalsh(F2)[-1]
        F2 = F2 + (lam - mu) * np.eye(len(F2))
        rep = direct_sum_verdict(F1, F2)
        S = np.block([[F1, np.zeros((len(F1), len(F2)))], [np.zeros((len(F2), len(F1))), F2]])
        X = np.asarray(rep.witness, dtype=float)
        mask = (np.abs(S) > 1e-12) | np.eye(len(S), dtype=bool)
        valid = (np.abs(S @ X - X @ S).max() < 1e-9 * max(1.0, np.abs(X).max())
                 and not X[mask].any() and np.abs(X).max() > 0)
        bad_shared += rep.verdict or not valid
    cs = [c for c in certs.values() if c.claim("SSP")]
    bad_q = 0
    for c1, c2 in itertools.combinations(cs, 2):
        s = direct_sum(c1, c2)
        if s.q == c1.q + c2.q:
            bad_q += not s.claim("SSP")
        else:
            bad_q += s.q >= c1.q + c2.q
    ok = bad_disjoint == bad_shared == bad_q == 0
    report(6, ok, f"100 pairs, {bad_disjoint} disjoint failures, {bad_shared} shared failures, "
                  f"{bad_q} certificate q-sum failures")
    assert ok


def test_criterion_7_lifting(report, certs):
    failures = []
    cert = certs["exstar"]
    leaves = [v for v in cert.graph.vertices if cert.graph.degree(v) == 1]
    target = np.array([-math.sqrt(3), 0, 0, math.sqrt(3)])
    for r in (1, 2, 3):
        extra = list(itertools.combinations(leaves, 2))[:r]
        Gt = Graph.from_edges(4, list(cert.graph.edges) + extra)
        res = lift_ssp(LiftProblem(cert.matrix, Gt))
        err = np.max(np.abs(np.linalg.eigvalsh(res.B) - target))
        if not (res.pattern_report.in_class and err <= 1e-8 and res.ssp_margin >= 10):
            failures.append(f"star+{r}")
    D = np.diag([1.0, 2.0, 3.0, 4.0, 5.0])
    count = 0
    for Gt in enumerate_graphs(5, up_to_isomorphism=True):
        if not Gt.is_connected():
            continue
        count += 1
        res = lift_ssp(LiftProblem(D, Gt))
        if not (res.pattern_report.in_class and res.spectrum_error <= 1e-8):
            failures.append(f"diag->{Gt.sorted_edges()}")
    tri = [(1, 2), (1, 3), (2, 3)]
    j3_targets = [tri + [(3, 4), (4, 5)], tri + [(1, 4), (2, 4), (3, 4), (4, 5), (1, 5), (2, 5), (3, 5)],
                  tri + [(3, 4), (4, 5), (5, 1)]]
    for edges in j3_targets:
        res = augment_and_lift(all_ones(3), Graph.from_edges(5, edges), [5.0, 7.0])
        if res.q != 5 - 3 + 2:
            failures.append(f"J3->{edges}")
    se = list(cert.graph.edges)
    star_targets = [se + [(1, 5), (5, 6)], se + [(2, 5), (3, 6), (5, 6)], se + [(1, 5), (1, 6), (5, 6), (2, 3)]]
    for edges in star_targets:
        res = augment_and_lift(cert, Graph.from_edges(6, edges), [5.0, 7.0])
        if res.q != 6 - 4 + 3:
            failures.append(f"exstar->{edges}")
    ok = not failures
    report(7, ok, f"3 star supergraphs, {count} connected 5-vertex graphs, 6 augmentations"
                  + (f"; failed {failures}" if failures else ""))
    assert ok


def test_criterion_8_characterization(report):
    total = mismatch = path_errors = cut_vertex_only = 0
    for n in range(1, 8):
        for G in enumerate_graphs(n, up_to_isomorphism=True):
            total += 1
            fam = recognize_high_q_family(G)
            found = find_forbidden_structure(G)
            if (fam is None) == (found is None):
                mismatch += 1
            if found is not None:
                if not replay(G, found[1]) or found[1].value > n - 2:
                    mismatch += 1
                cut_vertex_only += found[1].rule == "cut_vertex_nullity"
            path_errors += (fam is not None and fam.value == "Path") != G.is_path()
    ok = mismatch == 0 and path_errors == 0
    report(8, ok, f"{total} graphs n = 1..7, {mismatch} mismatches, {path_errors} path errors, "
                  f"{cut_vertex_only} settled by the cut-vertex nullity rule")
    assert ok


def test_criterion_9_bound_engine(report, certs):
    bad = []
    p = brute_force_params(star(3))
    if (p.M, p.Mplus) != (2, 1) or q_lower(star(3), p).value != 3:
        bad.append("K13")
    for n in range(3, 13):
        extra = list(certs.values()) + [flipped_cycle(n)]
        M = zero_forcing_number(cycle(n))
        lo = q_lower(cycle(n), GraphParams(M=M)).value
        up = q_upper(cycle(n), corpus=extra).value
        if not lo == up == math.ceil(n / 2):
            bad.append(f"C{n}: {lo}..{up}")
    checked = 0
    for n in range(4, 8):
        for G in enumerate_graphs(n, up_to_isomorphism=True):
            if checked == 20:
                break
            if G.num_edges and complement(G).is_bipartite():
                checked += 1
                if q_upper(G).value > 4:
                    bad.append(f"chromatic {G.sorted_edges()}")
    ok = not bad and checked == 20
    report(9, ok, f"K13 lower 3, cycles n = 3..12 tight, {checked} co-bipartite graphs"
                  + (f"; failed {bad}" if bad else ""))
    assert ok
