"""Certificates: exact matrices with machine-checked claims, generators, and the corpus."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Any, Sequence

import numpy as np

from .errors import CorpusIntegrityError, DistinctnessError, DomainError
from .matgraph import Graph, disjoint_union, pattern_of
from .scalars import ExactMatrix, ExactScalar, block_diag, rank_exact, scalar
from .spectra import eig_cluster, q_exact
from .verify import check_witness, verify

CERT_SCHEMA = "strongprops.certificate/1"
CORPUS_SCHEMA = "strongprops.corpus/1"
CORPUS_ENV = "STRONGPROPS_CORPUS"
PROPERTY_CLAIMS = ("SAP", "SSP", "SMP")


@dataclass(frozen=True)
class Claim:
    kind: str  # SAP | SSP | SMP | q | spectrum | spectrum_float | multiplicity_list
    value: Any
    shift: str | None = None  # property claims may refer to A + shift*I

    def to_json(self) -> dict:
        out = {"claim": self.kind, "value": self.value}
        if self.shift is not None:
            out["shift"] = self.shift
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Claim":
        value = obj["value"]
        if isinstance(value, list):
            value = tuple(value)
        return cls(obj["claim"], value, obj.get("shift"))


@dataclass(frozen=True)
class Certificate:
    id: str
    graph: Graph
    matrix: ExactMatrix
    claims: tuple
    provenance: str = ""
    witnesses: tuple = ()  # (property, ExactMatrix) pairs backing false claims

    def claim(self, kind: str, shift: str | None = None):
        for c in self.claims:
            if c.kind == kind and c.shift == shift:
                return c.value
        return None

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def q(self) -> int | None:
        return self.claim("q")

    def has_strong_property(self) -> bool:
        return bool(self.claim("SSP")) or bool(self.claim("SMP"))

    def to_json(self) -> dict:
        out = {
            "schema": CERT_SCHEMA,
            "id": self.id,
            "n": self.graph.n,
            "edges": [list(e) for e in self.graph.sorted_edges()],
            "entries": self.matrix.to_strings(),
            "d": self.matrix.d,
            "claims": [c.to_json() for c in self.claims],
            "provenance": self.provenance,
        }
        if self.witnesses:
            out["witnesses"] = [{"property": p, "entries": X.to_strings()} for p, X in self.witnesses]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Certificate":
        G = Graph.from_edges(int(obj["n"]), [tuple(e) for e in obj["edges"]])
        M = ExactMatrix.from_strings(obj["entries"])
        d = int(obj.get("d", 0))
        if d and M.d and M.d != d:
            raise CorpusIntegrityError(obj.get("id", "?"), "d", f"entries use sqrt({M.d}), header says {d}")
        claims = tuple(Claim.from_json(c) for c in obj.get("claims", []))
        wit = tuple((w["property"], ExactMatrix.from_strings(w["entries"]))
                    for w in obj.get("witnesses", []))
        cert = cls(obj["id"], G, M, claims, obj.get("provenance", ""), wit)
        if pattern_of(M) != G:
            raise CorpusIntegrityError(cert.id, "pattern", "matrix pattern differs from the stated graph")
        return cert


# ---------------------------------------------------------------------------
# claim checking


def _check_spectrum(A: ExactMatrix, values: Sequence[str]) -> str | None:
    vals = [ExactScalar.parse(v) for v in values]
    if len(vals) != A.nrows:
        return f"{len(vals)} eigenvalues claimed for order {A.nrows}"
    counts: dict[ExactScalar, int] = {}
    for v in vals:
        counts[v] = counts.get(v, 0) + 1
    for lam, m in counts.items():
        nullity = A.nrows - rank_exact(A.shift(-lam))
        if nullity != m:
            return f"eigenvalue {lam} has multiplicity {nullity}, claimed {m}"
    return None


def _sorted_multiplicities(values: Sequence[str]) -> tuple:
    # values may live in different quadratic fields, so order by float value
    vals = sorted((ExactScalar.parse(v) for v in values), key=float)
    out: list[int] = []
    prev = None
    for v in vals:
        if prev is not None and v == prev:
            out[-1] += 1
        else:
            out.append(1)
        prev = v
    return tuple(out)


def check_claim(cert: Certificate, claim: Claim) -> str | None:
    """None when the claim verifies, else a description of the failure."""
    A = cert.matrix
    kind = claim.kind
    if kind in PROPERTY_CLAIMS:
        M = A if claim.shift is None else A.shift(scalar(claim.shift))
        rep = verify(M, kind, cert.graph)
        if rep.verdict != bool(claim.value):
            return f"verifier says {rep.verdict}"
        if not claim.value:
            for prop, X in cert.witnesses:
                if prop == kind and claim.shift is None and not check_witness(A, X, kind, cert.graph):
                    return "stored witness does not satisfy the defining system"
        return None
    if kind == "q":
        q = q_exact(A)
        return None if q == int(claim.value) else f"q_exact = {q}"
    if kind == "spectrum":
        return _check_spectrum(A, claim.value)
    if kind == "spectrum_float":
        w = np.linalg.eigvalsh(A.to_numpy())
        target = np.sort(np.asarray(claim.value, dtype=float))
        err = float(np.max(np.abs(w - target))) if len(target) == len(w) else math.inf
        return None if err <= 1e-10 else f"float spectrum off by {err:.3g}"
    if kind == "multiplicity_list":
        spec = cert.claim("spectrum")
        if spec is not None:
            got = _sorted_multiplicities(spec)
        else:
            S = eig_cluster(A.to_numpy())
            if S.cluster_gap <= 1e2:
                return f"clusters too close to certify (gap {S.cluster_gap:.3g})"
            got = tuple(S.multiplicities)
        return None if got == tuple(claim.value) else f"multiplicity list {got}"
    return f"unknown claim kind {kind!r}"


def verify_certificate(cert: Certificate) -> list[tuple[Claim, str]]:
    failures = []
    if pattern_of(cert.matrix) != cert.graph:
        failures.append((Claim("pattern", True), "pattern mismatch"))
    for c in cert.claims:
        msg = check_claim(cert, c)
        if msg is not None:
            failures.append((c, msg))
    return failures


def assert_certificate(cert: Certificate) -> Certificate:
    failures = verify_certificate(cert)
    if failures:
        c, msg = failures[0]
        raise CorpusIntegrityError(cert.id, c.kind, msg)
    return cert


# ---------------------------------------------------------------------------
# generators


def flipped_cycle_matrix(n: int) -> ExactMatrix:
    """C + C^T where C is the cyclic shift with the wrap-around entry negated."""
    if n < 3:
        raise DomainError("flipped cycle needs n >= 3")
    rows = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i][i + 1] = rows[i + 1][i] = 1
    rows[n - 1][0] = rows[0][n - 1] = -1
    return ExactMatrix(rows)


def flipped_cycle_eigenvalues(n: int) -> list[float]:
    return sorted(2 * math.cos(2 * math.pi * (2 * j - 1) / (2 * n)) for j in range(1, n + 1))


def flipped_cycle(n: int) -> Certificate:
    A = flipped_cycle_matrix(n)
    G = pattern_of(A)
    q = -(-n // 2)
    mult = [2] * (n // 2)
    if n % 2:
        mult = [1] + mult  # the singleton -2 is the smallest eigenvalue
    claims = (
        Claim("q", q),
        Claim("SMP", True),
        # n = 3 is K_3, where every matrix trivially has the SSP
        Claim("SSP", n <= 4),
        Claim("spectrum_float", tuple(flipped_cycle_eigenvalues(n))),
        Claim("multiplicity_list", tuple(mult)),
    )
    wit = ()
    if n >= 5:
        C = ExactMatrix([[1 if j == i + 1 else (-1 if (i, j) == (n - 1, 0) else 0)
                          for j in range(n)] for i in range(n)])
        C2 = C @ C
        wit = (("SSP", C2 + C2.T),)
    return Certificate(f"flipped_cycle/{n}", G, A, claims, f"symmetric flipped cycle of order {n}", wit)


def diag_distinct(values: Sequence) -> Certificate:
    vals = [scalar(v) for v in values]
    if len(set(vals)) != len(vals):
        raise DistinctnessError("diagonal entries repeat; a repeated diagonal value blocks the SSP "
                                "(witness: the symmetric unit matrix on the repeated pair)")
    A = ExactMatrix.diag(vals)
    claims = (Claim("SSP", True), Claim("SMP", True), Claim("q", len(vals)),
              Claim("spectrum", tuple(str(v) for v in vals)))
    return Certificate("diag/" + ",".join(str(v) for v in vals), pattern_of(A), A, claims,
                       "diagonal matrix with distinct entries")


def all_ones(n: int) -> Certificate:
    A = ExactMatrix([[1] * n for _ in range(n)])
    claims = (Claim("SSP", True), Claim("SMP", True), Claim("q", 2 if n > 1 else 1),
              Claim("spectrum", tuple(["0"] * (n - 1) + [str(n)])))
    return Certificate(f"J{n}", pattern_of(A), A, claims, f"all-ones matrix J_{n}")


def direct_sum(c1: Certificate, c2: Certificate) -> Certificate:
    """Block-diagonal certificate; SSP/SMP claims survive only if the sum re-verifies."""
    A = block_diag(c1.matrix, c2.matrix)
    G = disjoint_union(c1.graph, c2.graph)
    q = q_exact(A)
    q1 = c1.q if c1.q is not None else q_exact(c1.matrix)
    q2 = c2.q if c2.q is not None else q_exact(c2.matrix)
    disjoint = q == q1 + q2
    claims = [Claim("q", q)]
    for prop in ("SSP", "SMP"):
        if disjoint and c1.claim(prop) and c2.claim(prop):
            if verify(A, prop, G).verdict:
                claims.append(Claim(prop, True))
    s1, s2 = c1.claim("spectrum"), c2.claim("spectrum")
    if s1 is not None and s2 is not None:
        claims.append(Claim("spectrum", tuple(s1) + tuple(s2)))
    prov = f"direct sum of {c1.id} and {c2.id}" + ("" if disjoint else " (shared eigenvalue)")
    return Certificate(f"{c1.id}+{c2.id}", G, A, tuple(claims), prov)


def shifted(cert: Certificate, c) -> Certificate:
    """Certificate for A + c*I; strong properties and q are shift invariant."""
    c = scalar(c)
    A = cert.matrix.shift(c)
    claims = []
    for cl in cert.claims:
        if cl.kind in PROPERTY_CLAIMS and cl.shift is None:
            claims.append(cl)
        elif cl.kind in ("q", "multiplicity_list"):
            claims.append(cl)
        elif cl.kind == "spectrum":
            claims.append(Claim("spectrum", tuple(str(ExactScalar.parse(v) + c) for v in cl.value)))
    return Certificate(f"{cert.id}+{c}I", cert.graph, A, tuple(claims), f"{cert.id} shifted by {c}")


# ---------------------------------------------------------------------------
# corpus


def corpus_path() -> str:
    env = os.environ.get(CORPUS_ENV)
    if env:
        return env
    return str(resources.files("strongprops") / "data" / "corpus.json")


def load_certificates(path: str) -> list[Certificate]:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict) and "certificates" in data:
        items = data["certificates"]
    elif isinstance(data, list):
        items = data
    else:
        items = [data]
    return [Certificate.from_json(obj) for obj in items]


@lru_cache(maxsize=8)
def _load_checked(path: str, mtime: float) -> tuple:
    certs = load_certificates(path)
    for c in certs:
        assert_certificate(c)
    return tuple(certs)


def corpus(path: str | None = None) -> list[Certificate]:
    """Load the certificate corpus, re-verifying every claim exactly."""
    path = path or corpus_path()
    return list(_load_checked(path, os.path.getmtime(path)))


def get_certificate(cert_id: str, path: str | None = None) -> Certificate:
    for c in corpus(path):
        if c.id == cert_id:
            return c
    raise KeyError(f"no certificate {cert_id!r} in corpus")


def dump_corpus(certs: Sequence[Certificate], version: int = 1) -> str:
    payload = {"schema": CORPUS_SCHEMA, "version": version,
               "certificates": [c.to_json() for c in certs]}
    return json.dumps(payload, indent=1, sort_keys=False) + "\n"
