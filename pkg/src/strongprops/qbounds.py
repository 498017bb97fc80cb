"""Bounds on the minimum number of distinct eigenvalues q(G), with replayable evidence.

Every bound carries a ``Justification``: a rule id, a one-line statement of
the result used, the numbers plugged in and (where relevant) a witness such as
an embedding, a cycle or a clique partition.  ``replay`` re-derives the value
from those pieces alone.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator, Sequence

import numpy as np

from .matgraph import (Graph, HighQFamily, campstool, complete, h_tree, iter_embeddings,
                       long_y_tree, recognize_high_q_family, star, three_sun)
from .scalars import ExactMatrix, ExactScalar, rank_exact

EXACT_COVER_MAX_N = 10
BRUTE_FORCE_MAX_N = 8
DEFAULT_CYCLE_CAP = 12

RULES = {
    # lower bounds
    "edges": "q(G) = 1 exactly when G has no edges",
    "nullity": "q(G) >= ceil(n / M(G))",
    "psd_nullity": "q(G) >= 2 + ceil((n - 2 M+(G)) / M(G)), and q(G) >= 3 when M+(G) < n/2",
    "high_q_family": "q(G) = n for paths and q(G) >= n - 1 for the four high-q families",
    # upper bounds
    "order": "q(G) <= n, realized by a matrix with distinct eigenvalues and the SSP",
    "edgeless": "a scalar matrix realizes an edgeless graph with one eigenvalue",
    "certificate": "q(G) <= |G| - |H| + q_S(H) (or q_M(H)) for a subgraph H with a certificate",
    "cycle": "a k-cycle subgraph gives q(G) <= |G| - floor(k/2)",
    "disjoint_pair": "two vertex-disjoint K3 / K13 pieces give q(G) <= |G| - 2",
    "clique_cover": "q(G) <= 2 * (clique cover number of G)",
    "components": "q(G) <= max |G_i| over the connected components",
    "isolated_vertices": "isolated vertices may reuse an eigenvalue of the rest, so q(G) <= q(G - isolated)",
    "cut_vertex_nullity": "a cut vertex whose removal leaves nullity >= 4 forces M(G) >= 3, so q(G) <= |G| - 2",
    "max_nullity": "a matrix of nullity k in S(G) has rank n - k, so q(G) <= n - k + 1",
}


@dataclass
class Justification:
    rule: str
    value: int
    numbers: dict = field(default_factory=dict)
    witness: Any = None

    @property
    def citation(self) -> str:
        return RULES[self.rule]

    def to_json(self) -> dict:
        out = {"rule": self.rule, "value": self.value, "citation": self.citation,
               "numbers": _jsonable(self.numbers)}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        return out


def _jsonable(x):
    if isinstance(x, Justification):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (Fraction, ExactScalar)):
        return str(x)
    if isinstance(x, np.integer):
        return int(x)
    return x


@dataclass
class Bound:
    value: int
    rules: list  # of Justification; the first one attains ``value``

    def to_json(self) -> dict:
        return {"value": self.value, "rules": [r.to_json() for r in self.rules]}


@dataclass
class BoundReport:
    lower: Bound
    upper: Bound

    def to_json(self) -> dict:
        return {"schema": "strongprops.bounds/1",
                "lower": self.lower.to_json(), "upper": self.upper.to_json()}


@dataclass
class GraphParams:
    """Graph parameters feeding the lower bounds.

    ``M`` and ``Mplus`` must be upper bounds on the true maximum nullities
    (exact values when known); ``M_lower`` is a nullity actually attained by an
    explicit matrix, kept with that matrix so it can be replayed.
    """
    M: int | None = None
    Mplus: int | None = None
    clique_cover_number: int | None = None
    provenance: dict = field(default_factory=dict)
    M_lower: int | None = None
    M_lower_matrix: ExactMatrix | None = None

    def validate(self, n: int) -> None:
        if self.M is not None and not 1 <= self.M <= max(n, 1):
            raise ValueError(f"M = {self.M} outside 1..{n}")
        if self.Mplus is not None:
            if self.Mplus < 1:
                raise ValueError("Mplus must be at least 1")
            if self.M is not None and self.Mplus > self.M:
                raise ValueError("Mplus cannot exceed M")

    def to_json(self) -> dict:
        return {"M": self.M, "Mplus": self.Mplus, "clique_cover_number": self.clique_cover_number,
                "M_lower": self.M_lower, "provenance": dict(self.provenance)}


def _pick(rules: list, best) -> Bound:
    rules = sorted(rules, key=lambda j: j.value, reverse=(best is max))
    return Bound(rules[0].value, rules)


# ---------------------------------------------------------------------------
# lower bounds


def q_lower(G: Graph, params: GraphParams | None = None) -> Bound:
    n = G.n
    params = params or GraphParams()
    params.validate(n)
    rules = [Justification("edges", 2 if G.num_edges else 1, {"edges": G.num_edges})]
    M, Mp = params.M, params.Mplus
    if M:
        rules.append(Justification("nullity", -(-n // M), {"n": n, "M": M}))
        if Mp:
            v = 2 + math.ceil((n - 2 * Mp) / M)
            if 2 * Mp < n:
                v = max(v, 3)
            rules.append(Justification("psd_nullity", v, {"n": n, "M": M, "Mplus": Mp}))
    fam = recognize_high_q_family(G)
    if fam is not None:
        rules.append(Justification("high_q_family", n if fam is HighQFamily.PATH else n - 1,
                                   {"n": n, "family": fam.value}))
    return _pick(rules, max)


# ---------------------------------------------------------------------------
# subgraph searches used by the upper bounds


def cycles(G: Graph, cap: int = DEFAULT_CYCLE_CAP, min_len: int = 3) -> Iterator[list[int]]:
    """Each cycle of length min_len..cap once, as a vertex list starting at its smallest vertex."""
    for s in G.vertices:
        stack = [(s, [s])]
        while stack:
            v, walk = stack.pop()
            for w in sorted(G.adj[v], reverse=True):
                if w == s and len(walk) >= min_len and walk[1] < walk[-1]:
                    yield list(walk)
                elif w > s and w not in walk and len(walk) < cap:
                    stack.append((w, walk + [w]))


def longest_cycle(G: Graph, cap: int = DEFAULT_CYCLE_CAP) -> list[int] | None:
    """Exhaustive backtracking; exact whenever the answer is below ``cap``."""
    best = None
    limit = min(cap, G.n)
    for c in cycles(G, cap=limit):
        if best is None or len(c) > len(best):
            best = c
            if len(best) == limit:
                break
    return best


def _pieces() -> list[tuple[str, Graph]]:
    return [("K3", complete(3)), ("K13", star(3))]


def disjoint_pair(G: Graph):
    """Two vertex-disjoint pieces, each a K3 or a K13 (not necessarily induced)."""
    for (n1, H1), (n2, H2) in itertools.combinations_with_replacement(_pieces(), 2):
        for emb in iter_embeddings(G, H1):
            used = frozenset(emb.values())
            emb2 = next(iter_embeddings(G, H2, forbidden=used), None)
            if emb2 is not None:
                return ((n1, _image(emb)), (n2, _image(emb2)))
    return None


def _image(emb: dict) -> list[int]:
    return [emb[k] for k in sorted(emb)]


def clique_cover(G: Graph) -> list[list[int]]:
    """A minimum partition of V(G) into cliques (exact colouring of the complement)."""
    n = G.n
    if n > EXACT_COVER_MAX_N:
        raise ValueError(f"exact clique cover limited to n <= {EXACT_COVER_MAX_N}")
    if n == 0:
        return []
    order = sorted(G.vertices, key=lambda v: -G.degree(v))
    best: list = [None]

    def place(k, parts):
        if best[0] is not None and len(parts) >= len(best[0]):
            return
        if k == n:
            best[0] = [sorted(p) for p in parts]
            return
        v = order[k]
        for p in parts:
            if all(G.has_edge(v, u) for u in p):
                p.append(v)
                place(k + 1, parts)
                p.pop()
        parts.append([v])
        place(k + 1, parts)
        parts.pop()

    place(0, [])
    return sorted(best[0])


def nullity_weight(G: Graph, verts: Sequence[int]) -> int:
    """1 for a path component, 2 for any other connected graph (a lower bound on its M)."""
    H = G.induced(verts)[0]
    return 1 if H.is_path() else 2


def cut_vertex_nullity(G: Graph):
    """A vertex w with sum over components of G - w of nullity weights at least 4."""
    for w in G.vertices:
        H, order = G.remove_vertex(w)
        comps = [[order[v - 1] for v in c] for c in H.components()]
        weights = [nullity_weight(G, c) for c in comps]
        if sum(weights) >= 4:
            return {"vertex": w, "components": comps, "weights": weights}
    return None


FORBIDDEN_SUBGRAPHS = {
    "prop:HHY3/A1": ("H tree", h_tree),
    "prop:HHY3/A2": ("campstool", campstool),
    "prop:HHY3/A3": ("long Y tree", long_y_tree),
    "prop:HHY3/A4": ("3-sun", three_sun),
}


# ---------------------------------------------------------------------------
# upper bounds


def _default_corpus():
    from .constructs import corpus
    return corpus()


def _certificate_rules(G: Graph, certs) -> list[Justification]:
    out = []
    for c in certs:
        if not (c.claim("SSP") or c.claim("SMP")) or c.q is None:
            continue
        if c.graph.n > G.n:
            continue
        emb = next(iter_embeddings(G, c.graph), None)
        if emb is None:
            continue
        out.append(Justification(
            "certificate", G.n - c.graph.n + int(c.q),
            {"m": G.n, "|H|": c.graph.n, "q(H)": int(c.q), "certificate": c.id,
             "H_edges": [list(e) for e in c.graph.sorted_edges()]},
            {"embedding": {str(k): v for k, v in sorted(emb.items())}}))
    return out


def q_upper(G: Graph, corpus=None, params: GraphParams | None = None,
            cycle_cap: int = DEFAULT_CYCLE_CAP) -> Bound:
    n = G.n
    certs = _default_corpus() if corpus is None else corpus
    rules = [Justification("order", n, {"n": n})]
    if G.num_edges == 0:
        rules.append(Justification("edgeless", 1 if n else 0, {"n": n}))
        return _pick(rules, min)
    comps = G.components()
    if len(comps) > 1:
        rules.append(Justification("components", max(len(c) for c in comps),
                                   {"sizes": sorted(len(c) for c in comps)}))
        isolated = [c[0] for c in comps if len(c) == 1]
        if isolated:
            rest = [v for v in G.vertices if v not in isolated]
            H = G.induced(rest)[0]
            inner = q_upper(H, certs, None, cycle_cap)
            rules.append(Justification("isolated_vertices", inner.value,
                                       {"kept": rest}, inner.rules[0]))
    rules.extend(_certificate_rules(G, certs))
    cyc = longest_cycle(G, cycle_cap)
    if cyc is not None:
        rules.append(Justification("cycle", n - len(cyc) // 2, {"n": n, "k": len(cyc)}, cyc))
    pair = disjoint_pair(G)
    if pair is not None:
        rules.append(Justification("disjoint_pair", n - 2, {"n": n},
                                   [{"piece": p, "vertices": vs} for p, vs in pair]))
    cover = None
    if params is not None and params.clique_cover_number is not None and n > EXACT_COVER_MAX_N:
        rules.append(Justification("clique_cover", 2 * params.clique_cover_number,
                                   {"clique_cover_number": params.clique_cover_number}))
    if n <= EXACT_COVER_MAX_N:
        cover = clique_cover(G)
        rules.append(Justification("clique_cover", 2 * len(cover),
                                   {"clique_cover_number": len(cover)}, cover))
    cut = cut_vertex_nullity(G)
    if cut is not None:
        rules.append(Justification("cut_vertex_nullity", n - 2, {"n": n}, cut))
    if params is not None and params.M_lower and params.M_lower_matrix is not None:
        rules.append(Justification("max_nullity", n - params.M_lower + 1,
                                   {"n": n, "nullity": params.M_lower},
                                   params.M_lower_matrix.to_strings()))
    return _pick(rules, min)


def bounds(G: Graph, params: GraphParams | None = None, corpus=None) -> BoundReport:
    return BoundReport(q_lower(G, params), q_upper(G, corpus, params))


# ---------------------------------------------------------------------------
# replay


def _is_embedding(G: Graph, H: Graph, emb: dict) -> bool:
    emb = {int(k): int(v) for k, v in emb.items()}
    if sorted(emb) != list(H.vertices) or len(set(emb.values())) != len(emb):
        return False
    return all(G.has_edge(emb[i], emb[j]) for i, j in H.edges)


def _is_cycle(G: Graph, vs: Sequence[int]) -> bool:
    return (len(vs) >= 3 and len(set(vs)) == len(vs)
            and all(G.has_edge(vs[k], vs[(k + 1) % len(vs)]) for k in range(len(vs))))


def replay(G: Graph, j: Justification, corpus=None, params: GraphParams | None = None) -> bool:
    """Re-derive a justification's value from its numbers and witness alone."""
    n = G.n
    num = j.numbers
    r = j.rule
    if r == "edges":
        return j.value == (2 if G.num_edges else 1)
    if r == "nullity":
        return j.value == -(-n // num["M"])
    if r == "psd_nullity":
        v = 2 + math.ceil((n - 2 * num["Mplus"]) / num["M"])
        return j.value == (max(v, 3) if 2 * num["Mplus"] < n else v)
    if r == "high_q_family":
        fam = recognize_high_q_family(G)
        return fam is not None and fam.value == num["family"] and \
            j.value == (n if fam is HighQFamily.PATH else n - 1)
    if r == "order":
        return j.value == n
    if r == "edgeless":
        return G.num_edges == 0 and j.value == (1 if n else 0)
    if r == "components":
        return sorted(len(c) for c in G.components()) == num["sizes"] and j.value == max(num["sizes"])
    if r == "isolated_vertices":
        kept = num["kept"]
        if any(G.degree(v) for v in G.vertices if v not in kept):
            return False
        H = G.induced(kept)[0]
        return j.value == j.witness.value and replay(H, j.witness, corpus, None)
    if r == "certificate":
        certs = _default_corpus() if corpus is None else corpus
        cert = next((c for c in certs if c.id == num["certificate"]), None)
        if cert is None or not (cert.claim("SSP") or cert.claim("SMP")) or cert.q != num["q(H)"]:
            return False
        return (_is_embedding(G, cert.graph, j.witness["embedding"])
                and j.value == n - cert.graph.n + cert.q)
    if r == "cycle":
        return _is_cycle(G, j.witness) and j.value == n - len(j.witness) // 2
    if r == "disjoint_pair":
        seen: set[int] = set()
        for piece in j.witness:
            vs = piece["vertices"]
            H = complete(3) if piece["piece"] == "K3" else star(3)
            if not _is_embedding(G, H, {k + 1: v for k, v in enumerate(vs)}) or seen & set(vs):
                return False
            seen |= set(vs)
        return len(j.witness) == 2 and j.value == n - 2
    if r == "clique_cover":
        parts = j.witness
        if parts is None:  # user-supplied number, nothing to replay beyond arithmetic
            return j.value == 2 * num["clique_cover_number"]
        flat = sorted(v for p in parts for v in p)
        ok = flat == list(G.vertices) and all(
            G.has_edge(u, v) for p in parts for u, v in itertools.combinations(p, 2))
        return ok and j.value == 2 * len(parts)
    if r == "cut_vertex_nullity":
        w = j.witness["vertex"]
        H, order = G.remove_vertex(w)
        comps = sorted(sorted(order[v - 1] for v in c) for c in H.components())
        if comps != sorted(sorted(c) for c in j.witness["components"]):
            return False
        return sum(nullity_weight(G, c) for c in comps) >= 4 and j.value == n - 2
    if r == "max_nullity":
        from .matgraph import pattern_of
        B = ExactMatrix.from_strings(j.witness)
        k = n - rank_exact(B)
        return pattern_of(B) == G and k == num["nullity"] and j.value == n - k + 1
    return False


# ---------------------------------------------------------------------------
# classification of graphs with q(G) >= n - 1


@dataclass
class Classification:
    verdict: str  # q_equals_n | q_at_least_n_minus_1 | q_at_most_n_minus_2
    family: HighQFamily | None = None
    structure: str | None = None
    evidence: Justification | None = None

    def to_json(self) -> dict:
        return {"schema": "strongprops.classification/1", "verdict": self.verdict,
                "family": None if self.family is None else self.family.value,
                "structure": self.structure,
                "evidence": None if self.evidence is None else self.evidence.to_json()}


def _non_path_evidence(H: Graph, certs) -> Justification | None:
    """An upper bound of |H| - 1 for a connected graph that is not a path."""
    cyc = next(cycles(H, cap=H.n), None)
    if cyc is not None:
        return Justification("cycle", H.n - len(cyc) // 2, {"n": H.n, "k": len(cyc)}, cyc)
    return next((r for r in _certificate_rules(H, [c for c in certs if c.id == "exstar"])), None)


def find_forbidden_structure(G: Graph, corpus=None) -> tuple[str, Justification] | None:
    """Search for a configuration that forces q(G) <= |G| - 2.

    Independent of the family recognizer: only component counts, subgraph
    searches and the cut-vertex nullity count are used.  The returned
    justification is the matching upper-bound rule.
    """
    n = G.n
    certs = _default_corpus() if corpus is None else corpus
    comps = G.components()
    if len(comps) >= 2:
        sizes = sorted(len(c) for c in comps)
        if len(comps) >= 3 or sizes[-2] >= 2:
            return "disconnected", Justification("components", sizes[-1], {"sizes": sizes})
        small, big = sorted(comps, key=len)
        H = G.induced(big)[0]
        inner = _non_path_evidence(H, certs)
        if inner is not None:
            return "isolated vertex beside a non-path", Justification(
                "isolated_vertices", inner.value, {"kept": big}, inner)
        return None
    cyc = next((c for c in cycles(G, cap=n, min_len=4)), None)
    if cyc is not None:
        return f"C{len(cyc)}", Justification("cycle", n - len(cyc) // 2, {"n": n, "k": len(cyc)}, cyc)
    pair = disjoint_pair(G)
    if pair is not None:
        return "disjoint K3/K13 pair", Justification(
            "disjoint_pair", n - 2, {"n": n}, [{"piece": p, "vertices": vs} for p, vs in pair])
    by_id = {c.id: c for c in certs}
    for cid, (name, _) in FORBIDDEN_SUBGRAPHS.items():
        cert = by_id.get(cid)
        if cert is None:
            continue
        found = _certificate_rules(G, [cert])
        if found:
            return name, found[0]
    cut = cut_vertex_nullity(G)
    if cut is not None:
        return "cut vertex with nullity >= 4", Justification("cut_vertex_nullity", n - 2, {"n": n}, cut)
    return None


def classify_high_q(G: Graph, corpus=None) -> Classification:
    fam = recognize_high_q_family(G)
    if fam is HighQFamily.PATH:
        return Classification("q_equals_n", fam, None,
                              Justification("high_q_family", G.n, {"n": G.n, "family": fam.value}))
    if fam is not None:
        return Classification("q_at_least_n_minus_1", fam, None,
                              Justification("high_q_family", G.n - 1, {"n": G.n, "family": fam.value}))
    found = find_forbidden_structure(G, corpus)
    if found is None:
        # not reachable for graphs covered by the characterization; kept explicit
        return Classification("q_at_most_n_minus_2", None, "unexplained", None)
    name, just = found
    return Classification("q_at_most_n_minus_2", None, name, just)


# ---------------------------------------------------------------------------
# maximum nullity: zero forcing upper bounds and explicit-matrix lower bounds


def _closure(G: Graph, blue: set[int], psd: bool) -> set[int]:
    """Colour change closure; with psd, forcing happens inside each white component."""
    blue = set(blue)
    while True:
        white = [v for v in G.vertices if v not in blue]
        if psd:
            H, order = G.induced(white)
            parts = [{order[v - 1] for v in c} for c in H.components()]
        else:
            parts = [set(white)]
        forced = set()
        for part in parts:
            for u in blue:
                wn = G.adj[u] & part
                if len(wn) == 1:
                    forced |= wn
        if not forced:
            return blue
        blue |= forced


def zero_forcing_number(G: Graph, psd: bool = False) -> int:
    """Z(G) (or Z+(G) when psd), an upper bound on M(G) (or M+(G))."""
    verts = list(G.vertices)
    for k in range(0 if G.n == 0 else 1, G.n + 1):
        for S in itertools.combinations(verts, k):
            if len(_closure(G, set(S), psd)) == G.n:
                return k
    return G.n


def _exact_eigenvalue(lam: float) -> ExactScalar | None:
    """Recognize small rationals and half-integer quadratic irrationals."""
    for den in range(1, 7):
        a = Fraction(round(lam * den), den)
        if abs(float(a) - lam) < 1e-9:
            return ExactScalar(a)
    for d in (2, 3, 5, 6, 7):
        for b2 in (1, -1, 2, -2, 3, -3, 4, -4):
            b = Fraction(b2, 2)
            a = Fraction(round(2 * (lam - float(b) * math.sqrt(d))), 2)
            if abs(float(a) + float(b) * math.sqrt(d) - lam) < 1e-9:
                return ExactScalar(a, b, d)
    return None


def _candidate_matrices(G: Graph, budget: int, rng) -> Iterator[np.ndarray]:
    n = G.n
    edges = G.sorted_edges()
    base = np.zeros((n, n))
    for i, j in edges:
        base[i - 1, j - 1] = base[j - 1, i - 1] = 1
    yield base
    deg = np.diag(base.sum(axis=1))
    yield deg - base
    yield deg + base
    signs_all = 2 ** len(edges) * 3 ** n <= budget
    iters = (itertools.product(itertools.product((1, -1), repeat=len(edges)),
                               itertools.product((-1, 0, 1), repeat=n))
             if signs_all else
             ((tuple(rng.choice((1, -1), len(edges))), tuple(rng.choice((-1, 0, 1), n)))
              for _ in range(budget)))
    for signs, diag in iters:
        B = np.diag(np.asarray(diag, dtype=float))
        for (i, j), s in zip(edges, signs):
            B[i - 1, j - 1] = B[j - 1, i - 1] = s
        yield B


def _best_nullity(G: Graph, budget: int, seed: int, psd: bool):
    rng = np.random.default_rng(seed)
    best, best_M = 0, None
    for B in _candidate_matrices(G, budget, rng):
        w = np.linalg.eigvalsh(B)
        groups: list[list[float]] = []
        for x in w:
            if groups and x - groups[-1][-1] < 1e-8:
                groups[-1].append(x)
            else:
                groups.append([x])
        if psd:
            groups = groups[:1]
        for g in groups:
            if len(g) <= best:
                continue
            lam = _exact_eigenvalue(float(np.mean(g)))
            if lam is None:
                continue
            E = ExactMatrix([[int(x) for x in row] for row in B]).shift(-lam)
            k = G.n - rank_exact(E)
            if k > best:
                best, best_M = k, E
    return best, best_M


def brute_force_params(G: Graph, budget: int = 2000, seed: int = 0) -> GraphParams:
    """Maximum nullity data for small graphs.

    ``M`` and ``Mplus`` are zero forcing numbers (always upper bounds).  The
    search over structured +-1 matrices supplies attained nullities; when they
    meet the zero forcing numbers the values are exact.  The search is not
    exhaustive, so a gap only means the value is unresolved.
    """
    if G.n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_MAX_N}")
    Z = zero_forcing_number(G)
    Zp = zero_forcing_number(G, psd=True)
    lo, Bm = _best_nullity(G, budget, seed, psd=False)
    lo_p, _ = _best_nullity(G, budget, seed, psd=True)
    prov = {
        "M": "brute-forced (exact)" if lo == Z else f"zero forcing upper bound (attained {lo})",
        "Mplus": "brute-forced (exact)" if lo_p == Zp else f"zero forcing upper bound (attained {lo_p})",
    }
    cc = None
    if G.n <= EXACT_COVER_MAX_N:
        cc = len(clique_cover(G))
        prov["clique_cover_number"] = "brute-forced (exact)"
    return GraphParams(Z, Zp, cc, prov, lo or None, Bm)
