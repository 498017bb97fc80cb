"""Labeled simple graphs, file formats, matrix patterns and subgraph search.

Vertices are always labeled ``1..n``.  Matrix row/column ``i`` (0-based)
corresponds to vertex ``i + 1``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import ParseError, ResourceError, ShapeError
from .scalars import ExactMatrix

MAX_ENUM_N = 8


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        norm = set()
        for e in self.edges:
            i, j = e
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"edge {i}-{j} outside 1..{self.n}")
            norm.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges))

    @cached_property
    def adj(self) -> dict[int, frozenset]:
        nbrs: dict[int, set] = {v: set() for v in range(1, self.n + 1)}
        for i, j in self.edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        return {v: frozenset(s) for v, s in nbrs.items()}

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(self.adj[v]) for v in self.vertices]

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        comps = []
        for s in self.vertices:
            if s in seen:
                continue
            stack, comp = [s], []
            seen.add(s)
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self.adj[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def is_path(self) -> bool:
        """True for P_n, n >= 1 (a single vertex counts as a path)."""
        if self.n == 0:
            return False
        return (self.is_connected() and self.num_edges == self.n - 1
                and max(self.degrees(), default=0) <= 2)

    def is_bipartite(self) -> bool:
        color: dict[int, int] = {}
        for s in self.vertices:
            if s in color:
                continue
            color[s] = 0
            stack = [s]
            while stack:
                v = stack.pop()
                for w in self.adj[v]:
                    if w not in color:
                        color[w] = 1 - color[v]
                        stack.append(w)
                    elif color[w] == color[v]:
                        return False
        return True

    def induced(self, verts: Sequence[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph relabeled 1..k in the given vertex order; also returns the order."""
        order = list(verts)
        pos = {v: k + 1 for k, v in enumerate(order)}
        es = [(pos[i], pos[j]) for i, j in self.edges if i in pos and j in pos]
        return Graph.from_edges(len(order), es), order

    def remove_vertex(self, v: int) -> tuple["Graph", list[int]]:
        return self.induced([u for u in self.vertices if u != v])

    def remove_edge(self, i: int, j: int) -> "Graph":
        return Graph(self.n, self.edges - {(min(i, j), max(i, j))})

    def add_edges(self, edges) -> "Graph":
        return Graph(self.n, self.edges | frozenset(tuple(e) for e in edges))

    def relabel(self, mapping: dict[int, int], n: int | None = None) -> "Graph":
        return Graph.from_edges(self.n if n is None else n,
                                [(mapping[i], mapping[j]) for i, j in self.edges])

    def is_subgraph_of(self, other: "Graph") -> bool:
        return self.n <= other.n and self.edges <= other.edges

    def __str__(self):
        es = " ".join(f"{i}-{j}" for i, j in self.sorted_edges())
        return f"Graph(n={self.n}; {es})"


# ---------------------------------------------------------------------------
# named graphs


def empty_graph(n: int) -> Graph:
    return Graph(n)


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)] + [(1, n)])


def complete(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(1, n + 1), 2))


def star(leaves: int) -> Graph:
    """K_{1,leaves} with center 1."""
    return Graph.from_edges(leaves + 1, [(1, v) for v in range(2, leaves + 2)])


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    shifted = [(i + g1.n, j + g1.n) for i, j in g2.edges]
    return Graph.from_edges(g1.n + g2.n, list(g1.edges) + shifted)


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(1, a + 1) for j in range(1, b + 1)])


def h_tree() -> Graph:
    return Graph.from_edges(6, [(1, 3), (2, 3), (3, 4), (4, 5), (4, 6)])


def campstool() -> Graph:
    return Graph.from_edges(5, [(1, 2), (1, 3), (2, 3), (3, 4), (3, 5)])


def long_y_tree() -> Graph:
    return Graph.from_edges(7, [(1, 2), (2, 3), (1, 4), (4, 5), (1, 6), (6, 7)])


def three_sun() -> Graph:
    """Triangle 1-2-3 with a pendant vertex on each corner (labels as in A_4)."""
    return Graph.from_edges(6, [(1, 2), (1, 3), (2, 3), (1, 4), (2, 5), (3, 6)])


def paw() -> Graph:
    """K_{1,3} (center 1) plus the leaf-leaf edge 2-3."""
    return star(3).add_edges([(2, 3)])


def hypercube(dim: int) -> Graph:
    n = 1 << dim
    es = [(u + 1, (u ^ (1 << b)) + 1) for u in range(n) for b in range(dim) if u < u ^ (1 << b)]
    return Graph.from_edges(n, es)


def complement(G: Graph) -> Graph:
    allpairs = itertools.combinations(G.vertices, 2)
    return Graph(G.n, frozenset(e for e in allpairs if e not in G.edges))


# ---------------------------------------------------------------------------
# file formats


def _graph6_n(data: bytes, pos: int) -> tuple[int, int]:
    def val(k):
        if k >= len(data):
            raise ParseError("graph6 size field truncated", k)
        c = data[k]
        if not 63 <= c <= 126:
            raise ParseError(f"graph6 byte {c!r} out of range", k)
        return c - 63

    if data[pos:pos + 1] != b"~":
        return val(pos), pos + 1
    if data[pos + 1:pos + 2] != b"~":
        n = 0
        for k in range(pos + 1, pos + 4):
            n = (n << 6) | val(k)
        return n, pos + 4
    n = 0
    for k in range(pos + 2, pos + 8):
        n = (n << 6) | val(k)
    return n, pos + 8


def parse_graph6(text: bytes | str) -> Graph:
    data = text.encode() if isinstance(text, str) else bytes(text)
    data = data.strip()
    if data.startswith(b">>graph6<<"):
        data = data[len(b">>graph6<<"):]
    if not data:
        raise ParseError("empty graph6 string", 0)
    n, pos = _graph6_n(data, 0)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = data[pos:]
    if len(body) != nbytes:
        raise ParseError(f"graph6 body has {len(body)} bytes, expected {nbytes}", pos + min(len(body), nbytes))
    bits = []
    for k, c in enumerate(body):
        if not 63 <= c <= 126:
            raise ParseError(f"graph6 byte {c!r} out of range", pos + k)
        v = c - 63
        bits.extend((v >> s) & 1 for s in range(5, -1, -1))
    if any(bits[nbits:]):
        raise ParseError("graph6 padding bits must be zero", len(data) - 1)
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i + 1, j + 1))
            k += 1
    return Graph.from_edges(n, edges)


def to_graph6(G: Graph) -> str:
    n = G.n
    if n <= 62:
        head = [n + 63]
    elif n <= 258047:
        head = [126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)]
    else:
        head = [126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)]
    bits = [1 if G.has_edge(i + 1, j + 1) else 0 for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    body = [sum(b << (5 - s) for s, b in enumerate(bits[k:k + 6])) + 63 for k in range(0, len(bits), 6)]
    return bytes(head + body).decode("ascii")


def parse_edge_list(text: bytes | str, n: int | None = None) -> Graph:
    """Edge list: optional ``n <N>`` header, then ``i j`` lines (1-based), ``#`` comments."""
    s = text.decode() if isinstance(text, (bytes, bytearray)) else text
    declared = n
    edges = []
    for lineno, raw in enumerate(s.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n":
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError(f"bad header {raw!r}", lineno)
            declared = int(parts[1])
            continue
        if len(parts) != 2:
            raise ParseError(f"expected 'i j', got {raw!r}", lineno)
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer vertex in {raw!r}", lineno) from None
        if i < 1 or j < 1 or i == j:
            raise ParseError(f"invalid edge {raw!r}", lineno)
        if declared is not None and max(i, j) > declared:
            raise ParseError(f"vertex exceeds declared n={declared}", lineno)
        edges.append((i, j))
    nn = declared if declared is not None else max((max(e) for e in edges), default=0)
    return Graph.from_edges(nn, edges)


def to_edge_list(G: Graph) -> str:
    lines = [f"n {G.n}"] + [f"{i} {j}" for i, j in G.sorted_edges()]
    return "\n".join(lines) + "\n"


def parse_graph(text: bytes | str, format: str = "edge-list", n: int | None = None) -> Graph:
    if format in ("edge-list", "el", "edgelist"):
        return parse_edge_list(text, n)
    if format in ("graph6", "g6"):
        return parse_graph6(text)
    raise ValueError(f"unknown graph format {format!r}")


def format_for_path(path: str) -> str:
    return "graph6" if str(path).endswith((".g6", ".graph6")) else "edge-list"


# ---------------------------------------------------------------------------
# patterns


@dataclass
class PatternVerdict:
    in_class: bool
    violations: list = field(default_factory=list)  # (i, j, reason), 1-based


def _check_symmetric(A, tol: float) -> None:
    if isinstance(A, ExactMatrix):
        if not A.is_symmetric():
            raise ShapeError("matrix is not symmetric")
        return
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {A.shape}")
    scale = max(1.0, float(np.max(np.abs(A))) if A.size else 1.0)
    if np.max(np.abs(A - A.T), initial=0.0) > tol * scale:
        raise ShapeError("matrix is not symmetric")


def pattern_of(A, tol: float = 1e-10) -> Graph:
    """Graph of the off-diagonal support (float: |a_ij| > tol is an edge)."""
    _check_symmetric(A, tol)
    if isinstance(A, ExactMatrix):
        n = A.nrows
        es = [(i + 1, j + 1) for i in range(n) for j in range(i + 1, n) if A[i, j]]
        return Graph.from_edges(n, es)
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    es = [(i + 1, j + 1) for i in range(n) for j in range(i + 1, n) if abs(A[i, j]) > tol]
    return Graph.from_edges(n, es)


def matches_pattern(A, G: Graph, tol: float = 1e-10) -> PatternVerdict:
    """Check A against S(G).  Float entries in the band (tol, 10*tol) are reported as ambiguous."""
    _check_symmetric(A, tol)
    exact = isinstance(A, ExactMatrix)
    n = A.nrows if exact else np.asarray(A).shape[0]
    if n != G.n:
        raise ShapeError(f"matrix order {n} does not match graph order {G.n}")
    if not exact:
        A = np.asarray(A, dtype=float)
    viol = []
    for i in range(n):
        for j in range(i + 1, n):
            edge = G.has_edge(i + 1, j + 1)
            if exact:
                nz = bool(A[i, j])
                if edge and not nz:
                    viol.append((i + 1, j + 1, "zero-on-edge"))
                elif nz and not edge:
                    viol.append((i + 1, j + 1, "nonzero-on-nonedge"))
                continue
            a = abs(A[i, j])
            if tol < a < 10 * tol:
                viol.append((i + 1, j + 1, "ambiguous"))
            elif edge and a <= tol:
                viol.append((i + 1, j + 1, "zero-on-edge"))
            elif not edge and a >= 10 * tol:
                viol.append((i + 1, j + 1, "nonzero-on-nonedge"))
    return PatternVerdict(not viol, viol)


# ---------------------------------------------------------------------------
# subgraph search


def _search_order(H: Graph) -> list[int]:
    """Order H's vertices so each (after the first of a component) touches an earlier one."""
    order: list[int] = []
    placed: set[int] = set()
    for comp in sorted(H.components(), key=len, reverse=True):
        start = max(comp, key=lambda v: (H.degree(v), -v))
        order.append(start)
        placed.add(start)
        rest = set(comp) - {start}
        while rest:
            nxt = max(rest, key=lambda v: (len(H.adj[v] & placed), H.degree(v), -v))
            order.append(nxt)
            placed.add(nxt)
            rest.discard(nxt)
    return order


def iter_embeddings(G: Graph, H: Graph, forbidden: frozenset = frozenset()) -> Iterator[dict[int, int]]:
    """All injective maps V(H) -> V(G) \\ forbidden carrying E(H) into E(G) (non-induced)."""
    if H.n > G.n - len(forbidden) or H.num_edges > G.num_edges:
        return
    order = _search_order(H)
    earlier = {v: [u for u in order[:k] if u in H.adj[v]] for k, v in enumerate(order)}
    mapping: dict[int, int] = {}
    used: set[int] = set(forbidden)

    def extend(k: int):
        if k == len(order):
            yield dict(mapping)
            return
        h = order[k]
        nb = earlier[h]
        if nb:
            cands = set(G.adj[mapping[nb[0]]])
            for u in nb[1:]:
                cands &= G.adj[mapping[u]]
        else:
            cands = set(G.vertices)
        dh = H.degree(h)
        for g in sorted(cands - used):
            if G.degree(g) < dh:
                continue
            mapping[h] = g
            used.add(g)
            yield from extend(k + 1)
            used.discard(g)
            del mapping[h]

    yield from extend(0)


def find_embedding(G: Graph, H: Graph, mode: str = "isomorphic") -> dict[int, int] | None:
    if mode == "identical":
        return {v: v for v in H.vertices} if H.is_subgraph_of(G) else None
    if mode != "isomorphic":
        raise ValueError(f"unknown mode {mode!r}")
    return next(iter_embeddings(G, H), None)


def contains_subgraph(G: Graph, H: Graph, mode: str = "isomorphic") -> bool:
    return find_embedding(G, H, mode) is not None


# ---------------------------------------------------------------------------
# canonical forms and enumeration


def _refine(G: Graph, cells: list[list[int]]) -> list[list[int]]:
    """Equitable refinement of an ordered partition; cell order is label-invariant."""
    while True:
        cell_of = {v: k for k, c in enumerate(cells) for v in c}
        new: list[list[int]] = []
        changed = False
        for c in cells:
            if len(c) == 1:
                new.append(c)
                continue
            sig = {}
            for v in c:
                counts = [0] * len(cells)
                for w in G.adj[v]:
                    counts[cell_of[w]] += 1
                sig[v] = tuple(counts)
            groups: dict[tuple, list[int]] = {}
            for v in c:
                groups.setdefault(sig[v], []).append(v)
            if len(groups) > 1:
                changed = True
            for key in sorted(groups):
                new.append(groups[key])
        cells = new
        if not changed:
            return cells


def canonical_form(G: Graph) -> tuple[int, tuple]:
    """Isomorphism-invariant certificate by individualization/refinement (desk scale)."""
    best = None
    start = _refine(G, [list(G.vertices)] if G.n else [])

    def leaf(cells):
        pos = {c[0]: k for k, c in enumerate(cells)}
        return tuple(sorted((min(pos[i], pos[j]), max(pos[i], pos[j])) for i, j in G.edges))

    def search(cells):
        nonlocal best
        k = next((k for k, c in enumerate(cells) if len(c) > 1), None)
        if k is None:
            cert = leaf(cells)
            if best is None or cert < best:
                best = cert
            return
        for v in cells[k]:
            split = cells[:k] + [[v], [u for u in cells[k] if u != v]] + cells[k + 1:]
            search(_refine(G, split))

    search(start)
    return G.n, best if best is not None else ()


def are_isomorphic(G: Graph, H: Graph) -> bool:
    return G.n == H.n and G.num_edges == H.num_edges and canonical_form(G) == canonical_form(H)


def enumerate_graphs(n: int, up_to_isomorphism: bool = False) -> Iterator[Graph]:
    """All labeled graphs on n vertices, or one representative per isomorphism class."""
    if n > MAX_ENUM_N:
        raise ResourceError(f"enumeration limited to n <= {MAX_ENUM_N}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if not up_to_isomorphism:
        pairs = list(itertools.combinations(range(1, n + 1), 2))
        for mask in range(1 << len(pairs)):
            yield Graph(n, frozenset(p for k, p in enumerate(pairs) if mask >> k & 1))
        return
    yield from _nonisomorphic(n)


@lru_cache(maxsize=None)
def _nonisomorphic(n: int) -> tuple[Graph, ...]:
    if n == 0:
        return (Graph(0),)
    seen: dict[tuple, Graph] = {}
    for base in _nonisomorphic(n - 1):
        for r in range(n):
            for nbrs in itertools.combinations(range(1, n), r):
                G = Graph.from_edges(n, list(base.edges) + [(v, n) for v in nbrs])
                cf = canonical_form(G)
                if cf not in seen:
                    seen[cf] = G
    return tuple(sorted(seen.values(), key=lambda g: (g.num_edges, g.sorted_edges())))


# ---------------------------------------------------------------------------
# graphs with nearly all eigenvalues distinct


class HighQFamily(str, enum.Enum):
    PATH = "Path"
    PATH_PLUS_ISOLATED_VERTEX = "PathPlusIsolatedVertex"
    PATH_WITH_INTERIOR_LEAF = "PathWithInteriorLeaf"
    PATH_WITH_DISTANCE2_CHORD = "PathWithDistance2Chord"


def recognize_high_q_family(G: Graph) -> HighQFamily | None:
    """Structural test for the four graph families whose q is at least n-1.

    The families are: a path; a path plus an isolated vertex; a path with a
    leaf hung on an interior vertex; a path with a chord joining two vertices
    at distance two.  Only degrees, connectivity and cycle checks are used.
    """
    if G.n == 0:
        return None
    if G.is_path():
        return HighQFamily.PATH
    comps = G.components()
    if len(comps) == 2:
        small, big = sorted(comps, key=len)
        if len(small) == 1 and G.induced(big)[0].is_path():
            return HighQFamily.PATH_PLUS_ISOLATED_VERTEX
        return None
    if len(comps) != 1:
        return None
    degs = G.degrees()
    if G.num_edges == G.n - 1:
        # a tree: exactly one branch vertex of degree 3, with a leaf neighbour
        branch = [v for v in G.vertices if degs[v - 1] >= 3]
        if len(branch) == 1 and degs[branch[0] - 1] == 3:
            return (HighQFamily.PATH_WITH_INTERIOR_LEAF
                    if any(degs[u - 1] == 1 for u in G.adj[branch[0]]) else None)
        return None
    if G.num_edges == G.n:
        # unicyclic: the cycle must be a triangle and dropping one of its edges leaves a path
        for i, j in G.sorted_edges():
            if G.adj[i] & G.adj[j] and G.remove_edge(i, j).is_path():
                return HighQFamily.PATH_WITH_DISTANCE2_CHORD
    return None
