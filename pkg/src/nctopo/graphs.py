"""Rooted graphs: star products and closed-walk moment/cumulant counting.

The k-th moment of a rooted graph counts closed k-walks at the root; its
boolean cumulants count the closed walks that avoid the root in between
(irreducible walks).  Gluing two rooted graphs at their roots adds boolean
cumulants, which is the graph realization of the additive boolean
convolution.  All counting is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cumulants import CumulantSequence, MomentSequence
from .errors import DomainError, ParseError, SizeLimitError

MOMENT_ORDER_CAP = 20
MOMENT_SIZE_CAP = 200
WALK_ORDER_CAP = 16
WALK_SIZE_CAP = 100


@dataclass(frozen=True)
class RootedGraph:
    """Simple undirected graph with a distinguished root vertex (1-based)."""

    n: int
    edges: frozenset[tuple[int, int]]
    root: int = 1

    @classmethod
    def from_edges(cls, n: int, edges, root: int = 1) -> "RootedGraph":
        if n < 1:
            raise DomainError(f"graph needs at least one vertex, got n={n}")
        if not (1 <= root <= n):
            raise DomainError(f"root {root} outside 1..{n}")
        canon = set()
        for u, v in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise DomainError(f"edge ({u}, {v}) outside 1..{n}")
            if u == v:
                raise DomainError(f"loop at vertex {u} not allowed")
            canon.add((min(u, v), max(u, v)))
        return cls(n, frozenset(canon), root)

    def adjacency(self) -> list[list[int]]:
        A = [[0] * self.n for _ in range(self.n)]
        for u, v in self.edges:
            A[u - 1][v - 1] = A[v - 1][u - 1] = 1
        return A

    def neighbors(self, v: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return sorted(out)


def star_product(g1: RootedGraph, g2: RootedGraph) -> RootedGraph:
    """Disjoint union with the two roots identified; the joint vertex is the root."""
    # Keep g1's labels; g2's non-root vertices are appended after them.
    shift: dict[int, int] = {g2.root: g1.root}
    nxt = g1.n + 1
    for v in range(1, g2.n + 1):
        if v != g2.root:
            shift[v] = nxt
            nxt += 1
    edges = set(g1.edges)
    for u, v in g2.edges:
        a, b = shift[u], shift[v]
        edges.add((min(a, b), max(a, b)))
    return RootedGraph.from_edges(g1.n + g2.n - 1, edges, g1.root)


def root_moments(g: RootedGraph, K: int) -> MomentSequence:
    """m_k = number of closed k-walks at the root, k = 1..K, exact."""
    if K > MOMENT_ORDER_CAP:
        raise SizeLimitError(f"order {K} exceeds cap {MOMENT_ORDER_CAP}")
    if g.n > MOMENT_SIZE_CAP:
        raise SizeLimitError(f"graph size {g.n} exceeds cap {MOMENT_SIZE_CAP}")
    A = g.adjacency()
    r = g.root - 1
    vec = [int(i == r) for i in range(g.n)]
    values = []
    for _ in range(K):
        vec = [sum(vec[i] * A[i][j] for i in range(g.n)) for j in range(g.n)]
        values.append(vec[r])
    return MomentSequence.of(values)


def boolean_cumulants_by_walks(g: RootedGraph, K: int) -> CumulantSequence:
    """b_k = closed k-walks at the root whose interior avoids the root.

    Counted directly by dynamic programming on the root-deleted graph, so
    tests can cross it against the Mobius-inversion route
    moments_to_cumulants(root_moments(g), 'boolean').
    """
    if K > WALK_ORDER_CAP:
        raise SizeLimitError(f"order {K} exceeds cap {WALK_ORDER_CAP}")
    if g.n > WALK_SIZE_CAP:
        raise SizeLimitError(f"graph size {g.n} exceeds cap {WALK_SIZE_CAP}")
    A = g.adjacency()
    r = g.root - 1
    others = [i for i in range(g.n) if i != r]
    nbrs = [i for i in others if A[r][i]]
    values = [0] * K
    if nbrs:
        # walk[v]: root-avoiding walks root -> v of the current length
        walk = {v: 1 for v in nbrs}
        for k in range(2, K + 1):
            values[k - 1] = sum(walk.get(v, 0) for v in nbrs)
            walk = {
                v: sum(w for u, w in walk.items() if A[u][v])
                for v in others
            }
    return CumulantSequence.of("boolean", values)


def rooted_graph_text(g: RootedGraph) -> str:
    """Graph file format: first line 'n root', then one edge 'u v' per line."""
    lines = [f"{g.n} {g.root}"]
    lines.extend(f"{u} {v}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"


def parse_rooted_graph_text(text: str) -> RootedGraph:
    lines = [
        (i, ln.split("#", 1)[0].strip())
        for i, ln in enumerate(text.splitlines(), start=1)
    ]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines:
        raise ParseError("empty graph file")
    lineno, head = lines[0]
    parts = head.split()
    if len(parts) != 2:
        raise ParseError(f"expected 'n root', got {head!r}", lineno)
    try:
        n, root = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(f"expected integers, got {head!r}", lineno) from None
    edges = []
    for lineno, ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {ln!r}", lineno)
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ParseError(f"expected integers, got {ln!r}", lineno) from None
    try:
        return RootedGraph.from_edges(n, edges, root)
    except DomainError as exc:
        raise ParseError(str(exc)) from None


def path_graph(n: int, root: int = 1) -> RootedGraph:
    return RootedGraph.from_edges(n, [(i, i + 1) for i in range(1, n)], root)


def cycle_graph(n: int, root: int = 1) -> RootedGraph:
    edges = [(i, i + 1) for i in range(1, n)] + [(1, n)]
    return RootedGraph.from_edges(n, edges, root)
