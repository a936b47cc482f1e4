"""Graph representation, chordality machinery, d-tree tools, and clique listing.

Vertices are dense integers 0..n-1.  All operations break ties by lowest
vertex id, so every structural result here is deterministic.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .errors import FormatError, InternalAssertion
from .rng import SplitMix64


class Graph:
    """Immutable simple undirected graph on vertices 0..n-1."""

    __slots__ = ("n", "_adj", "_m")

    def __init__(self, n: int, edges) -> None:
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        adj = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) outside vertex range 0..{n - 1}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if v not in adj[u]:
                adj[u].add(v)
                adj[v].add(u)
                m += 1
        self.n = n
        self._adj = tuple(frozenset(s) for s in adj)
        self._m = m

    @property
    def edge_count(self) -> int:
        return self._m

    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> frozenset:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (u, v) with u < v, sorted."""
        return [(u, v) for u in range(self.n) for v in sorted(self._adj[u]) if u < v]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._adj == other._adj

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self._m})"


@dataclass(frozen=True)
class EliminationOrder:
    """A vertex ordering with, per position, the number of later neighbors.

    ``perfect`` marks that every vertex's later neighborhood induces a
    clique, i.e. the order is a perfect elimination order.
    """

    order: tuple[int, ...]
    later_neighbor_counts: tuple[int, ...]
    perfect: bool


@dataclass(frozen=True)
class NotChordal:
    """Witness that a graph is not chordal.

    ``vertex`` has two later neighbors ``pair`` that are nonadjacent in the
    maximum-cardinality-search order, which cannot happen in a chordal graph.
    """

    vertex: int
    pair: tuple[int, int]


def _verify_elimination(g: Graph, order: tuple[int, ...]):
    """later-neighbor counts if order is perfect, else a NotChordal witness."""
    position = {v: i for i, v in enumerate(order)}
    counts = []
    for i, v in enumerate(order):
        later = sorted(u for u in g.neighbors(v) if position[u] > i)
        counts.append(len(later))
        for a, b in itertools.combinations(later, 2):
            if not g.has_edge(a, b):
                return None, NotChordal(vertex=v, pair=(a, b))
    return tuple(counts), None


def mcs_elimination_order(g: Graph) -> EliminationOrder | NotChordal:
    """Maximum cardinality search.

    Returns a perfect elimination order when g is chordal (each vertex's
    neighbors later in the order form a clique) and a NotChordal witness
    otherwise.  Ties in the search are broken by lowest vertex id.
    """
    n = g.n
    if n == 0:
        raise ValueError("graph is empty")
    weight = [0] * n
    numbered = [False] * n
    order = [0] * n
    # Number vertices from the back of the order toward the front; each step
    # picks the unnumbered vertex with the most numbered neighbors.
    for slot in range(n - 1, -1, -1):
        best = -1
        best_w = -1
        for v in range(n):
            if not numbered[v] and weight[v] > best_w:
                best = v
                best_w = weight[v]
        order[slot] = best
        numbered[best] = True
        for u in g.neighbors(best):
            if not numbered[u]:
                weight[u] += 1
    counts, witness = _verify_elimination(g, tuple(order))
    if witness is not None:
        return witness
    return EliminationOrder(order=tuple(order), later_neighbor_counts=counts, perfect=True)


def clique_number_chordal(g: Graph, order: EliminationOrder) -> int:
    """Clique number of a chordal graph: 1 + max later-neighborhood size.

    Rejects orders that are not perfect elimination orders of g.
    """
    if sorted(order.order) != list(range(g.n)):
        raise ValueError("order is not a permutation of the vertex set")
    counts, witness = _verify_elimination(g, order.order)
    if witness is not None or not order.perfect:
        raise ValueError("order is not a perfect elimination order of g")
    return 1 + max(counts)


def is_d_tree(g: Graph, d: int) -> bool:
    """True iff g is a d-tree.

    Greedily deletes a lowest-id simplicial vertex whose neighborhood is
    exactly a d-clique until K_{d+1} remains.  For d-trees any valid
    deletion order succeeds, so the greedy choice is safe.  A positive
    answer is cross-checked against chordality and clique number d+1.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    n = g.n
    if n < d + 1:
        return False
    adj = [set(g.neighbors(v)) for v in range(n)]
    alive = [True] * n
    remaining = n

    def neighborhood_is_clique(v: int) -> bool:
        nb = sorted(adj[v])
        return all(b in adj[a] for a, b in itertools.combinations(nb, 2))

    while remaining > d + 1:
        victim = -1
        for v in range(n):
            if alive[v] and len(adj[v]) == d and neighborhood_is_clique(v):
                victim = v
                break
        if victim == -1:
            return False
        for u in adj[victim]:
            adj[u].discard(victim)
        adj[victim].clear()
        alive[victim] = False
        remaining -= 1

    core = [v for v in range(n) if alive[v]]
    for a, b in itertools.combinations(core, 2):
        if b not in adj[a]:
            return False

    order = mcs_elimination_order(g)
    if isinstance(order, NotChordal) or clique_number_chordal(g, order) != d + 1:
        raise InternalAssertion("greedy d-tree check disagrees with chordality cross-check")
    return True


def random_d_tree(d: int, n: int, seed: int) -> Graph:
    """Random d-tree on n vertices, reproducible from a 64-bit seed.

    Starts from K_{d+1} and attaches each new vertex to a d-clique chosen
    uniformly among all d-cliques of the graph built so far.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    if n < d + 1:
        raise ValueError(f"a d-tree needs at least d+1 = {d + 1} vertices, got n = {n}")
    rng = SplitMix64(seed)
    edges = list(itertools.combinations(range(d + 1), 2))
    # Every d-clique lives inside some (d+1)-clique of the construction, so
    # the list below stays exact as vertices are attached.
    cliques = [c for c in itertools.combinations(range(d + 1), d)]
    for v in range(d + 1, n):
        host = cliques[rng.randrange(len(cliques))]
        for u in host:
            edges.append((u, v))
        for rest in itertools.combinations(host, d - 1):
            cliques.append(tuple(sorted(rest + (v,))))
    return Graph(n, edges)


def degeneracy_order(g: Graph) -> tuple[tuple[int, ...], int]:
    """Repeated minimum-degree deletion; returns (order, degeneracy)."""
    n = g.n
    adj = [set(g.neighbors(v)) for v in range(n)]
    alive = [True] * n
    order = []
    degeneracy = 0
    for _ in range(n):
        best = -1
        best_deg = n + 1
        for v in range(n):
            if alive[v] and len(adj[v]) < best_deg:
                best = v
                best_deg = len(adj[v])
        degeneracy = max(degeneracy, best_deg)
        order.append(best)
        alive[best] = False
        for u in adj[best]:
            adj[u].discard(best)
        adj[best].clear()
    return tuple(order), degeneracy


def enumerate_cliques(g: Graph, s: int) -> list[tuple[int, ...]]:
    """All s-cliques, each sorted by vertex id, in lexicographic order.

    Simple recursive extension over ascending adjacency; fine for the
    desk-scale graphs this library targets.
    """
    if s < 1:
        raise ValueError("clique size must be at least 1")
    out: list[tuple[int, ...]] = []

    def extend(clique: list[int], candidates: list[int]) -> None:
        if len(clique) == s:
            out.append(tuple(clique))
            return
        for idx, v in enumerate(candidates):
            nxt = [u for u in candidates[idx + 1:] if g.has_edge(u, v)]
            clique.append(v)
            extend(clique, nxt)
            clique.pop()

    for v in range(g.n):
        if s == 1:
            out.append((v,))
        else:
            extend([v], sorted(u for u in g.neighbors(v) if u > v))
    return out


# --- serialization -----------------------------------------------------------

def graph_to_json_dict(g: Graph, names: dict[int, str] | None = None) -> dict:
    payload: dict = {"n": g.n, "edges": [[u, v] for u, v in g.edges()]}
    if names:
        payload["names"] = {str(v): names[v] for v in sorted(names)}
    return payload


def graph_from_json_dict(payload: dict) -> tuple[Graph, dict[int, str] | None]:
    if not isinstance(payload, dict):
        raise FormatError("graph payload must be a JSON object")
    try:
        n = payload["n"]
        edges = payload["edges"]
    except (KeyError, TypeError) as exc:
        raise FormatError("graph payload needs 'n' and 'edges'") from exc
    if not isinstance(n, int) or not isinstance(edges, list):
        raise FormatError("'n' must be an integer and 'edges' a list")
    pairs = []
    for e in edges:
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) for x in e)):
            raise FormatError(f"bad edge entry: {e!r}")
        pairs.append((e[0], e[1]))
    try:
        g = Graph(n, pairs)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    names = None
    if "names" in payload and payload["names"] is not None:
        raw = payload["names"]
        if not isinstance(raw, dict):
            raise FormatError("'names' must be an object")
        try:
            names = {int(k): str(v) for k, v in raw.items()}
        except ValueError as exc:
            raise FormatError("'names' keys must be vertex ids") from exc
    return g, names


def dumps_canonical(payload: dict) -> str:
    """Stable JSON rendering so identical objects produce identical files."""
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def graph_to_dot(g: Graph, names: dict[int, str] | None = None,
                 styles: dict[int, str] | None = None) -> str:
    lines = ["graph G {"]
    for v in range(g.n):
        label = names.get(v, str(v)) if names else str(v)
        extra = f", {styles[v]}" if styles and v in styles else ""
        lines.append(f'  {v} [label="{label}"{extra}];')
    for u, v in g.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
