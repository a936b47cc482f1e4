"""Packing-to-list-coloring product reduction and the color-pool bounds.

The product of (g, lists, k) has one vertex per (original vertex, coloring
index) pair: fibers over a vertex form a k-clique (forcing the k colors
there to be distinct) and each index layer is a copy of g (forcing each
coloring to be proper).  Proper colorings of the product therefore
correspond exactly to packings of the original instance.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FormatError
from .graph_core import Graph
from .packing_core import ListAssignment, Packing, validate_packing


@dataclass
class ProductInstance:
    graph: Graph
    lists: ListAssignment
    origin: dict[int, tuple[int, int]]  # product vertex -> (vertex, index 1..k)
    k: int
    source_graph: Graph
    source_lists: ListAssignment

    def fiber(self, v: int) -> tuple[int, ...]:
        return tuple(v * self.k + i for i in range(self.k))

    def product_vertex(self, v: int, i: int) -> int:
        """Product id of (vertex v, coloring index i), i 1-based."""
        return v * self.k + (i - 1)


def product_reduce(g: Graph, lists: ListAssignment, k: int) -> ProductInstance:
    """Product instance whose proper list colorings encode k-packings of g.

    Product ids are v*k + (i-1) so layouts are deterministic.  Rejects
    non-uniform list sizes.
    """
    if lists.k != k:
        raise ValueError(f"lists must be uniform of size k = {k}")
    for v in g.vertices():
        if v not in lists:
            raise ValueError(f"vertex {v} has no list")
    edges = []
    for u, v in g.edges():
        for i in range(k):
            edges.append((u * k + i, v * k + i))
    for v in g.vertices():
        for i in range(k):
            for j in range(i + 1, k):
                edges.append((v * k + i, v * k + j))
    product_lists = {}
    origin = {}
    for v in g.vertices():
        for i in range(k):
            pid = v * k + i
            product_lists[pid] = lists[v]
            origin[pid] = (v, i + 1)
    return ProductInstance(
        graph=Graph(g.n * k, edges),
        lists=ListAssignment(product_lists),
        origin=origin,
        k=k,
        source_graph=g,
        source_lists=lists,
    )


def coloring_from_packing(pi: ProductInstance, p: Packing) -> dict[int, int]:
    """Proper product coloring from a packing: fiber position i gets the
    color the i-th coloring assigns.  Rejects invalid packings."""
    if p.k != pi.k:
        raise ValueError(f"packing has k={p.k}, product expects {pi.k}")
    violations = validate_packing(pi.source_graph, pi.source_lists, p)
    if violations:
        raise ValueError(f"packing is invalid: {violations[0]}")
    return {pid: p.columns[v][i - 1] for pid, (v, i) in pi.origin.items()}


def packing_from_coloring(pi: ProductInstance, coloring: dict[int, int]) -> Packing:
    """Packing read off a proper product coloring, one column per fiber.

    Rejects colorings that are not proper list colorings of the product.
    """
    if set(coloring) != set(pi.origin):
        raise ValueError("coloring does not cover exactly the product's vertices")
    for pid, c in coloring.items():
        if c not in pi.lists[pid]:
            raise ValueError(f"color {c} at product vertex {pid} is not on its list")
    for a, b in pi.graph.edges():
        if coloring[a] == coloring[b]:
            raise ValueError(f"edge ({a},{b}) is monochromatic")
    columns: dict[int, list] = {v: [0] * pi.k for v in pi.source_graph.vertices()}
    for pid, (v, i) in pi.origin.items():
        columns[v][i - 1] = coloring[pid]
    return Packing(pi.k, columns)


def color_pool_bound(k: int, t: int) -> int:
    """Colors that suffice for product instances from tree-width-t graphs:
    (2k(t+1) - 1) * k."""
    if k < 1 or t < 0:
        raise ValueError("need k >= 1 and t >= 0")
    return (2 * k * (t + 1) - 1) * k


def small_list_bound(r: int, k: int) -> int:
    """Colors that suffice for k-assignments of a tree-width-r graph when
    hunting uncolorable instances: (2r + 1) * k."""
    if k < 1 or r < 0:
        raise ValueError("need k >= 1 and r >= 0")
    return (2 * r + 1) * k


# --- serialization -----------------------------------------------------------

def origin_to_json_dict(pi: ProductInstance) -> dict:
    return {
        "k": pi.k,
        "origin": {str(pid): [v, i] for pid, (v, i) in sorted(pi.origin.items())},
    }


def origin_from_json_dict(payload: dict) -> tuple[int, dict[int, tuple[int, int]]]:
    if not isinstance(payload, dict) or "k" not in payload or "origin" not in payload:
        raise FormatError("origin payload needs 'k' and 'origin'")
    k = payload["k"]
    raw = payload["origin"]
    if not isinstance(k, int) or not isinstance(raw, dict):
        raise FormatError("'k' must be an integer and 'origin' an object")
    origin = {}
    for key, pair in raw.items():
        if not (isinstance(pair, list) and len(pair) == 2):
            raise FormatError(f"bad origin entry for {key!r}")
        origin[int(key)] = (pair[0], pair[1])
    return k, origin
