"""List assignments, packings, validity checks, bad-clique detection, and the
complement multigraph used by the lower-bound gadget analysis."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FormatError
from .graph_core import Graph, enumerate_cliques


class ListAssignment:
    """Mapping vertex -> set of permissible colors."""

    __slots__ = ("lists",)

    def __init__(self, lists) -> None:
        out = {}
        for v, colors in lists.items():
            colors = frozenset(colors)
            if not colors:
                raise ValueError(f"empty list at vertex {v}")
            if not all(isinstance(c, int) for c in colors):
                raise ValueError(f"non-integer color at vertex {v}")
            out[int(v)] = colors
        self.lists = out

    @property
    def k(self) -> int | None:
        """Common list size when uniform, else None."""
        sizes = {len(s) for s in self.lists.values()}
        if len(sizes) == 1:
            return sizes.pop()
        return None

    def __getitem__(self, v: int) -> frozenset:
        return self.lists[v]

    def __contains__(self, v: int) -> bool:
        return v in self.lists

    def vertices(self) -> list[int]:
        return sorted(self.lists)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ListAssignment):
            return NotImplemented
        return self.lists == other.lists

    def __repr__(self) -> str:
        return f"ListAssignment({len(self.lists)} vertices, k={self.k})"


class Packing:
    """A sequence of k colorings stored vertex-major: one column per vertex.

    Column position j holds the color the (j+1)-th coloring gives the
    vertex; coloring indices are 1-based everywhere they surface.
    """

    __slots__ = ("k", "columns")

    def __init__(self, k: int, columns) -> None:
        if k < 1:
            raise ValueError("k must be positive")
        cols = {}
        for v, col in columns.items():
            col = tuple(col)
            if len(col) != k:
                raise ValueError(f"column at vertex {v} has length {len(col)}, expected {k}")
            cols[int(v)] = col
        self.k = k
        self.columns = cols

    def column(self, v: int) -> tuple[int, ...]:
        return self.columns[v]

    def color(self, v: int, i: int) -> int:
        """Color of vertex v under coloring i (1-based)."""
        return self.columns[v][i - 1]

    def vertices(self) -> list[int]:
        return sorted(self.columns)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Packing):
            return NotImplemented
        return self.k == other.k and self.columns == other.columns

    def __repr__(self) -> str:
        return f"Packing(k={self.k}, {len(self.columns)} vertices)"


def validate_packing(g: Graph, assignment: ListAssignment, p: Packing) -> list[dict]:
    """Every violated packing constraint; an empty list means valid.

    Violations are JSON-ready records: either a column that is not a
    permutation of its vertex's list, or an edge that is monochromatic
    under some coloring index.
    """
    if assignment.k is not None and p.k != assignment.k:
        raise ValueError(f"packing has k={p.k} but lists have size {assignment.k}")
    if set(p.columns) != set(g.vertices()):
        raise ValueError("packing does not cover exactly the graph's vertex set")
    for v in g.vertices():
        if v not in assignment:
            raise ValueError(f"vertex {v} has no list")
    violations = []
    for v in g.vertices():
        col = p.columns[v]
        if len(set(col)) != p.k or set(col) != assignment[v]:
            violations.append({
                "kind": "column_not_permutation",
                "vertex": v,
                "column": list(col),
                "list": sorted(assignment[v]),
            })
    for u, v in g.edges():
        cu, cv = p.columns[u], p.columns[v]
        for i in range(p.k):
            if cu[i] == cv[i]:
                violations.append({
                    "kind": "monochromatic_edge",
                    "edge": [u, v],
                    "index": i + 1,
                    "color": cu[i],
                })
    return violations


def bad_clique_witness(image_sets, d: int) -> tuple[int, ...] | None:
    """Witness index set I for the bad-clique condition, or None.

    ``image_sets`` holds, per coloring index, the set of colors the clique
    receives.  Because each coloring is injective on a clique, a size-d
    index set I with a size-d color union exists iff d of the image sets
    coincide, so a multiplicity count suffices.  Returns the first d
    indices (1-based) carrying the repeated set.
    """
    seen: dict[frozenset, list[int]] = {}
    for idx, img in enumerate(image_sets, start=1):
        img = frozenset(img)
        if len(img) != d:
            raise ValueError(f"image set at index {idx} has size {len(img)}, expected {d}")
        seen.setdefault(img, []).append(idx)
        if len(seen[img]) == d:
            return tuple(seen[img])
    return None


def find_bad_cliques(g: Graph, p: Packing, d: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All bad d-cliques of g under p, each with one witness index set.

    Requires p.k = 2d-1 and a valid packing.  A d-clique K is bad when some
    d of the 2d-1 colorings give K the same d-color image.
    """
    if p.k != 2 * d - 1:
        raise ValueError(f"bad-clique scan needs k = 2d-1 = {2 * d - 1}, packing has k = {p.k}")
    out = []
    for clique in enumerate_cliques(g, d):
        images = [frozenset(p.columns[u][i] for u in clique) for i in range(p.k)]
        witness = bad_clique_witness(images, d)
        if witness is not None:
            out.append((clique, witness))
    return out


@dataclass(frozen=True)
class ComplementMultigraph:
    """Multigraph on the palette 1..d+2 with one edge per coloring index:
    the two palette colors missing from the clique's image."""

    d: int
    edges: tuple[tuple[int, int], ...]

    @property
    def palette(self) -> range:
        return range(1, self.d + 3)


def complement_multigraph(p: Packing, clique, d: int) -> ComplementMultigraph:
    """Complement edges of a d-clique's images inside the palette 1..d+2.

    Rejects inputs whose images are not d-subsets of the palette (the
    clique is not a d-clique, the packing is invalid, or a color falls
    outside 1..d+2).
    """
    if p.k != d + 1:
        raise ValueError(f"complement multigraph needs k = d+1 = {d + 1}, packing has k = {p.k}")
    palette = frozenset(range(1, d + 3))
    clique = tuple(clique)
    edges = []
    for i in range(p.k):
        image = frozenset(p.columns[u][i] for u in clique)
        if len(image) != d:
            raise ValueError(f"coloring {i + 1} is not injective on {clique}")
        if not image <= palette:
            raise ValueError(f"coloring {i + 1} uses colors outside the palette 1..{d + 2}")
        missing = sorted(palette - image)
        edges.append((missing[0], missing[1]))
    return ComplementMultigraph(d=d, edges=tuple(edges))


def multigraph_has_cycle(h: ComplementMultigraph) -> bool:
    """True iff h has a cycle; a pair of parallel edges counts as a 2-cycle."""
    parent = {v: v for v in h.palette}

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in h.edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return True
        parent[ra] = rb
    return False


# --- serialization -----------------------------------------------------------

def lists_to_json_dict(assignment: ListAssignment) -> dict:
    k = assignment.k
    return {
        "k": k,
        "lists": {str(v): sorted(assignment[v]) for v in assignment.vertices()},
    }


def lists_from_json_dict(payload: dict) -> ListAssignment:
    if not isinstance(payload, dict) or "lists" not in payload:
        raise FormatError("list-assignment payload needs a 'lists' object")
    raw = payload["lists"]
    if not isinstance(raw, dict):
        raise FormatError("'lists' must be an object")
    lists = {}
    for key, colors in raw.items():
        try:
            v = int(key)
        except ValueError as exc:
            raise FormatError(f"bad vertex key {key!r}") from exc
        if not (isinstance(colors, list) and all(isinstance(c, int) for c in colors)):
            raise FormatError(f"colors for vertex {key} must be a list of integers")
        lists[v] = colors
    try:
        assignment = ListAssignment(lists)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    declared = payload.get("k")
    if declared is not None and assignment.k != declared:
        raise FormatError(f"declared k={declared} does not match the lists")
    return assignment


def packing_to_json_dict(p: Packing) -> dict:
    return {
        "k": p.k,
        "columns": {str(v): list(p.columns[v]) for v in p.vertices()},
    }


def packing_from_json_dict(payload: dict) -> Packing:
    if not isinstance(payload, dict) or "k" not in payload or "columns" not in payload:
        raise FormatError("packing payload needs 'k' and 'columns'")
    k = payload["k"]
    raw = payload["columns"]
    if not isinstance(k, int) or not isinstance(raw, dict):
        raise FormatError("'k' must be an integer and 'columns' an object")
    columns = {}
    for key, col in raw.items():
        try:
            v = int(key)
        except ValueError as exc:
            raise FormatError(f"bad vertex key {key!r}") from exc
        if not (isinstance(col, list) and all(isinstance(c, int) for c in col)):
            raise FormatError(f"column for vertex {key} must be a list of integers")
        columns[v] = col
    try:
        return Packing(k, columns)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
