"""Constructive packing algorithms.

``pack_chordal_2dm1`` packs a chordal graph with clique number at most
d+1 into 2d-1 disjoint colorings, maintaining inductively that no
d-clique ever receives the same d-color image from d of the colorings;
the matching-repair procedures keep that invariant at each insertion.
``pack_degenerate_2d`` is the simpler greedy bound: with lists of size
2d, every insertion's extension graph has minimum degree at least half
its size, so a perfect matching always exists.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

from .errors import InternalAssertion, PreconditionFailed
from .graph_core import (
    Graph,
    NotChordal,
    clique_number_chordal,
    degeneracy_order,
    enumerate_cliques,
    mcs_elimination_order,
)
from .matching import (
    HallViolator,
    build_extension_graph,
    find_singular_sets,
    make_nonsingular_d3,
    make_nonsingular_d4,
    perfect_matching_or_violator,
)
from .oracle import SearchBudget, exists_packing
from .packing_core import ListAssignment, Packing, bad_clique_witness

logger = logging.getLogger(__name__)


@dataclass
class PackerTrace:
    """Per-vertex observability of the insertion loop, in insertion order."""

    order: tuple[int, ...]
    records: list[dict] = field(default_factory=list)

    def to_jsonl(self) -> str:
        lines = [json.dumps({"insertion_order": list(self.order)}, sort_keys=True)]
        lines.extend(json.dumps(r, sort_keys=True) for r in self.records)
        return "\n".join(lines) + "\n"


@dataclass
class Unknown:
    """Dispatcher result when no packing was produced.

    status is "refuted" (exhaustive search proved none exists) or
    "timeout" (the search budget ran out first).
    """

    status: str
    stats: dict | None = None


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise PreconditionFailed(message)


def _uniform_k(lists: ListAssignment, g: Graph) -> int:
    for v in g.vertices():
        if v not in lists:
            raise PreconditionFailed(f"vertex {v} has no list")
    k = lists.k
    _require(k is not None, "lists must all have the same size")
    return k


def _new_bad_triples(g: Graph, columns: dict, v: int, earlier: list[int], k: int):
    """Bad 3-cliques through v, with witness index sets.

    Only cliques containing v can be bad after inserting v, and they live
    inside v's earlier neighborhood, so scanning the adjacent pairs there
    is enough.
    """
    found = []
    for a in earlier:
        for b in earlier:
            if a < b and g.has_edge(a, b):
                images = [
                    frozenset((columns[a][i], columns[b][i], columns[v][i]))
                    for i in range(k)
                ]
                witness = bad_clique_witness(images, 3)
                if witness is not None:
                    found.append((tuple(sorted((a, b, v))), witness))
    return found


def pack_chordal_2dm1(g: Graph, lists: ListAssignment, d: int,
                      slow_checks: bool = False) -> tuple[Packing, PackerTrace]:
    """Packing of a chordal graph into 2d-1 disjoint colorings, with no
    d-clique receiving equal d-color images from d of them.

    Vertices are inserted in reverse perfect elimination order, so each
    arrives with a clique neighborhood of size at most d.  Each insertion
    extends all colorings at once along a perfect matching between
    coloring indices and the new vertex's colors; for d >= 4 the matching
    is repaired up front to have no d-singular subset, and for d = 3 the
    insertion is retried through the 5x5 repair when a bad triple shows
    up.  ``slow_checks`` rescans the whole inserted prefix after every
    step (expensive; meant for tests).
    """
    _require(d >= 3, f"the constructive packer needs d >= 3, got d = {d}")
    k = _uniform_k(lists, g)
    _require(k == 2 * d - 1, f"lists must have size 2d-1 = {2 * d - 1}, got {k}")
    order = mcs_elimination_order(g)
    _require(not isinstance(order, NotChordal), "graph is not chordal")
    omega = clique_number_chordal(g, order)
    _require(omega <= d + 1, f"clique number {omega} exceeds d+1 = {d + 1}")

    insertion = tuple(reversed(order.order))
    inserted: set[int] = set()
    columns: dict[int, tuple[int, ...]] = {}
    trace = PackerTrace(order=insertion)

    for v in insertion:
        earlier = sorted(u for u in g.neighbors(v) if u in inserted)
        images = [frozenset(columns[u][i] for u in earlier) for i in range(k)]
        h = build_extension_graph(images, lists[v], k)
        if h.min_degree() < d - 1:
            raise InternalAssertion(
                f"extension graph at {v} has degree {h.min_degree()} < d-1")
        m = perfect_matching_or_violator(h)
        if isinstance(m, HallViolator):
            raise InternalAssertion(
                f"no perfect matching at {v}: violator {m.lefts}")
        events: list[dict] = []
        if d >= 4:
            m = make_nonsingular_d4(h, m, d, events=events)
        columns[v] = tuple(m.pairs[i] for i in range(1, k + 1))
        record = {
            "vertex": v,
            "earlier": earlier,
            "min_degree": h.min_degree(),
            "column": list(columns[v]),
            "repairs": events,
            "bad_triples": [],
        }
        if d == 3 and len(earlier) >= 2:
            bad = _new_bad_triples(g, columns, v, earlier, k)
            if bad:
                clique, witness = bad[0]
                record["bad_triples"] = [
                    {"clique": list(c), "witness": list(w)} for c, w in bad
                ]
                if list(witness) not in [list(s) for s in find_singular_sets(h, m, 3)]:
                    raise InternalAssertion(
                        f"bad triple {clique} did not leave a singular witness")
                m = make_nonsingular_d3(h, m, witness, events=events)
                # unpack v and re-extend along the repaired matching
                columns[v] = tuple(m.pairs[i] for i in range(1, k + 1))
                record["column"] = list(columns[v])
                if _new_bad_triples(g, columns, v, earlier, k):
                    raise InternalAssertion(
                        f"bad triple survived the 5x5 repair at {v}")
        inserted.add(v)
        trace.records.append(record)
        if slow_checks:
            sub = Graph(g.n, [(a, b) for a, b in g.edges()
                              if a in inserted and b in inserted])
            partial = {u: columns[u] for u in inserted}
            for clique, witness in _all_bad_cliques_partial(sub, partial, d, k):
                raise InternalAssertion(
                    f"prefix invariant broken at {v}: bad clique {clique}")
    logger.debug("packed %d vertices with d=%d", g.n, d)
    return Packing(k, columns), trace


def _all_bad_cliques_partial(g: Graph, columns: dict, d: int, k: int):
    out = []
    for clique in enumerate_cliques(g, d):
        if not all(u in columns for u in clique):
            continue
        images = [frozenset(columns[u][i] for u in clique) for i in range(k)]
        witness = bad_clique_witness(images, d)
        if witness is not None:
            out.append((clique, witness))
    return out


def pack_degenerate_2d(g: Graph, lists: ListAssignment, d: int) -> Packing:
    """Greedy packing of a d-degenerate graph with lists of size k >= 2d.

    Inserting along the reverse degeneracy order leaves at most d earlier
    neighbors, so both parts of the extension graph keep degree at least
    k - d >= k/2 and a perfect matching always exists.
    """
    _require(d >= 0, "degeneracy bound must be nonnegative")
    k = _uniform_k(lists, g)
    _require(k >= 2 * d, f"lists must have size at least 2d = {2 * d}, got {k}")
    order, degeneracy = degeneracy_order(g)
    _require(degeneracy <= d, f"graph has degeneracy {degeneracy} > d = {d}")

    inserted: set[int] = set()
    columns: dict[int, tuple[int, ...]] = {}
    for v in reversed(order):
        earlier = sorted(u for u in g.neighbors(v) if u in inserted)
        images = [frozenset(columns[u][i] for u in earlier) for i in range(k)]
        h = build_extension_graph(images, lists[v], k)
        if h.min_degree() < k - d:
            raise InternalAssertion(
                f"extension graph at {v} has degree {h.min_degree()} < k-d")
        m = perfect_matching_or_violator(h)
        if isinstance(m, HallViolator):
            raise InternalAssertion(f"no perfect matching at {v} despite degree bound")
        columns[v] = tuple(m.pairs[i] for i in range(1, k + 1))
        inserted.add(v)
    return Packing(k, columns)


def pack_auto(g: Graph, lists: ListAssignment,
              budget: SearchBudget | None = None) -> Packing | Unknown:
    """Dispatch to the cheapest procedure that covers the instance.

    Chordal graphs with clique number at most (k+3)/2 and odd k >= 5 take
    the constructive route; any graph whose degeneracy is at most k/2
    takes the greedy route; everything else falls back to the exhaustive
    search under ``budget`` (default: 30 seconds).
    """
    k = _uniform_k(lists, g)
    order = mcs_elimination_order(g)
    if not isinstance(order, NotChordal) and k >= 5 and k % 2 == 1:
        d = (k + 1) // 2
        if clique_number_chordal(g, order) <= d + 1:
            packing, _ = pack_chordal_2dm1(g, lists, d)
            return packing
    _, degeneracy = degeneracy_order(g)
    if k >= 2 * degeneracy:
        return pack_degenerate_2d(g, lists, degeneracy)
    outcome = exists_packing(g, lists, k,
                             budget or SearchBudget(max_seconds=30.0))
    if outcome.status == "yes":
        return outcome.witness
    status = "refuted" if outcome.status == "no" else "timeout"
    return Unknown(status=status, stats={
        "nodes": outcome.stats.nodes,
        "max_depth": outcome.stats.max_depth,
        "elapsed": outcome.stats.elapsed,
    })
