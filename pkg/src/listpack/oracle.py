"""Exact decision procedures by complete backtracking search.

Packings are searched with one variable per vertex whose domain is the
set of injective column tuples over the vertex's list; the permutation
constraint is what makes the problem hard, and vertex-level domains let
forward checking prune clique neighborhoods aggressively.  Search order
is minimum-remaining-values with lowest-id ties and lexicographic value
order, so outcomes are reproducible bit for bit.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from .errors import OracleTimeout, ScaleRefused
from .gadget import build_core_gadget
from .graph_core import Graph, enumerate_cliques
from .packing_core import (
    ListAssignment,
    Packing,
    complement_multigraph,
    multigraph_has_cycle,
)


@dataclass(frozen=True)
class SearchBudget:
    """Optional node and wall-clock limits for a search."""

    max_nodes: int | None = None
    max_seconds: float | None = None

    def __post_init__(self):
        if self.max_nodes is not None and self.max_nodes <= 0:
            raise ValueError("node limit must be positive")
        if self.max_seconds is not None and self.max_seconds <= 0:
            raise ValueError("time limit must be positive")


@dataclass
class SearchStats:
    nodes: int = 0
    max_depth: int = 0
    elapsed: float = 0.0


@dataclass
class SearchOutcome:
    status: str  # "yes" | "no" | "timeout"
    witness: object | None = None
    stats: SearchStats = field(default_factory=SearchStats)


class _Meter:
    """Budget bookkeeping shared by the search loops."""

    __slots__ = ("max_nodes", "deadline", "stats")

    def __init__(self, budget: SearchBudget | None):
        self.max_nodes = budget.max_nodes if budget else None
        self.deadline = None
        if budget and budget.max_seconds is not None:
            self.deadline = time.monotonic() + budget.max_seconds
        self.stats = SearchStats()

    def spend(self, depth: int) -> bool:
        s = self.stats
        s.nodes += 1
        if depth > s.max_depth:
            s.max_depth = depth
        if self.max_nodes is not None and s.nodes > self.max_nodes:
            return False
        if self.deadline is not None and (s.nodes & 0xFF) == 0 \
                and time.monotonic() > self.deadline:
            return False
        return True


def _column_domain(colors: frozenset, k: int) -> list[tuple[int, ...]]:
    return list(itertools.permutations(sorted(colors), k))


def _search_packings(g: Graph, lists: ListAssignment, k: int,
                     budget: SearchBudget | None, on_solution) -> tuple[str, SearchStats]:
    """Complete backtracking over per-vertex column domains.

    ``on_solution`` receives each complete assignment (dict vertex ->
    column) and returns True to keep enumerating.  The returned status is
    "done" (space exhausted), "stopped" (callback ended the run), or
    "timeout".  Lists may be larger than k; columns are then injective
    k-tuples instead of full permutations.
    """
    verts = list(g.vertices())
    for v in verts:
        if len(lists[v]) < k:
            raise ValueError(f"vertex {v} has fewer than k = {k} colors")
    domains = {v: _column_domain(lists[v], k) for v in verts}
    assigned: dict[int, tuple[int, ...]] = {}
    meter = _Meter(budget)
    idx = range(k)

    def expand() -> str:
        if len(assigned) == g.n:
            return "done" if on_solution(dict(assigned)) else "stopped"
        best = None
        best_size = None
        for u in verts:
            if u not in assigned:
                size = len(domains[u])
                if best_size is None or size < best_size:
                    best, best_size = u, size
        v = best
        for col in domains[v]:
            if not meter.spend(len(assigned) + 1):
                return "timeout"
            assigned[v] = col
            pruned = []
            dead = False
            for u in g.neighbors(v):
                if u in assigned:
                    continue
                old = domains[u]
                new = [c for c in old if all(c[i] != col[i] for i in idx)]
                if len(new) != len(old):
                    pruned.append((u, old))
                    domains[u] = new
                    if not new:
                        dead = True
                        break
            if not dead:
                res = expand()
                if res != "done":
                    for u, old in pruned:
                        domains[u] = old
                    del assigned[v]
                    return res
            for u, old in pruned:
                domains[u] = old
            del assigned[v]
        return "done"

    t0 = time.monotonic()
    status = "done" if any(not d for d in domains.values()) else expand()
    meter.stats.elapsed = time.monotonic() - t0
    return status, meter.stats


def exists_packing(g: Graph, lists: ListAssignment, k: int,
                   budget: SearchBudget | None = None) -> SearchOutcome:
    """Decide whether (g, lists) admits a packing into k disjoint colorings.

    Lists must all have size exactly k.  Status "no" means the whole
    search space was refuted; the first witness in lexicographic search
    order is returned on "yes".
    """
    for v in g.vertices():
        if len(lists[v]) != k:
            raise ValueError(f"vertex {v} has a list of size {len(lists[v])}, expected {k}")
    found: list[dict] = []

    def take_first(sol: dict) -> bool:
        found.append(sol)
        return False

    status, stats = _search_packings(g, lists, k, budget, take_first)
    if found:
        return SearchOutcome(status="yes", witness=Packing(k, found[0]), stats=stats)
    if status == "timeout":
        return SearchOutcome(status="timeout", stats=stats)
    return SearchOutcome(status="no", stats=stats)


def exists_list_coloring(g: Graph, lists: ListAssignment,
                         budget: SearchBudget | None = None) -> SearchOutcome:
    """Decide whether g has a proper coloring choosing each color from its list."""
    verts = list(g.vertices())
    domains = {v: sorted(lists[v]) for v in verts}
    assigned: dict[int, int] = {}
    meter = _Meter(budget)
    found: list[dict] = []

    def expand() -> str:
        if len(assigned) == g.n:
            found.append(dict(assigned))
            return "stopped"
        best = None
        best_size = None
        for u in verts:
            if u not in assigned:
                size = len(domains[u])
                if best_size is None or size < best_size:
                    best, best_size = u, size
        v = best
        for color in domains[v]:
            if not meter.spend(len(assigned) + 1):
                return "timeout"
            assigned[v] = color
            pruned = []
            dead = False
            for u in g.neighbors(v):
                if u in assigned:
                    continue
                old = domains[u]
                if color in old:
                    new = [c for c in old if c != color]
                    pruned.append((u, old))
                    domains[u] = new
                    if not new:
                        dead = True
                        break
            if not dead:
                res = expand()
                if res != "done":
                    for u, old in pruned:
                        domains[u] = old
                    del assigned[v]
                    return res
            for u, old in pruned:
                domains[u] = old
            del assigned[v]
        return "done"

    t0 = time.monotonic()
    status = "done" if any(not d for d in domains.values()) else expand()
    meter.stats.elapsed = time.monotonic() - t0
    if found:
        return SearchOutcome(status="yes", witness=found[0], stats=meter.stats)
    if status == "timeout":
        return SearchOutcome(status="timeout", stats=meter.stats)
    return SearchOutcome(status="no", stats=meter.stats)


# --- exact packing number at desk scale --------------------------------------

_MAX_N = 8
_MAX_K = 4
_MAX_POOL = 32


def canonical_assignments(n: int, k: int, pool_size: int):
    """All k-assignments of n vertices up to renaming of colors.

    Colors are introduced in first-use order, so every class of
    assignments equivalent under a color bijection has exactly one
    representative: each vertex's list is a subset of the colors used so
    far plus a run of consecutive fresh ones.
    """
    def rec(v: int, used: int, acc: list):
        if v == n:
            yield {i: acc[i] for i in range(n)}
            return
        for fresh in range(k + 1):
            if used + fresh > pool_size:
                break
            for base in itertools.combinations(range(1, used + 1), k - fresh):
                acc.append(base + tuple(range(used + 1, used + 1 + fresh)))
                yield from rec(v + 1, used + fresh, acc)
                acc.pop()

    yield from rec(0, 0, [])


def _color_canonical_form(lists: tuple) -> tuple:
    relabel: dict[int, int] = {}
    out = []
    for lst in lists:
        row = []
        for c in sorted(lst):
            if c not in relabel:
                relabel[c] = len(relabel) + 1
            row.append(relabel[c])
        out.append(tuple(sorted(row)))
    return tuple(out)


def _automorphisms(g: Graph) -> list[tuple[int, ...]]:
    autos = []
    for perm in itertools.permutations(range(g.n)):
        if all(g.has_edge(perm[u], perm[v]) for u, v in g.edges()):
            autos.append(perm)
    return autos


def packing_number_small(g: Graph, kmax: int, pool=None,
                         budget: SearchBudget | None = None,
                         isomorphism_filter: bool = False) -> dict:
    """Per-k verdicts: is every k-assignment from the pool packable?

    The sweep enumerates assignments up to global color renaming; a
    falsifying assignment (in pool colors) is reported for the first
    failing k.  The default pool has n*k colors per k, a crude upper
    bound on how many colors can matter; pass an explicit pool to
    override.  The optional isomorphism filter additionally drops
    assignments equivalent under graph automorphisms (n <= 5 only).
    """
    if g.n > _MAX_N:
        raise ScaleRefused(f"packing-number sweep handles n <= {_MAX_N}, got n = {g.n}")
    if kmax > _MAX_K or kmax < 1:
        raise ScaleRefused(f"packing-number sweep handles 1 <= kmax <= {_MAX_K}")
    if pool is not None:
        pool = sorted(set(pool))
        if len(pool) > _MAX_POOL:
            raise ScaleRefused(f"pool size is capped at {_MAX_POOL}")
    if isomorphism_filter and g.n > 5:
        raise ScaleRefused("the isomorphism filter is available for n <= 5 only")

    autos = _automorphisms(g) if isomorphism_filter else None
    verdicts: dict[int, dict] = {}
    for k in range(1, kmax + 1):
        pool_k = pool if pool is not None else list(range(1, g.n * k + 1))
        if len(pool_k) < k:
            raise ValueError(f"pool has {len(pool_k)} colors, need at least k = {k}")
        packable = True
        counterexample = None
        checked = 0
        for assignment in canonical_assignments(g.n, k, len(pool_k)):
            if autos is not None:
                rows = tuple(assignment[v] for v in range(g.n))
                canon = min(
                    _color_canonical_form(tuple(rows[p.index(v)] for v in range(g.n)))
                    for p in autos
                )
                if canon != _color_canonical_form(rows):
                    continue
            checked += 1
            concrete = {v: frozenset(pool_k[c - 1] for c in assignment[v])
                        for v in assignment}
            outcome = exists_packing(g, ListAssignment(concrete), k, budget)
            if outcome.status == "timeout":
                raise OracleTimeout(f"sweep timed out at k={k} after {checked} assignments")
            if outcome.status == "no":
                packable = False
                counterexample = {v: sorted(concrete[v]) for v in concrete}
                break
        verdicts[k] = {
            "packable": packable,
            "counterexample": counterexample,
            "assignments_checked": checked,
        }
    return {
        "metadata": {
            "n": g.n,
            "pool_policy": "explicit" if pool is not None else "default n*k per k",
            "pool": pool,
            "isomorphism_filter": bool(isomorphism_filter),
        },
        "verdicts": verdicts,
    }


# --- gadget verification ------------------------------------------------------

def every_packing_has_cyclic_clique(g: Graph, lists: ListAssignment, d: int,
                                    budget: SearchBudget | None = None) -> bool:
    """True iff every (d+1)-packing of (g, lists) leaves some d-clique whose
    complement multigraph contains a cycle.  Enumerates the packings
    exhaustively; lists may be larger than d+1 (columns then pick injective
    tuples), which the modified-gadget sanity checks rely on."""
    k = d + 1
    cliques = enumerate_cliques(g, d)
    verdict = {"holds": True}

    def check(sol: dict) -> bool:
        p = Packing(k, sol)
        for clique in cliques:
            if multigraph_has_cycle(complement_multigraph(p, clique, d)):
                return True
        verdict["holds"] = False
        return False

    status, stats = _search_packings(g, lists, k, budget, check)
    if status == "timeout":
        raise OracleTimeout(f"gadget verification timed out after {stats.nodes} nodes")
    return verdict["holds"]


def verify_lemma7_core(d: int, budget: SearchBudget | None = None) -> bool:
    """Exhaustively check the core gadget: every (d+1)-packing under its
    lists yields a d-clique with a cyclic complement multigraph.

    d = 2 is the mandatory desk scale; d = 3 is supported but long-running.
    """
    if d not in (2, 3):
        raise ScaleRefused("core-gadget verification is supported for d in {2, 3}")
    core = build_core_gadget(d)
    return every_packing_has_cyclic_clique(core.graph, core.lists, d, budget)
