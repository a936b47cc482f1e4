"""Lower-bound gadget constructions.

The core gadget on 2d+1 vertices pairs a (d+1)-clique with d extra
vertices glued to its first d members, under lists drawn from the palette
1..d+2 that each omit one palette color.  The amplified gadget then hangs
d+1 pendant vertices off every d-clique of the core; the result is a
d-tree that admits no (d+1)-packing under its lists.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InternalAssertion
from .graph_core import Graph, enumerate_cliques, graph_to_dot, is_d_tree
from .packing_core import ListAssignment


@dataclass
class GadgetInstance:
    graph: Graph
    lists: ListAssignment
    d: int
    names: dict[int, str]
    clique_index: dict[tuple[int, ...], tuple[int, ...]] = field(default_factory=dict)

    def name_of(self, v: int) -> str:
        return self.names.get(v, str(v))


def _palette_without(d: int, dropped: int) -> frozenset:
    return frozenset(c for c in range(1, d + 3) if c != dropped)


def build_core_gadget(d: int) -> GadgetInstance:
    """Core gadget: K_{d+1} on v1..v(d+1) plus w1..wd joined to v1..vd.

    Lists: v_i and w_i omit palette color i for i <= d; v_(d+1) omits d+1.
    """
    if d < 2:
        raise ValueError("the gadget construction needs d >= 2")
    # ids: v_i -> i-1 for i in 1..d+1, w_i -> d+i for i in 1..d
    edges = [(a, b) for a in range(d + 1) for b in range(a + 1, d + 1)]
    for i in range(1, d + 1):
        w = d + i
        for j in range(d):
            edges.append((j, w))
    lists = {}
    names = {}
    for i in range(1, d + 2):
        lists[i - 1] = _palette_without(d, i)
        names[i - 1] = f"v{i}"
    for i in range(1, d + 1):
        lists[d + i] = _palette_without(d, i)
        names[d + i] = f"w{i}"
    return GadgetInstance(
        graph=Graph(2 * d + 1, edges),
        lists=ListAssignment(lists),
        d=d,
        names=names,
    )


def build_amplified_gadget(d: int) -> GadgetInstance:
    """Amplified gadget: the core plus, for each of its d-cliques W, d+1
    new pendant vertices fully joined to W, the i-th omitting color i.

    The construction order makes the result a d-tree; this is asserted,
    and a failure is treated as fatal rather than silently ignored.
    """
    core = build_core_gadget(d)
    cliques = enumerate_cliques(core.graph, d)
    edges = list(core.graph.edges())
    lists = {v: core.lists[v] for v in core.lists.vertices()}
    names = dict(core.names)
    clique_index: dict[tuple[int, ...], tuple[int, ...]] = {}
    next_id = core.graph.n
    for clique in cliques:
        members = ",".join(core.names[u] for u in clique)
        attached = []
        for i in range(1, d + 2):
            x = next_id
            next_id += 1
            for u in clique:
                edges.append((u, x))
            lists[x] = _palette_without(d, i)
            names[x] = f"x{i}({members})"
            attached.append(x)
        clique_index[clique] = tuple(attached)
    graph = Graph(next_id, edges)
    if not is_d_tree(graph, d):
        raise InternalAssertion("amplified gadget failed the d-tree check")
    return GadgetInstance(
        graph=graph,
        lists=ListAssignment(lists),
        d=d,
        names=names,
        clique_index=clique_index,
    )


def gadget_to_dot(instance: GadgetInstance) -> str:
    """DOT rendering with distinct styling per vertex family."""
    styles = {}
    for v, name in instance.names.items():
        if name.startswith("v"):
            styles[v] = "shape=doublecircle, style=filled, fillcolor=lightblue"
        elif name.startswith("w"):
            styles[v] = "shape=circle, style=filled, fillcolor=lightyellow"
        else:
            styles[v] = "shape=point"
    return graph_to_dot(instance.graph, names=instance.names, styles=styles)
