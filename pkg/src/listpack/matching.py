"""Bipartite extension graphs between coloring indices and candidate colors,
perfect matchings with Hall-violator extraction, d-singular subsets, and the
two matching-repair procedures that keep the constructive packer from ever
creating a bad clique.

Left vertices are the coloring indices 1..k; right vertices are colors.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

from .errors import InternalAssertion, PremiseViolated, ScaleRefused, LimitExceeded

logger = logging.getLogger(__name__)


class ExtensionGraph:
    """Bipartite graph: left part = indices 1..k, right part = k colors.

    Adjacency is kept both as color sets (public queries) and as bitmasks
    over the sorted color list (hot loops in the singular-set scan).
    """

    __slots__ = ("k", "right_colors", "_pos", "_adj_mask")

    def __init__(self, k: int, adjacency, right_colors=None) -> None:
        if k < 1:
            raise ValueError("k must be positive")
        seen = set()
        for i in range(1, k + 1):
            seen |= set(adjacency.get(i, ()))
        if right_colors is None:
            right = seen
        else:
            right = set(right_colors)
            if not seen <= right:
                raise ValueError("adjacency mentions colors outside the right part")
        if len(right) != k:
            raise ValueError(f"expected exactly {k} right colors, got {len(right)}")
        self.k = k
        self.right_colors = tuple(sorted(right))
        self._pos = {c: j for j, c in enumerate(self.right_colors)}
        masks = {}
        for i in range(1, k + 1):
            m = 0
            for c in adjacency.get(i, ()):
                m |= 1 << self._pos[c]
            masks[i] = m
        self._adj_mask = masks

    def lefts(self) -> range:
        return range(1, self.k + 1)

    def neighbors(self, i: int) -> frozenset:
        m = self._adj_mask[i]
        return frozenset(c for j, c in enumerate(self.right_colors) if m >> j & 1)

    def right_neighbors(self, c: int) -> frozenset:
        bit = 1 << self._pos[c]
        return frozenset(i for i in self.lefts() if self._adj_mask[i] & bit)

    def has_edge(self, i: int, c: int) -> bool:
        pos = self._pos.get(c)
        return pos is not None and bool(self._adj_mask[i] >> pos & 1)

    def degree(self, i: int) -> int:
        return self._adj_mask[i].bit_count()

    def right_degree(self, c: int) -> int:
        bit = 1 << self._pos[c]
        return sum(1 for i in self.lefts() if self._adj_mask[i] & bit)

    def min_degree(self) -> int:
        left = min(self.degree(i) for i in self.lefts())
        right = min(self.right_degree(c) for c in self.right_colors)
        return min(left, right)

    def __repr__(self) -> str:
        return f"ExtensionGraph(k={self.k})"


def build_extension_graph(images, lv, k: int) -> ExtensionGraph:
    """Extension graph for one insertion step.

    ``images`` lists, per coloring index, the colors already used on the
    new vertex's neighborhood; index i is adjacent to color c exactly when
    c is not among those colors.
    """
    lv = frozenset(lv)
    if len(lv) != k:
        raise ValueError(f"the color part must have exactly k = {k} colors")
    if len(images) != k:
        raise ValueError(f"expected {k} image sets, got {len(images)}")
    adjacency = {}
    for i in range(1, k + 1):
        used = frozenset(images[i - 1])
        adjacency[i] = lv - used
    return ExtensionGraph(k, adjacency, right_colors=lv)


class Matching:
    """Partial or perfect matching: injective map left index -> color."""

    __slots__ = ("pairs",)

    def __init__(self, pairs) -> None:
        pairs = dict(pairs)
        vals = list(pairs.values())
        if len(set(vals)) != len(vals):
            raise ValueError("matching maps two indices to one color")
        self.pairs = pairs

    def color_of(self, i: int) -> int:
        return self.pairs[i]

    def is_perfect(self, k: int) -> bool:
        return len(self.pairs) == k

    def matched_colors(self, lefts) -> frozenset:
        return frozenset(self.pairs[i] for i in lefts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matching):
            return NotImplemented
        return self.pairs == other.pairs

    def __repr__(self) -> str:
        inner = ", ".join(f"{i}->{self.pairs[i]}" for i in sorted(self.pairs))
        return f"Matching({inner})"


@dataclass(frozen=True)
class HallViolator:
    """Left set S with |N(S)| < |S|, certifying no perfect matching exists."""

    lefts: tuple[int, ...]
    neighborhood: tuple[int, ...]


def _check_matching(h: ExtensionGraph, m: Matching) -> None:
    for i, c in m.pairs.items():
        if not h.has_edge(i, c):
            raise ValueError(f"matching pair ({i}, {c}) is not an edge")


def perfect_matching_or_violator(h: ExtensionGraph) -> Matching | HallViolator:
    """Augmenting-path search for a perfect matching.

    Left vertices are processed in increasing order and colors tried in
    increasing order, so the result is deterministic; on a complete
    bipartite graph this yields the identity pairing.  When augmentation
    fails, the set of left vertices reachable by alternating paths from
    the stuck vertex is a Hall violator and is returned instead.
    """
    match_left: dict[int, int] = {}
    match_right: dict[int, int] = {}

    def augment(i: int, seen: set) -> bool:
        nbrs = sorted(h.neighbors(i))
        # free colors first: keeps already-matched pairs in place, so a
        # complete bipartite graph yields the identity pairing
        ordered = [c for c in nbrs if c not in match_right] \
            + [c for c in nbrs if c in match_right]
        for c in ordered:
            if c in seen:
                continue
            seen.add(c)
            owner = match_right.get(c)
            if owner is None or augment(owner, seen):
                match_left[i] = c
                match_right[c] = i
                return True
        return False

    for s in h.lefts():
        if not augment(s, set()):
            lefts = {s}
            colors: set[int] = set()
            while True:
                reach = set()
                for i in lefts:
                    reach |= h.neighbors(i)
                new_colors = reach - colors
                if not new_colors:
                    break
                colors |= new_colors
                for c in new_colors:
                    if c in match_right:
                        lefts.add(match_right[c])
            return HallViolator(lefts=tuple(sorted(lefts)), neighborhood=tuple(sorted(colors)))
    return Matching(dict(match_left))


def find_singular_sets(h: ExtensionGraph, m: Matching, d: int) -> list[tuple[int, ...]]:
    """All size-d left subsets whose only edges into their matched colors
    are the matching edges themselves.

    Plain enumeration of the C(k, d) subsets; for k = 2d-1 <= 17 this is
    at most a few thousand bitmask checks.
    """
    if not m.is_perfect(h.k):
        raise ValueError("singular-set scan needs a perfect matching")
    pos = h._pos
    masks = h._adj_mask
    mbit = {i: 1 << pos[m.pairs[i]] for i in h.lefts()}
    out = []
    for sub in itertools.combinations(range(1, h.k + 1), d):
        ymask = 0
        for i in sub:
            ymask |= mbit[i]
        for i in sub:
            if masks[i] & ymask != mbit[i]:
                break
        else:
            out.append(sub)
    return out


def enumerate_perfect_matchings(h: ExtensionGraph, limit: int | None = None) -> list[Matching]:
    """All perfect matchings of h in lexicographic order.

    Enforced for k <= 9 only; raises LimitExceeded as soon as more than
    ``limit`` matchings exist rather than silently truncating.
    """
    if h.k > 9:
        raise ScaleRefused(f"perfect-matching enumeration is limited to k <= 9, got k = {h.k}")
    out: list[Matching] = []
    colors = h.right_colors
    taken = 0

    def bt(i: int, used: int, acc: list[tuple[int, int]]) -> None:
        nonlocal taken
        if i > h.k:
            if limit is not None and taken >= limit:
                raise LimitExceeded(f"more than {limit} perfect matchings")
            taken += 1
            out.append(Matching(dict(acc)))
            return
        avail = h._adj_mask[i] & ~used
        while avail:
            low = avail & -avail
            c = colors[low.bit_length() - 1]
            acc.append((i, c))
            bt(i + 1, used | low, acc)
            acc.pop()
            avail ^= low

    bt(1, 0, [])
    return out


def _swap_along_four_cycle(m: Matching, x: int, xp: int) -> Matching:
    pairs = dict(m.pairs)
    pairs[x], pairs[xp] = pairs[xp], pairs[x]
    return Matching(pairs)


def _four_cycle_partner(h: ExtensionGraph, m: Matching, x: int, exclude) -> int | None:
    """Smallest left vertex xp outside ``exclude`` such that swapping the
    matched colors of x and xp stays inside the edge set."""
    y = m.pairs[x]
    for xp in h.lefts():
        if xp in exclude:
            continue
        yp = m.pairs[xp]
        if h.has_edge(x, yp) and h.has_edge(xp, y):
            return xp
    return None


def _relabeled_crossing_matching(h: ExtensionGraph, m: Matching,
                                 first: tuple[int, ...], second: tuple[int, ...],
                                 d: int) -> Matching:
    """Replacement matching built from two distinct d-singular sets.

    Two distinct singular sets overlap in exactly d-1 indices, and the
    degree bound forces the overlap to be completely joined to the colors
    matched outside both sets (and vice versa).  Crossing the overlap onto
    those outside colors therefore stays inside the edge set and breaks
    every singular set at once.
    """
    fs, ss = set(first), set(second)
    inter = sorted(fs & ss)
    if len(inter) != d - 1 or len(fs | ss) != d + 1:
        raise InternalAssertion("distinct singular sets must overlap in exactly d-1 indices")
    x1 = (fs - ss).pop()
    xd1 = (ss - fs).pop()
    tail = sorted(set(h.lefts()) - fs - ss)
    label = [x1] + inter + [xd1] + tail  # canonical positions 1..2d-1
    y = {pos: m.pairs[v] for pos, v in enumerate(label, start=1)}
    pairs = {x1: y[1], label[1]: y[2], xd1: y[d + 1]}
    for pos in range(3, d + 1):
        pairs[label[pos - 1]] = y[pos + d - 1]
    for pos in range(d + 2, 2 * d):
        pairs[label[pos - 1]] = y[pos - d + 1]
    out = Matching(pairs)
    try:
        _check_matching(h, out)
    except ValueError as exc:
        raise InternalAssertion(f"crossing matching left the edge set: {exc}") from exc
    if not out.is_perfect(h.k):
        raise InternalAssertion("crossing matching is not perfect")
    return out


def make_nonsingular_d4(h: ExtensionGraph, m: Matching, d: int,
                        events: list | None = None) -> Matching:
    """Perfect matching of h with no d-singular left subset, for d >= 4.

    Requires both parts of size 2d-1 and minimum degree at least d-1.
    If two or more singular sets exist, a single crossing matching removes
    them all.  With a unique singular set, candidates are produced by
    swapping along an alternating 4-cycle at each of the set's first three
    matched edges in turn; each candidate is re-verified and the first
    nonsingular one is returned.  The degree bounds guarantee one of the
    candidates works, so exhausting them signals an implementation bug.
    """
    if d < 4:
        raise PremiseViolated(f"this repair needs d >= 4, got d = {d}")
    if h.k != 2 * d - 1:
        raise PremiseViolated(f"expected parts of size 2d-1 = {2 * d - 1}, got {h.k}")
    if h.min_degree() < d - 1:
        raise PremiseViolated(f"minimum degree {h.min_degree()} is below d-1 = {d - 1}")
    if not m.is_perfect(h.k):
        raise PremiseViolated("matching must be perfect")
    _check_matching(h, m)

    singular = find_singular_sets(h, m, d)
    if not singular:
        return m
    if len(singular) >= 2:
        out = _relabeled_crossing_matching(h, m, singular[0], singular[1], d)
        if find_singular_sets(h, out, d):
            raise InternalAssertion("crossing matching is still singular")
        if events is not None:
            events.append({"repair": "crossing", "singular": [list(s) for s in singular[:2]]})
        logger.debug("repair via crossing matching over %s and %s", singular[0], singular[1])
        return out

    base = sorted(singular[0])
    for attempt, x in enumerate(base[:3], start=1):
        partner = _four_cycle_partner(h, m, x, exclude=set(base))
        if partner is None:
            raise InternalAssertion(f"no alternating 4-cycle at matched edge of index {x}")
        candidate = _swap_along_four_cycle(m, x, partner)
        if events is not None:
            events.append({"repair": f"swap{attempt}", "at": x, "partner": partner})
        if not find_singular_sets(h, candidate, d):
            logger.debug("repair via 4-cycle swap #%d at %d with %d", attempt, x, partner)
            return candidate
    raise InternalAssertion("all three 4-cycle swap candidates remained singular")


_CASE_TABLE = (
    # (required edges as (x-slot, y-slot) pairs, replacement as slot pairs)
    (((4, 2), (4, 3)), ((1, 1), (2, 4), (3, 3), (4, 2), (5, 5))),
    (((4, 2), (5, 3)), ((1, 1), (2, 4), (3, 3), (4, 2), (5, 5))),
    (((4, 3), (5, 2)), ((1, 4), (2, 2), (3, 3), (4, 1), (5, 5))),
    (((5, 2), (5, 3)), ((1, 1), (2, 2), (3, 5), (4, 4), (5, 3))),
)


def _canonical_5x5_labeling(h: ExtensionGraph, m: Matching, xprime: tuple[int, ...]):
    """Left slots 1..5 for the 5x5 repair, or None.

    Slot 1 must see both colors outside the matched trio, slots 2 and 3
    must see the colors matched to slots 4 and 5 respectively, and slot 4
    must see slot 1's matched color.  Candidates are tried in ascending
    order so an already-canonical instance maps to itself.
    """
    outside = sorted(set(h.right_colors) - m.matched_colors(xprime))
    others = sorted(set(h.lefts()) - set(xprime))
    for x1 in sorted(xprime):
        if not all(h.has_edge(x1, c) for c in outside):
            continue
        rest = sorted(set(xprime) - {x1})
        for x4, x5 in ((others[0], others[1]), (others[1], others[0])):
            if not h.has_edge(x4, m.pairs[x1]):
                continue
            for x2, x3 in ((rest[0], rest[1]), (rest[1], rest[0])):
                if h.has_edge(x2, m.pairs[x4]) and h.has_edge(x3, m.pairs[x5]):
                    return (x1, x2, x3, x4, x5)
    return None


def make_nonsingular_d3(h: ExtensionGraph, m: Matching, xprime,
                        events: list | None = None) -> Matching:
    """Perfect matching of a 5x5 extension graph with no 3-singular subset.

    ``xprime`` is a 3-singular left triple under m.  The premises are the
    5x5 shape, minimum degree 2, and that every two triple members jointly
    see both colors outside the triple's matched set; the structure is then
    rigid enough that, after canonical relabeling, one of four explicit
    replacement matchings works.  The chosen replacement is verified before
    being returned.
    """
    if h.k != 5:
        raise PremiseViolated(f"this repair is specific to 5x5 graphs, got k = {h.k}")
    if h.min_degree() < 2:
        raise PremiseViolated(f"minimum degree {h.min_degree()} is below 2")
    if not m.is_perfect(5):
        raise PremiseViolated("matching must be perfect")
    _check_matching(h, m)
    xprime = tuple(sorted(xprime))
    if len(xprime) != 3:
        raise PremiseViolated("xprime must be a left triple")
    if list(xprime) not in [list(s) for s in find_singular_sets(h, m, 3)]:
        raise PremiseViolated(f"{xprime} is not 3-singular under the given matching")
    matched = m.matched_colors(xprime)
    for a, b in itertools.combinations(xprime, 2):
        joint = (h.neighbors(a) | h.neighbors(b)) - matched
        if len(joint) != 2:
            raise PremiseViolated(
                f"indices {a},{b} must jointly see exactly 2 colors outside "
                f"the matched trio, saw {len(joint)}")

    slots = _canonical_5x5_labeling(h, m, xprime)
    if slots is None:
        raise InternalAssertion("no canonical relabeling exists despite valid premises")
    x_of = {slot: v for slot, v in enumerate(slots, start=1)}
    y_of = {slot: m.pairs[v] for slot, v in x_of.items()}
    logger.debug("canonical slots %s, colors %s", x_of, y_of)

    for case_no, (required, replacement) in enumerate(_CASE_TABLE, start=1):
        if all(h.has_edge(x_of[xs], y_of[ys]) for xs, ys in required):
            pairs = {x_of[xs]: y_of[ys] for xs, ys in replacement}
            out = Matching(pairs)
            try:
                _check_matching(h, out)
            except ValueError as exc:
                raise InternalAssertion(f"case {case_no} replacement left the edge set: {exc}")
            if find_singular_sets(h, out, 3):
                raise InternalAssertion(f"case {case_no} replacement is still singular")
            if events is not None:
                events.append({"repair": "five-by-five", "case": case_no,
                               "slots": {s: x_of[s] for s in x_of}})
            return out
    # Degree 2 on the right forces each matched color of the triple to see
    # one of the two outside indices, so some case always applies.
    raise InternalAssertion("no replacement case applies despite valid premises")


def matching_to_dot(h: ExtensionGraph, m: Matching | None = None) -> str:
    """Debug rendering: left/right bipartition, matching edges bold."""
    chosen = set(m.pairs.items()) if m is not None else set()
    lines = ["graph H {", "  rankdir=LR;"]
    for i in h.lefts():
        lines.append(f'  L{i} [label="{i}", shape=box];')
    for c in h.right_colors:
        lines.append(f'  R{c} [label="{c}", shape=circle];')
    for i in h.lefts():
        for c in sorted(h.neighbors(i)):
            style = " [style=bold]" if (i, c) in chosen else ""
            lines.append(f"  L{i} -- R{c}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"
