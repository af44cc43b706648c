"""Out-/in-branchings, arc-disjoint packings, and branching-plus-path search.

A good (u,v)-pair is an out-branching rooted at u and an in-branching
rooted at v sharing no arc.  Everything here returns explicit arc sets so
callers and tests can re-verify results independently.
"""

from __future__ import annotations

from dataclasses import dataclass

from .digraph import (
    Arc,
    CutWitness,
    Digraph,
    bits,
    coreach_mask,
    reach_mask,
    unit_flow,
)
from .errors import InternalInconsistency, InvalidInput, ResourceExceeded


@dataclass(frozen=True)
class Branching:
    """A spanning out- or in-tree given by its arc set."""

    root: int
    arcs: tuple[Arc, ...]
    kind: str  # "out" or "in"

    def __post_init__(self):
        if self.kind not in ("out", "in"):
            raise InvalidInput(f"bad branching kind {self.kind!r}")
        object.__setattr__(self, "arcs", tuple(sorted(self.arcs)))

    @property
    def arc_set(self) -> frozenset[Arc]:
        return frozenset(self.arcs)

    def vertices(self) -> int:
        m = 1 << self.root
        for a, b in self.arcs:
            m |= 1 << a | 1 << b
        return m


@dataclass(frozen=True)
class BranchingPair:
    out_branching: Branching
    in_branching: Branching

    @property
    def shared_arcs(self) -> frozenset[Arc]:
        return self.out_branching.arc_set & self.in_branching.arc_set

    @property
    def arc_disjoint(self) -> bool:
        return not self.shared_arcs


def branching_violation(
    g: Digraph, branching: Branching, span: int | None = None
) -> str | None:
    """None if the branching is a valid spanning tree of g, else a reason."""
    span = g.full_mask if span is None else span
    if not span >> branching.root & 1:
        return f"root {branching.root} outside the spanned set"
    seen: dict[int, Arc] = {}
    for a, b in branching.arcs:
        if not g.has_arc(a, b):
            return f"arc ({a},{b}) not in the digraph"
        if not (span >> a & 1 and span >> b & 1):
            return f"arc ({a},{b}) leaves the spanned set"
        child = b if branching.kind == "out" else a
        if child == branching.root:
            return f"root {branching.root} has a parent arc"
        if child in seen:
            return f"vertex {child} has two parent arcs"
        seen[child] = (a, b)
    missing = [v for v in bits(span) if v != branching.root and v not in seen]
    if missing:
        return f"vertices {missing} not covered"
    sub = Digraph(g.n, branching.arcs)
    if branching.kind == "out":
        reached = reach_mask(sub, 1 << branching.root)
    else:
        reached = coreach_mask(sub, 1 << branching.root)
    if reached != span:
        return "parent arcs do not form a tree reaching the root"
    return None


def good_pair_violation(
    g: Digraph, u: int, v: int, pair: BranchingPair, span: int | None = None
) -> str | None:
    if pair.out_branching.kind != "out" or pair.in_branching.kind != "in":
        return "pair components have wrong kinds"
    if pair.out_branching.root != u:
        return f"out-branching rooted at {pair.out_branching.root}, expected {u}"
    if pair.in_branching.root != v:
        return f"in-branching rooted at {pair.in_branching.root}, expected {v}"
    reason = branching_violation(g, pair.out_branching, span)
    if reason:
        return f"out-branching: {reason}"
    reason = branching_violation(g, pair.in_branching, span)
    if reason:
        return f"in-branching: {reason}"
    if not pair.arc_disjoint:
        return f"shared arcs {sorted(pair.shared_arcs)}"
    return None


def verify_good_pair(
    g: Digraph, u: int, v: int, pair: BranchingPair, span: int | None = None
) -> bool:
    return good_pair_violation(g, u, v, pair, span) is None


def find_branching(
    g: Digraph,
    root: int,
    kind: str = "out",
    within: int | None = None,
    banned=None,
) -> Branching | None:
    """BFS spanning branching, or None when the root does not cover `within`."""
    within = g.full_mask if within is None else within
    banned = banned or ()
    rows = g.out_masks if kind == "out" else g.in_masks
    seen = 1 << root
    frontier = [root]
    arcs: list[Arc] = []
    while frontier:
        nxt = []
        for x in frontier:
            for y in bits(rows[x] & within & ~seen):
                arc = (x, y) if kind == "out" else (y, x)
                if arc in banned:
                    continue
                seen |= 1 << y
                arcs.append(arc)
                nxt.append(y)
        frontier = nxt
    if seen != within:
        return None
    return Branching(root=root, arcs=tuple(arcs), kind=kind)


def _edmonds_grow(g: Digraph, s: int, k: int) -> list[Branching]:
    """Sequential invariant-guarded growth; assumes feasibility was checked."""
    n = g.n
    full = g.full_mask
    used: set[Arc] = set()
    trees: list[Branching] = []
    for j in range(k):
        remaining = k - j - 1
        tree_mask = 1 << s
        tree_arcs: list[Arc] = []
        while tree_mask != full:
            picked = None
            for x in bits(tree_mask):
                for y in bits(g.out_masks[x] & ~tree_mask):
                    if (x, y) in used:
                        continue
                    if _edmonds_safe(g, s, used, tree_mask, (x, y), remaining):
                        picked = (x, y)
                        break
                if picked:
                    break
            if picked is None:
                raise InternalInconsistency(
                    f"branching packing stuck at tree {j + 1} of {k}"
                )
            used.add(picked)
            tree_arcs.append(picked)
            tree_mask |= 1 << picked[1]
        trees.append(Branching(root=s, arcs=tuple(tree_arcs), kind="out"))
    return trees


def _edmonds_safe(
    g: Digraph, s: int, used: set[Arc], tree_mask: int, arc: Arc, remaining: int
) -> bool:
    """Does adding `arc` keep enough in-arcs for all unfinished demands?

    Demand of a set X not containing s: one arc per future tree, plus one
    when the current partial tree has not reached X yet.
    """
    banned = used | {arc}
    new_tree = tree_mask | 1 << arc[1]
    rest = g.full_mask & ~new_tree
    # sets disjoint from the tree need remaining + 1 entering arcs
    for t in bits(rest):
        value, _ = unit_flow(g, new_tree, t, banned=banned, cap=remaining + 1)
        if value < remaining + 1:
            return False
    # sets meeting the tree (but missing s) need `remaining` entering arcs
    if remaining:
        for w in bits(new_tree & ~(1 << s)):
            value, _ = unit_flow(g, 1 << s, w, banned=banned, cap=remaining)
            if value < remaining:
                return False
    return True


def edmonds_branchings(g: Digraph, s: int, k: int):
    """k arc-disjoint spanning out-branchings rooted at s, or a CutWitness."""
    if k < 1:
        raise InvalidInput("k must be positive")
    if k == 1:
        b = find_branching(g, s, "out")
        if b is not None:
            return [b]
        side = reach_mask(g, 1 << s)
        return CutWitness(side=side, direction="out", crossing=[])
    for t in range(g.n):
        if t == s:
            continue
        value, side = unit_flow(g, 1 << s, t, cap=k)
        if value < k:
            crossing = [
                (a, b) for a, b in g.arcs() if side >> a & 1 and not side >> b & 1
            ]
            return CutWitness(side=side, direction="out", crossing=crossing)
    return _edmonds_grow(g, s, k)


def _extract_path(g: Digraph, y: int, b: int, banned: set[Arc]) -> list[int]:
    parents: dict[int, int] = {}
    seen = 1 << y
    frontier = [y]
    while frontier:
        nxt = []
        for x in frontier:
            for w in bits(g.out_masks[x] & ~seen):
                if (x, w) in banned:
                    continue
                parents[w] = x
                seen |= 1 << w
                nxt.append(w)
        frontier = nxt
    if not (seen >> b & 1):
        raise InternalInconsistency(f"no residual path {y} -> {b}")
    path = [b]
    while path[-1] != y:
        path.append(parents[path[-1]])
    path.reverse()
    return path


def path_arcs(path: list[int]) -> list[Arc]:
    return list(zip(path, path[1:]))


def branching_avoiding_path(g: Digraph, y: int, b: int):
    """Out-branching rooted y plus a y->b path, arc-disjoint.

    Succeeds exactly when y reaches every vertex and (y = b or there are
    two arc-disjoint y->b paths).  Returns (Branching, path) or a
    CutWitness for the violated demand.
    """
    full = g.full_mask
    reached = reach_mask(g, 1 << y)
    if reached != full:
        crossing = [
            (a, c) for a, c in g.arcs() if reached >> a & 1 and not reached >> c & 1
        ]
        return CutWitness(side=reached, direction="out", crossing=crossing)
    if y == b:
        return find_branching(g, y, "out"), [y]
    value, side = unit_flow(g, 1 << y, b, cap=2)
    if value < 2:
        crossing = [
            (a, c) for a, c in g.arcs() if side >> a & 1 and not side >> c & 1
        ]
        return CutWitness(side=side, direction="out", crossing=crossing)

    # cheap route: reserve one of two disjoint flow paths for the walk and
    # grow the branching on the rest
    from .digraph import arc_disjoint_paths

    paths = arc_disjoint_paths(g, y, b, 2)
    if isinstance(paths, list):
        for p in paths:
            tree = find_branching(g, y, "out", banned=set(path_arcs(p)))
            if tree is not None:
                return tree, p

    # guarded growth: keep, for every set X missing y, at least
    # [X disjoint from tree] + [b in X] unused entering arcs
    tree_mask = 1 << y
    tree_arcs: list[Arc] = []
    used: set[Arc] = set()
    while tree_mask != full:
        picked = None
        for x in bits(tree_mask):
            for w in bits(g.out_masks[x] & ~tree_mask):
                if _avoiding_safe(g, y, b, used, tree_mask, (x, w)):
                    picked = (x, w)
                    break
            if picked:
                break
        if picked is None:
            raise InternalInconsistency("branching-plus-path growth stuck")
        used.add(picked)
        tree_arcs.append(picked)
        tree_mask |= 1 << picked[1]
    path = _extract_path(g, y, b, used)
    return Branching(root=y, arcs=tuple(tree_arcs), kind="out"), path


def _avoiding_safe(
    g: Digraph, y: int, b: int, used: set[Arc], tree_mask: int, arc: Arc
) -> bool:
    banned = used | {arc}
    new_tree = tree_mask | 1 << arc[1]
    rest = g.full_mask & ~new_tree
    if reach_mask(g, new_tree, banned=banned) != g.full_mask:
        return False
    if rest >> b & 1:
        value, _ = unit_flow(g, new_tree, b, banned=banned, cap=2)
        if value < 2:
            return False
    value, _ = unit_flow(g, 1 << y, b, banned=banned, cap=1)
    return value >= 1


def out_branching_avoiding_path(
    g: Digraph, u: int, w: int, v: int, budget: int = 200_000
):
    """Out-branching rooted u plus a w->v path, arc-disjoint.

    Returns (Branching, path) or None.  The path start is unrelated to the
    branching root, which puts this outside the clean packing theory, so
    after necessary cut checks we search over candidate paths whose removal
    keeps u spanning; the budget bounds that search and overrunning it is a
    loud error, never a silent no.
    """
    if w == u:
        result = branching_avoiding_path(g, u, v)
        return None if isinstance(result, CutWitness) else result
    if reach_mask(g, 1 << u) != g.full_mask:
        return None
    if v != w:
        value, _ = unit_flow(g, 1 << u | 1 << w, v, cap=2)
        if value < 2:
            return None

    critical = set()
    for arc in g.arcs():
        if reach_mask(g, 1 << u, banned={arc}) != g.full_mask:
            critical.add(arc)

    nodes = 0

    def walk(prefix: list[int], banned: set[Arc]):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise ResourceExceeded("path search budget exhausted")
        here = prefix[-1]
        if here == v:
            tree = find_branching(g, u, "out", banned=banned)
            if tree is None:
                raise InternalInconsistency("prefix pruning admitted a bad path")
            return tree, list(prefix)
        for nxt in bits(g.out_masks[here]):
            if nxt in prefix or (here, nxt) in critical:
                continue
            arc = (here, nxt)
            banned.add(arc)
            if reach_mask(g, 1 << u, banned=banned) == g.full_mask:
                found = walk(prefix + [nxt], banned)
                if found is not None:
                    return found
            banned.remove(arc)
        return None

    return walk([w], set())


def extend_pair(g: Digraph, pair: BranchingPair, core: int) -> BranchingPair:
    """Attach vertices outside `core` to a good pair living on `core`.

    Every new vertex hangs off the core directly: an arc from a core
    in-neighbour joins the out-branching and an arc to a core out-neighbour
    joins the in-branching, so the two new arc sets cannot meet.
    """
    outside = g.full_mask & ~core
    if not outside:
        return pair
    out_arcs = list(pair.out_branching.arcs)
    in_arcs = list(pair.in_branching.arcs)
    for x in bits(outside):
        parents = g.in_masks[x] & core
        children = g.out_masks[x] & core
        if not parents or not children:
            raise InternalInconsistency(
                f"vertex {x} lacks a core in- or out-neighbour"
            )
        p = next(bits(parents))
        c = next(bits(children))
        out_arcs.append((p, x))
        in_arcs.append((x, c))
    return BranchingPair(
        Branching(pair.out_branching.root, tuple(out_arcs), "out"),
        Branching(pair.in_branching.root, tuple(in_arcs), "in"),
    )
