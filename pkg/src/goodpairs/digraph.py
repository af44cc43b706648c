"""Dense digraph primitives: bitset adjacency, strong components, arc cuts.

Vertices are the integers 0..n-1.  Vertex sets are Python-int bitmasks
throughout; the graphs this package cares about are dense and tiny, so
O(1) arc tests and whole-row mask operations beat any sparse structure.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInput

Arc = tuple[int, int]


def bits(mask: int):
    """Iterate the set bit positions of mask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class Digraph:
    """Immutable digraph without loops or parallel arcs."""

    __slots__ = ("n", "out_masks", "in_masks", "_arcs")

    def __init__(self, n: int, arcs=()):
        self.n = n
        out_masks = [0] * n
        in_masks = [0] * n
        for a, b in arcs:
            if a == b:
                raise InvalidInput(f"loop at vertex {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise InvalidInput(f"arc ({a},{b}) outside 0..{n - 1}")
            out_masks[a] |= 1 << b
            in_masks[b] |= 1 << a
        self.out_masks = out_masks
        self.in_masks = in_masks
        self._arcs = None

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def has_arc(self, a: int, b: int) -> bool:
        return bool(self.out_masks[a] >> b & 1)

    def arcs(self) -> list[Arc]:
        if self._arcs is None:
            self._arcs = [
                (a, b) for a in range(self.n) for b in bits(self.out_masks[a])
            ]
        return self._arcs

    @property
    def m(self) -> int:
        return len(self.arcs())

    def out_degree(self, v: int, within: int | None = None) -> int:
        row = self.out_masks[v]
        if within is not None:
            row &= within
        return row.bit_count()

    def in_degree(self, v: int, within: int | None = None) -> int:
        row = self.in_masks[v]
        if within is not None:
            row &= within
        return row.bit_count()

    def converse(self) -> "Digraph":
        return Digraph(self.n, [(b, a) for a, b in self.arcs()])

    def without_arcs(self, removed) -> "Digraph":
        gone = set(removed)
        return Digraph(self.n, [e for e in self.arcs() if e not in gone])

    def with_arcs(self, added) -> "Digraph":
        return Digraph(self.n, set(self.arcs()) | set(added))

    def induced(self, vertex_mask: int) -> tuple["Digraph", list[int]]:
        """Subgraph on the masked vertices; returns (graph, new-to-old map)."""
        old = list(bits(vertex_mask))
        index = {v: i for i, v in enumerate(old)}
        arcs = [
            (index[a], index[b])
            for a, b in self.arcs()
            if vertex_mask >> a & 1 and vertex_mask >> b & 1
        ]
        return Digraph(len(old), arcs), old

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Digraph)
            and self.n == other.n
            and self.out_masks == other.out_masks
        )

    def __hash__(self) -> int:
        return hash((self.n, tuple(self.out_masks)))

    def __repr__(self) -> str:
        return f"Digraph({self.n}, {self.arcs()!r})"


def reach_mask(g: Digraph, start: int, within: int | None = None, banned=None) -> int:
    """Vertices reachable from the start set (a mask), along allowed arcs."""
    allowed = g.full_mask if within is None else within
    seen = start & allowed
    frontier = seen
    while frontier:
        new = 0
        for v in bits(frontier):
            row = g.out_masks[v] & allowed & ~seen
            if banned:
                for w in bits(row):
                    if (v, w) in banned:
                        row &= ~(1 << w)
            new |= row
        seen |= new
        frontier = new
    return seen


def coreach_mask(g: Digraph, start: int, within: int | None = None, banned=None) -> int:
    """Vertices that can reach the start set (a mask), along allowed arcs."""
    allowed = g.full_mask if within is None else within
    seen = start & allowed
    frontier = seen
    while frontier:
        new = 0
        for v in bits(frontier):
            row = g.in_masks[v] & allowed & ~seen
            if banned:
                for w in bits(row):
                    if (w, v) in banned:
                        row &= ~(1 << w)
            new |= row
        seen |= new
        frontier = new
    return seen


@dataclass
class SccDecomposition:
    """Strong components in acyclic order: cross arcs go low index -> high."""

    components: list[int]  # vertex masks
    comp_of: dict[int, int]
    initial: list[int]  # component indices with no entering arc
    terminal: list[int]  # component indices with no leaving arc

    @property
    def t(self) -> int:
        return len(self.components)

    @property
    def is_strong(self) -> bool:
        return self.t == 1


def strong_components(g: Digraph, within: int | None = None) -> SccDecomposition:
    allowed = g.full_mask if within is None else within
    verts = list(bits(allowed))
    index: dict[int, int] = {}
    lowlink: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    counter = [0]
    components: list[int] = []
    comp_of: dict[int, int] = {}

    # Iterative Tarjan; components complete in reverse topological order.
    for root in verts:
        if root in index:
            continue
        work = [(root, iter(bits(g.out_masks[root] & allowed)))]
        index[root] = lowlink[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = lowlink[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(bits(g.out_masks[w] & allowed))))
                    advanced = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == index[v]:
                comp = 0
                while True:
                    w = stack.pop()
                    on_stack.remove(w)
                    comp |= 1 << w
                    if w == v:
                        break
                components.append(comp)

    components.reverse()
    for i, comp in enumerate(components):
        for v in bits(comp):
            comp_of[v] = i

    entered = [False] * len(components)
    left = [False] * len(components)
    for a, b in g.arcs():
        if allowed >> a & 1 and allowed >> b & 1:
            ca, cb = comp_of[a], comp_of[b]
            if ca != cb:
                entered[cb] = True
                left[ca] = True
    initial = [i for i, e in enumerate(entered) if not e]
    terminal = [i for i, e in enumerate(left) if not e]
    return SccDecomposition(components, comp_of, initial, terminal)


@dataclass
class CutWitness:
    """A violated arc cut: the arcs crossing `side` in `direction`."""

    side: int  # vertex mask
    direction: str  # "out" or "in"
    crossing: list[Arc]

    def validate(self, g: Digraph) -> bool:
        want = []
        for a, b in g.arcs():
            inside_a = bool(self.side >> a & 1)
            inside_b = bool(self.side >> b & 1)
            if self.direction == "out" and inside_a and not inside_b:
                want.append((a, b))
            if self.direction == "in" and inside_b and not inside_a:
                want.append((a, b))
        return sorted(want) == sorted(self.crossing)


def unit_flow(
    g: Digraph,
    source_mask: int,
    sink: int,
    banned=None,
    within: int | None = None,
    cap: int | None = None,
) -> tuple[int, int]:
    """Max number of arc-disjoint paths from the source set to sink.

    Returns (value, reachable_side) where reachable_side is the residual
    source side giving a minimum cut when value < cap (or always when cap
    is None).  Arcs inside the source set are ignored; banned arcs and
    vertices outside `within` are unusable.
    """
    allowed = g.full_mask if within is None else within
    if source_mask >> sink & 1:
        raise InvalidInput("sink inside the source set")
    banned = banned or ()
    used: set[Arc] = set()
    value = 0
    while cap is None or value < cap:
        # BFS in the residual graph.
        parents: dict[int, tuple[int, Arc, bool]] = {}
        seen = source_mask & allowed
        frontier = list(bits(seen))
        found = False
        while frontier and not found:
            nxt = []
            for v in frontier:
                fwd = g.out_masks[v] & allowed & ~seen
                for w in bits(fwd):
                    if (v, w) in banned or (v, w) in used:
                        continue
                    parents[w] = (v, (v, w), True)
                    seen |= 1 << w
                    if w == sink:
                        found = True
                        break
                    nxt.append(w)
                if found:
                    break
                bwd = g.in_masks[v] & allowed & ~seen
                for w in bits(bwd):
                    if (w, v) in used:
                        parents[w] = (v, (w, v), False)
                        seen |= 1 << w
                        if w == sink:
                            found = True
                            break
                        nxt.append(w)
                if found:
                    break
            frontier = nxt
        if not found:
            return value, seen
        # Augment along the path.
        v = sink
        while not (source_mask >> v & 1):
            prev, arc, forward = parents[v]
            if forward:
                used.add(arc)
            else:
                used.remove(arc)
            v = prev
        value += 1
    # cap reached: recompute the residual side for completeness
    seen = source_mask & allowed
    frontier = list(bits(seen))
    while frontier:
        nxt = []
        for v in frontier:
            for w in bits(g.out_masks[v] & allowed & ~seen):
                if (v, w) in banned or (v, w) in used:
                    continue
                seen |= 1 << w
                nxt.append(w)
            for w in bits(g.in_masks[v] & allowed & ~seen):
                if (w, v) in used:
                    seen |= 1 << w
                    nxt.append(w)
        frontier = nxt
    return value, seen


def _cut_from_side(g: Digraph, side: int, within: int) -> CutWitness:
    crossing = [
        (a, b)
        for a, b in g.arcs()
        if side >> a & 1 and not side >> b & 1 and within >> b & 1
    ]
    return CutWitness(side=side, direction="out", crossing=crossing)


def local_arc_connectivity(
    g: Digraph, x: int, y: int, within: int | None = None, cap: int | None = None
) -> tuple[int, CutWitness]:
    """Maximum number of arc-disjoint (x,y)-paths and a minimum cut."""
    if x == y:
        raise InvalidInput("local_arc_connectivity needs x != y")
    allowed = g.full_mask if within is None else within
    k, side = unit_flow(g, 1 << x, y, within=allowed, cap=cap)
    return k, _cut_from_side(g, side, allowed)


def arc_disjoint_paths(g: Digraph, x: int, y: int, k: int):
    """k arc-disjoint (x,y)-paths as vertex lists, or a failure CutWitness."""
    if x == y:
        raise InvalidInput("arc_disjoint_paths needs x != y")
    # Re-run the flow to recover the used arc set.
    used: set[Arc] = set()
    value = 0
    allowed = g.full_mask
    while value < k:
        parents: dict[int, tuple[int, Arc, bool]] = {}
        seen = 1 << x
        frontier = [x]
        found = False
        while frontier and not found:
            nxt = []
            for v in frontier:
                for w in bits(g.out_masks[v] & ~seen):
                    if (v, w) in used:
                        continue
                    parents[w] = (v, (v, w), True)
                    seen |= 1 << w
                    if w == y:
                        found = True
                        break
                    nxt.append(w)
                if found:
                    break
                for w in bits(g.in_masks[v] & ~seen):
                    if (w, v) in used:
                        parents[w] = (v, (w, v), False)
                        seen |= 1 << w
                        if w == y:
                            found = True
                            break
                        nxt.append(w)
                if found:
                    break
            frontier = nxt
        if not found:
            return _cut_from_side(g, seen, allowed)
        v = y
        while v != x:
            prev, arc, forward = parents[v]
            if forward:
                used.add(arc)
            else:
                used.remove(arc)
            v = prev
        value += 1
    # Decompose the used arcs into k paths, shortcutting repeated vertices.
    succ: dict[int, list[int]] = {}
    for a, b in sorted(used):
        succ.setdefault(a, []).append(b)
    paths = []
    for _ in range(k):
        walk = [x]
        v = x
        while v != y:
            w = succ[v].pop(0)
            walk.append(w)
            v = w
        path = []
        pos = {}
        for v in walk:
            if v in pos:
                del path[pos[v] + 1 :]
            else:
                pos[v] = len(path)
                path.append(v)
        paths.append(path)
    return paths


def is_k_arc_strong(g: Digraph, k: int) -> tuple[bool, CutWitness | None]:
    """True iff every local arc connectivity is at least k."""
    if g.n < 2:
        raise InvalidInput("is_k_arc_strong needs n >= 2")
    for y in range(1, g.n):
        for x, t in ((0, y), (y, 0)):
            value, cut = local_arc_connectivity(g, x, t, cap=k)
            if value < k:
                return False, cut
    return True, None


def small_digraph_match(
    g: Digraph, pattern: Digraph, pinned: dict[int, int] | None = None, bound: int = 8
):
    """Arc-preserving bijection pattern -> g extending pinned, or None."""
    if pattern.n > bound:
        raise InvalidInput(f"pattern size {pattern.n} over the bound {bound}")
    if g.n != pattern.n:
        return None
    pinned = pinned or {}
    degs_g = {
        v: (g.out_degree(v), g.in_degree(v)) for v in range(g.n)
    }
    degs_p = {
        v: (pattern.out_degree(v), pattern.in_degree(v)) for v in range(pattern.n)
    }
    if sorted(degs_g.values()) != sorted(degs_p.values()):
        return None
    order = sorted(
        range(pattern.n), key=lambda v: (v not in pinned, -sum(degs_p[v]), v)
    )
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def consistent(p: int, q: int) -> bool:
        if degs_p[p] != degs_g[q]:
            return False
        for p2, q2 in mapping.items():
            if pattern.has_arc(p, p2) != g.has_arc(q, q2):
                return False
            if pattern.has_arc(p2, p) != g.has_arc(q2, q):
                return False
        return True

    def solve(i: int):
        if i == len(order):
            return dict(mapping)
        p = order[i]
        candidates = [pinned[p]] if p in pinned else range(g.n)
        for q in candidates:
            if q in used or not consistent(p, q):
                continue
            mapping[p] = q
            used.add(q)
            result = solve(i + 1)
            if result is not None:
                return result
            del mapping[p]
            used.remove(q)
        return None

    return solve(0)
