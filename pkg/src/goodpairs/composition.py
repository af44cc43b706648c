"""Compositions: a quotient digraph with a digraph substituted per vertex.

Substituting H_1..H_s into the vertices of S yields the flat digraph with
a copy of each H_i and, for every quotient arc ij, all arcs from the i-th
copy to the j-th.  Flat vertices are numbered part by part, in order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .digraph import Digraph, bits, mask_of, strong_components
from .errors import InternalInconsistency, InvalidInput


@dataclass(frozen=True)
class Composition:
    quotient: Digraph
    parts: tuple[Digraph, ...]
    offsets: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if self.quotient.n != len(self.parts):
            raise InvalidInput("one part per quotient vertex required")
        if self.quotient.n < 1:
            raise InvalidInput("empty quotient")
        offsets = []
        total = 0
        for p in self.parts:
            if p.n < 1:
                raise InvalidInput("empty part")
            offsets.append(total)
            total += p.n
        object.__setattr__(self, "offsets", tuple(offsets))

    @property
    def s(self) -> int:
        return self.quotient.n

    @property
    def n(self) -> int:
        return self.offsets[-1] + self.parts[-1].n

    def part_of(self, flat: int) -> int:
        for i in range(self.s - 1, -1, -1):
            if flat >= self.offsets[i]:
                return i
        raise InvalidInput(f"flat vertex {flat} out of range")

    def local(self, flat: int) -> int:
        return flat - self.offsets[self.part_of(flat)]

    def flat_index(self, part: int, local: int) -> int:
        return self.offsets[part] + local

    def part_mask(self, part: int) -> int:
        return ((1 << self.parts[part].n) - 1) << self.offsets[part]

    def representatives(self) -> list[int]:
        return list(self.offsets)

    def flatten(self) -> Digraph:
        arcs = []
        for i, p in enumerate(self.parts):
            off = self.offsets[i]
            arcs.extend((off + a, off + b) for a, b in p.arcs())
        for i, j in self.quotient.arcs():
            for a in bits(self.part_mask(i)):
                for b in bits(self.part_mask(j)):
                    arcs.append((a, b))
        return Digraph(self.n, arcs)


def canonical_roots(comp: Composition, u: int, v: int) -> tuple[int, int]:
    """Quotient vertices holding the flat roots."""
    return comp.part_of(u), comp.part_of(v)


def is_semicomplete(g: Digraph) -> bool:
    full = g.full_mask
    return all(
        (g.out_masks[x] | g.in_masks[x] | 1 << x) == full for x in range(g.n)
    )


def is_tournament(g: Digraph) -> bool:
    return is_semicomplete(g) and is_oriented(g)


def is_oriented(g: Digraph) -> bool:
    return all(not g.out_masks[x] & g.in_masks[x] for x in range(g.n))


def is_transitive(g: Digraph) -> bool:
    """Arcs xy and yz with x != z always force xz."""
    for y in range(g.n):
        targets = g.out_masks[y]
        for x in bits(g.in_masks[y]):
            if targets & ~(1 << x) & ~g.out_masks[x]:
                return False
    return True


def is_quasi_transitive(g: Digraph) -> bool:
    """Arcs xy and yz with x != z always force xz or zx."""
    for y in range(g.n):
        targets = g.out_masks[y]
        for x in bits(g.in_masks[y]):
            if targets & ~(1 << x) & ~(g.out_masks[x] | g.in_masks[x]):
                return False
    return True


def recognize(g: Digraph) -> frozenset[str]:
    names = set()
    if is_semicomplete(g):
        names.add("semicomplete")
        if is_oriented(g):
            names.add("tournament")
    if is_transitive(g):
        names.add("transitive")
    if is_quasi_transitive(g):
        names.add("quasi-transitive")
    return frozenset(names)


def composition_from_partition(g: Digraph, part_masks: list[int]):
    """Rebuild g as a composition over the given vertex partition.

    Returns (Composition, order) with order[flat index] = g vertex, or
    None when some part pair is not uniformly joined.
    """
    cover = 0
    for m in part_masks:
        if not m or cover & m:
            raise InvalidInput("part masks must partition the vertex set")
        cover |= m
    if cover != g.full_mask:
        raise InvalidInput("part masks must partition the vertex set")
    parts = []
    order: list[int] = []
    for m in part_masks:
        sub, old = g.induced(m)
        parts.append(sub)
        order.extend(old)
    quotient_arcs = []
    for i, mi in enumerate(part_masks):
        for j, mj in enumerate(part_masks):
            if i == j:
                continue
            rows = {bool(g.out_masks[a] & mj) for a in bits(mi)}
            cols = {
                all(g.has_arc(a, b) for a in bits(mi)) for b in bits(mj)
            }
            if rows == {True}:
                if cols != {True}:
                    return None
                quotient_arcs.append((i, j))
            elif rows != {False}:
                return None
    comp = Composition(Digraph(len(part_masks), quotient_arcs), tuple(parts))
    return comp, order


def complement_components(g: Digraph) -> list[int]:
    """Components of the non-adjacency graph, ordered by smallest vertex."""
    full = g.full_mask
    unseen = full
    comps = []
    while unseen:
        start = unseen & -unseen
        comp = start
        frontier = start
        while frontier:
            new = 0
            for v in bits(frontier):
                non_adj = full & ~(g.out_masks[v] | g.in_masks[v] | 1 << v)
                new |= non_adj & ~comp
            comp |= new
            frontier = new
        comps.append(comp)
        unseen &= ~comp
    return comps


def _finest_cells(g: Digraph) -> list[int]:
    """Smallest cell partition of g whose cell pairs are uniformly joined.

    Cells start as non-adjacency components and merge while some pair
    carries a partial join, so the cells of any uniform partition of g
    are unions of the returned cells.
    """
    if g.n <= 1:
        return [g.full_mask] if g.n else []
    cells = complement_components(g)
    changed = True
    while changed and len(cells) > 1:
        changed = False
        for i in range(len(cells)):
            for j in range(len(cells)):
                if i == j:
                    continue
                a, b = cells[i], cells[j]
                forward = sum((g.out_masks[x] & b).bit_count() for x in bits(a))
                if forward not in (0, a.bit_count() * b.bit_count()):
                    cells[i] = a | b
                    del cells[j]
                    changed = True
                    break
            if changed:
                break
    cells.sort(key=lambda m: m & -m)
    return cells


def finest_refinement(comp: Composition):
    """Split parts into the smallest cells keeping the quotient semicomplete.

    Cell pairs inside an old part are adjacent and uniformly joined by
    construction; cell pairs from different old parts inherit the old
    quotient arcs, so the refined quotient is semicomplete whenever the
    original one is.  Returns (refined, order) with order[new flat
    vertex] = old flat vertex; the input composition itself is returned
    with the identity order when no part splits.
    """
    masks: list[int] = []
    split = False
    for idx, part in enumerate(comp.parts):
        cells = _finest_cells(part)
        if len(cells) > 1:
            split = True
        off = comp.offsets[idx]
        masks.extend(m << off for m in cells)
    if not split:
        return comp, tuple(range(comp.n))
    built = composition_from_partition(comp.flatten(), masks)
    if built is None:
        raise InternalInconsistency("refinement cells are not uniformly joined")
    refined, order = built
    return refined, tuple(order)


@dataclass(frozen=True)
class QtDecomposition:
    kind: str  # "strong" or "non-strong"
    composition: Composition
    order: tuple[int, ...]  # flat composition vertex -> original vertex


def qt_decompose(g: Digraph) -> QtDecomposition:
    """Canonical decomposition of a quasi-transitive digraph.

    Strong inputs split along non-adjacency components with a strong
    semicomplete quotient; non-strong inputs split into their strong
    components under a transitive oriented quotient.  Inputs that fail
    the uniformity this structure promises are rejected.
    """
    if g.n < 2:
        raise InvalidInput("decomposition needs at least two vertices")
    if not is_quasi_transitive(g):
        raise InvalidInput("input is not quasi-transitive")
    scc = strong_components(g)
    if scc.is_strong:
        masks = complement_components(g)
        if len(masks) < 2:
            raise InvalidInput("strong input with connected non-adjacency graph")
        built = composition_from_partition(g, masks)
        if built is None:
            raise InvalidInput("non-uniform join between non-adjacency components")
        comp, order = built
        if not is_semicomplete(comp.quotient):
            raise InvalidInput("quotient of strong input is not semicomplete")
        return QtDecomposition("strong", comp, tuple(order))
    built = composition_from_partition(g, scc.components)
    if built is None:
        raise InvalidInput("non-uniform join between strong components")
    comp, order = built
    if not (is_transitive(comp.quotient) and is_oriented(comp.quotient)):
        raise InvalidInput("quotient of non-strong input is not transitive oriented")
    return QtDecomposition("non-strong", comp, tuple(order))


def singleton() -> Digraph:
    return Digraph(1, [])


def independent(n: int) -> Digraph:
    return Digraph(n, [])


def complete_quotient(n: int) -> Digraph:
    return Digraph(n, [(a, b) for a in range(n) for b in range(n) if a != b])


def directed_cycle(n: int) -> Digraph:
    return Digraph(n, [(i, (i + 1) % n) for i in range(n)])


def transitive_tournament(n: int) -> Digraph:
    return Digraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def ring_tournament(n: int) -> Digraph:
    """Tournament on 1..n (as 0..n-1): consecutive arcs forward, skips back."""
    if n < 3:
        raise InvalidInput("ring tournament needs n >= 3")
    arcs = [(i, i + 1) for i in range(n - 1)]
    arcs += [(j, i) for i in range(n) for j in range(i + 2, n)]
    return Digraph(n, arcs)
