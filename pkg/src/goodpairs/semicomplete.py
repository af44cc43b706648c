"""Good-pair decision for flat strong or non-strong semicomplete digraphs.

A good (u,v)-pair exists unless one of four obstructions is present: a
root that does not span, one of six small exceptional digraphs with the
roots in fixed position, a single arc whose removal starves both roots,
or a layered kind-A witness with at least five levels.  On YES a pair is
built greedily and re-verified; bounded exhaustive search backs up the
greedy layer so construction never silently fails.
"""

from __future__ import annotations

from .branchings import (
    Branching,
    BranchingPair,
    find_branching,
    path_arcs,
    verify_good_pair,
)
from .digraph import (
    Arc,
    Digraph,
    bits,
    coreach_mask,
    mask_of,
    reach_mask,
    strong_components,
)
from .composition import is_semicomplete
from .errors import InternalInconsistency, InvalidInput
from .oracle import enumerate_out_branchings, oracle_good_pair
from .verdicts import (
    ARC_OBSTRUCTION,
    LAYERED_A,
    ROOT_COMPONENT,
    SMALL_EXCEPTION,
    YES,
    Verdict,
)
from .witnesses import TypeABWitness, iter_type_a

# The six root-pinned digraphs that block a good pair despite passing the
# reachability and single-arc tests.  Two non-strong shapes on the roots
# u, v (ids "a", "b") and four strong shapes (ids "c".."f").
EXCEPTION_PATTERNS: dict[str, tuple[Digraph, int, int]] = {
    "a": (Digraph(2, [(0, 1)]), 0, 1),
    "b": (Digraph(3, [(0, 1), (0, 2), (1, 2)]), 0, 2),
    "c": (Digraph(3, [(0, 1), (1, 0), (0, 2), (2, 1)]), 0, 1),
    "d": (
        Digraph(4, [(0, 2), (1, 3), (3, 0), (0, 1), (1, 2), (2, 3)]),
        0,
        3,
    ),
    "e": (
        Digraph(4, [(0, 2), (1, 3), (3, 0), (0, 1), (1, 2), (2, 3), (3, 1)]),
        0,
        3,
    ),
    "f": (
        Digraph(4, [(0, 2), (1, 3), (3, 0), (0, 1), (1, 2), (2, 3), (2, 0)]),
        0,
        3,
    ),
}


def match_small_exception(g: Digraph, u: int, v: int):
    """(id, mapping) if g with roots u,v is one of the blocked shapes."""
    from .digraph import small_digraph_match

    for name, (pattern, pu, pv) in EXCEPTION_PATTERNS.items():
        if pattern.n != g.n:
            continue
        mapping = small_digraph_match(g, pattern, pinned={pu: u, pv: v})
        if mapping is not None:
            ordered = tuple(mapping[i] for i in range(pattern.n))
            return name, ordered
    return None


def trivial_pair(u: int) -> BranchingPair:
    return BranchingPair(Branching(u, (), "out"), Branching(u, (), "in"))


def try_construct_pair(g: Digraph, u: int, v: int) -> BranchingPair | None:
    """Deterministic greedy attempts; every hit is verified by the caller."""
    full = g.full_mask
    # in-branching first, then out-branching in the leftover arcs; then the
    # same with the roles swapped
    in_first = find_branching(g, v, "in")
    if in_first is not None:
        out = find_branching(g, u, "out", banned=in_first.arc_set)
        if out is not None:
            return BranchingPair(out, in_first)
    out_first = find_branching(g, u, "out")
    if out_first is not None:
        inn = find_branching(g, v, "in", banned=out_first.arc_set)
        if inn is not None:
            return BranchingPair(out_first, inn)
    # guarded growth: accept a frontier arc only while every vertex can
    # still reach v without the chosen arcs
    tree = 1 << u
    arcs: list[Arc] = []
    chosen: set[Arc] = set()
    while tree != full:
        picked = None
        for x in bits(tree):
            for y in bits(g.out_masks[x] & ~tree):
                chosen.add((x, y))
                ok = coreach_mask(g, 1 << v, banned=chosen) == full
                chosen.remove((x, y))
                if ok:
                    picked = (x, y)
                    break
            if picked:
                break
        if picked is None:
            return None
        chosen.add(picked)
        arcs.append(picked)
        tree |= 1 << picked[1]
    inn = find_branching(g, v, "in", banned=chosen)
    if inn is None:
        return None
    return BranchingPair(Branching(u, tuple(arcs), "out"), inn)


def construct_good_pair(g: Digraph, u: int, v: int) -> BranchingPair:
    """Greedy attempts, then bounded exhaustive search; never a silent miss."""
    pair = try_construct_pair(g, u, v)
    if pair is not None and verify_good_pair(g, u, v, pair):
        return pair
    if g.n <= 12:
        pair = oracle_good_pair(g, u, v, max_n=12)
        if pair is not None:
            return pair
    raise InternalInconsistency(
        f"characterization promised a good ({u},{v})-pair but none was built"
    )


def decide_semicomplete(g: Digraph, u: int, v: int) -> Verdict:
    if not is_semicomplete(g):
        raise InvalidInput("input digraph is not semicomplete")
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise InvalidInput("roots out of range")
    if g.n == 1:
        return Verdict(yes=True, u=u, v=v, reason=YES, pair=trivial_pair(u))
    full = g.full_mask
    if reach_mask(g, 1 << u) != full:
        return Verdict(yes=False, u=u, v=v, reason=ROOT_COMPONENT, side="out")
    if coreach_mask(g, 1 << v) != full:
        return Verdict(yes=False, u=u, v=v, reason=ROOT_COMPONENT, side="in")
    hit = match_small_exception(g, u, v)
    if hit is not None:
        name, mapping = hit
        return Verdict(
            yes=False,
            u=u,
            v=v,
            reason=SMALL_EXCEPTION,
            exception_id=name,
            mapping=mapping,
        )
    for e in g.arcs():
        banned = {e}
        if (
            reach_mask(g, 1 << u, banned=banned) != full
            and coreach_mask(g, 1 << v, banned=banned) != full
        ):
            return Verdict(yes=False, u=u, v=v, reason=ARC_OBSTRUCTION, arc=e)
    for w in iter_type_a(g, u, v):
        if w.alpha >= 2:
            return Verdict(yes=False, u=u, v=v, reason=LAYERED_A, witness=w)
    pair = construct_good_pair(g, u, v)
    if not verify_good_pair(g, u, v, pair):
        raise InternalInconsistency("constructed pair failed verification")
    return Verdict(yes=True, u=u, v=v, reason=YES, pair=pair)


def funnel_structure(g: Digraph, u: int):
    """Neighbourhood split around u when every (u,u)-pair is blocked.

    Returns (X, Y, Z, e) where X are the pure out-neighbours, Y the pure
    in-neighbours, Z the two-cycle partners, and e the single arc that
    leaves the terminal component of g[X] and is also the single arc
    entering the initial component of g[Y]; everything must route through
    e, which is why the two branchings at u collide.  None when g around u
    does not have this shape.
    """
    out = g.out_masks[u]
    inn = g.in_masks[u]
    z = out & inn
    x = out & ~z
    y = inn & ~z
    if not x or not y:
        return None
    x_scc = strong_components(g, within=x)
    terminal = x_scc.components[x_scc.terminal[0]]
    leaving = [
        (a, b) for a, b in g.arcs() if terminal >> a & 1 and not terminal >> b & 1
    ]
    if len(leaving) != 1:
        return None
    e = leaving[0]
    y_scc = strong_components(g, within=y)
    initial = y_scc.components[y_scc.initial[0]]
    entering = [
        (a, b) for a, b in g.arcs() if initial >> b & 1 and not initial >> a & 1
    ]
    if entering != [e] or not initial >> e[1] & 1:
        return None
    if any(not g.has_arc(e[1], w) for w in bits(z)):
        return None
    if any(not g.has_arc(w, e[0]) for w in bits(z)):
        return None
    return x, y, z, e


def funnel_pair(g: Digraph, u: int):
    """Out- and in-branching at u sharing exactly the funnel arc."""
    structure = funnel_structure(g, u)
    if structure is None:
        return None
    x, y, z, e = structure
    ex, ey = e
    out_arcs = [(u, w) for w in bits(x | z)]
    out_arcs.append(e)
    y_tree = find_branching(g, ey, "out", within=y)
    if y_tree is None:
        raise InternalInconsistency("funnel head does not span the in-side")
    out_arcs.extend(y_tree.arcs)
    in_arcs = [(w, u) for w in bits(y | z)]
    in_arcs.append(e)
    x_tree = find_branching(g, ex, "in", within=x)
    if x_tree is None:
        raise InternalInconsistency("funnel tail is not spanned by the out-side")
    in_arcs.extend(x_tree.arcs)
    pair = BranchingPair(
        Branching(u, tuple(out_arcs), "out"), Branching(u, tuple(in_arcs), "in")
    )
    if pair.shared_arcs != {e}:
        raise InternalInconsistency("funnel pair shares more than the funnel arc")
    return pair, e


def _level_path(g: Digraph, level: int, src: int, dst: int) -> list[int]:
    """Shortest vertex path src -> dst inside one level."""
    if src == dst:
        return [src]
    parents: dict[int, int] = {}
    seen = 1 << src
    frontier = [src]
    while frontier:
        nxt = []
        for x in frontier:
            for w in bits(g.out_masks[x] & level & ~seen):
                parents[w] = x
                seen |= 1 << w
                if w == dst:
                    path = [dst]
                    while path[-1] != src:
                        path.append(parents[path[-1]])
                    path.reverse()
                    return path
                nxt.append(w)
        frontier = nxt
    raise InternalInconsistency(f"no path {src} -> {dst} inside a level")


class _RecipeFailed(Exception):
    """Internal: a structured construction hit an unmodelled corner."""


def _spine(
    g: Digraph, w: TypeABWitness, arc_numbers: list[int], start: int | None
) -> tuple[list[Arc], list[int]]:
    """Chain the given designated arcs with connectors.

    Consecutive arc numbers differing by two are joined by a path inside
    the level they share; a difference of one is bridged by the mandatory
    upward arc.  `start` is the vertex acting as y_0 when the chain begins
    below the first designated arc; None starts the chain at the first
    arc's tail directly.  Returns (arcs, visited vertices in order).
    """
    arcs: list[Arc] = []
    visited: list[int] = [] if start is None else [start]
    prev_num = None if start is None else 0
    prev_y = start
    for i in arc_numbers:
        x, y = w.backward_arcs[i - 1]
        if prev_num is not None:
            gap = i - prev_num
            if gap == 2:
                level = w.sets[w.level_of(prev_y)]
                path = _level_path(g, level, prev_y, x)
                arcs.extend(path_arcs(path))
                visited.extend(path[1:])
            elif gap == 1:
                if not g.has_arc(prev_y, x):
                    raise _RecipeFailed(f"missing upward arc ({prev_y},{x})")
                arcs.append((prev_y, x))
                visited.append(x)
            else:
                raise _RecipeFailed("designated arcs out of step")
        elif x not in visited:
            visited.append(x)
        arcs.append((x, y))
        visited.append(y)
        prev_num = i
        prev_y = y
    return arcs, visited


def _checked_arc(g: Digraph, x: int, y: int) -> Arc:
    if not g.has_arc(x, y):
        raise _RecipeFailed(f"expected arc ({x},{y}) is absent")
    return (x, y)


def _almost_pair_a(g: Digraph, w: TypeABWitness, r: int) -> BranchingPair:
    """Pair rooted (a, b) sharing exactly designated arc number r.

    The out-side walks the even-numbered designated arcs up to r and the
    odd-numbered ones from r on; the in-side takes the complementary
    selection.  Both selections contain r and nothing else in common, and
    at every shared level the two chains leave through different exits.
    """
    if w.alpha < 2:
        raise _RecipeFailed("five-level recipe needs at least five levels")
    last = len(w.backward_arcs)
    plus_nums = [i for i in range(2, last + 1, 2) if i <= r] + [
        i for i in range(1, last + 1, 2) if i >= r
    ]
    minus_nums = sorted(
        {i for i in range(1, last + 1, 2) if i < r}
        | {r}
        | {i for i in range(2, last + 1, 2) if i > r}
    )
    x1 = w.backward_arcs[0][0]
    last_y = w.backward_arcs[-1][1]
    pre_y = w.backward_arcs[last - 2][1]

    plus_arcs, plus_visited = _spine(g, w, plus_nums, start=w.a)
    covered_plus = set(plus_visited)
    bottom_tree = find_branching(g, last_y, "out", within=w.sets[0])
    if bottom_tree is None:
        raise _RecipeFailed("chain foot does not span the bottom level")
    plus_arcs.extend(bottom_tree.arcs)
    covered_plus.update(bits(w.sets[0]))
    if r == last and w.b not in covered_plus:
        # the in-side ends with an upward hop into b, so the out-side must
        # reach b inside its level instead of fanning from the chain foot
        path = _level_path(g, w.sets[1], pre_y, w.b)
        plus_arcs.extend(path_arcs(path))
        covered_plus.update(path)
    for z in bits(g.full_mask & ~mask_of(covered_plus)):
        plus_arcs.append(_checked_arc(g, last_y, z))

    minus_arcs, minus_visited = _spine(g, w, minus_nums, start=None)
    covered_minus = set(minus_visited)
    top_tree = find_branching(g, x1, "in", within=w.sets[-1])
    if top_tree is None:
        raise _RecipeFailed("top level does not funnel into the chain head")
    minus_arcs.extend(top_tree.arcs)
    covered_minus.update(bits(w.sets[-1]))
    if minus_nums[-1] == last:
        if last_y != w.b:
            minus_arcs.append(_checked_arc(g, last_y, w.b))
            covered_minus.add(w.b)
    else:
        tail_y = w.backward_arcs[minus_nums[-1] - 1][1]
        path = _level_path(g, w.sets[1], tail_y, w.b)
        minus_arcs.extend(path_arcs(path))
        covered_minus.update(path)
    if w.a not in covered_minus and r == 1:
        # the out-side starts with a -> x_1, so route a inside its level
        x2 = w.backward_arcs[1][0]
        path = _level_path(g, w.sets[w.level_of(w.a)], w.a, x2)
        minus_arcs.extend(path_arcs(path))
        covered_minus.update(path)
    if last_y not in covered_minus and r != 1:
        # y's fan arc to x_1 is taken by the out-side; divert it to a
        minus_arcs.append(_checked_arc(g, last_y, w.a))
        covered_minus.add(last_y)
    for z in bits(g.full_mask & ~mask_of(covered_minus)):
        minus_arcs.append(_checked_arc(g, z, x1))

    return BranchingPair(
        Branching(w.a, tuple(plus_arcs), "out"),
        Branching(w.b, tuple(minus_arcs), "in"),
    )


def _almost_pair_b(g: Digraph, w: TypeABWitness) -> BranchingPair:
    """Pair rooted (a, b) sharing exactly the whole designated arc set.

    Each level contributes two arc-disjoint pieces: the top gives an
    in-tree to x_1 plus a path a -> x_1, every middle level two parallel
    paths between its entry and exit, and the bottom an out-tree from y_b
    plus a path y_b -> b.  The designated arcs chain the pieces together
    and are the only arcs used twice.
    """
    from .branchings import branching_avoiding_path
    from .digraph import CutWitness, arc_disjoint_paths

    top, bottom = w.sets[-1], w.sets[0]
    x1 = w.backward_arcs[0][0]
    y_last = w.backward_arcs[-1][1]

    sub, old = g.induced(top)
    pos = {o: i for i, o in enumerate(old)}
    got = branching_avoiding_path(sub.converse(), pos[x1], pos[w.a])
    if isinstance(got, CutWitness):
        raise _RecipeFailed("root is only weakly tied to the chain head")
    top_tree, rev_path = got
    minus_arcs = [(old[d], old[c]) for c, d in top_tree.arcs]
    plus_arcs = [
        (old[d], old[c]) for c, d in path_arcs(rev_path)
    ][::-1]
    covered_plus = {w.a} | {old[i] for i in rev_path}

    sub, old = g.induced(bottom)
    pos = {o: i for i, o in enumerate(old)}
    got = branching_avoiding_path(sub, pos[y_last], pos[w.b])
    if isinstance(got, CutWitness):
        raise _RecipeFailed("chain foot is only weakly tied to the sink root")
    bot_tree, bot_path = got
    plus_arcs.extend((old[c], old[d]) for c, d in bot_tree.arcs)
    covered_minus = set(bits(top)) | {old[i] for i in bot_path}

    plus_arcs.extend(w.backward_arcs)
    minus_arcs.extend(w.backward_arcs)
    minus_arcs.extend((old[c], old[d]) for c, d in path_arcs(bot_path))
    covered_plus.update(bits(bottom))
    for x, y in w.backward_arcs:
        covered_plus.add(y)
        covered_minus.add(y)

    for j in range(1, w.p - 1):
        level = w.sets[j]
        i = w.p - 1 - j  # arcs i and i+1 meet in this level
        entry = w.backward_arcs[i - 1][1]
        exit_ = w.backward_arcs[i][0]
        if entry == exit_:
            continue
        sub, old = g.induced(level)
        pos = {o: i2 for i2, o in enumerate(old)}
        paths = arc_disjoint_paths(sub, pos[entry], pos[exit_], 2)
        if isinstance(paths, CutWitness):
            raise _RecipeFailed("middle level is not two-connected on its chord")
        first, second = paths[0], paths[1]
        plus_arcs.extend((old[c], old[d]) for c, d in path_arcs(first))
        minus_arcs.extend((old[c], old[d]) for c, d in path_arcs(second))
        covered_plus.update(old[i2] for i2 in first)
        covered_minus.update(old[i2] for i2 in second)

    for z in bits(g.full_mask & ~mask_of(covered_plus)):
        plus_arcs.append(_checked_arc(g, y_last, z))
    for z in bits(g.full_mask & ~mask_of(covered_minus)):
        minus_arcs.append(_checked_arc(g, z, x1))

    return BranchingPair(
        Branching(w.a, tuple(plus_arcs), "out"),
        Branching(w.b, tuple(minus_arcs), "in"),
    )


def _pair_shape_ok(
    g: Digraph, w: TypeABWitness, pair: BranchingPair, want: set[Arc]
) -> bool:
    from .branchings import branching_violation

    if branching_violation(g, pair.out_branching) is not None:
        return False
    if branching_violation(g, pair.in_branching) is not None:
        return False
    return pair.shared_arcs == want


def almost_good_pair(
    g: Digraph, w: TypeABWitness, shared_index: int = 0
) -> BranchingPair:
    """Best possible pair rooted (a, b) for a witness-bearing digraph.

    For a kind-A witness the result shares exactly the designated arc
    selected by shared_index; for kind B it shares exactly the whole
    designated arc set.  Structured recipes run first and a verified
    bounded search backs them up, so the result is always checked.
    """
    from .witnesses import validate_witness

    err = validate_witness(g, w)
    if err is not None:
        raise InvalidInput(f"witness does not fit the digraph: {err}")
    if w.kind == "A":
        if not 0 <= shared_index < len(w.backward_arcs):
            raise InvalidInput("shared_index out of range")
        want = {w.backward_arcs[shared_index]}
    else:
        want = set(w.backward_arcs)
    builders = []
    if w.kind == "A" and w.alpha >= 2:
        builders.append(lambda: _almost_pair_a(g, w, shared_index + 1))
    if w.kind == "B":
        builders.append(lambda: _almost_pair_b(g, w))
    for build in builders:
        try:
            pair = build()
        except _RecipeFailed:
            continue
        if _pair_shape_ok(g, w, pair, want):
            return pair
    for out_b in enumerate_out_branchings(g, w.a):
        inn = find_branching(g, w.b, "in", banned=out_b.arc_set - want)
        if inn is None:
            continue
        pair = BranchingPair(out_b, inn)
        if pair.shared_arcs == want:
            return pair
    raise InternalInconsistency(
        "no branching pair with the promised sharing pattern exists"
    )
