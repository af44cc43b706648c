"""Good-pair decisions for compositions with a transitive quotient.

A transitive quotient collapses reachability into domination: once the
out-root reaches every vertex it dominates everything outside its own
part, and dually everything outside the in-root's part dominates the
in-root.  That rigidity leaves exactly three flat obstruction shapes on
top of the generic root-component and degree failures, and it makes
every remaining instance constructible from a small bank of fan and
tree templates.  Every candidate from the bank is verified before it is
returned, so an odd shape slipping past a template costs nothing.

`decide_quasi_transitive` is the front door for flat quasi-transitive
digraphs: it decomposes the input, routes strong inputs to the
semicomplete composition engine and non-strong ones here, and maps the
evidence back to the original vertex labels.
"""

from __future__ import annotations

from .branchings import (
    Branching,
    BranchingPair,
    extend_pair,
    find_branching,
    verify_good_pair,
)
from .composition import (
    Composition,
    composition_from_partition,
    is_quasi_transitive,
    is_transitive,
    qt_decompose,
)
from .digraph import (
    Digraph,
    bits,
    coreach_mask,
    reach_mask,
    strong_components,
)
from .errors import InternalInconsistency, InvalidInput
from .oracle import oracle_good_pair
from .verdicts import (
    DEGREE,
    LAYERED_A,
    LAYERED_B,
    MIDDLE_BLOCKED,
    ROOT_COMPONENT,
    TREE_SIDE,
    YES,
    Verdict,
)

# Exhaustive fallback bound; the templates handle everything seen above it.
_ORACLE_CAP = 10


def decide_transitive_composition(comp: Composition, u: int, v: int) -> Verdict:
    """Decide a composition whose quotient is a transitive digraph.

    NO comes as a starved root side, a starved root degree, or one of
    two exact flat shapes; YES comes with a verified branching pair.
    """
    if comp.s < 2:
        raise InvalidInput("composition needs at least two parts")
    if not is_transitive(comp.quotient):
        raise InvalidInput("quotient is not transitive")
    flat = comp.flatten()
    if not (0 <= u < flat.n and 0 <= v < flat.n):
        raise InvalidInput("roots out of range")
    full = flat.full_mask
    if reach_mask(flat, 1 << u) != full:
        return Verdict(yes=False, u=u, v=v, reason=ROOT_COMPONENT, side="out")
    if coreach_mask(flat, 1 << v) != full:
        return Verdict(yes=False, u=u, v=v, reason=ROOT_COMPONENT, side="in")
    if u != v:
        if flat.out_degree(u) < 2 or flat.in_degree(v) < 2:
            return Verdict(yes=False, u=u, v=v, reason=DEGREE)
        if _middle_blocked(flat, u, v):
            return Verdict(yes=False, u=u, v=v, reason=MIDDLE_BLOCKED)
        side = _tree_side(flat, u, v)
        if side is not None:
            return Verdict(yes=False, u=u, v=v, reason=TREE_SIDE, side=side)
    pair = construct_transitive_pair(comp, flat, u, v)
    return Verdict(yes=True, u=u, v=v, reason=YES, pair=pair)


# --- flat obstruction shapes ---


def _middle_blocked(g: Digraph, u: int, v: int) -> bool:
    """u dominates all, all dominate v, rest is an independent middle
    wired only as u -> x -> v.  Any pair would fight over the arc uv."""
    if not g.has_arc(u, v):
        return False
    if g.out_masks[u] != g.full_mask & ~(1 << u):
        return False
    if g.in_masks[v] != g.full_mask & ~(1 << v):
        return False
    middle = g.full_mask & ~(1 << u | 1 << v)
    for x in bits(middle):
        if g.in_masks[x] != 1 << u or g.out_masks[x] != 1 << v:
            return False
    return True


def _tree_side(g: Digraph, u: int, v: int) -> str | None:
    if _one_side_tree(g, u, v):
        return "out"
    if _one_side_tree(g.converse(), v, u):
        return "in"
    return None


def _one_side_tree(g: Digraph, u: int, v: int) -> bool:
    """Every arc either feeds the sink v or belongs to an out-tree on the
    other vertices rooted at u.  That is 2n-3 arcs, one short of the
    2n-2 that two arc-disjoint spanning branchings must use."""
    rest = g.full_mask & ~(1 << v)
    if g.out_masks[v]:
        return False
    if g.in_masks[v] != rest:
        return False
    if g.in_degree(u, within=rest) != 0:
        return False
    for x in bits(rest & ~(1 << u)):
        if g.in_degree(x, within=rest) != 1:
            return False
    return reach_mask(g, 1 << u, within=rest) == rest


# --- construction ---


def construct_transitive_pair(
    comp: Composition, flat: Digraph, u: int, v: int
) -> BranchingPair:
    """A verified pair for a transitive composition that is not blocked.

    Candidates come from a template bank run on the digraph and on its
    converse with the roots swapped; a representative core solved
    exhaustively and grafted back covers thin instances the bank
    misses, and a bounded exhaustive search backs both up.
    """
    a_mask = comp.part_mask(comp.part_of(u))
    b_mask = comp.part_mask(comp.part_of(v))
    pair = _bank_pair(flat, a_mask, b_mask, u, v)
    if pair is not None:
        return pair
    pair = _core_pair(flat, a_mask, b_mask, u, v)
    if pair is not None:
        return pair
    if flat.n <= _ORACLE_CAP:
        found = oracle_good_pair(flat, u, v, max_n=_ORACLE_CAP)
        if found is not None:
            return found
    raise InternalInconsistency(
        "no construction route produced a pair for an unblocked input"
    )


def _as_pair(u, v, out_arcs, in_arcs) -> BranchingPair:
    return BranchingPair(
        Branching(root=u, arcs=tuple(out_arcs), kind="out"),
        Branching(root=v, arcs=tuple(in_arcs), kind="in"),
    )


def _bank_pair(flat, a_mask, b_mask, u, v) -> BranchingPair | None:
    for out_arcs, in_arcs in _proposals(flat, a_mask, b_mask, u, v):
        pair = _as_pair(u, v, out_arcs, in_arcs)
        if verify_good_pair(flat, u, v, pair):
            return pair
    conv = flat.converse()
    for out_arcs, in_arcs in _proposals(conv, b_mask, a_mask, v, u):
        pair = _as_pair(
            u,
            v,
            [(y, x) for x, y in in_arcs],
            [(y, x) for x, y in out_arcs],
        )
        if verify_good_pair(flat, u, v, pair):
            return pair
    return None


def _first(mask: int, k: int) -> list[int]:
    picked = []
    for x in bits(mask):
        picked.append(x)
        if len(picked) == k:
            break
    return picked


def _feed_plans(g, mask, root, kind) -> list[list]:
    """Ways to cover the root's part minus the root itself.

    Either an internal tree, or a star from one crossing neighbor; the
    quotient being uniform makes any crossing neighbor of the root a
    neighbor of the whole part.
    """
    others = mask & ~(1 << root)
    if not others:
        return [[]]
    plans = []
    if kind == "out":
        for p in _first(g.in_masks[root] & ~mask, 3):
            plans.append([(p, y) for y in bits(others)])
        tree = find_branching(g, root, kind="out", within=mask)
        if tree is not None:
            plans.append(list(tree.arcs))
    else:
        for q in _first(g.out_masks[root] & ~mask, 3):
            plans.append([(y, q) for y in bits(others)])
        tree = find_branching(g, root, kind="in", within=mask)
        if tree is not None:
            plans.append(list(tree.arcs))
    return plans


def _proposals(g, a_mask, b_mask, u, v):
    """Candidate (out arcs, in arcs) lists; the caller verifies each.

    Emission is deliberately liberal: a candidate may lean on an arc
    the instance happens to lack or may close a stray cycle, and the
    verifier simply moves on to the next one.
    """
    full = g.full_mask
    outside_a = full & ~a_mask
    outside_b = full & ~b_mask
    rest = outside_a & outside_b

    def fan(skip=0):
        return [(u, z) for z in bits(outside_a & ~skip)]

    def star(skip=0):
        return [(z, v) for z in bits(outside_b & ~skip)]

    if u == v:
        # Past the reachability prechecks the quotient is complete, so
        # any outside vertex anchors the root's own part both ways.
        others = a_mask & ~(1 << u)
        for z in _first(outside_a, 3):
            out = fan() + [(z, y) for y in bits(others)]
            inn = star() + [(y, z) for y in bits(others)]
            yield out, inn
        return

    if a_mask == b_mask:
        yield from _same_part_proposals(g, a_mask, u, v)
        return

    entry_plans = _feed_plans(g, a_mask, u, "out")
    exit_plans = _feed_plans(g, b_mask, v, "in")
    a_others = a_mask & ~(1 << u)
    b_others = b_mask & ~(1 << v)

    # Fan from u everywhere but v; a helper w hands v its tree arc while
    # the in-branching routes w through the in-root's part.
    if b_others:
        y1 = _first(b_others, 1)[0]
        for w in _first((rest | a_others) & ~(1 << v), 4):
            for ep in entry_plans:
                for xp in exit_plans:
                    out = fan(skip=1 << v) + ep + [(w, v)]
                    inn = (
                        star(skip=(1 << u) | (1 << w))
                        + [(u, v), (w, y1)]
                        + xp
                    )
                    yield out, inn

    # Keep the arc uv in the out-branching and let a spare vertex s be
    # fed by someone else while the in-branching uses u -> s.
    for s in _first(rest, 3):
        for x in _first(g.in_masks[s] & ~(1 << u), 3):
            for ep in entry_plans:
                for xp in exit_plans:
                    out = (
                        fan(skip=(1 << v) | (1 << s))
                        + [(u, v), (x, s)]
                        + ep
                    )
                    inn = star(skip=1 << u) + [(u, s)] + xp
                    yield out, inn

    # Singleton out-part: u dominates everything, so reroute one target
    # y through an alternative feeder and exit u via y instead.
    if a_mask == 1 << u:
        pool = [v] + _first(full & ~(1 << u) & ~(1 << v), 5)
        for y in pool:
            for x in _first(g.in_masks[y] & ~(1 << u), 3):
                for xp in exit_plans:
                    out = [
                        (u, z)
                        for z in bits(full & ~(1 << u) & ~(1 << y))
                    ]
                    out.append((x, y))
                    inn = star(skip=1 << u) + [(u, y)] + xp
                    yield out, inn


def _same_part_proposals(g, part, u, v):
    """Both roots in one part: the quotient is complete here, so every
    outside vertex pairs with the whole part in both directions."""
    outside = g.full_mask & ~part
    inner = part & ~(1 << u) & ~(1 << v)
    zs = _first(outside, 3)
    for z1 in zs:
        for z2 in zs:
            if z2 == z1:
                continue
            out = [(u, z) for z in bits(outside & ~(1 << z1))]
            out += [(v, z1), (z2, v)] + [(z1, y) for y in bits(inner)]
            inn = [(z, v) for z in bits(outside & ~(1 << z2))]
            inn += [(z2, z1), (u, z1)] + [(y, z2) for y in bits(inner)]
            yield out, inn
    # One-anchor variants for a single outside vertex or thin wiring.
    for z in zs:
        for y1 in _first(g.in_masks[v] & inner, 2):
            out = [(u, z), (y1, v)] + [(z, y) for y in bits(inner)]
            for exit_ in _first(g.out_masks[u] & (inner | 1 << v), 2):
                inn = [(u, exit_), (z, v)] + [(y, z) for y in bits(inner)]
                yield out, inn
        if g.has_arc(u, v):
            out = [(u, v), (v, z)] + [(z, y) for y in bits(inner)]
            inn = [(u, z), (z, v)] + [(y, z) for y in bits(inner)]
            yield out, inn


def _core_pair(flat, a_mask, b_mask, u, v) -> BranchingPair | None:
    """Solve a small representative core exactly, then graft the rest on.

    A root whose part takes outside arcs into it (out of it for the
    in-root) collapses to a single representative plus one such
    neighbor; everything outside the core hangs off it by one arc each
    way, which never collides with the core pair.
    """
    if a_mask == b_mask:
        return None
    in_u = flat.in_masks[u] & ~a_mask
    out_v = flat.out_masks[v] & ~b_mask
    base = (a_mask if not in_u else 1 << u) | (b_mask if not out_v else 1 << v)
    spare = flat.full_mask & ~base & ~in_u & ~out_v
    picks = [0]
    for p in _first(in_u, 2):
        for q in _first(out_v, 2):
            picks.append(1 << p | 1 << q)
            for r in _first(spare, 1):
                picks.append(1 << p | 1 << q | 1 << r)
    for extra in picks:
        core = base | extra
        if core == flat.full_mask:
            continue
        sub, old = flat.induced(core)
        if sub.n > _ORACLE_CAP:
            continue
        ok = True
        for x in bits(flat.full_mask & ~core):
            if not (flat.in_masks[x] & core) or not (
                flat.out_masks[x] & core
            ):
                ok = False
                break
        if not ok:
            continue
        iu, iv = old.index(u), old.index(v)
        small = oracle_good_pair(sub, iu, iv, max_n=_ORACLE_CAP)
        if small is None:
            continue
        lifted = _as_pair(
            u,
            v,
            [(old[a], old[b]) for a, b in small.out_branching.arcs],
            [(old[a], old[b]) for a, b in small.in_branching.arcs],
        )
        full_pair = extend_pair(flat, lifted, core)
        if verify_good_pair(flat, u, v, full_pair):
            return full_pair
    return None


# --- quasi-transitive front door ---


def decide_quasi_transitive(g: Digraph, u: int, v: int) -> Verdict:
    """Decide a flat quasi-transitive digraph.

    Strong inputs decompose over a semicomplete quotient and go to the
    composition engine; non-strong ones decompose over a transitive
    quotient and stay here.  All evidence comes back relabelled to the
    input's own vertices.
    """
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise InvalidInput("roots out of range")
    if g.n == 1:
        return Verdict(
            yes=True, u=u, v=v, reason=YES, pair=_as_pair(u, v, [], [])
        )
    if not is_quasi_transitive(g):
        raise InvalidInput("input digraph is not quasi-transitive")
    dec = qt_decompose(g)
    inv = [0] * g.n
    for new, old in enumerate(dec.order):
        inv[old] = new
    if dec.kind == "strong":
        from .composition_engine import decide_composition

        inner = decide_composition(dec.composition, inv[u], inv[v])
    else:
        inner = decide_transitive_composition(dec.composition, inv[u], inv[v])
    return translate_verdict(g, dec.composition, dec.order, inner, u, v)


def condensed_transitive(comp: Composition):
    """Regroup a composition with a non-strong semicomplete quotient as a
    transitive composition by merging parts along the quotient's strong
    components.

    Returns (composition, order) with order[new flat] = old flat vertex.
    Between two strong components of a semicomplete digraph every arc
    runs the same way, so the merged parts are uniformly joined and the
    new quotient is a transitive tournament.
    """
    scc = strong_components(comp.quotient)
    if scc.t < 2:
        raise InvalidInput("quotient is already strong")
    flat = comp.flatten()
    masks = []
    for comp_mask in scc.components:
        m = 0
        for part in bits(comp_mask):
            m |= comp.part_mask(part)
        masks.append(m)
    built = composition_from_partition(flat, masks)
    if built is None:
        raise InternalInconsistency(
            "quotient strong components did not merge uniformly"
        )
    return built


def translate_verdict(
    target, comp: Composition, order, verdict: Verdict, u: int, v: int
) -> Verdict:
    """Relabel a verdict through order[inner vertex] = target vertex.

    `target` is only used to re-verify a translated pair; obstruction
    evidence is positional and survives relabelling as-is.
    """
    order = list(order)

    def amap(arc):
        return (order[arc[0]], order[arc[1]])

    pair = None
    if verdict.pair is not None:
        pair = _as_pair(
            u,
            v,
            [amap(a) for a in verdict.pair.out_branching.arcs],
            [amap(a) for a in verdict.pair.in_branching.arcs],
        )
        flat = target.flatten() if isinstance(target, Composition) else target
        if not verify_good_pair(flat, u, v, pair):
            raise InternalInconsistency("translated pair fails verification")
    mapping = None
    if verdict.mapping is not None:
        mapping = tuple(order[x] for x in verdict.mapping)
    arc = amap(verdict.arc) if verdict.arc is not None else None
    refinement = None
    if verdict.reason in (LAYERED_A, LAYERED_B):
        cells = verdict.refinement
        if cells is None:
            cells = tuple(comp.part_of(i) for i in range(comp.n))
        out_cells = [0] * len(order)
        for i, cell in enumerate(cells):
            out_cells[order[i]] = cell
        refinement = tuple(out_cells)
    forcing = None
    if verdict.forcing is not None:
        forcing = tuple(
            (
                side,
                rule,
                order[a] if a >= 0 else a,
                order[b] if b >= 0 else b,
            )
            for side, rule, a, b in verdict.forcing
        )
    return Verdict(
        yes=verdict.yes,
        u=u,
        v=v,
        reason=verdict.reason,
        pair=pair,
        exception_id=verdict.exception_id,
        mapping=mapping,
        side=verdict.side,
        arc=arc,
        witness=verdict.witness,
        conditions=verdict.conditions,
        refinement=refinement,
        forcing=forcing,
        family=verdict.family,
        family_reversed=verdict.family_reversed,
        note=verdict.note,
    )
