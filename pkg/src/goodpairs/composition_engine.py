"""Decision engine for compositions over a strong semicomplete quotient.

The flattened digraph of such a composition either carries an
arc-disjoint out-branching rooted at u and in-branching rooted at v,
or it falls into a short list of blocked shapes: a root with too few
arcs, one of seven named small families, or a layered quotient witness
whose designated arcs all keep their blocking power once part sizes
are taken into account.  decide_composition checks the blocked shapes
exactly and otherwise builds a verified pair, preferring structured
lifts of quotient branchings over search.
"""

from __future__ import annotations

from itertools import product

from . import semicomplete
from .branchings import Branching, BranchingPair, extend_pair, verify_good_pair
from .composition import Composition, finest_refinement, is_semicomplete
from .digraph import (
    Arc,
    Digraph,
    bits,
    coreach_mask,
    is_k_arc_strong,
    mask_of,
    reach_mask,
    small_digraph_match,
)
from .errors import InternalInconsistency, InvalidInput, ResourceExceeded
from .forcing import force_trace
from .oracle import oracle_good_pair
from .verdicts import (
    ARC_FORCING,
    ARC_OBSTRUCTION,
    DEGREE,
    KNOWN_FAMILY,
    LAYERED_A,
    LAYERED_B,
    Verdict,
    YES,
)
from .witnesses import arc_condition, iter_type_a, iter_type_b

# bound on candidate combinations tried while repairing a lifted pair
_REPAIR_CAP = 600


def _is_strong(g: Digraph) -> bool:
    full = g.full_mask
    return reach_mask(g, 1) == full and coreach_mask(g, 1) == full


# --- the seven blocked family shapes, recognized on the flat digraph ---


def _match_head_pair(g: Digraph, u: int, v: int) -> bool:
    """Two independent pairs cycling into a two-vertex head part.

    The only blocked shape that is 2-arc-strong: a three part cycle
    whose parts are two independent pairs and {u, v}, with at most the
    arc v->u inside the head.
    """
    if g.n != 6 or u == v or g.has_arc(u, v):
        return False
    rest = [w for w in range(g.n) if w not in (u, v)]
    first = [
        w
        for w in rest
        if g.has_arc(u, w)
        and g.has_arc(v, w)
        and not g.has_arc(w, u)
        and not g.has_arc(w, v)
    ]
    if len(first) != 2:
        return False
    second = [w for w in rest if w not in first]
    expected = set()
    for w in first:
        expected.add((u, w))
        expected.add((v, w))
        for x in second:
            expected.add((w, x))
    for x in second:
        expected.add((x, u))
        expected.add((x, v))
    actual = set(g.arcs())
    if not expected <= actual:
        return False
    return actual - expected <= {(v, u)}


def _match_middle_row(g: Digraph, u: int, v: int) -> bool:
    """u beats an independent middle which beats v, with u -> v present."""
    if u == v or g.n < 3:
        return False
    middle = [w for w in range(g.n) if w not in (u, v)]
    expected = {(u, v)}
    for w in middle:
        expected.add((u, w))
        expected.add((w, v))
    actual = set(g.arcs())
    if not expected <= actual:
        return False
    return actual - expected <= {(v, u)}


def _match_thin_cycle(g: Digraph, u: int, v: int) -> bool:
    """Cycle u -> middle -> v -> u where the middle has at most one arc."""
    if u == v or g.n < 3:
        return False
    middle = set(range(g.n)) - {u, v}
    expected = {(v, u)}
    for w in middle:
        expected.add((u, w))
        expected.add((w, v))
    actual = set(g.arcs())
    if not expected <= actual:
        return False
    extras = actual - expected
    if len(extras) > 1:
        return False
    return all(x in middle and y in middle for x, y in extras)


def _match_hub(g: Digraph, u: int, v: int) -> bool:
    """Part around u, part around v, and a single hub z cycling them.

    The u part may carry extra arcs pointing at u, the v part extra
    arcs leaving v; everything else is the plain three part cycle
    u-part -> v-part -> z -> u-part.
    """
    if u == v or g.n < 3:
        return False
    vertices = set(range(g.n))
    actual = set(g.arcs())
    for z in sorted(vertices - {u, v}):
        head = {
            w for w in vertices if w != z and g.has_arc(z, w) and not g.has_arc(w, z)
        }
        tail = {
            w for w in vertices if w != z and g.has_arc(w, z) and not g.has_arc(z, w)
        }
        if u not in head or v not in tail:
            continue
        if head & tail or head | tail | {z} != vertices:
            continue
        expected = set()
        for w in head:
            expected.add((z, w))
            for x in tail:
                expected.add((w, x))
        for x in tail:
            expected.add((x, z))
        if not expected <= actual:
            continue
        extras = actual - expected
        ok = all(
            (y == u and x in head and x != u) or (x == v and y in tail and y != v)
            for x, y in extras
        )
        if ok:
            return True
    return False


def _match_ring(g: Digraph, u: int, v: int) -> str | None:
    """Four or five part ring, optionally with a reworked head block.

    Returns "e" for the clean ring (head part -> hub -> z -> u part ->
    v, all skips backward), "f" for the strong variant where the hub is
    a single vertex and some head-to-hub arcs are reversed or doubled,
    and None otherwise.
    """
    if u == v:
        return None
    vertices = set(range(g.n))
    head_u = {w for w in vertices if g.has_arc(w, v)}
    after = {w for w in vertices if g.has_arc(v, w)}
    if head_u & after or u not in head_u:
        return None
    if head_u | after | {v} != vertices:
        return None
    arcs = set(g.arcs())
    for z in sorted(after):
        hub = {w for w in vertices if g.has_arc(w, z)} - {v}
        if not hub or z in hub or not hub <= after:
            continue
        head = after - {z} - hub
        expected = set()
        for w in head_u:
            expected.add((w, v))
            expected.add((z, w))
            for x in head | hub:
                expected.add((w, x))
        for k in hub:
            expected.add((k, z))
            expected.add((v, k))
        expected.add((v, z))
        for h in head:
            expected.add((v, h))
            expected.add((z, h))
        if not expected <= arcs:
            continue
        rest = {a for a in arcs if not (a[0] in head and a[1] in head)} - expected
        star = {(x, y) for x, y in rest if x in head_u and x != u and y == u}
        cross = rest - star
        if cross == {(h, k) for h in head for k in hub}:
            return "e"
        if len(hub) == 1 and head:
            k1 = next(iter(hub))
            shapes_ok = all(
                (x in head and y == k1) or (x == k1 and y in head) for x, y in cross
            )
            joined = {x for x, y in cross if y == k1} | {
                y for x, y in cross if x == k1
            }
            if shapes_ok and joined == head and _is_strong(g):
                return "f"
    return None


def _match_blocked_quad(g: Digraph, u: int, v: int) -> bool:
    pattern = semicomplete.EXCEPTION_PATTERNS["e"][0]
    if g.n != pattern.n or u == v:
        return False
    return small_digraph_match(g, pattern, pinned={0: u, 3: v}) is not None


_FLAT_MATCHERS = (
    ("a", _match_head_pair),
    ("b", _match_middle_row),
    ("c", _match_thin_cycle),
    ("d", _match_hub),
)


def match_known_family(comp: Composition, u: int, v: int):
    """(family id, reversed flag) when the flat digraph is a blocked shape.

    The reversed flag records that the converse digraph with the roots
    swapped matched instead of the digraph itself.
    """
    if u == v:
        return None
    flat = comp.flatten()
    for reversed_ in (False, True):
        g, a, b = (flat, u, v) if not reversed_ else (flat.converse(), v, u)
        for family, matcher in _FLAT_MATCHERS:
            if matcher(g, a, b):
                return family, reversed_
        ring = _match_ring(g, a, b)
        if ring is not None:
            return ring, reversed_
        if _match_blocked_quad(g, a, b):
            return "g", reversed_
    return None


# --- constructions ---


def two_arc_strong_pair(g: Digraph, u: int, v: int) -> BranchingPair:
    """Good (u, v)-pair in a 2-arc-strong digraph outside the blocked shape."""
    pair = semicomplete.try_construct_pair(g, u, v)
    if pair is not None and verify_good_pair(g, u, v, pair):
        return pair
    if g.n <= 9:
        pair = oracle_good_pair(g, u, v)
        if pair is not None:
            return pair
        raise InternalInconsistency(
            f"2-arc-strong digraph refused a good ({u},{v})-pair"
        )
    # shrink to a 2-arc-strong core that keeps the roots and stays off
    # the blocked shape, search the core, then hang the rest back on
    core = g.full_mask
    changed = True
    while core.bit_count() > 9 and changed:
        changed = False
        for w in range(g.n):
            if w == u or w == v or not core >> w & 1:
                continue
            cand = core & ~(1 << w)
            sub, old = g.induced(cand)
            iu, iv = old.index(u), old.index(v)
            if not is_k_arc_strong(sub, 2)[0]:
                continue
            if _match_head_pair(sub, iu, iv):
                continue
            if _match_head_pair(sub.converse(), iv, iu):
                continue
            core = cand
            changed = True
            break
    if core.bit_count() <= 9:
        sub, old = g.induced(core)
        iu, iv = old.index(u), old.index(v)
        found = oracle_good_pair(sub, iu, iv)
        if found is not None:
            plus = tuple((old[x], old[y]) for x, y in found.out_branching.arcs)
            minus = tuple((old[x], old[y]) for x, y in found.in_branching.arcs)
            core_pair = BranchingPair(
                Branching(u, plus, "out"), Branching(v, minus, "in")
            )
            pair = extend_pair(g, core_pair, core)
            if verify_good_pair(g, u, v, pair):
                return pair
    raise InternalInconsistency(
        f"no construction route for the 2-arc-strong input at n={g.n}"
    )


def _lift_pair(
    comp: Composition,
    u: int,
    v: int,
    o_arcs,
    i_arcs,
    src_over=None,
    tgt_over=None,
    plus_parent=None,
    minus_exit=None,
) -> BranchingPair:
    """Flatten a quotient branching pair into part level branchings.

    Each quotient arc (x, y) of the out-branching becomes the fan from
    one source vertex of part x onto every vertex of part y; the
    in-branching dually drains every vertex of part x onto one target
    in part y.  The root parts are finished with cover arcs from fixed
    neighbour parts.  src_over / tgt_over replace the representative
    used for a single quotient arc, plus_parent / minus_exit replace
    the arc touching a single flat vertex.  The caller verifies.
    """
    quotient = comp.quotient
    pu, pv = comp.part_of(u), comp.part_of(v)
    src_rep = {p: comp.offsets[p] for p in range(comp.s)}
    tgt_rep = dict(src_rep)
    src_rep[pv] = v
    src_rep[pu] = u
    tgt_rep[pu] = u
    tgt_rep[pv] = v
    src_over = src_over or {}
    tgt_over = tgt_over or {}
    plus_parent = plus_parent or {}
    minus_exit = minus_exit or {}

    plus: list[Arc] = []
    for x, y in o_arcs:
        source = src_over.get((x, y), src_rep[x])
        for w in bits(comp.part_mask(y)):
            plus.append(plus_parent.get(w, (source, w)))
    z0 = min(bits(quotient.in_masks[pu]))
    for w in bits(comp.part_mask(pu)):
        if w != u:
            plus.append(plus_parent.get(w, (src_rep[z0], w)))

    minus: list[Arc] = []
    for x, y in i_arcs:
        target = tgt_over.get((x, y), tgt_rep[y])
        for w in bits(comp.part_mask(x)):
            minus.append(minus_exit.get(w, (w, target)))
    z1 = min(bits(quotient.out_masks[pv]))
    for w in bits(comp.part_mask(pv)):
        if w != v:
            minus.append(minus_exit.get(w, (w, tgt_rep[z1])))

    return BranchingPair(
        Branching(u, tuple(plus), "out"), Branching(v, tuple(minus), "in")
    )


def _root_parent_options(comp, flat, u, v, i_arcs):
    """Choices for v's parent when both roots share a part.

    Yields (tgt_over, parent arc or None); re-targeting an in-arc of
    the root part frees the cross arcs into v that the drain would
    otherwise occupy.
    """
    p = comp.part_of(u)
    i_set = set(i_arcs)
    yield {}, None
    for w in sorted(bits(flat.in_masks[v])):
        z = comp.part_of(w)
        if z != p and (z, p) in i_set:
            yield {(z, p): u}, (w, v)
        else:
            yield {}, (w, v)


def _root_exit_options(comp, flat, u, v, o_arcs):
    """Choices for u's exit when both roots share a part."""
    p = comp.part_of(u)
    o_set = set(o_arcs)
    yield {}, None
    for w in sorted(bits(flat.out_masks[u])):
        z = comp.part_of(w)
        if z != p and (p, z) in o_set:
            yield {(p, z): v}, (u, w)
        else:
            yield {}, (u, w)


def _lift_quotient_yes(comp, flat, u, v, pair_s) -> BranchingPair | None:
    """Lift a good quotient pair; verified result or None."""
    o_arcs = pair_s.out_branching.arcs
    i_arcs = pair_s.in_branching.arcs
    pu, pv = comp.part_of(u), comp.part_of(v)
    if pu != pv or u == v:
        pair = _lift_pair(comp, u, v, o_arcs, i_arcs)
        if verify_good_pair(flat, u, v, pair):
            return pair
        return None
    # same part, distinct roots: u's exit and v's parent can collide
    # with the lifted fans, so enumerate small repairs for both ends
    tried = 0
    for tgt_over, parent in _root_parent_options(comp, flat, u, v, i_arcs):
        for src_over, exit_arc in _root_exit_options(comp, flat, u, v, o_arcs):
            tried += 1
            if tried > _REPAIR_CAP:
                return None
            pair = _lift_pair(
                comp,
                u,
                v,
                o_arcs,
                i_arcs,
                src_over=src_over,
                tgt_over=tgt_over,
                plus_parent={v: parent} if parent else None,
                minus_exit={u: exit_arc} if exit_arc else None,
            )
            if verify_good_pair(flat, u, v, pair):
                return pair
    return None


def _witness_move_options(comp, flat, arc):
    """Ways to decouple one shared quotient arc (x, y).

    A tail move sources the plus fan of the arc at a vertex w0 of part
    x that has a second flat out-arc and reroutes w0's drain exit; a
    head move drains the arc into a vertex of part y with a second
    in-arc and reroutes that vertex's plus parent.  Yields
    (src_over, tgt_over, plus_parent item, minus_exit item).
    """
    x, y = arc
    if comp.part_mask(x).bit_count() >= 2:
        for w0 in bits(comp.part_mask(x)):
            if flat.out_degree(w0) < 2:
                continue
            for t in sorted(bits(flat.out_masks[w0])):
                if comp.part_of(t) == y:
                    # rerouting back into the shared head keeps the clash
                    continue
                yield {(x, y): w0}, {}, None, (w0, (w0, t))
    if comp.part_mask(y).bit_count() >= 2:
        for w0 in bits(comp.part_mask(y)):
            if flat.in_degree(w0) < 2:
                continue
            for q in sorted(bits(flat.in_masks[w0])):
                if comp.part_of(q) == x:
                    continue
                yield {}, {(x, y): w0}, (w0, (q, w0)), None


def _lift_with_moves(comp, flat, u, v, pair_s) -> BranchingPair | None:
    """Lift a quotient pair that shares arcs, decoupling every shared arc."""
    o_arcs = pair_s.out_branching.arcs
    i_arcs = pair_s.in_branching.arcs
    shared = sorted(set(o_arcs) & set(i_arcs))
    option_lists = []
    for arc in shared:
        options = list(_witness_move_options(comp, flat, arc))
        if not options:
            return None
        option_lists.append(options[:12])
    tried = 0
    for combo in product(*option_lists):
        tried += 1
        if tried > _REPAIR_CAP:
            return None
        src_over: dict = {}
        tgt_over: dict = {}
        plus_parent: dict = {}
        minus_exit: dict = {}
        for so, to, pp, me in combo:
            src_over.update(so)
            tgt_over.update(to)
            if pp is not None:
                plus_parent[pp[0]] = pp[1]
            if me is not None:
                minus_exit[me[0]] = me[1]
        pair = _lift_pair(
            comp, u, v, o_arcs, i_arcs, src_over, tgt_over, plus_parent, minus_exit
        )
        if verify_good_pair(flat, u, v, pair):
            return pair
    return None


def _lift_from_witnesses(comp, flat, u, v) -> BranchingPair | None:
    """Build a pair although the quotient itself has none.

    Every layered witness of the quotient has a designated arc that
    loses its blocking power inside the composition (otherwise the
    decision would have been no), so an almost good quotient pair can
    be lifted and its shared arcs decoupled part by part.
    """
    quotient = comp.quotient
    pu, pv = comp.part_of(u), comp.part_of(v)
    attempts = []
    for w in iter_type_a(quotient, pu, pv):
        for r, arc in enumerate(w.backward_arcs):
            if not arc_condition(comp, arc, flat):
                attempts.append((w, r))
        if len(attempts) >= 6:
            break
    for w in iter_type_b(quotient, pu, pv):
        if not any(arc_condition(comp, arc, flat) for arc in w.backward_arcs):
            attempts.append((w, None))
        if len(attempts) >= 10:
            break
    for w, index in attempts[:10]:
        try:
            if index is None:
                pair_s = semicomplete.almost_good_pair(quotient, w)
            else:
                pair_s = semicomplete.almost_good_pair(quotient, w, shared_index=index)
        except InternalInconsistency:
            continue
        pair = _lift_with_moves(comp, flat, u, v, pair_s)
        if pair is not None:
            return pair
    return None


def _construct_by_trimming(comp, flat, u, v) -> BranchingPair | None:
    """Shrink every part, solve the small core, and extend back out."""
    caps = [c for c in (4, 3, 2) if comp.s * c <= 12]
    pu, pv = comp.part_of(u), comp.part_of(v)
    for cap in caps:
        keep: list[int] = []
        keep_locals: list[list[int]] = []
        for p in range(comp.s):
            members = sorted(bits(comp.part_mask(p)))

            def priority(w: int) -> tuple[int, int]:
                if w in (u, v):
                    rank = 0
                elif p == pu and flat.has_arc(u, w):
                    rank = 1
                elif p == pv and flat.has_arc(w, v):
                    rank = 1
                else:
                    rank = 2
                return rank, w

            chosen = sorted(sorted(members, key=priority)[:cap])
            keep.extend(chosen)
            keep_locals.append([comp.local(w) for w in chosen])
        parts = []
        for p, locals_ in enumerate(keep_locals):
            sub, _ = comp.parts[p].induced(mask_of(locals_))
            parts.append(sub)
        comp2 = Composition(comp.quotient, tuple(parts))
        old_of = sorted(keep)
        new_of = {w: i for i, w in enumerate(old_of)}
        try:
            verdict2 = decide_composition(comp2, new_of[u], new_of[v])
        except (ResourceExceeded, InternalInconsistency):
            continue
        if not verdict2.yes:
            continue
        plus = tuple((old_of[x], old_of[y]) for x, y in verdict2.pair.out_branching.arcs)
        minus = tuple((old_of[x], old_of[y]) for x, y in verdict2.pair.in_branching.arcs)
        core_pair = BranchingPair(
            Branching(u, plus, "out"), Branching(v, minus, "in")
        )
        try:
            pair = extend_pair(flat, core_pair, mask_of(old_of))
        except InternalInconsistency:
            continue
        if verify_good_pair(flat, u, v, pair):
            return pair
    return None


def construct_composition_pair(
    comp: Composition, flat: Digraph, u: int, v: int
) -> BranchingPair:
    """Build a verified pair once the decision promised one exists."""
    quotient = comp.quotient
    pu, pv = comp.part_of(u), comp.part_of(v)
    s_verdict = semicomplete.decide_semicomplete(quotient, pu, pv)
    if s_verdict.yes:
        pair = _lift_quotient_yes(comp, flat, u, v, s_verdict.pair)
        if pair is not None:
            return pair
    elif pu != pv and s_verdict.reason in (ARC_OBSTRUCTION, LAYERED_A):
        pair = _lift_from_witnesses(comp, flat, u, v)
        if pair is not None:
            return pair
    pair = semicomplete.try_construct_pair(flat, u, v)
    if pair is not None and verify_good_pair(flat, u, v, pair):
        return pair
    if flat.n <= 12:
        pair = oracle_good_pair(flat, u, v, max_n=12)
        if pair is not None:
            return pair
        raise InternalInconsistency(
            f"characterization promised a good ({u},{v})-pair but none was built"
        )
    pair = _construct_by_trimming(comp, flat, u, v)
    if pair is not None:
        return pair
    raise InternalInconsistency(
        f"good ({u},{v})-pair promised but every construction route "
        f"ran out at n={flat.n}"
    )


def decide_composition(comp: Composition, u: int, v: int) -> Verdict:
    """Decide a composition with a strong semicomplete quotient.

    No-verdicts carry checkable evidence: a starved root degree, the
    matched family, or a quotient witness with the per-arc blocking
    conditions.  Yes-verdicts carry a verified branching pair.
    """
    quotient = comp.quotient
    if comp.s < 2:
        raise InvalidInput("composition needs at least two parts")
    if not is_semicomplete(quotient):
        raise InvalidInput("quotient is not semicomplete")
    if not _is_strong(quotient):
        raise InvalidInput("quotient is not strong")
    flat = comp.flatten()
    if not (0 <= u < flat.n and 0 <= v < flat.n):
        raise InvalidInput("roots out of range")
    if u != v and (flat.out_degree(u) < 2 or flat.in_degree(v) < 2):
        return Verdict(yes=False, u=u, v=v, reason=DEGREE)
    hit = match_known_family(comp, u, v)
    if hit is not None:
        family, reversed_ = hit
        return Verdict(
            yes=False,
            u=u,
            v=v,
            reason=KNOWN_FAMILY,
            family=family,
            family_reversed=reversed_,
        )
    if is_k_arc_strong(flat, 2)[0]:
        pair = two_arc_strong_pair(flat, u, v)
        return Verdict(yes=True, u=u, v=v, reason=YES, pair=pair)
    # A layered witness on any uniform repartition blocks the flat
    # digraph, and coarse parts can hide one, so the finest partition
    # is checked first and the given one kept as a second chance.
    refined, order = finest_refinement(comp)
    attempts: list[tuple[Composition, int, int, tuple[int, ...] | None]] = []
    if refined is not comp:
        inv = [0] * flat.n
        for new, old in enumerate(order):
            inv[old] = new
        cells = tuple(refined.part_of(inv[w]) for w in range(flat.n))
        attempts.append((refined, inv[u], inv[v], cells))
    attempts.append((comp, u, v, None))
    deferred: ResourceExceeded | None = None
    for target, cu, cv, cells in attempts:
        try:
            verdict = _layered_no(target, cu, cv, u, v, cells)
        except ResourceExceeded as exc:
            deferred = exc
            continue
        if verdict is not None:
            return verdict
    status, trace = force_trace(flat, u, v)
    if status == "blocked":
        return Verdict(yes=False, u=u, v=v, reason=ARC_FORCING, forcing=trace)
    if deferred is not None:
        raise deferred
    pair = construct_composition_pair(comp, flat, u, v)
    return Verdict(yes=True, u=u, v=v, reason=YES, pair=pair)


def _layered_no(
    comp: Composition,
    u: int,
    v: int,
    report_u: int,
    report_v: int,
    cells: tuple[int, ...] | None,
) -> Verdict | None:
    """Blocking layered verdict over this part partition, if any."""
    flat = comp.flatten()
    pu, pv = comp.part_of(u), comp.part_of(v)
    for w in iter_type_a(comp.quotient, pu, pv):
        conds = tuple(arc_condition(comp, arc, flat) for arc in w.backward_arcs)
        if all(conds):
            return Verdict(
                yes=False,
                u=report_u,
                v=report_v,
                reason=LAYERED_A,
                witness=w,
                conditions=conds,
                refinement=cells,
            )
    if pu != pv:
        for w in iter_type_b(comp.quotient, pu, pv):
            conds = tuple(arc_condition(comp, arc, flat) for arc in w.backward_arcs)
            if any(conds):
                return Verdict(
                    yes=False,
                    u=report_u,
                    v=report_v,
                    reason=LAYERED_B,
                    witness=w,
                    conditions=conds,
                    refinement=cells,
                )
    return None
