import pytest

from goodpairs.branchings import Branching, BranchingPair
from goodpairs.composition import Composition, singleton
from goodpairs.digraph import Digraph
from goodpairs.errors import InvalidInput
from goodpairs.semicomplete import decide_semicomplete
from goodpairs.verdicts import (
    ARC_OBSTRUCTION,
    DEGREE,
    LAYERED_A,
    MIDDLE_BLOCKED,
    ROOT_COMPONENT,
    TREE_SIDE,
    YES,
    Verdict,
    validate_verdict,
    verdict_from_dict,
    verdict_to_dict,
)


def two_cycle():
    return Digraph(2, [(0, 1), (1, 0)])


def test_constructor_guards():
    # [TRIVIAL] flag, reason, and payload must agree
    with pytest.raises(InvalidInput):
        Verdict(yes=True, u=0, v=0, reason=YES)  # no pair
    with pytest.raises(InvalidInput):
        Verdict(yes=False, u=0, v=0, reason="made-up")
    with pytest.raises(InvalidInput):
        Verdict(yes=True, u=0, v=0, reason=ROOT_COMPONENT)


def test_validate_yes_pair():
    g = two_cycle()
    pair = BranchingPair(
        Branching(0, ((0, 1),), "out"), Branching(1, ((0, 1),), "in")
    )
    bad = validate_verdict(
        g, Verdict(yes=True, u=0, v=1, reason=YES, pair=pair)
    )
    # [TRIVIAL] the single arc cannot serve both branchings
    assert bad is not None
    trip = Digraph(3, [(0, 1), (1, 2), (2, 0), (0, 2), (2, 1), (1, 0)])
    ver = decide_semicomplete(trip, 0, 1)
    assert ver.yes and validate_verdict(trip, ver) is None


def test_validate_root_component_sides():
    g = Digraph(2, [(0, 1)])
    ok = Verdict(yes=False, u=1, v=0, reason=ROOT_COMPONENT, side="out")
    assert validate_verdict(g, ok) is None
    # [TRIVIAL] vertex 1 is reachable from 0, so the "in" claim is false
    bad = Verdict(yes=False, u=1, v=1, reason=ROOT_COMPONENT, side="in")
    assert validate_verdict(g, bad) is not None


def test_validate_arc_obstruction():
    g = two_cycle()
    ok = Verdict(yes=False, u=0, v=1, reason=ARC_OBSTRUCTION, arc=(0, 1))
    assert validate_verdict(g, ok) is None
    # [DERIVED] removing (1,0) leaves 0 -> 1, which still spans from 0
    bad = Verdict(yes=False, u=0, v=1, reason=ARC_OBSTRUCTION, arc=(1, 0))
    assert validate_verdict(g, bad) is not None


def test_validate_small_exception_through_engine():
    # [DERIVED] relabelled two-cycle-plus-hub blocks the pinned roots
    g = Digraph(3, [(2, 1), (1, 2), (2, 0), (0, 1)])
    ver = decide_semicomplete(g, 2, 1)
    assert ver.reason == "small-exception" and ver.exception_id == "c"
    assert validate_verdict(g, ver) is None
    tampered = Verdict(
        yes=False,
        u=2,
        v=1,
        reason=ver.reason,
        exception_id=ver.exception_id,
        mapping=tuple(reversed(ver.mapping)),
    )
    assert validate_verdict(g, tampered) is not None


def test_validate_layered_on_flat_tournament():
    # [DERIVED] five singleton levels with designated arcs (4,2),(3,1),(2,0);
    # every pair rooted (3,1) must reuse a designated arc, and the oracle
    # confirmed this instance is a NO
    up = [(0, 1), (0, 3), (0, 4), (1, 2), (1, 4), (2, 3), (3, 4)]
    g = Digraph(5, up + [(4, 2), (3, 1), (2, 0)])
    ver = decide_semicomplete(g, 3, 1)
    assert ver.reason == LAYERED_A
    assert ver.witness.backward_arcs == ((4, 2), (3, 1), (2, 0))
    assert validate_verdict(g, ver) is None
    moved = Verdict(yes=False, u=3, v=0, reason=LAYERED_A, witness=ver.witness)
    assert validate_verdict(g, moved) is not None


def test_validate_degree_needs_small_root_degree():
    comp = Composition(Digraph(2, [(0, 1)]), (singleton(), singleton()))
    ok = Verdict(yes=False, u=0, v=1, reason=DEGREE)
    assert validate_verdict(comp, ok) is None
    big = Composition(
        Digraph(2, [(0, 1), (1, 0)]),
        (Digraph(2, []), Digraph(2, [])),
    )
    assert validate_verdict(big, Verdict(yes=False, u=0, v=2, reason=DEGREE))


def test_validate_middle_blocked():
    g = Digraph(4, [(0, 3), (0, 1), (0, 2), (1, 3), (2, 3)])
    ok = Verdict(yes=False, u=0, v=3, reason=MIDDLE_BLOCKED)
    assert validate_verdict(g, ok) is None
    noisy = g.with_arcs([(1, 2)])
    assert validate_verdict(noisy, ok) is not None


def test_validate_tree_side():
    # [DERIVED] path 0 -> 1 plus all arcs into 2: out-side tree shape
    g = Digraph(3, [(0, 1), (0, 2), (1, 2)])
    ok = Verdict(yes=False, u=0, v=2, reason=TREE_SIDE, side="out")
    assert validate_verdict(g, ok) is None
    flipped = Verdict(yes=False, u=2, v=0, reason=TREE_SIDE, side="in")
    assert validate_verdict(g.converse(), flipped) is None
    assert validate_verdict(g, flipped) is not None


def test_dict_round_trip():
    g = two_cycle()
    ver = decide_semicomplete(g, 0, 1)
    assert verdict_from_dict(verdict_to_dict(ver)) == ver
    trip = Digraph(3, [(0, 1), (1, 2), (2, 0), (0, 2), (2, 1), (1, 0)])
    yes = decide_semicomplete(trip, 0, 1)
    assert verdict_from_dict(verdict_to_dict(yes)) == yes
    with pytest.raises(InvalidInput):
        verdict_from_dict({"answer": "no"})
