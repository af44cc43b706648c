import pytest

from goodpairs.composition import Composition, directed_cycle, independent, singleton
from goodpairs.digraph import Digraph, mask_of
from goodpairs.errors import ResourceExceeded
from goodpairs.witnesses import (
    TypeABWitness,
    arc_condition,
    iter_type_a,
    iter_type_b,
    validate_type_a,
    validate_type_b,
    validate_witness,
)


def complete_digraph(n):
    return Digraph(n, [(a, b) for a in range(n) for b in range(n) if a != b])


def back_arc_order4():
    # total order 0 < 1 < 2 < 3 plus the single backward arc 3 -> 0
    return Digraph(
        4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 0)]
    )


def chain_order4():
    # levels {0} < {1,2} < {3} with designated chain 3 -> 1 -> 0
    return Digraph(
        4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 1), (1, 0)]
    )


def test_hand_built_type_a_validates():
    w = TypeABWitness(
        kind="A",
        sets=(1 << 0, mask_of([1, 2]), 1 << 3),
        backward_arcs=((3, 0),),
        a=1,
        b=2,
    )
    assert validate_type_a(back_arc_order4(), w) is None
    assert validate_witness(back_arc_order4(), w) is None


def test_type_a_validator_rejects_tampering():
    g = back_arc_order4()
    base = dict(
        kind="A",
        sets=(1 << 0, mask_of([1, 2]), 1 << 3),
        backward_arcs=((3, 0),),
        a=1,
        b=2,
    )
    wrong_root = TypeABWitness(**{**base, "a": 3})
    assert "out-root" in validate_type_a(g, wrong_root)
    wrong_arc = TypeABWitness(**{**base, "backward_arcs": ((3, 1),)})
    assert validate_type_a(g, wrong_arc) is not None
    swapped = TypeABWitness(**{**base, "sets": (1 << 3, mask_of([1, 2]), 1 << 0)})
    assert validate_type_a(g, swapped) is not None
    not_semi = Digraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert "semicomplete" in validate_type_a(not_semi, TypeABWitness(**base))


def test_hand_built_type_b_validates():
    w = TypeABWitness(
        kind="B",
        sets=(1 << 1, mask_of([0, 2])),
        backward_arcs=((0, 1),),
        a=0,
        b=1,
    )
    assert validate_type_b(directed_cycle(3), w) is None


def test_type_b_two_level_chain_validates():
    w = TypeABWitness(
        kind="B",
        sets=(1 << 0, mask_of([1, 2]), 1 << 3),
        backward_arcs=((3, 1), (1, 0)),
        a=3,
        b=0,
    )
    assert validate_type_b(chain_order4(), w) is None
    same_roots = TypeABWitness(
        kind="B",
        sets=(1 << 0, mask_of([1, 2]), 1 << 3),
        backward_arcs=((3, 1), (1, 0)),
        a=0,
        b=0,
    )
    assert "distinct roots" in validate_type_b(chain_order4(), same_roots)


def test_enumerate_type_a_back_arc_order():
    # [DERIVED] only the split {0} | {1,2} | {3} leaves a single downward arc
    g = back_arc_order4()
    found = list(iter_type_a(g, 1, 2))
    assert len(found) == 1
    w = found[0]
    assert w.sets == (1 << 0, mask_of([1, 2]), 1 << 3)
    assert w.backward_arcs == ((3, 0),)
    assert validate_type_a(g, w) is None
    # [DERIVED] the roots (3, 0) admit no kind-A split
    assert list(iter_type_a(g, 3, 0)) == []


def test_enumerate_type_b_back_arc_order():
    g = back_arc_order4()
    assert list(iter_type_b(g, 1, 2)) == []
    # [DERIVED] the bottom level can be any downward-closed chunk of the
    # total order 0 < 1 < 2 that keeps (3,0) as its only entering arc
    found = list(iter_type_b(g, 3, 0))
    assert sorted(w.sets[0] for w in found) == [
        mask_of([0]),
        mask_of([0, 1]),
        mask_of([0, 1, 2]),
    ]
    for w in found:
        assert w.backward_arcs == ((3, 0),)
        assert validate_type_b(g, w) is None


def test_enumerate_type_b_chain():
    g = chain_order4()
    found = list(iter_type_b(g, 3, 0))
    for w in found:
        assert validate_type_b(g, w) is None
    assert any(w.beta == 2 and w.backward_arcs == ((3, 1), (1, 0)) for w in found)
    assert any(w.beta == 1 for w in found)


def test_enumerate_triangle():
    g = directed_cycle(3)
    found = list(iter_type_b(g, 0, 1))
    assert sorted(w.sets[0] for w in found) == [mask_of([1]), mask_of([1, 2])]
    for w in found:
        assert w.backward_arcs == ((0, 1),)
        assert validate_type_b(g, w) is None
    # same-root witnesses only come in kind A
    assert list(iter_type_b(g, 2, 2)) == []
    same = list(iter_type_a(g, 2, 2))
    assert len(same) == 1
    assert same[0].sets == (1 << 1, 1 << 2, 1 << 0)
    assert validate_type_a(g, same[0]) is None


def test_enumerate_nothing_on_well_connected():
    # [DERIVED] every vertex subset of the complete digraph on 4 vertices
    # has in-degree at least 3, so no layered witness exists
    g = complete_digraph(4)
    for u in range(4):
        for v in range(4):
            assert list(iter_type_a(g, u, v)) == []
            assert list(iter_type_b(g, u, v)) == []


def test_enumeration_budget():
    g = back_arc_order4()
    with pytest.raises(ResourceExceeded):
        list(iter_type_a(g, 1, 2, budget=2))


def test_arc_condition():
    comp = Composition(
        directed_cycle(3), (independent(2), singleton(), singleton())
    )
    assert arc_condition(comp, (1, 2))
    assert arc_condition(comp, (2, 0))
    assert arc_condition(comp, (0, 1))
    thick = Composition(
        directed_cycle(3), (Digraph(2, [(0, 1)]), singleton(), singleton())
    )
    # vertex 0 now has two out-arcs, so a backward arc leaving part 0
    # loses its blocking power
    assert not arc_condition(thick, (0, 1))
    assert arc_condition(thick, (1, 2))
