import pytest

from goodpairs.composition import (
    Composition,
    canonical_roots,
    complement_components,
    composition_from_partition,
    directed_cycle,
    independent,
    is_oriented,
    is_quasi_transitive,
    is_semicomplete,
    is_tournament,
    is_transitive,
    qt_decompose,
    recognize,
    ring_tournament,
    singleton,
    transitive_tournament,
)
from goodpairs.digraph import Digraph, mask_of
from goodpairs.errors import InvalidInput


def test_flatten_middle_layer():
    comp = Composition(
        transitive_tournament(3), (singleton(), independent(2), singleton())
    )
    g = comp.flatten()
    assert g.n == 4
    assert sorted(g.arcs()) == [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)]


def test_flatten_keeps_part_arcs():
    comp = Composition(directed_cycle(3), (Digraph(2, [(0, 1)]), singleton(), singleton()))
    g = comp.flatten()
    assert g.has_arc(0, 1) and not g.has_arc(1, 0)
    assert g.has_arc(0, 2) and g.has_arc(1, 2)
    assert g.has_arc(3, 0) and g.has_arc(3, 1)


def test_indexing_helpers():
    comp = Composition(directed_cycle(3), (independent(2), singleton(), independent(3)))
    assert comp.n == 6 and comp.s == 3
    assert [comp.part_of(i) for i in range(6)] == [0, 0, 1, 2, 2, 2]
    assert comp.local(4) == 1
    assert comp.flat_index(2, 1) == 4
    assert comp.part_mask(0) == mask_of([0, 1])
    assert comp.representatives() == [0, 2, 3]
    assert canonical_roots(comp, 1, 5) == (0, 2)


def test_size_validation():
    with pytest.raises(InvalidInput):
        Composition(directed_cycle(3), (singleton(), singleton()))


def test_class_predicates():
    c3 = directed_cycle(3)
    tt3 = transitive_tournament(3)
    assert is_semicomplete(c3) and is_tournament(c3)
    assert not is_transitive(c3) and is_quasi_transitive(c3)
    assert is_transitive(tt3) and is_quasi_transitive(tt3)
    assert recognize(tt3) == {"semicomplete", "tournament", "transitive", "quasi-transitive"}
    assert recognize(independent(2)) == {"transitive", "quasi-transitive"}
    two_cycle = Digraph(2, [(0, 1), (1, 0)])
    assert is_semicomplete(two_cycle) and not is_tournament(two_cycle)
    assert not is_oriented(two_cycle)
    # [DERIVED] 0 -> 1 -> 2 with 0,2 non-adjacent is not quasi-transitive
    path = Digraph(3, [(0, 1), (1, 2)])
    assert not is_quasi_transitive(path)


def test_ring_tournament_shape():
    g = ring_tournament(4)
    assert is_tournament(g)
    assert sorted(g.arcs()) == [(0, 1), (1, 2), (2, 0), (2, 3), (3, 0), (3, 1)]
    assert ring_tournament(3) == directed_cycle(3)


def test_complement_components():
    comp = Composition(directed_cycle(3), (independent(2), singleton(), singleton()))
    g = comp.flatten()
    assert complement_components(g) == [mask_of([0, 1]), 1 << 2, 1 << 3]


def test_composition_from_partition_uniform():
    comp = Composition(directed_cycle(3), (independent(2), singleton(), singleton()))
    g = comp.flatten()
    rebuilt = composition_from_partition(g, [mask_of([0, 1]), 1 << 2, 1 << 3])
    assert rebuilt is not None
    back, order = rebuilt
    assert order == [0, 1, 2, 3]
    assert back.quotient == directed_cycle(3)
    assert back.flatten() == g


def test_composition_from_partition_rejects_nonuniform():
    g = Digraph(3, [(0, 2), (2, 1)])
    assert composition_from_partition(g, [mask_of([0, 1]), 1 << 2]) is None


def test_qt_decompose_strong():
    comp = Composition(directed_cycle(3), (independent(2), singleton(), singleton()))
    g = comp.flatten()
    dec = qt_decompose(g)
    assert dec.kind == "strong"
    assert dec.composition.quotient == directed_cycle(3)
    assert dec.order == (0, 1, 2, 3)
    relabeled = [
        (dec.order[a], dec.order[b]) for a, b in dec.composition.flatten().arcs()
    ]
    assert sorted(relabeled) == sorted(g.arcs())


def test_qt_decompose_non_strong():
    comp = Composition(Digraph(2, [(0, 1)]), (directed_cycle(3), directed_cycle(3)))
    g = comp.flatten()
    dec = qt_decompose(g)
    assert dec.kind == "non-strong"
    assert dec.composition.s == 2
    assert all(p.n == 3 for p in dec.composition.parts)
    assert is_transitive(dec.composition.quotient)


def test_qt_decompose_rejects_non_qt():
    with pytest.raises(InvalidInput):
        qt_decompose(Digraph(3, [(0, 1), (1, 2)]))
