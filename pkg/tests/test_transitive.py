"""Transitive compositions and the quasi-transitive front door."""

import pytest

from goodpairs.composition import (
    Composition,
    independent,
    singleton,
    transitive_tournament,
)
from goodpairs.digraph import Digraph
from goodpairs.dispatch import decide, recognize
from goodpairs.errors import InvalidInput
from goodpairs.families import family_b, random_quasi_transitive
from goodpairs.oracle import oracle_good_pair
from goodpairs.transitive_engine import (
    condensed_transitive,
    decide_quasi_transitive,
    decide_transitive_composition,
)
from goodpairs.verdicts import Verdict, validate_verdict

TT2 = Digraph(2, [(0, 1)])


def tt3_middle(t):
    comp, u, v = family_b(t, back_arc=False)
    return comp, u, v


def test_rejects_bad_inputs():
    comp = Composition(Digraph(3, [(0, 1), (1, 2), (2, 0)]), (singleton(),) * 3)
    with pytest.raises(InvalidInput):
        decide_transitive_composition(comp, 0, 1)  # cycle quotient
    one = Composition(Digraph(1, []), (independent(3),))
    with pytest.raises(InvalidInput):
        decide_transitive_composition(one, 0, 1)
    good, u, v = tt3_middle(2)
    with pytest.raises(InvalidInput):
        decide_transitive_composition(good, 0, 99)


def test_root_component_sides():
    comp = Composition(TT2, (singleton(), singleton()))
    ver = decide_transitive_composition(comp, 1, 1)
    assert (not ver.yes) and ver.reason == "root-component" and ver.side == "out"
    ver = decide_transitive_composition(comp, 0, 0)
    assert ver.reason == "root-component" and ver.side == "in"
    assert validate_verdict(comp, ver) is None


def test_middle_blocked_family():
    # [DERIVED] source over an independent middle over a sink, plus the
    # direct arc: both branchings would need that arc
    for t in (1, 2, 3):
        comp, u, v = tt3_middle(t)
        ver = decide_transitive_composition(comp, u, v)
        assert not ver.yes and ver.reason == "middle-blocked"
        assert validate_verdict(comp, ver) is None
        assert oracle_good_pair(comp.flatten(), u, v) is None


def test_tree_side_both_orientations():
    # chain trees: a star tree would collapse into the middle-blocked
    # shape instead, which is matched first
    out_tree = Digraph(3, [(0, 1), (1, 2)])
    comp = Composition(TT2, (out_tree, singleton()))
    ver = decide_transitive_composition(comp, 0, 3)
    assert not ver.yes and ver.reason == "tree-side" and ver.side == "out"
    assert validate_verdict(comp, ver) is None
    assert oracle_good_pair(comp.flatten(), 0, 3) is None

    in_tree = Digraph(3, [(0, 1), (1, 2)])
    comp = Composition(TT2, (singleton(), in_tree))
    ver = decide_transitive_composition(comp, 0, 3)
    assert not ver.yes and ver.reason == "tree-side" and ver.side == "in"
    assert validate_verdict(comp, ver) is None
    assert oracle_good_pair(comp.flatten(), 0, 3) is None


def test_star_tree_is_the_blocked_middle():
    # the star instance of the one-sided tree is exactly the blocked
    # middle shape; reason stays deterministic
    comp = Composition(TT2, (Digraph(3, [(0, 1), (0, 2)]), singleton()))
    ver = decide_transitive_composition(comp, 0, 3)
    assert ver.reason == "middle-blocked"
    assert validate_verdict(comp, ver) is None


def test_tree_plus_return_arc_is_yes():
    # the 2n-3 count only bites when the in-root is a sink; one arc back
    # out of v already allows a pair
    g = Digraph(3, [(0, 1), (0, 2), (1, 2), (2, 1)])
    ver = decide_quasi_transitive(g, 0, 2)
    assert ver.yes and validate_verdict(g, ver) is None
    # and a fabricated tree-side claim on it must not validate
    fake = Verdict(yes=False, u=0, v=2, reason="tree-side", side="out")
    assert validate_verdict(g, fake) == "in-root is not a sink"


def test_degree_starved_same_part_root():
    # u and v share a part; u's only arcs leave through the other part
    part = Digraph(2, [(1, 0)])
    comp = Composition(Digraph(2, [(0, 1), (1, 0)]), (part, singleton()))
    ver = decide_transitive_composition(comp, 0, 1)
    assert not ver.yes and ver.reason == "degree"
    assert oracle_good_pair(comp.flatten(), 0, 1) is None


def test_middle_part_with_internal_arc_is_yes():
    # one internal arc in the middle breaks the blocked shape
    comp = Composition(
        transitive_tournament(3),
        (singleton(), Digraph(2, [(0, 1)]), singleton()),
    )
    ver = decide_transitive_composition(comp, 0, 3)
    assert ver.yes and validate_verdict(comp, ver) is None


def test_same_part_roots_construct():
    digon = Digraph(2, [(0, 1), (1, 0)])
    comp = Composition(digon, (digon, singleton()))
    for u, v in ((0, 1), (1, 0), (0, 0)):
        ver = decide_transitive_composition(comp, u, v)
        want = oracle_good_pair(comp.flatten(), u, v) is not None
        assert ver.yes == want
        assert validate_verdict(comp, ver) is None


def test_matches_oracle_on_mixed_samples():
    import random

    rng = random.Random(5)
    checked = 0
    for _ in range(40):
        t = rng.randint(2, 3)
        parts = []
        for _ in range(t):
            k = rng.randint(1, 3)
            arcs = [
                (a, b)
                for a in range(k)
                for b in range(k)
                if a != b and rng.random() < 0.5
            ]
            parts.append(Digraph(k, arcs))
        comp = Composition(transitive_tournament(t), tuple(parts))
        flat = comp.flatten()
        if flat.n > 8:
            continue
        for u in range(flat.n):
            for v in range(flat.n):
                ver = decide_transitive_composition(comp, u, v)
                assert ver.yes == (oracle_good_pair(flat, u, v) is not None)
                assert validate_verdict(comp, ver) is None
                checked += 1
    assert checked > 200


def test_quasi_transitive_front_door_relabels():
    comp, u, v = tt3_middle(2)
    flat = comp.flatten()
    perm = [3, 0, 2, 1]  # old -> new label
    g = Digraph(flat.n, [(perm[a], perm[b]) for a, b in flat.arcs()])
    ver = decide_quasi_transitive(g, perm[u], perm[v])
    assert not ver.yes and ver.reason == "middle-blocked"
    assert ver.u == perm[u] and ver.v == perm[v]
    assert validate_verdict(g, ver) is None


def test_quasi_transitive_yes_pair_speaks_original_labels():
    g = random_quasi_transitive(12, 6)
    hits = 0
    for u in range(g.n):
        for v in range(g.n):
            ver = decide_quasi_transitive(g, u, v)
            assert ver.yes == (oracle_good_pair(g, u, v) is not None)
            assert validate_verdict(g, ver) is None
            hits += ver.yes
    assert hits  # sample admits at least one good pair


def test_quasi_transitive_rejects_other_digraphs():
    path = Digraph(3, [(0, 1), (1, 2)])  # 0,2 nonadjacent after a 2-path
    with pytest.raises(InvalidInput):
        decide_quasi_transitive(path, 0, 2)
    single = Digraph(1, [])
    ver = decide_quasi_transitive(single, 0, 0)
    assert ver.yes and validate_verdict(single, ver) is None


def test_condensed_route_for_non_strong_semicomplete_quotient():
    # quotient: a 3-cycle component over a sink vertex; not transitive,
    # semicomplete but not strong, so parts merge along its components
    q = Digraph(4, [(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)])
    comp = Composition(q, (singleton(),) * 4)
    assert recognize(comp) == "composition"
    tcomp, order = condensed_transitive(comp)
    assert tcomp.s == 2 and sorted(order) == list(range(4))
    ver = decide(comp, 0, 3)
    assert ver.yes and validate_verdict(comp, ver) is None
    assert oracle_good_pair(comp.flatten(), 0, 3) is not None


def test_dispatch_recognize_and_overrides():
    semi = Digraph(3, [(0, 1), (1, 2), (2, 0)])
    assert recognize(semi) == "semicomplete"
    qt = family_b(2, back_arc=False)[0].flatten()
    assert recognize(qt) == "qt"
    comp, u, v = tt3_middle(2)
    assert recognize(comp) == "transitive"
    with pytest.raises(InvalidInput):
        recognize(Digraph(4, [(0, 1), (1, 2), (2, 3)]))
    with pytest.raises(InvalidInput):
        decide(semi, 0, 1, klass="composition")
    with pytest.raises(InvalidInput):
        decide(qt, 0, 1, klass="semicomplete")
    ver = decide(comp, u, v, klass="transitive")
    assert ver.reason == "middle-blocked"
