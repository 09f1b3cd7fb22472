import random

import pytest
from hypothesis import given, settings, strategies as st

from fpgroups.abelian import abelian_invariants
from fpgroups.coset_enum import enumerate_cosets
from fpgroups.schreier import (
    NotInSubgroupError,
    Rewriter,
    express_elements,
    format_subgroup_presentation,
    parse_subgroup_presentation,
    schreier_generators,
    subgroup_presentation,
    transversal,
)
from fpgroups.words import commutator, cyclic_canonical, free_reduce, parse_presentation
from groups import GROUPS
from oracles import abelian_quotient_invariants, closure, evaluate

G2 = parse_presentation("< a, b | a^6, b^6, a*b^2 = b*a^2 >")
C6 = parse_presentation("< a | a^6 >")
X = (1, 2, -1, -2)
Y = (1, -2, -1, 2)


def g2_derived_table():
    return enumerate_cosets(G2.with_relators([commutator((1,), (2,))])).table


def test_transversal_examples():
    one = enumerate_cosets(G2, [(1,), (2,)]).table
    assert transversal(one).reps == ((),)
    tr = transversal(g2_derived_table())
    lengths = [len(r) for r in tr.reps]
    assert len(lengths) == 6 and lengths[0] == 0 and lengths == sorted(lengths)
    c6 = enumerate_cosets(C6, [(1, 1)]).table
    assert set(transversal(c6).reps) == {(), (1,)}


def test_transversal_is_schreier():
    t = g2_derived_table()
    tr = transversal(t)
    reps = set(tr.reps)
    for c, w in enumerate(tr.reps):
        assert t.trace(0, w) == c
        assert all(w[:k] in reps for k in range(len(w)))


def test_generator_counts():
    t = g2_derived_table()
    assert len(schreier_generators(t, transversal(t))) == 7
    for d in (1, 2, 3):
        p = parse_presentation("< " + ", ".join("abc"[:d]) + " | " + ", ".join(g + "^2" for g in "abc"[:d]) + " >")
        t1 = enumerate_cosets(p, [((k + 1),) for k in range(d)]).table
        assert t1.index == 1 and len(schreier_generators(t1, transversal(t1))) == d


def test_rewrite_examples():
    t = enumerate_cosets(C6, [(1, 1)]).table
    rw = Rewriter(t)
    assert rw.rewrite(()) == ()
    assert rw.rewrite((1, 1)) == (1,)
    for k, s in enumerate(rw.generators):
        assert rw.rewrite(s.word) == (k + 1,)
    with pytest.raises(NotInSubgroupError):
        rw.rewrite((1,))


def test_c6_over_a_squared():
    sp = subgroup_presentation(C6, enumerate_cosets(C6, [(1, 1)]).table)
    assert sp.presentation.generators == ("s1",)
    assert {cyclic_canonical(r) for r in sp.presentation.relators} == {cyclic_canonical((1, 1, 1))}
    assert sp.embedding == ((1, 1),)


def test_index_one_presents_same_group():
    one = enumerate_cosets(G2, [(1,), (2,)]).table
    sp = subgroup_presentation(G2, one)
    assert sp.presentation.ngens == 2 and len(sp.presentation.relators) == 3
    assert abelian_invariants(sp.presentation) == abelian_invariants(G2)


def test_g2_derived_subgroup_abelianization():
    sp = subgroup_presentation(G2, g2_derived_table())
    inv = abelian_invariants(sp.presentation)
    assert inv.torsion == (4, 4) and inv.free_rank == 0
    assert sp.presentation.ngens == 7 and sp.raw_relator_count == 18


def test_express_elements_maps_back():
    t = g2_derived_table()
    rw = Rewriter(t)
    xs = express_elements(G2, t, [X, Y])
    assert [rw.schreier_word_to_parent(w) for w in xs] == [X, Y]
    assert express_elements(G2, t, []) == []


def test_serialization_round_trip():
    sp = subgroup_presentation(G2, g2_derived_table())
    text = format_subgroup_presentation(sp)
    pres, emb = parse_subgroup_presentation(text, G2.generators)
    assert pres == sp.presentation
    assert [emb[n] for n in pres.generators] == list(sp.embedding)


def _random_pairs(n_pairs, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < n_pairs:
        g = rng.choice(GROUPS)
        p = parse_presentation(g.text)
        sub = [tuple(rng.choice([1, -1]) * rng.randint(1, p.ngens) for _ in range(rng.randint(1, 4)))
               for _ in range(rng.randint(0, 2))]
        res = enumerate_cosets(p, sub)
        if res.complete and res.index <= 100:
            out.append((g, p, sub, res.table))
    return out


def test_count_law_random_pairs():
    for _, p, sub, t in _random_pairs(30, 7):
        sp = subgroup_presentation(p, t)
        assert sp.presentation.ngens == t.index * (p.ngens - 1) + 1
        assert sp.raw_relator_count == t.index * len(p.relators)


@pytest.mark.parametrize("group", GROUPS, ids=[g.name for g in GROUPS])
def test_rs_abelianization_matches_brute_force(group):
    p = parse_presentation(group.text)
    rng = random.Random(group.name)
    subs = [[], [(1,)], [(p.ngens,)]]
    subs += [[tuple(rng.choice([1, -1]) * rng.randint(1, p.ngens) for _ in range(rng.randint(1, 4)))]
             for _ in range(3)]
    for sub in subs:
        t = enumerate_cosets(p, sub).table
        sp = subgroup_presentation(p, t)
        h = closure([evaluate(w, group.perms) for w in sub], len(group.perms[0])) if sub else {tuple(range(len(group.perms[0])))}
        inv = abelian_invariants(sp.presentation)
        assert inv.free_rank == 0
        assert list(inv.torsion) == abelian_quotient_invariants(h)
        assert len(h) * t.index == group.order


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=30).map(tuple))
def test_rewrite_round_trip_on_subgroup_words(w):
    # S4 over <a>: words that fix coset 0 are exactly the elements of <a>
    p = parse_presentation(GROUPS[10].text)
    t = enumerate_cosets(p, [(1,)]).table
    rw = Rewriter(t)
    if t.trace(0, w) != 0:
        with pytest.raises(NotInSubgroupError):
            rw.rewrite(w)
        return
    back = rw.schreier_word_to_parent(rw.rewrite(w))
    assert back == free_reduce(w)
    for c in range(t.index):
        assert t.trace(c, back) == t.trace(c, w)


def test_embedding_words_fix_subgroup_coset():
    t = g2_derived_table()
    sp = subgroup_presentation(G2, t)
    for w in sp.embedding:
        assert t.trace(0, w) == 0
    rw = sp.rewriter
    for r in sp.presentation.relators:
        assert t.trace(0, rw.schreier_word_to_parent(r)) == 0
