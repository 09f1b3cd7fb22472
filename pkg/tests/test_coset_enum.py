import random

import numpy as np
import pytest

from fpgroups.coset_enum import (
    CosetTable,
    IncompleteTableError,
    Strategy,
    enumerate_cosets,
    format_table,
    group_order,
    is_valid,
    parse_table,
    permutation_rep,
    standardize,
)
from fpgroups.words import commutator, parse_presentation, parse_words
from groups import GROUPS
from oracles import closure

G2 = parse_presentation("< a, b | a^6, b^6, a*b^2 = b*a^2 >")
HBAR = parse_presentation("< x, y | x^31, y^31, (x^2*y)^2, (x*y^2)^2, (x^3*y^-11)^2, (x^4*y^13)^2 >")
D4 = parse_presentation("< a, b | a^4, b^2, (a*b)^2 >")
G35 = parse_presentation("< a, b | a^3, b^5, (a*b*a^-1*b^-1*a*b^2)^2 >")


def _subgroups(p, rng, k=3):
    """A few random subgroup generator lists, always including the trivial one."""
    out = [[]]
    for _ in range(k):
        n = rng.randint(1, 2)
        out.append([tuple(rng.choice([1, -1]) * rng.randint(1, p.ngens) for _ in range(rng.randint(1, 4)))
                    for _ in range(n)])
    return out


def _assert_table_invariants(t, p, sub):
    tab = t.table
    n = t.index
    assert (tab >= 0).all() and (tab < n).all()
    for g in range(t.ngens):
        fwd, back = tab[:, 2 * g], tab[:, 2 * g + 1]
        assert (back[fwd] == np.arange(n)).all()
    for c in range(n):
        for r in p.relators:
            assert t.trace(c, r) == c
    for w in sub:
        assert t.trace(0, w) == 0
    assert is_valid(t, p, sub)


def test_cyclic_order():
    assert enumerate_cosets(parse_presentation("< a | a^5 >")).index == 5


def test_hbar_over_x():
    assert enumerate_cosets(HBAR, [(1,)]).index == 1056


def test_image_of_order_1920():
    q = G35.with_relators(parse_words("(a*b)^5, [a,b]^3", G35.generators))
    assert enumerate_cosets(q).index == 1920


def test_g2_over_bare_commutators_is_not_finite_index():
    # <[a,b], [b,a]> is cyclic, so it has infinite index in G(2), whose second
    # derived subgroup is free abelian of rank 3; the enumeration must overflow.
    res = enumerate_cosets(G2, [commutator((1,), (2,)), commutator((2,), (1,))], max_cosets=20000)
    assert res.overflow and res.stats.max_active >= 20000


def test_g2_derived_table_index_6():
    ab = G2.with_relators([commutator((1,), (2,))])
    t = enumerate_cosets(ab).table
    assert t.index == 6
    # G' contains neither a nor b, so coset 0 moves under every column
    assert all(t.act(0, x) != 0 for x in (1, -1, 2, -2))
    _assert_table_invariants(t, G2, [commutator((1,), (2,))])


def test_standardize_idempotent_and_trivial():
    t = enumerate_cosets(parse_presentation("< a, b | a^2, b^3, (a*b)^2 >")).table
    assert standardize(t) == t
    assert standardize(standardize(t)) == standardize(t)
    one = enumerate_cosets(G2, [(1,), (2,)]).table
    assert one.index == 1 and standardize(one) == one


def test_standardize_renumbers_scrambled_table():
    t = enumerate_cosets(parse_presentation("< a, b | a^4, b^2, (a*b)^2 >")).table
    rng = np.random.default_rng(3)
    perm = np.concatenate([[0], 1 + rng.permutation(t.index - 1)])
    inv = np.argsort(perm)
    scrambled = perm[t.table[inv]]
    assert standardize(CosetTable(scrambled, t.ngens)) == t


def test_standardize_rejects_incomplete():
    with pytest.raises(IncompleteTableError):
        standardize(CosetTable(np.array([[-1, -1]]), 1))


def test_trace_examples():
    t = enumerate_cosets(D4, [(2,)]).table
    assert t.index == 4
    assert t.trace(3, ()) == 3
    assert t.trace(0, (2,)) == 0
    partial = CosetTable(np.array([[1, -1], [-1, 0]]), 1)
    assert partial.trace(0, (1, 1)) is None


def test_permutation_rep_examples():
    one = enumerate_cosets(G2, [(1,), (2,)]).table
    assert permutation_rep(one) == [(0,), (0,)]
    c3 = enumerate_cosets(parse_presentation("< a | a^3 >")).table
    (p,) = permutation_rep(c3)
    assert sorted(p) == [0, 1, 2] and all(p[i] != i for i in range(3))
    s3 = enumerate_cosets(parse_presentation("< a, b | a^2, b^3, (a*b)^2 >")).table
    assert len(closure(permutation_rep(s3))) == 6


@pytest.mark.parametrize("group", GROUPS, ids=[g.name for g in GROUPS])
def test_order_matches_permutation_closure(group):
    p = parse_presentation(group.text)
    assert group_order(p) == len(closure(group.perms)) == group.order


@pytest.mark.parametrize("group", GROUPS, ids=[g.name for g in GROUPS])
def test_strategies_agree_and_tables_valid(group):
    p = parse_presentation(group.text)
    rng = random.Random(group.name)
    for sub in _subgroups(p, rng):
        h = enumerate_cosets(p, sub, strategy="hlt")
        f = enumerate_cosets(p, sub, strategy=Strategy.FELSCH)
        assert h.complete and f.complete
        assert h.table == f.table
        _assert_table_invariants(h.table, p, sub)


@pytest.mark.parametrize("group", GROUPS, ids=[g.name for g in GROUPS])
def test_subgroup_monotonicity(group):
    p = parse_presentation(group.text)
    rng = random.Random(group.name + "mono")
    sub = []
    last = enumerate_cosets(p, sub).index
    for _ in range(4):
        sub = sub + [tuple(rng.choice([1, -1]) * rng.randint(1, p.ngens) for _ in range(rng.randint(1, 3)))]
        idx = enumerate_cosets(p, sub).index
        assert idx <= last and last % idx == 0
        last = idx


def test_deterministic():
    r1 = enumerate_cosets(HBAR, [(1,)])
    r2 = enumerate_cosets(HBAR, [(1,)])
    assert r1.table == r2.table and r1.stats == r2.stats


def test_overflow_is_a_result():
    res = enumerate_cosets(parse_presentation("< a, b | >"), (), max_cosets=500)
    assert res.overflow and res.index is None and res.table is None
    assert res.stats.max_active == 500


def test_max_cosets_exact_fit():
    assert enumerate_cosets(parse_presentation("< a | a^7 >"), max_cosets=7).index == 7
    assert enumerate_cosets(parse_presentation("< a | a^7 >"), max_cosets=6).overflow


def test_felsch_on_larger_case():
    h = enumerate_cosets(HBAR, [(1,)], strategy="hlt")
    f = enumerate_cosets(HBAR, [(1,)], strategy="felsch")
    assert f.index == 1056 and f.table == h.table


def test_bad_subgroup_word():
    with pytest.raises(ValueError):
        enumerate_cosets(G2, [(3,)])


def test_trivial_presentation_cases():
    assert enumerate_cosets(parse_presentation("< | >")).index == 1
    assert enumerate_cosets(parse_presentation("< a | a >")).index == 1


def test_table_text_round_trip():
    t = enumerate_cosets(D4, [(2,)]).table
    text = format_table(t)
    assert text.splitlines()[0] == "cosets=4 generators=2"
    assert parse_table(text) == t
    assert "0" not in text.split("\n", 1)[1].split()
    partial = CosetTable(np.array([[1, -1], [-1, 0]]), 1)
    assert format_table(partial) == "cosets=2 generators=1\n2 0\n0 1\n"
    with pytest.raises(ValueError):
        parse_table("cosets=2 generators=1\n2 1\n")
