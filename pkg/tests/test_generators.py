import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as o
from fidl_lab import budget, codec
from fidl_lab.errors import BudgetExceeded, MalformedInput
from fidl_lab.fidl import CHAIN2, implication_bottom_holds, mod2, trivial_module
from fidl_lab.generators import (
    FuzzConfig,
    TableStats,
    generate_corpus,
    module_stream,
    mutate_entry,
    random_join_hom,
    random_lattice,
    random_meet_hom,
    random_module,
    random_poset,
)
from fidl_lab.order import validate_lattice

seeds = st.integers(min_value=0, max_value=10 ** 6)


def test_config_validation():
    assert FuzzConfig().validate() == FuzzConfig()
    for bad in (FuzzConfig(strategy="x"), FuzzConfig(count=0), FuzzConfig(max_a=0), FuzzConfig(seed=-1),
                FuzzConfig(seed=2 ** 64)):
        with pytest.raises(MalformedInput):
            bad.validate()
    with pytest.raises(BudgetExceeded):
        FuzzConfig(max_a=budget.limit("lattice") + 1).validate()


def test_streams_are_independent_of_each_other():
    cfg = FuzzConfig(seed=9)
    assert cfg.rng(3).random() == FuzzConfig(seed=9).rng(3).random()
    assert cfg.rng(3).random() != cfg.rng(4).random()


def test_corpus_is_deterministic():
    cfg = FuzzConfig(seed=4, count=12)
    a, sa = generate_corpus(cfg)
    b, sb = generate_corpus(cfg)
    assert [(n, d.dumps()) for n, d in a] == [(n, d.dumps()) for n, d in b]
    assert (sa.proposed, sa.accepted) == (sb.proposed, sb.accepted)
    assert [n for n, _ in a][:2] == ["module-00", "module-01"]
    assert a[0][1].meta["seed"] == 4 and a[0][1].meta["index"] == 0


def test_corpus_prefix_is_stable():
    # instance k depends only on the seed and k, not on the count
    short, _ = generate_corpus(FuzzConfig(seed=4, count=3))
    long, _ = generate_corpus(FuzzConfig(seed=4, count=30))
    assert [d.payload for _, d in short] == [d.payload for _, d in long[:3]]


def test_table_stats():
    s = TableStats()
    assert s.acceptance_rate == 1.0
    module_stream(5, 20, "random-tables", 6, 4, s)
    assert 0 < s.acceptance_rate <= 1.0 and s.accepted == 20


def test_mutation():
    rng = random.Random(0)
    M = mod2()
    name, r, c, f, i = mutate_entry(rng, M)
    table = f if name == "f" else i
    orig = M.f if name == "f" else M.i
    assert table[r][c] != orig[r][c]
    diffs = sum(x != y for t, u in ((f, M.f), (i, M.i)) for row, orow in zip(t, u) for x, y in zip(row, orow))
    assert diffs == 1
    with pytest.raises(MalformedInput):
        mutate_entry(rng, trivial_module())


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(min_value=1, max_value=12))
def test_random_lattices_are_distributive(seed, size):
    L = random_lattice(random.Random(seed), size)
    assert 1 <= L.size <= size
    validate_lattice(L.labels, L.poset.leq_table())
    for x in range(L.size):
        for y in range(L.size):
            for z in range(L.size):
                assert o.meet(L, x, o.join(L, y, z)) == o.join(L, o.meet(L, x, y), o.meet(L, x, z))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_random_posets_are_orders(seed):
    P = random_poset(random.Random(seed), 5)
    n = len(P)

    def le(a, b):
        return P.up[a] >> b & 1 == 1

    for a in range(n):
        assert le(a, a)
        for b in range(n):
            if a != b and le(a, b):
                assert not le(b, a)
            for c in range(n):
                if le(a, b) and le(b, c):
                    assert le(a, c)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_operator_maps_preserve_bounds_and_operations(seed):
    rng = random.Random(seed)
    L = random_lattice(rng, 8)
    j, m = random_join_hom(rng, L), random_meet_hom(rng, L)
    assert j[L.bottom] == L.bottom and m[L.top] == L.top
    for x in range(L.size):
        for y in range(L.size):
            assert j[L.join[x][y]] == L.join[j[x]][j[y]]
            assert m[L.meet[x][y]] == L.meet[m[x]][m[y]]


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from(["heyting-power", "modal", "product", "random-tables", "mixed"]))
def test_sizes_respect_bounds(seed, strategy):
    M = random_module(random.Random(seed), strategy, 8, 6)
    assert M.A.size <= 8 and M.B.size <= 6
    assert implication_bottom_holds(M)


def test_documents_carry_their_generator():
    docs, _ = generate_corpus(FuzzConfig(seed=1, count=1, strategy="modal"))
    meta = docs[0][1].meta
    assert meta["strategy"] == "modal" and meta["generator"] == codec.GENERATOR_VERSION
    assert codec.decode_document(docs[0][1]).B == CHAIN2
