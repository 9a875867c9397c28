import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as o
from fidl_lab.errors import (
    AxiomViolation,
    EmptyBase,
    NotAHomomorphism,
    PreconditionFailed,
    ShapeMismatch,
    SortMismatch,
    SquareViolation,
)
from fidl_lab.fidl import (
    BOOL4,
    CHAIN2,
    CHAIN3,
    FUSION,
    IMPLICATION,
    as_fusion_implication_algebra,
    as_modal_lattice,
    extend_to_primes,
    filter_extension,
    heyting_power_module,
    implication_bottom_holds,
    membership_check,
    monotonicity_violation,
    product_module,
    restriction_module,
    section_f,
    section_i,
    validate_module,
)
from fidl_lab.frames import representation_iso
from fidl_lab.generators import random_module
from fidl_lab.morphisms import is_iso, validate_hom
from fidl_lab.order import enumerate_filters, heyting_arrow, mask_of, spectrum


def m(L, *labels):
    return mask_of(L.labels.index(x) for x in labels)


# -- validation --------------------------------------------------------------

def test_mod2_valid(MOD2):
    assert MOD2.f == ((0, 0), (0, 1))
    assert MOD2.i == ((1, 1), (0, 1))


def test_mod2_patched_implication_top(MOD2):
    i = [list(r) for r in MOD2.i]
    i[1][1] = 0
    with pytest.raises(AxiomViolation) as err:
        validate_module(MOD2.A, MOD2.B, MOD2.f, i)
    assert err.value.witness["violations"] == [{"axiom": "I3", "b": 1}]


def test_modal_example_valid(MODAL):
    assert o.violated_axioms(MODAL.A, MODAL.B, MODAL.f, MODAL.i) == set()
    assert section_f(MODAL, 1) == tuple(range(4))
    assert section_i(MODAL, 1) == tuple(range(4))


def test_shape_errors(MOD2):
    with pytest.raises(ShapeMismatch):
        validate_module(MOD2.A, MOD2.B, [[0, 0]], MOD2.i)
    with pytest.raises(ShapeMismatch):
        validate_module(MOD2.A, MOD2.B, MOD2.f, [[1, 1], [0, 5]])
    with pytest.raises(ShapeMismatch):
        validate_module(MOD2.A, MOD2.B, [[0, 0], [0, True]], MOD2.i)


def test_sections(MOD2):
    assert section_f(MOD2, 1) == (0, 1)
    assert section_f(MOD2, 0) == (0, 0)
    assert section_i(MOD2, 0) == (1, 1)


# -- filter extensions and primes -------------------------------------------

def test_filter_extension_examples(MOD2, MODAL):
    assert filter_extension(MOD2, FUSION, 0b10, 0b10).result == 0b10
    assert filter_extension(MOD2, IMPLICATION, 0b11, 0b10).result == 0b11
    a = m(BOOL4, "a", "1")
    assert filter_extension(MODAL, FUSION, a, 0b10).result == a
    with pytest.raises(ValueError):
        filter_extension(MOD2, "sideways", 1, 1)


def test_extend_to_primes_examples(MOD2, MODAL):
    assert extend_to_primes(MOD2, FUSION, 0b10, 0b10, 0b10) == (0b10, 0b10)
    with pytest.raises(PreconditionFailed):
        extend_to_primes(MOD2, FUSION, 0b11, 0b10, 0b10)
    a = m(BOOL4, "a", "1")
    assert extend_to_primes(MODAL, FUSION, a, 0b10, a) == (a, 0b10)


def test_membership_examples(MOD2):
    rep = membership_check(MOD2, 1, 1, 0b10)
    assert rep.fusion_member and rep.fusion_related and rep.fusion_witness == (0b10, 0b10)
    assert rep.impl_member and rep.impl_related
    rep = membership_check(MOD2, 0, 1, 0b10)
    assert not rep.fusion_member and not rep.fusion_related and rep.fusion_witness is None


# -- derived readings --------------------------------------------------------

def test_fusion_implication_algebras(MOD2):
    alg = as_fusion_implication_algebra(MOD2)
    assert alg.identities_hold and alg.residuated
    C3 = validate_module(CHAIN3, CHAIN3, CHAIN3.meet, heyting_arrow(CHAIN3))
    assert as_fusion_implication_algebra(C3).residuated
    ones = [[1, 1], [1, 1]]
    N = validate_module(CHAIN2, CHAIN2, CHAIN2.meet, ones)
    alg = as_fusion_implication_algebra(N)
    assert alg.identities_hold and not alg.residuated
    x, y, z = alg.residuation_counterexample
    assert o.leq(CHAIN2, N.f[x][y], z) != o.leq(CHAIN2, x, N.i[y][z])


def test_fusion_implication_needs_equal_sorts(MODAL):
    with pytest.raises(SortMismatch):
        as_fusion_implication_algebra(MODAL)


def test_modal_readings(MOD2, MODAL):
    ml = as_modal_lattice(MODAL)
    assert ml.diamond == ml.box == tuple(range(4)) and ml.laws_hold
    ml = as_modal_lattice(MOD2)
    assert ml.diamond == ml.box == (0, 1)
    # diamond sending every nonzero element to the top
    top = BOOL4.top
    f = [[0, 0 if x == BOOL4.bottom else top] for x in range(4)]
    i = [[top] * 4, list(range(4))]
    ml = as_modal_lattice(validate_module(BOOL4, CHAIN2, f, i))
    assert ml.laws_hold and ml.diamond == (0, top, top, top)


# -- constructions -----------------------------------------------------------

def test_heyting_power_modules(MOD2):
    assert o.module_iso(heyting_power_module(CHAIN2, 1), MOD2)
    M = heyting_power_module(CHAIN2, ["p", "q"])
    assert M.A.size == 4 and M.B == CHAIN2
    C = heyting_power_module(CHAIN3, 1)
    assert C.f == CHAIN3.meet and C.i == heyting_arrow(CHAIN3)
    with pytest.raises(EmptyBase):
        heyting_power_module(CHAIN2, [])


def test_restriction_modules(MOD2, MODAL):
    N, maps = restriction_module(MOD2, CHAIN2, [0, 1])
    assert N == MOD2 and maps == ((0, 1), (0, 1))
    N, _ = restriction_module(MODAL, CHAIN2, [0, 1])
    assert N == MODAL
    B4 = heyting_power_module(BOOL4, 1)
    with pytest.raises(NotAHomomorphism):
        restriction_module(B4, CHAIN2, [BOOL4.bottom, BOOL4.labels.index("a")])


def test_product_modules(MOD2, TRIVIAL):
    P, proj = product_module([MOD2])
    assert o.module_iso(P, MOD2) and proj == [((0, 1), (0, 1))]
    P, proj = product_module([MOD2, MOD2])
    assert P.A.size == 4 and P.B.size == 4
    validate_module(P.A, P.B, P.f, P.i)
    for alpha, gamma in proj:
        validate_hom(P, MOD2, alpha, gamma)
    P, _ = product_module([MOD2, TRIVIAL])
    assert o.module_iso(P, MOD2)


def test_implication_at_bottom_is_not_forced(MOD2):
    # i(0, x) = x instead of 1 keeps every axiom but is invisible to the frame
    i = [list(r) for r in MOD2.i]
    i[0][0] = 0
    N = validate_module(MOD2.A, MOD2.B, MOD2.f, i)
    assert o.violated_axioms(N.A, N.B, N.f, N.i) == set()
    assert not implication_bottom_holds(N)
    with pytest.raises(SquareViolation):
        representation_iso(N)
    assert not membership_check(N, 0, 0, 0b10).agrees


# -- properties --------------------------------------------------------------

seeds = st.integers(min_value=0, max_value=10 ** 6)
strategies = st.sampled_from(["heyting-power", "modal", "product", "random-tables"])


@settings(max_examples=80, deadline=None)
@given(seeds, strategies)
def test_generated_modules_satisfy_axioms(seed, strategy):
    M = random_module(random.Random(seed), strategy, 8, 6)
    assert o.violated_axioms(M.A, M.B, M.f, M.i) == set()
    assert monotonicity_violation(M) is None
    assert implication_bottom_holds(M)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_extensions_match_bruteforce(seed):
    M = random_module(random.Random(seed), "mixed", 6, 4)
    for G in enumerate_filters(M.A):
        for H in enumerate_filters(M.B):
            assert o.as_set(filter_extension(M, FUSION, G, H).result) == o.fusion_ext(M, o.as_set(G), o.as_set(H))
            assert o.as_set(filter_extension(M, IMPLICATION, G, H).result) == o.implication_ext(
                M, o.as_set(H), o.as_set(G))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_extend_to_primes_rejects_bad_hypotheses(seed):
    M = random_module(random.Random(seed), "mixed", 6, 4)
    for G in enumerate_filters(M.A):
        for H in enumerate_filters(M.B):
            for P in spectrum(M.A).primes:
                for mode in (FUSION, IMPLICATION):
                    ext = filter_extension(M, mode, G, H).result
                    if ext & ~P:
                        with pytest.raises(PreconditionFailed):
                            extend_to_primes(M, mode, G, H, P)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_product_projections_are_homs(seed):
    rng = random.Random(seed)
    parts = [random_module(rng, "mixed", 3, 2) for _ in range(rng.randint(1, 3))]
    P, proj = product_module(parts)
    assert o.violated_axioms(P.A, P.B, P.f, P.i) == set()
    for N, (alpha, gamma) in zip(parts, proj):
        hom = validate_hom(P, N, alpha, gamma)
        assert is_iso(hom)[0] == (P.A.size == N.A.size and P.B.size == N.B.size)
