import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polytriple.errors import DomainError
from polytriple.polynum import (
    PolygonalOrder,
    coset_representation_count,
    coset_representation_counts,
    direct_representation_count,
    direct_representation_counts,
    eval_polygonal,
    is_generalized_polygonal,
    polygonal_index_range,
    target_number,
    triple_invariants,
)

from conftest import brute_count, naive_polygonal

orders = st.integers(min_value=3, max_value=60)


@pytest.mark.parametrize("m", [3, 4, 5, 17, 1000])
def test_eval_at_one_and_zero(m):
    assert eval_polygonal(m, 1) == 1
    assert eval_polygonal(m, 0) == 0


def test_eval_examples():
    assert eval_polygonal(4, -2) == 4
    assert eval_polygonal(5, -1) == 2


def test_eval_is_exact_for_huge_arguments():
    x = 10**30 + 7
    assert eval_polygonal(7, x) == naive_polygonal(7, x)


@pytest.mark.parametrize("m", [2, 0, -5])
def test_order_below_three_rejected(m):
    with pytest.raises(DomainError):
        eval_polygonal(m, 1)
    with pytest.raises(DomainError):
        PolygonalOrder(m)


def test_inverse_examples():
    assert is_generalized_polygonal(5, 2) == -1
    assert is_generalized_polygonal(3, 5) is None
    assert is_generalized_polygonal(7, 0) == 0


def test_inverse_round_trip_exhaustive():
    for m in range(3, 51):
        for x in range(-100, 101):
            k = eval_polygonal(m, x)
            w = is_generalized_polygonal(m, k)
            assert w is not None and eval_polygonal(m, w) == k


def test_inverse_rejects_non_polygonal():
    # enumerate P_m over a wide window as the oracle
    for m in (3, 5, 8, 11):
        values = {naive_polygonal(m, x) for x in range(-60, 61)}
        for k in range(0, 500):
            assert (is_generalized_polygonal(m, k) is not None) == (k in values)


@given(orders, st.integers(min_value=0, max_value=10**6))
def test_index_range_is_tight(m, bound):
    lo, hi = polygonal_index_range(m, bound)
    assert eval_polygonal(m, lo) <= bound and eval_polygonal(m, hi) <= bound
    assert eval_polygonal(m, lo - 1) > bound and eval_polygonal(m, hi + 1) > bound


@pytest.mark.parametrize(
    "triple, delta, l_coeff, shift, level",
    [((3, 4, 5), 0, 48, 8, 12), ((4, 4, 4), 2, 16, 0, 8), ((6, 8, 10), 2, 384, 392, 192)],
)
def test_invariant_examples(triple, delta, l_coeff, shift, level):
    t = triple_invariants(*triple)
    assert (t.delta, t.l_coeff, t.shift, t.level) == (delta, l_coeff, shift, level)


@given(orders, orders, orders)
def test_invariant_identities(a, b, c):
    t = triple_invariants(a, b, c)
    assert t.delta == (2 if a % 2 == b % 2 == c % 2 == 0 else 0)
    assert t.shift >= 0 and t.l_coeff > 0 and t.level > 0
    assert t.l_coeff == (4 if t.delta == 0 else 2) * t.level
    assert (t.shift == 0) == (a == b == c == 4)


@given(orders, orders, orders)
def test_invariants_permutation_symmetric(a, b, c):
    ref = triple_invariants(a, b, c)
    for perm in itertools.permutations((a, b, c)):
        t = triple_invariants(*perm)
        assert (t.delta, t.l_coeff, t.shift, t.level, t.cosets) == (
            ref.delta, ref.l_coeff, ref.shift, ref.level, ref.cosets
        )
        assert t.original == perm


def test_domain_error_on_small_order():
    with pytest.raises(DomainError):
        triple_invariants(2, 4, 5)


def test_target_examples():
    t = triple_invariants(3, 4, 5)
    assert target_number(t, 0) == 8
    assert target_number(t, 4) == 200
    assert target_number(triple_invariants(4, 4, 4), 1) == 16


def test_direct_count_examples():
    assert direct_representation_count(triple_invariants(3, 4, 5), 0) == 2
    assert direct_representation_count(triple_invariants(4, 4, 4), 7) == 0
    assert direct_representation_count(triple_invariants(3, 3, 3), 1) == 24


@pytest.mark.parametrize("triple", [(3, 4, 5), (3, 3, 3), (5, 6, 7), (4, 7, 10)])
def test_direct_count_matches_brute_force(triple):
    t = triple_invariants(*triple)
    for n in range(0, 40):
        assert direct_representation_count(t, n) == brute_count(triple, n)


def test_coset_count_examples():
    t = triple_invariants(3, 4, 5)
    assert coset_representation_count(t, 0) == 2
    assert coset_representation_count(t, 4) == direct_representation_count(t, 4)
    cube = triple_invariants(4, 4, 4)
    for n in range(30):
        sq = sum(1 for x, y, z in itertools.product(range(-6, 7), repeat=3) if x * x + y * y + z * z == n)
        assert coset_representation_count(cube, n) == sq


def test_coset_count_equals_direct_count_sampled():
    rng = random.Random(20261016)
    for _ in range(12):
        t = triple_invariants(*(rng.randint(3, 12) for _ in range(3)))
        for n in rng.sample(range(300), 15):
            assert coset_representation_count(t, n) == direct_representation_count(t, n)


def test_vectorised_counts_agree_with_scalar():
    for triple in [(3, 4, 5), (6, 8, 10), (4, 4, 4), (3, 9, 12)]:
        t = triple_invariants(*triple)
        d = direct_representation_counts(t, 120)
        c = coset_representation_counts(t, 120)
        assert list(d) == [direct_representation_count(t, n) for n in range(121)]
        assert list(c) == [coset_representation_count(t, n) for n in range(121)]
