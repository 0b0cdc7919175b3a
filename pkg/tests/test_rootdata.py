"""Root data and finite Weyl group combinatorics for type A."""
import math
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dahakz.rootdata import from_cartan_matrix, type_a


@pytest.mark.parametrize("r", [1, 2, 3])
def test_counts(r):
    d = type_a(r)
    assert d.rank == r
    assert len(d.positive_roots) == r * (r + 1) // 2
    assert len(d.roots) == r * (r + 1)
    assert d.w_order == math.factorial(r + 1)
    assert d.coxeter_number == r + 1


@pytest.mark.parametrize("r", [1, 2, 3])
def test_cartan_from_pairing(r):
    d = type_a(r)
    for i in range(r):
        avee = tuple(Q(c) for c in d.coroot_of(d.simple_roots[i]))
        for j in range(r):
            aj = tuple(Q(c) for c in d.simple_roots[j])
            assert d.pairing(aj, avee) == d.cartan[i][j]


def test_rho_pairs_to_one_on_simples():
    for r in (1, 2, 3):
        d = type_a(r)
        for i in range(r):
            avee = tuple(Q(c) for c in d.coroot_of(d.simple_roots[i]))
            assert d.pairing(d.rho, avee) == 1


def test_theta_is_highest():
    d = type_a(2)
    assert tuple(d.theta) == (1, 1)
    tv = tuple(Q(c) for c in d.theta_vee)
    assert d.pairing(tuple(Q(c) for c in d.theta), tv) == 2


def test_reflection_involution_and_roots_permuted():
    d = type_a(2)
    for beta in d.roots:
        lam = (Q(2, 7), Q(-3, 5))
        assert d.reflect_weight(d.reflect_weight(lam, beta), beta) == lam
    for w in range(d.w_order):
        imgs = {d.w_act_root(w, b) for b in d.roots}
        assert imgs == set(d.roots)


def test_word_action_matches_simple_reflections():
    d = type_a(3)
    lam = (Q(1, 2), Q(1, 3), Q(1, 5))
    for w in range(d.w_order):
        out = lam
        for i in reversed(d.w_words[w]):
            out = d.reflect_weight(out, d.simple_roots[i])
        assert out == d.w_act_weight(w, lam)


def test_group_table_consistency():
    d = type_a(2)
    for a in range(d.w_order):
        assert d.w_mul[a][d.w_inv[a]] == d.w_identity
        for b in range(d.w_order):
            lam = (Q(1, 5), Q(1, 7))
            lhs = d.w_act_weight(d.w_mul[a][b], lam)
            rhs = d.w_act_weight(a, d.w_act_weight(b, lam))
            assert lhs == rhs


def test_coroot_level_sets_partition():
    d = type_a(2)
    total = sum(len(d.coroot_level_set(j)) for j in range(-2, 3) if j != 0)
    assert total == len(d.roots)


def test_custom_cartan_rejects_nonsquare():
    with pytest.raises(ValueError):
        from_cartan_matrix(((2, -1),))


@given(st.integers(0, 23), st.integers(0, 23))
@settings(max_examples=40, deadline=None)
def test_length_subadditive(a, b):
    d = type_a(3)
    a %= d.w_order
    b %= d.w_order
    ab = d.w_mul[a][b]
    assert d.w_length(ab) <= d.w_length(a) + d.w_length(b)
    assert (d.w_length(ab) - d.w_length(a) - d.w_length(b)) % 2 == 0
