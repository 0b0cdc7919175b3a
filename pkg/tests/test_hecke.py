"""Normal-form arithmetic in H' and the AHA, intertwiners, Dunkl operators."""
import random
from fractions import Fraction as Q

import pytest

import dahakz.affine as aw
from dahakz.affine import HEART, HeckeParams
from dahakz.hecke import (AhaElement, DahaElement, aha_mul, daha_mul,
                          dunkl_apply, dunkl_rho_coeff, intertwiner_element,
                          polynomial_action, polynomial_rep_check,
                          xi_affine_coroot)
from dahakz.rings import (XiPolynomial, x_monomial, xi_apply_w, xi_linear,
                          xi_variable, y_monomial)
from dahakz.rootdata import type_a

D1 = type_a(1)
D2 = type_a(2)
P1 = HeckeParams.degenerate(Q(1, 2))
P2 = HeckeParams.degenerate(Q(1, 3))
A1 = HeckeParams.from_exponent(Q(1, 2))
A2 = HeckeParams.from_exponent(Q(1, 3))


def _random_daha(datum, params, rng):
    letters = list(range(datum.rank)) + [HEART]
    word = [rng.choice(letters) for _ in range(rng.randrange(0, 3))]
    elem = DahaElement.from_group(datum, params,
                                  aw.element_from_word(datum, word))
    poly = XiPolynomial.constant(Q(rng.randrange(-2, 3)), datum.rank)
    for j in range(datum.rank):
        if rng.random() < 0.5:
            poly = poly * xi_variable(datum, j)
    if poly:
        elem = elem * DahaElement.from_poly(datum, params, poly)
    return elem if elem.terms else DahaElement.one(datum, params)


def _random_aha(datum, params, rng):
    w = rng.randrange(datum.w_order)
    coords = tuple(rng.randrange(-1, 2) for _ in range(datum.rank))
    return aha_mul(AhaElement.from_t(datum, params, w),
                   AhaElement.from_y(datum, params, y_monomial(datum, coords)))


def test_daha_cross_relation():
    # s_i p - ^{s_i}p s_i = h * theta_{alpha_i-vee}(p) in normal form
    from dahakz.rings import demazure_xi
    for i in range(D2.rank):
        s = DahaElement.from_group(D2, P2, aw.simple_reflection(D2, i))
        p = xi_variable(D2, i) * xi_variable(D2, 1 - i) + xi_variable(D2, i)
        avee = tuple(Q(c) for c in D2.coroot_of(D2.simple_roots[i]))
        lhs = daha_mul(s, DahaElement.from_poly(D2, P2, p)) \
            - daha_mul(DahaElement.from_poly(
                D2, P2, xi_apply_w(D2, D2.w_simple[i], p)), s)
        rhs = DahaElement.from_poly(D2, P2, demazure_xi(D2, p, avee)) \
            .scale(P2.h)
        assert lhs == rhs


def test_daha_associativity_random():
    rng = random.Random(20260823)
    for _ in range(30):
        a, b, c = (_random_daha(D2, P2, rng) for _ in range(3))
        assert daha_mul(daha_mul(a, b), c) == daha_mul(a, daha_mul(b, c))


def test_daha_braid_words_agree():
    # products of letter generators along both reduced words of a braid pair
    def prod(word):
        out = DahaElement.one(D2, P2)
        for i in word:
            out = daha_mul(out, DahaElement.from_group(
                D2, P2, aw.simple_reflection(D2, i)))
        return out
    assert prod([0, 1, 0]) == prod([1, 0, 1])
    assert prod([0, HEART, 0]) == prod([HEART, 0, HEART])
    assert prod([1, HEART, 1]) == prod([HEART, 1, HEART])


def test_aha_quadratic_and_braid():
    for d, params in ((D1, A1), (D2, A2)):
        one = AhaElement.one(d, params)
        for i in range(d.rank):
            t = AhaElement.from_t(d, params, d.w_simple[i])
            assert not aha_mul(t - one.scale(params.zeta), t + one).terms
    t0 = AhaElement.from_t(D2, A2, D2.w_simple[0])
    t1 = AhaElement.from_t(D2, A2, D2.w_simple[1])
    lhs = aha_mul(aha_mul(t0, t1), t0)
    rhs = aha_mul(aha_mul(t1, t0), t1)
    assert lhs == rhs


def test_aha_bernstein_relation():
    # t_i y - ^{s_i}y t_i = (zeta - 1) theta_i(y)
    from dahakz.rings import bernstein_theta, y_apply_w
    y = y_monomial(D2, (1, 0))
    t0 = AhaElement.from_t(D2, A2, D2.w_simple[0])
    sy = y_apply_w(D2, D2.w_simple[0], y)
    lhs = aha_mul(t0, AhaElement.from_y(D2, A2, y)) \
        - aha_mul(AhaElement.from_y(D2, A2, sy), t0)
    rhs = AhaElement.from_y(D2, A2, bernstein_theta(D2, y, 0)
                            .scale(A2.zeta - 1))
    assert lhs == rhs


def test_aha_associativity_random():
    rng = random.Random(20260823)
    for _ in range(20):
        a, b, c = (_random_aha(D2, A2, rng) for _ in range(3))
        assert aha_mul(aha_mul(a, b), c) == aha_mul(a, aha_mul(b, c))


def test_y_monomials_commute():
    for ca, cb in (((1, 0), (0, 1)), ((1, 1), (2, -1))):
        a = AhaElement.from_y(D2, A2, y_monomial(D2, ca))
        b = AhaElement.from_y(D2, A2, y_monomial(D2, cb))
        assert aha_mul(a, b) == aha_mul(b, a)


def test_intertwiner_closed_form_rank_one():
    # phi' = s xi_{alpha-vee} - h for a single finite letter
    elem = intertwiner_element(D1, P1, aw.simple_reflection(D1, 0))
    s = DahaElement.from_group(D1, P1, aw.simple_reflection(D1, 0))
    xi_avee = DahaElement.from_poly(
        D1, P1, xi_linear(D1, tuple(Q(c) for c in D1.coroot_of(D1.simple_roots[0]))))
    expected = daha_mul(s, xi_avee) - DahaElement.one(D1, P1).scale(P1.h)
    assert elem == expected


def test_intertwiner_conjugates_polynomials():
    # phi'_i p = ^{s_i}p phi'_i
    elem = intertwiner_element(D2, P2, aw.simple_reflection(D2, 1))
    p = xi_variable(D2, 0) + xi_variable(D2, 1) * xi_variable(D2, 1)
    sp = xi_apply_w(D2, D2.w_simple[1], p)
    lhs = daha_mul(elem, DahaElement.from_poly(D2, P2, p))
    rhs = daha_mul(DahaElement.from_poly(D2, P2, sp), elem)
    assert lhs == rhs


def test_dunkl_operators_commute():
    for f_coords in ((1, 0), (0, 1), (1, 1), (-1, 2)):
        f = x_monomial(D2, f_coords)
        ab = dunkl_apply(D2, P2, 0, dunkl_apply(D2, P2, 1, f))
        ba = dunkl_apply(D2, P2, 1, dunkl_apply(D2, P2, 0, f))
        assert ab == ba


def test_dunkl_rho_shift():
    # D_j(1) = rho-tilde_j
    one = x_monomial(D2, (0, 0))
    for j in range(2):
        out = dunkl_apply(D2, P2, j, one)
        assert out == one.scale(dunkl_rho_coeff(D2, P2, j))


def test_polynomial_rep_multiplicative():
    rng = random.Random(7)
    samples = [_random_daha(D2, P2, rng) for _ in range(10)]
    rep = polynomial_rep_check(D2, P2, samples, degree=2)
    assert rep["failures"] == 0
    assert rep["zero_actors"] == 0


def test_polynomial_action_realizes_xi_as_dunkl():
    f = x_monomial(D2, (1, -1)) + x_monomial(D2, (0, 1), Q(2))
    for j in range(2):
        elem = DahaElement.from_poly(D2, P2, xi_variable(D2, j))
        assert polynomial_action(D2, P2, elem, f) == dunkl_apply(D2, P2, j, f)


def test_xi_affine_coroot_heart():
    # xi_{theta-vee} + 1 on the affine letter
    p = xi_affine_coroot(D2, HEART)
    tv = tuple(Q(c) for c in D2.theta_vee)
    assert p == xi_linear(D2, tuple(-c for c in tv), Q(1))
