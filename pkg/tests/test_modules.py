"""Standard and parabolic weight modules, intertwiner matrices, endomorphisms."""
from fractions import Fraction as Q

import pytest

import dahakz.affine as aw
import dahakz.linalg as la
from dahakz.affine import HEART, HeckeParams, TorusPoint
from dahakz.errors import ScopeError
from dahakz.modules import (character, composition_check, degenerate_fiber,
                            endomorphism_algebra, induce, intertwiner_matrix,
                            invertibility, parabolic_module, simple_fixture_a1,
                            standard_module, triangularity_check)
from dahakz.rootdata import type_a

D1 = type_a(1)
D2 = type_a(2)
P1 = HeckeParams.degenerate(Q(1, 2))
A1 = HeckeParams.from_exponent(Q(1, 2))


def test_standard_module_basis_is_orbit():
    mod = standard_module(D1, P1, (Q(1, 4),), window=6)
    assert mod.dimension == len(aw.ball(D1, 6))
    ch = character(mod)
    assert all(m == 1 for m in ch.mults.values())
    orbit_weights = set(aw.orbit(D1, (Q(1, 4),), 6))
    assert set(ch.mults) == orbit_weights


def test_standard_module_relations():
    window = 5
    mod = standard_module(D1, P1, (Q(1, 4),), window=window)
    s0, _ = mod.s_matrix(0)
    xi = mod.xi_matrix(0)
    n = mod.dimension
    # cross relation s xi = -xi s + h (coroot pairing 2 xi gives theta = 2);
    # compare away from the window edge where columns can leak
    lhs = la.mat_mul(s0, xi)
    rhs = la.mat_add(la.mat_scale(la.mat_mul(xi, s0), Q(-1)),
                     la.mat_scale(la.identity(n), P1.h))
    for col in range(n):
        gkey = mod.basis[col][0]
        g = aw.AffineWeylElement(tuple(Q(c) for c in gkey[0]), gkey[1])
        if aw.length(D1, g) <= window - 2:
            for row in range(n):
                assert lhs[row][col] == rhs[row][col]


def test_standard_module_triangular():
    mod = standard_module(D2, HeckeParams.degenerate(Q(1, 3)),
                          (Q(1, 5), Q(1, 7)), window=3)
    for j in range(2):
        assert triangularity_check(mod, j)


def test_standard_module_rejects_singular_point():
    with pytest.raises(ScopeError):
        standard_module(D1, P1, (Q(0),), window=4)


def test_intertwiner_singular_on_wall():
    # (mu : alpha-vee) = h at mu = (1/4): the block determinant vanishes
    out = intertwiner_matrix(D1, P1, aw.simple_reflection(D1, 0),
                             (Q(1, 4),), window=8)
    assert out["singular"]
    assert not out["leaked"] or out["skipped"]


def test_intertwiner_invertible_off_wall():
    # (mu : alpha-vee) = 3/2 avoids +-h: every interior block is invertible
    out = intertwiner_matrix(D1, P1, aw.simple_reflection(D1, 0),
                             (Q(3, 4),), window=8)
    assert not out["singular"]
    assert out["blocks"]


def test_invertibility_letterwise():
    out = invertibility(D1, P1, [0], (Q(1, 4),))
    assert not out["invertible"] and out["witness"] == 0
    out2 = invertibility(D1, P1, [0], (Q(3, 4),))
    assert out2["invertible"]
    # the pairing values are reported in order
    assert out2["values"] == [Q(3, 2)]


def test_invertibility_aha_side():
    ell = TorusPoint.from_exponent(D1, (Q(1, 4),))
    out = invertibility(D1, A1, [0], ell, side="aha")
    # y_{alpha-vee}(ell) = e^{pi i} = zeta: the letter is singular
    assert not out["invertible"]


def test_aha_standard_module_quadratic():
    ell = TorusPoint.from_exponent(D1, (Q(1, 5),))
    mod = standard_module(D1, A1, ell, side="aha")
    assert mod.dimension == 2
    t = mod.t_matrix(0)
    n = mod.dimension
    prod = la.mat_mul(la.mat_sub(t, la.mat_scale(la.identity(n), A1.zeta)),
                      la.mat_add(t, la.identity(n)))
    assert all(not x for row in prod for x in row)


def test_aha_parabolic_module_orbit_points():
    ell = TorusPoint.from_exponent(D1, (Q(1, 4),))
    mod = parabolic_module(D1, A1, (0,), [ell, ell.inverse_point()],
                           side="aha")
    assert mod.dimension == 2
    with pytest.raises(ScopeError):
        parabolic_module(D1, A1, (0,), [ell], side="aha")


def test_endomorphism_algebra_generic_simple():
    ell = TorusPoint.from_exponent(D1, (Q(1, 5),))
    mod = standard_module(D1, A1, ell, side="aha")
    out = endomorphism_algebra([mod])
    assert out["dimension"] == 1
    assert out["simple_count"] == 1


def test_composition_series_family_point():
    out = composition_check(D1, (Q(1, 4),), Q(1, 2), window=14,
                            weight_bound=Q(4),
                            ws=[aw.identity(D1),
                                aw.simple_reflection(D1, HEART)])
    assert out["all_equal"]


def test_induced_module_character():
    fiber = simple_fixture_a1(D1, P1)
    ind = induce(D1, P1, fiber, window=4)
    # one basis vector per translation in the window
    assert ind["dimension"] == len(ind["betas"])
    assert all(m == 1 for m in ind["character"].mults.values())


def test_degenerate_fiber_matches_group_order():
    fiber = degenerate_fiber(D2, HeckeParams.degenerate(Q(1, 3)),
                             (Q(1, 5), Q(1, 7)))
    assert fiber["dim"] == D2.w_order
    assert len(fiber["weights"]) == D2.w_order
    for i in range(2):
        s = fiber["s"][i]
        assert la.mat_mul(s, s) == la.identity(D2.w_order)


def test_simple_fixture_scope():
    with pytest.raises(ScopeError):
        simple_fixture_a1(D2, HeckeParams.degenerate(Q(1, 3)))
    fix = simple_fixture_a1(D1, P1)
    assert fix["dim"] == 1 and fix["weights"] == [(Q(1, 4),)]
