"""Frobenius solutions, analytic continuation, monodromy, oracle comparisons."""
from fractions import Fraction as Q

import mpmath
import pytest

import dahakz.affine as aw
import dahakz.kz as kz
from dahakz.affine import HEART, HeckeParams
from dahakz.modules import degenerate_fiber
from dahakz.rootdata import type_a

D1 = type_a(1)
D2 = type_a(2)
P1 = HeckeParams.degenerate(Q(1, 2))


def _a1_problem(mu0=(Q(-3, 4),), prec=128):
    fiber = degenerate_fiber(D1, P1, mu0)
    return kz.trig_problem(D1, P1, fiber, prec=prec)


def test_frobenius_scalar_exponential():
    # z f' = (m + z) f has f = z^m e^z, so H_k = 1/k!
    prob = kz.scalar_problem(Q(1, 4), prec=128)
    sol = kz.frobenius_series(prob, 10)
    with mpmath.workprec(128):
        for k in range(1, 11):
            expect = mpmath.mpf(1) / mpmath.factorial(k)
            assert abs(sol.coeffs[(k,)][0, 0] - expect) < mpmath.mpf("1e-30")
        assert sol.residual < mpmath.mpf("1e-30")


def test_frobenius_constant_is_identity():
    with mpmath.workprec(128):
        a0 = [mpmath.matrix([[mpmath.mpf(1) / 3, mpmath.mpf(1)],
                             [mpmath.mpf(0), mpmath.mpf(1) / 7]])]
        prob = kz.constant_problem(a0, prec=128)
        sol = kz.frobenius_series(prob, 6)
        for gamma, mat in sol.coeffs.items():
            if any(gamma):
                assert kz._maxnorm(mat) == 0


def test_frobenius_fiber_residual_tiny():
    prob = _a1_problem(prec=256)
    sol = kz.frobenius_series(prob, 8)
    with mpmath.workprec(256):
        assert sol.residual < mpmath.mpf("1e-20")


def test_flatness_of_fiber_connection():
    out = kz.flatness_check(_a1_problem(), npoints=20)
    assert out["ok"]
    assert out["constant_commute"] < mpmath.mpf("1e-30")


def test_flatness_a2():
    params = HeckeParams.degenerate(Q(1, 3))
    fiber = degenerate_fiber(D2, params, (Q(-4, 5), Q(-6, 7)))
    prob = kz.trig_problem(D2, params, fiber, prec=128)
    out = kz.flatness_check(prob, npoints=10)
    assert out["ok"]


def test_transport_empty_path_is_identity():
    prob = kz.scalar_problem(Q(1, 4), prec=128)
    t = kz.continue_transport(prob, [], rtol=1e-9)
    assert abs(t[0, 0] - 1) < mpmath.mpf("1e-25")


def test_scalar_loop_multiplier():
    prob = kz.scalar_problem(Q(1, 4), prec=128)
    t = kz.continue_transport(prob, kz.loop_path(prob.base, 0), rtol=1e-14)
    with mpmath.workprec(128):
        assert abs(t[0, 0] - mpmath.exp(mpmath.pi * 1j / 2)) \
            < mpmath.mpf("1e-12")


def test_transport_concatenation():
    prob = kz.scalar_problem(Q(1, 3), prec=128)
    loop = kz.loop_path(prob.base, 0)
    once = kz.continue_transport(prob, loop, rtol=1e-12)
    twice = kz.continue_transport(prob, loop + loop, rtol=1e-12)
    assert abs(twice[0, 0] - once[0, 0] ** 2) < mpmath.mpf("1e-10")


def test_loop_homotopy_invariance():
    prob = _a1_problem()
    with mpmath.workprec(prob.prec):
        t1 = kz.continue_transport(prob, kz.loop_path(prob.base, 0, nseg=1),
                                   rtol=1e-10)
        t3 = kz.continue_transport(prob, kz.loop_path(prob.base, 0, nseg=3),
                                   rtol=1e-10)
        assert kz._maxnorm(t1 - t3) < mpmath.mpf("1e-8")


def test_direct_sum_blocks():
    p1 = kz.scalar_problem(Q(1, 4), prec=128)
    p2 = kz.scalar_problem(Q(1, 3), prec=128)
    both = kz.direct_sum(p1, p2)
    loop = kz.loop_path(both.base, 0)
    t = kz.continue_transport(both, loop, rtol=1e-10)
    t1 = kz.continue_transport(p1, kz.loop_path(p1.base, 0), rtol=1e-10)
    t2 = kz.continue_transport(p2, kz.loop_path(p2.base, 0), rtol=1e-10)
    with mpmath.workprec(128):
        assert abs(t[0, 1]) < mpmath.mpf("1e-20")
        assert abs(t[1, 0]) < mpmath.mpf("1e-20")
        assert abs(t[0, 0] - t1[0, 0]) < mpmath.mpf("1e-8")
        assert abs(t[1, 1] - t2[0, 0]) < mpmath.mpf("1e-8")


def test_monodromy_relations_a1():
    rep = kz.monodromy(_a1_problem(), order=16, rtol=1e-9)
    with mpmath.workprec(rep["prec"]):
        for v in rep["residuals"].values():
            assert v < mpmath.mpf("1e-8")


def test_y_spectrum_matches_orbit():
    mu0 = (Q(-3, 4),)
    rep = kz.monodromy(_a1_problem(mu0), order=16, rtol=1e-9)
    expected = [aw.TorusPoint.from_exponent(D1, mu0),
                aw.TorusPoint.from_exponent(
                    D1, tuple(D1.w_act_weight(D1.w_simple[0], mu0)))]
    out = kz.y_spectrum_check(rep, expected)
    assert out["ok"]


def test_rank_one_oracle_special_value():
    # b at argument 3/2 equals 3 pi / 8 when h = 1/2
    out = kz.rank_one_oracle(Q(-3, 2), Q(1, 2), prec=128)
    with mpmath.workprec(128):
        assert abs(out["b"] - 3 * mpmath.pi / 8) < mpmath.mpf("1e-16")


def test_rank_one_oracle_pole_guard():
    from dahakz.errors import ScopeError
    with pytest.raises(ScopeError):
        kz.rank_one_oracle(Q(1), Q(1, 2), prec=64)


def test_rank_one_engine_agrees_with_oracle():
    out = kz.rank_one_check(D1, P1, (Q(-3, 4),), prec=128, order=16,
                            rtol=1e-9)
    with mpmath.workprec(128):
        assert out["residual_a"] < mpmath.mpf("1e-8")
        assert out["residual_b"] < mpmath.mpf("1e-8")


def test_monodromy_precision_stability():
    rep1 = kz.monodromy(_a1_problem(prec=96), order=14, rtol=1e-9,
                        check_relations=False)
    rep2 = kz.monodromy(_a1_problem(prec=160), order=18, rtol=1e-11,
                        check_relations=False)
    with mpmath.workprec(160):
        d = kz._maxnorm(mpmath.matrix(rep1["y"][0].tolist())
                        - rep2["y"][0])
        assert d < mpmath.mpf("1e-7")


def test_monodromy_detour_sides_agree():
    # lower detour pairs with the scalar -1 and lands on the same t
    prob = _a1_problem()
    up = kz.monodromy(prob, order=16, rtol=1e-9, detour="upper",
                      check_relations=False)
    low = kz.monodromy(prob, order=16, rtol=1e-9, detour="lower",
                       check_relations=False)
    with mpmath.workprec(prob.prec):
        res = kz._relation_residuals(D1, low["y"], low["t"], low["zeta"])
        for v in res.values():
            assert v < mpmath.mpf("1e-8")
        # both satisfy the same quadratic, with eigenvalues {zeta, -1}
        for rep in (up, low):
            t = rep["t"][0]
            q = (t - rep["zeta"] * kz._eye(2)) * (t + kz._eye(2))
            assert kz._maxnorm(q) < mpmath.mpf("1e-8")
