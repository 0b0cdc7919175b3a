"""Normal-form arithmetic in the degenerate DAHA and the affine Hecke algebra.

Degenerate side: elements are sums x_beta * w * p(xi) with beta in the root
lattice, w in the finite Weyl group and p in S'; the product is computed by
pushing xi-polynomials through reduced affine words one simple reflection at a
time.  AHA side: Bernstein form, sums t_w * p(y) with w finite and p Laurent;
the Bernstein commutation is kept polynomial via the finite geometric sum.
"""
from __future__ import annotations

from fractions import Fraction as Q
from typing import Dict, List, Tuple

from . import affine as aw
from .errors import InternalCheckError, ScopeError
from .rings import (
    XiPolynomial, XLaurent, YLaurent, bernstein_theta, demazure_x, demazure_xi,
    xi_apply_w, xi_linear, x_apply_w, x_monomial, y_apply_w, y_monomial,
    coweight_coords, _divide_by_linear,
)
from .rootdata import RootDatum

__all__ = [
    "DahaElement", "AhaElement", "daha_mul", "aha_mul", "intertwiner_element",
    "dunkl_apply", "dunkl_rho_coeff", "polynomial_action", "polynomial_rep_check",
    "xi_affine_coroot", "act_xi_simple", "demazure_affine",
]

GroupKey = Tuple[Tuple[int, ...], int]  # (translation in Y, finite Weyl index)


def _clean(terms: dict) -> dict:
    return {k: v for k, v in terms.items() if v}


class DahaElement:
    """Normal-form element sum_{beta,w} x_beta * w * p_{beta,w}(xi) of H'."""

    __slots__ = ("datum", "params", "terms")

    def __init__(self, datum: RootDatum, params: aw.HeckeParams,
                 terms: Dict[GroupKey, XiPolynomial]):
        self.datum = datum
        self.params = params
        self.terms = _clean(terms)

    @staticmethod
    def zero(datum, params) -> "DahaElement":
        return DahaElement(datum, params, {})

    @staticmethod
    def one(datum, params) -> "DahaElement":
        key = ((0,) * datum.rank, datum.w_identity)
        return DahaElement(datum, params, {key: XiPolynomial.constant(Q(1), datum.rank)})

    @staticmethod
    def from_poly(datum, params, p: XiPolynomial) -> "DahaElement":
        key = ((0,) * datum.rank, datum.w_identity)
        return DahaElement(datum, params, {key: p})

    @staticmethod
    def from_group(datum, params, g: aw.AffineWeylElement) -> "DahaElement":
        trans = tuple(int(c) for c in g.trans)
        if tuple(Q(c) for c in trans) != g.trans:
            raise ScopeError("group element is not in the non-extended group")
        return DahaElement(datum, params,
                           {(trans, g.w): XiPolynomial.constant(Q(1), datum.rank)})

    @staticmethod
    def from_x(datum, params, f: XLaurent) -> "DahaElement":
        return DahaElement(datum, params, {
            (k, datum.w_identity): XiPolynomial.constant(v, datum.rank)
            for k, v in f.terms.items()
        })

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, XiPolynomial({})) + v
        return DahaElement(self.datum, self.params, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "DahaElement":
        return DahaElement(self.datum, self.params,
                           {k: v.scale(c) for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Q)):
            return self.scale(other)
        return daha_mul(self, other)

    def __eq__(self, other):
        return (isinstance(other, DahaElement) and self.terms == other.terms)

    def __repr__(self):
        return f"DahaElement({self.terms!r})"


def xi_affine_coroot(datum: RootDatum, i: int) -> XiPolynomial:
    """xi_{alpha_i-vee}; for the extra affine index, xi = 1 - xi_{theta-vee}."""
    if i == aw.HEART:
        theta_vee = tuple(Q(c) for c in datum.theta_vee)
        return XiPolynomial.constant(Q(1), datum.rank) - xi_linear(datum, theta_vee)
    av = tuple(Q(c) for c in datum.coroot_of(datum.simple_roots[i]))
    return xi_linear(datum, av)


def act_xi_simple(datum: RootDatum, i: int, p: XiPolynomial) -> XiPolynomial:
    """^{s_i} p with the affine action for the extra index."""
    return aw.act_xi(datum, aw.simple_reflection(datum, i), p)


def demazure_affine(datum: RootDatum, i: int, p: XiPolynomial) -> XiPolynomial:
    """theta_{alpha_i-vee}(p) = (p - ^{s_i}p)/xi_{alpha_i-vee}, affine letters included."""
    num = p - act_xi_simple(datum, i, p)
    if not num:
        return XiPolynomial({})
    return _divide_by_linear(datum, num, xi_affine_coroot(datum, i))


def _poly_times_group(datum: RootDatum, params: aw.HeckeParams,
                      p: XiPolynomial, g: aw.AffineWeylElement,
                      word: Tuple[int, ...]) -> Dict[GroupKey, XiPolynomial]:
    """Normal form of p * g in H', recursing along a reduced word of g."""
    if not p:
        return {}
    if not word:
        return {(tuple(int(c) for c in g.trans), g.w): p}
    i = word[0]
    s = aw.simple_reflection(datum, i)
    g2 = aw.compose(datum, s, g)  # g = s * g2
    sp = act_xi_simple(datum, i, p)
    # p s_i = s_i ^{s_i}p - h theta_{alpha_i-vee}(^{s_i}p)
    out: Dict[GroupKey, XiPolynomial] = {}
    part1 = _poly_times_group(datum, params, sp, g2, word[1:])
    skey = (tuple(int(c) for c in s.trans), s.w)
    for (tr, w), q in part1.items():
        left = aw.compose(datum, s, aw.AffineWeylElement(tuple(Q(c) for c in tr), w))
        key = (tuple(int(c) for c in left.trans), left.w)
        out[key] = out.get(key, XiPolynomial({})) + q
    corr = demazure_affine(datum, i, sp)
    if corr:
        part2 = _poly_times_group(datum, params, corr.scale(-params.h), g2, word[1:])
        for key, q in part2.items():
            out[key] = out.get(key, XiPolynomial({})) + q
    return out


def daha_mul(a: DahaElement, b: DahaElement) -> DahaElement:
    datum, params = a.datum, a.params
    if b.datum is not datum:
        raise ScopeError("root datum mismatch")
    out: Dict[GroupKey, XiPolynomial] = {}
    word_cache: dict = {}
    for (beta, w), p in a.terms.items():
        gw = aw.AffineWeylElement(tuple(Q(c) for c in beta), w)
        for (gamma, v), q in b.terms.items():
            g = aw.AffineWeylElement(tuple(Q(c) for c in gamma), v)
            gk = g.key()
            if gk not in word_cache:
                word_cache[gk] = aw.reduced_word(datum, g)
            pushed = _poly_times_group(datum, params, p, g, word_cache[gk])
            for (delta, u), r in pushed.items():
                left = aw.compose(datum, gw,
                                  aw.AffineWeylElement(tuple(Q(c) for c in delta), u))
                key = (tuple(int(c) for c in left.trans), left.w)
                prod = r * q
                out[key] = out.get(key, XiPolynomial({})) + prod
    return DahaElement(datum, params, out)


# -- affine Hecke algebra ------------------------------------------------------

class AhaElement:
    """Normal-form element sum_w t_w * p_w(y) of the AHA in Bernstein form."""

    __slots__ = ("datum", "params", "terms")

    def __init__(self, datum: RootDatum, params: aw.HeckeParams,
                 terms: Dict[int, YLaurent]):
        self.datum = datum
        self.params = params
        self.terms = _clean(terms)

    @staticmethod
    def zero(datum, params) -> "AhaElement":
        return AhaElement(datum, params, {})

    @staticmethod
    def one(datum, params) -> "AhaElement":
        return AhaElement(datum, params,
                          {datum.w_identity: y_monomial(datum, (0,) * datum.rank)})

    @staticmethod
    def from_y(datum, params, p: YLaurent) -> "AhaElement":
        return AhaElement(datum, params, {datum.w_identity: p})

    @staticmethod
    def from_t(datum, params, w: int) -> "AhaElement":
        return AhaElement(datum, params, {w: y_monomial(datum, (0,) * datum.rank)})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, YLaurent({})) + v
        return AhaElement(self.datum, self.params, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "AhaElement":
        return AhaElement(self.datum, self.params,
                          {k: v.scale(c) for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Q)):
            return self.scale(other)
        return aha_mul(self, other)

    def __eq__(self, other):
        return isinstance(other, AhaElement) and self.terms == other.terms

    def __repr__(self):
        return f"AhaElement({self.terms!r})"


def _t_times_letter(datum: RootDatum, params, terms: Dict[int, YLaurent],
                    i: int) -> Dict[int, YLaurent]:
    """Right multiplication of sum t_w p_w by t_i, pushing p_w through first."""
    zeta = params.zeta
    out: Dict[int, YLaurent] = {}
    si = datum.w_simple[i]
    for w, p in terms.items():
        sp = y_apply_w(datum, si, p)
        theta = bernstein_theta(datum, sp, i)
        # p t_i = t_i ^{s_i}p - (zeta - 1) theta(^{s_i}p)
        wsi = datum.w_mul[w][si]
        if datum.w_length(wsi) > datum.w_length(w):
            out[wsi] = out.get(wsi, YLaurent({})) + sp
        else:
            # t_w t_i = zeta t_{w s_i} + (zeta - 1) t_w
            out[wsi] = out.get(wsi, YLaurent({})) + sp.scale(zeta)
            out[w] = out.get(w, YLaurent({})) + sp.scale(zeta - 1)
        if theta:
            corr = theta.scale(-(zeta - 1))
            out[w] = out.get(w, YLaurent({})) + corr
    return _clean(out)


def aha_mul(a: AhaElement, b: AhaElement) -> AhaElement:
    datum, params = a.datum, a.params
    out: Dict[int, YLaurent] = {}
    for v, q in b.terms.items():
        word = datum.w_words[v]
        cur = dict(a.terms)
        for i in word:
            cur = _t_times_letter(datum, params, cur, i)
        for w, p in cur.items():
            prod = p * q
            out[w] = out.get(w, YLaurent({})) + prod
    return AhaElement(datum, params, out)


# -- intertwiners ---------------------------------------------------------------

def intertwiner_element(datum: RootDatum, params: aw.HeckeParams,
                        target, side: str = "degenerate"):
    """phi'_w (degenerate) or phi_w (aha) along a reduced word.

    target: an AffineWeylElement (degenerate side) or a finite Weyl index /
    explicit word (either side).
    """
    if side == "degenerate":
        if isinstance(target, aw.AffineWeylElement):
            word = aw.reduced_word(datum, target)
        else:
            word = tuple(target)
        out = DahaElement.one(datum, params)
        for i in word:
            si = DahaElement.from_group(datum, params, aw.simple_reflection(datum, i))
            phi = daha_mul(si, DahaElement.from_poly(datum, params,
                                                     xi_affine_coroot(datum, i)))
            phi = phi + DahaElement.from_poly(
                datum, params, XiPolynomial.constant(-params.h, datum.rank))
            out = daha_mul(out, phi)
        return out
    if side == "aha":
        word = tuple(target) if not isinstance(target, int) else datum.w_words[target]
        out = AhaElement.one(datum, params)
        zeta = params.zeta
        for i in word:
            mav = tuple(-c for c in coweight_coords(
                datum, tuple(Q(c) for c in datum.coroot_of(datum.simple_roots[i]))))
            ym = y_monomial(datum, mav) - y_monomial(datum, (0,) * datum.rank)
            phi = aha_mul(AhaElement.from_t(datum, params, datum.w_simple[i]),
                          AhaElement.from_y(datum, params, ym))
            const = y_monomial(datum, (0,) * datum.rank).scale(zeta - 1)
            phi = phi + AhaElement.from_y(datum, params, const)
            out = aha_mul(out, phi)
        return out
    raise ScopeError("side must be 'degenerate' or 'aha'")


# -- Dunkl operators --------------------------------------------------------------

def dunkl_rho_coeff(datum: RootDatum, params: aw.HeckeParams, j: int) -> Q:
    """rho-tilde_j = (h/2) * sum of j-th coordinates of the positive roots."""
    return params.h * Q(sum(b[j] for b in datum.positive_roots), 2)


def dunkl_apply(datum: RootDatum, params: aw.HeckeParams, j: int,
                f: XLaurent) -> XLaurent:
    """D_j f = partial_j f - sum_{beta>0} h beta_j theta_beta(f) + rho-tilde_j f."""
    out: Dict[tuple, object] = {}
    for k, v in f.terms.items():
        if k[j]:
            out[k] = out.get(k, 0) + v * k[j]
    result = XLaurent(out)
    for beta in datum.positive_roots:
        if beta[j]:
            tb = demazure_x(datum, f, beta)
            if tb:
                result = result - tb.scale(params.h * beta[j])
    return result + f.scale(dunkl_rho_coeff(datum, params, j))


def polynomial_action(datum: RootDatum, params: aw.HeckeParams,
                      a: DahaElement, f: XLaurent) -> XLaurent:
    """The polynomial representation: x acts by multiplication, w by ^w, xi_j by D_j."""
    out = XLaurent({})
    for (beta, w), p in a.terms.items():
        for mono, coeff in p.terms.items():
            g = f
            for j in range(datum.rank - 1, -1, -1):
                for _ in range(mono[j]):
                    g = dunkl_apply(datum, params, j, g)
            g = x_apply_w(datum, w, g)
            g = x_monomial(datum, beta, coeff) * g
            out = out + g
    return out


def polynomial_rep_check(datum: RootDatum, params: aw.HeckeParams,
                         samples: List[DahaElement], degree: int) -> dict:
    """Multiplicativity and a faithfulness spot-check of the Dunkl representation."""
    monos = _laurent_monomials(datum, degree)
    failures = 0
    zero_actors = 0
    for idx in range(0, len(samples) - 1, 2):
        a, b = samples[idx], samples[idx + 1]
        ab = daha_mul(a, b)
        for m in monos:
            f = x_monomial(datum, m)
            lhs = polynomial_action(datum, params, ab, f)
            rhs = polynomial_action(datum, params, a,
                                    polynomial_action(datum, params, b, f))
            if lhs != rhs:
                failures += 1
    for a in samples:
        if not a.terms:
            continue
        if all(not polynomial_action(datum, params, a, x_monomial(datum, m))
               for m in monos):
            zero_actors += 1
    return {"pairs": (len(samples) // 2), "monomials": len(monos),
            "failures": failures, "zero_actors": zero_actors}


def _laurent_monomials(datum: RootDatum, degree: int):
    from itertools import product
    rng = range(-degree, degree + 1)
    return [m for m in product(rng, repeat=datum.rank)
            if sum(abs(c) for c in m) <= degree]
