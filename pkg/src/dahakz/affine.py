"""Affine and extended affine Weyl groups: actions, lengths, orbits, stabilizers.

Elements are kept in (translation, finite part) normal form for the semidirect
product Y x| W acting on weights by x_mu w (lambda) = mu + w lambda.  Reduced
words in the simple affine reflections s_0..s_{r-1}, s_heart are produced on
demand by the alcove-walk algorithm.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from math import gcd
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import ConfigError, ScopeError
from .rings import XiPolynomial, xi_linear, xi_apply_w
from .rootdata import RootDatum
from .scalars import Cyclotomic, root_of_unity

HEART = -1  # index of the extra affine simple reflection s_heart = x_theta s_theta

__all__ = [
    "HEART", "AffineWeylElement", "identity", "simple_reflection", "translation",
    "compose", "inverse", "act_weight", "act_xi", "act_affine_coroot",
    "length", "reduced_word", "ball", "orbit", "stabilizer", "lemma13_predicate",
    "integral_coroots", "HeckeParams", "TorusPoint", "parameter_bridge",
    "alcove_sample", "fundamental_sample", "omega_elements",
]


@dataclass(frozen=True)
class AffineWeylElement:
    """x_mu w with mu in the translation lattice (root coords) and w in W."""

    trans: Tuple[Q, ...]
    w: int

    def key(self):
        return (self.trans, self.w)


def identity(datum: RootDatum) -> AffineWeylElement:
    return AffineWeylElement((Q(0),) * datum.rank, datum.w_identity)


def simple_reflection(datum: RootDatum, i: int) -> AffineWeylElement:
    """s_i for i in 0..r-1, or s_heart for i == HEART."""
    zero = (Q(0),) * datum.rank
    if i == HEART:
        theta = tuple(Q(c) for c in datum.theta)
        return AffineWeylElement(theta, datum.reflection_index(datum.theta))
    return AffineWeylElement(zero, datum.w_simple[i])


def translation(datum: RootDatum, mu) -> AffineWeylElement:
    return AffineWeylElement(tuple(Q(c) for c in mu), datum.w_identity)


def compose(datum: RootDatum, g: AffineWeylElement, h: AffineWeylElement) -> AffineWeylElement:
    wh = datum.w_act_weight(g.w, h.trans)
    return AffineWeylElement(
        tuple(a + b for a, b in zip(g.trans, wh)), datum.w_mul[g.w][h.w]
    )


def inverse(datum: RootDatum, g: AffineWeylElement) -> AffineWeylElement:
    winv = datum.w_inv[g.w]
    t = datum.w_act_weight(winv, g.trans)
    return AffineWeylElement(tuple(-c for c in t), winv)


def act_weight(datum: RootDatum, g: AffineWeylElement, lam) -> Tuple[Q, ...]:
    """x_mu w (lambda) = mu + w lambda, weights in root coordinates."""
    lam = tuple(Q(c) for c in lam)
    wl = datum.w_act_weight(g.w, lam)
    return tuple(a + b for a, b in zip(g.trans, wl))


def act_xi(datum: RootDatum, g: AffineWeylElement, p: XiPolynomial) -> XiPolynomial:
    """^{x_mu w} xi_{lambda-vee} = xi_{w lambda-vee} - (mu : w lambda-vee)."""
    images = []
    for j in range(datum.rank):
        img_vee = datum.w_act_coweight(g.w, datum.fundamental_coweight(j))
        images.append(xi_linear(datum, img_vee, -datum.pairing(g.trans, img_vee)))
    return p.substitute(tuple(images))


def act_affine_coroot(datum: RootDatum, g: AffineWeylElement, beta_hat) -> tuple:
    """Action on affine coroots (beta-vee, r): image (w beta-vee, r - (mu : w beta-vee))."""
    bvee, r = beta_hat
    img = datum.w_act_coweight(g.w, tuple(Q(c) for c in bvee))
    r2 = Q(r) - datum.pairing(g.trans, img)
    return (tuple(img), r2)


def affine_coroot_eval(datum: RootDatum, beta_hat, lam) -> Q:
    bvee, r = beta_hat
    return datum.pairing(tuple(Q(c) for c in lam), tuple(Q(c) for c in bvee)) + Q(r)


# -- alcoves and lengths -----------------------------------------------------

def fundamental_sample(datum: RootDatum) -> Tuple[Q, ...]:
    """rho/K strictly inside the fundamental alcove, K = ceil((rho:theta-vee)) + 2."""
    level = datum.pairing(datum.rho, tuple(Q(c) for c in datum.theta_vee))
    k = int(level) + 2 if level.denominator == 1 else int(level) + 2
    return tuple(c / k for c in datum.rho)


def alcove_sample(datum: RootDatum, g: AffineWeylElement) -> Tuple[Q, ...]:
    """Interior point of the alcove A_g = g^{-1} A_+."""
    return act_weight(datum, inverse(datum, g), fundamental_sample(datum))


def _count_integers_strictly_between(a: Q, b: Q) -> int:
    lo, hi = (a, b) if a <= b else (b, a)
    if lo.denominator == 1 or hi.denominator == 1:
        raise ScopeError("sample point lies on a wall")
    import math
    return math.floor(hi) - math.ceil(lo) + 1


def length(datum: RootDatum, g: AffineWeylElement) -> int:
    """Number of affine coroot hyperplanes separating A_+ from g(A_+)."""
    if any(c.denominator != 1 for c in g.trans):
        raise ScopeError("length defined for non-extended elements only")
    p = fundamental_sample(datum)
    q = act_weight(datum, g, p)
    total = 0
    for bvee in datum.positive_coroots:
        bb = tuple(Q(c) for c in bvee)
        total += _count_integers_strictly_between(datum.pairing(p, bb), datum.pairing(q, bb))
    return total


def _descent(datum: RootDatum, q) -> Optional[int]:
    """A simple affine reflection whose wall separates A_+ from the alcove of q."""
    for i in range(datum.rank):
        av = tuple(Q(c) for c in datum.simple_roots[i])
        if datum.pairing(q, av) < 0:
            return i
    tv = tuple(Q(c) for c in datum.theta_vee)
    if datum.pairing(q, tv) > 1:
        return HEART
    return None


def reduced_word(datum: RootDatum, g: AffineWeylElement,
                 preference: Optional[List[int]] = None) -> Tuple[int, ...]:
    """A reduced word for g in the letters 0..r-1, HEART (alcove walk).

    The optional preference list reorders which descent is stripped first,
    producing genuinely different reduced words for PBW-independence tests.
    """
    order = preference if preference is not None else list(range(datum.rank)) + [HEART]
    p = fundamental_sample(datum)
    word: List[int] = []
    cur = g
    while True:
        q = act_weight(datum, cur, p)
        found = None
        for i in order:
            if i == HEART:
                tv = tuple(Q(c) for c in datum.theta_vee)
                if datum.pairing(q, tv) > 1:
                    found = HEART
                    break
            else:
                av = tuple(Q(c) for c in datum.simple_roots[i])
                if datum.pairing(q, av) < 0:
                    found = i
                    break
        if found is None:
            break
        word.append(found)
        cur = compose(datum, simple_reflection(datum, found), cur)
    if cur.w != datum.w_identity or any(cur.trans):
        raise ScopeError("element is not in the non-extended affine Weyl group")
    return tuple(word)


def element_from_word(datum: RootDatum, word: Iterable[int]) -> AffineWeylElement:
    g = identity(datum)
    for i in word:
        g = compose(datum, g, simple_reflection(datum, i))
    return g


def ball(datum: RootDatum, radius: int) -> List[AffineWeylElement]:
    """All elements of the affine Weyl group with length <= radius (BFS shells)."""
    seen: Dict[tuple, AffineWeylElement] = {}
    e = identity(datum)
    seen[e.key()] = e
    frontier = [e]
    for _ in range(radius):
        nxt = []
        for g in frontier:
            for i in list(range(datum.rank)) + [HEART]:
                h = compose(datum, simple_reflection(datum, i), g)
                if h.key() not in seen:
                    seen[h.key()] = h
                    nxt.append(h)
        frontier = nxt
    return sorted(seen.values(), key=lambda g: (g.trans, g.w))


def orbit(datum: RootDatum, lam, window: int):
    """{(g, g lambda)} for length(g) <= window, one shortest g per orbit point."""
    lam = tuple(Q(c) for c in lam)
    best: Dict[tuple, Tuple[int, AffineWeylElement]] = {}
    e = identity(datum)
    frontier = {e.key(): e}
    seen = {e.key()}
    best[lam] = (0, e)
    for ell in range(1, window + 1):
        nxt = {}
        for g in frontier.values():
            for i in list(range(datum.rank)) + [HEART]:
                h = compose(datum, simple_reflection(datum, i), g)
                if h.key() in seen:
                    continue
                seen.add(h.key())
                nxt[h.key()] = h
                pt = act_weight(datum, h, lam)
                if pt not in best:
                    best[pt] = (ell, h)
        frontier = nxt
    return {pt: g for pt, (_, g) in best.items()}


def stabilizer(datum: RootDatum, lam, search_bound: int = 8):
    """All g with g lambda = lambda, with the Lemma-1.3 certificate.

    Returns (elements, certified): elements from the explicit description
    {x_{lambda - w lambda} w ; lambda - w lambda in Y}; certified is True when
    a ball search up to search_bound finds no others (it cannot, by the lemma).
    """
    lam = tuple(Q(c) for c in lam)
    elems = []
    for w in range(datum.w_order):
        wl = datum.w_act_weight(w, lam)
        diff = tuple(a - b for a, b in zip(lam, wl))
        if all(d.denominator == 1 for d in diff):
            elems.append(AffineWeylElement(diff, w))
    elem_keys = {g.key() for g in elems}
    certified = True
    for g in ball(datum, search_bound):
        if act_weight(datum, g, lam) == lam and g.key() not in elem_keys:
            certified = False
    return sorted(elems, key=lambda g: (g.trans, g.w)), certified


def lemma13_predicate(datum: RootDatum, lam):
    """(W_lambda, W_{e^lambda}, affine stabilizer, equivalence holds?)."""
    lam = tuple(Q(c) for c in lam)
    w_lam = [w for w in range(datum.w_order) if datum.w_act_weight(w, lam) == lam]
    w_exp = []
    for w in range(datum.w_order):
        diff = tuple(a - b for a, b in zip(lam, datum.w_act_weight(w, lam)))
        if all(d.denominator == 1 for d in diff):
            w_exp.append(w)
    hat, _ = stabilizer(datum, lam, search_bound=0)
    lhs = set(w_lam) == set(w_exp)
    rhs = len(hat) == len(w_lam) and all(
        not any(g.trans) and g.w in w_lam for g in hat
    )
    return w_lam, w_exp, hat, lhs == rhs


def integral_coroots(datum: RootDatum, lam0, h0: Q) -> List[tuple]:
    """{beta-vee : (lambda0 : beta-vee) in Z + Z h0} (the integral coroot system)."""
    lam0 = tuple(Q(c) for c in lam0)
    h0 = Q(h0)
    out = []
    for beta in datum.roots:
        bvee = tuple(Q(c) for c in datum.coroot_of(beta))
        v = datum.pairing(lam0, bvee)
        if _in_z_plus_zh(v, h0):
            out.append(datum.coroot_of(beta))
    return sorted(out)


def _in_z_plus_zh(v: Q, h0: Q) -> bool:
    if h0 == 0:
        return v.denominator == 1
    # Z + Z h0 = (g/q) Z with h0 = p/q, g = gcd(p, q)
    p, q = h0.numerator, h0.denominator
    g = gcd(p, q)
    scaled = v * q / g
    return scaled.denominator == 1


# -- parameters and torus points ---------------------------------------------

@dataclass(frozen=True)
class HeckeParams:
    """Parameters constant on the W-tilde-orbit of simple affine roots.

    Type A has a single orbit: one degenerate parameter h (exact rational),
    one AHA parameter zeta (exact scalar), and tau for the extended action.
    """

    h: Q
    zeta: object = None
    tau: object = None
    zeta_half: object = None

    @staticmethod
    def degenerate(h) -> "HeckeParams":
        return HeckeParams(h=Q(h))

    @staticmethod
    def from_exponent(h0, u0=Q(1)) -> "HeckeParams":
        """AHA parameters from rational exponents: zeta = e^{u0 h0}, tau = e^{u0}."""
        h0, u0 = Q(h0), Q(u0)
        return HeckeParams(
            h=h0,
            zeta=root_of_unity(u0 * h0),
            tau=root_of_unity(u0),
            zeta_half=root_of_unity(u0 * h0 / 2),
        )


class TorusPoint:
    """Point of T-vee given by the exact values of y_{omega_j-vee}."""

    __slots__ = ("datum", "values", "exponent")

    def __init__(self, datum: RootDatum, values, exponent=None):
        self.datum = datum
        self.values = tuple(values)
        if any(not v for v in self.values):
            raise ValueError("torus coordinates must be nonzero")
        self.exponent = exponent  # optional weight lambda with self = e^lambda

    @staticmethod
    def from_exponent(datum: RootDatum, lam) -> "TorusPoint":
        """e^lambda: y_{lambda-vee} value e^{(lambda:lambda-vee)}, convention e^z=exp(2 pi i z)."""
        lam = tuple(Q(c) for c in lam)
        vals = [root_of_unity(lam[j]) for j in range(datum.rank)]
        return TorusPoint(datum, vals, exponent=lam)

    def y_value(self, coords):
        """Value of y_{lambda-vee} for lambda-vee = sum coords_j omega_j-vee."""
        total = None
        for j, c in enumerate(coords):
            if c:
                f = self.values[j] ** int(c)
                total = f if total is None else total * f
        if total is None:
            return Q(1)
        return total

    def act_w(self, w: int) -> "TorusPoint":
        """w(ell): y_{lambda-vee}(w ell) = y_{w^{-1} lambda-vee}(ell)."""
        from .rings import w_coweight_matrix
        winv = self.datum.w_inv[w]
        mat = w_coweight_matrix(self.datum, winv)
        vals = [self.y_value(mat[j]) for j in range(self.datum.rank)]
        exp = None
        if self.exponent is not None:
            exp = self.datum.w_act_weight(w, self.exponent)
        return TorusPoint(self.datum, vals, exponent=exp)

    def inverse_point(self) -> "TorusPoint":
        vals = []
        for v in self.values:
            vals.append(v ** -1 if isinstance(v, Cyclotomic) else 1 / v)
        exp = tuple(-c for c in self.exponent) if self.exponent is not None else None
        return TorusPoint(self.datum, vals, exponent=exp)

    def __eq__(self, other):
        return isinstance(other, TorusPoint) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"TorusPoint({self.values!r})"


def parameter_bridge(datum: RootDatum, h0, lam0, u0, denominator_bound: int = 24):
    """(zeta0, tau0, ell0) with a validity flag for the non-degeneracy condition.

    The condition requires u0 (k + (lambda0 : beta-vee)) to avoid Z \\ {0} for
    every coroot beta-vee (and beta-vee = 0) and every k in Z + sum Z h0; for a
    rational u0 a violation always exists, and the scan reports a witness with
    k-denominators up to the given bound.
    """
    h0, u0 = Q(h0), Q(u0)
    lam0 = tuple(Q(c) for c in lam0)
    params = HeckeParams.from_exponent(h0, u0)
    ell0 = TorusPoint.from_exponent(datum, lam0)
    witness = None
    coroots = [tuple(Q(0) for _ in range(datum.rank))] + [
        tuple(Q(c) for c in datum.coroot_of(b)) for b in datum.roots
    ]
    q = h0.denominator
    step = Q(gcd(h0.numerator, q), q)
    n = 0
    while witness is None and abs(n * step) <= denominator_bound:
        for k in (n * step, -n * step) if n else (Q(0),):
            for bvee in coroots:
                val = u0 * (k + datum.pairing(lam0, bvee))
                if val != 0 and val.denominator == 1:
                    witness = (k, bvee)
                    break
            if witness:
                break
        n += 1
    return params.zeta, params.tau, ell0, witness is None, witness


def omega_elements(datum: RootDatum) -> List[AffineWeylElement]:
    """The diagram-automorphism group Omega of the extended group, for type A.

    Each nontrivial element is x_{omega_pi} w_pi with omega_pi a minuscule
    fundamental weight and w_pi the unique finite part mapping A_+ to the
    translated alcove.
    """
    if not datum.label.startswith("A"):
        raise ScopeError("Omega implemented for type A only")
    out = [identity(datum)]
    p = fundamental_sample(datum)
    for j in range(datum.rank):
        omega = datum.fundamental_weight(j)
        for w in range(datum.w_order):
            g = AffineWeylElement(omega, w)
            q = act_weight(datum, g, p)
            ok = all(
                datum.pairing(q, tuple(Q(c) for c in datum.simple_roots[i])) > 0
                for i in range(datum.rank)
            ) and datum.pairing(q, tuple(Q(c) for c in datum.theta_vee)) < 1
            if ok:
                out.append(g)
                break
    return out
