"""Coordinate rings S', R, S, their Demazure operators, ideals and jets.

S' = Sym(X-vee) in the variables xi_j = xi_{omega_j-vee}; R = k[Y] spanned by
x_beta for beta in the root lattice; S = k[X-vee] spanned by y_{lambda-vee}
for lambda-vee in the coweight lattice.  All coefficients are exact scalars.
"""
from __future__ import annotations

from fractions import Fraction as Q
from typing import Dict, Tuple

from .errors import InternalCheckError, ScopeError
from .rootdata import RootDatum

Monomial = Tuple[int, ...]

__all__ = [
    "XiPolynomial", "XLaurent", "YLaurent",
    "xi_linear", "xi_variable", "xi_apply_w", "x_monomial", "x_apply_w",
    "y_monomial", "y_apply_w", "coweight_coords", "w_coweight_matrix",
    "demazure_xi", "demazure_x", "bernstein_theta",
    "LocalJet", "PointIdeal", "JetAlgebra", "jet_quotient", "TorusJetAlgebra",
]


def _clean(terms: dict) -> dict:
    return {k: v for k, v in terms.items() if v}


class _DictRing:
    """Shared dict-backed arithmetic for the three coordinate rings."""

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[Monomial, object]):
        self.terms = _clean(terms)

    def _make(self, terms):
        return type(self)(terms)

    def __add__(self, other):
        if isinstance(other, (int, Q)):
            other = self._const(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return self._make(out)

    __radd__ = __add__

    def __neg__(self):
        return self._make({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Q)):
            other = self._const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if not c:
            return self._make({})
        return self._make({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Q)):
            return self.scale(other)
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = self._mul_key(k1, k2)
                out[k] = out.get(k, 0) + v1 * v2
        return self._make(out)

    def __rmul__(self, other):
        if isinstance(other, (int, Q)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Q)):
            other = self._const(other)
        if type(other) is not type(self):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"{type(self).__name__}({self.terms!r})"

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        out = None
        base = self
        acc = base
        # simple square-and-multiply; identity handled by caller conventions
        result = None
        k = e
        while k:
            if k & 1:
                result = acc if result is None else result * acc
            k >>= 1
            if k:
                acc = acc * acc
        if result is None:
            keys = next(iter(self.terms), None)
            rank = len(keys) if keys is not None else 0
            return self._make({(0,) * rank: Q(1)})
        return result

    def _const(self, c):
        raise NotImplementedError

    @staticmethod
    def _mul_key(k1, k2):
        return tuple(a + b for a, b in zip(k1, k2))


class XiPolynomial(_DictRing):
    """Element of S': finitely supported map from exponent vectors to scalars."""

    def _const(self, c):
        r = self._rank()
        return XiPolynomial({(0,) * r: c} if c else {})

    def _rank(self) -> int:
        for k in self.terms:
            return len(k)
        return 0

    @staticmethod
    def constant(c, rank: int) -> "XiPolynomial":
        return XiPolynomial({(0,) * rank: c} if c else {})

    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=0)

    def evaluate(self, lam: Tuple[Q, ...]):
        """Value at a weight lambda given in root coordinates (xi_j = lambda_j)."""
        total = 0
        for k, v in self.terms.items():
            prod = v
            for j, e in enumerate(k):
                for _ in range(e):
                    prod = prod * lam[j]
            total = total + prod
        return total

    def substitute(self, images: Tuple["XiPolynomial", ...]) -> "XiPolynomial":
        """Algebra map determined by xi_j -> images[j]."""
        rank = len(images)
        out = XiPolynomial({})
        for k, v in self.terms.items():
            prod = XiPolynomial.constant(v, rank)
            for j, e in enumerate(k):
                for _ in range(e):
                    prod = prod * images[j]
            out = out + prod
        return out

    def partial(self, j: int) -> "XiPolynomial":
        out: dict = {}
        for k, v in self.terms.items():
            if k[j]:
                k2 = k[:j] + (k[j] - 1,) + k[j + 1:]
                out[k2] = out.get(k2, 0) + v * k[j]
        return XiPolynomial(out)


class XLaurent(_DictRing):
    """Element of R = k[Y]: finitely supported map from Y-vectors to scalars."""

    def _const(self, c):
        r = self._rank()
        return XLaurent({(0,) * r: c} if c else {})

    def _rank(self) -> int:
        for k in self.terms:
            return len(k)
        return 0


class YLaurent(_DictRing):
    """Element of S = k[X-vee]: map from coweight-coordinate vectors to scalars."""

    def _const(self, c):
        r = self._rank()
        return YLaurent({(0,) * r: c} if c else {})

    def _rank(self) -> int:
        for k in self.terms:
            return len(k)
        return 0

    def evaluate(self, values):
        """Value at a torus point given by the values of y_{omega_j-vee}."""
        total = 0
        for k, v in self.terms.items():
            prod = v
            for j, e in enumerate(k):
                if e:
                    prod = prod * (values[j] ** e)
            total = total + prod
        return total


# -- constructors ----------------------------------------------------------

def xi_variable(datum: RootDatum, j: int) -> XiPolynomial:
    key = tuple(1 if i == j else 0 for i in range(datum.rank))
    return XiPolynomial({key: Q(1)})


def coroot_omega_coords(datum: RootDatum, lam_vee: Tuple[Q, ...]) -> Tuple[Q, ...]:
    """Coordinates of a coweight in the fundamental-coweight basis: (alpha_j : .)."""
    return tuple(
        datum.pairing(tuple(Q(x) for x in datum.simple_roots[j]), lam_vee)
        for j in range(datum.rank)
    )


def xi_linear(datum: RootDatum, lam_vee: Tuple[Q, ...], const: Q = Q(0)) -> XiPolynomial:
    """xi_{lambda-vee} + const as an element of S' (lambda-vee in coroot coords)."""
    coeffs = coroot_omega_coords(datum, lam_vee)
    terms: dict = {}
    for j, c in enumerate(coeffs):
        if c:
            terms[tuple(1 if i == j else 0 for i in range(datum.rank))] = c
    if const:
        terms[(0,) * datum.rank] = const
    return XiPolynomial(terms)


def xi_apply_w(datum: RootDatum, w: int, p: XiPolynomial) -> XiPolynomial:
    """^w p for finite w: determined by ^w xi_{lambda-vee} = xi_{w lambda-vee}."""
    images = tuple(
        xi_linear(datum, datum.w_act_coweight(w, datum.fundamental_coweight(j)))
        for j in range(datum.rank)
    )
    return p.substitute(images)


def x_monomial(datum: RootDatum, beta, coeff=Q(1)) -> XLaurent:
    return XLaurent({tuple(int(b) for b in beta): coeff})


def x_apply_w(datum: RootDatum, w: int, f: XLaurent) -> XLaurent:
    return XLaurent({datum.w_act_root(w, k): v for k, v in f.terms.items()})


_COWEIGHT_MATS: dict = {}


def w_coweight_matrix(datum: RootDatum, w: int) -> Tuple[Tuple[int, ...], ...]:
    """Integer matrix of w on the coweight lattice in the omega-vee basis (columns)."""
    key = (id(datum), w)
    if key not in _COWEIGHT_MATS:
        cols = []
        for k in range(datum.rank):
            img = datum.w_act_coweight(w, datum.fundamental_coweight(k))
            coords = coroot_omega_coords(datum, img)
            if any(c.denominator != 1 for c in coords):
                raise InternalCheckError("coweight lattice not preserved")
            cols.append(tuple(int(c) for c in coords))
        _COWEIGHT_MATS[key] = tuple(cols)
    return _COWEIGHT_MATS[key]


def y_monomial(datum: RootDatum, coords, coeff=Q(1)) -> YLaurent:
    return YLaurent({tuple(int(c) for c in coords): coeff})


def y_apply_w(datum: RootDatum, w: int, p: YLaurent) -> YLaurent:
    mat = w_coweight_matrix(datum, w)
    out: dict = {}
    for k, v in p.terms.items():
        img = [0] * datum.rank
        for j, c in enumerate(k):
            if c:
                for i in range(datum.rank):
                    img[i] += c * mat[j][i]
        key = tuple(img)
        out[key] = out.get(key, 0) + v
    return YLaurent(out)


def coweight_coords(datum: RootDatum, lam_vee: Tuple[Q, ...]) -> Tuple[int, ...]:
    coords = coroot_omega_coords(datum, lam_vee)
    if any(c.denominator != 1 for c in coords):
        raise ScopeError("not a coweight lattice vector")
    return tuple(int(c) for c in coords)


# -- Demazure operators ----------------------------------------------------

def demazure_xi(datum: RootDatum, p: XiPolynomial, beta_vee) -> XiPolynomial:
    """theta_{beta-vee}(p) = (p - ^{s_beta}p) / xi_{beta-vee}, exact."""
    beta = tuple(int(b) for b in beta_vee)  # simply-laced: root = coroot coords
    w = datum.reflection_index(beta)
    num = p - xi_apply_w(datum, w, p)
    den = xi_linear(datum, tuple(Q(b) for b in beta_vee))
    return _divide_by_linear(datum, num, den)


def _divide_by_linear(datum: RootDatum, num: XiPolynomial, den: XiPolynomial) -> XiPolynomial:
    """Exact division of num by an affine-linear den; raises on nonzero remainder."""
    r = datum.rank
    pivot = None
    for k, v in den.terms.items():
        if sum(k) == 1:
            pivot = (k.index(1), v)
            break
    if pivot is None:
        raise InternalCheckError("division by a constant form")
    j, c = pivot
    rest = den - XiPolynomial({tuple(1 if i == j else 0 for i in range(r)): c})
    # split num by degree in xi_j
    by_deg: Dict[int, dict] = {}
    for k, v in num.terms.items():
        d = k[j]
        k0 = k[:j] + (0,) + k[j + 1:]
        by_deg.setdefault(d, {})[k0] = v
    if not by_deg:
        return XiPolynomial({})
    top = max(by_deg)
    layers = [XiPolynomial(by_deg.get(d, {})) for d in range(top + 1)]
    xi_j = xi_variable(datum, j)
    quot = XiPolynomial({})
    for d in range(top, 0, -1):
        qd = layers[d].scale(1 / c)
        quot = quot + qd * (xi_j ** (d - 1) if d > 1 else XiPolynomial.constant(Q(1), r))
        layers[d - 1] = layers[d - 1] - qd * rest
        layers[d] = XiPolynomial({})
    if layers[0]:
        raise InternalCheckError("nonzero remainder in Demazure division")
    return quot


def _binomial_divide(terms: dict, shift: Tuple[int, ...], key_fn) -> dict:
    """Exact division of sum(terms) by (1 - x^shift), key_fn strictly decreasing along shift."""
    num = dict(terms)
    quot: dict = {}
    guard = 0
    while num:
        guard += 1
        if guard > 100000:
            raise InternalCheckError("binomial division does not terminate")
        k = max(num, key=lambda kk: (key_fn(kk), kk))
        v = num.pop(k)
        quot[k] = quot.get(k, 0) + v
        k2 = tuple(a + b for a, b in zip(k, shift))
        num[k2] = num.get(k2, 0) + v
        if not num[k2]:
            del num[k2]
    return quot


def demazure_x(datum: RootDatum, f: XLaurent, beta) -> XLaurent:
    """theta_beta(f) = (f - ^{s_beta}f) / (1 - x_{-beta}), exact Laurent quotient."""
    beta = tuple(int(b) for b in beta)
    w = datum.reflection_index(beta)
    num = f - x_apply_w(datum, w, f)
    if not num:
        return XLaurent({})
    bvee = tuple(Q(b) for b in datum.coroot_of(beta))

    def key_fn(k):
        return datum.pairing(tuple(Q(x) for x in k), bvee)

    shift = tuple(-b for b in beta)
    return XLaurent(_binomial_divide(num.terms, shift, key_fn))


def bernstein_theta(datum: RootDatum, p: YLaurent, i: int) -> YLaurent:
    """(p - ^{s_i}p) / (1 - y_{-alpha_i-vee}) as a Laurent polynomial."""
    w = datum.w_simple[i]
    num = p - y_apply_w(datum, w, p)
    if not num:
        return YLaurent({})
    shift = tuple(-c for c in coweight_coords(
        datum, tuple(Q(x) for x in datum.coroot_of(datum.simple_roots[i]))))

    def key_fn(k):
        return k[i]  # (alpha_i : lambda-vee) for lambda-vee = sum k_j omega_j-vee

    return YLaurent(_binomial_divide(num.terms, shift, key_fn))


# -- jets --------------------------------------------------------------------

class LocalJet:
    """Truncated power series in r local variables, total degree < order."""

    __slots__ = ("rank", "order", "terms")

    def __init__(self, rank: int, order: int, terms: Dict[Monomial, object]):
        self.rank = rank
        self.order = order
        self.terms = {k: v for k, v in terms.items() if v and sum(k) < order}

    @staticmethod
    def constant(c, rank: int, order: int) -> "LocalJet":
        return LocalJet(rank, order, {(0,) * rank: c} if c else {})

    def __add__(self, other):
        if isinstance(other, (int, Q)):
            other = LocalJet.constant(other, self.rank, self.order)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return LocalJet(self.rank, self.order, out)

    __radd__ = __add__

    def __neg__(self):
        return LocalJet(self.rank, self.order, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Q)):
            other = LocalJet.constant(other, self.rank, self.order)
        return self + (-other)

    def scale(self, c):
        return LocalJet(self.rank, self.order, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Q)):
            return self.scale(other)
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                if sum(k1) + sum(k2) < self.order:
                    k = tuple(a + b for a, b in zip(k1, k2))
                    out[k] = out.get(k, 0) + v1 * v2
        return LocalJet(self.rank, self.order, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Q)):
            other = LocalJet.constant(other, self.rank, self.order)
        return self.order == other.order and self.terms == other.terms

    def __hash__(self):
        return hash((self.order, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.rank, 0)

    def inverse(self) -> "LocalJet":
        """Inverse of a unit (nonzero constant term) via the geometric series."""
        c = self.constant_term()
        if not c:
            raise ZeroDivisionError("jet is not a unit")
        cinv = 1 / c if not isinstance(c, int) else Q(1, c)
        nil = self.scale(cinv) - 1
        # 1/(1+nil) = sum (-nil)^m, finite since nil is nilpotent in the jet ring
        out = LocalJet.constant(1, self.rank, self.order)
        power = LocalJet.constant(1, self.rank, self.order)
        for _ in range(1, self.order):
            power = power * (-nil)
            if not power:
                break
            out = out + power
        return out.scale(cinv)

    def substitute(self, images) -> "LocalJet":
        """Ring map m_j -> images[j]; each image must have zero constant term."""
        for g in images:
            if g.constant_term():
                raise InternalCheckError("jet substitution image must be nilpotent")
        out = LocalJet.constant(0, images[0].rank if images else self.rank, self.order)
        rank = images[0].rank if images else self.rank
        for k, v in self.terms.items():
            prod = LocalJet.constant(v, rank, self.order)
            for j, e in enumerate(k):
                for _ in range(e):
                    prod = prod * images[j]
            out = out + prod
        return out

    def __repr__(self):
        return f"LocalJet(order={self.order}, {self.terms!r})"


def _jet_monomials(rank: int, order: int):
    mons = [(0,) * rank]
    for _ in range(order - 1):
        new = []
        for m in mons:
            for j in range(rank):
                cand = m[:j] + (m[j] + 1,) + m[j + 1:]
                if sum(cand) < order and cand not in new and cand not in mons:
                    new.append(cand)
        mons.extend(m for m in new if m not in mons)
    return sorted(set(mons), key=lambda m: (sum(m), m))


class PointIdeal:
    """<mu> in S' for a weight mu (or the intersection over a finite orbit), with jet order n."""

    def __init__(self, datum: RootDatum, points, order: int = 1):
        if order < 1:
            raise ValueError("jet order must be >= 1")
        pts = [tuple(Q(c) for c in p) for p in points]
        if len(set(pts)) != len(pts):
            raise ScopeError("points must be pairwise distinct")
        self.datum = datum
        self.points = pts
        self.order = order

    def check_regular(self):
        """Reject points with nontrivial affine stabilizer (regular scope)."""
        for p in self.points:
            for w in range(1, self.datum.w_order):
                diff = tuple(a - b for a, b in zip(p, self.datum.w_act_weight(w, p)))
                if all(d.denominator == 1 for d in diff):
                    raise ScopeError("non-regular point: nontrivial stabilizer")


class JetAlgebra:
    """S'/[E]^n for a finite set E of regular weights: a product of local jet rings."""

    def __init__(self, ideal: PointIdeal):
        ideal.check_regular()
        self.datum = ideal.datum
        self.points = ideal.points
        self.order = ideal.order
        self.rank = ideal.datum.rank
        self.monomials = _jet_monomials(self.rank, self.order)
        self.dimension = len(self.monomials) * len(self.points)

    def zero(self):
        return {p: LocalJet.constant(0, self.rank, self.order) for p in self.points}

    def one(self):
        return {p: LocalJet.constant(Q(1), self.rank, self.order) for p in self.points}

    def reduce(self, p: XiPolynomial):
        """Reduction map S' -> S'/[E]^n: expand around each point."""
        out = {}
        for pt in self.points:
            images = tuple(
                LocalJet(self.rank, self.order, {
                    (0,) * self.rank: pt[j],
                    tuple(1 if i == j else 0 for i in range(self.rank)): Q(1),
                })
                for j in range(self.rank)
            )
            # substitute xi_j = pt_j + m_j; constant terms handled by direct expansion
            acc = LocalJet.constant(0, self.rank, self.order)
            for k, v in p.terms.items():
                prod = LocalJet.constant(v, self.rank, self.order)
                for j, e in enumerate(k):
                    for _ in range(e):
                        prod = prod * images[j]
                acc = acc + prod
            out[pt] = acc
        return out

    def mul(self, a, b):
        return {p: a[p] * b[p] for p in self.points}

    def add(self, a, b):
        return {p: a[p] + b[p] for p in self.points}

    def scale(self, a, c):
        return {p: a[p].scale(c) for p in self.points}

    def basis_vectors(self):
        """Canonical basis: (point, jet monomial) in degree-lexicographic order."""
        return [(p, m) for p in self.points for m in self.monomials]

    def coordinates(self, a):
        return [a[p].terms.get(m, 0) for p, m in self.basis_vectors()]


def jet_quotient(ideal: PointIdeal) -> JetAlgebra:
    return JetAlgebra(ideal)


class TorusJetAlgebra:
    """S/[O]^n for a finite set O of torus points with exact scalar coordinates."""

    def __init__(self, datum: RootDatum, points, order: int = 1):
        # points: tuples of exact nonzero scalars (values of y_{omega_j-vee})
        self.datum = datum
        self.points = list(points)
        self.order = order
        self.rank = datum.rank
        self.monomials = _jet_monomials(self.rank, self.order)
        self.dimension = len(self.monomials) * len(self.points)

    def zero(self):
        return {p: LocalJet.constant(0, self.rank, self.order) for p in self.points}

    def one(self):
        return {p: LocalJet.constant(Q(1), self.rank, self.order) for p in self.points}

    def reduce(self, f: YLaurent):
        """Expand y_j = p_j + m_j around each point; negative powers via jet inversion."""
        out = {}
        for pt in self.points:
            acc = LocalJet.constant(0, self.rank, self.order)
            var_jets = []
            inv_jets = []
            for j in range(self.rank):
                vj = LocalJet(self.rank, self.order, {
                    (0,) * self.rank: pt[j],
                    tuple(1 if i == j else 0 for i in range(self.rank)): Q(1),
                })
                var_jets.append(vj)
                inv_jets.append(None)
            for k, v in f.terms.items():
                prod = LocalJet.constant(v, self.rank, self.order)
                for j, e in enumerate(k):
                    if e > 0:
                        for _ in range(e):
                            prod = prod * var_jets[j]
                    elif e < 0:
                        if inv_jets[j] is None:
                            inv_jets[j] = var_jets[j].inverse()
                        for _ in range(-e):
                            prod = prod * inv_jets[j]
                acc = acc + prod
            out[pt] = acc
        return out

    def mul(self, a, b):
        return {p: a[p] * b[p] for p in self.points}

    def basis_vectors(self):
        return [(i, m) for i in range(len(self.points)) for m in self.monomials]

    def coordinates(self, a):
        return [a[self.points[i]].terms.get(m, 0) for i, m in self.basis_vectors()]
