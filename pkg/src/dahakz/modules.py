"""Finite truncations of standard and parabolically induced weight modules.

Both sides are supported: modules over the degenerate double algebra H'
(basis indexed by affine group elements in a length window, times a jet
basis at the inducing points) and modules over the affine Hecke algebra
(basis indexed by the finite Weyl group, times a torus jet basis).
Characters, intertwiner matrices with per-weight block determinants, the
induction functor, and exact endomorphism algebras are built on top.
"""
from __future__ import annotations

from fractions import Fraction as Q
from typing import Dict, List, Optional, Sequence, Tuple

from . import affine as aw
from . import linalg
from .errors import InternalCheckError, ScopeError
from .hecke import (AhaElement, DahaElement, aha_mul, daha_mul,
                    intertwiner_element)
from .rings import (JetAlgebra, LocalJet, PointIdeal, TorusJetAlgebra,
                    XiPolynomial, YLaurent, coweight_coords, xi_apply_w,
                    xi_linear, xi_variable, y_apply_w, y_monomial)
from .rootdata import RootDatum
from .scalars import Cyclotomic

__all__ = [
    "Character", "WeightModule",
    "standard_module", "parabolic_module", "induce", "degenerate_fiber",
    "character", "intertwiner_matrix", "invertibility",
    "endomorphism_algebra", "composition_check", "triangularity_check",
    "stable_character", "simple_fixture_a1",
]


class Character:
    """Multiset of (weight, multiplicity) pairs with a window descriptor."""

    def __init__(self, mults: Dict[tuple, int], window):
        for m in mults.values():
            if m <= 0:
                raise InternalCheckError("character multiplicities must be positive")
        self.mults = dict(mults)
        self.window = window

    def restrict(self, predicate) -> "Character":
        kept = {k: v for k, v in self.mults.items() if predicate(k)}
        return Character(kept, self.window)

    def __add__(self, other: "Character") -> "Character":
        out = dict(self.mults)
        for k, v in other.mults.items():
            out[k] = out.get(k, 0) + v
        return Character(out, self.window)

    def __eq__(self, other):
        return isinstance(other, Character) and self.mults == other.mults

    def items(self):
        return sorted(self.mults.items(), key=lambda kv: repr(kv[0]))

    def __repr__(self):
        return f"Character({self.items()!r})"


# -- coset decomposition ----------------------------------------------------

def _affine_coset(datum: RootDatum, g: aw.AffineWeylElement, J: tuple,
                  length_cache: dict):
    """g = v * u with u in the finite parabolic W_J and v of minimal length.

    Returns (v, u_word) where u = s_{j1} ... s_{jk} for u_word = (j1, ..., jk).
    """
    def ln(x):
        k = x.key()
        if k not in length_cache:
            length_cache[k] = aw.length(datum, x)
        return length_cache[k]

    u_word: List[int] = []
    cur = g
    changed = True
    while changed:
        changed = False
        for j in J:
            cand = aw.compose(datum, cur, aw.simple_reflection(datum, j))
            if ln(cand) < ln(cur):
                cur = cand
                u_word.insert(0, j)
                changed = True
                break
    return cur, tuple(u_word)


def _finite_coset(datum: RootDatum, w: int, J: tuple):
    """Same decomposition inside the finite Weyl group (w an index)."""
    u_word: List[int] = []
    cur = w
    changed = True
    while changed:
        changed = False
        for j in J:
            cand = datum.w_mul[cur][datum.w_simple[j]]
            if datum.w_length(cand) < datum.w_length(cur):
                cur = cand
                u_word.insert(0, j)
                changed = True
                break
    return cur, tuple(u_word)


# -- deformed parabolic actions on jet algebras ------------------------------

def _lift_xi_jet(datum: RootDatum, pt: tuple, jet: LocalJet) -> XiPolynomial:
    """Canonical polynomial lift of a jet at pt: m_j -> xi_j - pt_j."""
    rank = datum.rank
    out = XiPolynomial({})
    for m, c in jet.terms.items():
        p = XiPolynomial.constant(c, rank)
        for j, e in enumerate(m):
            var = xi_variable(datum, j) - XiPolynomial.constant(pt[j], rank)
            for _ in range(e):
                p = p * var
        out = out + p
    return out


def _lift_y_jet(datum: RootDatum, pt: tuple, jet: LocalJet) -> YLaurent:
    """Canonical Laurent lift of a torus jet at pt: m_j -> y_j - pt_j."""
    rank = datum.rank
    zero = (0,) * rank
    out = YLaurent({})
    for m, c in jet.terms.items():
        p = YLaurent({zero: c})
        for j, e in enumerate(m):
            ej = tuple(1 if i == j else 0 for i in range(rank))
            var = YLaurent({ej: Q(1), zero: -pt[j]})
            for _ in range(e):
                p = p * var
        out = out + p
    return out


def _xi_idempotent(datum: RootDatum, jetalg: JetAlgebra, pt: tuple) -> XiPolynomial:
    """Polynomial congruent to 1 mod [pt]^n and to 0 mod [qt]^n for qt != pt."""
    rank = datum.rank
    u = XiPolynomial.constant(Q(1), rank)
    for qt in jetalg.points:
        if qt == pt:
            continue
        k = next(i for i in range(rank) if pt[i] != qt[i])
        factor = xi_variable(datum, k) - XiPolynomial.constant(qt[k], rank)
        for _ in range(jetalg.order):
            u = u * factor
    inv_jet = jetalg.reduce(u)[pt].inverse()
    return u * _lift_xi_jet(datum, pt, inv_jet)


def _y_idempotent(datum: RootDatum, jetalg: TorusJetAlgebra, pt: tuple) -> YLaurent:
    """Laurent polynomial congruent to 1 at pt and 0 mod [qt]^n elsewhere."""
    rank = datum.rank
    zero = (0,) * rank
    u = YLaurent({zero: Q(1)})
    for qt in jetalg.points:
        if qt == pt:
            continue
        k = next(i for i in range(rank) if pt[i] != qt[i])
        ek = tuple(1 if i == k else 0 for i in range(rank))
        factor = YLaurent({ek: Q(1), zero: -qt[k]})
        for _ in range(jetalg.order):
            u = u * factor
    inv_jet = jetalg.reduce(u)[pt].inverse()
    return u * _lift_y_jet(datum, pt, inv_jet)


def _deformed_s(datum: RootDatum, jetalg: JetAlgebra, j: int, h, f: dict) -> dict:
    """Quotient action of s_j on S'/[O']^n: f -> ^{s_j}f + h theta_{alpha_j}(f).

    The Demazure term divides by xi_{alpha_j-vee} pointwise; regularity of
    the orbit makes that a unit in every local jet ring.
    """
    w = datum.w_simple[j]
    sf = {}
    for pt in jetalg.points:
        spt = tuple(datum.w_act_weight(w, pt))
        if spt not in f:
            raise ScopeError("point set is not closed under the parabolic group")
        lift = _lift_xi_jet(datum, spt, f[spt])
        sf[pt] = jetalg.reduce(xi_apply_w(datum, w, lift))[pt]
    av = tuple(Q(c) for c in datum.coroot_of(datum.simple_roots[j]))
    den = jetalg.reduce(xi_linear(datum, av))
    out = {}
    for pt in jetalg.points:
        theta = (f[pt] - sf[pt]) * den[pt].inverse()
        out[pt] = sf[pt] + theta.scale(h)
    return out


def _torus_act_point(datum: RootDatum, w: int, pt: tuple) -> tuple:
    return aw.TorusPoint(datum, pt).act_w(w).values


def _deformed_t(datum: RootDatum, jetalg: TorusJetAlgebra, j: int, zeta,
                f: dict) -> dict:
    """Quotient action of t_j on S/[O]^n: f -> zeta ^{s_j}f + (zeta-1) theta_j(f)."""
    w = datum.w_simple[j]
    sf = {}
    for pt in jetalg.points:
        spt = _torus_act_point(datum, w, pt)
        if spt not in f:
            raise ScopeError("orbit is not closed under the parabolic group")
        lift = _lift_y_jet(datum, spt, f[spt])
        sf[pt] = jetalg.reduce(y_apply_w(datum, w, lift))[pt]
    av = tuple(Q(c) for c in datum.coroot_of(datum.simple_roots[j]))
    mav = tuple(-c for c in coweight_coords(datum, av))
    one = y_monomial(datum, (0,) * datum.rank)
    den = jetalg.reduce(one - y_monomial(datum, mav))
    out = {}
    for pt in jetalg.points:
        theta = (f[pt] - sf[pt]) * den[pt].inverse()
        out[pt] = sf[pt].scale(zeta) + theta.scale(zeta - 1)
    return out


# -- module container ---------------------------------------------------------

class WeightModule:
    """Truncated weight module with exact generator action.

    Degenerate side: basis (affine group element, point, jet monomial) over
    minimal W_J-coset representatives in a length window.  AHA side: basis
    (finite Weyl index, point, jet monomial) over minimal coset reps (no
    window needed: the group part is finite).
    """

    def __init__(self, side, datum, params, J, jetalg, group_list, window):
        self.side = side
        self.datum = datum
        self.params = params
        self.J = tuple(J)
        self.jetalg = jetalg
        self.group_list = group_list  # degenerate: AffineWeylElements; aha: ints
        self.window = window
        self._length_cache: dict = {}
        self.basis: List[tuple] = []
        for g in group_list:
            gkey = g.key() if side == "degenerate" else g
            for pt in jetalg.points:
                for m in jetalg.monomials:
                    self.basis.append((gkey, pt, m))
        self.index = {b: i for i, b in enumerate(self.basis)}
        if len(jetalg.points) > 1:
            idem_fn = _xi_idempotent if side == "degenerate" else _y_idempotent
            self._idem = {pt: idem_fn(datum, jetalg, pt) for pt in jetalg.points}
        else:
            self._idem = None
        self._group_index = {}
        for g in group_list:
            self._group_index[g.key() if side == "degenerate" else g] = g

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def _check_exact_scalars(self):
        pass  # all constructions below are exact by design

    # -- action ---------------------------------------------------------------

    def _apply_degenerate(self, elem: DahaElement, bidx: int):
        """Column of elem acting on basis vector bidx; returns (coords, leaked)."""
        gkey, pt, mono = self.basis[bidx]
        v = aw.AffineWeylElement(tuple(Q(c) for c in gkey[0]), gkey[1])
        lift = _lift_xi_jet(self.datum, pt,
                            LocalJet(self.jetalg.rank, self.jetalg.order, {mono: Q(1)}))
        if self._idem is not None:
            lift = lift * self._idem[pt]
        full = daha_mul(elem, daha_mul(
            DahaElement.from_group(self.datum, self.params, v),
            DahaElement.from_poly(self.datum, self.params, lift)))
        col: dict = {}
        leaked = False
        for (tr, w), p in full.terms.items():
            g = aw.AffineWeylElement(tuple(Q(c) for c in tr), w)
            vmin, u_word = _affine_coset(self.datum, g, self.J, self._length_cache)
            if vmin.key() not in self._group_index:
                leaked = True
                continue
            f = self.jetalg.reduce(p)
            for j in reversed(u_word):
                f = _deformed_s(self.datum, self.jetalg, j, self.params.h, f)
            for qt in self.jetalg.points:
                for m, c in f[qt].terms.items():
                    if c:
                        ridx = self.index[(vmin.key(), qt, m)]
                        col[ridx] = col.get(ridx, 0) + c
        return col, leaked

    def _apply_aha(self, elem: AhaElement, bidx: int):
        wkey, pt, mono = self.basis[bidx]
        lift = _lift_y_jet(self.datum, pt,
                           LocalJet(self.jetalg.rank, self.jetalg.order, {mono: Q(1)}))
        if self._idem is not None:
            lift = lift * self._idem[pt]
        full = aha_mul(elem, aha_mul(
            AhaElement.from_t(self.datum, self.params, wkey),
            AhaElement.from_y(self.datum, self.params, lift)))
        col: dict = {}
        for w, p in full.terms.items():
            vmin, u_word = _finite_coset(self.datum, w, self.J)
            if vmin not in self._group_index:
                raise InternalCheckError("finite coset representative missing")
            f = self.jetalg.reduce(p)
            f = {q: f[q] for q in self.jetalg.points}
            for j in reversed(u_word):
                f = _deformed_t(self.datum, self.jetalg, j, self.params.zeta, f)
            for qt in self.jetalg.points:
                for m, c in f[qt].terms.items():
                    if c:
                        ridx = self.index[(vmin, qt, m)]
                        col[ridx] = col.get(ridx, 0) + c
        return col, False

    def matrix_of(self, elem):
        """Exact matrix of an algebra element; also reports window leakage."""
        n = self.dimension
        mat = [[Q(0)] * n for _ in range(n)]
        leaked = False
        apply_fn = self._apply_degenerate if self.side == "degenerate" else self._apply_aha
        for b in range(n):
            col, lk = apply_fn(elem, b)
            leaked = leaked or lk
            for r, c in col.items():
                mat[r][b] = c
        return mat, leaked

    # -- generators -------------------------------------------------------------

    def s_matrix(self, i: int):
        if self.side != "degenerate":
            raise ScopeError("s-generators act on the degenerate side")
        return self.matrix_of(DahaElement.from_group(
            self.datum, self.params, aw.simple_reflection(self.datum, i)))

    def xi_matrix(self, j: int):
        if self.side != "degenerate":
            raise ScopeError("xi-generators act on the degenerate side")
        return self.matrix_of(DahaElement.from_poly(
            self.datum, self.params, xi_variable(self.datum, j)))[0]

    def t_matrix(self, i: int):
        if self.side != "aha":
            raise ScopeError("t-generators act on the AHA side")
        return self.matrix_of(AhaElement.from_t(
            self.datum, self.params, self.datum.w_simple[i]))[0]

    def y_matrix(self, coords):
        if self.side != "aha":
            raise ScopeError("y-generators act on the AHA side")
        return self.matrix_of(AhaElement.from_y(
            self.datum, self.params, y_monomial(self.datum, coords)))[0]

    # -- weights -------------------------------------------------------------------

    def weight_of(self, bidx: int) -> tuple:
        gkey, pt, _ = self.basis[bidx]
        if self.side == "degenerate":
            g = aw.AffineWeylElement(tuple(Q(c) for c in gkey[0]), gkey[1])
            return tuple(aw.act_weight(self.datum, g, pt))
        return _torus_act_point(self.datum, gkey, pt)


# -- constructors -----------------------------------------------------------------

def _minimal_affine_reps(datum: RootDatum, J: tuple, L: int):
    reps = []
    cache: dict = {}
    for g in aw.ball(datum, L):
        vmin, u_word = _affine_coset(datum, g, J, cache)
        if not u_word:
            reps.append(g)
    reps.sort(key=lambda g: (cache.get(g.key(), aw.length(datum, g)), g.key()))
    return reps


def _minimal_finite_reps(datum: RootDatum, J: tuple):
    reps = []
    for w in range(datum.w_order):
        vmin, u_word = _finite_coset(datum, w, J)
        if not u_word:
            reps.append(w)
    reps.sort(key=lambda w: (datum.w_length(w), w))
    return reps


def standard_module(datum: RootDatum, params, point, window: int = None,
                    n: int = 1, side: str = "degenerate") -> WeightModule:
    """P(mu) (degenerate) or the finite AHA standard module at a torus point.

    Degenerate side: point is a weight with trivial affine stabilizer and
    window is the group-length cutoff.  AHA side: point is a TorusPoint (or
    coordinate tuple) with trivial finite stabilizer; no window is needed.
    """
    if side == "degenerate":
        if window is None:
            raise ScopeError("degenerate standard module needs a length window")
        ideal = PointIdeal(datum, [point], order=n)
        jetalg = JetAlgebra(ideal)
        reps = _minimal_affine_reps(datum, (), window)
        return WeightModule("degenerate", datum, params, (), jetalg, reps, window)
    if side == "aha":
        values = point.values if isinstance(point, aw.TorusPoint) else tuple(point)
        _check_regular_torus(datum, [values])
        jetalg = TorusJetAlgebra(datum, [values], order=n)
        reps = _minimal_finite_reps(datum, ())
        return WeightModule("aha", datum, params, (), jetalg, reps, None)
    raise ScopeError("side must be 'degenerate' or 'aha'")


def _check_regular_torus(datum: RootDatum, points):
    for pt in points:
        for w in range(1, datum.w_order):
            if _torus_act_point(datum, w, pt) == pt:
                raise ScopeError("non-regular torus point: nontrivial stabilizer")


def parabolic_module(datum: RootDatum, params, J, points, window: int = None,
                     n: int = 1, side: str = "degenerate") -> WeightModule:
    """P_J(O') (degenerate) or P-underbar_J(O) (AHA) with jet order n.

    points must be the full W_J-orbit O' (resp. O) of regular points.
    """
    J = tuple(J)
    if side == "degenerate":
        if window is None:
            raise ScopeError("degenerate parabolic module needs a length window")
        pts = [tuple(Q(c) for c in p) for p in points]
        for j in J:
            for p in pts:
                if tuple(datum.w_act_weight(datum.w_simple[j], p)) not in pts:
                    raise ScopeError("points must form a W_J-orbit")
        jetalg = JetAlgebra(PointIdeal(datum, pts, order=n))
        reps = _minimal_affine_reps(datum, J, window)
        return WeightModule("degenerate", datum, params, J, jetalg, reps, window)
    if side == "aha":
        pts = [p.values if isinstance(p, aw.TorusPoint) else tuple(p) for p in points]
        _check_regular_torus(datum, pts)
        for j in J:
            for p in pts:
                if _torus_act_point(datum, datum.w_simple[j], p) not in pts:
                    raise ScopeError("points must form a W_J-orbit")
        jetalg = TorusJetAlgebra(datum, pts, order=n)
        reps = _minimal_finite_reps(datum, J)
        return WeightModule("aha", datum, params, J, jetalg, reps, None)
    raise ScopeError("side must be 'degenerate' or 'aha'")


# -- characters -----------------------------------------------------------------

def character(module: WeightModule) -> Character:
    """Weight multiplicities read off the triangular filtration by length."""
    mults: Dict[tuple, int] = {}
    for b in range(module.dimension):
        w = module.weight_of(b)
        mults[w] = mults.get(w, 0) + 1
    return Character(mults, module.window)


def stable_character(builder, window: int, predicate) -> Character:
    """Character restricted to predicate, certified stable at window + 1."""
    ch1 = character(builder(window)).restrict(predicate)
    ch2 = character(builder(window + 1)).restrict(predicate)
    if ch1 != ch2:
        raise InternalCheckError("character not window-stable; enlarge the window")
    return ch1


def triangularity_check(module: WeightModule, j: int) -> bool:
    """The j-th coordinate generator is triangular with weight diagonal.

    Group part strictly decreases in length below the diagonal block; within
    a block the jet degree only increases and the diagonal entry is the j-th
    coordinate of the basis weight.
    """
    if module.side == "degenerate":
        mat = module.xi_matrix(j)
    else:
        ej = tuple(1 if i == j else 0 for i in range(module.datum.rank))
        mat = module.y_matrix(ej)
    lengths = {}
    for b, (gkey, pt, m) in enumerate(module.basis):
        if module.side == "degenerate":
            g = aw.AffineWeylElement(tuple(Q(c) for c in gkey[0]), gkey[1])
            lengths[b] = aw.length(module.datum, g)
        else:
            lengths[b] = module.datum.w_length(gkey)
    for col in range(module.dimension):
        gc, ptc, mc = module.basis[col]
        for row in range(module.dimension):
            entry = mat[row][col]
            if not entry:
                continue
            gr, ptr, mr = module.basis[row]
            if gr == gc:
                if ptr != ptc or sum(mr) < sum(mc):
                    return False
                if mr == mc and entry != module.weight_of(col)[j]:
                    return False
            elif lengths[row] >= lengths[col]:
                return False
    return True


# -- intertwiners ------------------------------------------------------------------

def intertwiner_matrix(datum: RootDatum, params, w_elem, point, window: int = None,
                       n: int = 1, side: str = "degenerate"):
    """Matrix of Phi_w from the module at w(point) to the module at point.

    The cyclic vector at w(point) maps to phi_w times the cyclic vector at
    point; the map preserves generalized weights, so the result carries
    per-weight square blocks with their exact determinants.
    """
    if side == "degenerate":
        mu = tuple(Q(c) for c in point)
        wmu = tuple(aw.act_weight(datum, w_elem, mu))
        source = standard_module(datum, params, wmu, window, n, "degenerate")
        target = standard_module(datum, params, mu, window, n, "degenerate")
        phi = intertwiner_element(datum, params, w_elem, "degenerate")
        mat = [[Q(0)] * source.dimension for _ in range(target.dimension)]
        leaked = False
        for col in range(source.dimension):
            gkey, pt, mono = source.basis[col]
            v = aw.AffineWeylElement(tuple(Q(c) for c in gkey[0]), gkey[1])
            lift = _lift_xi_jet(datum, pt,
                                LocalJet(source.jetalg.rank, source.jetalg.order,
                                         {mono: Q(1)}))
            elem = daha_mul(daha_mul(
                DahaElement.from_group(datum, params, v),
                DahaElement.from_poly(datum, params, lift)), phi)
            for (tr, w), p in elem.terms.items():
                key = (tr, w)
                if key not in target._group_index:
                    leaked = True
                    continue
                f = target.jetalg.reduce(p)
                for qt in target.jetalg.points:
                    for m, c in f[qt].terms.items():
                        if c:
                            mat[target.index[(key, qt, m)]][col] = \
                                mat[target.index[(key, qt, m)]][col] + c
    elif side == "aha":
        ell = point if isinstance(point, aw.TorusPoint) else aw.TorusPoint(datum, point)
        well = ell.act_w(w_elem)
        source = standard_module(datum, params, well, None, n, "aha")
        target = standard_module(datum, params, ell, None, n, "aha")
        phi = intertwiner_element(datum, params, w_elem, "aha")
        mat = [[Q(0)] * source.dimension for _ in range(target.dimension)]
        leaked = False
        for col in range(source.dimension):
            wkey, pt, mono = source.basis[col]
            lift = _lift_y_jet(datum, pt,
                               LocalJet(source.jetalg.rank, source.jetalg.order,
                                        {mono: Q(1)}))
            elem = aha_mul(aha_mul(
                AhaElement.from_t(datum, params, wkey),
                AhaElement.from_y(datum, params, lift)), phi)
            for w, p in elem.terms.items():
                f = target.jetalg.reduce(p)
                for qt in target.jetalg.points:
                    for m, c in f[qt].terms.items():
                        if c:
                            mat[target.index[(w, qt, m)]][col] = \
                                mat[target.index[(w, qt, m)]][col] + c
    else:
        raise ScopeError("side must be 'degenerate' or 'aha'")

    # Per-weight blocks in the true generalized eigenspaces of the commuting
    # coordinate action (the basis grading is only a filtration, so the exact
    # weight vectors mix basis vectors).  Only interior blocks are trusted:
    # near the window edge the truncated eigenspaces are unreliable, and the
    # image of a long source vector may have left the target window.
    if side == "degenerate":
        lw = aw.length(datum, w_elem)

        def basis_length(mod, b):
            gkey = mod.basis[b][0]
            g = aw.AffineWeylElement(tuple(Q(c) for c in gkey[0]), gkey[1])
            return aw.length(datum, g)
        cutoff = (window if window is not None else 0) - lw - 1
    else:
        def basis_length(mod, b):
            return datum.w_length(mod.basis[b][0])
        cutoff = None  # finite group part: nothing can leak

    src_spaces = _generalized_weight_spaces(source)
    tgt_spaces = _generalized_weight_spaces(target)
    blocks = {}
    skipped = []
    for wt, src_vecs in sorted(src_spaces.items(), key=lambda kv: repr(kv[0])):
        cols_b = [b for b in range(source.dimension) if source.weight_of(b) == wt]
        interior = (cutoff is None or
                    all(basis_length(source, c) <= cutoff for c in cols_b))
        tgt_vecs = tgt_spaces.get(wt)
        if not interior or tgt_vecs is None or len(tgt_vecs) != len(src_vecs):
            skipped.append(wt)
            continue
        images = [linalg.mat_vec(mat, v) for v in src_vecs]
        tcols = linalg.transpose(tgt_vecs)
        try:
            block = linalg.transpose([linalg.solve(tcols, img) for img in images])
        except ValueError:
            skipped.append(wt)
            continue
        blocks[wt] = {"det": linalg.det(block), "size": len(src_vecs)}
    if not blocks:
        raise InternalCheckError("window too small: no interior weight blocks")
    return {
        "matrix": mat,
        "source": source,
        "target": target,
        "blocks": blocks,
        "skipped": skipped,
        "singular": any(not b["det"] for b in blocks.values()),
        "leaked": leaked,
    }


def _generalized_weight_spaces(module: WeightModule) -> Dict[tuple, list]:
    """Exact joint generalized eigenspaces of the coordinate action.

    Returns weight -> basis of column vectors; the nilpotency exponent is
    bounded by the multiplicity of the weight in the filtration grading.
    """
    datum = module.datum
    if module.side == "degenerate":
        mats = [module.xi_matrix(j) for j in range(datum.rank)]
    else:
        mats = []
        for j in range(datum.rank):
            ej = tuple(1 if i == j else 0 for i in range(datum.rank))
            mats.append(module.y_matrix(ej))
    counts: Dict[tuple, int] = {}
    for b in range(module.dimension):
        wt = module.weight_of(b)
        counts[wt] = counts.get(wt, 0) + 1
    n = module.dimension
    spaces: Dict[tuple, list] = {}
    for wt, mult in counts.items():
        stacked = []
        for j, a in enumerate(mats):
            shifted = linalg.mat_sub(a, linalg.mat_scale(linalg.identity(n), wt[j]))
            power = linalg.identity(n)
            for _ in range(mult):
                power = linalg.mat_mul(power, shifted)
            stacked.extend(power)
        spaces[wt] = linalg.nullspace(stacked)
    return spaces


def invertibility(datum: RootDatum, params, word, point, side: str = "degenerate"):
    """Letter-by-letter invertibility test of phi_w along a reduced word.

    For the letter i after prefix v the criterion is that xi evaluated on
    the coroot v^{-1}(alpha_i-vee) at the point avoids +-h (degenerate) or
    that y on that coroot avoids zeta and its inverse (AHA).  Returns the
    first failing letter position as the witness.
    """
    word = tuple(word)
    if side == "degenerate":
        mu = tuple(Q(c) for c in point)
        v = aw.identity(datum)
        values = []
        for pos, i in enumerate(word):
            if i == aw.HEART:
                base = (tuple(Q(c) for c in datum.theta_vee), Q(1))
            else:
                base = (tuple(Q(c) for c in datum.coroot_of(datum.simple_roots[i])), Q(0))
            bh = aw.act_affine_coroot(datum, aw.inverse(datum, v), base)
            val = aw.affine_coroot_eval(datum, bh, mu)
            values.append(val)
            if val == params.h or val == -params.h:
                return {"invertible": False, "witness": pos, "values": values}
            v = aw.compose(datum, v, aw.simple_reflection(datum, i))
        return {"invertible": True, "witness": None, "values": values}
    if side == "aha":
        ell = point if isinstance(point, aw.TorusPoint) else aw.TorusPoint(datum, point)
        zeta = params.zeta
        zinv = zeta ** -1 if hasattr(zeta, "inverse") else 1 / zeta
        v = datum.w_identity
        values = []
        for pos, i in enumerate(word):
            av = tuple(Q(c) for c in datum.coroot_of(datum.simple_roots[i]))
            vin = datum.w_inv[v]
            moved = datum.w_act_coweight(vin, av)
            val = ell.y_value(coweight_coords(datum, moved))
            values.append(val)
            if val == zeta or val == zinv:
                return {"invertible": False, "witness": pos, "values": values}
            v = datum.w_mul[v][datum.w_simple[i]]
        return {"invertible": True, "witness": None, "values": values}
    raise ScopeError("side must be 'degenerate' or 'aha'")


# -- induction ---------------------------------------------------------------------

def degenerate_fiber(datum: RootDatum, params, lam):
    """The finite-algebra standard module at lam: basis {w}, exact matrices.

    Returns generator matrices for the finite s_i and the xi_j along with the
    generalized weights {w lam}.
    """
    lam = tuple(Q(c) for c in lam)
    order = datum.w_order
    index = {w: w for w in range(order)}

    def apply_elem(elem: DahaElement, w: int):
        full = daha_mul(elem, DahaElement.from_group(
            datum, params, aw.AffineWeylElement((Q(0),) * datum.rank, w)))
        col = {}
        for (tr, u), p in full.terms.items():
            if any(tr):
                raise InternalCheckError("finite fiber action produced a translation")
            col[u] = col.get(u, Q(0)) + p.evaluate(lam)
        return col

    def matrix(elem):
        mat = [[Q(0)] * order for _ in range(order)]
        for w in range(order):
            for u, c in apply_elem(elem, w).items():
                mat[u][w] = c
        return mat

    s_mats = {i: matrix(DahaElement.from_group(datum, params,
                                               aw.simple_reflection(datum, i)))
              for i in range(datum.rank)}
    xi_mats = [matrix(DahaElement.from_poly(datum, params, xi_variable(datum, j)))
               for j in range(datum.rank)]
    weights = [tuple(datum.w_act_weight(w, lam)) for w in range(order)]
    return {"dim": order, "s": s_mats, "xi": xi_mats, "weights": weights}


def induce(datum: RootDatum, params, fiber: dict, window: int):
    """I(M) = kW-hat tensored over kW with M: basis {x_beta (x) m}.

    fiber carries matrices for the finite s_i and the xi_j plus the fiber's
    generalized weights; the induced character is the multiset of fiber
    weights shifted by each translation in the window.
    """
    d = fiber["dim"]
    betas = sorted({tuple(int(c) for c in g.trans)
                    for g in aw.ball(datum, window) if g.w == datum.w_identity},
                   key=lambda b: (sum(abs(c) for c in b), b))
    index = {(b, m): i for i, (b, m) in
             enumerate((b, m) for b in betas for m in range(d))}

    def fiber_matrix_of(w: int, p: XiPolynomial):
        mat = linalg.identity(d)
        for i in datum.w_words[w]:
            mat = linalg.mat_mul(mat, fiber["s"][i])
        pm = [[Q(0)] * d for _ in range(d)]
        for mono, coeff in p.terms.items():
            term = linalg.identity(d)
            for j, e in enumerate(mono):
                for _ in range(e):
                    term = linalg.mat_mul(term, fiber["xi"][j])
            pm = linalg.mat_add(pm, linalg.mat_scale(term, coeff))
        return linalg.mat_mul(mat, pm)

    def matrix_of(elem: DahaElement):
        n = len(index)
        mat = [[Q(0)] * n for _ in range(n)]
        leaked = False
        from .rings import x_monomial
        for b in betas:
            pushed = daha_mul(elem, DahaElement.from_x(
                datum, params, x_monomial(datum, b)))
            for (tr, w), p in pushed.terms.items():
                if tr not in set(betas):
                    leaked = True
                    continue
                fm = fiber_matrix_of(w, p)
                for m in range(d):
                    col = index[(b, m)]
                    for r in range(d):
                        if fm[r][m]:
                            mat[index[(tr, r)]][col] = \
                                mat[index[(tr, r)]][col] + fm[r][m]
        return mat, leaked

    mults: Dict[tuple, int] = {}
    for b in betas:
        for nu in fiber["weights"]:
            wt = tuple(Q(x) + Q(y) for x, y in zip(nu, b))
            mults[wt] = mults.get(wt, 0) + 1
    return {
        "dimension": len(index),
        "betas": betas,
        "matrix_of": matrix_of,
        "character": Character(mults, window),
    }


# -- endomorphism algebras -----------------------------------------------------------

def _direct_sum(mats: List[List[List[object]]]):
    n = sum(len(m) for m in mats)
    out = [[Q(0)] * n for _ in range(n)]
    off = 0
    for m in mats:
        for r in range(len(m)):
            for c in range(len(m)):
                out[off + r][off + c] = m[r][c]
        off += len(m)
    return out


def _assert_exact(mat):
    for row in mat:
        for x in row:
            if not isinstance(x, (int, Q, Cyclotomic)):
                raise ScopeError("endomorphism algebras require exact module matrices")


def endomorphism_algebra(modules: List[WeightModule]):
    """Exact commutant of the joint action on a direct sum of modules.

    Returns the commutant dimension and the Wedderburn simple count of the
    endomorphism algebra (trace-form radical plus center of the quotient).
    """
    side = modules[0].side
    datum = modules[0].datum
    gens = []
    if side == "aha":
        for i in range(datum.rank):
            gens.append(_direct_sum([m.t_matrix(i) for m in modules]))
        for j in range(datum.rank):
            ej = tuple(1 if k == j else 0 for k in range(datum.rank))
            gens.append(_direct_sum([m.y_matrix(ej) for m in modules]))
            mej = tuple(-c for c in ej)
            gens.append(_direct_sum([m.y_matrix(mej) for m in modules]))
    else:
        for i in list(range(datum.rank)) + [aw.HEART]:
            gens.append(_direct_sum([m.s_matrix(i)[0] for m in modules]))
        for j in range(datum.rank):
            gens.append(_direct_sum([m.xi_matrix(j) for m in modules]))
    for g in gens:
        _assert_exact(g)
    comm = linalg.commutant_basis(gens)
    wed = linalg.wedderburn_simple_count(comm) if comm else {
        "algebra_dim": 0, "radical_dim": 0, "center_dim": 0, "simple_count": 0}
    return {"dimension": len(comm), "basis": comm, **wed}


# -- composition series at the rho/n family -------------------------------------------

def composition_check(datum: RootDatum, lam0, h0: Q, window: int,
                      weight_bound: Q, ws=None):
    """ch P(w lam0) equals the sum of the simple characters, windowed.

    The standard character is the full orbit with multiplicity one (regular
    scope); the simple characters come from the affine domain census.  Both
    sides are compared on weights mu with |(mu : theta-vee)| <= weight_bound.
    """
    from .arrangements import domain_census, simple_character
    lam0 = tuple(Q(c) for c in lam0)
    census = domain_census(datum, lam0, h0)
    tv = tuple(Q(c) for c in datum.theta_vee)

    def in_window(wt):
        return abs(datum.pairing(wt, tv)) <= weight_bound

    orb = aw.orbit(datum, lam0, window)
    std = Character({wt: 1 for wt in orb if in_window(wt)}, window)
    total: Dict[tuple, int] = {}
    labels = sorted({d["label"] if d["label"] is not None else d["id"]
                     for d in census["domains"]}, key=repr)
    for lb in labels:
        for wt in simple_character(datum, lam0, h0, lb, window, census):
            if in_window(tuple(wt)):
                total[tuple(wt)] = total.get(tuple(wt), 0) + 1
    simple_sum = Character(total, window)
    if ws is None:
        ws = [aw.identity(datum)]
    results = []
    for w in ws:
        wl = tuple(aw.act_weight(datum, w, lam0))
        orb_w = aw.orbit(datum, wl, window)
        std_w = Character({wt: 1 for wt in orb_w if in_window(wt)}, window)
        results.append({"w": w.key(), "equal": std_w == simple_sum})
    return {
        "standard": std,
        "simple_sum": simple_sum,
        "per_w": results,
        "all_equal": all(r["equal"] for r in results),
    }


# -- explicit rank-one simple fixture ---------------------------------------------------

def simple_fixture_a1(datum: RootDatum, params):
    """The one-dimensional bounded simple in rank one: xi acts by 1/4, s by 1."""
    if datum.rank != 1:
        raise ScopeError("fixture is rank-one only")
    return {
        "dim": 1,
        "s": {0: [[Q(1)]]},
        "s_extra": [[Q(1)]],
        "xi": [[[Q(1, 4)]]],
        "weights": [(Q(1, 4),)],
    }
