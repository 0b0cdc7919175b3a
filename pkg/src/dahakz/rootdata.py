"""Irreducible root data: pairings, finite Weyl group, derived constants.

Conventions: roots are stored in the simple-root basis (integer vectors),
coroots in the simple-coroot basis.  Weights are stored by their coordinates
lambda_j = (lambda : omega_j-vee), i.e. also in the simple-root basis; this
makes the pairing with fundamental coweights a direct read.
"""
from __future__ import annotations

import json
from fractions import Fraction as Q
from typing import Dict, List, Tuple

Vector = Tuple[Q, ...]
IntVector = Tuple[int, ...]

__all__ = ["RootDatum", "type_a", "from_cartan_matrix", "load_cartan_file"]


class RootDatum:
    """An irreducible root datum with its finite Weyl group fully enumerated."""

    def __init__(self, cartan: Tuple[Tuple[int, ...], ...], label: str = "custom"):
        r = len(cartan)
        for row in cartan:
            if len(row) != r:
                raise ValueError("Cartan matrix must be square")
        self.label = label
        self.rank = r
        self.cartan = cartan  # cartan[i][j] = (alpha_j : alpha_i-vee)
        self._build_weyl_group()
        self._build_roots()
        self._ensure_irreducible()

    # -- pairing and basic linear maps ------------------------------------
    def pairing(self, lam: Vector, lam_vee: Vector) -> Q:
        """(lambda : lambda-vee) for lambda in root coords, lambda-vee in coroot coords."""
        if len(lam) != self.rank or len(lam_vee) != self.rank:
            raise ValueError("coordinate length mismatch")
        total = Q(0)
        for i in range(self.rank):
            if lam_vee[i]:
                row = self.cartan[i]
                total += lam_vee[i] * sum(row[j] * lam[j] for j in range(self.rank) if lam[j])
        return total

    def root_pairing(self, beta: IntVector, lam_vee: Vector) -> Q:
        return self.pairing(tuple(Q(b) for b in beta), lam_vee)

    def coroot_of(self, beta: IntVector) -> IntVector:
        """The coroot beta-vee of a root beta (simply-laced scope: same coordinates)."""
        if beta not in self._coroot_table:
            raise ValueError("not a root")
        return self._coroot_table[beta]

    # -- Weyl group --------------------------------------------------------
    def _simple_reflection_matrix(self, i: int) -> Tuple[IntVector, ...]:
        # columns are images of simple roots: s_i alpha_j = alpha_j - a_ij alpha_i
        r = self.rank
        cols = []
        for j in range(r):
            col = [0] * r
            col[j] = 1
            col[i] -= self.cartan[i][j]
            cols.append(tuple(col))
        return tuple(cols)

    def _build_weyl_group(self):
        r = self.rank
        ident = tuple(tuple(1 if i == j else 0 for i in range(r)) for j in range(r))
        gens = [self._simple_reflection_matrix(i) for i in range(r)]
        elems: List[Tuple[IntVector, ...]] = [ident]
        index: Dict[Tuple[IntVector, ...], int] = {ident: 0}
        words: List[Tuple[int, ...]] = [()]
        frontier = [0]
        while frontier:
            nxt = []
            for e in frontier:
                for i in range(r):
                    m = _mat_mul(gens[i], elems[e])
                    if m not in index:
                        index[m] = len(elems)
                        elems.append(m)
                        words.append((i,) + words[e])
                        nxt.append(index[m])
            frontier = nxt
        self.w_elements = elems  # matrix of w acting on root coordinates
        self.w_index = index
        self.w_words = words  # a reduced word s_{i1}...s_{ik} for each element
        self.w_order = len(elems)
        self.w_simple = [index[g] for g in gens]
        self.w_identity = 0
        # multiplication and inverse tables
        self.w_mul = [
            [index[_mat_mul(elems[a], elems[b])] for b in range(len(elems))]
            for a in range(len(elems))
        ]
        self.w_inv = [0] * len(elems)
        for a in range(len(elems)):
            for b in range(len(elems)):
                if self.w_mul[a][b] == 0:
                    self.w_inv[a] = b
                    break

    def w_length(self, w: int) -> int:
        return len(self.w_words[w])

    def w_act_root(self, w: int, beta: IntVector) -> IntVector:
        m = self.w_elements[w]
        r = self.rank
        out = [0] * r
        for j, c in enumerate(beta):
            if c:
                col = m[j]
                for i in range(r):
                    out[i] += c * col[i]
        return tuple(out)

    def w_act_weight(self, w: int, lam: Vector) -> Vector:
        """w(lambda) for lambda in root coordinates."""
        m = self.w_elements[w]
        r = self.rank
        out = [Q(0)] * r
        for j, c in enumerate(lam):
            if c:
                col = m[j]
                for i in range(r):
                    out[i] += c * col[i]
        return tuple(out)

    def w_act_coweight(self, w: int, lam_vee: Vector) -> Vector:
        """w(lambda-vee) for a coweight in coroot coordinates (simply-laced)."""
        return self.w_act_weight(w, lam_vee)

    def reflection_index(self, beta: IntVector) -> int:
        """The index in W of the reflection s_beta."""
        if beta not in self._reflection_table:
            raise ValueError("not a root")
        return self._reflection_table[beta]

    # -- roots -------------------------------------------------------------
    def _build_roots(self):
        r = self.rank
        simple = [tuple(1 if i == j else 0 for i in range(r)) for j in range(r)]
        roots = set()
        for i in range(r):
            for w in range(self.w_order):
                roots.add(self.w_act_root(w, simple[i]))
        self.roots = sorted(roots)
        self.positive_roots = sorted(b for b in roots if _is_positive(b))
        self.simple_roots = simple
        # simply-laced scope: coroot coordinates equal root coordinates
        self._coroot_table = {b: b for b in roots}
        self.positive_coroots = [self.coroot_of(b) for b in self.positive_roots]
        heights = {b: sum(b) for b in self.positive_roots}
        self.theta = max(self.positive_roots, key=lambda b: (heights[b], b))
        self.theta_vee = self.coroot_of(self.theta)
        self.rho = tuple(Q(sum(b[i] for b in self.positive_roots), 2) for i in range(r))
        self.coxeter_number = sum(self.theta) + 1
        # reflection table: s_beta as an element of W
        self._reflection_table = {}
        for beta in roots:
            bvee = tuple(Q(c) for c in self.coroot_of(beta))
            for w in range(self.w_order):
                ok = True
                for j in range(r):
                    img = self.w_act_root(w, simple[j])
                    expect = tuple(
                        simple[j][i] - self.cartan_pairing(simple[j], bvee) * beta[i]
                        for i in range(r)
                    )
                    if img != expect:
                        ok = False
                        break
                if ok:
                    self._reflection_table[beta] = w
                    break

    def cartan_pairing(self, beta: IntVector, lam_vee: Vector) -> Q:
        return self.pairing(tuple(Q(b) for b in beta), lam_vee)

    def _ensure_irreducible(self):
        if len({tuple(b) for b in self.roots}) != self.rank * self.coxeter_number:
            raise ValueError("root datum is not an implemented irreducible type")

    # -- named weights -----------------------------------------------------
    def fundamental_weight(self, j: int) -> Vector:
        """omega_j in root coordinates (column of the inverse Cartan matrix)."""
        return self._cartan_inverse_col(j, transpose=False)

    def fundamental_coweight(self, j: int) -> Vector:
        """omega_j-vee in coroot coordinates."""
        return self._cartan_inverse_col(j, transpose=True)

    def _cartan_inverse_col(self, j: int, transpose: bool) -> Vector:
        r = self.rank
        a = [
            [Q(self.cartan[i][k] if not transpose else self.cartan[k][i]) for k in range(r)]
            for i in range(r)
        ]
        rhs = [Q(1) if i == j else Q(0) for i in range(r)]
        return tuple(_solve_linear(a, rhs))

    def reflect_weight(self, lam: Vector, beta: IntVector) -> Vector:
        """s_beta(lambda) = lambda - (lambda:beta-vee) beta."""
        bvee = tuple(Q(c) for c in self.coroot_of(beta))
        c = self.pairing(lam, bvee)
        return tuple(lam[i] - c * beta[i] for i in range(self.rank))

    def coroot_level_set(self, j: int) -> List[IntVector]:
        """{beta-vee : (rho : beta-vee) = j} over all coroots."""
        out = []
        for beta in self.roots:
            bvee = tuple(Q(c) for c in self.coroot_of(beta))
            if self.pairing(self.rho, bvee) == j:
                out.append(self.coroot_of(beta))
        return sorted(out)

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "label": self.label,
            "rank": self.rank,
            "cartan": [list(row) for row in self.cartan],
            "positive_roots": [list(b) for b in self.positive_roots],
            "theta": list(self.theta),
            "rho": [str(c) for c in self.rho],
            "coxeter_number": self.coxeter_number,
            "weyl_order": self.w_order,
        }

    def __repr__(self):
        return f"RootDatum({self.label})"


def _mat_mul(a, b):
    """Column-convention product: (a*b) column j = a applied to b's column j."""
    r = len(a)
    cols = []
    for j in range(r):
        col = [0] * r
        for k in range(r):
            c = b[j][k]
            if c:
                for i in range(r):
                    col[i] += c * a[k][i]
        cols.append(tuple(col))
    return tuple(cols)


def _is_positive(beta) -> bool:
    return all(c >= 0 for c in beta) and any(beta)


def _solve_linear(a, rhs):
    n = len(a)
    m = [row[:] + [rhs[i]] for i, row in enumerate(a)]
    for col in range(n):
        piv = next(i for i in range(col, n) if m[i][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for i in range(n):
            if i != col and m[i][col]:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return [m[i][n] for i in range(n)]


def type_a(r: int) -> RootDatum:
    """Built-in A_r constructor (r <= 4 exercised in tests)."""
    if r < 1:
        raise ValueError("rank must be positive")
    cartan = tuple(
        tuple(2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(r))
        for i in range(r)
    )
    return RootDatum(cartan, label=f"A{r}")


def from_cartan_matrix(cartan, label: str = "custom") -> RootDatum:
    return RootDatum(tuple(tuple(int(x) for x in row) for row in cartan), label=label)


def load_cartan_file(path: str) -> RootDatum:
    """Load a root datum from a plain-text file of Cartan matrix rows."""
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                rows.append([int(x) for x in line.split()])
    return from_cartan_matrix(rows, label="file")


def datum_to_json_str(datum: RootDatum) -> str:
    return json.dumps(datum.to_json(), sort_keys=True)
