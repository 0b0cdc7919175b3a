"""Exact linear algebra over generic exact fields (Fraction, cyclotomic).

Matrices are lists of lists of field elements.  Scalars only need the
arithmetic operators (+, -, *, /), equality, and truthiness for a zero
test, so Fraction and Cyclotomic entries can be mixed freely within a
matrix as long as they promote under arithmetic.
"""

from fractions import Fraction as Q
from typing import List, Sequence, Tuple

Matrix = List[List[object]]


def zeros(rows: int, cols: int) -> Matrix:
    """Matrix of rational zeros."""
    return [[Q(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    """Rational identity matrix."""
    mat = zeros(n, n)
    for i in range(n):
        mat[i][i] = Q(1)
    return mat


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]

def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Matrix, c) -> Matrix:
    return [[x * c for x in row] for row in a]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    rows, inner, cols = len(a), len(b), len(b[0])
    out = zeros(rows, cols)
    for i in range(rows):
        ai = a[i]
        for k in range(inner):
            c = ai[k]
            if not c:
                continue
            bk = b[k]
            oi = out[i]
            for j in range(cols):
                if bk[j]:
                    oi[j] = oi[j] + c * bk[j]
    return out


def mat_vec(a: Matrix, v: Sequence) -> list:
    return [sum((c * x for c, x in zip(row, v) if c), Q(0)) for row in a]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def trace(a: Matrix):
    return sum((a[i][i] for i in range(len(a))), Q(0))


def rref(mat: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form; returns (rref matrix, pivot column list)."""
    a = [list(row) for row in mat]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if a[i][c]), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = a[r][c]
        a[r] = [x / inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(mat: Matrix) -> int:
    return len(rref(mat)[1])


def nullspace(mat: Matrix) -> List[list]:
    """Basis of the right kernel, one vector per free column."""
    if not mat:
        return []
    red, pivots = rref(mat)
    cols = len(mat[0])
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        vec = [Q(0)] * cols
        vec[free] = Q(1)
        for row, pc in zip(red, pivots):
            vec[pc] = -row[free]
        basis.append(vec)
    return basis


def solve(a: Matrix, b: Sequence) -> list:
    """Solve a x = b exactly; raises ValueError if inconsistent."""
    rows = len(a)
    cols = len(a[0])
    aug = [list(a[i]) + [b[i]] for i in range(rows)]
    red, pivots = rref(aug)
    if cols in pivots:
        raise ValueError("inconsistent linear system")
    x = [Q(0)] * cols
    for row, pc in zip(red, pivots):
        x[pc] = row[cols]
    return x


def inverse(a: Matrix) -> Matrix:
    """Exact matrix inverse; raises ValueError on singular input."""
    n = len(a)
    aug = [list(a[i]) + identity(n)[i] for i in range(n)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("singular matrix")
    return [row[n:] for row in red]


def det(mat: Matrix):
    """Exact determinant by fraction-free forward elimination."""
    a = [list(row) for row in mat]
    n = len(a)
    sign = 1
    result = Q(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if a[i][c]), None)
        if pivot is None:
            return Q(0)
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            sign = -sign
        result = result * a[c][c]
        inv = a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return result * sign


def row_space_basis(vectors: List[list]) -> List[list]:
    """Independent spanning subset, echelonized."""
    if not vectors:
        return []
    red, pivots = rref(vectors)
    return [red[i] for i in range(len(pivots))]


def in_span(basis: List[list], vec: Sequence) -> bool:
    """Whether vec lies in the row span of basis."""
    if not basis:
        return not any(vec)
    return rank(list(basis) + [list(vec)]) == rank(list(basis))


def _flatten(mat: Matrix) -> list:
    return [x for row in mat for x in row]


def algebra_closure(generators: List[Matrix], include_identity: bool = True) -> List[Matrix]:
    """Basis of the unital associative algebra generated by square matrices.

    Grows the span by multiplying basis elements against the generators
    until stable; the returned matrices are linearly independent.
    """
    n = len(generators[0])
    seeds = list(generators)
    if include_identity:
        seeds = [identity(n)] + seeds
    basis: List[Matrix] = []
    span_rows: List[list] = []
    queue = list(seeds)
    while queue:
        cand = queue.pop()
        flat = _flatten(cand)
        if in_span(span_rows, flat):
            continue
        basis.append(cand)
        span_rows = row_space_basis(span_rows + [flat])
        for g in generators:
            queue.append(mat_mul(cand, g))
            queue.append(mat_mul(g, cand))
    return basis


def commutant_basis(generators: List[Matrix]) -> List[Matrix]:
    """Basis of {X : XA = AX for every generator A}."""
    n = len(generators[0])
    rows = []
    for a in generators:
        for i in range(n):
            for j in range(n):
                row = [Q(0)] * (n * n)
                for k in range(n):
                    row[i * n + k] = row[i * n + k] + a[k][j]
                    row[k * n + j] = row[k * n + j] - a[i][k]
                rows.append(row)
    vecs = nullspace(rows) if rows else [
        [Q(1) if t == s else Q(0) for t in range(n * n)] for s in range(n * n)]
    return [[v[i * n:(i + 1) * n] for i in range(n)] for v in vecs]


def commutant_dimension(generators: List[Matrix]) -> int:
    """Dimension of {X : XA = AX for every generator A}."""
    return len(commutant_basis(generators))


def trace_form_radical(basis: List[Matrix]) -> List[list]:
    """Kernel of the trace form tr(ab) on an algebra basis.

    For an algebra of matrices in characteristic zero this kernel is the
    Jacobson radical (Dickson's criterion), returned as coefficient
    vectors relative to the given basis.
    """
    m = len(basis)
    gram = [[trace(mat_mul(basis[i], basis[j])) for j in range(m)] for i in range(m)]
    return nullspace(gram)


def wedderburn_simple_count(generators: List[Matrix]) -> dict:
    """Count simple summands of the semisimple quotient of a matrix algebra.

    Builds the unital algebra A spanned by the generators, removes the
    trace-form radical, and returns the dimension of the center of the
    quotient A/rad.  Over a splitting field that dimension equals the
    number of simple blocks.
    """
    basis = algebra_closure(generators)
    m = len(basis)
    rad = trace_form_radical(basis)
    rad_rows = row_space_basis(rad)
    # Coordinates of products b_i b_j in the algebra basis, for the
    # structure constants of the quotient.
    flat_rows = [_flatten(b) for b in basis]
    coords_cache = {}

    def coords(mat: Matrix) -> list:
        key = tuple(_flatten(mat))
        if key not in coords_cache:
            coords_cache[key] = solve(transpose(flat_rows), _flatten(mat))
        return coords_cache[key]

    # Center of A modulo rad: x with x b_j - b_j x in rad for all j.
    rows = []
    for j in range(m):
        bj = basis[j]
        comm_cols = []
        for i in range(m):
            comm = mat_sub(mat_mul(basis[i], bj), mat_mul(bj, basis[i]))
            comm_cols.append(coords(comm))
        # Row-reduce each commutator vector modulo the radical span.
        for row_idx in range(m):
            row = [comm_cols[i][row_idx] for i in range(m)]
            rows.append((j, row_idx, row))
    # Express "in radical" as linear conditions: kernel coordinates of the
    # quotient map. Complete rad_rows to conditions via nullspace of its span.
    if rad_rows:
        conditions = nullspace(rad_rows)
    else:
        conditions = [[Q(1) if i == j else Q(0) for i in range(m)] for j in range(m)]
    # conditions are functionals vanishing on rad (as vectors via dot product
    # with the coefficient vector).
    lin_rows = []
    by_j = {}
    for j, row_idx, row in rows:
        by_j.setdefault(j, []).append(row)
    for j in range(m):
        cols = by_j[j]  # cols[row_idx][i]
        for cond in conditions:
            lin_rows.append([sum((cond[r] * cols[r][i] for r in range(m)), Q(0))
                             for i in range(m)])
    center_mod_rad = nullspace(lin_rows) if lin_rows else []
    # The kernel includes rad itself; the center of A/rad is the quotient.
    rad_dim = len(rad_rows)
    center_dim = len(center_mod_rad) - rad_dim
    return {
        "algebra_dim": m,
        "radical_dim": rad_dim,
        "center_dim": center_dim,
        "simple_count": center_dim,
    }
