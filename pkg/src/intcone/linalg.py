"""Exact linear algebra over the integers and rationals.

Everything in here works on small dense matrices represented as tuples (or
lists) of rows of Python ints.  No floats anywhere: determinants and
adjugates are computed fraction-free (Bareiss), semidefiniteness through a
rational Schur-complement recursion, kernels and unimodular completions over
exact rationals.  Matrices stay well under 11x11 in this package, so the
implementations favour clarity over asymptotics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

Rows = tuple[tuple[int, ...], ...]


def freeze(rows) -> Rows:
    """Copy a row-iterable into an immutable tuple-of-tuples of ints."""
    out = tuple(tuple(int(v) for v in row) for row in rows)
    if any(len(row) != len(out) for row in out):
        raise ValueError("matrix must be square")
    return out


def is_symmetric(rows) -> bool:
    n = len(rows)
    return all(rows[i][j] == rows[j][i] for i in range(n) for j in range(i))


def identity(n: int) -> Rows:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(rows) -> Rows:
    return tuple(zip(*[tuple(r) for r in rows])) if rows else ()


def mat_mul(a, b) -> Rows:
    bt = list(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_vec(a, v) -> tuple[int, ...]:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def mat_sub(a, b) -> Rows:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def outer(x) -> Rows:
    return tuple(tuple(a * b for b in x) for a in x)


def vec_gcd(v) -> int:
    g = 0
    for a in v:
        g = gcd(g, a)
    return g


def det(rows) -> int:
    """Determinant by fraction-free Bareiss elimination.

    The empty 0x0 matrix has determinant 1 (empty product).
    """
    n = len(rows)
    if n == 0:
        return 1
    a = [list(map(int, r)) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            row_i = a[i]
            row_k = a[k]
            lead = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - lead * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def _minor(rows, i, j):
    return [
        [rows[r][c] for c in range(len(rows)) if c != j]
        for r in range(len(rows))
        if r != i
    ]


def adjugate_general(rows) -> Rows:
    """Adjugate via cofactors; defined for singular input too."""
    n = len(rows)
    if n == 0:
        return ()
    if n == 1:
        return ((1,),)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            c = det(_minor(rows, i, j))
            adj[j][i] = -c if (i + j) % 2 else c
    return freeze(adj)


def adjugate(rows) -> Rows:
    """Adjugate of a symmetric matrix (the result is symmetric as well)."""
    if not is_symmetric(rows):
        raise ValueError("adjugate expects a symmetric matrix")
    return adjugate_general(rows)


def is_psd_exact(rows) -> bool:
    """Exact positive-semidefiniteness over the rationals.

    Recursive Schur elimination: a negative diagonal entry refutes, a zero
    diagonal entry with a nonzero row refutes, otherwise pivot on the first
    positive diagonal entry and recurse on the rational Schur complement.
    The zero (or empty) matrix is PSD.
    """
    if not is_symmetric(rows):
        raise ValueError("is_psd_exact expects a symmetric matrix")
    a = [[Fraction(v) for v in row] for row in rows]
    idx = list(range(len(a)))
    while idx:
        pivot_i = None
        for i in idx:
            d = a[i][i]
            if d < 0:
                return False
            if d == 0:
                if any(a[i][j] != 0 for j in idx):
                    return False
            elif pivot_i is None:
                pivot_i = i
        if pivot_i is None:
            return True  # all remaining rows are zero
        p = a[pivot_i][pivot_i]
        idx.remove(pivot_i)
        col = {j: a[j][pivot_i] for j in idx}
        for i in idx:
            ci = col[i]
            if ci == 0:
                continue
            row_i = a[i]
            row_p = a[pivot_i]
            for j in idx:
                row_i[j] -= ci * row_p[j] / p
    return True


def rank(rows) -> int:
    """Rank over the rationals by Gaussian elimination."""
    a = [[Fraction(v) for v in row] for row in rows]
    n = len(a)
    m = len(a[0]) if a else 0
    r = 0
    col = 0
    while r < n and col < m:
        piv = next((i for i in range(r, n) if a[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][col]
        for i in range(r + 1, n):
            f = a[i][col] / pv
            if f:
                for j in range(col, m):
                    a[i][j] -= f * a[r][j]
        r += 1
        col += 1
    return r


def primitive_kernel_vector(rows):
    """A primitive integer kernel vector of a rank-deficient matrix.

    Deterministic: reduced row echelon over Q, take the first free column,
    back-substitute, clear denominators, divide by the gcd, and flip so the
    first nonzero entry is positive.  Returns None for full column rank.
    """
    a = [[Fraction(v) for v in row] for row in rows]
    n = len(a)
    m = len(a[0]) if a else 0
    pivots = {}  # column -> row
    r = 0
    for col in range(m):
        piv = next((i for i in range(r, n) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][col]
        a[r] = [x / pv for x in a[r]]
        for i in range(n):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots[col] = r
        r += 1
        if r == n:
            break
    free = next((c for c in range(m) if c not in pivots), None)
    if free is None:
        return None
    z = [Fraction(0)] * m
    z[free] = Fraction(1)
    for col, row in pivots.items():
        z[col] = -a[row][free]
    den = 1
    for x in z:
        den = den * x.denominator // gcd(den, x.denominator)
    w = [int(x * den) for x in z]
    g = vec_gcd(w)
    w = [x // g for x in w]
    first = next(x for x in w if x != 0)
    if first < 0:
        w = [-x for x in w]
    return tuple(w)


def _xgcd(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def extend_to_unimodular(z) -> Rows:
    """A unimodular matrix whose first column is the primitive vector z.

    Built from a deterministic gcd ladder: 2x2 elementary steps fold each
    coordinate into the running gcd, and the inverse steps accumulate into
    the returned matrix.  extend_to_unimodular(e1) is the identity.
    """
    z = tuple(int(v) for v in z)
    n = len(z)
    if n == 0 or all(v == 0 for v in z):
        raise ValueError("z must be nonzero")
    if abs(vec_gcd(z)) != 1:
        raise ValueError("z must be primitive")
    u = [list(row) for row in identity(n)]
    g = z[0]
    for i in range(1, n):
        zi = z[i]
        if zi == 0 and g != 0:
            continue
        g2, a, b = _xgcd(g, zi)
        if g2 == 0:
            continue  # both still zero, nothing to fold yet
        if g2 < 0:
            g2, a, b = -g2, -a, -b
        # inverse of the row op [[a, b], [-zi/g2, g/g2]] on coords (0, i)
        p, q = g // g2, zi // g2
        for r in range(n):
            c0, ci = u[r][0], u[r][i]
            u[r][0] = c0 * p + ci * q
            u[r][i] = -c0 * b + ci * a
        g = g2
    if g < 0:
        for r in range(n):
            u[r][0] = -u[r][0]
    out = freeze(u)
    assert tuple(row[0] for row in out) == z
    return out


def inverse_unimodular(u) -> Rows:
    """Exact integer inverse of a matrix with determinant +-1."""
    d = det(u)
    if d not in (1, -1):
        raise ValueError("matrix is not unimodular")
    adj = adjugate_general(u)
    return tuple(tuple(d * v for v in row) for row in adj)


def reduce_rank(rows):
    """Split off the kernel of a singular PSD matrix.

    Returns (U, block) with U unimodular and U^T X U = diag(0, ..., 0, block)
    where the zero block collects the kernel (top-left) and block is full
    rank.  Full-rank input returns (identity, X) unchanged; the all-zero
    matrix returns (identity, ()) with an empty block.
    """
    x = freeze(rows)
    if not is_psd_exact(x):
        raise ValueError("reduce_rank expects a PSD matrix")
    n = len(x)
    r = rank(x)
    if r == n:
        return identity(n), x
    u_total = identity(n)
    cur = x
    zeros = 0
    while True:
        m = len(cur)
        if m == 0 or rank(cur) == m:
            break
        z = primitive_kernel_vector(cur)
        u1 = extend_to_unimodular(z)
        b = mat_mul(transpose(u1), mat_mul(cur, u1))
        assert all(b[0][j] == 0 for j in range(m)) and all(
            b[i][0] == 0 for i in range(m)
        )
        lift = [[0] * n for _ in range(n)]
        for i in range(zeros):
            lift[i][i] = 1
        for i in range(m):
            for j in range(m):
                lift[zeros + i][zeros + j] = u1[i][j]
        u_total = mat_mul(u_total, lift)
        cur = tuple(row[1:] for row in b[1:])
        zeros += 1
    block = cur
    full = mat_mul(transpose(u_total), mat_mul(x, u_total))
    for i in range(zeros):
        assert all(full[i][j] == 0 for j in range(n))
    return u_total, block


@dataclass(frozen=True)
class SymIntMatrix:
    """Immutable symmetric integer matrix with validation at construction."""

    rows: Rows

    def __post_init__(self):
        object.__setattr__(self, "rows", freeze(self.rows))
        if not is_symmetric(self.rows):
            raise ValueError("matrix must be symmetric")

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(self.n))

    def det(self) -> int:
        return det(self.rows)

    def adjugate(self) -> "SymIntMatrix":
        return SymIntMatrix(adjugate(self.rows))

    def is_psd(self) -> bool:
        return is_psd_exact(self.rows)

    def rank(self) -> int:
        return rank(self.rows)

    def to_json(self) -> dict:
        return {"n": self.n, "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, obj) -> "SymIntMatrix":
        rows = freeze(obj["rows"])
        if obj.get("n") != len(rows):
            raise ValueError("n does not match row count")
        return cls(rows)


@dataclass(frozen=True)
class UnimodularMatrix:
    """Integer matrix with determinant +-1."""

    rows: Rows

    def __post_init__(self):
        object.__setattr__(self, "rows", freeze(self.rows))
        if det(self.rows) not in (1, -1):
            raise ValueError("matrix must have determinant +-1")

    @property
    def n(self) -> int:
        return len(self.rows)

    def inverse(self) -> "UnimodularMatrix":
        return UnimodularMatrix(inverse_unimodular(self.rows))

    def to_json(self) -> dict:
        return {"n": self.n, "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, obj) -> "UnimodularMatrix":
        rows = freeze(obj["rows"])
        if obj.get("n") != len(rows):
            raise ValueError("n does not match row count")
        return cls(rows)
