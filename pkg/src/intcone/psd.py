"""Integer rank-one decomposition in the cone of PSD integer matrices.

A PSD integer matrix is peeled into a sum of outer products x x^T plus, in
low dimensions never and from dimension six on occasionally, a "sporadic"
remainder from which no rank-one integer summand can be subtracted.  The
peeling order is fully deterministic (first hit of the lattice enumeration
on the exact ellipsoid x^T adj(X) x <= det(X)), sporadic remainders are
recognised exactly, and equivalent sporadic finds are identified by an
explicit unimodular congruence witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import isqrt

from . import lattice, linalg
from .lattice import QuadFormQuery
from .linalg import Rows, SymIntMatrix, UnimodularMatrix

# The unique (up to unimodular congruence) sporadic class in dimension six.
M6: Rows = (
    (2, 0, 1, 1, 1, 1),
    (0, 2, 0, 1, 1, 1),
    (1, 0, 2, 1, 1, 1),
    (1, 1, 1, 2, 1, 1),
    (1, 1, 1, 1, 2, 1),
    (1, 1, 1, 1, 1, 2),
)


def sporadic_catalog(n: int) -> tuple[Rows, ...]:
    """Known sporadic classes per dimension; complete only through n = 6."""
    return (M6,) if n == 6 else ()


def sporadic_det_bound(n: int) -> Fraction:
    """Upper bound on the determinant of any sporadic matrix in dimension n."""
    return lattice.hermite_gamma(n).value


def rank1_step(x_rows):
    """The deterministic first integer vector x with X - x x^T still PSD.

    Returns None when no such nonzero x exists, i.e. X is sporadic.  Raises
    on non-PSD input and on the zero matrix.
    """
    x_rows = linalg.freeze(x_rows)
    if not linalg.is_psd_exact(x_rows):
        raise ValueError("rank1_step expects a PSD matrix")
    if not any(v for row in x_rows for v in row):
        raise ValueError("rank1_step expects a nonzero matrix")
    return lattice._kx_first(x_rows)


def is_sporadic(x_rows) -> bool:
    """True iff X is PSD, nonzero, and no nonzero rank-one peel exists.

    The zero matrix is the identity of the semigroup and counts as fully
    decomposed, so it returns False.
    """
    x_rows = linalg.freeze(x_rows)
    if not linalg.is_psd_exact(x_rows):
        raise ValueError("is_sporadic expects a PSD matrix")
    if not any(v for row in x_rows for v in row):
        return False
    return lattice._kx_first(x_rows) is None


@dataclass(frozen=True)
class Rank1Certificate:
    """Outcome of a full peeling run.

    vectors holds (x, multiplicity) pairs in discovery order.  remainder is
    the sporadic residue, None when the peeling reaches zero.  witness, when
    present, conjugates the remainder onto a catalog representative:
    witness * remainder * witness^T is the catalog matrix.
    """

    n: int
    vectors: tuple[tuple[tuple[int, ...], int], ...]
    remainder: SymIntMatrix | None
    witness: UnimodularMatrix | None

    def reconstruct(self) -> Rows:
        total = [[0] * self.n for _ in range(self.n)]
        for x, lam in self.vectors:
            for i in range(self.n):
                for j in range(self.n):
                    total[i][j] += lam * x[i] * x[j]
        if self.remainder is not None:
            for i in range(self.n):
                for j in range(self.n):
                    total[i][j] += self.remainder.rows[i][j]
        return tuple(map(tuple, total))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "vectors": [{"x": list(x), "lambda": lam} for x, lam in self.vectors],
            "remainder": None if self.remainder is None else self.remainder.to_json(),
            "witness": None if self.witness is None else self.witness.to_json(),
        }

    @classmethod
    def from_json(cls, obj) -> "Rank1Certificate":
        rem = obj.get("remainder")
        wit = obj.get("witness")
        return cls(
            n=int(obj["n"]),
            vectors=tuple(
                (tuple(int(v) for v in t["x"]), int(t["lambda"]))
                for t in obj["vectors"]
            ),
            remainder=None if rem is None else SymIntMatrix.from_json(rem),
            witness=None if wit is None else UnimodularMatrix.from_json(wit),
        )


def _sub_outer(rows, x):
    n = len(rows)
    return tuple(
        tuple(rows[i][j] - x[i] * x[j] for j in range(n)) for i in range(n)
    )


def decompose(x_rows) -> Rank1Certificate:
    """Peel deterministic rank-one summands until zero or a sporadic residue.

    Chooses the same vector as rank1_step at every step.  While the residue
    stays full rank the ellipsoid data (adjugate and determinant) is carried
    along by an exact integer rank-one downdate instead of being recomputed;
    once the rank drops the general path takes over.  The run takes at most
    tr(X) steps since every peel lowers the trace.
    """
    x0 = linalg.freeze(x_rows)
    if not linalg.is_psd_exact(x0):
        raise ValueError("decompose expects a PSD matrix")
    n = len(x0)
    cur = x0
    found: list[tuple[int, ...]] = []
    full_rank = n > 0 and linalg.rank(x0) == n
    adj = linalg.adjugate(x0) if full_rank else None
    d = linalg.det(x0) if full_rank else 0
    while any(v for row in cur for v in row):
        if full_rank:
            x = next(QuadFormQuery(adj, d).points(), None)
        else:
            x = lattice._kx_first(cur)
        if x is None:
            break
        found.append(x)
        cur = _sub_outer(cur, x)
        if full_rank:
            ax = linalg.mat_vec(adj, x)
            d2 = d - sum(a * b for a, b in zip(ax, x))
            if d2 == 0:
                full_rank, adj, d = False, None, 0
            else:
                adj = tuple(
                    tuple((d2 * adj[i][j] + ax[i] * ax[j]) // d for j in range(n))
                    for i in range(n)
                )
                d = d2
    vectors: list[tuple[tuple[int, ...], int]] = []
    for x in found:
        if vectors and vectors[-1][0] == x:
            vectors[-1] = (x, vectors[-1][1] + 1)
        else:
            vectors.append((x, 1))
    if not any(v for row in cur for v in row):
        return Rank1Certificate(
            n=n, vectors=tuple(vectors), remainder=None, witness=None
        )
    witness = None
    for cat in sporadic_catalog(n):
        witness = unimodular_witness(cur, cat)
        if witness is not None:
            break
    return Rank1Certificate(
        n=n, vectors=tuple(vectors), remainder=SymIntMatrix(cur), witness=witness
    )


def _squarefree_part(m: int) -> int:
    out = 1
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e % 2:
                out *= p
        p += 1 if p == 2 else 2
    return out * m


def rank1_factor(x_rows):
    """Write a rank-one PSD integer matrix as lambda * x x^T.

    lambda is the squarefree part of the first nonzero diagonal entry; x is
    primitive with positive leading entry, its signs read off the matching
    matrix row.
    """
    x_rows = linalg.freeze(x_rows)
    if not linalg.is_psd_exact(x_rows):
        raise ValueError("rank1_factor expects a PSD matrix")
    if linalg.rank(x_rows) != 1:
        raise ValueError("rank1_factor expects a rank-one matrix")
    n = len(x_rows)
    k = next(i for i in range(n) if x_rows[i][i] != 0)
    lam = _squarefree_part(x_rows[k][k])
    xk = isqrt(x_rows[k][k] // lam)
    x = [0] * n
    x[k] = xk
    for i in range(n):
        if i != k:
            q, rem = divmod(x_rows[k][i], lam * xk)
            if rem:
                raise ValueError("matrix is not an integral rank-one outer product")
            x[i] = q
    if any(
        x_rows[i][j] != lam * x[i] * x[j] for i in range(n) for j in range(n)
    ):
        raise ValueError("matrix is not an integral rank-one outer product")
    return lam, tuple(x)


def _shell_counts(rows, cap):
    counts = [0] * (cap + 1)
    for x in lattice.enumerate_below(rows, cap):
        counts[lattice._form(rows, x)] += 1
    return tuple(counts)


def unimodular_witness(x_rows, y_rows):
    """A unimodular U with U X U^T = Y, or None when none exists.

    Cheap congruence invariants first (determinant, rank, the count of
    vectors at each form value up to the largest diagonal entry of Y), then
    a row-by-row backtracking search over the exact vector shells of X with
    all cross products pinned by Y.  Singular pairs are compared through
    their full-rank cores.
    """
    x = linalg.freeze(x_rows)
    y = linalg.freeze(y_rows)
    if len(x) != len(y):
        raise ValueError("unimodular_witness expects matrices of equal size")
    n = len(x)
    for m in (x, y):
        if not linalg.is_psd_exact(m):
            raise ValueError("unimodular_witness expects PSD matrices")
    if n == 0:
        return UnimodularMatrix(())
    if linalg.det(x) != linalg.det(y):
        return None
    r = linalg.rank(x)
    if r != linalg.rank(y):
        return None
    if r < n:
        ux, bx = linalg.reduce_rank(x)
        uy, by = linalg.reduce_rank(y)
        if r == 0:
            core: Rows = ()
        else:
            wit = unimodular_witness(bx, by)
            if wit is None:
                return None
            core = wit.rows
        w = [[0] * n for _ in range(n)]
        for i in range(n - r):
            w[i][i] = 1
        for i in range(r):
            for j in range(r):
                w[n - r + i][n - r + j] = core[i][j]
        uy_inv_t = linalg.transpose(linalg.inverse_unimodular(uy))
        u = linalg.mat_mul(
            uy_inv_t, linalg.mat_mul(linalg.freeze(w), linalg.transpose(ux))
        )
        assert linalg.mat_mul(u, linalg.mat_mul(x, linalg.transpose(u))) == y
        return UnimodularMatrix(u)
    cap = max(y[i][i] for i in range(n))
    if _shell_counts(x, cap) != _shell_counts(y, cap):
        return None
    shells: dict[int, list[tuple[tuple[int, ...], tuple[int, ...]]]] = {
        v: [] for v in range(1, cap + 1)
    }
    for vec in lattice.enumerate_below(x, cap):
        shells[lattice._form(x, vec)].append((vec, linalg.mat_vec(x, vec)))
    for val in shells:
        shells[val] = shells[val] + [
            (tuple(-a for a in v), tuple(-a for a in xv))
            for v, xv in shells[val]
        ]
    rows_u: list[tuple[int, ...]] = []

    def backtrack(i):
        if i == n:
            return linalg.det(tuple(rows_u)) in (1, -1)
        pool = shells[y[i][i]]
        if i == 0:
            pool = pool[: len(pool) // 2]  # a global sign flip is free
        for v, xv in pool:
            if all(
                sum(a * b for a, b in zip(rows_u[j], xv)) == y[i][j]
                for j in range(i)
            ):
                rows_u.append(v)
                if backtrack(i + 1):
                    return True
                rows_u.pop()
        return False

    if not backtrack(0):
        return None
    u = tuple(rows_u)
    assert linalg.mat_mul(u, linalg.mat_mul(x, linalg.transpose(u))) == y
    return UnimodularMatrix(u)


def search_sporadic(n: int, diag_bound: int) -> list[Rows]:
    """All sporadic classes with nondecreasing diagonal <= diag_bound.

    Exhausts positive definite integer matrices with 1 <= X_11 <= ... <=
    X_nn <= diag_bound column by column over exact integer intervals: with
    the adjugates and determinants of all leading blocks kept on a stack,
    extendability of a partial column c over the reals is exactly
    c^T adj(A_j) c < X_kk det(A_j), a quadratic whose integer solution range
    comes from one integer square root.  Accepted columns update the
    adjugate by the exact bordered-inverse identity, so leaves have their
    ellipsoid data for free.

    Permutations of equal diagonal entries and basis sign flips are
    unimodular, so the walk is restricted to orbit representatives: each
    column's first nonzero entry is nonnegative, and a leaf is dropped when
    swapping an adjacent equal-diagonal pair yields a lexicographically
    smaller sign-normalized matrix (the orbit minimum always survives).
    Survivors are filtered by det < gamma_n, by cheap subtraction probes,
    and by the full sporadicity test, then deduplicated up to unimodular
    congruence.  Deterministic order throughout.
    """
    if n < 2 or diag_bound < 1:
        raise ValueError("need n >= 2 and diag_bound >= 1")
    bound = sporadic_det_bound(n)
    reps: list[Rows] = []
    for diag in combinations_with_replacement(range(1, diag_bound + 1), n):
        a = [[0] * n for _ in range(n)]
        for i in range(n):
            a[i][i] = diag[i]
        adjs: list[Rows] = [((1,),)]
        dets = [diag[0]]
        _fill_column(a, 1, n, adjs, dets, bound, reps)
    return reps


def _fill_column(a, k, n, adjs, dets, bound, reps):
    if k == n:
        _check_leaf(a, n, adjs[-1], dets[-1], bound, reps)
        return
    t = a[k][k]
    col = [0] * k

    def entry(i, q, seen):
        # q is col^T adj(A_i) col for the i entries chosen so far; seen
        # marks whether any of them was nonzero (sign normalization)
        if i == k:
            d_old = dets[-1]
            d_new = t * d_old - q
            p = adjs[-1]
            u = [sum(p[r][j] * col[j] for j in range(k)) for r in range(k)]
            top = [
                [(d_new * p[r][j] + u[r] * u[j]) // d_old for j in range(k)]
                + [-u[r]]
                for r in range(k)
            ]
            adjs.append(tuple(tuple(r) for r in top + [[-v for v in u] + [d_old]]))
            dets.append(d_new)
            for j in range(k):
                a[j][k] = a[k][j] = col[j]
            _fill_column(a, k + 1, n, adjs, dets, bound, reps)
            adjs.pop()
            dets.pop()
            for j in range(k):
                a[j][k] = a[k][j] = 0
            return
        p = adjs[i]
        alpha = p[i][i]
        beta = sum(p[j][i] * col[j] for j in range(i))
        rho = sum(
            p[j][l] * col[j] * col[l] for j in range(i) for l in range(i)
        )
        # alpha v^2 + 2 beta v + rho <= t * det(A_{i+1}) - 1
        disc = beta * beta + alpha * (t * dets[i] - 1 - rho)
        if disc < 0:
            return
        hi = lattice._floor_div_surd(-beta, disc, alpha)
        lo = -lattice._floor_div_surd(beta, disc, alpha)
        if not seen and lo < 0:
            lo = 0
        for v in range(lo, hi + 1):
            col[i] = v
            entry(i + 1, alpha * v * v + 2 * beta * v + rho, seen or v != 0)
        col[i] = 0

    entry(0, 0, False)


def _sign_normalize(m, n):
    """Flip basis signs so every column's first nonzero entry is positive."""
    for k in range(1, n):
        lead = next((m[i][k] for i in range(k) if m[i][k]), 0)
        if lead < 0:
            for i in range(n):
                m[i][k] = -m[i][k]
                m[k][i] = -m[k][i]
    return m


def _upper_key(m, n):
    return tuple(m[i][k] for k in range(1, n) for i in range(k))


def _swap_minimal(rows, n):
    """False when an adjacent equal-diagonal swap lowers the matrix order."""
    base = _upper_key(rows, n)
    for k in range(n - 1):
        if rows[k][k] != rows[k + 1][k + 1]:
            continue
        sw = [list(r) for r in rows]
        sw[k], sw[k + 1] = sw[k + 1], sw[k]
        for r in sw:
            r[k], r[k + 1] = r[k + 1], r[k]
        if _upper_key(_sign_normalize(sw, n), n) < base:
            return False
    return True


def _check_leaf(a, n, adj, d, bound, reps):
    if d >= bound:
        return
    for i in range(n):
        if adj[i][i] <= d:
            return  # X - e_i e_i^T stays PSD, so not sporadic
    for i in range(n):
        for j in range(i):
            cross = 2 * adj[i][j]
            if adj[i][i] + adj[j][j] - abs(cross) <= d:
                return  # some e_i +- e_j peels off
    if not _swap_minimal(a, n):
        return
    if next(QuadFormQuery(adj, d).points(), None) is not None:
        return
    rows = tuple(tuple(r) for r in a)
    for r in reps:
        if unimodular_witness(rows, r) is not None:
            return
    reps.append(rows)


# -- the three generators of GL(n, Z), used for random congruence words -----


def gl_generators(n: int) -> dict[str, Rows]:
    """Cyclic shift, one elementary row addition, and the first transposition
    generate GL(n, Z); explicit inverses are included as extra letters."""
    if n < 2:
        raise ValueError("need n >= 2")
    shift = tuple(
        tuple(1 if j == (i + 1) % n else 0 for j in range(n)) for i in range(n)
    )
    addrow = tuple(
        tuple(1 if i == j or (i, j) == (1, 0) else 0 for j in range(n))
        for i in range(n)
    )
    swap = tuple(
        tuple(
            1 if (i, j) in ((0, 1), (1, 0)) or (i == j and i > 1) else 0
            for j in range(n)
        )
        for i in range(n)
    )
    return {
        "shift": shift,
        "addrow": addrow,
        "swap": swap,
        "shift_inv": linalg.inverse_unimodular(shift),
        "addrow_inv": linalg.inverse_unimodular(addrow),
    }


def random_unimodular(n: int, length: int, rng) -> Rows:
    """Product of `length` random generator letters; seeded by the caller."""
    gens = list(gl_generators(n).values())
    u = linalg.identity(n)
    for _ in range(length):
        u = linalg.mat_mul(u, rng.choice(gens))
    return u
