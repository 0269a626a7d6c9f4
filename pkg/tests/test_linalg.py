import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import det_cofactor, psd_by_minors
from intcone import linalg
from intcone.linalg import (
    SymIntMatrix,
    UnimodularMatrix,
    adjugate,
    det,
    extend_to_unimodular,
    identity,
    inverse_unimodular,
    is_psd_exact,
    mat_mul,
    primitive_kernel_vector,
    rank,
    reduce_rank,
    transpose,
)

M6 = (
    (2, 0, 1, 1, 1, 1),
    (0, 2, 0, 1, 1, 1),
    (1, 0, 2, 1, 1, 1),
    (1, 1, 1, 2, 1, 1),
    (1, 1, 1, 1, 2, 1),
    (1, 1, 1, 1, 1, 2),
)

M6_ADJ = (
    (4, 3, 1, -2, -2, -2),
    (3, 6, 3, -3, -3, -3),
    (1, 3, 4, -2, -2, -2),
    (-2, -3, -2, 4, 1, 1),
    (-2, -3, -2, 1, 4, 1),
    (-2, -3, -2, 1, 1, 4),
)


def random_symmetric(rng, n, lo=-4, hi=4):
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            a[i][j] = a[j][i] = rng.randint(lo, hi)
    return tuple(tuple(r) for r in a)


class TestDet:
    def test_identity(self):
        for n in range(5):
            assert det(identity(n)) == 1

    def test_m6(self):
        assert det(M6) == 3

    def test_singular(self):
        assert det(((1, 1), (1, 1))) == 0

    def test_matches_cofactor_oracle(self):
        rng = random.Random(7)
        for _ in range(200):
            n = rng.randint(1, 5)
            a = tuple(
                tuple(rng.randint(-6, 6) for _ in range(n)) for _ in range(n)
            )
            assert det(a) == det_cofactor(a)


class TestAdjugate:
    def test_m6(self):
        assert adjugate(M6) == M6_ADJ

    def test_diag(self):
        assert adjugate(((2, 0), (0, 3))) == ((3, 0), (0, 2))

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            adjugate(((1, 2), (3, 4)))

    @given(st.integers(2, 4), st.integers(0, 10**6))
    @settings(max_examples=60, deadline=None)
    def test_fundamental_identity(self, n, seed):
        a = random_symmetric(random.Random(seed), n)
        d = det(a)
        prod = mat_mul(a, adjugate(a))
        assert prod == tuple(
            tuple(d if i == j else 0 for j in range(n)) for i in range(n)
        )


class TestIsPsdExact:
    def test_examples(self):
        assert is_psd_exact(M6)
        assert not is_psd_exact(((1, 0), (0, -1)))
        assert not is_psd_exact(((2, 3), (3, 2)))
        assert is_psd_exact(((0, 0), (0, 0)))
        assert is_psd_exact(())

    def test_zero_diag_nonzero_row(self):
        assert not is_psd_exact(((0, 1), (1, 2)))

    def test_exhaustive_2x2(self):
        for a in range(-3, 4):
            for b in range(-3, 4):
                for c in range(-3, 4):
                    m = ((a, b), (b, c))
                    assert is_psd_exact(m) == psd_by_minors(m), m

    def test_matches_minor_oracle(self):
        rng = random.Random(11)
        for _ in range(150):
            n = rng.randint(1, 4)
            m = random_symmetric(rng, n, -3, 3)
            assert is_psd_exact(m) == psd_by_minors(m), m

    def test_psd_sums_of_outer_products(self):
        rng = random.Random(13)
        for _ in range(100):
            n = rng.randint(1, 5)
            total = [[0] * n for _ in range(n)]
            for _ in range(rng.randint(1, n)):
                x = [rng.randint(-5, 5) for _ in range(n)]
                for i in range(n):
                    for j in range(n):
                        total[i][j] += x[i] * x[j]
            assert is_psd_exact(tuple(map(tuple, total)))


class TestRank:
    def test_examples(self):
        assert rank(M6) == 6
        assert rank(((1, 1), (1, 1))) == 1
        assert rank(((0, 0), (0, 0))) == 0
        assert rank(identity(4)) == 4

    def test_rank_one_outer(self):
        x = (2, -3, 5)
        assert rank(tuple(tuple(a * b for b in x) for a in x)) == 1


class TestPrimitiveKernelVector:
    def test_diag(self):
        assert primitive_kernel_vector(((1, 0), (0, 0))) == (0, 1)

    def test_ones(self):
        assert primitive_kernel_vector(((1, 1), (1, 1))) == (1, -1)

    def test_full_rank_none(self):
        assert primitive_kernel_vector(M6) is None

    def test_properties(self):
        rng = random.Random(17)
        found = 0
        while found < 60:
            n = rng.randint(2, 5)
            m = random_symmetric(rng, n, -3, 3)
            z = primitive_kernel_vector(m)
            if z is None:
                assert rank(m) == n
                continue
            found += 1
            assert linalg.mat_vec(m, z) == (0,) * n
            assert linalg.vec_gcd(z) == 1
            assert next(v for v in z if v) > 0


class TestExtendToUnimodular:
    def test_e1(self):
        assert extend_to_unimodular((1, 0, 0)) == identity(3)

    def test_2_3(self):
        u = extend_to_unimodular((2, 3))
        assert tuple(r[0] for r in u) == (2, 3)
        assert det(u) in (1, -1)

    def test_rejects_non_primitive(self):
        with pytest.raises(ValueError):
            extend_to_unimodular((2, 4))
        with pytest.raises(ValueError):
            extend_to_unimodular((0, 0))

    @given(st.lists(st.integers(-9, 9), min_size=1, max_size=6))
    @settings(max_examples=120, deadline=None)
    def test_random_primitive(self, z):
        g = 0
        for v in z:
            g = linalg.gcd(g, v)
        if g != 1:
            return
        u = extend_to_unimodular(tuple(z))
        assert tuple(r[0] for r in u) == tuple(z)
        assert det(u) in (1, -1)

    def test_inverse_roundtrip(self):
        u = extend_to_unimodular((3, -5, 7))
        ui = inverse_unimodular(u)
        assert mat_mul(u, ui) == identity(3)


class TestReduceRank:
    def test_full_rank_passthrough(self):
        u, block = reduce_rank(M6)
        assert u == identity(6)
        assert block == M6

    def test_rank_one(self):
        u, block = reduce_rank(((1, 1), (1, 1)))
        assert block == ((1,),)
        conj = mat_mul(transpose(u), mat_mul(((1, 1), (1, 1)), u))
        assert conj == ((0, 0), (0, 1))

    def test_zero_matrix(self):
        u, block = reduce_rank(((0, 0), (0, 0)))
        assert block == ()
        assert det(u) in (1, -1)

    def test_rejects_non_psd(self):
        with pytest.raises(ValueError):
            reduce_rank(((0, 1), (1, 0)))

    def test_block_structure_random(self):
        rng = random.Random(23)
        for _ in range(60):
            n = rng.randint(2, 5)
            k = rng.randint(1, n - 1)  # deficient by construction
            total = [[0] * n for _ in range(n)]
            for _ in range(k):
                x = [rng.randint(-3, 3) for _ in range(n)]
                for i in range(n):
                    for j in range(n):
                        total[i][j] += x[i] * x[j]
            x0 = tuple(map(tuple, total))
            r = rank(x0)
            u, block = reduce_rank(x0)
            assert det(u) in (1, -1)
            assert len(block) == r
            if r:
                assert rank(block) == r
            conj = mat_mul(transpose(u), mat_mul(x0, u))
            for i in range(n - r):
                assert conj[i] == (0,) * n
            for i in range(r):
                assert conj[n - r + i][n - r :] == block[i]


class TestDataclasses:
    def test_sym_matrix_validation(self):
        with pytest.raises(ValueError):
            SymIntMatrix(((1, 2), (3, 4)))
        m = SymIntMatrix(M6)
        assert m.n == 6
        assert m.trace == 12
        assert m.det() == 3

    def test_sym_matrix_json_roundtrip(self):
        m = SymIntMatrix(M6)
        assert SymIntMatrix.from_json(m.to_json()) == m

    def test_unimodular_validation(self):
        with pytest.raises(ValueError):
            UnimodularMatrix(((2, 0), (0, 1)))
        u = UnimodularMatrix(((1, 1), (0, 1)))
        assert u.inverse().rows == ((1, -1), (0, 1))
