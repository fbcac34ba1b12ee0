"""Test matrices over finite fields."""

import itertools
from typing import List

import numpy as np
import pytest

from blowuprank.core import MatrixError
from blowuprank.gf import FieldSpec, fe_add, fe_mul, fe_neg, field_make
from blowuprank.matfq import (
    MatrixFq,
    block,
    block_permute_cols,
    col_block_axpy,
    from_blocks,
    kron,
    mat_add,
    mat_inverse,
    mat_mul,
    mat_neg,
    mat_power,
    mat_rank,
    mat_scale,
    mat_sub,
    rank_generic,
    rank_gf2,
    row_block_axpy,
)


def random_matrix(
    F: FieldSpec, rng: np.random.Generator, rows: int, cols: int
) -> MatrixFq:
    return MatrixFq(F, rng.integers(0, F.q, size=(rows, cols)))


class TestMatrixFq:
    """Test the matrix type."""

    def test_constructors(self, gf2: FieldSpec) -> None:
        """Test named constructors."""
        assert MatrixFq.zeros(gf2, 2, 3).shape == (2, 3)
        assert MatrixFq.unit(gf2, 2, 0, 1).entries == [0, 1, 0, 0]
        assert MatrixFq.canonical(gf2, 3, 2).entries == [1, 0, 0, 0, 1, 0, 0, 0, 0]
        assert MatrixFq.identity(gf2, 2) == MatrixFq(gf2, [[1, 0], [0, 1]])

    def test_immutable(self, gf2: FieldSpec) -> None:
        """Test the backing array is read-only."""
        m = MatrixFq.identity(gf2, 2)
        with pytest.raises(ValueError):
            m.data[0, 0] = 0

    def test_invalid_entries(self, gf2: FieldSpec) -> None:
        """Test out-of-range reps are rejected."""
        with pytest.raises(MatrixError, match="out of field range"):
            MatrixFq(gf2, [[0, 2]])
        with pytest.raises(MatrixError, match="two-dimensional"):
            MatrixFq(gf2, [1, 0])

    def test_equality_includes_field(self, gf2: FieldSpec, gf3: FieldSpec) -> None:
        """Test matrices over different fields differ."""
        assert MatrixFq.identity(gf2, 2) != MatrixFq.identity(gf3, 2)
        assert len({MatrixFq.identity(gf2, 2), MatrixFq.identity(gf2, 2)}) == 1

    def test_serialize(self, gf3: FieldSpec) -> None:
        """Test the matrix schema."""
        m = MatrixFq(gf3, [[1, 2, 0]])
        assert m.serialize() == {"rows": 1, "cols": 3, "entries": [[1, 2, 0]]}
        assert MatrixFq.deserialize(m.serialize(), gf3) == m

    def test_deserialize_malformed(self, gf3: FieldSpec) -> None:
        """Test wrong entry counts are rejected."""
        with pytest.raises(MatrixError, match="Malformed"):
            MatrixFq.deserialize({"rows": 2, "cols": 2, "entries": [1, 2, 0]}, gf3)


class TestArithmetic:
    """Test matrix arithmetic."""

    def test_add_sub_neg(self, gf3: FieldSpec) -> None:
        """Test entrywise operations."""
        a = MatrixFq(gf3, [[1, 2], [0, 1]])
        b = MatrixFq(gf3, [[2, 2], [1, 0]])
        assert mat_add(a, b) == MatrixFq(gf3, [[0, 1], [1, 1]])
        assert mat_sub(a, b) == MatrixFq(gf3, [[2, 0], [2, 1]])
        assert mat_neg(a) == MatrixFq(gf3, [[2, 1], [0, 2]])
        assert a + b - b == a
        assert mat_scale(2, a) == MatrixFq(gf3, [[2, 1], [0, 2]])

    def test_mul(self, gf3: FieldSpec) -> None:
        """Test the product."""
        a = MatrixFq(gf3, [[1, 2], [0, 1]])
        b = MatrixFq(gf3, [[2, 2], [1, 0]])
        assert mat_mul(a, b) == MatrixFq(gf3, [[1, 2], [1, 0]])
        assert a @ MatrixFq.identity(gf3, 2) == a

    def test_mul_extension(self, gf4: FieldSpec) -> None:
        """Test the product uses field multiplication."""
        x = MatrixFq(gf4, [[2]])
        assert mat_mul(x, x) == MatrixFq(gf4, [[3]])

    def test_mismatches(self, gf2: FieldSpec, gf3: FieldSpec) -> None:
        """Test shape and field mismatches."""
        with pytest.raises(MatrixError, match="Shape mismatch"):
            mat_mul(MatrixFq.zeros(gf2, 2, 3), MatrixFq.zeros(gf2, 2, 3))
        with pytest.raises(MatrixError, match="Field mismatch"):
            mat_add(MatrixFq.zeros(gf2, 2, 2), MatrixFq.zeros(gf3, 2, 2))

    def test_power(self, gf2: FieldSpec) -> None:
        """Test powers of a nilpotent and an idempotent."""
        e12 = MatrixFq.unit(gf2, 2, 0, 1)
        assert mat_power(e12, 0) == MatrixFq.identity(gf2, 2)
        assert mat_power(e12, 1) == e12
        assert mat_power(e12, 4).is_zero()
        e11 = MatrixFq.unit(gf2, 2, 0, 0)
        assert mat_power(e11, 5) == e11

    def test_kron(self, gf3: FieldSpec) -> None:
        """Test the block layout of the Kronecker product."""
        a = MatrixFq(gf3, [[1, 2]])
        b = MatrixFq(gf3, [[1], [1]])
        assert kron(a, b) == MatrixFq(gf3, [[1, 2], [1, 2]])
        assert kron(MatrixFq.identity(gf3, 2), b).shape == (4, 2)


class TestRank:
    """Test rank kernels."""

    def test_small_ranks(self, gf2: FieldSpec, gf3: FieldSpec) -> None:
        """Test hand-checked ranks."""
        assert mat_rank(MatrixFq.identity(gf2, 4)) == 4
        assert mat_rank(MatrixFq.zeros(gf3, 3, 5)) == 0
        assert mat_rank(MatrixFq(gf2, [[1, 1], [1, 1]])) == 1
        assert mat_rank(MatrixFq(gf3, [[1, 1], [1, 2]])) == 2
        assert mat_rank(MatrixFq(gf3, [[1, 2], [2, 1]])) == 1

    def test_rank_does_not_modify_input(self, gf3: FieldSpec) -> None:
        """Test rank works on a copy."""
        m = MatrixFq(gf3, [[0, 1], [1, 1]])
        before = m.data.copy()
        mat_rank(m)
        assert np.array_equal(m.data, before)

    def test_bitpacked_matches_generic(
        self, gf2: FieldSpec, rng: np.random.Generator
    ) -> None:
        """Test the GF(2) kernel against elimination on 10^4 seeded matrices."""
        for _ in range(10_000):
            rows, cols = rng.integers(1, 33, size=2)
            data = rng.integers(0, 2, size=(rows, cols))
            assert rank_gf2(data) == rank_generic(gf2, data)

    def test_wide_rows(self, gf2: FieldSpec) -> None:
        """Test rows longer than one machine word."""
        data = np.zeros((3, 130), dtype=np.int64)
        data[0, 129] = data[1, 64] = data[2, 129] = data[2, 64] = 1
        assert rank_gf2(data) == 2

    @pytest.mark.parametrize(("p", "k"), [(3, 1), (2, 2), (3, 2)])
    def test_rank_is_transpose_invariant(
        self, p: int, k: int, rng: np.random.Generator
    ) -> None:
        """Test rank(A) = rank(A^T)."""
        F = field_make(p, k)
        for _ in range(50):
            m = random_matrix(F, rng, 4, 6)
            assert mat_rank(m) == mat_rank(MatrixFq(F, m.data.T))

    def test_inverse(
        self, gf3: FieldSpec, gf4: FieldSpec, rng: np.random.Generator
    ) -> None:
        """Test inverses of random matrices."""
        for F in (gf3, gf4):
            for _ in range(50):
                m = random_matrix(F, rng, 3, 3)
                inverse = mat_inverse(m)
                if mat_rank(m) < 3:
                    assert inverse is None
                else:
                    assert inverse is not None
                    assert m @ inverse == MatrixFq.identity(F, 3)

    def test_inverse_non_square(self, gf3: FieldSpec) -> None:
        """Test non-square matrices have no inverse."""
        with pytest.raises(MatrixError, match="non-square"):
            mat_inverse(MatrixFq.zeros(gf3, 2, 3))


class TestBlocks:
    """Test block operations."""

    def test_block_and_assembly(self, gf3: FieldSpec) -> None:
        """Test extracting blocks of an assembled matrix."""
        a = MatrixFq(gf3, [[1, 2], [0, 1]])
        i = MatrixFq.identity(gf3, 2)
        z = MatrixFq.zeros(gf3, 2, 2)
        m = from_blocks(gf3, [[a, i], [z, a]])
        assert m.shape == (4, 4)
        assert block(m, 0, 1, 2) == i
        assert block(m, 1, 1, 2) == a

    def test_axpy(self, gf3: FieldSpec) -> None:
        """Test block row and column updates."""
        a = MatrixFq(gf3, [[1, 2], [0, 1]])
        i = MatrixFq.identity(gf3, 2)
        z = MatrixFq.zeros(gf3, 2, 2)
        m = from_blocks(gf3, [[a, i], [z, z]])
        rows = row_block_axpy(m, a, 0, 1, 2)
        assert block(rows, 1, 0, 2) == a @ a
        assert block(rows, 1, 1, 2) == a
        cols = col_block_axpy(m, -a, 1, 0, 2)
        assert block(cols, 0, 0, 2).is_zero()

    def test_permute(self, gf2: FieldSpec) -> None:
        """Test block column rotation."""
        i = MatrixFq.identity(gf2, 1)
        z = MatrixFq.zeros(gf2, 1, 1)
        m = from_blocks(gf2, [[i, z, z]])
        assert block_permute_cols(m, [1, 2, 0], 1) == from_blocks(gf2, [[z, z, i]])

    def test_operations_preserve_rank(
        self, gf3: FieldSpec, rng: np.random.Generator
    ) -> None:
        """Test elementary block operations are rank-preserving."""
        for _ in range(30):
            m = random_matrix(gf3, rng, 6, 6)
            p = random_matrix(gf3, rng, 2, 2)
            rank = mat_rank(m)
            assert mat_rank(row_block_axpy(m, p, 0, 2, 2)) == rank
            assert mat_rank(col_block_axpy(m, p, 1, 0, 2)) == rank
            assert mat_rank(block_permute_cols(m, [2, 0, 1], 2)) == rank

    def test_invalid_blocks(self, gf2: FieldSpec) -> None:
        """Test bad partitions and indices."""
        m = MatrixFq.zeros(gf2, 4, 4)
        p = MatrixFq.identity(gf2, 2)
        with pytest.raises(MatrixError, match="partitioned"):
            block(m, 0, 0, 3)
        with pytest.raises(MatrixError, match="out of range"):
            row_block_axpy(m, p, 0, 2, 2)
        with pytest.raises(MatrixError, match="Invalid block row"):
            row_block_axpy(m, p, 1, 1, 2)
        with pytest.raises(MatrixError, match="permutation"):
            block_permute_cols(m, [0, 0], 2)


RANK_FIELDS = [(2, 1), (3, 1), (2, 2)]


def determinant(F: FieldSpec, rows: List[List[int]]) -> int:
    """Laplace expansion along the first row."""
    if not rows:
        return 1
    total = 0
    for j, a in enumerate(rows[0]):
        if not a:
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = fe_mul(F, a, determinant(F, minor))
        total = fe_add(F, total, term if j % 2 == 0 else fe_neg(F, term))
    return total


def rank_by_minors(m: MatrixFq) -> int:
    """Largest size of a nonzero minor."""
    data = m.data.tolist()
    for k in range(min(m.shape), 0, -1):
        for rows in itertools.combinations(range(m.rows), k):
            for cols in itertools.combinations(range(m.cols), k):
                sub = [[data[i][j] for j in cols] for i in rows]
                if determinant(m.field, sub):
                    return k
    return 0


def matrix_of_rank_at_most(
    F: FieldSpec, rng: np.random.Generator, rows: int, cols: int
) -> MatrixFq:
    """Random product through an inner dimension drawn from 0..min(rows, cols)."""
    inner = int(rng.integers(0, min(rows, cols) + 1))
    if inner == 0:
        return MatrixFq.zeros(F, rows, cols)
    left = random_matrix(F, rng, rows, inner)
    right = random_matrix(F, rng, inner, cols)
    return left @ right


def random_invertible(F: FieldSpec, rng: np.random.Generator, n: int) -> MatrixFq:
    while True:
        m = random_matrix(F, rng, n, n)
        if mat_inverse(m) is not None:
            return m


class TestRankProperties:
    """Test rank identities on exhaustive and seeded inputs."""

    def test_minor_oracle_gf2_2x2_exhaustive(self, gf2: FieldSpec) -> None:
        """Test all 16 matrices of size 2×2 over GF(2)."""
        for bits in itertools.product((0, 1), repeat=4):
            m = MatrixFq(gf2, np.array(bits).reshape(2, 2))
            assert mat_rank(m) == rank_by_minors(m)

    @pytest.mark.parametrize(("p", "k"), RANK_FIELDS)
    def test_minor_oracle(self, p: int, k: int, rng: np.random.Generator) -> None:
        """Test seeded matrices up to 3×3."""
        F = field_make(p, k)
        for rows, cols in itertools.product((1, 2, 3), repeat=2):
            for _ in range(40):
                m = matrix_of_rank_at_most(F, rng, rows, cols)
                assert mat_rank(m) == rank_by_minors(m)

    @pytest.mark.parametrize(("p", "k"), RANK_FIELDS)
    def test_kron_rank_is_multiplicative(
        self, p: int, k: int, rng: np.random.Generator
    ) -> None:
        """Test rk(A⊗B) = rk(A)·rk(B)."""
        F = field_make(p, k)
        for _ in range(100):
            ra, ca, rb, cb = (int(v) for v in rng.integers(1, 5, size=4))
            a = matrix_of_rank_at_most(F, rng, ra, ca)
            b = matrix_of_rank_at_most(F, rng, rb, cb)
            assert mat_rank(kron(a, b)) == mat_rank(a) * mat_rank(b)

    @pytest.mark.parametrize(("p", "k"), RANK_FIELDS)
    def test_rank_is_subadditive(
        self, p: int, k: int, rng: np.random.Generator
    ) -> None:
        """Test rk(A + B) <= rk(A) + rk(B) and rk(A) <= min(rows, cols)."""
        F = field_make(p, k)
        for _ in range(200):
            rows, cols = (int(v) for v in rng.integers(1, 7, size=2))
            a = matrix_of_rank_at_most(F, rng, rows, cols)
            b = matrix_of_rank_at_most(F, rng, rows, cols)
            assert mat_rank(a + b) <= mat_rank(a) + mat_rank(b)
            assert mat_rank(a) <= min(rows, cols)

    @pytest.mark.parametrize(("p", "k"), RANK_FIELDS)
    def test_invertible_factors_preserve_rank(
        self, p: int, k: int, rng: np.random.Generator
    ) -> None:
        """Test rk(PA) = rk(A) = rk(AQ) for invertible P and Q."""
        F = field_make(p, k)
        for _ in range(100):
            rows, cols = (int(v) for v in rng.integers(1, 6, size=2))
            a = matrix_of_rank_at_most(F, rng, rows, cols)
            rank = mat_rank(a)
            assert mat_rank(random_invertible(F, rng, rows) @ a) == rank
            assert mat_rank(a @ random_invertible(F, rng, cols)) == rank
