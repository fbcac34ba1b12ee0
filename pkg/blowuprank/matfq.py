"""Dense matrices over a finite field.

``MatrixFq`` values are immutable; every operation returns a fresh matrix.
Rank dispatches to a bit-packed kernel over GF(2) (rows as Python integers,
elimination by exclusive-or) and to a generic numpy kernel otherwise.
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from blowuprank.core import MatrixError
from blowuprank.gf import FieldElement, FieldSpec, IntArray


class MatrixFq:
    """Rectangular matrix over a ``FieldSpec``."""

    __slots__ = ("field", "data")

    def __init__(self, field: FieldSpec, data: Any) -> None:
        """Initialize matrix.

        Args:
            field: Field of the entries
            data: Two-dimensional array-like of canonical reps

        Raises:
            MatrixError: If data is not two-dimensional or has out-of-range reps
        """
        array = np.array(data, dtype=np.int64)
        if array.ndim != 2:
            if array.size == 0:
                array = array.reshape(0, 0)
            else:
                raise MatrixError("Matrix data must be two-dimensional")
        if array.size and (array.min() < 0 or array.max() >= field.q):
            raise MatrixError(
                "Matrix entry out of field range", {"field": repr(field)}
            )
        array.setflags(write=False)
        self.field = field
        self.data: IntArray = array

    @classmethod
    def _wrap(cls, field: FieldSpec, array: IntArray) -> "MatrixFq":
        matrix = cls.__new__(cls)
        array = np.ascontiguousarray(array, dtype=np.int64)
        array.setflags(write=False)
        matrix.field = field
        matrix.data = array
        return matrix

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "MatrixFq":
        return cls._wrap(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "MatrixFq":
        return cls._wrap(field, np.eye(n, dtype=np.int64))

    @classmethod
    def unit(cls, field: FieldSpec, n: int, i: int, j: int) -> "MatrixFq":
        """The n×n matrix unit with a single 1 at zero-based ``(i, j)``."""
        array = np.zeros((n, n), dtype=np.int64)
        array[i, j] = 1
        return cls._wrap(field, array)

    @classmethod
    def canonical(cls, field: FieldSpec, n: int, r: int) -> "MatrixFq":
        """Diagonal matrix with r leading ones, the rank-r orbit representative."""
        array = np.zeros((n, n), dtype=np.int64)
        array[np.arange(r), np.arange(r)] = 1
        return cls._wrap(field, array)

    @property
    def rows(self) -> int:
        return int(self.data.shape[0])

    @property
    def cols(self) -> int:
        return int(self.data.shape[1])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> List[FieldElement]:
        """Row-major entries."""
        return [int(v) for v in self.data.ravel()]

    def is_zero(self) -> bool:
        return not self.data.any()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatrixFq):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.data, other.data)

    def __hash__(self) -> int:
        return hash((self.field, self.shape, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"MatrixFq({self.field!r}, {self.data.tolist()})"

    def __add__(self, other: "MatrixFq") -> "MatrixFq":
        return mat_add(self, other)

    def __sub__(self, other: "MatrixFq") -> "MatrixFq":
        return mat_sub(self, other)

    def __neg__(self) -> "MatrixFq":
        return mat_neg(self)

    def __matmul__(self, other: "MatrixFq") -> "MatrixFq":
        return mat_mul(self, other)

    def serialize(self) -> Dict[str, Any]:
        return {"rows": self.rows, "cols": self.cols, "entries": self.data.tolist()}

    @classmethod
    def deserialize(cls, data: Dict[str, Any], field: FieldSpec) -> "MatrixFq":
        try:
            rows, cols = int(data["rows"]), int(data["cols"])
            entries = np.array(data["entries"], dtype=np.int64).reshape(rows, cols)
        except (KeyError, TypeError, ValueError) as e:
            raise MatrixError("Malformed matrix description", {"data": data}, e) from e
        return cls(field, entries)


def _same_field(a: MatrixFq, b: MatrixFq) -> FieldSpec:
    if a.field != b.field:
        raise MatrixError(
            "Field mismatch", {"left": repr(a.field), "right": repr(b.field)}
        )
    return a.field


def _matmul(field: FieldSpec, a: IntArray, b: IntArray) -> IntArray:
    if field.is_prime_field:
        return (a @ b) % field.p
    acc = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for inner in range(a.shape[1]):
        acc = field.add(acc, field.mul(a[:, inner, None], b[None, inner, :]))
    return acc


def mat_add(a: MatrixFq, b: MatrixFq) -> MatrixFq:
    field = _same_field(a, b)
    if a.shape != b.shape:
        raise MatrixError("Shape mismatch", {"left": a.shape, "right": b.shape})
    return MatrixFq._wrap(field, field.add(a.data, b.data))


def mat_sub(a: MatrixFq, b: MatrixFq) -> MatrixFq:
    field = _same_field(a, b)
    if a.shape != b.shape:
        raise MatrixError("Shape mismatch", {"left": a.shape, "right": b.shape})
    return MatrixFq._wrap(field, field.sub(a.data, b.data))


def mat_neg(a: MatrixFq) -> MatrixFq:
    return MatrixFq._wrap(a.field, a.field.neg(a.data))


def mat_scale(c: FieldElement, a: MatrixFq) -> MatrixFq:
    a.field.check(c)
    return MatrixFq._wrap(a.field, a.field.mul(np.int64(c), a.data))


def mat_mul(a: MatrixFq, b: MatrixFq) -> MatrixFq:
    """Matrix product.

    Raises:
        MatrixError: On field mismatch or non-conforming shapes
    """
    field = _same_field(a, b)
    if a.cols != b.rows:
        raise MatrixError("Shape mismatch", {"left": a.shape, "right": b.shape})
    return MatrixFq._wrap(field, _matmul(field, a.data, b.data))


def mat_power(a: MatrixFq, e: int) -> MatrixFq:
    """Non-negative power of a square matrix by repeated squaring."""
    if a.rows != a.cols:
        raise MatrixError("Power of a non-square matrix", {"shape": a.shape})
    result = MatrixFq.identity(a.field, a.rows)
    base = a
    while e > 0:
        if e & 1:
            result = mat_mul(result, base)
        e >>= 1
        if e:
            base = mat_mul(base, base)
    return result


def rank_gf2(data: IntArray) -> int:
    """Rank over GF(2) with rows packed into integers.

    Each row becomes one integer; a row is reduced against the pivots found so
    far, keyed by their lowest set bit, until it vanishes or yields a new pivot.
    """
    if data.size == 0:
        return 0
    packed = np.packbits(data.astype(np.uint8), axis=1, bitorder="little")
    pivots: Dict[int, int] = {}
    for row_bytes in packed:
        row = int.from_bytes(row_bytes.tobytes(), "little")
        while row:
            low = row & -row
            pivot = pivots.get(low)
            if pivot is None:
                pivots[low] = row
                break
            row ^= pivot
    return len(pivots)


def rank_generic(field: FieldSpec, data: IntArray) -> int:
    """Rank by fraction-free Gaussian elimination on a copy.

    The pivot is the first nonzero entry of the column scanning top to bottom;
    rows below are replaced by ``pivot * row - entry * pivot_row``.
    """
    work = np.array(data, dtype=np.int64)
    rows, cols = work.shape if work.ndim == 2 else (0, 0)
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nonzero = np.flatnonzero(work[rank:, c])
        if nonzero.size == 0:
            continue
        pivot_row = rank + int(nonzero[0])
        if pivot_row != rank:
            work[[rank, pivot_row]] = work[[pivot_row, rank]]
        below = rank + 1 + np.flatnonzero(work[rank + 1 :, c])
        if below.size:
            pivot = work[rank, c]
            work[below] = field.sub(
                field.mul(pivot, work[below]),
                field.mul(work[below, c][:, None], work[rank][None, :]),
            )
        rank += 1
    return rank


def mat_rank(a: MatrixFq) -> int:
    """Rank of a matrix over its field; the input is not modified."""
    if a.field.q == 2:
        return rank_gf2(a.data)
    return rank_generic(a.field, a.data)


def mat_inverse(a: MatrixFq) -> Optional[MatrixFq]:
    """Inverse by Gauss-Jordan elimination.

    Returns:
        The inverse, or None when the matrix is singular

    Raises:
        MatrixError: If the matrix is not square
    """
    if a.rows != a.cols:
        raise MatrixError("Inverse of a non-square matrix", {"shape": a.shape})
    field, n = a.field, a.rows
    work = np.hstack([a.data, np.eye(n, dtype=np.int64)])
    for c in range(n):
        nonzero = np.flatnonzero(work[c:, c])
        if nonzero.size == 0:
            return None
        pivot_row = c + int(nonzero[0])
        if pivot_row != c:
            work[[c, pivot_row]] = work[[pivot_row, c]]
        work[c] = field.mul(field.inv(work[c, c]), work[c])
        others = np.flatnonzero(work[:, c])
        others = others[others != c]
        if others.size:
            work[others] = field.sub(
                work[others], field.mul(work[others, c][:, None], work[c][None, :])
            )
    return MatrixFq._wrap(field, work[:, n:])


def kron(a: MatrixFq, b: MatrixFq) -> MatrixFq:
    """Kronecker product; block ``(i, j)`` of the result is ``a[i, j] * b``."""
    field = _same_field(a, b)
    product = field.mul(a.data[:, None, :, None], b.data[None, :, None, :])
    return MatrixFq._wrap(
        field, product.reshape(a.rows * b.rows, a.cols * b.cols)
    )


def _check_blocks(m: MatrixFq, d: int, *indices: int, axis: str) -> int:
    if d < 1 or m.rows % d or m.cols % d:
        raise MatrixError(
            "Matrix is not partitioned into d×d blocks", {"shape": m.shape, "d": d}
        )
    count = (m.rows if axis == "row" else m.cols) // d
    for index in indices:
        if not 0 <= index < count:
            raise MatrixError(
                "Block index out of range", {"index": index, "blocks": count}
            )
    return count


def block(m: MatrixFq, i: int, j: int, d: int) -> MatrixFq:
    """The d×d block at zero-based block position ``(i, j)``."""
    _check_blocks(m, d, i, axis="row")
    _check_blocks(m, d, j, axis="col")
    return MatrixFq._wrap(m.field, m.data[i * d : (i + 1) * d, j * d : (j + 1) * d])


def from_blocks(field: FieldSpec, grid: Sequence[Sequence[MatrixFq]]) -> MatrixFq:
    """Assemble a block matrix from a rectangular grid of blocks."""
    return MatrixFq._wrap(
        field, np.block([[cell.data for cell in row] for row in grid])
    )


def row_block_axpy(
    m: MatrixFq, p: MatrixFq, src: int, dst: int, d: int
) -> MatrixFq:
    """Replace block row ``dst`` by ``dst + p @ src``.

    Raises:
        MatrixError: On bad partition, indices or shapes
    """
    _check_blocks(m, d, src, dst, axis="row")
    field = _same_field(m, p)
    if src == dst or p.shape != (d, d):
        raise MatrixError(
            "Invalid block row operation", {"src": src, "dst": dst, "shape": p.shape}
        )
    work = np.array(m.data)
    source = m.data[src * d : (src + 1) * d]
    target = slice(dst * d, (dst + 1) * d)
    work[target] = field.add(work[target], _matmul(field, p.data, source))
    return MatrixFq._wrap(field, work)


def col_block_axpy(
    m: MatrixFq, q: MatrixFq, src: int, dst: int, d: int
) -> MatrixFq:
    """Replace block column ``dst`` by ``dst + src @ q``.

    Raises:
        MatrixError: On bad partition, indices or shapes
    """
    _check_blocks(m, d, src, dst, axis="col")
    field = _same_field(m, q)
    if src == dst or q.shape != (d, d):
        raise MatrixError(
            "Invalid block column operation",
            {"src": src, "dst": dst, "shape": q.shape},
        )
    work = np.array(m.data)
    source = m.data[:, src * d : (src + 1) * d]
    target = slice(dst * d, (dst + 1) * d)
    work[:, target] = field.add(work[:, target], _matmul(field, source, q.data))
    return MatrixFq._wrap(field, work)


def block_permute_cols(m: MatrixFq, permutation: Sequence[int], d: int) -> MatrixFq:
    """Reorder block columns: block column ``j`` of the result is ``permutation[j]``.

    Raises:
        MatrixError: If ``permutation`` is not a permutation of the block indices
    """
    count = _check_blocks(m, d, axis="col")
    if sorted(permutation) != list(range(count)):
        raise MatrixError(
            "Invalid block permutation", {"permutation": list(permutation)}
        )
    order = np.concatenate(
        [np.arange(j * d, (j + 1) * d) for j in permutation]
    ) if count else np.arange(0)
    return MatrixFq._wrap(m.field, m.data[:, order])


__all__ = [
    "MatrixFq",
    "block",
    "block_permute_cols",
    "col_block_axpy",
    "from_blocks",
    "kron",
    "mat_add",
    "mat_inverse",
    "mat_mul",
    "mat_neg",
    "mat_power",
    "mat_rank",
    "mat_scale",
    "mat_sub",
    "rank_generic",
    "rank_gf2",
    "row_block_axpy",
]
