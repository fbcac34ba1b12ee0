"""Higman linearizations of noncommutative polynomials.

A linearization of f is a square linear matrix ``L_f(t_0, t_1, ..., t_m)``
of size ℓ such that for every d and every tuple A of d×d matrices::

    rk L_f(I_d, A_1, ..., A_m) = d(ℓ - 1) + rk f(A_1, ..., A_m)

The indeterminate ``t_0`` is always index 0. Padding ``L_f`` with an r×r
diagonal of ``t_0`` gives the pencil ``D_{f,r}`` used by the counterexample
constructions.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from blowuprank.config import SearchConfig
from blowuprank.core import HigmanError, MatrixError
from blowuprank.gf import FieldElement, FieldSpec, IntArray, fe_neg
from blowuprank.logging import get_module_logger
from blowuprank.matfq import (
    MatrixFq,
    block,
    block_permute_cols,
    col_block_axpy,
    mat_power,
    mat_rank,
    mat_scale,
    row_block_axpy,
)
from blowuprank.ncpoly import NcPoly, ncpoly_eval
from blowuprank.pencil import BlowupObjective, LinearMatrix
from blowuprank.search import ExhaustiveSpace, SearchEngine

logger = get_module_logger(__name__)

HOMOGENIZING_LABEL = "t0"


def _labels(m: int) -> Tuple[str, ...]:
    return tuple(f"t{i}" for i in range(m + 1))


def build_frobenius_pencil(F: FieldSpec, s: int) -> LinearMatrix:
    """The s×s pencil linearizing ``T1^s - T1``.

    ``t0`` fills the superdiagonal, ``t1`` the diagonal with signs
    ``(+, -, ..., -)``, and the corner ``(s, 1)`` holds ``-t1``.

    Raises:
        HigmanError: If s < 2
    """
    if s < 2:
        raise HigmanError("Frobenius pencil needs s >= 2", {"s": s})
    minus_one = fe_neg(F, 1)
    x0 = np.eye(s, k=1, dtype=np.int64)
    x1 = np.zeros((s, s), dtype=np.int64)
    x1[0, 0] = 1
    x1[np.arange(1, s), np.arange(1, s)] = minus_one
    x1[s - 1, 0] = minus_one
    return LinearMatrix(F, s, s, (MatrixFq(F, x0), MatrixFq(F, x1)), _labels(1))


def frobenius_polynomial(F: FieldSpec, s: int) -> NcPoly:
    """``T1^s - T1``, the polynomial the Frobenius pencil linearizes."""
    t1 = NcPoly.variable(F, 1, 1)
    return t1**s - t1


def linearization_size(f: NcPoly) -> int:
    """ℓ = 1 + sum over terms of ``max(len(word) - 1, 0)``."""
    return 1 + sum(max(len(w) - 1, 0) for _, w in f.terms)


def higman_linearize(f: NcPoly) -> LinearMatrix:
    """Linearize a nonconstant polynomial.

    Every word ``y_1 ... y_k`` with k >= 2 and coefficient α gets a chain of
    k - 1 auxiliary rows: ``t0`` on the diagonal, ``-y_{j+1}`` on the
    superdiagonal, ``-α y_1`` in the output row and ``y_k`` in the output
    column. Linear and constant terms go to the output entry (constants as
    multiples of ``t0``). The output row and column come last.

    Raises:
        HigmanError: If f is constant
    """
    if f.is_constant():
        raise HigmanError(
            "Cannot linearize a constant polynomial", {"poly": f.to_text()}
        )
    F = f.field
    size = linearization_size(f)
    out = size - 1
    minus_one = fe_neg(F, 1)
    coeffs = np.zeros((f.num_vars + 1, size, size), dtype=np.int64)
    coeffs[0, np.arange(out), np.arange(out)] = 1
    start = 0
    for c, w in f.terms:
        if len(w) == 0:
            coeffs[0, out, out] = c
        elif len(w) == 1:
            coeffs[w[0], out, out] = c
        else:
            chain = len(w) - 1
            for j in range(chain - 1):
                coeffs[w[j + 1], start + j, start + j + 1] = minus_one
            coeffs[w[0], out, start] = fe_neg(F, c)
            coeffs[w[-1], start + chain - 1, out] = 1
            start += chain
    logger.debug("higman_linearize", poly=f.to_text(), size=size)
    return LinearMatrix(
        F, size, size, tuple(MatrixFq(F, x) for x in coeffs), _labels(f.num_vars)
    )


def pad_pencil(L_f: LinearMatrix, r: int) -> LinearMatrix:
    """Block-diagonal ``D_{f,r}``: L_f, then r diagonal copies of ``t0``.

    Raises:
        HigmanError: If r < 1, L_f is not square or lacks ``t0`` at index 0
    """
    if r < 1:
        raise HigmanError("Padding size must be at least 1", {"r": r})
    if L_f.rows != L_f.cols:
        raise HigmanError(
            "Only square pencils can be padded", {"shape": (L_f.rows, L_f.cols)}
        )
    if L_f.labels[0] != HOMOGENIZING_LABEL:
        raise HigmanError(
            "Padding needs the homogenizing indeterminate t0 first",
            {"labels": list(L_f.labels)},
        )
    size = L_f.rows + r
    coeffs = np.zeros((L_f.m, size, size), dtype=np.int64)
    coeffs[:, : L_f.rows, : L_f.cols] = L_f.stack()
    coeffs[0, np.arange(L_f.rows, size), np.arange(L_f.rows, size)] = 1
    F = L_f.field
    coeff_matrices = tuple(MatrixFq(F, x) for x in coeffs)
    return LinearMatrix(F, size, size, coeff_matrices, L_f.labels)


# Block reduction ------------------------------------------------------


@dataclass(frozen=True)
class BlockOp:
    """One block operation of a reduction transcript.

    Axpy factors are ``coefficient * A^power`` where A is the first block of
    the reduced matrix; ``permute`` reorders block columns.
    """

    op: str
    src: int = 0
    dst: int = 0
    power: int = 0
    coefficient: FieldElement = 1
    permutation: Tuple[int, ...] = ()

    def serialize(self) -> Dict[str, Any]:
        if self.op == "permute":
            return {"op": self.op, "permutation": list(self.permutation)}
        return {
            "op": self.op,
            "src": self.src,
            "dst": self.dst,
            "power": self.power,
            "coefficient": self.coefficient,
        }

    @classmethod
    def deserialize(cls, data: Dict[str, Any]) -> "BlockOp":
        op = data.get("op")
        if op == "permute":
            return cls(op, permutation=tuple(int(j) for j in data["permutation"]))
        if op in ("row_axpy", "col_axpy"):
            return cls(
                op,
                src=int(data["src"]),
                dst=int(data["dst"]),
                power=int(data["power"]),
                coefficient=int(data.get("coefficient", 1)),
            )
        raise HigmanError("Unknown transcript operation", {"op": op})


def apply_block_op(m: MatrixFq, step: BlockOp, a: MatrixFq) -> MatrixFq:
    """Apply one transcript step to m with factor base a."""
    d = a.rows
    if step.op == "permute":
        return block_permute_cols(m, step.permutation, d)
    factor = mat_scale(step.coefficient, mat_power(a, step.power))
    if step.op == "row_axpy":
        return row_block_axpy(m, factor, step.src, step.dst, d)
    if step.op == "col_axpy":
        return col_block_axpy(m, factor, step.src, step.dst, d)
    raise HigmanError("Unknown transcript operation", {"op": step.op})


def _check_frobenius_shape(m: MatrixFq, d: int, ell: int) -> MatrixFq:
    if d < 1 or ell < 2 or m.shape != (d * ell, d * ell):
        raise HigmanError(
            "Matrix is not an ℓ×ℓ block matrix",
            {"shape": m.shape, "d": d, "ell": ell},
        )
    identity = MatrixFq.identity(m.field, d)
    a = block(m, 0, 0, d)
    expected_row = [a, identity] + [MatrixFq.zeros(m.field, d, d)] * (ell - 2)
    for j, want in enumerate(expected_row):
        if block(m, 0, j, d) != want:
            raise HigmanError("First block row is not [A, I, 0, ...]", {"block": j})
    for i in range(1, ell - 1):
        if block(m, i, i + 1, d) != identity:
            raise HigmanError("Superdiagonal block is not the identity", {"block": i})
    return a


def higman_reduce(m: MatrixFq, d: int, ell: int) -> Tuple[MatrixFq, List[BlockOp]]:
    """Reduce ``L(I, A)`` of a Frobenius pencil to ``diag(I, ..., I, A^ℓ - A)``.

    For k = 1, ..., ℓ - 1 the k-th block row, left-multiplied by A, is added
    to row k + 1, then block column k + 1 times ``-A^k`` is added to column 1.
    A final block column rotation moves column 1 last.

    Args:
        m: Evaluated pencil, block size d
        d: Block size
        ell: Number of block rows

    Returns:
        Canonical matrix and the transcript of applied operations

    Raises:
        HigmanError: If m lacks the Frobenius block structure
    """
    a = _check_frobenius_shape(m, d, ell)
    minus_one = fe_neg(m.field, 1)
    transcript: List[BlockOp] = []
    for k in range(1, ell):
        transcript.append(BlockOp("row_axpy", src=k - 1, dst=k, power=1))
        transcript.append(
            BlockOp("col_axpy", src=k, dst=0, power=k, coefficient=minus_one)
        )
    transcript.append(BlockOp("permute", permutation=tuple(range(1, ell)) + (0,)))
    result = m
    for step in transcript:
        result = apply_block_op(result, step, a)
    return result, transcript


Transcript = Sequence[Union[BlockOp, Dict[str, Any]]]


def replay_transcript(m: MatrixFq, transcript: Transcript, a: MatrixFq) -> MatrixFq:
    """Replay a (possibly serialized) transcript against m.

    Raises:
        HigmanError: On unknown operations
        MatrixError: On invalid block indices
    """
    result = m
    for step in transcript:
        op = step if isinstance(step, BlockOp) else BlockOp.deserialize(step)
        result = apply_block_op(result, op, a)
    return result


# Contract verification ------------------------------------------------


@dataclass(frozen=True)
class _ContractObjective:
    """1 where the rank identity fails, 0 where it holds."""

    pencil: BlowupObjective
    poly: NcPoly
    offset: int

    def __call__(self, stack: IntArray) -> int:
        d = stack.shape[1]
        field = self.poly.field
        identity = np.eye(d, dtype=np.int64)[None]
        left = self.pencil(np.concatenate([identity, stack]))
        value = ncpoly_eval(self.poly, [MatrixFq(field, a) for a in stack])
        return int(left != self.offset + mat_rank(value))


@dataclass(frozen=True)
class HigmanReport:
    """Exhaustive check of the linearization rank identity at one d."""

    poly: NcPoly
    size: int
    d: int
    holds: bool
    violation: Optional[List[MatrixFq]]
    tuples_checked: int
    elapsed_ms: int = 0

    def serialize(self) -> Dict[str, Any]:
        return {
            "field": self.poly.field.serialize(),
            "poly": self.poly.to_text(),
            "size": self.size,
            "d": self.d,
            "holds": self.holds,
            "violation": None
            if self.violation is None
            else [a.serialize() for a in self.violation],
            "tuples_checked": self.tuples_checked,
            "elapsed_ms": self.elapsed_ms,
        }


def verify_higman(
    L_f: LinearMatrix, f: NcPoly, d: int, config: Optional[SearchConfig] = None
) -> HigmanReport:
    """Check ``rk L_f(I, A) = d(ℓ-1) + rk f(A)`` for every d×d tuple A.

    Raises:
        HigmanError: If L_f and f do not fit together
        CapExceededError: If q^(m d²) exceeds the cap
    """
    if L_f.rows != L_f.cols or L_f.m != f.num_vars + 1:
        raise HigmanError(
            "Linear matrix does not match the polynomial",
            {
                "shape": (L_f.rows, L_f.cols),
                "indeterminates": L_f.m,
                "vars": f.num_vars,
            },
        )
    if L_f.field != f.field:
        raise MatrixError(
            "Field mismatch", {"pencil": repr(L_f.field), "poly": repr(f.field)}
        )
    if d < 1:
        raise HigmanError("Matrix size must be positive", {"d": d})
    ell = L_f.rows
    objective = _ContractObjective(
        BlowupObjective(L_f.field, L_f.stack()), f, d * (ell - 1)
    )
    engine = SearchEngine(config or SearchConfig())
    outcome = engine.maximize(
        ExhaustiveSpace(f.field, f.num_vars, (d, d)),
        objective,
        ceiling=1,
        what=f"higman contract d={d}",
    )
    holds = outcome.best < 1
    violation = None
    if not holds and outcome.witness is not None:
        violation = [MatrixFq(f.field, a) for a in outcome.witness]
        logger.info("higman_violation", poly=f.to_text(), d=d, index=outcome.index)
    return HigmanReport(
        poly=f,
        size=ell,
        d=d,
        holds=holds,
        violation=violation,
        tuples_checked=outcome.checked,
        elapsed_ms=outcome.elapsed_ms,
    )


__all__ = [
    "BlockOp",
    "HigmanReport",
    "apply_block_op",
    "build_frobenius_pencil",
    "frobenius_polynomial",
    "higman_linearize",
    "higman_reduce",
    "linearization_size",
    "pad_pencil",
    "replay_transcript",
    "verify_higman",
]
