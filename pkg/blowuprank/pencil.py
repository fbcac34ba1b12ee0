"""Linear matrices and their blow-up ranks.

A linear matrix ``L = t_1 X_1 + ... + t_m X_m`` is stored by its ordered
coefficient basis. Substituting r×s matrices for the indeterminates gives
``X_1 ⊗ A_1 + ... + X_m ⊗ A_m``; the blow-up rank at d is the maximum rank of
that matrix over all d×d assignments.

Searches run over assignments to a reduced basis (zero and linearly dependent
coefficients removed), which parametrizes the same subspace of matrices and
therefore has the same rank and blow-up ranks. Three modes are available:

* ``exhaustive``: every assignment.
* ``normalized``: the first basis coefficient only takes the canonical forms
  ``E_r``. This is sound because ``(I ⊗ P) L(A) (I ⊗ Q) = L(P A_1 Q, ...)``
  for invertible P, Q, so every rank is realized with ``A_1`` canonical.
* ``random``: seeded uniform samples; a lower bound only.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from blowuprank.config import SearchConfig
from blowuprank.core import BlowupError, MatrixError, SerializationError
from blowuprank.gf import FieldElement, FieldSpec, IntArray
from blowuprank.logging import get_module_logger
from blowuprank.matfq import MatrixFq, mat_rank, rank_generic, rank_gf2
from blowuprank.search import (
    ExhaustiveSpace,
    NormalizedSpace,
    RandomSpace,
    SearchEngine,
    TupleSpace,
)

logger = get_module_logger(__name__)


class SearchMode(str, Enum):
    """Blow-up search mode."""

    EXHAUSTIVE = "exhaustive"
    NORMALIZED = "normalized"
    RANDOM = "random"

    @property
    def proves_maximum(self) -> bool:
        return self is not SearchMode.RANDOM


@dataclass(frozen=True)
class LinearMatrix:
    """A p×q linear matrix given by its coefficient basis."""

    field: FieldSpec
    rows: int
    cols: int
    coeffs: Tuple[MatrixFq, ...]
    labels: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise MatrixError("A linear matrix needs at least one indeterminate")
        for x in self.coeffs:
            if x.field != self.field or x.shape != (self.rows, self.cols):
                raise MatrixError(
                    "Coefficient does not match the linear matrix",
                    {"shape": x.shape, "expected": (self.rows, self.cols)},
                )
        if not self.labels:
            object.__setattr__(
                self, "labels", tuple(f"t{i + 1}" for i in range(len(self.coeffs)))
            )
        elif len(self.labels) != len(self.coeffs):
            raise MatrixError(
                "One label per indeterminate required",
                {"labels": len(self.labels), "coeffs": len(self.coeffs)},
            )

    @classmethod
    def from_coeffs(
        cls, coeffs: Sequence[MatrixFq], labels: Optional[Sequence[str]] = None
    ) -> "LinearMatrix":
        if not coeffs:
            raise MatrixError("A linear matrix needs at least one indeterminate")
        first = coeffs[0]
        labels_tuple = tuple(labels or ())
        return cls(first.field, first.rows, first.cols, tuple(coeffs), labels_tuple)

    @property
    def m(self) -> int:
        return len(self.coeffs)

    @property
    def size(self) -> int:
        """Smaller side, the rank ceiling of a scalar evaluation."""
        return min(self.rows, self.cols)

    def stack(self) -> IntArray:
        """Coefficients as an ``(m, p, q)`` array."""
        return np.stack([x.data for x in self.coeffs])

    def serialize(self) -> Dict[str, Any]:
        return {
            "field": self.field.serialize(),
            "rows": self.rows,
            "cols": self.cols,
            "labels": list(self.labels),
            "basis": [x.serialize() for x in self.coeffs],
        }

    @classmethod
    def deserialize(cls, data: Dict[str, Any]) -> "LinearMatrix":
        """Rebuild a linear matrix from its space description.

        Raises:
            SerializationError: If the description is malformed, names an
                invalid field or holds entries outside the field
        """
        try:
            field_spec = FieldSpec.deserialize(data["field"])
            basis = [MatrixFq.deserialize(x, field_spec) for x in data["basis"]]
            pencil = cls(
                field_spec,
                int(data["rows"]),
                int(data["cols"]),
                tuple(basis),
                tuple(data.get("labels") or ()),
            )
        except SerializationError:
            raise
        except (KeyError, TypeError, ValueError, BlowupError) as e:
            raise SerializationError(
                "Malformed space file", {"keys": sorted(data)}, e
            ) from e
        return pencil


def pencil_eval_scalars(L: LinearMatrix, values: Sequence[FieldElement]) -> MatrixFq:
    """Evaluate at scalars: ``sum a_i X_i``.

    Raises:
        MatrixError: If the number of values differs from m
    """
    if len(values) != L.m:
        raise MatrixError(
            "Wrong number of scalars", {"expected": L.m, "got": len(values)}
        )
    scalars = np.array([L.field.check(a) for a in values], dtype=np.int64)
    value = _blowup_array(L.field, L.stack(), scalars.reshape(L.m, 1, 1))
    return MatrixFq(L.field, value)


def _blowup_array(field: FieldSpec, coeffs: IntArray, assignment: IntArray) -> IntArray:
    """Blockwise ``sum_l X_l ⊗ A_l``; block (i, j) is ``sum_l X_l[i, j] A_l``."""
    m, p, q = coeffs.shape
    _, r, s = assignment.shape
    if field.is_prime_field:
        blocks = np.einsum("lij,lrs->irjs", coeffs, assignment) % field.p
    else:
        blocks = np.zeros((p, r, q, s), dtype=np.int64)
        for x, a in zip(coeffs, assignment):
            products = field.mul(x[:, None, :, None], a[None, :, None, :])
            blocks = field.add(blocks, products)
    return blocks.reshape(p * r, q * s)


def pencil_eval_matrices(L: LinearMatrix, matrices: Sequence[MatrixFq]) -> MatrixFq:
    """Substitute r×s matrices for the indeterminates.

    Raises:
        MatrixError: On arity, shape or field mismatch
    """
    if len(matrices) != L.m:
        raise MatrixError(
            "Wrong number of matrices", {"expected": L.m, "got": len(matrices)}
        )
    shape = matrices[0].shape
    for a in matrices:
        if a.shape != shape:
            raise MatrixError(
                "Assignment matrices must share a shape", {"shape": a.shape}
            )
        if a.field != L.field:
            raise MatrixError(
                "Field mismatch",
                {"pencil": repr(L.field), "matrix": repr(a.field)},
            )
    assignment = np.stack([a.data for a in matrices])
    return MatrixFq(L.field, _blowup_array(L.field, L.stack(), assignment))


@dataclass(frozen=True)
class SpaceDescription:
    """Reduced basis of the subspace parametrized by a linear matrix.

    The reduced linear matrix has the same rank and the same blow-up ranks as
    the original, since both parametrize the same subspace.
    """

    basis: LinearMatrix
    kept: Tuple[int, ...]
    dropped: Tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.kept)

    def serialize(self) -> Dict[str, Any]:
        data = self.basis.serialize() if self.kept else {"basis": []}
        data["source_dimension"] = len(self.kept) + len(self.dropped)
        data["dropped"] = list(self.dropped)
        return data


def space_from_pencil(L: LinearMatrix) -> SpaceDescription:
    """Drop zero and linearly dependent coefficients, keeping the first of each."""
    kept: List[int] = []
    rows: List[IntArray] = []
    for i, x in enumerate(L.coeffs):
        candidate = rows + [x.data.ravel()]
        if rank_of_rows(L.field, candidate) > len(rows):
            kept.append(i)
            rows = candidate
    dropped = tuple(i for i in range(L.m) if i not in kept)
    if kept:
        basis = LinearMatrix(
            L.field,
            L.rows,
            L.cols,
            tuple(L.coeffs[i] for i in kept),
            tuple(L.labels[i] for i in kept),
        )
    else:
        basis = L
    return SpaceDescription(basis, tuple(kept), dropped)


def rank_of_rows(field_spec: FieldSpec, rows: Sequence[IntArray]) -> int:
    if not rows:
        return 0
    return mat_rank(MatrixFq(field_spec, np.stack(rows)))


@dataclass(frozen=True)
class BlowupObjective:
    """Rank of a linear matrix at one assignment; picklable for workers."""

    field: FieldSpec
    coeffs: IntArray

    def __call__(self, assignment: IntArray) -> int:
        value = _blowup_array(self.field, self.coeffs, assignment)
        if self.field.q == 2:
            return rank_gf2(value)
        return rank_generic(self.field, value)


@dataclass(frozen=True)
class RankCertificate:
    """Result of a blow-up rank search.

    The witness is an assignment to the original indeterminates whose value
    has rank ``achieved_rank``; ``exhaustive_proof`` is set only when the mode
    covers every rank.
    """

    achieved_rank: int
    witness: Tuple[MatrixFq, ...]
    d_blowup: Tuple[int, int]
    mode: SearchMode
    exhaustive_proof: bool
    is_multiple_of_d: bool
    tuples_checked: int
    seed: Optional[int] = None
    elapsed_ms: int = 0

    @property
    def d(self) -> int:
        return self.d_blowup[0]

    def check(self, L: LinearMatrix) -> bool:
        """Re-evaluate the witness and compare ranks."""
        return mat_rank(pencil_eval_matrices(L, self.witness)) == self.achieved_rank

    def serialize(self) -> Dict[str, Any]:
        return {
            "rank": self.achieved_rank,
            "d": self.d,
            "mode": self.mode.value,
            "exhaustive": self.exhaustive_proof,
            "multiple_of_d": self.is_multiple_of_d,
            "witness": [a.serialize() for a in self.witness],
            "tuples_checked": self.tuples_checked,
            "seed": self.seed,
            "elapsed_ms": self.elapsed_ms,
        }


def _space_for(
    mode: SearchMode, field_spec: FieldSpec, m: int, d: int, config: SearchConfig
) -> TupleSpace:
    if mode is SearchMode.EXHAUSTIVE:
        return ExhaustiveSpace(field_spec, m, (d, d))
    if mode is SearchMode.NORMALIZED:
        return NormalizedSpace(field_spec, m, d)
    return RandomSpace(field_spec, m, (d, d), config.budget, config.seed)


def blowup_rank(
    L: LinearMatrix,
    d: int,
    mode: SearchMode | str = SearchMode.EXHAUSTIVE,
    config: Optional[SearchConfig] = None,
) -> RankCertificate:
    """Search the (d, d) blow-up rank of a linear matrix.

    Args:
        L: Linear matrix
        d: Blow-up size
        mode: Search mode
        config: Search budget

    Returns:
        Self-checked rank certificate

    Raises:
        CapExceededError: If an exhaustive or normalized search exceeds the cap
    """
    if d < 1:
        raise MatrixError("Blow-up size must be positive", {"d": d})
    mode = SearchMode(mode)
    config = config or SearchConfig()
    space = space_from_pencil(L)
    zero = MatrixFq.zeros(L.field, d, d)
    if not space.kept:
        return RankCertificate(
            achieved_rank=0,
            witness=tuple(zero for _ in range(L.m)),
            d_blowup=(d, d),
            mode=mode,
            exhaustive_proof=mode.proves_maximum,
            is_multiple_of_d=True,
            tuples_checked=0,
            seed=None if mode.proves_maximum else config.seed,
        )
    reduced = space.basis
    engine = SearchEngine(config)
    outcome = engine.maximize(
        _space_for(mode, L.field, reduced.m, d, config),
        BlowupObjective(L.field, reduced.stack()),
        ceiling=L.size * d,
        what=f"{mode.value} blow-up d={d}",
    )
    assert outcome.witness is not None
    witness = [zero] * L.m
    for slot, a in zip(space.kept, outcome.witness):
        witness[slot] = MatrixFq(L.field, a)
    certificate = RankCertificate(
        achieved_rank=outcome.best,
        witness=tuple(witness),
        d_blowup=(d, d),
        mode=mode,
        exhaustive_proof=mode.proves_maximum,
        is_multiple_of_d=outcome.best % d == 0,
        tuples_checked=outcome.checked,
        seed=None if mode.proves_maximum else config.seed,
        elapsed_ms=outcome.elapsed_ms,
    )
    if not certificate.check(L):
        raise BlowupError(
            "Certificate failed its self-check", {"rank": outcome.best, "d": d}
        )
    logger.info(
        "blowup_rank",
        mode=mode.value,
        d=d,
        rank=certificate.achieved_rank,
        multiple_of_d=certificate.is_multiple_of_d,
    )
    return certificate


def pencil_rank(
    L: LinearMatrix, config: Optional[SearchConfig] = None
) -> RankCertificate:
    """Rank of a linear matrix: maximum rank over all scalar assignments.

    Raises:
        CapExceededError: If q^m exceeds the cap
    """
    return blowup_rank(L, 1, SearchMode.EXHAUSTIVE, config)


def blowup_profile(
    L: LinearMatrix,
    ds: Sequence[int],
    mode: SearchMode | str = SearchMode.EXHAUSTIVE,
    config: Optional[SearchConfig] = None,
) -> List[RankCertificate]:
    """Blow-up certificates for several sizes, one per entry of ``ds``."""
    return [blowup_rank(L, d, mode, config) for d in ds]


__all__ = [
    "BlowupObjective",
    "LinearMatrix",
    "RankCertificate",
    "SearchMode",
    "SpaceDescription",
    "blowup_profile",
    "blowup_rank",
    "pencil_eval_matrices",
    "pencil_eval_scalars",
    "pencil_rank",
    "space_from_pencil",
]
