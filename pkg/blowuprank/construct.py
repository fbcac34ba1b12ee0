"""Counterexample families and their verification.

Both families are padded linearizations ``D_{f,r}`` of a polynomial f that is
singular on every tuple of d×d matrices without vanishing identically. For
such f the (d, d) blow-up rank of ``D_{f,r}`` lies strictly between
``d(ℓ+r-1)`` and ``d(ℓ+r)``, so it is not a multiple of d.
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from blowuprank.config import SearchConfig
from blowuprank.core import ConstructionError
from blowuprank.gf import FieldSpec, fe_neg, field_make
from blowuprank.higman import build_frobenius_pencil, higman_linearize, pad_pencil
from blowuprank.logging import get_module_logger
from blowuprank.matfq import MatrixFq
from blowuprank.ncpoly import (
    CensusReport,
    NcPoly,
    WitnessResult,
    ev_nonzero_witness,
    singular_census,
)
from blowuprank.pencil import LinearMatrix, RankCertificate, SearchMode, blowup_rank

logger = get_module_logger(__name__)

CONFIRMED = "counterexample_confirmed"
NOT_A_COUNTEREXAMPLE = "not_a_counterexample"
UNDECIDED = "undecided"

Instance = Union[str, Dict[str, Any]]


@dataclass(frozen=True)
class Theorem2Hypotheses:
    """The two admissibility conditions on (q, d, n).

    ``stated`` is ``q <= log_d(n - 1)``; ``construction`` is ``n >= q^d + 1``,
    the condition the padded construction needs.
    """

    q: int
    d: int
    n: int
    stated: bool
    construction: bool

    def serialize(self) -> Dict[str, Any]:
        return {
            "stated": {"condition": "q <= log_d(n - 1)", "holds": self.stated},
            "construction": {"condition": "n >= q^d + 1", "holds": self.construction},
        }


def theorem2_hypotheses(q: int, d: int, n: int) -> Theorem2Hypotheses:
    # q <= log_d(n - 1) in integer form
    stated = d >= 2 and n >= 2 and d**q <= n - 1
    return Theorem2Hypotheses(q, d, n, stated, n >= q**d + 1)


def construct_theorem2(F: FieldSpec, d: int, n: int) -> LinearMatrix:
    """The n×n pencil ``D(t0, t1)``: Frobenius pencil of size q^d plus a t0 tail.

    Raises:
        ConstructionError: If d < 2 or n < q^d + 1
    """
    if d < 2:
        raise ConstructionError("d must be ≥ 2", {"d": d})
    s = F.q**d
    if n < s + 1:
        raise ConstructionError(
            f"n must be ≥ q^d + 1 = {s + 1} so that r = n - q^d ≥ 1",
            {"q": F.q, "d": d, "n": n},
        )
    pencil = pad_pencil(build_frobenius_pencil(F, s), n - s)
    logger.info("construct_theorem2", q=F.q, d=d, n=n, tail=n - s)
    return pencil


_REMARK_PATTERN = (
    "0 d a 0 d a 0",
    "D 0 b D 0 b 0",
    "a b 0 a b 0 0",
    "0 d a 0 0 0 0",
    "D 0 b 0 0 0 0",
    "a b 0 0 0 d 0",
    "0 0 0 0 0 0 d",
)


def construct_remark_f2() -> LinearMatrix:
    """The 7×7 pencil over GF(2) in (a, b, c, d).

    ``c`` is listed among the parameters but never occurs, so its coefficient
    is the zero matrix. ``D`` marks ``-d``, which equals d over GF(2).
    """
    F = field_make(2)
    labels = ("a", "b", "c", "d")
    coeffs = np.zeros((4, 7, 7), dtype=np.int64)
    for i, row in enumerate(_REMARK_PATTERN):
        for j, symbol in enumerate(row.split()):
            if symbol != "0":
                coeffs[labels.index(symbol.lower()), i, j] = (
                    fe_neg(F, 1) if symbol.isupper() else 1
                )
    return LinearMatrix(F, 7, 7, tuple(MatrixFq(F, x) for x in coeffs), labels)


def construct_skew3(F: FieldSpec) -> LinearMatrix:
    """The 3×3 skew-symmetric pencil ``[[0, t1, t2], [-t1, 0, t3], [-t2, -t3, 0]]``."""
    minus_one = fe_neg(F, 1)
    coeffs = np.zeros((3, 3, 3), dtype=np.int64)
    for var, (i, j) in enumerate([(0, 1), (0, 2), (1, 2)]):
        coeffs[var, i, j] = 1
        coeffs[var, j, i] = minus_one
    labels = ("t1", "t2", "t3")
    return LinearMatrix(F, 3, 3, tuple(MatrixFq(F, x) for x in coeffs), labels)


def construct_from_polynomial(f: NcPoly, r: int) -> LinearMatrix:
    """``D_{f,r}`` for any nonconstant f."""
    return pad_pencil(higman_linearize(f), r)


# Verification ---------------------------------------------------------


def recognize_padding(L: LinearMatrix) -> Optional[Tuple[int, int, int]]:
    """Find a diagonal tail block of one indeterminate.

    Returns ``(indeterminate, ℓ, r)`` for the largest r such that the last r
    rows and columns vanish in every coefficient except one, which is the
    identity there; None when L has no such tail.
    """
    if L.rows != L.cols or L.rows < 2:
        return None
    stack = L.stack()
    n = L.rows
    for r in range(n - 1, 0, -1):
        ell = n - r
        for z in range(L.m):
            tail = stack[:, ell:, ell:]
            others = np.delete(tail, z, axis=0)
            if not np.array_equal(tail[z], np.eye(r, dtype=np.int64)) or others.any():
                continue
            if stack[:, ell:, :ell].any() or stack[:, :ell, ell:].any():
                continue
            if not np.delete(stack[:, :ell, :ell], z, axis=0).any():
                continue
            return z, ell, r
    return None


@dataclass(frozen=True)
class CounterexampleReport:
    """Verdict on whether a pencil's blow-up rank breaks regularity."""

    instance: Instance
    certificate: RankCertificate
    verdict: str
    structure: Optional[Tuple[int, int]] = None
    bounds: Optional[Tuple[int, int]] = None
    bounds_consistent: Optional[bool] = None
    hypotheses: Optional[Theorem2Hypotheses] = None

    def serialize(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "instance": self.instance,
            "certificate": self.certificate.serialize(),
            "verdict": self.verdict,
            "proposition_bounds": None if self.bounds is None else list(self.bounds),
            "bounds_consistent": self.bounds_consistent,
        }
        if self.structure is not None:
            block_size, tail = self.structure
            data["structure"] = {"block_size": block_size, "tail": tail}
        if self.hypotheses is not None:
            data["hypotheses"] = self.hypotheses.serialize()
        return data


def verify_counterexample(
    L: LinearMatrix,
    d: int,
    mode: Union[SearchMode, str] = SearchMode.EXHAUSTIVE,
    config: Optional[SearchConfig] = None,
    instance: Optional[Instance] = None,
) -> CounterexampleReport:
    """Search the (d, d) blow-up rank and decide the verdict.

    The verdict is confirmed only for an exhaustive proof of a rank that is
    not a multiple of d. Random searches never decide either way.

    Raises:
        CapExceededError: If the search is infeasible under the cap
    """
    certificate = blowup_rank(L, d, mode, config)
    if certificate.exhaustive_proof:
        verdict = NOT_A_COUNTEREXAMPLE if certificate.is_multiple_of_d else CONFIRMED
    else:
        verdict = UNDECIDED
    structure = recognize_padding(L)
    bounds = None
    consistent = None
    if structure is not None:
        _, ell, r = structure
        bounds = (d * (ell + r - 1), d * (ell + r))
        consistent = bounds[0] < certificate.achieved_rank < bounds[1]
    defaulted = instance is None
    if instance is None:
        instance = {"q": L.field.q, "d": d, "n": L.rows}
    hypotheses = None
    if isinstance(instance, dict) and {"q", "d", "n"} <= instance.keys():
        hypotheses = theorem2_hypotheses(instance["q"], instance["d"], instance["n"])
        logger.info(
            "hypotheses_checked",
            q=hypotheses.q,
            d=hypotheses.d,
            n=hypotheses.n,
            instance_defaulted=defaulted,
            stated=hypotheses.stated,
            construction=hypotheses.construction,
        )
    logger.info(
        "verify_counterexample",
        rank=certificate.achieved_rank,
        d=d,
        verdict=verdict,
        bounds=bounds,
    )
    return CounterexampleReport(
        instance=instance,
        certificate=certificate,
        verdict=verdict,
        structure=None if structure is None else structure[1:],
        bounds=bounds,
        bounds_consistent=consistent,
        hypotheses=hypotheses,
    )


@dataclass(frozen=True)
class HypothesisReport:
    """Whether f can seed a counterexample at size d."""

    poly: NcPoly
    d: int
    census: CensusReport
    witness: WitnessResult

    @property
    def holds(self) -> bool:
        return self.census.all_singular and self.witness.status == "found"

    def serialize(self) -> Dict[str, Any]:
        return {
            "field": self.poly.field.serialize(),
            "poly": self.poly.to_text(),
            "d": self.d,
            "holds": self.holds,
            "census": self.census.serialize(),
            "nonzero_witness": self.witness.serialize(),
        }


def check_hypothesis(
    f: NcPoly, d: int, config: Optional[SearchConfig] = None
) -> HypothesisReport:
    """Every value of f singular, yet f nonzero on d×d matrices.

    Raises:
        CapExceededError: If the census exceeds the cap
    """
    census = singular_census(f, d, config)
    witness = ev_nonzero_witness(f, d, config)
    return HypothesisReport(f, d, census, witness)


__all__ = [
    "CONFIRMED",
    "NOT_A_COUNTEREXAMPLE",
    "UNDECIDED",
    "CounterexampleReport",
    "HypothesisReport",
    "Theorem2Hypotheses",
    "check_hypothesis",
    "construct_from_polynomial",
    "construct_remark_f2",
    "construct_skew3",
    "construct_theorem2",
    "recognize_padding",
    "theorem2_hypotheses",
    "verify_counterexample",
]
