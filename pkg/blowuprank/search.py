"""Deterministic parallel search over tuples of matrices.

A search maximizes an integer objective over an indexed tuple space. The
index range is cut into contiguous chunks that workers scan independently;
each chunk keeps a private best and the merge takes the maximum score and then
the least index. A chunk stops early once the a-priori ceiling is reached.
The outcome does not depend on the number of chunks or workers.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from blowuprank.config import SearchConfig
from blowuprank.core import CapExceededError
from blowuprank.gf import FieldSpec, IntArray
from blowuprank.logging import LoggerMixin
from blowuprank.timing import Timer

Objective = Callable[[IntArray], int]

CHUNKS_PER_WORKER = 4


class TupleSpace(ABC):
    """Indexed family of tuples of ``count`` matrices of one shape.

    ``decode`` returns an array of shape ``(count, rows, cols)``.
    """

    exhaustive: bool = True

    def __init__(self, field: FieldSpec, count: int, shape: Tuple[int, int]) -> None:
        self.field = field
        self.count = count
        self.shape = shape

    @property
    @abstractmethod
    def size(self) -> int:
        """Number of indices."""

    @abstractmethod
    def decode(self, index: int) -> IntArray:
        """Tuple at ``index``."""

    def _digits(self, index: int, length: int) -> IntArray:
        q = self.field.q
        out = np.zeros(length, dtype=np.int64)
        for pos in range(length):
            if not index:
                break
            index, out[pos] = divmod(index, q)
        return out


class ExhaustiveSpace(TupleSpace):
    """Every tuple; index digits base q, least significant entry first.

    Entry order is the concatenation of the row-major entries of the matrices.
    """

    @property
    def size(self) -> int:
        rows, cols = self.shape
        return int(self.field.q ** (self.count * rows * cols))

    def decode(self, index: int) -> IntArray:
        rows, cols = self.shape
        return self._digits(index, self.count * rows * cols).reshape(
            self.count, rows, cols
        )


class NormalizedSpace(TupleSpace):
    """Tuples whose first matrix is a canonical form ``E_r``.

    Index ``i`` splits as ``r = i % (d + 1)`` and ``j = i // (d + 1)``; ``j``
    enumerates the remaining matrices as in ``ExhaustiveSpace``.
    """

    def __init__(self, field: FieldSpec, count: int, d: int) -> None:
        super().__init__(field, count, (d, d))
        self.d = d

    @property
    def size(self) -> int:
        d = self.d
        return (d + 1) * int(self.field.q ** ((self.count - 1) * d * d))

    def decode(self, index: int) -> IntArray:
        d = self.d
        r, rest = index % (d + 1), index // (d + 1)
        out = np.zeros((self.count, d, d), dtype=np.int64)
        out[0, np.arange(r), np.arange(r)] = 1
        if self.count > 1:
            out[1:] = self._digits(rest, (self.count - 1) * d * d).reshape(
                self.count - 1, d, d
            )
        return out


class RandomSpace(TupleSpace):
    """Seeded uniform samples.

    Sample ``j`` comes from a Philox counter-based generator keyed by the
    seed and ``j``, so every sample is reproducible on its own.
    """

    exhaustive = False

    def __init__(
        self,
        field: FieldSpec,
        count: int,
        shape: Tuple[int, int],
        budget: int,
        seed: int,
    ) -> None:
        super().__init__(field, count, shape)
        self.budget = budget
        self.seed = seed

    @property
    def size(self) -> int:
        return self.budget

    def decode(self, index: int) -> IntArray:
        rows, cols = self.shape
        rng = np.random.Generator(np.random.Philox(key=(index << 64) | self.seed))
        sample: IntArray = rng.integers(
            0, self.field.q, size=(self.count, rows, cols), dtype=np.int64
        )
        return sample


@dataclass(frozen=True)
class ChunkResult:
    best: int
    index: int
    checked: int


@dataclass(frozen=True)
class SearchOutcome:
    """Merged result of a search.

    ``index`` is -1 only for an empty space. ``checked`` counts the tuples a
    sequential scan would have visited.
    """

    best: int
    index: int
    witness: Optional[IntArray]
    checked: int
    exhaustive: bool
    chunks: int
    elapsed_ms: int


def scan_chunk(
    space: TupleSpace,
    objective: Objective,
    lo: int,
    hi: int,
    ceiling: Optional[int],
) -> ChunkResult:
    """Scan ``[lo, hi)`` keeping the first index of the best score."""
    best, best_index = -1, -1
    checked = 0
    for index in range(lo, hi):
        score = objective(space.decode(index))
        checked += 1
        if score > best:
            best, best_index = score, index
            if ceiling is not None and score >= ceiling:
                break
    return ChunkResult(best, best_index, checked)


def split_range(size: int, chunks: int) -> List[Tuple[int, int]]:
    """Contiguous near-equal ranges covering ``[0, size)``."""
    chunks = max(1, min(chunks, size))
    step, extra = divmod(size, chunks)
    bounds = []
    lo = 0
    for c in range(chunks):
        hi = lo + step + (1 if c < extra else 0)
        bounds.append((lo, hi))
        lo = hi
    return bounds


def merge_chunks(results: Sequence[ChunkResult]) -> ChunkResult:
    """Maximum score first, then the least index."""
    best = max((r.best for r in results), default=-1)
    index = min((r.index for r in results if r.best == best), default=-1)
    return ChunkResult(best, index, sum(r.checked for r in results))


class SearchEngine(LoggerMixin):
    """Runs searches under a ``SearchConfig``."""

    def __init__(self, config: Optional[SearchConfig] = None) -> None:
        self.config = config or SearchConfig()

    def check_cap(self, space: TupleSpace, what: str) -> None:
        """Refuse exhaustive spaces larger than the cap.

        Raises:
            CapExceededError: If the space exceeds the configured cap
        """
        if space.exhaustive and space.size > self.config.cap:
            raise CapExceededError(
                f"{what} needs {space.size} tuples, above the cap of "
                f"{self.config.cap}",
                space.size,
                self.config.cap,
                {"search": what},
            )

    def maximize(
        self,
        space: TupleSpace,
        objective: Objective,
        ceiling: Optional[int] = None,
        what: str = "search",
    ) -> SearchOutcome:
        """Maximize ``objective`` over ``space``.

        Args:
            space: Tuple space to scan
            objective: Picklable callable scoring one tuple
            ceiling: Score at which scanning may stop early
            what: Label used in logs and errors

        Returns:
            Merged search outcome

        Raises:
            CapExceededError: If an exhaustive space exceeds the cap
        """
        self.check_cap(space, what)
        threads = self.config.threads
        chunks = threads * CHUNKS_PER_WORKER if threads > 1 else 1
        ranges = split_range(space.size, chunks)
        self.info(
            "search_started",
            search=what,
            space=type(space).__name__,
            tuples=space.size,
            chunks=len(ranges),
            threads=threads,
        )
        with Timer(what, self.logger) as timer:
            if space.size == 0:
                results: List[ChunkResult] = []
            else:
                results = Parallel(n_jobs=threads)(
                    delayed(scan_chunk)(space, objective, lo, hi, ceiling)
                    for lo, hi in ranges
                )
            merged = merge_chunks(results)
        if ceiling is not None and merged.best >= ceiling:
            checked = merged.index + 1
        else:
            checked = space.size
        witness = space.decode(merged.index) if merged.index >= 0 else None
        self.info(
            "search_finished",
            search=what,
            best=merged.best,
            index=merged.index,
            checked=checked,
            elapsed_ms=timer.elapsed_ms,
        )
        return SearchOutcome(
            best=merged.best,
            index=merged.index,
            witness=witness,
            checked=checked,
            exhaustive=space.exhaustive,
            chunks=len(ranges),
            elapsed_ms=timer.elapsed_ms,
        )


__all__ = [
    "ChunkResult",
    "ExhaustiveSpace",
    "NormalizedSpace",
    "Objective",
    "RandomSpace",
    "SearchEngine",
    "SearchOutcome",
    "TupleSpace",
    "merge_chunks",
    "scan_chunk",
    "split_range",
]
