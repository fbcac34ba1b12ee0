"""Noncommutative polynomials in the free algebra over GF(q).

Polynomials are written in a small input language::

    T1^4 - T1
    [T1,T2]^2 + [T1,T2]
    2 T1 T2 - (T2 + 1) * T1

Variables are ``T1`` to ``T9``; juxtaposition and ``*`` both denote the
noncommutative product, ``^n`` a positive power and ``[f,g]`` the commutator
``f g - g f``. Expansion is literal: words are never reordered.

Evaluation substitutes d×d matrices for the variables (constants act as
scalar multiples of the identity). The census and witness searches decide the
two hypotheses used to seed counterexamples: every value of f is singular,
and f is not identically zero on d×d matrices.
"""

import re
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from blowuprank.config import SearchConfig
from blowuprank.core import MatrixError, ParseError
from blowuprank.gf import FieldElement, FieldSpec, IntArray, fe_add, fe_mul, fe_neg
from blowuprank.logging import get_module_logger
from blowuprank.matfq import MatrixFq, mat_add, mat_mul, mat_rank, mat_scale
from blowuprank.search import ExhaustiveSpace, RandomSpace, SearchEngine

logger = get_module_logger(__name__)

Word = Tuple[int, ...]
Term = Tuple[FieldElement, Word]

MAX_VARIABLE = 9


def _term_order(item: Tuple[Word, FieldElement]) -> Tuple[int, Word]:
    return (-len(item[0]), item[0])


@dataclass(frozen=True)
class NcPoly:
    """Normalized noncommutative polynomial.

    Words are tuples of one-based variable indices; the empty word is the
    constant term. Terms have distinct words and nonzero coefficients and are
    sorted by decreasing length, then lexicographically.
    """

    field: FieldSpec
    num_vars: int
    terms: Tuple[Term, ...] = ()

    @classmethod
    def from_mapping(
        cls, field: FieldSpec, num_vars: int, mapping: Mapping[Word, FieldElement]
    ) -> "NcPoly":
        items = sorted(
            ((w, c) for w, c in mapping.items() if c), key=_term_order
        )
        return cls(field, num_vars, tuple((c, w) for w, c in items))

    @classmethod
    def constant(
        cls, field: FieldSpec, value: FieldElement, num_vars: int = 1
    ) -> "NcPoly":
        return cls.from_mapping(field, num_vars, {(): field.check(value)})

    @classmethod
    def variable(
        cls, field: FieldSpec, index: int, num_vars: Optional[int] = None
    ) -> "NcPoly":
        return cls.from_mapping(field, num_vars or index, {(index,): 1})

    def as_dict(self) -> Dict[Word, FieldElement]:
        return {w: c for c, w in self.terms}

    @property
    def degree(self) -> int:
        return max((len(w) for _, w in self.terms), default=0)

    def is_constant(self) -> bool:
        return self.degree == 0

    def is_zero(self) -> bool:
        return not self.terms

    def _combine(self, other: "NcPoly", sign: int) -> "NcPoly":
        F = self.field
        acc = self.as_dict()
        for c, w in other.terms:
            c = c if sign > 0 else fe_neg(F, c)
            acc[w] = fe_add(F, acc.get(w, 0), c)
        return NcPoly.from_mapping(F, max(self.num_vars, other.num_vars), acc)

    def __add__(self, other: "NcPoly") -> "NcPoly":
        return self._combine(other, 1)

    def __sub__(self, other: "NcPoly") -> "NcPoly":
        return self._combine(other, -1)

    def __neg__(self) -> "NcPoly":
        return NcPoly.from_mapping(
            self.field, self.num_vars, {w: fe_neg(self.field, c) for c, w in self.terms}
        )

    def __mul__(self, other: "NcPoly") -> "NcPoly":
        F = self.field
        acc: Dict[Word, FieldElement] = {}
        for c1, w1 in self.terms:
            for c2, w2 in other.terms:
                w = w1 + w2
                acc[w] = fe_add(F, acc.get(w, 0), fe_mul(F, c1, c2))
        return NcPoly.from_mapping(F, max(self.num_vars, other.num_vars), acc)

    def __pow__(self, exponent: int) -> "NcPoly":
        result = NcPoly.constant(self.field, 1, self.num_vars)
        for _ in range(exponent):
            result = result * self
        return result

    def scale(self, c: FieldElement) -> "NcPoly":
        return NcPoly.from_mapping(
            self.field,
            self.num_vars,
            {w: fe_mul(self.field, c, v) for v, w in self.terms},
        )

    def to_text(self) -> str:
        """Render in the input language; reparsing yields the same terms.

        Raises:
            ParseError: If a coefficient lies outside the prime subfield
        """
        if not self.terms:
            return "0"
        parts = []
        for c, w in self.terms:
            if c >= self.field.p:
                raise ParseError("Coefficient has no integer spelling", 0, {"coeff": c})
            factors = []
            for var, run in _runs(w):
                factors.append(f"T{var}" if run == 1 else f"T{var}^{run}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append(" ".join(factors))
            else:
                parts.append(f"{c} " + " ".join(factors))
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.to_text()

    def serialize(self) -> Dict[str, Any]:
        return {
            "field": self.field.serialize(),
            "num_vars": self.num_vars,
            "terms": [{"coeff": c, "word": list(w)} for c, w in self.terms],
        }


def _runs(word: Word) -> Iterator[Tuple[int, int]]:
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        yield word[i], j - i
        i = j


# Parsing --------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>T\d+)|(?P<op>[-+*^()\[\],]))")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> List[Token]:
    """Split polynomial text into tokens.

    Raises:
        ParseError: On an unexpected character
    """
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].isspace():
            break
        match = _TOKEN.match(text, pos)
        if match is None or match.lastgroup is None:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"Unexpected character {text[bad]!r}", bad)
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


_ATOM_START = ("num", "var")
_PRECEDENCE = {"+": 1, "-": 1, "*": 2}


class _Parser:
    """Precedence-climbing parser producing normalized polynomials."""

    def __init__(self, text: str, field: FieldSpec) -> None:
        self.field = field
        self.tokens = tokenize(text)
        self.index = 0
        self.max_var = 0

    def peek(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, text: str) -> Token:
        token = self.advance()
        if token.text != text:
            found = token.text or "end"
            raise ParseError(f"Expected {text!r}, found {found!r}", token.pos)
        return token

    def _binary_precedence(self, token: Token) -> Optional[int]:
        if token.kind == "op" and token.text in _PRECEDENCE:
            return _PRECEDENCE[token.text]
        # juxtaposition is an implicit product
        if token.kind in _ATOM_START or token.text in ("(", "["):
            return 2
        return None

    def expression(self, min_prec: int = 1) -> NcPoly:
        left = self.unary()
        while True:
            token = self.peek()
            prec = self._binary_precedence(token)
            if prec is None or prec < min_prec:
                return left
            if token.kind == "op" and token.text in _PRECEDENCE:
                self.advance()
            right = self.expression(prec + 1)
            if token.text == "+":
                left = left + right
            elif token.text == "-":
                left = left - right
            else:
                left = left * right

    def unary(self) -> NcPoly:
        token = self.peek()
        if token.kind == "op" and token.text in ("-", "+"):
            self.advance()
            operand = self.expression(2)
            return -operand if token.text == "-" else operand
        return self.power()

    def power(self) -> NcPoly:
        base = self.atom()
        while self.peek().text == "^":
            self.advance()
            token = self.advance()
            if token.kind != "num":
                raise ParseError("Exponent must be a positive integer", token.pos)
            exponent = int(token.text)
            if exponent == 0:
                raise ParseError("Exponent must be positive", token.pos)
            base = base**exponent
        return base

    def atom(self) -> NcPoly:
        token = self.advance()
        if token.kind == "num":
            return NcPoly.constant(self.field, self.field.element(int(token.text)))
        if token.kind == "var":
            index = int(token.text[1:])
            if not 1 <= index <= MAX_VARIABLE:
                raise ParseError(
                    f"Variable index must lie in 1..{MAX_VARIABLE}",
                    token.pos,
                    {"variable": token.text},
                )
            self.max_var = max(self.max_var, index)
            return NcPoly.variable(self.field, index)
        if token.text == "(":
            inner = self.expression()
            self.expect(")")
            return inner
        if token.text == "[":
            left = self.expression()
            self.expect(",")
            right = self.expression()
            self.expect("]")
            return left * right - right * left
        raise ParseError(f"Unexpected token {token.text or 'end'!r}", token.pos)

    def parse(self, num_vars: Optional[int]) -> NcPoly:
        result = self.expression()
        token = self.peek()
        if token.kind != "end":
            raise ParseError(f"Unexpected token {token.text!r}", token.pos)
        m = max(self.max_var, 1, num_vars or 0)
        return NcPoly(result.field, m, result.terms)


def ncpoly_parse(text: str, field: FieldSpec, num_vars: Optional[int] = None) -> NcPoly:
    """Parse and normalize a polynomial.

    Args:
        text: Polynomial in the input language
        field: Coefficient field; integer coefficients are reduced into it
        num_vars: Number of variables, at least the largest index used

    Returns:
        Normalized polynomial

    Raises:
        ParseError: On syntax errors, variable indices above 9 or zero exponents
    """
    return _Parser(text, field).parse(num_vars)


# Evaluation -----------------------------------------------------------


def ncpoly_eval(f: NcPoly, matrices: Sequence[MatrixFq]) -> MatrixFq:
    """Evaluate f at a tuple of square matrices of one size.

    Raises:
        MatrixError: On arity, shape or field mismatch
    """
    if len(matrices) != f.num_vars:
        raise MatrixError(
            "Wrong number of matrices", {"expected": f.num_vars, "got": len(matrices)}
        )
    d = matrices[0].rows if matrices else 0
    for a in matrices:
        if a.shape != (d, d):
            raise MatrixError(
                "Evaluation needs square matrices of one size", {"shape": a.shape}
            )
        if a.field != f.field:
            raise MatrixError(
                "Field mismatch", {"poly": repr(f.field), "matrix": repr(a.field)}
            )
    identity = MatrixFq.identity(f.field, d)
    total = MatrixFq.zeros(f.field, d, d)
    for c, w in f.terms:
        product = identity
        for var in w:
            product = mat_mul(product, matrices[var - 1])
        total = mat_add(total, mat_scale(c, product))
    return total


def _as_matrices(field: FieldSpec, stack: IntArray) -> List[MatrixFq]:
    return [MatrixFq(field, a) for a in stack]


@dataclass(frozen=True)
class _NonzeroObjective:
    poly: NcPoly

    def __call__(self, stack: IntArray) -> int:
        value = ncpoly_eval(self.poly, _as_matrices(self.poly.field, stack))
        return 0 if value.is_zero() else 1


@dataclass(frozen=True)
class _RankObjective:
    poly: NcPoly

    def __call__(self, stack: IntArray) -> int:
        return mat_rank(ncpoly_eval(self.poly, _as_matrices(self.poly.field, stack)))


@dataclass(frozen=True)
class WitnessResult:
    """Outcome of a nonzero-witness search.

    ``status`` is ``found``, ``none`` (exhaustive proof that the evaluation
    vanishes) or ``unknown`` (random budget spent without a witness).
    """

    status: str
    witness: Optional[List[MatrixFq]]
    tuples_checked: int
    exhaustive: bool
    elapsed_ms: int
    seed: Optional[int] = None

    def serialize(self) -> Dict[str, Any]:
        return {
            "status": self.status,
            "witness": None
            if self.witness is None
            else [a.serialize() for a in self.witness],
            "tuples_checked": self.tuples_checked,
            "exhaustive": self.exhaustive,
            "seed": self.seed,
            "elapsed_ms": self.elapsed_ms,
        }


def ev_nonzero_witness(
    f: NcPoly, d: int, config: Optional[SearchConfig] = None
) -> WitnessResult:
    """Find matrices at which f does not vanish.

    Exhaustive when the tuple count fits the cap, seeded random otherwise.

    Args:
        f: Polynomial
        d: Matrix size
        config: Search budget

    Returns:
        Witness result; ``none`` only in exhaustive mode
    """
    if d < 1:
        raise MatrixError("Matrix size must be positive", {"d": d})
    config = config or SearchConfig()
    engine = SearchEngine(config)
    exhaustive = ExhaustiveSpace(f.field, f.num_vars, (d, d))
    if exhaustive.size <= config.cap:
        space: Any = exhaustive
    else:
        logger.info("witness_search_random", tuples=exhaustive.size, cap=config.cap)
        space = RandomSpace(f.field, f.num_vars, (d, d), config.budget, config.seed)
    outcome = engine.maximize(
        space, _NonzeroObjective(f), ceiling=1, what="nonzero witness"
    )
    if outcome.best >= 1 and outcome.witness is not None:
        status = "found"
        witness: Optional[List[MatrixFq]] = _as_matrices(f.field, outcome.witness)
    else:
        status = "none" if outcome.exhaustive else "unknown"
        witness = None
    return WitnessResult(
        status=status,
        witness=witness,
        tuples_checked=outcome.checked,
        exhaustive=outcome.exhaustive,
        elapsed_ms=outcome.elapsed_ms,
        seed=None if outcome.exhaustive else config.seed,
    )


@dataclass(frozen=True)
class CensusReport:
    """Exhaustive singularity census of f on d×d matrices."""

    poly: NcPoly
    d: int
    all_singular: bool
    invertible_witness: Optional[List[MatrixFq]]
    tuples_checked: int
    elapsed_ms: int = 0

    def serialize(self) -> Dict[str, Any]:
        return {
            "field": self.poly.field.serialize(),
            "poly": self.poly.to_text(),
            "d": self.d,
            "all_singular": self.all_singular,
            "witness": None
            if self.invertible_witness is None
            else [a.serialize() for a in self.invertible_witness],
            "tuples_checked": self.tuples_checked,
            "elapsed_ms": self.elapsed_ms,
        }


def singular_census(
    f: NcPoly, d: int, config: Optional[SearchConfig] = None
) -> CensusReport:
    """Check every tuple of d×d matrices for an invertible value of f.

    The witness is the tuple with the least enumeration index, where entries
    are digits in row-major order and entry 0 varies fastest. For ``T1`` at
    d = 2 over GF(2) this is the swap ``[[0, 1], [1, 0]]`` at index 6, not the
    identity at index 9.

    Raises:
        CapExceededError: If the tuple count exceeds the cap
    """
    if d < 1:
        raise MatrixError("Matrix size must be positive", {"d": d})
    engine = SearchEngine(config or SearchConfig())
    space = ExhaustiveSpace(f.field, f.num_vars, (d, d))
    outcome = engine.maximize(
        space, _RankObjective(f), ceiling=d, what="singularity census"
    )
    all_singular = outcome.best < d
    witness = None
    if not all_singular and outcome.witness is not None:
        witness = _as_matrices(f.field, outcome.witness)
    return CensusReport(
        poly=f,
        d=d,
        all_singular=all_singular,
        invertible_witness=witness,
        tuples_checked=outcome.checked,
        elapsed_ms=outcome.elapsed_ms,
    )


__all__ = [
    "CensusReport",
    "NcPoly",
    "Term",
    "WitnessResult",
    "Word",
    "ev_nonzero_witness",
    "ncpoly_eval",
    "ncpoly_parse",
    "singular_census",
    "tokenize",
]
