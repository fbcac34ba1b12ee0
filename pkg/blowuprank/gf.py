"""Finite fields GF(p^k).

Elements are plain integers in ``[0, q)``: the coefficient vector
``(c_0, ..., c_{k-1})`` of a polynomial in ``x`` packed as ``sum c_i p^i``.
Elements never carry their field; every operation takes the ``FieldSpec``.
Array operations accept numpy integer arrays and are used by the matrix
kernels; the ``fe_*`` functions are the scalar surface.
"""

import itertools
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from blowuprank.core import FieldError

FieldElement = int
IntArray = npt.NDArray[np.int64]

MAX_FIELD_SIZE = 1 << 16


def is_prime(n: int) -> bool:
    """Trial-division primality test for the supported range."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _poly_rem(num: Sequence[int], den: Sequence[int], p: int) -> List[int]:
    """Remainder of ``num`` by monic ``den`` over GF(p), highest degree first."""
    rem = list(num)
    dl = len(den)
    for i in range(len(rem) - dl + 1):
        c = rem[i]
        if c:
            for j in range(dl):
                rem[i + j] = (rem[i + j] - c * den[j]) % p
    return rem[len(rem) - dl + 1 :]


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Check a monic polynomial over GF(p) for irreducibility.

    Degree-one factors are ruled out by a root check, higher ones by trial
    division with every monic polynomial of degree up to half the degree.

    Args:
        modulus: Coefficients, highest degree first, leading coefficient 1
        p: Prime characteristic

    Returns:
        True if the polynomial has no nontrivial factor
    """
    k = len(modulus) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    for a in range(p):
        value = 0
        for c in modulus:
            value = (value * a + c) % p
        if value == 0:
            return False
    for deg in range(2, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=deg):
            if not any(_poly_rem(modulus, (1, *tail), p)):
                return False
    return True


@lru_cache(maxsize=None)
def default_modulus(p: int, k: int) -> Tuple[int, ...]:
    """Lexicographically smallest monic irreducible polynomial of degree k.

    Args:
        p: Prime characteristic
        k: Degree

    Returns:
        Coefficients, highest degree first
    """
    for tail in itertools.product(range(p), repeat=k):
        candidate = (1, *tail)
        if is_irreducible(candidate, p):
            return candidate
    raise FieldError("No irreducible polynomial found", {"p": p, "k": k})


class FieldSpec:
    """The finite field GF(p^k), immutable and shareable between workers."""

    __slots__ = ("p", "k", "modulus", "q", "_exp", "_log", "_powers")

    def __init__(self, p: int, k: int, modulus: Tuple[int, ...]) -> None:
        """Initialize field; callers go through ``field_make``.

        Args:
            p: Prime characteristic
            k: Extension degree
            modulus: Irreducible modulus, highest degree first
        """
        self.p = p
        self.k = k
        self.modulus = modulus
        self.q = p**k
        self._powers: IntArray = p ** np.arange(k, dtype=np.int64)
        self._exp, self._log = self._build_tables()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __reduce__(self) -> Tuple[Any, ...]:
        return (field_make, (self.p, self.k, list(self.modulus)))

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    def _mul_slow(self, a: int, b: int) -> int:
        """Schoolbook product reduced modulo the modulus."""
        if self.k == 1:
            return (a * b) % self.p
        p, k = self.p, self.k
        da = [(a // p**i) % p for i in range(k)]
        db = [(b // p**i) % p for i in range(k)]
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        # prod is lowest degree first; reduce with the monic modulus
        low_first = list(reversed(self.modulus))
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod[deg]
            if c:
                for j in range(k + 1):
                    prod[deg - k + j] = (prod[deg - k + j] - c * low_first[j]) % p
        return sum(prod[i] * p**i for i in range(k))

    def _build_tables(self) -> Tuple[IntArray, IntArray]:
        q = self.q
        order = q - 1
        exp = np.zeros(2 * order + 1, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        if q == 2:
            exp[:] = 1
            return exp, log
        candidates = range(2, q) if self.k == 1 else range(self.p, q)
        for g in candidates:
            value = 1
            seen_one = False
            powers = [1]
            for _ in range(order - 1):
                value = self._mul_slow(value, g)
                if value == 1:
                    seen_one = True
                    break
                powers.append(value)
            if not seen_one:
                break
        else:
            raise FieldError("No generator found", {"q": q})
        exp[:order] = powers
        exp[order : 2 * order] = powers
        exp[2 * order] = 1
        log[np.asarray(powers, dtype=np.int64)] = np.arange(order, dtype=np.int64)
        return exp, log

    # Array operations -------------------------------------------------

    def _digits(self, a: IntArray) -> IntArray:
        return (np.asarray(a, dtype=np.int64)[..., None] // self._powers) % self.p

    def _pack(self, digits: IntArray) -> IntArray:
        packed: IntArray = (digits * self._powers).sum(axis=-1)
        return packed

    def add(self, a: IntArray, b: IntArray) -> IntArray:
        """Elementwise sum."""
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        return self._pack((self._digits(a) + self._digits(b)) % self.p)

    def neg(self, a: IntArray) -> IntArray:
        """Elementwise additive inverse."""
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return np.asarray(a, dtype=np.int64).copy()
        return self._pack((-self._digits(a)) % self.p)

    def sub(self, a: IntArray, b: IntArray) -> IntArray:
        """Elementwise difference."""
        return self.add(a, self.neg(b))

    def mul(self, a: IntArray, b: IntArray) -> IntArray:
        """Elementwise product."""
        if self.k == 1:
            return (a * b) % self.p
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        product: IntArray = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, product)

    def inv(self, a: IntArray) -> IntArray:
        """Elementwise multiplicative inverse of nonzero entries."""
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise FieldError("Zero has no inverse", {"field": repr(self)})
        order = self.q - 1
        result: IntArray = self._exp[(order - self._log[a]) % order]
        return result

    # Scalars ----------------------------------------------------------

    def element(self, value: int) -> FieldElement:
        """Image of an integer in the prime subfield."""
        return value % self.p

    def check(self, a: FieldElement) -> FieldElement:
        """Validate a scalar representation.

        Raises:
            FieldError: If the rep is outside ``[0, q)``
        """
        if not 0 <= a < self.q:
            raise FieldError(
                "Element out of range", {"element": a, "field": repr(self)}
            )
        return a

    def power(self, a: FieldElement, e: int) -> FieldElement:
        """Raise a scalar to a non-negative power."""
        self.check(a)
        if e == 0:
            return 1
        if a == 0:
            return 0
        return int(self._exp[(int(self._log[a]) * e) % (self.q - 1)])

    def format(self, a: FieldElement) -> str:
        """Human-readable element, e.g. ``x+1`` in GF(4)."""
        if self.k == 1:
            return str(a)
        parts = []
        for i in reversed(range(self.k)):
            c = (a // self.p**i) % self.p
            if not c:
                continue
            mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if i == 0:
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(parts) or "0"

    # Serialization ----------------------------------------------------

    def serialize(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"p": self.p, "k": self.k}
        if self.k > 1:
            data["modulus"] = list(self.modulus)
        return data

    @classmethod
    def deserialize(cls, data: Dict[str, Any]) -> "FieldSpec":
        try:
            p, k = int(data["p"]), int(data.get("k", 1))
            return field_make(p, k, data.get("modulus"))
        except (KeyError, TypeError, ValueError) as e:
            raise FieldError("Malformed field description", {"data": data}, e) from e


@lru_cache(maxsize=64)
def _make_cached(p: int, k: int, modulus: Tuple[int, ...]) -> FieldSpec:
    return FieldSpec(p, k, modulus)


def field_make(
    p: int, k: int = 1, modulus: Optional[Sequence[int]] = None
) -> FieldSpec:
    """Build a validated finite field.

    Args:
        p: Prime characteristic
        k: Extension degree
        modulus: Monic irreducible polynomial of degree k, highest degree
            first; looked up when omitted, ignored when k = 1

    Returns:
        The field GF(p^k)

    Raises:
        FieldError: If p is not prime, q exceeds 2^16 or the modulus is
            malformed or reducible
    """
    if not is_prime(p):
        raise FieldError("Characteristic must be prime", {"p": p})
    if k < 1:
        raise FieldError("Extension degree must be positive", {"k": k})
    if p**k > MAX_FIELD_SIZE:
        raise FieldError(
            "Unsupported field size", {"q": p**k, "max": MAX_FIELD_SIZE}
        )
    if k == 1:
        return _make_cached(p, 1, (1, 0))
    if modulus is None:
        poly = default_modulus(p, k)
    else:
        poly = tuple(int(c) for c in modulus)
        if len(poly) != k + 1:
            raise FieldError(
                "Modulus must have k + 1 coefficients",
                {"k": k, "modulus": list(poly)},
            )
        if any(not 0 <= c < p for c in poly):
            raise FieldError("Modulus coefficients must lie in [0, p)", {"p": p})
        if poly[0] != 1:
            raise FieldError("Modulus must be monic", {"modulus": list(poly)})
        if not is_irreducible(poly, p):
            raise FieldError("Modulus is reducible", {"p": p, "modulus": list(poly)})
    return _make_cached(p, k, poly)


def fe_add(F: FieldSpec, a: FieldElement, b: FieldElement) -> FieldElement:
    return int(F.add(np.int64(F.check(a)), np.int64(F.check(b))))


def fe_sub(F: FieldSpec, a: FieldElement, b: FieldElement) -> FieldElement:
    return int(F.sub(np.int64(F.check(a)), np.int64(F.check(b))))


def fe_neg(F: FieldSpec, a: FieldElement) -> FieldElement:
    return int(F.neg(np.int64(F.check(a))))


def fe_mul(F: FieldSpec, a: FieldElement, b: FieldElement) -> FieldElement:
    return int(F.mul(np.int64(F.check(a)), np.int64(F.check(b))))


def fe_inv(F: FieldSpec, a: FieldElement) -> FieldElement:
    """Multiplicative inverse.

    Raises:
        FieldError: If ``a`` is zero
    """
    return int(F.inv(np.int64(F.check(a))))


def enumerate_elements(F: FieldSpec) -> List[FieldElement]:
    """All elements of F in increasing rep order."""
    return list(range(F.q))


__all__ = [
    "FieldElement",
    "FieldSpec",
    "MAX_FIELD_SIZE",
    "default_modulus",
    "enumerate_elements",
    "fe_add",
    "fe_inv",
    "fe_mul",
    "fe_neg",
    "fe_sub",
    "field_make",
    "is_irreducible",
    "is_prime",
]
