"""Test finite fields."""

import itertools
import pickle

import numpy as np
import pytest

from blowuprank.core import FieldError
from blowuprank.gf import (
    FieldSpec,
    default_modulus,
    enumerate_elements,
    fe_add,
    fe_inv,
    fe_mul,
    fe_neg,
    fe_sub,
    field_make,
    is_irreducible,
    is_prime,
)


def test_is_prime() -> None:
    """Test trial-division primality."""
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


@pytest.mark.parametrize(
    ("p", "k", "expected"),
    [(2, 2, (1, 1, 1)), (2, 3, (1, 0, 1, 1)), (3, 2, (1, 0, 1))],
)
def test_default_modulus(p: int, k: int, expected: tuple[int, ...]) -> None:
    """Test the smallest monic irreducible polynomial is chosen."""
    assert default_modulus(p, k) == expected
    assert is_irreducible(expected, p)


def test_is_irreducible_rejects_squares() -> None:
    """Test x^2 + 1 = (x + 1)^2 over GF(2)."""
    assert not is_irreducible((1, 0, 1), 2)
    assert not is_irreducible((1, 0, 0, 1), 2)


def test_prime_field(gf3: FieldSpec) -> None:
    """Test arithmetic in GF(3)."""
    assert gf3.q == 3
    assert gf3.is_prime_field
    assert fe_add(gf3, 2, 2) == 1
    assert fe_sub(gf3, 0, 1) == 2
    assert fe_neg(gf3, 1) == 2
    assert fe_mul(gf3, 2, 2) == 1
    assert fe_inv(gf3, 2) == 2


def test_extension_field(gf4: FieldSpec) -> None:
    """Test GF(4) = GF(2)[x]/(x^2 + x + 1) with x packed as 2."""
    assert gf4.q == 4
    assert not gf4.is_prime_field
    assert fe_mul(gf4, 2, 2) == 3
    assert fe_mul(gf4, 2, 3) == 1
    assert fe_add(gf4, 2, 3) == 1
    assert fe_inv(gf4, 2) == 3
    assert gf4.power(2, 3) == 1


@pytest.mark.parametrize(("p", "k"), [(2, 2), (3, 2), (2, 3), (5, 1)])
def test_field_axioms(p: int, k: int) -> None:
    """Test ring axioms and inverses exhaustively on small fields."""
    F = field_make(p, k)
    elements = np.array(enumerate_elements(F), dtype=np.int64)
    a, b, c = np.meshgrid(elements, elements, elements, indexing="ij")
    assert np.array_equal(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)))
    assert np.array_equal(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)))
    assert np.array_equal(F.add(a, F.neg(a)), np.zeros_like(a))
    nonzero = elements[1:]
    assert np.all(F.mul(nonzero, F.inv(nonzero)) == 1)


def test_inverse_of_zero(gf4: FieldSpec) -> None:
    """Test zero has no inverse."""
    with pytest.raises(FieldError, match="Zero has no inverse"):
        fe_inv(gf4, 0)


def test_element_range(gf4: FieldSpec) -> None:
    """Test out-of-range reps are rejected."""
    with pytest.raises(FieldError, match="out of range"):
        gf4.check(4)


@pytest.mark.parametrize(
    ("args", "message"),
    [
        ((4,), "prime"),
        ((2, 0), "positive"),
        ((2, 17), "Unsupported field size"),
        ((2, 2, [1, 0, 1]), "reducible"),
        ((2, 2, [1, 1]), "k \\+ 1"),
        ((3, 2, [2, 0, 1]), "monic"),
    ],
)
def test_field_make_errors(args: tuple[object, ...], message: str) -> None:
    """Test invalid field parameters."""
    with pytest.raises(FieldError, match=message):
        field_make(*args)  # type: ignore[arg-type]


def test_fields_are_shared(gf4: FieldSpec) -> None:
    """Test equal parameters give equal, hashable fields."""
    assert field_make(2, 2, [1, 1, 1]) == gf4
    assert hash(field_make(2, 2)) == hash(gf4)
    assert field_make(2) != gf4
    assert repr(gf4) == "GF(4)"


def test_pickle(gf4: FieldSpec) -> None:
    """Test fields survive the trip to worker processes."""
    assert pickle.loads(pickle.dumps(gf4)) == gf4


def test_serialize(gf3: FieldSpec, gf4: FieldSpec) -> None:
    """Test field descriptions."""
    assert gf3.serialize() == {"p": 3, "k": 1}
    assert gf4.serialize() == {"p": 2, "k": 2, "modulus": [1, 1, 1]}
    assert FieldSpec.deserialize({"p": 2, "k": 2, "modulus": [1, 1, 1]}) == gf4


def test_deserialize_malformed() -> None:
    """Test malformed descriptions raise field errors."""
    with pytest.raises(FieldError, match="Malformed"):
        FieldSpec.deserialize({"k": 2})


def test_format(gf4: FieldSpec) -> None:
    """Test element rendering."""
    assert [gf4.format(a) for a in range(4)] == ["0", "1", "x", "x+1"]


def test_element_prime_image() -> None:
    """Test integers map into the prime subfield."""
    F = field_make(3, 2)
    assert [F.element(n) for n in (0, 4, -1)] == [0, 1, 2]


def test_multiplicative_group_is_cyclic() -> None:
    """Test some element generates GF(9)*."""
    F = field_make(3, 2)
    orders = []
    for a in range(1, F.q):
        orders.append(
            next(e for e in itertools.count(1) if F.power(a, e) == 1)
        )
    assert max(orders) == 8


INVARIANT_FIELDS = [(3, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (2, 8)]


@pytest.mark.parametrize(("p", "k"), INVARIANT_FIELDS)
def test_frobenius_fixes_every_element(p: int, k: int) -> None:
    """Test a^q = a by q successive multiplications."""
    F = field_make(p, k)
    elements = np.array(enumerate_elements(F), dtype=np.int64)
    power = np.ones_like(elements)
    for _ in range(F.q):
        power = F.mul(power, elements)
    assert np.array_equal(power, elements)
    assert all(F.power(a, F.q) == a for a in enumerate_elements(F))


@pytest.mark.parametrize(("p", "k"), INVARIANT_FIELDS)
def test_inverse_is_an_involution(p: int, k: int) -> None:
    """Test inv(inv(a)) = a and a·inv(a) = 1 for every nonzero a."""
    F = field_make(p, k)
    for a in enumerate_elements(F)[1:]:
        inverse = fe_inv(F, a)
        assert fe_inv(F, inverse) == a
        assert fe_mul(F, a, inverse) == 1
