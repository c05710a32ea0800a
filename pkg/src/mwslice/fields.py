"""Exact arithmetic and square-class structure for the three supported field families.

Three kinds of field are modelled, all of characteristic != 2:

* ``finite``  -- F_q with q an odd prime power.  Elements are polynomials over
  the prime field modulo a monic irreducible, stored as coefficient tuples.
* ``real``    -- a real closed field.  Unit carriers are nonzero rationals;
  only the sign of a unit is ever invariant-relevant.
* ``complex`` -- a quadratically closed field.  Unit carriers are nonzero
  rationals standing in for arbitrary units; all square classes are trivial.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

FINITE = "finite"
REAL = "real"
COMPLEX = "complex"


class FieldMismatchError(ValueError):
    """Operands belong to different fields."""


class UnsupportedEnumerationError(ValueError):
    """Exhaustive enumeration requested over an infinite field."""


def _factor_prime_power(q: int) -> tuple[int, int]:
    if q < 3:
        raise ValueError(f"field order must be >= 3, got {q}")
    for p in range(2, q + 1):
        if p * p > q:
            return q, 1
        if q % p == 0:
            d = 0
            m = q
            while m % p == 0:
                m //= p
                d += 1
            if m != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, d
    raise ValueError(f"{q} is not a prime power")


# -- polynomial helpers over Z/p (coefficient tuples, low degree first) -------

def _ptrim(c: Sequence[int]) -> tuple[int, ...]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _pmulmod(a: Sequence[int], b: Sequence[int], modulus: Sequence[int], p: int) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] = (out[i + j] + ai * bj) % p
    return _prem(out, modulus, p)


def _prem(a: Sequence[int], modulus: Sequence[int], p: int) -> tuple[int, ...]:
    a = list(a)
    d = len(modulus) - 1
    while len(a) > d:
        lead = a[-1] % p
        if lead:
            shift = len(a) - 1 - d
            for i in range(d + 1):
                a[shift + i] = (a[shift + i] - lead * modulus[i]) % p
        a.pop()
    return _ptrim(a)


def _is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    d = len(modulus) - 1
    if d == 1:
        return True
    for e in range(1, d // 2 + 1):
        for coeffs in itertools.product(range(p), repeat=e):
            if _pdivides(list(coeffs) + [1], modulus, p):
                return False
    return True


def _pdivides(divisor: Sequence[int], poly: Sequence[int], p: int) -> bool:
    rem = list(_ptrim(poly))
    dd = len(divisor) - 1
    while len(rem) - 1 >= dd and rem:
        lead = rem[-1] % p
        shift = len(rem) - 1 - dd
        for i in range(dd + 1):
            rem[shift + i] = (rem[shift + i] - lead * divisor[i]) % p
        rem = list(_ptrim(rem))
    return not rem


@lru_cache(maxsize=None)
def default_modulus(p: int, d: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree d over Z/p.

    Candidates are ordered by the coefficient tuple (c_{d-1}, ..., c_1, c_0)
    of the non-leading terms.
    """
    if d == 1:
        return (0, 1)
    for high in itertools.product(range(p), repeat=d):
        coeffs = list(reversed(high)) + [1]
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise RuntimeError(f"no irreducible polynomial of degree {d} over F_{p}")


@dataclass(frozen=True)
class FieldDescriptor:
    """A concrete field of characteristic != 2."""

    kind: str
    p: int = 0
    degree: int = 1
    modulus: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in (FINITE, REAL, COMPLEX):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == FINITE:
            if self.p < 3 or self.p % 2 == 0:
                raise ValueError("finite fields must have odd characteristic")
            if len(self.modulus) != self.degree + 1 or self.modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree matching the field")
            if not _is_irreducible(self.modulus, self.p):
                raise ValueError(f"modulus {self.modulus} is reducible over F_{self.p}")

    @property
    def order(self) -> int:
        if self.kind != FINITE:
            raise UnsupportedEnumerationError(f"{self} is infinite")
        return self.p ** self.degree

    @property
    def char(self) -> int:
        return self.p if self.kind == FINITE else 0

    @property
    def is_finite(self) -> bool:
        return self.kind == FINITE

    def __str__(self) -> str:
        if self.kind == REAL:
            return "R"
        if self.kind == COMPLEX:
            return "C"
        if self.degree == 1:
            return f"Fq({self.p})"
        return f"Fq({self.order};poly={poly_str(self.modulus)})"


def finite_field(q: int, modulus: Sequence[int] | None = None) -> FieldDescriptor:
    p, d = _factor_prime_power(q)
    if p == 2:
        raise ValueError("characteristic 2 is out of scope")
    mod = tuple(m % p for m in modulus) if modulus is not None else default_modulus(p, d)
    return FieldDescriptor(FINITE, p, d, mod)


REALS = FieldDescriptor(REAL)
COMPLEXES = FieldDescriptor(COMPLEX)


@dataclass(frozen=True)
class Unit:
    """A nonzero field element in canonical form."""

    field: FieldDescriptor
    value: tuple[int, ...] | Fraction

    def __post_init__(self) -> None:
        if self.field.kind == FINITE:
            if not isinstance(self.value, tuple) or not self.value:
                raise ValueError("finite-field units are nonempty coefficient tuples")
            if len(self.value) != self.field.degree or any(
                not (0 <= c < self.field.p) for c in self.value
            ):
                raise ValueError(f"unreduced residue {self.value}")
            if all(c == 0 for c in self.value):
                raise ValueError("zero is not a unit")
        else:
            if not isinstance(self.value, Fraction) or self.value == 0:
                raise ValueError("unit carriers over R and C are nonzero rationals")

    def __str__(self) -> str:
        if self.field.kind != FINITE:
            return str(self.value)
        return poly_str(self.value)

    @property
    def encoding(self) -> int:
        """Integer encoding sum(c_i p^i); fixes the canonical residue order."""
        assert self.field.kind == FINITE
        return sum(c * self.field.p**i for i, c in enumerate(self.value))


@dataclass(frozen=True)
class SquareClass:
    field: FieldDescriptor
    label: str  # square/nonsquare, positive/negative, trivial

    @property
    def bit(self) -> int:
        return 1 if self.label in ("nonsquare", "negative") else 0


def _check_same_field(a: Unit, b: Unit) -> None:
    if a.field != b.field:
        raise FieldMismatchError(f"operands over {a.field} and {b.field}")


def unit(field: FieldDescriptor, value: int | Fraction | Sequence[int] | str) -> Unit:
    """Coerce an integer, rational, coefficient sequence or literal to a Unit."""
    if isinstance(value, str):
        return parse_unit(field, value)
    if field.kind == FINITE:
        p = field.p
        if isinstance(value, Fraction):
            num = _from_int(field, value.numerator)
            return unit_mul(num, unit_inv(_from_int(field, value.denominator)))
        if isinstance(value, int):
            return _from_int(field, value)
        coeffs = _prem([c % p for c in value], field.modulus, p)
        padded = tuple(coeffs) + (0,) * (field.degree - len(coeffs))
        return Unit(field, padded)
    return Unit(field, Fraction(value))


def _from_int(field: FieldDescriptor, n: int) -> Unit:
    return Unit(field, (n % field.p,) + (0,) * (field.degree - 1))


def one(field: FieldDescriptor) -> Unit:
    if field.kind == FINITE:
        return _from_int(field, 1)
    return Unit(field, Fraction(1))


def unit_mul(a: Unit, b: Unit) -> Unit:
    _check_same_field(a, b)
    if a.field.kind == FINITE:
        prod = _pmulmod(a.value, b.value, a.field.modulus, a.field.p)
        return Unit(a.field, tuple(prod) + (0,) * (a.field.degree - len(prod)))
    return Unit(a.field, a.value * b.value)


def unit_inv(a: Unit) -> Unit:
    if a.field.kind == FINITE:
        return unit_pow(a, a.field.order - 2)
    return Unit(a.field, 1 / a.value)


def unit_pow(a: Unit, n: int) -> Unit:
    if n < 0:
        return unit_pow(unit_inv(a), -n)
    result = one(a.field)
    base = a
    while n:
        if n & 1:
            result = unit_mul(result, base)
        base = unit_mul(base, base)
        n >>= 1
    return result


def unit_neg(a: Unit) -> Unit:
    if a.field.kind == FINITE:
        return Unit(a.field, tuple((-c) % a.field.p for c in a.value))
    return Unit(a.field, -a.value)


def unit_add(a: Unit, b: Unit) -> Unit | None:
    """Exact sum; returns None when a + b = 0."""
    _check_same_field(a, b)
    if a.field.kind == FINITE:
        coeffs = tuple((x + y) % a.field.p for x, y in zip(a.value, b.value))
        if all(c == 0 for c in coeffs):
            return None
        return Unit(a.field, coeffs)
    s = a.value + b.value
    return None if s == 0 else Unit(a.field, s)


def unit_sub(a: Unit, b: Unit) -> Unit | None:
    return unit_add(a, unit_neg(b))


def unit_div(a: Unit, b: Unit) -> Unit:
    return unit_mul(a, unit_inv(b))


def square_class(a: Unit) -> SquareClass:
    f = a.field
    if f.kind == FINITE:
        power = unit_pow(a, (f.order - 1) // 2)
        label = "square" if power == one(f) else "nonsquare"
        return SquareClass(f, label)
    if f.kind == REAL:
        return SquareClass(f, "positive" if a.value > 0 else "negative")
    return SquareClass(f, "trivial")


def square_class_bit(a: Unit) -> int:
    return square_class(a).bit


@lru_cache(maxsize=None)
def enumerate_units(field: FieldDescriptor) -> tuple[Unit, ...]:
    """All q - 1 units as powers of the canonical multiplicative generator."""
    if field.kind != FINITE:
        raise UnsupportedEnumerationError(f"cannot enumerate units of {field}")
    g = multiplicative_generator(field)
    units = [one(field)]
    for _ in range(field.order - 2):
        units.append(unit_mul(units[-1], g))
    return tuple(units)


@lru_cache(maxsize=None)
def _all_residue_units(field: FieldDescriptor) -> tuple[Unit, ...]:
    p, d = field.p, field.degree
    out = []
    for coeffs in itertools.product(range(p), repeat=d):
        if any(coeffs):
            out.append(Unit(field, coeffs))
    out.sort(key=lambda u: u.encoding)
    return tuple(out)


def _mult_order(u: Unit) -> int:
    n = 1
    acc = u
    e = one(u.field)
    while acc != e:
        acc = unit_mul(acc, u)
        n += 1
    return n


@lru_cache(maxsize=None)
def multiplicative_generator(field: FieldDescriptor) -> Unit:
    """Smallest generator of F_q^x in the canonical residue order."""
    target = field.order - 1
    for u in _all_residue_units(field):
        if _mult_order(u) == target:
            return u
    raise RuntimeError("no multiplicative generator found")


@lru_cache(maxsize=None)
def canonical_nonsquare(field: FieldDescriptor) -> Unit:
    return multiplicative_generator(field)


@lru_cache(maxsize=None)
def discrete_log_table(field: FieldDescriptor) -> dict[Unit, int]:
    return {u: k for k, u in enumerate(enumerate_units(field))}


def rational_grid(bound: int) -> tuple[Unit, ...]:
    """Deterministic family of nonzero rationals a/b, |a| <= bound, 1 <= b <= bound."""
    seen = []
    for b in range(1, bound + 1):
        for a in range(-bound, bound + 1):
            if a == 0:
                continue
            f = Fraction(a, b)
            u = Unit(REALS, f)
            if u not in seen:
                seen.append(u)
    return tuple(seen)


def sum_to_one_tuples(
    field: FieldDescriptor, n: int, bound: int = 2
) -> Iterator[tuple[Unit, ...]]:
    """Stream of n-tuples of units with sum 1.

    Over a finite field the stream is exhaustive and duplicate-free.  Over R
    (and C, with the same rational carriers) it is the deterministic family
    obtained by letting the first n - 1 entries range over the rational grid
    of ``rational_grid(bound)`` and solving for the last entry.
    """
    if n < 1:
        raise ValueError(f"tuple length must be >= 1, got {n}")
    if n == 1:
        yield (one(field),)
        return
    if field.kind == FINITE:
        pool: Sequence[Unit] = enumerate_units(field)
    else:
        pool = [Unit(field, u.value) for u in rational_grid(bound)]
    e = one(field)
    for prefix in itertools.product(pool, repeat=n - 1):
        rest: Unit | None = e  # running value of 1 - sum(prefix); None is zero
        for u in prefix:
            rest = unit_sub(rest, u) if rest is not None else unit_neg(u)
        if rest is not None:
            yield prefix + (rest,)


# -- literal syntax ------------------------------------------------------------

_FIELD_RE = re.compile(r"^Fq\((\d+)(?:;poly=([^)]+))?\)$")


def parse_field(text: str) -> FieldDescriptor:
    """Parse field literals: ``Fq(7)``, ``Fq(9;poly=x^2+1)``, ``R``, ``C``."""
    text = text.strip()
    if text == "R":
        return REALS
    if text == "C":
        return COMPLEXES
    m = _FIELD_RE.match(text)
    if not m:
        raise ValueError(f"unrecognised field literal {text!r}")
    q = int(m.group(1))
    modulus = parse_poly(m.group(2)) if m.group(2) else None
    return finite_field(q, modulus)


def parse_poly(text: str) -> tuple[int, ...]:
    """Parse ``x^2+1`` style polynomials into low-first coefficient tuples."""
    text = text.replace(" ", "").replace("-", "+-")
    coeffs: dict[int, int] = {}
    for part in text.split("+"):
        if not part:
            continue
        m = re.match(r"^(-?\d*)\*?(x(?:\^(\d+))?)?$", part)
        if not m or (m.group(1) in ("", "-") and not m.group(2)):
            raise ValueError(f"bad polynomial term {part!r}")
        coeff = {"": 1, "-": -1}.get(m.group(1), None)
        if coeff is None:
            coeff = int(m.group(1))
        if m.group(2) is None:
            deg = 0
        elif m.group(3) is None:
            deg = 1
        else:
            deg = int(m.group(3))
        coeffs[deg] = coeffs.get(deg, 0) + coeff
    top = max(coeffs)
    return tuple(coeffs.get(i, 0) for i in range(top + 1))


def poly_str(coeffs: Sequence[int]) -> str:
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            x = "x" if i == 1 else f"x^{i}"
            parts.append(x if c == 1 else f"{c}*{x}")
    return "+".join(parts) if parts else "0"


def parse_unit(field: FieldDescriptor, text: str) -> Unit:
    """Parse unit literals: integers, rationals ``a/b``, powers ``g^k``."""
    text = text.strip()
    m = re.match(r"^g(?:\^(-?\d+))?$", text)
    if m:
        if field.kind != FINITE:
            raise ValueError("generator literals g^k only apply to finite fields")
        k = int(m.group(1)) if m.group(1) else 1
        return unit_pow(multiplicative_generator(field), k)
    m = re.match(r"^(-?\d+)(?:/(\d+))?$", text)
    if not m:
        raise ValueError(f"unrecognised unit literal {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    return unit(field, Fraction(num, den))
