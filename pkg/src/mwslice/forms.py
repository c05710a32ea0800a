"""Grothendieck-Witt and Witt ring arithmetic via complete invariants.

Coordinates per field family:

* finite F_q:  GW = (rank, disc_dev) in Z x Z/2, where disc_dev is the square
  class of the product of diagonal entries (deviation from the all-<1> form of
  the same rank).  W is Z/4 for q = 3 mod 4, Z/2 x Z/2 for q = 1 mod 4.
* real closed: GW = (rank, signature) with rank = signature mod 2; W = Z via
  the signature.  The free basis used for lattice work is (rank, index) with
  index = (rank - signature)/2.
* quadratically closed: GW = rank in Z; W = rank mod 2.

The coordinate ring laws are not taken on faith: the test suite validates
every one of them against the brute-force isometry oracle in this module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from mwslice.abelian import Ambient, SubgroupDescription, full_subgroup, zero_subgroup
from mwslice.fields import (
    FINITE,
    REAL,
    FieldDescriptor,
    FieldMismatchError,
    Unit,
    canonical_nonsquare,
    enumerate_units,
    one,
    square_class_bit,
    unit,
    unit_add,
    unit_mul,
    unit_neg,
)


@dataclass(frozen=True)
class QuadraticForm:
    """A nondegenerate diagonal form <a_1, ..., a_n>."""

    field: FieldDescriptor
    diagonal: tuple[Unit, ...]

    def __post_init__(self) -> None:
        if any(u.field != self.field for u in self.diagonal):
            raise FieldMismatchError("diagonal entries must share the form's field")

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    def __str__(self) -> str:
        return "<" + ",".join(str(u) for u in self.diagonal) + ">"


def form(field: FieldDescriptor, *entries) -> QuadraticForm:
    return QuadraticForm(field, tuple(unit(field, e) for e in entries))


def parse_form(field: FieldDescriptor, text: str) -> QuadraticForm:
    """Parse form literals ``<a1,a2,...>``."""
    text = text.strip()
    if not (text.startswith("<") and text.endswith(">")):
        raise ValueError(f"form literal must look like <a,b,...>, got {text!r}")
    body = text[1:-1].strip()
    if not body:
        return QuadraticForm(field, ())
    return form(field, *[part.strip() for part in body.split(",")])


@dataclass(frozen=True)
class GWClass:
    """An element of GW(F) in complete-invariant coordinates."""

    field: FieldDescriptor
    rank: int
    disc_dev: int = 0   # finite fields only
    signature: int = 0  # real closed only

    def __post_init__(self) -> None:
        if self.field.kind == FINITE:
            if self.disc_dev not in (0, 1) or self.signature:
                raise ValueError("finite-field classes carry (rank, disc_dev)")
        elif self.field.kind == REAL:
            if self.disc_dev:
                raise ValueError("real classes carry (rank, signature)")
            if (self.rank - self.signature) % 2:
                raise ValueError(
                    f"rank {self.rank} and signature {self.signature} have different parity"
                )
        else:
            if self.disc_dev or self.signature:
                raise ValueError("quadratically closed classes carry only the rank")

    def _check(self, other: "GWClass") -> None:
        if self.field != other.field:
            raise FieldMismatchError(f"classes over {self.field} and {other.field}")

    def __add__(self, other: "GWClass") -> "GWClass":
        self._check(other)
        return GWClass(
            self.field,
            self.rank + other.rank,
            (self.disc_dev + other.disc_dev) % 2,
            self.signature + other.signature,
        )

    def __neg__(self) -> "GWClass":
        return GWClass(self.field, -self.rank, self.disc_dev, -self.signature)

    def __sub__(self, other: "GWClass") -> "GWClass":
        return self + (-other)

    def __mul__(self, other: "GWClass") -> "GWClass":
        self._check(other)
        dev = (self.rank * other.disc_dev + other.rank * self.disc_dev) % 2
        return GWClass(
            self.field, self.rank * other.rank, dev, self.signature * other.signature
        )

    def scale(self, n: int) -> "GWClass":
        return GWClass(self.field, n * self.rank, (n * self.disc_dev) % 2, n * self.signature)

    @property
    def is_zero(self) -> bool:
        return self.rank == 0 and self.disc_dev == 0 and self.signature == 0

    @property
    def index(self) -> int:
        """Virtual index (r - s)/2; the second Z-coordinate of GW(R)."""
        assert self.field.kind == REAL
        return (self.rank - self.signature) // 2

    def coords(self) -> tuple[int, ...]:
        if self.field.kind == FINITE:
            return (self.rank, self.disc_dev)
        if self.field.kind == REAL:
            return (self.rank, self.index)
        return (self.rank,)

    def to_json(self) -> dict:
        out: dict = {"field": str(self.field), "rank": self.rank}
        if self.field.kind == FINITE:
            out["disc_dev"] = self.disc_dev
        elif self.field.kind == REAL:
            out["signature"] = self.signature
        return out

    def __str__(self) -> str:
        if self.field.kind == FINITE:
            return f"(rank {self.rank}, disc_dev {self.disc_dev})"
        if self.field.kind == REAL:
            return f"(rank {self.rank}, signature {self.signature})"
        return f"(rank {self.rank})"


def gw_zero(field: FieldDescriptor) -> GWClass:
    return GWClass(field, 0)


def gw_one(field: FieldDescriptor) -> GWClass:
    return GWClass(field, 1, 0, 1 if field.kind == REAL else 0)


def gw_from_coords(field: FieldDescriptor, coords: tuple[int, ...]) -> GWClass:
    if field.kind == FINITE:
        return GWClass(field, coords[0], coords[1] % 2)
    if field.kind == REAL:
        rank, idx = coords
        return GWClass(field, rank, 0, rank - 2 * idx)
    return GWClass(field, coords[0])


def gw_of_unit(u: Unit) -> GWClass:
    """Class of the rank-one form <u>."""
    f = u.field
    if f.kind == FINITE:
        return GWClass(f, 1, square_class_bit(u))
    if f.kind == REAL:
        return GWClass(f, 1, 0, 1 if u.value > 0 else -1)
    return GWClass(f, 1)


def gw_of_form(qf: QuadraticForm) -> GWClass:
    out = gw_zero(qf.field)
    for u in qf.diagonal:
        out = out + gw_of_unit(u)
    return out


def gw_add(x: GWClass, y: GWClass) -> GWClass:
    return x + y


def gw_mul(x: GWClass, y: GWClass) -> GWClass:
    return x * y


def gw_neg(x: GWClass) -> GWClass:
    return -x


def hyperbolic(field: FieldDescriptor) -> GWClass:
    return gw_of_form(form(field, 1, -1))


def pfister(units: list[Unit] | tuple[Unit, ...]) -> GWClass:
    """Rank-zero Pfister element: the product of (<u_i> - <1>).

    This normalization makes eta-symbols and Pfister elements coincide: the
    degree-zero evaluation of [u]*eta is exactly pfister([u]).
    """
    if not units:
        raise ValueError("pfister requires at least one unit")
    f = units[0].field
    out = gw_one(f)
    for u in units:
        if u.field != f:
            raise FieldMismatchError("pfister units must share one field")
        out = out * (gw_of_unit(u) - gw_one(f))
    return out


# -- Witt ring ------------------------------------------------------------------


@dataclass(frozen=True)
class WittClass:
    """An element of W(F) = GW(F)/(hyperbolic)."""

    field: FieldDescriptor
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", _witt_reduce(self.field, self.coords))

    def _check(self, other: "WittClass") -> None:
        if self.field != other.field:
            raise FieldMismatchError(f"classes over {self.field} and {other.field}")

    def __add__(self, other: "WittClass") -> "WittClass":
        self._check(other)
        return WittClass(
            self.field, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self) -> "WittClass":
        return WittClass(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other: "WittClass") -> "WittClass":
        return self + (-other)

    def scale(self, n: int) -> "WittClass":
        return WittClass(self.field, tuple(n * a for a in self.coords))

    def __mul__(self, other: "WittClass") -> "WittClass":
        self._check(other)
        # multiply on GW lifts, then project; well-definedness is oracle-tested
        return witt_class(_witt_lift(self) * _witt_lift(other))

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self) -> str:
        f = self.field
        if f.kind == FINITE:
            if f.order % 4 == 3:
                return f"{self.coords[0]} in Z/4"
            return f"{self.coords} in Z/2+Z/2"
        if f.kind == REAL:
            return f"signature {self.coords[0]}"
        return f"{self.coords[0]} in Z/2"


def _witt_reduce(field: FieldDescriptor, coords: tuple[int, ...]) -> tuple[int, ...]:
    if field.kind == FINITE:
        if field.order % 4 == 3:
            return (coords[0] % 4,)
        return (coords[0] % 2, coords[1] % 2)
    if field.kind == REAL:
        return (coords[0],)
    return (coords[0] % 2,)


def witt_class(x: GWClass) -> WittClass:
    f = x.field
    if f.kind == FINITE:
        if f.order % 4 == 3:
            return WittClass(f, (x.rank + 2 * x.disc_dev,))
        return WittClass(f, (x.rank, x.disc_dev))
    if f.kind == REAL:
        return WittClass(f, (x.signature,))
    return WittClass(f, (x.rank,))


def _witt_lift(w: WittClass) -> GWClass:
    """A GW representative of a Witt class."""
    f = w.field
    if f.kind == FINITE:
        if f.order % 4 == 3:
            v = w.coords[0]
            return GWClass(f, v % 2, (v - v % 2) // 2 % 2)
        return GWClass(f, w.coords[0], w.coords[1])
    if f.kind == REAL:
        s = w.coords[0]
        return GWClass(f, abs(s), 0, s)
    return GWClass(f, w.coords[0])


def witt_zero(field: FieldDescriptor) -> WittClass:
    return witt_class(gw_zero(field))


def witt_one(field: FieldDescriptor) -> WittClass:
    return witt_class(gw_one(field))


# -- fundamental ideal ------------------------------------------------------------


def in_fundamental_power(x: GWClass, n: int) -> bool:
    """Decide x in I(F)^n.  I^0 = GW."""
    if n < 0:
        raise ValueError("fundamental powers are indexed by naturals")
    if n == 0:
        return True
    f = x.field
    if f.kind == FINITE:
        if n == 1:
            return x.rank == 0
        return x.is_zero
    if f.kind == REAL:
        return x.rank == 0 and x.signature % (1 << n) == 0
    return x.is_zero


def gw_ambient(field: FieldDescriptor) -> Ambient:
    if field.kind == FINITE:
        return Ambient(1, (2,), ("rank", "disc_dev"), f"GW({field})")
    if field.kind == REAL:
        return Ambient(2, (), ("rank", "index"), "GW(R)")
    return Ambient(1, (), ("rank",), "GW(C)")


def witt_ambient(field: FieldDescriptor) -> Ambient:
    if field.kind == FINITE:
        if field.order % 4 == 3:
            return Ambient(0, (4,), ("w",), f"W({field})")
        return Ambient(0, (2, 2), ("rank2", "disc_dev"), f"W({field})")
    if field.kind == REAL:
        return Ambient(1, (), ("signature",), "W(R)")
    return Ambient(0, (2,), ("rank2",), "W(C)")


def fundamental_power_description(field: FieldDescriptor, n: int) -> SubgroupDescription:
    """I(F)^n as a subgroup of GW coordinates."""
    if n < 0:
        raise ValueError("fundamental powers are indexed by naturals")
    ambient = gw_ambient(field)
    if n == 0:
        return full_subgroup(ambient)
    if field.kind == FINITE:
        if n == 1:
            return SubgroupDescription(ambient, ((0, 1),))
        return zero_subgroup(ambient)
    if field.kind == REAL:
        # generator <<-1,...,-1>> has signature (-2)^n, i.e. index 2^(n-1)
        return SubgroupDescription(ambient, ((0, 1 << (n - 1)),))
    return zero_subgroup(ambient)


def fundamental_power_in_witt(field: FieldDescriptor, n: int) -> SubgroupDescription:
    """Image of I(F)^n in Witt coordinates (an isomorphic image for n >= 1)."""
    if n < 0:
        raise ValueError("fundamental powers are indexed by naturals")
    ambient = witt_ambient(field)
    if n == 0:
        return full_subgroup(ambient)
    desc = fundamental_power_description(field, n)
    gens = tuple(
        witt_class(gw_from_coords(field, g)).coords for g in desc.generators
    )
    return SubgroupDescription(ambient, gens)


# -- brute-force oracle ------------------------------------------------------------


def represents(field: FieldDescriptor, entries: tuple[Unit, ...], c: Unit) -> bool:
    """Exhaustive test: does the diagonal form with these entries represent c?"""
    if field.kind != FINITE:
        raise ValueError("the exhaustive oracle only runs over finite fields")
    values = [None] + list(enumerate_units(field))
    for point in itertools.product(values, repeat=len(entries)):
        if all(x is None for x in point):
            continue
        total: Unit | None = None  # None stands for a zero running sum
        for a, x in zip(entries, point):
            if x is None:
                continue
            term = unit_mul(a, unit_mul(x, x))
            total = term if total is None else unit_add(total, term)
        if total == c:
            return True
    return False


def binary_isometric(a: Unit, b: Unit, c: Unit, d: Unit) -> bool:
    """<a,b> = <c,d> iff equal discriminants and <a,b> represents c."""
    field = a.field
    disc_ab = square_class_bit(unit_mul(a, b))
    disc_cd = square_class_bit(unit_mul(c, d))
    if disc_ab != disc_cd:
        return False
    return represents(field, (a, b), c)


@dataclass(frozen=True)
class BruteForceTable:
    """Chain-equivalence classes of diagonal forms with representative entries."""

    field: FieldDescriptor
    max_rank: int
    classes: tuple[tuple[tuple[int, ...], ...], ...]  # forms as sorted bit tuples

    def class_of(self, bits: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
        key = tuple(sorted(bits))
        for cls in self.classes:
            if key in cls:
                return cls
        raise KeyError(f"form {bits} exceeds the enumerated rank bound")

    def class_count(self, rank: int) -> int:
        return sum(1 for cls in self.classes if len(cls[0]) == rank)


MAX_BRUTE_RANK = 8


@lru_cache(maxsize=None)
def brute_force_gw(field: FieldDescriptor, max_rank: int) -> BruteForceTable:
    """Classify diagonal forms with entries in {1, s} by chain equivalence.

    Moves replace a pair of entries by another representative pair when the
    corresponding binary forms are isometric (equal discriminant plus an
    exhaustive representation search).  Completeness of the (rank, disc)
    invariants is checked against this table by the test suite, not assumed.
    """
    if field.kind != FINITE:
        raise ValueError("brute_force_gw runs over finite fields")
    if max_rank > MAX_BRUTE_RANK:
        raise ValueError(f"rank bound {max_rank} exceeds {MAX_BRUTE_RANK}")
    s = canonical_nonsquare(field)
    reps = (one(field), s)

    def entry(bit: int) -> Unit:
        return reps[bit]

    isometric_pairs: dict[tuple[int, int, int, int], bool] = {}
    for quad in itertools.product((0, 1), repeat=4):
        isometric_pairs[quad] = binary_isometric(*(entry(b) for b in quad))

    classes: list[set[tuple[int, ...]]] = []
    for rank in range(max_rank + 1):
        forms = {tuple(sorted(bits)) for bits in itertools.product((0, 1), repeat=rank)}
        assigned: set[tuple[int, ...]] = set()
        for start in sorted(forms):
            if start in assigned:
                continue
            cls = {start}
            frontier = [start]
            while frontier:
                cur = frontier.pop()
                for i, j in itertools.combinations(range(rank), 2):
                    for new_pair in itertools.product((0, 1), repeat=2):
                        if not isometric_pairs[(cur[i], cur[j], *new_pair)]:
                            continue
                        nxt = list(cur)
                        nxt[i], nxt[j] = new_pair
                        nxt_t = tuple(sorted(nxt))
                        if nxt_t not in cls:
                            cls.add(nxt_t)
                            frontier.append(nxt_t)
            assigned |= cls
            classes.append(cls)
    return BruteForceTable(
        field, max_rank, tuple(tuple(sorted(cls)) for cls in classes)
    )


def rep_form(field: FieldDescriptor, bits: tuple[int, ...]) -> QuadraticForm:
    s = canonical_nonsquare(field)
    reps = (one(field), s)
    return QuadraticForm(field, tuple(reps[b] for b in bits))


@lru_cache(maxsize=None)
def witt_oracle_classes(field: FieldDescriptor, max_rank: int = 6) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Witt classes of representative forms: chain equivalence + hyperbolic moves."""
    table = brute_force_gw(field, max_rank)
    h_bits = tuple(sorted((0, square_class_bit(unit_neg(one(field))))))
    parent: dict[tuple[int, ...], tuple[int, ...]] = {}

    def find(x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    all_forms = [f for cls in table.classes for f in cls]
    for cls in table.classes:
        for f in cls[1:]:
            union(cls[0], f)
    for f in all_forms:
        if len(f) + 2 <= max_rank:
            union(f, tuple(sorted(f + h_bits)))
    groups: dict[tuple[int, ...], set[tuple[int, ...]]] = {}
    for f in all_forms:
        groups.setdefault(find(f), set()).add(f)
    return tuple(tuple(sorted(g)) for g in sorted(groups.values(), key=lambda g: sorted(g)[0]))
