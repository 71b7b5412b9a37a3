"""Finite chain rings Z/p^l and F_p[t]/(t^l).

An element is stored as a canonical integer in [0, p**length).  For the
"z" flavor (Z/p^l) this is the usual residue; for the "t" flavor
(F_p[t]/(t^l)) it is the base-p packing of the coefficient vector, so
t^j packs to p**j.  In both flavors the base-p digits of the packed
value are the digit vector of the element and the uniformizer pi (p
resp. t) packs to p, so pi**j packs to p**j and all digit-level helpers
(valuation, truncation, sections) are flavor independent.  Only
addition and multiplication differ: "z" arithmetic carries, "t"
arithmetic is digit-wise mod p with polynomial convolution.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    BadDescriptor,
    BadLevel,
    CtxMismatch,
    DigitOutOfRange,
    NonUnit,
)

MAX_CARDINALITY = 2**63

# cardinality threshold below which "t" flavor arithmetic is table driven
_TABLE_LIMIT = 1024


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    # deterministic Miller-Rabin for n < 3.3 * 10**24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class RingCtx:
    """A ring A = Z/p^length ("z") or F_p[t]/(t^length) ("t")."""

    flavor: str
    p: int
    length: int

    def __post_init__(self):
        if self.flavor not in ("z", "t"):
            raise BadDescriptor(f"unknown flavor {self.flavor!r}")
        if not _is_prime(self.p):
            raise BadDescriptor(f"p = {self.p} is not prime")
        if self.length < 1:
            raise BadLevel(f"length must be >= 1, got {self.length}")
        if self.p**self.length >= MAX_CARDINALITY:
            raise BadDescriptor("ring cardinality must be below 2**63")

    # ------------------------------------------------------------------
    # descriptors

    @property
    def descriptor(self) -> str:
        return f"{self.flavor}:{self.p}:{self.length}"

    def __str__(self):
        return self.descriptor

    @property
    def cardinality(self) -> int:
        return self.p**self.length

    @property
    def q(self) -> int:
        """Residue field size (= p: the residue field is F_p)."""
        return self.p

    # ------------------------------------------------------------------
    # raw integer arithmetic on packed values

    @property
    def _tables(self):
        """Lazily built (add, mul, inv) lookup tables for small "t" rings.

        inv[x] is 0 for non-units; tables are flat lists indexed a*P+b.
        """
        tabs = self.__dict__.get("_tables_cache")
        if tabs is None:
            P = self.cardinality
            if self.flavor != "t" or P > _TABLE_LIMIT:
                tabs = (None, None, None)
            else:
                add = [0] * (P * P)
                mul = [0] * (P * P)
                for a in range(P):
                    base = a * P
                    for b in range(a, P):
                        s = self._poly_add(a, b)
                        m = self._poly_mul(a, b)
                        add[base + b] = s
                        add[b * P + a] = s
                        mul[base + b] = m
                        mul[b * P + a] = m
                inv = [0] * P
                for a in range(P):
                    if a % self.p:
                        inv[a] = self._poly_inv(a)
                tabs = (add, mul, inv)
            object.__setattr__(self, "_tables_cache", tabs)
        return tabs

    def _poly_add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        out, shift = 0, 1
        for _ in range(self.length):
            out += ((a + b) % p) * shift
            a //= p
            b //= p
            shift *= p
        return out

    def _poly_neg(self, a: int) -> int:
        p = self.p
        if p == 2:
            return a
        out, shift = 0, 1
        for _ in range(self.length):
            out += (-a % p) * shift
            a //= p
            shift *= p
        return out

    def _poly_mul(self, a: int, b: int) -> int:
        p, n = self.p, self.length
        da = []
        while a:
            da.append(a % p)
            a //= p
        acc = [0] * n
        shift = 0
        while b and shift < n:
            db = b % p
            if db:
                for i, ai in enumerate(da):
                    j = i + shift
                    if j >= n:
                        break
                    acc[j] = (acc[j] + ai * db) % p
            b //= p
            shift += 1
        out = 0
        for d in reversed(acc):
            out = out * p + d
        return out

    def _poly_inv(self, a: int) -> int:
        # Newton iteration u <- u*(2 - a*u); valuation of (1 - a*u) doubles.
        c0 = a % self.p
        if c0 == 0:
            raise NonUnit(f"{a} is not a unit in {self.descriptor}")
        u = pow(c0, -1, self.p)
        two = 2 % self.p  # constant polynomial 2
        steps = max(1, (self.length - 1).bit_length())
        for _ in range(steps):
            u = self._poly_mul(u, self._poly_add(two, self._poly_neg(self._poly_mul(a, u))))
        return u

    def add_raw(self, a: int, b: int) -> int:
        if self.flavor == "z":
            return (a + b) % self.cardinality
        tab = self._tables[0]
        if tab is not None:
            return tab[a * self.cardinality + b]
        return self._poly_add(a, b)

    def neg_raw(self, a: int) -> int:
        if self.flavor == "z":
            return -a % self.cardinality
        return self._poly_neg(a)

    def sub_raw(self, a: int, b: int) -> int:
        return self.add_raw(a, self.neg_raw(b))

    def mul_raw(self, a: int, b: int) -> int:
        if self.flavor == "z":
            return a * b % self.cardinality
        tab = self._tables[1]
        if tab is not None:
            return tab[a * self.cardinality + b]
        return self._poly_mul(a, b)

    def inv_raw(self, a: int) -> int:
        if a % self.p == 0:
            raise NonUnit(f"{a} is not a unit in {self.descriptor}")
        if self.flavor == "z":
            return pow(a, -1, self.cardinality)
        tab = self._tables[2]
        if tab is not None:
            return tab[a]
        return self._poly_inv(a)

    def is_unit_raw(self, a: int) -> bool:
        return a % self.p != 0

    def val_raw(self, a: int) -> int:
        """pi-adic valuation; val(0) = length by convention."""
        if a == 0:
            return self.length
        v = 0
        while a % self.p == 0:
            a //= self.p
            v += 1
        return v

    def pi_pow_raw(self, t: int) -> int:
        """Packed value of pi**t (0 once t >= length)."""
        if t < 0:
            raise BadLevel("negative pi power")
        return self.p**t if t < self.length else 0

    def div_pi_raw(self, a: int, t: int) -> int:
        """Exact division by pi**t, i.e. a digit downshift.

        Requires val(a) >= t.  Works identically for both flavors since
        multiplication by pi**t is a carry-free digit upshift.
        """
        sh = self.p**t
        if a % sh:
            raise NonUnit(f"{a} is not divisible by pi^{t}")
        return a // sh

    def mod_pi_raw(self, a: int, t: int) -> int:
        """Digits of a below position t (representative mod pi**t)."""
        return a % self.p**t if t < self.length else a

    def unit_split_raw(self, a: int) -> tuple[int, int]:
        """a = u * pi**t with u a unit; returns (t, u).  0 -> (length, 1)."""
        if a == 0:
            return self.length, 1
        t = self.val_raw(a)
        return t, a // self.p**t

    def digits_raw(self, a: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.length):
            out.append(a % p)
            a //= p
        return tuple(out)

    def from_digits_raw(self, ds) -> int:
        if len(ds) > self.length:
            raise BadLevel(f"{len(ds)} digits in a length-{self.length} ring")
        out = 0
        for d in reversed(tuple(ds)):
            if not 0 <= d < self.p:
                raise DigitOutOfRange(f"digit {d} not in [0, {self.p})")
            out = out * self.p + d
        return out

    # ------------------------------------------------------------------
    # element constructors

    def elem(self, val: int) -> "RingElem":
        return RingElem(self, val % self.cardinality if self.flavor == "z" else val)

    def zero(self) -> "RingElem":
        return RingElem(self, 0)

    def one(self) -> "RingElem":
        return RingElem(self, 1)

    def pi(self, t: int = 1) -> "RingElem":
        return RingElem(self, self.pi_pow_raw(t))

    def from_digits(self, ds) -> "RingElem":
        return RingElem(self, self.from_digits_raw(ds))

    def elements(self):
        for v in range(self.cardinality):
            yield RingElem(self, v)

    def units(self):
        for v in range(self.cardinality):
            if v % self.p:
                yield RingElem(self, v)

    def residue_field(self) -> "RingCtx":
        return ring_ctx(self.flavor, self.p, 1)

    def truncated(self, level: int) -> "RingCtx":
        if not 1 <= level <= self.length:
            raise BadLevel(f"cannot truncate length {self.length} to {level}")
        return ring_ctx(self.flavor, self.p, level)

    def extended(self, length: int) -> "RingCtx":
        if length < self.length:
            raise BadLevel(f"cannot lift length {self.length} to {length}")
        return ring_ctx(self.flavor, self.p, length)


@lru_cache(maxsize=None)
def ring_ctx(flavor: str, p: int, length: int) -> RingCtx:
    """Interned RingCtx factory; equal descriptors share one instance."""
    return RingCtx(flavor, p, length)


def parse_ring(descriptor: str) -> RingCtx:
    """Parse "z:<p>:<length>" or "t:<p>:<length>"."""
    parts = descriptor.strip().split(":")
    if len(parts) != 3:
        raise BadDescriptor(f"bad ring descriptor {descriptor!r}")
    flavor = parts[0]
    try:
        p, length = int(parts[1]), int(parts[2])
    except ValueError:
        raise BadDescriptor(f"bad ring descriptor {descriptor!r}") from None
    return ring_ctx(flavor, p, length)


@dataclass(frozen=True)
class RingElem:
    """An element of a RingCtx, stored as its canonical packed integer."""

    ctx: RingCtx
    val: int

    def __post_init__(self):
        if not 0 <= self.val < self.ctx.cardinality:
            raise DigitOutOfRange(f"{self.val} outside [0, {self.ctx.cardinality})")

    def _check(self, other: "RingElem"):
        if self.ctx is not other.ctx and self.ctx != other.ctx:
            raise CtxMismatch(f"{self.ctx} vs {other.ctx}")

    def __add__(self, other):
        self._check(other)
        return RingElem(self.ctx, self.ctx.add_raw(self.val, other.val))

    def __sub__(self, other):
        self._check(other)
        return RingElem(self.ctx, self.ctx.sub_raw(self.val, other.val))

    def __neg__(self):
        return RingElem(self.ctx, self.ctx.neg_raw(self.val))

    def __mul__(self, other):
        self._check(other)
        return RingElem(self.ctx, self.ctx.mul_raw(self.val, other.val))

    def __bool__(self):
        return self.val != 0

    def inverse(self) -> "RingElem":
        return RingElem(self.ctx, self.ctx.inv_raw(self.val))

    def is_unit(self) -> bool:
        return self.ctx.is_unit_raw(self.val)

    def valuation(self) -> int:
        return self.ctx.val_raw(self.val)

    def unit_split(self) -> tuple[int, "RingElem"]:
        t, u = self.ctx.unit_split_raw(self.val)
        return t, RingElem(self.ctx, u)

    def digits(self) -> tuple[int, ...]:
        return self.ctx.digits_raw(self.val)

    def truncate(self, level: int) -> "RingElem":
        return RingElem(self.ctx.truncated(level), self.ctx.mod_pi_raw(self.val, level))

    def lift(self, length: int) -> "RingElem":
        return RingElem(self.ctx.extended(length), self.val)

    def residue(self) -> "RingElem":
        return self.truncate(1)

    def __repr__(self):
        return f"<{self.val} in {self.ctx.descriptor}>"


@dataclass(frozen=True)
class Section:
    """An element of the digit section K_level = {x : digits >= level are 0}.

    K_0 = {0}, K_length = the whole ring.  Used for the scalar part of
    the canonical forms: the value is carried in the ambient ring.
    """

    level: int
    value: RingElem

    def __post_init__(self):
        ctx = self.value.ctx
        if not 0 <= self.level <= ctx.length:
            raise BadLevel(f"section level {self.level} outside [0, {ctx.length}]")
        if ctx.mod_pi_raw(self.value.val, self.level) != self.value.val:
            raise DigitOutOfRange(f"{self.value.val} has digits at or above {self.level}")

    @property
    def ctx(self) -> RingCtx:
        return self.value.ctx


def section(ctx: RingCtx, level: int, digits=()) -> Section:
    """Build the K_level element with the given low digits."""
    ds = tuple(digits)
    if len(ds) > level:
        raise BadLevel(f"{len(ds)} digits for a level-{level} section")
    return Section(level, ctx.from_digits(ds))


def section_of(x: RingElem, level: int) -> Section:
    """The K_level part of x (its digits below level)."""
    return Section(level, RingElem(x.ctx, x.ctx.mod_pi_raw(x.val, level)))
