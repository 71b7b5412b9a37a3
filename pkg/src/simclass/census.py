"""Class counting, enumeration and residue-type census for 3x3 matrices.

Counts follow a 4-state linear recursion: classes at one length are
bucketed as (scalar, split-with-scalar-block, pure-J, rest) and the
transfer matrix maps the bucket vector of length l-1 to that of length
l.  Closed forms for the totals and the "rest" bucket are also
implemented and cross-checked against the recursion in the tests.

Enumeration builds one representative per class directly, family by
family; no orbit search is involved.  Hard bodies come from the shared
per-ring transversal (hard_family), so enumeration and canon3 agree on
representatives by construction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .canon2 import enumerate2
from .canon3 import (
    CanonicalForm3,
    CyclicBody,
    HardBody,
    ScalarBody,
    SplitBody,
    hard_family,
)
from .errors import BadParams, BudgetExceeded, NonIntegralDivision
from .matrix import identity
from .ring import RingCtx, RingElem, Section

__all__ = [
    "CountVector",
    "transfer_matrix",
    "transfer_power",
    "base_vector",
    "level_vector",
    "count3",
    "theta",
    "gf_coeffs",
    "classify_form",
    "enumerate3",
    "type_histogram",
]


class CountVector(NamedTuple):
    """Class counts at one length, bucketed as in classify_form."""

    scalar: int
    split_scalar_block: int
    pure_j: int
    rest: int


def transfer_matrix(q: int):
    """Bucket-count transfer matrix from length l-1 to length l."""
    return [
        [q, 0, 0, 0],
        [q * q - q, q * q, 0, 0],
        [q, 0, q * q, 0],
        [q**3, q**3, q**3 + q, q**3],
    ]


def transfer_power(q: int, level: int, mode: str = "iterate"):
    """level-th power of the transfer matrix.

    mode "iterate" multiplies the matrix out; "closed" fills in the
    closed-form entries (whose divisions must all be exact).  The two
    agree for every level, which the tests check.
    """
    if q < 2 or level < 0:
        raise BadParams("need q >= 2 and level >= 0")
    if mode == "iterate":
        out = [[int(i == j) for j in range(4)] for i in range(4)]
        t = transfer_matrix(q)
        for _ in range(level):
            out = [
                [sum(out[i][k] * t[k][j] for k in range(4)) for j in range(4)]
                for i in range(4)
            ]
        return out
    if mode not in ("closed", "closed_form"):
        raise BadParams(f"mode must be 'iterate' or 'closed', got {mode!r}")
    i = level
    if i == 0:
        return [[int(r == c) for c in range(4)] for r in range(4)]
    geo = _exact_div(q**i - 1, q - 1)  # 1 + q + ... + q^(i-1)
    return [
        [q**i, 0, 0, 0],
        [q ** (2 * i) - q**i, q ** (2 * i), 0, 0],
        [q**i * geo, 0, q ** (2 * i), 0],
        [
            theta(q, i),
            q ** (2 * i + 1) * geo,
            q ** (2 * i - 1) * (q * q + 1) * geo,
            q ** (3 * i),
        ],
    ]


def base_vector(q: int, group: str = "M") -> CountVector:
    """Bucket counts at length 1 (over the residue field)."""
    if group == "M":
        return CountVector(q, q * q - q, q, q**3)
    if group == "GL":
        return CountVector(q - 1, (q - 1) * (q - 2), q - 1, q**3 - q * q)
    raise BadParams(f"group must be 'M' or 'GL', got {group!r}")


def level_vector(q: int, level: int, group: str = "M") -> CountVector:
    """Bucket counts at the given length: transfer_matrix^(level-1) applied
    to the base vector."""
    if q < 2 or level < 1:
        raise BadParams("need q >= 2 and level >= 1")
    v = base_vector(q, group)
    t = transfer_matrix(q)
    for _ in range(level - 1):
        v = CountVector(*(sum(t[i][k] * v[k] for k in range(4)) for i in range(4)))
    return v


def _exact_div(num: int, den: int) -> int:
    if num % den:
        raise NonIntegralDivision(f"{num} not divisible by {den}")
    return num // den


def count3(q: int, level: int, group: str = "M", mode: str = "closed") -> int:
    """Number of 3x3 similarity classes at the given level."""
    if q < 2 or level < 0:
        raise BadParams("need q >= 2 and level >= 0")
    if level == 0:
        return 1
    if mode == "recursion":
        return sum(level_vector(q, level, group))
    if mode not in ("closed", "closed_form"):
        raise BadParams(f"mode must be 'closed' or 'recursion', got {mode!r}")
    i = level
    if group == "M":
        num = (
            q ** (3 * i + 3)
            + q ** (3 * i - 1)
            - q ** (2 * i + 2)
            - q ** (2 * i + 1)
            - q ** (2 * i)
            - q ** (2 * i - 1)
            + 2 * q**i
        )
        return _exact_div(num, (q - 1) * (q * q - 1))
    if group == "GL":
        num = (
            q ** (3 * i + 2)
            - q ** (3 * i)
            + 2 * q ** (3 * i - 2)
            - q ** (2 * i + 1)
            - q ** (2 * i - 1)
            - 2 * q ** (2 * i - 2)
            + 2 * q ** (i - 1)
        )
        return _exact_div(num, q * q - 1)
    raise BadParams(f"group must be 'M' or 'GL', got {group!r}")


def theta(q: int, level: int) -> int:
    """Closed form for the "rest" bucket (component 4 of level_vector).

    The intermediate quotients are not individually integral, so the
    product is taken over the rationals and checked at the end.
    """
    if q < 2 or level < 1:
        raise BadParams("need q >= 2 and level >= 1")
    i = level
    inner = Fraction(q**4 + 1, q - 1) * Fraction(q**i + 1, q + 1) - Fraction(q**3 + 1, q - 1)
    out = q ** (i - 1) * Fraction(q**i - 1, q - 1) * inner
    if out.denominator != 1:
        raise NonIntegralDivision(f"theta({q}, {level}) = {out} is not integral")
    return int(out)


def gf_coeffs(q: int, group: str = "M", terms: int = 1):
    """First `terms` coefficients of the class-count generating function.

    Computed from its three-pole partial fraction decomposition, i.e.
    as a sum of three geometric sequences with rational weights, not by
    reusing the closed form of count3; the tests check the two agree
    coefficient by coefficient.
    """
    if terms < 1:
        raise BadParams("need terms >= 1")
    if group == "M":
        scale = Fraction(1, (q - 1) * (q * q - 1))
        series = [
            (Fraction(q**3) + Fraction(1, q), q**3),
            (-Fraction(q * q + q + 1) - Fraction(1, q), q * q),
            (Fraction(2), q),
        ]
    elif group == "GL":
        scale = Fraction(1, q * q - 1)
        series = [
            (Fraction(q * q - 1) + Fraction(2, q * q), q**3),
            (-Fraction(q) - Fraction(1, q) - Fraction(2, q * q), q * q),
            (Fraction(2, q), q),
        ]
    else:
        raise BadParams(f"group must be 'M' or 'GL', got {group!r}")
    out = []
    for i in range(terms):
        s = scale * sum(weight * pole**i for weight, pole in series)
        if i == 0 and group == "GL":
            # the three-series form alone yields (q-1)/q at index 0; the
            # convention that the length-0 quotient has one class adds a
            # constant 1/q term (the M series needs no correction)
            s += Fraction(1, q)
        if s.denominator != 1:
            raise NonIntegralDivision(f"coefficient {i} = {s} is not integral")
        out.append(int(s))
    return out


# ----------------------------------------------------------------------
# enumeration


def classify_form(form: CanonicalForm3) -> int:
    """Bucket index used by the transfer recursion.

    0 scalar matrix; 1 split body whose 2x2 block is scalar; 2 hard body
    of type I (pure J shape); 3 everything else.
    """
    b = form.body
    if isinstance(b, ScalarBody):
        return 0
    if isinstance(b, SplitBody) and b.inner.level == b.inner.ctx.length:
        return 1
    if isinstance(b, HardBody) and b.form.tag == "I":
        return 2
    return 3


def _split_inner_forms(tctx: RingCtx):
    # 2x2 forms with scalar residue, i.e. positive split level
    return [f for f in enumerate2(tctx) if f.level >= 1]


def enumerate3(ctx: RingCtx, group: str = "M", budget: int = 10_000_000):
    """One representative per class over ctx, as (CanonicalForm3, Mat).

    Deterministic order: level ascending, then the scalar part, then
    cyclic, split and hard bodies (each family in lexicographic
    parameter order).  Every emitted form is a canon3 fixed point.
    """
    if group not in ("M", "GL"):
        raise BadParams(f"group must be 'M' or 'GL', got {group!r}")
    if count3(ctx.q, ctx.length, group) > budget:
        raise BudgetExceeded(f"enumerate3 over {ctx.descriptor} exceeds budget {budget}")
    length, p = ctx.length, ctx.p
    out = []

    def emit(form: CanonicalForm3):
        out.append((form, form.rebuild()))

    for level in range(length + 1):
        for dv in range(p**level):
            d = Section(level, RingElem(ctx, dv))
            if group == "GL" and level >= 1 and not d.value.is_unit():
                continue
            if level == length:
                emit(CanonicalForm3(ctx, level, d, ScalarBody(), identity(ctx, 3)))
                continue
            tctx = ctx.truncated(length - level)
            gl_zero = group == "GL" and level == 0
            for c0 in range(tctx.cardinality):
                if gl_zero and c0 % p == 0:
                    continue  # residue determinant of a companion is its constant term
                for c1 in range(tctx.cardinality):
                    for c2 in range(tctx.cardinality):
                        body = CyclicBody(
                            (RingElem(tctx, c0), RingElem(tctx, c1), RingElem(tctx, c2))
                        )
                        emit(CanonicalForm3(ctx, level, d, body, identity(ctx, 3)))
            inners = _split_inner_forms(tctx)
            for av in range(tctx.cardinality):
                if gl_zero and av % p == 0:
                    continue
                for inner in inners:
                    if inner.d.value.val % p == av % p:
                        continue  # the two residue eigenvalues must differ
                    if gl_zero and inner.d.value.val % p == 0:
                        continue
                    body = SplitBody(RingElem(tctx, av), inner)
                    emit(CanonicalForm3(ctx, level, d, body, identity(ctx, 3)))
            for hf in hard_family(tctx):
                if gl_zero and hf.d.val % p == 0:
                    continue  # the residue is J-shaped, so d decides invertibility
                emit(CanonicalForm3(ctx, level, d, HardBody(hf), identity(ctx, 3)))
    return out


def type_histogram(ctx: RingCtx, group: str = "M", budget: int = 10_000_000):
    """Bucket counts (see classify_form) at each length 1..l of ctx."""
    out = []
    for level in range(1, ctx.length + 1):
        tctx = ctx.truncated(level)
        counts = [0, 0, 0, 0]
        for form, _ in enumerate3(tctx, group, budget):
            counts[classify_form(form)] += 1
        out.append(CountVector(*counts))
    return out
