"""Exact arithmetic in the Gaussian integers Z[i] and the Eisenstein integers Z[w].

Elements are :class:`QuadInt` values ``a + b*theta`` where ``theta`` is ``i``
(with ``i**2 = -1``) or ``w`` (with ``w**2 = -1 - w``).  Everything in this
module is exact integer arithmetic; no floating point is involved.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "QuadInt",
    "FracQuad",
    "FieldContext",
    "QI",
    "QW",
    "get_field",
    "norm",
    "trace",
    "euclid_divrem",
    "quad_gcd",
    "divides",
    "is_congruent",
    "primary_associate",
    "is_primary",
    "normalize_associate",
    "associates",
    "residue_system",
    "reduce_mod",
    "powmod",
    "ray_class_number",
    "parse_quadint",
]

NORM_LIMIT = 2**63


def _mul(field: str, a: int, b: int, c: int, d: int) -> tuple[int, int]:
    if field == "qi":
        return a * c - b * d, a * d + b * c
    # w**2 = -1 - w
    bd = b * d
    return a * c - bd, a * d + b * c - bd


def _conj(field: str, a: int, b: int) -> tuple[int, int]:
    if field == "qi":
        return a, -b
    return a - b, -b


def _norm(field: str, a: int, b: int) -> int:
    if field == "qi":
        return a * a + b * b
    return a * a - a * b + b * b


def _round_div(x: int, n: int) -> int:
    # nearest integer to x/n for n > 0, halves to even
    q, r = divmod(x, n)
    if 2 * r > n or (2 * r == n and q % 2):
        q += 1
    return q


@dataclass(frozen=True, slots=True)
class QuadInt:
    """The element ``a + b*theta`` of Z[i] (``field="qi"``) or Z[w] (``field="qw"``)."""

    a: int
    b: int
    field: str = "qw"

    def __post_init__(self) -> None:
        if self.field not in ("qi", "qw"):
            raise ValueError(f"unknown field tag {self.field!r}")

    # -- construction helpers -------------------------------------------
    def _coerce(self, other: object) -> QuadInt | None:
        if isinstance(other, QuadInt):
            if other.field != self.field:
                raise ValueError("cannot mix elements of Z[i] and Z[w]")
            return other
        if isinstance(other, int):
            return QuadInt(other, 0, self.field)
        return None

    @property
    def ctx(self) -> FieldContext:
        return get_field(self.field)

    # -- ring operations --------------------------------------------------
    def __add__(self, other: object) -> QuadInt:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadInt(self.a + o.a, self.b + o.b, self.field)

    __radd__ = __add__

    def __sub__(self, other: object) -> QuadInt:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadInt(self.a - o.a, self.b - o.b, self.field)

    def __rsub__(self, other: object) -> QuadInt:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self) -> QuadInt:
        return QuadInt(-self.a, -self.b, self.field)

    def __mul__(self, other: object) -> QuadInt:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadInt(*_mul(self.field, self.a, self.b, o.a, o.b), self.field)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> QuadInt:
        if e < 0:
            raise ValueError("negative exponent")
        result = QuadInt(1, 0, self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self) -> QuadInt:
        return QuadInt(*_conj(self.field, self.a, self.b), self.field)

    @property
    def norm(self) -> int:
        return norm(self)

    @property
    def trace(self) -> int:
        return 2 * self.a if self.field == "qi" else 2 * self.a - self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_unit(self) -> bool:
        return _norm(self.field, self.a, self.b) == 1

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __str__(self) -> str:
        sym = "i" if self.field == "qi" else "w"
        return f"{self.a}{self.b:+d}*{sym}"

    def __complex__(self) -> complex:
        if self.field == "qi":
            return complex(self.a, self.b)
        return complex(self.a - self.b / 2, self.b * 3**0.5 / 2)

    def sort_key(self) -> tuple[int, int, int]:
        return (_norm(self.field, self.a, self.b), self.a, self.b)


@dataclass(frozen=True)
class FracQuad:
    """A formal quotient ``num / den`` of two elements of the same ring."""

    num: QuadInt
    den: QuadInt

    def __post_init__(self) -> None:
        if self.den.is_zero():
            raise ZeroDivisionError("FracQuad with zero denominator")
        if self.num.field != self.den.field:
            raise ValueError("numerator and denominator live in different rings")

    @classmethod
    def of(cls, x: QuadInt | FracQuad | int, field: str = "qw") -> FracQuad:
        if isinstance(x, FracQuad):
            return x
        if isinstance(x, int):
            x = QuadInt(x, 0, field)
        return cls(x, QuadInt(1, 0, x.field))

    @property
    def field(self) -> str:
        return self.num.field

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FracQuad):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self) -> int:
        # equality is invariant under common scaling, so hash the exact coordinates of num/den
        x = self.num * self.den.conjugate()
        n = self.den.norm
        return hash((Fraction(x.a, n), Fraction(x.b, n), self.field))

    def __mul__(self, other: FracQuad | QuadInt | int) -> FracQuad:
        o = FracQuad.of(other, self.field)
        return FracQuad(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other: FracQuad | QuadInt | int) -> FracQuad:
        o = FracQuad.of(other, self.field)
        return FracQuad(self.num * o.den, self.den * o.num)

    def trace(self) -> Fraction:
        return trace(self)


@dataclass(frozen=True)
class FieldContext:
    """Fixed data of K = Q(i) or Q(w)."""

    tag: str
    name: str
    theta_minpoly: str
    delta: QuadInt
    discriminant: int
    units: tuple[QuadInt, ...]
    primary_modulus: QuadInt
    ramified_prime: QuadInt
    ramified_rational: int
    unit_order: int

    @property
    def abs_disc(self) -> int:
        return abs(self.discriminant)

    def element(self, a: int, b: int = 0) -> QuadInt:
        return QuadInt(a, b, self.tag)

    @property
    def theta(self) -> QuadInt:
        return QuadInt(0, 1, self.tag)

    @property
    def one(self) -> QuadInt:
        return QuadInt(1, 0, self.tag)

    def __repr__(self) -> str:
        return f"FieldContext({self.name})"


def _build_units(tag: str) -> tuple[QuadInt, ...]:
    if tag == "qi":
        coords = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    else:
        # 1, w, w^2 = -1-w, -1, -w, -w^2 = 1+w
        coords = [(1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1)]
    return tuple(QuadInt(a, b, tag) for a, b in coords)


QI = FieldContext(
    tag="qi",
    name="Q(i)",
    theta_minpoly="x^2+1",
    delta=QuadInt(0, 2, "qi"),
    discriminant=-4,
    units=_build_units("qi"),
    primary_modulus=QuadInt(-2, 2, "qi"),  # (1+i)^3
    ramified_prime=QuadInt(1, 1, "qi"),
    ramified_rational=2,
    unit_order=4,
)

QW = FieldContext(
    tag="qw",
    name="Q(w)",
    theta_minpoly="x^2+x+1",
    delta=QuadInt(1, 2, "qw"),  # sqrt(-3) fixed as 1 + 2w
    discriminant=-3,
    units=_build_units("qw"),
    primary_modulus=QuadInt(3, 0, "qw"),
    ramified_prime=QuadInt(1, -1, "qw"),
    ramified_rational=3,
    unit_order=6,
)

_FIELDS = {"qi": QI, "qw": QW}


def get_field(f: str | FieldContext) -> FieldContext:
    if isinstance(f, FieldContext):
        return f
    try:
        return _FIELDS[f]
    except KeyError:
        raise ValueError(f"unknown field {f!r}; expected 'qi' or 'qw'") from None


def _as_quad(z: QuadInt | int, field: str) -> QuadInt:
    return z if isinstance(z, QuadInt) else QuadInt(z, 0, field)


def norm(z: QuadInt, F: FieldContext | str | None = None) -> int:
    """Norm ``z * conj(z)``; raises :class:`OverflowError` at 2**63 and beyond."""
    n = _norm(z.field, z.a, z.b)
    if n >= NORM_LIMIT:
        raise OverflowError(f"norm of {z} exceeds 2**63")
    return n


def trace(z: FracQuad | QuadInt, F: FieldContext | str | None = None) -> Fraction:
    """Exact rational trace ``k + conj(k)``."""
    if isinstance(z, QuadInt):
        return Fraction(z.trace)
    x = z.num * z.den.conjugate()
    return Fraction(x.trace, _norm(z.field, z.den.a, z.den.b))


def euclid_divrem(a: QuadInt, b: QuadInt) -> tuple[QuadInt, QuadInt]:
    """Return ``(q, r)`` with ``a = q*b + r`` and ``N(r) < N(b)``.

    ``q`` rounds each coordinate of ``a/b`` to the nearest integer; in both
    rings the rounding error has norm at most 3/4.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by zero in euclid_divrem")
    f = a.field
    x, y = _mul(f, a.a, a.b, *_conj(f, b.a, b.b))
    n = _norm(f, b.a, b.b)
    q = QuadInt(_round_div(x, n), _round_div(y, n), f)
    r = a - q * b
    return q, r


def divides(m: QuadInt, z: QuadInt) -> bool:
    """True when ``m | z`` in the ring of integers."""
    if m.is_zero():
        return z.is_zero()
    f = m.field
    x, y = _mul(f, z.a, z.b, *_conj(f, m.a, m.b))
    n = _norm(f, m.a, m.b)
    return x % n == 0 and y % n == 0


def exact_div(z: QuadInt, m: QuadInt) -> QuadInt:
    f = m.field
    x, y = _mul(f, z.a, z.b, *_conj(f, m.a, m.b))
    n = _norm(f, m.a, m.b)
    if x % n or y % n:
        raise ArithmeticError(f"{m} does not divide {z}")
    return QuadInt(x // n, y // n, f)


def is_congruent(z: QuadInt | int, w: QuadInt | int, m: QuadInt | int) -> bool:
    """``z == w (mod m)``; rational arguments are promoted to the ring of the others."""
    field = next(x.field for x in (z, w, m) if isinstance(x, QuadInt))
    z, w, m = (_as_quad(x, field) for x in (z, w, m))
    return divides(m, z - w)


def associates(z: QuadInt) -> list[QuadInt]:
    return [u * z for u in get_field(z.field).units]


def is_primary(z: QuadInt) -> bool:
    """``z == 1`` modulo 3 in Z[w], or modulo (1+i)^3 in Z[i]."""
    F = get_field(z.field)
    return divides(F.primary_modulus, z - 1)


def primary_associate(z: QuadInt, F: FieldContext | str | None = None) -> QuadInt:
    """The unique unit multiple of ``z`` congruent to 1 mod 3 (Z[w]) or mod (1+i)^3 (Z[i])."""
    ctx = get_field(F if F is not None else z.field)
    if z.is_zero() or _norm(z.field, z.a, z.b) % ctx.ramified_rational == 0:
        raise ValueError(f"{z} is not coprime to {ctx.ramified_rational}; no primary associate")
    hits = [u * z for u in ctx.units if is_primary(u * z)]
    if len(hits) != 1:
        raise RuntimeError(f"expected exactly one primary associate of {z}, found {len(hits)}")
    return hits[0]


def normalize_associate(z: QuadInt) -> QuadInt:
    """Canonical associate: primary when coprime to the ramified prime.

    Otherwise the lexicographically least ``(a, b)`` among associates with
    ``a > 0`` (every nonzero element has one).
    """
    if z.is_zero():
        raise ValueError("zero has no canonical associate")
    ctx = get_field(z.field)
    if _norm(z.field, z.a, z.b) % ctx.ramified_rational:
        return primary_associate(z, ctx)
    cands = [w for w in associates(z) if w.a > 0]
    return min(cands, key=lambda w: (w.a, w.b))


def quad_gcd(a: QuadInt, b: QuadInt) -> QuadInt:
    """Normalized generator of the ideal ``(a, b)``."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    if a.field != b.field:
        raise ValueError("cannot mix elements of Z[i] and Z[w]")
    while not b.is_zero():
        _, r = euclid_divrem(a, b)
        a, b = b, r
    return normalize_associate(a)


def powmod(z: QuadInt, e: int, m: QuadInt) -> QuadInt:
    """``z**e`` reduced modulo ``m`` by Euclidean division at every step."""
    f = z.field
    n = _norm(f, m.a, m.b)
    mc = _conj(f, m.a, m.b)

    def red(x: int, y: int) -> tuple[int, int]:
        u, v = _mul(f, x, y, *mc)
        qa, qb = _round_div(u, n), _round_div(v, n)
        pa, pb = _mul(f, qa, qb, m.a, m.b)
        return x - pa, y - pb

    acc = (1, 0)
    base = red(z.a, z.b)
    while e:
        if e & 1:
            acc = red(*_mul(f, *acc, *base))
        base = red(*_mul(f, *base, *base))
        e >>= 1
    return QuadInt(*red(*acc), f)


@lru_cache(maxsize=4096)
def _hnf(c: QuadInt) -> tuple[int, int, int]:
    """Basis ``{(m, 0), (k, g)}`` of the lattice ``c*O`` in (a, b) coordinates."""
    a1, b1 = c.a, c.b
    a2, b2 = _mul(c.field, c.a, c.b, 0, 1)
    g, s, t = _ext_gcd(b1, b2)
    if g == 0:
        raise ValueError("zero modulus")
    k = s * a1 + t * a2
    m = abs((b2 // g) * a1 - (b1 // g) * a2)
    return m, k % m, g


def _ext_gcd(x: int, y: int) -> tuple[int, int, int]:
    old_r, r, old_s, s, old_t, t = x, y, 1, 0, 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def residue_system(c: QuadInt) -> tuple[int, int]:
    """Periods ``(m, g)`` so that ``{u + v*theta : 0 <= u < m, 0 <= v < g}`` is a
    complete residue system mod ``c``; ``m * g == N(c)``."""
    m, _, g = _hnf(c)
    if m * g != _norm(c.field, c.a, c.b):
        raise RuntimeError(f"residue system for {c} has wrong cardinality")
    return m, g


def reduce_mod(z: QuadInt, c: QuadInt) -> QuadInt:
    """Representative of ``z`` mod ``c`` inside :func:`residue_system`."""
    m, k, g = _hnf(c)
    t = z.b // g
    u = (z.a - t * k) % m
    return QuadInt(u, z.b - t * g, z.field)


def ray_class_number(F: FieldContext | str, c: QuadInt) -> int:
    """Order of the ray class group mod ``c``: ``|(O/c)^x| / |image of units|``."""
    from .primes import factor  # local import: primes builds on this module

    ctx = get_field(F)
    if c.is_zero():
        raise ValueError("modulus must be nonzero")
    c = _as_quad(c, ctx.tag)
    phi = Fraction(norm(c))
    _, parts = factor(c, ctx)
    for p, _e in parts:
        phi *= Fraction(p.norm - 1, p.norm)
    assert phi.denominator == 1
    image = {reduce_mod(u, c) for u in ctx.units}
    return int(phi) // len(image)


_QUAD_RE = re.compile(
    r"""^(?:(?P<a>[+-]?\d+)(?![\d*wi]))?          # rational part
        (?:(?P<sign>[+-]?)(?P<b>\d+)?\*?(?P<sym>[wi]))?$""",
    re.VERBOSE,
)


def parse_quadint(text: str, field: str | None = None) -> QuadInt:
    """Parse ``"a+b*w"``, ``"a-b*i"``, ``"-3"``, ``"w"``, ``"2-w"`` and friends."""
    s = text.strip().replace(" ", "")
    m = _QUAD_RE.match(s)
    if not s or m is None or (m.group("a") is None and m.group("sym") is None):
        raise ValueError(f"cannot parse {text!r} as a quadratic integer")
    a = int(m.group("a") or 0)
    b = 0
    if m.group("sym"):
        sym_field = "qi" if m.group("sym") == "i" else "qw"
        if field is not None and field != sym_field:
            raise ValueError(f"{text!r} is not an element of {get_field(field).name}")
        field = sym_field
        if m.group("a") is not None and not m.group("sign"):
            raise ValueError(f"missing sign between terms in {text!r}")
        b = int(m.group("b") or 1)
        if m.group("sign") == "-":
            b = -b
    if field is None:
        raise ValueError(f"{text!r} does not name its ring; pass field='qi' or 'qw'")
    return QuadInt(a, b, field)
