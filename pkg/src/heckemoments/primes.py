"""Prime elements of Z[i] and Z[w]: enumeration by norm, factorisation, von Mangoldt."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from sympy import factorint, isprime

from .fields import (
    FieldContext,
    QuadInt,
    divides,
    exact_div,
    get_field,
    normalize_associate,
)

__all__ = [
    "PrimeElement",
    "rational_split_type",
    "norm_form_solve",
    "prime_element",
    "enumerate_prime_elements",
    "factor",
    "von_mangoldt",
    "prime_sieve",
]


@dataclass(frozen=True)
class PrimeElement:
    value: QuadInt
    norm: int
    split_type: str  # "split", "inert" or "ramified"
    conjugate_norm_partner: Optional[QuadInt] = None

    @property
    def field(self) -> str:
        return self.value.field

    @property
    def rational_prime(self) -> int:
        return math.isqrt(self.norm) if self.split_type == "inert" else self.norm

    def sort_key(self) -> tuple[int, int, int]:
        return (self.norm, self.value.a, self.value.b)

    def __str__(self) -> str:
        return str(self.value)


def rational_split_type(p: int, F: FieldContext | str) -> str:
    ctx = get_field(F)
    if p < 2 or not isprime(p):
        raise ValueError(f"{p} is not a rational prime")
    if p == ctx.ramified_rational:
        return "ramified"
    modulus = 3 if ctx.tag == "qw" else 4
    return "split" if p % modulus == 1 else "inert"


@lru_cache(maxsize=65536)
def norm_form_solve(p: int, field: str) -> QuadInt:
    """Some ``a + b*theta`` of norm ``p`` (brute force over ``b``)."""
    if field == "qi":
        for b in range(math.isqrt(p) + 1):
            r = p - b * b
            a = math.isqrt(r)
            if a * a == r:
                return QuadInt(a, b, "qi")
    else:
        # a^2 - ab + b^2 = p  <=>  (2a - b)^2 + 3b^2 = 4p
        for b in range(math.isqrt(4 * p // 3) + 1):
            r = 4 * p - 3 * b * b
            s = math.isqrt(r)
            if s * s == r and (s + b) % 2 == 0:
                return QuadInt((s + b) // 2, b, "qw")
    raise ValueError(f"{p} is not a norm from {get_field(field).name}")


def prime_element(z: QuadInt) -> PrimeElement:
    """Wrap a prime ``z`` with its metadata; raises if ``z`` is not prime."""
    n = z.norm
    ctx = get_field(z.field)
    if n >= 2 and isprime(n):
        kind = "ramified" if n == ctx.ramified_rational else "split"
        partner = z.conjugate() if kind == "split" else None
        return PrimeElement(z, n, kind, partner)
    q = math.isqrt(n)
    if q * q == n and isprime(q) and rational_split_type(q, ctx) == "inert" and divides(
        QuadInt(q, 0, z.field), z
    ):
        return PrimeElement(z, n, "inert", None)
    raise ValueError(f"{z} is not a prime element")


def prime_sieve(limit: int) -> np.ndarray:
    """Boolean array ``s`` with ``s[k]`` true iff ``k`` is prime, for ``0 <= k <= limit``."""
    s = np.ones(max(limit + 1, 2), dtype=bool)
    s[:2] = False
    for k in range(2, math.isqrt(limit) + 1):
        if s[k]:
            s[k * k :: k] = False
    return s


def _lattice_points(field: str, max_norm: int, modulus: int | None):
    """All ``(a, b)`` with ``N(a + b*theta) <= max_norm``; with ``modulus`` only
    those with ``a == 1`` and ``b == 0`` modulo it."""
    a_parts, b_parts = [], []
    if field == "qi":
        bmax = math.isqrt(max_norm)
    else:
        bmax = math.isqrt(4 * max_norm // 3)
    step = modulus or 1
    for b in range(-(bmax // step) * step, bmax + 1, step):
        if field == "qi":
            r = math.isqrt(max_norm - b * b)
            lo, hi = -r, r
        else:
            s = math.isqrt(4 * max_norm - 3 * b * b)
            lo, hi = (b - s) // 2 - 1, (b + s) // 2 + 1
        if modulus:
            lo = lo + ((1 - lo) % modulus)
        a = np.arange(lo, hi + 1, step, dtype=np.int64)
        a_parts.append(a)
        b_parts.append(np.full(a.shape, b, dtype=np.int64))
    a = np.concatenate(a_parts) if a_parts else np.zeros(0, np.int64)
    b = np.concatenate(b_parts) if b_parts else np.zeros(0, np.int64)
    n = a * a + b * b if field == "qi" else a * a - a * b + b * b
    keep = n <= max_norm
    return a[keep], b[keep], n[keep]


def _is_prime_mask(field: str, a, b, n, sieve) -> np.ndarray:
    split_or_ram = sieve[n]
    q = np.sqrt(n).round().astype(np.int64)
    inert_q = (q % 3 == 2) if field == "qw" else (q % 4 == 3)
    inert = (q * q == n) & sieve[np.minimum(q, len(sieve) - 1)] & inert_q
    inert &= (a % np.maximum(q, 1) == 0) & (b % np.maximum(q, 1) == 0)
    return split_or_ram | inert


def _class_filter(modulus: QuadInt | int, field: str) -> tuple[Optional[int], Optional[QuadInt]]:
    """Return ``(rational_m, general_m)``; both None means no congruence filter."""
    m = modulus if isinstance(modulus, QuadInt) else QuadInt(modulus, 0, field)
    if m.field != field:
        raise ValueError("class modulus lives in the wrong ring")
    if m.is_zero():
        raise ValueError("class modulus must be nonzero")
    if m.is_unit():
        return None, None
    ctx = get_field(field)
    units_mod_m = {(u - 1) for u in ctx.units if divides(m, u - 1)}
    if len(units_mod_m) != 1:
        raise ValueError(
            f"units are not distinct modulo {m}; the class would contain several associates"
        )
    if m.b == 0:
        return abs(m.a), None
    return None, m


def enumerate_prime_elements(
    F: FieldContext | str, max_norm: int, class_modulus: QuadInt | int = 1
) -> list[PrimeElement]:
    """Prime elements of norm at most ``max_norm`` congruent to 1 mod ``class_modulus``.

    Each prime ideal contributes at most one element.  With ``class_modulus=1``
    the canonical associate (see :func:`normalize_associate`) is returned.
    Output is ordered by ``(norm, a, b)``.
    """
    ctx = get_field(F)
    if max_norm < 2:
        raise ValueError("max_norm must be at least 2")
    rational_m, general_m = _class_filter(class_modulus, ctx.tag)
    sieve = prime_sieve(max_norm)
    field = ctx.tag
    a, b, n = _lattice_points(field, max_norm, rational_m)
    if general_m is None and rational_m is None:
        # one associate per ideal: the sector b >= 0, a > b (Z[w]) or a > 0, b >= 0 (Z[i])
        sector = (b >= 0) & (a > b) if field == "qw" else (a > 0) & (b >= 0)
        a, b, n = a[sector], b[sector], n[sector]
    keep = (n >= 2) & _is_prime_mask(field, a, b, n, sieve)
    a, b, n = a[keep], b[keep], n[keep]
    if general_m is not None:
        mc = general_m.conjugate()
        nm = general_m.norm
        x = a - 1
        if field == "qi":
            u, v = x * mc.a - b * mc.b, x * mc.b + b * mc.a
        else:
            u, v = x * mc.a - b * mc.b, x * mc.b + b * mc.a - b * mc.b
        keep = (u % nm == 0) & (v % nm == 0)
        a, b, n = a[keep], b[keep], n[keep]

    out = []
    for ai, bi, ni in zip(a.tolist(), b.tolist(), n.tolist()):
        z = QuadInt(ai, bi, field)
        if general_m is None and rational_m is None:
            z = normalize_associate(z)
        if ni == ctx.ramified_rational:
            kind = "ramified"
        elif sieve[ni]:
            kind = "split"
        else:
            kind = "inert"
        out.append(PrimeElement(z, ni, kind, z.conjugate() if kind == "split" else None))
    out.sort(key=PrimeElement.sort_key)
    return out


def factor(z: QuadInt, F: FieldContext | str | None = None) -> tuple[QuadInt, list[tuple[PrimeElement, int]]]:
    """Write ``z = unit * prod(p**e)`` with normalized prime elements ``p``."""
    if z.is_zero():
        raise ValueError("cannot factor zero")
    ctx = get_field(F if F is not None else z.field)
    field = ctx.tag
    n = z.norm
    parts: list[tuple[PrimeElement, int]] = []
    rest = z
    for p, k in sorted(factorint(n).items()):
        kind = rational_split_type(p, ctx)
        if kind == "inert":
            cands = [QuadInt(p, 0, field)]
        elif kind == "ramified":
            cands = [ctx.ramified_prime]
        else:
            g = norm_form_solve(p, field)
            cands = [g, g.conjugate()]
        for g in cands:
            pi = normalize_associate(g)
            e = 0
            while divides(pi, rest):
                rest = exact_div(rest, pi)
                e += 1
            if e:
                parts.append((prime_element(pi), e))
    if not rest.is_unit():
        raise RuntimeError(f"factorisation of {z} left a non-unit cofactor {rest}")
    parts.sort(key=lambda t: t[0].sort_key())
    return rest, parts


def von_mangoldt(z: QuadInt, F: FieldContext | str | None = None) -> float:
    """``log N(p)`` when ``z`` is a unit times a power of a single prime ``p``, else 0."""
    _, parts = factor(z, F)
    if len(parts) != 1:
        return 0.0
    return math.log(parts[0][0].norm)
