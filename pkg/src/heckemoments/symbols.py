"""Quadratic, cubic and quartic residue symbols and the Dirichlet characters they induce.

Symbols are evaluated with the Euler criterion inside the residue field of a
prime: ``F_p`` for primes of rational prime norm (theta is sent to a root
``r`` of its minimal polynomial mod p) and ``F_q[theta]`` for inert ``q``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Union

import numpy as np
from sympy import isprime, primitive_root

from .fields import FieldContext, QuadInt, get_field, is_congruent
from .primes import PrimeElement, factor, prime_element

__all__ = [
    "RootOfUnity",
    "ResidueField",
    "residue_field",
    "residue_symbol",
    "supplement_check",
    "DirichletChar",
    "induced_dirichlet_character",
    "classify_order_n_characters",
    "root_of_unity_element",
]

_INT64_SAFE = 3_000_000_000  # p*p must fit in int64


@dataclass(frozen=True)
class RootOfUnity:
    """``exp(2*pi*i*index/order)``, or the zero marker for ramified input."""

    order: int
    index: int = 0
    is_zero: bool = False

    def __post_init__(self) -> None:
        if not self.is_zero:
            object.__setattr__(self, "index", self.index % self.order)
        else:
            object.__setattr__(self, "index", 0)

    @classmethod
    def zero(cls, order: int) -> RootOfUnity:
        return cls(order, 0, True)

    def __mul__(self, other: RootOfUnity) -> RootOfUnity:
        if other.order != self.order:
            raise ValueError("roots of unity of different orders")
        if self.is_zero or other.is_zero:
            return RootOfUnity.zero(self.order)
        return RootOfUnity(self.order, self.index + other.index)

    def __pow__(self, e: int) -> RootOfUnity:
        if self.is_zero:
            return self if e > 0 else RootOfUnity(self.order, 0)
        return RootOfUnity(self.order, self.index * e)

    def conjugate(self) -> RootOfUnity:
        return self if self.is_zero else RootOfUnity(self.order, -self.index)

    def __complex__(self) -> complex:
        if self.is_zero:
            return 0j
        return cmath.exp(2j * math.pi * self.index / self.order)

    def __int__(self) -> int:
        """Index, or -1 for zero (the wire form used by the CLI)."""
        return -1 if self.is_zero else self.index

    def __str__(self) -> str:
        return "0" if self.is_zero else str(self.index)


def root_of_unity_element(order: int, index: int, field_tag: str) -> QuadInt:
    """The ring element ``zeta_order**index`` (``-1``, ``w`` or ``i`` powers)."""
    if order == 2:
        return QuadInt(1 if index % 2 == 0 else -1, 0, field_tag)
    theta = QuadInt(0, 1, field_tag)
    return theta ** (index % order)


def _vpow(x: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.ones_like(x)
    base = x % p
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def _vmul2(field: str, x0, x1, y0, y1, q):
    if field == "qi":
        return (x0 * y0 - x1 * y1) % q, (x0 * y1 + x1 * y0) % q
    t = x1 * y1
    return (x0 * y0 - t) % q, (x0 * y1 + x1 * y0 - t) % q


def _vpow2(field: str, x0, x1, e: int, q: int):
    r0, r1 = np.ones_like(x0), np.zeros_like(x1)
    b0, b1 = x0 % q, x1 % q
    while e:
        if e & 1:
            r0, r1 = _vmul2(field, r0, r1, b0, b1, q)
        b0, b1 = _vmul2(field, b0, b1, b0, b1, q)
        e >>= 1
    return r0, r1


class ResidueField:
    """The residue field ``O/(pi)`` of a prime element, with Euler-criterion symbols."""

    def __init__(self, pi: QuadInt | PrimeElement):
        pe = pi if isinstance(pi, PrimeElement) else prime_element(pi)
        self.prime = pe
        self.pi = pe.value
        self.field = self.pi.field
        self.norm = pe.norm
        if pe.split_type == "inert":
            self.kind = "inert"
            self.p = pe.rational_prime
            self.r = None
        else:
            self.kind = "prime"
            self.p = pe.norm
            a, b = self.pi.a, self.pi.b
            # a + b*theta == 0 (mod pi)  =>  theta == -a/b
            self.r = (-a * pow(b, -1, self.p)) % self.p

    # -- scalar, exact ---------------------------------------------------------
    def _root_table(self, n: int) -> dict:
        ring = get_field(self.field)
        if self.kind == "prime":
            return {
                (root_of_unity_element(n, k, ring.tag).a
                 + root_of_unity_element(n, k, ring.tag).b * self.r) % self.p: k
                for k in range(n)
            }
        q = self.p
        table = {}
        for k in range(n):
            z = root_of_unity_element(n, k, ring.tag)
            table[(z.a % q, z.b % q)] = k
        return table

    def _check_order(self, n: int) -> None:
        if n == 3 and self.field != "qw":
            raise ValueError("cubic symbols live in Z[w]")
        if n == 4 and self.field != "qi":
            raise ValueError("quartic symbols live in Z[i]")
        if n not in (2, 3, 4):
            raise ValueError(f"unsupported symbol order {n}")
        if math.gcd(self.norm, n) != 1:
            raise ValueError(f"N({self.pi}) = {self.norm} is not coprime to {n}")

    def symbol_index(self, a: QuadInt | int, n: int) -> Optional[int]:
        """Index ``k`` with ``(a/pi)_n = zeta_n**k``; ``None`` when ``pi | a``."""
        self._check_order(n)
        if isinstance(a, int):
            a = QuadInt(a, 0, self.field)
        e = (self.norm - 1) // n
        roots = _root_table_cached(self, n)
        if self.kind == "prime":
            t = (a.a + a.b * self.r) % self.p
            if t == 0:
                return None
            v = pow(t, e, self.p)
        else:
            q = self.p
            x = (a.a % q, a.b % q)
            if x == (0, 0):
                return None
            v = _pow2_scalar(self.field, x, e, q)
        if v not in roots:
            raise RuntimeError(
                f"power residue of {a} mod {self.pi} matches no root of unity; ring arithmetic bug"
            )
        return roots[v]

    # -- vectorized --------------------------------------------------------------
    def indices(self, a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
        """Symbol indices of ``a + b*theta`` elementwise; -1 marks divisibility by pi."""
        self._check_order(n)
        if self.p >= _INT64_SAFE:
            raise OverflowError("residue field too large for vectorized evaluation")
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        e = (self.norm - 1) // n
        roots = _root_table_cached(self, n)
        out = np.full(a.shape, -1, dtype=np.int64)
        if self.kind == "prime":
            t = (a % self.p + (b % self.p) * self.r) % self.p
            v = _vpow(t, e, self.p)
            zero = t == 0
            for root, k in roots.items():
                out[(v == root) & ~zero] = k
        else:
            q = self.p
            x0, x1 = a % q, b % q
            zero = (x0 == 0) & (x1 == 0)
            v0, v1 = _vpow2(self.field, x0, x1, e, q)
            for (r0, r1), k in roots.items():
                out[(v0 == r0) & (v1 == r1) & ~zero] = k
        if np.any((out < 0) & ~zero):
            raise RuntimeError(f"power residue mod {self.pi} matches no root of unity")
        return out

    def rational_indices(self, t: np.ndarray, n: int) -> np.ndarray:
        t = np.asarray(t, dtype=np.int64)
        return self.indices(t, np.zeros_like(t), n)


def _pow2_scalar(field: str, x: tuple[int, int], e: int, q: int) -> tuple[int, int]:
    def mul(u, v):
        if field == "qi":
            return ((u[0] * v[0] - u[1] * v[1]) % q, (u[0] * v[1] + u[1] * v[0]) % q)
        t = u[1] * v[1]
        return ((u[0] * v[0] - t) % q, (u[0] * v[1] + u[1] * v[0] - t) % q)

    r = (1, 0)
    while e:
        if e & 1:
            r = mul(r, x)
        x = mul(x, x)
        e >>= 1
    return r


@lru_cache(maxsize=8192)
def _root_table_cached(rf: ResidueField, n: int) -> dict:
    return rf._root_table(n)


@lru_cache(maxsize=8192)
def residue_field(pi: QuadInt) -> ResidueField:
    return ResidueField(pi)


def _check_symbol_args(n: int, field_tag: str, m: QuadInt) -> None:
    if n not in (2, 3, 4):
        raise ValueError(f"unsupported symbol order {n}; expected 2, 3 or 4")
    if n == 3 and field_tag != "qw":
        raise ValueError("cubic residue symbols are defined in Z[w]")
    if n == 4 and field_tag != "qi":
        raise ValueError("quartic residue symbols are defined in Z[i]")
    if m.is_zero():
        raise ValueError("modulus must be nonzero")
    if math.gcd(m.norm, n) != 1:
        raise ValueError(f"N({m}) = {m.norm} is not coprime to {n}")


def residue_symbol(
    a: QuadInt | int, m: QuadInt | int, n: int, F: FieldContext | str | None = None
) -> RootOfUnity:
    """The n-th power residue symbol ``(a/m)_n`` as an exact root of unity.

    Prime ``m``: the root of unity congruent to ``a**((N(m)-1)/n)`` mod ``m``.
    Composite ``m``: product over the prime factorisation.  Units give 1.
    """
    tag = None
    for x in (a, m):
        if isinstance(x, QuadInt):
            tag = x.field
    if F is not None:
        tag = get_field(F).tag
    if tag is None:
        raise ValueError("cannot infer the ring; pass F")
    if isinstance(m, int):
        m = QuadInt(m, 0, tag)
    if isinstance(a, int):
        a = QuadInt(a, 0, tag)
    if a.field != m.field:
        raise ValueError("cannot mix elements of Z[i] and Z[w]")
    _check_symbol_args(n, tag, m)
    result = RootOfUnity(n, 0)
    if m.is_unit():
        return result
    _, parts = factor(m)
    for pe, e in parts:
        k = residue_field(pe.value).symbol_index(a, n)
        if k is None:
            return RootOfUnity.zero(n)
        result = result * RootOfUnity(n, k * e)
    return result


def supplement_check(c: QuadInt) -> dict[str, bool]:
    """Evaluate the supplementary symbols that must equal 1 for ``c`` in Z[w].

    ``c == 1 (mod 9)``: ``((1-w)/c)_3``.  ``c == 1 (mod 36)``: ``(2/c)_2`` and
    ``((1-w)/c)_2``.  Other classes are rejected.
    """
    if c.field != "qw":
        raise ValueError("supplement laws are checked in Z[w]")
    one_minus_w = QuadInt(1, -1, "qw")
    out: dict[str, bool] = {}
    if is_congruent(c, 1, 9):
        out["cubic_1-w"] = residue_symbol(one_minus_w, c, 3) == RootOfUnity(3, 0)
    if is_congruent(c, 1, 36):
        out["quadratic_2"] = residue_symbol(2, c, 2) == RootOfUnity(2, 0)
        out["quadratic_1-w"] = residue_symbol(one_minus_w, c, 2) == RootOfUnity(2, 0)
    if not out:
        raise ValueError(f"{c} is neither 1 mod 9 nor 1 mod 36")
    return out


@dataclass(frozen=True, eq=False)
class DirichletChar:
    """A Dirichlet character mod a prime ``p`` with values in the n-th roots of unity.

    ``table[t]`` is the index ``k`` of ``chi(t) = exp(2*pi*i*k/order)``; ``table[0] = -1``.
    """

    modulus: int
    order: int
    table: np.ndarray = field(repr=False)
    source: Optional[PrimeElement] = None

    def __call__(self, t: int) -> RootOfUnity:
        k = int(self.table[t % self.modulus])
        return RootOfUnity.zero(self.order) if k < 0 else RootOfUnity(self.order, k)

    def values(self) -> np.ndarray:
        k = self.table
        vals = np.exp(2j * np.pi * np.where(k < 0, 0, k) / self.order)
        vals[k < 0] = 0
        return vals

    def conjugate(self) -> DirichletChar:
        t = np.where(self.table < 0, -1, (-self.table) % self.order)
        src = self.source
        if src is not None and src.conjugate_norm_partner is not None:
            src = prime_element(src.conjugate_norm_partner)
        return DirichletChar(self.modulus, self.order, t, src)

    @property
    def parity(self) -> int:
        """+1 for even characters, -1 for odd ones."""
        return 1 if int(self.table[self.modulus - 1]) == 0 else -1

    @property
    def is_even(self) -> bool:
        return self.parity == 1

    def exact_order(self) -> int:
        ks = self.table[1:]
        return next(d for d in range(1, self.order + 1) if np.all((ks * d) % self.order == 0))

    def same_values(self, other: DirichletChar) -> bool:
        return (
            self.modulus == other.modulus
            and self.order == other.order
            and bool(np.array_equal(self.table, other.table))
        )


def induced_dirichlet_character(pi: PrimeElement | QuadInt, n: int) -> DirichletChar:
    """Restriction of ``(./pi)_n`` to rational integers, as a character mod ``N(pi)``."""
    pe = pi if isinstance(pi, PrimeElement) else prime_element(pi)
    if pe.split_type != "split":
        raise ValueError(f"{pe.value} has norm {pe.norm}, not a split rational prime")
    p = pe.norm
    rf = residue_field(pe.value)
    table = rf.rational_indices(np.arange(p, dtype=np.int64), n)
    return DirichletChar(p, n, table, pe)


def _discrete_log_table(p: int, g: int) -> np.ndarray:
    """``dlog[g**k mod p] = k`` for ``0 <= k < p-1``."""
    powers = np.empty(p - 1, dtype=np.int64)
    powers[0] = 1
    filled = 1
    while filled < p - 1:
        take = min(filled, p - 1 - filled)
        powers[filled : filled + take] = powers[:take] * pow(g, filled, p) % p
        filled += take
    dlog = np.full(p, -1, dtype=np.int64)
    dlog[powers] = np.arange(p - 1, dtype=np.int64)
    return dlog


def classify_order_n_characters(p: int, n: int) -> list[DirichletChar]:
    """All characters mod ``p`` of exact order ``n``, built from a primitive root."""
    if p < 3 or not isprime(p):
        raise ValueError(f"{p} is not an odd prime")
    if n not in (3, 4):
        raise ValueError("only cubic and quartic characters are classified")
    if (p - 1) % n:
        return []
    g = int(primitive_root(p))
    dlog = _discrete_log_table(p, g)
    out = []
    for s in range(1, n):
        if math.gcd(s, n) != 1:
            continue
        table = np.where(dlog < 0, -1, (dlog * s) % n)
        out.append(DirichletChar(p, n, table))
    return out
