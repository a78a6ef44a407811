"""Additive characters, Gauss sums over Z[w] and Z[i], rational Gauss sums, root numbers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .fields import FracQuad, QuadInt, get_field, is_congruent, residue_system, trace
from .primes import PrimeElement, factor, prime_element
from .symbols import DirichletChar, residue_field

__all__ = [
    "ComplexVal",
    "additive_char",
    "gauss_sum_g",
    "gauss_sum_literal",
    "rational_gauss_sum",
    "root_number",
    "family_class",
]

EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class ComplexVal:
    """A double-precision complex number with an absolute error bound."""

    re: float
    im: float
    err: float = 0.0

    @classmethod
    def of(cls, z: complex, err: float = 0.0) -> ComplexVal:
        return cls(float(z.real), float(z.imag), float(err))

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    def __complex__(self) -> complex:
        return self.value

    def __abs__(self) -> float:
        return abs(self.value)

    def conjugate(self) -> ComplexVal:
        return ComplexVal(self.re, -self.im, self.err)

    def close_to(self, other: complex | ComplexVal, scale: float = 1.0) -> bool:
        tol = max(self.err + getattr(other, "err", 0.0), 1e-9 * scale)
        return abs(self.value - complex(other)) <= tol


def _frac_mod1(t: Fraction) -> Fraction:
    return t - (t.numerator // t.denominator)


def additive_char(k: FracQuad | QuadInt | int, F=None) -> ComplexVal:
    """``e(Tr(k / delta))`` with the trace taken exactly before exponentiating."""
    field = get_field(F).tag if F is not None else getattr(k, "field", None)
    if field is None:
        raise ValueError("cannot infer the ring; pass F")
    ctx = get_field(field)
    k = FracQuad.of(k, field)
    t = _frac_mod1(trace(k / ctx.delta))
    ang = 2 * math.pi * t.numerator / t.denominator
    return ComplexVal(math.cos(ang), math.sin(ang), 4 * EPS)


def _check_gauss_args(n: int, c: QuadInt) -> None:
    if n not in (2, 3, 4):
        raise ValueError(f"unsupported Gauss sum order {n}")
    if n == 3 and c.field != "qw":
        raise ValueError("cubic Gauss sums are defined over Z[w]")
    if n == 4 and c.field != "qi":
        raise ValueError("quartic Gauss sums are defined over Z[i]")
    if c.is_zero():
        raise ValueError("modulus must be nonzero")
    if math.gcd(c.norm, n) != 1:
        raise ValueError(f"modulus {c} is not coprime to {n}")


def _phase_coeffs(r: QuadInt, c: QuadInt) -> tuple[int, int, int]:
    """``(alpha, beta, D)`` with ``Tr(r*(u + v*theta)/(c*delta)) = (u*alpha + v*beta)/D``."""
    ctx = get_field(c.field)
    cd = c * ctx.delta
    D = cd.norm
    w = r * cd.conjugate()
    alpha = w.trace % D
    beta = (w * ctx.theta).trace % D
    return alpha, beta, D


def _sum_phases(num: np.ndarray, den: int, mask: np.ndarray | None = None) -> complex:
    ang = (2 * np.pi / den) * num.astype(np.float64)
    re, im = np.cos(ang), np.sin(ang)
    if mask is not None:
        re, im = re[mask], im[mask]
    return complex(re.sum(), im.sum())


def _err_bound(terms: int) -> float:
    return terms * (8 + math.log2(max(terms, 2))) * EPS


def gauss_sum_literal(n: int, r: QuadInt | int, c: QuadInt) -> ComplexVal:
    """Direct sum over the residue system ``{u + v*theta}`` of :func:`residue_system`."""
    _check_gauss_args(n, c)
    field = c.field
    if isinstance(r, int):
        r = QuadInt(r, 0, field)
    m, g = residue_system(c)
    u = np.tile(np.arange(m, dtype=np.int64), g)
    v = np.repeat(np.arange(g, dtype=np.int64), m)
    k = np.zeros(u.shape, dtype=np.int64)
    zero = np.zeros(u.shape, dtype=bool)
    if not c.is_unit():
        _, parts = factor(c)
        for pe, e in parts:
            idx = residue_field(pe.value).indices(u, v, n)
            zero |= idx < 0
            k = (k + e * np.where(idx < 0, 0, idx)) % n
    alpha, beta, D = _phase_coeffs(r, c)
    ph = (u * alpha + v * beta) % D
    num = (k * D + ph * n) % (n * D)
    total = _sum_phases(num, n * D, ~zero)
    return ComplexVal.of(total, _err_bound(c.norm))


def _geometric(g: int, length: int, p: int) -> np.ndarray:
    out = np.empty(length, dtype=np.int64)
    out[0] = 1
    filled = 1
    while filled < length:
        take = min(filled, length - filled)
        out[filled : filled + take] = out[:take] * pow(g, filled, p) % p
        filled += take
    return out


def _gauss_sum_prime(n: int, r: QuadInt, pe: PrimeElement) -> ComplexVal:
    """Sum over residues ``0..p-1`` of ``O/(pi)``, nonzero ones listed as powers of a
    primitive root ``g`` so that ``(g**k/pi)_n = zeta_n**(k*s)``."""
    from sympy import primitive_root

    p = pe.norm
    rf = residue_field(pe.value)
    g = int(primitive_root(p))
    s = rf.symbol_index(g, n)
    alpha, _, D = _phase_coeffs(r, pe.value)
    half = (p - 1) // 2
    if (half * s) % n == 0 and half % n == 0:
        # chi(-1) = 1: x and -x = g**(k + half) pair up, leaving 2*cos, and the
        # symbol depends on k mod n only, so sum cosines per residue class of k
        powers = _geometric(g, half, p)
        ph = powers * alpha % D
        c = np.cos((2 * np.pi / D) * ph.astype(np.float64))
        periods = c.reshape(-1, n).sum(axis=0)
        zeta = np.exp(2j * np.pi * ((np.arange(n) * s) % n) / n)
        return ComplexVal.of(2 * complex(np.dot(zeta, periods)), _err_bound(p))
    powers = _geometric(g, p - 1, p)
    k = (np.arange(p - 1, dtype=np.int64) * s) % n
    ph = powers * alpha % D
    num = (k * D + ph * n) % (n * D)
    return ComplexVal.of(_sum_phases(num, n * D), _err_bound(p))


def gauss_sum_g(n: int, r: QuadInt | int, c: QuadInt, F=None) -> ComplexVal:
    """``sum_{x mod c} (x/c)_n e~(r x / c)`` over Z[w] (n = 2, 3) or Z[i] (n = 2, 4)."""
    _check_gauss_args(n, c)
    if isinstance(r, int):
        r = QuadInt(r, 0, c.field)
    n_c = c.norm
    if n_c > 3 and _is_rational_prime(n_c):
        return _gauss_sum_prime(n, r, prime_element(c))
    return gauss_sum_literal(n, r, c)


def _is_rational_prime(n: int) -> bool:
    from sympy import isprime

    return bool(isprime(n))


def rational_gauss_sum(r: int, chi: DirichletChar) -> ComplexVal:
    """``tau(r, chi) = sum_{x mod p} chi(x) e(r x / p)``."""
    p, n = chi.modulus, chi.order
    x = np.arange(p, dtype=np.int64)
    k = chi.table
    ph = (x * (r % p)) % p
    num = (np.where(k < 0, 0, k) * p + ph * n) % (n * p)
    return ComplexVal.of(_sum_phases(num, n * p, k >= 0), _err_bound(p))


_FAMILIES = {
    "quad-hecke": (2, {"qw": 36, "qi": 16}),
    "cubic-hecke": (3, {"qw": 9}),
    "quartic-hecke": (4, {"qi": 16}),
}


def family_class(family: str, field: str) -> tuple[int, int]:
    """``(order, class modulus)`` of a Hecke family over the given ring."""
    base = family.removesuffix("-qw").removesuffix("-qi")
    if base not in _FAMILIES:
        raise ValueError(f"unknown Hecke family {family!r}")
    n, mods = _FAMILIES[base]
    if field not in mods:
        raise ValueError(f"family {family!r} is not defined over {get_field(field).name}")
    return n, mods[field]


def root_number(family: str, pi: PrimeElement | QuadInt) -> ComplexVal:
    """Root number ``W(chi)`` of the family character attached to ``pi``; ``|W| = sqrt(N(pi))``."""
    z = pi.value if isinstance(pi, PrimeElement) else pi
    n, m = family_class(family, z.field)
    if not is_congruent(z, 1, m):
        raise ValueError(f"{z} is not congruent to 1 mod {m}")
    if n == 2:
        return ComplexVal(math.sqrt(z.norm), 0.0, 0.0)
    return gauss_sum_g(n, 1, z)
