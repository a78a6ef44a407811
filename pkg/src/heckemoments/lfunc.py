"""Central values ``L(1/2, chi)`` from approximate functional equations.

Hecke L-functions over Z[w] and Z[i] use the kernel ``V`` and sum over integral
ideals; Dirichlet L-functions of prime conductor use the kernel ``W``.  An
independent Hurwitz-zeta evaluation is provided for the Dirichlet case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from .fields import QuadInt, get_field, is_congruent
from .gauss import ComplexVal, family_class, rational_gauss_sum, root_number
from .primes import PrimeElement, prime_element
from .special import dirichlet_L_real, kernel_V, kernel_W
from .symbols import DirichletChar, residue_field

__all__ = [
    "DEFAULT_THRESHOLD",
    "LValueRecord",
    "ideal_arrays",
    "enumerate_ideals",
    "symmetric_balance",
    "hecke_L_central_quadratic",
    "hecke_L_central_order_n",
    "hecke_L_central",
    "functional_equation_residual",
    "dirichlet_L_central",
    "dirichlet_L_via_hurwitz",
]

DEFAULT_THRESHOLD = 40.0
EPS = float(np.finfo(float).eps)

HECKE_FAMILIES = ("quad-hecke-qw", "quad-hecke-qi", "cubic-hecke", "quartic-hecke")
DIRICHLET_FAMILIES = ("dirichlet-cubic", "dirichlet-quartic")


@dataclass(frozen=True)
class LValueRecord:
    family: str
    pi: Optional[QuadInt]
    conductor_norm: int
    value: ComplexVal
    balance: float
    truncation: int
    method: str = "afe"
    root_number: Optional[ComplexVal] = field(default=None, compare=False)
    threshold: float = DEFAULT_THRESHOLD

    @property
    def epsilon(self) -> complex:
        """``W(chi) / sqrt(N(m))``, the sign of the functional equation."""
        if self.root_number is None:
            return 1.0
        return complex(self.root_number) / math.sqrt(self.conductor_norm)


# ----------------------------------------------------------------------- ideals


def _qw_canonical(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Canonical associate in Z[w]: primary when 3 does not divide the norm, otherwise
    the lexicographically least ``(a, b)`` with ``a > 0``."""
    A = np.empty((6,) + a.shape, dtype=np.int64)
    B = np.empty_like(A)
    x, y = a, b
    for k in range(3):
        A[k], B[k] = x, y
        A[k + 3], B[k + 3] = -x, -y
        x, y = -y, x - y  # multiply by w
    n = a * a - a * b + b * b
    coprime = n % 3 != 0
    primary = (A % 3 == 1) & (B % 3 == 0)
    big = np.iinfo(np.int64).max
    span = 2 * (np.abs(A).max(initial=0) + np.abs(B).max(initial=0)) + 1
    lex = np.where(A > 0, A * span + (B + span // 2), big)
    pick = np.where(coprime, np.argmax(primary, axis=0), np.argmin(lex, axis=0))
    idx = np.arange(a.size)
    return A[pick, idx], B[pick, idx]


@lru_cache(maxsize=16)
def _ideal_arrays_cached(field_tag: str, max_norm: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if field_tag == "qi":
        bmax = math.isqrt(max_norm)
        bb = np.arange(0, bmax + 1, dtype=np.int64)
        aa = np.arange(1, bmax + 1, dtype=np.int64)
        a, b = np.meshgrid(aa, bb, indexing="ij")
        a, b = a.ravel(), b.ravel()
        n = a * a + b * b
    else:
        # one associate per ideal from the sector b >= 0, a > b
        amax = math.isqrt(4 * max_norm // 3) + 1
        aa = np.arange(1, amax + 1, dtype=np.int64)
        bb = np.arange(0, amax, dtype=np.int64)
        a, b = np.meshgrid(aa, bb, indexing="ij")
        a, b = a.ravel(), b.ravel()
        keep = a > b
        a, b = a[keep], b[keep]
        n = a * a - a * b + b * b
    keep = n <= max_norm
    a, b, n = a[keep], b[keep], n[keep]
    if field_tag == "qw":
        a, b = _qw_canonical(a, b)
    order = np.lexsort((b, a, n))
    a, b, n = a[order], b[order], n[order]
    for arr in (a, b, n):
        arr.setflags(write=False)
    return a, b, n


def ideal_arrays(F, max_norm: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Canonical generators ``(a, b)`` and norms of all nonzero ideals with norm at most
    ``max_norm``, sorted by ``(norm, a, b)``.  Arrays are read-only and shared."""
    ctx = get_field(F)
    if max_norm < 1:
        raise ValueError("max_norm must be at least 1")
    # round up so nearby requests share one cached table
    cap = 1 << max(int(max_norm - 1).bit_length(), 6)
    a, b, n = _ideal_arrays_cached(ctx.tag, cap)
    stop = int(np.searchsorted(n, max_norm, side="right"))
    return a[:stop], b[:stop], n[:stop]


def enumerate_ideals(F, max_norm: int) -> Iterator[tuple[QuadInt, int]]:
    """Yield ``(generator, norm)`` for each nonzero ideal of norm at most ``max_norm``."""
    ctx = get_field(F)
    a, b, n = ideal_arrays(ctx, max_norm)
    for ai, bi, ni in zip(a.tolist(), b.tolist(), n.tolist()):
        yield QuadInt(ai, bi, ctx.tag), ni


# ------------------------------------------------------------------ Hecke AFE


def symmetric_balance(field_tag: str, conductor_norm: int) -> float:
    """``sqrt(|D_K| N(m))``, where both sums of the Hecke AFE have equal length."""
    return math.sqrt(get_field(field_tag).abs_disc * conductor_norm)


def _smoothed_sum(
    pi: QuadInt, n: int, scale: float, threshold: float, conj: bool
) -> tuple[complex, int, int]:
    """``sum_A chi(A) N(A)^{-1/2} V(scale * N(A))`` over ideals with ``scale*N(A) <= threshold``.

    Returns ``(value, terms, largest norm)``.
    """
    max_norm = int(threshold / scale)
    if max_norm < 1:
        return 0j, 0, 0
    a, b, norms = ideal_arrays(pi.field, max_norm)
    k = residue_field(pi).indices(a, b, n)
    live = k >= 0
    k, norms = k[live], norms[live]
    if conj:
        k = (-k) % n
    nf = norms.astype(np.float64)
    w = kernel_V(scale * nf) / np.sqrt(nf)
    if n == 2:
        vals = np.where(k == 0, w, -w)
        return complex(math.fsum(vals.tolist())), len(w), max_norm
    ang = (2 * np.pi / n) * k
    re = math.fsum((w * np.cos(ang)).tolist())
    im = math.fsum((w * np.sin(ang)).tolist())
    return complex(re, im), len(w), max_norm


def _check_class(pe: PrimeElement, family: str) -> tuple[int, int]:
    n, m = family_class(family, pe.field)
    if not is_congruent(pe.value, 1, m):
        raise ValueError(f"{pe.value} is not congruent to 1 mod {m}")
    return n, m


def _as_prime(pi: PrimeElement | QuadInt) -> PrimeElement:
    return pi if isinstance(pi, PrimeElement) else prime_element(pi)


def _afe_err(terms: int, threshold: float, reach: int) -> float:
    # rounding in fsum'd terms plus the kernel tail beyond the threshold
    return terms * 4 * EPS + 4 * math.exp(-threshold) * math.sqrt(max(reach, 1))


def hecke_L_central_quadratic(
    pi: PrimeElement | QuadInt,
    F=None,
    threshold: float = DEFAULT_THRESHOLD,
    balance: Optional[float] = None,
) -> LValueRecord:
    """``L(1/2, (./pi)_2)`` for ``pi == 1`` mod 36 (Z[w]) or mod 16 (Z[i]).

    The character is real with root number ``sqrt(N(pi))``, so both sides of the
    approximate functional equation carry the same coefficients.
    """
    pe = _as_prime(pi)
    if F is not None and get_field(F).tag != pe.field:
        raise ValueError("prime element lives in a different ring")
    family = f"quad-hecke-{pe.field}"
    _check_class(pe, family)
    sym = symmetric_balance(pe.field, pe.norm)
    x = sym if balance is None else float(balance)
    if not x > 0:
        raise ValueError("balance must be positive")
    s1, t1, r1 = _smoothed_sum(pe.value, 2, 2 * math.pi / x, threshold, False)
    if x == sym:
        s2, t2, r2 = s1, t1, r1
    else:
        s2, t2, r2 = _smoothed_sum(pe.value, 2, 2 * math.pi * x / sym**2, threshold, False)
    total = s1 + s2
    err = _afe_err(t1, threshold, r1) + _afe_err(t2, threshold, r2)
    return LValueRecord(
        family, pe.value, pe.norm, ComplexVal(total.real, total.imag, err), x, max(r1, r2), "afe",
        ComplexVal(math.sqrt(pe.norm), 0.0), threshold,
    )


def hecke_L_central_order_n(
    pi: PrimeElement | QuadInt,
    n: int,
    balance: Optional[float] = None,
    F=None,
    threshold: float = DEFAULT_THRESHOLD,
    root: Optional[ComplexVal | complex] = None,
) -> LValueRecord:
    """``L(1/2, (./pi)_n)`` for ``n = 3`` (``pi == 1 mod 9`` in Z[w]) or ``n = 4``
    (``pi == 1 mod 16`` in Z[i]) from the two-sided approximate functional equation.

    ``root`` overrides the root number; it exists for sensitivity checks only.
    """
    pe = _as_prime(pi)
    if F is not None and get_field(F).tag != pe.field:
        raise ValueError("prime element lives in a different ring")
    if n not in (3, 4):
        raise ValueError("order must be 3 or 4")
    family = "cubic-hecke" if n == 3 else "quartic-hecke"
    _check_class(pe, family)
    D = get_field(pe.field).abs_disc
    x = symmetric_balance(pe.field, pe.norm) if balance is None else float(balance)
    if not x > 0:
        raise ValueError("balance must be positive")
    W = root_number(family, pe) if root is None else _as_complexval(root)
    eps = complex(W) / math.sqrt(pe.norm)
    s1, t1, r1 = _smoothed_sum(pe.value, n, 2 * math.pi / x, threshold, False)
    s2, t2, r2 = _smoothed_sum(pe.value, n, 2 * math.pi * x / (D * pe.norm), threshold, True)
    total = s1 + eps * s2
    err = _afe_err(t1, threshold, r1) + _afe_err(t2, threshold, r2) + abs(s2) * W.err / math.sqrt(pe.norm)
    return LValueRecord(
        family, pe.value, pe.norm, ComplexVal.of(total, err), x, max(r1, r2), "afe", W, threshold
    )


def _as_complexval(z) -> ComplexVal:
    return z if isinstance(z, ComplexVal) else ComplexVal.of(complex(z))


def hecke_L_central(family: str, pi: PrimeElement | QuadInt, **kw) -> LValueRecord:
    """Dispatch on a Hecke family name."""
    if family in ("quad-hecke-qw", "quad-hecke-qi"):
        kw.pop("root", None)
        return hecke_L_central_quadratic(pi, **kw)
    if family == "cubic-hecke":
        return hecke_L_central_order_n(pi, 3, **kw)
    if family == "quartic-hecke":
        return hecke_L_central_order_n(pi, 4, **kw)
    raise ValueError(f"unknown Hecke family {family!r}")


def functional_equation_residual(rec: LValueRecord) -> float:
    """``|L - eps * conj(L)|`` with ``eps = W(chi)/sqrt(N(m))`` taken from the record.

    At the symmetric balance this vanishes by construction of the approximate
    functional equation; it is informative for records computed elsewhere.
    """
    if rec.family not in HECKE_FAMILIES:
        raise ValueError("residual is defined for Hecke families")
    L = rec.value.value
    return abs(L - rec.epsilon * L.conjugate())


# --------------------------------------------------------------- Dirichlet AFE


def _dirichlet_side(chi: DirichletChar, length: float, threshold: float, conj: bool):
    """``sum_m chi(m) m^{-1/2} W(m/length)`` up to ``pi (m/length)^2 <= threshold``."""
    m_max = int(length * math.sqrt(threshold / math.pi))
    if m_max < 1:
        return 0j, 0, 0
    m = np.arange(1, m_max + 1, dtype=np.int64)
    k = chi.table[m % chi.modulus]
    live = k >= 0
    m, k = m[live], k[live]
    if conj:
        k = (-k) % chi.order
    parity = 0 if chi.is_even else 1
    mf = m.astype(np.float64)
    w = kernel_W(mf / length, parity) / np.sqrt(mf)
    ang = (2 * np.pi / chi.order) * k
    return (
        complex(math.fsum((w * np.cos(ang)).tolist()), math.fsum((w * np.sin(ang)).tolist())),
        len(w),
        m_max,
    )


def _dirichlet_family(chi: DirichletChar) -> str:
    if chi.order == 3:
        return "dirichlet-cubic"
    if chi.order == 4:
        return "dirichlet-quartic"
    return f"dirichlet-order{chi.order}"


def dirichlet_L_central(
    chi: DirichletChar, balance_A: Optional[float] = None, threshold: float = DEFAULT_THRESHOLD
) -> LValueRecord:
    """``L(1/2, chi)`` for a nonprincipal character of prime modulus ``q``.

    Even characters use ``W(x) = Gamma(1/4, pi x^2)/Gamma(1/4)`` and the sign
    ``tau(chi)/sqrt(q)``; odd ones use ``Gamma(3/4, pi x^2)/Gamma(3/4)`` and
    ``tau(chi)/(i sqrt(q))``.
    """
    q = chi.modulus
    if chi.exact_order() == 1:
        raise ValueError("principal character")
    A = math.sqrt(q) if balance_A is None else float(balance_A)
    if not A > 0:
        raise ValueError("balance A must be positive")
    B = q / A
    tau = rational_gauss_sum(1, chi)
    eps = complex(tau) / math.sqrt(q)
    if not chi.is_even:
        eps /= 1j
    s1, t1, r1 = _dirichlet_side(chi, A, threshold, False)
    s2, t2, r2 = _dirichlet_side(chi, B, threshold, True)
    total = s1 + eps * s2
    err = _afe_err(t1, threshold, r1) + _afe_err(t2, threshold, r2) + abs(s2) * tau.err / math.sqrt(q)
    pi = chi.source.value if chi.source is not None else None
    return LValueRecord(
        _dirichlet_family(chi), pi, q, ComplexVal.of(total, err), A, max(r1, r2), "afe", tau, threshold
    )


def dirichlet_L_via_hurwitz(chi: DirichletChar, s: float = 0.5) -> ComplexVal:
    """``L(s, chi) = q^{-s} sum_{a<q} chi(a) zeta(s, a/q)`` with Euler-Maclaurin Hurwitz zeta."""
    if not 0 < s <= 2:
        raise ValueError("s must lie in (0, 2]")
    if chi.exact_order() == 1:
        raise ValueError("principal character")
    val = dirichlet_L_real(s, chi.modulus, chi.values())
    return ComplexVal.of(val, chi.modulus * 64 * EPS)
