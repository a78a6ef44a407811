"""Smoothing kernels for the approximate functional equations and real zeta values.

Both kernels have closed forms obtained by shifting the Mellin contour to the left:

* ``V(x) = erfc(sqrt(x))``  (Mellin kernel ``Gamma(s + 1/2)/Gamma(1/2)``),
* ``W(x) = Gamma(1/4, pi x^2)/Gamma(1/4)``  (Mellin kernel ``pi^(-s/2) Gamma(1/4 + s/2)/Gamma(1/4)``).

The Mellin integrals themselves are evaluated by quadrature in :func:`mellin_V` and
:func:`mellin_W` so the closed forms can be checked independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

__all__ = [
    "KernelEval",
    "erfc",
    "upper_incomplete_gamma",
    "kernel_V",
    "kernel_W",
    "cutoff_V",
    "cutoff_W",
    "mellin_V",
    "mellin_W",
    "hurwitz_zeta",
    "dirichlet_L_real",
    "zeta_real",
    "dedekind_residue_estimate",
    "ZETA_KINDS",
]

EPS = float(np.finfo(float).eps)
SQRT_PI = math.sqrt(math.pi)
_MAX_ITER = 500


@dataclass(frozen=True)
class KernelEval:
    x: float
    value: float
    abs_err: float


# --------------------------------------------------------------------------- erfc


def _erfc_series(x: np.ndarray) -> np.ndarray:
    """``1 - erf(x)`` with ``erf(x) = 2/sqrt(pi) e^{-x^2} sum_n 2^n x^{2n+1}/(2n+1)!!``.

    All terms are positive, so there is no cancellation inside the sum.
    """
    x2 = x * x
    term = x.copy()
    total = x.copy()
    for n in range(1, _MAX_ITER):
        term = term * (2.0 * x2) / (2 * n + 1)
        total += term
        if np.all(term <= EPS * total):
            break
    return 1.0 - (2.0 / SQRT_PI) * np.exp(-x2) * total


def _erfc_cf(x: np.ndarray) -> np.ndarray:
    """Laplace continued fraction ``sqrt(pi) e^{x^2} erfc(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))``,
    evaluated with the modified Lentz method."""
    tiny = 1e-300
    f = x.copy()
    C = f.copy()
    D = np.zeros_like(x)
    for k in range(1, _MAX_ITER):
        an = k / 2.0
        D = x + an * D
        D = np.where(np.abs(D) < tiny, tiny, D)
        C = x + an / C
        C = np.where(np.abs(C) < tiny, tiny, C)
        D = 1.0 / D
        delta = C * D
        f = f * delta
        if np.all(np.abs(delta - 1.0) < EPS):
            break
    return np.exp(-x * x) / (SQRT_PI * f)


_ERFC_SPLIT = 2.0


def erfc(x, method: str = "auto"):
    """Complementary error function for real ``x`` (scalar or array).

    ``method`` is ``"auto"``, ``"series"`` or ``"cf"``; the last two force one
    algorithm (the continued fraction needs ``x > 0``).
    """
    arr = np.asarray(x, dtype=np.float64)
    flat = np.atleast_1d(arr).ravel()
    out = np.empty_like(flat)
    neg = flat < 0
    ax = np.abs(flat)
    if method == "series":
        out[:] = _erfc_series(ax)
    elif method == "cf":
        if np.any(ax == 0):
            raise ValueError("continued fraction needs x != 0")
        out[:] = _erfc_cf(ax)
    elif method == "auto":
        lo = ax < _ERFC_SPLIT
        if lo.any():
            out[lo] = _erfc_series(ax[lo])
        if (~lo).any():
            out[~lo] = _erfc_cf(ax[~lo])
    else:
        raise ValueError(f"unknown method {method!r}")
    out = np.where(neg, 2.0 - out, out)
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


# --------------------------------------------------------------- incomplete gamma


def _lower_gamma_series(a: float, x: np.ndarray) -> np.ndarray:
    """``gamma(a, x) = x^a e^{-x} sum_n x^n / (a (a+1) ... (a+n))``."""
    term = np.full_like(x, 1.0 / a)
    total = term.copy()
    for n in range(1, _MAX_ITER):
        term = term * x / (a + n)
        total += term
        if np.all(term <= EPS * total):
            break
    with np.errstate(divide="ignore"):
        pref = np.exp(a * np.log(x) - x)
    return np.where(x == 0, 0.0, pref * total)


def _upper_gamma_cf(a: float, x: np.ndarray) -> np.ndarray:
    """Legendre continued fraction for ``Gamma(a, x)`` (modified Lentz)."""
    tiny = 1e-300
    b = x + 1.0 - a
    C = np.full_like(x, 1.0 / tiny)
    D = 1.0 / b
    h = D.copy()
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b = b + 2.0
        D = an * D + b
        D = np.where(np.abs(D) < tiny, tiny, D)
        C = b + an / C
        C = np.where(np.abs(C) < tiny, tiny, C)
        D = 1.0 / D
        delta = D * C
        h = h * delta
        if np.all(np.abs(delta - 1.0) < EPS):
            break
    return np.exp(a * np.log(x) - x) * h


def upper_incomplete_gamma(a: float, x, method: str = "auto"):
    """``Gamma(a, x) = int_x^inf t^{a-1} e^{-t} dt`` for ``0 < a <= 2`` and ``x >= 0``.

    ``"auto"`` uses the series for ``x < a + 1`` and the continued fraction
    otherwise; ``"series"`` or ``"cf"`` forces one branch.
    """
    if not (0 < a <= 2):
        raise ValueError("a must lie in (0, 2]")
    arr = np.asarray(x, dtype=np.float64)
    flat = np.atleast_1d(arr).ravel()
    if np.any(flat < 0) or np.any(np.isnan(flat)):
        raise ValueError("x must be nonnegative")
    ga = math.gamma(a)
    out = np.empty_like(flat)
    if method == "series":
        out[:] = ga - _lower_gamma_series(a, flat)
    elif method == "cf":
        if np.any(flat == 0):
            raise ValueError("continued fraction needs x > 0")
        out[:] = _upper_gamma_cf(a, flat)
    elif method == "auto":
        lo = flat < a + 1.0
        if lo.any():
            out[lo] = ga - _lower_gamma_series(a, flat[lo])
        if (~lo).any():
            out[~lo] = _upper_gamma_cf(a, flat[~lo])
    else:
        raise ValueError(f"unknown method {method!r}")
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


# -------------------------------------------------------------------- kernels


def _positive(x) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if np.any(~(arr > 0)):
        raise ValueError("kernel argument must be positive")
    return arr


def kernel_V(x):
    """Vectorized ``V(x) = erfc(sqrt(x))``."""
    return erfc(np.sqrt(_positive(x)))


def kernel_W(x, parity: int = 0):
    """Vectorized ``Gamma(1/4, pi x^2)/Gamma(1/4)``.

    ``parity=1`` gives the odd-character analogue ``Gamma(3/4, pi x^2)/Gamma(3/4)``.
    """
    a = 0.25 if parity == 0 else 0.75
    arr = _positive(x)
    return upper_incomplete_gamma(a, math.pi * arr * arr) / math.gamma(a)


_KERNEL_ERR = 1e-13


def cutoff_V(x: float) -> KernelEval:
    x = float(x)
    return KernelEval(x, float(kernel_V(x)), _KERNEL_ERR)


def cutoff_W(x: float) -> KernelEval:
    x = float(x)
    return KernelEval(x, float(kernel_W(x)), _KERNEL_ERR)


def _mellin(log_kernel, x: float, c: float, t_max: float) -> float:
    """``(1/2 pi i) int_{(c)} K(s) x^{-s} ds/s`` for a kernel with ``K(conj s) = conj K(s)``."""
    lx = math.log(x)

    def integrand(t: float) -> float:
        s = complex(c, t)
        return (np.exp(log_kernel(s) - s * lx) / s).real

    pieces = np.linspace(0.0, t_max, 9)
    total = 0.0
    for lo, hi in zip(pieces[:-1], pieces[1:]):
        val, _ = integrate.quad(integrand, lo, hi, epsabs=1e-14, epsrel=1e-13, limit=200)
        total += val
    return total / math.pi


def mellin_V(x: float, c: float = 2.0) -> float:
    """Quadrature of the Mellin integral defining ``V`` along ``Re(s) = c``."""
    lg = special.loggamma(0.5)
    return _mellin(lambda s: special.loggamma(s + 0.5) - lg, x, c, 80.0)


def mellin_W(x: float, c: float = 2.0) -> float:
    """Quadrature of the Mellin integral defining ``W`` along ``Re(s) = c``."""
    lg = special.loggamma(0.25)
    lp = math.log(math.pi)
    return _mellin(lambda s: special.loggamma(0.25 + s / 2) - lg - s * lp / 2, x, c, 160.0)


# ---------------------------------------------------------------------- zeta

_EM_TERMS = 50
# B_2, B_4, ..., B_12
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730)


def _hurwitz_regular(s: float, a: float, n_terms: int = _EM_TERMS) -> tuple[float, float]:
    """Euler-Maclaurin split ``zeta(s, a) = regular + base**(1-s)/(s-1)`` with ``base = n_terms + a``."""
    k = np.arange(n_terms, dtype=np.float64) + a
    head = math.fsum((k ** (-s)).tolist())
    base = n_terms + a
    tail = 0.5 * base ** (-s)
    rising = s  # s (s+1) ... (s + 2j - 2)
    for j, b2j in enumerate(_BERNOULLI, start=1):
        tail += b2j / math.factorial(2 * j) * rising * base ** (-s - 2 * j + 1)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
    return head + tail, base


def hurwitz_zeta(s: float, a: float) -> float:
    """Hurwitz zeta ``sum_{k>=0} (k + a)^{-s}`` for real ``s != 1`` (``s > 0``) and ``a > 0``."""
    if s == 1:
        raise ValueError("pole at s = 1")
    if a <= 0:
        raise ValueError("a must be positive")
    reg, base = _hurwitz_regular(s, a)
    return reg + base ** (1 - s) / (s - 1)


def dirichlet_L_real(s: float, q: int, coeffs) -> complex:
    """``L(s, chi) = q^{-s} sum_a chi(a) zeta(s, a/q)`` for a nonprincipal character given
    by its values ``coeffs[a]``, ``a = 0..q-1``.

    Because ``sum chi(a) = 0`` the poles cancel; that cancellation is carried out
    analytically with ``expm1``/``log1p`` so the formula stays accurate at ``s = 1``.
    """
    if s <= 0:
        raise ValueError("s must be positive")
    coeffs = np.asarray(coeffs)
    total_reg = 0j
    total_pole = 0j
    n = _EM_TERMS
    for a in range(1, q):
        c = complex(coeffs[a])
        if c == 0:
            continue
        reg, _ = _hurwitz_regular(s, a / q)
        total_reg += c * reg
        # (n + a/q)^{1-s} - n^{1-s}, divided by (s - 1)
        lr = math.log1p(a / (q * n))
        if s == 1:
            pole = -lr
        else:
            pole = n ** (1 - s) * math.expm1((1 - s) * lr) / (s - 1)
        total_pole += c * pole
    return q ** (-s) * (total_reg + total_pole)


_CHI_M3 = (0, 1, -1)
_CHI_M4 = (0, 1, 0, -1)

ZETA_KINDS = ("riemann", "chi_m3", "chi_m4", "dedekind_qw", "dedekind_qi")


def zeta_real(kind: str, s: float) -> float:
    """Riemann zeta, ``L(s, chi_{-3})``, ``L(s, chi_{-4})`` or a Dedekind zeta at real ``s > 1``."""
    if kind not in ZETA_KINDS:
        raise ValueError(f"unknown zeta kind {kind!r}")
    if not s > 1:
        raise ValueError("s must exceed 1")
    if kind == "riemann":
        return hurwitz_zeta(s, 1.0)
    if kind == "chi_m3":
        return dirichlet_L_real(s, 3, _CHI_M3).real
    if kind == "chi_m4":
        return dirichlet_L_real(s, 4, _CHI_M4).real
    if kind == "dedekind_qw":
        return zeta_real("riemann", s) * zeta_real("chi_m3", s)
    return zeta_real("riemann", s) * zeta_real("chi_m4", s)


def dedekind_residue_estimate(field: str, s: float) -> float:
    """``(s - 1) zeta_K(s)`` computed without forming the pole, for ``s`` close to 1."""
    if not s > 1:
        raise ValueError("s must exceed 1")
    reg, base = _hurwitz_regular(s, 1.0)
    scaled_zeta = (s - 1) * reg + base ** (1 - s)
    q, chi = (3, _CHI_M3) if field == "qw" else (4, _CHI_M4)
    return scaled_zeta * dirichlet_L_real(s, q, chi).real
