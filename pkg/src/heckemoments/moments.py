"""Weighted first moments of central L-values over prime moduli.

Every family is summed the same way: over prime elements ``pi`` of a fixed
congruence class with ``y < N(pi) < 2y``, each contributing
``L(1/2, chi_pi) * log N(pi) * Phi(N(pi)/y)``.  Values are computed independently
per prime (optionally in worker processes) and reduced in ``(norm, a, b)``
order with :func:`math.fsum`, so the result does not depend on the worker count.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from scipy import integrate
from sklearn.base import BaseEstimator, RegressorMixin

from .cache import ENGINE_VERSION, CacheEntry, LValueCache
from .fields import QuadInt, get_field
from .gauss import gauss_sum_g
from .lfunc import dirichlet_L_central, hecke_L_central_order_n, hecke_L_central_quadratic
from .primes import enumerate_prime_elements, prime_element
from .special import zeta_real
from .symbols import induced_dirichlet_character

__all__ = [
    "SCHEMA_VERSION",
    "SmoothWeight",
    "phi_eval",
    "phi_hat0",
    "phi_hat0_romberg",
    "predicted_constant",
    "CONSTANT_FORMULAS",
    "FamilySpec",
    "FAMILIES",
    "Contribution",
    "MomentReport",
    "moment",
    "moment_quadratic",
    "moment_hecke_order_n",
    "moment_dirichlet",
    "fit_main_terms",
    "MainTermRegressor",
    "PattersonRow",
    "patterson_diagnostic",
]

SCHEMA_VERSION = 1

# ------------------------------------------------------------------- weight


def phi_eval(u):
    """Bump ``exp(-1/(u-1) - 1/(2-u))`` on ``(1, 2)``, zero elsewhere (scalar or array)."""
    arr = np.asarray(u, dtype=np.float64)
    inside = (arr > 1) & (arr < 2)
    safe = np.where(inside, arr, 1.5)
    out = np.where(inside, np.exp(-1.0 / (safe - 1.0) - 1.0 / (2.0 - safe)), 0.0)
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=1)
def phi_hat0() -> float:
    """``int_1^2 Phi(u) du`` by adaptive quadrature."""
    val, _ = integrate.quad(phi_eval, 1.0, 2.0, epsabs=1e-15, epsrel=1e-13, limit=200)
    return val


def phi_hat0_romberg(levels: int = 12) -> float:
    """Romberg extrapolation of trapezoid sums on ``[1, 2]``; independent of :func:`phi_hat0`."""
    R = [[0.0] * (levels + 1) for _ in range(levels + 1)]
    R[0][0] = 0.5 * (phi_eval(1.0) + phi_eval(2.0))
    for i in range(1, levels + 1):
        n = 1 << i
        mids = 1.0 + (np.arange(1, n, 2) / n)
        R[i][0] = 0.5 * R[i - 1][0] + math.fsum(phi_eval(mids).tolist()) / n
        for k in range(1, i + 1):
            R[i][k] = R[i][k - 1] + (R[i][k - 1] - R[i - 1][k - 1]) / (4**k - 1)
    return R[levels][levels]


@dataclass(frozen=True)
class SmoothWeight:
    """The weight ``Phi``; only the ``bump12`` bump on ``(1, 2)`` is built in."""

    kind: str = "bump12"

    def __post_init__(self) -> None:
        if self.kind != "bump12":
            raise ValueError(f"unknown weight {self.kind!r}")

    def __call__(self, u):
        return phi_eval(u)

    @property
    def support(self) -> tuple[float, float]:
        return (1.0, 2.0)

    @property
    def phi_hat0(self) -> float:
        return phi_hat0()


# --------------------------------------------------------------- constants

_S3 = math.sqrt(3.0)
_S2 = math.sqrt(2.0)
_CUBIC_FACTOR = (3 * _S3 - 1) / (27 * (_S3 - 1))
_QUARTIC_FACTOR = 3 * (2 + _S2) / 128

CONSTANT_FORMULAS = {
    "Aqw": "(1+sqrt(3))*pi/1296",
    "Aqi": "(2+sqrt(2))*pi/512",
    "Cqw": "(3*sqrt(3)-1)/(27*(sqrt(3)-1)) * zeta_Q(w)(3/2)",
    "Cqi": "3*(2+sqrt(2))/128 * zeta_Q(i)(4)",
    "D3": "(3*sqrt(3)-1)/(27*(sqrt(3)-1)) * zeta(3/2)",
    "D4": "3*(2+sqrt(2))/128 * zeta(2)",
}


def predicted_constant(kind: str) -> float:
    """Leading constant of a family's first moment (keys of :data:`CONSTANT_FORMULAS`)."""
    if kind == "Aqw":
        return (1 + _S3) * math.pi / 1296
    if kind == "Aqi":
        return (2 + _S2) * math.pi / 512
    if kind == "Cqw":
        return _CUBIC_FACTOR * zeta_real("dedekind_qw", 1.5)
    if kind == "Cqi":
        return _QUARTIC_FACTOR * zeta_real("dedekind_qi", 4.0)
    if kind == "D3":
        return _CUBIC_FACTOR * zeta_real("riemann", 1.5)
    if kind == "D4":
        return _QUARTIC_FACTOR * zeta_real("riemann", 2.0)
    raise ValueError(f"unknown constant {kind!r}")


# ---------------------------------------------------------------- families


@dataclass(frozen=True)
class FamilySpec:
    name: str
    record_family: str
    field: str
    order: int
    class_modulus: int
    constant: str
    shape: str  # "ylogy" (plus a linear term) or "linear"


FAMILIES = {
    "quad-qw": FamilySpec("quad-qw", "quad-hecke-qw", "qw", 2, 36, "Aqw", "ylogy"),
    "quad-qi": FamilySpec("quad-qi", "quad-hecke-qi", "qi", 2, 16, "Aqi", "ylogy"),
    "cubic": FamilySpec("cubic", "cubic-hecke", "qw", 3, 9, "Cqw", "linear"),
    "quartic": FamilySpec("quartic", "quartic-hecke", "qi", 4, 16, "Cqi", "linear"),
    "dirichlet3": FamilySpec("dirichlet3", "dirichlet-cubic", "qw", 3, 9, "D3", "linear"),
    "dirichlet4": FamilySpec("dirichlet4", "dirichlet-quartic", "qi", 4, 16, "D4", "linear"),
}


def _central_value(task: tuple[str, str, int, int]) -> tuple[float, float, float, float, int]:
    """Worker entry point: ``(L_re, L_im, L_err, balance, truncation)`` for one prime."""
    record_family, field_tag, a, b = task
    pe = prime_element(QuadInt(a, b, field_tag))
    if record_family.startswith("quad-hecke"):
        rec = hecke_L_central_quadratic(pe)
    elif record_family == "cubic-hecke":
        rec = hecke_L_central_order_n(pe, 3)
    elif record_family == "quartic-hecke":
        rec = hecke_L_central_order_n(pe, 4)
    else:
        n = 3 if record_family == "dirichlet-cubic" else 4
        rec = dirichlet_L_central(induced_dirichlet_character(pe, n))
    v = rec.value
    return (v.re, v.im, v.err, rec.balance, rec.truncation)


def _parallel_map(fn, tasks: list, workers: int) -> list:
    if workers <= 1 or len(tasks) < 2:
        return [fn(t) for t in tasks]
    chunk = max(1, len(tasks) // (8 * workers))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, tasks, chunksize=chunk))


# ------------------------------------------------------------------ reports


@dataclass(frozen=True)
class Contribution:
    norm: int
    a: int
    b: int
    L_re: float
    L_im: float
    weight: float


@dataclass
class MomentReport:
    family: str
    y_or_Q: float
    observed_re: float
    observed_im: float
    observed_err: float
    predicted_main: float
    constants_used: dict
    prime_count: int
    phi_hat0: float
    contributions: list = field(default_factory=list, repr=False)
    runtime_s: float = 0.0
    l_values_computed: int = 0

    @property
    def observed(self) -> complex:
        return complex(self.observed_re, self.observed_im)

    @property
    def ratio(self) -> float:
        """``Re(observed) / predicted_main`` (NaN when nothing is predicted)."""
        return self.observed_re / self.predicted_main if self.predicted_main else float("nan")

    @property
    def relative_imag(self) -> float:
        mag = abs(self.observed)
        return abs(self.observed_im) / mag if mag else 0.0

    def payload(self) -> dict:
        """Everything that is a deterministic function of the inputs."""
        return {
            "schema_version": SCHEMA_VERSION,
            "engine_version": ENGINE_VERSION,
            "family": self.family,
            "y_or_Q": self.y_or_Q,
            "observed_sum": {"re": self.observed_re, "im": self.observed_im, "err": self.observed_err},
            "predicted_main": self.predicted_main,
            "ratio": self.ratio,
            "constants_used": dict(self.constants_used),
            "phi_hat0": self.phi_hat0,
            "prime_count": self.prime_count,
        }

    def to_dict(self, include_run: bool = True) -> dict:
        d = self.payload()
        if include_run:
            d["run"] = {"runtime_s": self.runtime_s, "l_values_computed": self.l_values_computed}
        return d

    def to_json(self, include_run: bool = True) -> str:
        return json.dumps(self.to_dict(include_run), sort_keys=True, indent=2)

    def contributions_csv(self) -> str:
        lines = ["norm,a,b,L_re,L_im,weight"]
        for c in self.contributions:
            lines.append(f"{c.norm},{c.a},{c.b},{c.L_re!r},{c.L_im!r},{c.weight!r}")
        return "\n".join(lines) + "\n"


def _class_primes(spec: FamilySpec, lo: float, hi: float):
    top = int(math.ceil(hi))
    if top < 2:
        return []
    primes = enumerate_prime_elements(spec.field, top, spec.class_modulus)
    keep = [pe for pe in primes if lo < pe.norm < hi]
    if spec.record_family.startswith("dirichlet"):
        # conductors are rational primes p = N(pi)
        keep = [pe for pe in keep if pe.split_type == "split"]
    return keep


def moment(
    family: str,
    y: float,
    workers: int = 1,
    cache: Optional[LValueCache] = None,
    B: Optional[float] = None,
) -> MomentReport:
    """First moment of ``family`` (a key of :data:`FAMILIES`) at scale ``y``."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if not y > 0:
        raise ValueError("y must be positive")
    spec = FAMILIES[family]
    start = time.perf_counter()
    primes = _class_primes(spec, y, 2 * y)
    tasks = [(spec.record_family, spec.field, pe.value.a, pe.value.b) for pe in primes]
    missing = [t for t in tasks if cache is None or (t[0], t[2], t[3]) not in cache]
    fresh = _parallel_map(_central_value, missing, workers)
    values = {}
    if cache is not None:
        cache.put_many(
            CacheEntry(t[0], t[2], t[3], v[0], v[1], v[2], v[3], v[4]) for t, v in zip(missing, fresh)
        )
        for t in tasks:
            e = cache.get(t[0], t[2], t[3])
            values[(t[2], t[3])] = (e.L_re, e.L_im, e.L_err)
    else:
        for t, v in zip(missing, fresh):
            values[(t[2], t[3])] = v[:3]

    rows = []
    err_terms = []
    for pe in primes:
        re, im, err = values[(pe.value.a, pe.value.b)]
        w = math.log(pe.norm) * phi_eval(pe.norm / y)
        rows.append(Contribution(pe.norm, pe.value.a, pe.value.b, re, im, w))
        err_terms.append(abs(w) * err)
    obs_re = math.fsum(c.L_re * c.weight for c in rows)
    obs_im = math.fsum(c.L_im * c.weight for c in rows)

    ph = phi_hat0()
    const = predicted_constant(spec.constant)
    used = {spec.constant: const}
    if spec.shape == "ylogy":
        predicted = ph * (const * y * math.log(y) + (B or 0.0) * y)
        used["B"] = B
    else:
        predicted = ph * const * y
    return MomentReport(
        family=family,
        y_or_Q=float(y),
        observed_re=obs_re,
        observed_im=obs_im,
        observed_err=math.fsum(err_terms),
        predicted_main=predicted,
        constants_used=used,
        prime_count=len(rows),
        phi_hat0=ph,
        contributions=rows,
        runtime_s=time.perf_counter() - start,
        l_values_computed=len(missing),
    )


def moment_quadratic(F, y: float, B: Optional[float] = None, **kw) -> MomentReport:
    """Quadratic Hecke family over Z[w] (class 1 mod 36) or Z[i] (class 1 mod 16)."""
    return moment("quad-" + get_field(F).tag, y, B=B, **kw)


def moment_hecke_order_n(F, y: float, n: int, **kw) -> MomentReport:
    """Cubic (Z[w], class 1 mod 9) or quartic (Z[i], class 1 mod 16) Hecke family."""
    tag = get_field(F).tag
    if (n, tag) not in ((3, "qw"), (4, "qi")):
        raise ValueError("order 3 needs Z[w] and order 4 needs Z[i]")
    return moment("cubic" if n == 3 else "quartic", y, **kw)


def moment_dirichlet(n: int, Q: float, **kw) -> MomentReport:
    """Order-``n`` Dirichlet characters mod ``p = N(pi)`` for class primes ``pi``;
    both characters mod ``p`` arise from ``pi`` and its conjugate."""
    if n not in (3, 4):
        raise ValueError("order must be 3 or 4")
    return moment(f"dirichlet{n}", Q, **kw)


# -------------------------------------------------------------------- fitting


class MainTermRegressor(RegressorMixin, BaseEstimator):
    """Least-squares fit of ``observed = phi_hat0 * (A y log y + B y)``.

    ``X`` holds the scales ``y`` (shape ``(n,)`` or ``(n, 1)``); after ``fit``,
    ``coef_ = (A, B)``.
    """

    def __init__(self, phi_hat0: Optional[float] = None):
        self.phi_hat0 = phi_hat0

    def _design(self, X) -> np.ndarray:
        y = np.asarray(X, dtype=np.float64).reshape(-1)
        ph = phi_hat0() if self.phi_hat0 is None else self.phi_hat0
        return ph * np.column_stack([y * np.log(y), y])

    def fit(self, X, target):
        M = self._design(X)
        t = np.asarray(target, dtype=np.float64).reshape(-1)
        if M.shape[0] < 2:
            raise ValueError("need at least two points to fit two constants")
        if np.linalg.matrix_rank(M) < 2:
            raise ValueError("degenerate design: the scales must be distinct")
        # column scaling keeps the normal equations well conditioned
        scale = np.linalg.norm(M, axis=0)
        coef, *_ = np.linalg.lstsq(M / scale, t, rcond=None)
        self.coef_ = coef / scale
        return self

    def predict(self, X):
        return self._design(X) @ self.coef_


def fit_main_terms(points: Sequence[tuple[float, float]], phi_hat: Optional[float] = None) -> tuple[float, float]:
    """``(A_hat, B_hat)`` from ``(y, observed)`` pairs."""
    pts = list(points)
    if len(pts) < 2:
        raise ValueError("need at least two points to fit two constants")
    ys = [p[0] for p in pts]
    obs = [p[1] for p in pts]
    reg = MainTermRegressor(phi_hat).fit(ys, obs)
    return float(reg.coef_[0]), float(reg.coef_[1])


# ------------------------------------------------------------------ Patterson


@dataclass(frozen=True)
class PattersonRow:
    x: float
    S_re: float
    S_im: float
    abs_S: float
    prime_count: int
    shape_27_32: float
    shape_19_20: float


def _gauss_term(task: tuple[str, int, int, int]) -> tuple[float, float]:
    field_tag, n, a, b = task
    z = QuadInt(a, b, field_tag)
    g = gauss_sum_g(n, 1, z)
    N = z.norm
    s = math.log(N) / math.sqrt(N)
    return (g.re * s, g.im * s)


def _patterson_class(n: int) -> tuple[str, QuadInt]:
    if n == 3:
        return "qw", QuadInt(9, 0, "qw")
    if n == 4:
        # primary elements: 1 mod (1+i)^3
        return "qi", QuadInt(-2, 2, "qi")
    raise ValueError("order must be 3 or 4")


def patterson_diagnostic(F, n: int, x_max: float, workers: int = 1) -> list[PattersonRow]:
    """Partial sums ``S(x) = sum_{N(pi) <= x} g_n(pi) log N(pi) / sqrt(N(pi))`` at
    dyadic ``x <= x_max``.

    The cubic sum runs over primes ``1 mod 9`` in Z[w]; the quartic one over
    primary primes of Z[i].
    """
    tag, modulus = _patterson_class(n)
    if get_field(F).tag != tag:
        raise ValueError(f"order {n} Gauss sums live in {get_field(tag).name}")
    if x_max > 1e7:
        raise ValueError("x_max is limited to 1e7")
    if x_max < 2:
        return []
    primes = enumerate_prime_elements(tag, int(x_max), modulus)
    terms = _parallel_map(_gauss_term, [(tag, n, pe.value.a, pe.value.b) for pe in primes], workers)
    norms = np.array([pe.norm for pe in primes], dtype=np.int64)
    rows = []
    k = 1
    while 2**k <= x_max:
        x = float(2**k)
        cnt = int(np.searchsorted(norms, x, side="right"))
        sr = math.fsum(t[0] for t in terms[:cnt])
        si = math.fsum(t[1] for t in terms[:cnt])
        rows.append(PattersonRow(x, sr, si, math.hypot(sr, si), cnt, x ** (27 / 32), x ** (19 / 20)))
        k += 1
    return rows
