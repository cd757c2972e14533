"""Truncated canonical products with elementary factors.

A product is ``z**m * prod_{l<=L} (1 - z/w_l) * E_l(z)`` with
``E_l(z) = exp(sum_{s=1}^{d(l)} (z/w_l)**s / s)``. Factors are combined in
log space so thousands of terms neither overflow nor underflow.

Truncation error
----------------
For ``u = z/w`` with ``|u| < 1`` the log of a single factor is
``-sum_{s>d} u**s / s``, bounded by ``|u|**(d+1) / (1 - |u|)``. Summing over
every discarded index gives ``B``, and the relative error of the truncated
product is at most ``exp(B) - 1``. The bound is only claimed when every
discarded zero satisfies ``|z| < |w_l| / 2``; zero rules therefore carry a
growth law ``|w_l| >= c * l**alpha`` (for ``l >= valid_from``) that bounds
the far tail by an integral.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

from fibercover.errors import InvalidSpecError, MagnitudeOverflowError, NumericalError

_LOG_MAX = 709.0
_TAIL_EXPLICIT = 2000


@dataclass(frozen=True)
class ZeroRule:
    """Named infinite zero sequence ``w_1, w_2, ...`` with a growth law.

    Kinds:

    * ``symmetric_integers``: ``1, -1, 2, -2, ...`` (``w_{2n-1} = n``, ``w_{2n} = -n``)
    * ``arithmetic``: ``w_l = start + (l - 1) * step``
    """

    kind: str
    params: tuple[tuple[str, complex], ...] = ()

    def __post_init__(self):
        if self.kind not in ("symmetric_integers", "arithmetic"):
            raise InvalidSpecError(f"unknown zero rule {self.kind!r}", "zeros.rule")
        object.__setattr__(self, "params", tuple(sorted(dict(self.params).items())))
        if self.kind == "arithmetic":
            p = dict(self.params)
            if set(p) != {"start", "step"}:
                raise InvalidSpecError("arithmetic rule needs start and step", "zeros.rule")
            start, step = complex(p["start"]), complex(p["step"])
            if step == 0:
                raise InvalidSpecError("step must be non-zero", "zeros.rule")
            k = -start / step
            if k.imag == 0 and k.real >= 0 and k.real == int(k.real):
                raise InvalidSpecError("rule hits the origin", "zeros.rule")

    @classmethod
    def symmetric_integers(cls) -> ZeroRule:
        return cls("symmetric_integers")

    @classmethod
    def arithmetic(cls, start: complex, step: complex) -> ZeroRule:
        return cls("arithmetic", (("start", complex(start)), ("step", complex(step))))

    def __call__(self, l: int) -> complex:
        if l < 1:
            raise IndexError(l)
        if self.kind == "symmetric_integers":
            n = (l + 1) // 2
            return complex(n if l % 2 else -n)
        p = dict(self.params)
        return p["start"] + (l - 1) * p["step"]

    def growth(self) -> tuple[float, float, int]:
        """``(c, alpha, valid_from)`` with ``|w_l| >= c * l**alpha`` for ``l >= valid_from``."""
        if self.kind == "symmetric_integers":
            return 0.5, 1.0, 1
        p = dict(self.params)
        a, s = abs(p["start"]), abs(p["step"])
        # |start + (l-1) step| >= s*l - (s + a) >= s*l/2 once l >= 2(s + a)/s
        return s / 2, 1.0, max(1, math.ceil(2 * (s + a) / s))


@dataclass(frozen=True)
class DSchedule:
    """``d(l) = l`` (``kind="index"``) or ``d(l) = p`` (``kind="constant"``)."""

    kind: str = "index"
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("index", "constant"):
            raise InvalidSpecError(f"unknown schedule {self.kind!r}", "d_schedule")
        if self.kind == "constant" and (int(self.p) != self.p or self.p < 0):
            raise InvalidSpecError("constant degree must be a non-negative integer", "d_schedule")

    @classmethod
    def index(cls) -> DSchedule:
        return cls("index")

    @classmethod
    def constant(cls, p: int) -> DSchedule:
        return cls("constant", int(p))

    def __call__(self, l: int) -> int:
        return l if self.kind == "index" else self.p


@dataclass(frozen=True)
class WeierstrassProductSpec:
    zeros: tuple[complex, ...] | ZeroRule
    include_zero_at_origin: bool = False
    d_schedule: DSchedule = field(default_factory=DSchedule)
    truncation: int | None = None
    tolerance: float = 1e-10

    def __post_init__(self):
        if not isinstance(self.zeros, ZeroRule):
            object.__setattr__(self, "zeros", tuple(complex(w) for w in self.zeros))

    @property
    def is_rule(self) -> bool:
        return isinstance(self.zeros, ZeroRule)

    def zero(self, l: int) -> complex:
        """The ``l``-th zero, 1-based."""
        return self.zeros(l) if self.is_rule else self.zeros[l - 1]

    @property
    def terms(self) -> int:
        """Number of factors actually multiplied."""
        if self.is_rule:
            return self.truncation
        n = len(self.zeros)
        return n if self.truncation is None else min(n, self.truncation)

    def retained_zeros(self) -> list[complex]:
        return [self.zero(l) for l in range(1, self.terms + 1)]


def validate_product(spec: WeierstrassProductSpec) -> WeierstrassProductSpec:
    if spec.truncation is not None and (int(spec.truncation) != spec.truncation or spec.truncation < 0):
        raise InvalidSpecError("truncation must be a non-negative integer", "truncation")
    if spec.is_rule and spec.truncation is None:
        raise InvalidSpecError("a zero rule needs a truncation length", "truncation")
    if not (spec.tolerance > 0 and math.isfinite(spec.tolerance)):
        raise InvalidSpecError("tolerance must be positive", "tolerance")
    if not spec.is_rule:
        seen: set[complex] = set()
        for k, w in enumerate(spec.zeros):
            if not cmath.isfinite(w):
                raise InvalidSpecError("non-finite coordinate", f"zeros[{k}]")
            if w == 0:
                raise InvalidSpecError("origin listed as a zero; use include_zero_at_origin", f"zeros[{k}]")
            if w in seen:
                raise InvalidSpecError(f"repeated zero {w}", f"zeros[{k}]")
            seen.add(w)
    return spec


def sin_product_spec(pairs: int = 200) -> WeierstrassProductSpec:
    """``z * prod_{n<=pairs} (1 - z**2/n**2)``, which tends to ``sin(pi z)/pi``."""
    return WeierstrassProductSpec(
        ZeroRule.symmetric_integers(), include_zero_at_origin=True,
        d_schedule=DSchedule.constant(1), truncation=2 * pairs,
    )


@dataclass(frozen=True)
class EvalResult:
    value: complex
    error_bound: float
    terms_used: int
    certified: bool


def eval_elementary_factor(w: complex, d: int, z: complex) -> complex:
    if w == 0:
        raise ValueError("w must be non-zero")
    if d < 0:
        raise ValueError("d must be non-negative")
    u = z / w
    return cmath.exp(math.fsum((u ** s / s).real for s in range(1, d + 1))
                     + 1j * math.fsum((u ** s / s).imag for s in range(1, d + 1)))


def _log_factor(u: complex, d: int) -> complex:
    """``log((1 - u) * E_d(u))``, accurate for small ``|u|`` and large ``d``."""
    if abs(u) <= 0.5 and d > 0:
        # equals -sum_{s>d} u**s/s; summing the tail avoids cancellation
        acc = 0j
        term = u ** (d + 1)
        s = d + 1
        while True:
            acc -= term / s
            if abs(term) <= 1e-18 * max(abs(acc), 1e-300) or term == 0:
                return acc
            term *= u
            s += 1
    out = cmath.log(1 - u)
    try:
        for s in range(1, d + 1):
            out += u ** s / s
    except OverflowError:
        raise MagnitudeOverflowError() from None
    if not cmath.isfinite(out):
        raise MagnitudeOverflowError()
    return out


def _tail_bound(spec: WeierstrassProductSpec, z: complex) -> tuple[float, bool]:
    """Relative error bound for the discarded factors and whether it is certified."""
    if not spec.is_rule:
        return 0.0, True
    L = spec.truncation
    az = abs(z)
    if az == 0:
        return 0.0, True
    cap = max(2 * L, L + _TAIL_EXPLICIT)
    terms = []
    for l in range(L + 1, cap + 1):
        r = az / abs(spec.zero(l))
        if r >= 0.5:
            return math.inf, False
        d = spec.d_schedule(l)
        terms.append(r ** (d + 1) / (1 - r))
    c, alpha, valid_from = spec.zeros.growth()
    e = spec.d_schedule(cap + 1) + 1
    if valid_from > cap + 1 or c * (cap + 1) ** alpha <= 2 * az or alpha * e <= 1:
        return math.inf, False
    # sum_{l>cap} 2 (|z|/(c l^alpha))^e <= 2 (|z|/c)^e cap^(1 - alpha e) / (alpha e - 1)
    log_rem = (math.log(2) + e * math.log(az / c) + (1 - alpha * e) * math.log(cap)
               - math.log(alpha * e - 1))
    terms.append(math.exp(log_rem) if log_rem < _LOG_MAX else math.inf)
    b = math.fsum(terms)
    return math.expm1(b), math.isfinite(b)


def _log_product(spec: WeierstrassProductSpec, z: complex) -> complex | None:
    """Log of the truncated product, ``None`` when ``z`` is a zero."""
    parts = []
    if spec.include_zero_at_origin:
        if z == 0:
            return None
        parts.append(cmath.log(z))
    for l in range(1, spec.terms + 1):
        w = spec.zero(l)
        if z == w:
            return None
        parts.append(_log_factor(z / w, spec.d_schedule(l)))
    return complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))


def eval_product(spec: WeierstrassProductSpec, z: complex) -> EvalResult:
    spec = validate_product(spec)
    z = complex(z)
    bound, certified = _tail_bound(spec, z)
    log_value = _log_product(spec, z)
    if log_value is None:
        return EvalResult(0j, bound, spec.terms, certified)
    if log_value.real > _LOG_MAX:
        raise MagnitudeOverflowError()
    arg = math.remainder(log_value.imag, 2 * math.pi)
    return EvalResult(cmath.exp(complex(log_value.real, arg)), bound, spec.terms, certified)


def log_abs_product(spec: WeierstrassProductSpec, z: complex) -> float:
    """``log |product|`` without exponentiating; ``-inf`` at zeros."""
    spec = validate_product(spec)
    lv = _log_product(spec, complex(z))
    return -math.inf if lv is None else lv.real


def log_derivative(spec: WeierstrassProductSpec, z: complex) -> complex:
    """``f'/f`` of the truncated product.

    Each factor contributes ``1/(z - w) + sum_{s<=d} z**(s-1)/w**s``, which
    telescopes to ``(z/w)**d / (z - w)``.
    """
    spec = validate_product(spec)
    z = complex(z)
    parts = []
    if spec.include_zero_at_origin:
        if z == 0:
            raise NumericalError("pole at a zero of the product")
        parts.append(1 / z)
    for l in range(1, spec.terms + 1):
        w = spec.zero(l)
        if z == w:
            raise NumericalError("pole at a zero of the product")
        try:
            parts.append((z / w) ** spec.d_schedule(l) / (z - w))
        except OverflowError:
            raise MagnitudeOverflowError() from None
    out = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
    if not cmath.isfinite(out):
        raise MagnitudeOverflowError()
    return out


def eval_many(spec: WeierstrassProductSpec, points: Sequence[complex]) -> list[EvalResult]:
    return [eval_product(spec, z) for z in points]
