"""Numerical path lifting on superelliptic curves ``w**q = f(z)``.

``f`` is either a monic polynomial given by its zeros or a truncated
canonical product. A lift follows one root of ``w**q = f(z)`` along a polyline
by taking small steps: the previous value predicts, Newton's method on
``w**q - f(z)`` corrects, and a step is accepted only when the corrected
root is unambiguously the one nearest the prediction.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import product

from fibercover.claims import HYPOTHESES_NOT_MET, CheckResult, judge
from fibercover.covers import Permutation, SuperellipticSpec, canonical_order, superelliptic_to_cover
from fibercover.errors import (
    CircleNotIsolatingError,
    InvalidSpecError,
    StartNotOnCurveError,
    StepUnderflowError,
)
from fibercover.weierstrass import WeierstrassProductSpec, eval_product, validate_product

MIN_STEP = 1e-12


@dataclass(frozen=True)
class NumericCurve:
    """``w**exponent = f(z)``; ``f`` is a monic polynomial or a canonical product."""

    exponent: int
    zeros: tuple[complex, ...] = ()
    product: WeierstrassProductSpec | None = None

    def __post_init__(self):
        if int(self.exponent) != self.exponent or self.exponent < 2:
            raise InvalidSpecError("exponent must be an integer >= 2", "exponent")
        if self.product is not None:
            spec = validate_product(self.product)
            pts = list(spec.retained_zeros())
            if spec.include_zero_at_origin:
                pts.append(0j)
        else:
            pts = [complex(a) for a in self.zeros]
            if len(set(pts)) != len(pts):
                raise InvalidSpecError("repeated zero", "zeros")
        object.__setattr__(self, "zeros", tuple(canonical_order(pts)))

    @classmethod
    def polynomial(cls, q: int, zeros: Iterable[complex]) -> NumericCurve:
        return cls(q, tuple(complex(a) for a in zeros))

    @classmethod
    def from_product(cls, q: int, spec: WeierstrassProductSpec) -> NumericCurve:
        return cls(q, (), spec)

    @property
    def branch_points(self) -> tuple[complex, ...]:
        return self.zeros

    def f(self, z: complex) -> complex:
        if self.product is not None:
            return eval_product(self.product, z).value
        out = 1 + 0j
        for a in self.zeros:
            out *= z - a
        return out

    def residual(self, z: complex, w: complex) -> float:
        """``|w**q - f(z)|`` scaled by ``max(1, |f(z)|)``."""
        fz = self.f(z)
        return abs(w ** self.exponent - fz) / max(1.0, abs(fz))

    def roots(self, z: complex) -> list[complex]:
        """The ``q`` values of ``w`` over ``z``, ordered by argument in ``(-pi, pi]``."""
        return ordered_roots(self.f(z), self.exponent)

    def branch_distance(self, z: complex) -> float:
        return min((abs(z - a) for a in self.zeros), default=math.inf)


def ordered_roots(c: complex, q: int) -> list[complex]:
    if c == 0:
        return [0j] * q
    r = abs(c) ** (1.0 / q)
    th = cmath.phase(c) / q
    roots = [cmath.rect(r, th + 2 * math.pi * k / q) for k in range(q)]
    return sorted(roots, key=_arg_key)


def _arg_key(w: complex) -> float:
    a = cmath.phase(w)
    return math.pi if a == -math.pi else a


@dataclass(frozen=True)
class PathLift:
    samples: tuple[tuple[float, complex, complex], ...]
    accepted_steps: int
    rejected_steps: int
    smallest_step: float
    min_branch_distance: float
    tolerance: float
    max_residual: float

    @property
    def end_value(self) -> complex:
        return self.samples[-1][2]

    @property
    def start_value(self) -> complex:
        return self.samples[0][2]


def _segment_distance(p: complex, a: complex, b: complex) -> float:
    d = b - a
    if d == 0:
        return abs(p - a)
    t = max(0.0, min(1.0, ((p - a) * d.conjugate()).real / abs(d) ** 2))
    return abs(p - (a + t * d))


def path_branch_distance(path: Sequence[complex], points: Iterable[complex]) -> float:
    pts = list(points)
    if not pts:
        return math.inf
    if len(path) == 1:
        return min(abs(path[0] - a) for a in pts)
    return min(_segment_distance(a, p0, p1) for p0, p1 in zip(path, path[1:]) for a in pts)


def _newton(q: int, c: complex, w: complex) -> complex:
    for _ in range(60):
        if w == 0:
            return w
        step = (w ** q - c) / (q * w ** (q - 1))
        # damping keeps a large correction from hopping sheets
        if abs(step) > 0.5 * abs(w):
            step *= 0.5 * abs(w) / abs(step)
        w -= step
        if abs(step) <= 1e-16 * abs(w):
            break
    return w


def lift_path(curve: NumericCurve, path: Sequence[complex], start_value: complex,
              tol: float = 1e-10, margin: float | None = None) -> PathLift:
    """Continue ``start_value`` along the polyline ``path`` and record every accepted sample.

    ``t`` in the samples is the arc-length fraction. ``margin`` optionally
    demands that the path stay that far from every branch point.
    """
    path = [complex(p) for p in path]
    if not path:
        raise InvalidSpecError("empty path", "path")
    q = curve.exponent
    w = complex(start_value)
    if curve.residual(path[0], w) > tol:
        raise StartNotOnCurveError()
    dmin = path_branch_distance(path, curve.branch_points)
    if margin is not None and dmin < margin:
        raise InvalidSpecError(f"path passes within {dmin:.3g} of a branch point", "path")
    lengths = [abs(b - a) for a, b in zip(path, path[1:])]
    total = math.fsum(lengths)
    samples = [(0.0, path[0], w)]
    accepted = rejected = 0
    smallest = math.inf
    max_res = curve.residual(path[0], w)
    done = 0.0
    h = total / 16 if total else 0.0
    for (a, b), seg in zip(zip(path, path[1:]), lengths):
        s = 0.0
        while s < seg:
            z = a + (b - a) * (s / seg)
            h = min(max(h, MIN_STEP), seg - s, 0.5 * curve.branch_distance(z))
            if h < MIN_STEP:
                raise StepUnderflowError()
            s_new = s + h if s + h < seg else seg
            z_new = b if s_new == seg else a + (b - a) * (s_new / seg)
            c = curve.f(z_new)
            dist = sorted(abs(r - w) for r in ordered_roots(c, q))
            w_new = _newton(q, c, w)
            nearest = min(ordered_roots(c, q), key=lambda r: abs(r - w))
            if dist[1] - dist[0] < 3 * dist[0] or abs(w_new - nearest) > 1e-8 * max(1.0, abs(nearest)):
                rejected += 1
                h /= 2
                if h < MIN_STEP:
                    raise StepUnderflowError()
                continue
            res = abs(w_new ** q - c) / max(1.0, abs(c))
            if res > tol:
                w_new = nearest
                res = abs(w_new ** q - c) / max(1.0, abs(c))
                if res > tol:
                    raise StepUnderflowError(f"step underflow: residual {res:.3g} above tolerance")
            accepted += 1
            smallest = min(smallest, s_new - s)
            max_res = max(max_res, res)
            w = w_new
            s = s_new
            samples.append(((done + s) / total, z_new, w))
            h *= 2
        done += seg
    return PathLift(tuple(samples), accepted, rejected, smallest, dmin, tol, max_res)


def circle_path(center: complex, radius: float, start_angle: float = 0.0, n: int = 64) -> list[complex]:
    """Closed counterclockwise polygon with ``n`` sides, starting and ending at the same vertex."""
    return [center + cmath.rect(radius, start_angle + 2 * math.pi * k / n) for k in range(n)] + \
        [center + cmath.rect(radius, start_angle)]


def reverse_path(path: Sequence[complex]) -> list[complex]:
    return list(reversed(path))


def winding_number(loop: Sequence[complex], point: complex) -> int:
    """Winding number of a closed polyline around ``point``."""
    total = 0.0
    for a, b in zip(loop, loop[1:]):
        total += cmath.phase((b - point) / (a - point))
    return round(total / (2 * math.pi))


def isolating_radius(points: Sequence[complex], a: complex, fraction: float = 0.25) -> float:
    others = [abs(p - a) for p in points if p != a]
    return fraction * min(others) if others else 1.0


def monodromy_loop(a: complex, radius: float, base: complex | None = None, n: int = 64) -> list[complex]:
    """Base point to the circle, once around counterclockwise, and back."""
    if base is None or base == a + radius:
        return circle_path(a, radius, 0.0, n)
    base = complex(base)
    if base == a:
        raise InvalidSpecError("base point coincides with the branch point", "base")
    theta = cmath.phase(base - a)
    circle = circle_path(a, radius, theta, n)
    return [base] + circle + [base]


def numeric_monodromy(curve: NumericCurve, a: complex, radius: float | None = None,
                      base: complex | None = None, tol: float = 1e-10) -> Permutation:
    """Permutation of argument-ordered roots over the base point after one loop around ``a``."""
    a = complex(a)
    pts = curve.branch_points
    if radius is None:
        radius = isolating_radius(pts, a)
    if radius <= 0:
        raise CircleNotIsolatingError("circle not isolating: radius must be positive")
    if any(p != a and abs(p - a) <= radius for p in pts):
        raise CircleNotIsolatingError()
    loop = monodromy_loop(a, radius, base)
    if any(p != a for p in pts) and path_branch_distance(loop, [p for p in pts if p != a]) == 0:
        raise CircleNotIsolatingError("circle not isolating: path meets another branch point")
    roots = curve.roots(loop[0])
    images = []
    for r in roots:
        end = lift_path(curve, loop, r, tol).end_value
        images.append(min(range(len(roots)), key=lambda k: abs(roots[k] - end)))
    return Permutation(tuple(images))


def cross_validate_monodromy(numeric: NumericCurve, combinatorial: SuperellipticSpec,
                             tol: float = 1e-10) -> CheckResult:
    """Compare numeric monodromy with the constructed cycles at every branch point of either side."""
    if numeric.exponent != combinatorial.exponent:
        return judge("monodromy-agreement", False, False, "exponents differ")
    cover = superelliptic_to_cover(combinatorial)
    pts = canonical_order(set(numeric.branch_points) | set(cover.branch_points))
    mismatches = []
    for a in pts:
        radius = isolating_radius(pts, a)
        got = numeric_monodromy(numeric, a, radius, tol=tol)
        want = cover.monodromy_at(a)
        if got != want:
            mismatches.append((a, str(got), str(want)))
    detail = f"{len(pts) - len(mismatches)}/{len(pts)} branch points agree"
    if mismatches:
        detail += "; first mismatch at {} numeric {} constructed {}".format(*mismatches[0])
    return judge("monodromy-agreement", True, not mismatches, detail, mismatches=mismatches)


@dataclass(frozen=True)
class TriplePoint:
    """A point ``(z1, z2, z3)`` with ``z2**p = f(z1)`` and ``z3**q = g(z1)``."""

    z1: complex
    z2: complex
    z3: complex


@dataclass(frozen=True)
class CurvePair:
    f: NumericCurve
    g: NumericCurve

    def residual(self, x: TriplePoint) -> float:
        return max(self.f.residual(x.z1, x.z2), self.g.residual(x.z1, x.z3))

    def on_curve(self, x: TriplePoint, tol: float = 1e-10) -> bool:
        return self.residual(x) <= tol

    @property
    def hyperelliptic(self) -> bool:
        return self.f.exponent == 2 and self.g.exponent == 2


def z2z2_action(x: TriplePoint, which: str) -> TriplePoint:
    """``alpha1`` negates ``z3``, ``alpha2`` negates ``z2``."""
    if which == "alpha1":
        return TriplePoint(x.z1, x.z2, -x.z3)
    if which == "alpha2":
        return TriplePoint(x.z1, -x.z2, x.z3)
    raise ValueError(f"unknown involution {which!r}")


def _key(c: complex) -> complex:
    # collapses -0.0 onto 0.0 so sign-flipped zeros compare equal
    return complex(c.real + 0.0, c.imag + 0.0)


def _norm(x: TriplePoint) -> tuple[complex, complex, complex]:
    return (_key(x.z1), _key(x.z2), _key(x.z3))


def _offcurve(pair: CurvePair, samples: Sequence[TriplePoint], tol: float) -> list[int]:
    return [k for k, x in enumerate(samples) if not pair.on_curve(x, tol)]


def check_quotient_lemma(pair: CurvePair, samples: Sequence[TriplePoint], tol: float = 1e-10) -> CheckResult:
    """Each involution orbit has a single image under the matching coordinate projection."""
    name = "quotient-well-defined"
    if not pair.hyperelliptic:
        return judge(name, False, False, "needs exponents 2 and 2")
    bad = _offcurve(pair, samples, tol)
    if bad:
        return CheckResult(name, False, False, HYPOTHESES_NOT_MET,
                           f"{len(bad)} sample(s) off the curve, first index {bad[0]}", {"off_curve": bad})
    worst = 0.0
    for x in samples:
        a1, a2 = z2z2_action(x, "alpha1"), z2z2_action(x, "alpha2")
        worst = max(worst, abs(x.z1 - a1.z1), abs(x.z2 - a1.z2))
        worst = max(worst, abs(x.z1 - a2.z1), abs(x.z3 - a2.z3))
    return judge(name, True, worst == 0, f"max discrepancy {worst}", discrepancy=worst)


def double_cover_fibers(x: TriplePoint) -> tuple[set, set]:
    """Points over ``(z1, z2)`` and over ``(z1, z3)``: sign choices on the free coordinate."""
    over_first = {_norm(TriplePoint(x.z1, x.z2, s * x.z3)) for s in (1, -1)}
    over_second = {_norm(TriplePoint(x.z1, s * x.z2, x.z3)) for s in (1, -1)}
    return over_first, over_second


def check_double_cover_intersection(pair: CurvePair, samples: Sequence[TriplePoint],
                                    tol: float = 1e-10) -> CheckResult:
    """The two fibers through each sample meet in exactly that sample; projections are injective on them."""
    name = "double-cover-intersection"
    if not pair.hyperelliptic:
        return judge(name, False, False, "needs exponents 2 and 2")
    bad = _offcurve(pair, samples, tol)
    if bad:
        return CheckResult(name, False, False, HYPOTHESES_NOT_MET,
                           f"{len(bad)} sample(s) off the curve, first index {bad[0]}", {"off_curve": bad})
    failures = []
    for k, x in enumerate(samples):
        f1, f2 = double_cover_fibers(x)
        meet = f1 & f2
        injective = len({(p[0], p[2]) for p in f1}) == len(f1)
        if meet != {_norm(x)} or not injective:
            failures.append(k)
    return judge(name, True, not failures,
                 f"{len(samples) - len(failures)}/{len(samples)} samples meet in exactly one point",
                 failures=failures)


def sample_triples(pair: CurvePair, points: Iterable[complex], signs: Iterable[tuple[int, int]]) -> list[TriplePoint]:
    """On-curve triples over ``points`` using principal roots times the given signs."""
    out = []
    for z, (s2, s3) in zip(points, signs):
        z = complex(z)
        out.append(TriplePoint(z, s2 * cmath.sqrt(pair.f.f(z)), s3 * cmath.sqrt(pair.g.f(z))))
    return out


def all_sign_triples(pair: CurvePair, z: complex) -> list[TriplePoint]:
    return sample_triples(pair, [z] * 4, product((1, -1), repeat=2))
