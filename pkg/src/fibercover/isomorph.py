"""Affine symmetries of finite zero configurations.

Every biholomorphism of the plane is ``t(z) = a*z + c`` with ``a != 0``, and
such a map is fixed by the images of two distinct points. The search
therefore anchors two points of the source set and tries every ordered pair
of distinct target points as their images.
"""

from __future__ import annotations

import cmath
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from fibercover.covers import canonical_order
from fibercover.errors import InvalidSpecError

MATCH_TOL = 1e-9
MAX_COORD = 1e3


@dataclass(frozen=True)
class AffineMap:
    a: complex
    c: complex

    def __post_init__(self):
        if self.a == 0:
            raise ValueError("a must be non-zero")

    @classmethod
    def identity(cls) -> AffineMap:
        return cls(1 + 0j, 0j)

    @classmethod
    def through(cls, p0: complex, p1: complex, q0: complex, q1: complex) -> AffineMap:
        """The map sending ``p0 -> q0`` and ``p1 -> q1``."""
        a = (q1 - q0) / (p1 - p0)
        return cls(a, q0 - a * p0)

    def __call__(self, z: complex) -> complex:
        return self.a * z + self.c

    def then(self, other: AffineMap) -> AffineMap:
        """Apply ``self`` first, then ``other``."""
        return AffineMap(other.a * self.a, other.a * self.c + other.c)

    def inverse(self) -> AffineMap:
        return AffineMap(1 / self.a, -self.c / self.a)

    def close_to(self, other: AffineMap, tol: float = MATCH_TOL) -> bool:
        return abs(self.a - other.a) <= tol and abs(self.c - other.c) <= tol

    def sort_key(self) -> tuple[float, float, float, float]:
        # rounded so floating noise around zero cannot reorder equal maps
        return tuple(round(x, 9) + 0.0 for x in (self.a.real, self.a.imag, self.c.real, self.c.imag))

    def __str__(self) -> str:
        return f"z -> ({_fmt(self.a)})*z + ({_fmt(self.c)})"


def _fmt(z: complex) -> str:
    re, im = z.real + 0.0, z.imag + 0.0
    return f"{re:.12g}{im:+.12g}j"


def sanitize_points(values: Iterable, name: str) -> tuple[complex, ...]:
    pts = []
    for k, v in enumerate(values):
        try:
            z = complex(v)
        except (TypeError, ValueError):
            raise InvalidSpecError("not a complex number", f"{name}[{k}]") from None
        if not cmath.isfinite(z) or abs(z) > MAX_COORD:
            raise InvalidSpecError(f"coordinate magnitude must be at most {MAX_COORD:g}", f"{name}[{k}]")
        for j, p in enumerate(pts):
            if abs(p - z) <= MATCH_TOL:
                raise InvalidSpecError(f"point repeats {name}[{j}]", f"{name}[{k}]")
        pts.append(z)
    return tuple(canonical_order(pts))


@dataclass(frozen=True)
class ZeroConfiguration:
    """Zeros ``W`` of ``f`` with subsets ``A`` (zeros of ``g``) and ``B`` (zeros of ``h``)."""

    W: tuple[complex, ...]
    A: tuple[complex, ...]
    B: tuple[complex, ...]

    def __post_init__(self):
        W = sanitize_points(self.W, "W")
        A = sanitize_points(self.A, "A")
        B = sanitize_points(self.B, "B")
        for name, sub in (("A", A), ("B", B)):
            for k, z in enumerate(sub):
                if _match(z, W) is None:
                    raise InvalidSpecError("not a point of W", f"{name}[{k}]")
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)


def _match(z: complex, pts: Sequence[complex], tol: float = MATCH_TOL) -> int | None:
    for k, p in enumerate(pts):
        if abs(z - p) <= tol:
            return k
    return None


def maps_onto(t: AffineMap, src: Sequence[complex], dst: Sequence[complex], tol: float = MATCH_TOL) -> bool:
    """``t(src) == dst`` as sets, up to ``tol``."""
    if len(src) != len(dst):
        return False
    used = set()
    for z in src:
        k = _match(t(z), dst, tol)
        if k is None or k in used:
            return False
        used.add(k)
    return True


def _candidates(src: Sequence[complex], dst: Sequence[complex]) -> list[AffineMap]:
    p0, p1 = src[0], src[1]
    out = []
    for i, q0 in enumerate(dst):
        for j, q1 in enumerate(dst):
            if i != j:
                out.append(AffineMap.through(p0, p1, q0, q1))
    return out


def find_affine_equivalences(cfg: ZeroConfiguration, *, strict_pointwise: bool = False,
                             tol: float = MATCH_TOL) -> list[AffineMap]:
    """Affine maps with ``t(W) = W`` and ``t(A) = B``, sorted by ``(a, c)``.

    With ``strict_pointwise`` every point of ``W`` must be fixed, not just the set.
    """
    W = cfg.W
    if len(W) < 2:
        raise InvalidSpecError("underdetermined: need at least two points", "W")
    out = []
    for t in _candidates(W, W):
        if not maps_onto(t, W, W, tol) or not maps_onto(t, cfg.A, cfg.B, tol):
            continue
        if strict_pointwise and any(abs(t(w) - w) > tol for w in W):
            continue
        out.append(t)
    return sorted(out, key=AffineMap.sort_key)


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    witnesses: tuple[AffineMap, ...]
    reason: str
    mode: str = "setwise"


def curves_isomorphic(cfg: ZeroConfiguration, *, strict_pointwise: bool = False,
                      tol: float = MATCH_TOL) -> EquivalenceResult:
    """Whether the two fiber products built from ``(W, A)`` and ``(W, B)`` are isomorphic."""
    mode = "pointwise" if strict_pointwise else "setwise"
    if len(cfg.A) != len(cfg.B):
        return EquivalenceResult(False, (), f"|A| = {len(cfg.A)} differs from |B| = {len(cfg.B)}", mode)
    maps = find_affine_equivalences(cfg, strict_pointwise=strict_pointwise, tol=tol)
    if not maps:
        return EquivalenceResult(False, (), "no affine map preserves W and carries A onto B", mode)
    return EquivalenceResult(True, tuple(maps), f"{len(maps)} affine map(s)", mode)


def hyperelliptic_equivalence(W1: Iterable[complex], W2: Iterable[complex],
                              tol: float = MATCH_TOL) -> EquivalenceResult:
    """Whether some affine map carries ``W1`` onto ``W2``."""
    W1, W2 = sanitize_points(W1, "W1"), sanitize_points(W2, "W2")
    if len(W1) != len(W2):
        return EquivalenceResult(False, (), f"|W1| = {len(W1)} differs from |W2| = {len(W2)}")
    if len(W1) < 2:
        # a single point maps onto a single point by any translation
        if W1:
            t = AffineMap(1 + 0j, W2[0] - W1[0])
            return EquivalenceResult(True, (t,), "translation of a single point")
        return EquivalenceResult(True, (AffineMap.identity(),), "empty sets")
    maps = sorted((t for t in _candidates(W1, W2) if maps_onto(t, W1, W2, tol)), key=AffineMap.sort_key)
    if not maps:
        return EquivalenceResult(False, (), "no affine map carries W1 onto W2")
    return EquivalenceResult(True, tuple(maps), f"{len(maps)} affine map(s)")
