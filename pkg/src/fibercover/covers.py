"""Finite-degree branched covers of the complex plane, described by monodromy.

Sheets are labelled ``0..n-1``. A cover is a list of branch points together
with one permutation per point; the permutation records how sheets are
shuffled by a small loop around that point.

Conventions
-----------
* Permutations compose left to right: ``p * q`` applies ``p`` first.
* The listed order of branch points is the order in which the loop around
  all of them is assembled. Generated specs use the canonical planar order
  (increasing real part, ties by increasing imaginary part).
* Branch points are matched exactly; there is no tolerance at this layer.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from fibercover.claims import MISMATCH, CheckResult, judge
from fibercover.errors import InvalidSpecError
from fibercover.unionfind import DisjointSet


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``{0..n-1}`` stored as its image list."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(len(images))):
            raise InvalidSpecError("not a bijection")

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> Permutation:
        """``Permutation.from_cycles(4, (0, 1), (2, 3))`` is ``(0 1)(2 3)``."""
        images = list(range(n))
        seen: set[int] = set()
        for cyc in cycles:
            for k, a in enumerate(cyc):
                if a in seen or not 0 <= a < n:
                    raise InvalidSpecError(f"bad cycle {tuple(cyc)!r}")
                seen.add(a)
                images[a] = cyc[(k + 1) % len(cyc)]
        return cls(tuple(images))

    @classmethod
    def cycle(cls, n: int) -> Permutation:
        """The standard ``n``-cycle ``(0 1 ... n-1)``."""
        return cls(tuple((i + 1) % n for i in range(n)))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: Permutation) -> Permutation:
        # left to right: apply self, then other
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return Permutation(tuple(other.images[i] for i in self.images))

    def inverse(self) -> Permutation:
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def conjugate(self, by: Permutation) -> Permutation:
        """Relabel sheets through ``by``: the result maps ``by(i)`` to ``by(self(i))``."""
        return by.inverse() * self * by

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self, include_fixed: bool = True) -> list[tuple[int, ...]]:
        """Cycle decomposition; each cycle starts at its smallest element, cycles sorted by it."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            if include_fixed or len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def __str__(self) -> str:
        cyc = self.cycles(include_fixed=False)
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


def compose(perms: Iterable[Permutation], n: int) -> Permutation:
    """Left-to-right product of ``perms``; identity of degree ``n`` when empty."""
    out = Permutation.identity(n)
    for p in perms:
        out = out * p
    return out


def orbits(generators: Iterable[Permutation], n: int) -> list[tuple[int, ...]]:
    """Orbits of the group generated by ``generators`` on ``{0..n-1}``, sorted."""
    ds = DisjointSet(range(n))
    for g in generators:
        for i, j in enumerate(g.images):
            ds.union(i, j)
    return sorted(tuple(sorted(grp)) for grp in ds.groups())


def canonical_key(z: complex) -> tuple[float, float]:
    return (z.real, z.imag)


def canonical_order(points: Iterable[complex]) -> list[complex]:
    """Increasing real part, ties by increasing imaginary part."""
    return sorted((complex(p) for p in points), key=canonical_key)


@dataclass(frozen=True)
class BranchedCoverSpec:
    """Degree-``n`` cover of the plane with monodromy ``monodromy[k]`` around ``branch_points[k]``.

    Construct directly and pass through :func:`validate`, or use :func:`make_cover`.
    """

    degree: int
    branch_points: tuple[complex, ...] = ()
    monodromy: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "branch_points", tuple(self.branch_points))
        object.__setattr__(self, "monodromy", tuple(self.monodromy))

    def monodromy_at(self, point: complex) -> Permutation:
        """Monodromy at ``point``; identity when the cover does not branch there."""
        for p, perm in zip(self.branch_points, self.monodromy):
            if p == point:
                return perm
        return Permutation.identity(self.degree)


def validate(spec: BranchedCoverSpec) -> BranchedCoverSpec:
    """Return an equivalent spec with typed fields, or raise :class:`InvalidSpecError`."""
    try:
        n = int(spec.degree)
    except (TypeError, ValueError):
        raise InvalidSpecError("degree must be an integer", "degree") from None
    if n < 1 or n != spec.degree:
        raise InvalidSpecError("degree must be a positive integer", "degree")
    if len(spec.branch_points) != len(spec.monodromy):
        raise InvalidSpecError(
            f"{len(spec.branch_points)} branch points but {len(spec.monodromy)} permutations",
            "monodromy",
        )
    points: list[complex] = []
    for k, p in enumerate(spec.branch_points):
        try:
            z = complex(p)
        except (TypeError, ValueError):
            raise InvalidSpecError("not a complex number", f"branch_points[{k}]") from None
        if not cmath.isfinite(z):
            raise InvalidSpecError("non-finite coordinate", f"branch_points[{k}]")
        if z in points:
            raise InvalidSpecError(
                f"duplicate branch point {z} (first at index {points.index(z)})",
                f"branch_points[{k}]",
            )
        points.append(z)
    perms: list[Permutation] = []
    for k, m in enumerate(spec.monodromy):
        where = f"monodromy[{k}]"
        if isinstance(m, Permutation):
            perm = m
        else:
            try:
                perm = Permutation(tuple(m))
            except InvalidSpecError as exc:
                raise InvalidSpecError(str(exc), where) from None
            except TypeError:
                raise InvalidSpecError("expected a list of sheet indices", where) from None
        if perm.degree != n:
            raise InvalidSpecError(f"permutation has degree {perm.degree}, expected {n}", where)
        if perm.is_identity():
            raise InvalidSpecError("identity monodromy", where)
        perms.append(perm)
    return BranchedCoverSpec(n, tuple(points), tuple(perms))


def make_cover(degree: int, branch_points: Iterable, monodromy: Iterable) -> BranchedCoverSpec:
    return validate(BranchedCoverSpec(degree, tuple(branch_points), tuple(monodromy)))


def trivial_cover(degree: int = 1) -> BranchedCoverSpec:
    return BranchedCoverSpec(degree, (), ())


def infinity_monodromy(spec: BranchedCoverSpec) -> Permutation:
    """Monodromy of a loop enclosing every branch point, in listed order."""
    return compose(spec.monodromy, spec.degree)


def is_connected(spec: BranchedCoverSpec) -> bool:
    return len(orbits(spec.monodromy, spec.degree)) == 1


@dataclass(frozen=True)
class ComponentInvariants:
    """Invariants of one connected component.

    ``euler_characteristic`` and ``genus`` refer to the compactified
    component (points over infinity filled in); ``ends_count`` is the number
    of those filled points, i.e. the ends of the affine surface.
    """

    sheets: tuple[int, ...]
    degree: int
    ends_count: int
    genus: int
    euler_characteristic: int

    @property
    def affine_euler_characteristic(self) -> int:
        return self.euler_characteristic - self.ends_count


@dataclass(frozen=True)
class CoverInvariants:
    components: tuple[ComponentInvariants, ...] = field(default_factory=tuple)

    @property
    def component_count(self) -> int:
        return len(self.components)

    @property
    def total_genus(self) -> int:
        return sum(c.genus for c in self.components)

    @property
    def total_ends(self) -> int:
        return sum(c.ends_count for c in self.components)


def _cycles_on(perm: Permutation, sheets: set[int]) -> int:
    return sum(1 for c in perm.cycles() if c[0] in sheets)


def cover_invariants(spec: BranchedCoverSpec) -> CoverInvariants:
    """Components, ends and genus by Riemann-Hurwitz on each orbit.

    For a component of degree ``d`` over a sphere with ``r`` branch points
    plus infinity, ``chi = d*(2 - (r+1)) + sum of cycle counts`` over the
    ``r+1`` special points.
    """
    inf = infinity_monodromy(spec)
    r = len(spec.monodromy)
    comps = []
    for orbit in orbits(spec.monodromy, spec.degree):
        sheets = set(orbit)
        d = len(orbit)
        ends = _cycles_on(inf, sheets)
        chi = d * (2 - (r + 1)) + ends + sum(_cycles_on(p, sheets) for p in spec.monodromy)
        if chi % 2:
            raise AssertionError("odd Euler characteristic")  # cannot happen for valid data
        comps.append(ComponentInvariants(orbit, d, ends, (2 - chi) // 2, chi))
    return CoverInvariants(tuple(comps))


@dataclass(frozen=True)
class SuperellipticSpec:
    """The affine curve ``w**exponent = prod(z - a for a in zeros)``."""

    exponent: int
    zeros: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "zeros", tuple(complex(z) for z in self.zeros))


def superelliptic_to_cover(spec: SuperellipticSpec) -> BranchedCoverSpec:
    """Projection to the first coordinate as a degree-``q`` cover with a ``q``-cycle at every zero."""
    q = spec.exponent
    if int(q) != q or q < 2:
        raise InvalidSpecError("exponent must be an integer >= 2", "exponent")
    seen: set[complex] = set()
    for k, z in enumerate(spec.zeros):
        if z in seen:
            raise InvalidSpecError(f"duplicate zero {z}", f"zeros[{k}]")
        seen.add(z)
    pts = canonical_order(spec.zeros)
    cyc = Permutation.cycle(q)
    return validate(BranchedCoverSpec(q, tuple(pts), tuple(cyc for _ in pts)))


def hyperelliptic(zeros: Iterable[complex]) -> BranchedCoverSpec:
    return superelliptic_to_cover(SuperellipticSpec(2, tuple(zeros)))


def superelliptic_expected(q: int, zero_count: int) -> tuple[int, int]:
    """Closed-form (ends, genus) of ``w**q = f`` with ``zero_count`` simple zeros.

    Ends are ``gcd(q, zero_count)``; the genus follows from Riemann-Hurwitz.
    """
    if zero_count < 1:
        raise ValueError("need at least one zero")
    ends = math.gcd(q, zero_count)
    chi = q * (2 - (zero_count + 1)) + zero_count + ends
    return ends, (2 - chi) // 2


def superelliptic_claim_checks(spec: SuperellipticSpec) -> list[CheckResult]:
    """Compare computed invariants of ``w**q = f`` (``2k`` zeros) with ``q`` ends and genus ``k - 1``.

    At ``q = 2`` this is a theorem and a failure is a counterexample
    candidate. For ``q >= 3`` the computed values usually differ
    (ends are ``gcd(q, 2k)``), so a failure is labelled a mismatch.
    """
    inv = cover_invariants(superelliptic_to_cover(spec))
    q, n = spec.exponent, len(spec.zeros)
    even = n >= 2 and n % 2 == 0
    k = n // 2
    holds = inv.component_count == 1 and inv.total_ends == q and inv.total_genus == k - 1
    detail = (f"ends {inv.total_ends} (claimed {q}), genus {inv.total_genus} (claimed {k - 1})"
              if even else f"{n} zeros is not an even count")
    if q == 2:
        return [judge("hyperelliptic-genus", even, holds, detail)]
    return [judge("superelliptic-ends-genus", even, holds, detail, on_failure=MISMATCH)]
