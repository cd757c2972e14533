"""Covers with infinitely many branch points, modelled as a finite prefix plus a periodic tail.

Tail point ``k`` sits on the positive real axis at ``tail_start + k *
tail_step`` and carries ``tail_generators[k % len(tail_generators)]``. Since
every tail generator recurs beyond any radius, the cover over the exterior of
a large disc is governed by the group generated by the tail generators and
the loop around the disc. The orbits of that group are the ends.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, replace
from fractions import Fraction

from fibercover.claims import MISMATCH, CheckResult, judge
from fibercover.covers import (
    BranchedCoverSpec,
    Permutation,
    canonical_order,
    compose,
    cover_invariants,
    orbits,
    trivial_cover,
    validate,
)
from fibercover.errors import InvalidSpecError
from fibercover.unionfind import DisjointSet


@dataclass(frozen=True)
class InfiniteCoverModel:
    degree: int
    prefix: BranchedCoverSpec
    tail_generators: tuple[Permutation, ...]
    tail_start: float = 1.0
    tail_step: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "tail_generators", tuple(self.tail_generators))

    @property
    def period(self) -> int:
        return len(self.tail_generators)

    def tail_point(self, k: int) -> complex:
        return complex(self.tail_start + k * self.tail_step, 0.0)

    def tail_generator(self, k: int) -> Permutation:
        return self.tail_generators[k % self.period]

    def realized_points(self, radius: float) -> list[tuple[complex, Permutation]]:
        """Branch data with modulus below ``radius``, in canonical planar order."""
        pts = [(p, m) for p, m in zip(self.prefix.branch_points, self.prefix.monodromy)
               if abs(p) < radius]
        k = 0
        while self.tail_start + k * self.tail_step < radius:
            pts.append((self.tail_point(k), self.tail_generator(k)))
            k += 1
        order = {p: i for i, p in enumerate(canonical_order(p for p, _ in pts))}
        return sorted(pts, key=lambda pm: order[pm[0]])


def infinite_cover(degree: int, tail_generators: Iterable, *, prefix: BranchedCoverSpec | None = None,
                   tail_start: float = 1.0, tail_step: float = 1.0) -> InfiniteCoverModel:
    gens = []
    for k, g in enumerate(tail_generators):
        try:
            gens.append(g if isinstance(g, Permutation) else Permutation(tuple(g)))
        except InvalidSpecError as exc:
            raise InvalidSpecError(str(exc), f"tail_generators[{k}]") from None
    return validate_model(InfiniteCoverModel(
        degree, prefix if prefix is not None else trivial_cover(degree), tuple(gens),
        float(tail_start), float(tail_step)))


def validate_model(m: InfiniteCoverModel) -> InfiniteCoverModel:
    prefix = validate(m.prefix)
    if prefix.degree != m.degree:
        raise InvalidSpecError("prefix degree differs from model degree", "prefix")
    if not m.tail_generators:
        raise InvalidSpecError("empty tail", "tail_generators")
    for k, g in enumerate(m.tail_generators):
        if g.degree != m.degree:
            raise InvalidSpecError(f"degree {g.degree}, expected {m.degree}", f"tail_generators[{k}]")
        if g.is_identity():
            raise InvalidSpecError("identity monodromy", f"tail_generators[{k}]")
    if not (math.isfinite(m.tail_step) and m.tail_step > 0):
        raise InvalidSpecError("tail step must be positive", "tail_step")
    inner = max((abs(p) for p in prefix.branch_points), default=0.0)
    if not (math.isfinite(m.tail_start) and m.tail_start > inner):
        raise InvalidSpecError("tail must start outside every prefix point", "tail_start")
    return InfiniteCoverModel(m.degree, prefix, m.tail_generators, m.tail_start, m.tail_step)


def infinite_hyperelliptic(tail_start: float = 1.0, tail_step: float = 1.0) -> InfiniteCoverModel:
    """``w**2 = f`` with simple zeros at ``tail_start + k*tail_step``."""
    return infinite_cover(2, [Permutation.cycle(2)], tail_start=tail_start, tail_step=tail_step)


def infinite_superelliptic(q: int, tail_start: float = 1.0, tail_step: float = 1.0) -> InfiniteCoverModel:
    return infinite_cover(q, [Permutation.cycle(q)], tail_start=tail_start, tail_step=tail_step)


def truncate(model: InfiniteCoverModel | BranchedCoverSpec, radius: float) -> BranchedCoverSpec:
    """The finite cover over the disc ``|z| < radius``."""
    if isinstance(model, BranchedCoverSpec):
        pts = [(p, m) for p, m in zip(model.branch_points, model.monodromy) if abs(p) < radius]
        return BranchedCoverSpec(model.degree, [p for p, _ in pts], [m for _, m in pts])
    _check_radius(model, radius)
    pts = model.realized_points(radius)
    return validate(BranchedCoverSpec(model.degree, [p for p, _ in pts], [m for _, m in pts]))


def _check_radius(model, radius: float) -> None:
    if isinstance(model, InfiniteCoverModel):
        on = [p for p in model.prefix.branch_points if abs(p) == radius]
        k = (radius - model.tail_start) / model.tail_step
        if k >= 0 and k == int(k):
            on.append(model.tail_point(int(k)))
    else:
        on = [p for p in model.branch_points if abs(p) == radius]
    if on:
        raise ValueError(f"radius {radius} passes through branch point {on[0]}")


def exterior_partition(model: InfiniteCoverModel | BranchedCoverSpec, radius: float) -> list[tuple[int, ...]]:
    """Sheet orbits over ``|z| > radius``.

    Generated by the monodromy of every branch point outside the disc (for an
    infinite model: every tail generator plus prefix points outside) and the
    boundary loop, the ordered product of the monodromies inside.
    """
    _check_radius(model, radius)
    if isinstance(model, BranchedCoverSpec):
        inside = [m for p, m in zip(model.branch_points, model.monodromy) if abs(p) < radius]
        outside = [m for p, m in zip(model.branch_points, model.monodromy) if abs(p) > radius]
    else:
        inside = [m for _, m in model.realized_points(radius)]
        outside = [m for p, m in zip(model.prefix.branch_points, model.prefix.monodromy)
                   if abs(p) > radius]
        outside += list(model.tail_generators)
    boundary = compose(inside, model.degree)
    return orbits(outside + [boundary], model.degree)


@dataclass(frozen=True)
class End:
    sheets: tuple[int, ...]
    non_planar: bool


@dataclass(frozen=True)
class EndsReport:
    """Ends of a model.

    For fiber products ``ends`` are those of the glued singular surface and
    ``normalization_ends`` the orbits before gluing; otherwise the latter is ``None``.
    """

    ends: tuple[End, ...]
    stabilization_index: int
    stabilization_radius: float
    genus_profile: tuple[tuple[float, int], ...]
    normalization_ends: tuple[End, ...] | None = None

    @property
    def ends_count(self) -> int:
        return len(self.ends)

    @property
    def is_loch_ness_monster(self) -> bool:
        return len(self.ends) == 1 and self.ends[0].non_planar


def probe_radii(model: InfiniteCoverModel, periods: int = 5) -> list[float]:
    """Radii between consecutive realized moduli, reaching ``periods`` tail periods past the prefix."""
    moduli = sorted({abs(p) for p in model.prefix.branch_points})
    last = model.tail_start + (periods * model.period) * model.tail_step
    k = 0
    while model.tail_start + k * model.tail_step <= last:
        moduli.append(model.tail_start + k * model.tail_step)
        k += 1
    moduli = sorted(set(moduli))
    radii = [moduli[0] / 2] if moduli[0] > 0 else []
    radii += [(a + b) / 2 for a, b in zip(moduli, moduli[1:])]
    return radii


def boundary_monodromy(model: InfiniteCoverModel) -> Permutation:
    """Ordered product of all prefix monodromies."""
    return compose(model.prefix.monodromy, model.degree)


def ends_of_infinite_cover(m: InfiniteCoverModel, *, periods: int = 5) -> EndsReport:
    m = validate_model(m)
    parts = orbits(list(m.tail_generators) + [boundary_monodromy(m)], m.degree)
    ends = tuple(
        End(orb, any(g.images[i] != i for g in m.tail_generators for i in orb)) for orb in parts
    )
    radii = probe_radii(m, periods)
    trace = [exterior_partition(m, r) for r in radii]
    if trace[-1] != parts:
        raise AssertionError("exterior partition did not settle on the end orbits")
    idx = len(trace) - 1
    while idx > 0 and trace[idx - 1] == parts:
        idx -= 1
    profile = tuple((r, cover_invariants(truncate(m, r)).total_genus)
                    for r in radii if r > m.tail_start)
    return EndsReport(ends, idx, radii[idx], profile)


@dataclass(frozen=True)
class TraceEntry:
    radius: float
    exterior_components: int
    interior_genus: int
    interior_points: int
    interior_ends: int


def exhaustion_trace(m: InfiniteCoverModel | BranchedCoverSpec, radii: Sequence[float]) -> list[TraceEntry]:
    """Per radius: components over the exterior and genus of the cover over the disc."""
    out = []
    for r in radii:
        ext = exterior_partition(m, r)
        inner = truncate(m, r)
        inv = cover_invariants(inner)
        out.append(TraceEntry(r, len(ext), inv.total_genus, len(inner.branch_points), inv.total_ends))
    return out


def _pair(n2: int, sigma: Permutation, tau: Permutation) -> Permutation:
    n1 = sigma.degree
    return Permutation(tuple(
        sigma.images[i] * n2 + tau.images[j] for i in range(n1) for j in range(n2)))


def _lattice_index(x: float, start: float, step: float) -> int | None:
    k = (Fraction(x) - Fraction(start)) / Fraction(step)
    return int(k) if k.denominator == 1 and k >= 0 else None


def infinite_fiber_product(f: InfiniteCoverModel, g: InfiniteCoverModel | BranchedCoverSpec) -> InfiniteCoverModel:
    """Pair-grid model of the fiber product of ``f`` with ``g``.

    ``g`` is either a finite cover or an infinite model whose tail lies on
    the lattice of ``f``'s tail points. Tail points of ``f`` missed by ``g``
    carry ``(sigma, id)``; shared ones carry ``(sigma, tau)``.
    """
    f = validate_model(f)
    n1 = f.degree
    if isinstance(g, BranchedCoverSpec):
        g = validate(g)
        n2 = g.degree
        g_prefix = g
        g_tail = None
    else:
        g = validate_model(g)
        n2 = g.degree
        g_prefix = g.prefix
        k0 = _lattice_index(g.tail_start, f.tail_start, f.tail_step)
        ratio = Fraction(g.tail_step) / Fraction(f.tail_step)
        if k0 is None or ratio.denominator != 1:
            raise InvalidSpecError("second tail is not a subsequence of the first", "tail_start")
        g_tail = (k0, int(ratio))

    g_points = {p: m for p, m in zip(g_prefix.branch_points, g_prefix.monodromy)}
    ident2 = Permutation.identity(n2)

    def tau_at_tail(k: int) -> Permutation:
        w = f.tail_point(k)
        if w in g_points:
            return g_points[w]
        if g_tail is not None:
            k0, step = g_tail
            if k >= k0 and (k - k0) % step == 0:
                return g.tail_generator((k - k0) // step)
        return ident2

    # cut: first f tail index past every finite point of g and past the start of g's tail
    far = max((abs(p) for p in g_points), default=0.0)
    cut = 0
    while f.tail_point(cut).real <= far:
        cut += 1
    if g_tail is not None:
        cut = max(cut, g_tail[0])
    period = f.period if g_tail is None else math.lcm(f.period, g_tail[1] * g.period)

    f_prefix = {p: m for p, m in zip(f.prefix.branch_points, f.prefix.monodromy)}
    prefix_points: dict[complex, tuple[Permutation, Permutation]] = {}
    for p, m in f_prefix.items():
        prefix_points[p] = (m, g_points.get(p, ident2))
    for p, m in g_points.items():
        if p not in f_prefix:
            k = _lattice_index(p.real, f.tail_start, f.tail_step) if p.imag == 0 else None
            sigma = f.tail_generator(k) if k is not None else Permutation.identity(n1)
            prefix_points[p] = (sigma, m)
    for k in range(cut):
        prefix_points[f.tail_point(k)] = (f.tail_generator(k), tau_at_tail(k))
    order = canonical_order(prefix_points)
    prefix = validate(BranchedCoverSpec(
        n1 * n2, order, [_pair(n2, *prefix_points[p]) for p in order]))
    gens = [_pair(n2, f.tail_generator(k), tau_at_tail(k)) for k in range(cut, cut + period)]
    return validate_model(InfiniteCoverModel(
        n1 * n2, prefix, tuple(gens), f.tail_point(cut).real, f.tail_step))


def recurring_singular_gluing(pair: InfiniteCoverModel, n2: int) -> list[tuple[int, ...]]:
    """Cell classes joined by singular points that recur in the tail of a pair-grid model.

    At a tail point carrying ``(sigma, tau)`` every pair of cycles whose
    lengths share a factor is one singular point, and all its local branches
    pass through it. Such points exist outside every disc, so the cells they
    join lie in a common end of the glued surface.
    """
    n1 = pair.degree // n2
    ds = DisjointSet(range(pair.degree))
    for gen in pair.tail_generators:
        sigma = Permutation(tuple(gen.images[i * n2] // n2 for i in range(n1)))
        tau = Permutation(tuple(gen.images[j] % n2 for j in range(n2)))
        for c1 in sigma.cycles():
            for c2 in tau.cycles():
                if math.gcd(len(c1), len(c2)) >= 2:
                    cells = [i * n2 + j for i in c1 for j in c2]
                    for x in cells[1:]:
                        ds.union(cells[0], x)
    return sorted(tuple(sorted(grp)) for grp in ds.groups())


def ends_of_infinite_fiber_product(f: InfiniteCoverModel, g: InfiniteCoverModel | BranchedCoverSpec,
                                   *, periods: int = 5) -> EndsReport:
    """Ends of the glued fiber product.

    Exterior orbits on the pair grid give the ends of the normalization;
    singular points recurring in the tail then merge some of them.
    """
    n2 = g.degree
    pair = infinite_fiber_product(f, g)
    base = ends_of_infinite_cover(pair, periods=periods)
    ds = DisjointSet(range(pair.degree))
    for grp in [e.sheets for e in base.ends] + recurring_singular_gluing(pair, n2):
        for x in grp[1:]:
            ds.union(grp[0], x)
    planar = {i: e.non_planar for e in base.ends for i in e.sheets}
    glued = tuple(End(orb, any(planar[i] for i in orb))
                  for orb in sorted(tuple(sorted(grp)) for grp in ds.groups()))
    return replace(base, ends=glued, normalization_ends=base.ends)


def check_infinite_fiber_product_ends(f: InfiniteCoverModel, g: InfiniteCoverModel | BranchedCoverSpec,
                                      report: EndsReport | None = None) -> CheckResult:
    """One end when the second branch set is infinite, ``q`` ends when it is finite (even size)."""
    report = report or ends_of_infinite_fiber_product(f, g)
    if isinstance(g, InfiniteCoverModel):
        return judge("infinite-branching-one-end", True, report.ends_count == 1,
                     f"{report.ends_count} end(s), expected 1", on_failure=MISMATCH)
    a = len(g.branch_points)
    hyp = a >= 2 and a % 2 == 0
    return judge("finite-branching-q-ends", hyp, report.ends_count == g.degree,
                 f"{report.ends_count} end(s), expected {g.degree} (|A| = {a})", on_failure=MISMATCH)


def check_loch_ness(m: InfiniteCoverModel, report: EndsReport | None = None) -> CheckResult:
    """A connected model whose single end carries recurring ramification."""
    report = report or ends_of_infinite_cover(m)
    genus = [g for _, g in report.genus_profile]
    growing = all(b >= a for a, b in zip(genus, genus[1:])) and genus[-1] > genus[0]
    connected = len(orbits(list(m.tail_generators) + list(m.prefix.monodromy), m.degree)) == 1
    return judge("one-end-infinite-genus", connected, report.is_loch_ness_monster and growing,
                 f"{report.ends_count} end(s); genus along truncations {genus}")
