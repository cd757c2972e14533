"""Fiber product of two branched covers of the plane.

Over a point away from both branch sets the fiber product is the pair grid
``{0..n1-1} x {0..n2-1}`` and a loop acts on it diagonally, ``(i, j) ->
(sigma(i), tau(j))``. Orbits of that action are the irreducible components
(the normalization). Over a common branch point a pair of cycles of lengths
``n, m`` with ``gcd(n, m) >= 2`` is a singular point where ``gcd(n, m)`` local
branches meet; the fiber product is the normalization with those local
branches identified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from fibercover.claims import MISMATCH, CheckResult, judge
from fibercover.covers import (
    BranchedCoverSpec,
    ComponentInvariants,
    Permutation,
    canonical_order,
    cover_invariants,
    infinity_monodromy,
    is_connected,
    orbits,
    validate,
)
from fibercover.errors import InvalidSpecError
from fibercover.unionfind import DisjointSet

Cell = tuple[int, int]


@dataclass(frozen=True)
class FiberProductModel:
    cover1: BranchedCoverSpec
    cover2: BranchedCoverSpec
    branch_points: tuple[complex, ...]
    monodromy1: tuple[Permutation, ...]
    monodromy2: tuple[Permutation, ...]

    @property
    def n1(self) -> int:
        return self.cover1.degree

    @property
    def n2(self) -> int:
        return self.cover2.degree

    @property
    def degree(self) -> int:
        return self.n1 * self.n2

    def cell_index(self, cell: Cell) -> int:
        return cell[0] * self.n2 + cell[1]

    def cell(self, index: int) -> Cell:
        return divmod(index, self.n2)

    def pair_permutation(self, sigma: Permutation, tau: Permutation) -> Permutation:
        n2 = self.n2
        return Permutation(tuple(
            sigma.images[i] * n2 + tau.images[j] for i in range(self.n1) for j in range(n2)
        ))

    @property
    def diagonal_monodromy(self) -> tuple[Permutation, ...]:
        return tuple(self.pair_permutation(s, t) for s, t in zip(self.monodromy1, self.monodromy2))

    def diagonal_cover(self) -> BranchedCoverSpec:
        """The normalization as a (possibly disconnected) cover of degree ``n1*n2``."""
        return validate(BranchedCoverSpec(self.degree, self.branch_points, self.diagonal_monodromy))


def build_fiber_product(c1: BranchedCoverSpec, c2: BranchedCoverSpec) -> FiberProductModel:
    """Merge the branch lists and extend each cover by the identity where it does not branch."""
    c1, c2 = validate(c1), validate(c2)
    for name, c in (("cover1", c1), ("cover2", c2)):
        if not is_connected(c):
            raise InvalidSpecError("disconnected cover", name)
    merged = canonical_order(set(c1.branch_points) | set(c2.branch_points))
    return FiberProductModel(
        c1, c2, tuple(merged),
        tuple(c1.monodromy_at(a) for a in merged),
        tuple(c2.monodromy_at(a) for a in merged),
    )


def local_branches(cycle1: tuple[int, ...], cycle2: tuple[int, ...]) -> list[tuple[Cell, ...]]:
    """Orbits of ``cycle1 x cycle2`` under simultaneous rotation of both cycles.

    There are ``gcd(len1, len2)`` of them, each of size ``lcm(len1, len2)``.
    """
    nxt1 = {a: cycle1[(k + 1) % len(cycle1)] for k, a in enumerate(cycle1)}
    nxt2 = {b: cycle2[(k + 1) % len(cycle2)] for k, b in enumerate(cycle2)}
    seen: set[Cell] = set()
    out = []
    for a in cycle1:
        for b in cycle2:
            if (a, b) in seen:
                continue
            branch = []
            cell = (a, b)
            while cell not in seen:
                seen.add(cell)
                branch.append(cell)
                cell = (nxt1[cell[0]], nxt2[cell[1]])
            out.append(tuple(branch))
    return out


@dataclass(frozen=True)
class LocalBranch:
    cells: tuple[Cell, ...]
    component: int


@dataclass(frozen=True)
class SingularPoint:
    base_point: complex
    cycle1: tuple[int, ...]
    cycle2: tuple[int, ...]
    d: int
    local_branches: tuple[LocalBranch, ...]


@dataclass(frozen=True)
class NormalizationComponent:
    cells: tuple[Cell, ...]
    invariants: ComponentInvariants

    def is_graph_over_first(self, n1: int) -> bool:
        """True when the component meets every first-factor sheet exactly once."""
        firsts = sorted(i for i, _ in self.cells)
        return firsts == list(range(n1))


def normalization_components(fp: FiberProductModel) -> list[NormalizationComponent]:
    """Diagonal orbits with their invariants, in order of smallest cell."""
    inv = cover_invariants(fp.diagonal_cover())
    comps = [
        NormalizationComponent(tuple(fp.cell(k) for k in c.sheets), c) for c in inv.components
    ]
    bound = math.gcd(fp.n1, fp.n2)
    if len(comps) > bound:
        raise AssertionError(f"{len(comps)} components exceed gcd bound {bound}")
    return comps


def _component_lookup(fp: FiberProductModel, comps: list[NormalizationComponent]) -> dict[Cell, int]:
    return {cell: k for k, comp in enumerate(comps) for cell in comp.cells}


def singular_locus(fp: FiberProductModel,
                   comps: list[NormalizationComponent] | None = None) -> list[SingularPoint]:
    """Every pair of cycles over a merged branch point whose lengths share a factor."""
    if comps is None:
        comps = normalization_components(fp)
    lookup = _component_lookup(fp, comps)
    out = []
    for a, s, t in zip(fp.branch_points, fp.monodromy1, fp.monodromy2):
        for c1 in s.cycles():
            for c2 in t.cycles():
                d = math.gcd(len(c1), len(c2))
                if d < 2:
                    continue
                branches = tuple(LocalBranch(b, lookup[b[0]]) for b in local_branches(c1, c2))
                out.append(SingularPoint(a, c1, c2, d, branches))
    return out


@dataclass(frozen=True)
class FiberTopologyReport:
    normalization_components: tuple[NormalizationComponent, ...]
    singular_points: tuple[SingularPoint, ...]
    gluing_components: tuple[tuple[tuple[str, int], ...], ...]
    connected: bool
    ends_total: int
    claim_checks: tuple[CheckResult, ...]


def gluing_graph_components(comps, singular) -> list[list[tuple[str, int]]]:
    """Connected components of the bipartite graph component <-> singular point."""
    ds = DisjointSet([("component", k) for k in range(len(comps))])
    for s, sp in enumerate(singular):
        ds.add(("singular", s))
        for br in sp.local_branches:
            ds.union(("singular", s), ("component", br.component))
    return [sorted(g) for g in ds.groups()]


def connectedness_hypotheses(fp: FiberProductModel) -> tuple[bool, str]:
    """Second branch set inside the first, and every point over it singular."""
    a1, a2 = set(fp.cover1.branch_points), set(fp.cover2.branch_points)
    if not a2 <= a1:
        return False, "second branch set not contained in first"
    for a in fp.cover2.branch_points:
        s, t = fp.cover1.monodromy_at(a), fp.cover2.monodromy_at(a)
        for c1 in s.cycles():
            for c2 in t.cycles():
                if math.gcd(len(c1), len(c2)) < 2:
                    return False, f"smooth point over {a} (cycle lengths {len(c1)}, {len(c2)})"
    return True, "second branch set inside first; every point over it singular"


def check_connectedness_theorem(fp: FiberProductModel,
                                report: FiberTopologyReport | None = None) -> CheckResult:
    hyp, why = connectedness_hypotheses(fp)
    connected = (report or topology_report(fp, with_checks=False)).connected
    return judge("connectedness", hyp, connected, why, connected=connected)


def topology_report(fp: FiberProductModel, *, with_checks: bool = True) -> FiberTopologyReport:
    comps = normalization_components(fp)
    singular = singular_locus(fp, comps)
    gluing = gluing_graph_components(comps, singular)
    connected = len(gluing) == 1
    ends_total = sum(c.invariants.ends_count for c in comps)
    report = FiberTopologyReport(
        tuple(comps), tuple(singular), tuple(tuple(g) for g in gluing), connected, ends_total, ()
    )
    if not with_checks:
        return report
    checks = _claim_checks(fp, report)
    return replace(report, claim_checks=tuple(checks))


def _claim_checks(fp: FiberProductModel, report: FiberTopologyReport) -> list[CheckResult]:
    comps = report.normalization_components
    bound = math.gcd(fp.n1, fp.n2)
    checks = [judge(
        "component-bound", True, len(comps) <= bound,
        f"{len(comps)} component(s) <= gcd({fp.n1}, {fp.n2}) = {bound}",
        components=len(comps), bound=bound,
    )]

    # ends of the glued space, read off the exterior of a disc containing every branch point
    exterior = len(orbits([infinity_monodromy(fp.diagonal_cover())], fp.degree))
    checks.append(judge(
        "end-count-identity", True, exterior == report.ends_total,
        f"exterior components {exterior}, sum over components {report.ends_total}",
        exterior=exterior, normalization=report.ends_total,
    ))

    conn = check_connectedness_theorem(fp, report)
    checks.append(conn)
    hyp = conn.hypotheses_hold
    graphs = [c.is_graph_over_first(fp.n1) for c in comps]
    graph_ok = len(comps) == fp.n2 and all(graphs)
    detail = (f"{len(comps)} component(s) vs second degree {fp.n2}; "
              f"graphs over first factor: {sum(graphs)}/{len(graphs)}")
    checks.append(judge("graph-components", hyp, graph_ok, detail,
                        on_failure=MISMATCH, graphs=graphs))
    same_branching = set(fp.cover1.branch_points) == set(fp.cover2.branch_points)
    checks.append(judge("graph-components-equal-branching", hyp and same_branching, graph_ok,
                        detail, on_failure=MISMATCH, graphs=graphs))
    ends1 = cover_invariants(fp.cover1).total_ends
    checks.append(judge(
        "ends-copies", hyp, report.ends_total == fp.n2 * ends1,
        f"ends {report.ends_total} vs {fp.n2} x {ends1}", on_failure=MISMATCH,
    ))
    return checks
