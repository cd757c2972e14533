"""One function per subcommand, each turning a parsed spec into a :class:`Report`."""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, replace

from fibercover.asymptotic import (
    InfiniteCoverModel,
    check_infinite_fiber_product_ends,
    check_loch_ness,
    ends_of_infinite_cover,
    ends_of_infinite_fiber_product,
    exhaustion_trace,
    infinite_fiber_product,
    infinite_hyperelliptic,
    probe_radii,
)
from fibercover.claims import COUNTEREXAMPLE, VERDICTS, CheckResult, judge
from fibercover.continuation import (
    CurvePair,
    NumericCurve,
    check_double_cover_intersection,
    check_quotient_lemma,
    cross_validate_monodromy,
    isolating_radius,
    lift_path,
    numeric_monodromy,
    sample_triples,
)
from fibercover.covers import (
    BranchedCoverSpec,
    SuperellipticSpec,
    cover_invariants,
    hyperelliptic,
    infinity_monodromy,
    superelliptic_claim_checks,
    superelliptic_expected,
    superelliptic_to_cover,
)
from fibercover.errors import InvalidSpecError, NumericalError
from fibercover.fiberprod import build_fiber_product, local_branches, topology_report
from fibercover.fileformat import ParsedSpec, as_cover, to_document
from fibercover.isomorph import curves_isomorphic, hyperelliptic_equivalence
from fibercover.render import Report, fmt_complex, fmt_points, fmt_real
from fibercover.sampling import random_connectedness_instance, random_fiber_pair, random_points
from fibercover.weierstrass import eval_product, log_derivative


@dataclass(frozen=True)
class Options:
    tol: float | None = None
    trunc: int | None = None
    check_claims: bool = False
    strict_pointwise: bool = False
    radii: tuple[float, ...] | None = None
    points: tuple[complex, ...] | None = None
    seed: int | None = None
    count: int = 100


DEFAULT_TOL = 1e-10
DEFAULT_TRUNC = 500


def _expect(parsed: ParsedSpec, command: str, *kinds: str) -> None:
    if parsed.kind not in kinds:
        raise InvalidSpecError(f"{command} expects kind {' or '.join(kinds)}, got {parsed.kind}", "kind")


def _describe_cover(rep: Report, cover: BranchedCoverSpec) -> None:
    inv = cover_invariants(cover)
    rep.add(f"degree: {cover.degree}")
    rep.add(f"branch points: {len(cover.branch_points)}")
    for k, (p, m) in enumerate(zip(cover.branch_points, cover.monodromy)):
        rep.add(f"  {k}: {fmt_complex(p)} monodromy {m}")
        rep.record("branch_point", k, point=p, monodromy=str(m))
    rep.add(f"infinity monodromy: {infinity_monodromy(cover)}")
    rep.add(f"components: {inv.component_count}")
    for k, c in enumerate(inv.components):
        rep.add(f"  component {k}: sheets {list(c.sheets)} degree {c.degree} ends {c.ends_count} "
                f"genus {c.genus} euler characteristic {c.euler_characteristic}")
        rep.record("component", k, sheets=" ".join(map(str, c.sheets)), degree=c.degree,
                   ends=c.ends_count, genus=c.genus, euler_characteristic=c.euler_characteristic)
    rep.add(f"total ends: {inv.total_ends}")
    rep.add(f"total genus: {inv.total_genus}")
    rep.sketch.points = list(cover.branch_points)
    rep.sketch.labels = [f"{k}:{m}" for k, m in enumerate(cover.monodromy)]
    rep.sketch.badges = [f"components {inv.component_count}", f"ends {inv.total_ends}",
                         f"genus {inv.total_genus}"]


def analyze_cover(parsed: ParsedSpec, opts: Options) -> Report:
    _expect(parsed, "analyze-cover", "cover", "superelliptic")
    rep = Report("analyze-cover", to_document(parsed))
    cover = as_cover(parsed.model)
    _describe_cover(rep, cover)
    if isinstance(parsed.model, SuperellipticSpec):
        ends, genus = superelliptic_expected(parsed.model.exponent, len(parsed.model.zeros))
        rep.add(f"closed form: ends gcd(q, n) = {ends}, genus {genus}")
        if opts.check_claims:
            rep.checks.extend(superelliptic_claim_checks(parsed.model))
    return rep


def fiber_product(parsed: ParsedSpec, opts: Options) -> Report:
    _expect(parsed, "fiber-product", "fiber-product")
    rep = Report("fiber-product", to_document(parsed))
    c1, c2 = parsed.model.covers()
    fp = build_fiber_product(c1, c2)
    tr = topology_report(fp, with_checks=opts.check_claims)
    rep.add(f"degrees: {fp.n1} x {fp.n2}")
    rep.add(f"merged branch points: {fmt_points(fp.branch_points)}")
    rep.add(f"normalization components: {len(tr.normalization_components)}")
    for k, comp in enumerate(tr.normalization_components):
        inv = comp.invariants
        cells = " ".join(f"({i},{j})" for i, j in comp.cells)
        rep.add(f"  component {k}: cells {cells} ends {inv.ends_count} genus {inv.genus}")
        rep.record("component", k, cells=cells, degree=inv.degree, ends=inv.ends_count, genus=inv.genus)
    rep.add(f"singular points: {len(tr.singular_points)}")
    for k, sp in enumerate(tr.singular_points):
        comps = sorted({b.component for b in sp.local_branches})
        rep.add(f"  singular {k}: over {fmt_complex(sp.base_point)} cycles {sp.cycle1} x {sp.cycle2} "
                f"d {sp.d} branches in components {comps}")
        rep.record("singular_point", k, base_point=sp.base_point, d=sp.d,
                   components=" ".join(map(str, comps)))
    rep.add(f"gluing graph components: {len(tr.gluing_components)}")
    rep.add(f"connected: {'yes' if tr.connected else 'no'}")
    rep.add(f"ends total: {tr.ends_total}")
    bound = math.gcd(fp.n1, fp.n2)
    ok = "OK" if len(tr.normalization_components) <= bound else "VIOLATED"
    rep.add(f"component bound: {len(tr.normalization_components)} <= gcd({fp.n1}, {fp.n2}) = {bound} {ok}")
    rep.record("summary", 0, components=len(tr.normalization_components), singular_points=len(tr.singular_points),
               connected=tr.connected, ends_total=tr.ends_total, gcd_bound=bound)
    rep.checks.extend(tr.claim_checks)
    rep.sketch.points = list(fp.branch_points)
    rep.sketch.labels = [f"{k}" for k in range(len(fp.branch_points))]
    rep.sketch.badges = [f"components {len(tr.normalization_components)}",
                         f"connected {'yes' if tr.connected else 'no'}", f"ends {tr.ends_total}"]
    return rep


def _ends_lines(rep: Report, report, model: InfiniteCoverModel) -> None:
    rep.add(f"ends: {report.ends_count}")
    for k, e in enumerate(report.ends):
        rep.add(f"  end {k}: sheets {list(e.sheets)} {'non-planar' if e.non_planar else 'planar'}")
        rep.record("end", k, sheets=" ".join(map(str, e.sheets)), non_planar=e.non_planar)
    rep.add(f"stabilized from probe radius {fmt_real(report.stabilization_radius)} "
            f"(index {report.stabilization_index})")
    prof = ", ".join(f"{fmt_real(r)}:{g}" for r, g in report.genus_profile)
    rep.add(f"interior genus by radius: {prof}")
    for k, (r, g) in enumerate(report.genus_profile):
        rep.record("genus_profile", k, radius=r, genus=g)
    rep.add(f"one non-planar end: {'yes' if report.is_loch_ness_monster else 'no'}")
    pts = [p for p in model.prefix.branch_points] + [model.tail_point(k) for k in range(2 * model.period + 2)]
    rep.sketch.points = pts
    rep.sketch.labels = [str(k) for k in range(len(pts))]
    rep.sketch.badges = [f"ends {report.ends_count}", f"tail period {model.period}"]


def ends(parsed: ParsedSpec, opts: Options) -> Report:
    _expect(parsed, "ends", "infinite-cover", "infinite-fiber-product")
    rep = Report("ends", to_document(parsed))
    if parsed.kind == "infinite-cover":
        m = parsed.model
        report = ends_of_infinite_cover(m)
        rep.add(f"degree: {m.degree}")
        rep.add(f"tail generators: {' '.join(str(g) for g in m.tail_generators)}")
        _ends_lines(rep, report, m)
        if opts.check_claims:
            rep.checks.append(check_loch_ness(m, report))
        return rep
    req = parsed.model
    g = req.second_model()
    pair = infinite_fiber_product(req.first, g)
    report = ends_of_infinite_fiber_product(req.first, g)
    rep.add(f"pair grid degree: {pair.degree}")
    rep.add(f"second branch set: {'infinite' if isinstance(g, InfiniteCoverModel) else 'finite'}")
    rep.add(f"tail pair generators: {' '.join(str(x) for x in pair.tail_generators)}")
    _ends_lines(rep, report, pair)
    rep.add(f"normalization ends before gluing: {len(report.normalization_ends)}")
    if opts.check_claims:
        rep.checks.append(check_infinite_fiber_product_ends(req.first, g, report))
    return rep


def exhaust(parsed: ParsedSpec, opts: Options) -> Report:
    _expect(parsed, "exhaust", "infinite-cover", "cover", "superelliptic")
    rep = Report("exhaust", to_document(parsed))
    model = parsed.model if parsed.kind == "infinite-cover" else as_cover(parsed.model)
    radii = opts.radii or parsed.radii
    if radii is None:
        if isinstance(model, InfiniteCoverModel):
            radii = tuple(probe_radii(model))
        else:
            far = max((abs(p) for p in model.branch_points), default=0.0)
            radii = (far + 1.0,)
    rows = exhaustion_trace(model, radii)
    rep.add("radius  exterior_components  interior_genus  interior_points  interior_ends")
    for k, t in enumerate(rows):
        rep.add(f"{fmt_real(t.radius)}  {t.exterior_components}  {t.interior_genus}  "
                f"{t.interior_points}  {t.interior_ends}")
        rep.record("radius", k, radius=t.radius, exterior_components=t.exterior_components,
                   interior_genus=t.interior_genus, interior_points=t.interior_points,
                   interior_ends=t.interior_ends)
    rep.sketch.points = list(model.prefix.branch_points if isinstance(model, InfiniteCoverModel)
                             else model.branch_points)
    rep.sketch.badges = [f"radii {len(rows)}"]
    return rep


def weval(parsed: ParsedSpec, opts: Options) -> Report:
    _expect(parsed, "weval", "weierstrass")
    req = parsed.model
    spec = req.spec
    if opts.trunc is not None:
        spec = _with_trunc(spec, opts.trunc)
    elif spec.is_rule and spec.truncation is None:
        spec = _with_trunc(spec, DEFAULT_TRUNC)
    points = opts.points if opts.points is not None else req.points
    rep = Report("weval", to_document(ParsedSpec(parsed.kind, type(req)(spec, tuple(points)))))
    rep.add(f"factors: {spec.terms}")
    rep.add(f"origin factor: {'yes' if spec.include_zero_at_origin else 'no'}")
    for k, z in enumerate(points):
        r = eval_product(spec, z)
        try:
            ld = fmt_complex(log_derivative(spec, z))
        except NumericalError:
            ld = "pole"
        cert = "certified" if r.certified else "not certified"
        rep.add(f"z = {fmt_complex(z)}: value {fmt_complex(r.value)} relative bound "
                f"{fmt_real(r.error_bound)} ({cert}) log-derivative {ld}")
        rep.record("point", k, z=z, value=r.value, error_bound=r.error_bound,
                   certified=r.certified, terms=r.terms_used, log_derivative=ld)
    rep.sketch.points = list(points)
    rep.sketch.connect_points = False
    rep.sketch.badges = [f"factors {spec.terms}"]
    return rep


def _with_trunc(spec, n: int):
    return replace(spec, truncation=n)


def lift(parsed: ParsedSpec, opts: Options) -> Report:
    _expect(parsed, "lift", "path-lift")
    req = parsed.model
    tol = opts.tol if opts.tol is not None else req.tolerance
    pl = lift_path(req.curve, req.path, req.start_value, tol, req.margin)
    rep = Report("lift", to_document(parsed))
    rep.add(f"curve: w^{req.curve.exponent} = f(z), zeros {fmt_points(req.curve.zeros)}")
    rep.add(f"start: {fmt_complex(pl.start_value)}")
    rep.add(f"end: {fmt_complex(pl.end_value)}")
    rep.add(f"samples: {len(pl.samples)} accepted steps {pl.accepted_steps} rejected {pl.rejected_steps}")
    rep.add(f"smallest step: {fmt_real(pl.smallest_step)}")
    rep.add(f"min branch distance: {fmt_real(pl.min_branch_distance)}")
    rep.add(f"max residual: {'below' if pl.max_residual <= tol else 'ABOVE'} tolerance {fmt_real(tol)}")
    for k, (t, z, w) in enumerate(pl.samples):
        rep.record("sample", k, t=t, z=z, w=w)
    rep.sketch.points = list(req.curve.zeros)
    rep.sketch.connect_points = False
    rep.sketch.paths = [list(req.path)]
    rep.sketch.badges = [f"end {fmt_complex(pl.end_value)}"]
    return rep


def monodromy(parsed: ParsedSpec, opts: Options) -> Report:
    _expect(parsed, "monodromy", "superelliptic")
    spec = parsed.model
    tol = opts.tol if opts.tol is not None else DEFAULT_TOL
    curve = NumericCurve.polynomial(spec.exponent, spec.zeros)
    cover = superelliptic_to_cover(spec)
    rep = Report("monodromy", to_document(parsed))
    for k, a in enumerate(cover.branch_points):
        r = isolating_radius(cover.branch_points, a)
        got = numeric_monodromy(curve, a, r, tol=tol)
        want = cover.monodromy_at(a)
        rep.add(f"zero {fmt_complex(a)} radius {fmt_real(r)}: numeric {got} constructed {want} "
                f"{'match' if got == want else 'MISMATCH'}")
        rep.record("zero", k, point=a, radius=r, numeric=str(got), constructed=str(want))
    rep.checks.append(cross_validate_monodromy(curve, spec, tol))
    rep.sketch.points = list(cover.branch_points)
    rep.sketch.paths = [[a + r * complex(math.cos(t), math.sin(t)) for t in
                         (2 * math.pi * j / 32 for j in range(33))]
                        for a, r in ((a, isolating_radius(cover.branch_points, a)) for a in cover.branch_points)]
    rep.sketch.badges = [f"q {spec.exponent}"]
    return rep


def isom(parsed: ParsedSpec, opts: Options) -> Report:
    _expect(parsed, "isom", "isomorphism")
    req = parsed.model
    rep = Report("isom", to_document(parsed))
    if req.criterion == "fiber-product":
        res = curves_isomorphic(req.config, strict_pointwise=opts.strict_pointwise)
        rep.add(f"criterion: fiber-product, invariance {res.mode}")
        rep.add(f"W: {fmt_points(req.config.W)}")
        rep.add(f"A: {fmt_points(req.config.A)}")
        rep.add(f"B: {fmt_points(req.config.B)}")
        rep.sketch.points = list(req.config.W)
    else:
        res = hyperelliptic_equivalence(req.W1, req.W2)
        rep.add("criterion: hyperelliptic")
        rep.add(f"W1: {fmt_points(req.W1)}")
        rep.add(f"W2: {fmt_points(req.W2)}")
        rep.sketch.points = list(req.W1) + list(req.W2)
    rep.add(f"equivalent: {'yes' if res.equivalent else 'no'} ({res.reason})")
    for k, t in enumerate(res.witnesses):
        rep.add(f"  witness {k}: {t}")
        rep.record("witness", k, a=t.a, c=t.c)
    rep.sketch.connect_points = False
    rep.sketch.badges = [f"equivalent {'yes' if res.equivalent else 'no'}", f"witnesses {len(res.witnesses)}"]
    return rep


# -- randomized claim batches --


def _tally(rep: Report, name: str, results: list[CheckResult]) -> None:
    counts = Counter(r.verdict for r in results)
    summary = ", ".join(f"{counts[v]} {v}" for v in VERDICTS if counts[v])
    rep.add(f"{name}: {len(results)} instance(s): {summary}")
    batch = sum(1 for r in rep.records if r[0] == "batch" and r[2] == "check")
    rep.record("batch", batch, check=name, instances=len(results),
               **{v.replace(" ", "_").replace("-", "_"): counts[v] for v in VERDICTS})
    failures = [r for r in results if r.verdict == COUNTEREXAMPLE]
    for r in failures[:3]:
        rep.add(f"  counterexample-candidate: {r.detail}")
    if failures:
        rep.checks.append(failures[0])


def local_model_checks(max_n: int = 12) -> list[CheckResult]:
    out = []
    for n in range(2, max_n + 1):
        for m in range(2, max_n + 1):
            br = local_branches(tuple(range(n)), tuple(range(m)))
            cells = sorted(c for b in br for c in b)
            ok = (len(br) == math.gcd(n, m) and all(len(b) == math.lcm(n, m) for b in br)
                  and cells == [(i, j) for i in range(n) for j in range(m)])
            out.append(judge("local-model", True, ok, f"n={n} m={m}: {len(br)} branch(es)"))
    return out


def random_claim_batches(seed: int, count: int) -> Report:
    rng = random.Random(seed)
    rep = Report("check-claims", {"seed": seed, "count": count})
    _tally(rep, "local-model", local_model_checks())

    bound, identity = [], []
    for _ in range(count):
        pair = random_fiber_pair(rng)
        checks = {c.name: c for c in topology_report(build_fiber_product(pair.cover1, pair.cover2)).claim_checks}
        bound.append(checks["component-bound"])
        identity.append(checks["end-count-identity"])
    _tally(rep, "component-bound", bound)
    _tally(rep, "end-count-identity", identity)

    conn = []
    for _ in range(count):
        pair = random_connectedness_instance(rng)
        checks = {c.name: c for c in topology_report(build_fiber_product(pair.cover1, pair.cover2)).claim_checks}
        conn.append(checks["connectedness"])
    _tally(rep, "connectedness", conn)

    genus = []
    for k in range(1, 11):
        genus.extend(superelliptic_claim_checks(SuperellipticSpec(2, tuple(range(2 * k)))))
    _tally(rep, "hyperelliptic-genus", genus)

    f = infinite_hyperelliptic()
    inf = [check_infinite_fiber_product_ends(f, infinite_hyperelliptic(1.0, float(s))) for s in range(1, 5)]
    inf += [check_infinite_fiber_product_ends(f, hyperelliptic(range(1, 2 * k + 1))) for k in range(1, 6)]
    _tally(rep, "infinite-fiber-product-ends", inf)
    _tally(rep, "one-end-infinite-genus", [check_loch_ness(f)])

    mono, quot, dbl = [], [], []
    for _ in range(max(1, count // 10)):
        q = rng.randint(2, 5)
        zs = random_points(rng, rng.randint(1, 8))
        mono.append(cross_validate_monodromy(NumericCurve.polynomial(q, zs), SuperellipticSpec(q, zs)))
    for _ in range(max(1, count // 10)):
        cp = CurvePair(NumericCurve.polynomial(2, random_points(rng, 3)),
                       NumericCurve.polynomial(2, random_points(rng, 2)))
        zs = [complex(rng.uniform(-5, 5), rng.uniform(-5, 5)) for _ in range(10)]
        signs = [(rng.choice((1, -1)), rng.choice((1, -1))) for _ in zs]
        samples = sample_triples(cp, zs, signs)
        quot.append(check_quotient_lemma(cp, samples))
        dbl.append(check_double_cover_intersection(cp, samples))
    _tally(rep, "monodromy-agreement", mono)
    _tally(rep, "quotient-well-defined", quot)
    _tally(rep, "double-cover-intersection", dbl)
    return rep


def check_claims(parsed: ParsedSpec | None, opts: Options) -> Report:
    """Claim checks for one spec file, or seeded random batches when no file is given."""
    if parsed is None:
        return random_claim_batches(opts.seed if opts.seed is not None else 0, opts.count)
    forced = Options(**{**opts.__dict__, "check_claims": True})
    handler = {
        "cover": analyze_cover, "superelliptic": analyze_cover, "fiber-product": fiber_product,
        "infinite-cover": ends, "infinite-fiber-product": ends,
    }.get(parsed.kind)
    if handler is None:
        raise InvalidSpecError(f"no claim checks for kind {parsed.kind}", "kind")
    rep = handler(parsed, forced)
    if parsed.kind == "superelliptic":
        curve = NumericCurve.polynomial(parsed.model.exponent, parsed.model.zeros)
        rep.checks.append(cross_validate_monodromy(curve, parsed.model, opts.tol or DEFAULT_TOL))
    rep.command = "check-claims"
    return rep


HANDLERS = {
    "analyze-cover": analyze_cover,
    "fiber-product": fiber_product,
    "ends": ends,
    "exhaust": exhaust,
    "weval": weval,
    "lift": lift,
    "monodromy": monodromy,
    "isom": isom,
}
