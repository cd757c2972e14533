"""JSON spec files: schema validation, conversion to library objects, normalized re-emission.

Every document carries ``"version": 1`` and a ``"kind"`` discriminator.
Complex numbers are ``[re, im]`` arrays and permutations are image arrays.
Unknown fields are rejected. See ``schema/spec.schema.json``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Any

import jsonschema

from fibercover.asymptotic import InfiniteCoverModel, validate_model
from fibercover.continuation import NumericCurve
from fibercover.covers import (
    BranchedCoverSpec,
    Permutation,
    SuperellipticSpec,
    superelliptic_to_cover,
    validate,
)
from fibercover.errors import InvalidSpecError
from fibercover.isomorph import ZeroConfiguration, sanitize_points
from fibercover.weierstrass import DSchedule, WeierstrassProductSpec, ZeroRule, validate_product

VERSION = 1


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("fibercover").joinpath("schema/spec.schema.json").read_text("utf-8")
    return json.loads(text)


def _reject_constant(name: str):
    raise ValueError(f"{name} is not allowed")


def _json_path(path) -> str:
    out = "$"
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def load_document(text: str) -> dict:
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise InvalidSpecError(f"line {exc.lineno} column {exc.colno}: {exc.msg}", "json") from None
    except ValueError as exc:
        raise InvalidSpecError(str(exc), "json") from None
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        raise InvalidSpecError(err.message, _json_path(err.absolute_path))
    return doc


# -- request objects for kinds that bundle more than one library object --


@dataclass(frozen=True)
class FiberProductRequest:
    first: BranchedCoverSpec | SuperellipticSpec
    second: BranchedCoverSpec | SuperellipticSpec

    def covers(self) -> tuple[BranchedCoverSpec, BranchedCoverSpec]:
        return as_cover(self.first), as_cover(self.second)


@dataclass(frozen=True)
class InfiniteFiberProductRequest:
    first: InfiniteCoverModel
    second: InfiniteCoverModel | BranchedCoverSpec | SuperellipticSpec

    def second_model(self) -> InfiniteCoverModel | BranchedCoverSpec:
        s = self.second
        return s if isinstance(s, InfiniteCoverModel) else as_cover(s)


@dataclass(frozen=True)
class WeierstrassRequest:
    spec: WeierstrassProductSpec
    points: tuple[complex, ...] = ()


@dataclass(frozen=True)
class PathLiftRequest:
    curve: NumericCurve
    path: tuple[complex, ...]
    start_value: complex
    tolerance: float = 1e-10
    margin: float | None = None


@dataclass(frozen=True)
class IsomorphismRequest:
    criterion: str
    config: ZeroConfiguration | None = None
    W1: tuple[complex, ...] = ()
    W2: tuple[complex, ...] = ()


@dataclass(frozen=True)
class ParsedSpec:
    kind: str
    model: Any
    radii: tuple[float, ...] | None = None
    extras: dict = field(default_factory=dict, compare=False)


def as_cover(x: BranchedCoverSpec | SuperellipticSpec) -> BranchedCoverSpec:
    return superelliptic_to_cover(x) if isinstance(x, SuperellipticSpec) else validate(x)


def _c(v) -> complex:
    return complex(float(v[0]), float(v[1]))


def _cl(values) -> tuple[complex, ...]:
    return tuple(_c(v) for v in values)


def _nested(prefix: str, exc: InvalidSpecError) -> InvalidSpecError:
    return InvalidSpecError(str(exc).split(": ", 1)[-1] if exc.field else str(exc),
                            f"{prefix}.{exc.field}" if exc.field else prefix)


def _cover(body: dict) -> BranchedCoverSpec:
    perms = []
    for k, m in enumerate(body["monodromy"]):
        try:
            perms.append(Permutation(tuple(m)))
        except InvalidSpecError as exc:
            raise InvalidSpecError(str(exc), f"monodromy[{k}]") from None
    return validate(BranchedCoverSpec(body["degree"], _cl(body["branch_points"]), tuple(perms)))


def _superelliptic(body: dict) -> SuperellipticSpec:
    spec = SuperellipticSpec(body["exponent"], _cl(body["zeros"]))
    cover = superelliptic_to_cover(spec)
    return SuperellipticSpec(spec.exponent, cover.branch_points)


def _infinite(body: dict) -> InfiniteCoverModel:
    n = body["degree"]
    prefix = _cover({"degree": n, **body["prefix"]}) if "prefix" in body else BranchedCoverSpec(n)
    gens = []
    for k, m in enumerate(body["tail_generators"]):
        try:
            gens.append(Permutation(tuple(m)))
        except InvalidSpecError as exc:
            raise InvalidSpecError(str(exc), f"tail_generators[{k}]") from None
    return validate_model(InfiniteCoverModel(
        n, prefix, tuple(gens), float(body.get("tail_start", 1.0)), float(body.get("tail_step", 1.0))))


def _factor(body: dict, where: str):
    try:
        if body["kind"] == "cover":
            return _cover(body)
        if body["kind"] == "superelliptic":
            return _superelliptic(body)
        return _infinite(body)
    except InvalidSpecError as exc:
        raise _nested(where, exc) from None


def _weierstrass(body: dict) -> WeierstrassProductSpec:
    z = body["zeros"]
    if isinstance(z, dict):
        if z["rule"] == "arithmetic":
            if "start" not in z or "step" not in z:
                raise InvalidSpecError("arithmetic rule needs start and step", "zeros")
            zeros = ZeroRule.arithmetic(_c(z["start"]), _c(z["step"]))
        else:
            if set(z) != {"rule"}:
                raise InvalidSpecError("symmetric_integers takes no parameters", "zeros")
            zeros = ZeroRule.symmetric_integers()
    else:
        zeros = _cl(z)
    ds = body.get("d_schedule", {"kind": "index"})
    if ds["kind"] == "constant" and "p" not in ds:
        raise InvalidSpecError("constant schedule needs p", "d_schedule")
    sched = DSchedule.constant(ds["p"]) if ds["kind"] == "constant" else DSchedule.index()
    return validate_product(WeierstrassProductSpec(
        zeros, bool(body.get("include_zero_at_origin", False)), sched,
        body.get("truncation"), float(body.get("tolerance", 1e-10))))


def parse_document(doc: dict) -> ParsedSpec:
    kind = doc["kind"]
    radii = tuple(float(r) for r in doc["radii"]) if "radii" in doc else None
    if kind == "cover":
        return ParsedSpec(kind, _cover(doc), radii)
    if kind == "superelliptic":
        return ParsedSpec(kind, _superelliptic(doc), radii)
    if kind == "fiber-product":
        return ParsedSpec(kind, FiberProductRequest(_factor(doc["first"], "first"), _factor(doc["second"], "second")))
    if kind == "infinite-cover":
        return ParsedSpec(kind, _infinite(doc), radii)
    if kind == "infinite-fiber-product":
        return ParsedSpec(kind, InfiniteFiberProductRequest(_factor(doc["first"], "first"),
                                                            _factor(doc["second"], "second")))
    if kind == "weierstrass":
        return ParsedSpec(kind, WeierstrassRequest(_weierstrass(doc), _cl(doc.get("points", []))))
    if kind == "path-lift":
        cb = doc["curve"]
        try:
            if "product" in cb:
                curve = NumericCurve.from_product(cb["exponent"], _weierstrass(cb["product"]))
            else:
                curve = NumericCurve.polynomial(cb["exponent"], _cl(cb["zeros"]))
        except InvalidSpecError as exc:
            raise _nested("curve", exc) from None
        return ParsedSpec(kind, PathLiftRequest(
            curve, _cl(doc["path"]), _c(doc["start_value"]), float(doc.get("tolerance", 1e-10)),
            float(doc["margin"]) if "margin" in doc else None))
    if kind == "isomorphism":
        if doc["criterion"] == "fiber-product":
            cfg = ZeroConfiguration(_cl(doc["W"]), _cl(doc["A"]), _cl(doc["B"]))
            return ParsedSpec(kind, IsomorphismRequest("fiber-product", cfg))
        return ParsedSpec(kind, IsomorphismRequest(
            "hyperelliptic", None, sanitize_points(_cl(doc["W1"]), "W1"), sanitize_points(_cl(doc["W2"]), "W2")))
    raise InvalidSpecError(f"unknown kind {kind!r}", "kind")


def parse_text(text: str) -> ParsedSpec:
    return parse_document(load_document(text))


def read_spec(path: str) -> ParsedSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except UnicodeDecodeError:
        raise InvalidSpecError("file is not UTF-8", "json") from None
    return parse_text(text)


# -- normalized emission --


def _ec(z: complex) -> list[float]:
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


def _ecl(zs) -> list[list[float]]:
    return [_ec(z) for z in zs]


def _cover_body(c: BranchedCoverSpec) -> dict:
    return {"degree": c.degree, "branch_points": _ecl(c.branch_points),
            "monodromy": [list(p.images) for p in c.monodromy]}


def _superelliptic_body(s: SuperellipticSpec) -> dict:
    return {"exponent": s.exponent, "zeros": _ecl(superelliptic_to_cover(s).branch_points)}


def _infinite_body(m: InfiniteCoverModel) -> dict:
    body = {"degree": m.degree, "tail_generators": [list(g.images) for g in m.tail_generators],
            "tail_start": m.tail_start, "tail_step": m.tail_step}
    body["prefix"] = {"branch_points": _ecl(m.prefix.branch_points),
                      "monodromy": [list(p.images) for p in m.prefix.monodromy]}
    return body


def _factor_body(x) -> dict:
    if isinstance(x, SuperellipticSpec):
        return {"kind": "superelliptic", **_superelliptic_body(x)}
    if isinstance(x, InfiniteCoverModel):
        return {"kind": "infinite-cover", **_infinite_body(x)}
    return {"kind": "cover", **_cover_body(x)}


def _weierstrass_body(s: WeierstrassProductSpec) -> dict:
    if s.is_rule:
        zeros: Any = {"rule": s.zeros.kind}
        for k, v in s.zeros.params:
            zeros[k] = _ec(v)
    else:
        zeros = _ecl(s.zeros)
    ds = {"kind": s.d_schedule.kind}
    if s.d_schedule.kind == "constant":
        ds["p"] = s.d_schedule.p
    return {"zeros": zeros, "include_zero_at_origin": s.include_zero_at_origin, "d_schedule": ds,
            "truncation": s.truncation, "tolerance": s.tolerance}


def to_document(parsed: ParsedSpec) -> dict:
    m = parsed.model
    kind = parsed.kind
    if kind == "cover":
        body = _cover_body(m)
    elif kind == "superelliptic":
        body = _superelliptic_body(m)
    elif kind == "fiber-product":
        body = {"first": _factor_body(m.first), "second": _factor_body(m.second)}
    elif kind == "infinite-cover":
        body = _infinite_body(m)
    elif kind == "infinite-fiber-product":
        body = {"first": _factor_body(m.first), "second": _factor_body(m.second)}
    elif kind == "weierstrass":
        body = {**_weierstrass_body(m.spec), "points": _ecl(m.points)}
    elif kind == "path-lift":
        curve: dict = {"exponent": m.curve.exponent}
        if m.curve.product is not None:
            curve["product"] = _weierstrass_body(m.curve.product)
        else:
            curve["zeros"] = _ecl(m.curve.zeros)
        body = {"curve": curve, "path": _ecl(m.path), "start_value": _ec(m.start_value),
                "tolerance": m.tolerance}
        if m.margin is not None:
            body["margin"] = m.margin
    elif kind == "isomorphism":
        body = {"criterion": m.criterion}
        if m.criterion == "fiber-product":
            body.update(W=_ecl(m.config.W), A=_ecl(m.config.A), B=_ecl(m.config.B))
        else:
            body.update(W1=_ecl(m.W1), W2=_ecl(m.W2))
    else:
        raise ValueError(kind)
    doc = {"version": VERSION, "kind": kind, **body}
    if parsed.radii is not None:
        doc["radii"] = list(parsed.radii)
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def normalize_text(text: str) -> str:
    return dumps(to_document(parse_text(text)))
