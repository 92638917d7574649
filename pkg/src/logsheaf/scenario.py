"""Scenario files: a small line-oriented input format and its runner.

A scenario has ``key = value`` headers followed by sections::

    kind = root_order
    name = N2 with alpha = (2,3)

    [cone monoid]        # rows are ray generators; "lineality: ..." rows allowed
    1 0
    0 1

    [vector alpha]
    2 3

    [expect]             # key op value [@convention]
    root_order = 6

Section types are ``matrix``, ``cone``, ``vector``, ``polynomials`` and the
unnamed ``expect``.  A subdivision of ``[cone sigma]`` is given by ``[vector
cut]``, ``[matrix cuts]``, ``[vector star]`` or explicit ``[cone piece_...]``
sections (checked for validity); without any of these it is trivial.  Expectation operators are ``=``, ``>=``, ``<=``,
``contains`` and ``excludes``; ``key[*]`` applies to every per-degree key.
"""
from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

from . import charts as ch
from .cones import AffineMonoid, Cone, dual_cone, hilbert_basis
from .errors import ConfigurationError, ParseError, PreconditionError
from .laurent import LaurentPolynomial, from_polynomial
from .parsing import parse_polynomial
from .saturation import (
    CONVENTIONS,
    STRICT,
    is_saturated_element,
    kummer_extension,
    minimal_saturating_root,
)
from .subdivision import (
    Subdivision,
    hyperplane_subdivision,
    pic_of_subdivision,
    pl_sections,
    refine_by_hyperplanes,
    star_subdivision,
    trivial_subdivision,
)

KINDS = ("saturated", "root_order", "subdivide", "pl_sections", "pic", "fiber", "pushforward")
SECTION_TYPES = ("matrix", "cone", "vector", "polynomials")
_OPS = (">=", "<=", "=", "contains", "excludes")


@dataclass
class Section:
    type: str
    name: str
    lines: List[Tuple[int, str]]


@dataclass
class Expectation:
    key: str
    op: str
    value: str
    convention: Optional[str]
    line: int


@dataclass
class Scenario:
    kind: str
    name: str
    headers: Dict[str, str]
    sections: Dict[str, Section]
    expectations: List[Expectation]
    degree_bound: int = ch.DEFAULT_DEGREE_BOUND
    convention: str = STRICT

    def has(self, name: str) -> bool:
        return name in self.sections

    def _section(self, name: str, type_: str) -> Section:
        s = self.sections.get(name)
        if s is None:
            raise ConfigurationError(f"scenario of kind {self.kind} needs a [{type_} {name}] section")
        if s.type != type_:
            raise ConfigurationError(f"section {name} must have type {type_}")
        return s

    def matrix(self, name: str) -> Tuple[Tuple[int, ...], ...]:
        rows = [_ints(text, ln) for ln, text in self._section(name, "matrix").lines]
        if len({len(r) for r in rows}) > 1:
            raise ConfigurationError(f"rows of matrix {name} have different lengths")
        return tuple(rows)

    def vector(self, name: str) -> Tuple[int, ...]:
        lines = self._section(name, "vector").lines
        return tuple(x for ln, text in lines for x in _ints(text, ln))

    def cone(self, name: str) -> Cone:
        rays, lin = [], []
        for ln, text in self._section(name, "cone").lines:
            if text.startswith("lineality:"):
                lin.append(_ints(text[len("lineality:"):], ln))
            else:
                rays.append(_ints(text, ln))
        dims = {len(v) for v in rays + lin}
        if len(dims) != 1:
            raise ConfigurationError(f"cone {name} needs generators of one common length")
        return Cone.from_generators(rays, dims.pop(), lineality=lin)

    def polynomial_lines(self, name: str) -> List[Tuple[int, str]]:
        return self._section(name, "polynomials").lines

    def variables(self) -> List[str]:
        v = self.headers.get("variables")
        if not v:
            raise ConfigurationError("header 'variables' is required")
        return v.split()


def _ints(text: str, line: int) -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise ParseError(f"line {line}: expected integers", line) from None


def _int_header(headers, key, default):
    if key not in headers:
        return default
    try:
        return int(headers[key])
    except ValueError:
        raise ParseError(f"header {key} must be an integer", 0) from None


def parse_scenario(text: str, default_name: str = "scenario") -> Scenario:
    headers: Dict[str, str] = {}
    sections: Dict[str, Section] = {}
    expectations: List[Expectation] = []
    current: Optional[Section] = None
    in_expect = False
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[\s*(\w+)(?:\s+(\w+))?\s*\]", line)
        if m:
            type_, name = m.group(1), m.group(2)
            if type_ == "expect" and name is None:
                in_expect, current = True, None
                continue
            if type_ not in SECTION_TYPES or name is None:
                raise ParseError(f"line {ln}: bad section header {line!r}", ln)
            if name in sections:
                raise ParseError(f"line {ln}: duplicate section {name}", ln)
            current = sections[name] = Section(type_, name, [])
            in_expect = False
            continue
        if in_expect:
            expectations.append(_parse_expectation(line, ln))
        elif current is not None:
            current.lines.append((ln, line))
        else:
            if "=" not in line:
                raise ParseError(f"line {ln}: expected 'key = value'", ln)
            k, v = (x.strip() for x in line.split("=", 1))
            headers[k] = v
    kind = headers.get("kind")
    if kind not in KINDS:
        raise ParseError(f"unknown or missing kind {kind!r}", 0)
    convention = headers.get("convention", STRICT)
    if convention not in CONVENTIONS:
        raise ParseError(f"unknown convention {convention!r}", 0)
    return Scenario(
        kind=kind,
        name=headers.get("name", default_name),
        headers=headers,
        sections=sections,
        expectations=expectations,
        degree_bound=_int_header(headers, "degree_bound", ch.DEFAULT_DEGREE_BOUND),
        convention=convention,
    )


def _parse_expectation(line: str, ln: int) -> Expectation:
    convention = None
    m = re.search(r"\s@(\w+)$", line)
    if m:
        convention = m.group(1)
        line = line[: m.start()].strip()
    for op in _OPS:
        pat = rf"^(\S+)\s*{re.escape(op)}\s*(.*)$" if op in ("=", ">=", "<=") else rf"^(\S+)\s+{op}\s+(.*)$"
        mm = re.match(pat, line)
        if mm:
            return Expectation(mm.group(1), op, mm.group(2).strip(), convention, ln)
    raise ParseError(f"line {ln}: cannot read expectation {line!r}", ln)


# -- reports -------------------------------------------------------------------


def _plain(v):
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return str(v)


def _render(v) -> str:
    v = _plain(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, list):
        return "[" + ", ".join(_render(x) for x in v) + "]"
    return str(v)


@dataclass
class Check:
    label: str
    status: str  # "PASS", "FAIL" or "SKIP"
    detail: str = ""

    def line(self) -> str:
        return f"{self.status} {self.label}" + (f" ({self.detail})" if self.detail else "")


@dataclass
class Report:
    title: str
    kind: str
    echo: Dict[str, Any] = field(default_factory=dict)
    results: Dict[str, Any] = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    exit_code: int = 0
    error: Optional[str] = None
    # normalizes expected values written in the scenario's own notation
    canon: Optional[Callable[[str], str]] = field(default=None, repr=False, compare=False)

    @property
    def passed(self) -> bool:
        return self.exit_code == 0 and all(c.status != "FAIL" for c in self.checks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "title": self.title,
            "kind": self.kind,
            "input": _plain(self.echo),
            "results": _plain(self.results),
            "checks": [{"label": c.label, "status": c.status, "detail": c.detail} for c in self.checks],
            "notes": list(self.notes),
            "exit_code": self.exit_code,
            "error": self.error,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        out = [f"{self.title} [{self.kind}]"]
        if self.echo:
            out.append("input:")
            out += [f"  {k}: {_render(v)}" for k, v in self.echo.items()]
        if self.results:
            out.append("results:")
            out += [f"  {k}: {_render(v)}" for k, v in self.results.items()]
        if self.checks:
            out.append("checks:")
            out += ["  " + c.line() for c in self.checks]
        out += [f"note: {n}" for n in self.notes]
        if self.error:
            out.append(f"error: {self.error}")
        out.append(f"exit: {self.exit_code}")
        return "\n".join(out) + "\n"


# -- handlers ------------------------------------------------------------------


def _pieces(sc: Scenario) -> List[str]:
    return sorted(n for n, s in sc.sections.items() if s.type == "cone" and n.startswith("piece"))


def _subdivision(sc: Scenario, sigma: Cone) -> Subdivision:
    given = sum(sc.has(k) for k in ("cut", "cuts", "star")) + bool(_pieces(sc))
    if given > 1:
        raise ConfigurationError(
            "give only one of [vector cut], [matrix cuts], [vector star], [cone piece...]"
        )
    if _pieces(sc):
        return Subdivision(sigma, tuple(sc.cone(n) for n in _pieces(sc))).validate()
    if sc.has("cuts"):
        return refine_by_hyperplanes(trivial_subdivision(sigma), sc.matrix("cuts"))
    if sc.has("cut"):
        return hyperplane_subdivision(sigma, sc.vector("cut"))
    if sc.has("star"):
        return star_subdivision(sigma, sc.vector("star"))
    return trivial_subdivision(sigma)


def _check_dim(name: str, v, n: int):
    if len(v) != n:
        raise ConfigurationError(f"{name} has length {len(v)}, expected {n}")


def _monoid(sc: Scenario) -> AffineMonoid:
    cone = sc.cone("monoid")
    if sc.has("lattice"):
        return AffineMonoid(sc.matrix("lattice"), cone)
    return AffineMonoid.standard(cone)


def _run_saturated(sc: Scenario, rep: Report):
    m = _monoid(sc)
    alpha = sc.vector("alpha")
    _check_dim("alpha", alpha, m.ambient_rank)
    rep.echo.update(monoid=m.hilbert_basis, alpha=alpha, convention=sc.convention)
    rep.results["pairings"] = m.pairings(alpha)
    rep.results["saturated"] = is_saturated_element(m, alpha, sc.convention)


def _run_root_order(sc: Scenario, rep: Report):
    m = _monoid(sc)
    alpha = sc.vector("alpha")
    _check_dim("alpha", alpha, m.ambient_rank)
    rep.echo.update(monoid=m.hilbert_basis, alpha=alpha)
    n, ext = minimal_saturating_root(m, alpha)
    rep.results["root_order"] = n
    rep.results["index"] = ext.index
    rep.results["scale"] = ext.scale
    rep.results["extended_lattice_basis"] = ext.extended_lattice_basis
    rep.results["saturated_after"] = is_saturated_element(ext.extended_monoid, alpha, sc.convention)
    rep.results["proper_divisors_fail"] = all(
        not is_saturated_element(kummer_extension(m, alpha, k).extended_monoid, alpha, sc.convention)
        for k in range(1, n) if n % k == 0
    )


def _subdivision_input(sc: Scenario, rep: Report) -> Subdivision:
    sigma = sc.cone("sigma")
    rep.echo["sigma"] = sigma.rays
    for key in ("cut", "star"):
        if sc.has(key):
            v = sc.vector(key)
            _check_dim(key, v, sigma.ambient_rank)
            rep.echo[key] = v
    for name in _pieces(sc):
        rep.echo[name] = sc.cone(name).rays
    if sc.has("cuts"):
        rows = sc.matrix("cuts")
        for v in rows:
            _check_dim("cut", v, sigma.ambient_rank)
        rep.echo["cuts"] = rows
    return _subdivision(sc, sigma)


def _run_subdivide(sc: Scenario, rep: Report):
    d = _subdivision_input(sc, rep)
    rep.results["cone_count"] = len(d.maximal_cones)
    rep.results["cones"] = [c.rays for c in d.maximal_cones]
    rep.results["valid"] = not d.validation_errors()


def _run_pl_sections(sc: Scenario, rep: Report):
    d = _subdivision_input(sc, rep)
    basis = pl_sections(d)
    rep.results["rank"] = len(basis)
    rep.results["basis"] = [list(f.linear_parts) for f in basis]


def _pic_string(factors) -> str:
    if not factors:
        return "0"
    free = sum(1 for f in factors if f == 0)
    parts = []
    if free:
        parts.append("Z" if free == 1 else f"Z^{free}")
    parts += [f"Z/{f}" for f in factors if f]
    return " + ".join(parts)


def _run_pic(sc: Scenario, rep: Report):
    d = _subdivision_input(sc, rep)
    factors = pic_of_subdivision(d)
    rep.results["invariant_factors"] = factors
    rep.results["rank"] = sum(1 for f in factors if f == 0)
    rep.results["torsion_free"] = all(f == 0 for f in factors)
    rep.results["pic"] = _pic_string(factors)


def _run_fiber(sc: Scenario, rep: Report):
    d = _subdivision_input(sc, rep)
    tau = sc.cone("chart")
    rep.echo["chart"] = tau.rays
    chart = ch.chart_monoid(d, tau)
    if sc.has("origin"):
        origin = sc.matrix("origin")
    else:
        base = AffineMonoid.standard(dual_cone(d.base))
        origin = tuple(hilbert_basis(base))
    rep.echo["origin"] = origin
    fr = ch.fiber_ring(chart, origin, sc.degree_bound)
    rep.results["units"] = chart.unit_lattice
    rep.results["sharp_generators"] = chart.sharp_part
    rep.results["unit_rank"] = fr.unit_rank
    rep.results["nilpotents"] = [f"{_render(list(h))}:{k}" for h, k in fr.nilpotent_generators]
    rep.results["free_generators"] = fr.free_generators
    rep.results["empty"] = fr.empty


def _degrees(sc: Scenario) -> List[int]:
    spec = sc.headers.get("degrees")
    if spec is None:
        return list(range(0, sc.degree_bound + 1))
    out = []
    for part in spec.replace(",", " ").split():
        if "-" in part[1:]:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return sorted(set(out))


def _run_pushforward(sc: Scenario, rep: Report):
    names = sc.variables()
    sigma = sc.cone("sigma")
    n = sigma.ambient_rank
    if len(names) != n:
        raise ConfigurationError("one variable per exponent coordinate is required")
    weights = tuple(int(x) for x in sc.headers.get("weights", " ".join(["1"] * n)).split())
    _check_dim("weights", weights, n)

    def poly(text: str, ln: int) -> LaurentPolynomial:
        return from_polynomial(parse_polynomial(text, names), names)

    def show(p: LaurentPolynomial) -> str:
        return p.to_string(names)

    ideal = tuple(poly(t, ln) for ln, t in sc.polynomial_lines("ideal")) if sc.has("ideal") else ()
    x_ring = ch.GradedQuotientPresentation(sigma, ideal, weights, tuple(names))
    delta = _subdivision_input(sc, rep)
    rep.echo.update(variables=names, weights=weights, ideal=[show(g) for g in ideal])
    bound = sc.degree_bound
    degrees = [d for d in _degrees(sc) if abs(d) <= bound]
    skipped = [d for d in _degrees(sc) if abs(d) > bound]
    if skipped:
        rep.notes.append(f"degrees {_render(skipped)} skipped by the degree bound {bound}")
    rep.results["unit_rank"] = len(dual_cone(sigma).lineality)
    results = {}
    for d in degrees:
        r = ch.pushforward(x_ring, delta, d)
        results[d] = r
        rep.results[f"x_dimension[{d}]"] = r.x_dimension
        rep.results[f"section_dimension[{d}]"] = r.section_dimension
        rep.results[f"kernel_dimension[{d}]"] = len(r.kernel_generators)
        rep.results[f"kernel_generators[{d}]"] = [show(p) for p in r.kernel_generators]
        rep.results[f"cokernel_dimension[{d}]"] = r.cokernel_dimension
        rep.results[f"stable[{d}]"] = r.stable
        rep.results[f"nilpotency[{d}]"] = [
            ch.nilpotency_order(p, x_ring, max(bound, 1)) for p in r.kernel_generators
        ]
    if sc.has("equal"):
        ring = x_ring.with_support(sc.cone("ring")) if sc.has("ring") else x_ring
        for i, (ln, text) in enumerate(sc.polynomial_lines("equal"), start=1):
            if "==" not in text:
                raise ParseError(f"line {ln}: expected 'p == q'", ln)
            a, b = text.split("==", 1)
            rep.results[f"equal[{i}]"] = ch.equal_in_quotient(poly(a, ln), poly(b, ln), ring)
    if sc.has("tuple"):
        comps: List[Optional[LaurentPolynomial]] = [None] * len(delta.maximal_cones)
        for ln, text in sc.polynomial_lines("tuple"):
            if "@" not in text:
                raise ParseError(f"line {ln}: expected 'polynomial @ point of the chart'", ln)
            p_text, pt_text = text.split("@", 1)
            point = _ints(pt_text, ln)
            _check_dim("chart point", point, n)
            hits = [i for i, c in enumerate(delta.maximal_cones) if c.in_relative_interior(point)]
            if len(hits) != 1:
                raise ConfigurationError(f"line {ln}: point does not pick out a single chart")
            comps[hits[0]] = poly(p_text, ln)
        if any(c is None for c in comps):
            raise ConfigurationError("the tuple needs one component per chart")
        d = comps[0].degree(weights) if comps[0] else 0
        r = results.get(d) or ch.pushforward(x_ring, delta, d)
        rep.echo["tuple"] = [show(c) for c in comps]
        rep.results["glue"] = r.glue_test(comps)
        pre = r.preimage(comps)
        rep.results["preimage"] = None if pre is None else show(pre)
    rep.canon = lambda s: show(poly(s, 0))


HANDLERS: Dict[str, Callable[[Scenario, Report], None]] = {
    "saturated": _run_saturated,
    "root_order": _run_root_order,
    "subdivide": _run_subdivide,
    "pl_sections": _run_pl_sections,
    "pic": _run_pic,
    "fiber": _run_fiber,
    "pushforward": _run_pushforward,
}


# -- expectations --------------------------------------------------------------


def _expected_value(text: str):
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    if low == "none":
        return None
    try:
        return json.loads(text)
    except ValueError:
        return text


def _compare(actual, op: str, expected, canon) -> bool:
    if op in (">=", "<="):
        if not isinstance(actual, int) or isinstance(actual, bool):
            return False
        return actual >= expected if op == ">=" else actual <= expected
    if op in ("contains", "excludes"):
        items = [_render(x) for x in actual] if isinstance(actual, (list, tuple)) else []
        want = canon(expected) if isinstance(expected, str) else _render(expected)
        return (want in items) == (op == "contains")
    if isinstance(expected, str) and isinstance(actual, str):
        return canon(expected) == actual
    return _render(actual) == _render(expected)


def evaluate_expectations(sc: Scenario, rep: Report) -> None:
    canon = rep.canon or (lambda s: s)
    for ex in sc.expectations:
        if ex.convention is not None and ex.convention != sc.convention:
            continue
        label = f"{ex.key} {ex.op} {ex.value}"
        if ex.key.endswith("[*]"):
            prefix = ex.key[:-2]
            keys = [k for k in rep.results if k.startswith(prefix)]
        else:
            keys = [ex.key] if ex.key in rep.results else []
        if not keys:
            rep.checks.append(Check(label, "SKIP", "no such result"))
            continue
        try:
            expected = _expected_value(ex.value)
            bad = [k for k in keys if not _compare(rep.results[k], ex.op, expected, canon)]
        except (ParseError, PreconditionError, ConfigurationError) as e:
            rep.checks.append(Check(label, "FAIL", f"bad expectation: {e}"))
            continue
        if bad:
            rep.checks.append(Check(label, "FAIL", "got " + "; ".join(f"{k} = {_render(rep.results[k])}" for k in bad)))
        else:
            rep.checks.append(Check(label, "PASS"))


# -- entry points --------------------------------------------------------------


def run_parsed(sc: Scenario, title: Optional[str] = None) -> Report:
    rep = Report(title or sc.name, sc.kind)
    try:
        HANDLERS[sc.kind](sc, rep)
    except PreconditionError as e:
        rep.exit_code, rep.error = 2, str(e)
        return rep
    except (ConfigurationError, ParseError) as e:
        rep.exit_code, rep.error = 1, str(e)
        return rep
    evaluate_expectations(sc, rep)
    return rep


def load_scenario(path: str, degree_bound: Optional[int] = None,
                  convention: Optional[str] = None) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    sc = parse_scenario(text, default_name=os.path.basename(path))
    if degree_bound is not None:
        sc.degree_bound = degree_bound
    if convention is not None:
        if convention not in CONVENTIONS:
            raise ConfigurationError(f"unknown convention {convention!r}")
        sc.convention = convention
    return sc


def run_scenario(path: str, degree_bound: Optional[int] = None,
                 convention: Optional[str] = None, kind: Optional[str] = None) -> Report:
    """Parse and run a scenario file.  ``exit_code`` is 0 on success, 2 on a
    violated mathematical precondition, 1 on parse or configuration errors."""
    title = os.path.basename(path)
    try:
        sc = load_scenario(path, degree_bound, convention)
    except OSError as e:
        return Report(title, kind or "?", exit_code=1, error=str(e))
    except (ParseError, ConfigurationError) as e:
        return Report(title, kind or "?", exit_code=1, error=str(e))
    if kind is not None and sc.kind != kind:
        return Report(title, sc.kind, exit_code=1,
                      error=f"scenario kind is {sc.kind}, not {kind}")
    return run_parsed(sc, sc.headers.get("name", title))
