"""Hyperfield homomorphisms, the registered diagram, and structure verifiers.

The registry holds every arrow of the ten-hyperfield diagram: the solid
arrows (inclusions, phase maps, modulus maps, the identity P -> Phi) and
the four dashed section inclusions whose retraction is the phase map.
The solid subdiagram commutes; the dashed arrows only satisfy r o s = id,
so path-pair commutativity is checked over solid arrows and the section
identities are checked separately.

Orderings, norms, nonarchimedean norms, arguments and Phi-arguments are
verified both through their own axioms and through the equivalent
hom-to-representing-object condition (S, Triangle, TTriangle, P, Phi);
the two verdicts are required to agree on every candidate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from hypergrass import fields
from hypergrass.fields import (
    HF,
    UnsupportedOperation,
    Element,
    SetValue,
    angle,
    default_samples,
    element,
    format_element,
    hypersum,
    modulus,
    negate,
    one,
    probes_of,
    product,
    zero,
)


@dataclass(frozen=True)
class Homomorphism:
    """A registered closed-form hyperfield homomorphism."""

    name: str
    source: HF
    target: HF
    fn: Callable[[Element], Element]
    style: str = "solid"  # or "dashed" for the section inclusions

    def __call__(self, x: Element) -> Element:
        if x.field is not self.source:
            raise ValueError(f"{self.name} expects {self.source}, got {x.field}")
        return self.fn(x)

    def __repr__(self) -> str:
        return f"<hom {self.name}>"


def compose(g: Homomorphism, f: Homomorphism) -> Homomorphism:
    if f.target is not g.source:
        raise ValueError(f"cannot compose {g.name} after {f.name}")
    return Homomorphism(
        name=f"{g.name}∘{f.name}", source=f.source, target=g.target,
        fn=lambda x: g(f(x)),
    )


def identity_hom(f: HF) -> Homomorphism:
    return Homomorphism(f"id:{f.value}->{f.value}", f, f, lambda x: x)


# -- closed forms -----------------------------------------------------------


def _ph(x: Element, target: HF) -> Element:
    if x.is_zero:
        return zero(target)
    th = angle(x)
    if target is HF.S:
        return element(target, 1 if th == 0 else -1)
    if target is HF.K:
        return one(target)
    if target in (HF.P, HF.PHI):
        return element(target, th)
    raise AssertionError(f"ph into {target}")


def _abs(x: Element, target: HF) -> Element:
    if x.is_zero:
        return zero(target)
    m = modulus(x)
    if target is HF.K:
        return one(target)
    return element(target, m)


def _include(x: Element, target: HF) -> Element:
    if x.is_zero:
        return zero(target)
    f = x.field
    if f is HF.S and target is HF.TR:
        return element(target, Fraction(x.value))
    if f is HF.S and target in (HF.P, HF.PHI):
        return element(target, Fraction(0) if x.value > 0 else Fraction(1, 2))
    if f is HF.K and target in (HF.TRIANGLE, HF.TTRIANGLE):
        return one(target)
    if f in (HF.P, HF.PHI) and target in (HF.PHI, HF.TC):
        if target is HF.PHI:
            return element(target, x.value)
        return element(target, (Fraction(1), x.value))
    if f in (HF.R, HF.TR) and target in (HF.C, HF.TC):
        v = x.value
        return element(target, (abs(v), Fraction(0) if v > 0 else Fraction(1, 2)))
    raise AssertionError(f"inclusion {f}->{target}")


def ph_hom(source: HF, target: HF) -> Homomorphism:
    return Homomorphism(
        f"ph:{source.value}->{target.value}", source, target,
        lambda x: _ph(x, target),
    )


def abs_hom(source: HF, target: HF) -> Homomorphism:
    return Homomorphism(
        f"abs:{source.value}->{target.value}", source, target,
        lambda x: _abs(x, target),
    )


def inc_hom(source: HF, target: HF, style: str = "solid") -> Homomorphism:
    return Homomorphism(
        f"inc:{source.value}->{target.value}", source, target,
        lambda x: _include(x, target), style,
    )


def kappa(source: HF) -> Homomorphism:
    """The unique homomorphism to the Krasner hyperfield (support map)."""
    return Homomorphism(
        f"kappa:{source.value}->K", source, HF.K,
        lambda x: zero(HF.K) if x.is_zero else one(HF.K),
    )


@lru_cache(maxsize=1)
def diagram_registry() -> Tuple[Homomorphism, ...]:
    """Every arrow of the ten-hyperfield diagram, solid and dashed."""
    arrows = [
        # top row and its quotients
        inc_hom(HF.R, HF.C),
        ph_hom(HF.R, HF.S),
        abs_hom(HF.C, HF.TRIANGLE),
        ph_hom(HF.C, HF.P),
        ph_hom(HF.TRIANGLE, HF.K),
        # middle
        Homomorphism("id:P->PHI", HF.P, HF.PHI, lambda x: element(HF.PHI, x.value) if not x.is_zero else zero(HF.PHI)),
        abs_hom(HF.P, HF.K),
        inc_hom(HF.S, HF.P),
        inc_hom(HF.S, HF.PHI),
        abs_hom(HF.PHI, HF.K),
        # bottom row and its phase maps
        inc_hom(HF.TR, HF.TC),
        ph_hom(HF.TR, HF.S),
        abs_hom(HF.TC, HF.TTRIANGLE),
        ph_hom(HF.TC, HF.PHI),
        ph_hom(HF.TTRIANGLE, HF.K),
        # dashed sections
        inc_hom(HF.S, HF.TR, style="dashed"),
        inc_hom(HF.K, HF.TRIANGLE, style="dashed"),
        inc_hom(HF.K, HF.TTRIANGLE, style="dashed"),
        inc_hom(HF.PHI, HF.TC, style="dashed"),
    ]
    return tuple(arrows)


def lookup_hom(source: HF, target: HF) -> Homomorphism:
    """The registered arrow from source to target; kappa as a fallback."""
    for h in diagram_registry():
        if h.source is source and h.target is target:
            return h
    if target is HF.K:
        return kappa(source)
    if source is target:
        return identity_hom(source)
    raise KeyError(f"no registered homomorphism {source.value} -> {target.value}")


def section_retraction_pairs() -> List[Tuple[Homomorphism, Homomorphism]]:
    """The four dashed sections with their phase-map retractions."""
    return [
        (lookup_hom(HF.S, HF.TR), lookup_hom(HF.TR, HF.S)),
        (lookup_hom(HF.K, HF.TRIANGLE), lookup_hom(HF.TRIANGLE, HF.K)),
        (lookup_hom(HF.K, HF.TTRIANGLE), lookup_hom(HF.TTRIANGLE, HF.K)),
        (lookup_hom(HF.PHI, HF.TC), lookup_hom(HF.TC, HF.PHI)),
    ]


# ---------------------------------------------------------------------------
# diagram commutativity


def _solid_paths(source: HF, target: HF) -> List[Tuple[Homomorphism, ...]]:
    solid = [h for h in diagram_registry() if h.style == "solid"]
    out: List[Tuple[Homomorphism, ...]] = []

    def walk(node: HF, seen: Tuple[HF, ...], path: Tuple[Homomorphism, ...]):
        if node is target and path:
            out.append(path)
        for h in solid:
            if h.source is node and h.target not in seen:
                walk(h.target, seen + (h.target,), path + (h,))

    walk(source, (source,), ())
    return out


def _apply_path(path: Sequence[Homomorphism], x: Element) -> Element:
    for h in path:
        x = h(x)
    return x


@dataclass
class DiagramReport:
    path_pairs_checked: int
    failures: List[str]
    section_identities_ok: bool

    @property
    def passed(self) -> bool:
        return not self.failures and self.section_identities_ok


def check_diagram_commutes(probe_count: Optional[int] = None) -> DiagramReport:
    """Solid path pairs agree on probes; section retractions are identities."""
    failures: List[str] = []
    pairs = 0
    nodes = list(HF)
    for a, b in itertools.permutations(nodes, 2):
        paths = _solid_paths(a, b)
        if len(paths) < 2:
            continue
        probes = default_samples(a)
        for p1, p2 in itertools.combinations(paths, 2):
            pairs += 1
            for x in probes:
                y1 = _apply_path(p1, x)
                y2 = _apply_path(p2, x)
                if y1 != y2:
                    failures.append(
                        f"{'/'.join(h.name for h in p1)} vs "
                        f"{'/'.join(h.name for h in p2)} at {format_element(x)}"
                    )
                    break
    sections_ok = True
    for s, r in section_retraction_pairs():
        for x in default_samples(s.source):
            if r(s(x)) != x:
                sections_ok = False
    return DiagramReport(pairs, failures, sections_ok)


# ---------------------------------------------------------------------------
# homomorphism verification


@dataclass
class HomReport:
    name: str
    checks: List[fields.Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"name": self.name, "checks": [c.to_json() for c in self.checks]}


def _real_value(el: Element) -> Fraction:
    """Exact real value of a real-axis element (angle 0 or 1/2)."""
    if el.is_zero:
        return Fraction(0)
    th = angle(el)
    if th == 0:
        return modulus(el)
    if th == Fraction(1, 2):
        return -modulus(el)
    raise ValueError(f"{format_element(el)} is not on the real axis")


def verify_homomorphism(
    h: Homomorphism,
    probes: Optional[Sequence[Element]] = None,
    pair_limit: Optional[int] = None,
) -> HomReport:
    """Check h(0)=0, h(1)=1, multiplicativity, and sum containment.

    Sum containment h(x (+) y) inside h(x) (+) h(y) is checked on the
    boundary/midpoint probes of each exact set; R-sourced sums use exact
    rational addition and C-sourced sums the high-precision layer.
    """
    from hypergrass import dequant

    checks: List[fields.Check] = []
    if probes is None:
        probes = default_samples(h.source)
    probes = list(probes)

    z_ok = h(zero(h.source)).is_zero
    checks.append(fields.Check("zero-to-zero", z_ok, None if z_ok else "h(0) != 0"))
    o_ok = h(one(h.source)) == one(h.target)
    checks.append(fields.Check("one-to-one", o_ok, None if o_ok else "h(1) != 1"))

    mult_witness = None
    for x, y in itertools.combinations_with_replacement(probes, 2):
        if h(product(x, y)) != product(h(x), h(y)):
            mult_witness = f"{format_element(x)}, {format_element(y)}"
            break
    checks.append(fields.Check("multiplicative", mult_witness is None, mult_witness))

    sum_witness = None
    classical_source = h.source in (HF.R, HF.C)
    classical_target = h.target in (HF.R, HF.C)
    pairs = list(itertools.combinations_with_replacement(probes, 2))
    if pair_limit is not None:
        pairs = pairs[:pair_limit]
    for x, y in pairs:
        hx, hy = h(x), h(y)

        def in_target(el: Element) -> bool:
            if h.target is HF.R:
                return el.value == hx.value + hy.value
            if h.target is HF.C:
                # only real-axis payloads add exactly; enough for inc: R -> C
                total = _real_value(hx) + _real_value(hy)
                return _real_value(el) == total
            return hypersum(hx, hy).contains(el)

        if classical_source:
            if h.source is HF.R:
                # rational payloads close under classical addition
                member = element(HF.R, x.value + y.value)
                if not in_target(h(member)):
                    sum_witness = (
                        f"h({format_element(member)}) not in "
                        f"h({format_element(x)}) + h({format_element(y)})"
                    )
            else:
                if not dequant.numeric_sum_containment(h, x, y, hypersum(hx, hy)):
                    sum_witness = f"{format_element(x)}, {format_element(y)} (numeric)"
        else:
            for zmem in probes_of(hypersum(x, y)):
                if not in_target(h(zmem)):
                    sum_witness = (
                        f"h({format_element(zmem)}) not in h({format_element(x)})"
                        f" + h({format_element(y)})"
                    )
                    break
        if sum_witness:
            break
    checks.append(fields.Check("sum-containment", sum_witness is None, sum_witness))
    return HomReport(h.name, checks)


# ---------------------------------------------------------------------------
# orderings


def _sum_probes(x: Element, y: Element) -> List[Element]:
    """Member probes of x (+) y; exact single-valued sum for R."""
    if x.field is HF.R:
        return [element(HF.R, x.value + y.value)]
    if x.field is HF.C:
        raise UnsupportedOperation("C sums have no exact probe form")
    return probes_of(hypersum(x, y))


@dataclass
class Ordering:
    field: HF
    positives: Callable[[Element], bool]
    name: str = "ordering"


def ordering_from_hom(h: Homomorphism) -> Ordering:
    if h.target is not HF.S:
        raise ValueError("orderings correspond to homomorphisms into S")
    plus = one(HF.S)
    return Ordering(h.source, lambda x: h(x) == plus, name=f"pos[{h.name}]")


def verify_ordering(o: Ordering, probes: Sequence[Element]) -> Optional[str]:
    """None if the ordering axioms hold on probes, else a witness string."""
    pos = [x for x in probes if o.positives(x)]
    for x in probes:
        kinds = (x.is_zero, o.positives(x), o.positives(negate(x)))
        if sum(kinds) != 1:
            return f"trichotomy fails at {format_element(x)}"
    for x, y in itertools.combinations_with_replacement(pos, 2):
        if not o.positives(product(x, y)):
            return f"positives not multiplicative at {format_element(x)},{format_element(y)}"
        for zmem in _sum_probes(x, y):
            if not o.positives(zmem):
                return (
                    f"positives not additively closed at "
                    f"{format_element(x)},{format_element(y)}"
                )
    return None


def hom_from_ordering(o: Ordering, probes: Sequence[Element]) -> Homomorphism:
    w = verify_ordering(o, probes)
    if w is not None:
        raise ValueError(f"not an ordering: {w}")

    def fn(x: Element) -> Element:
        if x.is_zero:
            return zero(HF.S)
        return element(HF.S, 1 if o.positives(x) else -1)

    return Homomorphism(f"ord:{o.field.value}->S", o.field, HF.S, fn)


# ---------------------------------------------------------------------------
# norms, nonarchimedean norms, arguments, Phi-arguments


@dataclass
class StructureReport:
    kind: str
    axioms_pass: bool
    hom_pass: bool
    witness: Optional[str] = None

    @property
    def agree(self) -> bool:
        return self.axioms_pass == self.hom_pass

    @property
    def valid(self) -> bool:
        return self.axioms_pass and self.hom_pass

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "axioms": "pass" if self.axioms_pass else "fail",
            "homCondition": "pass" if self.hom_pass else "fail",
            "agree": self.agree,
            "witness": self.witness,
        }


def _as_candidate_hom(
    f: HF, target: HF, fn_value: Callable[[Element], Element]
) -> Homomorphism:
    return Homomorphism(f"cand:{f.value}->{target.value}", f, target, fn_value)


def verify_norm(
    f: HF, norm: Callable[[Element], Fraction], probes: Optional[Sequence[Element]] = None
) -> StructureReport:
    """Norm axioms vs. the hom-to-Triangle condition; both verdicts returned."""
    probes = list(probes) if probes is not None else default_samples(f)
    witness = None
    ok = True
    for x in probes:
        v = norm(x)
        if (v > 0) != (not x.is_zero) or v < 0:
            ok, witness = False, f"positivity at {format_element(x)}"
            break
    if ok:
        for x, y in itertools.combinations_with_replacement(probes, 2):
            if norm(product(x, y)) != norm(x) * norm(y):
                ok, witness = False, f"multiplicativity at {format_element(x)},{format_element(y)}"
                break
            for zmem in _sum_probes(x, y):
                if not (0 <= norm(zmem) <= norm(x) + norm(y)):
                    ok, witness = False, f"subadditivity at {format_element(x)},{format_element(y)}"
                    break
            if not ok:
                break
    cand = _as_candidate_hom(f, HF.TRIANGLE, lambda x: element(HF.TRIANGLE, norm(x)))
    hom_ok = verify_homomorphism(cand, probes).passed
    return StructureReport("norm", ok, hom_ok, witness)


def verify_nonarchimedean_norm(
    f: HF, norm: Callable[[Element], Fraction], probes: Optional[Sequence[Element]] = None
) -> StructureReport:
    probes = list(probes) if probes is not None else default_samples(f)
    witness = None
    ok = True
    for x in probes:
        v = norm(x)
        if (v > 0) != (not x.is_zero) or v < 0:
            ok, witness = False, f"positivity at {format_element(x)}"
            break
    if ok:
        for x, y in itertools.combinations_with_replacement(probes, 2):
            if norm(product(x, y)) != norm(x) * norm(y):
                ok, witness = False, f"multiplicativity at {format_element(x)},{format_element(y)}"
                break
            bound = max(norm(x), norm(y))
            for zmem in _sum_probes(x, y):
                if not (0 <= norm(zmem) <= bound):
                    ok, witness = False, f"ultrametric at {format_element(x)},{format_element(y)}"
                    break
            if not ok:
                break
    cand = _as_candidate_hom(f, HF.TTRIANGLE, lambda x: element(HF.TTRIANGLE, norm(x)))
    hom_ok = verify_homomorphism(cand, probes).passed
    return StructureReport("nonarchimedean-norm", ok, hom_ok, witness)


def _verify_argument_like(
    f: HF,
    arg: Callable[[Element], Optional[Fraction]],
    probes: Optional[Sequence[Element]],
    closed: bool,
) -> StructureReport:
    probes = list(probes) if probes is not None else default_samples(f)
    nonzero = [x for x in probes if not x.is_zero]
    witness = None
    ok = True
    for x in nonzero:
        if arg(x) is None:
            ok, witness = False, f"arg undefined at {format_element(x)}"
            break
        if arg(negate(x)) != (arg(x) + Fraction(1, 2)) % 1:
            ok, witness = False, f"arg(-x) != -arg(x) at {format_element(x)}"
            break
    if ok:
        for x, y in itertools.combinations_with_replacement(nonzero, 2):
            if arg(product(x, y)) != (arg(x) + arg(y)) % 1:
                ok, witness = False, f"not a group hom at {format_element(x)},{format_element(y)}"
                break
            ax, ay = arg(x), arg(y)
            members = [m for m in _sum_probes(x, y) if not m.is_zero]
            if ax == ay:
                if any(arg(m) != ax for m in members):
                    ok, witness = False, f"same-argument sum drifts at {format_element(x)},{format_element(y)}"
                    break
            elif (ay - ax) % 1 != Fraction(1, 2):
                target = HF.PHI if closed else HF.P
                arc_set = hypersum(element(target, ax), element(target, ay))
                if any(not arc_set.contains(element(target, arg(m))) for m in members):
                    ok, witness = False, f"sum leaves shortest arc at {format_element(x)},{format_element(y)}"
                    break
            if not ok:
                break
    target = HF.PHI if closed else HF.P
    cand = _as_candidate_hom(
        f, target,
        lambda x: zero(target) if x.is_zero else element(target, arg(x)),
    )
    hom_ok = verify_homomorphism(cand, probes).passed
    kind = "phi-argument" if closed else "argument"
    return StructureReport(kind, ok, hom_ok, witness)


def verify_argument(f, arg, probes=None) -> StructureReport:
    return _verify_argument_like(f, arg, probes, closed=False)


def verify_phi_argument(f, arg, probes=None) -> StructureReport:
    return _verify_argument_like(f, arg, probes, closed=True)
