"""Exact arithmetic for the ten registered hyperfields.

Elements carry exact payloads (rationals, or rational turn angles on the
unit circle, or polar pairs), so equality, multiplication, negation and
membership in set-valued sums are all decidable.  Hyperaddition returns a
``SetValue``: a canonical union of finitely many points, closed intervals,
circle arcs, full circles and at most one disk, plus a separate flag for
the zero element.  Zero never lives inside a geometric part; it is tracked
only by the flag, which keeps canonical forms syntactically comparable.

The classical fields R and C are registered for multiplication and for the
homomorphism diagram, but their (single-valued) addition is served by the
numeric layer in ``dequant``; ``hypersum`` refuses them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union


class HF(str, Enum):
    """Identifiers of the ten registered hyperfields."""

    R = "R"
    C = "C"
    TRIANGLE = "TRI"
    P = "P"
    S = "S"
    PHI = "PHI"
    K = "K"
    TR = "TR"
    TC = "TC"
    TTRIANGLE = "TT"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


# payload families
_SIGNLIKE = (HF.S, HF.K)
_REALLIKE = (HF.R, HF.TR)
_NONNEG = (HF.TRIANGLE, HF.TTRIANGLE)
_CIRCLE = (HF.P, HF.PHI)
_POLAR = (HF.C, HF.TC)

HALF = Fraction(1, 2)
ONE = Fraction(1)
ZERO_F = Fraction(0)

Payload = Union[int, Fraction, None, Tuple[Fraction, Fraction]]


class UnsupportedOperation(Exception):
    """Raised when an exact hyperoperation is not available for a field."""


class MismatchedFields(ValueError):
    """Raised when operands belong to different hyperfields."""


@dataclass(frozen=True, slots=True)
class Element:
    """A single exact element of one of the registered hyperfields."""

    field: HF
    value: Payload

    @property
    def is_zero(self) -> bool:
        v = self.value
        if self.field in _SIGNLIKE:
            return v == 0
        if self.field in _REALLIKE or self.field in _NONNEG:
            return v == 0
        return v is None

    def __repr__(self) -> str:
        return f"<{format_element(self)}>"


def element(field: HF, value: Payload) -> Element:
    """Validating constructor; normalizes angles into [0, 1)."""
    if field is HF.S:
        if value not in (-1, 0, 1):
            raise ValueError(f"S payload must be -1, 0 or 1, got {value!r}")
        return Element(field, int(value))
    if field is HF.K:
        if value not in (0, 1):
            raise ValueError(f"K payload must be 0 or 1, got {value!r}")
        return Element(field, int(value))
    if field in _REALLIKE:
        return Element(field, Fraction(value))
    if field in _NONNEG:
        q = Fraction(value)
        if q < 0:
            raise ValueError(f"{field} payload must be >= 0, got {value!r}")
        return Element(field, q)
    if field in _CIRCLE:
        if value is None:
            return Element(field, None)
        return Element(field, Fraction(value) % 1)
    if field in _POLAR:
        if value is None:
            return Element(field, None)
        m, t = value
        m = Fraction(m)
        if m <= 0:
            raise ValueError(f"{field} modulus must be positive, got {m}")
        return Element(field, (m, Fraction(t) % 1))
    raise ValueError(f"unknown hyperfield {field!r}")


def zero(field: HF) -> Element:
    if field in _SIGNLIKE or field in _REALLIKE or field in _NONNEG:
        return Element(field, Fraction(0) if field not in _SIGNLIKE else 0)
    return Element(field, None)


def one(field: HF) -> Element:
    if field in _SIGNLIKE:
        return Element(field, 1)
    if field in _REALLIKE or field in _NONNEG:
        return Element(field, ONE)
    if field in _CIRCLE:
        return Element(field, ZERO_F)
    return Element(field, (ONE, ZERO_F))


def product(a: Element, b: Element) -> Element:
    """Exact multiplication; zero absorbs."""
    _same_field(a, b)
    f = a.field
    if a.is_zero or b.is_zero:
        return zero(f)
    if f in _SIGNLIKE or f in _REALLIKE or f in _NONNEG:
        return Element(f, a.value * b.value)
    if f in _CIRCLE:
        return Element(f, (a.value + b.value) % 1)
    ma, ta = a.value
    mb, tb = b.value
    return Element(f, (ma * mb, (ta + tb) % 1))


def negate(a: Element) -> Element:
    """The unique additive inverse."""
    f = a.field
    if a.is_zero:
        return a
    if f is HF.S:
        return Element(f, -a.value)
    if f is HF.K or f in _NONNEG:
        return a
    if f in _REALLIKE:
        return Element(f, -a.value)
    if f in _CIRCLE:
        return Element(f, (a.value + HALF) % 1)
    m, t = a.value
    return Element(f, (m, (t + HALF) % 1))


def inverse(a: Element) -> Element:
    """Multiplicative inverse of a nonzero element."""
    if a.is_zero:
        raise ZeroDivisionError("zero has no multiplicative inverse")
    f = a.field
    if f in _SIGNLIKE:
        return a
    if f in _REALLIKE or f in _NONNEG:
        return Element(f, 1 / a.value)
    if f in _CIRCLE:
        return Element(f, (-a.value) % 1)
    m, t = a.value
    return Element(f, (1 / m, (-t) % 1))


def modulus(a: Element) -> Fraction:
    """|a| as an exact nonnegative rational."""
    f = a.field
    if f in _SIGNLIKE:
        return Fraction(abs(a.value))
    if f in _REALLIKE:
        return abs(a.value)
    if f in _NONNEG:
        return a.value
    if a.is_zero:
        return ZERO_F
    if f in _CIRCLE:
        return ONE
    return a.value[0]


def angle(a: Element) -> Optional[Fraction]:
    """Phase in rational turns, or None for zero."""
    if a.is_zero:
        return None
    f = a.field
    if f in _SIGNLIKE or f in _NONNEG:
        return ZERO_F if a.value > 0 else HALF
    if f in _REALLIKE:
        return ZERO_F if a.value > 0 else HALF
    if f in _CIRCLE:
        return a.value
    return a.value[1]


def _same_field(a: Element, b: Element) -> None:
    if a.field is not b.field:
        raise MismatchedFields(f"mixed hyperfields {a.field} and {b.field}")


# ---------------------------------------------------------------------------
# element literals


def format_element(a: Element) -> str:
    f = a.field
    tag = f.value
    if f is HF.S:
        return f"{tag}:" + {1: "+", 0: "0", -1: "-"}[a.value]
    if f is HF.K:
        return f"{tag}:{a.value}"
    if f in _REALLIKE or f in _NONNEG:
        return f"{tag}:{a.value}"
    if f in _CIRCLE:
        return f"{tag}:0" if a.is_zero else f"{tag}:@{a.value}"
    if a.is_zero:
        return f"{tag}:0"
    m, t = a.value
    return f"{tag}:{m}@{t}"


def parse_element(text: str) -> Element:
    """Parse literals like ``S:+``, ``TR:-3/2``, ``P:@1/3``, ``TC:3/2@1/4``."""
    try:
        tag, payload = text.split(":", 1)
    except ValueError:
        raise ValueError(f"element literal needs a FIELD: prefix, got {text!r}")
    try:
        f = HF(tag)
    except ValueError:
        raise ValueError(f"unknown hyperfield tag {tag!r} in {text!r}")
    payload = payload.strip()
    if f is HF.S:
        table = {"+": 1, "+1": 1, "-": -1, "-1": -1, "0": 0}
        if payload not in table:
            raise ValueError(f"bad S payload {payload!r}")
        return element(f, table[payload])
    if f is HF.K:
        if payload not in ("0", "1"):
            raise ValueError(f"bad K payload {payload!r}")
        return element(f, int(payload))
    if f in _REALLIKE or f in _NONNEG:
        return element(f, Fraction(payload))
    if f in _CIRCLE:
        if payload == "0":
            return zero(f)
        if not payload.startswith("@"):
            raise ValueError(f"{f} payload must be 0 or @turns, got {payload!r}")
        return element(f, Fraction(payload[1:]))
    if payload == "0":
        return zero(f)
    if "@" not in payload:
        raise ValueError(f"{f} payload must be 0 or mod@turns, got {payload!r}")
    m, t = payload.split("@", 1)
    return element(f, (Fraction(m), Fraction(t)))


# ---------------------------------------------------------------------------
# set values


class Arc(NamedTuple):
    """Circle arc at a fixed modulus, in turn coordinates.

    ``start`` lies in [0, 1); the arc runs counterclockwise for ``length``
    turns (0 < length <= 1).  Endpoint membership follows the closed flags;
    a length-1 arc with both flags open is a punctured circle.
    """

    modulus: Fraction
    start: Fraction
    length: Fraction
    start_closed: bool
    end_closed: bool

    def contains_angle(self, theta: Fraction) -> bool:
        d = (theta - self.start) % 1
        if d == 0:
            return self.start_closed or (self.length == 1 and self.end_closed)
        if d < self.length:
            return True
        if d == self.length:
            return self.end_closed
        return False


Interval = Tuple[Fraction, Fraction]  # closed [lo, hi] with lo < hi


@dataclass(frozen=True, slots=True)
class SetValue:
    """Canonical set-valued result of hyperaddition."""

    field: HF
    points: Tuple[Element, ...] = ()
    intervals: Tuple[Interval, ...] = ()
    arcs: Tuple[Arc, ...] = ()
    circles: Tuple[Fraction, ...] = ()
    disk: Optional[Fraction] = None
    includes_zero: bool = False

    # -- membership ---------------------------------------------------

    def contains(self, x: Element) -> bool:
        if x.field is not self.field:
            raise MismatchedFields(f"membership across fields {x.field}/{self.field}")
        if x.is_zero:
            return self.includes_zero
        if self.disk is not None and modulus(x) <= self.disk:
            return True
        m = modulus(x)
        if m in self.circles:
            return True
        th = angle(x)
        for arc in self.arcs:
            if arc.modulus == m and arc.contains_angle(th):
                return True
        v = x.value
        for lo, hi in self.intervals:
            if self.field in _NONNEG or self.field in _REALLIKE:
                if lo <= v <= hi:
                    return True
        return x in self.points

    def is_empty(self) -> bool:
        return not (
            self.points or self.intervals or self.arcs or self.circles
            or self.disk is not None or self.includes_zero
        )

    def __str__(self) -> str:
        bits: List[str] = []
        if self.includes_zero:
            bits.append("0")
        bits.extend(format_element(p) for p in self.points)
        bits.extend(f"[{lo},{hi}]" for lo, hi in self.intervals)
        for a in self.arcs:
            lb = "[" if a.start_closed else "("
            rb = "]" if a.end_closed else ")"
            bits.append(f"arc@{a.modulus}{lb}{a.start},{(a.start + a.length) % 1 or 1}{rb}")
        bits.extend(f"circle@{m}" for m in self.circles)
        if self.disk is not None:
            bits.append(f"disk<={self.disk}")
        return "{" + ", ".join(bits) + "}"

    # -- construction ---------------------------------------------------

    @staticmethod
    def make(
        field: HF,
        points: Iterable[Element] = (),
        intervals: Iterable[Interval] = (),
        arcs: Iterable[Arc] = (),
        circles: Iterable[Fraction] = (),
        disk: Optional[Fraction] = None,
        includes_zero: bool = False,
    ) -> "SetValue":
        pts = [p for p in points if not p.is_zero]
        ivs = [(Fraction(lo), Fraction(hi)) for lo, hi in intervals]
        # degenerate intervals become points
        for lo, hi in [iv for iv in ivs if iv[0] == iv[1]]:
            if lo != 0:
                pts.append(element(field, lo))
        ivs = [iv for iv in ivs if iv[0] < iv[1]]
        arcs = list(arcs)
        circs = sorted(set(Fraction(c) for c in circles))
        if disk is not None:
            disk = Fraction(disk)

        if disk is not None:
            circs = [c for c in circs if c > disk]
            arcs = [a for a in arcs if a.modulus > disk]
            pts = [p for p in pts if modulus(p) > disk]

        arcs, circ_from_arcs = _canonical_arcs(arcs, pts, field)
        if circ_from_arcs:
            circs = sorted(set(circs) | circ_from_arcs)
            arcs = [a for a in arcs if a.modulus not in circs]
        if circs:
            arcs = [a for a in arcs if a.modulus not in circs]
            pts = [p for p in pts if modulus(p) not in circs]

        ivs = _merge_intervals(ivs)
        if ivs:
            pts = [
                p for p in pts
                if not any(lo <= p.value <= hi for lo, hi in ivs)
            ]

        pts = sorted(set(pts), key=_element_key)
        return SetValue(
            field=field,
            points=tuple(pts),
            intervals=tuple(ivs),
            arcs=tuple(arcs),
            circles=tuple(circs),
            disk=disk,
            includes_zero=bool(includes_zero),
        )


def singleton(a: Element) -> SetValue:
    if a.is_zero:
        return SetValue.make(a.field, includes_zero=True)
    return SetValue.make(a.field, points=[a])


def _element_key(a: Element):
    f = a.field
    if a.is_zero:
        return (0, ZERO_F, ZERO_F)
    if f in _SIGNLIKE:
        return (1, Fraction(a.value), ZERO_F)
    if f in _REALLIKE or f in _NONNEG:
        return (1, a.value, ZERO_F)
    if f in _CIRCLE:
        return (1, ONE, a.value)
    return (1, a.value[0], a.value[1])


def _merge_intervals(ivs: List[Interval]) -> List[Interval]:
    if not ivs:
        return []
    ivs = sorted(ivs)
    out = [ivs[0]]
    for lo, hi in ivs[1:]:
        plo, phi = out[-1]
        if lo <= phi:
            out[-1] = (plo, max(phi, hi))
        else:
            out.append((lo, hi))
    return out


def _canonical_arcs(
    arcs: List[Arc], pts: List[Element], field: HF
) -> Tuple[List[Arc], set]:
    """Merge arcs per modulus, absorb points, detect full circles.

    Mutates ``pts`` in place (absorbed points removed).  Returns the merged
    arc list and the set of moduli that became full circles.
    """
    full: set = set()
    if not arcs:
        return [], full
    by_mod: dict = {}
    for a in arcs:
        by_mod.setdefault(a.modulus, []).append(a)
    out: List[Arc] = []
    for m, group in sorted(by_mod.items()):
        angles = [angle(p) for p in pts if modulus(p) == m and not p.is_zero]
        merged, is_full, used = _merge_arcs_one_modulus(group, angles)
        if used:
            keep = []
            for p in pts:
                if not p.is_zero and modulus(p) == m and angle(p) in used:
                    continue
                keep.append(p)
            pts[:] = keep
        if is_full:
            full.add(m)
        else:
            out.extend(Arc(m, s % 1, ln, sc, ec) for s, ln, sc, ec in merged)
    out.sort(key=lambda a: (a.modulus, a.start, a.length))
    return out, full


def _merge_arcs_one_modulus(group: List[Arc], point_angles: List[Fraction]):
    """Fixpoint merge of arcs sharing a modulus.

    Returns (segments, became_full_circle, absorbed_point_angles) where each
    segment is (start, length, start_closed, end_closed).
    """
    segs = [(a.start, a.length, a.start_closed, a.end_closed) for a in group]
    absorbed: set = set()
    changed = True
    while changed:
        changed = False
        # absorb points: interior points vanish, endpoint hits close flags
        for th in point_angles:
            if th in absorbed:
                continue
            for i, (s, ln, sc, ec) in enumerate(segs):
                d = (th - s) % 1
                if d == 0:
                    if sc or (ln == 1 and ec):
                        absorbed.add(th)
                    else:
                        segs[i] = (s, ln, True, ec)
                        absorbed.add(th)
                        changed = True
                    break
                if d < ln:
                    absorbed.add(th)
                    break
                if d == ln:
                    if ec:
                        absorbed.add(th)
                    else:
                        segs[i] = (s, ln, sc, True)
                        absorbed.add(th)
                        changed = True
                    break
        # merge pairs
        merged_pair = True
        while merged_pair:
            merged_pair = False
            n = len(segs)
            for i in range(n):
                for j in range(i + 1, n):
                    res = _merge_two_segments(segs[i], segs[j])
                    if res is not None:
                        segs[j] = res
                        del segs[i]
                        merged_pair = True
                        changed = True
                        break
                if merged_pair:
                    break
        # full-circle check
        for s, ln, sc, ec in segs:
            if ln > 1 or (ln == 1 and (sc or ec)):
                return [], True, set(point_angles)
    return segs, False, absorbed


def _merge_two_segments(x, y):
    """Merge two circular segments if they overlap or close-touch."""
    s1, l1, sc1, ec1 = x
    for shift in (-1, 0, 1):
        s2 = y[0] + shift
        l2, sc2, ec2 = y[1], y[2], y[3]
        e1, e2 = s1 + l1, s2 + l2
        lo = max(s1, s2)
        hi = min(e1, e2)
        touch = False
        if lo < hi:
            touch = True
        elif lo == hi:
            # endpoint contact: needs a closed flag on at least one side
            flags = []
            if lo == s1:
                flags.append(sc1)
            if lo == e1:
                flags.append(ec1)
            if lo == s2:
                flags.append(sc2)
            if lo == e2:
                flags.append(ec2)
            touch = any(flags)
        if not touch:
            continue
        ns = min(s1, s2)
        ne = max(e1, e2)
        if s1 == s2:
            nsc = sc1 or sc2
        else:
            nsc = sc1 if s1 < s2 else sc2
        if e1 == e2:
            nec = ec1 or ec2
        else:
            nec = ec1 if e1 > e2 else ec2
        return (ns % 1, ne - ns, nsc, nec)
    return None


# ---------------------------------------------------------------------------
# binary hyperaddition


def hypersum(a: Element, b: Element) -> SetValue:
    """The paper's binary case tables, exactly."""
    _same_field(a, b)
    f = a.field
    if f in (HF.R, HF.C):
        raise UnsupportedOperation(
            f"{f} addition is classical; use the dequant layer for numeric sums"
        )
    if a.is_zero:
        return singleton(b)
    if b.is_zero:
        return singleton(a)
    if f is HF.S:
        if a.value == b.value:
            return singleton(a)
        return SetValue.make(f, points=[a, b], includes_zero=True)
    if f is HF.K:
        return SetValue.make(f, points=[a], includes_zero=True)
    if f is HF.TRIANGLE:
        lo = abs(a.value - b.value)
        hi = a.value + b.value
        return SetValue.make(f, intervals=[(lo, hi)], includes_zero=(lo == 0))
    if f is HF.TTRIANGLE:
        if a.value > b.value:
            return singleton(a)
        if b.value > a.value:
            return singleton(b)
        return SetValue.make(f, intervals=[(ZERO_F, a.value)], includes_zero=True)
    if f is HF.TR:
        ma, mb = abs(a.value), abs(b.value)
        if ma > mb:
            return singleton(a)
        if mb > ma:
            return singleton(b)
        if a.value == b.value:
            return singleton(a)
        return SetValue.make(f, intervals=[(-ma, ma)], includes_zero=True)
    if f in _CIRCLE:
        ta, tb = a.value, b.value
        if ta == tb:
            return singleton(a)
        if (tb - ta) % 1 == HALF:
            if f is HF.P:
                return SetValue.make(f, points=[a, b], includes_zero=True)
            return SetValue.make(f, circles=[ONE], includes_zero=True)
        closed = f is HF.PHI
        return SetValue.make(f, arcs=[_shortest_arc(ONE, ta, tb, closed)])
    # TC
    ma, mb = a.value[0], b.value[0]
    if ma > mb:
        return singleton(a)
    if mb > ma:
        return singleton(b)
    ta, tb = a.value[1], b.value[1]
    if ta == tb:
        return singleton(a)
    if (tb - ta) % 1 == HALF:
        return SetValue.make(f, disk=ma, includes_zero=True)
    return SetValue.make(f, arcs=[_shortest_arc(ma, ta, tb, True)])


def _shortest_arc(m: Fraction, ta: Fraction, tb: Fraction, closed: bool) -> Arc:
    d = (tb - ta) % 1
    assert d != 0 and d != HALF
    if d < HALF:
        return Arc(m, ta % 1, d, closed, closed)
    return Arc(m, tb % 1, 1 - d, closed, closed)


# ---------------------------------------------------------------------------
# iterated hyperaddition: set (+) element, one part at a time


def fold_hypersum(terms: Sequence[Element]) -> SetValue:
    """Left fold of the hyperaddition over a nonempty term list.

    Associativity and commutativity of the hyperfield make the result
    independent of the fold order; the property suite checks this.
    """
    if not terms:
        raise ValueError("fold_hypersum needs at least one term")
    f = terms[0].field
    for t in terms[1:]:
        if t.field is not f:
            raise MismatchedFields("fold over mixed hyperfields")
    if f in (HF.R, HF.C):
        raise UnsupportedOperation(
            f"{f} addition is classical; use the dequant layer for numeric sums"
        )
    acc = singleton(terms[0])
    for t in terms[1:]:
        acc = _set_plus_element(acc, t)
    return acc


def _set_plus_element(sv: SetValue, t: Element) -> SetValue:
    if t.is_zero:
        return sv
    f = sv.field
    pts: List[Element] = []
    ivs: List[Interval] = []
    arcs: List[Arc] = []
    circs: List[Fraction] = []
    disk: Optional[Fraction] = None
    zero_flag = False

    def eat(other: SetValue):
        nonlocal disk, zero_flag
        pts.extend(other.points)
        ivs.extend(other.intervals)
        arcs.extend(other.arcs)
        circs.extend(other.circles)
        if other.disk is not None:
            disk = other.disk if disk is None else max(disk, other.disk)
        zero_flag = zero_flag or other.includes_zero

    if sv.includes_zero:
        pts.append(t)
    for p in sv.points:
        eat(hypersum(p, t))
    for iv in sv.intervals:
        eat(_interval_plus(f, iv, t))
    for arc in sv.arcs:
        eat(_arc_plus(f, arc, t))
    for m in sv.circles:
        eat(_circle_plus(f, m, t))
    if sv.disk is not None:
        if modulus(t) <= sv.disk:
            d = sv.disk
            disk = d if disk is None else max(disk, d)
            zero_flag = True
        else:
            pts.append(t)
    return SetValue.make(
        f, points=pts, intervals=ivs, arcs=arcs, circles=circs, disk=disk,
        includes_zero=zero_flag,
    )


def _interval_plus(f: HF, iv: Interval, t: Element) -> SetValue:
    lo, hi = iv
    tv = t.value
    if f is HF.TR:
        m = abs(tv)
        pts: List[Element] = []
        ivs: List[Interval] = []
        z = False
        if lo < -m:
            ivs.append((lo, min(hi, -m)))
        if hi > m:
            ivs.append((max(lo, m), hi))
        if max(lo, -m) < min(hi, m):
            pts.append(t)
        if lo <= tv <= hi:
            pts.append(t)
        if lo <= -tv <= hi:
            ivs.append((-m, m))
            z = True
        return SetValue.make(f, points=pts, intervals=ivs, includes_zero=z)
    if f is HF.TTRIANGLE:
        pts = []
        ivs = []
        z = False
        if hi > tv:
            ivs.append((max(lo, tv), hi))
        if lo < min(hi, tv):
            pts.append(t)
        if lo <= tv <= hi:
            ivs.append((ZERO_F, tv))
            z = True
        return SetValue.make(f, points=pts, intervals=ivs, includes_zero=z)
    if f is HF.TRIANGLE:
        lower = max(lo - tv, tv - hi, ZERO_F)
        return SetValue.make(
            f, intervals=[(lower, hi + tv)], includes_zero=(lo <= tv <= hi)
        )
    raise AssertionError(f"interval part in {f}")


def _split_at(arc: Arc, cut: Fraction):
    """Split an arc at an angle, in window coordinates (cut, cut+1).

    Returns (pieces, contains_cut) where each piece is (s, e, sc, ec) with
    cut < s < e <= cut + 1 and the cut angle itself excluded.
    """
    s, ln, sc, ec = arc.start, arc.length, arc.start_closed, arc.end_closed
    d = (cut - s) % 1
    if d == 0:
        contains = sc or (ln == 1 and ec)
        end_flag = ec if ln < 1 else False
        return [(cut, cut + ln, False, end_flag)], contains
    if d > ln:
        start = cut + 1 - d
        return [(start, start + ln, sc, ec)], False
    if d == ln:
        start = cut + 1 - d
        return [(start, cut + 1, sc, False)], ec
    # 0 < d < ln: the cut is interior
    return (
        [(cut + 1 - d, cut + 1, sc, False), (cut, cut + ln - d, False, ec)],
        True,
    )


def _arc_plus(f: HF, arc: Arc, t: Element) -> SetValue:
    mt = modulus(t)
    if f is HF.TC:
        if arc.modulus > mt:
            return SetValue.make(f, arcs=[arc])
        if arc.modulus < mt:
            return singleton(t)
    tt = angle(t)
    anti = (tt + HALF) % 1
    pieces, contains_anti = _split_at(arc, anti)
    contains_t = arc.contains_angle(tt)
    m = arc.modulus if f is HF.TC else ONE

    if contains_anti:
        if f is HF.PHI:
            return SetValue.make(f, circles=[ONE], includes_zero=True)
        if f is HF.TC:
            return SetValue.make(f, disk=m, includes_zero=True)

    pts: List[Element] = []
    out: List[Arc] = []
    z = False
    if contains_t:
        pts.append(t)
    if contains_anti:  # P only reaches here
        pts.extend([t, negate(t)])
        z = True

    closed_geo = f is not HF.P
    theta = anti + HALF  # lift of tt into the window
    for s, e, sc, ec in pieces:
        if closed_geo:
            lo = min(s, theta)
            hi = max(e, theta)
            lflag = sc if s < theta else True
            rflag = ec if e > theta else True
            out.append(Arc(m, lo % 1, hi - lo, lflag, rflag))
        else:
            if e <= theta:
                out.append(Arc(m, s % 1, theta - s, False, False))
            elif s >= theta:
                out.append(Arc(m, theta % 1, e - theta, False, False))
            else:
                out.append(Arc(m, s % 1, theta - s, False, False))
                out.append(Arc(m, theta % 1, e - theta, False, False))
    return SetValue.make(f, points=pts, arcs=out, includes_zero=z)


def _circle_plus(f: HF, m: Fraction, t: Element) -> SetValue:
    if f in _CIRCLE:
        return SetValue.make(f, circles=[ONE], includes_zero=True)
    mt = modulus(t)
    if m > mt:
        return SetValue.make(f, circles=[m])
    if m < mt:
        return singleton(t)
    return SetValue.make(f, disk=m, includes_zero=True)


# ---------------------------------------------------------------------------
# zero membership of an iterated sum


def contains_zero(terms: Sequence[Element]) -> bool:
    """True iff 0 lies in the iterated hypersum of ``terms``.

    Uses closed-form shortcuts where the field structure gives one; the
    property suite cross-checks against ``fold_hypersum`` membership.
    """
    if not terms:
        raise ValueError("contains_zero needs at least one term")
    f = terms[0].field
    if f is HF.S:
        nz = {t.value for t in terms if t.value != 0}
        return not nz or nz == {1, -1}
    if f is HF.K:
        return sum(1 for t in terms if t.value != 0) != 1
    if f is HF.TR:
        nz = [t.value for t in terms if t.value != 0]
        if not nz:
            return True
        m = max(abs(v) for v in nz)
        tops = {v > 0 for v in nz if abs(v) == m}
        return tops == {True, False}
    if f is HF.TTRIANGLE:
        nz = [t.value for t in terms if t.value != 0]
        if not nz:
            return True
        m = max(nz)
        return sum(1 for v in nz if v == m) >= 2
    if f is HF.TRIANGLE:
        nz = [t.value for t in terms if t.value != 0]
        if not nz:
            return True
        return 2 * max(nz) <= sum(nz)
    return fold_hypersum(list(terms)).includes_zero


# ---------------------------------------------------------------------------
# scaling and set products (used by the axiom verifiers)


def scale_set(a: Element, sv: SetValue) -> SetValue:
    """The image a (.) sv of a set under multiplication by a nonzero element."""
    if a.is_zero:
        raise ValueError("scaling by zero collapses the set; handled by caller")
    f = sv.field
    pts = [product(a, p) for p in sv.points]
    ivs: List[Interval] = []
    for lo, hi in sv.intervals:
        v = a.value
        ivs.append((lo * v, hi * v) if v > 0 else (hi * v, lo * v))
    rot = angle(a)
    mfac = modulus(a)
    arcs = [
        Arc(arc.modulus * mfac, (arc.start + rot) % 1, arc.length,
            arc.start_closed, arc.end_closed)
        for arc in sv.arcs
    ]
    circs = [m * mfac for m in sv.circles]
    disk = None if sv.disk is None else sv.disk * mfac
    return SetValue.make(
        f, points=pts, intervals=ivs, arcs=arcs, circles=circs, disk=disk,
        includes_zero=sv.includes_zero,
    )


def set_product(A: SetValue, B: SetValue) -> SetValue:
    """Elementwise product {u (.) v : u in A, v in B}, exactly."""
    if A.field is not B.field:
        raise MismatchedFields("set product across fields")
    f = A.field
    pts: List[Element] = []
    ivs: List[Interval] = []
    arcs: List[Arc] = []
    circs: List[Fraction] = []
    disk: Optional[Fraction] = None

    def eat(sv: SetValue):
        nonlocal disk
        pts.extend(sv.points)
        ivs.extend(sv.intervals)
        arcs.extend(sv.arcs)
        circs.extend(sv.circles)
        if sv.disk is not None:
            disk = sv.disk if disk is None else max(disk, sv.disk)

    for p in A.points:
        eat(scale_set(p, B))
    for p in B.points:
        sv = SetValue(
            field=f, intervals=A.intervals, arcs=A.arcs, circles=A.circles,
            disk=A.disk,
        )
        eat(scale_set(p, sv))
    for lo1, hi1 in A.intervals:
        for lo2, hi2 in B.intervals:
            cands = (lo1 * lo2, lo1 * hi2, hi1 * lo2, hi1 * hi2)
            ivs.append((min(cands), max(cands)))
    amax = _top_modulus(A)
    bmax = _top_modulus(B)
    if A.disk is not None and bmax is not None:
        disk_r = A.disk * bmax
        disk = disk_r if disk is None else max(disk, disk_r)
    if B.disk is not None and amax is not None:
        disk_r = B.disk * amax
        disk = disk_r if disk is None else max(disk, disk_r)
    for m1 in A.circles:
        for m2 in B.circles:
            circs.append(m1 * m2)
        for arc in B.arcs:
            circs.append(m1 * arc.modulus)
    for m2 in B.circles:
        for arc in A.arcs:
            circs.append(m2 * arc.modulus)
    for a1 in A.arcs:
        for a2 in B.arcs:
            # Minkowski sum of the angle ranges; lengths > 1 canonicalize
            # to a full circle in SetValue.make
            arcs.append(Arc(
                a1.modulus * a2.modulus,
                (a1.start + a2.start) % 1,
                a1.length + a2.length,
                a1.start_closed and a2.start_closed,
                a1.end_closed and a2.end_closed,
            ))
    zero_flag = (A.includes_zero and not B.is_empty()) or (
        B.includes_zero and not A.is_empty()
    )
    return SetValue.make(
        f, points=pts, intervals=ivs, arcs=arcs, circles=circs, disk=disk,
        includes_zero=zero_flag,
    )


def _top_modulus(sv: SetValue) -> Optional[Fraction]:
    vals = [modulus(p) for p in sv.points]
    vals.extend(a.modulus for a in sv.arcs)
    vals.extend(sv.circles)
    if sv.disk is not None:
        vals.append(sv.disk)
    return max(vals) if vals else None


# ---------------------------------------------------------------------------
# probes: members used to test properties quantified over infinite sets


def probes_of(sv: SetValue) -> List[Element]:
    """Boundary points plus rational midpoints of every part, as members."""
    f = sv.field
    out: List[Element] = []
    if sv.includes_zero:
        out.append(zero(f))
    out.extend(sv.points)
    for lo, hi in sv.intervals:
        for v in (lo, hi, (lo + hi) / 2, (3 * lo + hi) / 4, (lo + 3 * hi) / 4):
            if v != 0:
                out.append(element(f, v))
    quarters = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))
    for arc in sv.arcs:
        m = arc.modulus
        angs: List[Fraction] = []
        if arc.start_closed:
            angs.append(arc.start)
        if arc.end_closed:
            angs.append((arc.start + arc.length) % 1)
        angs.extend((arc.start + arc.length * q) % 1 for q in quarters)
        for th in angs:
            out.append(_from_polar(f, m, th))
    for m in sv.circles:
        for th in (ZERO_F, *quarters):
            out.append(_from_polar(f, m, th))
    if sv.disk is not None:
        for m in (sv.disk, sv.disk / 2):
            for th in (ZERO_F, *quarters):
                out.append(_from_polar(f, m, th))
    uniq: List[Element] = []
    seen = set()
    for e in out:
        if e not in seen:
            seen.add(e)
            uniq.append(e)
    return uniq


def _from_polar(f: HF, m: Fraction, th: Fraction) -> Element:
    if f in _CIRCLE:
        return element(f, th)
    if f in _POLAR:
        return element(f, (m, th))
    raise AssertionError(f"polar probe in {f}")


# ---------------------------------------------------------------------------
# default probe elements per hyperfield


def default_samples(f: HF) -> List[Element]:
    """The published default probe set (exhaustive for S and K)."""
    if f is HF.S:
        return [element(f, v) for v in (0, 1, -1)]
    if f is HF.K:
        return [element(f, v) for v in (0, 1)]
    rats = [Fraction(1), Fraction(-1), Fraction(2), Fraction(-2),
            Fraction(1, 2), Fraction(-1, 2)]
    angles = [ZERO_F, Fraction(1, 4), Fraction(1, 3), HALF,
              Fraction(2, 3), Fraction(3, 4)]
    mods = [HALF, ONE, Fraction(2)]
    if f in _REALLIKE:
        return [zero(f)] + [element(f, q) for q in rats]
    if f in _NONNEG:
        return [zero(f)] + [element(f, q) for q in rats if q > 0]
    if f in _CIRCLE:
        return [zero(f)] + [element(f, a) for a in angles]
    return [zero(f)] + [element(f, (m, a)) for m in mods for a in angles]


# ---------------------------------------------------------------------------
# axiom verification


@dataclass
class Check:
    name: str
    passed: bool
    witness: Optional[str] = None

    def to_json(self) -> dict:
        d = {"axiom": self.name, "status": "pass" if self.passed else "fail"}
        if self.witness:
            d["witness"] = self.witness
        return d


@dataclass
class AxiomReport:
    field: HF
    checks: List[Check]
    doubly_distributive: Optional[bool]
    dd_witness: Optional[str]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "field": self.field.value,
            "checks": [c.to_json() for c in self.checks],
            "doublyDistributive": self.doubly_distributive,
            "ddWitness": self.dd_witness,
        }


_DD_EXACT = (HF.S, HF.K, HF.TR, HF.TTRIANGLE)
_DD_SEARCH = (HF.TRIANGLE, HF.P, HF.PHI, HF.TC)


def verify_hyperfield_axioms(
    f: HF, samples: Optional[Sequence[Element]] = None
) -> AxiomReport:
    """Check the hypergroup/hyperfield axioms on exact samples.

    S and K are checked exhaustively regardless of ``samples``.  Double
    distributivity is proved on the samples for the doubly distributive
    hyperfields and searched for a counterexample on the others.
    """
    if f in (HF.R, HF.C):
        raise UnsupportedOperation(f"{f} is classical; its axioms are not set-valued")
    if f in _SIGNLIKE or samples is None:
        samples = default_samples(f)
    samples = list(samples)
    nonzero = [s for s in samples if not s.is_zero]
    checks: List[Check] = []

    def run(name: str, fn: Callable[[], Optional[str]]):
        w = fn()
        checks.append(Check(name, w is None, w))

    def commutativity():
        for x, y in itertools.combinations_with_replacement(samples, 2):
            if hypersum(x, y) != hypersum(y, x):
                return f"{format_element(x)} , {format_element(y)}"
        return None

    def associativity():
        for x, y, z in itertools.combinations_with_replacement(samples, 3):
            if fold_hypersum([x, y, z]) != fold_hypersum([y, z, x]):
                return f"{format_element(x)} , {format_element(y)} , {format_element(z)}"
        return None

    def identity():
        z0 = zero(f)
        for x in samples:
            if hypersum(x, z0) != singleton(x):
                return format_element(x)
        return None

    def negation():
        for x in samples:
            nx = negate(x)
            if not hypersum(x, nx).includes_zero:
                return f"0 not in {format_element(x)} + {format_element(nx)}"
            if negate(nx) != x:
                return f"negate not involutive at {format_element(x)}"
            for y in samples:
                if y != nx and hypersum(x, y).includes_zero:
                    return (
                        f"second inverse {format_element(y)} for {format_element(x)}"
                    )
        return None

    def reversibility():
        for y, z in itertools.product(samples, repeat=2):
            s = hypersum(y, z)
            for x in probes_of(s):
                if not hypersum(x, negate(y)).contains(z):
                    return (
                        f"x={format_element(x)} in {format_element(y)}+{format_element(z)}"
                        " but z not in x+(-y)"
                    )
        return None

    def distributivity():
        for x in nonzero:
            for y, z in itertools.combinations_with_replacement(samples, 2):
                left = scale_set(x, hypersum(y, z))
                right = hypersum(product(x, y), product(x, z))
                if left != right:
                    return (
                        f"{format_element(x)} . ({format_element(y)}+{format_element(z)})"
                    )
        return None

    run("commutativity", commutativity)
    run("associativity", associativity)
    run("additive-identity", identity)
    run("unique-negation", negation)
    run("reversibility", reversibility)
    run("distributivity", distributivity)

    dd: Optional[bool]
    dd_witness: Optional[str] = None
    if f in _DD_EXACT:
        dd = True
        for w, x, y, z in itertools.product(nonzero, repeat=4):
            if not _dd_holds(w, x, y, z):
                dd = False
                dd_witness = _quad_str(w, x, y, z)
                break
        checks.append(Check("double-distributivity", dd, dd_witness))
    else:
        dd = None
        for w, x, y, z in _dd_search_order(nonzero):
            if not _dd_holds(w, x, y, z):
                dd = False
                dd_witness = _quad_str(w, x, y, z)
                break
    return AxiomReport(f, checks, dd, dd_witness)


def _dd_search_order(nonzero: Sequence[Element]):
    """Quadruples in witness-friendly order: (a,b,a,b) patterns first."""
    for a, b in itertools.product(nonzero, repeat=2):
        yield a, b, a, b
    for quad in itertools.product(nonzero, repeat=4):
        w, x, y, z = quad
        if w == y and x == z:
            continue
        yield quad


def _quad_str(w, x, y, z) -> str:
    return (
        f"({format_element(w)}+{format_element(x)}).({format_element(y)}+{format_element(z)})"
    )


def _dd_holds(w: Element, x: Element, y: Element, z: Element) -> bool:
    left = set_product(hypersum(w, x), hypersum(y, z))
    right = fold_hypersum(
        [product(w, y), product(w, z), product(x, y), product(x, z)]
    )
    return left == right


# ---------------------------------------------------------------------------
# quotients by multiplicative subgroups


class Subgroup(str, Enum):
    POSITIVE_REALS = "positive-reals"
    UNIT_CIRCLE = "unit-circle"
    SIGNS = "signs"
    TRIVIAL = "trivial"


_QUOTIENTS = {
    (HF.C, Subgroup.UNIT_CIRCLE): (HF.TRIANGLE, "abs"),
    (HF.C, Subgroup.POSITIVE_REALS): (HF.P, "ph"),
    (HF.R, Subgroup.POSITIVE_REALS): (HF.S, "ph"),
    (HF.TRIANGLE, Subgroup.POSITIVE_REALS): (HF.K, "ph"),
    (HF.P, Subgroup.UNIT_CIRCLE): (HF.K, "abs"),
    (HF.PHI, Subgroup.UNIT_CIRCLE): (HF.K, "abs"),
    (HF.S, Subgroup.SIGNS): (HF.K, "abs"),
    (HF.TR, Subgroup.POSITIVE_REALS): (HF.S, "ph"),
    (HF.TR, Subgroup.SIGNS): (HF.TTRIANGLE, "abs"),
    (HF.TC, Subgroup.UNIT_CIRCLE): (HF.TTRIANGLE, "abs"),
    (HF.TC, Subgroup.POSITIVE_REALS): (HF.PHI, "ph"),
    (HF.TTRIANGLE, Subgroup.POSITIVE_REALS): (HF.K, "ph"),
}


def quotient(f: HF, subgroup: Subgroup):
    """Registered quotient F/_m S, returned as (target id, quotient map)."""
    from hypergrass import homs

    if subgroup is Subgroup.TRIVIAL:
        return f, homs.identity_hom(f)
    key = (f, subgroup)
    if key not in _QUOTIENTS:
        raise ValueError(f"no registered quotient of {f.value} by {subgroup.value}")
    target, label = _QUOTIENTS[key]
    if label == "abs":
        return target, homs.abs_hom(f, target)
    return target, homs.ph_hom(f, target)


# ---------------------------------------------------------------------------
# JSON serialization of set values


def set_to_json(sv: SetValue) -> dict:
    parts: List[dict] = []
    if sv.points:
        parts.append({
            "kind": "points",
            "values": [format_element(p) for p in sv.points],
        })
    for lo, hi in sv.intervals:
        parts.append({"kind": "interval", "lo": str(lo), "hi": str(hi)})
    for a in sv.arcs:
        if a.start_closed and a.end_closed:
            closedness = "closed"
        elif not a.start_closed and not a.end_closed:
            closedness = "open"
        else:
            closedness = "half-open"
        parts.append({
            "kind": "arc",
            "modulus": str(a.modulus),
            "start": str(a.start),
            "end": str((a.start + a.length)),
            "closedness": closedness,
            "startClosed": a.start_closed,
            "endClosed": a.end_closed,
        })
    for m in sv.circles:
        parts.append({"kind": "circle", "modulus": str(m)})
    if sv.disk is not None:
        parts.append({"kind": "disk", "radius": str(sv.disk)})
    return {
        "field": sv.field.value,
        "parts": parts,
        "includesZero": sv.includes_zero,
    }
