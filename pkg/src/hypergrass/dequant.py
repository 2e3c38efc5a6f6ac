"""Viro dequantization and the numeric companion to the exact layer.

Everything here computes with mpmath at a configurable precision (128-bit
mantissa by default) and compares against exact ``SetValue`` targets with
an explicit relative tolerance.  Exact shortcuts are taken where rational
payloads allow them: the hyperfield homotopy x |x|^(-t) stays in exact
rationals whenever |x| has an exact rational t-th power.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple, Union

import mpmath
from mpmath import mp, mpc, mpf

from hypergrass.fields import (
    HF,
    Element,
    SetValue,
    angle,
    element,
    modulus,
    zero,
)

DEFAULT_PREC = 128
DEFAULT_EPS = Fraction(1, 2**64)

Numeric = Union[int, float, Fraction, mpf, mpc]


def to_complex(x: Element, prec: int = DEFAULT_PREC) -> mpc:
    """Numeric value of an exact element."""
    if x.is_zero:
        return mpc(0)
    with mp.workprec(prec):
        m = modulus(x)
        th = angle(x)
        mag = mpf(m.numerator) / m.denominator
        phase = mpmath.expjpi(mpf(2 * th.numerator) / th.denominator)
        return mpc(mag * phase)


def _as_mp(x: Numeric):
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    if isinstance(x, (mpf, mpc)):
        return x
    return mpmath.mpmathify(x)


def _recip(h: Union[Fraction, float, int]):
    if isinstance(h, (Fraction, int)):
        return 1 / Fraction(h)
    return 1 / _as_mp(h)


def s_h(x: Numeric, h: Union[Fraction, float], prec: int = DEFAULT_PREC):
    """The dequantization rescaling |x|^(1/h) x/|x| (0 at 0)."""
    with mp.workprec(prec):
        hf = _as_mp(h)
        if hf <= 0:
            raise ValueError(f"dequantization scale h must be positive, got {h}")
        z = _as_mp(x)
        if z == 0:
            return z
        mag = abs(z)
        rh = _as_mp(_recip(h)) if isinstance(h, (Fraction, int)) else 1 / hf
        return mag ** rh * (z / mag)


def plus_h(x: Numeric, y: Numeric, h: Union[Fraction, float], prec: int = DEFAULT_PREC):
    """Deformed addition x +_h y = S_h^{-1}(S_h(x) + S_h(y))."""
    with mp.workprec(prec):
        s = s_h(x, h, prec) + s_h(y, h, prec)
        return s_h(s, _recip(h), prec)


def naive_limit_plus(x: Fraction, y: Fraction) -> Fraction:
    """The (non-associative) h -> 0 limit of +_h on the reals."""
    if abs(x) > abs(y):
        return x
    if abs(y) > abs(x):
        return y
    if x == y:
        return x
    return Fraction(0)


# ---------------------------------------------------------------------------
# numeric membership in exact set values


def _eps_scale(epsv, z) -> mpf:
    return epsv * max(mpf(1), abs(z))


def approx_member(
    z: Numeric, sv: SetValue, eps: Fraction = DEFAULT_EPS, prec: int = DEFAULT_PREC
) -> bool:
    """Membership of a numeric value in an exact set, within eps (relative).

    All arithmetic runs at the working precision; the ambient mpmath
    precision (which rounds every operation, negation included) never
    touches the comparison.
    """
    with mp.workprec(prec):
        z = _as_mp(z)
        if not isinstance(z, mpc):
            z = mpc(z)
        tol = _eps_scale(_as_mp(eps), z)
        if abs(z) <= tol:
            return sv.includes_zero
        for p in sv.points:
            if abs(z - to_complex(p, prec)) <= tol:
                return True
        zre, zim = z.real, z.imag
        if abs(zim) <= tol:
            for lo, hi in sv.intervals:
                if _as_mp(lo) - tol <= zre <= _as_mp(hi) + tol:
                    return True
        mag = abs(z)
        if sv.disk is not None and mag <= _as_mp(sv.disk) + tol:
            return True
        for m in sv.circles:
            if abs(mag - _as_mp(m)) <= tol:
                return True
        theta = mpmath.arg(z) / (2 * mpmath.pi) % 1
        for arc in sv.arcs:
            if abs(mag - _as_mp(arc.modulus)) > tol:
                continue
            d = (theta - _as_mp(arc.start)) % 1
            ln = _as_mp(arc.length)
            ang_tol = tol / max(mpf(1), 2 * mpmath.pi * abs(mag))
            if -ang_tol <= d <= ln + ang_tol or 1 - ang_tol <= d:
                return True
        return False


def real_distance(z: Numeric, sv: SetValue, prec: int = DEFAULT_PREC) -> mpf:
    """Distance from a real numeric value to a real-line set value."""
    with mp.workprec(prec):
        z = _as_mp(z)
        best = mpf("inf")
        if sv.includes_zero:
            best = min(best, abs(z))
        for p in sv.points:
            best = min(best, abs(z - _as_mp(p.value)))
        for lo, hi in sv.intervals:
            lo_f, hi_f = _as_mp(lo), _as_mp(hi)
            if lo_f <= z <= hi_f:
                return mpf(0)
            best = min(best, abs(z - lo_f), abs(z - hi_f))
        return best


def apply_hom_numeric(h, z: Numeric):
    """Numeric action of a registered closed-form homomorphism."""
    z = _as_mp(z)
    kind = h.name.split(":", 1)[0]
    if kind in ("inc", "id"):
        return z
    if kind == "ph":
        return z / abs(z) if z != 0 else mpc(0)
    if kind == "abs":
        return mpc(abs(z))
    if kind == "kappa":
        return mpc(0) if z == 0 else mpc(1)
    raise ValueError(f"no numeric form for {h.name}")


def numeric_sum_containment(
    h, x: Element, y: Element, target: SetValue,
    prec: int = DEFAULT_PREC, eps: Fraction = DEFAULT_EPS,
) -> bool:
    """h(x + y) in target, evaluated at full working precision."""
    with mp.workprec(prec):
        zsum = to_complex(x, prec) + to_complex(y, prec)
        img = apply_hom_numeric(h, zsum)
        return approx_member(img, target, eps)


# ---------------------------------------------------------------------------
# tropical limits


@dataclass
class LimitRow:
    h: Fraction
    value: str
    distance: str
    within_tol: bool


@dataclass
class LimitReport:
    x: Fraction
    y: Fraction
    target: SetValue
    rows: List[LimitRow]
    converged: bool
    monotone_trend: bool

    @property
    def passed(self) -> bool:
        return self.converged and self.monotone_trend

    def to_json(self) -> dict:
        return {
            "x": str(self.x),
            "y": str(self.y),
            "rows": [
                {"h": str(r.h), "value": r.value, "distance": r.distance,
                 "withinTol": r.within_tol}
                for r in self.rows
            ],
            "converged": self.converged,
            "monotoneTrend": self.monotone_trend,
        }


def tropical_limit_check(
    x: Fraction,
    y: Fraction,
    hs: Sequence[Fraction],
    tol: Fraction = Fraction(1, 10**6),
    prec: int = DEFAULT_PREC,
) -> LimitReport:
    """Evidence that x +_h y approaches the tropical-real hypersum as h -> 0."""
    from hypergrass.fields import hypersum

    target = hypersum(element(HF.TR, x), element(HF.TR, y))
    rows: List[LimitRow] = []
    dists: List[mpf] = []
    with mp.workprec(prec):
        for h in hs:
            z = plus_h(x, y, h, prec)
            d = real_distance(z, target)
            dists.append(d)
            rows.append(LimitRow(
                h=Fraction(h), value=mpmath.nstr(z, 20),
                distance=mpmath.nstr(d, 8), within_tol=bool(d <= _as_mp(tol)),
            ))
        slack = mpf(2) ** (-prec // 2)
        monotone = all(
            dists[i + 1] <= dists[i] + slack for i in range(len(dists) - 1)
        )
        converged = bool(dists[-1] <= _as_mp(tol)) if dists else False
    return LimitReport(x, y, target, rows, converged, monotone)


# ---------------------------------------------------------------------------
# the hyperfield homotopy H(x, t) = x |x|^(-t)


_HOMOTOPY_FIELDS = (HF.TRIANGLE, HF.TR, HF.TC, HF.TTRIANGLE)


def _nth_root_exact(n: int, d: int) -> Optional[int]:
    """Integer d-th root of n, or None if n is not a perfect d-th power."""
    if n == 0:
        return 0
    if n == 1 or d == 1:
        return n if d == 1 else 1
    r = round(n ** (1.0 / d))
    for cand in (r - 1, r, r + 1, r + 2):
        if cand >= 0 and cand**d == n:
            return cand
    return None


def exact_qpow(base: Fraction, expo: Fraction) -> Optional[Fraction]:
    """base**expo as an exact rational, or None when irrational."""
    if base <= 0:
        raise ValueError("exact_qpow needs a positive base")
    if expo == 0:
        return Fraction(1)
    if expo < 0:
        res = exact_qpow(base, -expo)
        return None if res is None else 1 / res
    p, q = expo.numerator, expo.denominator
    rn = _nth_root_exact(base.numerator, q)
    rd = _nth_root_exact(base.denominator, q)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd) ** p


def homotopy_H(x: Element, t: Fraction) -> Element:
    """Exact H(x, t) = x |x|^(-t) for the four dequantized hyperfields.

    Raises ValueError when |x|^(1-t) is irrational; use homotopy_H_numeric
    for those payloads.
    """
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValueError(f"homotopy parameter must lie in [0,1], got {t}")
    if x.field not in _HOMOTOPY_FIELDS:
        raise ValueError(f"homotopy is defined on {_HOMOTOPY_FIELDS}, got {x.field}")
    if x.is_zero or t == 0:
        return x
    m = modulus(x)
    scaled = exact_qpow(m, 1 - t)
    if scaled is None:
        raise ValueError(
            f"|{m}|^{1 - t} is irrational; use homotopy_H_numeric"
        )
    f = x.field
    if f in (HF.TRIANGLE, HF.TTRIANGLE):
        return element(f, scaled)
    if f is HF.TR:
        return element(f, scaled if x.value > 0 else -scaled)
    return element(f, (scaled, angle(x)))


def homotopy_H_numeric(z: Numeric, t: Union[Fraction, float], prec: int = DEFAULT_PREC):
    tq = _as_mp(t)
    if not 0 <= tq <= 1:
        raise ValueError(f"homotopy parameter must lie in [0,1], got {t}")
    with mp.workprec(prec):
        zv = _as_mp(z)
        if zv == 0:
            return zv
        return zv * abs(zv) ** (-tq)


# ---------------------------------------------------------------------------
# figure emission


def parse_grid(spec: str) -> List[Fraction]:
    """Parse "start:stop:step" into an inclusive rational grid."""
    try:
        start_s, stop_s, step_s = spec.split(":")
        start, stop, step = Fraction(start_s), Fraction(stop_s), Fraction(step_s)
    except ValueError as exc:
        raise ValueError(f"grid spec must be start:stop:step, got {spec!r}") from exc
    if step <= 0 or stop < start:
        raise ValueError(f"bad grid spec {spec!r}")
    out = []
    v = start
    while v <= stop:
        out.append(v)
        v += step
    return out


def figure_emit(
    h: Fraction,
    grid: Union[str, Sequence[Fraction]],
    writer: Callable[[str], None],
    prec: int = DEFAULT_PREC,
) -> int:
    """Write CSV rows (x, y, z) of z = x +_h y over the grid; returns rows."""
    pts = parse_grid(grid) if isinstance(grid, str) else list(grid)
    writer("x,y,z\n")
    count = 0
    with mp.workprec(prec):
        for x in pts:
            for y in pts:
                z = plus_h(x, y, h, prec)
                writer(
                    f"{mpmath.nstr(_as_mp(x), 20)},{mpmath.nstr(_as_mp(y), 20)},"
                    f"{mpmath.nstr(z, 20)}\n"
                )
                count += 1
    return count
