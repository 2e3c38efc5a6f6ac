"""Realization-space fibers, orientability search, and the Dressian.

The fiber of an induced Grassmannian map collects the source points that
push forward to a given target point; over kappa this is the matroid
partition.  Orientability of a fixed matroid is decided by a depth-first
sign search over its bases with three-term pruning, the same shape as
the Grassmannian enumeration but support-constrained; the Fano matroid
(generated from GF(2) columns by a rank oracle, never hard-coded) is the
canonical empty case.

Dressian membership runs directly in max-plus arithmetic: a relation
holds when the maximum of its finite term values is attained twice.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from hypergrass import dequant
from hypergrass.fields import HF, Element, element, format_element, inverse, one, product, zero
from hypergrass.gf2 import gf2_rank
from hypergrass.grassmannian import (
    Grassmannian,
    Poset,
    closure,
    enumerate_grassmannian,
    induced_map,
    is_open,
    weak_map_poset,
)
from hypergrass.homs import Homomorphism, kappa
from hypergrass.plucker import (
    GPVector,
    MatroidBases,
    check_strong,
    check_weak,
    from_codes,
    lex_subsets,
    normalize,
    projectively_equal,
    pushforward,
    relation_table,
    subset_rank,
)


# ---------------------------------------------------------------------------
# Fano machinery (GF(2) rank oracle, not hard-coded bases)


@lru_cache(maxsize=1)
def fano_bases() -> MatroidBases:
    """Rank-3 subsets of the seven nonzero GF(2)^3 vectors (element i <-> i)."""
    bases = [
        trip
        for trip in itertools.combinations(range(1, 8), 3)
        if gf2_rank(list(trip)) == 3
    ]
    return MatroidBases.from_subsets(7, 3, bases)


@lru_cache(maxsize=1)
def fano_lines() -> Tuple[Tuple[int, ...], ...]:
    return tuple(
        trip
        for trip in itertools.combinations(range(1, 8), 3)
        if gf2_rank(list(trip)) == 2
    )


def nonfano_bases(line_index: int = 0) -> MatroidBases:
    """Relax one line of the Fano plane into a basis."""
    line = fano_lines()[line_index]
    return MatroidBases.from_subsets(
        7, 3, set(fano_bases().bases) | {frozenset(line)}
    )


# ---------------------------------------------------------------------------
# fibers of induced maps


@dataclass(frozen=True)
class RealizationSpace:
    base: GPVector
    hom_name: str
    kind: str
    points: Tuple[GPVector, ...]

    def __len__(self) -> int:
        return len(self.points)

    @property
    def is_empty(self) -> bool:
        return not self.points


def fiber(
    h: Homomorphism,
    g_src: Grassmannian,
    target_point: GPVector,
    g_tgt: Optional[Grassmannian] = None,
) -> RealizationSpace:
    """All source points mapping to the target point, as a realization space."""
    g_tgt, mapping = induced_map(h, g_src, g_tgt)
    try:
        want = g_tgt.index_of(target_point)
    except KeyError:
        raise ValueError(
            f"{target_point} is not a point of the target Grassmannian"
        ) from None
    pts = tuple(
        p for p, img in zip(g_src.points, mapping) if img == want
    )
    return RealizationSpace(
        normalize(target_point), h.name, g_src.kind, pts
    )


def is_realization(
    h: Homomorphism, v: GPVector, target_point: GPVector, kind: str = "strong"
) -> bool:
    ok = (check_strong(v) if kind == "strong" else check_weak(v))[0]
    if not ok:
        return False
    return projectively_equal(pushforward(h, v), target_point)


# ---------------------------------------------------------------------------
# orientability search over a fixed support


def _support_constraints(m: MatroidBases):
    """Three-term constraints restricted to the support sign variables.

    Returns (positions, var_of_pos, constraints) where each constraint is a
    tuple of (sign, va, vb) triples over variable indices, or None when
    some relation keeps exactly one term (then no orientation exists).
    """
    ranks = subset_rank(m.n, m.r)
    support = sorted(ranks[b] for b in (tuple(sorted(x)) for x in m.bases))
    var_of_pos = {pos: i for i, pos in enumerate(support)}
    in_support = set(support)
    constraints = []
    for terms, _I, _J in relation_table(m.n, m.r, True):
        live = [
            (s, var_of_pos[ia], var_of_pos[ib])
            for s, ia, ib in terms
            if ia in in_support and ib in in_support
        ]
        if not live:
            continue
        if len(live) == 1:
            return support, var_of_pos, None
        constraints.append(tuple(live))
    return support, var_of_pos, constraints


def _constraints_by_trigger(nvars: int, constraints):
    buckets: List[List[tuple]] = [[] for _ in range(nvars)]
    for c in constraints:
        trigger = max(max(va, vb) for _s, va, vb in c)
        buckets[trigger].append(c)
    return buckets


def _signs_ok(signs: List[int], constraint) -> bool:
    pos = neg = False
    for s, va, vb in constraint:
        t = s * signs[va] * signs[vb]
        if t > 0:
            pos = True
        else:
            neg = True
        if pos and neg:
            return True
    return False


def search_orientations(
    m: MatroidBases,
    first_only: bool = False,
    threads: int = 1,
    prefix_depth: int = 8,
) -> List[str]:
    """Sign chirotopes realizing the matroid over S, as normalized strings.

    Exhaustive pruned DFS over sign assignments to the bases; the first
    support coordinate is pinned positive, so each projective class shows
    up once.  Returns [] for non-orientable matroids (the Fano case).
    """
    if m.validate() is not None:
        return []
    support, _var_of_pos, constraints = _support_constraints(m)
    if constraints is None:
        return []
    nvars = len(support)
    buckets = _constraints_by_trigger(nvars, constraints)

    if threads > 1 and nvars > prefix_depth:
        prefixes = _sign_prefixes(nvars, buckets, prefix_depth)
        jobs = [
            (m.n, m.r, tuple(sorted(tuple(sorted(b)) for b in m.bases)), pref, first_only)
            for pref in prefixes
        ]
        found: List[str] = []
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for chunk in pool.map(_orient_worker, jobs):
                found.extend(chunk)
                if first_only and found:
                    break
        found.sort()
        return found[:1] if first_only and found else found

    out = _orient_search(m.n, m.r, support, buckets, (), first_only)
    out.sort()
    return out


def _sign_prefixes(nvars: int, buckets, depth: int) -> List[tuple]:
    depth = min(depth, nvars)
    prefixes: List[tuple] = []

    def rec(signs: List[int]):
        k = len(signs)
        if k == depth:
            prefixes.append(tuple(signs))
            return
        for val in (1, -1) if k else (1,):
            signs.append(val)
            if all(_signs_ok(signs, c) for c in buckets[k]):
                rec(signs)
            signs.pop()

    rec([])
    return prefixes


def _orient_worker(args) -> List[str]:
    n, r, bases, prefix, first_only = args
    m = MatroidBases.from_subsets(n, r, bases)
    support, _vp, constraints = _support_constraints(m)
    buckets = _constraints_by_trigger(len(support), constraints)
    return _orient_search(n, r, support, buckets, prefix, first_only)


def _orient_search(
    n: int, r: int, support: List[int], buckets, prefix: tuple, first_only: bool
) -> List[str]:
    nvars = len(support)
    ncoords = len(lex_subsets(n, r))
    signs = list(prefix) + [0] * (nvars - len(prefix))
    found: List[str] = []

    def emit():
        codes = [0] * ncoords
        for var, pos in enumerate(support):
            codes[pos] = signs[var]
        found.append(from_codes(HF.S, r, n, codes).chirotope())

    def dfs(k: int) -> bool:
        if k == nvars:
            emit()
            return first_only
        for val in (1, -1) if k else (1,):
            signs[k] = val
            if all(_signs_ok(signs, c) for c in buckets[k]):
                if dfs(k + 1):
                    return True
        signs[k] = 0
        return False

    # validate a nonempty prefix against its own triggers before diving
    for k in range(len(prefix)):
        if not all(_signs_ok(signs, c) for c in buckets[k]):
            return []
    dfs(len(prefix))
    return found


# ---------------------------------------------------------------------------
# prescribing values on an (r+1)-subset (the extension formula)


def extend_prescribed(
    v0: GPVector, A: Sequence[int], phi_tilde: Dict[Tuple[int, ...], Element]
) -> GPVector:
    """Extend prescribed values on A^r to a realization with v0's support.

    Implements the closed-form rescaling: with ratios lambda_e of the old
    and new values on the r-subsets of A, the output is
    D^{-1} (prod of lambda over the tuple) v0, which matches phi_tilde on
    A^r and keeps v0's zero set and validity.
    """
    A = tuple(sorted(A))
    if len(A) != v0.r + 1:
        raise ValueError(f"A must have r+1 = {v0.r + 1} elements, got {A}")
    f = v0.field
    lam: Dict[int, Element] = {e: one(f) for e in range(1, v0.n + 1)}
    D = one(f)
    for i, a_i in enumerate(A):
        B = A[:i] + A[i + 1:]
        old = v0.coord(B)
        new = phi_tilde.get(B, zero(f))
        if old.is_zero != new.is_zero:
            raise ValueError(
                f"prescribed values must be nonzero exactly on the bases "
                f"inside A; mismatch at {B}"
            )
        if new.is_zero:
            continue
        ratio = product(old, inverse(new))
        lam[a_i] = ratio
        D = product(D, ratio)
    d_inv = inverse(D)
    vals = []
    for s, x in zip(lex_subsets(v0.n, v0.r), v0.values):
        y = product(d_inv, x)
        for e in s:
            y = product(lam[e], y)
        vals.append(y)
    out = GPVector(f, v0.n, v0.r, tuple(vals))
    for B in itertools.combinations(A, v0.r):
        want = phi_tilde.get(B, zero(f))
        if out.coord(B) != want:
            raise AssertionError(f"extension failed to match prescription at {B}")
    return out


# ---------------------------------------------------------------------------
# openness of fibers in the poset encodings


@dataclass
class ZeroOpenRow:
    matroid: str
    uniform: bool
    fiber_size: int
    open_: bool


@dataclass
class ZeroOpenReport:
    field: HF
    r: int
    n: int
    encoding: str
    rows: List[ZeroOpenRow]

    @property
    def uniform_fiber_open(self) -> bool:
        return all(r.open_ for r in self.rows if r.uniform and r.fiber_size)

    @property
    def nonuniform_fibers_all_not_open(self) -> bool:
        return all(
            not r.open_ for r in self.rows if not r.uniform and r.fiber_size
        )

    def to_json(self) -> dict:
        return {
            "field": self.field.value,
            "r": self.r,
            "n": self.n,
            "encoding": self.encoding,
            "rows": [
                {
                    "matroid": row.matroid,
                    "uniform": row.uniform,
                    "fiberSize": row.fiber_size,
                    "open": row.open_,
                }
                for row in self.rows
            ],
            "uniformFiberOpen": self.uniform_fiber_open,
            "nonuniformFibersAllNotOpen": self.nonuniform_fibers_all_not_open,
        }


def check_zero_open_equivalences(
    field: HF, r: int, n: int, encoding: str = "0-coarse"
) -> ZeroOpenReport:
    """Desk-scale openness of matroid-partition fibers.

    In the 0-coarse poset encoding only the uniform matroid's fiber can be
    open; in the 0-fine (discrete) encoding every fiber is open.
    """
    if encoding not in ("0-coarse", "0-fine"):
        raise ValueError(f"encoding must be 0-coarse or 0-fine, got {encoding!r}")
    g_src = enumerate_grassmannian(field, r, n, "strong")
    g_tgt, mapping = induced_map(kappa(field), g_src)
    p_src = weak_map_poset(g_src)
    rows: List[ZeroOpenRow] = []
    for t_idx, t_point in enumerate(g_tgt.points):
        ids = frozenset(i for i, img in enumerate(mapping) if img == t_idx)
        if encoding == "0-fine":
            open_ = True  # every set is open in the discrete encoding
        else:
            open_ = is_open(p_src, ids)
        rows.append(ZeroOpenRow(
            matroid=t_point.chirotope(),
            uniform=set(t_point.chirotope()) == {"1"},
            fiber_size=len(ids),
            open_=open_,
        ))
    return ZeroOpenReport(field, r, n, encoding, rows)


# ---------------------------------------------------------------------------
# gluing containment (closure of a union of fibers)


def gluing_containment(
    h: Homomorphism,
    g_src: Grassmannian,
    target_ids: Sequence[int],
    g_tgt: Optional[Grassmannian] = None,
    p_src: Optional[Poset] = None,
    p_tgt: Optional[Poset] = None,
    mapping: Optional[Sequence[int]] = None,
) -> Tuple[bool, Optional[int]]:
    """closure(union of fibers over S) inside union of fibers over closure(S)."""
    if mapping is None or g_tgt is None:
        g_tgt, mapping = induced_map(h, g_src, g_tgt)
    if p_src is None:
        p_src = weak_map_poset(g_src)
    if p_tgt is None:
        p_tgt = weak_map_poset(g_tgt)
    target_ids = frozenset(target_ids)
    union_ids = [i for i, img in enumerate(mapping) if img in target_ids]
    lhs = closure(p_src, union_ids)
    closed_targets = closure(p_tgt, target_ids)
    for i in lhs:
        if mapping[i] not in closed_targets:
            return False, i
    return True, None


# ---------------------------------------------------------------------------
# Dressian membership in max-plus arithmetic


def dressian_member(
    values: Dict[Tuple[int, ...], Fraction], m: MatroidBases
) -> Tuple[bool, List[dict]]:
    """Tropical GP relations: each maximum of finite terms attained twice.

    ``values`` maps every basis of ``m`` (as a sorted tuple) to a rational;
    nonbases are -infinity and must be absent.
    """
    vals = {tuple(sorted(k)): Fraction(v) for k, v in values.items()}
    bases = set(m.sorted_bases())
    if set(vals) != bases:
        missing = bases - set(vals)
        extra = set(vals) - bases
        raise ValueError(
            f"values must cover the bases exactly; missing {sorted(missing)}, "
            f"off-basis {sorted(extra)}"
        )

    def term_value(first: Tuple[int, ...], second_sorted: Tuple[int, ...]):
        if first not in bases or second_sorted not in bases:
            return None
        return vals[first] + vals[second_sorted]

    subsets = lex_subsets(m.n, m.r)
    table: List[dict] = []
    ok_all = True
    for terms, I, J in relation_table(m.n, m.r, False):
        finite: List[Fraction] = []
        entries = []
        for _s, ia, ib in terms:
            t = term_value(subsets[ia], subsets[ib])
            entries.append("-inf" if t is None else str(t))
            if t is not None:
                finite.append(t)
        if not entries:
            continue
        if finite:
            top = max(finite)
            ok = finite.count(top) >= 2
        else:
            ok = True
        ok_all = ok_all and ok
        table.append({"I": list(I), "J": list(J), "terms": entries, "ok": ok})
    return ok_all, table


# ---------------------------------------------------------------------------
# the realization homotopy, coordinatewise


def apply_homotopy(v: GPVector, t: Fraction) -> GPVector:
    """H_t on every coordinate; exact, so payloads must have rational powers."""
    return GPVector(
        v.field, v.n, v.r, tuple(dequant.homotopy_H(x, t) for x in v.values)
    )


# ---------------------------------------------------------------------------
# bounded best-effort search for a weak-not-strong Phi vector


@dataclass
class PhiSearchReport:
    r: int
    n: int
    nodes: int
    exhausted: bool
    witnesses: List[str]


def search_weak_not_strong_phi(
    r: int, n: int, budget: int = 20000
) -> PhiSearchReport:
    """Bounded scan of Phi chirotopes with sixth-root-of-unity coordinates.

    Best effort only: reports any weak-not-strong witness found within the
    node budget, without asserting nonexistence.
    """
    sixth = [zero(HF.PHI)] + [element(HF.PHI, Fraction(k, 6)) for k in range(6)]
    ncoords = len(lex_subsets(n, r))
    nodes = 0
    witnesses: List[str] = []
    exhausted = True
    for combo in itertools.product(range(len(sixth)), repeat=ncoords - 1):
        nodes += 1
        if nodes > budget:
            exhausted = False
            break
        vals = (one(HF.PHI),) + tuple(sixth[i] for i in combo)
        v = GPVector(HF.PHI, n, r, vals)
        if check_weak(v)[0] and not check_strong(v)[0]:
            witnesses.append(str(v))
    return PhiSearchReport(r, n, nodes, exhausted, witnesses)
