"""Finite hyperfield Grassmannians, weak-map posets, induced maps.

Enumeration runs over the finite hyperfields S and K by depth-first
assignment of chirotope codes in lexicographic r-subset order, pruning
with every three-term relation whose coordinates are fully assigned.
Projective normalization is built into the search shape: the first
nonzero coordinate is pinned to +1, so each weak/strong class is emitted
exactly once.  The search tree can be partitioned by assignment prefixes
for parallel runs; results merge by a canonical sort either way.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from hypergrass.fields import HF, inverse, product, zero
from hypergrass.homs import Homomorphism
from hypergrass.plucker import (
    GPVector,
    MatroidBases,
    check_strong,
    check_weak,
    from_codes,
    krel_ok,
    lex_subsets,
    normalize,
    pushforward,
    relation_table,
    srel_ok,
)

DEFAULT_GUARD = 36


class GuardExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Grassmannian:
    field: HF
    r: int
    n: int
    kind: str  # "strong" | "weak"
    points: Tuple[GPVector, ...]

    def __len__(self) -> int:
        return len(self.points)

    def index_of(self, v: GPVector) -> int:
        return _point_index(self)[normalize(v).values]


@lru_cache(maxsize=None)
def _cached_index(points: Tuple[GPVector, ...]) -> Dict[tuple, int]:
    return {p.values: i for i, p in enumerate(points)}


def _point_index(g: Grassmannian) -> Dict[tuple, int]:
    return _cached_index(g.points)


# ---------------------------------------------------------------------------
# relation bookkeeping for the search


@lru_cache(maxsize=None)
def _pruning_tables(n: int, r: int):
    """Three-term relations bucketed by their last-assigned coordinate."""
    rels = relation_table(n, r, True)
    ncoords = comb(n, r)
    by_trigger: List[List[tuple]] = [[] for _ in range(ncoords)]
    for terms, _I, _J in rels:
        if not terms:
            continue
        trigger = max(max(ia, ib) for _s, ia, ib in terms)
        by_trigger[trigger].append(terms)
    return tuple(tuple(bucket) for bucket in by_trigger)


@lru_cache(maxsize=None)
def _strong_extra(n: int, r: int):
    """Relations beyond the three-term ones, for leaf filtering."""
    three = {(I, J) for _t, I, J in relation_table(n, r, True)}
    return tuple(
        (terms, I, J)
        for terms, I, J in relation_table(n, r, False)
        if (I, J) not in three and terms
    )


def _value_order(field: HF) -> Tuple[int, ...]:
    return (1, -1, 0) if field is HF.S else (1, 0)


def _codes_ok(field: HF):
    return srel_ok if field is HF.S else krel_ok


def _leaf_accept(field: HF, r: int, n: int, kind: str, codes: List[int]) -> bool:
    supp = [s for s, c in zip(lex_subsets(n, r), codes) if c]
    m = MatroidBases.from_subsets(n, r, supp)
    if m.validate() is not None:
        return False
    if kind == "weak":
        return True
    ok = _codes_ok(field)
    return all(ok(codes, terms) for terms, _I, _J in _strong_extra(n, r))


def _search(
    field: HF, r: int, n: int, kind: str, prefix: Sequence[int]
) -> Iterator[Tuple[int, ...]]:
    """DFS over code assignments continuing a (pruned-valid) prefix."""
    ncoords = comb(n, r)
    by_trigger = _pruning_tables(n, r)
    rel_ok = _codes_ok(field)
    values = _value_order(field)
    codes = list(prefix) + [0] * (ncoords - len(prefix))
    seen_nonzero = any(prefix)

    def dfs(pos: int, seen: bool) -> Iterator[Tuple[int, ...]]:
        if pos == ncoords:
            if seen and _leaf_accept(field, r, n, kind, codes):
                yield tuple(codes)
            return
        if seen:
            choices = values
        else:
            # normalization: the first nonzero coordinate is 1
            choices = (1, 0)
        for val in choices:
            codes[pos] = val
            # every relation whose last coordinate is pos is now decided
            if all(rel_ok(codes, terms) for terms in by_trigger[pos]):
                yield from dfs(pos + 1, seen or val != 0)
        codes[pos] = 0

    yield from dfs(len(prefix), seen_nonzero)


def _check_prefix(field: HF, r: int, n: int, prefix: Sequence[int]) -> bool:
    """Re-run the pruning conditions decided inside a prefix."""
    by_trigger = _pruning_tables(n, r)
    rel_ok = _codes_ok(field)
    codes = list(prefix) + [0] * (comb(n, r) - len(prefix))
    return all(
        rel_ok(codes, terms)
        for pos in range(len(prefix))
        for terms in by_trigger[pos]
    )


def _normalized_prefixes(field: HF, r: int, n: int, depth: int) -> List[tuple]:
    """Valid assignment prefixes of the given depth, in canonical order."""
    values = _value_order(field)
    out: List[tuple] = []

    def rec(pref: List[int], seen: bool):
        if len(pref) == depth:
            if _check_prefix(field, r, n, pref):
                out.append(tuple(pref))
            return
        for val in (values if seen else (1, 0)):
            pref.append(val)
            rec(pref, seen or val != 0)
            pref.pop()

    rec([], False)
    return out


def _worker(args) -> List[Tuple[int, ...]]:
    field_tag, r, n, kind, prefix = args
    field = HF(field_tag)
    if not _check_prefix(field, r, n, prefix):
        return []
    return list(_search(field, r, n, kind, prefix))


def enumerate_stream(
    field: HF, r: int, n: int, kind: str = "strong"
) -> Iterator[GPVector]:
    """Yield normalized representatives in DFS order without storing them."""
    _validate_args(field, r, n, kind)
    for codes in _search(field, r, n, kind, ()):
        yield from_codes(field, r, n, codes)


def _validate_args(field: HF, r: int, n: int, kind: str) -> None:
    if field not in (HF.S, HF.K):
        raise ValueError(f"enumeration needs a finite hyperfield (S or K), got {field}")
    if kind not in ("strong", "weak"):
        raise ValueError(f"kind must be strong or weak, got {kind!r}")
    if not 0 < r <= n:
        raise ValueError(f"need 0 < r <= n, got r={r}, n={n}")


def enumerate_grassmannian(
    field: HF,
    r: int,
    n: int,
    kind: str = "strong",
    threads: int = 1,
    guard: int = DEFAULT_GUARD,
) -> Grassmannian:
    """All projective classes of (strong|weak) GP vectors, canonically sorted."""
    _validate_args(field, r, n, kind)
    ncoords = comb(n, r)
    if ncoords > guard:
        raise GuardExceeded(
            f"C({n},{r}) = {ncoords} exceeds the guard {guard}; use "
            "enumerate_stream for an unbounded streaming run"
        )
    if threads > 1 and ncoords > 3:
        depth = min(4, ncoords)
        prefixes = _normalized_prefixes(field, r, n, depth)
        jobs = [(field.value, r, n, kind, p) for p in prefixes]
        results: List[Tuple[int, ...]] = []
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for chunk in pool.map(_worker, jobs):
                results.extend(chunk)
    else:
        results = list(_search(field, r, n, kind, ()))
    points = [from_codes(field, r, n, c) for c in results]
    points.sort(key=lambda p: p.chirotope())
    return Grassmannian(field, r, n, kind, tuple(points))


def enumerate_naive(field: HF, r: int, n: int, kind: str = "strong") -> Grassmannian:
    """Oracle enumeration: filter every assignment, then normalize and dedupe."""
    _validate_args(field, r, n, kind)
    vals = (-1, 0, 1) if field is HF.S else (0, 1)
    check = check_strong if kind == "strong" else check_weak
    seen = {}
    for codes in itertools.product(vals, repeat=comb(n, r)):
        if not any(codes):
            continue
        v = from_codes(field, r, n, codes)
        if check(v)[0]:
            w = normalize(v)
            seen[w.values] = w
    points = sorted(seen.values(), key=lambda p: p.chirotope())
    return Grassmannian(field, r, n, kind, tuple(points))


# ---------------------------------------------------------------------------
# posets


@dataclass(frozen=True)
class Poset:
    """Finite poset with bitmask up-sets; opens are the up-closed sets."""

    labels: Tuple[str, ...]
    up: Tuple[int, ...]  # up[i] = bitmask of {j : i <= j}, including i

    def __post_init__(self):
        nbits = len(self.labels)
        if len(self.up) != nbits:
            raise ValueError("up-set table size mismatch")
        for i, mask in enumerate(self.up):
            if not (mask >> i) & 1:
                raise ValueError(f"order not reflexive at {i}")
        for i in range(nbits):
            for j in _bits(self.up[i]):
                if i != j and (self.up[j] >> i) & 1:
                    raise ValueError(f"order not antisymmetric at ({i},{j})")
                if self.up[j] & ~self.up[i]:
                    raise ValueError(f"order not transitive at ({i},{j})")

    @property
    def size(self) -> int:
        return len(self.labels)

    def leq(self, i: int, j: int) -> bool:
        return bool((self.up[i] >> j) & 1)

    def down(self) -> Tuple[int, ...]:
        d = [0] * self.size
        for i in range(self.size):
            for j in _bits(self.up[i]):
                d[j] |= 1 << i
        return tuple(d)

    def maxima(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.size) if self.up[i] == 1 << i)

    def minima(self) -> Tuple[int, ...]:
        down = self.down()
        return tuple(i for i in range(self.size) if down[i] == 1 << i)

    def hasse_edges(self) -> Tuple[Tuple[int, int], ...]:
        """Cover pairs (i, j) with i < j and nothing strictly between."""
        down = self.down()
        out = []
        for i in range(self.size):
            for j in _bits(self.up[i]):
                if i == j:
                    continue
                if self.up[i] & down[j] == (1 << i) | (1 << j):
                    out.append((i, j))
        return tuple(out)

    def up_closure(self, ids: Iterable[int]) -> frozenset:
        mask = 0
        for i in ids:
            mask |= self.up[i]
        return frozenset(_bits(mask))

    def down_closure(self, ids: Iterable[int]) -> frozenset:
        down = self.down()
        mask = 0
        for i in ids:
            mask |= down[i]
        return frozenset(_bits(mask))


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def closure(P: Poset, ids: Iterable[int]) -> frozenset:
    """Topological closure in the upper-order-ideal topology: the down-set."""
    return P.down_closure(ids)


def is_open(P: Poset, ids: Iterable[int]) -> bool:
    """Open sets are exactly the up-closed ones."""
    ids = frozenset(ids)
    return P.up_closure(ids) == ids


def weak_le(u: GPVector, v: GPVector) -> bool:
    """u <= v in the weak map order: support shrinks, values agree up to a unit."""
    su, sv = u.support(), v.support()
    if not set(su) <= set(sv):
        return False
    b0 = su[0]
    alpha = product(u.coord(b0), inverse(v.coord(b0)))
    return all(u.coord(b) == product(alpha, v.coord(b)) for b in su)


def weak_map_poset(g: Grassmannian) -> Poset:
    pts = g.points
    up = []
    for i, u in enumerate(pts):
        mask = 0
        for j, v in enumerate(pts):
            if weak_le(u, v):
                mask |= 1 << j
        up.append(mask)
    return Poset(tuple(p.chirotope() for p in pts), tuple(up))


# ---------------------------------------------------------------------------
# induced maps and stabilization


def induced_map(
    h: Homomorphism, g_src: Grassmannian, g_tgt: Optional[Grassmannian] = None
) -> Tuple[Grassmannian, Tuple[int, ...]]:
    """Pointwise pushforward-then-normalize into the target Grassmannian."""
    if h.source is not g_src.field:
        raise ValueError(f"{h.name} does not start at {g_src.field}")
    if g_tgt is None:
        g_tgt = enumerate_grassmannian(HF(h.target), g_src.r, g_src.n, g_src.kind)
    idx = _point_index(g_tgt)
    mapping = []
    for p in g_src.points:
        q = normalize(pushforward(h, p))
        mapping.append(idx[q.values])
    return g_tgt, tuple(mapping)


def is_monotone(p_src: Poset, p_tgt: Poset, mapping: Sequence[int]) -> bool:
    for i in range(p_src.size):
        for j in _bits(p_src.up[i]):
            if not p_tgt.leq(mapping[i], mapping[j]):
                return False
    return True


def stabilize(v: GPVector) -> GPVector:
    """Embed Gr(r, F^n) into Gr(r, F^(n+1)): zero on subsets meeting n+1."""
    n1 = v.n + 1
    vals = []
    for s in lex_subsets(n1, v.r):
        if n1 in s:
            vals.append(zero(v.field))
        else:
            vals.append(v.coord(s))
    return GPVector(v.field, n1, v.r, tuple(vals))


# ---------------------------------------------------------------------------
# DOT export


def hasse_dot(P: Poset) -> str:
    lines = ["digraph hasse {", "  rankdir=BT;"]
    for i, lab in enumerate(P.labels):
        lines.append(f'  n{i} [label="{lab}"];')
    for i, j in sorted(P.hasse_edges()):
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
