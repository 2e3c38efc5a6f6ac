"""Grassmann-Plucker vectors over a hyperfield.

A ``GPVector`` stores one exact value per lexicographic r-subset of the
ground set [n]; the alternating extension to arbitrary tuples follows the
sorting sign.  The strong check runs the full quadratic relations, the
weak check runs basis exchange on the support plus the three-term
relations.  Both iterate only sorted index sets; oracle equivalence with
the all-tuples definition is covered by ``check_strong_alltuples``.

Sign and Krasner chirotopes additionally travel as small int codes
(-1/0/1 and 0/1) through precompiled relation tables; the enumeration and
orientability searches use those directly.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from hypergrass.fields import (
    HF,
    Element,
    contains_zero,
    element,
    format_element,
    inverse,
    negate,
    parse_element,
    product,
    zero,
)
from hypergrass.homs import Homomorphism


@lru_cache(maxsize=None)
def lex_subsets(n: int, r: int) -> Tuple[Tuple[int, ...], ...]:
    """All r-subsets of [n] = {1..n} as sorted tuples, lexicographic."""
    return tuple(itertools.combinations(range(1, n + 1), r))


@lru_cache(maxsize=None)
def subset_rank(n: int, r: int) -> Dict[Tuple[int, ...], int]:
    return {s: i for i, s in enumerate(lex_subsets(n, r))}


def sort_with_sign(tup: Sequence[int]) -> Tuple[Tuple[int, ...], int]:
    """Sorted tuple and permutation sign; sign 0 on repeated entries."""
    if len(set(tup)) != len(tup):
        return tuple(sorted(tup)), 0
    lst = list(tup)
    sign = 1
    for i in range(len(lst)):
        for j in range(i + 1, len(lst)):
            if lst[j] < lst[i]:
                lst[i], lst[j] = lst[j], lst[i]
                sign = -sign
    return tuple(lst), sign


@dataclass(frozen=True)
class GPVector:
    """Alternating function [n]^r -> F stored on lexicographic r-subsets."""

    field: HF
    n: int
    r: int
    values: Tuple[Element, ...]

    def __post_init__(self):
        if not 0 < self.r <= self.n:
            raise ValueError(f"need 0 < r <= n, got r={self.r}, n={self.n}")
        subsets = lex_subsets(self.n, self.r)
        if len(self.values) != len(subsets):
            raise ValueError(
                f"expected {len(subsets)} coordinates, got {len(self.values)}"
            )
        if all(v.is_zero for v in self.values):
            raise ValueError("a Grassmann-Plucker vector is not identically zero")
        for v in self.values:
            if v.field is not self.field:
                raise ValueError("coordinate field mismatch")

    def coord(self, subset: Sequence[int]) -> Element:
        return self.values[subset_rank(self.n, self.r)[tuple(subset)]]

    def tuple_value(self, tup: Sequence[int]) -> Element:
        """Alternating extension: sign(sigma) (.) value of the sorted subset."""
        for i in tup:
            if not 1 <= i <= self.n:
                raise ValueError(f"index {i} outside ground set [{self.n}]")
        sorted_tup, sign = sort_with_sign(tup)
        if sign == 0:
            return zero(self.field)
        v = self.values[subset_rank(self.n, self.r)[sorted_tup]]
        return v if sign > 0 else negate(v)

    def support(self) -> Tuple[Tuple[int, ...], ...]:
        subs = lex_subsets(self.n, self.r)
        return tuple(s for s, v in zip(subs, self.values) if not v.is_zero)

    # -- S/K codes and strings ------------------------------------------

    def codes(self) -> Tuple[int, ...]:
        if self.field in (HF.S, HF.K):
            return tuple(v.value for v in self.values)
        raise ValueError(f"int codes exist only for S and K, not {self.field}")

    def chirotope(self) -> str:
        if self.field is HF.S:
            return "".join({1: "+", 0: "0", -1: "-"}[v.value] for v in self.values)
        if self.field is HF.K:
            return "".join(str(v.value) for v in self.values)
        raise ValueError(f"chirotope strings exist only for S and K, not {self.field}")

    def to_json(self) -> dict:
        coords = {}
        for s, v in zip(lex_subsets(self.n, self.r), self.values):
            if v.is_zero:
                continue
            key = ",".join(map(str, s)) if self.n > 9 else "".join(map(str, s))
            coords[key] = format_element(v).split(":", 1)[1]
        return {
            "field": self.field.value, "r": self.r, "n": self.n, "coords": coords,
        }

    def __str__(self) -> str:
        if self.field in (HF.S, HF.K):
            return self.chirotope()
        return json.dumps(self.to_json(), sort_keys=True)


def from_codes(field: HF, r: int, n: int, codes: Sequence[int]) -> GPVector:
    return GPVector(field, n, r, tuple(element(field, c) for c in codes))


def from_chirotope(field: HF, r: int, n: int, text: str) -> GPVector:
    table = {"+": 1, "-": -1, "0": 0, "1": 1}
    if len(text) != len(lex_subsets(n, r)):
        raise ValueError(
            f"chirotope for r={r}, n={n} needs {len(lex_subsets(n, r))} characters"
        )
    try:
        codes = [table[ch] for ch in text]
    except KeyError as exc:
        raise ValueError(f"bad chirotope character {exc.args[0]!r}") from exc
    return from_codes(field, r, n, codes)


def from_json(doc: dict) -> GPVector:
    field = HF(doc["field"])
    r, n = int(doc["r"]), int(doc["n"])
    vals = [zero(field)] * len(lex_subsets(n, r))
    ranks = subset_rank(n, r)
    for key, payload in doc["coords"].items():
        idx = tuple(int(c) for c in (key.split(",") if "," in key else key))
        vals[ranks[idx]] = parse_element(f"{field.value}:{payload}")
    return GPVector(field, n, r, tuple(vals))


# ---------------------------------------------------------------------------
# relation tables

Term = Tuple[int, int, int]  # (combined sign, first coord index, second)
Relation = Tuple[Tuple[Term, ...], Tuple[int, ...], Tuple[int, ...]]


@lru_cache(maxsize=None)
def relation_table(n: int, r: int, three_term_only: bool) -> Tuple[Relation, ...]:
    """Sorted-index GP relations as precompiled term lists.

    Each term is (sign, ia, ib): the sign folds (-1)^k together with the
    sorting sign of (i_k, j_1, ..., j_{r-1}); terms whose second tuple
    repeats an index are dropped (they are identically zero).
    """
    ranks = subset_rank(n, r)
    out: List[Relation] = []
    for I in itertools.combinations(range(1, n + 1), r + 1):
        for J in itertools.combinations(range(1, n + 1), r - 1):
            if three_term_only and len(set(I) - set(J)) != 3:
                continue
            terms: List[Term] = []
            for k, ik in enumerate(I, start=1):
                first = tuple(e for e in I if e != ik)
                second, sgn = sort_with_sign((ik,) + J)
                if sgn == 0:
                    continue
                combined = sgn * (-1 if k % 2 == 1 else 1)
                terms.append((combined, ranks[first], ranks[second]))
            out.append((tuple(terms), I, J))
    return tuple(out)


def srel_ok(codes: Sequence[int], terms: Tuple[Term, ...]) -> bool:
    """Zero-membership of a relation over S on -1/0/1 codes."""
    pos = neg = False
    for s, ia, ib in terms:
        t = s * codes[ia] * codes[ib]
        if t > 0:
            pos = True
        elif t < 0:
            neg = True
    return pos == neg


def krel_ok(codes: Sequence[int], terms: Tuple[Term, ...]) -> bool:
    """Zero-membership of a relation over K on 0/1 codes."""
    nonzero = 0
    for _, ia, ib in terms:
        if codes[ia] and codes[ib]:
            nonzero += 1
            if nonzero > 1:
                return True
    return nonzero != 1


def relation_ok(v: GPVector, terms: Tuple[Term, ...]) -> bool:
    elems = [
        _signed(product(v.values[ia], v.values[ib]), s) for s, ia, ib in terms
    ]
    if not elems:
        return True
    return contains_zero(elems)


def _signed(x: Element, s: int) -> Element:
    return x if s > 0 else negate(x)


# ---------------------------------------------------------------------------
# checks


def check_strong(v: GPVector) -> Tuple[bool, Optional[Tuple[tuple, tuple]]]:
    """All GP relations; first failing (I, J) in lexicographic order."""
    if v.field in (HF.S, HF.K):
        codes = v.codes()
        ok = srel_ok if v.field is HF.S else krel_ok
        for terms, I, J in relation_table(v.n, v.r, False):
            if not ok(codes, terms):
                return False, (I, J)
        return True, None
    for terms, I, J in relation_table(v.n, v.r, False):
        if not relation_ok(v, terms):
            return False, (I, J)
    return True, None


def check_strong_alltuples(v: GPVector) -> Tuple[bool, Optional[Tuple[tuple, tuple]]]:
    """Oracle: the definition quantified over every tuple, unsorted included."""
    rng = range(1, v.n + 1)
    for I in itertools.product(rng, repeat=v.r + 1):
        for J in itertools.product(rng, repeat=v.r - 1):
            terms: List[Element] = []
            for k in range(1, v.r + 2):
                first = I[: k - 1] + I[k:]
                a = v.tuple_value(first)
                b = v.tuple_value((I[k - 1],) + J)
                t = product(a, b)
                terms.append(negate(t) if k % 2 == 1 else t)
            if not contains_zero(terms):
                return False, (I, J)
    return True, None


def check_weak(v: GPVector) -> Tuple[bool, Optional[tuple]]:
    """Support forms a matroid, and the three-term relations hold."""
    m = underlying_matroid(v)
    witness = m.validate()
    if witness is not None:
        return False, ("exchange", witness)
    if v.field in (HF.S, HF.K):
        codes = v.codes()
        ok = srel_ok if v.field is HF.S else krel_ok
        for terms, I, J in relation_table(v.n, v.r, True):
            if not ok(codes, terms):
                return False, ("three-term", (I, J))
        return True, None
    for terms, I, J in relation_table(v.n, v.r, True):
        if not relation_ok(v, terms):
            return False, ("three-term", (I, J))
    return True, None


# ---------------------------------------------------------------------------
# matroids


@dataclass(frozen=True)
class MatroidBases:
    """A rank-r matroid on [n] given by its bases."""

    n: int
    r: int
    bases: FrozenSet[FrozenSet[int]]

    @classmethod
    def from_subsets(cls, n: int, r: int, subsets) -> "MatroidBases":
        return cls(n, r, frozenset(frozenset(s) for s in subsets))

    @classmethod
    def uniform(cls, n: int, r: int) -> "MatroidBases":
        return cls.from_subsets(n, r, itertools.combinations(range(1, n + 1), r))

    def validate(self) -> Optional[tuple]:
        """None when the basis-exchange axiom holds, else a witness."""
        if not self.bases:
            return ("empty",)
        for b in self.bases:
            if len(b) != self.r:
                return ("size", tuple(sorted(b)))
        for b1 in self.bases:
            for b2 in self.bases:
                for x in b1 - b2:
                    if not any(
                        (b1 - {x}) | {y} in self.bases for y in b2 - b1
                    ):
                        return ("exchange", (tuple(sorted(b1)), tuple(sorted(b2)), x))
        return None

    def is_basis(self, subset) -> bool:
        return frozenset(subset) in self.bases

    def sorted_bases(self) -> List[Tuple[int, ...]]:
        return sorted(tuple(sorted(b)) for b in self.bases)

    def is_uniform(self) -> bool:
        from math import comb

        return len(self.bases) == comb(self.n, self.r)

    def indicator(self) -> GPVector:
        """The K-chirotope with support exactly on the bases."""
        vals = [
            element(HF.K, 1 if frozenset(s) in self.bases else 0)
            for s in lex_subsets(self.n, self.r)
        ]
        return GPVector(HF.K, self.n, self.r, tuple(vals))


def underlying_matroid(v: GPVector) -> MatroidBases:
    return MatroidBases.from_subsets(v.n, v.r, v.support())


# ---------------------------------------------------------------------------
# maps of vectors


def pushforward(h: Homomorphism, v: GPVector) -> GPVector:
    if h.source is not v.field:
        raise ValueError(f"{h.name} expects {h.source}, vector is over {v.field}")
    return GPVector(h.target, v.n, v.r, tuple(h(x) for x in v.values))


def restrict(v: GPVector, A: Sequence[int]) -> GPVector:
    """Restriction to a subset of the ground set, relabeled to 1..|A|."""
    A = tuple(sorted(A))
    if len(A) < v.r:
        raise ValueError("restriction needs at least r elements")
    vals = [v.coord(s) for s in itertools.combinations(A, v.r)]
    if all(x.is_zero for x in vals):
        raise ValueError(f"subset {A} has rank below {v.r}; restriction undefined")
    return GPVector(v.field, len(A), v.r, tuple(vals))


def scale(v: GPVector, alpha: Element) -> GPVector:
    if alpha.is_zero:
        raise ValueError("projective scaling needs a unit")
    return GPVector(v.field, v.n, v.r, tuple(product(alpha, x) for x in v.values))


def diagonal_scale(v: GPVector, units: Dict[int, Element]) -> GPVector:
    """Scale coordinatewise by the product of per-element units of [n]."""
    for e, u in units.items():
        if u.is_zero:
            raise ValueError(f"unit for element {e} is zero")
    vals = []
    for s, x in zip(lex_subsets(v.n, v.r), v.values):
        y = x
        for e in s:
            if e in units:
                y = product(units[e], y)
        vals.append(y)
    return GPVector(v.field, v.n, v.r, tuple(vals))


def normalize(v: GPVector) -> GPVector:
    """Canonical projective representative: first nonzero coordinate = 1."""
    for x in v.values:
        if not x.is_zero:
            return scale(v, inverse(x))
    raise AssertionError("unreachable: GP vectors are not identically zero")


def projectively_equal(u: GPVector, v: GPVector) -> bool:
    if (u.field, u.n, u.r) != (v.field, v.n, v.r):
        return False
    return normalize(u) == normalize(v)
