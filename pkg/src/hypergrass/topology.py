"""Order complexes of finite posets and mod-2 simplicial homology.

Chains are enumerated by DFS over the strict order; boundary matrices are
int-bitset rows reduced by GF(2) elimination.  The poset-level shortcut
for contractibility (a unique maximum makes the complex a cone) is kept
separate so tests can confirm the homology agrees with it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from hypergrass.gf2 import gf2_rank
from hypergrass.grassmannian import Poset, _bits


class ComplexTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Complex:
    """Simplices per dimension; each simplex is an increasing chain."""

    simplices: Tuple[Tuple[Tuple[int, ...], ...], ...]

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def f_vector(self) -> Tuple[int, ...]:
        return tuple(len(level) for level in self.simplices)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(level) for k, level in enumerate(self.simplices))


DEFAULT_CAP = 50_000_000


def order_complex(P: Poset, cap: int = DEFAULT_CAP) -> Complex:
    """All chains p_0 < ... < p_k of the poset, grouped by dimension."""
    strict = [P.up[i] & ~(1 << i) for i in range(P.size)]
    levels: List[List[Tuple[int, ...]]] = [[(i,) for i in range(P.size)]]
    total = P.size
    while levels[-1]:
        nxt: List[Tuple[int, ...]] = []
        for chain in levels[-1]:
            last = chain[-1]
            for j in _bits(strict[last]):
                nxt.append(chain + (j,))
                total += 1
                if total > cap:
                    raise ComplexTooLarge(
                        f"order complex exceeds the {cap}-simplex cap"
                    )
        if nxt:
            levels.append(nxt)
        else:
            break
    return Complex(tuple(tuple(level) for level in levels))


def boundary_matrix(C: Complex, k: int) -> List[int]:
    """Rows of the k-th boundary map as bitsets over (k-1)-simplices."""
    if k == 0 or k > C.dim:
        return []
    index: Dict[Tuple[int, ...], int] = {
        s: i for i, s in enumerate(C.simplices[k - 1])
    }
    rows = []
    for s in C.simplices[k]:
        row = 0
        for drop in range(len(s)):
            facet = s[:drop] + s[drop + 1:]
            row ^= 1 << index[facet]
        rows.append(row)
    return rows


def boundary_squared_is_zero(C: Complex, k: int) -> bool:
    """Check del_{k-1} o del_k = 0 over GF(2) by composing bitset rows."""
    if k <= 1 or k > C.dim:
        return True
    lower = boundary_matrix(C, k - 1)
    upper = boundary_matrix(C, k)
    for row in upper:
        acc = 0
        for j in _bits(row):
            acc ^= lower[j]
        if acc:
            return False
    return True


def homology_mod2(C: Complex) -> List[int]:
    """Unreduced mod-2 Betti numbers beta_0 .. beta_dim."""
    ranks = [0] * (C.dim + 2)
    for k in range(1, C.dim + 1):
        ranks[k] = gf2_rank(boundary_matrix(C, k))
    betti = []
    for k in range(C.dim + 1):
        f_k = len(C.simplices[k])
        betti.append(f_k - ranks[k] - ranks[k + 1])
    return betti


def is_contractible_via_max(P: Poset) -> bool:
    """A unique maximum makes the whole poset a deformation retract of it."""
    return len(P.maxima()) == 1
