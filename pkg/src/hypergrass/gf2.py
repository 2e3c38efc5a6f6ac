"""GF(2) linear algebra on int bitsets."""

from __future__ import annotations

from typing import Dict, Iterable


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank of a GF(2) matrix whose rows are int bitsets."""
    pivots: Dict[int, int] = {}  # lowest set bit -> pivot row
    rank = 0
    for row in rows:
        while row:
            low = row & -row
            piv = pivots.get(low)
            if piv is None:
                pivots[low] = row
                rank += 1
                break
            row ^= piv
    return rank
