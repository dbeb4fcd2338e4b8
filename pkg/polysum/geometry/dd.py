"""Double description kernel.

Computes the extreme rays of a pointed polyhedral cone {y : R y >= 0}. Rows
are inserted one at a time; rays live as primitive integer tuples and carry
a bitmask of the rows they make tight. Adjacency is a shared-row count
followed by an exact rank test on the shared tight rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from functools import reduce
from collections import Counter, defaultdict
from typing import Dict, List, Sequence, Tuple

from ..core.errors import NotFullDimensional
from ..exact.linalg import int_rank, solve_linear

IntRow = Tuple[int, ...]


@dataclass(frozen=True)
class Ray:
    coords: IntRow
    zero_mask: int


@dataclass(frozen=True)
class DDResult:
    rows: Tuple[IntRow, ...]
    rays: Tuple[Ray, ...]

    def tight_rows(self, ray: Ray) -> List[int]:
        return _bits(ray.zero_mask)


def _primitive(v: Sequence[int]) -> IntRow:
    g = reduce(gcd, (abs(x) for x in v), 0)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def _bits(mask: int) -> List[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _initial_basis(rows: Sequence[IntRow], n: int) -> List[int]:
    chosen: List[int] = []
    for i, row in enumerate(rows):
        if int_rank([rows[j] for j in chosen] + [row]) == len(chosen) + 1:
            chosen.append(i)
            if len(chosen) == n:
                return chosen
    raise NotFullDimensional(f"constraint rows have rank {len(chosen)} < {n}; cone is not pointed")


def extreme_rays(rows: Sequence[Sequence[int]]) -> DDResult:
    """Extreme rays of {y : row·y >= 0 for every row}; the rows must have full column rank."""
    int_rows = tuple(tuple(int(x) for x in r) for r in rows)
    if not int_rows:
        raise NotFullDimensional("no constraint rows")
    n = len(int_rows[0])
    basis = _initial_basis(int_rows, n)

    b = [[Fraction(x) for x in int_rows[i]] for i in basis]
    rays: List[Ray] = []
    full = 0
    for i in basis:
        full |= 1 << i
    for k, row_idx in enumerate(basis):
        e = [Fraction(1 if j == k else 0) for j in range(n)]
        y = solve_linear([tuple(r) for r in b], e)
        den = reduce(lambda a, c: a * c // gcd(a, c), (q.denominator for q in y), 1)
        coords = _primitive([int(q * den) for q in y])
        rays.append(Ray(coords, full & ~(1 << row_idx)))

    in_basis = set(basis)
    for h_idx, h in enumerate(int_rows):
        if h_idx in in_basis:
            continue
        bit = 1 << h_idx
        pos: List[Tuple[Ray, int]] = []
        neg: List[Tuple[Ray, int]] = []
        kept: List[Ray] = []
        for r in rays:
            s = _dot(h, r.coords)
            if s > 0:
                pos.append((r, s))
                kept.append(r)
            elif s < 0:
                neg.append((r, s))
            else:
                kept.append(Ray(r.coords, r.zero_mask | bit))
        if not neg:
            rays = kept
            continue
        new: List[Ray] = []
        need = n - 2
        index: Dict[int, List[int]] = defaultdict(list)
        if need > 0:
            for pi, (rp, _) in enumerate(pos):
                for i in _bits(rp.zero_mask):
                    index[i].append(pi)
        for rn, sn in neg:
            if need > 0:
                shared: Counter = Counter()
                for i in _bits(rn.zero_mask):
                    shared.update(index.get(i, ()))
                candidates = sorted(pi for pi, c in shared.items() if c >= need)
            else:
                candidates = list(range(len(pos)))
            for pi in candidates:
                rp, sp = pos[pi]
                common = rp.zero_mask & rn.zero_mask
                if int_rank([int_rows[i] for i in _bits(common)]) != need:
                    continue
                coords = _primitive([sp * a - sn * c for a, c in zip(rn.coords, rp.coords)])
                new.append(Ray(coords, common | bit))
        rays = kept + new
    return DDResult(rows=int_rows, rays=tuple(rays))
