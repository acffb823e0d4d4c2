"""Coefficients of the multigraded Hilbert series ``prod_j 1/(1 - t^{w_j})``.

Exponents live in ``Z^r + T``.  The truncated series is a dense array over
free degrees ``0 <= f <= bound``; each cell is a vector indexed by the
torsion elements.  Multiplying by one geometric factor is the in-place
recurrence ``H[g] += shift_w(H[g - w])`` swept in lexicographic order.
"""

import itertools
from typing import Dict, List, Sequence, Tuple

import numpy as np

from halphen.roots import ClassGroupElement, GradingMatrix


def _torsion_index(moduli: Sequence[int]) -> Tuple[List[Tuple[int, ...]], Dict[Tuple[int, ...], int]]:
    elems = list(itertools.product(*(range(d) for d in moduli)))
    return elems, {t: i for i, t in enumerate(elems)}


def _expand(q: GradingMatrix, bound: Sequence[int]) -> Tuple[np.ndarray, List[Tuple[int, ...]]]:
    bound = tuple(int(b) for b in bound)
    if len(bound) != q.free_rank:
        raise ValueError(f"bound has {len(bound)} entries, expected {q.free_rank}")
    if min(bound) < 0:
        raise ValueError("bound must be nonnegative")
    moduli = q.moduli
    elems, index = _torsion_index(moduli)
    table = np.zeros(tuple(b + 1 for b in bound) + (len(elems),), dtype=np.int64)
    table[(0,) * len(bound) + (0,)] = 1
    cells = list(np.ndindex(*(b + 1 for b in bound)))
    for j in range(q.num_columns):
        w = q.degree(j)
        # permutation sending torsion index of t to that of t + w
        shift = np.array(
            [index[tuple((a + b) % m for a, b, m in zip(t, w.torsion, moduli))] for t in elems]
        )
        for g in cells:
            src = tuple(x - y for x, y in zip(g, w.free))
            if min(src) < 0:
                continue
            table[g][shift] += table[src]
    return table, elems


def series_table(q: GradingMatrix, bound: Sequence[int]) -> Dict[ClassGroupElement, int]:
    """All coefficients with free degree at most ``bound`` (componentwise)."""
    table, elems = _expand(q, bound)
    out = {}
    for g in np.ndindex(*table.shape[:-1]):
        for i, t in enumerate(elems):
            out[ClassGroupElement(g, t)] = int(table[g][i])
    return out


def coefficient(q: GradingMatrix, delta: ClassGroupElement) -> int:
    delta = q.check_delta(delta)
    if min(delta.free) < 0:
        return 0
    table, elems = _expand(q, delta.free)
    return int(table[tuple(delta.free)][elems.index(delta.torsion)])


def series_to_json(table: Dict[ClassGroupElement, int]) -> List[dict]:
    return [{"degree": k.to_json(), "coeff": v} for k, v in sorted(table.items())]
