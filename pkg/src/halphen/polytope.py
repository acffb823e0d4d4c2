"""Lattice points of Riemann-Roch polytopes.

``Delta(delta) = {e >= 0 : Q e = delta}``.  Every column of ``Q`` has exactly
one positive free entry, so the polytope is a product of bounded knapsacks
(one per free block) cut out by the torsion congruences.
"""

import csv
import io
import itertools
from collections import Counter
from typing import Dict, Iterator, List, Sequence, Tuple

from halphen.roots import ClassGroupElement, GradingMatrix


def knapsack_solutions(weights: Sequence[int], target: int) -> Iterator[Tuple[int, ...]]:
    """Nonnegative solutions of ``sum(w_i * x_i) == target`` in lexicographic order."""
    n = len(weights)

    def rec(i, remaining, prefix):
        if i == n - 1:
            if remaining % weights[i] == 0:
                yield prefix + (remaining // weights[i],)
            return
        for x in range(remaining // weights[i] + 1):
            yield from rec(i + 1, remaining - x * weights[i], prefix + (x,))

    if target < 0:
        return
    if n == 0:
        if target == 0:
            yield ()
        return
    yield from rec(0, target, ())


def _block_solutions(q: GradingMatrix, delta: ClassGroupElement) -> List[List[Tuple[int, ...]]]:
    return [list(knapsack_solutions(q.block_marks(i), delta.free[i])) for i in range(q.free_rank)]


def enumerate_points(q: GradingMatrix, delta: ClassGroupElement) -> List[Tuple[int, ...]]:
    """All integral points of ``Delta(delta)``, sorted lexicographically."""
    delta = q.check_delta(delta)
    per_block = _block_solutions(q, delta)
    s = q.num_columns
    out = []
    for combo in itertools.product(*per_block):
        e = [0] * s
        for block, sol in zip(q.blocks, combo):
            for j, x in zip(block, sol):
                e[j] = x
        if all(sum(a * x for a, x in zip(row, e)) % mod == t for (mod, row), t in zip(q.torsion, delta.torsion)):
            out.append(tuple(e))
    out.sort()
    return out


def count(q: GradingMatrix, delta: ClassGroupElement) -> int:
    """Number of integral points of ``Delta(delta)``.

    Counts per block are bucketed by torsion residue and convolved, so the
    product of block solutions is never materialized.
    """
    delta = q.check_delta(delta)
    moduli = q.moduli
    hist: Counter = Counter({(0,) * len(moduli): 1})
    for i, sols in enumerate(_block_solutions(q, delta)):
        block = q.blocks[i]
        local: Counter = Counter()
        for sol in sols:
            key = tuple(
                sum(row[j] * x for j, x in zip(block, sol)) % mod for mod, row in q.torsion
            )
            local[key] += 1
        merged: Counter = Counter()
        for a, na in hist.items():
            for b, nb in local.items():
                merged[tuple((x + y) % m for x, y, m in zip(a, b, moduli))] += na * nb
        hist = merged
    return hist.get(delta.torsion, 0)


def points_to_json(points: Sequence[Sequence[int]]) -> List[List[int]]:
    return [list(p) for p in points]


def points_to_csv(q: GradingMatrix, points: Sequence[Sequence[int]], labels: Sequence[str] = ()) -> str:
    """CSV text, one point per row; columns are ``<component>:<node>``."""
    header = []
    for i, block in enumerate(q.blocks):
        name = labels[i] if i < len(labels) else f"F{i + 1}"
        header.extend(f"{name}:{k}" for k in range(len(block)))
    order = [j for block in q.blocks for j in block]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for p in points:
        writer.writerow([p[j] for j in order])
    return buf.getvalue()
