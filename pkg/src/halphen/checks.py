"""Cross-checks shared by the ``verify`` command and the test suite."""

import itertools
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from halphen.hilbert import series_table
from halphen.picard import E, L, K, intersect
from halphen.polytope import count
from halphen.roots import (
    AdeType,
    ClassGroupElement,
    FiberConfiguration,
    GradingMatrix,
    appendix_node_order,
    marks,
)
from halphen.surface import HalphenModel, delta_from_model

PROJECTION_CLASSES = (E[9], E[1], L - E[1] - E[2])


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name}" + (f": {self.detail}" if self.detail else "")


def free_grid(bound: Sequence[int]) -> List[Tuple[int, ...]]:
    return list(itertools.product(*(range(b + 1) for b in bound)))


def oracle_mismatches(q: GradingMatrix, bound: int) -> List[Tuple[ClassGroupElement, int, int]]:
    """Degrees where the Hilbert coefficient and the point count disagree."""
    table = series_table(q, (bound,) * q.free_rank)
    bad = []
    for delta, coeff in table.items():
        n = count(q, delta)
        if n != coeff:
            bad.append((delta, coeff, n))
    return bad


def marks_match_appendix(q: GradingMatrix, cfg: FiberConfiguration) -> bool:
    if q.free_rank != len(cfg.components):
        return False
    for i, t in enumerate(cfg.components):
        expected = tuple(marks(t)[k] for k in appendix_node_order(t))
        if q.block_marks(i) != expected:
            return False
    return True


def _reorder_torsion(q: GradingMatrix, order: Sequence[int]) -> GradingMatrix:
    return GradingMatrix(q.free_rows, tuple(q.torsion[i] for i in order), q.blocks)


def matching_isomorphism(a: GradingMatrix, b: GradingMatrix, cfg: FiberConfiguration):
    """Like :func:`find_isomorphism`, also trying reorderings of the torsion rows of ``b``.

    Returns ``(b_reordered, iso)`` or None.
    """
    for order in itertools.permutations(range(len(b.torsion))):
        b2 = _reorder_torsion(b, order)
        if b2.moduli != a.moduli:
            continue
        iso = find_isomorphism(a, b2, cfg)
        if iso is not None:
            return b2, iso
    return None


def transport(delta: ClassGroupElement, iso, moduli: Sequence[int]) -> ClassGroupElement:
    """Image of ``delta`` under an isomorphism returned by :func:`find_isomorphism`."""
    perm, sigma, shifts = iso
    free = [0] * len(delta.free)
    for i, p in enumerate(perm):
        free[p] = delta.free[i]
    tors = []
    for x, m in enumerate(moduli):
        v = sum(c * img[x] for c, img in zip(delta.torsion, sigma))
        v += sum(n * c[x] for n, c in zip(delta.free, shifts))
        tors.append(v % m)
    return ClassGroupElement(tuple(free), tuple(tors))


def same_count_function(a: GradingMatrix, b: GradingMatrix, cfg: FiberConfiguration, bound: int) -> bool:
    """True if an isomorphism of class groups carries the counts of ``a`` onto those of ``b``.

    The isomorphism is found from the column degrees, then the point counts
    are compared on every class with free part in ``[0, bound]^r``.
    """
    if a.class_group != b.class_group:
        return False
    found = matching_isomorphism(a, b, cfg)
    if found is None:
        return False
    b2, iso = found
    for f in free_grid((bound,) * a.free_rank):
        for t in a.torsion_twists():
            d = ClassGroupElement(f, t)
            if count(a, d) != count(b2, transport(d, iso, a.moduli)):
                return False
    return True


def projection_independent(model: HalphenModel) -> bool:
    values = {delta_from_model(model, w) for w in PROJECTION_CLASSES}
    return len(values) == 1 and model.delta in values


def free_degrees_ok(model: HalphenModel) -> bool:
    """Each (-2)-curve column has free degree ``n_C`` times a unit vector."""
    q = model.q_matrix
    pos = 0
    for i, t in enumerate(model.configuration.components):
        for n in marks(t):
            expected = tuple(n if k == i else 0 for k in range(q.free_rank))
            if q.degree(pos).free != expected:
                return False
            pos += 1
    return True


def fiber_sums_ok(model: HalphenModel) -> bool:
    pos = 0
    for t in model.configuration.components:
        total = [0] * 10
        for n in marks(t):
            for k, c in enumerate(model.neg2_curves[pos].coeffs):
                total[k] += n * c
            pos += 1
        if tuple(total) != tuple(-model.index * x for x in K.coeffs):
            return False
    return True


def gram_ok(model: HalphenModel) -> bool:
    curves = model.neg2_curves
    expected = [[0] * len(curves) for _ in curves]
    pos = 0
    for t in model.configuration.components:
        c = t.extended_cartan()
        for i in range(len(c)):
            for j in range(len(c)):
                expected[pos + i][pos + j] = -c[i][j]
        pos += len(c)
    actual = [[intersect(a, b) for b in curves] for a in curves]
    return actual == expected


def _torsion_automorphisms(moduli: Sequence[int]) -> List[List[Tuple[int, ...]]]:
    """Automorphisms of ``prod Z/m_i``, as lists of generator images."""
    elems = list(itertools.product(*(range(m) for m in moduli)))
    k = len(moduli)

    def combine(images, coeffs):
        return tuple(
            sum(c * img[a] for c, img in zip(coeffs, images)) % moduli[a] for a in range(k)
        )

    out = []
    for images in itertools.product(elems, repeat=k):
        if any(tuple(moduli[i] * x % m for x, m in zip(img, moduli)) != (0,) * k for i, img in enumerate(images)):
            continue
        if len({combine(images, t) for t in elems}) == len(elems):
            out.append(list(images))
    return out


def find_isomorphism(a: GradingMatrix, b: GradingMatrix, cfg: FiberConfiguration):
    """An isomorphism of class groups carrying the column degrees of ``a`` onto those of ``b``.

    Candidates have the form ``(f, t) -> (perm(f), sigma(t) + sum f_i c_i)``
    with ``perm`` permuting same-type blocks, ``sigma`` an automorphism of the
    torsion and ``c_i`` torsion shifts.  The torsion groups must be presented
    with the same moduli.  Returns ``(perm, sigma, shifts)`` or None.
    """
    if a.moduli != b.moduli or a.free_rank != b.free_rank:
        return None
    moduli = a.moduli
    elems = list(itertools.product(*(range(m) for m in moduli)))
    comps = list(cfg.components)

    def block_degrees(q, i):
        return [(q.free_rows[i][j], tuple(r[j] for _, r in q.torsion)) for j in q.blocks[i]]

    for sigma in _torsion_automorphisms(moduli):
        def apply_sigma(t):
            return tuple(
                sum(c * img[x] for c, img in zip(t, sigma)) % moduli[x] for x in range(len(moduli))
            )

        # shift for block i -> block p: (n, t) -> (n, sigma t + n c)
        options = {}
        for i in range(a.free_rank):
            src = block_degrees(a, i)
            for p in range(b.free_rank):
                if comps[i] != comps[p]:
                    continue
                dst = sorted(block_degrees(b, p))
                options[i, p] = [
                    c for c in elems
                    if sorted(
                        (n, tuple((x + n * y) % m for x, y, m in zip(apply_sigma(t), c, moduli)))
                        for n, t in src
                    ) == dst
                ]
        for perm in itertools.permutations(range(a.free_rank)):
            if all(options.get((i, p)) for i, p in enumerate(perm)):
                return perm, sigma, [options[i, p][0] for i, p in enumerate(perm)]
    return None
