"""Halphen surfaces from characteristic sequences.

A characteristic sequence is nine elements ``p1 = 0, p2, ..., p9`` of a
finite abelian group ``G`` (a subgroup of a plane cubic with origin at a
flex).  Blowing up the plane at the corresponding points gives a rational
surface ``X``; repeated values are read as infinitely near points, in listed
order.  The restriction map

    alpha(d L - sum m_i E_i) = sum_{i>=2} m_i p_i

detects which roots of ``K^perp`` are classes of fiber components, and the
Halphen index is the order of ``h = alpha(-K) = p2 + ... + p9``.
"""

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from halphen.linalg import invariant_factors, matvec
from halphen.picard import (
    E,
    E8_BASIS,
    K,
    L,
    ZERO,
    DivisorClass,
    _E8_GRAM_INV,
    e8_project,
    e8_root_classes,
    intersect,
    is_minus_one_class,
)
from halphen.polytope import count, enumerate_points
from halphen.roots import (
    AdeType,
    ClassGroupElement,
    CokernelPresentation,
    FiberConfiguration,
    GradingMatrix,
    UnsupportedConfiguration,
    appendix_configuration,
    appendix_grading,
    canonical_component_key,
    cokernel_presentation,
    delta_free_part,
    grading_from_embedding,
    load_fixture,
    marks,
    normalize_factors,
)


class ModelError(RuntimeError):
    """A reconstructed model failed one of its structural postconditions."""


Element = Tuple[int, ...]


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """``Z/d1 + Z/d2`` (at most two factors; a factor 1 is a placeholder)."""

    factors: Tuple[int, ...]

    def __post_init__(self):
        facs = tuple(int(d) for d in self.factors) or (1,)
        if len(facs) > 2 or min(facs) < 1:
            raise ValueError(f"unsupported group factors {facs}")
        object.__setattr__(self, "factors", facs)

    @property
    def order(self) -> int:
        out = 1
        for d in self.factors:
            out *= d
        return out

    @property
    def invariant_factors(self) -> Tuple[int, ...]:
        return normalize_factors(self.factors)

    def zero(self) -> Element:
        return (0,) * len(self.factors)

    def reduce(self, x: Sequence[int]) -> Element:
        if len(x) != len(self.factors):
            raise ValueError(f"element {tuple(x)} has the wrong length for {self}")
        return tuple(int(a) % d for a, d in zip(x, self.factors))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.factors))

    def scale(self, k: int, x: Element) -> Element:
        return tuple((k * a) % d for a, d in zip(x, self.factors))

    def element_order(self, x: Element) -> int:
        out = 1
        for a, d in zip(x, self.factors):
            o = d // gcd(a, d)
            out = out * o // gcd(out, o)
        return out

    def elements(self) -> List[Element]:
        return list(itertools.product(*(range(d) for d in self.factors)))

    def parse_element(self, token: str) -> Element:
        """Parse ``'1'``, ``'0:1'`` or the compact two-digit form ``'01'``."""
        token = token.strip()
        if ":" in token:
            parts = token.split(":")
        elif len(self.factors) == 2 and len(token) == 2 and token.isdigit():
            parts = list(token)
        elif len(self.factors) == 2 and token == "0":
            parts = ["0", "0"]
        else:
            parts = [token]
        return self.reduce([int(p) for p in parts])

    def format_element(self, x: Element) -> str:
        return ":".join(map(str, x))

    def __str__(self) -> str:
        facs = [d for d in self.factors if d > 1]
        return " + ".join(f"Z/{d}" for d in facs) or "0"


@dataclass(frozen=True)
class CharacteristicSequence:
    group: FiniteAbelianGroup
    points: Tuple[Element, ...]

    def __post_init__(self):
        pts = tuple(self.group.reduce(p) for p in self.points)
        if len(pts) != 9:
            raise ValueError(f"a characteristic sequence has nine points, got {len(pts)}")
        if pts[0] != self.group.zero():
            raise ValueError("p1 must be the origin (the flex)")
        object.__setattr__(self, "points", pts)

    @property
    def h(self) -> Element:
        out = self.group.zero()
        for p in self.points[1:]:
            out = self.group.add(out, p)
        return out

    @classmethod
    def from_strings(cls, factors: Sequence[int], tokens: Sequence[str]) -> "CharacteristicSequence":
        g = FiniteAbelianGroup(tuple(factors))
        return cls(g, tuple(g.parse_element(t) for t in tokens))

    @classmethod
    def parse(cls, text: str) -> "CharacteristicSequence":
        """Read the two-line text format (invariant factors, then nine elements)."""
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if len(lines) != 2:
            raise ValueError("expected two non-empty lines: group factors and nine elements")
        try:
            factors = [int(x) for x in lines[0].split()]
        except ValueError:
            raise ValueError(f"bad group line {lines[0]!r}") from None
        return cls.from_strings(factors, [t for t in lines[1].split(",")])

    def to_text(self) -> str:
        return (
            " ".join(map(str, self.group.factors))
            + "\n"
            + ", ".join(self.group.format_element(p) for p in self.points)
            + "\n"
        )


def alpha(c: DivisorClass, seq: CharacteristicSequence) -> Element:
    """Restriction of a class in ``K^perp`` to the cubic, as a group element."""
    if intersect(c, K) != 0:
        raise ValueError(f"{c} is not orthogonal to K")
    g = seq.group
    out = g.zero()
    # coefficient c_i of E_i is -m_i
    for ci, p in zip(c.coeffs[2:], seq.points[1:]):
        out = g.add(out, g.scale(-ci, p))
    return out


def halphen_index(seq: CharacteristicSequence) -> int:
    return seq.group.element_order(seq.h)


# ---------------------------------------------------------------------------
# reconstruction


@dataclass(frozen=True)
class HalphenModel:
    sequence: CharacteristicSequence
    index: int
    neg2_curves: Tuple[DivisorClass, ...]
    configuration: FiberConfiguration
    q_matrix: GradingMatrix
    delta: ClassGroupElement
    presentation: CokernelPresentation = field(repr=False)

    @property
    def h(self) -> Element:
        return self.sequence.h

    @property
    def blocks(self) -> Tuple[Tuple[int, ...], ...]:
        return self.q_matrix.blocks

    def cl_matrix(self) -> List[List[int]]:
        cols = [e8_project(c).coords for c in self.neg2_curves]
        return [list(row) for row in zip(*cols)]

    def to_json(self, minus_one: Optional[Sequence[DivisorClass]] = None) -> dict:
        out = {
            "group": list(self.sequence.group.factors),
            "sequence": [list(p) for p in self.sequence.points],
            "h": list(self.h),
            "index": self.index,
            "configuration": str(self.configuration),
            "neg2_curves": [c.to_json() for c in self.neg2_curves],
            "grading": self.q_matrix.to_json(),
            "delta": self.delta.to_json(),
        }
        if minus_one is not None:
            out["minus_one_curves"] = [str(d) for d in minus_one]
        return out


def _degree_zero_effective(c: DivisorClass) -> bool:
    # a degree-0 root is E_a - E_b; it is effective iff p_b is infinitely near p_a, i.e. a < b
    lead = next(x for x in c.coeffs[1:] if x)
    return lead > 0


def minimal_effective_lift(root: DivisorClass, seq: CharacteristicSequence, m: int) -> Optional[DivisorClass]:
    """The lowest-degree effective class over the E8 root of ``root``.

    Returns None when the root is not in the kernel of the reduced
    restriction map.  Lifts with trivial restriction form the family
    ``D + k*m*K``; positive-degree members are effective, and a degree-0
    member is effective exactly when it is ``E_a - E_b`` with ``a < b``.
    """
    g = seq.group
    a = alpha(root, seq)
    j = next((j for j in range(m) if g.scale(j, seq.h) == a), None)
    if j is None:
        return None
    d = root + j * K
    d = d + (d.degree // (3 * m)) * m * K
    if d.degree == 0 and not _degree_zero_effective(d):
        d = d - m * K
    return d


def _component_order(curves: Sequence[DivisorClass], t: AdeType) -> Optional[Tuple[DivisorClass, ...]]:
    """Order ``curves`` as the nodes of the affine diagram of ``t``, or None."""
    if len(curves) != t.rank + 1:
        return None
    cartan = t.extended_cartan()
    model = nx.MultiGraph()
    model.add_nodes_from(range(len(curves)))
    actual = nx.MultiGraph()
    actual.add_nodes_from(range(len(curves)))
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            for _ in range(-cartan[i][j]):
                model.add_edge(i, j)
            w = intersect(curves[i], curves[j])
            if w < 0:
                return None
            for _ in range(w):
                actual.add_edge(i, j)
    best = None
    for iso in GraphMatcher(model, actual).isomorphisms_iter():
        cand = tuple(curves[iso[i]] for i in range(len(curves)))
        if best is None or cand < best:
            best = cand
    return best


def _candidate_types(n_nodes: int) -> List[AdeType]:
    rank = n_nodes - 1
    out = [AdeType("A", rank)] if rank >= 1 else []
    if rank >= 4:
        out.append(AdeType("D", rank))
    if rank in (6, 7, 8):
        out.append(AdeType("E", rank))
    return out


def _gram(curves: Sequence[DivisorClass]) -> List[List[int]]:
    return [[intersect(a, b) for b in curves] for a in curves]


def reconstruct_neg2_curves(seq: CharacteristicSequence) -> HalphenModel:
    """The (-2)-curves of the blow-up, by the greedy filtration.

    Minimal effective lifts of the roots in ``ker(alpha bar)`` are processed
    in increasing order of (degree, coefficients); a candidate is kept when
    it meets every kept curve nonnegatively.  The result is checked against
    the affine Cartan blocks and the fiber-class identity before returning.
    """
    m = halphen_index(seq)
    cands = set()
    for root in e8_root_classes():
        lift = minimal_effective_lift(root, seq, m)
        if lift is not None:
            cands.add(lift)
    kept: List[DivisorClass] = []
    for c in sorted(cands):
        if all(intersect(c, k) >= 0 for k in kept):
            kept.append(c)

    graph = nx.Graph()
    graph.add_nodes_from(range(len(kept)))
    graph.add_edges_from(
        (i, j) for i in range(len(kept)) for j in range(i + 1, len(kept)) if intersect(kept[i], kept[j])
    )
    components = []
    for nodes in nx.connected_components(graph):
        curves = [kept[i] for i in sorted(nodes)]
        for t in _candidate_types(len(curves)):
            ordered = _component_order(curves, t)
            if ordered is not None:
                components.append((t, ordered))
                break
        else:
            raise ModelError(
                f"curves {[str(c) for c in curves]} do not form an affine ADE diagram; "
                f"Gram matrix {_gram(curves)}"
            )
    components.sort(key=lambda tc: (canonical_component_key(tc[0]), tc[1]))
    cfg = FiberConfiguration(tuple(t for t, _ in components))
    if cfg.rank != 8:
        raise UnsupportedConfiguration(f"configuration {cfg} has rank {cfg.rank}, expected 8")
    curves = tuple(c for _, ordered in components for c in ordered)
    for t, ordered in components:
        total = ZERO
        for n, c in zip(marks(t), ordered):
            total = total + n * c
        if total != (-m) * K:
            raise ModelError(f"fiber of type {t} has class {total}, expected {(-m) * K}")
    for c in curves:
        if intersect(c, c) != -2 or intersect(c, K) != 0 or alpha(c, seq) != seq.group.zero():
            raise ModelError(f"{c} is not a (-2)-class in the kernel of alpha")

    cols = [e8_project(c).coords for c in curves]
    cl = [list(row) for row in zip(*cols)]
    q, _ = grading_from_embedding(cl)
    pres = cokernel_presentation(cl)
    provisional = HalphenModel(seq, m, curves, cfg, q, ClassGroupElement((0,) * q.free_rank, (0,) * len(q.torsion)), pres)
    return HalphenModel(seq, m, curves, cfg, q, delta_from_model(provisional), pres)


def delta_from_model(model: HalphenModel, w: DivisorClass = E[9]) -> ClassGroupElement:
    """The class of the (-1)-curves, via the functional ``C_j -> C_j . w``.

    ``w`` must satisfy ``w . (-K) = 1``; the result does not depend on it.
    """
    if intersect(w, K) != -1:
        raise ValueError(f"{w} does not meet -K with multiplicity 1")
    return model.q_matrix.apply([intersect(c, w) for c in model.neg2_curves])


def lift_point(model: HalphenModel, e: Sequence[int], w: DivisorClass = E[9]) -> DivisorClass:
    """The (-1)-class whose intersections with the (-2)-curves are ``e``."""
    pres = model.presentation
    s = len(model.neg2_curves)
    b = [x - intersect(c, w) for x, c in zip(e, model.neg2_curves)]
    ub = matvec(pres.u, b)
    z_sol = [0] * 8
    for i in range(s):
        d = pres.diag[i] if i < len(pres.diag) else 0
        if d == 0:
            if ub[i] != 0:
                raise ModelError(f"intersection vector {tuple(e)} is inconsistent with the model")
            continue
        if ub[i] % d:
            raise ArithmeticError(f"intersection vector {tuple(e)} has no integral lift")
        z_sol[i] = ub[i] // d
    z = matvec(pres.v, z_sol)
    y = matvec(_E8_GRAM_INV, z)
    d_cls = w
    for coef, r in zip(y, E8_BASIS):
        d_cls = d_cls + coef * r
    sq = intersect(d_cls, d_cls)
    d_cls = d_cls + ((sq + 1) // 2) * K
    return d_cls


def enumerate_minus_one_curves(model: HalphenModel) -> List[DivisorClass]:
    """All (-1)-curves, one per lattice point of ``Delta(delta)``."""
    if model.configuration.rank != 8:
        raise UnsupportedConfiguration("lifting needs a rank-8 configuration")
    out = []
    for e in enumerate_points(model.q_matrix, model.delta):
        d = lift_point(model, e)
        if not is_minus_one_class(d) or tuple(intersect(d, c) for c in model.neg2_curves) != tuple(e):
            raise ModelError(f"lift {d} of {e} fails the (-1)-class postcondition")
        out.append(d)
    return out


# ---------------------------------------------------------------------------
# index-m structures


@dataclass(frozen=True)
class ExtData:
    m: int
    group_of_classes: FiniteAbelianGroup

    @property
    def size(self) -> int:
        return self.group_of_classes.order


def ext_classes(quotient: FiniteAbelianGroup, m: int) -> ExtData:
    """``Ext^1(quotient, Z/m)``, computed factor by factor."""
    if m < 1:
        raise ValueError("m must be positive")
    return ExtData(m, FiniteAbelianGroup(tuple(gcd(d, m) for d in quotient.factors)))


def extension_group(q: GradingMatrix, delta: ClassGroupElement) -> Tuple[int, ...]:
    """Invariant factors of the torsion of ``Cl / <delta>``.

    Dually this is the group ``K^perp / span(curves)`` of the surface, an
    extension of ``E8/Lambda`` by ``Z/m``.
    """
    delta = q.check_delta(delta)
    r, k = q.free_rank, len(q.torsion)
    rels = []
    for i, mod in enumerate(q.moduli):
        row = [0] * (r + k)
        row[r + i] = mod
        rels.append(row)
    rels.append(list(delta.free) + list(delta.torsion))
    return tuple(d for d in invariant_factors(rels) if d > 1)


@dataclass(frozen=True)
class TwistCount:
    torsion: Tuple[int, ...]
    count: int
    extension: Tuple[int, ...]
    realizable: bool

    def to_json(self) -> dict:
        return {
            "torsion": list(self.torsion),
            "count": self.count,
            "extension": list(self.extension),
            "realizable": self.realizable,
        }


def counts_by_twist(type13: str, m: int, multiple_fiber: Optional[int] = None) -> Dict[Tuple[int, ...], TwistCount]:
    """Point counts of every torsion twist of the index-``m`` degree.

    A twist is flagged unrealizable when its extension group needs more
    than two generators (it cannot sit inside an elliptic curve).
    """
    q = appendix_grading(type13)
    cfg = appendix_configuration(type13)
    free = delta_free_part(cfg, m, multiple_fiber)
    out = {}
    for t in q.torsion_twists():
        delta = ClassGroupElement(free, t)
        ext = extension_group(q, delta)
        out[t] = TwistCount(t, count(q, delta), ext, len(ext) <= 2)
    return out


def realizable_counts(type13: str, m: int = 2, multiple_fiber: Optional[int] = None) -> List[int]:
    return sorted({tc.count for tc in counts_by_twist(type13, m, multiple_fiber).values() if tc.realizable})


def table1_sequence(type13: str) -> CharacteristicSequence:
    """The characteristic sequence listed for a lattice type in the fixtures."""
    cfg = appendix_configuration(type13)
    entry = load_fixture("table1.json")["sequences"][str(cfg)]
    return CharacteristicSequence.from_strings(entry["group"], entry["sequence"])
