"""ADE root data, affine marks, grading matrices and class groups.

Node ordering for the affine diagrams (affine node is always node 0):

* ``A_n``: cycle ``0-1-2-...-n-0`` (for ``A_1`` the two nodes meet twice).
* ``D_n``: chain ``1-2-...-(n-2)`` with ``n-1`` and ``n`` attached to ``n-2``
  and ``0`` attached to ``2``.
* ``E_6``: chain ``1-3-4-5-6``, ``2`` on ``4``, ``0`` on ``2``.
* ``E_7``: chain ``1-3-4-5-6-7``, ``2`` on ``4``, ``0`` on ``1``.
* ``E_8``: chain ``1-3-4-5-6-7-8``, ``2`` on ``4``, ``0`` on ``8``.

The appendix lists the nodes of each block in a different order;
``APPENDIX_NODE_ORDER`` records, per type, which of our nodes sits in each
appendix column.
"""

import itertools
import json
import os
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from math import gcd
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from halphen.linalg import (
    invariant_factors,
    primitive_kernel_vector,
    smith_normal_form,
    transpose,
)


class UnsupportedConfiguration(ValueError):
    """The configuration is outside the rank-8 scope handled here."""


# ---------------------------------------------------------------------------
# ADE types


@dataclass(frozen=True, order=True)
class AdeType:
    family: str
    rank: int

    def __post_init__(self):
        ok = (
            (self.family == "A" and self.rank >= 1)
            or (self.family == "D" and self.rank >= 4)
            or (self.family == "E" and self.rank in (6, 7, 8))
        )
        if not ok:
            raise ValueError(f"no ADE type {self.family}{self.rank}")

    @classmethod
    def parse(cls, name: str) -> "AdeType":
        m = re.fullmatch(r"\s*([ADE])_?(\d+)\s*", name)
        if not m:
            raise ValueError(f"cannot parse ADE type {name!r}")
        return cls(m.group(1), int(m.group(2)))

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"

    def affine_edges(self) -> List[Tuple[int, int]]:
        n = self.rank
        if self.family == "A":
            if n == 1:
                return [(0, 1), (0, 1)]
            return [(i, i + 1) for i in range(n)] + [(n, 0)]
        if self.family == "D":
            return [(i, i + 1) for i in range(1, n - 2)] + [(n - 2, n - 1), (n - 2, n), (0, 2)]
        chain = {6: [1, 3, 4, 5, 6], 7: [1, 3, 4, 5, 6, 7], 8: [1, 3, 4, 5, 6, 7, 8]}[n]
        affine_neighbour = {6: 2, 7: 1, 8: 8}[n]
        return list(zip(chain, chain[1:])) + [(2, 4), (0, affine_neighbour)]

    def extended_cartan(self) -> List[List[int]]:
        size = self.rank + 1
        c = [[2 * int(i == j) for j in range(size)] for i in range(size)]
        for i, j in self.affine_edges():
            c[i][j] -= 1
            c[j][i] -= 1
        return c

    def cartan(self) -> List[List[int]]:
        return [row[1:] for row in self.extended_cartan()[1:]]


def marks(t: AdeType) -> Tuple[int, ...]:
    """Affine marks: the primitive positive kernel vector of the extended Cartan matrix."""
    return _marks(t)


@lru_cache(maxsize=None)
def _marks(t: AdeType) -> Tuple[int, ...]:
    vec = primitive_kernel_vector(t.extended_cartan())
    if vec[0] != 1 or min(vec) <= 0:
        raise AssertionError(f"unexpected marks {vec} for {t}")
    return tuple(vec)


# appendix column k of a block of this type is our node APPENDIX_NODE_ORDER[t][k]
APPENDIX_NODE_ORDER: Dict[str, Tuple[int, ...]] = {
    "E8": (0, 8, 7, 6, 5, 4, 3, 2, 1),
    "E7": (0, 1, 3, 4, 5, 6, 7, 2),
    "E6": (1, 3, 4, 5, 6, 2, 0),
    "D8": (0, 1, 7, 8, 2, 3, 4, 5, 6),
    "D6": (0, 1, 5, 6, 2, 3, 4),
    "D5": (0, 1, 4, 5, 2, 3),
    "D4": (0, 1, 3, 4, 2),
}


def appendix_node_order(t: AdeType) -> Tuple[int, ...]:
    return APPENDIX_NODE_ORDER.get(str(t), tuple(range(t.rank + 1)))


@dataclass(frozen=True)
class FiberConfiguration:
    components: Tuple[AdeType, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if self.rank > 8:
            raise ValueError(f"total rank {self.rank} exceeds 8")

    @classmethod
    def parse(cls, name: str) -> "FiberConfiguration":
        comps = []
        for part in name.replace(" ", "").split("+"):
            m = re.fullmatch(r"(\d*)([ADE]_?\d+)", part)
            if not m:
                raise ValueError(f"cannot parse configuration {name!r}")
            comps.extend([AdeType.parse(m.group(2))] * int(m.group(1) or 1))
        return cls(tuple(comps))

    @property
    def rank(self) -> int:
        return sum(c.rank for c in self.components)

    @property
    def num_curves(self) -> int:
        return sum(c.rank + 1 for c in self.components)

    def __str__(self) -> str:
        parts = []
        for t, grp in itertools.groupby(self.components):
            n = len(list(grp))
            parts.append(f"{n if n > 1 else ''}{t}")
        return "+".join(parts)


def canonical_component_key(t: AdeType) -> Tuple[int, int]:
    """Sort key putting E before D before A, larger rank first."""
    return ("EDA".index(t.family), -t.rank)


TYPES13 = (
    "E8", "D8", "A8", "E7+A1", "E6+A2", "A7+A1", "D5+A3",
    "2A4", "2D4", "A5+A2+A1", "D6+2A1", "2A3+2A1", "4A2",
)


def delta_free_part(cfg: FiberConfiguration, m: int, multiple_fiber: Optional[int] = None) -> Tuple[int, ...]:
    """Free part of the class of a (-1)-curve.

    ``m`` in every slot, except that the slot of the multiple fiber (1-based
    component index, if it is reducible) holds 1.
    """
    if m < 1:
        raise ValueError("the index must be positive")
    out = [m] * len(cfg.components)
    if multiple_fiber is not None:
        if not 1 <= multiple_fiber <= len(out):
            raise ValueError(f"multiple fiber index {multiple_fiber} out of range")
        out[multiple_fiber - 1] = 1
    return tuple(out)


# ---------------------------------------------------------------------------
# class groups


@dataclass(frozen=True)
class ClassGroup:
    free_rank: int
    invariant_factors: Tuple[int, ...] = ()

    def __post_init__(self):
        facs = tuple(self.invariant_factors)
        if any(d < 2 for d in facs) or any(b % a for a, b in zip(facs, facs[1:])):
            raise ValueError(f"bad invariant factors {facs}")
        object.__setattr__(self, "invariant_factors", facs)

    @property
    def torsion_order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " + ".join(parts) or "0"


def normalize_factors(moduli: Sequence[int]) -> Tuple[int, ...]:
    """Invariant factors (all >= 2) of a product of cyclic groups."""
    if not moduli:
        return ()
    diag = [[d if i == j else 0 for j in range(len(moduli))] for i, d in enumerate(moduli)]
    return tuple(d for d in invariant_factors(diag) if d > 1)


@dataclass(frozen=True, order=True)
class ClassGroupElement:
    free: Tuple[int, ...]
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "free", tuple(int(x) for x in self.free))
        object.__setattr__(self, "torsion", tuple(int(x) for x in self.torsion))

    def to_json(self) -> dict:
        return {"free": list(self.free), "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data: dict) -> "ClassGroupElement":
        return cls(tuple(data["free"]), tuple(data.get("torsion", ())))

    def __str__(self) -> str:
        tors = "".join(f" {t}bar" for t in self.torsion)
        return f"({','.join(map(str, self.free))}){tors}"


def torsion_elements(g) -> List[Tuple[int, ...]]:
    """All residue vectors of the torsion part, in lexicographic order.

    ``g`` is a ClassGroup (residues per invariant factor) or a GradingMatrix
    (residues per torsion row).
    """
    moduli = g.moduli if isinstance(g, GradingMatrix) else g.invariant_factors
    return list(itertools.product(*(range(d) for d in moduli)))


# ---------------------------------------------------------------------------
# grading matrices


@dataclass(frozen=True)
class GradingMatrix:
    """The class map ``E -> Z^r + T`` of a toric variety.

    ``free_rows`` is block diagonal with the affine marks of component ``i``
    in block ``i``; ``torsion`` holds ``(modulus, residue row)`` pairs.
    Torsion coordinates of a ClassGroupElement follow the order of these rows.
    """

    free_rows: Tuple[Tuple[int, ...], ...]
    torsion: Tuple[Tuple[int, Tuple[int, ...]], ...] = ()
    blocks: Tuple[Tuple[int, ...], ...] = field(default=None)

    def __post_init__(self):
        free = tuple(tuple(int(x) for x in row) for row in self.free_rows)
        if not free:
            raise ValueError("a grading matrix needs at least one free row")
        s = len(free[0])
        if any(len(row) != s for row in free):
            raise ValueError("ragged free rows")
        tors = []
        for mod, row in self.torsion:
            mod = int(mod)
            if mod < 2 or len(row) != s:
                raise ValueError(f"bad torsion row mod {mod}")
            tors.append((mod, tuple(int(x) % mod for x in row)))
        derived = tuple(
            tuple(j for j in range(s) if free[i][j] != 0) for i in range(len(free))
        )
        for j in range(s):
            nonzero = [row[j] for row in free if row[j] != 0]
            if len(nonzero) != 1 or nonzero[0] < 1:
                raise ValueError(f"column {j} must have exactly one positive free entry")
        if self.blocks is not None:
            given = tuple(tuple(b) for b in self.blocks)
            if given != derived:
                raise ValueError(f"blocks {given} do not match the free rows {derived}")
        object.__setattr__(self, "free_rows", free)
        object.__setattr__(self, "torsion", tuple(tors))
        object.__setattr__(self, "blocks", derived)

    @property
    def num_columns(self) -> int:
        return len(self.free_rows[0])

    @property
    def free_rank(self) -> int:
        return len(self.free_rows)

    @property
    def moduli(self) -> Tuple[int, ...]:
        return tuple(mod for mod, _ in self.torsion)

    @property
    def class_group(self) -> ClassGroup:
        return ClassGroup(self.free_rank, normalize_factors(self.moduli))

    def block_marks(self, i: int) -> Tuple[int, ...]:
        return tuple(self.free_rows[i][j] for j in self.blocks[i])

    def degree(self, j: int) -> ClassGroupElement:
        return ClassGroupElement(
            tuple(row[j] for row in self.free_rows),
            tuple(row[j] for _, row in self.torsion),
        )

    def apply(self, e: Sequence[int]) -> ClassGroupElement:
        if len(e) != self.num_columns:
            raise ValueError("vector length does not match the number of columns")
        return ClassGroupElement(
            tuple(sum(a * x for a, x in zip(row, e)) for row in self.free_rows),
            tuple(sum(a * x for a, x in zip(row, e)) % mod for mod, row in self.torsion),
        )

    def check_delta(self, delta: ClassGroupElement) -> ClassGroupElement:
        """Validate the shape of ``delta`` and reduce its torsion residues."""
        if len(delta.free) != self.free_rank or len(delta.torsion) != len(self.torsion):
            raise ValueError(
                f"degree {delta} does not fit a class group with free rank "
                f"{self.free_rank} and {len(self.torsion)} torsion rows"
            )
        return ClassGroupElement(delta.free, tuple(t % m for t, m in zip(delta.torsion, self.moduli)))

    def torsion_twists(self) -> List[Tuple[int, ...]]:
        return torsion_elements(self)

    def without_torsion(self) -> "GradingMatrix":
        return GradingMatrix(self.free_rows)

    def to_json(self) -> dict:
        return {
            "free": [list(r) for r in self.free_rows],
            "torsion": [{"mod": m, "row": list(r)} for m, r in self.torsion],
            "blocks": [list(b) for b in self.blocks],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GradingMatrix":
        return cls(
            tuple(tuple(r) for r in data["free"]),
            tuple((t["mod"], tuple(t["row"])) for t in data.get("torsion", [])),
            tuple(tuple(b) for b in data["blocks"]) if "blocks" in data else None,
        )


# ---------------------------------------------------------------------------
# appendix fixtures


def fixture_dir() -> Path:
    override = os.environ.get("HALPHEN_FIXTURES")
    if override:
        return Path(override)
    return Path(str(resources.files("halphen") / "data" / "fixtures"))


def load_fixture(name: str):
    with open(fixture_dir() / name, encoding="utf-8") as fh:
        return json.load(fh)


def appendix_grading(name: str) -> GradingMatrix:
    """One of the 13 grading matrices, as transcribed into the fixture file."""
    data = load_fixture("gradings.json")["gradings"]
    key = str(FiberConfiguration.parse(name)) if name not in data else name
    if key not in data:
        raise KeyError(f"unknown type {name!r}; expected one of {', '.join(TYPES13)}")
    return GradingMatrix.from_json(data[key])


def appendix_configuration(name: str) -> FiberConfiguration:
    cfg = FiberConfiguration.parse(name)
    if str(cfg) not in TYPES13:
        raise KeyError(f"unknown type {name!r}; expected one of {', '.join(TYPES13)}")
    return cfg


# ---------------------------------------------------------------------------
# recomputation from an embedding


@dataclass(frozen=True)
class CokernelPresentation:
    """Smith data of ``P^T`` where the columns of ``P`` are the embedded roots."""

    u: Tuple[Tuple[int, ...], ...]
    diag: Tuple[int, ...]
    v: Tuple[Tuple[int, ...], ...]


def _connected_blocks(adjacent, s: int) -> List[List[int]]:
    seen = set()
    blocks = []
    for start in range(s):
        if start in seen:
            continue
        stack, comp = [start], []
        seen.add(start)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(s):
                if j not in seen and adjacent(i, j):
                    seen.add(j)
                    stack.append(j)
        blocks.append(sorted(comp))
    return blocks


def cokernel_presentation(cl_matrix: Sequence[Sequence[int]]) -> CokernelPresentation:
    pt = transpose(cl_matrix)
    u, d, v = smith_normal_form(pt)
    diag = tuple(d[i][i] for i in range(min(len(d), len(d[0]))))
    return CokernelPresentation(tuple(map(tuple, u)), diag, tuple(map(tuple, v)))


def grading_from_embedding(cl_matrix: Sequence[Sequence[int]]) -> Tuple[GradingMatrix, ClassGroup]:
    """Grading matrix of the cokernel of ``P^T``.

    ``cl_matrix`` is 8 x s: column j holds the root-basis coordinates of the
    j-th (-2)-class.  Free rows are the affine marks of each connected
    component; torsion rows come from the Smith normal form of ``P^T``.
    """
    from halphen.picard import E8_GRAM

    p = [list(row) for row in cl_matrix]
    if len(p) != 8:
        raise ValueError("expected 8 rows (root-basis coordinates)")
    s = len(p[0])
    if len(invariant_factors(p)) < 8:
        raise UnsupportedConfiguration("the roots do not span a rank-8 lattice")
    cols = transpose(p)

    def pairing(i, j):
        return sum(cols[i][a] * E8_GRAM[a][b] * cols[j][b] for a in range(8) for b in range(8))

    blocks = _connected_blocks(lambda i, j: pairing(i, j) != 0, s)
    free_rows = []
    for block in blocks:
        sub = [[row[j] for j in block] for row in p]
        try:
            vec = primitive_kernel_vector(sub)
        except ValueError as exc:
            raise UnsupportedConfiguration(f"block {block}: {exc}") from None
        if min(vec) <= 0:
            raise UnsupportedConfiguration(f"block {block} has a non-positive relation {vec}")
        row = [0] * s
        for j, x in zip(block, vec):
            row[j] = x
        free_rows.append(tuple(row))

    pres = cokernel_presentation(p)
    torsion = tuple(
        (d, tuple(x % d for x in pres.u[i])) for i, d in enumerate(pres.diag) if d > 1
    )
    q = GradingMatrix(tuple(free_rows), torsion)
    return q, q.class_group
