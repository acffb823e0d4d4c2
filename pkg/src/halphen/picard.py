"""The Picard lattice of the plane blown up at nine points.

Classes are written ``c0*L + c1*E1 + ... + c9*E9``; the intersection form is
``diag(1, -1, ..., -1)`` and the canonical class is ``K = -3L + E1 + ... + E9``.

``K`` is isotropic, and ``K^perp / <K>`` is the negative definite E8 lattice.
We fix the root basis

    r1 = L - E1 - E2 - E3,  r2 = E1 - E2,  r3 = E2 - E3,  ...,  r8 = E7 - E8

of a unimodular E8 copy inside ``K^perp``, so that ``K^perp = span(r) + Z*K``
and the quotient map is a single integer matrix.
"""

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from halphen.linalg import integer_inverse, matvec

RANK = 10


@dataclass(frozen=True, order=True)
class DivisorClass:
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        if len(coeffs) != RANK:
            raise ValueError(f"a divisor class needs {RANK} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_multiplicities(cls, degree: int, mults: Sequence[int]) -> "DivisorClass":
        """The class ``degree*L - sum(m_i * E_i)``."""
        if len(mults) != 9:
            raise ValueError("expected nine multiplicities")
        return cls((degree,) + tuple(-m for m in mults))

    @property
    def degree(self) -> int:
        return self.coeffs[0]

    @property
    def multiplicities(self) -> Tuple[int, ...]:
        return tuple(-c for c in self.coeffs[1:])

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(tuple(-a for a in self.coeffs))

    def __mul__(self, k: int) -> "DivisorClass":
        return DivisorClass(tuple(k * a for a in self.coeffs))

    __rmul__ = __mul__

    def __str__(self) -> str:
        return f"({self.degree}; {','.join(str(m) for m in self.multiplicities)})"

    def to_json(self) -> List[int]:
        return list(self.coeffs)

    @classmethod
    def from_json(cls, data: Iterable[int]) -> "DivisorClass":
        return cls(tuple(data))


def _unit(i: int) -> DivisorClass:
    return DivisorClass(tuple(int(j == i) for j in range(RANK)))


L = _unit(0)
E = (None,) + tuple(_unit(i) for i in range(1, RANK))  # E[1]..E[9]
K = DivisorClass((-3,) + (1,) * 9)
ZERO = DivisorClass((0,) * RANK)


def intersect(a: DivisorClass, b: DivisorClass) -> int:
    x, y = a.coeffs, b.coeffs
    return x[0] * y[0] - sum(x[i] * y[i] for i in range(1, RANK))


def is_root(c: DivisorClass) -> bool:
    return intersect(c, c) == -2 and intersect(c, K) == 0


def is_minus_one_class(c: DivisorClass) -> bool:
    return intersect(c, c) == -1 and intersect(c, K) == -1


E8_BASIS: Tuple[DivisorClass, ...] = (L - E[1] - E[2] - E[3],) + tuple(
    E[i] - E[i + 1] for i in range(1, 8)
)

# Gram matrix of the basis: the negated E8 Cartan matrix.
E8_GRAM: List[List[int]] = [[intersect(a, b) for b in E8_BASIS] for a in E8_BASIS]
_E8_GRAM_INV = integer_inverse(E8_GRAM)


@dataclass(frozen=True, order=True)
class E8Class:
    coords: Tuple[int, ...]

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        if len(coords) != 8:
            raise ValueError("an E8 class needs 8 coordinates")
        object.__setattr__(self, "coords", coords)

    def __add__(self, other: "E8Class") -> "E8Class":
        return E8Class(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "E8Class":
        return E8Class(tuple(-a for a in self.coords))


def gram(x: E8Class, y: E8Class) -> int:
    """The (negative definite) E8 pairing in root-basis coordinates."""
    return sum(x.coords[i] * E8_GRAM[i][j] * y.coords[j] for i in range(8) for j in range(8))


def e8_project(c: DivisorClass) -> E8Class:
    """The quotient map ``K^perp -> K^perp/<K>``, in root-basis coordinates."""
    if intersect(c, K) != 0:
        raise ValueError(f"{c} is not orthogonal to K")
    pairings = [intersect(c, r) for r in E8_BASIS]
    return E8Class(tuple(matvec(_E8_GRAM_INV, pairings)))


def e8_lift(x: E8Class) -> DivisorClass:
    """The section of ``e8_project`` whose image is the span of the root basis."""
    out = ZERO
    for coef, r in zip(x.coords, E8_BASIS):
        out = out + coef * r
    return out


def e8_root_classes() -> List[DivisorClass]:
    """One Picard representative for each of the 240 roots of E8.

    The roots are the images of ``E_i - E_j`` (i != j) and of
    ``+-(L - E_i - E_j - E_k)``.
    """
    out = [E[i] - E[j] for i in range(1, 10) for j in range(1, 10) if i != j]
    for i in range(1, 10):
        for j in range(i + 1, 10):
            for k in range(j + 1, 10):
                c = L - E[i] - E[j] - E[k]
                out.extend([c, -c])
    return out
