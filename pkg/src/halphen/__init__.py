"""Counting (-1)-curves on minimal rational elliptic surfaces.

The number of (-1)-curves of such a surface equals the number of lattice
points of a Riemann-Roch polytope of one of thirteen Fano toric varieties.
This package builds the grading matrices of those varieties, counts and
enumerates the lattice points, and reconstructs explicit surface models
from characteristic sequences of points on a plane cubic.
"""

from halphen.picard import K, DivisorClass, intersect, e8_project, is_root, is_minus_one_class
from halphen.roots import (
    AdeType,
    FiberConfiguration,
    GradingMatrix,
    ClassGroup,
    ClassGroupElement,
    appendix_grading,
    delta_free_part,
    grading_from_embedding,
    marks,
    torsion_elements,
)
from halphen.polytope import count, enumerate_points
from halphen.hilbert import coefficient, series_table
from halphen.surface import (
    CharacteristicSequence,
    FiniteAbelianGroup,
    HalphenModel,
    alpha,
    counts_by_twist,
    delta_from_model,
    enumerate_minus_one_curves,
    ext_classes,
    halphen_index,
    reconstruct_neg2_curves,
)

__version__ = "0.1.0"
