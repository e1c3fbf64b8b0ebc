"""Iwahori orbits of orthogonal and symplectic groups on affine flag varieties.

Matrices live over ``K((t))`` with ``K`` the Gaussian rationals (exact backend)
or complex floats (approximate backend).  The orbit of ``g`` is read off from
``h = g^T g`` (orthogonal) or ``h = g^T J g`` (symplectic) by Iwahori
congruence, which ends on a decorated monomial matrix whose pattern is an
affine permutation.
"""

from .affperm import AffinePermutation, DecoratedMonomial, Membership, classify_membership
from .coeff import APPROX, EXACT, get_field
from .enumerate import EnumSpec, IndexingSet, enum_indexing_set
from .errors import AffineOrbitError, PrecisionExhausted
from .laurent import LaurentSeries, working_precision
from .linalg import Residual, SeriesMatrix, congruence, residual
from .orbits_on import build_gw_On, classify_On, reduce_symmetric
from .orbits_so import Sign, build_gw_SOn, classify_SOn, reduce_symmetric_sl
from .orbits_sp import build_gw_Sp, classify_Sp, reduce_skew, sigma_w

__version__ = "0.1.0"

__all__ = [
    "APPROX", "EXACT", "AffineOrbitError", "AffinePermutation", "DecoratedMonomial", "EnumSpec",
    "IndexingSet", "LaurentSeries", "Membership", "PrecisionExhausted", "Residual",
    "SeriesMatrix", "Sign", "build_gw_On", "build_gw_SOn", "build_gw_Sp", "classify_On",
    "classify_SOn", "classify_Sp", "classify_membership", "congruence", "enum_indexing_set",
    "get_field", "reduce_skew", "reduce_symmetric", "reduce_symmetric_sl", "residual",
    "sigma_w", "working_precision",
]
