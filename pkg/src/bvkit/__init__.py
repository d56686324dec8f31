"""bvkit: exact-arithmetic workbench for finite-dimensional L-infinity
algebras with shifted symplectic and homotopy Poisson structures."""

from .errors import InputError, StructureError
from .graded import (GradedVectorSpace, MultilinearMap, koszul_sign, symmetrize,
                     insert, symmetric_closure, identity_map, vector)

__all__ = [
    "InputError", "StructureError",
    "GradedVectorSpace", "MultilinearMap", "koszul_sign", "symmetrize",
    "insert", "symmetric_closure", "identity_map", "vector",
]
